//! WebAssembly bindings for the static demo page in `www/`.

use indratio::certify;
use indratio::exponent::{self, ProofConstants};
use indratio::graph;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// `h₁(χ, ζ)` along `ζ ∈ [0, 1/2 − χ]`, flattened as `ζ, ξ₁, h` triples.
#[wasm_bindgen]
pub fn h1_profile(chi: f64, samples: usize) -> Vec<f64> {
    let k = ProofConstants::default();
    exponent::h1_profile(&k, chi, samples.clamp(2, 4000))
        .into_iter()
        .flat_map(|(z, x, h)| [z, x, h])
        .collect()
}

/// The value-table rows as JSON: `k`, table, computed `M` enclosure, printed
/// `M` and verdict.
#[wasm_bindgen]
pub fn table_rows() -> String {
    let report = certify::certify_default();
    let rows: Vec<_> = report
        .tables
        .iter()
        .map(|r| {
            let m = r.cells[5].computed;
            json!({
                "k": r.k,
                "table": r.table,
                "m_lo": m.lo,
                "m_hi": m.hi,
                "printed": r.cells[5].printed,
                "pass": r.pass,
            })
        })
        .collect();
    json!({ "rows": rows, "final_h_max": report.final_bound.enclosure.hi, "pass": report.pass }).to_string()
}

/// Girth-survival estimate as JSON, or `{"error": ...}` for bad input.
#[wasm_bindgen]
pub fn survival(n: usize, girth: u32, trials: u32, seed: u64) -> String {
    let est = match graph::estimate_survival(n, girth, u64::from(trials.min(20_000)), seed) {
        Ok(e) => e,
        Err(e) => return json!({ "error": e.to_string() }).to_string(),
    };
    let limit = graph::girth_survival(girth).unwrap_or(f64::NAN);
    json!({
        "hits": est.hits,
        "trials": est.trials,
        "fraction": est.fraction,
        "stderr": est.stderr,
        "limit": limit,
        "within_3_stderr": est.within(limit, 3.0),
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_is_flat_triples_below_one() {
        let p = h1_profile(0.454, 50);
        assert_eq!(p.len(), 150);
        assert!(p.chunks(3).all(|t| t[2] < 1.0));
    }

    #[test]
    fn rows_cover_both_tables() {
        let v: serde_json::Value = serde_json::from_str(&table_rows()).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 45);
        assert_eq!(v["pass"], true);
    }

    #[test]
    fn survival_reports_errors_as_json() {
        let v: serde_json::Value = serde_json::from_str(&survival(3, 3, 10, 1)).unwrap();
        assert!(v["error"].is_string());
        let v: serde_json::Value = serde_json::from_str(&survival(200, 3, 400, 1)).unwrap();
        assert!(v["fraction"].as_f64().unwrap() > 0.05);
    }
}
