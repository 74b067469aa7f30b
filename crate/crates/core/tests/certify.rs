mod common;

use indratio::certify::{self, CertificateReport, Relation};
use indratio::exponent::{Literal, ProofConstants, Real, Slice};
use indratio::Interval;
use proptest::prelude::*;
use std::sync::OnceLock;

use common::{oracle, tiny, Fx};

fn report() -> &'static CertificateReport {
    static R: OnceLock<CertificateReport> = OnceLock::new();
    R.get_or_init(certify::certify_default)
}

fn pt(x: f64) -> Interval {
    Interval::point(x)
}

fn inside(v: &Fx, e: Interval, slack: u32) -> bool {
    v.inside(e.lo(), e.hi(), &tiny(slack))
}

/// A point of the open domain: χ in (0.454, 0.45537], ζ and ξ strictly
/// inside their ranges.
fn domain_point() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.454f64..=0.45537, 0.001f64..0.999, 0.001f64..0.999).prop_map(|(chi, a, b)| {
        let chi = chi.max(0.4540001);
        let zeta = a * (0.5 - chi);
        let xi = b * (1.0 - 2.0 * chi - 2.0 * zeta);
        (chi, zeta, xi)
    })
}

fn slice_zeta() -> impl Strategy<Value = f64> {
    0.0001f64..0.0459
}

/// The factors of `f` that depend on `ζ` nonlinearly, without the two
/// whose bases vanish at the slice end: `(1 − 2χ − 2ζ)` and `(1/2 − χ − ζ)`.
/// Its second `ζ`-derivative is `A₄`.
fn oracle_a4_part(chi: &Fx, zeta: &Fx) -> Fx {
    let lin = |a: &str, kc: i64, kz: i64| Fx::dec(a) + Fx::int(kc) * chi.clone() + Fx::int(kz) * zeta.clone();
    lin("1", -2, 4).xlogx() + lin("-1.5", 6, 3).xlogx() + lin("-1.5", 6, -9).xlogx()
        - lin("-0.5", 2, 1).xlogx()
        - lin("0.5", -1, 2).xlogx()
        - lin("-0.5", 2, -3).xlogx()
}

#[test]
fn table_cells_contain_oracle_values() {
    let chi0 = Fx::dec("0.454");
    let xi1 = |z: &Fx| oracle::xi1(&chi0, z);
    let z1 = |z: &Fx| Fx::dec("0.092") + Fx::int(4) * z.clone() - xi1(z);
    let z2 = |z: &Fx| Fx::dec("1.04") - Fx::int(5) * z.clone() + xi1(z);
    let a4 = |z: &Fx| oracle::d2(&|t: &Fx| oracle_a4_part(&chi0, t), z, 15);
    for row in report().tables.iter().step_by(4) {
        let left = Fx::ratio(row.k as i64, 1000);
        let right = Fx::ratio(row.k as i64 + 1, 1000);
        let xd = oracle::d1(&xi1, &left, 20);
        let sq = |t: Fx| t.clone() * t;
        let expected = [
            a4(if row.table == 1 { &left } else { &right }),
            -z1(&left).ln(),
            z2(&left).ln(),
            -(sq(xd.clone() - Fx::int(4)) / z1(&right)),
            -(sq(xd - Fx::int(5)) / z2(&left)),
        ];
        for (col, want) in expected.iter().enumerate() {
            let got = row.cells[col].computed.interval();
            assert!(inside(want, got, 18), "k={} col={col}: {} vs {got:?}", row.k, want.to_f64());
        }
    }
}

#[test]
fn printed_tables_reproduce_under_the_documented_rule() {
    let r = report();
    assert_eq!(r.tables.len(), 45);
    let strict = r.tables.iter().flat_map(|t| &t.cells[..5]).filter(|c| c.within_tolerance).count();
    assert_eq!(strict, 218);
    for row in &r.tables {
        assert!(row.pass && row.m_below_20, "row {}", row.k);
        for c in &row.cells[..5] {
            if !c.within_tolerance {
                let decimals = c.printed.split_once('.').map_or(0, |(_, f)| f.len());
                assert!(decimals < 4, "row {} {}: {}", row.k, c.column, c.printed);
                assert!(c.computed.hi <= c.printed.parse::<f64>().unwrap());
            }
        }
    }
}

#[test]
fn every_constant_is_load_bearing() {
    let step = Literal::new(1, 1000);
    let minus = Literal::new(-1, 1000);
    for name in ProofConstants::NAMES {
        let flips = [step, minus].iter().any(|&d| {
            let mut k = ProofConstants::default();
            k.mutate(name, d).unwrap();
            !certify::certify(&k).pass
        });
        assert!(flips, "{name} can move by 1e-3 in either direction without failing a claim");
    }
    let mut k = ProofConstants::default();
    k.mutate("b", step).unwrap();
    assert!(!certify::certify(&k).pass);
    assert!(k.clone().mutate("nope", step).is_err());
}

#[test]
fn json_round_trip_preserves_the_report() {
    let r = report();
    let back = CertificateReport::from_json(&r.to_json()).unwrap();
    assert_eq!(&back, r);
    assert!(back.revalidate().pass);
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let claim = &json["claims"][0];
    for key in ["claim_id", "statement", "enclosure", "relation", "pass"] {
        assert!(claim.get(key).is_some(), "{key}");
    }
}

#[test]
fn revalidation_catches_tampering() {
    let mut flipped = report().clone();
    let idx = flipped.claims.iter().position(|c| c.claim_id == "xi1_d2.xi1_d2_lower").unwrap();
    flipped.claims[idx].pass = false;
    let v = flipped.revalidate();
    assert!(!v.pass);
    assert!(v.mismatches.iter().any(|m| m.contains("xi1_d2.xi1_d2_lower")));

    let mut moved = report().clone();
    moved.claims[idx].enclosure.lo = -27.5;
    assert!(!moved.revalidate().pass);

    let mut nan = report().clone();
    nan.final_bound.enclosure.hi = f64::NAN;
    let text = nan.to_json();
    let back = CertificateReport::from_json(&text).unwrap();
    assert!(back.final_bound.enclosure.hi.is_nan());
    assert!(!back.revalidate().pass);

    let mut schema = report().clone();
    schema.schema_version += 1;
    assert!(!schema.revalidate().pass);

    let mut row = report().clone();
    row.tables[3].cells[1].printed = "9.9".into();
    assert!(!row.revalidate().pass);

    assert!(CertificateReport::from_json("{\"schema_version\": 1}").is_err());
}

#[test]
fn relations_fail_on_invalid_enclosures() {
    let zero = Literal::new(0, 1);
    for r in [Relation::Lt(zero), Relation::Ge(zero), Relation::Contains(zero)] {
        assert!(!r.holds(Interval::INVALID));
    }
    assert!(Relation::Le(zero).holds(Interval::new(-1.0, 0.0)));
    assert!(!Relation::Lt(zero).holds(Interval::new(-1.0, 0.0)));
}

#[test]
fn csv_has_the_printed_layout() {
    let csv = certify::tables_csv(report());
    let blocks: Vec<&str> = csv.trim_end().split("\n\n").collect();
    assert_eq!(blocks.len(), 3);
    assert_eq!(blocks[0].lines().count(), 36);
    assert_eq!(blocks[1].lines().count(), 11);
    assert!(blocks[0].starts_with("k,A4(0.001k),-ln(z1(0.001k))"));
    assert!(blocks[1].starts_with("k,A4(0.001(k+1))"));
    assert!(blocks[2].lines().nth(1).unwrap().starts_with("35,"));
}

#[test]
fn sampled_corner_terms_stay_below_certified_maxima() {
    let k = ProofConstants::default();
    let r = report();
    let bound = |id: &str| r.claim(id).unwrap().enclosure.hi;
    let limits = [
        bound("chi_slope.b1.corner_value"),
        bound("chi_slope.b2.corner_value"),
        bound("chi_slope.b3.bound"),
        bound("chi_slope.b4.corner_value"),
        bound("chi_slope.b5.corner_value"),
        bound("chi_slope.b6.corner_value"),
    ];
    let truth = bound("chi_slope.true.negative_at_xi0");
    let n = 24;
    for a in 0..=n {
        for b in 0..=n {
            for c in 0..=n {
                let chi = 0.4540001 + (0.45537 - 0.4540001) * a as f64 / n as f64;
                let zeta = (0.5 - chi) * b as f64 / n as f64;
                let xi = (1.0 - 2.0 * chi - 2.0 * zeta) * c as f64 / n as f64 * 0.999;
                let terms = k.b_terms(pt(chi), pt(zeta), pt(xi));
                for (i, t) in terms.iter().enumerate() {
                    if t.is_valid() {
                        assert!(t.lo() <= limits[i], "B{} at ({chi},{zeta},{xi}): {t:?}", i + 1);
                    }
                }
                let d = k.dlnh_dchi(pt(chi), pt(zeta), pt(xi));
                if d.is_valid() {
                    assert!(d.lo() <= truth, "({chi},{zeta},{xi}): {d:?}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ln_h_enclosure_contains_oracle((chi, zeta, xi) in domain_point()) {
        let k = ProofConstants::default();
        let e = k.ln_h(pt(chi), pt(zeta), pt(xi));
        let want = oracle::ln_h(&Fx::from_f64(chi), &Fx::from_f64(zeta), &Fx::from_f64(xi));
        prop_assert!(inside(&want, e, 40), "{} vs {e:?}", want.to_f64());
    }

    #[test]
    fn partial_derivatives_contain_oracle((chi, zeta, xi) in domain_point()) {
        let k = ProofConstants::default();
        let (c, z, x) = (Fx::from_f64(chi), Fx::from_f64(zeta), Fx::from_f64(xi));
        let dchi = oracle::d1(&|t: &Fx| oracle::ln_h(t, &z, &x), &c, 20);
        let dzeta = oracle::d1(&|t: &Fx| oracle::ln_h(&c, t, &x), &z, 20);
        prop_assert!(inside(&dchi, k.dlnh_dchi(pt(chi), pt(zeta), pt(xi)), 25));
        prop_assert!(inside(&dzeta, k.dlnh_dzeta(pt(chi), pt(zeta), pt(xi)), 25));
    }

    #[test]
    fn stable_root_and_derivatives_contain_oracle(zeta in slice_zeta()) {
        let k = ProofConstants::default();
        let s = Slice::new(&k);
        let chi0 = Fx::dec("0.454");
        let z = Fx::from_f64(zeta);
        let xi1 = |t: &Fx| oracle::xi1(&chi0, t);
        prop_assert!(inside(&xi1(&z), s.xi1(pt(zeta)), 40));
        prop_assert!(inside(&oracle::d1(&xi1, &z, 20), s.xi1_d1(pt(zeta)), 25));
        prop_assert!(inside(&oracle::d2(&xi1, &z, 15), s.xi1_d2(pt(zeta)), 18));
        let (a, b, c) = oracle::quad(&chi0, &z);
        let p_at_root = a * xi1(&z) * xi1(&z) + b * xi1(&z) + c;
        prop_assert!(p_at_root.abs() < tiny(50));
    }

    #[test]
    fn slice_exponent_and_its_derivatives_contain_oracle(zeta in slice_zeta()) {
        let k = ProofConstants::default();
        let s = Slice::new(&k);
        let chi0 = Fx::dec("0.454");
        let z = Fx::from_f64(zeta);
        let lnh1 = |t: &Fx| oracle::ln_h1(&chi0, t);
        prop_assert!(inside(&lnh1(&z), s.ln_h1(pt(zeta)), 40));
        let d1 = oracle::d1(&lnh1, &z, 20);
        prop_assert!(inside(&d1, s.dlnh1(pt(zeta)), 25));
        let xi = s.xi1(pt(zeta));
        prop_assert!(inside(&d1, k.dlnh_dzeta(Interval::lit(k.chi0), pt(zeta), xi), 25));
        let d2 = oracle::d2(&lnh1, &z, 15);
        let got = s.d2lnh1(pt(zeta));
        prop_assert!(inside(&d2, got, 18), "{} vs {got:?}", d2.to_f64());
        let parts = s.a_terms(pt(zeta)).iter().fold(Interval::point(0.0), |acc, &t| acc + t);
        prop_assert!(parts.lo() <= got.hi() && got.lo() <= parts.hi());
    }
}
