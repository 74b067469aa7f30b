//! `indratio`: sampling, exact solving, counting and certification from the
//! command line.
//!
//! Exit codes: 0 success, 1 a claim or audit failed, 2 I/O, 3 rejection cap,
//! 4 empty `x` window, 5 search budget, 64 usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use indratio::certify::{self, CertificateReport};
use indratio::counting::{self, Mode};
use indratio::exponent::{Literal, ProofConstants};
use indratio::graph::{self, Multigraph, Pairing};
use indratio::mis;
use indratio::special;
use serde_json::json;
use thiserror::Error;

/// Seed used when `--seed` is not given; `--seed 0` draws one from the OS.
const DEFAULT_SEED: u64 = 454;

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Claim(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] indratio::Error),
    #[error("{0}")]
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        use indratio::Error as E;
        match self {
            Failure::Claim(_) => 1,
            Failure::Io(_) => 2,
            Failure::Usage(_) => 64,
            Failure::Core(e) => match e {
                E::Io(_) => 2,
                E::RejectionCap { .. } => 3,
                E::EmptyWindow { .. } => 4,
                E::Budget { .. } => 5,
                E::InvalidArgument(_) | E::Domain(_) | E::Precondition(_) | E::Parse { .. } => 64,
            },
        }
    }
}

#[derive(Parser)]
#[command(name = "indratio", version, about = "Verify the computational content of the 0.454 independence-ratio bound")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the interval certificate; exit 1 if any claim fails
    Certify(CertifyArgs),
    /// Recompute the value tables as CSV; exit 1 on a mismatch
    Tables(TablesArgs),
    /// Sample girth-conditioned pairings and audit their MAI decompositions
    Sample(SampleArgs),
    /// Evaluate the counting formula q(x, n) term by term
    Count(CountArgs),
    /// Exact independence number of a graph file
    Alpha(GraphArgs),
    /// Exact MAI decomposition and its audits for a graph file
    Mai(GraphArgs),
}

#[derive(Args)]
struct Output {
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    output: Output,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Perturb a proof constant before certifying, e.g. `b=+0.001`
    #[arg(long, value_name = "NAME=DELTA")]
    mutate: Vec<String>,
}

#[derive(Args)]
struct TablesArgs {
    #[command(flatten)]
    output: Output,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct SampleArgs {
    /// Number of vertices (even)
    #[arg(long)]
    n: usize,
    /// Girth to condition on
    #[arg(long, default_value_t = 5)]
    girth: u32,
    /// Number of samples
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Estimate the girth-survival fraction instead of auditing samples
    #[arg(long)]
    survival: bool,
    /// Rejection-sampling cap per sample
    #[arg(long, default_value_t = 1_000_000)]
    max_attempts: u64,
    #[command(flatten)]
    budget: Budget,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountMode {
    Exact,
    Log,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    n: u64,
    /// Size of the independent part; defaults to the smallest feasible x
    #[arg(long)]
    x: Option<u64>,
    /// Accept an x outside 0.454n < x <= 0.45537n
    #[arg(long)]
    unsafe_x: bool,
    #[arg(long, value_enum, default_value = "log")]
    mode: CountMode,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Budget {
    /// Node budget of the exact searches
    #[arg(long, env = "INDRATIO_BUDGET", default_value_t = mis::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list (`n m` then `u v` lines) or pairing (`n` then `u a v b` lines)
    file: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    budget: Budget,
    #[command(flatten)]
    output: Output,
}

fn emit(out: &Output, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn parse_mutation(spec: &str) -> Result<(String, Literal), Failure> {
    let (name, delta) = spec
        .split_once('=')
        .ok_or_else(|| Failure::Usage(format!("--mutate expects NAME=DELTA, got {spec:?}")))?;
    let delta = Literal::parse_decimal(delta.trim_start_matches('+'))
        .map_err(|e| Failure::Usage(format!("--mutate {spec:?}: {e}")))?;
    Ok((name.to_string(), delta))
}

fn cmd_certify(a: CertifyArgs) -> Result<(), Failure> {
    let mut k = ProofConstants::default();
    for m in &a.mutate {
        let (name, delta) = parse_mutation(m)?;
        k.mutate(&name, delta).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let report = certify::certify(&k);
    let text = match a.format {
        Format::Json => with_newline(report.to_json()),
        Format::Text => report.to_text(),
        Format::Csv => return Err(Failure::Usage("certify writes json or text".into())),
    };
    emit(&a.output, &text)?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Claim(failure_list(&report)))
    }
}

fn failure_list(report: &CertificateReport) -> String {
    let mut lines: Vec<String> = report.failures().iter().map(|c| format!("  {}: {}", c.claim_id, c.statement)).collect();
    lines.extend(report.tables.iter().filter(|r| !r.pass).map(|r| format!("  table row {}", r.k)));
    if !report.final_bound.pass {
        lines.push(format!("  {}", report.final_bound.claim_id));
    }
    format!("certificate failed:\n{}", lines.join("\n"))
}

fn cmd_tables(a: TablesArgs) -> Result<(), Failure> {
    let report = certify::certify_default();
    let text = match a.format {
        Format::Csv => certify::tables_csv(&report),
        Format::Text => certify::tables_text(&report),
        Format::Json => with_newline(serde_json::to_string_pretty(&report.tables).expect("rows serialize")),
    };
    emit(&a.output, &text)?;
    let bad: Vec<u32> = report.tables.iter().filter(|r| !r.pass).map(|r| r.k).collect();
    let case2 = report.claim("concavity.case2_total").is_some_and(|c| c.pass);
    if bad.is_empty() && case2 {
        Ok(())
    } else {
        Err(Failure::Claim(format!("table rows outside tolerance: {bad:?}; case 2 chain holds: {case2}")))
    }
}

fn resolve_seed(seed: u64) -> u64 {
    if seed == 0 {
        rand::random()
    } else {
        seed
    }
}

fn cmd_sample(a: SampleArgs) -> Result<(), Failure> {
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    if a.girth < 3 {
        return Err(Failure::Usage("--girth must be at least 3".into()));
    }
    let seed = resolve_seed(a.seed);
    if a.survival {
        let est = graph::estimate_survival(a.n, a.girth, a.trials, seed)?;
        let limit = graph::girth_survival(a.girth)?;
        let within = est.within(limit, 3.0);
        let line = json!({
            "artifact_version": indratio::ARTIFACT_VERSION,
            "n": a.n, "girth": a.girth, "trials": a.trials, "seed": seed,
            "hits": est.hits, "fraction": est.fraction, "stderr": est.stderr,
            "limit": limit, "within_3_stderr": within,
        });
        emit(&a.output, &format!("{line}\n"))?;
        return if within {
            Ok(())
        } else {
            Err(Failure::Claim(format!("survival fraction {} is more than 3 standard errors from {limit}", est.fraction)))
        };
    }
    let mut lines = String::new();
    let mut violations = 0usize;
    let mut draws = 0u64;
    for t in 0..a.trials {
        let (f, used) = graph::sample_with_girth(a.n, a.girth, seed.wrapping_add(t), a.max_attempts)?;
        draws += used;
        let g = graph::project(&f);
        let aw = mis::alpha_exact_with_budget(&g, a.budget.budget)?;
        let mut line = json!({ "trial": t, "attempts": used, "alpha": aw.alpha });
        if g.is_simple() && a.girth >= 5 {
            let d = mis::mai_exact_with_budget(&g, &aw, a.budget.budget)?;
            let audit = mis::audit_decomposition(&g, &d);
            let m = mis::mai_multiplicity_check(&g, &d, a.budget.budget)?;
            let multiplicity_ok = m.found >= m.count_lower && m.weight_bound != Some(false);
            let failed: Vec<&str> = audit.failures().map(|e| e.lemma_id.as_str()).collect();
            violations += failed.len() + usize::from(!multiplicity_ok);
            line["mai"] = json!({ "size": d.a.len(), "x": d.x, "i": d.i, "s": d.s, "t": d.t, "j": d.j.len() });
            line["audit"] = serde_json::to_value(&audit.entries).expect("audit serializes");
            line["multiplicity"] = serde_json::to_value(&m).expect("check serializes");
            line["multiplicity_ok"] = json!(multiplicity_ok);
            line["violations"] = json!(failed);
        }
        lines.push_str(&format!("{line}\n"));
    }
    let summary = json!({
        "summary": true,
        "artifact_version": indratio::ARTIFACT_VERSION,
        "n": a.n, "girth": a.girth, "trials": a.trials, "seed": seed,
        "draws": draws, "violations": violations,
    });
    lines.push_str(&format!("{summary}\n"));
    emit(&a.output, &lines)?;
    if violations == 0 {
        Ok(())
    } else {
        Err(Failure::Claim(format!("{violations} audit violations")))
    }
}

fn cmd_count(a: CountArgs) -> Result<(), Failure> {
    let n = a.n;
    if n == 0 || n % 2 == 1 {
        return Err(Failure::Usage(format!("--n must be even and positive, got {n}")));
    }
    let feasible = counting::feasible_x(n);
    let x = match a.x {
        Some(x) => x,
        None => *feasible.first().ok_or_else(|| counting::empty_window(n))?,
    };
    let in_window = counting::in_window(n, x);
    if !in_window && !a.unsafe_x {
        return Err(if feasible.is_empty() {
            counting::empty_window(n).into()
        } else {
            indratio::Error::EmptyWindow {
                n,
                hint: format!("; x = {x} is outside the window, feasible x: {feasible:?} (or pass --unsafe-x)"),
            }
            .into()
        });
    }
    let mode = match a.mode {
        CountMode::Exact => Mode::Exact,
        CountMode::Log => Mode::Log,
    };
    let terms = counting::all_terms(n, x, mode, in_window)?;
    let logs: Vec<f64> = terms.iter().map(|(_, t)| t.ln()).collect();
    let log_q = match mode {
        Mode::Log => special::log_sum_exp(&logs),
        Mode::Exact => counting::q_total_checked(n, x, mode, in_window)?.ln(),
    };
    let log_df = counting::ln_double_factorial(3 * n - 1)?;
    let ratio = if in_window { Some(counting::ratio_vs_exponent(n, x, mode)?) } else { None };
    let text = match a.format {
        Format::Csv | Format::Text => {
            let mut s = String::from("n,x,i,j,log_r\n");
            for ((i, j), l) in terms.iter().map(|(ij, _)| *ij).zip(&logs) {
                s.push_str(&format!("{n},{x},{i},{j},{l:.12}\n"));
            }
            s.push_str("\nlog_q,log_doublefact,lhs,rhs,constant,holds\n");
            let lhs = log_q - log_df;
            match &ratio {
                Some(r) => s.push_str(&format!(
                    "{log_q:.12},{log_df:.12},{lhs:.12},{:.12},{},{}\n",
                    r.rhs, r.constant, r.holds
                )),
                None => s.push_str(&format!("{log_q:.12},{log_df:.12},{lhs:.12},,,\n")),
            }
            s
        }
        Format::Json => with_newline(
            serde_json::to_string_pretty(&json!({
                "artifact_version": indratio::ARTIFACT_VERSION,
                "n": n, "x": x, "in_window": in_window,
                "terms": terms.iter().zip(&logs).map(|((ij, _), l)| json!({"i": ij.0, "j": ij.1, "log_r": l})).collect::<Vec<_>>(),
                "log_q": log_q, "log_doublefact": log_df, "ratio": ratio,
            }))
            .expect("json serializes"),
        ),
    };
    emit(&a.output, &text)?;
    match ratio {
        Some(r) if !r.holds => Err(Failure::Claim(format!("ratio inequality fails: {} > {}", r.lhs, r.rhs))),
        _ => Ok(()),
    }
}

fn read_graph(path: &Path) -> Result<Multigraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if header.split_whitespace().count() == 1 {
        Ok(graph::project(&Pairing::parse(&text)?))
    } else {
        Ok(Multigraph::parse_edge_list(&text)?)
    }
}

fn one_indexed(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn cmd_alpha(a: GraphArgs) -> Result<(), Failure> {
    let g = read_graph(&a.file)?;
    let aw = mis::alpha_exact_with_budget(&g, a.budget.budget)?;
    let text = match a.format {
        Format::Text => format!("{}\n", aw.alpha),
        Format::Csv => format!("n,alpha\n{},{}\n", g.n(), aw.alpha),
        Format::Json => format!(
            "{}\n",
            json!({
                "n": g.n(), "alpha": aw.alpha,
                "witness": one_indexed(&aw.witness),
                "excluded_loops": one_indexed(&aw.excluded_loops),
            })
        ),
    };
    emit(&a.output, &text)
}

fn cmd_mai(a: GraphArgs) -> Result<(), Failure> {
    let g = read_graph(&a.file)?;
    let aw = mis::alpha_exact_with_budget(&g, a.budget.budget)?;
    let d = mis::mai_exact_with_budget(&g, &aw, a.budget.budget)?;
    let audit = mis::audit_decomposition(&g, &d);
    let m = mis::mai_multiplicity_check(&g, &d, a.budget.budget)?;
    let text = match a.format {
        Format::Json => with_newline(
            serde_json::to_string_pretty(&json!({
                "n": g.n(), "alpha": aw.alpha, "a": one_indexed(&d.a),
                "x": d.x, "i": d.i, "s": d.s, "t": d.t, "j": d.j.len(),
                "audit": audit.entries, "multiplicity": m,
            }))
            .expect("json serializes"),
        ),
        Format::Text | Format::Csv => {
            let mut s = format!("n {} alpha {} |A| {} x {} i {} s {} t {} j {}\n", g.n(), aw.alpha, d.a.len(), d.x, d.i, d.s, d.t, d.j.len());
            for e in &audit.entries {
                s.push_str(&format!("{} {}\n", if e.pass { "PASS" } else { "FAIL" }, e.lemma_id));
            }
            s.push_str(&format!("multiplicity found {} >= I(H) {}\n", m.found, m.count_lower));
            s
        }
    };
    emit(&a.output, &text)?;
    if audit.all_pass() && m.found >= m.count_lower {
        Ok(())
    } else {
        Err(Failure::Claim("MAI audit failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Certify(a) => cmd_certify(a),
        Command::Tables(a) => cmd_tables(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Count(a) => cmd_count(a),
        Command::Alpha(a) => cmd_alpha(a),
        Command::Mai(a) => cmd_mai(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("indratio: {e}");
            ExitCode::from(e.code())
        }
    }
}
