//! The first-moment count `q(x, n) = Σ_i Σ_j r(x, n, i, j)` bounding the
//! number of girth-conditioned pairings with a MAI set whose independent
//! part has size `x`, in exact rational and log-gamma modes.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exponent::ProofConstants;
use crate::interval::Interval;
use crate::special::{ln_bigrational, ln_biguint, ln_factorial, log_sum_exp};
use crate::Error;

/// Artifact-level constant standing in for the hidden polynomial factor
/// when comparing `ln q − ln (3n−1)!!` with `n · max ln h + 6 ln n`.
/// Calibrated once at `(n, x) = (200, 91)` and frozen.
pub const RATIO_CONSTANT: f64 = -33.6;

/// Evaluation mode of the counting formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Log,
}

/// A natural logarithm with a sign flag: `sign = 0` encodes the value zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    pub log_value: f64,
    pub sign: i8,
}

impl LogValue {
    pub fn positive(log_value: f64) -> Self {
        LogValue { log_value, sign: 1 }
    }

    pub fn zero() -> Self {
        LogValue {
            log_value: f64::NEG_INFINITY,
            sign: 0,
        }
    }
}

/// A value of the counting formula in either mode.
#[derive(Clone, Debug, PartialEq)]
pub enum CountValue {
    Exact(BigRational),
    Log(LogValue),
}

impl CountValue {
    /// Natural logarithm of the value.
    pub fn ln(&self) -> f64 {
        match self {
            CountValue::Exact(q) => ln_bigrational(q),
            CountValue::Log(l) => l.log_value,
        }
    }
}

/// Whether `0.454n < x ≤ 0.45537n`, in integer arithmetic.
pub fn in_window(n: u64, x: u64) -> bool {
    1000 * x > 454 * n && 100_000 * x <= 45_537 * n
}

/// Integers `x` with `0.454n < x ≤ 0.45537n`.
pub fn feasible_x(n: u64) -> Vec<u64> {
    let lo = 454 * n / 1000 + 1;
    let hi = 45_537 * n / 100_000;
    (lo..=hi).filter(|&x| in_window(n, x)).collect()
}

/// The smallest even `m ≥ n` with a non-empty window, for error hints.
pub fn next_feasible_n(n: u64) -> u64 {
    let mut m = n + n % 2;
    while feasible_x(m).is_empty() {
        m += 2;
    }
    m
}

/// Empty-window error for `n`, with a hint pointing at the next feasible order.
pub fn empty_window(n: u64) -> Error {
    let next = next_feasible_n(n.max(2));
    let hint = format!("; the smallest even n >= {n} with a feasible x is {next} (x = {})", feasible_x(next)[0]);
    Error::EmptyWindow { n, hint }
}

/// Indices of one term `r(x, n, i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingParams {
    pub n: u64,
    pub x: u64,
    pub i: u64,
    pub j: u64,
}

/// The factorial arguments of `r`, in order of appearance, with names.
#[derive(Clone, Copy, Debug)]
struct Args {
    half_minus_i: u64,
    half_plus_i: u64,
    r_free: u64,
    r_edges: u64,
    rp_free: u64,
    rp_edges: u64,
    y_ends: u64,
    z_ends: u64,
    step6: u64,
    step7: u64,
    tail: u64,
}

impl CountingParams {
    pub fn new(n: u64, x: u64, i: u64, j: u64) -> Self {
        CountingParams { n, x, i, j }
    }

    /// Checks every inequality; `enforce_window` toggles `0.454n < x ≤ 0.45537n`.
    pub fn validate(&self, enforce_window: bool) -> Result<(), Error> {
        self.args(enforce_window).map(|_| ())
    }

    fn args(&self, enforce_window: bool) -> Result<Args, Error> {
        let CountingParams { n, x, i, j } = *self;
        if n == 0 || n % 2 == 1 {
            return Err(Error::InvalidArgument(format!("n must be even and positive, got {n}")));
        }
        if enforce_window && !in_window(n, x) {
            return Err(Error::Domain(format!("0.454n < x <= 0.45537n violated for n = {n}, x = {x}")));
        }
        let (n, x, i, j) = (n as i64, x as i64, i as i64, j as i64);
        let h = n / 2;
        let named = [
            ("n/2 - i", h - i),
            ("n/2 + i", h + i),
            ("2x + i - n/2", 2 * x + i - h),
            ("i <= n/2 - x", h - x - i),
            ("2x - 3i - n/2", 2 * x - 3 * i - h),
            ("n/2 - x + 2i", h - x + 2 * i),
            ("j <= n - 2x - 2i", n - 2 * i - 2 * x - j),
            ("j <= n - 2x + 4i", n - 2 * x + 4 * i - j),
            ("6x - 3n/2 - 9i", 6 * x - 3 * h - 9 * i),
            ("6x - 3n/2 + 3i", 6 * x - 3 * h + 3 * i),
            ("10x - 7n/2 - 5i + j", 10 * x - 7 * h - 5 * i + j),
        ];
        for (name, v) in named {
            if v < 0 {
                return Err(Error::Domain(format!("{name} >= 0 violated ({v}) at {self:?}")));
            }
        }
        if i < 0 || j < 0 {
            return Err(Error::Domain(format!("non-negative indices required at {self:?}")));
        }
        let u = |k: usize| named[k].1 as u64;
        Ok(Args {
            half_minus_i: u(0),
            half_plus_i: u(1),
            r_free: u(2),
            r_edges: u(3),
            rp_free: u(4),
            rp_edges: u(5),
            y_ends: (n - 2 * i - 2 * x) as u64,
            z_ends: (n - 2 * x + 4 * i) as u64,
            step6: u(8),
            step7: u(9),
            tail: u(10),
        })
    }
}

/// Exact factorials `0!, 1!, …, m!`.
struct Factorials(Vec<BigUint>);

impl Factorials {
    fn up_to(m: u64) -> Self {
        let mut v = Vec::with_capacity(m as usize + 1);
        v.push(BigUint::one());
        for k in 1..=m {
            let next = &v[k as usize - 1] * BigUint::from(k);
            v.push(next);
        }
        Factorials(v)
    }

    fn get(&self, k: u64) -> &BigUint {
        &self.0[k as usize]
    }
}

/// `m!! = m·(m−2)·…·1` for odd `m`.
pub fn double_factorial(m: u64) -> Result<BigUint, Error> {
    if m.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("double_factorial needs odd m, got {m}")));
    }
    let mut acc = BigUint::one();
    let mut k = m;
    while k > 1 {
        acc *= BigUint::from(k);
        k -= 2;
    }
    Ok(acc)
}

/// `ln m!!` for odd `m`, via `m!! = (m+1)! / (2^{(m+1)/2} ((m+1)/2)!)`.
pub fn ln_double_factorial(m: u64) -> Result<f64, Error> {
    if m.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("double_factorial needs odd m, got {m}")));
    }
    let h = m.div_ceil(2);
    Ok(ln_factorial(m + 1) - h as f64 * std::f64::consts::LN_2 - ln_factorial(h))
}

fn big(v: &BigUint) -> BigInt {
    BigInt::from(v.clone())
}

fn pow_u(base: u64, e: u64) -> BigUint {
    BigUint::from(base).pow(e as u32)
}

/// Terms with or without the multiplicity weight `(1/1.618)^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weighting {
    Weighted,
    Unweighted,
}

fn r_exact_with(p: &CountingParams, a: &Args, f: &Factorials, w: Weighting) -> BigRational {
    let CountingParams { n, x, i, j } = *p;
    let mut num = f.get(n).clone();
    let mut den = f.get(a.half_minus_i) * f.get(a.half_plus_i);
    // matching R on A and the choice of points at its ends
    num *= f.get(a.half_minus_i) * pow_u(3, n - 2 * x - 2 * i);
    den *= f.get(a.r_free) * pow_u(2, a.r_edges) * f.get(a.r_edges);
    // matching R′ on B
    num *= f.get(a.half_plus_i) * pow_u(3, n - 2 * x + 4 * i);
    den *= f.get(a.rp_free) * pow_u(2, a.rp_edges) * f.get(a.rp_edges);
    // ends of the Y–Z matching and the points used
    num *= f.get(a.y_ends) * f.get(a.z_ends) * pow_u(2, 2 * j) * f.get(j);
    den *= f.get(j) * f.get(a.y_ends - j) * f.get(j) * f.get(a.z_ends - j);
    // remaining free points
    num *= f.get(a.step6) * f.get(a.step7);
    den *= f.get(a.tail);
    if w == Weighting::Weighted {
        num *= pow_u(500, j);
        den *= pow_u(809, j);
    }
    BigRational::new(big(&num), big(&den))
}

fn r_log(p: &CountingParams, a: &Args) -> f64 {
    let CountingParams { n, x, i, j } = *p;
    let lf = ln_factorial;
    let (ln2, ln3) = (std::f64::consts::LN_2, 3f64.ln());
    lf(n) - lf(a.half_minus_i) - lf(a.half_plus_i)
        + lf(a.half_minus_i) + (n - 2 * x - 2 * i) as f64 * ln3
        - lf(a.r_free) - a.r_edges as f64 * ln2 - lf(a.r_edges)
        + lf(a.half_plus_i) + (n - 2 * x + 4 * i) as f64 * ln3
        - lf(a.rp_free) - a.rp_edges as f64 * ln2 - lf(a.rp_edges)
        + lf(a.y_ends) - lf(j) - lf(a.y_ends - j)
        + lf(a.z_ends) - lf(j) - lf(a.z_ends - j)
        + (2 * j) as f64 * ln2 + lf(j)
        + j as f64 * (500f64.ln() - 809f64.ln())
        + lf(a.step6) + lf(a.step7) - lf(a.tail)
}

/// One term `r(x, n, i, j)`, checking the window on `x`.
pub fn r_term(p: &CountingParams, mode: Mode) -> Result<CountValue, Error> {
    r_term_checked(p, mode, true)
}

/// One term with an explicit choice of whether to enforce the window on `x`.
pub fn r_term_checked(p: &CountingParams, mode: Mode, enforce_window: bool) -> Result<CountValue, Error> {
    let a = p.args(enforce_window)?;
    Ok(match mode {
        Mode::Exact => CountValue::Exact(r_exact_with(p, &a, &Factorials::up_to(3 * p.n), Weighting::Weighted)),
        Mode::Log => CountValue::Log(LogValue::positive(r_log(p, &a))),
    })
}

/// Exact term with the weight optionally dropped.
pub fn r_term_exact_weighting(p: &CountingParams, w: Weighting) -> Result<BigRational, Error> {
    let a = p.args(true)?;
    Ok(r_exact_with(p, &a, &Factorials::up_to(3 * p.n), w))
}

/// The index set `0 ≤ i ≤ n/2 − x`, `0 ≤ j ≤ n − 2x − 2i`.
pub fn index_grid(n: u64, x: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    if 2 * x > n {
        return out;
    }
    for i in 0..=(n / 2 - x) {
        for j in 0..=(n - 2 * x - 2 * i) {
            out.push((i, j));
        }
    }
    out
}

/// A term of the double sum keyed by its `(i, j)` indices.
pub type Term = ((u64, u64), CountValue);

/// Every term of the double sum, in `(i, j)` order.
pub fn all_terms(n: u64, x: u64, mode: Mode, enforce_window: bool) -> Result<Vec<Term>, Error> {
    if enforce_window && !in_window(n, x) {
        return Err(if feasible_x(n).is_empty() {
            empty_window(n)
        } else {
            Error::Domain(format!("0.454n < x <= 0.45537n violated for n = {n}, x = {x}"))
        });
    }
    let grid = index_grid(n, x);
    let f = (mode == Mode::Exact).then(|| Factorials::up_to(3 * n));
    let mut out = Vec::with_capacity(grid.len());
    for (i, j) in grid {
        let p = CountingParams::new(n, x, i, j);
        let a = p.args(enforce_window)?;
        let v = match &f {
            Some(f) => CountValue::Exact(r_exact_with(&p, &a, f, Weighting::Weighted)),
            None => CountValue::Log(LogValue::positive(r_log(&p, &a))),
        };
        out.push(((i, j), v));
    }
    Ok(out)
}

/// `q(x, n)` as an exact rational sum or a log-sum-exp.
pub fn q_total(n: u64, x: u64, mode: Mode) -> Result<CountValue, Error> {
    q_total_checked(n, x, mode, true)
}

pub fn q_total_checked(n: u64, x: u64, mode: Mode, enforce_window: bool) -> Result<CountValue, Error> {
    let terms = all_terms(n, x, mode, enforce_window)?;
    Ok(match mode {
        Mode::Exact => {
            let mut sum = BigRational::zero();
            for (_, t) in terms {
                if let CountValue::Exact(q) = t {
                    sum += q;
                }
            }
            CountValue::Exact(sum)
        }
        Mode::Log => {
            let logs: Vec<f64> = terms.iter().map(|(_, t)| t.ln()).collect();
            if logs.is_empty() {
                CountValue::Log(LogValue::zero())
            } else {
                CountValue::Log(LogValue::positive(log_sum_exp(&logs)))
            }
        }
    })
}

/// Both sides of `ln q − ln (3n−1)!! ≤ n · max ln h + 6 ln n + C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub n: u64,
    pub x: u64,
    pub mode: Mode,
    pub log_q: f64,
    pub log_double_factorial: f64,
    pub lhs: f64,
    /// Upper end of the enclosure of `max ln h` over the `(i, j)` grid.
    pub max_ln_h: f64,
    pub argmax: (u64, u64),
    pub constant: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Certified upper bound on `ln h(x/n, i/n, j/n)` with exact-ratio arguments.
pub fn ln_h_at_grid(k: &ProofConstants, n: u64, x: u64, i: u64, j: u64) -> Interval {
    let r = |v: u64| Interval::ratio(v as i64, n as i64);
    k.ln_h(r(x), r(i), r(j))
}

/// Evaluates both sides of the ratio inequality with the frozen constant.
pub fn ratio_vs_exponent(n: u64, x: u64, mode: Mode) -> Result<RatioReport, Error> {
    let k = ProofConstants::default();
    let q = q_total(n, x, mode)?;
    let log_q = q.ln();
    let log_df = match mode {
        Mode::Exact => ln_biguint(&double_factorial(3 * n - 1)?),
        Mode::Log => ln_double_factorial(3 * n - 1)?,
    };
    let mut best = (f64::NEG_INFINITY, (0, 0));
    for (i, j) in index_grid(n, x) {
        let v = ln_h_at_grid(&k, n, x, i, j);
        if !v.is_valid() {
            return Err(Error::Domain(format!("ln h enclosure invalid at i = {i}, j = {j}")));
        }
        if v.hi() > best.0 {
            best = (v.hi(), (i, j));
        }
    }
    let lhs = log_q - log_df;
    let rhs = n as f64 * best.0 + 6.0 * (n as f64).ln() + RATIO_CONSTANT;
    Ok(RatioReport {
        n,
        x,
        mode,
        log_q,
        log_double_factorial: log_df,
        lhs,
        max_ln_h: best.0,
        argmax: best.1,
        constant: RATIO_CONSTANT,
        rhs,
        holds: lhs <= rhs,
    })
}
