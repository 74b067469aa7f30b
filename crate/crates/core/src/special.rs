//! Log-domain helpers: log-factorials, compensated log-sum-exp, and natural
//! logarithms of big integers and rationals.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use statrs::function::gamma::ln_gamma;

/// `ln m!`. Exact summation below 20, log-gamma above.
pub fn ln_factorial(m: u64) -> f64 {
    if m < 20 {
        (2..=m).map(|k| (k as f64).ln()).sum()
    } else {
        ln_gamma(m as f64 + 1.0)
    }
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Lower and upper Stirling bounds on `ln m!`:
/// `ln(√(2πm)(m/e)^m)` and the same plus `1/(12m)`.
pub fn stirling_bounds(m: u64) -> (f64, f64) {
    let x = m as f64;
    let lo = 0.5 * (2.0 * std::f64::consts::PI * x).ln() + x * (x.ln() - 1.0);
    (lo, lo + 1.0 / (12.0 * x))
}

/// Kahan-compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// `ln Σ exp(x_i)`, stable for terms spanning many orders of magnitude.
/// Returns `-inf` for an empty input or all `-inf` terms.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max.is_infinite() || max.is_nan() {
        return max;
    }
    let mut acc = KahanSum::default();
    for &t in terms {
        acc.add((t - max).exp());
    }
    max + acc.value().ln()
}

/// `ln x` for a positive big integer, from its top 64 bits and a shift.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        let v = x.iter_u64_digits().next().unwrap_or(0);
        return (v as f64).ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    let v = top.iter_u64_digits().next().unwrap_or(0);
    (v as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln q` for a positive rational; `-inf` for zero, NaN for negative input.
pub fn ln_bigrational(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    if q.is_negative() {
        return f64::NAN;
    }
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    ln_biguint(n) - ln_biguint(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn small_factorials() {
        assert_eq!(ln_factorial(0), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
        let exact: f64 = (2..=25u64).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(25) - exact).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_wide_range() {
        let v = log_sum_exp(&[-1000.0, 0.0, -1000.0]);
        assert!((v - 0.0).abs() < 1e-15);
        let w = log_sum_exp(&[1.0f64.ln(), 2.0f64.ln(), 3.0f64.ln()]);
        assert!((w - 6.0f64.ln()).abs() < 1e-15);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn ln_of_big_values() {
        let x = BigUint::from(10u32).pow(300);
        assert!((ln_biguint(&x) - 300.0 * 10f64.ln()).abs() < 1e-10);
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!((ln_bigrational(&q) + 3f64.ln()).abs() < 1e-15);
    }
}
