//! Outward-rounded interval arithmetic over `f64`.
//!
//! Error model: `+ - * / sqrt` are correctly rounded in IEEE 754, so the
//! exact result lies within one ulp of the computed value and every endpoint
//! is pushed outward by one ulp. `ln` and `exp` come from the platform libm,
//! which is accurate to better than one ulp on every target we build for;
//! those endpoints are pushed outward by [`ELEMENTARY_ULPS`] ulps.
//!
//! An interval with NaN endpoints is *invalid*: it is produced when an
//! operation leaves its domain (for example `ln` of a negative interval),
//! propagates through every operation, and fails every comparison.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Outward widening applied to libm results.
pub const ELEMENTARY_ULPS: u32 = 2;

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

fn down_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

fn up_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

/// Product with the interval convention `0 · ∞ = 0`.
#[inline]
fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// Closed interval `[lo, hi]` enclosing a real quantity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const INVALID: Interval = Interval {
        lo: f64::NAN,
        hi: f64::NAN,
    };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    /// Builds `[lo, hi]`; an inverted or NaN pair yields [`Interval::INVALID`].
    pub fn new(lo: f64, hi: f64) -> Self {
        if lo <= hi {
            Interval { lo, hi }
        } else {
            Self::INVALID
        }
    }

    /// Degenerate interval around an exactly representable value.
    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    /// Enclosure of the rational `num / den`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        const EXACT: i64 = 1 << 53;
        if num.abs() < EXACT && den.abs() < EXACT {
            let (n, d) = (num as f64, den as f64);
            let q = n / d;
            if d == 1.0 {
                return Self::point(q);
            }
            Self::new(down(q), up(q))
        } else {
            Self::point(num as f64) / Self::point(den as f64)
        }
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn is_valid(self) -> bool {
        self.lo <= self.hi
    }

    pub fn mid(self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            0.5 * self.lo + 0.5 * self.hi
        } else {
            f64::NAN
        }
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    /// Largest absolute value over the interval.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn encloses(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(self, other: Interval) -> Interval {
        if !self.is_valid() || !other.is_valid() {
            return Self::INVALID;
        }
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(self, other: Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// Every value in `self` is strictly below `x`.
    pub fn certainly_lt(self, x: f64) -> bool {
        self.hi < x
    }

    pub fn certainly_le(self, x: f64) -> bool {
        self.hi <= x
    }

    pub fn certainly_gt(self, x: f64) -> bool {
        self.lo > x
    }

    pub fn certainly_ge(self, x: f64) -> bool {
        self.lo >= x
    }

    /// Splits into `parts` contiguous pieces sharing endpoints.
    pub fn split(self, parts: usize) -> Vec<Interval> {
        assert!(parts > 0);
        let mut cuts = Vec::with_capacity(parts + 1);
        cuts.push(self.lo);
        for k in 1..parts {
            let t = k as f64 / parts as f64;
            let c = self.lo + (self.hi - self.lo) * t;
            cuts.push(c.clamp(self.lo, self.hi));
        }
        cuts.push(self.hi);
        cuts.windows(2).map(|w| Interval::new(w[0], w[1])).collect()
    }

    pub fn bisect(self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval::new(self.lo, m), Interval::new(m, self.hi))
    }

    pub fn sqr(self) -> Interval {
        if !self.is_valid() {
            return Self::INVALID;
        }
        let (a, b) = (self.lo.abs(), self.hi.abs());
        let hi = up(a.max(b) * a.max(b));
        let lo = if self.lo <= 0.0 && self.hi >= 0.0 {
            0.0
        } else {
            down(a.min(b) * a.min(b)).max(0.0)
        };
        Interval::new(lo, hi)
    }

    pub fn recip(self) -> Interval {
        Interval::point(1.0) / self
    }

    pub fn sqrt(self) -> Interval {
        if !self.is_valid() || self.lo < 0.0 {
            return Self::INVALID;
        }
        Interval::new(down(self.lo.sqrt()).max(0.0), up(self.hi.sqrt()))
    }

    /// Natural logarithm; `ln 0 = -∞` at a closed lower endpoint.
    pub fn ln(self) -> Interval {
        if !self.is_valid() || self.lo < 0.0 {
            return Self::INVALID;
        }
        let lo = if self.lo == 0.0 {
            f64::NEG_INFINITY
        } else {
            down_n(self.lo.ln(), ELEMENTARY_ULPS)
        };
        let hi = if self.hi == 0.0 {
            f64::NEG_INFINITY
        } else {
            up_n(self.hi.ln(), ELEMENTARY_ULPS)
        };
        Interval::new(lo, hi)
    }

    pub fn exp(self) -> Interval {
        if !self.is_valid() {
            return Self::INVALID;
        }
        Interval::new(
            down_n(self.lo.exp(), ELEMENTARY_ULPS).max(0.0),
            up_n(self.hi.exp(), ELEMENTARY_ULPS),
        )
    }

    /// `t ln t` with the continuous extension `0 ln 0 = 0`.
    pub fn xlogx(self) -> Interval {
        if !self.is_valid() || self.hi < 0.0 {
            return Self::INVALID;
        }
        // restrict to the domain t >= 0, so a slack enclosure that straddles
        // zero by rounding still evaluates
        let s = Interval::new(self.lo.max(0.0), self.hi);
        let at = |t: f64| -> Interval {
            if t == 0.0 {
                Interval::ZERO
            } else {
                let p = Interval::point(t);
                p * p.ln()
            }
        };
        let inv_e = std::f64::consts::E.recip();
        if s.hi <= inv_e {
            // decreasing branch
            Interval::new(at(s.hi).lo, at(s.lo).hi)
        } else if s.lo >= inv_e {
            Interval::new(at(s.lo).lo, at(s.hi).hi)
        } else {
            let min = down_n(-inv_e, 4);
            Interval::new(min, at(s.lo).hi.max(at(s.hi).hi))
        }
    }

    pub fn powi(self, n: u32) -> Interval {
        match n {
            0 => Interval::point(1.0),
            1 => self,
            _ if n.is_multiple_of(2) => self.powi(n / 2).sqr(),
            _ => self * self.powi(n - 1),
        }
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::new(down(self.lo + rhs.lo), up(self.hi + rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::new(down(self.lo - rhs.hi), up(self.hi - rhs.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        if !self.is_valid() || !rhs.is_valid() {
            return Interval::INVALID;
        }
        let p = [
            mul0(self.lo, rhs.lo),
            mul0(self.lo, rhs.hi),
            mul0(self.hi, rhs.lo),
            mul0(self.hi, rhs.hi),
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        if !self.is_valid() || !rhs.is_valid() {
            return Interval::INVALID;
        }
        if rhs.lo <= 0.0 && rhs.hi >= 0.0 {
            return Interval::ENTIRE;
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        if q.iter().any(|v| v.is_nan()) {
            return Interval::ENTIRE;
        }
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_tenths_enclose_value() {
        let t = Interval::ratio(1, 10);
        assert!(t.lo() < t.hi());
        assert!(t.contains(0.1));
        // 3 * 0.1 != 0.3 in f64, but the enclosures overlap
        let three = Interval::ratio(3, 1) * t;
        assert!(three.contains(0.3));
        assert!(three.encloses(Interval::ratio(3, 10)) || three.intersect(Interval::ratio(3, 10)).is_valid());
    }

    #[test]
    fn integers_stay_thin() {
        let a = Interval::ratio(7, 1);
        assert_eq!(a.lo(), 7.0);
        assert_eq!(a.hi(), 7.0);
    }

    #[test]
    fn mul_signs() {
        let a = Interval::new(-2.0, 3.0);
        let b = Interval::new(-1.0, 4.0);
        let p = a * b;
        assert!(p.lo() <= -8.0 && p.hi() >= 12.0);
        assert!(p.lo() > -8.0001 && p.hi() < 12.0001);
    }

    #[test]
    fn zero_times_infinity_is_zero() {
        let a = Interval::new(0.0, 0.0);
        let b = Interval::new(f64::NEG_INFINITY, 1.0);
        let p = a * b;
        assert!(p.contains(0.0));
        assert!(p.is_valid());
    }

    #[test]
    fn div_by_zero_straddle_is_entire() {
        let q = Interval::point(1.0) / Interval::new(-1.0, 1.0);
        assert_eq!(q, Interval::ENTIRE);
    }

    #[test]
    fn ln_domain() {
        assert!(!Interval::new(-1.0, 2.0).ln().is_valid());
        let l = Interval::new(0.0, 1.0).ln();
        assert_eq!(l.lo(), f64::NEG_INFINITY);
        assert!(l.hi() >= 0.0);
        let e = Interval::point(std::f64::consts::E).ln();
        assert!(e.contains(1.0));
    }

    #[test]
    fn invalid_fails_every_comparison() {
        let bad = Interval::new(-2.0, -1.0).sqrt();
        assert!(!bad.is_valid());
        assert!(!bad.certainly_lt(1e300));
        assert!(!bad.certainly_gt(-1e300));
        assert!(!(bad + Interval::point(1.0)).is_valid());
        assert!(!(bad * Interval::point(0.0)).is_valid());
    }

    #[test]
    fn xlogx_branches() {
        let z = Interval::new(0.0, 0.0).xlogx();
        assert!(z.contains(0.0));
        let around_min = Interval::new(0.1, 0.9).xlogx();
        let inv_e = std::f64::consts::E.recip();
        assert!(around_min.contains(-inv_e));
        assert!(around_min.contains(0.9 * 0.9f64.ln()));
        let small = Interval::new(0.0, 0.01).xlogx();
        assert!(small.contains(0.0) && small.contains(0.01 * 0.01f64.ln()));
    }

    #[test]
    fn split_covers() {
        let i = Interval::new(0.0, 0.046);
        let parts = i.split(46);
        assert_eq!(parts.len(), 46);
        assert_eq!(parts[0].lo(), 0.0);
        assert_eq!(parts[45].hi(), 0.046);
        for w in parts.windows(2) {
            assert_eq!(w[0].hi(), w[1].lo());
        }
    }

    #[test]
    fn sqr_tighter_than_mul_across_zero() {
        let i = Interval::new(-1.0, 2.0);
        assert!(i.sqr().lo() == 0.0);
        assert!((i * i).lo() < 0.0);
    }
}
