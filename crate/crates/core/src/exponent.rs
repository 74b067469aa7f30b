//! The exponent function `h(χ, ζ, ξ) = f(χ, ζ) · g(χ, ζ, ξ)` and the
//! stationarity quadratic that pins the optimal `ξ`.
//!
//! Every formula is written once over the [`Real`] trait, so the same code
//! yields plain `f64` values (plots, quick checks) and rigorous [`Interval`]
//! enclosures (the certificate). Decimal constants are exact rationals held
//! in [`ProofConstants`], which can be perturbed for mutation testing.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::interval::Interval;
use crate::Error;

/// Numeric carrier for the exponent formulas.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lit(l: Literal) -> Self;
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
    /// `t ln t`, continuous at 0.
    fn xlogx(self) -> Self;

    fn int(v: i64) -> Self {
        Self::lit(Literal::int(v))
    }

    fn sqr(self) -> Self {
        self * self
    }

    fn recip(self) -> Self {
        Self::int(1) / self
    }
}

impl Real for f64 {
    fn lit(l: Literal) -> Self {
        l.to_f64()
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn xlogx(self) -> Self {
        if self == 0.0 {
            0.0
        } else {
            self * self.ln()
        }
    }
}

impl Real for Interval {
    fn lit(l: Literal) -> Self {
        Interval::ratio(l.num, l.den)
    }
    fn ln(self) -> Self {
        Interval::ln(self)
    }
    fn exp(self) -> Self {
        Interval::exp(self)
    }
    fn sqrt(self) -> Self {
        Interval::sqrt(self)
    }
    fn xlogx(self) -> Self {
        Interval::xlogx(self)
    }
    fn sqr(self) -> Self {
        Interval::sqr(self)
    }
}

/// An exact rational constant `num / den` with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Literal {
    pub num: i64,
    pub den: i64,
}

impl Literal {
    pub const fn new(num: i64, den: i64) -> Self {
        Literal { num, den }
    }

    pub const fn int(v: i64) -> Self {
        Literal { num: v, den: 1 }
    }

    pub fn ratio(self) -> Ratio<i64> {
        Ratio::new(self.num, self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Parses a signed decimal such as `+0.001`, `-2.5` or `7`.
    pub fn parse_decimal(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidArgument(format!("not a decimal number: {s:?}"));
        let t = s.trim();
        let (neg, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if frac_part.len() > 15 || int_part.len() > 15 {
            return Err(bad());
        }
        let den = 10i64.pow(frac_part.len() as u32);
        let i: i64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
        let f: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
        let num = i.checked_mul(den).and_then(|v| v.checked_add(f)).ok_or_else(bad)?;
        let r = Ratio::new(if neg { -num } else { num }, den);
        Ok(Literal::from(r))
    }

    pub fn checked_add(self, other: Literal) -> Option<Literal> {
        num_traits::CheckedAdd::checked_add(&self.ratio(), &other.ratio()).map(Literal::from)
    }
}

impl From<Ratio<i64>> for Literal {
    fn from(r: Ratio<i64>) -> Self {
        Literal {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

macro_rules! proof_constants {
    ($( $(#[$doc:meta])* $field:ident = ($num:expr, $den:expr) ),* $(,)?) => {
        /// Every literal used by the exponent formulas and the certificate.
        ///
        /// The defaults are the decimals printed in the proof, as exact
        /// rationals. Fields are public so a perturbed copy can be certified
        /// to check that the certificate is sensitive to each of them.
        #[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
        pub struct ProofConstants {
            $( $(#[$doc])* pub $field: Literal, )*
        }

        impl Default for ProofConstants {
            fn default() -> Self {
                ProofConstants { $( $field: Literal::new($num, $den), )* }
            }
        }

        impl ProofConstants {
            /// Names accepted by [`ProofConstants::mutate`].
            pub const NAMES: &'static [&'static str] = &[$( stringify!($field), )*];

            /// `(name, value)` pairs in declaration order.
            pub fn entries(&self) -> Vec<(&'static str, Literal)> {
                vec![$( (stringify!($field), self.$field), )*]
            }

            fn slot(&mut self, name: &str) -> Option<&mut Literal> {
                match name {
                    $( stringify!($field) => Some(&mut self.$field), )*
                    _ => None,
                }
            }
        }
    };
}

proof_constants! {
    /// Leading coefficient `a = 4 − 1.618` of the stationarity quadratic.
    a = (1191, 500),
    /// Coefficient of `χ` in `b` (entered with a minus sign).
    b_chi = (9, 50),
    /// Coefficient of `ζ` in `b`.
    b_zeta = (9, 100),
    /// Constant term of `b` (entered with a minus sign).
    b = (2337, 1000),
    /// Coefficients of `c = c_chi2 χ² − c_zeta2 ζ² − c_chi χ + c_zeta ζ − c_chi_zeta χζ + c`.
    c_chi2 = (16, 1),
    c_zeta2 = (32, 1),
    c_chi = (16, 1),
    c_zeta = (8, 1),
    c_chi_zeta = (16, 1),
    c = (4, 1),
    /// Lower bound on `I(2, 8)` used as the multiplicity weight.
    weight = (809, 500),
    /// The `7/2` in the last factorial argument.
    seven_halves = (7, 2),
    /// The slice `χ = 0.454`.
    chi0 = (227, 500),
    /// McKay's upper bound `0.45537`.
    chi_max = (45537, 100000),
    /// `1/2 − χ₀`, the end of the ζ range on the slice.
    slice_end = (23, 500),
    /// `1 − 2χ₀`.
    slice_u = (23, 250),
    /// `2χ₀ − 1/2`.
    slice_r = (51, 125),
    /// `10χ₀ − 7/2`.
    slice_m = (26, 25),
    /// `1/2 − χ_max`, the ζ corner of the χ = χ_max edge.
    corner_zeta = (4463, 100000),
    /// `1 − 2χ_max`, the ξ corner of the χ = χ_max face.
    corner_xi = (4463, 50000),
    /// Width of the cells in the ζ case analysis.
    grid_step = (1, 1000),
    /// Magnitude of the lower bound on `ξ₁″` used in the case analysis.
    xi2_bound = (6834, 250),
    /// Bracket of the minimiser `ζ_ξ` of the discriminant.
    zeta_xi_lo = (12213, 1000000),
    zeta_xi_hi = (6107, 500000),
    /// Bracket of the root `d_ζ` of `A₄′`.
    d_zeta_lo = (355167, 10000000),
    d_zeta_hi = (44396, 1250000),
    /// Bracket of the maximiser `ζ₁` of `h₁` on the slice.
    zeta_star_lo = (228718, 10000000),
    zeta_star_hi = (228719, 10000000),
}

impl ProofConstants {
    /// Adds `delta` to the named constant.
    pub fn mutate(&mut self, name: &str, delta: Literal) -> Result<(), Error> {
        let slot = self
            .slot(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown constant {name:?}")))?;
        *slot = slot
            .checked_add(delta)
            .ok_or_else(|| Error::InvalidArgument(format!("overflow mutating {name}")))?;
        Ok(())
    }

    pub fn lit<R: Real>(&self, l: Literal) -> R {
        R::lit(l)
    }

    fn half<R: Real>() -> R {
        R::lit(Literal::new(1, 2))
    }

    fn three_halves<R: Real>() -> R {
        R::lit(Literal::new(3, 2))
    }

    /// `ln(4 / 1.618)`.
    pub fn ln_four_over_weight<R: Real>(&self) -> R {
        R::int(4).ln() - R::lit(self.weight).ln()
    }

    /// `ln f(χ, ζ)`.
    pub fn ln_f<R: Real>(&self, chi: R, zeta: R) -> R {
        let half = Self::half::<R>();
        let three_halves = Self::three_halves::<R>();
        let one = R::int(1);
        let two = R::int(2);
        let three = R::int(3);
        let six = R::int(6);
        (half - R::int(4) * chi + two * zeta) * three.ln()
            + (one - two * chi - two * zeta).xlogx()
            + (one - two * chi + R::int(4) * zeta).xlogx()
            + (six * chi - three_halves + three * zeta).xlogx()
            + (six * chi - three_halves - R::int(9) * zeta).xlogx()
            - (two * chi + zeta - half).xlogx()
            - (one - two * chi + zeta) * two.ln()
            - (half - chi - zeta).xlogx()
            - (half - chi + two * zeta).xlogx()
            - (two * chi - R::int(3) * zeta - half).xlogx()
    }

    /// `ln g(χ, ζ, ξ)`.
    pub fn ln_g<R: Real>(&self, chi: R, zeta: R, xi: R) -> R {
        let one = R::int(1);
        let two = R::int(2);
        xi * self.ln_four_over_weight::<R>()
            - xi.xlogx()
            - (one - two * chi - two * zeta - xi).xlogx()
            - (one - two * chi + R::int(4) * zeta - xi).xlogx()
            - (R::int(10) * chi - R::lit(self.seven_halves) - R::int(5) * zeta + xi).xlogx()
    }

    /// `ln h = ln f + ln g`.
    pub fn ln_h<R: Real>(&self, chi: R, zeta: R, xi: R) -> R {
        self.ln_f(chi, zeta) + self.ln_g(chi, zeta, xi)
    }

    pub fn quad_a<R: Real>(&self) -> R {
        R::lit(self.a)
    }

    pub fn quad_b<R: Real>(&self, chi: R, zeta: R) -> R {
        R::lit(self.b_zeta) * zeta - R::lit(self.b_chi) * chi - R::lit(self.b)
    }

    pub fn quad_c<R: Real>(&self, chi: R, zeta: R) -> R {
        R::lit(self.c_chi2) * chi.sqr() - R::lit(self.c_zeta2) * zeta.sqr() - R::lit(self.c_chi) * chi
            + R::lit(self.c_zeta) * zeta
            - R::lit(self.c_chi_zeta) * chi * zeta
            + R::lit(self.c)
    }

    /// `∂b/∂ζ`.
    pub fn quad_b_d1<R: Real>(&self) -> R {
        R::lit(self.b_zeta)
    }

    /// `∂c/∂ζ = −2·c_zeta2·ζ + c_zeta − c_chi_zeta·χ`.
    pub fn quad_c_d1<R: Real>(&self, chi: R, zeta: R) -> R {
        R::lit(self.c_zeta) - R::int(2) * R::lit(self.c_zeta2) * zeta - R::lit(self.c_chi_zeta) * chi
    }

    /// `∂²c/∂ζ²`.
    pub fn quad_c_d2<R: Real>(&self) -> R {
        -(R::int(2) * R::lit(self.c_zeta2))
    }

    /// The discriminant `Δ = b² − 4ac`.
    pub fn disc<R: Real>(&self, chi: R, zeta: R) -> R {
        self.quad_b(chi, zeta).sqr() - R::int(4) * self.quad_a::<R>() * self.quad_c(chi, zeta)
    }

    /// `Δ′ = 2b·b′ − 4a·c′`.
    pub fn disc_d1<R: Real>(&self, chi: R, zeta: R) -> R {
        R::int(2) * self.quad_b(chi, zeta) * self.quad_b_d1::<R>()
            - R::int(4) * self.quad_a::<R>() * self.quad_c_d1(chi, zeta)
    }

    /// `Δ″ = 2b′² − 4a·c″`, constant in ζ.
    pub fn disc_d2<R: Real>(&self) -> R {
        R::int(2) * self.quad_b_d1::<R>().sqr() - R::int(4) * self.quad_a::<R>() * self.quad_c_d2::<R>()
    }

    /// Smaller root `ξ₁` in the cancellation-free form `2c / (−b + √Δ)`.
    pub fn xi1<R: Real>(&self, chi: R, zeta: R) -> R {
        let b = self.quad_b(chi, zeta);
        let c = self.quad_c(chi, zeta);
        R::int(2) * c / (self.disc(chi, zeta).sqrt() - b)
    }

    /// Smaller root in the textbook form `(−b − √Δ) / 2a`.
    pub fn xi1_textbook<R: Real>(&self, chi: R, zeta: R) -> R {
        let b = self.quad_b(chi, zeta);
        (-b - self.disc(chi, zeta).sqrt()) / (R::int(2) * self.quad_a::<R>())
    }

    /// Larger root `ξ₂`.
    pub fn xi2<R: Real>(&self, chi: R, zeta: R) -> R {
        let b = self.quad_b(chi, zeta);
        (self.disc(chi, zeta).sqrt() - b) / (R::int(2) * self.quad_a::<R>())
    }

    /// `p(ξ) = 4(1−2χ−2ζ−ξ)(1−2χ+4ζ−ξ) − 1.618·ξ·(10χ−5ζ+ξ−7/2)`.
    pub fn p<R: Real>(&self, chi: R, zeta: R, xi: R) -> R {
        let one = R::int(1);
        let two = R::int(2);
        let u = one - two * chi - two * zeta;
        let v = one - two * chi + R::int(4) * zeta;
        R::int(4) * (u - xi) * (v - xi)
            - R::lit(self.weight) * xi * (R::int(10) * chi - R::int(5) * zeta + xi - R::lit(self.seven_halves))
    }

    /// `∂ξ₁/∂ζ = (1/2a)(−b′ − ½Δ^{−1/2}Δ′)`.
    pub fn xi1_d1<R: Real>(&self, chi: R, zeta: R) -> R {
        let two_a = R::int(2) * self.quad_a::<R>();
        let d = self.disc(chi, zeta);
        (-self.quad_b_d1::<R>() - Self::half::<R>() * self.disc_d1(chi, zeta) / d.sqrt()) / two_a
    }

    /// `∂²ξ₁/∂ζ² = (1/2a)Δ^{−1/2}(¼Δ^{−1}Δ′² − ½Δ″)`.
    pub fn xi1_d2<R: Real>(&self, chi: R, zeta: R) -> R {
        let two_a = R::int(2) * self.quad_a::<R>();
        let d = self.disc(chi, zeta);
        let inner = R::lit(Literal::new(1, 4)) * self.disc_d1(chi, zeta).sqr() / d
            - Self::half::<R>() * self.disc_d2::<R>();
        inner / (d.sqrt() * two_a)
    }

    /// `ln h₁(χ, ζ) = ln h(χ, ζ, ξ₁(χ, ζ))`.
    pub fn ln_h1<R: Real>(&self, chi: R, zeta: R) -> R {
        self.ln_h(chi, zeta, self.xi1(chi, zeta))
    }

    /// Total ζ-derivative of `ln h₁`, transcribed with its `ξ₁′` terms.
    pub fn dlnh1_dzeta<R: Real>(&self, chi: R, zeta: R) -> R {
        let one = R::int(1);
        let two = R::int(2);
        let half = Self::half::<R>();
        let xi = self.xi1(chi, zeta);
        let xd = self.xi1_d1(chi, zeta);
        R::int(2).ln() - R::int(4) * R::int(3).ln() - R::int(3)
            + two * (two * chi + zeta - half).ln()
            - (half - chi - zeta).ln()
            + two * (half - chi + two * zeta).ln()
            - R::int(6) * (two * chi - R::int(3) * zeta - half).ln()
            + self.ln_four_over_weight::<R>() * xd
            - xd * (xi.ln() + one)
            + (two + xd) * ((one - two * zeta - two * chi - xi).ln() + one)
            + (xd - R::int(4)) * ((one - two * chi + R::int(4) * zeta - xi).ln() + one)
            + (R::int(5) - xd) * ((R::int(10) * chi - R::lit(self.seven_halves) - R::int(5) * zeta + xi).ln() + one)
    }

    /// Partial ζ-derivative of `ln h` at fixed ξ. At `ξ = ξ₁` it equals
    /// the total derivative of `ln h₁`, since `∂ ln g/∂ξ` vanishes there.
    pub fn dlnh_dzeta<R: Real>(&self, chi: R, zeta: R, xi: R) -> R {
        let one = R::int(1);
        let two = R::int(2);
        let half = Self::half::<R>();
        R::int(2).ln() - R::int(4) * R::int(3).ln()
            + two * (two * chi + zeta - half).ln()
            - (half - chi - zeta).ln()
            + two * (half - chi + two * zeta).ln()
            - R::int(6) * (two * chi - R::int(3) * zeta - half).ln()
            + two * (one - two * chi - two * zeta - xi).ln()
            - R::int(4) * (one - two * chi + R::int(4) * zeta - xi).ln()
            + R::int(5) * (R::int(10) * chi - R::lit(self.seven_halves) - R::int(5) * zeta + xi).ln()
    }

    /// Partial χ-derivative of `ln h`, derived from the definitions of f and g.
    pub fn dlnh_dchi<R: Real>(&self, chi: R, zeta: R, xi: R) -> R {
        let one = R::int(1);
        let two = R::int(2);
        let half = Self::half::<R>();
        let u = one - two * chi - two * zeta;
        let v = one - two * chi + R::int(4) * zeta;
        R::int(8) * R::int(3).ln()
            + R::int(4) * (two * chi + zeta - half).ln()
            + R::int(4) * (two * chi - R::int(3) * zeta - half).ln()
            - u.ln()
            - v.ln()
            + two * (u - xi).ln()
            + two * (v - xi).ln()
            - R::int(10) * (R::int(10) * chi - R::int(5) * zeta + xi - R::lit(self.seven_halves)).ln()
    }

    /// `∂ ln h/∂χ` at `ξ = 0`, simplified so the `ln u` terms merge and the
    /// value stays finite on the boundary `u → 0`.
    pub fn dlnh_dchi_at_xi0<R: Real>(&self, chi: R, zeta: R) -> R {
        let u = R::int(1) - R::int(2) * chi - R::int(2) * zeta;
        self.dlnh_dchi_at_xi0_with_u(chi, zeta, u)
    }

    /// As [`ProofConstants::dlnh_dchi_at_xi0`] with `u = 1 − 2χ − 2ζ` supplied,
    /// so a caller can pass an enclosure already restricted to `u ≥ 0`.
    pub fn dlnh_dchi_at_xi0_with_u<R: Real>(&self, chi: R, zeta: R, u: R) -> R {
        let one = R::int(1);
        let two = R::int(2);
        let half = Self::half::<R>();
        let v = one - two * chi + R::int(4) * zeta;
        R::int(8) * R::int(3).ln()
            + R::int(4) * (two * chi + zeta - half).ln()
            + R::int(4) * (two * chi - R::int(3) * zeta - half).ln()
            + u.ln()
            + v.ln()
            - R::int(10) * (R::int(10) * chi - R::int(5) * zeta - R::lit(self.seven_halves)).ln()
    }

    /// The displayed terms `B₁ … B₆` of the χ-derivative decomposition.
    pub fn b_terms<R: Real>(&self, chi: R, zeta: R, xi: R) -> [R; 6] {
        let one = R::int(1);
        let two = R::int(2);
        let half = Self::half::<R>();
        let u = one - two * chi - two * zeta;
        let v = one - two * chi + R::int(4) * zeta;
        [
            R::int(4) * (two * chi - R::int(3) * zeta - half).ln(),
            R::int(4) * (two * chi + zeta - half).ln(),
            two * (u - xi).ln() - u.ln(),
            v.ln(),
            two * (v - xi).ln(),
            (R::int(10) * chi - R::int(5) * zeta + xi - R::lit(self.seven_halves)).ln(),
        ]
    }
}

/// Formulas on the slice `χ = χ₀`, written with the slice literals
/// `0.046, 0.092, 0.408, 1.04` exactly as in the case analysis.
pub struct Slice<'a> {
    pub k: &'a ProofConstants,
}

impl<'a> Slice<'a> {
    pub fn new(k: &'a ProofConstants) -> Self {
        Slice { k }
    }

    fn chi0<R: Real>(&self) -> R {
        R::lit(self.k.chi0)
    }

    pub fn xi1<R: Real>(&self, zeta: R) -> R {
        self.k.xi1(self.chi0(), zeta)
    }

    pub fn xi1_d1<R: Real>(&self, zeta: R) -> R {
        self.k.xi1_d1(self.chi0(), zeta)
    }

    pub fn xi1_d2<R: Real>(&self, zeta: R) -> R {
        self.k.xi1_d2(self.chi0(), zeta)
    }

    pub fn disc<R: Real>(&self, zeta: R) -> R {
        self.k.disc(self.chi0(), zeta)
    }

    pub fn disc_d1<R: Real>(&self, zeta: R) -> R {
        self.k.disc_d1(self.chi0(), zeta)
    }

    fn end<R: Real>(&self) -> R {
        R::lit(self.k.slice_end)
    }
    fn u0<R: Real>(&self) -> R {
        R::lit(self.k.slice_u)
    }
    fn r0<R: Real>(&self) -> R {
        R::lit(self.k.slice_r)
    }
    fn m0<R: Real>(&self) -> R {
        R::lit(self.k.slice_m)
    }

    /// `z₁(ζ) = 0.092 + 4ζ − ξ₁(ζ)`.
    pub fn z1<R: Real>(&self, zeta: R) -> R {
        self.u0::<R>() + R::int(4) * zeta - self.xi1(zeta)
    }

    /// `z₂(ζ) = 1.04 − 5ζ + ξ₁(ζ)`.
    pub fn z2<R: Real>(&self, zeta: R) -> R {
        self.m0::<R>() - R::int(5) * zeta + self.xi1(zeta)
    }

    /// `A₄(ζ) = 4/(0.046+2ζ) + 2/(0.408+ζ) + 18/(0.408−3ζ)`.
    pub fn a4<R: Real>(&self, zeta: R) -> R {
        R::int(4) / (self.end::<R>() + R::int(2) * zeta)
            + R::int(2) / (self.r0::<R>() + zeta)
            + R::int(18) / (self.r0::<R>() - R::int(3) * zeta)
    }

    pub fn a4_d1<R: Real>(&self, zeta: R) -> R {
        -(R::int(8) / (self.end::<R>() + R::int(2) * zeta).sqr()) - R::int(2) / (self.r0::<R>() + zeta).sqr()
            + R::int(54) / (self.r0::<R>() - R::int(3) * zeta).sqr()
    }

    pub fn a4_d2<R: Real>(&self, zeta: R) -> R {
        let cube = |t: R| t.sqr() * t;
        R::int(32) / cube(self.end::<R>() + R::int(2) * zeta)
            + R::int(4) / cube(self.r0::<R>() + zeta)
            + R::int(486) / cube(self.r0::<R>() - R::int(3) * zeta)
    }

    /// `A₁ … A₅` at ζ.
    pub fn a_terms<R: Real>(&self, zeta: R) -> [R; 5] {
        let two = R::int(2);
        let xi = self.xi1(zeta);
        let xd = self.xi1_d1(zeta);
        let xdd = self.xi1_d2(zeta);
        let y = self.u0::<R>() - two * zeta - xi;
        let z1 = self.z1(zeta);
        let z2 = self.z2(zeta);
        [
            R::int(1) / (self.end::<R>() - zeta) - xd.sqr() / xi - (two + xd).sqr() / y,
            xdd * y.ln() - xdd * xi.ln(),
            self.k.ln_four_over_weight::<R>() * xdd,
            self.a4(zeta),
            xdd * z1.ln() - (xd - R::int(4)).sqr() / z1 - xdd * z2.ln() - (xd - R::int(5)).sqr() / z2,
        ]
    }

    /// The displayed second derivative of `ln h₁` on the slice.
    pub fn d2lnh1<R: Real>(&self, zeta: R) -> R {
        let one = R::int(1);
        let two = R::int(2);
        let xi = self.xi1(zeta);
        let xd = self.xi1_d1(zeta);
        let xdd = self.xi1_d2(zeta);
        let y = self.u0::<R>() - two * zeta - xi;
        let z1 = self.z1(zeta);
        let z2 = self.z2(zeta);
        one / (self.end::<R>() - zeta)
            + R::int(4) / (self.end::<R>() + two * zeta)
            + two / (self.r0::<R>() + zeta)
            + R::int(18) / (self.r0::<R>() - R::int(3) * zeta)
            + self.k.ln_four_over_weight::<R>() * xdd
            - xdd * (xi.ln() + one)
            - xd.sqr() / xi
            + xdd * (y.ln() + one)
            - (two + xd).sqr() / y
            + xdd * (z1.ln() + one)
            - (xd - R::int(4)).sqr() / z1
            - xdd * (z2.ln() + one)
            - (xd - R::int(5)).sqr() / z2
    }

    /// The displayed first derivative of `ln h₁` on the slice.
    pub fn dlnh1<R: Real>(&self, zeta: R) -> R {
        let one = R::int(1);
        let two = R::int(2);
        let xi = self.xi1(zeta);
        let xd = self.xi1_d1(zeta);
        R::int(2).ln() - R::int(4) * R::int(3).ln() - R::int(3)
            + two * (self.r0::<R>() + zeta).ln()
            - (self.end::<R>() - zeta).ln()
            + two * (self.end::<R>() + two * zeta).ln()
            - R::int(6) * (self.r0::<R>() - R::int(3) * zeta).ln()
            + self.k.ln_four_over_weight::<R>() * xd
            - xd * (xi.ln() + one)
            + (two + xd) * ((self.u0::<R>() - two * zeta - xi).ln() + one)
            + (xd - R::int(4)) * ((self.z1(zeta)).ln() + one)
            + (R::int(5) - xd) * ((self.z2(zeta)).ln() + one)
    }

    pub fn ln_h1<R: Real>(&self, zeta: R) -> R {
        self.k.ln_h1(self.chi0(), zeta)
    }
}

/// A point `(χ, ζ, ξ)` of the exponent domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentPoint {
    pub chi: f64,
    pub zeta: f64,
    pub xi: f64,
}

impl ExponentPoint {
    pub fn new(chi: f64, zeta: f64, xi: f64) -> Self {
        ExponentPoint { chi, zeta, xi }
    }

    /// Checks membership in the closure of
    /// `Ω = {0.454 < χ ≤ 0.45537, 0 ≤ ζ ≤ 1/2 − χ, 0 ≤ ξ ≤ 1 − 2χ − 2ζ}`,
    /// naming the first violated constraint.
    pub fn check_domain(&self, k: &ProofConstants) -> Result<(), Error> {
        let (chi, zeta, xi) = (Interval::point(self.chi), Interval::point(self.zeta), Interval::point(self.xi));
        let half = Interval::ratio(1, 2);
        let lo = Interval::lit(k.chi0);
        let hi = Interval::lit(k.chi_max);
        let fail = |what: &str| Err(Error::Domain(format!("{what} violated at {self:?}")));
        if !(self.chi.is_finite() && self.zeta.is_finite() && self.xi.is_finite()) {
            return fail("finite coordinates");
        }
        if chi.hi() < lo.lo() {
            return fail("0.454 <= chi");
        }
        if chi.lo() > hi.hi() {
            return fail("chi <= 0.45537");
        }
        if self.zeta < 0.0 {
            return fail("0 <= zeta");
        }
        if (zeta - (half - chi)).lo() > 0.0 {
            return fail("zeta <= 1/2 - chi");
        }
        if self.xi < 0.0 {
            return fail("0 <= xi");
        }
        let u = Interval::point(1.0) - Interval::point(2.0) * chi - Interval::point(2.0) * zeta;
        if (xi - u).lo() > 0.0 {
            return fail("xi <= 1 - 2chi - 2zeta");
        }
        Ok(())
    }

    /// Point enclosures of the coordinates.
    fn args(&self) -> (Interval, Interval, Interval) {
        (
            Interval::point(self.chi),
            Interval::point(self.zeta),
            Interval::point(self.xi),
        )
    }
}

/// Enclosure of `f(χ, ζ)` at a domain point.
pub fn f_val(k: &ProofConstants, p: ExponentPoint) -> Result<Interval, Error> {
    p.check_domain(k)?;
    let (c, z, _) = p.args();
    Ok(k.ln_f(c, z).exp())
}

/// Enclosure of `g(χ, ζ, ξ)` at a domain point.
pub fn g_val(k: &ProofConstants, p: ExponentPoint) -> Result<Interval, Error> {
    p.check_domain(k)?;
    let (c, z, x) = p.args();
    Ok(k.ln_g(c, z, x).exp())
}

/// Enclosure of `h(χ, ζ, ξ)` at a domain point.
pub fn h_val(k: &ProofConstants, p: ExponentPoint) -> Result<Interval, Error> {
    p.check_domain(k)?;
    let (c, z, x) = p.args();
    Ok(k.ln_h(c, z, x).exp())
}

/// Quadratic-root state at `(χ, ζ)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadraticState {
    pub a: Interval,
    pub b: Interval,
    pub c: Interval,
    pub disc: Interval,
    pub xi1: Interval,
    pub xi1_d1: Interval,
    pub xi1_d2: Interval,
}

/// Evaluates `a, b, c, Δ, ξ₁, ξ₁′, ξ₁″` with interval enclosures.
pub fn xi1_state(k: &ProofConstants, chi: Interval, zeta: Interval) -> Result<QuadraticState, Error> {
    let disc = k.disc(chi, zeta);
    if !disc.certainly_gt(0.0) {
        return Err(Error::Domain(format!("discriminant enclosure {disc} is not positive")));
    }
    Ok(QuadraticState {
        a: k.quad_a(),
        b: k.quad_b(chi, zeta),
        c: k.quad_c(chi, zeta),
        disc,
        xi1: k.xi1(chi, zeta),
        xi1_d1: k.xi1_d1(chi, zeta),
        xi1_d2: k.xi1_d2(chi, zeta),
    })
}

/// Plain `f64` profile of `h₁` along ζ for a fixed χ: `(ζ, ξ₁, h₁)` samples
/// over `[0, 1/2 − χ]`.
pub fn h1_profile(k: &ProofConstants, chi: f64, samples: usize) -> Vec<(f64, f64, f64)> {
    let end = 0.5 - chi;
    let samples = samples.max(2);
    (0..samples)
        .map(|s| {
            let zeta = end * s as f64 / (samples - 1) as f64;
            let xi = k.xi1(chi, zeta).max(0.0);
            (zeta, xi, k.ln_h(chi, zeta, xi).exp())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_matches_expansion_of_p() {
        let k = ProofConstants::default();
        for &(chi, zeta) in &[(0.454, 0.0), (0.454, 0.02), (0.455, 0.03)] {
            let a: f64 = k.quad_a();
            let b: f64 = k.quad_b(chi, zeta);
            let c: f64 = k.quad_c(chi, zeta);
            for &xi in &[0.0, 0.01, 0.05] {
                let lhs = a * xi * xi + b * xi + c;
                let rhs = k.p(chi, zeta, xi);
                assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn xi1_forms_agree() {
        let k = ProofConstants::default();
        let a: f64 = k.xi1(0.454, 0.0);
        let b: f64 = k.xi1_textbook(0.454, 0.0);
        assert!((a - b).abs() < 1e-14);
        assert!((a - 0.0141960).abs() < 1e-6);
    }

    #[test]
    fn xi1_derivatives_match_finite_differences() {
        let k = ProofConstants::default();
        let h = 1e-6;
        for &z in &[0.005, 0.02, 0.04] {
            let fd1 = (k.xi1(0.454, z + h) - k.xi1(0.454, z - h)) / (2.0 * h);
            let d1: f64 = k.xi1_d1(0.454, z);
            assert!((fd1 - d1).abs() < 1e-6, "{fd1} vs {d1}");
            let fd2 = (k.xi1_d1(0.454, z + h) - k.xi1_d1(0.454, z - h)) / (2.0 * h);
            let d2: f64 = k.xi1_d2(0.454, z);
            assert!((fd2 - d2).abs() < 1e-4, "{fd2} vs {d2}");
        }
    }

    #[test]
    fn derivative_formulas_match_finite_differences() {
        let k = ProofConstants::default();
        let s = Slice::new(&k);
        let h = 1e-6;
        for &z in &[0.003, 0.0228718, 0.04] {
            let fd = (s.ln_h1(z + h) - s.ln_h1(z - h)) / (2.0 * h);
            let disp: f64 = s.dlnh1(z);
            let env: f64 = k.dlnh_dzeta(0.454, z, k.xi1(0.454, z));
            let gen: f64 = k.dlnh1_dzeta(0.454, z);
            assert!((fd - disp).abs() < 1e-6);
            assert!((fd - env).abs() < 1e-6);
            assert!((fd - gen).abs() < 1e-6);
            let fd2 = (s.dlnh1(z + h) - s.dlnh1(z - h)) / (2.0 * h);
            let d2: f64 = s.d2lnh1(z);
            assert!((fd2 - d2).abs() < 1e-3, "{fd2} vs {d2}");
            let sum: f64 = s.a_terms(z).iter().sum();
            assert!((sum - d2).abs() < 1e-9);
        }
        for &(c, z, x) in &[(0.4545, 0.01, 0.02), (0.455, 0.03, 0.0)] {
            let fd = (k.ln_h(c + h, z, x) - k.ln_h(c - h, z, x)) / (2.0 * h);
            let d: f64 = k.dlnh_dchi(c, z, x);
            assert!((fd - d).abs() < 1e-6, "{fd} vs {d}");
        }
    }

    #[test]
    fn domain_errors_name_the_constraint() {
        let k = ProofConstants::default();
        let e = h_val(&k, ExponentPoint::new(0.46, 0.0, 0.0)).unwrap_err();
        assert!(e.to_string().contains("0.45537"));
        let e = h_val(&k, ExponentPoint::new(0.454, 0.05, 0.0)).unwrap_err();
        assert!(e.to_string().contains("1/2 - chi"));
        let e = h_val(&k, ExponentPoint::new(0.454, 0.01, 0.08)).unwrap_err();
        assert!(e.to_string().contains("xi <="));
        assert!(h_val(&k, ExponentPoint::new(0.454, 0.046, 0.0)).is_ok());
    }

    #[test]
    fn parse_and_mutate() {
        assert_eq!(Literal::parse_decimal("+0.001").unwrap(), Literal::new(1, 1000));
        assert_eq!(Literal::parse_decimal("-2.5").unwrap(), Literal::new(-5, 2));
        assert!(Literal::parse_decimal("1e-3").is_err());
        let mut k = ProofConstants::default();
        k.mutate("b", Literal::new(1, 1000)).unwrap();
        assert_eq!(k.b, Literal::new(2338, 1000).ratio().into());
        assert!(k.mutate("nope", Literal::int(1)).is_err());
        assert_eq!(ProofConstants::NAMES.len(), ProofConstants::default().entries().len());
    }
}
