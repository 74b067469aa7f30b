//! Independent oracles shared by the integration tests: brute-force
//! enumeration over vertex subsets and a 70-digit fixed-point evaluator.

#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use indratio::exponent::Literal;
use indratio::graph::{self, named, Multigraph};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Adjacency bitmasks; a loop puts the vertex in its own mask.
fn masks(g: &Multigraph) -> Vec<u32> {
    assert!(g.n() <= 20, "brute force is limited to 20 vertices");
    let mut m = vec![0u32; g.n()];
    for &(u, v) in g.edges() {
        m[u] |= 1 << v;
        m[v] |= 1 << u;
    }
    m
}

fn independent(m: &[u32], set: u32) -> bool {
    (0..m.len()).all(|v| set >> v & 1 == 0 || m[v] & set == 0)
}

/// `(α, number of independent sets)` by checking every vertex subset.
pub fn brute_alpha_count(g: &Multigraph) -> (usize, u64) {
    let m = masks(g);
    let mut alpha = 0;
    let mut count = 0;
    for set in 0u32..(1 << g.n()) {
        if independent(&m, set) {
            count += 1;
            alpha = alpha.max(set.count_ones() as usize);
        }
    }
    (alpha, count)
}

/// Largest AI set (induced max degree ≤ 1) whose component count equals α,
/// by checking every subset. Returns its size.
pub fn brute_mai_size(g: &Multigraph, alpha: usize) -> usize {
    let m = masks(g);
    let mut best = 0;
    for set in 0u32..(1 << g.n()) {
        let size = set.count_ones() as usize;
        if size <= best {
            continue;
        }
        let mut edges2 = 0;
        let ai = (0..g.n()).all(|v| {
            if set >> v & 1 == 0 {
                return true;
            }
            let d = (m[v] & set).count_ones();
            edges2 += d;
            d <= 1
        });
        if ai && size - (edges2 / 2) as usize == alpha {
            best = size;
        }
    }
    best
}

/// Shortest cycle length by removing each edge and measuring the distance
/// between its ends; `None` for forests.
pub fn brute_girth(g: &Multigraph) -> Option<u32> {
    let n = g.n();
    let edges = g.edges();
    let mut best: Option<u32> = None;
    for (idx, &(u, v)) in edges.iter().enumerate() {
        if u == v {
            return Some(1);
        }
        let mut dist = vec![u32::MAX; n];
        dist[u] = 0;
        let mut queue = std::collections::VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for (k, &(a, b)) in edges.iter().enumerate() {
                if k == idx || a == b {
                    continue;
                }
                let y = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    continue;
                };
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if dist[v] != u32::MAX {
            let len = dist[v] + 1;
            best = Some(best.map_or(len, |b| b.min(len)));
        }
    }
    best
}

/// Random simple graph `G(n, p)`.
pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Multigraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Multigraph::from_edges(n, edges).unwrap()
}

/// Random simple graph of girth at least 5, grown edge by edge.
pub fn girth5_graph(n: usize, tries: usize, rng: &mut ChaCha8Rng) -> Multigraph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for _ in 0..tries {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v || edges.iter().any(|&(a, b)| (a, b) == (u.min(v), u.max(v))) {
            continue;
        }
        let mut cand = edges.clone();
        cand.push((u.min(v), u.max(v)));
        let g = Multigraph::from_edges(n, cand.clone()).unwrap();
        let deg_ok = g.degree(u) <= 3 && g.degree(v) <= 3;
        if deg_ok && graph::girth(&g).girth.at_least(5) {
            edges = cand;
        }
    }
    Multigraph::from_edges(n, edges).unwrap()
}

/// Fifty small graphs: named graphs, projected random pairings (with loops
/// and parallel edges) and random simple graphs, all with `n ≤ 20`.
pub fn corpus() -> Vec<(String, Multigraph)> {
    let mut out: Vec<(String, Multigraph)> = vec![
        ("petersen".into(), named::petersen()),
        ("heawood".into(), named::heawood()),
        ("k4".into(), named::complete(4)),
        ("k5".into(), named::complete(5)),
        ("c5".into(), named::cycle(5)),
        ("c6".into(), named::cycle(6)),
        ("c11".into(), named::cycle(11)),
        ("p1".into(), named::path(1)),
        ("p9".into(), named::path(9)),
        ("empty7".into(), named::empty(7)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..20 {
        let n = 2 * (2 + i % 9);
        let f = graph::sample_pairing(n, 100 + i as u64).unwrap();
        out.push((format!("pairing{n}_{i}"), graph::project(&f)));
    }
    for i in 0..20 {
        let n = 6 + i % 15;
        let p = [0.15, 0.3, 0.5][i % 3];
        out.push((format!("gnp{n}_{i}"), gnp(n, p, &mut rng)));
    }
    out
}

const DIGITS: u32 = 70;

fn scale() -> &'static BigInt {
    static S: OnceLock<BigInt> = OnceLock::new();
    S.get_or_init(|| BigInt::from(10).pow(DIGITS))
}

/// Fixed-point real with 70 decimal digits after the point. Every operation
/// truncates, so a short chain of operations stays accurate far beyond
/// 50 digits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx(pub BigInt);

impl Fx {
    pub fn int(v: i64) -> Self {
        Fx(BigInt::from(v) * scale())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Fx(BigInt::from(num) * scale() / BigInt::from(den))
    }

    pub fn lit(l: Literal) -> Self {
        Self::ratio(l.num, l.den)
    }

    pub fn dec(s: &str) -> Self {
        Self::lit(Literal::parse_decimal(s).unwrap())
    }

    /// Exact value of an `f64`.
    pub fn from_f64(x: f64) -> Self {
        let r = BigRational::from_float(x).unwrap();
        Fx(r.numer() * scale() / r.denom())
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.0.clone(), scale().clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Fx {
        Fx(self.0.abs())
    }

    pub fn sqrt(&self) -> Fx {
        assert!(!self.0.is_negative(), "sqrt of a negative value");
        Fx((&self.0 * scale()).sqrt())
    }

    pub fn ln2() -> Fx {
        static L: OnceLock<Fx> = OnceLock::new();
        L.get_or_init(|| Fx::int(2) * atanh(&Fx::ratio(1, 3))).clone()
    }

    /// `ln x = k ln 2 + 2 atanh((y − 1)/(y + 1))` with `y = x/2^k ∈ [3/4, 3/2)`.
    pub fn ln(&self) -> Fx {
        assert!(self.0 > BigInt::zero(), "ln of a non-positive value");
        let mut y = self.clone();
        let mut k = 0i64;
        let lo = Fx::ratio(3, 4);
        let hi = Fx::ratio(3, 2);
        while y >= hi {
            y = Fx(y.0 / 2);
            k += 1;
        }
        while y < lo {
            y = Fx(y.0 * 2);
            k -= 1;
        }
        let t = (y.clone() - Fx::int(1)) / (y + Fx::int(1));
        Fx::int(k) * Fx::ln2() + Fx::int(2) * atanh(&t)
    }

    /// `exp x = 2^k · exp(r)^(2^8)` with Taylor series on `r/2^8`.
    pub fn exp(&self) -> Fx {
        let k = (self.clone() / Fx::ln2()).to_f64().round() as i64;
        let r = self.clone() - Fx::int(k) * Fx::ln2();
        let small = Fx(r.0 / 256);
        let mut term = Fx::int(1);
        let mut sum = Fx::int(1);
        for i in 1..200 {
            term = term * small.clone() / Fx::int(i);
            if term.0.is_zero() {
                break;
            }
            sum = sum + term.clone();
        }
        for _ in 0..8 {
            sum = sum.clone() * sum;
        }
        if k >= 0 {
            Fx(sum.0 * BigInt::from(2).pow(k as u32))
        } else {
            Fx(sum.0 / BigInt::from(2).pow((-k) as u32))
        }
    }

    /// `t ln t` with `0 ln 0 = 0`.
    pub fn xlogx(&self) -> Fx {
        if self.0.is_zero() {
            Fx::int(0)
        } else {
            self.clone() * self.ln()
        }
    }

    /// Whether the exact `f64` interval `[lo, hi]` contains this value,
    /// allowing `slack` for the oracle's own truncation error.
    pub fn inside(&self, lo: f64, hi: f64, slack: &Fx) -> bool {
        if !(lo.is_finite() || lo == f64::NEG_INFINITY) || hi.is_nan() {
            return false;
        }
        let above = lo == f64::NEG_INFINITY || Fx::from_f64(lo) <= self.clone() + slack.clone();
        let below = hi == f64::INFINITY || self.clone() - slack.clone() <= Fx::from_f64(hi);
        above && below
    }
}

fn atanh(t: &Fx) -> Fx {
    let t2 = t.clone() * t.clone();
    let mut pow = t.clone();
    let mut sum = Fx::int(0);
    let mut k = 1i64;
    while !pow.0.is_zero() {
        sum = sum + Fx(pow.0.clone() / BigInt::from(k));
        pow = pow * t2.clone();
        k += 2;
    }
    sum
}

impl Add for Fx {
    type Output = Fx;
    fn add(self, r: Fx) -> Fx {
        Fx(self.0 + r.0)
    }
}

impl Sub for Fx {
    type Output = Fx;
    fn sub(self, r: Fx) -> Fx {
        Fx(self.0 - r.0)
    }
}

impl Mul for Fx {
    type Output = Fx;
    fn mul(self, r: Fx) -> Fx {
        Fx(self.0 * r.0 / scale())
    }
}

impl Div for Fx {
    type Output = Fx;
    fn div(self, r: Fx) -> Fx {
        Fx(self.0 * scale() / r.0)
    }
}

impl Neg for Fx {
    type Output = Fx;
    fn neg(self) -> Fx {
        Fx(-self.0)
    }
}

/// `10^(-e)` as a fixed-point value.
pub fn tiny(e: u32) -> Fx {
    Fx(scale() / BigInt::from(10).pow(e))
}

/// The exponent function transcribed from the definitions of `f` and `g`
/// as a product of powers `base^exponent`, evaluated in fixed point. The
/// stationarity quadratic is rebuilt from `p(ξ)` rather than from the
/// expanded coefficients, and derivatives are central differences.
pub mod oracle {
    use super::Fx;

    fn f(s: &str) -> Fx {
        Fx::dec(s)
    }

    /// `ln h(χ, ζ, ξ)`.
    pub fn ln_h(chi: &Fx, zeta: &Fx, xi: &Fx) -> Fx {
        let one = Fx::int(1);
        let two = Fx::int(2);
        let half = f("0.5");
        let c = chi.clone();
        let z = zeta.clone();
        let x = xi.clone();
        let lin = |a: &str, kc: i64, kz: i64, kx: i64| {
            f(a) + Fx::int(kc) * c.clone() + Fx::int(kz) * z.clone() + Fx::int(kx) * x.clone()
        };
        // (base, exponent) pairs where base = exponent: the t^t factors.
        let self_powers_num = [lin("1", -2, -2, 0), lin("1", -2, 4, 0), lin("-1.5", 6, 3, 0), lin("-1.5", 6, -9, 0)];
        let self_powers_den = [
            lin("-0.5", 2, 1, 0),
            lin("0.5", -1, -1, 0),
            lin("0.5", -1, 2, 0),
            lin("-0.5", 2, -3, 0),
            x.clone(),
            lin("1", -2, -2, -1),
            lin("1", -2, 4, -1),
            lin("-3.5", 10, -5, 1),
        ];
        let mut total = (half - Fx::int(4) * c.clone() + two.clone() * z.clone()) * Fx::int(3).ln()
            - (one - two.clone() * c.clone() + z.clone()) * two.clone().ln()
            + two.clone() * x.clone() * Fx::int(2).ln()
            - x.clone() * f("1.618").ln();
        for t in self_powers_num {
            total = total + t.xlogx();
        }
        for t in self_powers_den {
            total = total - t.xlogx();
        }
        total
    }

    /// `(a, b, c)` of `p(ξ) = 4(u − ξ)(v − ξ) − 1.618 ξ (m + ξ)`.
    pub fn quad(chi: &Fx, zeta: &Fx) -> (Fx, Fx, Fx) {
        let u = Fx::int(1) - Fx::int(2) * chi.clone() - Fx::int(2) * zeta.clone();
        let v = Fx::int(1) - Fx::int(2) * chi.clone() + Fx::int(4) * zeta.clone();
        let m = Fx::int(10) * chi.clone() - Fx::int(5) * zeta.clone() - f("3.5");
        let w = f("1.618");
        let a = Fx::int(4) - w.clone();
        let b = -(Fx::int(4) * (u.clone() + v.clone())) - w * m;
        let c = Fx::int(4) * u * v;
        (a, b, c)
    }

    pub fn disc(chi: &Fx, zeta: &Fx) -> Fx {
        let (a, b, c) = quad(chi, zeta);
        b.clone() * b - Fx::int(4) * a * c
    }

    /// Smaller root in the textbook form.
    pub fn xi1(chi: &Fx, zeta: &Fx) -> Fx {
        let (a, b, _) = quad(chi, zeta);
        (-b - disc(chi, zeta).sqrt()) / (Fx::int(2) * a)
    }

    pub fn ln_h1(chi: &Fx, zeta: &Fx) -> Fx {
        ln_h(chi, zeta, &xi1(chi, zeta))
    }

    /// Central first difference with step `10^(-e)`.
    pub fn d1(fun: &dyn Fn(&Fx) -> Fx, at: &Fx, e: u32) -> Fx {
        let h = super::tiny(e);
        (fun(&(at.clone() + h.clone())) - fun(&(at.clone() - h.clone()))) / (Fx::int(2) * h)
    }

    /// Central second difference with step `10^(-e)`.
    pub fn d2(fun: &dyn Fn(&Fx) -> Fx, at: &Fx, e: u32) -> Fx {
        let h = super::tiny(e);
        let mid = fun(at);
        (fun(&(at.clone() + h.clone())) - Fx::int(2) * mid + fun(&(at.clone() - h.clone()))) / (h.clone() * h)
    }
}
