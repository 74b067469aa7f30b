//! Rigorous interval certificate for `max_Ω h ≤ 0.999983`.
//!
//! The argument runs in three steps:
//!
//! 1. `ln h` is decreasing in χ on Ω, so the maximum sits on the slice
//!    `χ = 0.454` (the `chi_slope.*` claims).
//! 2. On the slice, `ξ ↦ h` peaks at the smaller root `ξ₁(ζ)` of the
//!    stationarity quadratic, leaving the one-variable function `h₁(ζ)`
//!    (the `quadratic.*` claims).
//! 3. `ln h₁` is concave on `[0, 0.046]` (`xi1_d2.*` through `concavity.*`), its
//!    derivative changes sign inside `[0.0228718, 0.0228719]`
//!    (`zeta_star.*`), and an adaptive cover of the slice bounds `h₁`
//!    directly (`final.*`).
//!
//! Each sub-claim stores the enclosure it was decided on together with the
//! relation it had to satisfy, so a serialized report can be re-checked
//! without recomputation. Entries under `notes` record literal chains from
//! the source argument that do not hold as printed; they never gate.

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exponent::{Literal, ProofConstants, Real, Slice};
use crate::interval::Interval;
use crate::Error;

/// Version of the JSON layout of [`CertificateReport`].
pub const SCHEMA_VERSION: u32 = 1;

/// Target of the final bound.
pub const H_BOUND: &str = "0.999983";

/// Column headers of the value tables.
pub const COLUMNS: [&str; 6] = [
    "A4",
    "-ln z1",
    "ln z2",
    "-(xi1'-4)^2/z1",
    "-(xi1'-5)^2/z2",
    "M",
];

/// Printed value-table rows: `k` and the six columns as printed.
const PRINTED: [(u32, [&str; 6]); 45] = [
    (0, ["135.9762", "2.553562", "0.05277836", "-166.7356", "-20.83335", "19.7"]),
    (1, ["132.6679", "2.507105", "0.04831009", "-161.790", "-21.1686", "19.6"]),
    (2, ["129.6543", "2.462392", "0.04379588", "-157.2333", "-21.50947", "19.5"]),
    (3, ["126.903", "2.419288", "0.03923514", "-153.0194", "-21.85574", "19.3"]),
    (4, ["124.384", "2.377674", "0.03462729", "-149.1122", "-22.20758", "19.1"]),
    (5, ["122.0728", "2.33745", "0.02997174", "-145.4794", "-22.56505", "18.8"]),
    (6, ["119.9504", "2.298492", "0.02526786", "-142.0935", "-22.92824", "18.5"]),
    (7, ["117.9977", "2.260743", "0.02051507", "-138.9302", "-23.29722", "18.2"]),
    (8, ["116.1989", "2.224115", "0.01571273", "-135.9683", "-23.67205", "17.8"]),
    (9, ["114.5404", "2.188538", "0.01086022", "-133.1892", "-24.05282", "17.5"]),
    (10, ["113.0099", "2.153948", "0.005956888", "-130.5765", "-24.43961", "17.1"]),
    (11, ["111.5969", "2.120286", "0.001002109", "-128.1157", "-24.83248", "16.7"]),
    (12, ["110.292", "2.0876", "-0.004004782", "-125.793", "-25.23152", "16.3"]),
    (13, ["109.0867", "2.055542", "-0.009064451", "-123.5994", "-25.63682", "15.8"]),
    (14, ["107.9738", "2.024367", "-0.01417756", "-121.5220", "-26.04845", "15.4"]),
    (15, ["106.9466", "1.993934", "-0.01934483", "-119.5525", "-26.4664", "15.0"]),
    (16, ["106.000", "1.964204", "-0.02456692", "-117.6823", "-26.89104", "14.5"]),
    (17, ["105.1262", "1.935144", "-0.02984456", "-115.9041", "-27.32218", "14.0"]),
    (18, ["104.3229", "1.90673", "-0.03517846", "-114.2111", "-27.76000", "13.6"]),
    (19, ["103.585", "1.878905", "-0.04056935", "-112.5970", "-28.20460", "13.1"]),
    (20, ["102.9088", "1.851668", "-0.04601797", "-111.0562", "-28.65606", "12.6"]),
    (21, ["102.2906", "1.824985", "-0.05152507", "-109.5836", "-29.1144", "12.1"]),
    (22, ["101.7273", "1.798832", "-0.05709143", "-108.1746", "-29.57998", "11.6"]),
    (23, ["101.217", "1.773185", "-0.06271781", "-106.8248", "-30.05263", "11.1"]),
    (24, ["100.7543", "1.748024", "-0.06840502", "-105.5304", "-30.53255", "10.7"]),
    (25, ["100.3398", "1.723329", "-0.07415386", "-104.2877", "-31.01984", "10.2"]),
    (26, ["99.97009", "1.699082", "-0.07996514", "-103.0934", "-31.51462", "9.7"]),
    (27, ["99.64358", "1.675265", "-0.08583972", "-101.9446", "-32.016", "9.2"]),
    (28, ["99.3585", "1.651862", "-0.09177843", "-100.8383", "-32.52708", "8.7"]),
    (29, ["99.11297", "1.628858", "-0.09778215", "-99.77206", "-33.04501", "8.2"]),
    (30, ["98.90584", "1.606239", "-0.1038517", "-98.74333", "-33.5708", "7.7"]),
    (31, ["98.7358", "1.583989", "-0.1099881", "-97.74996", "-34.10486", "7.2"]),
    (32, ["98.6015", "1.562098", "-0.1161922", "-96.78986", "-34.64704", "6.7"]),
    (33, ["98.50187", "1.54056", "-0.122464", "-95.86113", "-35.19758", "6.3"]),
    (34, ["98.43615", "1.519339", "-0.1288073", "-94.96198", "-35.75661", "5.8"]),
    (36, ["98.43379", "1.477873", "-0.1417047", "-93.24588", "-36.90074", "4.9"]),
    (37, ["98.49569", "1.457599", "-0.1482617", "-92.42593", "-37.48615", "4.4"]),
    (38, ["98.58802", "1.437619", "-0.1548924", "-91.62957", "-38.08066", "4.0"]),
    (39, ["98.71033", "1.417923", "-0.1615978", "-90.85551", "-38.68445", "3.6"]),
    (40, ["98.86225", "1.398503", "-0.1683790", "-90.1025", "-39.29768", "3.1"]),
    (41, ["99.04347", "1.379352", "-0.1752370", "-89.36971", "-39.92054", "2.7"]),
    (42, ["99.25376", "1.36046", "-0.1821731", "-88.65582", "-40.55321", "2.3"]),
    (43, ["99.49293", "1.341822", "-0.1891883", "-87.95995", "-41.1958", "1.9"]),
    (44, ["99.76085", "1.323429", "-0.1962838", "-87.28121", "-41.84877", "1.5"]),
    (45, ["100.0576", "1.305276", "-0.2034610", "-86.61873", "-42.51206", "1.1"]),
];

/// Absolute tolerance for table cells printed with at least four decimals.
pub const CELL_TOLERANCE: f64 = 5e-4;

/// Cells printed with fewer decimals are upper bounds rounded outward; they
/// may exceed the computed value by this many units of the last place.
pub const COARSE_CELL_UNITS: f64 = 2.0;

fn dec(s: &str) -> Literal {
    Literal::parse_decimal(s).expect("static decimal literal")
}

fn lit(l: Literal) -> Interval {
    Interval::lit(l)
}

fn ratio(r: Ratio<i64>) -> Interval {
    Interval::ratio(*r.numer(), *r.denom())
}

/// An interval written with textual endpoints so NaN and infinities survive
/// a JSON round trip.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl From<Interval> for Enclosure {
    fn from(i: Interval) -> Self {
        Enclosure { lo: i.lo(), hi: i.hi() }
    }
}

impl Enclosure {
    pub fn interval(self) -> Interval {
        Interval::new(self.lo, self.hi)
    }
}

#[derive(Serialize, Deserialize)]
struct EnclosureText {
    lo: String,
    hi: String,
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EnclosureText {
            lo: format!("{:?}", self.lo),
            hi: format!("{:?}", self.hi),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Enclosure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = EnclosureText::deserialize(d)?;
        let parse = |v: &str| v.parse::<f64>().map_err(serde::de::Error::custom);
        Ok(Enclosure {
            lo: parse(&t.lo)?,
            hi: parse(&t.hi)?,
        })
    }
}

/// Relation an enclosure must satisfy. Bounds are exact rationals, compared
/// against their own outward enclosure so a pass is never due to rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Lt(Literal),
    Le(Literal),
    Gt(Literal),
    Ge(Literal),
    /// Closed range.
    Within(Literal, Literal),
    /// Open range.
    Between(Literal, Literal),
    /// The enclosure contains the value.
    Contains(Literal),
}

impl Relation {
    pub fn holds(self, e: Interval) -> bool {
        if !e.is_valid() {
            return false;
        }
        match self {
            Relation::Lt(b) => e.hi() < lit(b).lo(),
            Relation::Le(b) => e.hi() <= lit(b).lo(),
            Relation::Gt(b) => e.lo() > lit(b).hi(),
            Relation::Ge(b) => e.lo() >= lit(b).hi(),
            Relation::Within(a, b) => e.lo() >= lit(a).hi() && e.hi() <= lit(b).lo(),
            Relation::Between(a, b) => e.lo() > lit(a).hi() && e.hi() < lit(b).lo(),
            Relation::Contains(v) => {
                let v = lit(v);
                e.lo() <= v.lo() && v.hi() <= e.hi()
            }
        }
    }

    fn describe(self) -> String {
        let d = |l: Literal| format!("{}", l.to_f64());
        match self {
            Relation::Lt(b) => format!("< {}", d(b)),
            Relation::Le(b) => format!("<= {}", d(b)),
            Relation::Gt(b) => format!("> {}", d(b)),
            Relation::Ge(b) => format!(">= {}", d(b)),
            Relation::Within(a, b) => format!("in [{}, {}]", d(a), d(b)),
            Relation::Between(a, b) => format!("in ({}, {})", d(a), d(b)),
            Relation::Contains(v) => format!("contains {}", d(v)),
        }
    }
}

/// One decided sub-claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub claim_id: String,
    pub statement: String,
    pub enclosure: Enclosure,
    pub relation: Relation,
    pub pass: bool,
}

impl Claim {
    fn new(id: &str, statement: &str, e: Interval, relation: Relation) -> Self {
        Claim {
            claim_id: id.to_string(),
            statement: statement.to_string(),
            enclosure: e.into(),
            relation,
            pass: relation.holds(e),
        }
    }

    fn recheck(&self) -> bool {
        self.relation.holds(self.enclosure.interval())
    }
}

/// One printed table cell compared with its computed enclosure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub column: String,
    pub printed: String,
    pub computed: Enclosure,
    /// `|printed − computed| ≤ 5e-4`, reported for every cell.
    pub within_tolerance: bool,
    /// Cell-specific acceptance, see [`cell_passes`].
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    /// 1 for `k ≤ 34` (A₄ at the left end), 2 for `k ≥ 36` (A₄ at the right end).
    pub table: u8,
    pub k: u32,
    pub cells: Vec<TableCell>,
    /// The computed `M(k)` is certainly below 20.
    pub m_below_20: bool,
    pub pass: bool,
}

impl TableRow {
    fn recheck(&self) -> bool {
        let cells_ok = self
            .cells
            .iter()
            .enumerate()
            .all(|(col, c)| c.pass == cell_passes(col, &c.printed, c.computed.interval()).1 && c.pass);
        let m = self.cells.last().map(|c| c.computed.interval()).unwrap_or(Interval::INVALID);
        cells_ok && self.m_below_20 == m.certainly_lt(20.0) && self.m_below_20
    }
}

fn printed_decimals(s: &str) -> usize {
    s.split_once('.').map_or(0, |(_, f)| f.len())
}

/// `(within 5e-4, accepted)` for a printed cell.
///
/// Columns printed with at least four decimals must agree to `5e-4`. Coarser
/// cells are upper bounds rounded outward: the printed value must not be
/// below the computed enclosure and may exceed it by at most
/// [`COARSE_CELL_UNITS`] units of the last printed place. The `M` column is a
/// one-decimal upper bound and must lie in `[M, M + 0.1)`.
pub fn cell_passes(col: usize, printed: &str, computed: Interval) -> (bool, bool) {
    let Ok(p) = printed.parse::<f64>() else {
        return (false, false);
    };
    if !computed.is_valid() {
        return (false, false);
    }
    let strict = (p - computed.lo()).abs() <= CELL_TOLERANCE && (computed.hi() - p).abs() <= CELL_TOLERANCE;
    let decimals = printed_decimals(printed);
    let ok = if col == 5 {
        computed.hi() <= p && p < computed.lo() + 0.1
    } else if decimals >= 4 {
        strict
    } else {
        let unit = 10f64.powi(-(decimals as i32));
        computed.hi() <= p && p <= computed.lo() + COARSE_CELL_UNITS * unit
    };
    (strict, ok)
}

/// The six table quantities for row `k` over the cell `[kδ, (k+1)δ]`.
///
/// `A₄` is taken at the left end for `k ≤ 34` and at the right end for
/// `k ≥ 35`, following the sign change of `A₄′` inside `[0.035, 0.036]`.
pub fn table_row(k: &ProofConstants, row: u32) -> Result<[Interval; 6], Error> {
    if row > 45 {
        return Err(Error::InvalidArgument(format!("table row k = {row} is outside 0..=45")));
    }
    let s = Slice::new(k);
    let step = lit(k.grid_step);
    let left = Interval::point(row as f64) * step;
    let right = Interval::point((row + 1) as f64) * step;
    let a4 = if row <= 34 { s.a4(left) } else { s.a4(right) };
    let xd = s.xi1_d1(left);
    let c1 = -s.z1(left).ln();
    let c2 = s.z2(left).ln();
    let c3 = -(xd - Interval::point(4.0)).sqr() / s.z1(right);
    let c4 = -(xd - Interval::point(5.0)).sqr() / s.z2(left);
    let m = a4 + lit(k.xi2_bound) * (c1 + c2) + c3 + c4;
    Ok([a4, c1, c2, c3, c4, m])
}

/// Row of the left-end table, `0 ≤ k ≤ 34`.
pub fn table_row_m1(k: &ProofConstants, row: u32) -> Result<[Interval; 6], Error> {
    if row > 34 {
        return Err(Error::InvalidArgument(format!("left-end table covers k = 0..=34, got {row}")));
    }
    table_row(k, row)
}

/// Row of the right-end table, `36 ≤ k ≤ 45`.
pub fn table_row_m3(k: &ProofConstants, row: u32) -> Result<[Interval; 6], Error> {
    if !(36..=45).contains(&row) {
        return Err(Error::InvalidArgument(format!("right-end table covers k = 36..=45, got {row}")));
    }
    table_row(k, row)
}

/// Upper bound on `A₄ + A₅` over `[0.035, 0.036]` assembled from the
/// rounded bounds of the case analysis.
pub fn case2_bound(k: &ProofConstants) -> Interval {
    lit(dec("98.404")) - lit(k.xi2_bound) * (lit(dec("-1.5")) - lit(dec("-0.135"))) - lit(dec("94"))
        - lit(dec("36.3"))
}

/// Outcome of an adaptive cover.
struct Cover {
    hull: Interval,
    cells: usize,
    failed: usize,
}

/// Most evaluations one cover may spend before it stops refining.
const COVER_BUDGET: usize = 20_000;

/// Evaluates `eval` on pieces of `root`, bisecting any piece `accept` rejects,
/// down to `max_depth` levels or until [`COVER_BUDGET`] runs out.
fn cover(
    root: &[Interval],
    max_depth: u32,
    eval: &dyn Fn(Interval) -> Interval,
    accept: &dyn Fn(Interval) -> bool,
) -> Cover {
    let mut out = Cover {
        hull: Interval::INVALID,
        cells: 0,
        failed: 0,
    };
    let mut first = true;
    let mut evals = 0;
    let mut stack: Vec<(Interval, u32)> = root.iter().map(|&c| (c, 0)).collect();
    while let Some((cell, depth)) = stack.pop() {
        let v = eval(cell);
        evals += 1;
        if !accept(v) && depth < max_depth && cell.width() > 0.0 && evals < COVER_BUDGET {
            let (a, b) = cell.bisect();
            stack.push((a, depth + 1));
            stack.push((b, depth + 1));
            continue;
        }
        out.cells += 1;
        if !accept(v) {
            out.failed += 1;
        }
        out.hull = if first { v } else { out.hull.hull(v) };
        first = false;
    }
    out
}

/// `[0, 1/2 − χ₀]` as a union of `parts` cells; the right end is rounded up.
fn slice_cells(k: &ProofConstants, parts: usize) -> Vec<Interval> {
    Interval::new(0.0, lit(k.slice_end).hi()).split(parts)
}

/// Affine form `c0 + cχ·χ + cζ·ζ + cξ·ξ` with rational coefficients.
#[derive(Clone, Copy)]
struct Affine([Ratio<i64>; 4]);

impl Affine {
    fn new(c0: Ratio<i64>, chi: i64, zeta: i64, xi: i64) -> Self {
        Affine([c0, Ratio::from(chi), Ratio::from(zeta), Ratio::from(xi)])
    }

    fn at(&self, p: &[Ratio<i64>; 3]) -> Ratio<i64> {
        self.0[0] + self.0[1] * p[0] + self.0[2] * p[1] + self.0[3] * p[2]
    }

    /// Exact range over the vertices of a polytope.
    fn range(&self, vertices: &[[Ratio<i64>; 3]]) -> (Ratio<i64>, Ratio<i64>) {
        let vals: Vec<_> = vertices.iter().map(|v| self.at(v)).collect();
        let lo = *vals.iter().min().expect("non-empty vertex list");
        let hi = *vals.iter().max().expect("non-empty vertex list");
        (lo, hi)
    }
}

/// Vertices of the closure of Ω: for each χ end, `(χ, 0, 0)`,
/// `(χ, 1/2 − χ, 0)` and `(χ, 0, 1 − 2χ)`.
fn omega_vertices(k: &ProofConstants) -> Vec<[Ratio<i64>; 3]> {
    let zero = Ratio::from(0);
    let half = Ratio::new(1, 2);
    let one = Ratio::from(1);
    let mut v = Vec::new();
    for chi in [k.chi0.ratio(), k.chi_max.ratio()] {
        v.push([chi, zero, zero]);
        v.push([chi, half - chi, zero]);
        v.push([chi, zero, one - Ratio::from(2) * chi]);
    }
    v
}

fn range_interval(r: (Ratio<i64>, Ratio<i64>)) -> Interval {
    ratio(r.0).hull(ratio(r.1))
}

/// Claims and notes collected while certifying.
struct Sink {
    claims: Vec<Claim>,
    notes: Vec<Claim>,
}

impl Sink {
    fn claim(&mut self, id: &str, statement: &str, e: Interval, r: Relation) -> Interval {
        self.claims.push(Claim::new(id, statement, e, r));
        e
    }

    fn note(&mut self, id: &str, statement: &str, e: Interval, r: Relation) {
        self.notes.push(Claim::new(id, statement, e, r));
    }

    fn exact_zero(&mut self, id: &str, statement: &str, diff: Ratio<i64>) {
        self.claim(id, statement, ratio(diff), Relation::Contains(Literal::int(0)));
    }
}

fn consistency(k: &ProofConstants, s: &mut Sink) {
    let r = |l: Literal| l.ratio();
    let half = Ratio::new(1, 2);
    let one = Ratio::from(1);
    let two = Ratio::from(2);
    let w = r(k.weight);
    let h = r(k.seven_halves);
    s.exact_zero("consistency.a", "a = 4 − weight", r(k.a) - (Ratio::from(4) - w));
    // p(ξ) = 4(u − ξ)(v − ξ) − w ξ (m + ξ) expands to aξ² + bξ + c.
    s.exact_zero("consistency.b_chi", "b_chi = 10·weight − 16", r(k.b_chi) - (Ratio::from(10) * w - Ratio::from(16)));
    s.exact_zero("consistency.b_zeta", "b_zeta = 5·weight − 8", r(k.b_zeta) - (Ratio::from(5) * w - Ratio::from(8)));
    s.exact_zero("consistency.b", "b = 8 − weight·7/2", r(k.b) - (Ratio::from(8) - w * h));
    for (id, v, want) in [
        ("consistency.c_chi2", k.c_chi2, 16),
        ("consistency.c_zeta2", k.c_zeta2, 32),
        ("consistency.c_chi", k.c_chi, 16),
        ("consistency.c_zeta", k.c_zeta, 8),
        ("consistency.c_chi_zeta", k.c_chi_zeta, 16),
        ("consistency.c", k.c, 4),
    ] {
        s.exact_zero(id, "c = 4(1 − 2χ − 2ζ)(1 − 2χ + 4ζ) coefficient", r(v) - Ratio::from(want));
    }
    s.exact_zero("consistency.seven_halves", "the last factorial argument offset is 7/2", h - Ratio::new(7, 2));
    let chi0 = r(k.chi0);
    let chi_max = r(k.chi_max);
    s.exact_zero("consistency.slice_end", "0.046 = 1/2 − χ₀", r(k.slice_end) - (half - chi0));
    s.exact_zero("consistency.slice_u", "0.092 = 1 − 2χ₀", r(k.slice_u) - (one - two * chi0));
    s.exact_zero("consistency.slice_r", "0.408 = 2χ₀ − 1/2", r(k.slice_r) - (two * chi0 - half));
    s.exact_zero("consistency.slice_m", "1.04 = 10χ₀ − 7/2", r(k.slice_m) - (Ratio::from(10) * chi0 - h));
    s.exact_zero("consistency.corner_zeta", "0.04463 = 1/2 − χmax", r(k.corner_zeta) - (half - chi_max));
    s.exact_zero("consistency.corner_xi", "0.08926 = 1 − 2χmax", r(k.corner_xi) - (one - two * chi_max));
    s.exact_zero("consistency.grid", "46 cells of width δ tile [0, 0.046]", Ratio::from(46) * r(k.grid_step) - r(k.slice_end));
    s.claim(
        "consistency.chi_order",
        "0.454 < 0.45537",
        ratio(chi_max - chi0),
        Relation::Gt(Literal::int(0)),
    );
    for (id, lo, hi) in [
        ("consistency.zeta_xi_bracket", k.zeta_xi_lo, k.zeta_xi_hi),
        ("consistency.d_zeta_bracket", k.d_zeta_lo, k.d_zeta_hi),
        ("consistency.zeta_star_bracket", k.zeta_star_lo, k.zeta_star_hi),
    ] {
        let inside = r(lo) > Ratio::from(0) && r(hi) < r(k.slice_end);
        let e = if inside { ratio(r(hi) - r(lo)) } else { Interval::INVALID };
        s.claim(id, "bracket is ordered and inside (0, 0.046)", e, Relation::Gt(Literal::int(0)));
    }
}

fn quadratic(k: &ProofConstants, s: &mut Sink) {
    let chi = lit(k.chi0);
    let mut order = Interval::INVALID;
    let mut root = Interval::INVALID;
    let mut at_u = Interval::INVALID;
    let mut first = true;
    for row in 0..46 {
        let zeta = Interval::point(row as f64) * lit(k.grid_step);
        let u = Interval::point(1.0) - Interval::point(2.0) * chi - Interval::point(2.0) * zeta;
        let x1 = k.xi1(chi, zeta);
        let x2 = k.xi2(chi, zeta);
        // min(u − ξ₁, ξ₂ − u) as an enclosure of the smaller gap
        let gap = {
            let a = u - x1;
            let b = x2 - u;
            Interval::new(a.lo().min(b.lo()), a.hi().min(b.hi()))
        };
        let p_root = k.p(chi, zeta, x1);
        let p_u = k.p(chi, zeta, u);
        if first {
            order = gap;
            root = p_root;
            at_u = p_u;
            first = false;
        } else {
            order = order.hull(gap);
            root = root.hull(p_root);
            at_u = at_u.hull(p_u);
        }
    }
    s.claim(
        "quadratic.root_order",
        "ξ₁ ≤ 1 − 2χ − 2ζ ≤ ξ₂ at every grid point of the slice",
        order,
        Relation::Ge(Literal::int(0)),
    );
    s.claim("quadratic.root", "p(ξ₁) = 0 at every grid point", root, Relation::Contains(Literal::int(0)));
    s.claim("quadratic.p_at_u", "p(1 − 2χ − 2ζ) ≤ 0 at every grid point", at_u, Relation::Le(Literal::int(0)));
    let b = k.quad_b(chi, Interval::ZERO).hull(k.quad_b(chi, lit(k.slice_end)));
    s.claim("quadratic.b_negative", "b < 0 on the slice (b is affine in ζ)", b, Relation::Lt(Literal::int(0)));
}

/// Certified enclosures reused by later claims.
struct SliceFacts {
    xi1_d1_at_0: Interval,
    xi1_d1_at_end: Interval,
}

fn xi1_curvature(k: &ProofConstants, s: &mut Sink) -> SliceFacts {
    let sl = Slice::new(k);
    let zero = Interval::ZERO;
    let end = lit(k.slice_end);
    let d1_0 = s.claim("xi1_d2.delta_d1_at_0", "Δ′(0) ≥ −7.45", sl.disc_d1(zero), Relation::Ge(dec("-7.45")));
    let d1_end = s.claim("xi1_d2.delta_d1_at_end", "Δ′(0.046) ≤ 20.61", sl.disc_d1(end), Relation::Le(dec("20.61")));
    let d2 = s.claim(
        "xi1_d2.delta_d2",
        "Δ″ ∈ (609.8, 609.81), constant in ζ",
        k.disc_d2::<Interval>(),
        Relation::Between(dec("609.8"), dec("609.81")),
    );
    let zl = lit(k.zeta_xi_lo);
    let zh = lit(k.zeta_xi_hi);
    let dl = s.claim("xi1_d2.delta_d1_left", "Δ′(0.012213) < −0.00039", sl.disc_d1(zl), Relation::Lt(dec("-0.00039")));
    s.claim("xi1_d2.delta_d1_right", "Δ′(0.012214) > 0.000219", sl.disc_d1(zh), Relation::Gt(dec("0.000219")));
    // Δ is convex, so Δ(ζ_ξ) ≥ Δ(ζL) + Δ′(ζL)(ζ_ξ − ζL) ≥ Δ(ζL) + Δ′(ζL)(ζH − ζL).
    let d_left = sl.disc(zl);
    let dmin = s.claim(
        "xi1_d2.delta_min_lower",
        "min Δ ≥ Δ(0.012213) + Δ′(0.012213)·10⁻⁶ ≥ 5.4821",
        d_left + dl * (zh - zl),
        Relation::Ge(dec("5.4821")),
    );
    s.claim("xi1_d2.delta_min_upper", "min Δ ≤ Δ(0.012213) ≤ 5.4822", d_left, Relation::Le(dec("5.4822")));
    let d_end = s.claim(
        "xi1_d2.delta_at_end",
        "Δ(0.046) ∈ [5.83019, 5.8302]",
        sl.disc(end),
        Relation::Within(dec("5.83019"), dec("5.8302")),
    );
    s.claim(
        "xi1_d2.delta_max_at_end",
        "Δ(0.046) > Δ(0), so the convex Δ peaks at ζ = 0.046",
        d_end - sl.disc(zero),
        Relation::Gt(Literal::int(0)),
    );
    let dmin_lo = Interval::point(dmin.lo());
    let dmax_hi = Interval::point(d_end.hi());
    s.claim(
        "xi1_d2.inv_sqrt_delta_max",
        "Δ^(−1/2) ≤ 5.4821^(−1/2) ≤ 0.427098",
        lit(dec("5.4821")).sqrt().recip(),
        Relation::Le(dec("0.427098")),
    );
    s.claim(
        "xi1_d2.inv_sqrt_delta_min",
        "Δ^(−1/2) ≥ 5.8302^(−1/2) ≥ 0.41415",
        lit(dec("5.8302")).sqrt().recip(),
        Relation::Ge(dec("0.41415")),
    );
    s.claim(
        "xi1_d2.inv_delta_max",
        "Δ^(−1) ≤ 1/5.4821 ≤ 0.182412",
        lit(dec("5.4821")).recip(),
        Relation::Le(dec("0.182412")),
    );
    s.claim(
        "xi1_d2.inv_delta_min",
        "Δ^(−1) ≥ 1/5.8302 ≥ 0.17152",
        lit(dec("5.8302")).recip(),
        Relation::Ge(dec("0.17152")),
    );
    let two_a = Interval::point(2.0) * lit(k.a);
    let half = Interval::point(0.5);
    let quarter = Interval::point(0.25);
    // ξ₁″ = (1/2a)Δ^(−1/2)(¼Δ⁻¹Δ′² − ½Δ″) with the first bracket term ≥ 0.
    let lower = lit(dec("0.427098")) * (-(half * lit(dec("609.81")))) / two_a;
    s.claim(
        "xi1_d2.xi1_d2_lower",
        "ξ₁″ ≥ (1/2a)·0.427098·(−½·609.81) ≥ −27.336",
        lower,
        Relation::Ge(Literal::new(-k.xi2_bound.num, k.xi2_bound.den)),
    );
    let sq_max = d1_0.sqr().hull(d1_end.sqr()).hi();
    let inner = quarter * Interval::point(sq_max) / dmin_lo - half * d2;
    let upper = if inner.certainly_lt(0.0) {
        Interval::point((inner / (two_a * dmax_hi.sqrt())).hi())
    } else {
        Interval::INVALID
    };
    s.claim(
        "xi1_d2.xi1_d2_upper",
        "ξ₁″ ≤ (1/2a)·Δmax^(−1/2)·(¼·max Δ′²/Δmin − ½Δ″) ≤ −24.822",
        upper,
        Relation::Le(dec("-24.822")),
    );
    let literal_chain = lit(dec("0.41415"))
        * (quarter * lit(dec("0.182412")) * lit(dec("20.61")).sqr() - half * lit(dec("609.8")))
        / two_a;
    s.note(
        "note.xi1_d2.rounded_upper_chain",
        "the upper chain with the rounded inputs 0.41415, 0.182412, 20.61, 609.8 stays above −24.822",
        literal_chain,
        Relation::Le(dec("-24.822")),
    );
    let direct = cover(&slice_cells(k, 46), 16, &|c| sl.xi1_d2(c), &|v| {
        Relation::Within(Literal::new(-k.xi2_bound.num, k.xi2_bound.den), dec("-24.822")).holds(v)
    });
    s.claim(
        "xi1_d2.xi1_d2_direct",
        "ξ₁″ ∈ [−27.336, −24.822] on an interval cover of [0, 0.046]",
        direct.hull,
        Relation::Within(Literal::new(-k.xi2_bound.num, k.xi2_bound.den), dec("-24.822")),
    );
    SliceFacts {
        xi1_d1_at_0: sl.xi1_d1(zero),
        xi1_d1_at_end: sl.xi1_d1(end),
    }
}

fn slice_bounds(k: &ProofConstants, f: &SliceFacts, s: &mut Sink) {
    let sl = Slice::new(k);
    s.claim("xi1_d1.xi1_d1_at_0", "ξ₁′(0) ≤ 0.31359", f.xi1_d1_at_0, Relation::Le(dec("0.31359")));
    let xe = s.claim(
        "xi1_d1.xi1_d1_at_end",
        "ξ₁′(0.046) ≥ −0.91445",
        f.xi1_d1_at_end,
        Relation::Ge(dec("-0.91445")),
    );
    let one = Interval::point(1.0);
    let p1 = s.claim(
        "a1.xi1_d1_plus_one",
        "ξ₁′ + 1 ≥ ξ₁′(0.046) + 1 > 0",
        xe + one,
        Relation::Gt(Literal::int(0)),
    );
    s.claim(
        "a1.a1_bound",
        "A₁ ≤ −(ξ₁′ + 1)²/(0.046 − ζ) ≤ −(ξ₁′(0.046) + 1)²/0.046 < 0",
        -Interval::point(p1.lo()).sqr() / lit(k.slice_end),
        Relation::Lt(Literal::int(0)),
    );
    let chi = lit(k.chi0);
    s.claim(
        "a2.c_at_end",
        "c(0.454, 0.046) = 0, so ξ₁(0.046) = 0 and y(0.046) = 0",
        k.quad_c(chi, lit(k.slice_end)),
        Relation::Contains(Literal::int(0)),
    );
    s.claim("a2.c_at_0", "c(0.454, 0) > 0", k.quad_c(chi, Interval::ZERO), Relation::Gt(Literal::int(0)));
    s.claim(
        "a2.y_decreasing",
        "y′ = −2 − 2ξ₁′ ≤ −2 − 2ξ₁′(0.046) < 0, so y > 0 on [0, 0.046)",
        Interval::point(-2.0) - Interval::point(2.0) * xe,
        Relation::Lt(Literal::int(0)),
    );
    let kk = k.ln_four_over_weight::<Interval>();
    s.claim("a3.ln_four_over_weight", "ln(4/1.618) > 0", kk, Relation::Gt(Literal::int(0)));
    s.claim(
        "a3.a3_bound",
        "A₃ = ln(4/1.618)·ξ₁″ ≤ −24.822·ln(4/1.618) ≤ −22.46",
        kk * lit(dec("-24.822")),
        Relation::Le(dec("-22.46")),
    );
    let convex = cover(&slice_cells(k, 46), 6, &|c| sl.a4_d2(c), &|v| v.certainly_gt(0.0));
    s.claim(
        "a4.a4_convex",
        "A₄″ > 0 on an interval cover of [0, 0.046]",
        convex.hull,
        Relation::Gt(Literal::int(0)),
    );
    s.claim("a4.a4_d1_left", "A₄′(0.0355167) < −0.002", sl.a4_d1(lit(k.d_zeta_lo)), Relation::Lt(dec("-0.002")));
    s.claim("a4.a4_d1_right", "A₄′(0.0355168) > 0.0006", sl.a4_d1(lit(k.d_zeta_hi)), Relation::Gt(dec("0.0006")));

    // Grid cross-checks of the sign claims.
    let mut hulls = [Interval::INVALID; 3];
    for row in 0..46 {
        let zeta = Interval::point(row as f64) * lit(k.grid_step);
        let a = sl.a_terms(zeta);
        for (h, v) in hulls.iter_mut().zip([a[0], a[1], a[2]]) {
            *h = if row == 0 { v } else { h.hull(v) };
        }
    }
    s.claim("a1.a1_grid", "A₁ < 0 at every grid point", hulls[0], Relation::Lt(Literal::int(0)));
    s.claim("a2.a2_grid", "A₂ < 0 at every grid point", hulls[1], Relation::Lt(Literal::int(0)));
    s.claim("a3.a3_grid", "A₃ ≤ −22.46 at every grid point", hulls[2], Relation::Le(dec("-22.46")));
}

fn concavity(k: &ProofConstants, f: &SliceFacts, s: &mut Sink) -> (Vec<TableRow>, Interval) {
    let sl = Slice::new(k);
    let end = lit(k.slice_end);
    s.claim(
        "concavity.z1_increasing",
        "z₁′ = 4 − ξ₁′ ≥ 4 − ξ₁′(0) > 0",
        Interval::point(4.0) - f.xi1_d1_at_0,
        Relation::Gt(Literal::int(0)),
    );
    s.claim(
        "concavity.z2_decreasing",
        "z₂′ = ξ₁′ − 5 ≤ ξ₁′(0) − 5 < 0",
        f.xi1_d1_at_0 - Interval::point(5.0),
        Relation::Lt(Literal::int(0)),
    );
    s.claim(
        "concavity.z1_below_z2",
        "z₁(0.046) < z₂(0.046), so z₁ < z₂ on the slice",
        sl.z1(end) - sl.z2(end),
        Relation::Lt(Literal::int(0)),
    );
    let mut rows = Vec::new();
    let mut m_hull = Interval::INVALID;
    for (i, (row, printed)) in PRINTED.iter().enumerate() {
        let computed = table_row(k, *row).expect("row in range");
        let cells: Vec<TableCell> = computed
            .iter()
            .zip(printed.iter())
            .enumerate()
            .map(|(col, (c, p))| {
                let (within, pass) = cell_passes(col, p, *c);
                TableCell {
                    column: COLUMNS[col].to_string(),
                    printed: p.to_string(),
                    computed: (*c).into(),
                    within_tolerance: within,
                    pass,
                }
            })
            .collect();
        let m = computed[5];
        m_hull = if i == 0 { m } else { m_hull.hull(m) };
        let m_below_20 = m.certainly_lt(20.0);
        let pass = m_below_20 && cells.iter().all(|c| c.pass);
        rows.push(TableRow {
            table: if *row <= 34 { 1 } else { 2 },
            k: *row,
            cells,
            m_below_20,
            pass,
        });
    }
    let a = lit(dec("0.035"));
    let b = lit(dec("0.036"));
    s.claim(
        "concavity.case2_a4",
        "max(A₄(0.035), A₄(0.036)) ≤ 98.404",
        sl.a4(a).hull(sl.a4(b)),
        Relation::Le(dec("98.404")),
    );
    s.claim("concavity.case2_ln_z1", "ln z₁(0.035) ≥ −1.5", sl.z1(a).ln(), Relation::Ge(dec("-1.5")));
    s.claim("concavity.case2_ln_z2", "ln z₂(0.035) ≤ −0.135", sl.z2(a).ln(), Relation::Le(dec("-0.135")));
    let xd = sl.xi1_d1(a);
    s.claim(
        "concavity.case2_t4",
        "−(ξ₁′(0.035) − 4)²/z₁(0.036) ≤ −94",
        -(xd - Interval::point(4.0)).sqr() / sl.z1(b),
        Relation::Le(dec("-94")),
    );
    s.claim(
        "concavity.case2_t5",
        "−(ξ₁′(0.035) − 5)²/z₂(0.035) ≤ −36.3",
        -(xd - Interval::point(5.0)).sqr() / sl.z2(a),
        Relation::Le(dec("-36.3")),
    );
    let c2 = s.claim(
        "concavity.case2_total",
        "98.404 + 27.336·(1.5 − 0.135) − 94 − 36.3 < 5.5",
        case2_bound(k),
        Relation::Lt(dec("5.5")),
    );
    let all = m_hull.hull(c2);
    s.claim(
        "concavity.a4_plus_a5",
        "A₄ + A₅ < 20 on every cell of the slice",
        all,
        Relation::Lt(Literal::int(20)),
    );
    s.claim(
        "concavity.d2_negative",
        "(ln h₁)″ = ΣAᵢ < −22.46 + 20 < 0",
        lit(dec("-22.46")) + Interval::point(20.0),
        Relation::Lt(Literal::int(0)),
    );
    let direct = cover(&Interval::new(0.0, lit(dec("0.045")).hi()).split(45), 8, &|c| sl.d2lnh1(c), &|v| {
        v.certainly_lt(0.0)
    });
    s.claim(
        "concavity.d2_direct",
        "(ln h₁)″ < 0 on an interval cover of [0, 0.045]",
        direct.hull,
        Relation::Lt(Literal::int(0)),
    );
    (rows, all)
}

fn zeta_star(k: &ProofConstants, s: &mut Sink) {
    let sl = Slice::new(k);
    let zl = lit(k.zeta_star_lo);
    let zh = lit(k.zeta_star_hi);
    let dl = s.claim(
        "zeta_star.derivative_left",
        "(ln h₁)′(0.0228718) > 7.54·10⁻⁸",
        sl.dlnh1(zl),
        Relation::Gt(dec("0.0000000754")),
    );
    s.claim(
        "zeta_star.derivative_right",
        "(ln h₁)′(0.0228719) < −9·10⁻⁶",
        sl.dlnh1(zh),
        Relation::Lt(dec("-0.000009")),
    );
    s.claim(
        "zeta_star.derivative_small",
        "(ln h₁)′(0.0228718) ≤ 10⁻⁷",
        dl,
        Relation::Le(dec("0.0000001")),
    );
    let h_left = sl.ln_h1(zl);
    s.claim(
        "zeta_star.h1_left",
        "h₁(0.0228718) ≤ 0.999982",
        h_left.exp(),
        Relation::Le(dec("0.999982")),
    );
    s.claim(
        "zeta_star.h1_peak",
        "h₁(ζ₁) ≤ h₁(0.0228718)·exp((ln h₁)′(0.0228718)·10⁻⁷) ≤ 0.999983",
        (h_left + dl * (zh - zl)).exp(),
        Relation::Le(dec(H_BOUND)),
    );
    s.claim(
        "zeta_star.d2_on_bracket",
        "(ln h₁)″ < −2.46 on the bracket",
        sl.d2lnh1(zl.hull(zh)),
        Relation::Lt(dec("-2.46")),
    );
}

/// Upper estimate of `ln h₁` on a cell of the slice.
fn ln_h1_cell(k: &ProofConstants, target: f64, cell: Interval) -> Interval {
    let sl = Slice::new(k);
    let direct = sl.ln_h1(cell);
    if direct.certainly_le(target) {
        return direct;
    }
    let d = k.dlnh_dzeta(lit(k.chi0), cell, sl.xi1(cell));
    if d.certainly_le(0.0) {
        return sl.ln_h1(Interval::point(cell.lo()));
    }
    if d.certainly_ge(0.0) {
        return sl.ln_h1(Interval::point(cell.hi()));
    }
    let m = Interval::point(cell.mid());
    sl.ln_h1(m) + d * (cell - m)
}

fn final_cover(k: &ProofConstants) -> Cover {
    let target = lit(dec(H_BOUND)).ln().lo();
    cover(&slice_cells(k, 46), 40, &|c| ln_h1_cell(k, target, c), &|v| v.certainly_le(target))
}

fn chi_slope(k: &ProofConstants, s: &mut Sink) {
    let verts = omega_vertices(k);
    let half = Ratio::new(1, 2);
    let one = Ratio::from(1);
    let h = k.seven_halves.ratio();
    // Arguments of the logarithms in B₁ … B₆.
    let w_arg = Affine::new(-half, 2, -3, 0);
    let r_arg = Affine::new(-half, 2, 1, 0);
    let u_arg = Affine::new(one, -2, -2, 0);
    let v_arg = Affine::new(one, -2, 4, 0);
    let v_xi = Affine::new(one, -2, 4, -1);
    let u_xi = Affine::new(one, -2, -2, -1);
    let m_xi = Affine::new(-h, 10, -5, 1);
    let m0 = Affine::new(-h, 10, -5, 0);
    let corner = |chi: Literal, zeta: Literal, xi: Literal| [chi.ratio(), zeta.ratio(), xi.ratio()];
    let z = Literal::int(0);
    // (id, argument, coefficient, corner, displayed bound, bound is inclusive)
    type Corner<'a> = (&'a str, Affine, i64, [Ratio<i64>; 3], &'a str, bool);
    let entries: [Corner; 5] = [
        ("b1", w_arg, 4, corner(k.chi_max, z, z), "-3.55", false),
        ("b2", r_arg, 4, corner(k.chi_max, k.corner_zeta, z), "-3.14", false),
        ("b4", v_arg, 1, corner(k.chi0, k.slice_end, z), "-1.28", false),
        ("b5", v_xi, 2, corner(k.chi0, k.slice_end, z), "-2.57", true),
        ("b6", m_xi, 1, corner(k.chi_max, z, k.corner_xi), "0.14", false),
    ];
    for (name, form, coeff, at, bound, may_vanish) in entries {
        let range = form.range(&verts);
        let rel = if may_vanish { Relation::Ge(z) } else { Relation::Gt(z) };
        s.claim(
            &format!("chi_slope.{name}.argument_sign"),
            "the logarithm argument keeps its sign on Ω, fixing the sign of each partial derivative",
            range_interval(range),
            rel,
        );
        s.exact_zero(
            &format!("chi_slope.{name}.argmax"),
            "the named corner maximises the logarithm argument over the vertices of Ω",
            range.1 - form.at(&at),
        );
        let value = Interval::point(coeff as f64) * ratio(form.at(&at)).ln();
        s.claim(
            &format!("chi_slope.{name}.corner_value"),
            &format!("B at the named corner < {bound}"),
            value,
            Relation::Lt(dec(bound)),
        );
    }
    let u_range = u_arg.range(&verts);
    s.claim(
        "chi_slope.b3.bound",
        "B₃ = 2 ln(u − ξ) − ln u ≤ ln u ≤ ln(max u) < 0",
        ratio(u_range.1).ln(),
        Relation::Lt(z),
    );
    let sum: Ratio<i64> = ["-3.55", "-3.14", "0", "-1.28", "-2.57", "0.14"]
        .iter()
        .map(|b| dec(b).ratio())
        .sum();
    s.claim("chi_slope.b_sum", "−3.55 − 3.14 + 0 − 1.28 − 2.57 + 0.14 < 0", ratio(sum), Relation::Lt(z));

    // The χ-derivative derived from f and g carries a constant 8 ln 3 that
    // the displayed decomposition drops, so negativity is certified on the
    // derived form: it decreases in ξ, and its ξ = 0 value is negative.
    s.claim(
        "chi_slope.true.u_minus_xi",
        "1 − 2χ − 2ζ − ξ ≥ 0 on Ω",
        range_interval(u_xi.range(&verts)),
        Relation::Ge(z),
    );
    s.claim(
        "chi_slope.true.v_minus_xi",
        "1 − 2χ + 4ζ − ξ ≥ 0 on Ω",
        range_interval(v_xi.range(&verts)),
        Relation::Ge(z),
    );
    s.claim(
        "chi_slope.true.m_positive",
        "10χ − 5ζ − 7/2 > 0 on Ω, so ∂ξ of the χ-derivative is negative",
        range_interval(m0.range(&verts)),
        Relation::Gt(z),
    );
    let chi_cells = Interval::new(lit(k.chi0).lo(), lit(k.chi_max).hi()).split(8);
    let zeta_top = (Interval::point(0.5) - lit(k.chi0)).hi();
    let mut cells = Vec::new();
    for c in &chi_cells {
        let top = (Interval::point(0.5) - *c).hi();
        for z in Interval::new(0.0, zeta_top).split(92) {
            if z.lo() <= top {
                cells.push((*c, z));
            }
        }
    }
    let eval = |c: Interval, zc: Interval| {
        let u = Interval::point(1.0) - Interval::point(2.0) * c - Interval::point(2.0) * zc;
        if u.hi() < 0.0 {
            return Interval::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        }
        // u ≥ 0 holds on Ω₁; the enclosure only straddles 0 through rounding.
        let u = Interval::new(u.lo().max(0.0), u.hi());
        k.dlnh_dchi_at_xi0_with_u(c, zc, u)
    };
    let mut hull: Option<Interval> = None;
    let mut evals = 0;
    let mut stack: Vec<(Interval, Interval, u32)> = cells.into_iter().map(|(c, z)| (c, z, 0)).collect();
    while let Some((c, zc, depth)) = stack.pop() {
        let v = eval(c, zc);
        evals += 1;
        if !v.certainly_lt(0.0) && depth < 10 && evals < COVER_BUDGET {
            let (c1, c2) = c.bisect();
            let (z1, z2) = zc.bisect();
            for (a, b) in [(c1, z1), (c1, z2), (c2, z1), (c2, z2)] {
                if b.lo() <= (Interval::point(0.5) - a).hi() {
                    stack.push((a, b, depth + 1));
                }
            }
            continue;
        }
        if v.lo() == f64::NEG_INFINITY && v.hi() == f64::NEG_INFINITY {
            continue;
        }
        let v = Interval::new(v.lo(), v.hi());
        hull = Some(match hull {
            None => v,
            Some(h) => h.hull(v),
        });
    }
    s.claim(
        "chi_slope.true.negative_at_xi0",
        "∂ ln h/∂χ at ξ = 0 is negative on an interval cover of Ω₁",
        hull.unwrap_or(Interval::INVALID),
        Relation::Lt(z),
    );

    let (c, zt, xt) = (lit(k.chi0), lit(dec("0.02")), lit(dec("0.01")));
    let displayed: Interval = k.b_terms(c, zt, xt).iter().fold(Interval::ZERO, |a, b| a + *b);
    s.note(
        "note.chi_slope.displayed_decomposition",
        "the displayed B₁ … B₆ sum equals the derived χ-derivative at (0.454, 0.02, 0.01)",
        displayed - k.dlnh_dchi(c, zt, xt),
        Relation::Contains(z),
    );
}

/// Re-check outcome for a stored report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Revalidation {
    pub pass: bool,
    pub mismatches: Vec<String>,
}

/// The complete certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub schema_version: u32,
    pub artifact_version: String,
    pub constants: ProofConstants,
    /// Gating sub-claims, sorted by id.
    pub claims: Vec<Claim>,
    /// Non-gating observations about literal chains of the source argument.
    pub notes: Vec<Claim>,
    pub tables: Vec<TableRow>,
    /// Number of cells in the adaptive cover behind `final_bound`.
    pub final_cells: usize,
    /// `max_Ω h ≤ 0.999983`; passes only when every claim and row passes.
    pub final_bound: Claim,
    pub pass: bool,
}

/// Runs the certificate with the given constants.
pub fn certify(k: &ProofConstants) -> CertificateReport {
    let mut s = Sink {
        claims: Vec::new(),
        notes: Vec::new(),
    };
    consistency(k, &mut s);
    quadratic(k, &mut s);
    let facts = xi1_curvature(k, &mut s);
    slice_bounds(k, &facts, &mut s);
    let (tables, _) = concavity(k, &facts, &mut s);
    zeta_star(k, &mut s);
    chi_slope(k, &mut s);
    s.claims.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    let grid = final_cover(k);
    let mut final_bound = Claim::new(
        "final.h_max",
        "max over Ω of h ≤ 0.999983",
        if grid.failed == 0 { grid.hull.exp() } else { Interval::INVALID },
        Relation::Le(dec(H_BOUND)),
    );
    let rest = s.claims.iter().all(|c| c.pass) && tables.iter().all(|r| r.pass);
    final_bound.pass = final_bound.pass && rest;
    let pass = final_bound.pass;
    CertificateReport {
        schema_version: SCHEMA_VERSION,
        artifact_version: crate::ARTIFACT_VERSION.to_string(),
        constants: k.clone(),
        claims: s.claims,
        notes: s.notes,
        tables,
        final_cells: grid.cells,
        final_bound,
        pass,
    }
}

/// Runs the certificate with the printed constants.
pub fn certify_default() -> CertificateReport {
    certify(&ProofConstants::default())
}

impl CertificateReport {
    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.claim_id == id)
    }

    pub fn failures(&self) -> Vec<&Claim> {
        self.claims.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }

    /// Re-derives every pass flag from the stored enclosures and relations.
    pub fn revalidate(&self) -> Revalidation {
        let mut mismatches = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            mismatches.push(format!("schema version {} != {SCHEMA_VERSION}", self.schema_version));
        }
        for c in self.claims.iter().chain(self.notes.iter()) {
            if c.recheck() != c.pass {
                mismatches.push(format!("{}: stored pass flag disagrees with its enclosure", c.claim_id));
            }
        }
        for r in &self.tables {
            if r.recheck() != r.pass {
                mismatches.push(format!("table row {}: stored pass flag disagrees", r.k));
            }
        }
        let rows: Vec<u32> = self.tables.iter().map(|r| r.k).collect();
        let want: Vec<u32> = PRINTED.iter().map(|(k, _)| *k).collect();
        if rows != want {
            mismatches.push("table rows differ from the printed tables".to_string());
        }
        let all = self.claims.iter().all(|c| c.recheck()) && self.tables.iter().all(|r| r.recheck());
        let final_ok = self.final_bound.recheck() && all;
        if final_ok != self.final_bound.pass || final_ok != self.pass {
            mismatches.push("final bound flag disagrees with its claims".to_string());
        }
        Revalidation {
            pass: mismatches.is_empty() && final_ok,
            mismatches,
        }
    }

    /// Fixed-width text summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mark = |p: bool| if p { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "certificate schema {} (indratio {})", self.schema_version, self.artifact_version);
        for c in &self.claims {
            let e = c.enclosure;
            let _ = writeln!(
                out,
                "{} {:<38} [{:>+.9e}, {:>+.9e}] {}",
                mark(c.pass),
                c.claim_id,
                e.lo,
                e.hi,
                c.relation.describe()
            );
        }
        let rows_ok = self.tables.iter().filter(|r| r.pass).count();
        let strict = self.tables.iter().flat_map(|r| &r.cells[..5]).filter(|c| c.within_tolerance).count();
        let _ = writeln!(
            out,
            "{} tables: {rows_ok}/{} rows, {strict}/{} cells within 5e-4",
            mark(rows_ok == self.tables.len()),
            self.tables.len(),
            self.tables.len() * 5
        );
        for n in &self.notes {
            let _ = writeln!(
                out,
                "NOTE {} {:<38} [{:>+.9e}, {:>+.9e}] {}",
                if n.pass { "holds" } else { "fails" },
                n.claim_id,
                n.enclosure.lo,
                n.enclosure.hi,
                n.relation.describe()
            );
        }
        let f = self.final_bound.enclosure;
        let _ = writeln!(
            out,
            "{} {} h <= {H_BOUND}: [{:.9}, {:.9}] over {} cells",
            mark(self.final_bound.pass),
            self.final_bound.claim_id,
            f.lo,
            f.hi,
            self.final_cells
        );
        out
    }
}

/// The value tables in their printed layout, with computed values.
pub fn tables_text(report: &CertificateReport) -> String {
    let mut out = String::new();
    for t in [1u8, 2] {
        let _ = writeln!(
            out,
            "table {t}: {}",
            if t == 1 { "A4 at the left cell end, k = 0..34" } else { "A4 at the right cell end, k = 36..45" }
        );
        let _ = writeln!(
            out,
            "{:>3} {:>12} {:>11} {:>13} {:>13} {:>12} {:>8} {:>6} check",
            "k", COLUMNS[0], COLUMNS[1], COLUMNS[2], COLUMNS[3], COLUMNS[4], COLUMNS[5], "print"
        );
        for r in report.tables.iter().filter(|r| r.table == t) {
            let v: Vec<f64> = r.cells.iter().map(|c| c.computed.interval().mid()).collect();
            let _ = writeln!(
                out,
                "{:>3} {:>12.7} {:>11.7} {:>13.9} {:>13.7} {:>12.7} {:>8.4} {:>6} {}",
                r.k,
                v[0],
                v[1],
                v[2],
                v[3],
                v[4],
                v[5],
                r.cells[5].printed,
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
        if t == 1 {
            let _ = writeln!(out);
        }
    }
    out
}

/// Column headers for table 1 (`k ≤ 34`) or table 2 (`k ≥ 36`).
pub fn table_headers(table: u8) -> [&'static str; 7] {
    let (a4, m) = if table == 1 {
        ("A4(0.001k)", "M1(k)")
    } else {
        ("A4(0.001(k+1))", "M3(k)")
    };
    [
        "k",
        a4,
        "-ln(z1(0.001k))",
        "ln(z2(0.001k))",
        "-(xi1'(0.001k)-4)^2/z1(0.001(k+1))",
        "-(xi1'(0.001k)-5)^2/z2(0.001k)",
        m,
    ]
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The value tables as CSV: one block per table under its printed
/// headers, then the `k = 35` chain, blocks separated by a blank line.
///
/// Each row carries the computed values, the printed `M`, the row verdict
/// and the columns whose printed value is farther than `5e-4` from the
/// computed one.
pub fn tables_csv(report: &CertificateReport) -> String {
    let mut out = String::new();
    for t in [1u8, 2] {
        let mut head: Vec<String> = table_headers(t).iter().map(|h| csv_field(h)).collect();
        head.extend(["printed M".to_string(), "check".to_string(), "outside 5e-4".to_string()]);
        let _ = writeln!(out, "{}", head.join(","));
        for r in report.tables.iter().filter(|r| r.table == t) {
            let v: Vec<String> = r.cells.iter().map(|c| format!("{:.9}", c.computed.interval().mid())).collect();
            let outside: Vec<&str> = r.cells[..5]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.within_tolerance)
                .map(|(i, _)| table_headers(t)[i + 1])
                .collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.k,
                v.join(","),
                r.cells[5].printed,
                if r.pass { "pass" } else { "fail" },
                csv_field(&outside.join(";"))
            );
        }
        let _ = writeln!(out);
    }
    let total = report.claim("concavity.case2_total");
    let _ = writeln!(out, "k,A4 max bound,-ln(z1) bound,ln(z2) bound,t4 bound,t5 bound,total,check");
    let _ = writeln!(
        out,
        "35,98.404,1.5,-0.135,-94,-36.3,{},{}",
        total.map_or(f64::NAN, |c| c.enclosure.hi),
        if total.is_some_and(|c| c.pass) { "pass" } else { "fail" }
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_certificate_passes() {
        let r = certify_default();
        let fails: Vec<_> = r.failures().iter().map(|c| (c.claim_id.clone(), c.enclosure)).collect();
        assert!(fails.is_empty(), "{fails:#?}");
        let bad_rows: Vec<_> = r.tables.iter().filter(|t| !t.pass).map(|t| t.k).collect();
        assert!(bad_rows.is_empty(), "{bad_rows:?}");
        assert!(r.final_bound.pass, "{:?}", r.final_bound);
        assert!(r.pass);
    }

    #[test]
    fn relations_are_strict_about_rounding() {
        let third = Interval::ratio(1, 3);
        assert!(!Relation::Le(Literal::new(1, 3)).holds(third));
        assert!(Relation::Contains(Literal::new(1, 3)).holds(third));
        assert!(!Relation::Lt(Literal::int(1)).holds(Interval::INVALID));
    }

    #[test]
    fn coarse_cells_are_upper_bounds() {
        let c = Interval::new(106.000 - 9.68e-4, 106.000 - 9.67e-4);
        assert_eq!(cell_passes(0, "106.000", c), (false, true));
        assert_eq!(cell_passes(0, "105.998", c), (false, false));
        assert_eq!(cell_passes(1, "2.553562", Interval::point(2.5535)), (true, true));
    }
}
