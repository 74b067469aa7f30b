//! Configuration-model pairings, projection to cubic multigraphs, girth,
//! and girth-survival statistics.
//!
//! Vertices are 0-indexed in memory and 1-indexed in the text formats.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::Error;

/// One of the three points `(vertex, slot)` attached to a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub vertex: usize,
    pub slot: u8,
}

impl Point {
    pub fn new(vertex: usize, slot: u8) -> Self {
        Point { vertex, slot }
    }

    fn index(self) -> usize {
        3 * self.vertex + self.slot as usize
    }

    fn from_index(i: usize) -> Self {
        Point::new(i / 3, (i % 3) as u8)
    }
}

/// A perfect matching on the `3n` points `[n] × [3]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pairing {
    n: usize,
    pairs: Vec<(Point, Point)>,
}

impl Pairing {
    /// Validates that every point appears in exactly one pair.
    pub fn new(n: usize, pairs: Vec<(Point, Point)>) -> Result<Self, Error> {
        check_order(n)?;
        if pairs.len() != 3 * n / 2 {
            return Err(Error::InvalidArgument(format!(
                "a pairing of order {n} has {} pairs, got {}",
                3 * n / 2,
                pairs.len()
            )));
        }
        let mut seen = vec![false; 3 * n];
        for &(p, q) in &pairs {
            for pt in [p, q] {
                if pt.vertex >= n || pt.slot > 2 {
                    return Err(Error::InvalidArgument(format!("point {pt:?} out of range")));
                }
                if std::mem::replace(&mut seen[pt.index()], true) {
                    return Err(Error::InvalidArgument(format!("point {pt:?} used twice")));
                }
            }
        }
        Ok(Pairing { n, pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(Point, Point)] {
        &self.pairs
    }

    /// Pairs consecutive entries of a permutation of the point indices.
    fn from_order(n: usize, order: &[usize]) -> Self {
        let pairs = order
            .chunks_exact(2)
            .map(|c| {
                let (a, b) = (Point::from_index(c[0]), Point::from_index(c[1]));
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        Pairing { n, pairs }
    }

    /// Canonical form: each pair ordered, pairs sorted.
    pub fn canonical(&self) -> Pairing {
        let mut pairs: Vec<_> = self
            .pairs
            .iter()
            .map(|&(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort();
        Pairing { n: self.n, pairs }
    }
}

fn check_order(n: usize) -> Result<(), Error> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "the number of vertices must be even and positive, got {n}"
        )));
    }
    Ok(())
}

/// Uniformly random pairing of order `n`, reproducible from `seed`.
pub fn sample_pairing(n: usize, seed: u64) -> Result<Pairing, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_pairing_with(n, &mut rng)
}

/// Uniformly random pairing drawn from `rng`: a uniform shuffle of the
/// `3n` points, paired consecutively.
pub fn sample_pairing_with<R: RngCore>(n: usize, rng: &mut R) -> Result<Pairing, Error> {
    check_order(n)?;
    let mut order: Vec<usize> = (0..3 * n).collect();
    order.shuffle(rng);
    Ok(Pairing::from_order(n, &order))
}

/// The RNG for trial `trial` of a batch seeded with `seed`: one ChaCha
/// stream per trial, so batches are reproducible under any scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Every pairing of order `n`, in a fixed order. Only sensible for `n ≤ 4`.
pub fn all_pairings(n: usize) -> Result<Vec<Pairing>, Error> {
    check_order(n)?;
    if n > 6 {
        return Err(Error::InvalidArgument(format!("refusing to enumerate pairings of order {n}")));
    }
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<usize>, n: usize, out: &mut Vec<Pairing>) {
        if free.is_empty() {
            out.push(Pairing::from_order(n, cur));
            return;
        }
        let first = free.remove(0);
        for k in 0..free.len() {
            let partner = free.remove(k);
            cur.push(first);
            cur.push(partner);
            rec(free, cur, n, out);
            cur.pop();
            cur.pop();
            free.insert(k, partner);
        }
        free.insert(0, first);
    }
    let mut out = Vec::new();
    rec(&mut (0..3 * n).collect(), &mut Vec::new(), n, &mut out);
    Ok(out)
}

/// An undirected multigraph; loops and parallel edges allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl Multigraph {
    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, Error> {
        let mut adj = vec![Vec::new(); n];
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            norm.push((u.min(v), u.max(v)));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Multigraph { n, edges: norm, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbour multiset of `v`; a loop lists `v` twice.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Degree counting loops twice.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.adj[v].contains(&v)
    }

    pub fn is_cubic(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) == 3)
    }

    /// True when there are no loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        (0..self.n).all(|v| {
            let a = &self.adj[v];
            !a.contains(&v) && a.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Simple adjacency: parallel edges collapsed, loops dropped.
    pub fn simple_adjacency(&self) -> Vec<Vec<usize>> {
        self.adj
            .iter()
            .enumerate()
            .map(|(v, a)| {
                let mut s: Vec<usize> = a.iter().copied().filter(|&w| w != v).collect();
                s.dedup();
                s
            })
            .collect()
    }

    /// Rebuilds the adjacency after deserialisation.
    pub fn rebuild(self) -> Result<Self, Error> {
        Multigraph::from_edges(self.n, self.edges)
    }

    /// Plain-text edge list: `n m`, then `u v` per edge, 1-indexed.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Self, Error> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header \"n m\"".into(),
        })?;
        let hv = parse_ints(header, line, 2)?;
        let (n, m) = (hv[0], hv[1]);
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            let v = parse_ints(l, line, 2)?;
            if v[0] == 0 || v[1] == 0 || v[0] > n || v[1] > n {
                return Err(Error::Parse {
                    line,
                    msg: format!("vertex out of range 1..={n}"),
                });
            }
            edges.push((v[0] - 1, v[1] - 1));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Multigraph::from_edges(n, edges)
    }
}

fn parse_ints(l: &str, line: usize, count: usize) -> Result<Vec<usize>, Error> {
    let v: Result<Vec<usize>, _> = l.split_whitespace().map(str::parse).collect();
    match v {
        Ok(v) if v.len() == count => Ok(v),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected {count} non-negative integers, got {l:?}"),
        }),
    }
}

impl Pairing {
    /// Plain-text pairing: `n`, then `u a v b` per pair, all 1-indexed.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (p, q) in &self.pairs {
            s.push_str(&format!("{} {} {} {}\n", p.vertex + 1, p.slot + 1, q.vertex + 1, q.slot + 1));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header \"n\"".into(),
        })?;
        let n = parse_ints(header, line, 1)?[0];
        let mut pairs = Vec::new();
        for (line, l) in lines {
            let v = parse_ints(l, line, 4)?;
            let ok = v[0] >= 1 && v[0] <= n && v[2] >= 1 && v[2] <= n && (1..=3).contains(&v[1]) && (1..=3).contains(&v[3]);
            if !ok {
                return Err(Error::Parse {
                    line,
                    msg: "expected \"u a v b\" with u, v in 1..=n and a, b in 1..=3".into(),
                });
            }
            pairs.push((
                Point::new(v[0] - 1, (v[1] - 1) as u8),
                Point::new(v[2] - 1, (v[3] - 1) as u8),
            ));
        }
        Pairing::new(n, pairs)
    }
}

/// `π(F)`: forget the slot of every point.
pub fn project(f: &Pairing) -> Multigraph {
    let edges = f.pairs.iter().map(|(p, q)| (p.vertex, q.vertex)).collect();
    Multigraph::from_edges(f.n, edges).expect("pairing points are in range")
}

/// Length of a shortest cycle; forests have infinite girth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Girth {
    Finite(u32),
    Infinite,
}

impl Girth {
    /// `girth ≥ k`.
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Girth::Finite(g) => g >= k,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

/// Girth with a witness cycle (vertex sequence, closing edge implied).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthReport {
    pub girth: Girth,
    pub shortest_cycle: Vec<usize>,
}

/// Exact girth: a loop/parallel-edge pre-pass, then BFS from every vertex
/// with the search depth cut at the best cycle found so far.
pub fn girth(g: &Multigraph) -> GirthReport {
    shortest_cycle_below(g, u32::MAX)
}

/// `girth(g) ≥ k`, exploring only balls of radius about `k/2`.
pub fn girth_at_least(g: &Multigraph, k: u32) -> bool {
    if k <= 1 {
        return true;
    }
    shortest_cycle_below(g, k).girth.at_least(k)
}

/// Shortest cycle of length `< limit`, or an infinite report if none.
fn shortest_cycle_below(g: &Multigraph, limit: u32) -> GirthReport {
    for v in 0..g.n {
        if g.has_loop(v) {
            return GirthReport {
                girth: Girth::Finite(1),
                shortest_cycle: vec![v],
            };
        }
    }
    if limit <= 1 {
        return GirthReport {
            girth: Girth::Infinite,
            shortest_cycle: Vec::new(),
        };
    }
    for v in 0..g.n {
        if let Some(w) = g.adj[v].windows(2).find(|w| w[0] == w[1]).map(|w| w[0]) {
            return GirthReport {
                girth: Girth::Finite(2),
                shortest_cycle: vec![v, w],
            };
        }
    }
    let adj = &g.adj;
    let n = g.n;
    let mut best = limit;
    let mut witness: Option<(Vec<u32>, Vec<usize>, usize, usize)> = None;
    let mut dist = vec![u32::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        for &t in &touched {
            dist[t] = u32::MAX;
            parent[t] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[s] = 0;
        touched.push(s);
        queue.push_back(s);
        'bfs: while let Some(u) = queue.pop_front() {
            // Cycles closed from depth d have length at least 2d.
            if 2 * dist[u] >= best {
                break;
            }
            for &w in &adj[u] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if w != parent[u] {
                    let len = dist[u] + dist[w] + 1;
                    if len < best {
                        best = len;
                        witness = Some((dist.clone(), parent.clone(), u, w));
                        if 2 * dist[u] >= best {
                            break 'bfs;
                        }
                    }
                }
            }
        }
    }
    match witness {
        None => GirthReport {
            girth: Girth::Infinite,
            shortest_cycle: Vec::new(),
        },
        Some((dist, parent, u, w)) => {
            let cycle = close_cycle(&dist, &parent, u, w);
            debug_assert_eq!(cycle.len() as u32, best);
            GirthReport {
                girth: Girth::Finite(cycle.len() as u32),
                shortest_cycle: cycle,
            }
        }
    }
}

/// Joins the tree paths from `u` and `w` at their lowest common ancestor.
fn close_cycle(dist: &[u32], parent: &[usize], u: usize, w: usize) -> Vec<usize> {
    let (mut a, mut b) = (u, w);
    let mut left = vec![a];
    let mut right = vec![b];
    while a != b {
        if dist[a] >= dist[b] {
            a = parent[a];
            left.push(a);
        } else {
            b = parent[b];
            right.push(b);
        }
    }
    right.pop();
    left.reverse();
    // left runs lca → u, right runs w → (child of lca)
    left.extend(right);
    left
}

/// Checks that `cycle` is a simple closed walk in `g` with distinct
/// vertices (length 1 is a loop, length 2 a parallel pair).
pub fn is_cycle_in(g: &Multigraph, cycle: &[usize]) -> bool {
    match cycle.len() {
        0 => false,
        1 => g.has_loop(cycle[0]),
        2 => g.adj[cycle[0]].iter().filter(|&&x| x == cycle[1]).count() >= 2 && cycle[0] != cycle[1],
        k => {
            let mut seen = std::collections::HashSet::new();
            cycle.iter().all(|&v| v < g.n && seen.insert(v))
                && (0..k).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % k]))
        }
    }
}

/// `Σ_{k=1}^{g−1} 2^{k−1}/k` as an exact rational.
pub fn girth_survival_exponent(g: u32) -> Result<BigRational, Error> {
    if g < 3 {
        return Err(Error::InvalidArgument(format!("girth survival needs g >= 3, got {g}")));
    }
    let mut sum = BigRational::from_integer(BigInt::from(0));
    for k in 1..g {
        let term = BigRational::new(BigInt::from(2).pow(k - 1), BigInt::from(k));
        sum += term;
    }
    Ok(sum)
}

/// Limiting fraction `exp(−Σ_{k=1}^{g−1} 2^{k−1}/k)` of pairings whose
/// projection has girth at least `g`.
pub fn girth_survival(g: u32) -> Result<f64, Error> {
    Ok((-ln_survival_exponent(g)?).exp())
}

/// The exponent `Σ 2^{k−1}/k` rounded to `f64`.
pub fn ln_survival_exponent(g: u32) -> Result<f64, Error> {
    let s = girth_survival_exponent(g)?;
    Ok(rational_to_f64(&s))
}

fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Empirical girth-survival fraction with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalEstimate {
    pub hits: u64,
    pub trials: u64,
    pub fraction: f64,
    pub stderr: f64,
}

impl SurvivalEstimate {
    fn from_counts(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        SurvivalEstimate {
            hits,
            trials,
            fraction: p,
            stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }

    /// `|fraction − target| ≤ k · stderr`; with a zero standard error the
    /// binomial error at `target` is used instead.
    pub fn within(&self, target: f64, k: f64) -> bool {
        let se = if self.stderr > 0.0 {
            self.stderr
        } else {
            (target * (1.0 - target) / self.trials as f64).sqrt()
        };
        (self.fraction - target).abs() <= k * se
    }
}

/// Fraction of `trials` sampled pairings whose projection has girth ≥ `g`.
pub fn estimate_survival(n: usize, g: u32, trials: u64, seed: u64) -> Result<SurvivalEstimate, Error> {
    check_order(n)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let one = |t: u64| -> u64 {
        let mut rng = trial_rng(seed, t);
        let f = sample_pairing_with(n, &mut rng).expect("order checked");
        u64::from(girth_at_least(&project(&f), g))
    };
    #[cfg(feature = "parallel")]
    let hits: u64 = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(one).sum()
    };
    #[cfg(not(feature = "parallel"))]
    let hits: u64 = (0..trials).map(one).sum();
    Ok(SurvivalEstimate::from_counts(hits, trials))
}

/// Rejection sampler: draws pairings until the projection has girth ≥ `g`.
/// Returns the accepted pairing and the number of attempts used.
pub fn sample_with_girth(n: usize, g: u32, seed: u64, max_attempts: u64) -> Result<(Pairing, u64), Error> {
    check_order(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let f = sample_pairing_with(n, &mut rng)?;
        if girth_at_least(&project(&f), g) {
            return Ok((f, attempt));
        }
    }
    Err(Error::RejectionCap {
        n,
        girth: g,
        attempts: max_attempts,
    })
}

/// Small named graphs used by tests, examples and the CLI.
pub mod named {
    use super::Multigraph;

    pub fn complete(k: usize) -> Multigraph {
        let mut e = Vec::new();
        for u in 0..k {
            for v in u + 1..k {
                e.push((u, v));
            }
        }
        Multigraph::from_edges(k, e).unwrap()
    }

    pub fn cycle(k: usize) -> Multigraph {
        Multigraph::from_edges(k, (0..k).map(|i| (i, (i + 1) % k)).collect()).unwrap()
    }

    pub fn path(k: usize) -> Multigraph {
        Multigraph::from_edges(k, (1..k).map(|i| (i - 1, i)).collect()).unwrap()
    }

    pub fn empty(k: usize) -> Multigraph {
        Multigraph::from_edges(k, Vec::new()).unwrap()
    }

    pub fn petersen() -> Multigraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Multigraph::from_edges(10, e).unwrap()
    }

    /// The Heawood graph (cubic, girth 6, 14 vertices).
    pub fn heawood() -> Multigraph {
        let mut e = Vec::new();
        for i in 0..14 {
            e.push((i, (i + 1) % 14));
        }
        for i in (0..14).step_by(2) {
            e.push((i, (i + 5) % 14));
        }
        Multigraph::from_edges(14, e).unwrap()
    }
}
