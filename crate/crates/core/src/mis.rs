//! Exact independence numbers, independent-set counting, MAI
//! decompositions and the audits of their structural properties.
//!
//! An *AI set* induces maximum degree at most one. A *MAI set* is a largest
//! AI set `A` that contains a maximum independent set. Since every component
//! of `G[A]` is a vertex or an edge, `|A| − |E(G[A])|` counts components and
//! is the size of a largest independent subset of `A`; so "contains a
//! maximum independent set" is equivalent to `|A| − |E(G[A])| = α(G)`.
//! Consequently `A = A′ ∪ P` where `A′` is a maximum independent set and
//! every `p ∈ P` has exactly one neighbour in `A′` (its anchor), no
//! neighbour in `P`, and no two partners share an anchor. For a fixed `A′`
//! the best `P` is a maximum independent set of the conflict graph on the
//! candidate partners, which is how [`mai_exact`] searches.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bitset::Bits;
use crate::graph::{self, Girth, Multigraph};
use crate::Error;

/// Default node budget for every exact search in this module.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// `α(G)` with a lexicographically least maximum independent set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaWitness {
    pub alpha: usize,
    pub witness: Vec<usize>,
    /// Vertices carrying a loop; they can never be in an independent set.
    pub excluded_loops: Vec<usize>,
}

struct Solver<'a> {
    adj: &'a [Vec<usize>],
    nodes: u64,
    budget: u64,
}

impl<'a> Solver<'a> {
    fn new(adj: &'a [Vec<usize>], budget: u64) -> Self {
        Solver { adj, nodes: 0, budget }
    }

    fn tick(&mut self) -> Result<(), Error> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Error::Budget { budget: self.budget })
        } else {
            Ok(())
        }
    }

    fn deg(&self, v: usize, rem: &Bits) -> usize {
        self.adj[v].iter().filter(|&&w| rem.contains(w)).count()
    }

    fn remove_closed(&self, rem: &mut Bits, v: usize) {
        rem.remove(v);
        for &w in &self.adj[v] {
            rem.remove(w);
        }
    }

    /// `|rem|` minus a greedy maximal matching: each matched edge holds at
    /// most one vertex of an independent set.
    fn matching_bound(&self, rem: &Bits) -> usize {
        let mut used = Bits::new(self.adj.len());
        let mut matched = 0;
        for v in rem.iter() {
            if used.contains(v) {
                continue;
            }
            if let Some(&w) = self.adj[v].iter().find(|&&w| rem.contains(w) && !used.contains(w)) {
                used.insert(v);
                used.insert(w);
                matched += 1;
            }
        }
        rem.len() - matched
    }

    fn components(&self, rem: &Bits) -> Vec<Bits> {
        let mut seen = Bits::new(self.adj.len());
        let mut out = Vec::new();
        for s in rem.iter() {
            if seen.contains(s) {
                continue;
            }
            let mut comp = Bits::new(self.adj.len());
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(u) = stack.pop() {
                comp.insert(u);
                for &w in &self.adj[u] {
                    if rem.contains(w) && !seen.contains(w) {
                        seen.insert(w);
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// `(vertices, edges)` of a component.
    fn comp_shape(&self, comp: &Bits) -> (usize, usize) {
        let k = comp.len();
        let twice: usize = comp.iter().map(|v| self.deg(v, comp)).sum();
        (k, twice / 2)
    }

    fn alpha(&mut self, rem: &Bits) -> Result<usize, Error> {
        self.tick()?;
        let mut rem = rem.clone();
        let mut acc = 0;
        loop {
            if rem.is_empty() {
                return Ok(acc);
            }
            let mut min = (usize::MAX, 0);
            let mut max = (0, 0);
            for v in rem.iter() {
                let d = self.deg(v, &rem);
                if d < min.0 {
                    min = (d, v);
                }
                if d > max.0 {
                    max = (d, v);
                }
            }
            if min.0 <= 1 {
                // some maximum independent set contains a vertex of degree ≤ 1
                self.remove_closed(&mut rem, min.1);
                acc += 1;
                continue;
            }
            if max.0 <= 2 {
                // disjoint cycles
                return Ok(acc + self.components(&rem).iter().map(|c| c.len() / 2).sum::<usize>());
            }
            let comps = self.components(&rem);
            if comps.len() > 1 {
                let mut total = acc;
                for c in &comps {
                    total += self.alpha(c)?;
                }
                return Ok(total);
            }
            let v = max.1;
            let mut inc = rem.clone();
            self.remove_closed(&mut inc, v);
            let with_v = 1 + self.alpha(&inc)?;
            let mut exc = rem;
            exc.remove(v);
            if self.matching_bound(&exc) <= with_v {
                return Ok(acc + with_v);
            }
            let without_v = self.alpha(&exc)?;
            return Ok(acc + with_v.max(without_v));
        }
    }

    fn count(&mut self, rem: &Bits) -> Result<BigUint, Error> {
        self.tick()?;
        if rem.is_empty() {
            return Ok(BigUint::one());
        }
        let comps = self.components(rem);
        if comps.len() > 1 {
            let mut prod = BigUint::one();
            for c in &comps {
                prod *= self.count(c)?;
            }
            return Ok(prod);
        }
        let mut max = (0, 0);
        for v in rem.iter() {
            let d = self.deg(v, rem);
            if d > max.0 {
                max = (d, v);
            }
        }
        if max.0 <= 2 {
            let (k, m) = self.comp_shape(rem);
            return Ok(if m == k && k >= 3 {
                fibonacci(k as u64 - 1) + fibonacci(k as u64 + 1)
            } else {
                fibonacci(k as u64 + 2)
            });
        }
        let v = max.1;
        let mut exc = rem.clone();
        exc.remove(v);
        let mut inc = rem.clone();
        self.remove_closed(&mut inc, v);
        Ok(self.count(&exc)? + self.count(&inc)?)
    }

    /// Lexicographically least independent set of size `alpha` inside
    /// `allowed`, where `alpha` is the independence number of `G[allowed]`.
    fn lex_least(&mut self, allowed: &Bits, alpha: usize) -> Result<Vec<usize>, Error> {
        let mut allowed = allowed.clone();
        let mut chosen = Vec::with_capacity(alpha);
        let order: Vec<usize> = allowed.iter().collect();
        for v in order {
            if chosen.len() == alpha {
                break;
            }
            if !allowed.contains(v) {
                continue;
            }
            let mut rest = allowed.clone();
            self.remove_closed(&mut rest, v);
            for w in allowed.iter().filter(|&w| w < v) {
                rest.remove(w);
            }
            let need = alpha - chosen.len() - 1;
            if self.matching_bound(&rest) >= need && self.alpha(&rest)? >= need {
                chosen.push(v);
                allowed = rest;
            } else {
                allowed.remove(v);
            }
        }
        debug_assert_eq!(chosen.len(), alpha);
        Ok(chosen)
    }

    /// Every independent set of size `target` within `rem`, in
    /// lexicographic order. `target` must be the independence number.
    fn enumerate_max(
        &mut self,
        rem: &Bits,
        target: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), Error> {
        self.tick()?;
        if chosen.len() == target {
            out.push(chosen.clone());
            return Ok(());
        }
        if chosen.len() + self.matching_bound(rem) < target {
            return Ok(());
        }
        let Some(v) = rem.iter().next() else {
            return Ok(());
        };
        let mut inc = rem.clone();
        self.remove_closed(&mut inc, v);
        chosen.push(v);
        self.enumerate_max(&inc, target, chosen, out)?;
        chosen.pop();
        let mut exc = rem.clone();
        exc.remove(v);
        self.enumerate_max(&exc, target, chosen, out)
    }
}

fn usable_vertices(g: &Multigraph) -> (Bits, Vec<usize>) {
    let mut rem = Bits::full(g.n());
    let mut loops = Vec::new();
    for v in 0..g.n() {
        if g.has_loop(v) {
            rem.remove(v);
            loops.push(v);
        }
    }
    (rem, loops)
}

/// Exact `α(G)` with the default budget.
pub fn alpha_exact(g: &Multigraph) -> Result<AlphaWitness, Error> {
    alpha_exact_with_budget(g, DEFAULT_BUDGET)
}

/// Exact `α(G)` by branch and bound with degree-≤1 and cycle reductions.
/// Loop vertices are excluded; parallel edges count once.
pub fn alpha_exact_with_budget(g: &Multigraph, budget: u64) -> Result<AlphaWitness, Error> {
    let adj = g.simple_adjacency();
    let mut s = Solver::new(&adj, budget);
    let (rem, loops) = usable_vertices(g);
    let alpha = s.alpha(&rem)?;
    let witness = s.lex_least(&rem, alpha)?;
    Ok(AlphaWitness {
        alpha,
        witness,
        excluded_loops: loops,
    })
}

/// Number of independent sets including the empty set, with the default budget.
pub fn count_independent_sets(g: &Multigraph) -> Result<BigUint, Error> {
    count_independent_sets_with_budget(g, DEFAULT_BUDGET)
}

/// `I(G)` via `I(G) = I(G − v) + I(G − N[v])`, split into components, with
/// closed forms `F_{k+2}` for paths and `F_{k−1} + F_{k+1}` for cycles.
pub fn count_independent_sets_with_budget(g: &Multigraph, budget: u64) -> Result<BigUint, Error> {
    let adj = g.simple_adjacency();
    let mut s = Solver::new(&adj, budget);
    let (rem, _) = usable_vertices(g);
    s.count(&rem)
}

/// Every maximum independent set of `G`, in lexicographic order.
pub fn all_maximum_independent_sets(g: &Multigraph, alpha: usize, budget: u64) -> Result<Vec<Vec<usize>>, Error> {
    let adj = g.simple_adjacency();
    let mut s = Solver::new(&adj, budget);
    let (rem, _) = usable_vertices(g);
    let mut out = Vec::new();
    s.enumerate_max(&rem, alpha, &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Fibonacci number with `F_0 = 0, F_1 = 1`, exact.
pub fn fibonacci(k: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..k {
        let next = &a + &b;
        a = b;
        b = next;
    }
    a
}

/// `I(2, g) = (F_{s−1} + F_{s+1})^{1/s}` with `s = 2⌊g/2⌋ + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibBound {
    pub g: u32,
    pub s: u32,
    /// `F_{s−1} + F_{s+1}`, the number of independent sets of `C_s`.
    pub cycle_count: BigUint,
    pub value: f64,
}

pub fn fib_bound(g: u32) -> Result<FibBound, Error> {
    if g < 4 {
        return Err(Error::InvalidArgument(format!("fib_bound needs g >= 4, got {g}")));
    }
    let s = 2 * (g / 2) + 1;
    let count = fibonacci(u64::from(s) - 1) + fibonacci(u64::from(s) + 1);
    let ln = match count.to_f64() {
        Some(v) if v.is_finite() && count.bits() <= 53 => v.ln(),
        _ => crate::special::ln_biguint(&count),
    };
    Ok(FibBound {
        g,
        s,
        cycle_count: count,
        value: (ln / f64::from(s)).exp(),
    })
}

/// A MAI set `A` and the derived structure used by the counting argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaiDecomposition {
    pub n: usize,
    pub alpha: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// Edges of `G[A]`.
    pub r: Vec<(usize, usize)>,
    /// Edges of `G[B]`.
    pub r_prime: Vec<(usize, usize)>,
    /// Ends of `R`.
    pub y: Vec<usize>,
    /// Ends of `R′`.
    pub z: Vec<usize>,
    /// Edges `(y, z)` between `Y` and `Z`.
    pub j: Vec<(usize, usize)>,
    pub x: i64,
    pub i: i64,
    pub s: i64,
    pub t: i64,
}

/// Derives `B, R, R′, Y, Z, J, x, i, s, t` from a vertex set `A`.
pub fn decompose(g: &Multigraph, a: &[usize], alpha: usize) -> MaiDecomposition {
    let n = g.n();
    let mut in_a = vec![false; n];
    for &v in a {
        in_a[v] = true;
    }
    let mut a: Vec<usize> = a.to_vec();
    a.sort_unstable();
    a.dedup();
    let b: Vec<usize> = (0..n).filter(|&v| !in_a[v]).collect();
    let adj = g.simple_adjacency();
    let mut r = Vec::new();
    let mut r_prime = Vec::new();
    for u in 0..n {
        for &v in &adj[u] {
            if u < v && in_a[u] == in_a[v] {
                if in_a[u] {
                    r.push((u, v));
                } else {
                    r_prime.push((u, v));
                }
            }
        }
    }
    let ends = |es: &[(usize, usize)]| -> Vec<usize> {
        let s: BTreeSet<usize> = es.iter().flat_map(|&(u, v)| [u, v]).collect();
        s.into_iter().collect()
    };
    let y = ends(&r);
    let z = ends(&r_prime);
    let in_z: HashSet<usize> = z.iter().copied().collect();
    let mut j = Vec::new();
    for &yv in &y {
        for &w in &adj[yv] {
            if in_z.contains(&w) {
                j.push((yv, w));
            }
        }
    }
    let x = a.len() as i64 - r.len() as i64;
    MaiDecomposition {
        n,
        alpha,
        i: n as i64 / 2 - a.len() as i64,
        s: r.len() as i64,
        t: r_prime.len() as i64,
        a,
        b,
        r,
        r_prime,
        y,
        z,
        j,
        x,
    }
}

fn check_mai_preconditions(g: &Multigraph) -> Result<(), Error> {
    if !g.is_simple() {
        return Err(Error::Precondition("MAI decomposition needs a simple graph".into()));
    }
    let gr = graph::girth(g).girth;
    if !gr.at_least(5) {
        return Err(Error::Precondition(format!("MAI decomposition needs girth >= 5, graph has girth {gr}")));
    }
    Ok(())
}

/// Exact MAI set with the default budget.
pub fn mai_exact(g: &Multigraph, aw: &AlphaWitness) -> Result<MaiDecomposition, Error> {
    mai_exact_with_budget(g, aw, DEFAULT_BUDGET)
}

/// Exact MAI set: enumerate the maximum independent sets `A′`, and for each
/// solve the partner problem exactly. Ties are broken towards the first
/// `A′` in lexicographic order and the lexicographically least partner set.
pub fn mai_exact_with_budget(g: &Multigraph, aw: &AlphaWitness, budget: u64) -> Result<MaiDecomposition, Error> {
    check_mai_preconditions(g)?;
    let adj = g.simple_adjacency();
    let n = g.n();
    let independent = aw.witness.iter().all(|&u| aw.witness.iter().all(|&v| !g.has_edge(u, v)));
    if aw.witness.len() != aw.alpha || !independent {
        return Err(Error::Precondition("alpha witness is not an independent set of size alpha".into()));
    }
    let bases = all_maximum_independent_sets(g, aw.alpha, budget)?;
    if bases.is_empty() {
        return Err(Error::Precondition("alpha is larger than the independence number".into()));
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut spent = 0u64;
    for base in &bases {
        let mut in_base = vec![false; n];
        for &v in base {
            in_base[v] = true;
        }
        let mut cand = Vec::new();
        let mut anchor = Vec::new();
        for p in 0..n {
            if in_base[p] {
                continue;
            }
            let hits: Vec<usize> = adj[p].iter().copied().filter(|&w| in_base[w]).collect();
            if hits.len() == 1 {
                cand.push(p);
                anchor.push(hits[0]);
            }
        }
        let distinct: BTreeSet<usize> = anchor.iter().copied().collect();
        if let Some((bp, _)) = &best {
            if distinct.len() <= *bp {
                continue;
            }
        }
        let k = cand.len();
        let mut conflict = vec![Vec::new(); k];
        for i in 0..k {
            for jx in i + 1..k {
                if anchor[i] == anchor[jx] || g.has_edge(cand[i], cand[jx]) {
                    conflict[i].push(jx);
                    conflict[jx].push(i);
                }
            }
        }
        let mut s = Solver::new(&conflict, budget.saturating_sub(spent));
        let all = Bits::full(k);
        let size = s.alpha(&all)?;
        let improves = best.as_ref().is_none_or(|(bp, _)| size > *bp);
        if improves {
            let pick = s.lex_least(&all, size)?;
            let mut a: Vec<usize> = base.clone();
            a.extend(pick.iter().map(|&c| cand[c]));
            a.sort_unstable();
            best = Some((size, a));
        }
        spent += s.nodes;
        if spent > budget {
            return Err(Error::Budget { budget });
        }
    }
    let (_, a) = best.expect("at least one maximum independent set");
    Ok(decompose(g, &a, aw.alpha))
}

/// One audited statement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub lemma_id: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn get(&self, id: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.lemma_id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// The auxiliary graph on the edges of `J`: two `J` edges are adjacent
/// when their `Y` ends or their `Z` ends are adjacent in `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxGraph {
    pub vertices: Vec<(usize, usize)>,
    /// Adjacency pairs with the kind of `G` edge that joins them.
    pub adjacency: Vec<(usize, usize, AuxKind)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuxKind {
    Y,
    Z,
}

impl AuxGraph {
    pub fn to_multigraph(&self) -> Multigraph {
        Multigraph::from_edges(self.vertices.len(), self.adjacency.iter().map(|&(a, b, _)| (a, b)).collect())
            .expect("aux indices in range")
    }

    fn neighbor(&self, l: usize, kind: AuxKind) -> Option<usize> {
        self.adjacency.iter().find_map(|&(a, b, k)| {
            if k != kind {
                None
            } else if a == l {
                Some(b)
            } else if b == l {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Expands every cycle component of `H` into the closed walk of `G`
    /// that alternates `J` edges with the joining `Y`/`Z` edges.
    pub fn expanded_cycles(&self) -> Vec<(usize, Vec<usize>)> {
        let h = self.to_multigraph();
        let k = self.vertices.len();
        let mut seen = vec![false; k];
        let mut out = Vec::new();
        for start in 0..k {
            if seen[start] || h.degree(start) != 2 {
                continue;
            }
            // a component is a cycle iff every vertex on it has degree 2
            let mut comp = vec![start];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                for &w in h.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            if comp.iter().any(|&l| h.degree(l) != 2) {
                continue;
            }
            let mut walk = Vec::new();
            let mut l = start;
            let mut kind = AuxKind::Z;
            let mut steps = 0;
            loop {
                let (y, z) = self.vertices[l];
                match kind {
                    AuxKind::Z => walk.extend([y, z]),
                    AuxKind::Y => walk.extend([z, y]),
                }
                steps += 1;
                let Some(next) = self.neighbor(l, kind) else { break };
                l = next;
                kind = if kind == AuxKind::Z { AuxKind::Y } else { AuxKind::Z };
                if l == start || steps > k {
                    break;
                }
            }
            out.push((comp.len(), walk));
        }
        out
    }
}

pub fn aux_graph(g: &Multigraph, d: &MaiDecomposition) -> AuxGraph {
    let vertices = d.j.clone();
    let mut adjacency = Vec::new();
    for l in 0..vertices.len() {
        for m in l + 1..vertices.len() {
            let (y1, z1) = vertices[l];
            let (y2, z2) = vertices[m];
            if y1 != y2 && g.has_edge(y1, y2) {
                adjacency.push((l, m, AuxKind::Y));
            }
            if z1 != z2 && g.has_edge(z1, z2) {
                adjacency.push((l, m, AuxKind::Z));
            }
        }
    }
    AuxGraph { vertices, adjacency }
}

fn induced_max_degree(g: &Multigraph, set: &[usize]) -> (usize, Option<usize>) {
    let inside: HashSet<usize> = set.iter().copied().collect();
    let adj = g.simple_adjacency();
    let mut worst = (0, None);
    for &v in set {
        let d = adj[v].iter().filter(|w| inside.contains(w)).count();
        if d > worst.0 {
            worst = (d, Some(v));
        }
    }
    worst
}

fn entry(id: &str, pass: bool, witness: serde_json::Value) -> AuditEntry {
    AuditEntry {
        lemma_id: id.to_string(),
        pass,
        witness: if pass { None } else { Some(witness) },
    }
}

/// Checks every structural statement about a decomposition of a cubic
/// graph. Failures carry a JSON counterexample.
pub fn audit_decomposition(g: &Multigraph, d: &MaiDecomposition) -> AuditReport {
    let n = g.n();
    let mut e = Vec::new();

    let mut cover = vec![0u8; n];
    for &v in d.a.iter().chain(&d.b) {
        if v < n {
            cover[v] += 1;
        }
    }
    let bad: Vec<usize> = (0..n).filter(|&v| cover[v] != 1).collect();
    e.push(entry("partition", bad.is_empty(), json!({ "vertices_not_covered_once": bad })));

    let (da, va) = induced_max_degree(g, &d.a);
    e.push(entry("ai_set_a", da <= 1, json!({ "vertex": va, "degree_in_a": da })));

    let x_ok = d.x == d.a.len() as i64 - d.r.len() as i64 && d.x == d.alpha as i64;
    e.push(entry(
        "independent_part",
        x_ok,
        json!({ "x": d.x, "alpha": d.alpha, "size_a": d.a.len(), "edges_in_a": d.r.len() }),
    ));

    let (db, vb) = induced_max_degree(g, &d.b);
    e.push(entry("b_is_ai", db <= 1, json!({ "vertex": vb, "degree_in_b": db })));

    let sizes_ok = d.y.len() as i64 == 2 * d.s && d.z.len() as i64 == 2 * d.t && d.a.len() as i64 == n as i64 / 2 - d.i;
    e.push(entry(
        "sizes",
        sizes_ok,
        json!({ "y": d.y.len(), "s": d.s, "z": d.z.len(), "t": d.t, "a": d.a.len(), "i": d.i }),
    ));

    e.push(entry(
        "t_minus_s",
        d.t - d.s == 3 * d.i,
        json!({ "t": d.t, "s": d.s, "i": d.i }),
    ));

    e.push(entry(
        "sign_pattern",
        d.i >= 0 && d.t >= d.s,
        json!({ "i": d.i, "t": d.t, "s": d.s }),
    ));

    let in_y: HashSet<usize> = d.y.iter().copied().collect();
    let in_z: HashSet<usize> = d.z.iter().copied().collect();
    let adj = g.simple_adjacency();
    let over = |from: &[usize], to: &HashSet<usize>| -> Option<(usize, usize)> {
        from.iter().find_map(|&v| {
            let c = adj[v].iter().filter(|w| to.contains(w)).count();
            (c > 1).then_some((v, c))
        })
    };
    let z_over = over(&d.z, &in_y);
    let y_over = over(&d.y, &in_z);
    e.push(entry(
        "j_matching",
        z_over.is_none() && y_over.is_none(),
        json!({ "z_with_many_y": z_over, "y_with_many_z": y_over }),
    ));

    let in_a: HashSet<usize> = d.a.iter().copied().collect();
    let cut = g
        .edges()
        .iter()
        .filter(|&&(u, v)| in_a.contains(&u) != in_a.contains(&v))
        .count() as i64;
    let expected = 2 * d.x + n as i64 / 2 - d.i;
    e.push(entry(
        "cut_identity",
        cut == expected,
        json!({ "cut": cut, "two_x_plus_half_n_minus_i": expected }),
    ));

    let h = aux_graph(g, d);
    let hm = h.to_multigraph();
    let hdeg = (0..hm.n()).map(|l| hm.degree(l)).max().unwrap_or(0);
    e.push(entry("aux_max_degree", hdeg <= 2, json!({ "max_degree": hdeg })));

    let bad_cycles: Vec<_> = h
        .expanded_cycles()
        .into_iter()
        .filter(|(c, walk)| walk.len() != 2 * c || !graph::is_cycle_in(g, walk))
        .collect();
    e.push(entry(
        "aux_cycles_double",
        bad_cycles.is_empty(),
        json!({ "bad_cycles": bad_cycles }),
    ));

    AuditReport { entries: e }
}

/// Outcome of the swap construction on the auxiliary graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityCheck {
    /// `j = |V(H)| = |J|`.
    pub j: usize,
    /// `I(H)`.
    pub count_lower: BigUint,
    /// Distinct valid sets `(A − Y₁) ∪ Z₁` built from independent sets of `H`.
    pub found: BigUint,
    pub h_girth: Girth,
    /// `found ≥ 1.618^j`, checked only when `H` has girth at least 8.
    pub weight_bound: Option<bool>,
}

/// Builds `(A − Y₁) ∪ Z₁` for every independent set `J′` of `H` and counts
/// how many distinct MAI sets of size `|A|` result.
pub fn mai_multiplicity_check(g: &Multigraph, d: &MaiDecomposition, budget: u64) -> Result<MultiplicityCheck, Error> {
    check_mai_preconditions(g)?;
    let h = aux_graph(g, d);
    let hm = h.to_multigraph();
    let count_lower = count_independent_sets_with_budget(&hm, budget)?;
    let hadj = hm.simple_adjacency();
    let k = h.vertices.len();
    let adj = g.simple_adjacency();
    let a_set: BTreeSet<usize> = d.a.iter().copied().collect();
    let mut distinct: HashSet<Vec<usize>> = HashSet::new();
    let mut nodes = 0u64;
    let mut chosen: Vec<usize> = Vec::new();

    // enumerate independent sets of H depth-first over vertex indices
    #[allow(clippy::too_many_arguments)]
    fn rec(
        idx: usize,
        k: usize,
        hadj: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> Result<(), Error>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<(), Error> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::Budget { budget });
        }
        if idx == k {
            return visit(chosen);
        }
        rec(idx + 1, k, hadj, chosen, visit, nodes, budget)?;
        if hadj[idx].iter().all(|w| !chosen.contains(w)) {
            chosen.push(idx);
            rec(idx + 1, k, hadj, chosen, visit, nodes, budget)?;
            chosen.pop();
        }
        Ok(())
    }

    let mut visit = |sel: &[usize]| -> Result<(), Error> {
        let mut set = a_set.clone();
        for &l in sel {
            set.remove(&h.vertices[l].0);
        }
        for &l in sel {
            set.insert(h.vertices[l].1);
        }
        let v: Vec<usize> = set.into_iter().collect();
        if v.len() != d.a.len() {
            return Ok(());
        }
        let inside: HashSet<usize> = v.iter().copied().collect();
        let mut edges = 0usize;
        for &u in &v {
            let du = adj[u].iter().filter(|w| inside.contains(w)).count();
            if du > 1 {
                return Ok(());
            }
            edges += du;
        }
        if v.len() - edges / 2 != d.alpha {
            return Ok(());
        }
        distinct.insert(v);
        Ok(())
    };
    rec(0, k, &hadj, &mut chosen, &mut visit, &mut nodes, budget)?;

    let found = BigUint::from(distinct.len());
    let h_girth = graph::girth(&hm).girth;
    let weight_bound = if h_girth.at_least(8) {
        // found ≥ (809/500)^j  ⇔  found · 500^j ≥ 809^j
        let lhs = &found * BigUint::from(500u32).pow(k as u32);
        Some(lhs >= BigUint::from(809u32).pow(k as u32))
    } else {
        None
    };
    Ok(MultiplicityCheck {
        j: k,
        count_lower,
        found,
        h_girth,
        weight_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn small_alphas() {
        assert_eq!(alpha_exact(&named::complete(4)).unwrap().alpha, 1);
        assert_eq!(alpha_exact(&named::cycle(6)).unwrap().alpha, 3);
        let p = alpha_exact(&named::petersen()).unwrap();
        assert_eq!(p.alpha, 4);
        assert_eq!(p.witness.len(), 4);
        assert_eq!(alpha_exact(&named::cycle(6)).unwrap().witness, vec![0, 2, 4]);
    }

    #[test]
    fn loops_are_excluded() {
        let g = Multigraph::from_edges(2, vec![(0, 0), (0, 1), (1, 1)]).unwrap();
        let a = alpha_exact(&g).unwrap();
        assert_eq!(a.alpha, 0);
        assert_eq!(a.excluded_loops, vec![0, 1]);
        assert_eq!(count_independent_sets(&g).unwrap(), BigUint::one());
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_independent_sets(&named::empty(3)).unwrap(), BigUint::from(8u32));
        assert_eq!(count_independent_sets(&named::path(2)).unwrap(), BigUint::from(3u32));
        assert_eq!(count_independent_sets(&named::path(4)).unwrap(), BigUint::from(8u32));
        assert_eq!(count_independent_sets(&named::cycle(5)).unwrap(), BigUint::from(11u32));
    }

    #[test]
    fn budget_is_reported() {
        let e = alpha_exact_with_budget(&named::petersen(), 1).unwrap_err();
        assert!(matches!(e, Error::Budget { budget: 1 }));
    }

    #[test]
    fn fib_bound_values() {
        let b = fib_bound(8).unwrap();
        assert_eq!(b.s, 9);
        assert_eq!(b.cycle_count, BigUint::from(76u32));
        assert!(b.value >= 1.618);
        assert!(fib_bound(3).is_err());
        assert_eq!(fib_bound(4).unwrap().cycle_count, BigUint::from(11u32));
    }

    #[test]
    fn mai_preconditions() {
        let k4 = named::complete(4);
        let aw = alpha_exact(&k4).unwrap();
        assert!(matches!(mai_exact(&k4, &aw), Err(Error::Precondition(_))));
    }

    #[test]
    fn petersen_mai_audits_clean() {
        let g = named::petersen();
        let aw = alpha_exact(&g).unwrap();
        let d = mai_exact(&g, &aw).unwrap();
        let rep = audit_decomposition(&g, &d);
        assert!(rep.all_pass(), "{rep:?}");
        let m = mai_multiplicity_check(&g, &d, DEFAULT_BUDGET).unwrap();
        assert!(m.found >= m.count_lower);
    }
}
