//! Dependence structures over dyads: incidence and Kneser graphs, separation,
//! exact conditional-independence tests, Markov checks and skeletons.

use std::fmt;

use crate::error::{check_cap, Error, Result};
use crate::graph::{dyad_components, dyad_index, dyad_label, dyad_pair, num_dyads, BitIter};
use crate::mobius::{JointTable, LabeledMobius};
use crate::scalar::Scalar;

/// Largest dyad count for exhaustive separation-triple enumeration.
pub const MAX_MARKOV_DYADS: usize = 6;
/// Largest node count for skeleton search.
pub const MAX_SKELETON_NODES: usize = 4;
/// Largest vertex count for connected-set enumeration.
pub const MAX_CONNECTED_SET_VERTICES: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Undirected,
    Bidirected,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Undirected => "undirected",
            EdgeKind::Bidirected => "bidirected",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "undirected" => Ok(EdgeKind::Undirected),
            "bidirected" => Ok(EdgeKind::Bidirected),
            _ => Err(Error::Parse(format!("unknown edge kind {s:?}"))),
        }
    }
}

/// A graph whose vertices are the dyads of `n` nodes, in dyad-index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependenceGraph {
    n: usize,
    kind: EdgeKind,
    adj: Vec<u64>,
}

impl DependenceGraph {
    pub fn empty(n: usize, kind: EdgeKind) -> Self {
        DependenceGraph { n, kind, adj: vec![0; num_dyads(n)] }
    }

    /// Builds from pairs of dyad indices.
    pub fn from_edges(n: usize, kind: EdgeKind, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n, kind);
        let m = num_dyads(n);
        for &(u, v) in edges {
            if u >= m || v >= m {
                return Err(Error::InvalidInput(format!("dyad index out of range for {n} nodes")));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-adjacency at dyad {}", dyad_label(u))));
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        Ok(g)
    }

    fn from_relation(n: usize, kind: EdgeKind, rel: impl Fn((usize, usize), (usize, usize)) -> bool) -> Self {
        let m = num_dyads(n);
        let mut g = Self::empty(n, kind);
        for u in 0..m {
            for v in 0..m {
                if u != v && rel(dyad_pair(u), dyad_pair(v)) {
                    g.adj[u] |= 1 << v;
                }
            }
        }
        g
    }

    pub fn complete(n: usize, kind: EdgeKind) -> Self {
        Self::from_relation(n, kind, |_, _| true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> EdgeKind {
        self.kind
    }

    pub fn with_kind(&self, kind: EdgeKind) -> Self {
        DependenceGraph { kind, ..self.clone() }
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbours(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as dyad-index pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let m = self.num_vertices();
        (0..m)
            .flat_map(|u| ((u + 1)..m).filter(move |&v| self.adj[u] >> v & 1 == 1).map(move |v| (u, v)))
            .collect()
    }

    pub fn complement(&self) -> Self {
        let full = (1u64 << self.num_vertices()) - 1;
        DependenceGraph {
            n: self.n,
            kind: self.kind,
            adj: self.adj.iter().enumerate().map(|(v, r)| !r & full & !(1 << v)).collect(),
        }
    }

    /// `{1-2,3-4}` for a set of dyads.
    pub fn set_label(&self, mask: u64) -> String {
        let parts: Vec<String> = BitIter(mask).map(dyad_label).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Vertex sets of the connected components of the subgraph induced on
    /// `mask`, in order of their lowest vertex.
    pub fn components_within(&self, mask: u64) -> Vec<u64> {
        let mut left = mask;
        let mut out = Vec::new();
        while left != 0 {
            let comp = self.reach(left & left.wrapping_neg(), mask);
            out.push(comp);
            left &= !comp;
        }
        out
    }

    /// Vertices reachable from `start` inside `within`.
    fn reach(&self, start: u64, within: u64) -> u64 {
        let mut seen = start & within;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in BitIter(frontier) {
                next |= self.adj[v];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    pub fn is_connected_set(&self, mask: u64) -> bool {
        mask != 0 && self.reach(mask & mask.wrapping_neg(), mask) == mask
    }

    /// All nonempty connected vertex sets, ascending by mask.
    pub fn connected_sets(&self) -> Result<Vec<u64>> {
        check_cap("connected-set vertex count", self.num_vertices(), MAX_CONNECTED_SET_VERTICES)?;
        Ok((1..1u64 << self.num_vertices())
            .filter(|&s| self.is_connected_set(s))
            .collect())
    }

    /// Whether the graph implies `A ⊥ B | S`. Undirected: every path from
    /// `A` to `B` meets `S`. Bidirected: every path leaves `A ∪ B ∪ S`.
    pub fn separates(&self, a: u64, b: u64, s: u64) -> bool {
        let within = match self.kind {
            EdgeKind::Undirected => {
                let full = (1u64 << self.num_vertices()) - 1;
                full & !s
            }
            EdgeKind::Bidirected => a | b | s,
        };
        self.reach(a, within) & b == 0
    }

    /// Restriction to the dyads among the given 0-based nodes, relabeled
    /// `0..keep.len()` in the given order.
    pub fn restrict_nodes(&self, keep: &[usize]) -> DependenceGraph {
        let k = keep.len();
        let mut g = Self::empty(k, self.kind);
        for u in 0..num_dyads(k) {
            let (a, b) = dyad_pair(u);
            let ou = dyad_index(keep[a], keep[b]);
            for v in 0..num_dyads(k) {
                let (c, d) = dyad_pair(v);
                if u != v && self.adjacent(ou, dyad_index(keep[c], keep[d])) {
                    g.adj[u] |= 1 << v;
                }
            }
        }
        g
    }
}

/// Dyads adjacent iff they share a node (the line graph of `K_n`).
pub fn incidence_graph(n: usize, kind: EdgeKind) -> DependenceGraph {
    DependenceGraph::from_relation(n, kind, |(a, b), (c, d)| a == c || a == d || b == c || b == d)
}

/// Dyads adjacent iff they are disjoint (`KG_{n,2}`).
pub fn kneser_graph(n: usize, kind: EdgeKind) -> DependenceGraph {
    DependenceGraph::from_relation(n, kind, |(a, b), (c, d)| a != c && a != d && b != c && b != d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliqueShape {
    Triangle,
    /// All dyads share one node, the hub (0-based).
    Star { hub: usize },
    Other,
}

/// Every nonempty clique of the incidence graph with its shape as a
/// subnetwork. Single dyads and incident pairs count as stars (with the
/// lower endpoint as hub when ambiguous).
pub fn incidence_cliques(n: usize) -> Result<Vec<(u64, CliqueShape)>> {
    let g = incidence_graph(n, EdgeKind::Undirected);
    check_cap("incidence clique vertex count", g.num_vertices(), MAX_CONNECTED_SET_VERTICES)?;
    let mut out = Vec::new();
    fn extend(g: &DependenceGraph, clique: u64, cand: u64, out: &mut Vec<(u64, CliqueShape)>) {
        for v in BitIter(cand) {
            let c = clique | 1 << v;
            out.push((c, clique_shape(c)));
            let higher = cand & !((2u64 << v) - 1);
            extend(g, c, higher & g.neighbours(v), out);
        }
    }
    extend(&g, 0, (1u64 << g.num_vertices()) - 1, &mut out);
    out.sort_by_key(|(c, _)| (c.count_ones(), *c));
    Ok(out)
}

fn clique_shape(mask: u64) -> CliqueShape {
    let pairs: Vec<(usize, usize)> = BitIter(mask).map(dyad_pair).collect();
    let (a, b) = pairs[0];
    for hub in [a, b] {
        if pairs.iter().all(|&(c, d)| c == hub || d == hub) {
            return CliqueShape::Star { hub };
        }
    }
    if pairs.len() == 3 {
        let mut nodes: Vec<usize> = pairs.iter().flat_map(|&(c, d)| [c, d]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.len() == 3 {
            return CliqueShape::Triangle;
        }
    }
    CliqueShape::Other
}

/// Marginal of a joint on the dyads in `w`, indexed by the compressed bits
/// of `w` (lowest dyad of `w` is bit 0).
fn marginal<T: Scalar>(jt: &JointTable<T>, w: u64) -> Vec<T> {
    let mut out = vec![T::zero(); 1 << w.count_ones()];
    for (m, p) in jt.probs().iter().enumerate() {
        let idx = compress(m as u64, w);
        out[idx] = out[idx].clone() + p.clone();
    }
    out
}

fn compress(mask: u64, w: u64) -> usize {
    let mut out = 0usize;
    for (k, d) in BitIter(w).enumerate() {
        if mask >> d & 1 == 1 {
            out |= 1 << k;
        }
    }
    out
}

/// Exact (rational) or tolerance-based (float) test of `A ⊥ B | S` on the
/// dyads of a joint. Float mode compares `P(a,b,s) P(s)` with
/// `P(a,s) P(b,s)` relative to `P(s)^2`.
pub fn ci_test<T: Scalar>(jt: &JointTable<T>, a: u64, b: u64, s: u64, tol: f64) -> Result<bool> {
    let full = (1u64 << jt.num_dyads()) - 1;
    if a == 0 || b == 0 {
        return Err(Error::InvalidInput("independence sets must be nonempty".into()));
    }
    if a & b != 0 || a & s != 0 || b & s != 0 || (a | b | s) & !full != 0 {
        return Err(Error::InvalidInput("independence sets must be disjoint dyad sets".into()));
    }
    let w = a | b | s;
    let p = marginal(jt, w);
    let (ca, cb, cs) = (compress(a, w), compress(b, w), compress(s, w));
    let sub = |set: usize| -> Vec<usize> {
        submasks_ascending(set as u64).into_iter().map(|t| t as usize).collect()
    };
    let (la, lb, ls) = (sub(ca), sub(cb), sub(cs));
    for &xs in &ls {
        let ps = la.iter().flat_map(|&xa| lb.iter().map(move |&xb| xa | xb)).fold(T::zero(), |acc, i| acc + p[i | xs].clone());
        if ps.is_zero() {
            continue;
        }
        let pa: Vec<T> = la
            .iter()
            .map(|&xa| lb.iter().fold(T::zero(), |acc, &xb| acc + p[xa | xb | xs].clone()))
            .collect();
        let pb: Vec<T> = lb
            .iter()
            .map(|&xb| la.iter().fold(T::zero(), |acc, &xa| acc + p[xa | xb | xs].clone()))
            .collect();
        let scale = ps.to_f64() * ps.to_f64();
        for (i, &xa) in la.iter().enumerate() {
            for (j, &xb) in lb.iter().enumerate() {
                let lhs = p[xa | xb | xs].clone() * ps.clone();
                let rhs = pa[i].clone() * pb[j].clone();
                let ok = if T::EXACT {
                    lhs == rhs
                } else {
                    (lhs.to_f64() - rhs.to_f64()).abs() <= tol * scale
                };
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A conditional-independence statement `A ⊥ B | S` over dyad masks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CiStatement {
    pub a: u64,
    pub b: u64,
    pub s: u64,
}

impl fmt::Display for CiStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = DependenceGraph::empty(0, EdgeKind::Undirected);
        write!(f, "{} _||_ {} | {}", g.set_label(self.a), g.set_label(self.b), g.set_label(self.s))
    }
}

fn submasks_ascending(set: u64) -> Vec<u64> {
    let mut v = Vec::new();
    let mut t = set;
    loop {
        v.push(t);
        if t == 0 {
            break;
        }
        t = (t - 1) & set;
    }
    v.reverse();
    v
}

/// Checks every independence statement implied by separation in `dep`.
/// Statements are visited by conditioning set (smallest first), then `A`,
/// then `B`; the first failing one is returned.
pub fn global_markov_check<T: Scalar>(
    jt: &JointTable<T>,
    dep: &DependenceGraph,
    tol: f64,
) -> Result<Option<CiStatement>> {
    let m = jt.num_dyads();
    check_cap("Markov check dyad count", m, MAX_MARKOV_DYADS)?;
    if dep.num_vertices() != m {
        return Err(Error::InvalidInput(format!(
            "dependence graph has {} vertices, joint has {m} dyads",
            dep.num_vertices()
        )));
    }
    let full = (1u64 << m) - 1;
    let mut seps = submasks_ascending(full);
    seps.sort_by_key(|s| (s.count_ones(), *s));
    for s in seps {
        let rest = full & !s;
        for a in submasks_ascending(rest).into_iter().filter(|&a| a != 0) {
            for b in submasks_ascending(rest & !a) {
                if b == 0 || b.trailing_zeros() < a.trailing_zeros() {
                    continue;
                }
                if dep.separates(a, b, s) && !ci_test(jt, a, b, s, tol)? {
                    return Ok(Some(CiStatement { a, b, s }));
                }
            }
        }
    }
    Ok(None)
}

/// Undirected graph joining dyads `u, v` unless `u ⊥ v | S` for some `S`.
pub fn skeleton<T: Scalar>(jt: &JointTable<T>, tol: f64) -> Result<DependenceGraph> {
    check_cap("skeleton node count", jt.n(), MAX_SKELETON_NODES)?;
    let m = jt.num_dyads();
    let full = (1u64 << m) - 1;
    let mut edges = Vec::new();
    for u in 0..m {
        for v in (u + 1)..m {
            let others = full & !(1 << u) & !(1 << v);
            let mut separated = false;
            for s in submasks_ascending(others) {
                if ci_test(jt, 1 << u, 1 << v, s, tol)? {
                    separated = true;
                    break;
                }
            }
            if !separated {
                edges.push((u, v));
            }
        }
    }
    DependenceGraph::from_edges(jt.n(), EdgeKind::Undirected, &edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkeletonClass {
    Empty,
    Incidence,
    Kneser,
    Complete,
    Other,
}

impl SkeletonClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SkeletonClass::Empty => "empty",
            SkeletonClass::Incidence => "incidence",
            SkeletonClass::Kneser => "kneser",
            SkeletonClass::Complete => "complete",
            SkeletonClass::Other => "other",
        }
    }
}

/// Exact comparison with the reference graphs on the same node count. When
/// references coincide (`n = 3`, where the incidence graph is complete and
/// the Kneser graph empty) the earlier of empty, complete, incidence, kneser
/// wins.
pub fn classify_skeleton(sk: &DependenceGraph) -> SkeletonClass {
    let n = sk.n();
    let same = |g: DependenceGraph| g.adj == sk.adj;
    if same(DependenceGraph::empty(n, sk.kind)) {
        SkeletonClass::Empty
    } else if same(DependenceGraph::complete(n, sk.kind)) {
        SkeletonClass::Complete
    } else if same(incidence_graph(n, sk.kind)) {
        SkeletonClass::Incidence
    } else if same(kneser_graph(n, sk.kind)) {
        SkeletonClass::Kneser
    } else {
        SkeletonClass::Other
    }
}

/// First dyad set `B` with `z_B` different from the product of `z` over the
/// connected components of `B` (as a subnetwork), if any.
pub fn dissociated_check<T: Scalar>(lm: &LabeledMobius<T>, tol: f64) -> Option<u64> {
    (0..lm.values().len() as u64).find(|&b| {
        let comps = dyad_components(b);
        if comps.len() < 2 {
            return false;
        }
        let prod = comps.iter().fold(T::one(), |acc, &c| acc * lm.z(c).clone());
        !lm.z(b).approx_eq(&prod, tol)
    })
}
