//! Labeled simple graphs, canonical forms and isomorphism classes.
//!
//! A [`LabeledNetwork`] on `n` nodes stores its edges as a bitmask over the
//! `n(n-1)/2` dyads. Dyads are ordered column-major: `(0,1), (0,2), (1,2),
//! (0,3), (1,3), (2,3), ...` (0-based), so the dyads among the first `k` nodes
//! always form a prefix of the mask. The same ordering is used for joint
//! probability tables.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::error::{check_cap, Error, Result};

/// Largest node count representable in a 64-bit dyad mask.
pub const MAX_NODES: usize = 11;

/// Largest node count for full class enumeration.
pub const MAX_ENUM_NODES: usize = 8;

pub const fn num_dyads(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Column-major index of the dyad `{i, j}` (0-based, `i != j`).
pub fn dyad_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(a < b);
    b * (b - 1) / 2 + a
}

/// Inverse of [`dyad_index`].
pub fn dyad_pair(idx: usize) -> (usize, usize) {
    let mut b = 1;
    while (b + 1) * b / 2 <= idx {
        b += 1;
    }
    (idx - b * (b - 1) / 2, b)
}

/// Formats a dyad as the 1-based label `i-j`.
pub fn dyad_label(idx: usize) -> String {
    let (a, b) = dyad_pair(idx);
    format!("{}-{}", a + 1, b + 1)
}

/// Parses a 1-based dyad label `i-j`.
pub fn parse_dyad_label(s: &str) -> Result<usize> {
    let (a, b) = s
        .trim()
        .split_once('-')
        .ok_or_else(|| Error::Parse(format!("bad dyad label {s:?}")))?;
    let a: usize = a.parse().map_err(|_| Error::Parse(format!("bad dyad label {s:?}")))?;
    let b: usize = b.parse().map_err(|_| Error::Parse(format!("bad dyad label {s:?}")))?;
    if a == 0 || b == 0 || a == b {
        return Err(Error::Parse(format!("bad dyad label {s:?}")));
    }
    Ok(dyad_index(a - 1, b - 1))
}

/// A simple labeled graph on nodes `0..n` (1-based in all text formats).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledNetwork {
    n: usize,
    mask: u64,
}

impl fmt::Debug for LabeledNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledNetwork(n={}, [{}])", self.n, self.edge_key())
    }
}

impl LabeledNetwork {
    /// Builds a network from 1-based edges. Duplicate edges collapse.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        check_cap("node count", n, MAX_NODES)?;
        let mut mask = 0u64;
        for &(i, j) in edges {
            if i == j {
                return Err(Error::InvalidInput(format!("loop at node {i}")));
            }
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::InvalidInput(format!(
                    "edge {i}-{j} has an endpoint outside 1..{n}"
                )));
            }
            mask |= 1 << dyad_index(i - 1, j - 1);
        }
        Ok(LabeledNetwork { n, mask })
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= MAX_NODES, "node count {n} exceeds {MAX_NODES}");
        let m = num_dyads(n);
        assert!(m == 64 || mask >> m == 0, "mask has bits beyond {m} dyads");
        LabeledNetwork { n, mask }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_mask(n, 0)
    }

    pub fn complete(n: usize) -> Self {
        Self::from_mask(n, full_mask(n))
    }

    /// The `k`-star: hub 1 joined to nodes `2..=k+1`.
    pub fn star(k: usize) -> Self {
        let edges: Vec<_> = (2..=k + 1).map(|j| (1, j)).collect();
        Self::new(k + 1, &edges).expect("star fits")
    }

    /// The path `1-2-...-k`.
    pub fn path(k: usize) -> Self {
        let edges: Vec<_> = (1..k).map(|i| (i, i + 1)).collect();
        Self::new(k, &edges).expect("path fits")
    }

    /// The cycle on `k >= 3` nodes.
    pub fn cycle(k: usize) -> Self {
        let mut edges: Vec<_> = (1..k).map(|i| (i, i + 1)).collect();
        edges.push((1, k));
        Self::new(k, &edges).expect("cycle fits")
    }

    /// `k` pairwise disjoint edges on `2k` nodes.
    pub fn matching(k: usize) -> Self {
        let edges: Vec<_> = (0..k).map(|i| (2 * i + 1, 2 * i + 2)).collect();
        Self::new(2 * k, &edges).expect("matching fits")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn num_dyads(&self) -> usize {
        num_dyads(self.n)
    }

    pub fn edge_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Adjacency test on 0-based nodes.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.mask >> dyad_index(i, j) & 1 == 1
    }

    /// Edges as 0-based pairs `(i, j)`, `i < j`, in dyad order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        BitIter(self.mask).map(dyad_pair)
    }

    /// Neighbourhood bitmasks, one per node.
    pub fn adjacency_rows(&self) -> Vec<u32> {
        let mut rows = vec![0u32; self.n];
        for (i, j) in self.edges() {
            rows[i] |= 1 << j;
            rows[j] |= 1 << i;
        }
        rows
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for (i, j) in self.edges() {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    /// True when every edge of `other` is an edge of `self` (same node set).
    pub fn contains(&self, other: &LabeledNetwork) -> bool {
        debug_assert_eq!(self.n, other.n);
        other.mask & !self.mask == 0
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> LabeledNetwork {
        debug_assert_eq!(perm.len(), self.n);
        let mut mask = 0u64;
        for (i, j) in self.edges() {
            mask |= 1 << dyad_index(perm[i], perm[j]);
        }
        LabeledNetwork { n: self.n, mask }
    }

    /// Nodes incident to at least one edge, ascending.
    pub fn support(&self) -> Vec<usize> {
        let rows = self.adjacency_rows();
        (0..self.n).filter(|&v| rows[v] != 0).collect()
    }

    /// The edge-induced subgraph, relabeled onto `0..k` in increasing order.
    pub fn strip_isolated(&self) -> LabeledNetwork {
        let support = self.support();
        let mut index = vec![usize::MAX; self.n];
        for (new, &old) in support.iter().enumerate() {
            index[old] = new;
        }
        let mut mask = 0u64;
        for (i, j) in self.edges() {
            mask |= 1 << dyad_index(index[i], index[j]);
        }
        LabeledNetwork {
            n: support.len(),
            mask,
        }
    }

    /// The same edges on a larger node set.
    pub fn pad(&self, n: usize) -> LabeledNetwork {
        assert!(n >= self.n && n <= MAX_NODES);
        // Column-major order keeps dyad indices stable under padding.
        LabeledNetwork { n, mask: self.mask }
    }

    /// The subnetwork induced by the first `k` nodes.
    pub fn restrict_prefix(&self, k: usize) -> LabeledNetwork {
        assert!(k <= self.n);
        let m = num_dyads(k);
        LabeledNetwork {
            n: k,
            mask: self.mask & low_bits(m),
        }
    }

    /// The subnetwork induced by `keep` (0-based, relabeled in the given order).
    pub fn induced(&self, keep: &[usize]) -> LabeledNetwork {
        let mut mask = 0u64;
        for (a, &u) in keep.iter().enumerate() {
            for (b, &v) in keep.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    mask |= 1 << dyad_index(a, b);
                }
            }
        }
        LabeledNetwork {
            n: keep.len(),
            mask,
        }
    }

    /// Sorted `i-j` pairs (1-based) joined by commas; empty string for no edges.
    pub fn edge_key(&self) -> String {
        let mut pairs: Vec<(usize, usize)> = self.edges().collect();
        pairs.sort();
        pairs
            .iter()
            .map(|(i, j)| format!("{}-{}", i + 1, j + 1))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the edge-list text format: `n <count>` then one `i j` per line.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("n") {
            return Err(Error::Parse(format!("expected `n <count>`, got {header:?}")));
        }
        let n: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad node count in {header:?}")))?;
        if n == 0 {
            return Err(Error::Parse("node count must be positive".into()));
        }
        if parts.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens in {header:?}")));
        }
        let mut edges = Vec::new();
        for line in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Parse(format!("bad edge line {line:?}")))
                })
                .collect::<Result<_>>()?;
            if nums.len() != 2 {
                return Err(Error::Parse(format!("bad edge line {line:?}")));
            }
            edges.push((nums[0], nums[1]));
        }
        check_cap("node count", n, MAX_NODES)?;
        Self::new(n, &edges).map_err(|e| match e {
            Error::InvalidInput(msg) => Error::Parse(msg),
            other => other,
        })
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        let mut pairs: Vec<(usize, usize)> = self.edges().collect();
        pairs.sort();
        for (i, j) in pairs {
            out.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
        out
    }

    /// Number of nodes of each degree, `(n_0, ..., n_{n-1})`.
    pub fn degree_distribution(&self) -> DegreeDistribution {
        DegreeDistribution::of(self)
    }
}

pub(crate) fn low_bits(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    low_bits(num_dyads(n))
}

/// Iterates set bit positions of a mask, ascending.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let t = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(t)
    }
}

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    ((n - k + 1) as u64..=n as u64).product()
}

/// Lexicographically minimal adjacency string over all vertex orderings.
///
/// `bits` holds the string with its first character as the most significant
/// of the `n(n-1)/2` low bits, so numeric order is string order. Characters
/// follow the column-major dyad order of the relabeled graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalForm {
    pub n_vertices: usize,
    pub bits: u64,
}

impl CanonicalForm {
    /// The canonical representative, as a labeled network on `0..n_vertices`.
    pub fn representative(&self) -> LabeledNetwork {
        let m = num_dyads(self.n_vertices);
        let mut mask = 0u64;
        for t in 0..m {
            if self.bits >> (m - 1 - t) & 1 == 1 {
                mask |= 1 << t;
            }
        }
        LabeledNetwork::from_mask(self.n_vertices, mask)
    }

    pub fn edge_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// The adjacency string as `0`/`1` characters.
    pub fn bit_string(&self) -> String {
        let m = num_dyads(self.n_vertices);
        (0..m)
            .map(|t| if self.bits >> (m - 1 - t) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Canonical form by branch and bound over vertex orderings.
///
/// Vertices are placed one position at a time; placing position `k` fixes the
/// next `k` characters, so a partial ordering whose prefix already exceeds the
/// best complete string is pruned. Among unused candidates for a position,
/// only one of each set of twins (vertices with equal neighbourhoods apart
/// from each other) is tried, as swapping twins is an automorphism. The
/// result equals the brute-force minimum over all `n!` orderings.
pub fn canonical_form(g: &LabeledNetwork) -> CanonicalForm {
    let n = g.n();
    if n <= 1 {
        return CanonicalForm {
            n_vertices: n,
            bits: 0,
        };
    }
    let rows = g.adjacency_rows();
    let mut twin = vec![0u32; n];
    for u in 0..n {
        for v in 0..n {
            if u != v && rows[u] & !(1 << v) == rows[v] & !(1 << u) {
                twin[u] |= 1 << v;
            }
        }
    }
    let m = num_dyads(n);
    let mut search = CanonSearch {
        rows: &rows,
        twin: &twin,
        n,
        m,
        order: Vec::with_capacity(n),
        best: None,
    };
    search.descend(0, 0);
    CanonicalForm {
        n_vertices: n,
        bits: search.best.expect("at least one ordering"),
    }
}

struct CanonSearch<'a> {
    rows: &'a [u32],
    twin: &'a [u32],
    n: usize,
    m: usize,
    order: Vec<usize>,
    best: Option<u64>,
}

impl CanonSearch<'_> {
    fn descend(&mut self, used: u32, prefix: u64) {
        let k = self.order.len();
        if k == self.n {
            if self.best.is_none_or(|b| prefix < b) {
                self.best = Some(prefix);
            }
            return;
        }
        let t = k * (k + 1) / 2;
        let mut tried = 0u32;
        for v in 0..self.n {
            if used >> v & 1 == 1 || self.twin[v] & tried != 0 {
                continue;
            }
            tried |= 1 << v;
            let mut seg = 0u64;
            for &u in &self.order {
                seg = seg << 1 | (self.rows[u] >> v & 1) as u64;
            }
            let cur = prefix << k | seg;
            if let Some(best) = self.best {
                if cur > best >> (self.m - t) {
                    continue;
                }
            }
            self.order.push(v);
            self.descend(used | 1 << v, cur);
            self.order.pop();
        }
    }
}

/// Size of the automorphism group, by backtracking over partial
/// permutations that preserve edges and non-edges.
pub fn aut_count(g: &LabeledNetwork) -> u64 {
    let rows = g.adjacency_rows();
    let deg: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
    let mut image = vec![usize::MAX; g.n()];
    fn go(v: usize, used: u32, rows: &[u32], deg: &[u32], image: &mut [usize]) -> u64 {
        let n = rows.len();
        if v == n {
            return 1;
        }
        let mut total = 0;
        for w in 0..n {
            if used >> w & 1 == 1 || deg[w] != deg[v] {
                continue;
            }
            let consistent = (0..v).all(|u| {
                (rows[u] >> v & 1) == (rows[image[u]] >> w & 1)
            });
            if consistent {
                image[v] = w;
                total += go(v + 1, used | 1 << w, rows, deg, image);
            }
        }
        total
    }
    go(0, 0, &rows, &deg, &mut image)
}

/// An isomorphism class of graphs without isolated vertices (or the empty
/// graph), identified by the canonical form of its edge-induced subgraph.
///
/// Classes order by edge count, then vertex count, then canonical bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnlabeledClass {
    canon: CanonicalForm,
}

impl fmt::Debug for UnlabeledClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(name) => write!(f, "[{name}]"),
            None => write!(f, "[{}]", self.key()),
        }
    }
}

impl Ord for UnlabeledClass {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.edge_count(), self.vertex_count(), self.canon.bits).cmp(&(
            other.edge_count(),
            other.vertex_count(),
            other.canon.bits,
        ))
    }
}

impl PartialOrd for UnlabeledClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl UnlabeledClass {
    /// The class of `g`, ignoring isolated vertices.
    pub fn of(g: &LabeledNetwork) -> Self {
        UnlabeledClass {
            canon: canonical_form(&g.strip_isolated()),
        }
    }

    pub fn empty() -> Self {
        UnlabeledClass {
            canon: CanonicalForm {
                n_vertices: 0,
                bits: 0,
            },
        }
    }

    pub fn edge() -> Self {
        Self::of(&LabeledNetwork::star(1))
    }

    pub fn star(k: usize) -> Self {
        Self::of(&LabeledNetwork::star(k))
    }

    pub fn two_edges() -> Self {
        Self::of(&LabeledNetwork::matching(2))
    }

    pub fn matching(k: usize) -> Self {
        Self::of(&LabeledNetwork::matching(k))
    }

    pub fn triangle() -> Self {
        Self::complete(3)
    }

    pub fn complete(k: usize) -> Self {
        Self::of(&LabeledNetwork::complete(k))
    }

    pub fn path(k: usize) -> Self {
        Self::of(&LabeledNetwork::path(k))
    }

    pub fn cycle(k: usize) -> Self {
        Self::of(&LabeledNetwork::cycle(k))
    }

    /// Triangle with a pendant edge.
    pub fn paw() -> Self {
        Self::of(&paw_network())
    }

    /// `K_4` minus one edge.
    pub fn diamond() -> Self {
        Self::of(&LabeledNetwork::new(4, &[(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]).unwrap())
    }

    pub fn canonical(&self) -> CanonicalForm {
        self.canon
    }

    pub fn is_empty(&self) -> bool {
        self.canon.n_vertices == 0
    }

    pub fn edge_count(&self) -> usize {
        self.canon.edge_count()
    }

    pub fn vertex_count(&self) -> usize {
        self.canon.n_vertices
    }

    /// Canonical representative on nodes `0..vertex_count`.
    pub fn representative(&self) -> LabeledNetwork {
        self.canon.representative()
    }

    /// Canonical representative padded with isolated nodes to `n` nodes.
    pub fn padded(&self, n: usize) -> LabeledNetwork {
        self.representative().pad(n)
    }

    /// `aut` of the representative (without isolated vertices).
    pub fn aut(&self) -> u64 {
        aut_count(&self.representative())
    }

    /// Number of labeled graphs in this class on `n` nodes: `n! / aut(U padded)`.
    pub fn class_size(&self, n: usize) -> u64 {
        assert!(self.vertex_count() <= n);
        let padded_aut = self.aut() * factorial(n - self.vertex_count());
        factorial(n) / padded_aut
    }

    /// Serialization key: sorted `i-j` pairs of the representative, or `EMPTY`.
    pub fn key(&self) -> String {
        if self.is_empty() {
            "EMPTY".to_string()
        } else {
            self.representative().edge_key()
        }
    }

    /// Parses a class key. Any labeling of the class is accepted.
    pub fn parse_key(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("EMPTY") || s.is_empty() {
            return Ok(Self::empty());
        }
        let mut edges = Vec::new();
        let mut n = 0;
        for part in s.split(',') {
            let idx = parse_dyad_label(part)?;
            let (a, b) = dyad_pair(idx);
            n = n.max(b + 1);
            edges.push((a + 1, b + 1));
        }
        check_cap("node count", n, MAX_NODES)?;
        Ok(Self::of(&LabeledNetwork::new(n, &edges)?))
    }

    /// A readable name for small well-known classes.
    pub fn name(&self) -> Option<String> {
        NAMED.iter().find(|(c, _)| c == self).map(|(_, n)| n.clone())
    }

    /// Class from a name such as `"2-star"` or `"paw"`, else from a key.
    pub fn parse_name_or_key(s: &str) -> Result<Self> {
        match NAMED.iter().find(|(_, n)| n == s.trim()) {
            Some((c, _)) => Ok(*c),
            None => Self::parse_key(s),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || connected_components(&self.representative()).len() == 1
    }

    /// Classes of the connected components, with multiplicity.
    pub fn components(&self) -> Vec<UnlabeledClass> {
        let rep = self.representative();
        let mut out: Vec<_> = connected_components(&rep)
            .iter()
            .map(|comp| UnlabeledClass::of(&rep.induced(comp)))
            .collect();
        out.sort();
        out
    }
}

/// The paw on nodes 1..4: triangle 2-3-4 with the pendant edge 1-4.
pub fn paw_network() -> LabeledNetwork {
    LabeledNetwork::new(4, &[(1, 4), (2, 3), (2, 4), (3, 4)]).unwrap()
}

static NAMED: Lazy<Vec<(UnlabeledClass, String)>> = Lazy::new(|| {
    let mut v = vec![
        (UnlabeledClass::empty(), "empty".to_string()),
        (UnlabeledClass::edge(), "edge".to_string()),
        (UnlabeledClass::two_edges(), "two-edges".to_string()),
        (UnlabeledClass::triangle(), "triangle".to_string()),
        (UnlabeledClass::paw(), "paw".to_string()),
        (UnlabeledClass::diamond(), "diamond".to_string()),
    ];
    for k in 2..=7 {
        v.push((UnlabeledClass::star(k), format!("{k}-star")));
    }
    for k in 4..=8 {
        v.push((UnlabeledClass::path(k), format!("{k}-path")));
    }
    for k in 4..=8 {
        v.push((UnlabeledClass::cycle(k), format!("{k}-cycle")));
    }
    for k in 4..=8 {
        v.push((UnlabeledClass::complete(k), format!("K{k}")));
    }
    for k in 3..=4 {
        v.push((UnlabeledClass::matching(k), format!("{k}-matching")));
    }
    v
});

/// Canonical forms of all graphs on exactly `n` nodes (isolated nodes allowed),
/// grown from the graphs on `n - 1` nodes by attaching a new node in every
/// possible way and deduplicating by canonical form.
fn graphs_on(n: usize) -> Arc<Vec<CanonicalForm>> {
    static CACHE: Lazy<Mutex<HashMap<usize, Arc<Vec<CanonicalForm>>>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    if let Some(hit) = CACHE.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let out = if n <= 1 {
        vec![CanonicalForm {
            n_vertices: n,
            bits: 0,
        }]
    } else {
        let smaller = graphs_on(n - 1);
        let mut seen: HashSet<u64> = HashSet::new();
        let mut out = Vec::new();
        for cf in smaller.iter() {
            let base = cf.representative().pad(n);
            for nbrs in 0u64..1 << (n - 1) {
                let mut mask = base.mask();
                for i in BitIter(nbrs) {
                    mask |= 1 << dyad_index(i, n - 1);
                }
                let c = canonical_form(&LabeledNetwork::from_mask(n, mask));
                if seen.insert(c.bits) {
                    out.push(c);
                }
            }
        }
        out
    };
    let out = Arc::new(out);
    CACHE.lock().unwrap().insert(n, out.clone());
    out
}

/// All isomorphism classes of edge-induced subgraphs of `K_n` (graphs without
/// isolated vertices on at most `n` vertices), optionally with the empty
/// class, sorted by edge count, vertex count and canonical bits.
pub fn enumerate_classes(n: usize, include_empty: bool) -> Result<Vec<UnlabeledClass>> {
    if n == 0 {
        return Err(Error::InvalidInput("node count must be positive".into()));
    }
    check_cap("class enumeration node count", n, MAX_ENUM_NODES)?;
    let mut classes: Vec<UnlabeledClass> = graphs_on(n)
        .iter()
        .map(|cf| UnlabeledClass::of(&cf.representative()))
        .filter(|c| include_empty || !c.is_empty())
        .collect();
    classes.sort();
    Ok(classes)
}

/// All classes with between 1 and `max_edges` edges and no isolated vertices,
/// grown edge by edge.
pub fn classes_up_to_edges(max_edges: usize) -> Vec<UnlabeledClass> {
    let mut all: BTreeSet<UnlabeledClass> = BTreeSet::new();
    let mut frontier = vec![UnlabeledClass::empty()];
    for _ in 0..max_edges {
        let mut next = BTreeSet::new();
        for c in &frontier {
            let k = c.vertex_count();
            let target = (k + 2).min(MAX_NODES);
            let rep = c.representative().pad(target);
            for d in 0..num_dyads(target) {
                if rep.mask() >> d & 1 == 1 {
                    continue;
                }
                let (a, b) = dyad_pair(d);
                // The new edge may touch at most the next two unused vertices.
                if a > k || b > k + 1 {
                    continue;
                }
                let g = LabeledNetwork::from_mask(target, rep.mask() | 1 << d);
                next.insert(UnlabeledClass::of(&g));
            }
        }
        all.extend(next.iter().copied());
        frontier = next.into_iter().collect();
    }
    all.into_iter().collect()
}

/// Unnormalized degree distribution `(n_0, ..., n_{n-1})`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct DegreeDistribution {
    pub counts: Vec<usize>,
}

impl DegreeDistribution {
    pub fn of(g: &LabeledNetwork) -> Self {
        let mut counts = vec![0; g.n().max(1)];
        for d in g.degrees() {
            counts[d] += 1;
        }
        DegreeDistribution { counts }
    }

    pub fn node_count(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn edge_count(&self) -> usize {
        self.counts
            .iter()
            .enumerate()
            .map(|(j, c)| j * c)
            .sum::<usize>()
            / 2
    }

    /// Degrees in non-increasing order.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, &c) in self.counts.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(j, c));
        }
        out
    }
}

/// Connected components of the non-isolated vertices, each sorted, ordered
/// by smallest vertex (0-based).
pub fn connected_components(g: &LabeledNetwork) -> Vec<Vec<usize>> {
    let rows = g.adjacency_rows();
    let mut seen = 0u32;
    let mut comps = Vec::new();
    for start in 0..g.n() {
        if rows[start] == 0 || seen >> start & 1 == 1 {
            continue;
        }
        let mut comp = 1u32 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            for v in BitIter(frontier as u64) {
                next |= rows[v];
            }
            frontier = next & !comp;
            comp |= next;
        }
        seen |= comp;
        comps.push(BitIter(comp as u64).collect());
    }
    comps
}

/// Connected components of a dyad set, as dyad masks.
pub fn dyad_components(mask: u64) -> Vec<u64> {
    let mut comps: Vec<(u32, u64)> = Vec::new();
    for d in BitIter(mask) {
        let (a, b) = dyad_pair(d);
        let nodes = (1u32 << a) | (1 << b);
        let mut merged_nodes = nodes;
        let mut merged_mask = 1u64 << d;
        comps.retain(|&(cn, cm)| {
            if cn & nodes != 0 {
                merged_nodes |= cn;
                merged_mask |= cm;
                false
            } else {
                true
            }
        });
        comps.push((merged_nodes, merged_mask));
    }
    let mut out: Vec<u64> = comps.into_iter().map(|(_, m)| m).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_canonical(g: &LabeledNetwork) -> u64 {
        let n = g.n();
        let m = num_dyads(n);
        let mut best = u64::MAX;
        for_each_permutation(n, |perm| {
            // perm[pos] = vertex placed at position pos
            let mut bits = 0u64;
            for t in 0..m {
                let (a, b) = dyad_pair(t);
                bits = bits << 1 | g.has_edge(perm[a], perm[b]) as u64;
            }
            best = best.min(bits);
        });
        best
    }

    fn brute_aut(g: &LabeledNetwork) -> u64 {
        let mut count = 0;
        for_each_permutation(g.n(), |perm| {
            if g.permute(perm) == *g {
                count += 1;
            }
        });
        count
    }

    #[test]
    fn dyad_indexing_round_trips() {
        for idx in 0..num_dyads(MAX_NODES) {
            let (a, b) = dyad_pair(idx);
            assert!(a < b);
            assert_eq!(dyad_index(a, b), idx);
            assert_eq!(dyad_index(b, a), idx);
        }
        assert_eq!(dyad_label(0), "1-2");
        assert_eq!(parse_dyad_label("3-4").unwrap(), dyad_index(2, 3));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(LabeledNetwork::new(3, &[(1, 1)]).is_err());
        assert!(LabeledNetwork::new(3, &[(1, 4)]).is_err());
        assert!(LabeledNetwork::new(3, &[(0, 2)]).is_err());
        assert!(matches!(
            LabeledNetwork::new(12, &[]),
            Err(Error::SizeCap { .. })
        ));
        let g = LabeledNetwork::new(3, &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn canonical_matches_brute_force_exhaustively_up_to_five() {
        for n in 1..=5 {
            for mask in 0..1u64 << num_dyads(n) {
                let g = LabeledNetwork::from_mask(n, mask);
                assert_eq!(canonical_form(&g).bits, brute_canonical(&g), "{g:?}");
            }
        }
    }

    #[test]
    fn triangles_on_different_nodes_share_a_class() {
        let t1 = LabeledNetwork::new(4, &[(1, 2), (1, 3), (2, 3)]).unwrap();
        let t2 = LabeledNetwork::new(4, &[(2, 3), (3, 4), (2, 4)]).unwrap();
        assert_eq!(
            canonical_form(&t1.strip_isolated()),
            canonical_form(&t2.strip_isolated())
        );
        assert_eq!(canonical_form(&t1), canonical_form(&t2));
        assert_eq!(UnlabeledClass::of(&t1), UnlabeledClass::of(&t2));
        let path = LabeledNetwork::new(3, &[(1, 2), (2, 3)]).unwrap();
        let star = LabeledNetwork::new(3, &[(2, 1), (2, 3)]).unwrap();
        assert_eq!(canonical_form(&path), canonical_form(&star));
    }

    #[test]
    fn aut_examples() {
        assert_eq!(aut_count(&LabeledNetwork::complete(3)), 6);
        assert_eq!(aut_count(&LabeledNetwork::star(1)), 2);
        assert_eq!(aut_count(&paw_network()), 2);
        assert_eq!(aut_count(&LabeledNetwork::cycle(5)), 10);
        assert_eq!(aut_count(&LabeledNetwork::empty(4)), 24);
    }

    #[test]
    fn aut_matches_brute_force_up_to_five() {
        for n in 1..=5 {
            for mask in 0..1u64 << num_dyads(n) {
                let g = LabeledNetwork::from_mask(n, mask);
                let a = aut_count(&g);
                assert_eq!(a, brute_aut(&g));
                assert_eq!(factorial(n) % a, 0);
            }
        }
    }

    #[test]
    fn class_counts_match_known_sequence() {
        // graphs on n unlabeled vertices: 1, 2, 4, 11, 34, 156, 1044
        let expect = [1, 2, 4, 11, 34, 156, 1044];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(enumerate_classes(i + 1, true).unwrap().len(), e);
        }
        assert_eq!(enumerate_classes(2, true).unwrap(), vec![
            UnlabeledClass::empty(),
            UnlabeledClass::edge()
        ]);
        assert!(enumerate_classes(9, true).is_err());
        assert!(enumerate_classes(0, true).is_err());
    }

    #[test]
    fn degree_distributions() {
        assert_eq!(paw_network().degree_distribution().counts, vec![0, 1, 2, 1]);
        assert_eq!(LabeledNetwork::empty(5).degree_distribution().counts, vec![5, 0, 0, 0, 0]);
        assert_eq!(LabeledNetwork::complete(4).degree_distribution().counts, vec![0, 0, 0, 4]);
    }

    #[test]
    fn components() {
        let g = LabeledNetwork::matching(2);
        assert_eq!(connected_components(&g).len(), 2);
        assert_eq!(connected_components(&paw_network()).len(), 1);
        let g = LabeledNetwork::new(5, &[(1, 2), (3, 4), (4, 5)]).unwrap();
        assert_eq!(connected_components(&g), vec![vec![0, 1], vec![2, 3, 4]]);
        assert_eq!(dyad_components(g.mask()).len(), 2);
    }

    #[test]
    fn edge_list_format() {
        let text = "# paw\nn 4\n1 4\n\n2 3 # inline\n2 4\n3 4\n";
        let g = LabeledNetwork::parse_edge_list(text).unwrap();
        assert_eq!(g, paw_network());
        assert_eq!(LabeledNetwork::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(matches!(LabeledNetwork::parse_edge_list("4\n1 2"), Err(Error::Parse(_))));
        assert!(matches!(LabeledNetwork::parse_edge_list("n 3\n1 5"), Err(Error::Parse(_))));
        assert!(matches!(LabeledNetwork::parse_edge_list("n 3\n1 2 3"), Err(Error::Parse(_))));
        assert!(matches!(
            LabeledNetwork::parse_edge_list("n 20\n1 2"),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn class_keys_round_trip() {
        for c in enumerate_classes(5, true).unwrap() {
            assert_eq!(UnlabeledClass::parse_key(&c.key()).unwrap(), c);
        }
        assert_eq!(UnlabeledClass::parse_key("4-1,2-3,4-2,3-4").unwrap(), UnlabeledClass::paw());
    }

    #[test]
    fn classes_by_edge_growth() {
        // Graphs with at most 3 edges and no isolated vertices:
        // 1 + 2 + 5 (edge; 2-star, 2K2; triangle, 3-star, P4, P3+K2, 3K2).
        let cs = classes_up_to_edges(3);
        assert_eq!(cs.len(), 8);
        assert!(cs.contains(&UnlabeledClass::matching(3)));
        // the four-edge layer has 11 classes
        assert_eq!(classes_up_to_edges(4).len(), 19);
    }
}
