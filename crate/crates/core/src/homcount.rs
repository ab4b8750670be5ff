//! Injective homomorphism counts and the subgraph statistics built on them.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use once_cell::sync::{Lazy, OnceCell};

use crate::error::Result;
use crate::graph::{
    enumerate_classes, falling_factorial, for_each_permutation, DegreeDistribution,
    LabeledNetwork, UnlabeledClass,
};
use crate::scalar::Rational;

/// Number of injective maps `V_F -> V_G` sending edges to edges.
///
/// `F` is taken on its non-isolated vertices; the empty graph has exactly one
/// (empty) map. When `F` has more vertices than `G` the count is 0.
pub fn inj(f: &LabeledNetwork, g: &LabeledNetwork) -> u64 {
    let fs = f.strip_isolated();
    let k = fs.n();
    if k == 0 {
        return 1;
    }
    if k > g.n() || fs.edge_count() > g.edge_count() {
        return 0;
    }
    let f_rows = fs.adjacency_rows();
    let g_rows = g.adjacency_rows();
    let g_deg: Vec<u32> = g_rows.iter().map(|r| r.count_ones()).collect();

    // Visit F's vertices so that each one has as many placed neighbours as
    // possible; adjacency constraints then prune early.
    let mut order = Vec::with_capacity(k);
    let mut placed = 0u32;
    while order.len() < k {
        let next = (0..k)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| ((f_rows[v] & placed).count_ones(), f_rows[v].count_ones(), k - v))
            .unwrap();
        order.push(next);
        placed |= 1 << next;
    }
    // For each position, the earlier positions adjacent to it in F.
    let back: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(p, &v)| (0..p).filter(|&q| f_rows[v] >> order[q] & 1 == 1).collect())
        .collect();
    let need: Vec<u32> = order.iter().map(|&v| f_rows[v].count_ones()).collect();

    fn go(
        p: usize,
        used: u32,
        image: &mut [usize],
        back: &[Vec<usize>],
        need: &[u32],
        g_rows: &[u32],
        g_deg: &[u32],
    ) -> u64 {
        if p == back.len() {
            return 1;
        }
        let mut cand = ((1u64 << g_rows.len()) - 1) as u32 & !used;
        for &q in &back[p] {
            cand &= g_rows[image[q]];
        }
        let mut total = 0;
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if g_deg[w] < need[p] {
                continue;
            }
            image[p] = w;
            total += go(p + 1, used | 1 << w, image, back, need, g_rows, g_deg);
        }
        total
    }
    let mut image = vec![0usize; k];
    go(0, 0, &mut image, &back, &need, &g_rows, &g_deg)
}

/// Number of subgraphs of `G` isomorphic to `F`: `inj(F,G) / aut(F)`.
pub fn sub(f: &LabeledNetwork, g: &LabeledNetwork) -> u64 {
    let fs = f.strip_isolated();
    let count = inj(&fs, g);
    let aut = crate::graph::aut_count(&fs);
    assert_eq!(count % aut, 0, "inj({fs:?}, {g:?}) = {count} not divisible by aut = {aut}");
    count / aut
}

/// Injective homomorphism density `inj(F,G) / (|V_G|)_{|V_F|}`.
pub fn t_inj(f: &LabeledNetwork, g: &LabeledNetwork) -> Rational {
    let k = f.strip_isolated().n();
    let total = falling_factorial(g.n(), k);
    if total == 0 {
        return Rational::from_integer(BigInt::from(0));
    }
    Rational::new(BigInt::from(inj(f, g)), BigInt::from(total))
}

/// `σ_U(x)`: how many labeled copies of `U` are subgraphs of `x`.
pub fn sigma(u: &UnlabeledClass, x: &LabeledNetwork) -> u64 {
    if u.is_empty() {
        return 1;
    }
    inj(&u.representative(), x) / u.aut()
}

/// Distinct labeled members of `[U]` on `n` nodes, as sorted dyad masks.
pub fn class_members(u: &UnlabeledClass, n: usize) -> Vec<u64> {
    let padded = u.padded(n);
    let mut seen = HashSet::new();
    for_each_permutation(n, |perm| {
        seen.insert(padded.permute(perm).mask());
    });
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// `r_U(x)`: how many labeled graphs of class `[U]` on `x`'s node set
/// contain `x`, by enumerating the members of `[U]`.
pub fn r_count(u: &UnlabeledClass, x: &LabeledNetwork) -> u64 {
    if u.vertex_count() > x.n() || u.edge_count() < x.edge_count() {
        return 0;
    }
    class_members(u, x.n())
        .into_iter()
        .filter(|&m| m & x.mask() == x.mask())
        .count() as u64
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// `σ_{S_k}(x)` from the degree distribution alone: `Σ_j C(j,k) n_j` for
/// `k != 1`, and the handshake count `Σ_j j n_j / 2` for `k = 1`.
pub fn star_count_from_degrees(dd: &DegreeDistribution, k: usize) -> u64 {
    if k == 1 {
        return dd.edge_count() as u64;
    }
    dd.counts
        .iter()
        .enumerate()
        .map(|(j, &c)| binomial(j, k) * c as u64)
        .sum()
}

/// `σ_{2K_2}(x) = C(|E|, 2) - σ_{S_2}(x)`.
pub fn two_disjoint_edges_from_degrees(dd: &DegreeDistribution) -> u64 {
    binomial(dd.edge_count(), 2) - star_count_from_degrees(dd, 2)
}

/// Counting data for all classes on `n` nodes, computed once per `n`.
#[derive(Debug)]
pub struct ClassTable {
    pub n: usize,
    /// `enumerate_classes(n, true)`; index 0 is the empty class.
    pub classes: Vec<UnlabeledClass>,
    index: HashMap<UnlabeledClass, usize>,
    /// `|[W]|` on `n` nodes.
    pub sizes: Vec<u64>,
    /// `sub(U, K_n)`.
    pub sub_complete: Vec<u64>,
    padded: Vec<LabeledNetwork>,
    sigma_rows: Vec<OnceCell<Vec<u64>>>,
}

impl ClassTable {
    /// Shared table for `n` nodes (`n <= 7`).
    pub fn get(n: usize) -> Result<Arc<ClassTable>> {
        static CACHE: Lazy<Mutex<HashMap<usize, Arc<ClassTable>>>> =
            Lazy::new(|| Mutex::new(HashMap::new()));
        crate::error::check_cap("class table node count", n, 7)?;
        if let Some(t) = CACHE.lock().unwrap().get(&n) {
            return Ok(t.clone());
        }
        let t = Arc::new(Self::build(n)?);
        CACHE.lock().unwrap().insert(n, t.clone());
        Ok(t)
    }

    fn build(n: usize) -> Result<ClassTable> {
        let classes = enumerate_classes(n, true)?;
        let index = classes.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let sizes = classes.iter().map(|c| c.class_size(n)).collect();
        let complete = LabeledNetwork::complete(n);
        let sub_complete = classes
            .iter()
            .map(|c| if c.is_empty() { 1 } else { sub(&c.representative(), &complete) })
            .collect();
        let padded = classes.iter().map(|c| c.padded(n)).collect();
        let sigma_rows = classes.iter().map(|_| OnceCell::new()).collect();
        Ok(ClassTable {
            n,
            classes,
            index,
            sizes,
            sub_complete,
            padded,
            sigma_rows,
        })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn index_of(&self, c: &UnlabeledClass) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Index of the class of a labeled network on `n` nodes.
    pub fn class_index(&self, x: &LabeledNetwork) -> usize {
        self.index[&UnlabeledClass::of(x)]
    }

    /// `σ_U(W)` for every class `W`, with `W` padded to `n` nodes.
    pub fn sigma_row(&self, u: usize) -> &[u64] {
        self.sigma_rows[u].get_or_init(|| {
            let uc = &self.classes[u];
            self.padded
                .iter()
                .map(|w| if uc.edge_count() > w.edge_count() { 0 } else { sigma(uc, w) })
                .collect()
        })
    }

    /// `σ_U(W)` by class index.
    pub fn sigma(&self, u: usize, w: usize) -> u64 {
        self.sigma_row(u)[w]
    }

    /// `r_U(x)` for `x` of class index `xi`, by double counting pairs
    /// `A ⊆ B` with `A ∈ [x]`, `B ∈ [U]`: `|[U]| σ_x(U) / |[x]|`.
    pub fn r(&self, u: usize, xi: usize) -> u64 {
        let num = self.sizes[u] * self.sigma(xi, u);
        debug_assert_eq!(num % self.sizes[xi], 0);
        num / self.sizes[xi]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{aut_count, factorial, num_dyads, paw_network};

    fn brute_inj(f: &LabeledNetwork, g: &LabeledNetwork) -> u64 {
        let fs = f.strip_isolated();
        let k = fs.n();
        if k > g.n() {
            return 0;
        }
        // enumerate all injective maps as the first k entries of permutations,
        // then divide out the (n-k)! completions
        let mut count = 0u64;
        for_each_permutation(g.n(), |perm| {
            if fs.edges().all(|(a, b)| g.has_edge(perm[a], perm[b])) {
                count += 1;
            }
        });
        count / factorial(g.n() - k)
    }

    #[test]
    fn paw_examples() {
        let x = paw_network();
        let s3 = LabeledNetwork::star(3);
        assert_eq!(inj(&s3, &x), 6);
        assert_eq!(inj(&s3, &LabeledNetwork::complete(4)), 24);
        assert_eq!(sub(&LabeledNetwork::star(1), &LabeledNetwork::complete(4)), 6);
        assert_eq!(sub(&LabeledNetwork::star(2), &x), 5);
        assert_eq!(sub(&x, &LabeledNetwork::complete(4)), 12);
        assert_eq!(t_inj(&LabeledNetwork::star(1), &x), Rational::new(2.into(), 3.into()));
        assert_eq!(t_inj(&LabeledNetwork::complete(3), &LabeledNetwork::complete(3)), crate::scalar::rat(1, 1));
        assert_eq!(t_inj(&LabeledNetwork::complete(3), &LabeledNetwork::complete(4)), crate::scalar::rat(1, 1));
    }

    #[test]
    fn inj_into_complete_is_falling_factorial() {
        for c in enumerate_classes(5, false).unwrap() {
            for n in c.vertex_count()..=6 {
                assert_eq!(
                    inj(&c.representative(), &LabeledNetwork::complete(n)),
                    falling_factorial(n, c.vertex_count())
                );
            }
        }
    }

    #[test]
    fn sigma_on_paw() {
        let x = paw_network();
        let expect = [
            (UnlabeledClass::edge(), 4),
            (UnlabeledClass::star(2), 5),
            (UnlabeledClass::two_edges(), 1),
            (UnlabeledClass::triangle(), 1),
            (UnlabeledClass::star(3), 1),
            (UnlabeledClass::path(4), 2),
            (UnlabeledClass::paw(), 1),
            (UnlabeledClass::cycle(4), 0),
            (UnlabeledClass::diamond(), 0),
            (UnlabeledClass::complete(4), 0),
        ];
        for (u, s) in expect {
            assert_eq!(sigma(&u, &x), s, "{u:?}");
        }
        // brute force: count labeled subgraphs of x in each class
        let mut by_class: HashMap<UnlabeledClass, u64> = HashMap::new();
        for m in 0..1u64 << num_dyads(4) {
            if m & x.mask() == m && m != 0 {
                *by_class.entry(UnlabeledClass::of(&LabeledNetwork::from_mask(4, m))).or_default() += 1;
            }
        }
        for (u, s) in by_class {
            assert_eq!(sigma(&u, &x), s);
        }
    }

    #[test]
    fn sigma_identities() {
        for c in enumerate_classes(4, false).unwrap() {
            let x = c.padded(5);
            assert_eq!(sigma(&UnlabeledClass::edge(), &x), x.edge_count() as u64);
        }
        let k5 = LabeledNetwork::complete(5);
        for u in enumerate_classes(5, false).unwrap() {
            assert_eq!(sigma(&u, &k5), sub(&u.representative(), &k5));
        }
        assert_eq!(sigma(&UnlabeledClass::empty(), &k5), 1);
    }

    #[test]
    fn inj_matches_brute_force_on_small_pairs() {
        let classes = enumerate_classes(4, false).unwrap();
        for f in &classes {
            for g in &classes {
                let g4 = g.padded(4);
                assert_eq!(inj(&f.representative(), &g4), brute_inj(&f.representative(), &g4));
            }
        }
    }

    #[test]
    fn r_count_examples() {
        let x = paw_network();
        assert_eq!(r_count(&UnlabeledClass::paw(), &x), 1);
        assert_eq!(r_count(&UnlabeledClass::diamond(), &x), 2);
        assert_eq!(r_count(&UnlabeledClass::complete(4), &x), 1);
        assert_eq!(r_count(&UnlabeledClass::cycle(4), &x), 0);
        for u in enumerate_classes(4, true).unwrap() {
            assert_eq!(r_count(&u, &LabeledNetwork::empty(4)), u.class_size(4));
            assert_eq!(class_members(&u, 4).len() as u64, u.class_size(4));
        }
    }

    #[test]
    fn class_table_r_matches_enumeration() {
        let t = ClassTable::get(5).unwrap();
        for (xi, xc) in t.classes.iter().enumerate() {
            let x = xc.padded(5);
            for (ui, uc) in t.classes.iter().enumerate() {
                assert_eq!(t.r(ui, xi), r_count(uc, &x), "{uc:?} over {xc:?}");
            }
        }
    }

    #[test]
    fn degree_shortcuts() {
        let dd = paw_network().degree_distribution();
        assert_eq!(star_count_from_degrees(&dd, 2), 5);
        assert_eq!(star_count_from_degrees(&dd, 1), 4);
        assert_eq!(two_disjoint_edges_from_degrees(&dd), 1);
        assert_eq!(star_count_from_degrees(&LabeledNetwork::complete(4).degree_distribution(), 3), 4);
        assert_eq!(two_disjoint_edges_from_degrees(&LabeledNetwork::star(1).degree_distribution()), 0);
        assert_eq!(two_disjoint_edges_from_degrees(&LabeledNetwork::path(4).degree_distribution()), 1);
    }

    #[test]
    fn aut_of_paw_is_inj_paw_paw() {
        let x = paw_network();
        assert_eq!(inj(&x, &x), aut_count(&x));
    }
}
