//! Degree-distribution statistics: collisions, summarized laws, and which
//! subgraph counts are functions of the degree distribution.

use std::collections::{BTreeMap, HashMap};

use crate::classdist::ClassDistribution;
use crate::error::{check_cap, Result};
use crate::graph::{enumerate_classes, num_dyads, DegreeDistribution, LabeledNetwork, UnlabeledClass};
use crate::homcount::{sigma, ClassTable};
use crate::mobius::{JointTable, MobiusVector};
use crate::scalar::{Rational, Scalar};

/// Classes on exactly `n` nodes (isolated nodes included) that share one
/// degree distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct CollisionGroup {
    pub degrees: DegreeDistribution,
    pub classes: Vec<UnlabeledClass>,
}

/// Groups of at least two non-isomorphic graphs on `n` nodes with equal
/// degree distributions, ordered by their first member.
pub fn degree_collision_classes(n: usize) -> Result<Vec<CollisionGroup>> {
    check_cap("collision node count", n, 7)?;
    let mut groups: Vec<CollisionGroup> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for c in enumerate_classes(n, true)? {
        let dd = c.padded(n).degree_distribution();
        match index.get(&dd.counts) {
            Some(&i) => groups[i].classes.push(c),
            None => {
                index.insert(dd.counts.clone(), groups.len());
                groups.push(CollisionGroup { degrees: dd, classes: vec![c] });
            }
        }
    }
    groups.retain(|g| g.classes.len() >= 2);
    Ok(groups)
}

/// First pair of labeled networks with equal degree distributions but
/// different probabilities, if any.
pub fn summarized_check<T: Scalar>(jt: &JointTable<T>, tol: f64) -> Result<Option<(LabeledNetwork, LabeledNetwork)>> {
    check_cap("summarized check node count", jt.n(), 6)?;
    let n = jt.n();
    let mut first: HashMap<Vec<usize>, u64> = HashMap::new();
    for m in 0..1u64 << num_dyads(n) {
        let x = LabeledNetwork::from_mask(n, m);
        let key = x.degree_distribution().counts;
        match first.get(&key) {
            Some(&r) => {
                if !jt.probs()[r as usize].approx_eq(&jt.probs()[m as usize], tol) {
                    return Ok(Some((LabeledNetwork::from_mask(n, r), x)));
                }
            }
            None => {
                first.insert(key, m);
            }
        }
    }
    Ok(None)
}

/// Class-level version of [`summarized_check`] for exchangeable laws:
/// compares `q_W / |[W]|` within every collision group.
pub fn summarized_check_classes<T: Scalar>(
    cd: &ClassDistribution<T>,
    tol: f64,
) -> Result<Option<(UnlabeledClass, UnlabeledClass)>> {
    check_cap("summarized check node count", cd.n(), 6)?;
    let n = cd.n();
    for g in degree_collision_classes(n)? {
        let p0 = cd.labeled_prob(&g.classes[0].padded(n));
        for c in &g.classes[1..] {
            if !cd.labeled_prob(&c.padded(n)).approx_eq(&p0, tol) {
                return Ok(Some((g.classes[0], *c)));
            }
        }
    }
    Ok(None)
}

/// Whether `σ_U` is constant on every degree-collision group on `n`
/// nodes; otherwise a witness pair with different counts.
pub fn sigma_is_degree_function(u: &UnlabeledClass, n: usize) -> Result<Option<(UnlabeledClass, UnlabeledClass)>> {
    check_cap("degree-function check node count", n, 7)?;
    for g in degree_collision_classes(n)? {
        let s0 = sigma(u, &g.classes[0].padded(n));
        for c in &g.classes[1..] {
            if sigma(u, &c.padded(n)) != s0 {
                return Ok(Some((g.classes[0], *c)));
            }
        }
    }
    Ok(None)
}

/// `P(x1) = P(x2)` for two classes with equal degree distributions,
/// written both in Möbius coordinates and in class probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct SummarizedConstraint {
    pub first: UnlabeledClass,
    pub second: UnlabeledClass,
    /// `Σ_U coeff_U z_U = 0`.
    pub z_coeffs: BTreeMap<UnlabeledClass, i64>,
    /// `q_first / |[first]| − q_second / |[second]| = 0`.
    pub q_coeffs: (Rational, Rational),
}

impl SummarizedConstraint {
    pub fn residual<T: Scalar>(&self, mv: &MobiusVector<T>) -> T {
        self.z_coeffs.iter().fold(T::zero(), |acc, (u, &c)| {
            let z = mv.get(u).cloned().unwrap_or_else(T::zero);
            let term = T::from_u64(c.unsigned_abs()) * z;
            if c < 0 { acc - term } else { acc + term }
        })
    }
}

/// One constraint per consecutive pair within each collision group.
pub fn summarized_constraints(n: usize) -> Result<Vec<SummarizedConstraint>> {
    check_cap("summarized constraint node count", n, 6)?;
    let table = ClassTable::get(n)?;
    let coeffs = |xi: usize| -> Vec<i64> {
        let xe = table.classes[xi].edge_count();
        (0..table.len())
            .map(|u| {
                let r = table.r(u, xi) as i64;
                if (table.classes[u].edge_count() + xe) % 2 == 0 { r } else { -r }
            })
            .collect()
    };
    let mut out = Vec::new();
    for g in degree_collision_classes(n)? {
        for pair in g.classes.windows(2) {
            let (a, b) = (table.index_of(&pair[0]).unwrap(), table.index_of(&pair[1]).unwrap());
            let (ca, cb) = (coeffs(a), coeffs(b));
            let z_coeffs = table
                .classes
                .iter()
                .zip(ca.iter().zip(&cb))
                .filter(|(_, (x, y))| x != y)
                .map(|(u, (x, y))| (*u, x - y))
                .collect();
            out.push(SummarizedConstraint {
                first: pair[0],
                second: pair[1],
                z_coeffs,
                q_coeffs: (
                    Rational::from_ratio(1, table.sizes[a] as i64),
                    Rational::from_ratio(-1, table.sizes[b] as i64),
                ),
            });
        }
    }
    Ok(out)
}
