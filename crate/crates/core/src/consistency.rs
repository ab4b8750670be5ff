//! Marginalization and extendability.
//!
//! An exchangeable law on `n` nodes is extendable to `m` nodes when it is the
//! induced margin of an exchangeable law on `m` nodes. In Möbius coordinates
//! margins keep `z_U` unchanged, so the question is a linear feasibility
//! problem over class distributions on `m` nodes. Checks stop at
//! [`MAX_EXTEND_NODES`]; passing them says nothing about larger `m`.

use std::sync::Arc;

use crate::classdist::ClassDistribution;
use crate::error::{check_cap, Error, Result};
use crate::estimation::dissociated::{dissociation_constraints, solve_all, starting_points, z_form};
use crate::graph::{dyad_index, dyad_pair, num_dyads, UnlabeledClass};
use crate::homcount::ClassTable;
use crate::lp::{solve_standard, LpStatus};
use crate::mobius::{JointTable, MobiusVector};
use crate::optim::{AlOptions, PolyConstraint, SimplexProblem};
use crate::scalar::Scalar;

pub const MAX_EXTEND_NODES: usize = 7;

/// Float tolerance for extendability verdicts.
pub const FLOAT_TOL: f64 = 1e-9;

/// Law of the subnetwork induced by `keep` (relabeled `0..keep.len()` in
/// the given order).
pub fn marginalize_joint<T: Scalar>(jt: &JointTable<T>, keep: &[usize]) -> Result<JointTable<T>> {
    let n = jt.n();
    if keep.is_empty() {
        return Err(Error::InvalidInput("cannot marginalize onto no nodes".into()));
    }
    let mut seen = 0u32;
    for &v in keep {
        if v >= n || seen >> v & 1 == 1 {
            return Err(Error::InvalidInput(format!("bad node {} in marginal of {n}-node joint", v + 1)));
        }
        seen |= 1 << v;
    }
    let k = keep.len();
    // source dyad of each target dyad
    let map: Vec<usize> = (0..num_dyads(k))
        .map(|d| {
            let (i, j) = dyad_pair(d);
            dyad_index(keep[i], keep[j])
        })
        .collect();
    let mut out = vec![T::zero(); 1 << num_dyads(k)];
    for (m, p) in jt.probs().iter().enumerate() {
        let mut t = 0usize;
        for (d, &s) in map.iter().enumerate() {
            t |= (m >> s & 1) << d;
        }
        out[t] = out[t].clone() + p.clone();
    }
    JointTable::new(k, out, 1e-9)
}

/// `z` restricted to classes on at most `n_small` vertices; the values are
/// the same on every margin.
pub fn marginalize_mobius<T: Scalar>(mv: &MobiusVector<T>, n_small: usize) -> Result<MobiusVector<T>> {
    if n_small > mv.n() {
        return Err(Error::InvalidInput(format!("cannot marginalize {} nodes onto {n_small}", mv.n())));
    }
    Ok(mv.restrict(n_small))
}

#[derive(Clone, Debug)]
pub struct ExtendabilityReport<T> {
    pub feasible: bool,
    pub n: usize,
    pub m: usize,
    /// Largest `m` these checks support.
    pub cap: usize,
    /// A law on `m` nodes with the given margin, when feasible.
    pub certificate: Option<ClassDistribution<T>>,
    /// Smallest achievable `max_U |E_q σ_U / sub(U, K_m) − z_U|` (for the
    /// dissociated check, the largest constraint residual reached).
    pub margin: T,
    /// Constraint attaining the margin, when infeasible.
    pub worst_class: Option<UnlabeledClass>,
}

fn check_range(n: usize, m: usize) -> Result<()> {
    check_cap("extension node count", m, MAX_EXTEND_NODES)?;
    if m < n {
        return Err(Error::InvalidParameters(format!("extension size {m} below the margin size {n}")));
    }
    Ok(())
}

/// Whether `mv` is the `n`-node margin of some exchangeable law on `m`
/// nodes.
///
/// Solves `min t` over `q ≥ 0, Σ q = 1` with
/// `|Σ_W q_W σ_U(W) / sub(U, K_m) − z_U| ≤ t` for every nonempty class `U`
/// of `mv`. Exact with rationals; floats accept `t ≤ 1e-9`.
pub fn extendable_check<T: Scalar>(mv: &MobiusVector<T>, m: usize) -> Result<ExtendabilityReport<T>> {
    let n = mv.n();
    check_range(n, m)?;
    let table: Arc<ClassTable> = ClassTable::get(m)?;
    let k = table.len();
    let targets: Vec<(usize, T)> = mv
        .iter()
        .filter(|(c, _)| !c.is_empty())
        .map(|(c, v)| {
            table
                .index_of(c)
                .map(|u| (u, v.clone()))
                .ok_or_else(|| Error::InvalidInput(format!("class {} has more than {m} vertices", c.key())))
        })
        .collect::<Result<_>>()?;
    let d = targets.len();
    // columns: q (k), t, s+ (d), s− (d)
    let cols = k + 1 + 2 * d;
    let mut a = Vec::with_capacity(1 + 2 * d);
    let mut b = Vec::with_capacity(1 + 2 * d);
    let mut row = vec![T::zero(); cols];
    row[..k].iter_mut().for_each(|v| *v = T::one());
    a.push(row);
    b.push(T::one());
    for (i, (u, z)) in targets.iter().enumerate() {
        let sub = table.sub_complete[*u] as i64;
        let coeffs: Vec<T> = table.sigma_row(*u).iter().map(|&s| T::from_ratio(s as i64, sub)).collect();
        for sign in [1i64, -1] {
            let mut row = vec![T::zero(); cols];
            row[..k].clone_from_slice(&coeffs);
            row[k] = T::from_ratio(sign, 1);
            let slack = if sign == 1 { k + 1 + i } else { k + 1 + d + i };
            row[slack] = T::from_ratio(-sign, 1);
            a.push(row);
            b.push(z.clone());
        }
    }
    let mut c = vec![T::zero(); cols];
    c[k] = T::from_ratio(-1, 1);
    let sol = solve_standard(&a, &b, &c, FLOAT_TOL * 1e-3);
    if sol.status != LpStatus::Optimal {
        return Err(Error::InvalidInput(format!("extension LP ended {:?}", sol.status)));
    }
    let margin = sol.x[k].clone();
    let feasible = !(-margin.clone()).is_negative_tol(FLOAT_TOL);
    let q: Vec<T> = sol.x[..k].to_vec();
    let worst_class = if feasible {
        None
    } else {
        let mut worst: Option<(usize, f64)> = None;
        for (u, z) in &targets {
            let e = (table.sigma_row(*u).iter().zip(&q).fold(T::zero(), |acc, (&s, qv)| {
                acc + T::from_u64(s) * qv.clone()
            }) / T::from_u64(table.sub_complete[*u])
                - z.clone())
            .abs_val()
            .to_f64();
            if worst.is_none_or(|(_, w)| e > w) {
                worst = Some((*u, e));
            }
        }
        worst.map(|(u, _)| table.classes[u])
    };
    let certificate = if feasible {
        let q = if T::EXACT { q } else { clip_normalize(q) };
        Some(ClassDistribution::from_vec(m, q, FLOAT_TOL)?)
    } else {
        None
    };
    Ok(ExtendabilityReport { feasible, n, m, cap: MAX_EXTEND_NODES, certificate, margin, worst_class })
}

fn clip_normalize<T: Scalar>(q: Vec<T>) -> Vec<T> {
    let q: Vec<T> = q.into_iter().map(|v| if v.is_negative_tol(0.0) { T::zero() } else { v }).collect();
    let s = q.iter().fold(T::zero(), |a, v| a + v.clone());
    q.into_iter().map(|v| v / s.clone()).collect()
}

#[derive(Clone, Debug)]
pub struct DissociatedExtendOptions {
    pub restarts: usize,
    pub seed: u64,
    pub al: AlOptions,
    /// Largest constraint residual accepted as feasible.
    pub tol: f64,
}

impl Default for DissociatedExtendOptions {
    fn default() -> Self {
        // pure feasibility: stationarity is irrelevant, stop on the residual
        let al = AlOptions { kkt_tol: f64::INFINITY, ..AlOptions::default() };
        DissociatedExtendOptions { restarts: 8, seed: 0, al, tol: 1e-8 }
    }
}

/// Extendability to a dissociated exchangeable law on `m` nodes.
///
/// Minimizes the constraint violation of the margin equations together with
/// `z_B = Π z_{C_i}` on every disconnected class of the extension, from
/// several starts. This is a local search: a positive verdict comes with a
/// certificate whose residual is recomputed, a negative verdict only means
/// no start reached the tolerance.
pub fn dissociated_extendable_check(
    mv: &MobiusVector<f64>,
    m: usize,
    opts: &DissociatedExtendOptions,
) -> Result<ExtendabilityReport<f64>> {
    let n = mv.n();
    check_range(n, m)?;
    let table = ClassTable::get(m)?;
    let k = table.len();
    let mut constraints = dissociation_constraints(&table);
    let mut targets = Vec::new();
    for (c, &z) in mv.iter().filter(|(c, _)| !c.is_empty()) {
        let u = table
            .index_of(c)
            .ok_or_else(|| Error::InvalidInput(format!("class {} has more than {m} vertices", c.key())))?;
        targets.push((u, z));
        constraints.push(PolyConstraint::linear(z_form(&table, u), -z));
    }
    let problem = SimplexProblem { dim: k, objective: vec![0.0; k], constraints };
    let starts = starting_points(k, opts.restarts.max(1), opts.seed);
    let results = solve_all(&problem, &starts, &opts.al);
    let best = results
        .iter()
        .min_by(|a, b| a.constraint_residual.partial_cmp(&b.constraint_residual).unwrap())
        .expect("at least one start");
    let q = clip_normalize(best.q.clone());
    let residuals: Vec<f64> = problem.constraints.iter().map(|c| c.value(&q).abs()).collect();
    let margin = residuals.iter().cloned().fold(0.0, f64::max);
    let feasible = margin <= opts.tol;
    let worst_class = if feasible {
        None
    } else {
        let nd = problem.constraints.len() - targets.len();
        let (i, _) = residuals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        Some(if i >= nd {
            table.classes[targets[i - nd].0]
        } else {
            table.classes.iter().filter(|c| !c.is_empty() && !c.is_connected()).nth(i).copied().unwrap()
        })
    };
    let certificate = if feasible { Some(ClassDistribution::from_vec(m, q, FLOAT_TOL)?) } else { None };
    Ok(ExtendabilityReport { feasible, n, m, cap: MAX_EXTEND_NODES, certificate, margin, worst_class })
}

/// Node relabelings are irrelevant for exchangeable margins, so the margin
/// onto the first `k` nodes stands for all of them.
pub fn first_nodes_margin<T: Scalar>(jt: &JointTable<T>, k: usize) -> Result<JointTable<T>> {
    marginalize_joint(jt, &(0..k).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::exch::exch_mle;
    use crate::genmodels::er_joint;
    use crate::graph::paw_network;
    use crate::mobius::{labeled_mobius_from_joint, mobius_from_class_distribution};
    use crate::scalar::{rat, Rational};

    #[test]
    fn er_margins_are_er() {
        let p = rat(1, 3);
        let jt = er_joint(5, &p).unwrap();
        assert_eq!(first_nodes_margin(&jt, 3).unwrap(), er_joint(3, &p).unwrap());
        assert_eq!(marginalize_joint(&jt, &[4, 1, 2]).unwrap(), er_joint(3, &p).unwrap());
    }

    #[test]
    fn margin_commutes_with_mobius() {
        let jt = er_joint(4, &rat(2, 7)).unwrap();
        let a = labeled_mobius_from_joint(&first_nodes_margin(&jt, 3).unwrap());
        let b = labeled_mobius_from_joint(&jt);
        for (mask, v) in a.values().iter().enumerate() {
            assert_eq!(v, b.z(mask as u64));
        }
    }

    #[test]
    fn paw_mle_is_not_extendable() {
        let z = exch_mle(&paw_network()).unwrap();
        let r4 = extendable_check(&z, 4).unwrap();
        assert!(r4.feasible);
        let back = mobius_from_class_distribution(r4.certificate.as_ref().unwrap());
        for (c, v) in z.iter() {
            assert_eq!(back.get(c).unwrap(), v);
        }
        let r5 = extendable_check(&z, 5).unwrap();
        assert!(!r5.feasible);
        assert!(r5.margin > Rational::from_u64(0));
        assert!(r5.worst_class.is_some());
    }

    #[test]
    fn er_extends() {
        let z = MobiusVector::erdos_renyi(4, &rat(1, 3)).unwrap();
        assert!(extendable_check(&z, 6).unwrap().feasible);
        let zf = z.to_f64();
        let r = dissociated_extendable_check(&zf, 5, &DissociatedExtendOptions::default()).unwrap();
        assert!(r.feasible, "{}", r.margin);
    }
}
