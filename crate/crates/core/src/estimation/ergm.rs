//! Exchangeable exponential random graph families on small node sets.

use std::fmt;

use crate::classdist::ClassDistribution;
use crate::error::{check_cap, Error, Result};
use crate::estimation::{FitReport, FitStatus};
use crate::graph::{LabeledNetwork, UnlabeledClass};
use crate::homcount::{sigma, ClassTable};
use crate::mobius::{mobius_from_class_distribution, MAX_JOINT_NODES};
use crate::lp::in_relative_interior;
use crate::optim::log_sum_exp;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErgmFamily {
    /// One statistic per nonempty class.
    FullExchangeable,
    /// `k`-star counts `k = 1..n-1` and the triangle count.
    FrankStrauss,
    /// `k`-star counts `k = 1..n-1` and the count of two disjoint edges.
    SeStar,
    /// Counts of `k` pairwise disjoint edges, `2k <= n`.
    Kneser,
    /// Degree counts `n_1, …, n_{n-1}`.
    Sem,
}

impl ErgmFamily {
    pub const ALL: [ErgmFamily; 5] = [
        ErgmFamily::FullExchangeable,
        ErgmFamily::FrankStrauss,
        ErgmFamily::SeStar,
        ErgmFamily::Kneser,
        ErgmFamily::Sem,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErgmFamily::FullExchangeable => "full_exchangeable",
            ErgmFamily::FrankStrauss => "frank_strauss",
            ErgmFamily::SeStar => "se_star",
            ErgmFamily::Kneser => "kneser",
            ErgmFamily::Sem => "sem",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == norm)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

/// One sufficient statistic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErgmStat {
    /// `σ_U(x)`.
    Class(UnlabeledClass),
    /// `n_j(x)`, the number of nodes of degree `j`.
    Degree(usize),
}

impl ErgmStat {
    pub fn value(&self, x: &LabeledNetwork) -> u64 {
        match self {
            ErgmStat::Class(u) => sigma(u, x),
            ErgmStat::Degree(j) => x.degrees().iter().filter(|&&d| d == *j).count() as u64,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ErgmStat::Class(u) => u.name().unwrap_or_else(|| u.key()),
            ErgmStat::Degree(j) => format!("n{j}"),
        }
    }
}

impl fmt::Display for ErgmStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A family on `n` nodes with its ordered statistic list.
#[derive(Clone, Debug, PartialEq)]
pub struct ErgmSpec {
    pub family: Option<ErgmFamily>,
    pub n: usize,
    pub stats: Vec<ErgmStat>,
}

impl ErgmSpec {
    pub fn new(family: ErgmFamily, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameters("families need at least two nodes".into()));
        }
        let stars = (1..n).map(|k| ErgmStat::Class(UnlabeledClass::star(k)));
        let stats: Vec<ErgmStat> = match family {
            ErgmFamily::FullExchangeable => crate::graph::enumerate_classes(n, false)?
                .into_iter()
                .map(ErgmStat::Class)
                .collect(),
            ErgmFamily::FrankStrauss => stars
                .chain((n >= 3).then(|| ErgmStat::Class(UnlabeledClass::triangle())))
                .collect(),
            ErgmFamily::SeStar => stars
                .chain((n >= 4).then(|| ErgmStat::Class(UnlabeledClass::two_edges())))
                .collect(),
            ErgmFamily::Kneser => (1..=n / 2)
                .map(|k| ErgmStat::Class(UnlabeledClass::matching(k)))
                .collect(),
            ErgmFamily::Sem => (1..n).map(ErgmStat::Degree).collect(),
        };
        Ok(ErgmSpec { family: Some(family), n, stats })
    }

    /// A family with an arbitrary statistic list.
    pub fn custom(n: usize, stats: Vec<ErgmStat>) -> Result<Self> {
        for s in &stats {
            if let ErgmStat::Class(u) = s {
                if u.is_empty() || u.vertex_count() > n {
                    return Err(Error::InvalidParameters(format!(
                        "statistic class {} does not fit on {n} nodes",
                        u.key()
                    )));
                }
            }
        }
        Ok(ErgmSpec { family: None, n, stats })
    }

    pub fn name(&self) -> String {
        self.family.map_or_else(|| "custom".to_string(), |f| f.as_str().to_string())
    }

    pub fn stat_names(&self) -> Vec<String> {
        self.stats.iter().map(|s| s.name()).collect()
    }
}

/// The ordered statistic vector of `x`.
pub fn ergm_stats(spec: &ErgmSpec, x: &LabeledNetwork) -> Result<Vec<u64>> {
    if x.n() != spec.n {
        return Err(Error::InvalidInput(format!(
            "network has {} nodes, family is on {}",
            x.n(),
            spec.n
        )));
    }
    Ok(spec.stats.iter().map(|s| s.value(x)).collect())
}

/// Class-level view of a family: statistics of every class on `n` nodes.
struct ClassModel {
    /// `stats[w][k]`.
    stats: Vec<Vec<f64>>,
    log_sizes: Vec<f64>,
}

impl ClassModel {
    fn new(spec: &ErgmSpec) -> Result<Self> {
        check_cap("exponential family node count", spec.n, MAX_JOINT_NODES)?;
        let table = ClassTable::get(spec.n)?;
        let stats = table
            .classes
            .iter()
            .map(|w| {
                let x = w.padded(spec.n);
                spec.stats.iter().map(|s| s.value(&x) as f64).collect()
            })
            .collect();
        let log_sizes = table.sizes.iter().map(|&s| (s as f64).ln()).collect();
        Ok(ClassModel { stats, log_sizes })
    }

    fn log_weights(&self, nu: &[f64]) -> Vec<f64> {
        self.stats
            .iter()
            .zip(&self.log_sizes)
            .map(|(s, ls)| ls + s.iter().zip(nu).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }

    fn psi(&self, nu: &[f64]) -> f64 {
        log_sum_exp(&self.log_weights(nu))
    }

    /// Class probabilities, mean and covariance of the statistics.
    fn moments(&self, nu: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>, f64) {
        let lw = self.log_weights(nu);
        let psi = log_sum_exp(&lw);
        let p: Vec<f64> = lw.iter().map(|l| (l - psi).exp()).collect();
        let d = nu.len();
        let mut mean = vec![0.0; d];
        for (pw, s) in p.iter().zip(&self.stats) {
            for k in 0..d {
                mean[k] += pw * s[k];
            }
        }
        let mut cov = vec![vec![0.0; d]; d];
        for (pw, s) in p.iter().zip(&self.stats) {
            for i in 0..d {
                let di = s[i] - mean[i];
                for j in 0..d {
                    cov[i][j] += pw * di * (s[j] - mean[j]);
                }
            }
        }
        (p, mean, cov, psi)
    }
}

/// `P(X = x) = exp(⟨ν, s(x)⟩ − ψ(ν))`, with `ψ` summed over classes.
pub fn ergm_eval(spec: &ErgmSpec, nu: &[f64], x: &LabeledNetwork) -> Result<f64> {
    Ok(ergm_log_eval(spec, nu, x)?.exp())
}

pub fn ergm_log_eval(spec: &ErgmSpec, nu: &[f64], x: &LabeledNetwork) -> Result<f64> {
    if nu.len() != spec.stats.len() {
        return Err(Error::InvalidParameters(format!(
            "{} parameters for {} statistics",
            nu.len(),
            spec.stats.len()
        )));
    }
    if let Some(v) = nu.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameters(format!("parameter {v} is not finite")));
    }
    let model = ClassModel::new(spec)?;
    let s = ergm_stats(spec, x)?;
    let exponent: f64 = s.iter().zip(nu).map(|(&a, b)| a as f64 * b).sum();
    Ok(exponent - model.psi(nu))
}

/// The class distribution of the family at `nu`.
pub fn ergm_distribution(spec: &ErgmSpec, nu: &[f64]) -> Result<ClassDistribution<f64>> {
    let model = ClassModel::new(spec)?;
    let (p, _, _, _) = model.moments(nu);
    ClassDistribution::from_vec(spec.n, p, 1e-9)
}

#[derive(Clone, Debug)]
pub struct ErgmFitOptions {
    pub max_iter: usize,
    /// Convergence threshold on `‖s(x) − E[s]‖∞`.
    pub grad_tol: f64,
    /// Parameter norm beyond which the estimate is declared at the boundary.
    pub divergence: f64,
    /// Gradient norm required together with divergence for a boundary verdict.
    pub boundary_grad: f64,
    /// Largest Newton step (max-norm).
    pub max_step: f64,
}

impl Default for ErgmFitOptions {
    fn default() -> Self {
        ErgmFitOptions {
            max_iter: 1000,
            grad_tol: 1e-10,
            divergence: 1e3,
            boundary_grad: 1e-6,
            max_step: 10.0,
        }
    }
}

/// Solves `(A + μI) δ = b` for symmetric positive semidefinite `A` by
/// Gaussian elimination with partial pivoting.
fn solve_damped(a: &[Vec<f64>], b: &[f64], mu: f64) -> Vec<f64> {
    let d = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r[i] += mu;
            r.push(b[i]);
            r
        })
        .collect();
    for col in 0..d {
        let piv = (col..d)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        m.swap(col, piv);
        let pv = m[col][col];
        if pv.abs() < 1e-300 {
            continue;
        }
        for r in 0..d {
            if r != col {
                let f = m[r][col] / pv;
                if f != 0.0 {
                    for c in col..=d {
                        m[r][c] -= f * m[col][c];
                    }
                }
            }
        }
    }
    (0..d)
        .map(|i| if m[i][i].abs() < 1e-300 { 0.0 } else { m[i][d] / m[i][i] })
        .collect()
}

/// Maximum likelihood by damped Newton iteration on the exact mean-value map.
pub fn ergm_fit(spec: &ErgmSpec, x: &LabeledNetwork, opts: &ErgmFitOptions) -> Result<FitReport> {
    let model = ClassModel::new(spec)?;
    let obs: Vec<f64> = ergm_stats(spec, x)?.into_iter().map(|v| v as f64).collect();
    let d = obs.len();
    let loglik = |nu: &[f64]| -> f64 {
        obs.iter().zip(nu).map(|(a, b)| a * b).sum::<f64>() - model.psi(nu)
    };
    // The maximum exists iff the observed statistics lie in the relative
    // interior of the convex hull of all attainable statistic vectors.
    let as_rational = |v: &[f64]| -> Vec<Rational> { v.iter().map(|&a| Rational::from_u64(a as u64)).collect() };
    let points: Vec<Vec<Rational>> = model.stats.iter().map(|s| as_rational(s)).collect();
    let interior = in_relative_interior(&points, &as_rational(&obs), 0.0);
    let mut nu = vec![0.0; d];
    let mut status = FitStatus::Failed;
    let mut iterations = 0;
    let mut grad_norm = f64::INFINITY;
    while iterations < opts.max_iter {
        let (_, mean, cov, _) = model.moments(&nu);
        let grad: Vec<f64> = obs.iter().zip(&mean).map(|(o, m)| o - m).collect();
        grad_norm = grad.iter().map(|g| g.abs()).fold(0.0, f64::max);
        let nu_norm = nu.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if nu_norm > opts.divergence {
            if grad_norm < opts.boundary_grad {
                status = FitStatus::Boundary;
                break;
            }
        } else if grad_norm <= opts.grad_tol {
            status = if interior { FitStatus::Optimal } else { FitStatus::Boundary };
            break;
        }
        iterations += 1;
        let trace: f64 = (0..d).map(|i| cov[i][i]).sum();
        let mut step = solve_damped(&cov, &grad, 1e-10 * trace + 1e-300);
        let step_norm = step.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if !step_norm.is_finite() || step_norm == 0.0 {
            // covariance vanished: move along the gradient
            step = grad.clone();
        }
        let step_norm = step.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if step_norm > opts.max_step {
            for v in step.iter_mut() {
                *v *= opts.max_step / step_norm;
            }
        }
        let base = loglik(&nu);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = nu.iter().zip(&step).map(|(a, b)| a + t * b).collect();
            if loglik(&trial) >= base - 1e-14 * base.abs().max(1.0) || t < 1e-8 {
                nu = trial;
                break;
            }
            t *= 0.5;
        }
    }
    let q = ergm_distribution(spec, &nu)?;
    let z = mobius_from_class_distribution(&q);
    Ok(FitReport {
        family: spec.name(),
        status,
        loglik: loglik(&nu),
        z: Some(z),
        q: Some(q),
        nu: spec.stat_names().into_iter().zip(nu).collect(),
        constraint_residual: 0.0,
        kkt_residual: grad_norm,
        restarts_used: 1,
        iterations,
        endpoints: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::paw_network;

    #[test]
    fn paw_statistics() {
        let x = paw_network();
        let fs = ErgmSpec::new(ErgmFamily::FrankStrauss, 4).unwrap();
        assert_eq!(ergm_stats(&fs, &x).unwrap(), vec![4, 5, 1, 1]);
        let kn = ErgmSpec::new(ErgmFamily::Kneser, 4).unwrap();
        assert_eq!(ergm_stats(&kn, &x).unwrap(), vec![4, 1]);
        let se = ErgmSpec::new(ErgmFamily::SeStar, 4).unwrap();
        assert_eq!(ergm_stats(&se, &x).unwrap(), vec![4, 5, 1, 1]);
        let sem = ErgmSpec::new(ErgmFamily::Sem, 4).unwrap();
        assert_eq!(ergm_stats(&sem, &x).unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn zero_parameters_give_uniform() {
        let spec = ErgmSpec::new(ErgmFamily::FrankStrauss, 4).unwrap();
        let p = ergm_eval(&spec, &[0.0; 4], &paw_network()).unwrap();
        assert!((p - 1.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn edge_only_fit_is_bernoulli() {
        let spec = ErgmSpec::custom(4, vec![ErgmStat::Class(UnlabeledClass::edge())]).unwrap();
        let r = ergm_fit(&spec, &paw_network(), &ErgmFitOptions::default()).unwrap();
        assert_eq!(r.status, FitStatus::Optimal);
        let p: f64 = 4.0 / 6.0;
        assert!((r.nu[0].1 - (p / (1.0 - p)).ln()).abs() < 1e-9);
    }

    #[test]
    fn full_family_is_at_the_boundary() {
        let spec = ErgmSpec::new(ErgmFamily::FullExchangeable, 4).unwrap();
        let r = ergm_fit(&spec, &paw_network(), &ErgmFitOptions::default()).unwrap();
        assert_eq!(r.status, FitStatus::Boundary, "{} {} {:?}", r.iterations, r.kkt_residual, r.nu);
    }
}
