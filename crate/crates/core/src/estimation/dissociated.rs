//! Maximum likelihood over exchangeable laws whose Möbius parameters factor
//! over connected components.
//!
//! The search runs over class distributions `q` (so validity is automatic)
//! with one polynomial equality per disconnected class `B`:
//! `z_B(q) = Π_i z_{C_i}(q)`, where every `z` is linear in `q`.

use std::sync::Arc;

use rand_distr::{Distribution, Exp1};

use crate::classdist::ClassDistribution;
use crate::error::{check_cap, Result};
use crate::estimation::{FitReport, FitStatus};
use crate::graph::LabeledNetwork;
use crate::homcount::ClassTable;
use crate::mobius::mobius_from_class_distribution;
use crate::optim::{solve_al, AlOptions, AlResult, LinearForm, PolyConstraint, SimplexProblem};
use crate::rng::stream_rng;

pub const MAX_DISSOCIATED_NODES: usize = 6;

#[derive(Clone, Debug)]
pub struct DissociatedOptions {
    pub restarts: usize,
    pub seed: u64,
    pub al: AlOptions,
    /// Likelihood gap within which two maximizers count as tied.
    pub tie_tol: f64,
    /// `L∞` distance in `q` beyond which two maximizers count as distinct.
    pub distinct_tol: f64,
    /// Largest acceptable KKT residual.
    pub kkt_tol: f64,
    /// Search the optimal face for a second maximizer when the restarts agree.
    pub probe_face: bool,
    /// Constraint residual a face-probe point must reach to count.
    pub face_tol: f64,
}

impl Default for DissociatedOptions {
    fn default() -> Self {
        DissociatedOptions {
            restarts: 32,
            seed: 0,
            al: AlOptions::default(),
            tie_tol: 1e-7,
            distinct_tol: 1e-4,
            kkt_tol: 1e-6,
            probe_face: true,
            face_tol: 1e-10,
        }
    }
}

/// `z_U(q) = Σ_W q_W σ_U(W) / sub(U, K_n)` as a sparse form.
pub(crate) fn z_form(table: &ClassTable, u: usize) -> LinearForm {
    let sub = table.sub_complete[u] as f64;
    LinearForm(
        table
            .sigma_row(u)
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != 0)
            .map(|(w, &s)| (w, s as f64 / sub))
            .collect(),
    )
}

/// The factorization constraints for every disconnected class on `n` nodes.
pub fn dissociation_constraints(table: &ClassTable) -> Vec<PolyConstraint> {
    table
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty() && !c.is_connected())
        .map(|(u, c)| PolyConstraint {
            linear: z_form(table, u),
            offset: 0.0,
            factors: c
                .components()
                .iter()
                .map(|comp| z_form(table, table.index_of(comp).unwrap()))
                .collect(),
        })
        .collect()
}

/// Random starting points: the uniform vector, then Dirichlet(1) draws.
pub(crate) fn starting_points(dim: usize, restarts: usize, seed: u64) -> Vec<Vec<f64>> {
    (0..restarts)
        .map(|r| {
            if r == 0 {
                return vec![1.0 / dim as f64; dim];
            }
            let mut rng = stream_rng(seed, r as u64);
            let v: Vec<f64> = (0..dim).map(|_| Exp1.sample(&mut rng)).collect();
            let s: f64 = v.iter().sum();
            v.into_iter().map(|x| x / s).collect()
        })
        .collect()
}

/// Solves from every start on separate threads; results keep start order.
pub(crate) fn solve_all(problem: &SimplexProblem, starts: &[Vec<f64>], opts: &AlOptions) -> Vec<AlResult> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(starts.len().max(1));
    let mut out: Vec<Option<AlResult>> = vec![None; starts.len()];
    std::thread::scope(|scope| {
        let chunks: Vec<_> = out
            .chunks_mut(starts.len().div_ceil(workers))
            .zip(starts.chunks(starts.len().div_ceil(workers)))
            .map(|(slot, st)| {
                scope.spawn(move || {
                    for (o, s) in slot.iter_mut().zip(st) {
                        *o = Some(solve_al(problem, s, opts));
                    }
                })
            })
            .collect();
        for c in chunks {
            c.join().expect("optimizer thread panicked");
        }
    });
    out.into_iter().map(|r| r.unwrap()).collect()
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `a` before `b` in the lexicographic order on `q` (larger first), with
/// entries closer than `tol` treated as equal.
fn lex_greater(a: &[f64], b: &[f64], tol: f64) -> bool {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > tol {
            return x > y;
        }
    }
    false
}

/// Maximizes `P(X = x)` over dissociated exchangeable laws on `x`'s nodes.
///
/// Restarts that tie with the best likelihood but differ in `q` flag the
/// optimum as non-unique. In that case the classes that vary are pushed to
/// their extremes (with the likelihood held at its optimum) to report the
/// endpoints, and the reported estimate is the lexicographically largest
/// maximizer over the class order.
pub fn dissociated_mle(x: &LabeledNetwork, opts: &DissociatedOptions) -> Result<FitReport> {
    check_cap("dissociated estimation node count", x.n(), MAX_DISSOCIATED_NODES)?;
    let n = x.n();
    let table: Arc<ClassTable> = ClassTable::get(n)?;
    let dim = table.len();
    let xi = table.class_index(x);
    let size_x = table.sizes[xi] as f64;
    let constraints = dissociation_constraints(&table);
    let mut objective = vec![0.0; dim];
    objective[xi] = -1.0;
    let problem = SimplexProblem { dim, objective, constraints };

    let starts = starting_points(dim, opts.restarts.max(1), opts.seed);
    let results = solve_all(&problem, &starts, &opts.al);
    let feasible: Vec<&AlResult> = results.iter().filter(|r| r.kkt() <= opts.kkt_tol).collect();
    let pool: Vec<&AlResult> = if feasible.is_empty() { results.iter().collect() } else { feasible };
    let best_qx = pool.iter().map(|r| r.q[xi]).fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<&AlResult> = pool
        .iter()
        .copied()
        .filter(|r| (best_qx - r.q[xi]) / size_x <= opts.tie_tol)
        .collect();
    let mut best = tied[0];
    for r in &tied[1..] {
        if lex_greater(&r.q, &best.q, opts.distinct_tol) {
            best = r;
        }
    }
    let mut varying: Vec<usize> = (0..dim)
        .filter(|&w| {
            w != xi && tied.iter().any(|r| (r.q[w] - best.q[w]).abs() > opts.distinct_tol)
        })
        .collect();

    let mut status = if best.kkt() > opts.kkt_tol { FitStatus::Failed } else { FitStatus::Optimal };
    let pinned = |fixed: &[(usize, f64)], maximize: usize, sign: f64| -> SimplexProblem {
        let mut constraints = problem.constraints.clone();
        for &(w, v) in fixed {
            constraints.push(PolyConstraint::linear(LinearForm(vec![(w, 1.0)]), -v));
        }
        let mut objective = vec![0.0; dim];
        objective[maximize] = -sign;
        SimplexProblem { dim, objective, constraints }
    };
    let qx = best.q[xi];
    let pick = |rs: Vec<AlResult>, w: usize, sign: f64| -> AlResult {
        rs.into_iter()
            .filter(|r| r.kkt() <= opts.kkt_tol)
            .max_by(|a, b| (sign * a.q[w]).partial_cmp(&(sign * b.q[w])).unwrap())
            .unwrap_or_else(|| best.clone())
    };
    // Random restarts tend to land on the same interior point of a flat
    // optimum, so also walk the optimal face one class at a time.
    if varying.is_empty() && status == FitStatus::Optimal && opts.probe_face {
        'probe: for w in (0..dim).filter(|&w| w != xi) {
            for sign in [1.0, -1.0] {
                let r = pick(solve_all(&pinned(&[(xi, qx)], w, sign), &[best.q.clone()], &opts.al), w, sign);
                // a curved constraint leaves slack of order dq², so only an
                // essentially exact move counts
                if (r.q[w] - best.q[w]).abs() > opts.distinct_tol && r.constraint_residual <= opts.face_tol {
                    varying = (0..dim)
                        .filter(|&v| v != xi && (r.q[v] - best.q[v]).abs() > opts.distinct_tol)
                        .collect();
                    break 'probe;
                }
            }
        }
    }

    let mut estimate = best.clone();
    let mut endpoints = Vec::new();
    if !varying.is_empty() && status == FitStatus::Optimal {
        status = FitStatus::NonUnique;
        let mut extreme_starts: Vec<Vec<f64>> = tied.iter().map(|r| r.q.clone()).take(4).collect();
        extreme_starts.push(best.q.clone());
        for &w in &varying {
            for sign in [1.0, -1.0] {
                let p = pinned(&[(xi, qx)], w, sign);
                let r = pick(solve_all(&p, &extreme_starts, &opts.al), w, sign);
                if endpoints.iter().all(|e: &AlResult| linf(&e.q, &r.q) > opts.distinct_tol) {
                    endpoints.push(r);
                }
            }
        }
        // lexicographic maximum over the varying classes
        let mut fixed = vec![(xi, qx)];
        for &w in &varying {
            let p = pinned(&fixed, w, 1.0);
            let r = pick(solve_all(&p, &[estimate.q.clone()], &opts.al), w, 1.0);
            fixed.push((w, r.q[w]));
            estimate = r;
        }
    }

    let clean = |q: &[f64]| -> Result<ClassDistribution<f64>> {
        let mut q = q.to_vec();
        let s: f64 = q.iter().sum();
        for v in q.iter_mut() {
            *v /= s;
        }
        ClassDistribution::from_vec(n, q, 1e-9)
    };
    let q = clean(&estimate.q)?;
    let z = mobius_from_class_distribution(&q);
    let iterations = results.iter().map(|r| r.inner_iterations).sum();
    Ok(FitReport {
        family: "dissociated".into(),
        status,
        loglik: (estimate.q[xi] / size_x).ln(),
        z: Some(z),
        q: Some(q),
        nu: Vec::new(),
        constraint_residual: problem.constraints.iter().map(|c| c.value(&estimate.q).abs()).fold(0.0, f64::max),
        kkt_residual: estimate.kkt_residual,
        restarts_used: results.len(),
        iterations,
        endpoints: endpoints.iter().map(|e| clean(&e.q)).collect::<Result<_>>()?,
    })
}
