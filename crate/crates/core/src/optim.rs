//! Constrained optimization over the probability simplex.
//!
//! Problems have the form: minimize `c·q` over `q ≥ 0, Σ q = 1` subject to
//! equality constraints `a·q + b − Π_k (f_k·q) = 0`. They are solved by an
//! augmented Lagrangian whose inner problems use spectral projected gradient
//! steps with a nonmonotone line search.

/// `log Σ exp(t_i)`, shifted by the maximum to avoid overflow.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// Euclidean projection onto the probability simplex, in place.
pub fn project_simplex(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, ui) in u.iter().enumerate() {
        cum += ui;
        let t = (cum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

/// A sparse linear form `Σ w_i q_i`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearForm(pub Vec<(usize, f64)>);

impl LinearForm {
    pub fn eval(&self, q: &[f64]) -> f64 {
        self.0.iter().map(|&(i, w)| w * q[i]).sum()
    }

    fn add_to(&self, out: &mut [f64], scale: f64) {
        for &(i, w) in &self.0 {
            out[i] += scale * w;
        }
    }
}

/// `linear·q + offset − Π_k factors[k]·q = 0`; no factors means no product.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyConstraint {
    pub linear: LinearForm,
    pub offset: f64,
    pub factors: Vec<LinearForm>,
}

impl PolyConstraint {
    pub fn linear(linear: LinearForm, offset: f64) -> Self {
        PolyConstraint { linear, offset, factors: Vec::new() }
    }

    pub fn value(&self, q: &[f64]) -> f64 {
        let prod = if self.factors.is_empty() {
            0.0
        } else {
            self.factors.iter().map(|f| f.eval(q)).product()
        };
        self.linear.eval(q) + self.offset - prod
    }

    /// Adds `scale · ∇value(q)` to `out`.
    fn add_grad(&self, q: &[f64], out: &mut [f64], scale: f64) {
        self.linear.add_to(out, scale);
        if self.factors.is_empty() {
            return;
        }
        let vals: Vec<f64> = self.factors.iter().map(|f| f.eval(q)).collect();
        for (k, f) in self.factors.iter().enumerate() {
            let others: f64 = vals
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, v)| v)
                .product();
            f.add_to(out, -scale * others);
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimplexProblem {
    pub dim: usize,
    /// Minimized linear objective.
    pub objective: Vec<f64>,
    pub constraints: Vec<PolyConstraint>,
}

#[derive(Clone, Debug)]
pub struct AlOptions {
    pub max_outer: usize,
    pub max_inner: usize,
    /// Target for `max |constraint|`.
    pub constraint_tol: f64,
    /// Target for the projected Lagrangian gradient.
    pub kkt_tol: f64,
    pub rho0: f64,
    pub rho_max: f64,
}

impl Default for AlOptions {
    fn default() -> Self {
        AlOptions {
            max_outer: 60,
            max_inner: 20_000,
            constraint_tol: 1e-12,
            kkt_tol: 1e-10,
            rho0: 10.0,
            rho_max: 1e10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlResult {
    pub q: Vec<f64>,
    pub objective: f64,
    /// `max |constraint(q)|`.
    pub constraint_residual: f64,
    /// Projected gradient of the Lagrangian at the final multipliers.
    pub kkt_residual: f64,
    pub multipliers: Vec<f64>,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
}

impl AlResult {
    pub fn kkt(&self) -> f64 {
        self.kkt_residual.max(self.constraint_residual)
    }
}

impl SimplexProblem {
    fn objective_value(&self, q: &[f64]) -> f64 {
        self.objective.iter().zip(q).map(|(c, x)| c * x).sum()
    }

    fn residual(&self, q: &[f64]) -> f64 {
        self.constraints.iter().map(|c| c.value(q).abs()).fold(0.0, f64::max)
    }

    /// Augmented Lagrangian value and gradient.
    fn merit(&self, q: &[f64], lambda: &[f64], rho: f64, grad: &mut [f64]) -> f64 {
        grad.copy_from_slice(&self.objective);
        let mut val = self.objective_value(q);
        for (c, &l) in self.constraints.iter().zip(lambda) {
            let v = c.value(q);
            val += l * v + 0.5 * rho * v * v;
            c.add_grad(q, grad, l + rho * v);
        }
        val
    }

    /// `‖P(q − g) − q‖∞` for the Lagrangian gradient `g` at multipliers `lambda`.
    pub fn projected_gradient(&self, q: &[f64], lambda: &[f64]) -> f64 {
        let mut g = self.objective.clone();
        for (c, &l) in self.constraints.iter().zip(lambda) {
            c.add_grad(q, &mut g, l);
        }
        stationarity(q, &g)
    }
}

fn stationarity(q: &[f64], g: &[f64]) -> f64 {
    let mut p: Vec<f64> = q.iter().zip(g).map(|(x, d)| x - d).collect();
    project_simplex(&mut p);
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Spectral projected gradient on the merit function; returns iterations.
fn spg(problem: &SimplexProblem, q: &mut Vec<f64>, lambda: &[f64], rho: f64, tol: f64, max_iter: usize) -> usize {
    const HISTORY: usize = 10;
    const GAMMA: f64 = 1e-4;
    let dim = problem.dim;
    let mut g = vec![0.0; dim];
    let mut f = problem.merit(q, lambda, rho, &mut g);
    let mut recent = vec![f];
    let mut alpha = {
        let pg = stationarity(q, &g);
        if pg > 0.0 { (1.0 / pg).clamp(1e-10, 1e10) } else { 1.0 }
    };
    let mut g_new = vec![0.0; dim];
    for it in 0..max_iter {
        if stationarity(q, &g) <= tol {
            return it;
        }
        let mut trial: Vec<f64> = q.iter().zip(&g).map(|(x, d)| x - alpha * d).collect();
        project_simplex(&mut trial);
        let d: Vec<f64> = trial.iter().zip(q.iter()).map(|(a, b)| a - b).collect();
        let gd: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        let f_ref = recent.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut t = 1.0;
        let mut q_new: Vec<f64>;
        let mut f_new;
        loop {
            q_new = q.iter().zip(&d).map(|(x, s)| x + t * s).collect();
            f_new = problem.merit(&q_new, lambda, rho, &mut g_new);
            if f_new <= f_ref + GAMMA * t * gd || t < 1e-12 {
                break;
            }
            // safeguarded quadratic backtracking
            let t_q = -0.5 * gd * t * t / (f_new - f - t * gd);
            t = if t_q >= 0.1 * t && t_q <= 0.5 * t { t_q } else { 0.5 * t };
        }
        let s: Vec<f64> = q_new.iter().zip(q.iter()).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        let ss: f64 = s.iter().map(|a| a * a).sum();
        alpha = if sy <= 0.0 { 1e10 } else { (ss / sy).clamp(1e-10, 1e10) };
        *q = q_new;
        std::mem::swap(&mut g, &mut g_new);
        f = f_new;
        recent.push(f);
        if recent.len() > HISTORY {
            recent.remove(0);
        }
        if ss == 0.0 {
            return it + 1;
        }
    }
    max_iter
}

/// Solves a simplex problem from the starting point `q0` (projected first).
pub fn solve_al(problem: &SimplexProblem, q0: &[f64], opts: &AlOptions) -> AlResult {
    let mut q = q0.to_vec();
    project_simplex(&mut q);
    let mut lambda = vec![0.0; problem.constraints.len()];
    let mut rho = opts.rho0;
    let mut inner_tol = 1e-4;
    let mut prev_res = f64::INFINITY;
    let mut inner_total = 0;
    let mut outer = 0;
    while outer < opts.max_outer {
        outer += 1;
        inner_total += spg(problem, &mut q, &lambda, rho, inner_tol, opts.max_inner);
        let vals: Vec<f64> = problem.constraints.iter().map(|c| c.value(&q)).collect();
        let res = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for (l, v) in lambda.iter_mut().zip(&vals) {
            *l += rho * v;
        }
        let kkt = problem.projected_gradient(&q, &lambda);
        if res <= opts.constraint_tol && kkt <= opts.kkt_tol {
            break;
        }
        if res > 0.25 * prev_res {
            rho = (rho * 10.0).min(opts.rho_max);
        }
        prev_res = res;
        inner_tol = (inner_tol * 0.1).max((opts.kkt_tol * 0.1).min(1e-9));
    }
    AlResult {
        objective: problem.objective_value(&q),
        constraint_residual: problem.residual(&q),
        kkt_residual: problem.projected_gradient(&q, &lambda),
        q,
        multipliers: lambda,
        outer_iterations: outer,
        inner_iterations: inner_total,
    }
}
