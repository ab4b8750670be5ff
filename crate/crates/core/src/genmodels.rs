//! Generative models: Erdős–Rényi, beta and marginal beta models, graphons.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{check_cap, Error, Result};
use crate::graph::{dyad_pair, enumerate_classes, num_dyads, LabeledNetwork, UnlabeledClass, MAX_NODES};
use crate::mobius::{JointTable, MobiusVector};
use crate::rng::stream_rng;
use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};

/// Largest node count for exact atom sums in the marginal beta model.
pub const MAX_EXACT_MIXING_NODES: usize = 5;
/// Largest vertex count of a connected component in graphon moments.
pub const MAX_GRAPHON_VERTICES: usize = 6;

/// Independent dyads with probabilities `p[d]` (indexed by dyad), multiplied
/// in dyad order.
pub fn independent_dyads_joint<T: Scalar>(n: usize, p: &[T]) -> Result<JointTable<T>> {
    let m = num_dyads(n);
    let q: Vec<T> = p.iter().map(|v| T::one() - v.clone()).collect();
    JointTable::from_fn(n, |x| {
        let mut acc = T::one();
        for d in 0..m {
            acc = acc * if x.mask() >> d & 1 == 1 { p[d].clone() } else { q[d].clone() };
        }
        acc
    })
}

pub fn er_joint<T: Scalar>(n: usize, p: &T) -> Result<JointTable<T>> {
    check_probability(p)?;
    independent_dyads_joint(n, &vec![p.clone(); num_dyads(n)])
}

pub fn er_mobius<T: Scalar>(n: usize, p: &T) -> Result<MobiusVector<T>> {
    check_probability(p)?;
    MobiusVector::erdos_renyi(n, p)
}

fn check_probability<T: Scalar>(p: &T) -> Result<()> {
    if p.is_negative_tol(0.0) || (T::one() - p.clone()).is_negative_tol(0.0) {
        return Err(Error::InvalidParameters(format!("probability {} outside [0,1]", p.to_text())));
    }
    Ok(())
}

/// Node propensities `β_1, …, β_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaSpec {
    pub beta: Vec<f64>,
}

impl BetaSpec {
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::InvalidParameters("beta model needs at least one node".into()));
        }
        if let Some(b) = beta.iter().find(|b| !b.is_finite()) {
            return Err(Error::InvalidParameters(format!("β = {b} is not finite")));
        }
        Ok(BetaSpec { beta })
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    /// `p_ij = e^{β_i+β_j} / (1 + e^{β_i+β_j})`.
    pub fn tie_prob(&self, i: usize, j: usize) -> f64 {
        logistic(self.beta[i] + self.beta[j])
    }
}

pub fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        let e = t.exp();
        e / (1.0 + e)
    } else {
        let e = (-t).exp();
        1.0 / (1.0 + e)
    }
}

pub fn beta_joint(spec: &BetaSpec) -> Result<JointTable<f64>> {
    let n = spec.n();
    let p: Vec<f64> = (0..num_dyads(n))
        .map(|d| {
            let (i, j) = dyad_pair(d);
            spec.tie_prob(i, j)
        })
        .collect();
    independent_dyads_joint(n, &p)
}

/// Exact beta model from node odds `a_i = e^{β_i}`:
/// `p_ij = a_i a_j / (1 + a_i a_j)`.
pub fn beta_joint_odds(odds: &[Rational]) -> Result<JointTable<Rational>> {
    let n = odds.len();
    if let Some(a) = odds.iter().find(|a| a.is_negative_tol(0.0) || a.is_zero()) {
        return Err(Error::InvalidParameters(format!("odds {} must be positive", a.to_text())));
    }
    let p: Vec<Rational> = (0..num_dyads(n))
        .map(|d| {
            let (i, j) = dyad_pair(d);
            let t = odds[i].clone() * odds[j].clone();
            t.clone() / (Rational::one() + t)
        })
        .collect();
    independent_dyads_joint(n, &p)
}

/// Distribution of the node propensities in the marginal beta model.
#[derive(Clone, Debug, PartialEq)]
pub enum MixingSpec {
    PointMass { beta: f64 },
    /// `β = beta_a` with probability `w`, else `beta_b`.
    TwoPoint { beta_a: f64, beta_b: f64, w: f64 },
    /// `β ~ N(mu, sigma²)`, integrated by seeded Monte Carlo.
    Gaussian { mu: f64, sigma: f64, samples: usize, seed: u64 },
}

impl MixingSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        match *self {
            MixingSpec::PointMass { beta } if !beta.is_finite() => bad(format!("β = {beta}")),
            MixingSpec::TwoPoint { beta_a, beta_b, w } => {
                if !beta_a.is_finite() || !beta_b.is_finite() {
                    bad("two-point atoms must be finite".into())
                } else if !(0.0..=1.0).contains(&w) {
                    bad(format!("weight {w} outside [0,1]"))
                } else {
                    Ok(())
                }
            }
            MixingSpec::Gaussian { mu, sigma, samples, .. } => {
                if !mu.is_finite() || !sigma.is_finite() || sigma < 0.0 {
                    bad(format!("invalid Gaussian mixing N({mu}, {sigma}²)"))
                } else if samples == 0 {
                    bad("Monte Carlo needs at least one sample".into())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Draws one propensity.
    pub fn draw(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            MixingSpec::PointMass { beta } => beta,
            MixingSpec::TwoPoint { beta_a, beta_b, w } => {
                if rng.gen::<f64>() < w { beta_a } else { beta_b }
            }
            MixingSpec::Gaussian { mu, sigma, .. } => {
                let z: f64 = rng.sample(StandardNormal);
                mu + sigma * z
            }
        }
    }
}

/// A marginal beta joint with its Monte Carlo standard error (largest over
/// configurations; 0 for exact atom sums).
#[derive(Clone, Debug)]
pub struct MarginalBeta {
    pub joint: JointTable<f64>,
    pub std_error: f64,
}

/// `P(x) = ∫ Π_ij p_ij(β)^{x_ij} (1 − p_ij(β))^{1−x_ij} dF(β_1)…dF(β_n)`.
pub fn marginal_beta_joint(n: usize, mix: &MixingSpec) -> Result<MarginalBeta> {
    mix.validate()?;
    match *mix {
        MixingSpec::PointMass { beta } => Ok(MarginalBeta {
            joint: beta_joint(&BetaSpec::new(vec![beta; n])?)?,
            std_error: 0.0,
        }),
        MixingSpec::TwoPoint { beta_a, beta_b, w } => {
            check_cap("exact marginal beta node count", n, MAX_EXACT_MIXING_NODES)?;
            let len = 1usize << num_dyads(n);
            let mut acc = vec![0.0; len];
            for atom in 0..1u32 << n {
                let beta: Vec<f64> = (0..n).map(|i| if atom >> i & 1 == 1 { beta_a } else { beta_b }).collect();
                let k = atom.count_ones() as i32;
                let weight = w.powi(k) * (1.0 - w).powi(n as i32 - k);
                if weight == 0.0 {
                    continue;
                }
                let jt = beta_joint(&BetaSpec::new(beta)?)?;
                for (a, p) in acc.iter_mut().zip(jt.probs()) {
                    *a += weight * p;
                }
            }
            Ok(MarginalBeta { joint: JointTable::new(n, acc, 1e-9)?, std_error: 0.0 })
        }
        MixingSpec::Gaussian { samples, seed, .. } => {
            let len = 1usize << num_dyads(n);
            let mut sum = vec![0.0; len];
            let mut sum_sq = vec![0.0; len];
            for s in 0..samples {
                let mut rng = stream_rng(seed, s as u64);
                let beta: Vec<f64> = (0..n).map(|_| mix.draw(&mut rng)).collect();
                let jt = beta_joint(&BetaSpec::new(beta)?)?;
                for ((a, b), p) in sum.iter_mut().zip(sum_sq.iter_mut()).zip(jt.probs()) {
                    *a += p;
                    *b += p * p;
                }
            }
            let s = samples as f64;
            let mean: Vec<f64> = sum.iter().map(|a| a / s).collect();
            let std_error = if samples > 1 {
                mean.iter()
                    .zip(&sum_sq)
                    .map(|(m, b)| ((b / s - m * m).max(0.0) * s / (s - 1.0) / s).sqrt())
                    .fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            Ok(MarginalBeta { joint: JointTable::new(n, mean, 1e-9)?, std_error })
        }
    }
}

/// Exact two-point marginal beta joint from rational odds:
/// `a_i = odds_a` with probability `w`, else `odds_b`.
pub fn marginal_beta_joint_odds(n: usize, odds_a: &Rational, odds_b: &Rational, w: &Rational) -> Result<JointTable<Rational>> {
    check_cap("exact marginal beta node count", n, MAX_EXACT_MIXING_NODES)?;
    if w.is_negative_tol(0.0) || (Rational::one() - w.clone()).is_negative_tol(0.0) {
        return Err(Error::InvalidParameters(format!("weight {} outside [0,1]", w.to_text())));
    }
    let len = 1usize << num_dyads(n);
    let mut acc = vec![Rational::from_u64(0); len];
    for atom in 0..1u32 << n {
        let odds: Vec<Rational> = (0..n)
            .map(|i| if atom >> i & 1 == 1 { odds_a.clone() } else { odds_b.clone() })
            .collect();
        let k = atom.count_ones();
        let weight = Scalar::pow(w, k) * Scalar::pow(&(Rational::one() - w.clone()), n as u32 - k);
        if weight.is_zero() {
            continue;
        }
        let jt = beta_joint_odds(&odds)?;
        for (a, p) in acc.iter_mut().zip(jt.probs()) {
            *a = a.clone() + weight.clone() * p.clone();
        }
    }
    JointTable::new(n, acc, 0.0)
}

/// A symmetric function `[0,1]² → [0,1]`.
#[derive(Clone)]
pub enum Graphon {
    Constant(f64),
    /// `φ(u,v) = a(u)a(v) / (1 + a(u)a(v))` with `a(u) = exp(μ + σ Φ⁻¹(u))`,
    /// i.e. the marginal beta model with Gaussian propensities.
    ProductLogistic { mu: f64, sigma: f64 },
    /// Values at the grid points `(i/(r−1), j/(r−1))`, bilinearly
    /// interpolated.
    Grid { r: usize, values: Vec<f64> },
    Function(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Graphon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Graphon::Constant(e) => write!(f, "Constant({e})"),
            Graphon::ProductLogistic { mu, sigma } => write!(f, "ProductLogistic({mu}, {sigma})"),
            Graphon::Grid { r, .. } => write!(f, "Grid({r}x{r})"),
            Graphon::Function(_) => f.write_str("Function"),
        }
    }
}

impl Graphon {
    pub fn function(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Graphon::Function(Arc::new(f))
    }

    pub fn constant(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameters(format!("constant graphon value {eta} outside [0,1]")));
        }
        Ok(Graphon::Constant(eta))
    }

    pub fn grid(r: usize, values: Vec<f64>) -> Result<Self> {
        if r < 2 || values.len() != r * r {
            return Err(Error::InvalidInput(format!("grid graphon needs r >= 2 and r*r values (r = {r})")));
        }
        for i in 0..r {
            for j in 0..r {
                let v = values[i * r + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidParameters(format!("grid value {v} outside [0,1]")));
                }
                if (v - values[j * r + i]).abs() > 1e-12 {
                    return Err(Error::InvalidParameters(format!("grid is not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Graphon::Grid { r, values })
    }

    /// Parses `const:η`, `product:logistic:μ,σ`, or grid file text.
    pub fn parse_named(spec: &str) -> Result<Self> {
        if let Some(v) = spec.strip_prefix("const:") {
            let eta: f64 = v.trim().parse().map_err(|e| Error::Parse(format!("{v}: {e}")))?;
            return Self::constant(eta);
        }
        if let Some(v) = spec.strip_prefix("product:logistic:") {
            let parts: Vec<&str> = v.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("expected product:logistic:μ,σ, got {spec:?}")));
            }
            let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}")));
            let (mu, sigma) = (num(parts[0])?, num(parts[1])?);
            if !mu.is_finite() || !sigma.is_finite() || sigma < 0.0 {
                return Err(Error::InvalidParameters(format!("invalid logistic parameters {mu}, {sigma}")));
            }
            return Ok(Graphon::ProductLogistic { mu, sigma });
        }
        Err(Error::Parse(format!("unknown graphon form {spec:?}")))
    }

    /// Grid file: first line `r`, then `r` lines of `r` values.
    pub fn parse_grid(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let r: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty grid file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("grid size: {e}")))?;
        let mut values = Vec::with_capacity(r * r);
        for (i, line) in lines.enumerate() {
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("grid row {}: {e}", i + 1))))
                .collect::<Result<_>>()?;
            if row.len() != r {
                return Err(Error::Parse(format!("grid row {} has {} values, expected {r}", i + 1, row.len())));
            }
            values.extend(row);
        }
        if values.len() != r * r {
            return Err(Error::Parse(format!("grid has {} rows, expected {r}", values.len() / r.max(1))));
        }
        Self::grid(r, values)
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        match self {
            Graphon::Constant(e) => *e,
            Graphon::ProductLogistic { mu, sigma } => {
                // clamp away from 0 and 1 where Φ⁻¹ is infinite
                let std = Normal::new(0.0, 1.0).unwrap();
                let q = |t: f64| std.inverse_cdf(t.clamp(1e-15, 1.0 - 1e-15));
                logistic(2.0 * mu + sigma * (q(u) + q(v)))
            }
            Graphon::Grid { r, values } => {
                let s = (*r - 1) as f64;
                let (x, y) = (u.clamp(0.0, 1.0) * s, v.clamp(0.0, 1.0) * s);
                let (i, j) = ((x.floor() as usize).min(r - 2), (y.floor() as usize).min(r - 2));
                let (fx, fy) = (x - i as f64, y - j as f64);
                let at = |a: usize, b: usize| values[a * r + b];
                (1.0 - fx) * (1.0 - fy) * at(i, j)
                    + fx * (1.0 - fy) * at(i + 1, j)
                    + (1.0 - fx) * fy * at(i, j + 1)
                    + fx * fy * at(i + 1, j + 1)
            }
            Graphon::Function(f) => f(u, v),
        }
    }
}

/// A finite mixture of graphons; its moments are the weighted moments.
#[derive(Clone, Debug)]
pub struct MixtureOfGraphons {
    pub components: Vec<(f64, Graphon)>,
}

impl MixtureOfGraphons {
    pub fn new(components: Vec<(f64, Graphon)>) -> Result<Self> {
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameters("mixture weights must be nonnegative and sum to 1".into()));
        }
        Ok(MixtureOfGraphons { components })
    }

    pub fn z(&self, u: &UnlabeledClass, method: &MomentMethod) -> Result<GraphonMoment> {
        let mut value = 0.0;
        let mut error = 0.0;
        for (w, g) in &self.components {
            let m = graphon_z(g, u, method)?;
            value += w * m.value;
            error += w * m.error;
        }
        Ok(GraphonMoment { value, error, order: None })
    }

    pub fn sample(&self, n: usize, seed: u64, stream: u64) -> Result<LabeledNetwork> {
        check_cap("sample node count", n, MAX_NODES)?;
        let mut rng = stream_rng(seed, stream);
        let t: f64 = rng.gen();
        let mut acc = 0.0;
        let mut pick = &self.components.last().unwrap().1;
        for (w, g) in &self.components {
            acc += w;
            if t < acc {
                pick = g;
                break;
            }
        }
        Ok(sample_with(pick, n, &mut rng))
    }
}

fn sample_with(phi: &Graphon, n: usize, rng: &mut impl Rng) -> LabeledNetwork {
    let u: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
    sample_dyads(n, rng, |i, j| phi.eval(u[i], u[j]))
}

/// One network: uniform node labels `u_i`, then independent ties with
/// probability `φ(u_i, u_j)` in dyad order. Uses stream `stream` of `seed`.
pub fn graphon_sample(phi: &Graphon, n: usize, seed: u64, stream: u64) -> Result<LabeledNetwork> {
    check_cap("sample node count", n, MAX_NODES)?;
    Ok(sample_with(phi, n, &mut stream_rng(seed, stream)))
}

fn sample_dyads(n: usize, rng: &mut impl Rng, mut p: impl FnMut(usize, usize) -> f64) -> LabeledNetwork {
    let mut mask = 0u64;
    for d in 0..num_dyads(n) {
        let (i, j) = dyad_pair(d);
        if rng.gen::<f64>() < p(i, j) {
            mask |= 1 << d;
        }
    }
    LabeledNetwork::from_mask(n, mask)
}

/// One Erdős–Rényi network from stream `stream` of `seed`.
pub fn er_sample(n: usize, p: f64, seed: u64, stream: u64) -> Result<LabeledNetwork> {
    check_cap("sample node count", n, MAX_NODES)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameters(format!("tie probability {p} outside [0,1]")));
    }
    Ok(sample_dyads(n, &mut stream_rng(seed, stream), |_, _| p))
}

/// One beta-model network from stream `stream` of `seed`.
pub fn beta_sample(spec: &BetaSpec, seed: u64, stream: u64) -> Result<LabeledNetwork> {
    check_cap("sample node count", spec.n(), MAX_NODES)?;
    Ok(sample_dyads(spec.n(), &mut stream_rng(seed, stream), |i, j| spec.tie_prob(i, j)))
}

/// One marginal beta network: propensities are drawn first, then the ties,
/// all from stream `stream` of `seed`. The Monte Carlo seed inside a
/// Gaussian mixing spec is not used here.
pub fn marginal_beta_sample(n: usize, mix: &MixingSpec, seed: u64, stream: u64) -> Result<LabeledNetwork> {
    check_cap("sample node count", n, MAX_NODES)?;
    mix.validate()?;
    let mut rng = stream_rng(seed, stream);
    let spec = BetaSpec::new((0..n).map(|_| mix.draw(&mut rng)).collect())?;
    Ok(sample_dyads(n, &mut rng, |i, j| spec.tie_prob(i, j)))
}

#[derive(Clone, Debug, PartialEq)]
pub enum MomentMethod {
    /// Tensor trapezoid rule with `r` intervals per axis.
    Quadrature { r: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for MomentMethod {
    fn default() -> Self {
        MomentMethod::Quadrature { r: 64 }
    }
}

/// A graphon moment with its error estimate: `|I_r − I_{r/2}|` for
/// quadrature, the standard error for Monte Carlo, 0 when exact.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphonMoment {
    pub value: f64,
    pub error: f64,
    /// Nominal convergence order of the rule in the grid spacing.
    pub order: Option<u32>,
}

/// Largest number of grid points visited by one tensor quadrature.
const QUADRATURE_BUDGET: f64 = (1u64 << 25) as f64;

/// `z_U = ∫ Π_{ij ∈ E(U)} φ(u_i, u_j) du`.
///
/// Constant graphons return `η^{|E(U)|}` exactly. Otherwise the integral
/// factors over connected components, each integrated on its own. The
/// quadrature resolution per component is reduced if `(r+1)^k` grid points
/// would exceed 2^25.
pub fn graphon_z(phi: &Graphon, u: &UnlabeledClass, method: &MomentMethod) -> Result<GraphonMoment> {
    if let Graphon::Constant(eta) = phi {
        return Ok(GraphonMoment { value: eta.powi(u.edge_count() as i32), error: 0.0, order: None });
    }
    let mut value = 1.0f64;
    let mut error = 0.0f64;
    let mut order = None;
    for comp in u.components() {
        check_cap("graphon moment component vertex count", comp.vertex_count(), MAX_GRAPHON_VERTICES)?;
        let m = match method {
            MomentMethod::Quadrature { r } => {
                if *r < 2 {
                    return Err(Error::InvalidParameters("quadrature needs r >= 2".into()));
                }
                let k = comp.vertex_count() as f64;
                let cap = (QUADRATURE_BUDGET.powf(1.0 / k) - 1.0).floor() as usize;
                let r = (*r).min(cap.max(2)) / 2 * 2;
                let fine = trapezoid(phi, &comp.representative(), r);
                let coarse = trapezoid(phi, &comp.representative(), r / 2);
                order = Some(2);
                GraphonMoment { value: fine, error: (fine - coarse).abs(), order }
            }
            MomentMethod::MonteCarlo { samples, seed } => monte_carlo(phi, &comp.representative(), *samples, *seed)?,
        };
        // first-order propagation of component errors through the product
        error = error * m.value.abs() + m.error * value.abs() + error * m.error;
        value *= m.value;
    }
    Ok(GraphonMoment { value, error, order })
}

fn trapezoid(phi: &Graphon, g: &LabeledNetwork, r: usize) -> f64 {
    let k = g.n();
    let pts: Vec<f64> = (0..=r).map(|i| i as f64 / r as f64).collect();
    let w: Vec<f64> = (0..=r)
        .map(|i| if i == 0 || i == r { 0.5 / r as f64 } else { 1.0 / r as f64 })
        .collect();
    let mat: Vec<Vec<f64>> = pts.iter().map(|&a| pts.iter().map(|&b| phi.eval(a, b)).collect()).collect();
    let back: Vec<Vec<usize>> = (0..k).map(|v| (0..v).filter(|&u| g.has_edge(u, v)).collect()).collect();
    fn go(v: usize, idx: &mut Vec<usize>, back: &[Vec<usize>], w: &[f64], mat: &[Vec<f64>]) -> f64 {
        if v == back.len() {
            return 1.0;
        }
        let mut total = 0.0;
        for i in 0..w.len() {
            let mut f = w[i];
            for &u in &back[v] {
                f *= mat[idx[u]][i];
            }
            if f == 0.0 {
                continue;
            }
            idx[v] = i;
            total += f * go(v + 1, idx, back, w, mat);
        }
        total
    }
    go(0, &mut vec![0; k], &back, &w, &mat)
}

fn monte_carlo(phi: &Graphon, g: &LabeledNetwork, samples: usize, seed: u64) -> Result<GraphonMoment> {
    if samples < 2 {
        return Err(Error::InvalidParameters("Monte Carlo needs at least two samples".into()));
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    // one stream for the whole run keeps the estimate independent of batching
    let mut rng = stream_rng(seed, 0);
    let edges: Vec<(usize, usize)> = g.edges().collect();
    for _ in 0..samples {
        let u: Vec<f64> = (0..g.n()).map(|_| rng.gen()).collect();
        let f: f64 = edges.iter().map(|&(a, b)| phi.eval(u[a], u[b])).product();
        sum += f;
        sum_sq += f * f;
    }
    let s = samples as f64;
    let mean = sum / s;
    let var = ((sum_sq / s - mean * mean) * s / (s - 1.0)).max(0.0);
    Ok(GraphonMoment { value: mean, error: (var / s).sqrt(), order: None })
}

/// Moments of every class on `n` nodes (as a Möbius vector).
pub fn graphon_mobius(phi: &Graphon, n: usize, method: &MomentMethod) -> Result<MobiusVector<f64>> {
    let mut z = BTreeMap::new();
    for c in enumerate_classes(n, true)? {
        let v = if c.is_empty() { 1.0 } else { graphon_z(phi, &c, method)?.value };
        z.insert(c, v);
    }
    MobiusVector::new(n, z)
}

/// Deviation of a set of moments from Erdős–Rényi moments `η^{|E(U)|}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErDiagnostic {
    pub eta: f64,
    /// `max_U |z_U − η^{|E(U)|}|` over the supplied classes.
    pub max_deviation: f64,
    pub worst_class: Option<UnlabeledClass>,
    /// `|z_{2-star} − η²|`, when the 2-star is present.
    pub two_star_residual: Option<f64>,
    /// `|z_{C4} − η⁴|`, when the 4-cycle is present.
    pub four_cycle_residual: Option<f64>,
}

impl ErDiagnostic {
    /// The moments look like Erdős–Rényi within `tol`.
    pub fn consistent_with_er(&self, tol: f64) -> bool {
        self.max_deviation <= tol
            && self.two_star_residual.is_none_or(|r| r <= tol)
            && self.four_cycle_residual.is_none_or(|r| r <= tol)
    }
}

/// Compares moments with `η^{|E(U)|}` on every supplied class with at most
/// four edges. With `eta = None`, `η = z_edge`.
pub fn er_characterization_diagnostic(
    z: &BTreeMap<UnlabeledClass, f64>,
    eta: Option<f64>,
) -> Result<ErDiagnostic> {
    let eta = match eta {
        Some(e) => e,
        None => *z
            .get(&UnlabeledClass::edge())
            .ok_or_else(|| Error::InvalidInput("no edge moment to take η from".into()))?,
    };
    let mut max_deviation = 0.0;
    let mut worst_class = None;
    for (c, v) in z.iter().filter(|(c, _)| c.edge_count() <= 4) {
        let d = (v - eta.powi(c.edge_count() as i32)).abs();
        if d > max_deviation {
            max_deviation = d;
            worst_class = Some(*c);
        }
    }
    let resid = |c: UnlabeledClass, k: i32| z.get(&c).map(|v| (v - eta.powi(k)).abs());
    Ok(ErDiagnostic {
        eta,
        max_deviation,
        worst_class,
        two_star_residual: resid(UnlabeledClass::star(2), 2),
        four_cycle_residual: resid(UnlabeledClass::cycle(4), 4),
    })
}

/// Graphon moments of every class with at most four edges, for the
/// diagnostic. Returns the moments and the largest error estimate.
pub fn graphon_low_moments(phi: &Graphon, method: &MomentMethod) -> Result<(BTreeMap<UnlabeledClass, f64>, f64)> {
    let mut z = BTreeMap::new();
    let mut err: f64 = 0.0;
    for c in crate::graph::classes_up_to_edges(4) {
        if c.is_empty() {
            continue;
        }
        let m = graphon_z(phi, &c, method)?;
        err = err.max(m.error);
        z.insert(c, m.value);
    }
    Ok((z, err))
}
