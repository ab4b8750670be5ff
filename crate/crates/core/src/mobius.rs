//! Joint tables over dyad configurations and their Möbius parameters.
//!
//! A labeled Möbius parameter `z_B` is the probability that every dyad in
//! `B` is a tie. Over the full subset lattice `z` is the superset-sum (zeta)
//! transform of the joint, and the joint is recovered by the alternating
//! inverse. For exchangeable laws `z_B` only depends on the class of `B`, and
//! [`MobiusVector`] stores one value per class.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::classdist::ClassDistribution;
use crate::dependence::DependenceGraph;
use crate::error::{check_cap, Error, Result};
use crate::graph::{num_dyads, LabeledNetwork, UnlabeledClass};
use crate::homcount::ClassTable;
use crate::scalar::Scalar;

/// Largest node count for tables over all `2^(n(n-1)/2)` configurations.
pub const MAX_JOINT_NODES: usize = 6;

/// Probability of every labeled network on `n` nodes, indexed by dyad mask.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable<T> {
    n: usize,
    probs: Vec<T>,
}

impl<T: Scalar> JointTable<T> {
    pub fn new(n: usize, probs: Vec<T>, tol: f64) -> Result<Self> {
        check_cap("joint table node count", n, MAX_JOINT_NODES)?;
        if probs.len() != 1 << num_dyads(n) {
            return Err(Error::InvalidInput(format!(
                "joint on {n} nodes needs {} entries, got {}",
                1u64 << num_dyads(n),
                probs.len()
            )));
        }
        let jt = JointTable { n, probs };
        jt.validate(tol)?;
        Ok(jt)
    }

    /// Fills a table from a probability function without validating it.
    pub fn from_fn(n: usize, mut f: impl FnMut(LabeledNetwork) -> T) -> Result<Self> {
        check_cap("joint table node count", n, MAX_JOINT_NODES)?;
        let probs = (0..1u64 << num_dyads(n))
            .map(|m| f(LabeledNetwork::from_mask(n, m)))
            .collect();
        Ok(JointTable { n, probs })
    }

    /// Entries nonnegative and summing to one (exactly, or within
    /// `max(tol, 1e-12)` for floats).
    pub fn validate(&self, tol: f64) -> Result<()> {
        let mut total = T::zero();
        for (m, p) in self.probs.iter().enumerate() {
            if p.is_negative_tol(tol) {
                return Err(Error::InvalidParameters(format!(
                    "negative probability {} at {}",
                    p.to_text(),
                    LabeledNetwork::from_mask(self.n, m as u64).edge_key()
                )));
            }
            total = total + p.clone();
        }
        if !total.approx_eq(&T::one(), tol.max(1e-12)) {
            return Err(Error::InvalidParameters(format!(
                "probabilities sum to {}",
                total.to_text()
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_dyads(&self) -> usize {
        num_dyads(self.n)
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, x: &LabeledNetwork) -> &T {
        &self.probs[x.mask() as usize]
    }

    /// Invariance under every relabeling of the nodes. Adjacent
    /// transpositions generate the symmetric group, so only those are tried.
    pub fn is_exchangeable(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n.saturating_sub(1)).all(|i| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, i + 1);
            (0..self.probs.len()).all(|m| {
                let y = LabeledNetwork::from_mask(n, m as u64).permute(&perm);
                self.probs[m].approx_eq(&self.probs[y.mask() as usize], tol)
            })
        })
    }

    pub fn to_f64(&self) -> JointTable<f64> {
        JointTable {
            n: self.n,
            probs: self.probs.iter().map(|p| p.to_f64()).collect(),
        }
    }
}

/// In-place superset sums: `a[B] <- Σ_{B' ⊇ B} a[B']`.
pub fn zeta_superset<T: Scalar>(a: &mut [T]) {
    let len = a.len();
    let mut bit = 1;
    while bit < len {
        for m in 0..len {
            if m & bit == 0 {
                a[m] = a[m].clone() + a[m | bit].clone();
            }
        }
        bit <<= 1;
    }
}

/// Inverse of [`zeta_superset`]: `a[H] <- Σ_{B ⊇ H} (-1)^{|B \ H|} a[B]`.
pub fn mobius_superset<T: Scalar>(a: &mut [T]) {
    let len = a.len();
    let mut bit = 1;
    while bit < len {
        for m in 0..len {
            if m & bit == 0 {
                a[m] = a[m].clone() - a[m | bit].clone();
            }
        }
        bit <<= 1;
    }
}

/// `z_B` for every dyad subset `B`, indexed by mask; `z_∅ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledMobius<T> {
    n: usize,
    z: Vec<T>,
}

impl<T: Scalar> LabeledMobius<T> {
    pub fn new(n: usize, z: Vec<T>) -> Result<Self> {
        check_cap("labeled Möbius node count", n, MAX_JOINT_NODES)?;
        if z.len() != 1 << num_dyads(n) {
            return Err(Error::InvalidInput(format!(
                "labeled Möbius vector on {n} nodes needs {} entries",
                1u64 << num_dyads(n)
            )));
        }
        Ok(LabeledMobius { n, z })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[T] {
        &self.z
    }

    pub fn z(&self, mask: u64) -> &T {
        &self.z[mask as usize]
    }

    /// First pair `B ⊂ B'` (differing in one dyad) with `z_B < z_{B'}`.
    pub fn monotonicity_violation(&self, tol: f64) -> Option<(u64, u64)> {
        let m = num_dyads(self.n);
        for b in 0..self.z.len() as u64 {
            for d in 0..m {
                let sup = b | 1 << d;
                if sup != b && (self.z[b as usize].clone() - self.z[sup as usize].clone()).is_negative_tol(tol) {
                    return Some((b, sup));
                }
            }
        }
        None
    }
}

pub fn labeled_mobius_from_joint<T: Scalar>(jt: &JointTable<T>) -> LabeledMobius<T> {
    let mut z = jt.probs.clone();
    zeta_superset(&mut z);
    LabeledMobius { n: jt.n, z }
}

/// Inverts a labeled Möbius vector. Probabilities below zero (below `-tol`
/// for floats) are reported with the offending configuration.
pub fn joint_from_labeled_mobius<T: Scalar>(lm: &LabeledMobius<T>, tol: f64) -> Result<JointTable<T>> {
    let mut p = lm.z.clone();
    mobius_superset(&mut p);
    if let Some((m, v)) = p.iter().enumerate().find(|(_, v)| v.is_negative_tol(tol)) {
        return Err(Error::InvalidParameters(format!(
            "configuration {} gets probability {}",
            LabeledNetwork::from_mask(lm.n, m as u64).edge_key(),
            v.to_text()
        )));
    }
    Ok(JointTable { n: lm.n, probs: p })
}

/// Exchangeable Möbius parameters: one `z_U` per class on at most `n` nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusVector<T> {
    n: usize,
    z: BTreeMap<UnlabeledClass, T>,
}

impl<T: Scalar> MobiusVector<T> {
    /// Sets `z_∅ = 1` when the empty class is not listed.
    pub fn new(n: usize, z: BTreeMap<UnlabeledClass, T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("Möbius vector needs at least one node".into()));
        }
        let mut z = z;
        z.entry(UnlabeledClass::empty()).or_insert_with(T::one);
        Ok(MobiusVector { n, z })
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (UnlabeledClass, T)>) -> Result<Self> {
        Self::new(n, pairs.into_iter().collect())
    }

    /// Erdős–Rényi moments `z_U = p^{|E(U)|}` on every class of `n` nodes.
    pub fn erdos_renyi(n: usize, p: &T) -> Result<Self> {
        let classes = crate::graph::enumerate_classes(n, true)?;
        Self::from_pairs(n, classes.into_iter().map(|c| (c, p.pow(c.edge_count() as u32))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, c: &UnlabeledClass) -> Option<&T> {
        self.z.get(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&UnlabeledClass, &T)> {
        self.z.iter()
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(&T) -> S) -> MobiusVector<S> {
        MobiusVector {
            n: self.n,
            z: self.z.iter().map(|(c, v)| (*c, f(v))).collect(),
        }
    }

    pub fn to_f64(&self) -> MobiusVector<f64> {
        self.map(|v| v.to_f64())
    }

    /// Values aligned with a class table; every class must be present.
    pub fn aligned(&self, table: &ClassTable) -> Result<Vec<T>> {
        table
            .classes
            .iter()
            .map(|c| {
                self.z.get(c).cloned().ok_or_else(|| {
                    Error::InvalidInput(format!("missing z for class {}", c.key()))
                })
            })
            .collect()
    }

    /// Keeps the classes on at most `n_small` vertices.
    pub fn restrict(&self, n_small: usize) -> MobiusVector<T> {
        MobiusVector {
            n: n_small,
            z: self
                .z
                .iter()
                .filter(|(c, _)| c.vertex_count() <= n_small)
                .map(|(c, v)| (*c, v.clone()))
                .collect(),
        }
    }

    /// Expands to labeled parameters: `z_B = z_[B]`.
    pub fn labeled(&self) -> Result<LabeledMobius<T>> {
        check_cap("labeled Möbius node count", self.n, MAX_JOINT_NODES)?;
        let table = ClassTable::get(self.n)?;
        let vals = self.aligned(&table)?;
        let z = (0..1u64 << num_dyads(self.n))
            .map(|m| vals[table.class_index(&LabeledNetwork::from_mask(self.n, m))].clone())
            .collect();
        Ok(LabeledMobius { n: self.n, z })
    }

    /// Class masses implied by the exchangeable inversion,
    /// `q_W = |[W]| Σ_U (-1)^{|U|-|W|} r_U(W) z_U`, without sign checks.
    pub fn class_masses(&self) -> Result<Vec<T>> {
        let table = ClassTable::get(self.n)?;
        let z = self.aligned(&table)?;
        Ok((0..table.len())
            .map(|w| {
                let p = signed_r_sum(&table, w, &z);
                p * T::from_u64(table.sizes[w])
            })
            .collect())
    }

    /// The exchangeable law with these parameters, or the first class whose
    /// implied probability is negative.
    pub fn to_class_distribution(&self, tol: f64) -> Result<ClassDistribution<T>> {
        let q = self.class_masses()?;
        let table = ClassTable::get(self.n)?;
        if let Some((w, v)) = q.iter().enumerate().find(|(_, v)| v.is_negative_tol(tol)) {
            return Err(Error::InvalidParameters(format!(
                "configuration {} gets probability {}",
                table.classes[w].padded(self.n).edge_key(),
                (v.clone() / T::from_u64(table.sizes[w])).to_text()
            )));
        }
        ClassDistribution::from_vec(self.n, q, tol.max(1e-12))
    }
}

fn signed_r_sum<T: Scalar>(table: &ClassTable, xi: usize, z: &[T]) -> T {
    let xe = table.classes[xi].edge_count();
    let mut acc = T::zero();
    for (u, zu) in z.iter().enumerate() {
        let r = table.r(u, xi);
        if r == 0 {
            continue;
        }
        let term = T::from_u64(r) * zu.clone();
        if (table.classes[u].edge_count() - xe) % 2 == 0 {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    acc
}

/// `P(X = x) = Σ_U (-1)^{|U|-|x|} r_U(x) z_U`.
pub fn exch_joint_from_mobius<T: Scalar>(mv: &MobiusVector<T>, x: &LabeledNetwork, tol: f64) -> Result<T> {
    if x.n() != mv.n {
        return Err(Error::InvalidInput(format!(
            "network has {} nodes, Möbius vector {}",
            x.n(),
            mv.n
        )));
    }
    let table = ClassTable::get(mv.n)?;
    let z = mv.aligned(&table)?;
    let p = signed_r_sum(&table, table.class_index(x), &z);
    if p.is_negative_tol(tol) {
        return Err(Error::InvalidParameters(format!(
            "configuration {} gets probability {}",
            x.edge_key(),
            p.to_text()
        )));
    }
    Ok(p)
}

/// Mean-value parameters `z_U = E[σ_U(X)] / sub(U, K_n)`.
pub fn mobius_from_class_distribution<T: Scalar>(cd: &ClassDistribution<T>) -> MobiusVector<T> {
    let table = cd.table();
    let z = (0..table.len())
        .map(|u| {
            (
                table.classes[u],
                cd.expected_sigma(u) / T::from_u64(table.sub_complete[u]),
            )
        })
        .collect();
    MobiusVector { n: cd.n(), z }
}

/// Dissociated completion: connected classes keep their values, every other
/// class gets the product over its connected components.
pub fn dissociated_completion<T: Scalar>(mv: &MobiusVector<T>) -> Result<MobiusVector<T>> {
    let classes = crate::graph::enumerate_classes(mv.n, true)?;
    let mut z = BTreeMap::new();
    for c in classes {
        let v = if c.is_empty() {
            T::one()
        } else {
            let mut acc = T::one();
            for comp in c.components() {
                let zc = mv.get(&comp).ok_or_else(|| {
                    Error::InvalidInput(format!("missing z for connected class {}", comp.key()))
                })?;
                acc = acc * zc.clone();
            }
            acc
        };
        z.insert(c, v);
    }
    Ok(MobiusVector { n: mv.n, z })
}

/// Why a Möbius vector does not define a distribution.
#[derive(Clone, Debug, PartialEq)]
pub enum MobiusViolation {
    EmptyNotOne { value: String },
    MissingClass { class: String },
    ForeignClass { class: String },
    OutOfRange { class: String, value: String },
    NegativeProbability { configuration: String, value: String },
}

impl fmt::Display for MobiusViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyNotOne { value } => write!(f, "z of the empty class is {value}, not 1"),
            Self::MissingClass { class } => write!(f, "no value for class {class}"),
            Self::ForeignClass { class } => write!(f, "class {class} does not fit on the node set"),
            Self::OutOfRange { class, value } => write!(f, "z of class {class} is {value}, outside [0,1]"),
            Self::NegativeProbability { configuration, value } => {
                write!(f, "configuration {configuration} gets probability {value}")
            }
        }
    }
}

/// Checks `z_∅ = 1`, that exactly the classes on `n` nodes are present with
/// values in `[0,1]`, and that every implied configuration probability is
/// nonnegative. Returns the first violation found.
pub fn validate_mobius<T: Scalar>(mv: &MobiusVector<T>, tol: f64) -> Result<Option<MobiusViolation>> {
    let table = ClassTable::get(mv.n)?;
    let empty = mv.z.get(&UnlabeledClass::empty()).cloned().unwrap_or_else(T::one);
    if !empty.approx_eq(&T::one(), tol) {
        return Ok(Some(MobiusViolation::EmptyNotOne { value: empty.to_text() }));
    }
    if let Some(c) = mv.z.keys().find(|c| table.index_of(c).is_none()) {
        return Ok(Some(MobiusViolation::ForeignClass { class: c.key() }));
    }
    if let Some(c) = table.classes.iter().find(|c| !mv.z.contains_key(c)) {
        return Ok(Some(MobiusViolation::MissingClass { class: c.key() }));
    }
    for (c, v) in &mv.z {
        if v.is_negative_tol(tol) || (T::one() - v.clone()).is_negative_tol(tol) {
            return Ok(Some(MobiusViolation::OutOfRange {
                class: c.key(),
                value: v.to_text(),
            }));
        }
    }
    let q = mv.class_masses()?;
    for (w, v) in q.iter().enumerate() {
        if v.is_negative_tol(tol) {
            return Ok(Some(MobiusViolation::NegativeProbability {
                configuration: table.classes[w].padded(mv.n).edge_key(),
                value: (v.clone() / T::from_u64(table.sizes[w])).to_text(),
            }));
        }
    }
    Ok(None)
}

/// `P(X_H = 1, X_{rest} = 0) = Σ_{B ⊇ H} (-1)^{|B \ H|} Π_{C} z_C`, where `C`
/// runs over the connected components of `B` in the bidirected graph `dep`
/// and `z_conn` holds `z_C` for connected vertex sets (as dyad masks).
pub fn bidirected_joint<T: Scalar>(dep: &DependenceGraph, z_conn: &HashMap<u64, T>, h: u64, tol: f64) -> Result<T> {
    let m = dep.num_vertices();
    let rest = ((1u64 << m) - 1) & !h;
    let mut acc = T::zero();
    // every B ⊇ H is H plus a subset of the remaining vertices
    let mut sub = 0u64;
    loop {
        let b = h | sub;
        let mut term = T::one();
        for comp in dep.components_within(b) {
            let zc = z_conn.get(&comp).ok_or_else(|| {
                Error::InvalidInput(format!("missing z for connected set {}", dep.set_label(comp)))
            })?;
            term = term * zc.clone();
        }
        if sub.count_ones() % 2 == 0 {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
        if sub == rest {
            break;
        }
        sub = (sub.wrapping_sub(rest)) & rest;
    }
    if acc.is_negative_tol(tol) {
        return Err(Error::InvalidParameters(format!(
            "configuration {} gets probability {}",
            dep.set_label(h),
            acc.to_text()
        )));
    }
    Ok(acc)
}

/// The full joint table of a bidirected factorization, via the labeled
/// Möbius vector `z_B = Π_C z_C`. `dep` must have `n(n-1)/2` vertices.
pub fn bidirected_joint_table<T: Scalar>(
    dep: &DependenceGraph,
    z_conn: &HashMap<u64, T>,
    tol: f64,
) -> Result<JointTable<T>> {
    let n = dep.n();
    check_cap("joint table node count", n, MAX_JOINT_NODES)?;
    let mut z = Vec::with_capacity(1 << dep.num_vertices());
    for b in 0..1u64 << dep.num_vertices() {
        let mut term = T::one();
        for comp in dep.components_within(b) {
            let zc = z_conn.get(&comp).ok_or_else(|| {
                Error::InvalidInput(format!("missing z for connected set {}", dep.set_label(comp)))
            })?;
            term = term * zc.clone();
        }
        z.push(term);
    }
    joint_from_labeled_mobius(&LabeledMobius { n, z }, tol)
}

/// Canonical parameters `ν_U` of the exchangeable exponential form
/// `P(x) = exp(Σ_U σ_U(x) ν_U - ψ(ν))`.
#[derive(Clone, Debug)]
pub struct CanonicalParams {
    pub n: usize,
    pub nu: BTreeMap<UnlabeledClass, f64>,
    pub psi: f64,
}

impl CanonicalParams {
    /// Computes `ψ` by summing over classes weighted by `|[W]|` (`n <= 6`).
    pub fn new(n: usize, nu: BTreeMap<UnlabeledClass, f64>) -> Result<Self> {
        check_cap("canonical parameter node count", n, MAX_JOINT_NODES)?;
        let table = ClassTable::get(n)?;
        if let Some(c) = nu.keys().find(|c| c.is_empty() || table.index_of(c).is_none()) {
            return Err(Error::InvalidInput(format!(
                "no canonical parameter for class {} on {n} nodes",
                c.key()
            )));
        }
        if let Some((c, v)) = nu.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameters(format!("ν for {} is {v}", c.key())));
        }
        let exps = Self::exponents(&table, &nu);
        let terms: Vec<f64> = exps
            .iter()
            .zip(&table.sizes)
            .map(|(e, &s)| e + (s as f64).ln())
            .collect();
        let psi = crate::optim::log_sum_exp(&terms);
        Ok(CanonicalParams { n, nu, psi })
    }

    fn exponents(table: &ClassTable, nu: &BTreeMap<UnlabeledClass, f64>) -> Vec<f64> {
        let mut e = vec![0.0; table.len()];
        for (c, v) in nu {
            let row = table.sigma_row(table.index_of(c).unwrap());
            for (w, &s) in row.iter().enumerate() {
                e[w] += s as f64 * v;
            }
        }
        e
    }

    pub fn log_prob(&self, x: &LabeledNetwork) -> f64 {
        let exponent: f64 = self
            .nu
            .iter()
            .map(|(c, v)| crate::homcount::sigma(c, x) as f64 * v)
            .sum();
        exponent - self.psi
    }

    pub fn prob(&self, x: &LabeledNetwork) -> f64 {
        self.log_prob(x).exp()
    }

    pub fn class_distribution(&self) -> Result<ClassDistribution<f64>> {
        let table = ClassTable::get(self.n)?;
        let exps = Self::exponents(&table, &self.nu);
        let q = exps
            .iter()
            .zip(&table.sizes)
            .map(|(e, &s)| (e + (s as f64).ln() - self.psi).exp())
            .collect();
        ClassDistribution::from_vec(self.n, q, 1e-9)
    }
}
