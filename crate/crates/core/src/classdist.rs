//! Exchangeable distributions stored one probability per isomorphism class.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{LabeledNetwork, UnlabeledClass};
use crate::homcount::ClassTable;
use crate::mobius::JointTable;
use crate::scalar::Scalar;

/// Probability of each isomorphism class on `n` nodes (the empty class
/// included). Within a class the labeled networks are equiprobable.
#[derive(Clone, Debug)]
pub struct ClassDistribution<T> {
    table: Arc<ClassTable>,
    q: Vec<T>,
}

impl<T: Scalar> ClassDistribution<T> {
    /// Builds from a full vector aligned with `enumerate_classes(n, true)`.
    pub fn from_vec(n: usize, q: Vec<T>, tol: f64) -> Result<Self> {
        let table = ClassTable::get(n)?;
        if q.len() != table.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} class probabilities on {n} nodes, got {}",
                table.len(),
                q.len()
            )));
        }
        let cd = ClassDistribution { table, q };
        cd.validate(tol)?;
        Ok(cd)
    }

    /// Builds from `(class, probability)` pairs; unlisted classes get 0.
    pub fn from_pairs(n: usize, pairs: &[(UnlabeledClass, T)], tol: f64) -> Result<Self> {
        let table = ClassTable::get(n)?;
        let mut q = vec![T::zero(); table.len()];
        for (c, p) in pairs {
            let i = table.index_of(c).ok_or_else(|| {
                Error::InvalidInput(format!("class {} does not fit on {n} nodes", c.key()))
            })?;
            q[i] = q[i].clone() + p.clone();
        }
        Self::from_vec(n, q, tol)
    }

    pub fn point_mass(n: usize, class: &UnlabeledClass) -> Result<Self> {
        Self::from_pairs(n, &[(*class, T::one())], 0.0)
    }

    /// Class masses of a joint table. Does not check exchangeability.
    pub fn from_joint(jt: &JointTable<T>) -> Result<Self> {
        let table = ClassTable::get(jt.n())?;
        let mut q = vec![T::zero(); table.len()];
        for (mask, p) in jt.probs().iter().enumerate() {
            let i = table.class_index(&LabeledNetwork::from_mask(jt.n(), mask as u64));
            q[i] = q[i].clone() + p.clone();
        }
        Ok(ClassDistribution { table, q })
    }

    fn validate(&self, tol: f64) -> Result<()> {
        let mut total = T::zero();
        for (c, p) in self.table.classes.iter().zip(&self.q) {
            if p.is_negative_tol(tol) {
                return Err(Error::InvalidParameters(format!(
                    "negative probability {} for class {}",
                    p.to_text(),
                    c.key()
                )));
            }
            total = total + p.clone();
        }
        if !total.approx_eq(&T::one(), tol.max(if T::EXACT { 0.0 } else { 1e-12 })) {
            return Err(Error::InvalidParameters(format!(
                "class probabilities sum to {}",
                total.to_text()
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.table.n
    }

    pub fn table(&self) -> &Arc<ClassTable> {
        &self.table
    }

    pub fn classes(&self) -> &[UnlabeledClass] {
        &self.table.classes
    }

    pub fn probs(&self) -> &[T] {
        &self.q
    }

    pub fn get(&self, c: &UnlabeledClass) -> T {
        self.table
            .index_of(c)
            .map(|i| self.q[i].clone())
            .unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&UnlabeledClass, &T)> {
        self.table.classes.iter().zip(&self.q)
    }

    /// `P(X = x) = q_[x] / |[x]|`.
    pub fn labeled_prob(&self, x: &LabeledNetwork) -> T {
        let i = self.table.class_index(x);
        self.q[i].clone() / T::from_u64(self.table.sizes[i])
    }

    pub fn to_joint(&self) -> Result<JointTable<T>> {
        let per: Vec<T> = self
            .q
            .iter()
            .zip(&self.table.sizes)
            .map(|(p, &s)| p.clone() / T::from_u64(s))
            .collect();
        let n = self.n();
        JointTable::from_fn(n, |x| per[self.table.class_index(&x)].clone())
    }

    pub fn to_f64(&self) -> ClassDistribution<f64> {
        ClassDistribution {
            table: self.table.clone(),
            q: self.q.iter().map(|p| p.to_f64()).collect(),
        }
    }

    /// `E[σ_U(X)]` for the class at index `u` of this table.
    pub fn expected_sigma(&self, u: usize) -> T {
        let row = self.table.sigma_row(u);
        self.q
            .iter()
            .zip(row)
            .filter(|(_, &s)| s != 0)
            .fold(T::zero(), |acc, (p, &s)| acc + p.clone() * T::from_u64(s))
    }
}
