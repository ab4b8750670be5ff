//! Exchangeable maximum likelihood.

use num_traits::One;

use crate::classdist::ClassDistribution;
use crate::error::Result;
use crate::graph::{enumerate_classes, LabeledNetwork, UnlabeledClass};
use crate::homcount::t_inj;
use crate::mobius::MobiusVector;
use crate::scalar::Rational;

/// `ẑ_U = t_inj(U, x)` for every class on `x`'s node count.
///
/// The maximizing law spreads all mass uniformly over `[x]`; its mean-value
/// parameters are the injective homomorphism densities.
pub fn exch_mle(x: &LabeledNetwork) -> Result<MobiusVector<Rational>> {
    let classes = enumerate_classes(x.n(), true)?;
    MobiusVector::from_pairs(
        x.n(),
        classes.into_iter().map(|u| {
            let z = if u.is_empty() { Rational::one() } else { t_inj(&u.representative(), x) };
            (u, z)
        }),
    )
}

/// The maximizing law itself: a point mass on the class of `x`.
pub fn exch_mle_distribution(x: &LabeledNetwork) -> Result<ClassDistribution<Rational>> {
    ClassDistribution::point_mass(x.n(), &UnlabeledClass::of(x))
}
