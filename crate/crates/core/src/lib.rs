pub mod classdist;
pub mod consistency;
pub mod dependence;
pub mod error;
pub mod estimation;
pub mod genmodels;
pub mod graph;
pub mod homcount;
pub mod io;
pub mod lp;
pub mod mobius;
pub mod optim;
pub mod rng;
pub mod scalar;

pub use classdist::ClassDistribution;
pub use dependence::{DependenceGraph, EdgeKind};
pub use error::{Error, Result};
pub use graph::{CanonicalForm, DegreeDistribution, LabeledNetwork, UnlabeledClass};
pub use mobius::{JointTable, LabeledMobius, MobiusVector};
pub use scalar::{Rational, Scalar};
