//! Isospectral reductions of matrices over the field of rational functions,
//! unfoldings of such reductions back into scalar matrices, and the
//! correspondence with continuous-time quantum walks.

pub mod error;
pub mod graphs;
pub mod io;
pub mod linalg;
pub mod quantumwalk;
pub mod ratfun;
pub mod ratmat;
pub mod reduction;
pub mod tolerance;
pub mod unfolding;

pub use error::{Error, Result};
pub use linalg::{CMatrix, Matrix};
pub use ratfun::{ExactRational, FloatComplex, Polynomial, RationalFunction, Scalar, C64};
pub use ratmat::{PartialFractionForm, RatMatrix};
pub use reduction::{reduce, reduce_frame, LabeledMatrix, Selector};
pub use tolerance::Tolerances;
pub use quantumwalk::{PstCertificate, Propagator, TrigWalkSpec, WalkSample};
