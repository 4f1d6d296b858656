//! Polynomials and rational functions in one variable λ.

mod pfd;
mod poly;
mod rational;
mod roots;
mod scalar;

pub use pfd::{pfd_scalar, PfdTerm, ScalarPfd};
pub(crate) use pfd::principal_parts;
pub use poly::Polynomial;
pub use rational::RationalFunction;
pub use roots::{cluster_roots, polynomial_roots, roots_c64, squarefree, RootCluster};
pub use scalar::{ExactRational, FloatComplex, Scalar, C64};
