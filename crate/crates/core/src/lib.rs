//! Numerical laboratory for Markov-type inequalities and best uniform
//! approximation on algebraic hypersurfaces `x_k^d = sum_i Q_i(y) x_k^i`.

pub mod approx;
pub mod chebysolve;
pub mod error;
pub mod extension;
pub mod geometry;
pub mod markov;
pub mod polyring;
pub mod presets;
pub mod runner;
pub mod scalar;
pub mod scenario;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Dd, Scalar};

/// `f64` instances of the generic types.
pub type Poly = polyring::MultiPoly<f64>;
pub type Relation = polyring::VarietyRelation<f64>;
pub type NormalForm = polyring::NormalForm<f64>;
pub type Series = approx::ApproxSeries<f64>;
