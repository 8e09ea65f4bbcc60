//! Sparse multivariate polynomials and the quotient structure of the ring of
//! polynomial functions on a hypersurface `x_k^d = sum_i Q_i(y) x_k^i`.

mod multipoly;
mod relation;
mod text;

pub use multipoly::{ArithOp, Monomial, MultiPoly, PRUNE_THRESHOLD};
pub use relation::{NormalForm, VarietyRelation};
pub use text::parse_poly;
