//! Dense LP engine and the extremal problems built on it: best uniform
//! approximation and linear-functional maximization over a sup-norm ball.

mod basis;
mod extremal;
mod simplex;

pub use basis::{Basis, ElementTag, Grading, PolySpace};
pub use extremal::{functional_max, minimax_fit, FunctionalMax, MinimaxFit, SupportBound};
pub use simplex::{
    solve_lp, solve_lp_with, Constraint, LpProblem, LpSolution, LpStatus, Relation, Sense, SolverOptions,
    VarBound,
};
