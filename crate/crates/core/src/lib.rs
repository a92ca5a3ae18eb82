//! Exact-rational linear programming by way of weak duality.
//!
//! `maximize c·x subject to A·x ≤ b` is turned into a single satisfiability
//! problem: primal feasibility, dual feasibility, and `c·x ≥ y·b`. Any model
//! of that system is an optimal primal/dual pair, so the answer comes with
//! its own certificate.

pub mod constraints;
pub mod games;
pub mod linalg;
pub mod linpoly;
pub mod optimize;
pub mod oracle;
pub mod simplex;

pub use constraints::{Affine, Constraint, ConstraintNF, Relation};
pub use games::{solve_game, GameSolution, PayoffMatrix};
pub use linalg::{Matrix, Rational, Vector};
pub use linpoly::{Assignment, LinPoly, Var};
pub use optimize::{maximize, LpInstance, OptimizeResult};
pub use simplex::{solve, SimplexResult, SolveOptions};
