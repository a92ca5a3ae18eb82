//! LP optimization by satisfiability.
//!
//! For `max c·x s.t. A·x ≤ b`, weak duality gives `c·x ≤ y·b` for every
//! primal-feasible `x` and dual-feasible `y` (`y·A = c`, `y ≥ 0`). Adding the
//! reverse inequality `c·x ≥ y·b` to both feasibility systems leaves exactly
//! the optimal pairs, so one call to the simplex yields an optimum together
//! with a dual certificate.

use num_traits::Zero;

use crate::constraints::{build_system, Affine, Constraint};
use crate::linalg::{dot, mat_vec, vec_mat, LinalgError, Matrix, Rational, Vector};
use crate::linpoly::{list_to_lpoly, Assignment};
use crate::simplex::{solve_with, SimplexError, SimplexResult, SolveOptions};

/// `max c·x s.t. A·x ≤ b`, with `x` unrestricted in sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpInstance {
    pub a: Matrix,
    pub b: Vector,
    pub c: Vector,
}

/// Outcome of [`create_optimal_solution`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// Indices into [`build_system`] order.
    Unsat(Vec<usize>),
    Sat {
        x: Vector,
        y: Vector,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptimizeResult {
    DimMismatch,
    /// The combined system is infeasible: the primal is infeasible, or it is
    /// unbounded (equivalently, the dual is infeasible).
    Unsat(Vec<usize>),
    Sat {
        x: Vector,
        y: Vector,
    },
}

impl From<Solution> for OptimizeResult {
    fn from(s: Solution) -> Self {
        match s {
            Solution::Unsat(core) => OptimizeResult::Unsat(core),
            Solution::Sat { x, y } => OptimizeResult::Sat { x, y },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimized {
    pub result: OptimizeResult,
    pub pivots: u64,
}

impl LpInstance {
    pub fn new(a: Matrix, b: Vector, c: Vector) -> Self {
        LpInstance { a, b, c }
    }

    pub fn dims_ok(&self) -> bool {
        self.b.dim() == self.a.rows() && self.c.dim() == self.a.cols()
    }

    pub fn maximize(&self) -> OptimizeResult {
        maximize(&self.a, &self.b, &self.c)
    }

    pub fn constraints(&self) -> Result<Vec<Constraint>, LinalgError> {
        build_system(&self.a, &self.b, &self.c)
    }
}

/// `x[i] = a(i)` for `i < n`, `y[j] = a(n + j)` for `j < m`; absent keys are 0.
pub fn split_nm(n: usize, m: usize, a: &Assignment) -> (Vector, Vector) {
    let read = |i: usize| a.get(&i).cloned().unwrap_or_else(Rational::zero);
    let x = (0..n).map(read).collect();
    let y = (n..n + m).map(read).collect();
    (x, y)
}

/// Solves the combined primal/dual system.
///
/// # Panics
///
/// If `dim(b) ≠ rows(A)` or `dim(c) ≠ cols(A)`; use [`maximize`] for a
/// checked entry point.
pub fn create_optimal_solution(a: &Matrix, b: &Vector, c: &Vector) -> Solution {
    create_optimal_solution_with(a, b, c, &SolveOptions::default())
        .expect("no pivot limit set")
        .0
}

pub fn create_optimal_solution_with(
    a: &Matrix,
    b: &Vector,
    c: &Vector,
    opts: &SolveOptions,
) -> Result<(Solution, u64), SimplexError> {
    let cs = build_system(a, b, c).expect("dimensions checked by the caller");
    let solved = solve_with(&cs, opts)?;
    let solution = match solved.result {
        SimplexResult::Unsat(core) => Solution::Unsat(core),
        SimplexResult::Sat(asgn) => {
            let (x, y) = split_nm(c.dim(), b.dim(), &asgn);
            Solution::Sat { x, y }
        }
    };
    Ok((solution, solved.pivots))
}

pub fn maximize(a: &Matrix, b: &Vector, c: &Vector) -> OptimizeResult {
    maximize_with(a, b, c, &SolveOptions::default())
        .expect("no pivot limit set")
        .result
}

pub fn maximize_with(
    a: &Matrix,
    b: &Vector,
    c: &Vector,
    opts: &SolveOptions,
) -> Result<Optimized, SimplexError> {
    if b.dim() != a.rows() || c.dim() != a.cols() {
        return Ok(Optimized {
            result: OptimizeResult::DimMismatch,
            pivots: 0,
        });
    }
    let (solution, pivots) = create_optimal_solution_with(a, b, c, opts)?;
    Ok(Optimized {
        result: solution.into(),
        pivots,
    })
}

/// Feasibility of `A·x ≤ b` alone. Separates an infeasible primal from an
/// unbounded one after [`maximize`] reports `Unsat`.
pub fn primal_feasible(
    a: &Matrix,
    b: &Vector,
    opts: &SolveOptions,
) -> Result<bool, PrimalCheckError> {
    if b.dim() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "primal_feasible",
            left: b.dim(),
            right: a.rows(),
        }
        .into());
    }
    let cs: Vec<Constraint> = a
        .row_iter()
        .zip(b.iter())
        .map(|(row, bi)| Constraint::leq(list_to_lpoly(row), Affine::constant(bi.clone())))
        .collect();
    Ok(solve_with(&cs, opts)?.result.is_sat())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PrimalCheckError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

/// `A·x ≤ b` pointwise.
pub fn sat_primal_check(a: &Matrix, b: &Vector, x: &Vector) -> Result<bool, LinalgError> {
    mat_vec(a, x)?.le_pointwise(b)
}

/// `y·A = c` pointwise and `y ≥ 0`.
pub fn sat_dual_check(a: &Matrix, c: &Vector, y: &Vector) -> Result<bool, LinalgError> {
    let ya = vec_mat(y, a)?;
    if ya.dim() != c.dim() {
        return Err(LinalgError::DimensionMismatch {
            op: "sat_dual_check",
            left: ya.dim(),
            right: c.dim(),
        });
    }
    Ok(ya == *c && y.is_nonnegative())
}

/// `y·b − c·x`; nonnegative for any feasible primal/dual pair.
pub fn weak_duality_gap(
    b: &Vector,
    c: &Vector,
    x: &Vector,
    y: &Vector,
) -> Result<Rational, LinalgError> {
    Ok(dot(y, b)? - dot(x, c)?)
}

/// Primal feasibility, dual feasibility, and a zero gap. Together these prove
/// `x` maximizes and `y` minimizes.
pub fn is_optimal_check(
    a: &Matrix,
    b: &Vector,
    c: &Vector,
    x: &Vector,
    y: &Vector,
) -> Result<bool, LinalgError> {
    Ok(sat_primal_check(a, b, x)?
        && sat_dual_check(a, c, y)?
        && weak_duality_gap(b, c, x, y)?.is_zero())
}
