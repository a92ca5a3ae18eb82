//! Two-player zero-sum matrix games as linear programs.
//!
//! The row player picks a mixed strategy `x` and wants the largest `u` such
//! that every pure column reply pays at least `u`:
//!
//! ```text
//! max u  s.t.  u − Σᵢ M[i][j]·xᵢ ≤ 0   for every column j
//!              Σᵢ xᵢ ≤ 1,  −Σᵢ xᵢ ≤ −1
//!              −xᵢ ≤ 0                 for every row i
//! ```
//!
//! Variables are ordered `(u, x₀, …, x_{rows−1})`; `u` stays free.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{dot, LinalgError, Matrix, Rational, Vector};
use crate::optimize::{maximize_with, LpInstance, OptimizeResult};
use crate::simplex::{SimplexError, SolveOptions};

/// Payoffs to the row player. Always at least 1×1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffMatrix(Matrix);

impl PayoffMatrix {
    pub fn new(m: Matrix) -> Result<Self, GameError> {
        if m.rows() == 0 || m.cols() == 0 {
            return Err(GameError::Empty);
        }
        Ok(PayoffMatrix(m))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    /// The same game seen from the column player: `−Mᵀ`.
    pub fn for_column_player(&self) -> PayoffMatrix {
        PayoffMatrix(self.0.transpose().neg())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSolution {
    /// Guaranteed expected payoff of `strategy`.
    pub value: Rational,
    /// Row-player mixed strategy: nonnegative, sums to 1.
    pub strategy: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("payoff matrix must have at least one row and one column")]
    Empty,
    #[error("internal error: game LP is infeasible (core {0:?})")]
    Unsat(Vec<usize>),
    #[error("internal error: game LP has inconsistent dimensions")]
    DimMismatch,
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub fn game_to_lp(m: &PayoffMatrix) -> LpInstance {
    let (rows, cols) = (m.rows(), m.cols());
    let n = rows + 1;
    let mut a = Vec::with_capacity(cols + 2 + rows);
    let mut b = Vec::with_capacity(cols + 2 + rows);

    for j in 0..cols {
        let mut r = Vec::with_capacity(n);
        r.push(Rational::one());
        r.extend((0..rows).map(|i| -&m.matrix()[(i, j)]));
        a.push(r);
        b.push(Rational::zero());
    }

    let mut sum = vec![Rational::one(); n];
    sum[0] = Rational::zero();
    a.push(sum.clone());
    b.push(Rational::one());
    a.push(sum.iter().map(|v| -v).collect());
    b.push(-Rational::one());

    for i in 0..rows {
        let mut r = vec![Rational::zero(); n];
        r[i + 1] = -Rational::one();
        a.push(r);
        b.push(Rational::zero());
    }

    let mut c = vec![Rational::zero(); n];
    c[0] = Rational::one();
    LpInstance::new(
        Matrix::from_rows(n, a).expect("uniform row width"),
        Vector::new(b),
        Vector::new(c),
    )
}

pub fn solve_game(m: &PayoffMatrix) -> Result<GameSolution, GameError> {
    solve_game_with(m, &SolveOptions::default())
}

pub fn solve_game_with(m: &PayoffMatrix, opts: &SolveOptions) -> Result<GameSolution, GameError> {
    let lp = game_to_lp(m);
    match maximize_with(&lp.a, &lp.b, &lp.c, opts)?.result {
        OptimizeResult::Sat { x, .. } => {
            let mut entries = x.into_inner();
            let value = entries.remove(0);
            Ok(GameSolution {
                value,
                strategy: Vector::new(entries),
            })
        }
        OptimizeResult::Unsat(core) => Err(GameError::Unsat(core)),
        OptimizeResult::DimMismatch => Err(GameError::DimMismatch),
    }
}

/// Optimal strategy and value for the column player (who pays `M`).
pub fn solve_column_player(m: &PayoffMatrix) -> Result<GameSolution, GameError> {
    solve_game(&m.for_column_player())
}

/// Smallest expected payoff of `strategy` against any pure column reply.
pub fn security_level(m: &PayoffMatrix, strategy: &Vector) -> Result<Rational, GameError> {
    let mut worst: Option<Rational> = None;
    for j in 0..m.cols() {
        let payoff = dot(strategy, &m.matrix().column(j)?)?;
        worst = Some(match worst {
            Some(w) if w <= payoff => w,
            _ => payoff,
        });
    }
    Ok(worst.expect("at least one column"))
}
