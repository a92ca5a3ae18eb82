//! Linear constraints and the builders that combine a primal problem, its
//! dual, and the reversed weak-duality inequality into one system.
//!
//! Variable layout of the combined system for `A ∈ ℚ^{m×n}`: `x` occupies
//! variables `0..n`, `y` occupies `n..n+m`.

use std::fmt;

use num_traits::{One, Zero};

use crate::linalg::{two_block_non_interfere, LinalgError, Matrix, Rational, Vector};
use crate::linpoly::{matrix_to_lpolies, monom, vec_to_lpoly, Assignment, LinPoly, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Leq,
    Eq,
    Geq,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Leq => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Geq => lhs >= rhs,
        }
    }

    pub fn flip(self) -> Relation {
        match self {
            Relation::Leq => Relation::Geq,
            Relation::Eq => Relation::Eq,
            Relation::Geq => Relation::Leq,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Leq => "<=",
            Relation::Eq => "=",
            Relation::Geq => ">=",
        }
    }
}

/// A linear polynomial plus a constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Affine {
    pub poly: LinPoly,
    pub constant: Rational,
}

impl Affine {
    pub fn new(poly: LinPoly, constant: Rational) -> Self {
        Affine { poly, constant }
    }

    pub fn constant(c: Rational) -> Self {
        Affine {
            poly: LinPoly::zero(),
            constant: c,
        }
    }

    pub fn eval(&self, asgn: &Assignment) -> Rational {
        self.poly.eval(asgn) + &self.constant
    }
}

impl From<LinPoly> for Affine {
    fn from(poly: LinPoly) -> Self {
        Affine {
            poly,
            constant: Rational::zero(),
        }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.poly.is_zero(), self.constant.is_zero()) {
            (true, _) => write!(f, "{}", self.constant),
            (false, true) => write!(f, "{}", self.poly),
            (false, false) if self.constant < Rational::zero() => {
                write!(f, "{} - {}", self.poly, -&self.constant)
            }
            (false, false) => write!(f, "{} + {}", self.poly, self.constant),
        }
    }
}

/// `lhs rel rhs` between two affine expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub lhs: Affine,
    pub rel: Relation,
    pub rhs: Affine,
}

impl Constraint {
    pub fn new(lhs: impl Into<Affine>, rel: Relation, rhs: impl Into<Affine>) -> Self {
        Constraint {
            lhs: lhs.into(),
            rel,
            rhs: rhs.into(),
        }
    }

    pub fn leq(lhs: impl Into<Affine>, rhs: impl Into<Affine>) -> Self {
        Constraint::new(lhs, Relation::Leq, rhs)
    }

    pub fn eq(lhs: impl Into<Affine>, rhs: impl Into<Affine>) -> Self {
        Constraint::new(lhs, Relation::Eq, rhs)
    }

    pub fn geq(lhs: impl Into<Affine>, rhs: impl Into<Affine>) -> Self {
        Constraint::new(lhs, Relation::Geq, rhs)
    }

    /// Exact satisfaction check; unassigned variables read as zero.
    pub fn is_satisfied_by(&self, asgn: &Assignment) -> bool {
        self.rel.holds(&self.lhs.eval(asgn), &self.rhs.eval(asgn))
    }

    pub fn normalize(&self) -> ConstraintNF {
        normalize(self)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lhs.poly.vars().chain(self.rhs.poly.vars())
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel.symbol(), self.rhs)
    }
}

/// `poly rel bound`: every variable on the left, the constant on the right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstraintNF {
    pub poly: LinPoly,
    pub rel: Relation,
    pub bound: Rational,
}

impl ConstraintNF {
    pub fn new(poly: LinPoly, rel: Relation, bound: Rational) -> Self {
        ConstraintNF { poly, rel, bound }
    }

    pub fn is_satisfied_by(&self, asgn: &Assignment) -> bool {
        self.rel.holds(&self.poly.eval(asgn), &self.bound)
    }
}

impl fmt::Display for ConstraintNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.poly, self.rel.symbol(), self.bound)
    }
}

impl From<ConstraintNF> for Constraint {
    fn from(nf: ConstraintNF) -> Self {
        Constraint::new(nf.poly, nf.rel, Affine::constant(nf.bound))
    }
}

/// Moves variables left and constants right.
pub fn normalize(c: &Constraint) -> ConstraintNF {
    ConstraintNF {
        poly: c.lhs.poly.sub(&c.rhs.poly),
        rel: c.rel,
        bound: &c.rhs.constant - &c.lhs.constant,
    }
}

/// `x_{ix+i} ≥ v[i]` for every `i < dim(v)`.
pub fn from_ind_geq(ix: Var, v: &Vector) -> Vec<Constraint> {
    v.iter()
        .enumerate()
        .map(|(i, vi)| {
            Constraint::geq(monom(Rational::one(), ix + i), Affine::constant(vi.clone()))
        })
        .collect()
}

fn check_lp_dims(a: &Matrix, b: &Vector, c: &Vector) -> Result<(), LinalgError> {
    if b.dim() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "rhs vs matrix rows",
            left: b.dim(),
            right: a.rows(),
        });
    }
    if c.dim() != a.cols() {
        return Err(LinalgError::DimensionMismatch {
            op: "objective vs matrix cols",
            left: c.dim(),
            right: a.cols(),
        });
    }
    Ok(())
}

/// `A·x ≤ b` over the `x` block followed by `Aᵀ·y = c` over the `y` block.
pub fn mat_leq_eqc(a: &Matrix, b: &Vector, c: &Vector) -> Result<Vec<Constraint>, LinalgError> {
    check_lp_dims(a, b, c)?;
    let rows = matrix_to_lpolies(&two_block_non_interfere(a, &a.transpose()));
    let rhs = b.append(c);
    let m = b.dim();
    Ok(rows
        .into_iter()
        .zip(rhs.iter())
        .enumerate()
        .map(|(i, (p, r))| {
            let rel = if i < m { Relation::Leq } else { Relation::Eq };
            Constraint::new(p, rel, Affine::constant(r.clone()))
        })
        .collect())
}

/// `x·c ≥ y·b` under the combined layout.
pub fn xc_geq_yb(c: &Vector, b: &Vector) -> Constraint {
    let lhs = vec_to_lpoly(&c.append(&Vector::zeros(b.dim())));
    let rhs = vec_to_lpoly(&Vector::zeros(c.dim()).append(b));
    Constraint::geq(lhs, rhs)
}

/// The combined system, in this order:
/// `[x·c ≥ y·b] ++ [A·x ≤ b] ++ [Aᵀ·y = c] ++ [y ≥ 0]`.
///
/// Any assignment satisfying it carries a primal optimum in `x` and a dual
/// optimum in `y`.
pub fn build_system(a: &Matrix, b: &Vector, c: &Vector) -> Result<Vec<Constraint>, LinalgError> {
    let mut cs = Vec::with_capacity(1 + 2 * b.dim() + c.dim());
    cs.push(xc_geq_yb(c, b));
    cs.extend(mat_leq_eqc(a, b, c)?);
    cs.extend(from_ind_geq(c.dim(), &Vector::zeros(b.dim())));
    Ok(cs)
}

/// Which block of [`build_system`] a constraint index falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemPart {
    /// `x·c ≥ y·b`
    DualityGap,
    /// Row `i` of `A·x ≤ b`.
    Primal(usize),
    /// Column `j` of `Aᵀ·y = c`.
    Dual(usize),
    /// `y_i ≥ 0`.
    DualSign(usize),
}

impl SystemPart {
    /// Locates `index` for a system built from `m` rows and `n` columns.
    pub fn locate(index: usize, m: usize, n: usize) -> Option<SystemPart> {
        match index {
            0 => Some(SystemPart::DualityGap),
            i if i <= m => Some(SystemPart::Primal(i - 1)),
            i if i <= m + n => Some(SystemPart::Dual(i - 1 - m)),
            i if i <= 2 * m + n => Some(SystemPart::DualSign(i - 1 - m - n)),
            _ => None,
        }
    }
}

impl fmt::Display for SystemPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemPart::DualityGap => f.write_str("duality: x.c >= y.b"),
            SystemPart::Primal(i) => write!(f, "primal row {i}"),
            SystemPart::Dual(j) => write!(f, "dual column {j}"),
            SystemPart::DualSign(i) => write!(f, "dual sign y{i} >= 0"),
        }
    }
}
