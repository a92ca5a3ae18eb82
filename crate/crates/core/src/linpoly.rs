//! Sparse linear polynomials and the bridge between polynomial and
//! vector/matrix representations.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{Matrix, Rational, Vector};

/// Variable index.
pub type Var = usize;

/// Finite variable assignment. Variables that are absent read as zero.
pub type Assignment = BTreeMap<Var, Rational>;

/// Linear polynomial `Σ cᵢ·xᵢ` without a constant term.
///
/// Only nonzero coefficients are stored, so two polynomials are equal exactly
/// when their maps are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LinPoly(BTreeMap<Var, Rational>);

impl LinPoly {
    pub fn zero() -> Self {
        LinPoly(BTreeMap::new())
    }

    /// `c·x_i`; the zero polynomial when `c = 0`.
    pub fn monom(c: Rational, i: Var) -> Self {
        let mut p = LinPoly::zero();
        p.add_term(i, c);
        p
    }

    pub fn var(i: Var) -> Self {
        LinPoly::monom(Rational::one(), i)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: Var) -> Rational {
        self.0.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero `(variable, coefficient)` pairs in increasing variable order.
    pub fn terms(&self) -> impl Iterator<Item = (Var, &Rational)> + '_ {
        self.0.iter().map(|(&v, c)| (v, c))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds `c·x_i` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, i: Var, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += k·other`.
    pub fn add_scaled(&mut self, k: &Rational, other: &LinPoly) {
        if k.is_zero() {
            return;
        }
        for (&v, c) in &other.0 {
            self.add_term(v, k * c);
        }
    }

    pub fn scaled(&self, k: &Rational) -> LinPoly {
        if k.is_zero() {
            return LinPoly::zero();
        }
        LinPoly(self.0.iter().map(|(&v, c)| (v, c * k)).collect())
    }

    pub fn sub(&self, other: &LinPoly) -> LinPoly {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        out
    }

    /// Removes variable `i`, returning its coefficient.
    pub fn remove(&mut self, i: Var) -> Option<Rational> {
        self.0.remove(&i)
    }

    /// Renames every variable through `f`.
    pub fn map_vars(&self, mut f: impl FnMut(Var) -> Var) -> LinPoly {
        let mut out = LinPoly::zero();
        for (&v, c) in &self.0 {
            out.add_term(f(v), c.clone());
        }
        out
    }

    /// Evaluates the polynomial; unassigned variables read as zero.
    pub fn eval(&self, asgn: &Assignment) -> Rational {
        self.0
            .iter()
            .fold(Rational::zero(), |acc, (v, c)| match asgn.get(v) {
                Some(x) => acc + c * x,
                None => acc,
            })
    }
}

impl FromIterator<(Var, Rational)> for LinPoly {
    fn from_iter<I: IntoIterator<Item = (Var, Rational)>>(iter: I) -> Self {
        let mut p = LinPoly::zero();
        for (v, c) in iter {
            p.add_term(v, c);
        }
        p
    }
}

impl fmt::Display for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, (v, c)) in self.0.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if mag.is_one() {
                write!(f, "x{v}")?;
            } else {
                write!(f, "{mag}*x{v}")?;
            }
        }
        Ok(())
    }
}

pub fn monom(c: Rational, i: Var) -> LinPoly {
    LinPoly::monom(c, i)
}

/// Polynomial whose coefficient of `x_i` is `cs[i]`.
pub fn list_to_lpoly(cs: &[Rational]) -> LinPoly {
    cs.iter().enumerate().map(|(i, c)| (i, c.clone())).collect()
}

pub fn vec_to_lpoly(v: &Vector) -> LinPoly {
    list_to_lpoly(v.entries())
}

/// 0 for the zero polynomial, otherwise one past the largest variable with a
/// nonzero coefficient.
pub fn dim_poly(p: &LinPoly) -> usize {
    p.0.keys().next_back().map_or(0, |&v| v + 1)
}

/// Dense coefficient vector of length [`dim_poly`]; trailing zeros are lost.
pub fn lpoly_to_vec(p: &LinPoly) -> Vector {
    (0..dim_poly(p)).map(|i| p.coeff(i)).collect()
}

/// One polynomial per matrix row.
pub fn matrix_to_lpolies(a: &Matrix) -> Vec<LinPoly> {
    a.row_iter().map(list_to_lpoly).collect()
}

/// One matrix row per polynomial, zero-padded to the widest polynomial.
pub fn lpolies_to_matrix(ps: &[LinPoly]) -> Matrix {
    let cols = ps.iter().map(dim_poly).max().unwrap_or(0);
    let rows = ps
        .iter()
        .map(|p| (0..cols).map(|j| p.coeff(j)).collect())
        .collect();
    Matrix::from_rows(cols, rows).expect("rows are built with uniform width")
}

pub fn eval_poly(p: &LinPoly, asgn: &Assignment) -> Rational {
    p.eval(asgn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use proptest::prelude::*;

    fn poly(terms: &[(Var, Rational)]) -> LinPoly {
        terms.iter().cloned().collect()
    }

    fn asgn(vals: &[(Var, Rational)]) -> Assignment {
        vals.iter().cloned().collect()
    }

    #[test]
    fn monom_examples() {
        assert_eq!(monom(int(5), 2), poly(&[(2, int(5))]));
        assert!(monom(int(0), 7).is_zero());
        assert_eq!(monom(rat(-1, 2), 0).coeff(0), rat(-1, 2));
    }

    #[test]
    fn list_and_vec_conversions() {
        assert!(list_to_lpoly(&[]).is_zero());
        assert_eq!(list_to_lpoly(&[int(0), int(3)]), poly(&[(1, int(3))]));
        let objective = poly(&[(0, int(7)), (1, int(1))]);
        assert_eq!(list_to_lpoly(&[int(7), int(1)]), objective);
        assert!(vec_to_lpoly(&Vector::zeros(3)).is_zero());
        assert_eq!(vec_to_lpoly(&Vector::from_ints(&[7, 1])), objective);
        assert_eq!(
            vec_to_lpoly(&Vector::from_ints(&[0, 0, 5])),
            poly(&[(2, int(5))])
        );
    }

    #[test]
    fn dim_poly_examples() {
        assert_eq!(dim_poly(&LinPoly::zero()), 0);
        assert_eq!(dim_poly(&poly(&[(2, int(5))])), 3);
        assert_eq!(dim_poly(&poly(&[(0, int(1)), (4, int(-1))])), 5);
    }

    #[test]
    fn lpoly_to_vec_examples() {
        assert_eq!(lpoly_to_vec(&LinPoly::zero()).dim(), 0);
        assert_eq!(
            lpoly_to_vec(&poly(&[(0, int(7)), (1, int(1))])),
            Vector::from_ints(&[7, 1])
        );
        assert_eq!(
            lpoly_to_vec(&poly(&[(1, int(3))])),
            Vector::from_ints(&[0, 3])
        );
    }

    #[test]
    fn matrix_bridge_examples() {
        assert_eq!(
            matrix_to_lpolies(&Matrix::zeros(2, 2)),
            vec![LinPoly::zero(), LinPoly::zero()]
        );
        let m = Matrix::from_int_rows(&[&[2, 1], &[-1, 2]]);
        let ps = vec![
            poly(&[(0, int(2)), (1, int(1))]),
            poly(&[(0, int(-1)), (1, int(2))]),
        ];
        assert_eq!(matrix_to_lpolies(&m), ps);
        assert!(matrix_to_lpolies(&Matrix::zeros(0, 3)).is_empty());

        let empty = lpolies_to_matrix(&[]);
        assert_eq!((empty.rows(), empty.cols()), (0, 0));
        assert_eq!(lpolies_to_matrix(&ps), m);

        let ragged = [poly(&[(1, int(3))]), LinPoly::zero()];
        let padded = lpolies_to_matrix(&ragged);
        assert_eq!(padded, Matrix::from_int_rows(&[&[0, 3], &[0, 0]]));
        for (i, p) in ragged.iter().enumerate() {
            for j in 0..padded.cols() {
                assert_eq!(padded[(i, j)], p.coeff(j));
            }
        }
    }

    #[test]
    fn eval_examples() {
        let at_optimum = asgn(&[(0, int(2)), (1, int(1))]);
        assert_eq!(eval_poly(&LinPoly::zero(), &at_optimum), int(0));
        assert_eq!(
            eval_poly(&poly(&[(0, int(7)), (1, int(1))]), &at_optimum),
            int(15)
        );
        assert_eq!(
            eval_poly(&poly(&[(0, int(2)), (1, int(1))]), &at_optimum),
            int(5)
        );
        // missing variables read as zero
        assert_eq!(eval_poly(&poly(&[(9, int(4))]), &at_optimum), int(0));
    }

    #[test]
    fn display() {
        assert_eq!(LinPoly::zero().to_string(), "0");
        let p = poly(&[(0, int(2)), (1, int(-1)), (2, rat(1, 2)), (3, int(1))]);
        assert_eq!(p.to_string(), "2*x0 - x1 + 1/2*x2 + x3");
        assert_eq!(poly(&[(4, int(-1))]).to_string(), "-x4");
    }

    #[test]
    fn add_term_cancels() {
        let mut p = poly(&[(0, int(1))]);
        p.add_term(0, int(-1));
        assert!(p.is_zero());
        assert_eq!(p, LinPoly::zero());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        prop_oneof![
            Just(int(0)),
            (-5i64..=5, 1i64..=3).prop_map(|(n, d)| rat(n, d))
        ]
    }

    fn arb_vector() -> impl Strategy<Value = Vector> {
        prop::collection::vec(small_rat(), 0..=8).prop_map(Vector::new)
    }

    fn arb_poly() -> impl Strategy<Value = LinPoly> {
        prop::collection::vec((0usize..8, small_rat()), 0..6)
            .prop_map(|ts| ts.into_iter().collect())
    }

    proptest! {
        #[test]
        fn lpoly_roundtrip(p in arb_poly()) {
            prop_assert_eq!(vec_to_lpoly(&lpoly_to_vec(&p)), p);
        }

        #[test]
        fn vec_roundtrip_almost(v in arb_vector()) {
            let p = vec_to_lpoly(&v);
            let back = lpoly_to_vec(&p);
            prop_assert!(back.dim() <= v.dim());
            for i in 0..v.dim() {
                prop_assert_eq!(&p.coeff(i), &v[i]);
                if i < back.dim() {
                    prop_assert_eq!(&back[i], &v[i]);
                }
            }
        }

        #[test]
        fn coeff_vanishes_past_dim(p in arb_poly(), extra in 0usize..5) {
            prop_assert!(p.coeff(dim_poly(&p) + extra).is_zero());
        }

        #[test]
        fn uniform_lpolies_roundtrip(rows in prop::collection::vec(prop::collection::vec(small_rat(), 4), 0..5)) {
            // force a nonzero last coefficient so every polynomial has dim 4
            let ps: Vec<LinPoly> = rows
                .into_iter()
                .map(|mut r| {
                    r[3] = int(1);
                    list_to_lpoly(&r)
                })
                .collect();
            prop_assert_eq!(matrix_to_lpolies(&lpolies_to_matrix(&ps)), ps);
        }
    }
}
