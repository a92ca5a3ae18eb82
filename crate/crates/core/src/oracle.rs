//! Brute-force reference procedures for small instances.
//!
//! Nothing here shares code with the simplex: satisfiability is decided by
//! Fourier–Motzkin elimination, and LP optima by enumerating the minimal
//! faces of the feasible polyhedron.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::constraints::{ConstraintNF, Relation};
use crate::linalg::{dot, LinalgError, Matrix, Rational, Vector};
use crate::linpoly::{Assignment, LinPoly, Var};

/// Most variables Fourier–Motzkin will eliminate after equalities have been
/// substituted away.
pub const MAX_FM_VARS: usize = 8;
/// Upper limit on the working set of inequalities during elimination.
pub const MAX_FM_ROWS: usize = 200_000;
pub const MAX_VERTEX_COLS: usize = 4;
pub const MAX_VERTEX_ROWS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{found} variables to eliminate, limit is {limit}")]
    TooManyVariables { found: usize, limit: usize },
    #[error("elimination produced more than {0} inequalities")]
    Blowup(usize),
    #[error("{rows}x{cols} instance exceeds the vertex enumeration limit")]
    TooLarge { rows: usize, cols: usize },
    /// The reconstructed witness violates the input. Exact elimination makes
    /// this unreachable; seeing it means the oracle itself is broken.
    #[error("reconstructed witness does not satisfy the input")]
    WitnessRejected,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub satisfiable: bool,
    /// Satisfies every input constraint exactly; present iff satisfiable.
    pub witness: Option<Assignment>,
}

impl FeasibilityVerdict {
    fn unsat() -> Self {
        FeasibilityVerdict {
            satisfiable: false,
            witness: None,
        }
    }
}

/// `poly ≤ bound`, remembering which starting inequalities it was derived from.
#[derive(Debug, Clone)]
struct Ineq {
    poly: LinPoly,
    bound: Rational,
    history: Vec<usize>,
}

/// `var = expr.0 + expr.1`
struct Substitution {
    var: Var,
    rest: LinPoly,
    constant: Rational,
}

/// The inequalities mentioning `var` just before it was eliminated.
struct Stage {
    var: Var,
    rows: Vec<Ineq>,
}

fn substitute(poly: &LinPoly, bound: &Rational, s: &Substitution) -> (LinPoly, Rational) {
    let mut p = poly.clone();
    match p.remove(s.var) {
        Some(k) => {
            p.add_scaled(&k, &s.rest);
            (p, bound - &k * &s.constant)
        }
        None => (p, bound.clone()),
    }
}

/// Scales `poly ≤ bound` by a positive factor so the leading coefficient is ±1.
fn scale_leading(poly: LinPoly, bound: Rational) -> (LinPoly, Rational) {
    let lead = poly.terms().next().map(|(_, c)| c.abs());
    match lead {
        Some(m) => {
            let k = m.recip();
            (poly.scaled(&k), bound * k)
        }
        None => (poly, bound),
    }
}

fn merge_history(a: &[usize], b: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = a.iter().chain(b).copied().collect();
    set.into_iter().collect()
}

/// Eliminates `remaining` from `rows`; `None` when the rows are infeasible.
/// With `prune` set, Chernikov's rule discards rows built from too many
/// originals. That keeps the row count down but, combined with keeping only
/// the tightest bound per direction, can lose rows the projection needs.
fn eliminate(
    mut rows: Vec<Ineq>,
    mut remaining: BTreeSet<Var>,
    prune: bool,
) -> Result<Option<Assignment>, OracleError> {
    let mut stages: Vec<Stage> = Vec::new();
    let mut eliminated = 0usize;
    loop {
        let mut live = Vec::with_capacity(rows.len());
        for r in rows {
            if r.poly.is_zero() {
                if r.bound.is_negative() {
                    return Ok(None);
                }
            } else {
                live.push(r);
            }
        }
        rows = live;

        // cheapest variable first: fewest generated pairs
        let Some(var) = remaining.iter().copied().min_by_key(|&v| {
            let pos = rows
                .iter()
                .filter(|r| r.poly.coeff(v).is_positive())
                .count();
            let neg = rows
                .iter()
                .filter(|r| r.poly.coeff(v).is_negative())
                .count();
            pos * neg
        }) else {
            break;
        };
        remaining.remove(&var);
        eliminated += 1;

        let (touching, untouched): (Vec<Ineq>, Vec<Ineq>) =
            rows.into_iter().partition(|r| !r.poly.coeff(var).is_zero());
        let (pos, neg): (Vec<&Ineq>, Vec<&Ineq>) = touching
            .iter()
            .partition(|r| r.poly.coeff(var).is_positive());

        let mut next: HashMap<LinPoly, Ineq> = HashMap::new();
        let keep = |r: Ineq, next: &mut HashMap<LinPoly, Ineq>| {
            // Chernikov: after k eliminations, anything built from more than
            // k + 1 originals is redundant.
            if prune && r.history.len() > eliminated + 1 {
                return;
            }
            let (poly, bound) = scale_leading(r.poly, r.bound);
            let r = Ineq {
                poly,
                bound,
                history: r.history,
            };
            match next.entry(r.poly.clone()) {
                Entry::Vacant(e) => {
                    e.insert(r);
                }
                Entry::Occupied(mut e) => {
                    let cur = e.get();
                    if r.bound < cur.bound
                        || (r.bound == cur.bound && r.history.len() < cur.history.len())
                    {
                        e.insert(r);
                    }
                }
            }
        };
        for r in untouched {
            keep(r, &mut next);
        }
        for p in &pos {
            let a = p.poly.coeff(var);
            for n in &neg {
                let c = -n.poly.coeff(var);
                let mut poly = p.poly.scaled(&c);
                poly.add_scaled(&a, &n.poly);
                debug_assert!(poly.coeff(var).is_zero());
                let bound = &p.bound * &c + &n.bound * &a;
                keep(
                    Ineq {
                        poly,
                        bound,
                        history: merge_history(&p.history, &n.history),
                    },
                    &mut next,
                );
                if next.len() > MAX_FM_ROWS {
                    return Err(OracleError::Blowup(MAX_FM_ROWS));
                }
            }
        }
        stages.push(Stage {
            var,
            rows: touching,
        });
        rows = next.into_values().collect();
    }

    let mut witness = Assignment::new();
    for stage in stages.iter().rev() {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for r in &stage.rows {
            let a = r.poly.coeff(stage.var);
            let mut rest = r.poly.clone();
            rest.remove(stage.var);
            let limit = (&r.bound - rest.eval(&witness)) / &a;
            if a.is_positive() {
                hi = Some(hi.map_or(limit.clone(), |h| h.min(limit)));
            } else {
                lo = Some(lo.map_or(limit.clone(), |l| l.max(limit)));
            }
        }
        let zero = Rational::zero();
        let value = match (lo, hi) {
            (Some(l), _) if l > zero => l,
            (_, Some(h)) if h < zero => h,
            _ => zero,
        };
        witness.insert(stage.var, value);
    }
    Ok(Some(witness))
}

fn substituted_holds(rows: &[Ineq], witness: &Assignment) -> bool {
    rows.iter().all(|r| r.poly.eval(witness) <= r.bound)
}

/// Decides satisfiability exactly by substituting equalities and then
/// eliminating the remaining variables one at a time. A witness is rebuilt by
/// back-substitution.
pub fn fm_satisfiable(cs: &[ConstraintNF]) -> Result<FeasibilityVerdict, OracleError> {
    let all_vars: BTreeSet<Var> = cs.iter().flat_map(|c| c.poly.vars()).collect();

    let mut eqs: Vec<(LinPoly, Rational)> = Vec::new();
    let mut ineqs: Vec<(LinPoly, Rational)> = Vec::new();
    for c in cs {
        match c.rel {
            Relation::Leq => ineqs.push((c.poly.clone(), c.bound.clone())),
            Relation::Geq => ineqs.push((c.poly.scaled(&-Rational::one()), -&c.bound)),
            Relation::Eq => eqs.push((c.poly.clone(), c.bound.clone())),
        }
    }

    let mut subs: Vec<Substitution> = Vec::new();
    while let Some((poly, bound)) = eqs.pop() {
        let Some((var, a)) = poly.terms().next().map(|(v, a)| (v, a.clone())) else {
            if !bound.is_zero() {
                return Ok(FeasibilityVerdict::unsat());
            }
            continue;
        };
        let mut rest = poly.clone();
        rest.remove(var);
        let inv = a.recip();
        let s = Substitution {
            var,
            rest: rest.scaled(&-&inv),
            constant: bound * inv,
        };
        for (p, b) in eqs.iter_mut().chain(ineqs.iter_mut()) {
            let (np, nb) = substitute(p, b, &s);
            *p = np;
            *b = nb;
        }
        subs.push(s);
    }

    let rows: Vec<Ineq> = ineqs
        .into_iter()
        .enumerate()
        .map(|(i, (poly, bound))| Ineq {
            poly,
            bound,
            history: vec![i],
        })
        .collect();

    let remaining: BTreeSet<Var> = rows.iter().flat_map(|r| r.poly.vars()).collect();
    if remaining.len() > MAX_FM_VARS {
        return Err(OracleError::TooManyVariables {
            found: remaining.len(),
            limit: MAX_FM_VARS,
        });
    }

    let mut witness = match eliminate(rows.clone(), remaining.clone(), true)? {
        Some(w) => w,
        None => return Ok(FeasibilityVerdict::unsat()),
    };
    if !substituted_holds(&rows, &witness) {
        // pruning only ever drops rows, so an unsat answer is final; a bad
        // witness means the projection was too loose and is redone exactly
        witness = match eliminate(rows, remaining, false)? {
            Some(w) => w,
            None => return Ok(FeasibilityVerdict::unsat()),
        };
    }
    for s in subs.iter().rev() {
        let v = s.rest.eval(&witness) + &s.constant;
        witness.insert(s.var, v);
    }
    for v in all_vars {
        witness.entry(v).or_insert_with(Rational::zero);
    }
    if !cs.iter().all(|c| c.is_satisfied_by(&witness)) {
        return Err(OracleError::WitnessRejected);
    }
    Ok(FeasibilityVerdict {
        satisfiable: true,
        witness: Some(witness),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, point: Vector },
}

fn primal_rows(a: &Matrix, b: &Vector) -> Vec<ConstraintNF> {
    a.row_iter()
        .zip(b.iter())
        .map(|(row, bi)| {
            ConstraintNF::new(
                crate::linpoly::list_to_lpoly(row),
                Relation::Leq,
                bi.clone(),
            )
        })
        .collect()
}

/// Row-reduces `m` in place; returns the pivot column of each nonzero row.
fn row_reduce(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let k = m[i][col].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row) {
                    *x -= &k * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

fn rank(a: &Matrix) -> usize {
    let mut m: Vec<Vec<Rational>> = a.row_iter().map(<[Rational]>::to_vec).collect();
    row_reduce(&mut m, a.cols()).len()
}

/// Solves `A_S·x = b_S` for the rows in `subset` when those rows are linearly
/// independent; free variables are set to zero.
fn face_point(a: &Matrix, b: &Vector, subset: &[usize]) -> Option<Vector> {
    let n = a.cols();
    let mut m: Vec<Vec<Rational>> = subset
        .iter()
        .map(|&i| {
            let mut row = a.row_iter().nth(i).expect("row index").to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut m, n);
    if pivots.len() < subset.len() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &col) in m.iter().zip(&pivots) {
        x[col] = row[n].clone();
    }
    Some(Vector::new(x))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Maximizes `c·x` over `A·x ≤ b` by brute force.
///
/// Feasibility and unboundedness (a direction `d` with `A·d ≤ 0`, `c·d ≥ 1`)
/// are decided by Fourier–Motzkin. A bounded feasible LP attains its optimum
/// on a minimal face, which is cut out by `rank(A)` independent tight rows;
/// every such choice of rows is tried.
pub fn vertex_optimum(a: &Matrix, b: &Vector, c: &Vector) -> Result<VertexOutcome, OracleError> {
    if b.dim() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "vertex_optimum rhs",
            left: b.dim(),
            right: a.rows(),
        }
        .into());
    }
    if c.dim() != a.cols() {
        return Err(LinalgError::DimensionMismatch {
            op: "vertex_optimum objective",
            left: c.dim(),
            right: a.cols(),
        }
        .into());
    }
    if a.cols() > MAX_VERTEX_COLS || a.rows() > MAX_VERTEX_ROWS {
        return Err(OracleError::TooLarge {
            rows: a.rows(),
            cols: a.cols(),
        });
    }

    if !fm_satisfiable(&primal_rows(a, b))?.satisfiable {
        return Ok(VertexOutcome::Infeasible);
    }

    let mut cone = primal_rows(a, &Vector::zeros(a.rows()));
    cone.push(ConstraintNF::new(
        crate::linpoly::vec_to_lpoly(c),
        Relation::Geq,
        Rational::one(),
    ));
    if fm_satisfiable(&cone)?.satisfiable {
        return Ok(VertexOutcome::Unbounded);
    }

    let r = rank(a);
    let mut best: Option<(Rational, Vector)> = None;
    for subset in combinations(a.rows(), r) {
        let Some(x) = face_point(a, b, &subset) else {
            continue;
        };
        let ax = crate::linalg::mat_vec(a, &x)?;
        if !ax.le_pointwise(b)? {
            continue;
        }
        let value = dot(c, &x)?;
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, x));
        }
    }
    let (value, point) = best.expect("a feasible bounded LP has an optimal face");
    Ok(VertexOutcome::Optimal { value, point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::build_system;
    use crate::linalg::{int, rat};

    fn nf(terms: &[(Var, i64)], rel: Relation, bound: Rational) -> ConstraintNF {
        ConstraintNF::new(
            terms.iter().map(|&(v, c)| (v, int(c))).collect(),
            rel,
            bound,
        )
    }

    fn example() -> (Matrix, Vector, Vector) {
        let a = Matrix::from_rows(
            2,
            vec![
                vec![int(2), int(1)],
                vec![int(-1), int(2)],
                vec![rat(1, 2), rat(-1, 2)],
                vec![int(-1), int(-1)],
            ],
        )
        .unwrap();
        let b = Vector::new(vec![int(5), int(2), rat(1, 2), int(-1)]);
        (a, b, Vector::from_ints(&[7, 1]))
    }

    #[test]
    fn fm_witness_on_pruned_system() {
        let a = Matrix::from_rows(
            2,
            vec![
                vec![int(-1), rat(-1, 3)],
                vec![rat(-3, 2), int(-1)],
                vec![rat(-3, 2), int(-2)],
                vec![int(0), rat(1, 2)],
                vec![int(1), rat(1, 3)],
                vec![int(3), int(-1)],
            ],
        )
        .unwrap();
        let b = Vector::new(vec![
            rat(2, 3),
            int(1),
            int(-1),
            rat(3, 2),
            rat(10, 3),
            int(-1),
        ]);
        let primal = primal_rows(&a, &b);
        let v = fm_satisfiable(&primal).unwrap();
        assert!(v.satisfiable);
        let mut cone = primal_rows(&a, &Vector::zeros(6));
        cone.push(ConstraintNF::new(
            crate::linpoly::vec_to_lpoly(&Vector::new(vec![rat(-1, 2), int(-1)])),
            Relation::Geq,
            Rational::one(),
        ));
        assert!(!fm_satisfiable(&cone).unwrap().satisfiable);
    }

    #[test]
    fn fm_trivial_cases() {
        let v = fm_satisfiable(&[]).unwrap();
        assert!(v.satisfiable);
        assert_eq!(v.witness, Some(Assignment::new()));

        let v = fm_satisfiable(&[
            nf(&[(0, 1)], Relation::Leq, int(0)),
            nf(&[(0, 1)], Relation::Geq, int(1)),
        ])
        .unwrap();
        assert!(!v.satisfiable);
        assert!(v.witness.is_none());
    }

    #[test]
    fn fm_example_system_is_sat() {
        let (a, b, c) = example();
        let cs: Vec<_> = build_system(&a, &b, &c)
            .unwrap()
            .iter()
            .map(|k| k.normalize())
            .collect();
        let v = fm_satisfiable(&cs).unwrap();
        assert!(v.satisfiable);
        let w = v.witness.unwrap();
        assert!(cs.iter().all(|k| k.is_satisfied_by(&w)));
        // every model of the combined system is optimal
        assert_eq!(w[&0], int(2));
        assert_eq!(w[&1], int(1));
    }

    #[test]
    fn fm_equalities() {
        // x0 + x1 = 3, x0 - x1 = 1, x0 >= 2  ->  x0 = 2, x1 = 1
        let cs = [
            nf(&[(0, 1), (1, 1)], Relation::Eq, int(3)),
            nf(&[(0, 1), (1, -1)], Relation::Eq, int(1)),
            nf(&[(0, 1)], Relation::Geq, int(2)),
        ];
        let v = fm_satisfiable(&cs).unwrap();
        let w = v.witness.unwrap();
        assert_eq!((w[&0].clone(), w[&1].clone()), (int(2), int(1)));

        let bad = [
            nf(&[(0, 1), (1, 1)], Relation::Eq, int(3)),
            nf(&[(0, 2), (1, 2)], Relation::Eq, int(5)),
        ];
        assert!(!fm_satisfiable(&bad).unwrap().satisfiable);
    }

    #[test]
    fn fm_needs_combination() {
        // x0 + x1 <= 1, x0 - x1 >= 2, x1 >= 0 forces x0 >= 2 and x0 <= 1
        let cs = [
            nf(&[(0, 1), (1, 1)], Relation::Leq, int(1)),
            nf(&[(0, 1), (1, -1)], Relation::Geq, int(2)),
            nf(&[(1, 1)], Relation::Geq, int(0)),
        ];
        assert!(!fm_satisfiable(&cs).unwrap().satisfiable);
    }

    #[test]
    fn fm_variable_guard() {
        let cs: Vec<_> = (0..=MAX_FM_VARS)
            .map(|v| nf(&[(v, 1)], Relation::Geq, int(0)))
            .collect();
        assert_eq!(
            fm_satisfiable(&cs),
            Err(OracleError::TooManyVariables {
                found: MAX_FM_VARS + 1,
                limit: MAX_FM_VARS
            })
        );
    }

    #[test]
    fn vertex_examples() {
        let (a, b, c) = example();
        assert_eq!(
            vertex_optimum(&a, &b, &c).unwrap(),
            VertexOutcome::Optimal {
                value: int(15),
                point: Vector::from_ints(&[2, 1])
            }
        );
        assert_eq!(
            vertex_optimum(
                &Matrix::zeros(1, 1),
                &Vector::from_ints(&[-1]),
                &Vector::zeros(1)
            )
            .unwrap(),
            VertexOutcome::Infeasible
        );
        assert_eq!(
            vertex_optimum(
                &Matrix::from_int_rows(&[&[-1]]),
                &Vector::zeros(1),
                &Vector::from_ints(&[1])
            )
            .unwrap(),
            VertexOutcome::Unbounded
        );
    }

    #[test]
    fn vertex_with_lineality() {
        // max x0 s.t. x0 <= 3; x1 free and absent from the objective
        let a = Matrix::from_int_rows(&[&[1, 0]]);
        let out =
            vertex_optimum(&a, &Vector::from_ints(&[3]), &Vector::from_ints(&[1, 0])).unwrap();
        assert_eq!(
            out,
            VertexOutcome::Optimal {
                value: int(3),
                point: Vector::from_ints(&[3, 0])
            }
        );
        // no rows at all, zero objective
        let out =
            vertex_optimum(&Matrix::zeros(0, 2), &Vector::default(), &Vector::zeros(2)).unwrap();
        assert_eq!(
            out,
            VertexOutcome::Optimal {
                value: int(0),
                point: Vector::zeros(2)
            }
        );
        let out = vertex_optimum(
            &Matrix::zeros(0, 1),
            &Vector::default(),
            &Vector::from_ints(&[1]),
        )
        .unwrap();
        assert_eq!(out, VertexOutcome::Unbounded);
    }

    #[test]
    fn vertex_guards() {
        let a = Matrix::zeros(11, 1);
        assert!(matches!(
            vertex_optimum(&a, &Vector::zeros(11), &Vector::zeros(1)),
            Err(OracleError::TooLarge { .. })
        ));
        assert!(matches!(
            vertex_optimum(&Matrix::zeros(1, 1), &Vector::zeros(2), &Vector::zeros(1)),
            Err(OracleError::Linalg(_))
        ));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
