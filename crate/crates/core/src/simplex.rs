//! General simplex for satisfiability of linear constraints.
//!
//! Every distinct left-hand polynomial gets a slack variable `s = p`; the
//! input relations become lower/upper bounds on those slacks. The check loop
//! repairs bound violations of basic variables by pivoting with Bland's rule
//! (least-index variable on both sides), which rules out cycling. When a
//! violated row has no variable left to move, the bounds that block it form
//! an unsatisfiable core.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::constraints::{Constraint, Relation};
use crate::linalg::Rational;
use crate::linpoly::{Assignment, LinPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplexResult {
    /// Indices into the input constraint list whose conjunction is infeasible.
    Unsat(Vec<usize>),
    Sat(Assignment),
}

impl SimplexResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SimplexResult::Sat(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("pivot limit of {0} exceeded")]
    PivotLimit(u64),
    #[error("zero coefficient for x{nonbasic} in the row of x{basic}")]
    ZeroPivot { basic: Var, nonbasic: Var },
    #[error("x{0} is not a basic variable")]
    NotBasic(Var),
    #[error("x{0} is not a nonbasic variable")]
    NotNonbasic(Var),
    #[error("x{0} is already present in the tableau")]
    DuplicateVar(Var),
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Abort with [`SimplexError::PivotLimit`] after this many pivots.
    pub max_pivots: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solved {
    pub result: SimplexResult,
    pub pivots: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub value: Rational,
    /// Index of the input constraint that asserted this bound.
    pub origin: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Feasible(Assignment),
    /// `row` is a basic variable that violates a bound and cannot be
    /// repaired; `core` lists the origins of every bound involved.
    Conflict {
        row: Var,
        core: Vec<usize>,
    },
}

/// Bounds-and-tableau state.
///
/// Each basic variable is defined by a row over nonbasic variables. The
/// current assignment is kept consistent with the rows, and nonbasic
/// variables always sit within their bounds.
#[derive(Debug, Clone, Default)]
pub struct Tableau {
    rows: BTreeMap<Var, LinPoly>,
    vars: BTreeSet<Var>,
    values: BTreeMap<Var, Rational>,
    lower: BTreeMap<Var, Bound>,
    upper: BTreeMap<Var, Bound>,
    pivots: u64,
}

impl Tableau {
    pub fn new() -> Self {
        Tableau::default()
    }

    /// Registers a nonbasic variable with value zero.
    pub fn add_var(&mut self, v: Var) {
        self.vars.insert(v);
    }

    /// Adds the definition `basic = row`. `basic` must be fresh and `row` may
    /// only mention nonbasic variables.
    pub fn add_row(&mut self, basic: Var, row: LinPoly) -> Result<(), SimplexError> {
        if self.vars.contains(&basic) {
            return Err(SimplexError::DuplicateVar(basic));
        }
        if let Some(v) = row
            .vars()
            .find(|v| self.rows.contains_key(v) || *v == basic)
        {
            return Err(SimplexError::NotNonbasic(v));
        }
        self.vars.extend(row.vars());
        let value = row.eval(&self.values);
        self.set_value(basic, value);
        self.vars.insert(basic);
        self.rows.insert(basic, row);
        Ok(())
    }

    pub fn is_basic(&self, v: Var) -> bool {
        self.rows.contains_key(&v)
    }

    pub fn row(&self, basic: Var) -> Option<&LinPoly> {
        self.rows.get(&basic)
    }

    pub fn rows(&self) -> impl Iterator<Item = (Var, &LinPoly)> + '_ {
        self.rows.iter().map(|(&v, p)| (v, p))
    }

    pub fn value(&self, v: Var) -> Rational {
        self.values.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn lower(&self, v: Var) -> Option<&Bound> {
        self.lower.get(&v)
    }

    pub fn upper(&self, v: Var) -> Option<&Bound> {
        self.upper.get(&v)
    }

    pub fn pivot_count(&self) -> u64 {
        self.pivots
    }

    /// Values of every registered variable.
    pub fn assignment(&self) -> Assignment {
        self.vars.iter().map(|&v| (v, self.value(v))).collect()
    }

    /// True when every row equation holds under `point`.
    pub fn rows_hold(&self, point: &Assignment) -> bool {
        self.rows.iter().all(|(b, row)| {
            let lhs = point.get(b).cloned().unwrap_or_else(Rational::zero);
            lhs == row.eval(point)
        })
    }

    fn set_value(&mut self, v: Var, value: Rational) {
        if value.is_zero() {
            self.values.remove(&v);
        } else {
            self.values.insert(v, value);
        }
    }

    /// Tightens the lower bound of `v`. Returns the conflicting origins if the
    /// new bound crosses the upper bound.
    pub fn assert_lower(
        &mut self,
        v: Var,
        value: Rational,
        origin: usize,
    ) -> Result<(), Vec<usize>> {
        self.vars.insert(v);
        if let Some(ub) = self.upper.get(&v) {
            if value > ub.value {
                return Err(core_of([origin, ub.origin]));
            }
        }
        if self.lower.get(&v).is_some_and(|lb| lb.value >= value) {
            return Ok(());
        }
        if !self.is_basic(v) && self.value(v) < value {
            self.update(v, value.clone());
        }
        self.lower.insert(v, Bound { value, origin });
        Ok(())
    }

    /// Tightens the upper bound of `v`.
    pub fn assert_upper(
        &mut self,
        v: Var,
        value: Rational,
        origin: usize,
    ) -> Result<(), Vec<usize>> {
        self.vars.insert(v);
        if let Some(lb) = self.lower.get(&v) {
            if value < lb.value {
                return Err(core_of([origin, lb.origin]));
            }
        }
        if self.upper.get(&v).is_some_and(|ub| ub.value <= value) {
            return Ok(());
        }
        if !self.is_basic(v) && self.value(v) > value {
            self.update(v, value.clone());
        }
        self.upper.insert(v, Bound { value, origin });
        Ok(())
    }

    /// Moves nonbasic `v` to `value` and adjusts every basic variable.
    fn update(&mut self, v: Var, value: Rational) {
        let delta = &value - self.value(v);
        let shifts: Vec<(Var, Rational)> = self
            .rows
            .iter()
            .filter_map(|(&b, row)| {
                let a = row.coeff(v);
                (!a.is_zero()).then(|| (b, a * &delta))
            })
            .collect();
        for (b, d) in shifts {
            let nv = self.value(b) + d;
            self.set_value(b, nv);
        }
        self.set_value(v, value);
    }

    /// Swaps the roles of `basic` and `nonbasic`. The assignment is unchanged,
    /// and so is the set of points satisfying the rows.
    pub fn pivot(&mut self, basic: Var, nonbasic: Var) -> Result<(), SimplexError> {
        if !self.is_basic(basic) {
            return Err(SimplexError::NotBasic(basic));
        }
        if self.is_basic(nonbasic) || !self.vars.contains(&nonbasic) {
            return Err(SimplexError::NotNonbasic(nonbasic));
        }
        let a = self.rows[&basic].coeff(nonbasic);
        if a.is_zero() {
            return Err(SimplexError::ZeroPivot { basic, nonbasic });
        }
        let mut old = self.rows.remove(&basic).expect("basic row");
        old.remove(nonbasic);
        // nonbasic = (basic - rest) / a
        let inv = a.recip();
        let mut solved = old.scaled(&-&inv);
        solved.add_term(basic, inv);
        for row in self.rows.values_mut() {
            if let Some(k) = row.remove(nonbasic) {
                row.add_scaled(&k, &solved);
            }
        }
        self.rows.insert(nonbasic, solved);
        self.pivots += 1;
        Ok(())
    }

    fn pivot_and_update(
        &mut self,
        basic: Var,
        nonbasic: Var,
        target: Rational,
    ) -> Result<(), SimplexError> {
        let a = self.rows[&basic].coeff(nonbasic);
        let theta = (&target - self.value(basic)) / &a;
        let new_nb = self.value(nonbasic) + &theta;
        self.update(nonbasic, new_nb);
        self.pivot(basic, nonbasic)
    }

    fn violation(&self) -> Option<(Var, bool)> {
        self.rows.keys().find_map(|&b| {
            let v = self.value(b);
            if self.lower.get(&b).is_some_and(|lb| v < lb.value) {
                Some((b, true))
            } else if self.upper.get(&b).is_some_and(|ub| v > ub.value) {
                Some((b, false))
            } else {
                None
            }
        })
    }

    fn can_increase(&self, v: Var) -> bool {
        self.upper.get(&v).is_none_or(|ub| self.value(v) < ub.value)
    }

    fn can_decrease(&self, v: Var) -> bool {
        self.lower.get(&v).is_none_or(|lb| self.value(v) > lb.value)
    }

    /// Runs the check loop until every variable is within bounds or a
    /// conflicting row is found.
    pub fn check_feasibility(
        &mut self,
        max_pivots: Option<u64>,
    ) -> Result<CheckOutcome, SimplexError> {
        while let Some((b, below)) = self.violation() {
            let row = &self.rows[&b];
            // b must move up when below its lower bound, down otherwise.
            let entering = row.terms().find_map(|(v, a)| {
                let up = a.is_positive() == below;
                let ok = if up {
                    self.can_increase(v)
                } else {
                    self.can_decrease(v)
                };
                ok.then_some(v)
            });
            let Some(nb) = entering else {
                let mut origins = Vec::with_capacity(row.len() + 1);
                let own = if below {
                    &self.lower[&b]
                } else {
                    &self.upper[&b]
                };
                origins.push(own.origin);
                for (v, a) in row.terms() {
                    let blocking = if a.is_positive() == below {
                        &self.upper[&v]
                    } else {
                        &self.lower[&v]
                    };
                    origins.push(blocking.origin);
                }
                return Ok(CheckOutcome::Conflict {
                    row: b,
                    core: core_of(origins),
                });
            };
            if let Some(cap) = max_pivots {
                if self.pivots >= cap {
                    return Err(SimplexError::PivotLimit(cap));
                }
            }
            let target = if below {
                self.lower[&b].value.clone()
            } else {
                self.upper[&b].value.clone()
            };
            self.pivot_and_update(b, nb, target)?;
        }
        Ok(CheckOutcome::Feasible(self.assignment()))
    }
}

fn core_of(origins: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let set: BTreeSet<usize> = origins.into_iter().collect();
    set.into_iter().collect()
}

/// Decides satisfiability of `cs`. Never gives up.
pub fn solve(cs: &[Constraint]) -> SimplexResult {
    solve_with(cs, &SolveOptions::default())
        .expect("no pivot limit set")
        .result
}

pub fn solve_with(cs: &[Constraint], opts: &SolveOptions) -> Result<Solved, SimplexError> {
    let nfs: Vec<_> = cs.iter().map(Constraint::normalize).collect();
    let originals: BTreeSet<Var> = nfs.iter().flat_map(|nf| nf.poly.vars()).collect();
    let mut next_slack = originals.last().map_or(0, |&v| v + 1);

    let mut t = Tableau::new();
    for &v in &originals {
        t.add_var(v);
    }
    let mut slacks: HashMap<LinPoly, Var> = HashMap::new();

    for (i, nf) in nfs.into_iter().enumerate() {
        if nf.poly.is_zero() {
            if !nf.rel.holds(&Rational::zero(), &nf.bound) {
                return Ok(Solved {
                    result: SimplexResult::Unsat(vec![i]),
                    pivots: 0,
                });
            }
            continue;
        }
        let s = match slacks.get(&nf.poly) {
            Some(&s) => s,
            None => {
                let s = next_slack;
                next_slack += 1;
                t.add_row(s, nf.poly.clone())?;
                slacks.insert(nf.poly, s);
                s
            }
        };
        let asserted = match nf.rel {
            Relation::Leq => t.assert_upper(s, nf.bound, i),
            Relation::Geq => t.assert_lower(s, nf.bound, i),
            Relation::Eq => t
                .assert_lower(s, nf.bound.clone(), i)
                .and_then(|()| t.assert_upper(s, nf.bound, i)),
        };
        if let Err(core) = asserted {
            return Ok(Solved {
                result: SimplexResult::Unsat(core),
                pivots: 0,
            });
        }
    }

    let result = match t.check_feasibility(opts.max_pivots)? {
        CheckOutcome::Feasible(all) => SimplexResult::Sat(
            all.into_iter()
                .filter(|(v, _)| originals.contains(v))
                .collect(),
        ),
        CheckOutcome::Conflict { core, .. } => SimplexResult::Unsat(core),
    };
    Ok(Solved {
        result,
        pivots: t.pivot_count(),
    })
}
