//! Exact linear programming over the rationals.
//!
//! Problems are in equality form: maximize `c·x` subject to `A x = b`,
//! `x ≥ 0`. The solver is a two-phase revised simplex with Bland's rule,
//! running entirely in exact arithmetic. An optional floating-point pass
//! (HiGHS) can propose a starting basis; the exact solver re-derives
//! everything from it, so the float pass never influences a released value.

mod float;
mod lu;
mod simplex;
mod verify;

use std::fmt;
use std::time::Instant;

use crate::rational::Rational;

use self::simplex::Engine;

pub use self::verify::{check_solution, verify_solution};

/// One equality constraint `Σ coeff·x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    rows: Vec<Row>,
    objective: Vec<(usize, Rational)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Present iff `status` is `Optimal`.
    pub optimum: Option<Rational>,
    /// Nonzero variable values, sorted by index.
    pub assignment: Vec<(usize, Rational)>,
    /// Basic variables. An index `num_vars + i` is the artificial variable of
    /// row `i`. It is always at value zero: either the row is linearly
    /// dependent on the others or the artificial stayed basic through a
    /// degenerate optimum.
    pub basis: Vec<usize>,
    /// Exact simplex pivots performed.
    pub pivots: usize,
}

impl LpSolution {
    pub fn value(&self, var: usize) -> Rational {
        self.assignment
            .binary_search_by_key(&var, |(j, _)| *j)
            .map(|k| self.assignment[k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            rows: Vec::new(),
            objective: Vec::new(),
        }
    }

    /// Adds `Σ coeff·x = rhs`. Repeated indices are summed and zero
    /// coefficients dropped.
    pub fn add_row(&mut self, coeffs: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational) {
        let coeffs = self.normalize(coeffs);
        self.rows.push(Row { coeffs, rhs });
    }

    pub fn set_objective(&mut self, coeffs: impl IntoIterator<Item = (usize, Rational)>) {
        self.objective = self.normalize(coeffs);
    }

    fn normalize(
        &self,
        coeffs: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Vec<(usize, Rational)> {
        let mut v: Vec<(usize, Rational)> = coeffs.into_iter().collect();
        for (j, _) in &v {
            assert!(*j < self.num_vars, "variable {j} out of range");
        }
        v.sort_by_key(|(j, _)| *j);
        let mut out: Vec<(usize, Rational)> = Vec::with_capacity(v.len());
        for (j, c) in v {
            match out.last_mut() {
                Some((k, acc)) if *k == j => *acc += c,
                _ => out.push((j, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        out
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective(&self) -> &[(usize, Rational)] {
        &self.objective
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(|r| r.coeffs.len()).sum()
    }

    /// Column-major copy of the constraint matrix.
    pub(crate) fn columns(&self) -> Vec<Vec<(usize, Rational)>> {
        let mut cols = vec![Vec::new(); self.num_vars];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in &row.coeffs {
                cols[*j].push((i, c.clone()));
            }
        }
        cols
    }

    pub(crate) fn dense_objective(&self) -> Vec<Rational> {
        let mut c = vec![Rational::zero(); self.num_vars];
        for (j, v) in &self.objective {
            c[*j] = v.clone();
        }
        c
    }
}

/// Solves `lp` exactly from the all-artificial basis.
pub fn solve_max(lp: &LinearProgram) -> LpSolution {
    solve_max_guided(lp, None)
}

/// Solves `lp` exactly, starting from `hint` when it describes a usable
/// basis. Invalid, dependent or infeasible hints are repaired or discarded;
/// the optimum never depends on the hint.
pub fn solve_max_guided(lp: &LinearProgram, hint: Option<&[usize]>) -> LpSolution {
    solve_until(lp, hint, None).expect("no deadline was set")
}

/// The solve was abandoned at its deadline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeadlineExceeded;

/// [`solve_max_guided`] that gives up once `deadline` has passed.
pub fn solve_until(
    lp: &LinearProgram,
    hint: Option<&[usize]>,
    deadline: Option<Instant>,
) -> Result<LpSolution, DeadlineExceeded> {
    let mut engine = Engine::new(lp).with_deadline(deadline);
    let raw = engine.run(hint);
    if raw.timed_out {
        return Err(DeadlineExceeded);
    }
    let optimum = (raw.status == LpStatus::Optimal).then(|| {
        let c = lp.dense_objective();
        raw.values.iter().map(|(j, v)| &c[*j] * v).sum()
    });
    Ok(LpSolution {
        status: raw.status,
        optimum,
        assignment: raw.values,
        basis: raw.basis,
        pivots: raw.pivots,
    })
}

/// Solves `lp` in floating point and returns the final basis (`n + i` for
/// the slack of row `i`), or `None` if no optimum was found. The result is
/// only a hint.
pub fn approximate_basis(lp: &LinearProgram) -> Option<Vec<usize>> {
    approximate_basis_until(lp, None)
}

pub fn approximate_basis_until(
    lp: &LinearProgram,
    deadline: Option<Instant>,
) -> Option<Vec<usize>> {
    float::highs_basis(lp, deadline)
}

/// Float pass followed by exact re-derivation from the float basis.
pub fn solve_max_float_guided(lp: &LinearProgram) -> LpSolution {
    let hint = approximate_basis(lp);
    solve_max_guided(lp, hint.as_deref())
}
