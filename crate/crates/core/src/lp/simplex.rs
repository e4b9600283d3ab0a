//! Exact two-phase revised simplex with Bland's rule. The basis is held as a
//! sparse LU factorization followed by a file of eta columns, one per pivot
//! since the last refactorization.

use std::time::Instant;

use super::lu::{self, Factor};
use super::{LinearProgram, LpStatus};
use crate::rational::Rational;

const NOT_BASIC: usize = usize::MAX;

/// Pivots between refactorizations.
const REFACTOR_EVERY: usize = 64;

#[derive(Clone, Debug)]
struct Eta {
    row: usize,
    pivot: Rational,
    /// Off-pivot entries of the entering column, `(row, value)`.
    rest: Vec<(usize, Rational)>,
}

pub(crate) struct RawSolution {
    pub status: LpStatus,
    pub timed_out: bool,
    pub values: Vec<(usize, Rational)>,
    pub basis: Vec<usize>,
    pub pivots: usize,
}

/// Variables `0..n` are structural; `n + i` is the artificial of row `i`.
pub(crate) struct Engine {
    m: usize,
    n: usize,
    cols: Vec<Vec<(usize, Rational)>>,
    b: Vec<Rational>,
    cost: Vec<Rational>,
    basis: Vec<usize>,
    position: Vec<usize>,
    x: Vec<Rational>,
    factor: Factor,
    etas: Vec<Eta>,
    pivots: usize,
    deadline: Option<Instant>,
    timed_out: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

enum Outcome {
    Optimal,
    Unbounded,
    TimedOut,
}

impl Engine {
    /// Rows with negative right-hand side are negated so the all-artificial
    /// basis starts feasible.
    pub fn new(lp: &LinearProgram) -> Self {
        let m = lp.num_rows();
        let n = lp.num_vars();
        let flip: Vec<bool> = lp.rows().iter().map(|r| r.rhs.is_negative()).collect();
        let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
        for (i, row) in lp.rows().iter().enumerate() {
            for (j, c) in &row.coeffs {
                cols[*j].push((i, if flip[i] { -c } else { c.clone() }));
            }
        }
        let b = lp
            .rows()
            .iter()
            .map(|r| {
                if r.rhs.is_negative() {
                    -&r.rhs
                } else {
                    r.rhs.clone()
                }
            })
            .collect();
        Engine {
            m,
            n,
            cols,
            b,
            cost: lp.dense_objective(),
            basis: (n..n + m).collect(),
            position: vec![NOT_BASIC; n].into_iter().chain(0..m).collect(),
            x: Vec::new(),
            factor: Factor::default(),
            etas: Vec::new(),
            pivots: 0,
            deadline: None,
            timed_out: false,
        }
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    fn is_artificial(&self, var: usize) -> bool {
        var >= self.n
    }

    fn column_dense(&self, var: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.m];
        if self.is_artificial(var) {
            v[var - self.n] = Rational::one();
        } else {
            for (i, a) in &self.cols[var] {
                v[*i] = a.clone();
            }
        }
        v
    }

    /// `B⁻¹ v`
    fn ftran(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        self.factor.solve(&mut v);
        for eta in &self.etas {
            if v[eta.row].is_zero() {
                continue;
            }
            let vr = &v[eta.row] / &eta.pivot;
            for (i, d) in &eta.rest {
                v[*i] -= d * &vr;
            }
            v[eta.row] = vr;
        }
        v
    }

    /// `uᵀ B⁻¹`
    fn btran(&self, mut u: Vec<Rational>) -> Vec<Rational> {
        for eta in self.etas.iter().rev() {
            let mut acc = u[eta.row].clone();
            for (i, d) in &eta.rest {
                if !u[*i].is_zero() {
                    acc -= d * &u[*i];
                }
            }
            u[eta.row] = acc / &eta.pivot;
        }
        self.factor.solve_transpose(&mut u);
        u
    }

    fn push_eta(&mut self, d: &[Rational], row: usize) {
        let rest = d
            .iter()
            .enumerate()
            .filter(|(i, v)| *i != row && !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        self.etas.push(Eta {
            row,
            pivot: d[row].clone(),
            rest,
        });
    }

    /// Factorizes a basis built from `candidates`. Dependent candidates are
    /// dropped and their rows covered by artificials.
    fn reinvert(&mut self, candidates: &[usize]) {
        self.etas.clear();
        let mut seen = vec![false; self.n + self.m];
        let mut chosen: Vec<usize> = Vec::new();
        for &v in candidates {
            if v < self.n + self.m && !seen[v] {
                seen[v] = true;
                chosen.push(v);
            }
        }
        let columns: Vec<Vec<(usize, Rational)>> = chosen
            .iter()
            .map(|&v| {
                if self.is_artificial(v) {
                    vec![(v - self.n, Rational::one())]
                } else {
                    self.cols[v].clone()
                }
            })
            .collect();
        let fact = lu::factorize(self.m, &columns);
        self.factor = fact.factor;
        self.position = vec![NOT_BASIC; self.n + self.m];
        self.basis = fact
            .owner
            .iter()
            .enumerate()
            .map(|(r, o)| o.map_or(self.n + r, |c| chosen[c]))
            .collect();
        for (r, &v) in self.basis.iter().enumerate() {
            self.position[v] = r;
        }
        self.x = self.ftran(self.b.clone());
    }

    fn refactor(&mut self) {
        let current = self.basis.clone();
        self.reinvert(&current);
    }

    fn cost_of(&self, var: usize, phase: Phase) -> Rational {
        match (phase, self.is_artificial(var)) {
            (Phase::One, true) => -Rational::one(),
            (Phase::One, false) | (Phase::Two, true) => Rational::zero(),
            (Phase::Two, false) => self.cost[var].clone(),
        }
    }

    fn reduced_cost(&self, j: usize, y: &[Rational], phase: Phase) -> Rational {
        let mut rc = self.cost_of(j, phase);
        for (i, a) in &self.cols[j] {
            if !y[*i].is_zero() {
                rc -= a * &y[*i];
            }
        }
        rc
    }

    /// Bland: the lowest-index structural with positive reduced cost.
    /// Artificials never re-enter.
    fn choose_entering(&self, y: &[Rational], phase: Phase) -> Option<usize> {
        (0..self.n)
            .filter(|&j| self.position[j] == NOT_BASIC)
            .find(|&j| self.reduced_cost(j, y, phase).is_positive())
    }

    /// Minimum ratio, ties to the lowest-index basic variable. An artificial
    /// at zero must stay there, so any nonzero entry in its row blocks the
    /// step outright; after phase one that covers every basic artificial.
    fn choose_leaving(&self, d: &[Rational]) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for r in 0..self.m {
            let blocking = d[r].is_positive()
                || (self.is_artificial(self.basis[r]) && self.x[r].is_zero() && !d[r].is_zero());
            if !blocking {
                continue;
            }
            let ratio = if d[r].is_positive() {
                &self.x[r] / &d[r]
            } else {
                Rational::zero()
            };
            let better = match &best {
                None => true,
                Some((s, best_ratio)) => {
                    ratio < *best_ratio || (ratio == *best_ratio && self.basis[r] < self.basis[*s])
                }
            };
            if better {
                best = Some((r, ratio));
            }
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, entering: usize, r: usize, d: &[Rational]) {
        let theta = &self.x[r] / &d[r];
        if !theta.is_zero() {
            for i in 0..self.m {
                if i != r && !d[i].is_zero() {
                    self.x[i] -= &d[i] * &theta;
                }
            }
        }
        self.x[r] = theta;
        let leaving = self.basis[r];
        self.position[leaving] = NOT_BASIC;
        self.basis[r] = entering;
        self.position[entering] = r;
        self.push_eta(d, r);
        self.pivots += 1;
        if self.etas.len() > REFACTOR_EVERY {
            self.refactor();
        }
    }

    fn iterate(&mut self, phase: Phase) -> Outcome {
        loop {
            if self.deadline.is_some_and(|d| Instant::now() > d) {
                self.timed_out = true;
                return Outcome::TimedOut;
            }
            let cb: Vec<Rational> = self.basis.iter().map(|&v| self.cost_of(v, phase)).collect();
            let y = self.btran(cb);
            let Some(j) = self.choose_entering(&y, phase) else {
                return Outcome::Optimal;
            };
            let d = self.ftran(self.column_dense(j));
            let Some(r) = self.choose_leaving(&d) else {
                return Outcome::Unbounded;
            };
            self.pivot(j, r, &d);
        }
    }

    pub fn run(&mut self, hint: Option<&[usize]>) -> RawSolution {
        self.reinvert(hint.unwrap_or(&[]));
        if self.x.iter().any(Rational::is_negative) {
            self.reinvert(&[]);
        }

        let needs_phase_one =
            (0..self.m).any(|r| self.is_artificial(self.basis[r]) && !self.x[r].is_zero());
        if needs_phase_one {
            match self.iterate(Phase::One) {
                Outcome::Optimal => {}
                Outcome::Unbounded => unreachable!("phase one is bounded"),
                Outcome::TimedOut => return self.finish(LpStatus::Infeasible, false),
            }
            let infeasible =
                (0..self.m).any(|r| self.is_artificial(self.basis[r]) && self.x[r].is_positive());
            if infeasible {
                return self.finish(LpStatus::Infeasible, false);
            }
        }
        match self.iterate(Phase::Two) {
            Outcome::Optimal => self.finish(LpStatus::Optimal, true),
            Outcome::Unbounded => self.finish(LpStatus::Unbounded, false),
            Outcome::TimedOut => self.finish(LpStatus::Infeasible, false),
        }
    }

    fn finish(&mut self, status: LpStatus, with_values: bool) -> RawSolution {
        if with_values {
            // recompute x from a fresh factorization rather than trusting the
            // incremental updates
            self.refactor();
        }
        let mut values: Vec<(usize, Rational)> = if with_values {
            (0..self.m)
                .filter(|&r| !self.is_artificial(self.basis[r]) && !self.x[r].is_zero())
                .map(|r| (self.basis[r], self.x[r].clone()))
                .collect()
        } else {
            Vec::new()
        };
        values.sort_by_key(|(j, _)| *j);
        let mut basis = self.basis.clone();
        basis.sort_unstable();
        RawSolution {
            status,
            timed_out: self.timed_out,
            values,
            basis,
            pivots: self.pivots,
        }
    }
}
