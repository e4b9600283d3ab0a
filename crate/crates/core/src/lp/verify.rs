//! Independent re-verification of an optimal solution.
//!
//! Nothing here shares code with the simplex engine: the dual vector is
//! recovered from the reported basis by plain sparse Gaussian elimination,
//! then primal feasibility, dual feasibility and equal objective values are
//! checked in exact arithmetic.

use std::collections::BTreeMap;

use super::{LinearProgram, LpSolution, LpStatus};
use crate::rational::Rational;

/// True iff `sol` is an exactly feasible, provably optimal solution of `lp`.
pub fn verify_solution(lp: &LinearProgram, sol: &LpSolution) -> bool {
    check_solution(lp, sol).is_ok()
}

/// Like [`verify_solution`], but says which check failed.
pub fn check_solution(lp: &LinearProgram, sol: &LpSolution) -> Result<(), String> {
    if sol.status != LpStatus::Optimal {
        return Err(format!("status is {}", sol.status));
    }
    let optimum = sol
        .optimum
        .as_ref()
        .ok_or("optimal solution without a value")?;
    let n = lp.num_vars();
    let m = lp.num_rows();

    let mut x = vec![Rational::zero(); n];
    for (j, v) in &sol.assignment {
        if *j >= n {
            return Err(format!("assignment index {j} out of range"));
        }
        if v.is_negative() {
            return Err(format!("x[{j}] = {v} is negative"));
        }
        x[*j] = v.clone();
    }
    for (i, row) in lp.rows().iter().enumerate() {
        let lhs: Rational = row.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
        if lhs != row.rhs {
            return Err(format!("row {i}: lhs {lhs} != rhs {}", row.rhs));
        }
    }
    let primal: Rational = lp.objective().iter().map(|(j, c)| c * &x[*j]).sum();
    if &primal != optimum {
        return Err(format!("objective {primal} != reported optimum {optimum}"));
    }

    let mut basis = sol.basis.clone();
    basis.sort_unstable();
    basis.dedup();
    if basis.len() != m || sol.basis.len() != m {
        return Err(format!(
            "basis has {} distinct entries, expected {m}",
            basis.len()
        ));
    }
    if basis.iter().any(|&v| v >= n + m) {
        return Err("basis index out of range".into());
    }
    for (j, v) in &sol.assignment {
        if !v.is_zero() && basis.binary_search(j).is_err() {
            return Err(format!("x[{j}] is nonzero but not basic"));
        }
    }
    let y = basis_duals(lp, &basis).ok_or("basis matrix is singular")?;
    let cols = lp.columns();
    let c = lp.dense_objective();
    for j in 0..n {
        let ya: Rational = cols[j].iter().map(|(i, a)| a * &y[*i]).sum();
        if ya < c[j] {
            return Err(format!(
                "column {j} has positive reduced cost {}",
                &c[j] - &ya
            ));
        }
    }
    let dual: Rational = lp
        .rows()
        .iter()
        .zip(&y)
        .map(|(row, yi)| &row.rhs * yi)
        .sum();
    if &dual != optimum {
        return Err(format!("dual objective {dual} != primal {optimum}"));
    }
    Ok(())
}

/// Solves `yᵀ B = c_B` where `B` holds the basic columns (artificial `n + i`
/// is the unit vector of row `i`, with cost zero).
fn basis_duals(lp: &LinearProgram, basis: &[usize]) -> Option<Vec<Rational>> {
    let n = lp.num_vars();
    let m = lp.num_rows();
    let cols = lp.columns();
    let c = lp.dense_objective();

    let mut eqs: Vec<(BTreeMap<usize, Rational>, Rational)> = basis
        .iter()
        .map(|&v| {
            if v >= n {
                (BTreeMap::from([(v - n, Rational::one())]), Rational::zero())
            } else {
                (cols[v].iter().cloned().collect(), c[v].clone())
            }
        })
        .collect();

    let mut done = vec![false; eqs.len()];
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(m);
    for _ in 0..eqs.len() {
        let k = (0..eqs.len())
            .filter(|&k| !done[k])
            .min_by_key(|&k| (eqs[k].0.len(), k))?;
        let (&var, pivot) = eqs[k].0.iter().next()?;
        let pivot = pivot.clone();
        done[k] = true;
        order.push((k, var));
        let (prow, prhs) = eqs[k].clone();
        for (other, eq) in eqs.iter_mut().enumerate() {
            if done[other] {
                continue;
            }
            let Some(factor) = eq.0.get(&var).cloned() else {
                continue;
            };
            let factor = factor / &pivot;
            for (col, a) in &prow {
                let entry = eq.0.entry(*col).or_insert_with(Rational::zero);
                *entry -= &factor * a;
                if entry.is_zero() {
                    eq.0.remove(col);
                }
            }
            eq.1 -= &factor * &prhs;
        }
    }

    let mut y = vec![Rational::zero(); m];
    for &(k, var) in order.iter().rev() {
        let (row, rhs) = &eqs[k];
        let mut acc = rhs.clone();
        let mut pivot = None;
        for (col, a) in row {
            if *col == var {
                pivot = Some(a);
            } else {
                acc -= a * &y[*col];
            }
        }
        y[var] = acc / pivot?;
    }
    Some(y)
}
