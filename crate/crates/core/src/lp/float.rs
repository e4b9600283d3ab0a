//! Floating-point guidance. HiGHS solves the program approximately and
//! reports its final basis; nothing it computes is trusted beyond that.

use std::num::NonZeroU32;
use std::time::Instant;

use highs::{ColProblem, HighsModelStatus, Sense};
use highs_sys::{kHighsBasisStatusBasic, HighsInt, Highs_getBasis};

use super::LinearProgram;

/// The basis of an approximate optimum, as variable indices with `n + i`
/// standing for the slack of row `i`. `None` if the float solve did not
/// finish at an optimum before `deadline`.
pub(crate) fn highs_basis(lp: &LinearProgram, deadline: Option<Instant>) -> Option<Vec<usize>> {
    let n = lp.num_vars();
    let m = lp.num_rows();
    if n == 0 || m == 0 {
        return None;
    }
    let mut problem = ColProblem::default();
    let rows: Vec<_> = lp
        .rows()
        .iter()
        .map(|r| {
            let rhs = r.rhs.to_f64();
            problem.add_row(rhs..=rhs)
        })
        .collect();
    let objective = lp.dense_objective();
    for (j, col) in lp.columns().iter().enumerate() {
        let entries: Vec<_> = col.iter().map(|(i, a)| (rows[*i], a.to_f64())).collect();
        problem.add_column(objective[j].to_f64(), 0.0.., entries);
    }

    let mut model = problem.try_optimise(Sense::Maximise).ok()?;
    model.make_quiet();
    model.set_threads(NonZeroU32::MIN);
    if let Some(deadline) = deadline {
        let left = deadline
            .saturating_duration_since(Instant::now())
            .as_secs_f64();
        model.set_option("time_limit", left.max(1e-3));
    }
    let mut solved = model.try_solve().ok()?;
    if solved.status() != HighsModelStatus::Optimal {
        return None;
    }

    let mut col_status: Vec<HighsInt> = vec![0; n];
    let mut row_status: Vec<HighsInt> = vec![0; m];
    // SAFETY: the buffers have the model's column and row counts.
    let status = unsafe {
        Highs_getBasis(
            solved.as_mut_ptr(),
            col_status.as_mut_ptr(),
            row_status.as_mut_ptr(),
        )
    };
    if status < 0 {
        return None;
    }
    let basic = kHighsBasisStatusBasic as HighsInt;
    let basis: Vec<usize> = (0..n)
        .filter(|&j| col_status[j] == basic)
        .chain((0..m).filter(|&i| row_status[i] == basic).map(|i| n + i))
        .collect();
    Some(basis)
}
