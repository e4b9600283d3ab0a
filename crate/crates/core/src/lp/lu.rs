//! Sparse exact LU factorization of a simplex basis.
//!
//! Gaussian elimination on the basis columns with a Markowitz-style pivot
//! choice: singleton rows and columns first, otherwise the sparsest column
//! and, within it, the sparsest row. Exact arithmetic needs no stability
//! threshold, so the choice only has to limit fill-in.
//!
//! Writing `M` for the product of the elimination steps, `M B = U` where row
//! `r_k` of `U` is supported on the columns pivoted at step `k` or later.
//! Solves with `B` run through `M` and a back substitution in `U`.

use std::collections::{BTreeMap, BTreeSet};

use crate::rational::Rational;

/// One elimination step: subtract `l · v[row]` from `v[i]` for each `(i, l)`.
#[derive(Clone, Debug)]
struct LowerStep {
    row: usize,
    entries: Vec<(usize, Rational)>,
}

/// Row `row` of `U`: its pivot, and the other entries keyed by the basis
/// position (pivot row) of their column.
#[derive(Clone, Debug)]
struct UpperRow {
    row: usize,
    pivot: Rational,
    entries: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Factor {
    lower: Vec<LowerStep>,
    upper: Vec<UpperRow>,
}

/// The outcome of factorizing candidate columns: `owner[r]` is the column
/// index (into the candidate slice) basic at position `r`, or `None` where
/// a unit column had to be supplied because the candidates were dependent.
pub(crate) struct Factorization {
    pub factor: Factor,
    pub owner: Vec<Option<usize>>,
}

/// Factorizes the `m × k` matrix whose columns are `columns` (sparse, by
/// row). Dependent columns are skipped; rows left without a pivot are
/// covered by unit columns.
pub(crate) fn factorize(m: usize, columns: &[Vec<(usize, Rational)>]) -> Factorization {
    let k = columns.len();
    let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); m];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col {
            if !v.is_zero() {
                rows[*r].insert(c, v.clone());
                col_rows[c].insert(*r);
            }
        }
    }
    let mut col_active = vec![true; k];
    let mut row_active = vec![true; m];
    let mut owner: Vec<Option<usize>> = vec![None; m];
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; k];
    let mut lower = Vec::new();
    let mut upper_raw: Vec<(usize, Rational, Vec<(usize, Rational)>)> = Vec::new();

    loop {
        // singleton row: pivoting there creates no fill
        let singleton_row = (0..m).find(|&r| row_active[r] && rows[r].len() == 1);
        let choice = if let Some(r) = singleton_row {
            let c = *rows[r].keys().next().expect("singleton row has an entry");
            Some((r, c))
        } else {
            let mut best_col: Option<usize> = None;
            for c in 0..k {
                if !col_active[c] {
                    continue;
                }
                if col_rows[c].is_empty() {
                    // dependent on the columns already pivoted
                    col_active[c] = false;
                    continue;
                }
                if best_col.is_none_or(|b| col_rows[c].len() < col_rows[b].len()) {
                    best_col = Some(c);
                }
            }
            best_col.map(|c| {
                let r = *col_rows[c]
                    .iter()
                    .min_by_key(|&&r| (rows[r].len(), r))
                    .expect("active column has an entry");
                (r, c)
            })
        };
        let Some((r, c)) = choice else { break };

        let pivot_row = std::mem::take(&mut rows[r]);
        let pivot = pivot_row[&c].clone();
        let mut step = Vec::new();
        let others: Vec<usize> = col_rows[c].iter().copied().filter(|&i| i != r).collect();
        for i in others {
            let l = &rows[i][&c] / &pivot;
            for (j, v) in &pivot_row {
                let entry = rows[i].entry(*j).or_insert_with(Rational::zero);
                *entry -= &l * v;
                if entry.is_zero() {
                    rows[i].remove(j);
                    col_rows[*j].remove(&i);
                } else {
                    col_rows[*j].insert(i);
                }
            }
            step.push((i, l));
        }
        for j in pivot_row.keys() {
            col_rows[*j].remove(&r);
        }
        col_active[c] = false;
        row_active[r] = false;
        owner[r] = Some(c);
        pivot_row_of_col[c] = Some(r);
        if !step.is_empty() {
            lower.push(LowerStep {
                row: r,
                entries: step,
            });
        }
        let rest: Vec<(usize, Rational)> = pivot_row.into_iter().filter(|(j, _)| *j != c).collect();
        upper_raw.push((r, pivot, rest));
    }

    // rows without a pivot get unit columns; they sit after every real
    // pivot and nothing else touches them
    for r in 0..m {
        if row_active[r] {
            upper_raw.push((r, Rational::one(), Vec::new()));
        }
    }
    let upper = upper_raw
        .into_iter()
        .map(|(row, pivot, rest)| UpperRow {
            row,
            pivot,
            // dropped dependent columns are not part of the basis
            entries: rest
                .into_iter()
                .filter_map(|(j, v)| pivot_row_of_col[j].map(|p| (p, v)))
                .collect(),
        })
        .collect();
    Factorization {
        factor: Factor { lower, upper },
        owner,
    }
}

impl Factor {
    /// Overwrites `v` (indexed by row) with `B⁻¹ v` (indexed by position).
    pub fn solve(&self, v: &mut [Rational]) {
        for step in &self.lower {
            if v[step.row].is_zero() {
                continue;
            }
            let pivot_value = v[step.row].clone();
            for (i, l) in &step.entries {
                v[*i] -= l * &pivot_value;
            }
        }
        for u in self.upper.iter().rev() {
            let mut s = std::mem::take(&mut v[u.row]);
            for (p, val) in &u.entries {
                if !v[*p].is_zero() {
                    s -= val * &v[*p];
                }
            }
            v[u.row] = if s.is_zero() { s } else { s / &u.pivot };
        }
    }

    /// Overwrites `u` (indexed by position) with `uᵀ B⁻¹` (indexed by row).
    pub fn solve_transpose(&self, u: &mut [Rational]) {
        for row in &self.upper {
            if u[row.row].is_zero() {
                continue;
            }
            let w = &u[row.row] / &row.pivot;
            for (p, val) in &row.entries {
                u[*p] -= val * &w;
            }
            u[row.row] = w;
        }
        for step in self.lower.iter().rev() {
            let mut acc = std::mem::take(&mut u[step.row]);
            for (i, l) in &step.entries {
                if !u[*i].is_zero() {
                    acc -= l * &u[*i];
                }
            }
            u[step.row] = acc;
        }
    }
}
