//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use scl_core::lp::LinearProgram;
use scl_core::Rational;

/// Solves `A_S x = b` for the columns in `subset`. `None` unless the
/// columns are independent and the system is consistent.
pub fn basic_solution(a: &[Vec<i64>], b: &[i64], subset: &[usize]) -> Option<Vec<Rational>> {
    let m = a.len();
    let k = subset.len();
    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            subset
                .iter()
                .map(|&j| Rational::from(a[i][j]))
                .chain(std::iter::once(Rational::from(b[i])))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..k {
        let pivot = (rank..m).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(rank, pivot);
        let p = rows[rank][col].clone();
        for entry in rows[rank].iter_mut() {
            *entry = entry.clone() / p.clone();
        }
        for r in 0..m {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=k {
                    let delta = f.clone() * rows[rank][c].clone();
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|c| rows[c][k].clone()).collect())
}

/// The best objective over all basic feasible solutions, or `None` if there
/// are none.
pub fn best_vertex(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> Option<Rational> {
    let n = c.len();
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        if subset.len() > a.len() {
            continue;
        }
        let Some(x) = basic_solution(a, b, &subset) else {
            continue;
        };
        if x.iter().any(Rational::is_negative) {
            continue;
        }
        let value: Rational = subset
            .iter()
            .zip(&x)
            .map(|(&j, v)| Rational::from(c[j]) * v.clone())
            .sum();
        if best.as_ref().is_none_or(|b| value > *b) {
            best = Some(value);
        }
    }
    best
}

pub fn program(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> LinearProgram {
    let mut lp = LinearProgram::new(c.len());
    for (row, rhs) in a.iter().zip(b) {
        lp.add_row(
            row.iter().enumerate().map(|(j, v)| (j, Rational::from(*v))),
            Rational::from(*rhs),
        );
    }
    lp.set_objective(c.iter().enumerate().map(|(j, v)| (j, Rational::from(*v))));
    lp
}

/// A random program whose last variable is a slack in a row bounding the
/// sum of all variables, so it is never unbounded.
pub fn random_bounded(rng: &mut ChaCha8Rng) -> (Vec<Vec<i64>>, Vec<i64>, Vec<i64>) {
    let n = rng.gen_range(2..=6);
    let m = rng.gen_range(1..=n.min(4));
    let mut a: Vec<Vec<i64>> = (0..m - 1)
        .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
        .collect();
    let mut b: Vec<i64> = (0..m - 1).map(|_| rng.gen_range(-4..=6)).collect();
    a.push(vec![1; n]);
    b.push(rng.gen_range(1..=8));
    let c = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
    (a, b, c)
}
