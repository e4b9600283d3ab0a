//! The linear program over piece multiplicities.
//!
//! With the degree normalized to one, an admissible surface in normal form
//! has `B = L/2` bands (`L` the weighted chain length) and its polygon region
//! has Euler characteristic `Σ_P x_P (1 − d_P/2)`, where `d_P` counts dummy
//! diagonals. Hence `−χ = B − Σ_P x_P (1 − d_P/2)` and
//! `scl = L/4 − max/2`.

use std::collections::BTreeMap;

use super::graph::{Edge, GapGraph};
use super::pieces::Piece;
use crate::lp::LinearProgram;
use crate::rational::Rational;
use crate::word::Chain;

/// What each LP row means.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    /// Uses of band arc `(p, q)` equal uses of `(q, p)`; `p < q`.
    BandPair { p: usize, q: usize },
    /// Uses of dummy `g → h` equal uses of `h → g`; `g < h`.
    DummyPair { g: usize, h: usize },
    /// Band ends at position `p` sum to the coefficient of its term.
    Coverage { p: usize },
}

#[derive(Clone, Debug)]
pub struct SclProgram {
    pub lp: LinearProgram,
    pub rows: Vec<RowKind>,
}

/// Objective weight of a piece: its share of the polygon region's Euler
/// characteristic.
pub fn piece_weight(piece: &Piece) -> Rational {
    Rational::one() - Rational::new(piece.dummy_count() as i64, 2)
}

/// Builds the LP. Rows that are identically zero with zero right-hand side
/// are omitted.
pub fn assemble_lp(g: &GapGraph, pieces: &[Piece], chain: &Chain) -> SclProgram {
    let weighted = chain.weighted_length();
    assert!(
        weighted.is_multiple_of(2),
        "homologically trivial chains have even length"
    );

    let mut band_rows: BTreeMap<(usize, usize), BTreeMap<usize, i64>> = BTreeMap::new();
    let mut dummy_rows: BTreeMap<(usize, usize), BTreeMap<usize, i64>> = BTreeMap::new();
    let mut coverage: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); g.num_positions()];

    for (j, piece) in pieces.iter().enumerate() {
        let mut covered = 0;
        for &e in piece.walk() {
            match e {
                Edge::Band { p, q } => {
                    let (key, sign) = if p < q { ((p, q), 1) } else { ((q, p), -1) };
                    *band_rows.entry(key).or_default().entry(j).or_default() += sign;
                    *coverage[p].entry(j).or_default() += 1;
                    covered += 1;
                }
                Edge::Dummy { from, to } => {
                    let (key, sign) = if from < to {
                        ((from, to), 1)
                    } else {
                        ((to, from), -1)
                    };
                    *dummy_rows.entry(key).or_default().entry(j).or_default() += sign;
                }
            }
        }
        // each band end covers exactly one position, so total coverage is
        // twice the number of bands at every feasible point
        assert_eq!(covered, piece.band_count());
    }

    let mut lp = LinearProgram::new(pieces.len());
    let mut rows = Vec::new();
    let as_coeffs = |m: BTreeMap<usize, i64>| {
        m.into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(j, c)| (j, Rational::from(c)))
            .collect::<Vec<_>>()
    };
    for ((p, q), m) in band_rows {
        let coeffs = as_coeffs(m);
        if !coeffs.is_empty() {
            lp.add_row(coeffs, Rational::zero());
            rows.push(RowKind::BandPair { p, q });
        }
    }
    for ((gap_a, gap_b), m) in dummy_rows {
        let coeffs = as_coeffs(m);
        if !coeffs.is_empty() {
            lp.add_row(coeffs, Rational::zero());
            rows.push(RowKind::DummyPair { g: gap_a, h: gap_b });
        }
    }
    let mut coverage_total = 0u64;
    for (p, m) in coverage.into_iter().enumerate() {
        let term = g.positions()[p].term;
        let coeff = chain.terms()[term].1;
        coverage_total += coeff as u64;
        lp.add_row(as_coeffs(m), Rational::from(coeff as i64));
        rows.push(RowKind::Coverage { p });
    }
    assert_eq!(coverage_total as usize, weighted);

    lp.set_objective(pieces.iter().enumerate().map(|(j, p)| (j, piece_weight(p))));
    SclProgram { lp, rows }
}

/// `scl = L/4 − optimum/2`.
pub fn scl_from_optimum(chain: &Chain, optimum: &Rational) -> Rational {
    Rational::new(chain.weighted_length() as i64, 4) - optimum.clone() * Rational::new(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve_max, LpStatus};
    use crate::scl::pieces::{enumerate_pieces, Mode};
    use crate::word::parse_chain;

    #[test]
    fn commutator_oracle_program() {
        let chain = parse_chain("abAB", 2).unwrap();
        let g = GapGraph::build(&chain).unwrap();
        let pieces = enumerate_pieces(&g, Mode::Oracle).unwrap();
        let prog = assemble_lp(&g, &pieces, &chain);
        assert_eq!(prog.lp.num_vars(), 1);
        let sol = solve_max(&prog.lp);
        assert_eq!(sol.optimum, Some(Rational::one()));
        assert_eq!(sol.value(0), Rational::one());
        assert_eq!(
            scl_from_optimum(&chain, &Rational::one()),
            Rational::new(1, 2)
        );
    }

    #[test]
    fn annulus_program() {
        let chain = parse_chain("a + A", 1).unwrap();
        let g = GapGraph::build(&chain).unwrap();
        let pieces = enumerate_pieces(&g, Mode::Oracle).unwrap();
        let sol = solve_max(&assemble_lp(&g, &pieces, &chain).lp);
        assert_eq!(sol.optimum, Some(Rational::one()));
    }

    #[test]
    fn no_pieces_is_infeasible() {
        let chain = parse_chain("abAB", 2).unwrap();
        let g = GapGraph::build(&chain).unwrap();
        let prog = assemble_lp(&g, &[], &chain);
        assert_eq!(solve_max(&prog.lp).status, LpStatus::Infeasible);
    }
}
