//! The gap graph of a chain.
//!
//! Every letter occurrence of the chain is a *position*; the boundary point
//! between a position and the next one in its term is a *gap*. Gap `p` sits
//! between position `p` and its cyclic successor. A band pairing position `p`
//! with an inverse-letter position `q` is seen from a polygon as a directed
//! arc from the gap before `p` to the gap after `q`.

use serde::Serialize;

use crate::error::SclError;
use crate::word::{is_homologically_trivial, Chain, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Position {
    pub term: usize,
    pub index: usize,
    #[serde(serialize_with = "letter_as_char")]
    pub letter: Letter,
}

fn letter_as_char<S: serde::Serializer>(x: &Letter, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_char(x.to_char())
}

/// A directed edge of the gap graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Edge {
    /// One end of a band joining position `p` to position `q`; runs from the
    /// gap before `p` to the gap after `q`.
    Band { p: usize, q: usize },
    /// A diagonal between two distinct gaps, glued to its reverse.
    Dummy { from: usize, to: usize },
}

impl Edge {
    pub fn is_dummy(self) -> bool {
        matches!(self, Edge::Dummy { .. })
    }
}

#[derive(Clone, Debug)]
pub struct GapGraph {
    positions: Vec<Position>,
    term_start: Vec<usize>,
    /// Band arcs `(p, q)`, sorted.
    band_arcs: Vec<(usize, usize)>,
    /// `band_to[g][h]`: the band arc from gap `g` to gap `h`, if any.
    band_to: Vec<Vec<Option<(usize, usize)>>>,
}

impl GapGraph {
    /// Builds the gap graph of a homologically trivial chain.
    pub fn build(chain: &Chain) -> Result<Self, SclError> {
        if chain.is_empty() {
            return Err(SclError::TrivialWord);
        }
        if !is_homologically_trivial(chain) {
            return Err(SclError::NotHomologicallyTrivial);
        }
        let mut positions = Vec::new();
        let mut term_start = Vec::new();
        for (k, (w, _)) in chain.terms().iter().enumerate() {
            if w.letters().is_empty() {
                return Err(SclError::TrivialWord);
            }
            term_start.push(positions.len());
            for (i, &letter) in w.letters().iter().enumerate() {
                positions.push(Position {
                    term: k,
                    index: i,
                    letter,
                });
            }
        }
        let n = positions.len();
        let mut g = GapGraph {
            positions,
            term_start,
            band_arcs: Vec::new(),
            band_to: vec![vec![None; n]; n],
        };
        for p in 0..n {
            for q in 0..n {
                if g.positions[p].letter == g.positions[q].letter.inverse() {
                    g.band_arcs.push((p, q));
                    let (from, to) = (g.gap_before(p), g.gap_after(q));
                    assert_ne!(from, to, "band arc would bound a monogon");
                    g.band_to[from][to] = Some((p, q));
                }
            }
        }
        Ok(g)
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn num_positions(&self) -> usize {
        self.positions.len()
    }

    /// Gaps are indexed by the position they follow.
    pub fn num_gaps(&self) -> usize {
        self.positions.len()
    }

    pub fn band_arcs(&self) -> &[(usize, usize)] {
        &self.band_arcs
    }

    fn term_len(&self, term: usize) -> usize {
        let start = self.term_start[term];
        let end = self
            .term_start
            .get(term + 1)
            .copied()
            .unwrap_or(self.positions.len());
        end - start
    }

    /// The position following `p` cyclically within its term.
    pub fn next(&self, p: usize) -> usize {
        let pos = self.positions[p];
        self.term_start[pos.term] + (pos.index + 1) % self.term_len(pos.term)
    }

    pub fn prev(&self, p: usize) -> usize {
        let pos = self.positions[p];
        let len = self.term_len(pos.term);
        self.term_start[pos.term] + (pos.index + len - 1) % len
    }

    pub fn gap_before(&self, p: usize) -> usize {
        self.prev(p)
    }

    pub fn gap_after(&self, p: usize) -> usize {
        p
    }

    pub fn tail(&self, e: Edge) -> usize {
        match e {
            Edge::Band { p, .. } => self.gap_before(p),
            Edge::Dummy { from, .. } => from,
        }
    }

    pub fn head(&self, e: Edge) -> usize {
        match e {
            Edge::Band { q, .. } => self.gap_after(q),
            Edge::Dummy { to, .. } => to,
        }
    }

    /// The band arc from gap `from` to gap `to`, if there is one.
    pub fn band_between(&self, from: usize, to: usize) -> Option<Edge> {
        self.band_to[from][to].map(|(p, q)| Edge::Band { p, q })
    }

    /// Band arcs leaving `gap`, in increasing order of their head.
    pub fn bands_from(&self, gap: usize) -> impl Iterator<Item = (usize, Edge)> + '_ {
        self.band_to[gap]
            .iter()
            .enumerate()
            .filter_map(|(h, e)| e.map(|(p, q)| (h, Edge::Band { p, q })))
    }
}
