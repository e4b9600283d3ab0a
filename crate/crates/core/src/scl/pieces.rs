//! Polygon pieces: closed walks in the gap graph.

use std::collections::BTreeSet;

use serde::Serialize;

use super::graph::{Edge, GapGraph};
use crate::error::SclError;

/// Largest total chain length accepted in oracle mode.
pub const ORACLE_LIMIT: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Triangles and bigons with dummy diagonals; polynomial size.
    Fast,
    /// Every simple cycle of band arcs; exponential, for cross-checking.
    Oracle,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fast" => Ok(Mode::Fast),
            "oracle" => Ok(Mode::Oracle),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Fast => "fast",
            Mode::Oracle => "oracle",
        })
    }
}

/// A closed walk, stored in its lexicographically least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Piece {
    walk: Vec<Edge>,
}

impl Piece {
    pub fn new(walk: Vec<Edge>) -> Self {
        let n = walk.len();
        let best = (0..n)
            .map(|k| {
                walk[k..]
                    .iter()
                    .chain(&walk[..k])
                    .copied()
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap_or_default();
        Piece { walk: best }
    }

    pub fn walk(&self) -> &[Edge] {
        &self.walk
    }

    pub fn dummy_count(&self) -> usize {
        self.walk.iter().filter(|e| e.is_dummy()).count()
    }

    pub fn band_count(&self) -> usize {
        self.walk.len() - self.dummy_count()
    }

    /// True iff consecutive edges meet head to tail and the walk closes.
    pub fn is_closed_walk(&self, g: &GapGraph) -> bool {
        let n = self.walk.len();
        n > 0 && (0..n).all(|i| g.head(self.walk[i]) == g.tail(self.walk[(i + 1) % n]))
    }
}

pub fn enumerate_pieces(g: &GapGraph, mode: Mode) -> Result<Vec<Piece>, SclError> {
    match mode {
        Mode::Fast => Ok(fast_pieces(g)),
        Mode::Oracle => {
            if g.num_positions() > ORACLE_LIMIT {
                return Err(SclError::OracleTooLarge {
                    length: g.num_positions(),
                    limit: ORACLE_LIMIT,
                });
            }
            Ok(oracle_pieces(g))
        }
    }
}

/// Choices for an edge from gap `a` to gap `b`: the band arc if present,
/// and the dummy.
fn edge_options(g: &GapGraph, a: usize, b: usize) -> impl Iterator<Item = Edge> {
    g.band_between(a, b)
        .into_iter()
        .chain(std::iter::once(Edge::Dummy { from: a, to: b }))
}

/// All closed walks of length 2 or 3 containing at least one band arc.
fn fast_pieces(g: &GapGraph) -> Vec<Piece> {
    let n = g.num_gaps();
    let mut found = BTreeSet::new();
    for from in 0..n {
        for (to, band) in g.bands_from(from) {
            for back in edge_options(g, to, from) {
                found.insert(Piece::new(vec![band, back]));
            }
            for third in (0..n).filter(|&k| k != from && k != to) {
                for e2 in edge_options(g, to, third) {
                    for e3 in edge_options(g, third, from) {
                        found.insert(Piece::new(vec![band, e2, e3]));
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

/// Simple directed cycles of band arcs, each rooted at its least gap.
fn oracle_pieces(g: &GapGraph) -> Vec<Piece> {
    let n = g.num_gaps();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| g.bands_from(v).map(|(h, _)| h).collect())
        .collect();
    let mut found = BTreeSet::new();
    let mut on_path = vec![false; n];
    let mut path = Vec::new();
    for root in 0..n {
        path.push(root);
        on_path[root] = true;
        extend_cycles(g, &adj, root, &mut path, &mut on_path, &mut found);
        on_path[root] = false;
        path.pop();
    }
    found.into_iter().collect()
}

fn extend_cycles(
    g: &GapGraph,
    adj: &[Vec<usize>],
    root: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    found: &mut BTreeSet<Piece>,
) {
    let last = *path.last().expect("path is never empty");
    for &next in &adj[last] {
        if next == root {
            let walk = path
                .iter()
                .zip(path.iter().skip(1).chain(std::iter::once(&root)))
                .map(|(&a, &b)| g.band_between(a, b).expect("edge on path"))
                .collect();
            found.insert(Piece::new(walk));
        } else if next > root && !on_path[next] {
            on_path[next] = true;
            path.push(next);
            extend_cycles(g, adj, root, path, on_path, found);
            path.pop();
            on_path[next] = false;
        }
    }
}
