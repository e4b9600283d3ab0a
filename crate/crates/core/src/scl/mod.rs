//! Stable commutator length of chains in free groups.
//!
//! An admissible surface in normal form is cut into *bands*, rectangles that
//! pair a letter with an inverse letter, and *polygons* whose corners sit in
//! the gaps between consecutive boundary letters. Polygons are closed walks
//! in the [`GapGraph`]. Optimizing the polygon count over rational
//! multiplicities is a linear program; its optimum gives scl exactly.
//!
//! Two piece families are supported. [`Mode::Oracle`] uses every simple
//! cycle of band arcs: a polygon through a repeated corner can be split
//! there, so simple cycles suffice. [`Mode::Fast`] triangulates polygons with
//! dummy diagonals glued in pairs, so only bigons and triangles are needed
//! and the program stays polynomial in the chain length.

mod encode;
mod graph;
mod pieces;
mod surface;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::SclError;
use crate::lp::{self, check_solution, LpSolution, LpStatus};
use crate::rational::Rational;
use crate::word::Chain;

pub use self::encode::{assemble_lp, piece_weight, scl_from_optimum, RowKind, SclProgram};
pub use self::graph::{Edge, GapGraph, Position};
pub use self::pieces::{enumerate_pieces, Mode, Piece, ORACLE_LIMIT};
pub use self::surface::{extract_surface, BoundaryComponent, ExtremalSurface, Gluing};

/// How the exact solver is started.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Guidance {
    /// Float-guided above [`FLOAT_GUIDANCE_THRESHOLD`] variables.
    #[default]
    Auto,
    /// Cold exact simplex.
    Exact,
    /// Float pass first, exact re-derivation from its basis.
    Float,
}

pub const FLOAT_GUIDANCE_THRESHOLD: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SclOptions {
    pub mode: Mode,
    pub guidance: Guidance,
    pub timeout: Option<Duration>,
}

impl Default for SclOptions {
    fn default() -> Self {
        SclOptions {
            mode: Mode::Fast,
            guidance: Guidance::Auto,
            timeout: None,
        }
    }
}

impl SclOptions {
    pub fn mode(mode: Mode) -> Self {
        SclOptions {
            mode,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LpStats {
    pub variables: usize,
    pub rows: usize,
    pub pivots: usize,
    pub wall_ms: u64,
    pub float_guided: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SclResult {
    pub value: Rational,
    #[serde(serialize_with = "chain_as_string")]
    pub chain: Chain,
    pub mode: Mode,
    pub lp_stats: LpStats,
}

fn chain_as_string<S: serde::Serializer>(c: &Chain, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(c)
}

/// Everything produced along the way, kept for surface extraction.
#[derive(Clone, Debug)]
pub struct SclComputation {
    pub graph: GapGraph,
    pub pieces: Vec<Piece>,
    pub program: SclProgram,
    pub solution: LpSolution,
    pub result: SclResult,
}

static SOLVES: AtomicUsize = AtomicUsize::new(0);
static VERIFIED: AtomicUsize = AtomicUsize::new(0);

/// `(solves, verified)` LP counts since process start. Every solve is
/// re-verified before its value is released.
pub fn verification_counts() -> (usize, usize) {
    (
        SOLVES.load(Ordering::SeqCst),
        VERIFIED.load(Ordering::SeqCst),
    )
}

/// scl of a homologically trivial chain.
pub fn scl(chain: &Chain, mode: Mode) -> Result<SclResult, SclError> {
    Ok(compute(chain, SclOptions::mode(mode))?.result)
}

pub fn scl_with(chain: &Chain, options: SclOptions) -> Result<SclResult, SclError> {
    Ok(compute(chain, options)?.result)
}

pub fn compute(chain: &Chain, options: SclOptions) -> Result<SclComputation, SclError> {
    let start = Instant::now();
    let deadline = options.timeout.map(|t| start + t);
    let graph = GapGraph::build(chain)?;
    let pieces = enumerate_pieces(&graph, options.mode)?;
    let program = assemble_lp(&graph, &pieces, chain);

    let float_guided = match options.guidance {
        Guidance::Auto => program.lp.num_vars() > FLOAT_GUIDANCE_THRESHOLD,
        Guidance::Exact => false,
        Guidance::Float => true,
    };
    let hint = if float_guided {
        lp::approximate_basis_until(&program.lp, deadline)
    } else {
        None
    };
    let timeout = || SclError::Timeout(options.timeout.unwrap_or_default());
    if deadline.is_some_and(|d| Instant::now() > d) {
        return Err(timeout());
    }
    let solution =
        lp::solve_until(&program.lp, hint.as_deref(), deadline).map_err(|_| timeout())?;
    SOLVES.fetch_add(1, Ordering::SeqCst);
    let optimum = match solution.status {
        LpStatus::Optimal => solution
            .optimum
            .clone()
            .expect("optimal solutions carry a value"),
        LpStatus::Infeasible => return Err(SclError::NoOptimum("infeasible")),
        LpStatus::Unbounded => return Err(SclError::NoOptimum("unbounded")),
    };
    check_solution(&program.lp, &solution).map_err(|e| {
        SclError::InternalInvariantViolation(format!("LP verification failed: {e}"))
    })?;
    VERIFIED.fetch_add(1, Ordering::SeqCst);

    let value = scl_from_optimum(chain, &optimum);
    if value.is_negative() {
        return Err(SclError::InternalInvariantViolation(format!(
            "negative scl {value}"
        )));
    }
    let result = SclResult {
        value,
        chain: chain.clone(),
        mode: options.mode,
        lp_stats: LpStats {
            variables: program.lp.num_vars(),
            rows: program.lp.num_rows(),
            pivots: solution.pivots,
            wall_ms: start.elapsed().as_millis() as u64,
            float_guided,
        },
    };
    Ok(SclComputation {
        graph,
        pieces,
        program,
        solution,
        result,
    })
}

/// An extremal surface for `chain`, realizing its scl.
pub fn extremal_surface(chain: &Chain, options: SclOptions) -> Result<ExtremalSurface, SclError> {
    let comp = compute(chain, options)?;
    extract_surface(&comp)
}
