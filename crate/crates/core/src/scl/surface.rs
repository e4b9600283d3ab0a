//! Realizing an optimal LP vertex as an explicit surface.
//!
//! Denominators are cleared to get integer piece counts at degree `n`. Each
//! piece copy becomes a polygon whose sides alternate between *edge sides*
//! (one per walk edge) and *corner sides* (short boundary arcs in a gap).
//! Bands are rectangles with two long boundary sides reading their letters
//! and two end sides. Band ends are glued to band-arc edge sides, dummy edge
//! sides to each other. The Euler characteristic is then counted twice: from
//! the piece weights, and as `V − E + F` of the glued cell complex.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::encode::piece_weight;
use super::graph::Edge;
use super::{Piece, SclComputation};
use crate::error::SclError;
use crate::rational::Rational;

/// A band end in a piece copy: `(instance, edge index in its walk)`.
pub type Slot = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gluing {
    /// Band `band` joining positions `p < q`: its end at the start of `p`
    /// meets the arc `(p, q)` in `forward`, its other end the arc `(q, p)` in
    /// `backward`.
    Band {
        band: usize,
        p: usize,
        q: usize,
        forward: Slot,
        backward: Slot,
    },
    Dummy {
        a: Slot,
        b: Slot,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceUse {
    pub walk: Vec<Edge>,
    pub dummy_count: usize,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BandUse {
    pub p: usize,
    pub q: usize,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryComponent {
    pub term: usize,
    /// The boundary reads the term to this power.
    pub degree: u64,
    pub word: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalSurface {
    pub chain: String,
    pub scl: Rational,
    /// Covering degree `n`: each term `w_k` with coefficient `c_k` is read
    /// `c_k · n` times in total by the boundary.
    pub degree: u64,
    pub pieces: Vec<PieceUse>,
    pub bands: Vec<BandUse>,
    /// Piece index of each piece copy; gluing slots refer to these copies.
    pub instances: Vec<usize>,
    pub gluings: Vec<Gluing>,
    /// From the piece weights: `Σ x_P (1 − d_P/2) − bands`.
    pub euler_characteristic: i64,
    /// `V − E + F` of the glued complex.
    pub euler_characteristic_traced: i64,
    pub boundary_components: Vec<BoundaryComponent>,
    pub connected_components: usize,
    /// Sum of the genera of the connected components.
    pub genus: u64,
}

impl ExtremalSurface {
    pub fn boundary_component_count(&self) -> usize {
        self.boundary_components.len()
    }

    /// `−χ / 2n`.
    pub fn scl_bound(&self) -> Rational {
        Rational::new(-self.euler_characteristic, 2 * self.degree as i64)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn invariant(msg: impl Into<String>) -> SclError {
    SclError::InternalInvariantViolation(msg.into())
}

fn to_u64(x: &BigInt) -> Result<u64, SclError> {
    x.to_u64()
        .ok_or_else(|| invariant("multiplicity does not fit in 64 bits"))
}

/// Builds the surface for the optimal solution held in `comp`.
pub fn extract_surface(comp: &SclComputation) -> Result<ExtremalSurface, SclError> {
    let graph = &comp.graph;
    let chain = &comp.result.chain;
    let values: Vec<&Rational> = comp.solution.assignment.iter().map(|(_, v)| v).collect();
    let denom = Rational::common_denominator(values.iter().copied());
    let degree = to_u64(&denom)?;

    let mut pieces = Vec::new();
    let mut instances = Vec::new();
    for (j, v) in &comp.solution.assignment {
        let count = v.clone() * Rational::from(denom.clone());
        if !count.is_integer() {
            return Err(invariant(
                "multiplicity is not integral after clearing denominators",
            ));
        }
        let count = to_u64(count.numer())?;
        let piece: &Piece = &comp.pieces[*j];
        pieces.push(PieceUse {
            walk: piece.walk().to_vec(),
            dummy_count: piece.dummy_count(),
            multiplicity: count,
        });
        for _ in 0..count {
            instances.push(pieces.len() - 1);
        }
    }

    // collect the slots of every directed edge
    let mut slots: BTreeMap<Edge, Vec<Slot>> = BTreeMap::new();
    for (inst, &pi) in instances.iter().enumerate() {
        for (k, &e) in pieces[pi].walk.iter().enumerate() {
            slots.entry(e).or_default().push((inst, k));
        }
    }

    let mut gluings = Vec::new();
    let mut bands = Vec::new();
    let mut band_count = 0usize;
    for (&e, fwd) in &slots {
        match e {
            Edge::Band { p, q } if p < q => {
                let back = slots
                    .get(&Edge::Band { p: q, q: p })
                    .map(Vec::as_slice)
                    .unwrap_or(&[]);
                if back.len() != fwd.len() {
                    return Err(invariant(format!("band ({p},{q}) ends do not pair up")));
                }
                bands.push(BandUse {
                    p,
                    q,
                    multiplicity: fwd.len() as u64,
                });
                for (&f, &b) in fwd.iter().zip(back) {
                    gluings.push(Gluing::Band {
                        band: band_count,
                        p,
                        q,
                        forward: f,
                        backward: b,
                    });
                    band_count += 1;
                }
            }
            Edge::Band { p, q } => {
                if !slots.contains_key(&Edge::Band { p: q, q: p }) {
                    return Err(invariant(format!("band ({q},{p}) ends do not pair up")));
                }
            }
            Edge::Dummy { from, to } if from < to => {
                let back = slots
                    .get(&Edge::Dummy { from: to, to: from })
                    .map(Vec::as_slice)
                    .unwrap_or(&[]);
                if back.len() != fwd.len() {
                    return Err(invariant(format!("dummy {from}-{to} sides do not pair up")));
                }
                for (&a, &b) in fwd.iter().zip(back) {
                    gluings.push(Gluing::Dummy { a, b });
                }
            }
            Edge::Dummy { from, to } => {
                if !slots.contains_key(&Edge::Dummy { from: to, to: from }) {
                    return Err(invariant(format!("dummy {to}-{from} sides do not pair up")));
                }
            }
        }
    }

    // coverage: every position is covered by c_k · n bands
    let mut covered = vec![0u64; graph.num_positions()];
    for b in &bands {
        covered[b.p] += b.multiplicity;
        covered[b.q] += b.multiplicity;
    }
    for (p, pos) in graph.positions().iter().enumerate() {
        let want = chain.terms()[pos.term].1 as u64 * degree;
        if covered[p] != want {
            return Err(invariant(format!(
                "position {p} covered {} times, expected {want}",
                covered[p]
            )));
        }
    }

    // Euler characteristic from the piece weights
    let weight_sum: Rational = pieces
        .iter()
        .map(|pu| {
            let w = piece_weight(&Piece::new(pu.walk.clone()));
            w * Rational::from(pu.multiplicity as i64)
        })
        .sum();
    let chi_accounting = weight_sum - Rational::from(band_count);
    if !chi_accounting.is_integer() {
        return Err(invariant("Euler characteristic is not an integer"));
    }
    let euler_characteristic = chi_accounting
        .numer()
        .to_i64()
        .ok_or_else(|| invariant("Euler characteristic out of range"))?;

    // the cell complex: vertex ids
    let mut inst_base = Vec::with_capacity(instances.len());
    let mut next = 0usize;
    for &pi in &instances {
        inst_base.push(next);
        next += 2 * pieces[pi].walk.len();
    }
    let band_base = next;
    let num_vertices = band_base + 4 * band_count;
    // piece copy `inst`, edge `k`: s = start of the edge side, t = its end
    let s = |inst: usize, k: usize| inst_base[inst] + 2 * k;
    let t = |inst: usize, k: usize| inst_base[inst] + 2 * k + 1;
    // band corners: start/end of p, start/end of q
    let (p0, p1, q0, q1) = (
        |b: usize| band_base + 4 * b,
        |b: usize| band_base + 4 * b + 1,
        |b: usize| band_base + 4 * b + 2,
        |b: usize| band_base + 4 * b + 3,
    );

    let mut vertices = UnionFind::new(num_vertices);
    let num_faces = instances.len() + band_count;
    let mut faces = UnionFind::new(num_faces);
    for g in &gluings {
        match *g {
            Gluing::Band {
                band,
                forward,
                backward,
                ..
            } => {
                // arc (p,q) runs from the start of p to the end of q
                vertices.union(s(forward.0, forward.1), p0(band));
                vertices.union(t(forward.0, forward.1), q1(band));
                // arc (q,p) runs from the start of q to the end of p
                vertices.union(s(backward.0, backward.1), q0(band));
                vertices.union(t(backward.0, backward.1), p1(band));
                faces.union(instances.len() + band, forward.0);
                faces.union(instances.len() + band, backward.0);
            }
            Gluing::Dummy { a, b } => {
                vertices.union(s(a.0, a.1), t(b.0, b.1));
                vertices.union(t(a.0, a.1), s(b.0, b.1));
                faces.union(a.0, b.0);
            }
        }
    }
    let mut vertex_class = vec![0usize; num_vertices];
    let mut classes = std::collections::BTreeSet::new();
    for (v, class) in vertex_class.iter_mut().enumerate() {
        *class = vertices.find(v);
        classes.insert(*class);
    }
    let total_sides: usize = instances
        .iter()
        .map(|&pi| 2 * pieces[pi].walk.len())
        .sum::<usize>()
        + 4 * band_count;
    let glued_pairs = 2 * band_count + (gluings.len() - band_count);
    let edges = total_sides - glued_pairs;
    let euler_characteristic_traced = classes.len() as i64 - edges as i64 + num_faces as i64;

    // boundary sides, oriented with the surface on their left:
    // (from vertex, to vertex, letter position if a band side, face)
    let mut boundary_out: BTreeMap<usize, Vec<(usize, Option<usize>, usize)>> = BTreeMap::new();
    for (inst, &pi) in instances.iter().enumerate() {
        let k = pieces[pi].walk.len();
        for i in 0..k {
            let from = vertex_class[t(inst, i)];
            let to = vertex_class[s(inst, (i + 1) % k)];
            boundary_out.entry(from).or_default().push((to, None, inst));
        }
    }
    for g in &gluings {
        if let Gluing::Band { band, p, q, .. } = *g {
            let face = instances.len() + band;
            boundary_out
                .entry(vertex_class[p0(band)])
                .or_default()
                .push((vertex_class[p1(band)], Some(p), face));
            boundary_out
                .entry(vertex_class[q0(band)])
                .or_default()
                .push((vertex_class[q1(band)], Some(q), face));
        }
    }
    if boundary_out.values().any(|v| v.len() != 1) {
        return Err(invariant("boundary is not a 1-manifold"));
    }

    let mut visited = std::collections::BTreeSet::new();
    let mut boundary_components = Vec::new();
    let mut boundary_per_face_class: BTreeMap<usize, usize> = BTreeMap::new();
    let starts: Vec<usize> = boundary_out.keys().copied().collect();
    for start in starts {
        if visited.contains(&start) {
            continue;
        }
        let mut letters: Vec<usize> = Vec::new();
        let mut v = start;
        let mut face = None;
        loop {
            if !visited.insert(v) {
                break;
            }
            let (to, letter, f) = boundary_out[&v][0];
            face.get_or_insert(f);
            letters.extend(letter);
            v = to;
        }
        if v != start {
            return Err(invariant("boundary tracing did not close up"));
        }
        let Some(&first) = letters.first() else {
            return Err(invariant("boundary component reads no letters"));
        };
        let term = graph.positions()[first].term;
        for (i, &p) in letters.iter().enumerate() {
            let nxt = letters[(i + 1) % letters.len()];
            if graph.next(p) != nxt {
                return Err(invariant("boundary does not read consecutive letters"));
            }
        }
        let term_len = chain.terms()[term].0.len();
        if !letters.len().is_multiple_of(term_len) {
            return Err(invariant("boundary reads a fractional power"));
        }
        // rotate so the word starts at the term's first letter
        let word: String = chain.terms()[term]
            .0
            .letters()
            .iter()
            .cycle()
            .take(letters.len())
            .map(|x| x.to_char())
            .collect();
        boundary_components.push(BoundaryComponent {
            term,
            degree: (letters.len() / term_len) as u64,
            word,
        });
        let fc = faces.find(face.expect("nonempty boundary has a face"));
        *boundary_per_face_class.entry(fc).or_default() += 1;
    }

    // degree per term adds up to c_k · n
    for (k, (_, c)) in chain.terms().iter().enumerate() {
        let total: u64 = boundary_components
            .iter()
            .filter(|b| b.term == k)
            .map(|b| b.degree)
            .sum();
        if total != *c as u64 * degree {
            return Err(invariant(format!(
                "term {k} is read {total} times, expected {}",
                *c as u64 * degree
            )));
        }
    }

    // genus per connected component
    let mut chi_per_class: BTreeMap<usize, i64> = BTreeMap::new();
    for f in 0..num_faces {
        *chi_per_class.entry(faces.find(f)).or_default() += 1;
    }
    for g in &gluings {
        let (f, pairs) = match *g {
            Gluing::Band { forward, .. } => (forward.0, 2),
            Gluing::Dummy { a, .. } => (a.0, 1),
        };
        *chi_per_class.entry(faces.find(f)).or_default() -= pairs;
    }
    let mut genus = 0u64;
    for (class, chi) in &chi_per_class {
        let b = *boundary_per_face_class.get(class).unwrap_or(&0) as i64;
        let twice_genus = 2 - chi - b;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(invariant("component has inconsistent genus"));
        }
        genus += (twice_genus / 2) as u64;
    }

    let surface = ExtremalSurface {
        chain: chain.to_string(),
        scl: comp.result.value.clone(),
        degree,
        pieces,
        bands,
        instances,
        gluings,
        euler_characteristic,
        euler_characteristic_traced,
        boundary_components,
        connected_components: chi_per_class.len(),
        genus,
    };
    if surface.euler_characteristic != surface.euler_characteristic_traced {
        return Err(invariant(format!(
            "Euler characteristic mismatch: {} by accounting, {} traced",
            surface.euler_characteristic, surface.euler_characteristic_traced
        )));
    }
    if surface.scl_bound() != surface.scl {
        return Err(invariant(format!(
            "surface gives {} but scl is {}",
            surface.scl_bound(),
            surface.scl
        )));
    }
    Ok(surface)
}
