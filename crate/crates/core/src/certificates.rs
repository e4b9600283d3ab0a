//! Incompressibility certificates for surfaces in amalgamated products.
//!
//! For `G = J *_<w> K` with `w` of infinite order in both factors, the
//! classes of `H_2(G)` coming from the amalgamation have Gromov–Thurston
//! norm at least `2 (scl_J(w) + scl_K(w))`, with equality for the unique
//! class when both factors have trivial `H_2`. A closed surface `S` of
//! genus at least two representing such a class is incompressible whenever
//! the norm exceeds `−χ(S) − 2`: compressing an essential simple loop would
//! produce a representative with `−χ` smaller by two. When the norm equals
//! `−χ(S)` the surface is norm-minimizing, hence π₁-injective.
//!
//! Applying the same inequality to a degree `m` cover bounds the index of
//! any cover in which a simple loop can compress: `m · norm ≤ m(−χ) − 2`
//! forces `m ≥ 2 / (−χ − norm)`.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{CertificateError, WordError};
use crate::rational::Rational;
use crate::scl::{scl_with, Mode, SclOptions, SclResult};
use crate::word::{
    commutator, is_homologically_trivial, product_of_commutators, seifert_family_word, Chain, Word,
};

/// What is known about one side of the amalgam.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// A free group of the given rank; scl is computed.
    FreeGroup { rank: usize },
    /// A group outside the solver's reach, with scl of the image of `w`
    /// supplied by the caller.
    External {
        name: String,
        scl: Option<Rational>,
        provenance: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorDescriptor {
    pub kind: FactorKind,
    /// The image of `w` in this factor.
    pub word_image: Word,
}

impl FactorDescriptor {
    pub fn free(rank: usize, word_image: Word) -> Self {
        FactorDescriptor {
            kind: FactorKind::FreeGroup { rank },
            word_image,
        }
    }

    pub fn external(
        name: impl Into<String>,
        scl: Rational,
        provenance: impl Into<String>,
        word_image: Word,
    ) -> Self {
        FactorDescriptor {
            kind: FactorKind::External {
                name: name.into(),
                scl: Some(scl),
                provenance: provenance.into(),
            },
            word_image,
        }
    }

    pub fn is_external(&self) -> bool {
        matches!(self.kind, FactorKind::External { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamSpec {
    pub left: FactorDescriptor,
    pub right: FactorDescriptor,
    /// Both factors have trivial `H_2`, so the amalgamated class is unique
    /// and the computed norm is exact rather than a lower bound.
    pub h2_trivial_both: bool,
}

/// A closed oriented surface, described by the genera of its components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceData {
    components: Vec<u32>,
}

impl SurfaceData {
    pub fn new(components: Vec<u32>) -> Result<Self, CertificateError> {
        if components.is_empty() {
            return Err(CertificateError::InvalidSurface("no components".into()));
        }
        if let Some(g) = components.iter().find(|&&g| g < 2) {
            let what = if *g == 0 { "sphere" } else { "torus" };
            return Err(CertificateError::InvalidSurface(format!(
                "{what} component"
            )));
        }
        Ok(SurfaceData { components })
    }

    pub fn connected(genus: u32) -> Result<Self, CertificateError> {
        Self::new(vec![genus])
    }

    pub fn components(&self) -> &[u32] {
        &self.components
    }

    pub fn chi(&self) -> i64 {
        self.components.iter().map(|&g| 2 - 2 * g as i64).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Incompressible,
    Inconclusive,
    NormMinimizingInjective,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Incompressible => "incompressible",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NormMinimizingInjective => "norm_minimizing_injective",
        })
    }
}

/// Smallest index of a cover in which a simple loop might compress.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoverIndex {
    Finite(u64),
    Infinity,
}

impl Serialize for CoverIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CoverIndex::Finite(m) => s.serialize_u64(*m),
            CoverIndex::Infinity => s.serialize_str("infinity"),
        }
    }
}

impl fmt::Display for CoverIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverIndex::Finite(m) => write!(f, "{m}"),
            CoverIndex::Infinity => f.write_str("infinity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateVerdict {
    pub norm_lower_bound: Rational,
    pub chi: i64,
    pub verdict: Verdict,
    pub norm_in_two_z: bool,
    pub min_cover_index: CoverIndex,
}

/// `2 (scl_left + scl_right)`, solving free factors with `options`.
pub fn amalgam_norm(spec: &AmalgamSpec, options: SclOptions) -> Result<Rational, CertificateError> {
    let left = factor_scl(&spec.left, options)?.0;
    let right = factor_scl(&spec.right, options)?.0;
    Ok(Rational::from(2) * (left + right))
}

fn factor_scl(
    factor: &FactorDescriptor,
    options: SclOptions,
) -> Result<(Rational, Option<SclResult>), CertificateError> {
    match &factor.kind {
        FactorKind::FreeGroup { rank } => {
            if factor.word_image.is_empty() {
                return Err(CertificateError::InvalidInput(
                    "word image is trivial".into(),
                ));
            }
            if factor.word_image.rank_used() > *rank {
                return Err(CertificateError::InvalidInput(format!(
                    "word {} does not lie in a rank-{rank} free group",
                    factor.word_image
                )));
            }
            let chain = Chain::from_word(&factor.word_image)?;
            if !is_homologically_trivial(&chain) {
                return Err(CertificateError::InvalidInput(format!(
                    "{} is not homologically trivial",
                    factor.word_image
                )));
            }
            let result = scl_with(&chain, options)?;
            Ok((result.value.clone(), Some(result)))
        }
        FactorKind::External { name, scl, .. } => {
            let value = scl
                .clone()
                .ok_or_else(|| CertificateError::MissingExternalScl(name.clone()))?;
            if value.is_negative() {
                return Err(CertificateError::NegativeScl(value.to_string()));
            }
            Ok((value, None))
        }
    }
}

/// Decides which conclusion the norm gap supports for `surface`.
pub fn check_certificate(
    norm: &Rational,
    surface: &SurfaceData,
) -> Result<CertificateVerdict, CertificateError> {
    let chi = surface.chi();
    let neg_chi = Rational::from(-chi);
    if norm > &neg_chi {
        return Err(CertificateError::InvalidInput(format!(
            "norm {norm} exceeds -chi = {neg_chi}; no surface with this chi represents the class"
        )));
    }
    let verdict = if *norm == neg_chi {
        Verdict::NormMinimizingInjective
    } else if *norm > neg_chi.clone() - Rational::from(2) {
        Verdict::Incompressible
    } else {
        Verdict::Inconclusive
    };
    Ok(CertificateVerdict {
        norm_lower_bound: norm.clone(),
        chi,
        verdict,
        norm_in_two_z: norm.is_integer() && (norm.numer() % 2u32) == 0u32.into(),
        min_cover_index: min_cover_index(norm, chi)?,
    })
}

/// Smallest integer `m ≥ 2 / (−χ − norm)`, at least one.
pub fn min_cover_index(norm: &Rational, chi: i64) -> Result<CoverIndex, CertificateError> {
    let gap = Rational::from(-chi) - norm.clone();
    if gap.is_negative() {
        return Err(CertificateError::InvalidInput(format!(
            "norm {norm} exceeds -chi = {}",
            -chi
        )));
    }
    if gap.is_zero() {
        return Ok(CoverIndex::Infinity);
    }
    let bound = (Rational::from(2) / gap).ceil();
    let m = bound
        .to_u64()
        .ok_or_else(|| CertificateError::InvalidInput(format!("cover index {bound} too large")))?;
    Ok(CoverIndex::Finite(m.max(1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolverSummary {
    pub mode: String,
    pub variables: usize,
    pub rows: usize,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExternalInput {
    pub name: String,
    pub value: Rational,
    pub provenance: String,
}

pub const COVER_INDEX_NOTE: &str =
    "derived: a compression in a degree-m cover needs m >= 2/(-chi - norm)";

/// The serialized form of a verdict together with everything it rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub family: String,
    pub word: String,
    pub scl_left: Rational,
    pub scl_right: Rational,
    pub norm: Rational,
    pub norm_is_exact: bool,
    pub chi: i64,
    pub verdict: Verdict,
    #[serde(rename = "norm_in_2Z")]
    pub norm_in_2z: bool,
    pub min_cover_index: CoverIndex,
    /// How the cover index was obtained; it is a consequence of the
    /// certificate inequality, not a value stated independently.
    pub min_cover_index_note: &'static str,
    pub solver: SolverSummary,
    pub external_inputs: Vec<ExternalInput>,
    /// Set when the verdict depends on externally supplied scl values.
    pub conditional: bool,
}

impl Certificate {
    pub fn verdict(&self) -> CertificateVerdict {
        CertificateVerdict {
            norm_lower_bound: self.norm.clone(),
            chi: self.chi,
            verdict: self.verdict,
            norm_in_two_z: self.norm_in_2z,
            min_cover_index: self.min_cover_index,
        }
    }
}

/// Computes the norm of `spec` and checks it against `surface`.
pub fn certify_amalgam(
    family: &str,
    spec: &AmalgamSpec,
    surface: &SurfaceData,
    options: SclOptions,
) -> Result<Certificate, CertificateError> {
    let (scl_left, left_run) = factor_scl(&spec.left, options)?;
    let (scl_right, right_run) = factor_scl(&spec.right, options)?;
    let norm = Rational::from(2) * (scl_left.clone() + scl_right.clone());
    let verdict = check_certificate(&norm, surface)?;

    let runs: Vec<&SclResult> = left_run.iter().chain(right_run.iter()).collect();
    let solver = SolverSummary {
        mode: if runs.is_empty() {
            "none".to_string()
        } else {
            options.mode.to_string()
        },
        variables: runs.iter().map(|r| r.lp_stats.variables).sum(),
        rows: runs.iter().map(|r| r.lp_stats.rows).sum(),
        wall_ms: runs.iter().map(|r| r.lp_stats.wall_ms).sum(),
    };
    let external_inputs: Vec<ExternalInput> = [&spec.left, &spec.right]
        .into_iter()
        .filter_map(|f| match &f.kind {
            FactorKind::External {
                name,
                scl: Some(value),
                provenance,
            } => Some(ExternalInput {
                name: name.clone(),
                value: value.clone(),
                provenance: provenance.clone(),
            }),
            _ => None,
        })
        .collect();

    Ok(Certificate {
        family: family.to_string(),
        word: spec.left.word_image.to_string(),
        scl_left,
        scl_right,
        norm,
        norm_is_exact: spec.h2_trivial_both,
        chi: verdict.chi,
        verdict: verdict.verdict,
        norm_in_2z: verdict.norm_in_two_z,
        min_cover_index: verdict.min_cover_index,
        min_cover_index_note: COVER_INDEX_NOTE,
        solver,
        conditional: !external_inputs.is_empty(),
        external_inputs,
    })
}

/// `w = [a,b][c,v]` in `F(a,b,c)`, rejecting `v` that make `[c,v]` trivial.
fn family_word(v: &Word) -> Result<Word, CertificateError> {
    if v.rank_used() > 3 {
        return Err(CertificateError::InvalidInput(format!(
            "{v} is not a word in a, b, c"
        )));
    }
    let cv = commutator(&Word::generator(2), v);
    if cv.is_empty() {
        return Err(CertificateError::DegenerateFamily(format!(
            "[c,{v}] is trivial"
        )));
    }
    Ok(commutator(&Word::generator(0), &Word::generator(1)).mul(&cv))
}

/// `Π_{i=1}^g [x_i, y_i]`, spelled with consecutive letters from `a`.
fn genus_relator(g: u32) -> Word {
    let pairs: Vec<(Word, Word)> = (0..g as usize)
        .map(|i| (Word::generator(2 * i), Word::generator(2 * i + 1)))
        .collect();
    product_of_commutators(&pairs)
}

/// `⟨a,b,c,x,y | [a,b][c,v] = [x,y]⟩` with the genus-3 surface `S ∪ T`.
pub fn build_example1(v: &Word, options: SclOptions) -> Result<Certificate, CertificateError> {
    let mut cert = build_example2(v, 1, options)?;
    cert.family = "example1".to_string();
    Ok(cert)
}

/// `⟨a,b,c,x_i,y_i | [a,b][c,v] = Π [x_i,y_i]⟩` with the genus `g + 2`
/// surface `S ∪ T_g`.
pub fn build_example2(
    v: &Word,
    g: u32,
    options: SclOptions,
) -> Result<Certificate, CertificateError> {
    if g == 0 {
        return Err(CertificateError::InvalidInput(
            "g must be at least 1".into(),
        ));
    }
    if 2 * g as usize > crate::word::MAX_RANK {
        return Err(CertificateError::InvalidInput(format!(
            "g = {g} needs too many generators"
        )));
    }
    let spec = AmalgamSpec {
        left: FactorDescriptor::free(3, family_word(v)?),
        right: FactorDescriptor::free(2 * g as usize, genus_relator(g)),
        h2_trivial_both: true,
    };
    certify_amalgam("example2", &spec, &SurfaceData::connected(g + 2)?, options)
}

/// `⟨H, x, y | [a,b] = [x,y]⟩` for a torsion-free non-free hyperbolic `H`,
/// with the genus-2 surface. `scl_H([a,b])` is supplied by the caller.
pub fn build_example3(
    scl_h_of_comm: Rational,
    provenance: &str,
    options: SclOptions,
) -> Result<Certificate, CertificateError> {
    if scl_h_of_comm.is_negative() {
        return Err(CertificateError::NegativeScl(scl_h_of_comm.to_string()));
    }
    let comm = commutator(&Word::generator(0), &Word::generator(1));
    let spec = AmalgamSpec {
        left: FactorDescriptor::external("scl_H([a,b])", scl_h_of_comm, provenance, comm.clone()),
        right: FactorDescriptor::free(2, comm),
        // H may have nontrivial H_2, so the norm is only a lower bound
        h2_trivial_both: false,
    };
    certify_amalgam("example3", &spec, &SurfaceData::connected(2)?, options)
}

/// The reference value of `scl([a,b])` in the Seifert-fibered target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceValue {
    pub value: Rational,
    pub provenance: String,
}

/// Data for a one-relator group `⟨a,b | v⟩` with `scl([a,b])` pinched
/// just below 1/2. No verdict: scl in a non-free group is not computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Example4Report {
    pub family: String,
    pub n: u32,
    pub relator: String,
    pub reference: ReferenceValue,
    /// `scl_{F(a,b)}([a,b])`, computed; an upper bound in any quotient.
    pub free_upper_bound: Rational,
    /// The open interval `((N−1)/2N, 1/2)` expected to contain
    /// `scl_H([a,b])`.
    pub target_interval: (Rational, Rational),
    pub torsion_free: bool,
    pub warnings: Vec<String>,
}

pub fn build_example4(
    n: u32,
    signs: &[i32],
    conjugators: &[Word],
    options: SclOptions,
) -> Result<Example4Report, CertificateError> {
    let relator = seifert_family_word(n, signs, conjugators).map_err(|e| match e {
        WordError::UnbalancedSigns => CertificateError::UnbalancedSigns,
        other => CertificateError::Word(other),
    })?;
    if relator.word.is_empty() {
        return Err(CertificateError::DegenerateFamily(
            "relator reduces to the identity".into(),
        ));
    }
    let mut warnings = Vec::new();
    if let Some((root, k)) = &relator.proper_power {
        warnings.push(format!(
            "relator is the {k}-th power of {root}; the group has torsion"
        ));
    }
    let comm = commutator(&Word::generator(0), &Word::generator(1));
    let free = scl_with(&Chain::from_word(&comm)?, options)?.value;
    let reference = Rational::new(n as i64 - 1, 2 * n as i64);
    Ok(Example4Report {
        family: "example4".to_string(),
        n,
        relator: relator.word.to_string(),
        reference: ReferenceValue {
            value: reference.clone(),
            provenance: "external: Seifert-fibered quotient, value from the literature".to_string(),
        },
        target_interval: (reference, free.clone()),
        free_upper_bound: free,
        torsion_free: relator.proper_power.is_none(),
        warnings,
    })
}

/// Default solver settings for certificates: fast pieces, auto guidance.
pub fn default_options() -> SclOptions {
    SclOptions::mode(Mode::Fast)
}
