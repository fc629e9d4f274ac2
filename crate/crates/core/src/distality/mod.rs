//! Distality of projective actions.
//!
//! A single invertible `T` acts distally on the sphere exactly when its
//! unimodular rescaling is semisimple with all eigenvalues on the unit
//! circle. [`classify_projective_distality`] decides this spectrally and
//! backs every `NotDistal` verdict with a replayable proximal pair.
//! [`semigroup_distality_test`] extends the check to finitely generated
//! semigroups up to a word budget.

pub mod oracle;
mod pairs;
pub mod semigroup;

use serde::Serialize;

pub use oracle::{proximal_pair_search, random_sphere_point, ProximalPair};
pub use semigroup::{semigroup_distality_test, SemigroupSpec};

use crate::config::{Config, OracleBudget};
use crate::error::{Error, Result};
use crate::linalg::{
    contraction_subspace, eigen_structure, normalize_to_unimodular, operator_norm, EigenStructure, Matrix,
};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Distal,
    NotDistal,
    Inconclusive,
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", bound(serialize = "S: Real + Serialize"))]
pub enum Certificate<S> {
    /// Eigenstructure of the unimodular rescaling `scale * T`.
    SpectralProof {
        scale: S,
        structure: EigenStructure<S>,
        max_modulus_deviation: S,
    },
    ProximalPair(ProximalPair<S>),
    /// A word in the normalized generators whose operator norm exceeds the
    /// growth bound, so the closure is not compact.
    UnboundedWord {
        word: Vec<usize>,
        norm: S,
        bound: S,
    },
    /// Nothing violated distality within the search budget.
    BudgetExhausted {
        words_checked: usize,
        exhaustive_length: usize,
        max_word_length: usize,
        min_word_norm: S,
        max_word_norm: S,
        bound: S,
        oracle_words: usize,
    },
}

/// Budget echoed in the verdict so that the run can be reproduced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetEcho {
    pub spectral_tolerance: f64,
    pub oracle: OracleBudget,
    pub max_power_log2: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
}

impl BudgetEcho {
    fn from_config(cfg: &Config) -> Self {
        BudgetEcho {
            spectral_tolerance: cfg.tolerances.spectral,
            oracle: cfg.oracle,
            max_power_log2: cfg.words.max_power_log2,
            word_length: None,
            sample_count: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Real + Serialize"))]
pub struct DistalityVerdict<S> {
    pub verdict: Verdict,
    pub certificate: Certificate<S>,
    pub budget: BudgetEcho,
    pub seed: u64,
    /// Short explanations, e.g. why a verdict is inconclusive.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl<S: Real> DistalityVerdict<S> {
    pub fn is_distal(&self) -> bool {
        self.verdict == Verdict::Distal
    }

    /// Re-checks the certificate against the matrix it was issued for.
    pub fn replay(&self, t: &Matrix<S>, cfg: &Config) -> Result<bool> {
        replay_certificate(
            &self.certificate,
            |word| match word {
                None => Ok(t.clone()),
                Some(_) => Err(Error::InvalidSpec("word certificate needs generators".into())),
            },
            cfg,
        )
    }

    /// Re-checks the certificate against the generators of a semigroup.
    pub fn replay_semigroup(&self, generators: &[Matrix<S>], cfg: &Config) -> Result<bool> {
        if let Certificate::UnboundedWord { word, norm, .. } = &self.certificate {
            let w = semigroup::normalized_word(generators, word, cfg)?;
            return Ok(within(operator_norm(&w), *norm, S::lit(0.1)));
        }
        replay_certificate(&self.certificate, |word| semigroup::word_matrix(generators, word.unwrap_or(&[])), cfg)
    }
}

fn within<S: Real>(value: S, claim: S, slack: S) -> bool {
    (value - claim).abs() <= slack * claim.abs()
}

fn replay_certificate<S: Real>(
    cert: &Certificate<S>,
    matrix_for: impl Fn(Option<&[usize]>) -> Result<Matrix<S>>,
    cfg: &Config,
) -> Result<bool> {
    match cert {
        Certificate::ProximalPair(pair) => {
            let t = matrix_for(pair.word.as_deref())?;
            let (before, after) = pair.replay_projective(&t)?;
            Ok(pair.matches(before, after, S::lit(0.1)) && before >= S::lit(cfg.oracle.delta.min(0.3)) * S::lit(0.9))
        }
        Certificate::SpectralProof { structure, max_modulus_deviation, .. } => {
            let t = matrix_for(None)?;
            let n = normalize_to_unimodular(&t, &cfg.tolerances)?;
            let fresh = eigen_structure(&n.unit, &cfg.tolerances)?;
            let dev = fresh.max_modulus_deviation();
            let slack = S::lit(cfg.tolerances.spectral);
            Ok(fresh.semisimple == structure.semisimple && (dev - *max_modulus_deviation).abs() <= slack)
        }
        Certificate::UnboundedWord { .. } => Err(Error::InvalidSpec("word certificate needs generators".into())),
        Certificate::BudgetExhausted { .. } => Ok(true),
    }
}

/// Spectral verdict for the projective action of an invertible matrix.
///
/// * Any eigenvalue modulus of the unimodular rescaling off the unit circle
///   by more than the spectral tolerance: `NotDistal`.
/// * Moduli in the band but a defective eigenvalue: `NotDistal`.
/// * Semisimple with a deviation inside the band yet above the ambiguity
///   floor, or a rank test that cannot separate a shear from a rotation:
///   `Inconclusive`.
/// * Otherwise `Distal`.
///
/// `NotDistal` verdicts carry a proximal pair when one can be certified by
/// iterating `T^(2^k)`, and the spectral data otherwise.
pub fn classify_projective_distality<S: Real>(t: &Matrix<S>, cfg: &Config) -> Result<DistalityVerdict<S>> {
    let tol = &cfg.tolerances;
    let n = normalize_to_unimodular(t, tol)?;
    let structure = eigen_structure(&n.unit, tol)?;
    let dev = structure.max_modulus_deviation();
    let band = S::lit(tol.spectral);
    let floor = S::lit(tol.ambiguity_floor);
    let mut notes = Vec::new();
    let verdict = if dev > band {
        notes.push("eigenvalue moduli split".to_string());
        Verdict::NotDistal
    } else if !structure.semisimple {
        notes.push("defective eigenvalue on the unit circle".to_string());
        Verdict::NotDistal
    } else if dev > floor {
        notes.push(format!("modulus deviation {dev} inside the tolerance band"));
        Verdict::Inconclusive
    } else if rank_test_ambiguous(&n.unit, &structure, cfg) {
        notes.push("rank test cannot separate a shear from the identity".to_string());
        Verdict::Inconclusive
    } else {
        Verdict::Distal
    };
    let proof = Certificate::SpectralProof { scale: n.scale, structure: structure.clone(), max_modulus_deviation: dev };
    let certificate = if verdict == Verdict::NotDistal {
        match pairs::certify(t, &n.unit, &structure, cfg)? {
            Some(pair) => Certificate::ProximalPair(pair),
            None => {
                notes.push("no pair certified within the power budget".to_string());
                proof
            }
        }
    } else {
        proof
    };
    Ok(DistalityVerdict { verdict, certificate, budget: BudgetEcho::from_config(cfg), seed: cfg.seed, notes })
}

/// For a repeated eigenvalue, `T - lambda I` has singular values that are
/// either clearly zero or clearly not; anything between the ambiguity floor
/// and the rank tolerance leaves semisimplicity undecided.
fn rank_test_ambiguous<S: Real>(unit: &Matrix<S>, structure: &EigenStructure<S>, cfg: &Config) -> bool {
    let scale = operator_norm(unit);
    let lo = S::lit(cfg.tolerances.ambiguity_floor) * scale;
    let hi = S::lit(cfg.tolerances.rank) * scale;
    structure.clusters.iter().filter(|c| c.algebraic > 1 && c.value.im.abs() <= hi).any(|c| {
        let s = crate::linalg::svd::svd(&unit.shift(c.value.re));
        s.values.iter().any(|&v| v > lo && v <= hi)
    })
}

/// For `|det T| = 1`: whenever `T` is classified distal, both `C(T)` and
/// `C(T^-1)` must be trivial. Returns whether that implication holds.
pub fn distality_implies_linear_distality_check<S: Real>(t: &Matrix<S>, cfg: &Config) -> Result<bool> {
    let det = t.det();
    if !((det.abs() - S::one()).abs() <= S::lit(cfg.tolerances.spectral)) {
        return Err(Error::NotUnimodular(det.to_f64_lossy()));
    }
    let verdict = classify_projective_distality(t, cfg)?;
    if !verdict.is_distal() {
        return Ok(true);
    }
    let inv = t.inverse(cfg.tolerances.singular)?;
    Ok(contraction_subspace(t, &cfg.tolerances)?.is_empty() && contraction_subspace(&inv, &cfg.tolerances)?.is_empty())
}
