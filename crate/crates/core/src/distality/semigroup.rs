//! Distality of finitely generated semigroups, up to a word budget.
//!
//! A word `[i, j, k]` stands for the matrix product `G_i G_j G_k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{normalize_to_unimodular, operator_norm, Matrix};
use crate::scalar::Real;
use crate::sphere::AffineSphereMap;

use super::{classify_projective_distality, proximal_pair_search, BudgetEcho, Certificate, DistalityVerdict, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(serialize = "S: Real + Serialize", deserialize = "S: Real + Deserialize<'de>"))]
pub struct SemigroupSpec<S> {
    pub generators: Vec<Matrix<S>>,
    #[serde(default = "default_word_length")]
    pub word_length_budget: usize,
    #[serde(default = "default_sample_count")]
    pub sample_count: usize,
    #[serde(default)]
    pub rng_seed: u64,
}

fn default_word_length() -> usize {
    8
}

fn default_sample_count() -> usize {
    256
}

impl<S: Real> SemigroupSpec<S> {
    pub fn new(generators: Vec<Matrix<S>>) -> Self {
        SemigroupSpec {
            generators,
            word_length_budget: default_word_length(),
            sample_count: default_sample_count(),
            rng_seed: 0,
        }
    }

    /// Non-empty, common dimension, every generator invertible.
    pub fn validate(&self, cfg: &Config) -> Result<()> {
        let first = self.generators.first().ok_or_else(|| Error::InvalidSpec("no generators".into()))?;
        for g in &self.generators {
            if g.dim() != first.dim() {
                return Err(Error::DimensionMismatch { expected: first.dim(), found: g.dim() });
            }
            let det = g.det();
            if !(det.abs() > S::lit(cfg.tolerances.singular)) {
                return Err(Error::SingularMatrix { det: det.to_f64_lossy() });
            }
        }
        if self.word_length_budget == 0 {
            return Err(Error::InvalidSpec("word_length_budget must be positive".into()));
        }
        Ok(())
    }
}

/// Product of the raw generators along `word`.
pub fn word_matrix<S: Real>(generators: &[Matrix<S>], word: &[usize]) -> Result<Matrix<S>> {
    product(generators, word)
}

/// Product of the unimodular rescalings of the generators along `word`.
pub fn normalized_word<S: Real>(generators: &[Matrix<S>], word: &[usize], cfg: &Config) -> Result<Matrix<S>> {
    let units = generators
        .iter()
        .map(|g| normalize_to_unimodular(g, &cfg.tolerances).map(|n| n.unit))
        .collect::<Result<Vec<_>>>()?;
    product(&units, word)
}

fn product<S: Real>(gens: &[Matrix<S>], word: &[usize]) -> Result<Matrix<S>> {
    let d = gens.first().ok_or_else(|| Error::InvalidSpec("no generators".into()))?.dim();
    word.iter().try_fold(Matrix::identity(d), |acc, &i| {
        gens.get(i).map(|g| acc.mul(g)).ok_or_else(|| Error::InvalidSpec(format!("generator index {i} out of range")))
    })
}

struct WordStats<S> {
    checked: usize,
    min_norm: S,
    max_norm: S,
    max_length: usize,
    /// Words sorted by decreasing norm, for the oracle stage.
    heaviest: Vec<(S, Vec<usize>)>,
}

/// Runs the cyclic test on every generator, the growth test on words of
/// normalized generators, and the spectral and orbit tests on the heaviest
/// words found. `Distal` here means no violation within the budget.
pub fn semigroup_distality_test<S: Real>(spec: &SemigroupSpec<S>, cfg: &Config) -> Result<DistalityVerdict<S>> {
    spec.validate(cfg)?;
    let gens = &spec.generators;
    let d = gens[0].dim();
    let mut budget = BudgetEcho::from_config(cfg);
    budget.word_length = Some(spec.word_length_budget);
    budget.sample_count = Some(spec.sample_count);
    let mut notes = Vec::new();
    let finish = |verdict, certificate, notes| DistalityVerdict {
        verdict,
        certificate,
        budget: budget.clone(),
        seed: spec.rng_seed,
        notes,
    };

    let mut ambiguous = false;
    for (i, g) in gens.iter().enumerate() {
        let v = classify_projective_distality(g, cfg)?;
        match v.verdict {
            Verdict::NotDistal => {
                notes.push(format!("generator {i} fails the cyclic test"));
                return Ok(finish(Verdict::NotDistal, attach_word(v.certificate, &[i]), notes));
            }
            Verdict::Inconclusive => {
                ambiguous = true;
                notes.push(format!("generator {i} is inconclusive"));
            }
            Verdict::Distal => {}
        }
    }

    let units =
        gens.iter().map(|g| normalize_to_unimodular(g, &cfg.tolerances).map(|n| n.unit)).collect::<Result<Vec<_>>>()?;
    let bound = S::lit(cfg.words.growth_factor * d as f64);
    let stats = match scan_words(&units, spec, cfg, bound)? {
        Ok(stats) => stats,
        Err((word, norm)) => {
            notes.push("a word of normalized generators outgrew the bound".into());
            return Ok(finish(Verdict::NotDistal, Certificate::UnboundedWord { word, norm, bound }, notes));
        }
    };

    let mut oracle_words = 0;
    for (k, (_, word)) in stats.heaviest.iter().take(cfg.words.oracle_words).enumerate() {
        oracle_words += 1;
        let w = word_matrix(gens, word)?;
        let v = classify_projective_distality(&w, cfg)?;
        match v.verdict {
            Verdict::NotDistal => {
                notes.push(format!("word {word:?} fails the cyclic test"));
                return Ok(finish(Verdict::NotDistal, attach_word(v.certificate, word), notes));
            }
            Verdict::Inconclusive => ambiguous = true,
            Verdict::Distal => {}
        }
        let map = AffineSphereMap::projective(w, &cfg.tolerances)?;
        let ob = cfg.words.oracle;
        let seed = spec.rng_seed.wrapping_add(k as u64 + 1);
        if let Some(mut pair) =
            proximal_pair_search(&map, ob.samples, ob.iterations, S::lit(ob.eps), S::lit(ob.delta), seed)?
        {
            pair.word = Some(word.clone());
            notes.push(format!("orbit oracle found a proximal pair for word {word:?}"));
            return Ok(finish(Verdict::NotDistal, Certificate::ProximalPair(pair), notes));
        }
    }

    let certificate = Certificate::BudgetExhausted {
        words_checked: stats.checked,
        exhaustive_length: exhaustive_length(gens.len(), spec, cfg),
        max_word_length: stats.max_length,
        min_word_norm: stats.min_norm,
        max_word_norm: stats.max_norm,
        bound,
        oracle_words,
    };
    let verdict = if ambiguous { Verdict::Inconclusive } else { Verdict::Distal };
    Ok(finish(verdict, certificate, notes))
}

fn attach_word<S>(cert: Certificate<S>, word: &[usize]) -> Certificate<S> {
    match cert {
        Certificate::ProximalPair(mut p) => {
            p.word = Some(word.to_vec());
            Certificate::ProximalPair(p)
        }
        other => other,
    }
}

fn exhaustive_length<S>(generators: usize, spec: &SemigroupSpec<S>, cfg: &Config) -> usize {
    if generators <= cfg.words.exhaustive_generators {
        spec.word_length_budget.min(cfg.words.exhaustive_length)
    } else {
        0
    }
}

/// A word together with its normalized operator norm.
type Heavy<S> = (Vec<usize>, S);

/// Enumerates all words up to the exhaustive length level by level, then
/// samples random longer words. Returns the shortest, lexicographically
/// first word whose norm exceeds `bound`, if any.
fn scan_words<S: Real>(
    units: &[Matrix<S>],
    spec: &SemigroupSpec<S>,
    cfg: &Config,
    bound: S,
) -> Result<std::result::Result<WordStats<S>, Heavy<S>>> {
    let n = units.len();
    let mut stats =
        WordStats { checked: 0, min_norm: S::infinity(), max_norm: S::zero(), max_length: 0, heaviest: Vec::new() };
    let keep = cfg.words.oracle_words.max(1);
    let record = |stats: &mut WordStats<S>, batch: Vec<(Vec<usize>, S)>| -> Option<(Vec<usize>, S)> {
        for (word, norm) in batch {
            if norm > bound {
                return Some((word, norm));
            }
            stats.checked += 1;
            stats.min_norm = stats.min_norm.min(norm);
            stats.max_norm = stats.max_norm.max(norm);
            stats.max_length = stats.max_length.max(word.len());
            if word.len() > 1 {
                stats.heaviest.push((norm, word));
                stats.heaviest.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then_with(|| a.1.cmp(&b.1)));
                stats.heaviest.truncate(keep);
            }
        }
        None
    };

    let exhaustive = exhaustive_length(n, spec, cfg);
    let mut level: Vec<(Vec<usize>, Matrix<S>)> = vec![(Vec::new(), Matrix::identity(units[0].dim()))];
    for _ in 0..exhaustive {
        level = level
            .par_iter()
            .flat_map_iter(|(w, m)| {
                (0..n).map(move |i| {
                    let mut word = w.clone();
                    word.push(i);
                    (word, m.mul(&units[i]))
                })
            })
            .collect();
        let batch = level.par_iter().map(|(w, m)| (w.clone(), operator_norm(m))).collect();
        if let Some(hit) = record(&mut stats, batch) {
            return Ok(Err(hit));
        }
    }

    if spec.word_length_budget > exhaustive && spec.sample_count > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
        let mut words: Vec<Vec<usize>> = (0..spec.sample_count)
            .map(|_| {
                let len = rng.random_range(exhaustive + 1..=spec.word_length_budget);
                (0..len).map(|_| rng.random_range(0..n)).collect()
            })
            .collect();
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        words.dedup();
        let batch = words
            .into_par_iter()
            .map(|w| -> Result<(Vec<usize>, S)> {
                let m = product(units, &w)?;
                Ok((w, operator_norm(&m)))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(hit) = record(&mut stats, batch) {
            return Ok(Err(hit));
        }
    }
    Ok(Ok(stats))
}
