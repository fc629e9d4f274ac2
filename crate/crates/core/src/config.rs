//! Tolerances and budgets. Every numerical threshold in the crate is read
//! from a [`Config`]; nothing is hard-coded at call sites.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Allowed deviation of a sphere point from unit norm.
    pub unit_norm: f64,
    /// Relative band around modulus one for eigenvalues.
    pub spectral: f64,
    /// Relative numerical-rank threshold for semisimplicity tests.
    pub rank: f64,
    /// Maximum residual accepted for fixed and periodic points.
    pub residual: f64,
    /// Terminal bracket width for bisection.
    pub bisection: f64,
    /// Eigenvalues closer than this (relative to |T|) form one cluster.
    pub cluster: f64,
    /// Determinants below this magnitude are singular.
    pub singular: f64,
    /// Band around |T^-1 a| = 1 classified as degenerate.
    pub classification: f64,
    /// Modulus deviations above this floor but inside `spectral` make a
    /// semisimple verdict inconclusive.
    pub ambiguity_floor: f64,
    /// Relative reconstruction tolerance for canonical forms.
    pub reconstruction: f64,
    /// Orthogonality tolerance |T^T T - I|.
    pub orthogonality: f64,
    /// Eigen-coordinates of a translation below this fraction of its norm
    /// count as zero.
    pub zero_coordinate: f64,
    /// Initial offset, relative to |T|, of a bisection endpoint from the
    /// spectrum.
    pub spectrum_guard: f64,
    /// Separation a witness pair must fall below.
    pub witness_separation: f64,
    /// Minimal displacement showing that a map is not the identity, and the
    /// distance |U^m - I| that counts as a recurrence.
    pub recurrence: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit_norm: 1e-9,
            spectral: 1e-7,
            rank: 1e-8,
            residual: 1e-8,
            bisection: 1e-12,
            cluster: 1e-7,
            singular: 1e-12,
            classification: 1e-9,
            ambiguity_floor: 1e-12,
            reconstruction: 1e-9,
            orthogonality: 1e-9,
            zero_coordinate: 1e-10,
            spectrum_guard: 1e-10,
            witness_separation: 1e-3,
            recurrence: 1e-3,
        }
    }
}

/// Budget of the orbit-based proximal-pair oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleBudget {
    pub samples: usize,
    pub iterations: usize,
    pub eps: f64,
    pub delta: f64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { samples: 64, iterations: 2000, eps: 1e-4, delta: 0.3 }
    }
}

/// Budget of the semigroup word search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WordBudget {
    /// Words up to this length are enumerated exhaustively when the
    /// semigroup has at most `exhaustive_generators` generators.
    pub exhaustive_length: usize,
    pub exhaustive_generators: usize,
    /// Multiplier `c` of the growth bound `c * d` for normalized words.
    pub growth_factor: f64,
    /// Number of words handed to the spectral test and the orbit oracle.
    pub oracle_words: usize,
    /// Oracle budget used per sampled word.
    pub oracle: OracleBudget,
    /// Largest exponent `k` tried when certifying a pair via `T^(2^k)`.
    pub max_power_log2: u32,
    /// Scan limit for recurrence times of isometries.
    pub recurrence_scan: usize,
}

impl Default for WordBudget {
    fn default() -> Self {
        WordBudget {
            exhaustive_length: 8,
            exhaustive_generators: 3,
            growth_factor: 10.0,
            oracle_words: 8,
            oracle: OracleBudget { samples: 24, iterations: 400, eps: 1e-4, delta: 0.3 },
            max_power_log2: 60,
            recurrence_scan: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tolerances: Tolerances,
    pub oracle: OracleBudget,
    pub words: WordBudget,
    pub seed: u64,
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        let all = [
            ("unit_norm", t.unit_norm),
            ("spectral", t.spectral),
            ("rank", t.rank),
            ("residual", t.residual),
            ("bisection", t.bisection),
            ("cluster", t.cluster),
            ("singular", t.singular),
            ("classification", t.classification),
            ("ambiguity_floor", t.ambiguity_floor),
            ("reconstruction", t.reconstruction),
            ("orthogonality", t.orthogonality),
            ("zero_coordinate", t.zero_coordinate),
            ("spectrum_guard", t.spectrum_guard),
            ("witness_separation", t.witness_separation),
            ("recurrence", t.recurrence),
        ];
        for (name, v) in all {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidSpec(format!("tolerance {name} must be positive")));
            }
        }
        for budget in [&self.oracle, &self.words.oracle] {
            if !(budget.eps > 0.0 && budget.eps < budget.delta) {
                return Err(Error::InvalidSpec("oracle requires 0 < eps < delta".into()));
            }
        }
        if !(self.words.growth_factor > 0.0) {
            return Err(Error::InvalidSpec("growth_factor must be positive".into()));
        }
        Ok(())
    }
}
