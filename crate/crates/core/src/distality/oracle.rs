//! Orbit-based search for proximal pairs.
//!
//! A pair `x != y` whose iterates come arbitrarily close certifies that an
//! action is not distal. The search samples points, follows their orbits and
//! reports the first well-separated pair whose orbits meet within `eps`.
//! Failing to find one proves nothing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{vector, Matrix};
use crate::scalar::Real;
use crate::sphere::{AffineSphereMap, SpherePoint};

/// Two points whose orbits approach each other.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProximalPair<S> {
    pub x: SpherePoint<S>,
    pub y: SpherePoint<S>,
    /// Number of applications of the map after which the separation was
    /// measured.
    pub iterate: u64,
    pub separation_before: S,
    pub separation_after: S,
    /// Generator indices of the semigroup word the pair refers to, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<usize>>,
}

impl<S: Real> ProximalPair<S> {
    /// Re-measures the pair under `map` by plain iteration.
    pub fn replay_affine(&self, map: &AffineSphereMap<S>) -> Result<(S, S)> {
        let mut x = self.x.clone();
        let mut y = self.y.clone();
        for _ in 0..self.iterate {
            x = map.apply(&x)?;
            y = map.apply(&y)?;
        }
        Ok((self.x.distance(&self.y), x.distance(&y)))
    }

    /// Re-measures the pair under the projective action of `t`, using
    /// repeated squaring for the power.
    pub fn replay_projective(&self, t: &Matrix<S>) -> Result<(S, S)> {
        let p = t.projective_pow(self.iterate);
        let fx = SpherePoint::from_vector(&p.mul_vec(self.x.coords()))?;
        let fy = SpherePoint::from_vector(&p.mul_vec(self.y.coords()))?;
        Ok((self.x.distance(&self.y), fx.distance(&fy)))
    }

    /// Whether a replayed measurement reproduces the recorded one within a
    /// relative `slack` (or the contraction is at least as strong).
    pub fn matches(&self, before: S, after: S, slack: S) -> bool {
        let rel = |a: S, b: S| (a - b).abs() <= slack * b.abs().max(S::min_positive_value());
        rel(before, self.separation_before) && (after <= self.separation_after || rel(after, self.separation_after))
    }
}

/// Uniformly distributed point on the sphere.
pub fn random_sphere_point<S: Real>(d: usize, rng: &mut ChaCha8Rng) -> SpherePoint<S> {
    loop {
        let v: Vec<S> = (0..d)
            .map(|_| {
                let g: f64 = StandardNormal.sample(rng);
                S::lit(g)
            })
            .collect();
        if let Ok(p) = SpherePoint::from_vector(&v) {
            return p;
        }
    }
}

/// Samples `samples` points, iterates each `iterations` times and returns
/// the lexicographically first pair `(i, j)` with initial separation at
/// least `delta` whose separation drops below `eps`.
pub fn proximal_pair_search<S: Real>(
    map: &AffineSphereMap<S>,
    samples: usize,
    iterations: usize,
    eps: S,
    delta: S,
    seed: u64,
) -> Result<Option<ProximalPair<S>>> {
    if !(eps < delta) {
        return Err(Error::InvalidSpec("proximal search requires eps < delta".into()));
    }
    if !map.regime().is_invertible() {
        return Err(match map.regime() {
            crate::sphere::Regime::NonInjective { preimage_norm, .. } => {
                Error::NonInjective(preimage_norm.to_f64_lossy())
            }
            _ => Error::DegenerateMap,
        });
    }
    let d = map.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<SpherePoint<S>> = (0..samples).map(|_| random_sphere_point(d, &mut rng)).collect();
    // trajectories[i] holds iterates 0..=iterations, flattened
    let trajectories: Vec<Vec<S>> = starts
        .par_iter()
        .map(|x| -> Result<Vec<S>> {
            let mut out = Vec::with_capacity((iterations + 1) * d);
            let mut p = x.clone();
            out.extend_from_slice(p.coords());
            for _ in 0..iterations {
                p = map.apply(&p)?;
                out.extend_from_slice(p.coords());
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let eps2 = eps * eps;
    let found = (0..samples).into_par_iter().find_map_first(|i| {
        for j in i + 1..samples {
            let (a, b) = (&trajectories[i], &trajectories[j]);
            let before = vector::distance(&a[..d], &b[..d]);
            if before < delta {
                continue;
            }
            for m in 1..=iterations {
                let (p, q) = (&a[m * d..(m + 1) * d], &b[m * d..(m + 1) * d]);
                if vector::distance_squared(p, q) < eps2 {
                    let sep = vector::distance(p, q);
                    if sep < eps {
                        return Some((i, j, m, before, sep));
                    }
                }
            }
        }
        None
    });
    Ok(found.map(|(i, j, m, before, after)| ProximalPair {
        x: starts[i].clone(),
        y: starts[j].clone(),
        iterate: m as u64,
        separation_before: before,
        separation_after: after,
        word: None,
    }))
}
