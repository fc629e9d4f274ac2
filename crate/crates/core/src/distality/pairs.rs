//! Construction of proximal pairs from spectral data.

use crate::config::Config;
use crate::error::Result;
use crate::linalg::{contraction_subspace, vector, EigenStructure, Matrix};
use crate::scalar::Real;
use crate::sphere::SpherePoint;

use super::ProximalPair;

/// Candidate pairs `(x, y)`, separated by at least `delta`, whose projective
/// orbits should merge:
///
/// * split moduli: `x` in the expanding subspace, `y = x + c v` with `v`
///   contracting;
/// * defective: `x = u`, `y = u + c N u` for the nilpotent part `N`;
/// * as a fallback, pairs of coordinate directions.
fn candidates<S: Real>(unit: &Matrix<S>, structure: &EigenStructure<S>, cfg: &Config) -> Result<Vec<(Vec<S>, Vec<S>)>> {
    let tol = &cfg.tolerances;
    let delta = S::lit(cfg.oracle.delta.max(0.3));
    let d = unit.dim();
    let mut out = Vec::new();
    let spread = |u: &[S], v: &[S], out: &mut Vec<(Vec<S>, Vec<S>)>| {
        let Some(x) = vector::normalize(u) else { return };
        for sign in [S::one(), -S::one()] {
            let mut c = S::one();
            for _ in 0..64 {
                if let Some(y) = vector::normalize(&vector::axpy(u, sign * c, v)) {
                    if vector::distance(&x, &y) >= delta {
                        out.push((x.clone(), y));
                        break;
                    }
                }
                c = c + c;
            }
        }
    };
    let contracting = contraction_subspace(unit, tol)?;
    let expanding = contraction_subspace(&unit.inverse(tol.singular)?, tol)?;
    if let (Some(u), Some(v)) = (expanding.first(), contracting.first()) {
        spread(u, v, &mut out);
    }
    let scale = crate::linalg::operator_norm(unit);
    for c in structure.clusters.iter().filter(|c| c.geometric < c.algebraic) {
        if c.value.im.abs() > S::lit(tol.rank) * scale || c.value.re == S::zero() {
            continue;
        }
        let nil = unit.shift(c.value.re).scale(c.value.re.recip());
        let u = (0..d)
            .map(|j| vector::basis(d, j))
            .max_by(|a, b| vector::norm(&nil.mul_vec(a)).partial_cmp(&vector::norm(&nil.mul_vec(b))).unwrap())
            .expect("dimension is positive");
        let v = nil.mul_vec(&u);
        spread(&u, &v, &mut out);
    }
    for i in 0..d {
        for j in 0..d {
            if i != j {
                spread(&vector::basis(d, i), &vector::basis(d, j), &mut out);
            }
        }
    }
    Ok(out)
}

/// Searches the candidates for a pair whose separation under `T^(2^k)`,
/// `k <= max_power_log2`, drops below the oracle `eps`.
pub(super) fn certify<S: Real>(
    t: &Matrix<S>,
    unit: &Matrix<S>,
    structure: &EigenStructure<S>,
    cfg: &Config,
) -> Result<Option<ProximalPair<S>>> {
    let eps = S::lit(cfg.oracle.eps);
    let renorm = |m: Matrix<S>| {
        let s = m.max_abs();
        if s > S::zero() && s.is_finite() {
            m.scale(s.recip())
        } else {
            m
        }
    };
    // powers[k] is the same matrix `projective_pow(2^k)` produces
    let mut powers = vec![renorm(t.clone())];
    for _ in 0..cfg.words.max_power_log2 {
        let p = powers.last().expect("non-empty");
        powers.push(renorm(p.mul(p)));
    }
    for (x, y) in candidates(unit, structure, cfg)? {
        let before = vector::distance(&x, &y);
        for (k, p) in powers.iter().enumerate() {
            let (Some(fx), Some(fy)) = (vector::normalize(&p.mul_vec(&x)), vector::normalize(&p.mul_vec(&y))) else {
                break;
            };
            let after = vector::distance(&fx, &fy);
            if after < eps {
                return Ok(Some(ProximalPair {
                    x: SpherePoint::from_vector(&x)?,
                    y: SpherePoint::from_vector(&y)?,
                    iterate: 1u64 << k,
                    separation_before: before,
                    separation_after: after,
                    word: None,
                }));
            }
        }
    }
    Ok(None)
}
