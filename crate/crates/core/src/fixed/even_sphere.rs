//! Non-distal affine maps on `S^2` from orthogonal `T`.
//!
//! An orthogonal 3x3 matrix either is symmetric, with an invariant plane on
//! which it acts as `+I` or `-I`, or is `T = U D` with `U` a rotation about
//! an axis `u` and `D` equal to `det T` on `u` and the identity on `u`'s
//! complement. With `a = u / 2` the map satisfies `T_a = U D_a` with `U`
//! commuting with `D_a`; since `U` is an isometry, orbit separations of
//! `T_a` are those of `D_a`, which has fixed points on every great circle
//! through `u`.

use serde::Serialize;

use crate::config::Config;
use crate::distality::{proximal_pair_search, ProximalPair};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, svd, vector, Matrix};
use crate::scalar::Real;
use crate::sphere::{AffineSphereMap, SpherePoint};

use super::witness::{choose_nondistal_witness, WitnessCase};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "path")]
pub enum EvenSpherePath {
    /// Symmetric `T`: the witness lives on an eigenplane.
    InvariantPlane { case: WitnessCase },
    /// `T = U D` with `D` acting as `epsilon` on the rotation axis.
    RotationAxis { epsilon: i8, angle: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Real + Serialize"))]
pub struct EvenSphereWitness<S> {
    pub translation: Vec<S>,
    pub pair: ProximalPair<S>,
    /// Smallest separation of the pair along its first `pair.iterate` steps.
    pub min_separation: S,
    pub path: EvenSpherePath,
    /// Times `m` with `|U^m - I| < recurrence`, in increasing order.
    pub recurrence_times: Vec<u64>,
    /// Order of `U` when its angle is a rational multiple of a full turn.
    pub exact_order: Option<u64>,
}

const RECORDED_RECURRENCES: usize = 8;

/// Builds `a` with `0 < |a| < 1` and a proximal pair for the affine map of
/// an orthogonal 3x3 `T` on `S^2`, verified by iterating that map.
pub fn isometry_even_sphere_witness<S: Real>(t: &Matrix<S>, cfg: &Config) -> Result<EvenSphereWitness<S>> {
    let tol = &cfg.tolerances;
    if t.dim() != 3 {
        return Err(Error::DimensionUnsupported(t.dim()));
    }
    let defect = t.orthogonality_defect();
    if !(defect <= S::lit(tol.orthogonality)) {
        return Err(Error::NotOrthogonal(defect.to_f64_lossy()));
    }
    let complex = eigenvalues(t).iter().any(|z| z.im.abs() > S::lit(tol.cluster));
    let (a, plane, plane_map, plane_a, path, recurrence_times, exact_order) = if complex {
        let epsilon = if t.det() > S::zero() { S::one() } else { -S::one() };
        let null = svd::svd(&t.shift(epsilon)).right;
        let axis = vector::normalize(&vector::canonical_sign(null[2].clone())).ok_or(Error::DegenerateMap)?;
        let pick =
            (0..3).min_by(|&i, &j| axis[i].abs().partial_cmp(&axis[j].abs()).unwrap()).expect("three coordinates");
        let b = vector::orthogonalize(&vector::basis(3, pick), std::slice::from_ref(&axis));
        let b = vector::normalize(&b).ok_or(Error::DegenerateMap)?;
        let half = S::lit(0.5);
        let a = vector::scale(&axis, half);
        let d2 = Matrix::diag(&[epsilon, S::one()]);
        // rotation angle of U, read off the complex pair
        let angle = eigenvalues(t).iter().map(|z| z.im.atan2(z.re).abs()).fold(S::zero(), S::max);
        let (times, order) = recurrences(angle, cfg);
        let path = EvenSpherePath::RotationAxis {
            epsilon: if epsilon > S::zero() { 1 } else { -1 },
            angle: angle.to_f64_lossy(),
        };
        (a, [axis, b], d2, vec![half, S::zero()], path, times, order)
    } else {
        let plane = eigenplane(t)?;
        let t2 = restrict(t, &plane)?;
        let w = choose_nondistal_witness(&t2, tol)?;
        let a = lift(&plane, &w.translation);
        (a, plane, t2, w.translation.clone(), EvenSpherePath::InvariantPlane { case: w.case }, Vec::new(), None)
    };

    let map2 = AffineSphereMap::new(plane_map, plane_a, tol)?;
    let ob = cfg.oracle;
    let pair2 = proximal_pair_search(&map2, ob.samples, ob.iterations, S::lit(ob.eps), S::lit(ob.delta), cfg.seed)?
        .ok_or_else(|| Error::HypothesisNotMet("no proximal pair on the invariant circle".into()))?;

    let map = AffineSphereMap::new(t.clone(), a.clone(), tol)?;
    let x = SpherePoint::from_vector(&lift(&plane, pair2.x.coords()))?;
    let y = SpherePoint::from_vector(&lift(&plane, pair2.y.coords()))?;
    let before = x.distance(&y);
    let (mut fx, mut fy) = (x.clone(), y.clone());
    let mut min_separation = before;
    for _ in 0..pair2.iterate {
        fx = map.apply(&fx)?;
        fy = map.apply(&fy)?;
        min_separation = min_separation.min(fx.distance(&fy));
    }
    let after = fx.distance(&fy);
    if !(before >= S::lit(ob.delta) && min_separation < S::lit(tol.witness_separation)) {
        return Err(Error::HypothesisNotMet(format!(
            "pair separation went from {before} to {min_separation}, not below {}",
            tol.witness_separation
        )));
    }
    let pair =
        ProximalPair { x, y, iterate: pair2.iterate, separation_before: before, separation_after: after, word: None };
    Ok(EvenSphereWitness { translation: a, pair, min_separation, path, recurrence_times, exact_order })
}

/// Orthonormal basis of an eigenspace of the symmetric orthogonal `T` of
/// dimension at least 2, preferring eigenvalue `+1`.
fn eigenplane<S: Real>(t: &Matrix<S>) -> Result<[Vec<S>; 2]> {
    let half = S::lit(0.5);
    for sign in [S::one(), -S::one()] {
        let projector = Matrix::identity(3).add(&t.scale(sign)).scale(half);
        let s = svd::svd(&projector);
        let rank = s.values.iter().filter(|&&v| v > half).count();
        if rank >= 2 {
            let mut left = s.left.into_iter();
            let first = left.next().expect("three singular vectors");
            let second = left.next().expect("three singular vectors");
            return Ok([first, second]);
        }
    }
    Err(Error::HypothesisNotMet("no two-dimensional eigenspace".into()))
}

/// The 2x2 matrix of `T` on the plane spanned by an orthonormal pair.
fn restrict<S: Real>(t: &Matrix<S>, plane: &[Vec<S>; 2]) -> Result<Matrix<S>> {
    let images: Vec<Vec<S>> = plane.iter().map(|b| t.mul_vec(b)).collect();
    let mut data = Vec::with_capacity(4);
    for row in plane {
        for img in &images {
            data.push(vector::dot(row, img));
        }
    }
    Matrix::from_row_major(2, data)
}

fn lift<S: Real>(plane: &[Vec<S>; 2], c: &[S]) -> Vec<S> {
    vector::axpy(&vector::scale(&plane[0], c[0]), c[1], &plane[1])
}

/// Times `m <= recurrence_scan` with `|U^m - I| = 2 |sin(m angle / 2)|`
/// below the recurrence tolerance. An exact return marks a rational angle,
/// whose order then generates all further times.
fn recurrences<S: Real>(angle: S, cfg: &Config) -> (Vec<u64>, Option<u64>) {
    let close = S::lit(cfg.tolerances.recurrence);
    let mut times = Vec::new();
    for m in 1..=cfg.words.recurrence_scan as u64 {
        let dist = (S::lit(m as f64) * angle / S::lit(2.0)).sin().abs() * S::lit(2.0);
        if dist <= S::epsilon() * S::lit(64.0 * m as f64) {
            let order = m;
            let mut exact: Vec<u64> = times.into_iter().filter(|t| t % order == 0).collect();
            let mut k = exact.last().map_or(1, |last| last / order + 1);
            while exact.len() < RECORDED_RECURRENCES {
                exact.push(k * order);
                k += 1;
            }
            return (exact, Some(order));
        }
        if dist < close && times.len() < RECORDED_RECURRENCES {
            times.push(m);
        }
    }
    (times, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<f64>;

    fn about_e3(theta: f64) -> M {
        let (s, c) = theta.sin_cos();
        M::new([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    }

    #[test]
    fn rotation_about_e3() {
        let w = isometry_even_sphere_witness(&about_e3(1.0), &Config::default()).unwrap();
        assert!(vector::distance(&w.translation, &[0.0, 0.0, 0.5]) < 1e-12);
        assert!(w.min_separation < 1e-3 && w.pair.separation_before >= 0.3);
        assert!(matches!(w.path, EvenSpherePath::RotationAxis { epsilon: 1, .. }));
        assert!(w.exact_order.is_none());
        assert!(!w.recurrence_times.is_empty());
        // pair lies on the circle through +-e3 and +-e1
        assert!(w.pair.x.coords()[1].abs() < 1e-15 && w.pair.y.coords()[1].abs() < 1e-15);
    }

    #[test]
    fn rational_rotation_has_exact_order() {
        let w = isometry_even_sphere_witness(&about_e3(core::f64::consts::FRAC_PI_2), &Config::default()).unwrap();
        assert_eq!(w.exact_order, Some(4));
        assert_eq!(w.recurrence_times[..3], [4, 8, 12]);
    }

    #[test]
    fn symmetric_cases() {
        let w = isometry_even_sphere_witness(&M::diag(&[1.0, -1.0, -1.0]), &Config::default()).unwrap();
        assert_eq!(w.path, EvenSpherePath::InvariantPlane { case: WitnessCase::NegativeEigenvalues });
        assert!(w.translation[0].abs() < 1e-15);
        assert!(w.min_separation < 1e-3);
        let w = isometry_even_sphere_witness(&M::identity(3), &Config::default()).unwrap();
        assert_eq!(w.path, EvenSpherePath::InvariantPlane { case: WitnessCase::PositiveEigenvalue });
        assert!((vector::norm(&w.translation) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reflection_with_rotation() {
        let t = about_e3(0.7).mul(&M::diag(&[1.0, 1.0, -1.0]));
        let w = isometry_even_sphere_witness(&t, &Config::default()).unwrap();
        assert!(matches!(w.path, EvenSpherePath::RotationAxis { epsilon: -1, .. }));
        assert!(w.min_separation < 1e-3);
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = Config::default();
        assert!(matches!(isometry_even_sphere_witness(&M::diag(&[2.0, 1.0, 1.0]), &cfg), Err(Error::NotOrthogonal(_))));
        assert_eq!(isometry_even_sphere_witness(&M::identity(2), &cfg), Err(Error::DimensionUnsupported(2)));
    }
}
