//! Translations that make an affine circle map non-distal.
//!
//! A circle homeomorphism other than the identity that has a fixed point or
//! a period-2 point is not distal. [`choose_nondistal_witness`] picks a
//! translation `a` with `|T^-1 a| < 1` producing such a point.

use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{svd, vector, CanonicalKind, Matrix};
use crate::scalar::Real;
use crate::sphere::{AffineSphereMap, SpherePoint};

use super::{
    affine_step, bisect, find_fixed_point_complex, find_fixed_point_real_positive, Branch, Canonical, FixedPointResult,
    PeriodicPoints2, Prepared,
};

/// Eigenvalue class of the rescaled matrix, which selects the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum WitnessCase {
    /// A real positive eigenvalue; `a = T e1 / 2`.
    PositiveEigenvalue,
    /// Both eigenvalues negative; `a` along an eigenvector gives a 2-cycle.
    NegativeEigenvalues,
    /// A rotation with `0 < cos theta < 1`; `|a| = (|sin theta| + 1) / 2`.
    ComplexIsometry,
    /// A non-isometry with `0 < cos theta < 1`; bisection on `(0, 2 r1)`.
    ComplexAcute,
    /// `cos theta <= 0` and `|T| > 5 sqrt(det T)`; bisection on `(0, 1)`.
    LargeNorm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", bound(serialize = "S: Real + Serialize"))]
pub enum WitnessPoints<S> {
    Fixed(FixedPointResult<S>),
    Periodic(PeriodicPoints2<S>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Real + Serialize"))]
pub struct NonDistalWitness<S> {
    pub translation: Vec<S>,
    pub case: WitnessCase,
    pub points: WitnessPoints<S>,
    /// A point that the square of the map moves, showing it is not the
    /// identity.
    pub moved_point: SpherePoint<S>,
    pub square_displacement: S,
}

/// Picks `a` so that the affine map of the 2x2 matrix `T` has a fixed point
/// or a period-2 point, finds that point and checks that the square of the
/// map is not the identity.
pub fn choose_nondistal_witness<S: Real>(t: &Matrix<S>, tol: &Tolerances) -> Result<NonDistalWitness<S>> {
    if t.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: t.dim() });
    }
    let n = crate::linalg::normalize_to_unimodular(t, tol)?;
    let tp = &n.unit;
    let canon = Canonical::new(tp, &[S::one(), S::zero()], tol)?;
    let half = S::lit(0.5);
    let (case, a, points) = match canon.kind {
        CanonicalKind::RealDiagonalizable { t: big, .. } | CanonicalKind::JordanBlock { lambda: big, .. }
            if big > S::zero() =>
        {
            let a = vector::scale(&t.column(0), half);
            let fixed = find_fixed_point_real_positive(t, &a, tol)?;
            (WitnessCase::PositiveEigenvalue, a, WitnessPoints::Fixed(fixed))
        }
        CanonicalKind::RealDiagonalizable { t: big, s, ref basis } => {
            let (u, v) = (basis.column(0), basis.column(1));
            let (dir, mu) = if v[0].abs() > u[0].abs() { (v, s) } else { (u, big) };
            two_cycle(t, &dir, mu / n.scale, tol)?
        }
        CanonicalKind::JordanBlock { lambda, ref basis } => two_cycle(t, &basis.column(0), lambda / n.scale, tol)?,
        CanonicalKind::ComplexPair { modulus, angle, .. } => {
            let (sn, cs) = angle.sin_cos();
            if cs > S::zero() {
                match acute_translation(tp, tol) {
                    Some(ap) if tp.orthogonality_defect() > S::lit(tol.orthogonality) => {
                        let a = vector::scale(&ap, n.scale.recip());
                        let fixed = resolvent_fixed_point(t, &a, S::lit(2.0) * modulus * cs, tol)?;
                        (WitnessCase::ComplexAcute, a, WitnessPoints::Fixed(fixed))
                    }
                    _ => {
                        let ap = [(sn.abs() + S::one()) * half, S::zero()];
                        let a = vector::scale(&ap, n.scale.recip());
                        let fixed = find_fixed_point_complex(t, &a, tol)?;
                        (WitnessCase::ComplexIsometry, a, WitnessPoints::Fixed(fixed))
                    }
                }
            } else {
                let five = S::lit(5.0);
                let Some(ap) = large_norm_translation(tp, five, tol) else {
                    return Err(Error::OutsideCoveredClasses(format!(
                        "cos theta = {cs} <= 0 and |T| / sqrt|det T| = {} <= 5",
                        crate::linalg::operator_norm(tp)
                    )));
                };
                let a = vector::scale(&ap, n.scale.recip());
                let fixed = resolvent_fixed_point(t, &a, S::one(), tol)?;
                (WitnessCase::LargeNorm, a, WitnessPoints::Fixed(fixed))
            }
        }
    };
    let (moved_point, square_displacement) = nontrivial_square_point(t, &a, tol)?;
    Ok(NonDistalWitness { translation: a, case, points, moved_point, square_displacement })
}

/// `a = (|mu| / 2) v` for a unit eigenvector `v` with negative eigenvalue
/// `mu`: the map swaps `v` and `-v`.
fn two_cycle<S: Real>(
    t: &Matrix<S>,
    dir: &[S],
    mu: S,
    tol: &Tolerances,
) -> Result<(WitnessCase, Vec<S>, WitnessPoints<S>)> {
    let v = vector::normalize(dir).ok_or(Error::DegenerateMap)?;
    let a = vector::scale(&v, mu.abs() * S::lit(0.5));
    let p = SpherePoint::from_vector(&v)?;
    let cycle = PeriodicPoints2::measure(t, &a, vec![p.clone(), p.antipode()], vec![1, 0])?;
    if !(cycle.max_residual() <= S::lit(tol.residual)) {
        return Err(Error::HypothesisNotMet(format!("2-cycle residual {}", cycle.max_residual())));
    }
    Ok((WitnessCase::NegativeEigenvalues, a, WitnessPoints::Periodic(cycle)))
}

/// For `det T' = 1` with complex spectrum: `a = c T' b` with
/// `c = |T'^2 b|^(-1/2)`, so that `|T'^-1 a| < 1 < |T' a|`. Tries the
/// coordinate directions before the top singular direction of `T'^2`.
fn acute_translation<S: Real>(tp: &Matrix<S>, tol: &Tolerances) -> Option<Vec<S>> {
    let sq = tp.mul(tp);
    let margin = S::one() + S::lit(tol.spectral);
    let top = svd::svd(&sq).right.into_iter().next()?;
    [vector::basis(2, 0), vector::basis(2, 1), top].into_iter().find_map(|b| {
        let grow = vector::norm(&sq.mul_vec(&b));
        (grow > margin).then(|| vector::scale(&tp.mul_vec(&b), grow.sqrt().recip()))
    })
}

/// For `det T' = 1` and `|T'| > bound`: `a = r u` with `bound < r` and
/// `|T'^-1 a| < 1`. Tries the coordinate directions before the top left
/// singular direction, and takes `r = min(6, (5 + m) / 2)` where
/// `m = 1 / |T'^-1 u|` is the largest admissible length.
fn large_norm_translation<S: Real>(tp: &Matrix<S>, bound: S, tol: &Tolerances) -> Option<Vec<S>> {
    let inv = tp.inverse(tol.singular).ok()?;
    let margin = bound * (S::one() + S::lit(tol.spectral));
    let top = svd::svd(tp).left.into_iter().next()?;
    [vector::basis(2, 0), vector::basis(2, 1), top].into_iter().find_map(|u| {
        let m = vector::norm(&inv.mul_vec(&u)).recip();
        (m > margin).then(|| {
            let r = S::lit(6.0).min((bound + m) * S::lit(0.5));
            vector::scale(&u, r)
        })
    })
}

/// Bisection on `(0, hi)` for a complex-spectrum map whose resolvent norm
/// is known to exceed 1 at `hi` (in rescaled units).
fn resolvent_fixed_point<S: Real>(t: &Matrix<S>, a: &[S], hi: S, tol: &Tolerances) -> Result<FixedPointResult<S>> {
    let p = Prepared::new(t, a, tol)?;
    let canon = Canonical::new(&p.tp, &p.ap, tol)?;
    let (x, gamma) = p.solve(&canon, S::zero(), hi, tol)?;
    p.finish(&x, gamma, Branch::ComplexResolvent, tol)
}

/// Among 64 equally spaced points of the circle, the one moved furthest by
/// the square of the map. Fails if no point moves by `recurrence`.
pub fn nontrivial_square_point<S: Real>(t: &Matrix<S>, a: &[S], tol: &Tolerances) -> Result<(SpherePoint<S>, S)> {
    let mut best: Option<(SpherePoint<S>, S)> = None;
    for k in 0..64 {
        let phi = S::lit(0.1 + k as f64 * core::f64::consts::TAU / 64.0);
        let x = SpherePoint::from_vector(&[phi.cos(), phi.sin()])?;
        let Ok(once) = affine_step(t, a, x.coords()) else { continue };
        let Ok(twice) = affine_step(t, a, &once) else { continue };
        let moved = vector::distance(&twice, x.coords());
        if best.as_ref().is_none_or(|(_, m)| moved > *m) {
            best = Some((x, moved));
        }
    }
    match best {
        Some((x, m)) if m >= S::lit(tol.recurrence) => Ok((x, m)),
        _ => Err(Error::HypothesisNotMet("the square of the map is numerically the identity".into())),
    }
}

/// The four period-2 points of `x -> (a - x) / |a - x|`: `a/|a|`, its
/// antipode, `x0 = a/2 + p sqrt(1 - |a|^2/4)` for the unit `p` orthogonal
/// to `a`, and `a - x0`.
pub fn minus_id_period2_points<S: Real>(a: &[S], tol: &Tolerances) -> Result<PeriodicPoints2<S>> {
    if a.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: a.len() });
    }
    let r = vector::norm(a);
    if !(r > S::zero() && r < S::one() - S::lit(tol.classification)) {
        return Err(Error::InvalidTranslation(format!("|a| = {r} must lie in (0, 1)")));
    }
    let half = S::lit(0.5);
    let abar = vector::scale(a, r.recip());
    let p = [-abar[1], abar[0]];
    let h = (S::one() - r * r / S::lit(4.0)).sqrt();
    let x0 = vector::axpy(&vector::scale(a, half), h, &p);
    let x1 = vector::sub(a, &x0);
    let first = SpherePoint::from_vector(&abar)?;
    let points = vec![first.clone(), first.antipode(), SpherePoint::from_vector(&x0)?, SpherePoint::from_vector(&x1)?];
    let minus = Matrix::identity(2).scale(-S::one());
    PeriodicPoints2::measure(&minus, a, points, vec![1, 0, 3, 2])
}

/// Best-effort search for points of period dividing 2 of an affine circle
/// map: samples the angle `T_a^2` turns each of `samples` points by,
/// and bisects every sign change. Fixed points of `T_a` are included.
pub fn period2_scan<S: Real>(
    map: &AffineSphereMap<S>,
    samples: usize,
    tol: &Tolerances,
) -> Result<Vec<SpherePoint<S>>> {
    if map.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: map.dim() });
    }
    let pi = S::PI();
    let at = |phi: S| SpherePoint::from_vector(&[phi.cos(), phi.sin()]);
    let turn = |phi: S| -> Result<S> {
        let y = map.apply_n(&at(phi)?, 2)?;
        let mut d = y.coords()[1].atan2(y.coords()[0]) - phi;
        while d > pi {
            d = d - S::TAU();
        }
        while d <= -pi {
            d = d + S::TAU();
        }
        Ok(d)
    };
    let step = S::TAU() / S::lit(samples.max(4) as f64);
    let mut found: Vec<SpherePoint<S>> = Vec::new();
    let mut prev = (S::zero(), turn(S::zero())?);
    for k in 1..=samples.max(4) {
        let phi = step * S::lit(k as f64);
        let cur = (phi, turn(phi)?);
        let half_pi = pi / S::lit(2.0);
        let straddles = (prev.1 <= S::zero()) != (cur.1 <= S::zero());
        if straddles && prev.1.abs() < half_pi && cur.1.abs() < half_pi {
            if let Ok(root) = bisect(turn, prev.0, cur.0, S::zero()) {
                let p = at(root)?;
                let residual = map.apply_n(&p, 2)?.distance(&p);
                let fresh = found.iter().all(|q| q.distance(&p) > S::lit(tol.recurrence));
                if residual <= S::lit(tol.residual) && fresh {
                    found.push(p);
                }
            }
        }
        prev = cur;
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::conjugate_to_large_norm;
    use core::f64::consts::FRAC_PI_4;

    type M = Matrix<f64>;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn negative_diagonal_gives_two_cycle() {
        let w = choose_nondistal_witness(&M::diag(&[-2.0, -0.5]), &tol()).unwrap();
        assert_eq!(w.case, WitnessCase::NegativeEigenvalues);
        assert_eq!(w.translation, vec![1.0, 0.0]);
        let WitnessPoints::Periodic(c) = &w.points else { panic!("expected a cycle") };
        assert!(c.max_residual() < 1e-12);
        assert_eq!(c.points[0].coords(), &[1.0, 0.0]);
    }

    #[test]
    fn rotation_eighth_turn_isometry_case() {
        let w = choose_nondistal_witness(&M::rotation(FRAC_PI_4), &tol()).unwrap();
        assert_eq!(w.case, WitnessCase::ComplexIsometry);
        let expected = (FRAC_PI_4.sin() + 1.0) / 2.0;
        assert!((vector::norm(&w.translation) - expected).abs() < 1e-15);
        let WitnessPoints::Fixed(f) = &w.points else { panic!() };
        assert!(f.residual < 1e-8);
    }

    #[test]
    fn obtuse_rotation_needs_large_norm() {
        let r = M::rotation(2.0);
        assert!(matches!(choose_nondistal_witness(&r, &tol()), Err(Error::OutsideCoveredClasses(_))));
        let beta = 1.1 * 5f64.sqrt() / 2f64.sin();
        let big = conjugate_to_large_norm(&r, beta, &tol()).unwrap();
        let w = choose_nondistal_witness(&big, &tol()).unwrap();
        assert_eq!(w.case, WitnessCase::LargeNorm);
        let WitnessPoints::Fixed(f) = &w.points else { panic!() };
        assert!(f.residual < 1e-8);
        assert!(vector::norm(&w.translation) > 5.0);
    }

    #[test]
    fn acute_non_isometry() {
        let t = conjugate_to_large_norm(&M::rotation(1.0), 2.0, &tol()).unwrap().scale(3.0);
        let w = choose_nondistal_witness(&t, &tol()).unwrap();
        assert_eq!(w.case, WitnessCase::ComplexAcute);
        let inv = t.inverse(0.0).unwrap();
        assert!(vector::norm(&inv.mul_vec(&w.translation)) < 1.0);
    }

    #[test]
    fn positive_case_uses_half_preimage() {
        for t in [M::diag(&[2.0, 0.5]), M::identity(2), M::new([[1.0, 1.0], [0.0, 1.0]]), M::diag(&[3.0, -1.0])] {
            let w = choose_nondistal_witness(&t, &tol()).unwrap();
            assert_eq!(w.case, WitnessCase::PositiveEigenvalue);
            let pre = t.inverse(0.0).unwrap().mul_vec(&w.translation);
            assert!((vector::norm(&pre) - 0.5).abs() < 1e-15);
            assert!(w.square_displacement >= 1e-3);
        }
    }

    #[test]
    fn minus_id_points() {
        let c = minus_id_period2_points(&[0.6f64, 0.0], &tol()).unwrap();
        assert_eq!(c.points.len(), 4);
        let s = 0.91f64.sqrt();
        assert!((c.points[2].coords()[0] - 0.3).abs() < 1e-15 && (c.points[2].coords()[1] - s).abs() < 1e-15);
        assert!((c.points[3].coords()[0] - 0.3).abs() < 1e-15 && (c.points[3].coords()[1] + s).abs() < 1e-15);
        assert!(c.max_residual() < 1e-10);
        assert_eq!(c.partners, vec![1, 0, 3, 2]);
        let r = minus_id_period2_points(&[0.0f64, 0.6], &tol()).unwrap();
        assert!(r.max_residual() < 1e-10);
        assert!(minus_id_period2_points(&[1.2f64, 0.0], &tol()).is_err());
        assert!(minus_id_period2_points(&[0.0f64, 0.0], &tol()).is_err());
    }

    #[test]
    fn scan_recovers_minus_id_points() {
        let a = [0.3, 0.4];
        let map = AffineSphereMap::new(M::identity(2).scale(-1.0), a.to_vec(), &tol()).unwrap();
        let found = period2_scan(&map, 720, &tol()).unwrap();
        let exact = minus_id_period2_points(&a, &tol()).unwrap();
        assert_eq!(found.len(), 4);
        for p in &exact.points {
            assert!(found.iter().any(|q| q.distance(p) < 1e-9));
        }
    }
}
