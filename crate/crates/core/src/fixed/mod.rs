//! Fixed points and period-2 points of affine sphere maps.
//!
//! A fixed point of `x -> (a + T x) / |a + T x|` solves `a + T x = gamma x`
//! with `gamma > 0`, i.e. `x = (gamma I - T)^-1 a` with `|x| = 1`. The
//! solvers below bracket `gamma` between a value where the resolvent norm is
//! below 1 and one where it is above, then bisect.
//!
//! All 2x2 solvers first rescale `(T, a)` to `(alpha T, alpha a)` with
//! `|det alpha T| = 1`, after dividing by the largest entry of `T`. The map
//! on the sphere is unchanged, and whenever `(beta T, beta a)` is exactly
//! representable the rescaled data are bit-identical to those of `(T, a)`,
//! so the returned points are too.

mod even_sphere;
mod witness;

use serde::Serialize;

pub use even_sphere::{isometry_even_sphere_witness, EvenSpherePath, EvenSphereWitness};
pub use witness::{
    choose_nondistal_witness, minus_id_period2_points, nontrivial_square_point, period2_scan, NonDistalWitness,
    WitnessCase, WitnessPoints,
};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    eigenvalues, normalize_to_unimodular, operator_norm, real_schur_2x2, vector, CanonicalKind, Matrix,
};
use crate::scalar::Real;
use crate::sphere::{AffineSphereMap, Regime, SpherePoint};

/// Which argument produced a fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    /// `a` is an eigenvector for the positive eigenvalue `t`; `a/|a|` is fixed.
    EigenDirectionFirst,
    /// `a` is an eigenvector for the positive eigenvalue `s`.
    EigenDirectionSecond,
    /// `a` is an eigenvector for the negative eigenvalue `s`; the point is
    /// `A (x0, a2 / (t - s))` for a root `x0` of a quadratic.
    NegativeSecondEigenvalue,
    /// Bisection on `|(gamma I - T)^-1 a| = 1` below the smallest relevant
    /// positive eigenvalue.
    ResolventBisection,
    /// Bisection for a single defective eigenvalue.
    JordanResolvent,
    /// Bisection for a complex pair of eigenvalues.
    ComplexResolvent,
}

impl Branch {
    pub fn is_resolvent(self) -> bool {
        !matches!(self, Branch::EigenDirectionFirst | Branch::EigenDirectionSecond)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Real + Serialize"))]
pub struct FixedPointResult<S> {
    pub point: SpherePoint<S>,
    /// `|a + T x| > 0`, so that `a + T x = gamma x`, in the units of the
    /// input.
    pub gamma: S,
    /// `|T_a(point) - point|` on the sphere.
    pub residual: S,
    pub branch: Branch,
}

/// Period-2 points, each listed with the index of its partner.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Real + Serialize"))]
pub struct PeriodicPoints2<S> {
    pub points: Vec<SpherePoint<S>>,
    pub partners: Vec<usize>,
    /// `|T_a(T_a(p)) - p|` for each point.
    pub residuals: Vec<S>,
    /// `|T_a(p) - partner(p)|` for each point.
    pub partner_residuals: Vec<S>,
}

impl<S: Real> PeriodicPoints2<S> {
    fn measure(t: &Matrix<S>, a: &[S], points: Vec<SpherePoint<S>>, partners: Vec<usize>) -> Result<Self> {
        let step = |x: &SpherePoint<S>| affine_step(t, a, x.coords());
        let mut residuals = Vec::with_capacity(points.len());
        let mut partner_residuals = Vec::with_capacity(points.len());
        for (p, &q) in points.iter().zip(&partners) {
            let once = step(p)?;
            let twice = affine_step(t, a, &once)?;
            residuals.push(vector::distance(&twice, p.coords()));
            partner_residuals.push(vector::distance(&once, points[q].coords()));
        }
        Ok(PeriodicPoints2 { points, partners, residuals, partner_residuals })
    }

    pub fn max_residual(&self) -> S {
        self.residuals.iter().chain(&self.partner_residuals).fold(S::zero(), |m, &r| m.max(r))
    }
}

/// `(a + T x) / |a + T x|` without the regime checks of
/// [`AffineSphereMap`](crate::sphere::AffineSphereMap).
pub(crate) fn affine_step<S: Real>(t: &Matrix<S>, a: &[S], x: &[S]) -> Result<Vec<S>> {
    vector::normalize(&vector::add(a, &t.mul_vec(x))).ok_or(Error::DegenerateMap)
}

/// Plain bisection for a root of `f` on `[lo, hi]`, stopping once the
/// interval is narrower than `width` or stops shrinking. Requires
/// `f(lo) < 0 <= f(hi)` or the reverse.
pub fn bisect<S: Real>(f: impl Fn(S) -> Result<S>, lo: S, hi: S, width: S) -> Result<S> {
    let (mut lo, mut hi) = (lo, hi);
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if fhi == S::zero() {
        return Ok(hi);
    }
    if flo == S::zero() {
        return Ok(lo);
    }
    if (flo < S::zero()) == (fhi < S::zero()) || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::HypothesisNotMet(format!("no sign change on [{lo}, {hi}]: {flo} and {fhi}")));
    }
    let rising = flo < S::zero();
    let two = S::lit(2.0);
    for _ in 0..2000 {
        let mid = lo + (hi - lo) / two;
        if !(hi - lo > width) || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == S::zero() {
            return Ok(mid);
        }
        if (fm < S::zero()) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + (hi - lo) / two)
}

/// `|(gamma I - T)^-1 a|`. For 2x2 input this goes through the real
/// canonical form `T = A B A^-1`, evaluating `|A (gamma I - B)^-1 A^-1 a|`.
pub fn resolvent_norm<S: Real>(t: &Matrix<S>, a: &[S], gamma: S, tol: &Tolerances) -> Result<S> {
    let d = t.dim();
    if a.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: a.len() });
    }
    let guard = S::lit(tol.singular) * operator_norm(t);
    let imag_tol = S::lit(tol.cluster) * operator_norm(t);
    for z in eigenvalues(t) {
        if z.im.abs() <= imag_tol && (gamma - z.re).abs() <= guard {
            return Err(Error::SpectrumCollision(gamma.to_f64_lossy()));
        }
    }
    if d == 2 {
        let canon = Canonical::new(t, a, tol)?;
        return Ok(vector::norm(&canon.resolvent(gamma)));
    }
    Ok(vector::norm(&t.scale(-S::one()).shift(-gamma).solve(a, 0.0)?))
}

/// A 2x2 matrix and translation in canonical coordinates.
pub(crate) struct Canonical<S> {
    pub kind: CanonicalKind<S>,
    /// `A^-1 a`.
    pub coords: [S; 2],
}

impl<S: Real> Canonical<S> {
    pub fn new(t: &Matrix<S>, a: &[S], tol: &Tolerances) -> Result<Self> {
        let kind = real_schur_2x2(t, tol)?.kind.expect("2x2 input has a canonical form");
        let c = kind.basis().inverse(0.0)?.mul_vec(a);
        Ok(Canonical { kind, coords: [c[0], c[1]] })
    }

    /// `A (gamma I - B)^-1 A^-1 a`.
    pub fn resolvent(&self, gamma: S) -> Vec<S> {
        let [c1, c2] = self.coords;
        let inner = match self.kind {
            CanonicalKind::RealDiagonalizable { t, s, .. } => {
                let part = |c: S, e: S| if c == S::zero() { S::zero() } else { c / (gamma - e) };
                vec![part(c1, t), part(c2, s)]
            }
            CanonicalKind::JordanBlock { lambda, .. } => {
                let u = (gamma - lambda).recip();
                vec![c1 * u + lambda * c2 * u * u, c2 * u]
            }
            CanonicalKind::ComplexPair { modulus, angle, .. } => {
                let (sn, cs) = angle.sin_cos();
                let q = gamma * gamma - S::lit(2.0) * gamma * modulus * cs + modulus * modulus;
                vec![(gamma * c1 - modulus * (cs * c1 + sn * c2)) / q, (gamma * c2 - modulus * (cs * c2 - sn * c1)) / q]
            }
        };
        self.kind.basis().mul_vec(&inner)
    }
}

/// `(T, a)` together with their unimodular rescaling `(T', a')`.
pub(crate) struct Prepared<S> {
    pub t: Matrix<S>,
    pub a: Vec<S>,
    pub scale: S,
    pub tp: Matrix<S>,
    pub ap: Vec<S>,
    /// `|T^-1 a|`, the same for both scalings.
    pub rho: S,
}

impl<S: Real> Prepared<S> {
    pub fn new(t: &Matrix<S>, a: &[S], tol: &Tolerances) -> Result<Self> {
        if t.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: t.dim() });
        }
        if a.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: a.len() });
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if a.iter().all(|&v| v == S::zero()) {
            return Err(Error::InvalidTranslation("translation is zero".into()));
        }
        let n = normalize_to_unimodular(t, tol)?;
        let ap = n.rescale(a);
        let rho = vector::norm(&n.unit.inverse(tol.singular)?.mul_vec(&ap));
        if !(rho < S::one() - S::lit(tol.classification)) {
            return Err(Error::InvalidTranslation(format!("|T^-1 a| = {rho} is not below 1")));
        }
        Ok(Prepared { t: t.clone(), a: a.to_vec(), scale: n.scale, tp: n.unit, ap, rho })
    }

    fn residual_normalized(&self, x: &[S]) -> S {
        let Some(p) = vector::normalize(x) else { return S::infinity() };
        affine_step(&self.tp, &self.ap, &p).map_or(S::infinity(), |q| vector::distance(&q, &p))
    }

    /// Packages a point found for `(T', a')`, measuring the residual
    /// against the original `(T, a)`.
    pub fn finish(
        &self,
        x: &[S],
        gamma_normalized: S,
        branch: Branch,
        tol: &Tolerances,
    ) -> Result<FixedPointResult<S>> {
        let point = SpherePoint::from_vector(x)?;
        let image = affine_step(&self.t, &self.a, point.coords())?;
        let residual = vector::distance(&image, point.coords());
        if !(residual <= S::lit(tol.residual)) {
            return Err(Error::HypothesisNotMet(format!("fixed-point residual {residual} above tolerance")));
        }
        let gamma = if branch.is_resolvent() {
            gamma_normalized / self.scale
        } else {
            vector::norm(&vector::add(&self.a, &self.t.mul_vec(point.coords())))
        };
        Ok(FixedPointResult { point, gamma, residual, branch })
    }

    /// Bisects `|resolvent(gamma)| = 1` on `[lo, hi]`, keeps refining past
    /// the nominal width if the point is not yet accurate, and returns the
    /// point with its `gamma`.
    pub fn solve(&self, canon: &Canonical<S>, lo: S, hi: S, tol: &Tolerances) -> Result<(Vec<S>, S)> {
        let f = |g: S| Ok(vector::norm(&canon.resolvent(g)) - S::one());
        let width = S::lit(tol.bisection) * hi.abs().max(S::one());
        let mut gamma = bisect(f, lo, hi, width)?;
        let mut x = canon.resolvent(gamma);
        if self.residual_normalized(&x) > S::lit(tol.residual) {
            gamma = bisect(f, lo, hi, S::zero())?;
            x = canon.resolvent(gamma);
        }
        Ok((x, gamma))
    }

    /// Largest `hi` below the spectral point `edge` where the resolvent
    /// norm exceeds 1, backing off from `edge` by a guard that starts at
    /// `spectrum_guard * |T|` and shrinks.
    pub fn upper_bracket(&self, canon: &Canonical<S>, edge: S, tol: &Tolerances) -> Result<S> {
        let mut guard = S::lit(tol.spectrum_guard) * operator_norm(&self.tp);
        let floor = S::epsilon() * S::lit(4.0) * edge.abs().max(S::one());
        while guard >= floor {
            let hi = edge - guard;
            if vector::norm(&canon.resolvent(hi)) > S::one() {
                return Ok(hi);
            }
            guard = guard / S::lit(100.0);
        }
        Err(Error::HypothesisNotMet(format!("resolvent norm does not exceed 1 below {edge}")))
    }
}

/// Fixed point of `T_a` for a 2x2 `T` with a real positive eigenvalue and
/// `|T^-1 a| < 1`.
///
/// In eigen-coordinates `A^-1 a = (a1, a2)` of the rescaled matrix:
/// an eigenvector translation gives `a/|a|` directly; `a1 = 0` with a
/// negative second eigenvalue is solved from a quadratic; otherwise
/// `gamma` is bisected on `(0, t0)`, where `t0` is the smaller eigenvalue
/// when both are positive and the positive one otherwise, or on `(0, 1)`
/// for a Jordan block.
pub fn find_fixed_point_real_positive<S: Real>(
    t: &Matrix<S>,
    a: &[S],
    tol: &Tolerances,
) -> Result<FixedPointResult<S>> {
    let p = Prepared::new(t, a, tol)?;
    let canon = Canonical::new(&p.tp, &p.ap, tol)?;
    let [a1, a2] = canon.coords;
    let zero = |c: S| c.abs() <= S::lit(tol.zero_coordinate) * vector::norm(&canon.coords);
    let a_dir = || vector::normalize(&p.ap).expect("translation is non-zero");
    match canon.kind {
        CanonicalKind::RealDiagonalizable { t: big, s, ref basis } => {
            if !(big > S::zero()) {
                return Err(Error::NoPositiveRealEigenvalue);
            }
            if big == s || zero(a2) {
                return p.finish(&a_dir(), S::zero(), Branch::EigenDirectionFirst, tol);
            }
            if zero(a1) {
                if s > S::zero() {
                    return p.finish(&a_dir(), S::zero(), Branch::EigenDirectionSecond, tol);
                }
                // |A (x0, c)| = 1 with unit columns: x0^2 + 2 x0 c <u, v> + c^2 - 1 = 0
                let c = a2 / (big - s);
                let (u, v) = (basis.column(0), basis.column(1));
                let cross = vector::dot(&u, &v);
                let roots = crate::linalg::poly::quadratic_roots(S::lit(2.0) * c * cross, c * c - S::one());
                let x0 = roots.iter().map(|z| z.re).fold(S::neg_infinity(), S::max);
                let x = vector::axpy(&vector::scale(&u, x0), c, &v);
                return p.finish(&x, big, Branch::NegativeSecondEigenvalue, tol);
            }
            let edge = if s > S::zero() { s } else { big };
            let hi = p.upper_bracket(&canon, edge, tol)?;
            let (x, gamma) = p.solve(&canon, S::zero(), hi, tol)?;
            p.finish(&x, gamma, Branch::ResolventBisection, tol)
        }
        CanonicalKind::JordanBlock { lambda, .. } => {
            if !(lambda > S::zero()) {
                return Err(Error::NoPositiveRealEigenvalue);
            }
            if zero(a2) {
                return p.finish(&a_dir(), S::zero(), Branch::EigenDirectionFirst, tol);
            }
            let hi = p.upper_bracket(&canon, lambda, tol)?;
            let (x, gamma) = p.solve(&canon, S::zero(), hi, tol)?;
            p.finish(&x, gamma, Branch::JordanResolvent, tol)
        }
        CanonicalKind::ComplexPair { .. } => Err(Error::NoPositiveRealEigenvalue),
    }
}

/// Fixed point of `T_a` for a 2x2 `T = t A R(theta) A^-1` with
/// `cos theta > 0` and `|sin theta| <= |T^-1 a| / (|A| |A^-1|)`, by
/// bisection of the resolvent norm on `(0, t cos theta]`.
pub fn find_fixed_point_complex<S: Real>(t: &Matrix<S>, a: &[S], tol: &Tolerances) -> Result<FixedPointResult<S>> {
    let p = Prepared::new(t, a, tol)?;
    let canon = Canonical::new(&p.tp, &p.ap, tol)?;
    let CanonicalKind::ComplexPair { modulus, angle, .. } = canon.kind else {
        return Err(Error::HypothesisNotMet("eigenvalues are real".into()));
    };
    let (sn, cs) = angle.sin_cos();
    if !(cs > S::zero()) {
        return Err(Error::HypothesisNotMet(format!("cos theta = {cs} is not positive")));
    }
    let kappa = canon.kind.conditioning();
    if !(sn.abs() <= p.rho / kappa) {
        return Err(Error::HypothesisNotMet(format!(
            "|sin theta| = {} exceeds |T^-1 a| / conditioning = {}",
            sn.abs(),
            p.rho / kappa
        )));
    }
    let (x, gamma) = p.solve(&canon, S::zero(), modulus * cs, tol)?;
    p.finish(&x, gamma, Branch::ComplexResolvent, tol)
}

/// Fixed point when the dispatch rules cover `T`, otherwise period-2 points.
///
/// A positive real eigenvalue or a complex pair goes to the fixed-point
/// solvers. Multiples `-c I` use the closed-form period-2 points of `-I`
/// with `a / c`. Other matrices with two negative eigenvalues get a
/// best-effort sampled search for points of period 2.
pub fn fixed_or_periodic_points<S: Real>(t: &Matrix<S>, a: &[S], tol: &Tolerances) -> Result<WitnessPoints<S>> {
    let p = Prepared::new(t, a, tol)?;
    let canon = Canonical::new(&p.tp, &p.ap, tol)?;
    match canon.kind {
        CanonicalKind::ComplexPair { .. } => return find_fixed_point_complex(t, a, tol).map(WitnessPoints::Fixed),
        CanonicalKind::RealDiagonalizable { t: big, .. } if big > S::zero() => {
            return find_fixed_point_real_positive(t, a, tol).map(WitnessPoints::Fixed)
        }
        CanonicalKind::JordanBlock { lambda, .. } if lambda > S::zero() => {
            return find_fixed_point_real_positive(t, a, tol).map(WitnessPoints::Fixed)
        }
        _ => {}
    }
    let c = -t.trace() / S::lit(2.0);
    if t.shift(-c).max_abs() <= S::lit(tol.cluster) * operator_norm(t) {
        return minus_id_period2_points(&vector::scale(a, c.recip()), tol).map(WitnessPoints::Periodic);
    }
    let map = AffineSphereMap::new(t.clone(), a.to_vec(), tol)?;
    if !matches!(map.regime(), Regime::Homeomorphism { .. }) {
        return Err(Error::InvalidTranslation("|T^-1 a| is not below 1".into()));
    }
    let points = period2_scan(&map, 512, tol)?;
    if points.is_empty() {
        return Err(Error::OutsideCoveredClasses("no period-2 points found for two negative eigenvalues".into()));
    }
    let partners = points
        .iter()
        .map(|x| {
            let y = map.apply(x)?;
            let dist = |i: &usize| points[*i].distance(&y);
            Ok((0..points.len()).min_by(|i, j| dist(i).partial_cmp(&dist(j)).unwrap()).expect("non-empty"))
        })
        .collect::<Result<Vec<_>>>()?;
    let found = PeriodicPoints2::measure(t, a, points, partners)?;
    if !(found.max_residual() <= S::lit(tol.residual)) {
        return Err(Error::OutsideCoveredClasses("sampled period-2 points do not pair up".into()));
    }
    Ok(WitnessPoints::Periodic(found))
}
