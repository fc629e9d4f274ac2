//! The projective action `x -> T x / |T x|` and the affine action
//! `x -> (a + T x) / |a + T x|` on the unit sphere, with inverse images and
//! orbit recording.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{vector, Matrix};
use crate::scalar::Real;

/// Unit vector. Constructors re-normalize, so the unit-norm invariant holds
/// up to rounding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpherePoint<S>(Vec<S>);

impl<S: Real> SpherePoint<S> {
    /// Projects a nonzero finite vector onto the sphere.
    pub fn from_vector(v: &[S]) -> Result<Self> {
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        vector::normalize(v)
            .map(SpherePoint)
            .ok_or_else(|| Error::InvalidTranslation("cannot project the zero vector onto the sphere".into()))
    }

    /// Accepts `v` only if it is already unit within `tol`, then re-normalizes.
    pub fn from_unit(v: &[S], tol: S) -> Result<Self> {
        let n = vector::norm(v);
        if (n - S::one()).abs() > tol {
            return Err(Error::InvalidTranslation(format!("point has norm {n}, expected 1")));
        }
        Self::from_vector(v)
    }

    pub fn basis(d: usize, i: usize) -> Self {
        SpherePoint(vector::basis(d, i))
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<S> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn distance(&self, other: &Self) -> S {
        vector::distance(&self.0, &other.0)
    }

    pub fn antipode(&self) -> Self {
        SpherePoint(self.0.iter().map(|&c| -c).collect())
    }
}

/// Where `|T^-1 a|` sits relative to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "regime")]
pub enum Regime<S> {
    /// `a = 0`.
    Projective,
    /// `|T^-1 a| < 1`: a homeomorphism of the sphere.
    Homeomorphism { preimage_norm: S },
    /// `|T^-1 a| > 1`: the antipodal pair `witness` maps onto `a / |a|`.
    NonInjective { preimage_norm: S, witness: [SpherePoint<S>; 2] },
    /// `|T^-1 a|` within tolerance of one; some point may map to zero.
    Degenerate { preimage_norm: S },
}

impl<S> Regime<S> {
    pub fn is_invertible(&self) -> bool {
        matches!(self, Regime::Projective | Regime::Homeomorphism { .. })
    }
}

/// Non-fatal condition attached to a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapWarning {
    NonInjective,
}

/// The affine sphere map `x -> (a + T x) / |a + T x|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Real + Serialize"))]
pub struct AffineSphereMap<S> {
    matrix: Matrix<S>,
    translation: Vec<S>,
    /// `T / m` and `a / m` for `m` the largest entry of `T`: the same map,
    /// bit-identical for `(T, a)` and any exact multiple `(beta T, beta a)`.
    #[serde(skip)]
    reduced: (Matrix<S>, Vec<S>),
    #[serde(skip)]
    inverse: Matrix<S>,
    regime: Regime<S>,
    #[serde(skip)]
    tol: Tolerances,
}

impl<S: Real> AffineSphereMap<S> {
    pub fn new(matrix: Matrix<S>, translation: Vec<S>, tol: &Tolerances) -> Result<Self> {
        if translation.len() != matrix.dim() {
            return Err(Error::DimensionMismatch { expected: matrix.dim(), found: translation.len() });
        }
        if translation.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        matrix.inverse(tol.singular)?;
        let pivot = matrix.max_abs();
        let reduced = (matrix.div_scalar(pivot), translation.iter().map(|&c| c / pivot).collect::<Vec<_>>());
        let inverse = reduced.0.inverse(0.0)?;
        let regime = if translation.iter().all(|&c| c == S::zero()) {
            Regime::Projective
        } else {
            classify_regime(&inverse, &reduced.1, tol)?
        };
        Ok(AffineSphereMap { matrix, translation, reduced, inverse, regime, tol: *tol })
    }

    pub fn projective(matrix: Matrix<S>, tol: &Tolerances) -> Result<Self> {
        let d = matrix.dim();
        Self::new(matrix, vec![S::zero(); d], tol)
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn translation(&self) -> &[S] {
        &self.translation
    }

    pub fn regime(&self) -> &Regime<S> {
        &self.regime
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn warning(&self) -> Option<MapWarning> {
        matches!(self.regime, Regime::NonInjective { .. }).then_some(MapWarning::NonInjective)
    }

    /// Image of `x`. Degenerate maps are refused; non-injective maps are
    /// evaluated (see [`AffineSphereMap::warning`]) unless `a + T x` vanishes.
    pub fn apply(&self, x: &SpherePoint<S>) -> Result<SpherePoint<S>> {
        if let Regime::Degenerate { .. } = self.regime {
            return Err(Error::DegenerateMap);
        }
        let (t, a) = &self.reduced;
        let y = vector::add(a, &t.mul_vec(x.coords()));
        if vector::norm(&y) * self.matrix.max_abs() <= S::lit(self.tol.unit_norm) {
            return Err(Error::DegenerateMap);
        }
        SpherePoint::from_vector(&y)
    }

    /// The `k`-fold iterate of `x`.
    pub fn apply_n(&self, x: &SpherePoint<S>, k: usize) -> Result<SpherePoint<S>> {
        let mut p = x.clone();
        for _ in 0..k {
            p = self.apply(&p)?;
        }
        Ok(p)
    }

    fn require_invertible(&self) -> Result<()> {
        match &self.regime {
            Regime::Projective | Regime::Homeomorphism { .. } => Ok(()),
            Regime::Degenerate { .. } => Err(Error::DegenerateMap),
            Regime::NonInjective { preimage_norm, .. } => Err(Error::NonInjective(preimage_norm.to_f64_lossy())),
        }
    }

    /// The unique `x` with `apply(x) = y`.
    ///
    /// Writes `x = t T^-1 y - T^-1 a` and solves `|x| = 1` for `t > 0`: the
    /// quadratic `t^2 |p|^2 - 2 t (p.q) + |q|^2 - 1` with `p = T^-1 y`,
    /// `q = T^-1 a` has negative constant term and so exactly one positive
    /// root.
    pub fn inverse_image(&self, y: &SpherePoint<S>) -> Result<SpherePoint<S>> {
        self.require_invertible()?;
        let p = self.inverse.mul_vec(y.coords());
        let q = self.inverse.mul_vec(&self.reduced.1);
        let pp = vector::dot(&p, &p);
        let b = vector::dot(&p, &q);
        let c = vector::dot(&q, &q) - S::one();
        let root = (b * b - pp * c).sqrt();
        let t = if b >= S::zero() { (b + root) / pp } else { -c / (root - b) };
        SpherePoint::from_vector(&vector::axpy(&vector::scale(&q, -S::one()), t, &p))
    }

    /// Records `x, f(x), ..., f^m(x)`.
    pub fn orbit(&self, x: &SpherePoint<S>, steps: usize) -> Result<OrbitRecord<S>> {
        self.require_invertible()?;
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        let mut points = Vec::with_capacity(steps + 1);
        points.push(x.clone());
        for k in 0..steps {
            let next = self.apply(&points[k])?;
            points.push(next);
        }
        Ok(OrbitRecord { points, map: self.clone() })
    }
}

fn classify_regime<S: Real>(inverse: &Matrix<S>, a: &[S], tol: &Tolerances) -> Result<Regime<S>> {
    let pre = inverse.mul_vec(a);
    let rho = vector::norm(&pre);
    let band = S::lit(tol.classification);
    Ok(if (rho - S::one()).abs() <= band {
        Regime::Degenerate { preimage_norm: rho }
    } else if rho < S::one() {
        Regime::Homeomorphism { preimage_norm: rho }
    } else {
        let x = SpherePoint::from_vector(&pre)?;
        Regime::NonInjective { preimage_norm: rho, witness: [x.clone(), x.antipode()] }
    })
}

/// `T x / |T x|`.
pub fn apply_projective<S: Real>(t: &Matrix<S>, x: &SpherePoint<S>) -> Result<SpherePoint<S>> {
    if t.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: x.dim() });
    }
    SpherePoint::from_vector(&t.div_scalar(t.max_abs()).mul_vec(x.coords()))
        .map_err(|_| Error::SingularMatrix { det: t.det().to_f64_lossy() })
}

pub fn apply_affine<S: Real>(map: &AffineSphereMap<S>, x: &SpherePoint<S>) -> Result<SpherePoint<S>> {
    map.apply(x)
}

/// Classifies `(T, a)` by `|T^-1 a|`; `a` must be nonzero.
pub fn affine_is_homeomorphism<S: Real>(t: &Matrix<S>, a: &[S], tol: &Tolerances) -> Result<Regime<S>> {
    if a.len() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: a.len() });
    }
    if a.iter().all(|&c| c == S::zero()) {
        return Err(Error::ZeroTranslation);
    }
    classify_regime(&t.inverse(tol.singular)?, a, tol)
}

pub fn affine_inverse_image<S: Real>(map: &AffineSphereMap<S>, y: &SpherePoint<S>) -> Result<SpherePoint<S>> {
    map.inverse_image(y)
}

pub fn orbit<S: Real>(map: &AffineSphereMap<S>, x: &SpherePoint<S>, steps: usize) -> Result<OrbitRecord<S>> {
    map.orbit(x, steps)
}

/// Points `x_0, ..., x_m` of an orbit together with the map that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Real + Serialize"))]
pub struct OrbitRecord<S> {
    pub points: Vec<SpherePoint<S>>,
    pub map: AffineSphereMap<S>,
}

impl<S: Real> OrbitRecord<S> {
    /// Number of steps taken (one less than the number of points).
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.points.len() <= 1
    }

    /// Checks `points[k + 1] = map(points[k])` within `tol`.
    pub fn is_consistent(&self, tol: S) -> bool {
        self.points.windows(2).all(|w| match self.map.apply(&w[0]) {
            Ok(next) => next.distance(&w[1]) <= tol,
            Err(_) => false,
        })
    }

    /// CSV with header `step,x1,...,xd`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let d = self.map.dim();
        let header: Vec<String> = std::iter::once("step".to_string()).chain((1..=d).map(|i| format!("x{i}"))).collect();
        writeln!(out, "{}", header.join(","))?;
        for (k, p) in self.points.iter().enumerate() {
            let row: Vec<String> = p.coords().iter().map(|c| format!("{c}")).collect();
            writeln!(out, "{k},{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }
}
