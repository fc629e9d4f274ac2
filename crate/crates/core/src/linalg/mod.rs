//! Small dense linear algebra: determinants, inverses, operator norms,
//! eigenstructure, real canonical forms and contraction subspaces.

pub mod eigen;
pub mod matrix;
pub mod poly;
pub mod svd;
pub mod vector;

use serde::Serialize;

pub use eigen::{eigen_structure, eigenvalues, real_schur_2x2, CanonicalKind, EigenCluster, EigenStructure};
pub use matrix::Matrix;
pub use svd::operator_norm;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::scalar::{inverse_root, Real};

/// `unit = scale * T` with `|det unit| = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Real + Serialize"))]
pub struct NormalizedMatrix<S> {
    pub scale: S,
    pub unit: Matrix<S>,
    #[serde(skip)]
    pivot: S,
    #[serde(skip)]
    inner: S,
}

impl<S: Real> NormalizedMatrix<S> {
    /// Applies the same rescaling to a vector, `v -> scale * v`, rounded
    /// exactly as the matrix entries were.
    pub fn rescale(&self, v: &[S]) -> Vec<S> {
        v.iter().map(|&x| x / self.pivot * self.inner).collect()
    }
}

/// Rescales `T` by `|det T|^(-1/d)`.
///
/// The projective action is unchanged by positive scaling, so the unit
/// matrix acts on the sphere exactly as `T` does. Entries are first divided
/// by the largest magnitude, which makes the result bit-identical for `T`
/// and `beta T` whenever `beta T` is exactly representable.
pub fn normalize_to_unimodular<S: Real>(t: &Matrix<S>, tol: &Tolerances) -> Result<NormalizedMatrix<S>> {
    let det = t.det();
    if !(det.abs() > S::lit(tol.singular)) {
        return Err(Error::SingularMatrix { det: det.to_f64_lossy() });
    }
    let pivot = t.max_abs();
    let reduced = t.div_scalar(pivot);
    let inner = inverse_root(reduced.det(), t.dim());
    Ok(NormalizedMatrix { scale: inner / pivot, unit: reduced.scale(inner), pivot, inner })
}

/// Orthonormal basis of `C(T) = { v : T^m v -> 0 }`, the sum of generalized
/// eigenspaces with `|lambda| < 1 - spectral`.
///
/// Computed as the range of `p(T)`, where `p` collects the characteristic
/// factors of the remaining eigenvalues; the dimension of that range is the
/// number of contracting eigenvalues, so no rank threshold is needed.
pub fn contraction_subspace<S: Real>(t: &Matrix<S>, tol: &Tolerances) -> Result<Vec<Vec<S>>> {
    let d = t.dim();
    let det = t.det();
    if !(det.abs() > S::lit(tol.singular)) {
        return Err(Error::SingularMatrix { det: det.to_f64_lossy() });
    }
    let eig = eigenvalues(t);
    let cut = S::one() - S::lit(tol.spectral);
    let contracting = eig.iter().filter(|z| z.norm() < cut).count();
    if contracting == 0 {
        return Ok(Vec::new());
    }
    if contracting == d {
        return Ok((0..d).map(|i| vector::basis(d, i)).collect());
    }
    let imag_tol = S::lit(tol.cluster) * operator_norm(t);
    let id = Matrix::identity(d);
    let mut p = id.clone();
    let normalized = |m: Matrix<S>| {
        let s = m.max_abs();
        if s > S::zero() {
            m.scale(s.recip())
        } else {
            m
        }
    };
    for z in eig.iter().filter(|z| z.norm() >= cut) {
        let factor = if z.im.abs() <= imag_tol {
            t.shift(z.re)
        } else if z.im > S::zero() {
            t.mul(t).sub(&t.scale(S::lit(2.0) * z.re)).add(&id.scale(z.norm_sqr()))
        } else {
            continue;
        };
        p = normalized(p.mul(&factor));
    }
    let s = svd::svd(&p);
    Ok(s.left.into_iter().take(contracting).collect())
}

/// Conjugates a matrix with complex spectrum by `C = diag(beta, 1/beta) A^-1`
/// where `T = t A R(theta) A^-1`, producing `C T C^-1` with the same
/// eigenvalues and norm at least `beta^2 |t sin theta|`.
pub fn conjugate_to_large_norm<S: Real>(t: &Matrix<S>, beta: S, tol: &Tolerances) -> Result<Matrix<S>> {
    if t.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: t.dim() });
    }
    if !(beta >= S::one()) {
        return Err(Error::HypothesisNotMet(format!("beta = {beta} must be at least 1")));
    }
    let eig = real_schur_2x2(t, tol)?;
    match eig.kind {
        Some(CanonicalKind::ComplexPair { modulus, angle, .. }) => {
            let (s, c) = angle.sin_cos();
            let b2 = beta * beta;
            Matrix::from_row_major(2, vec![modulus * c, -modulus * s * b2, modulus * s / b2, modulus * c])
        }
        _ => Err(Error::RealSpectrum),
    }
}
