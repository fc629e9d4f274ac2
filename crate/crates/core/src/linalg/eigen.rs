//! Eigenstructure of small real matrices and the 2x2 real canonical form.

use num_complex::Complex;
use serde::Serialize;

use super::matrix::Matrix;
use super::poly;
use super::svd;
use super::vector;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Real canonical form `T = A B A^-1` of a 2x2 matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", bound(serialize = "S: Real + Serialize"))]
pub enum CanonicalKind<S> {
    /// `B = diag(t, s)` with `t >= s`; columns of `A` are unit eigenvectors.
    RealDiagonalizable { t: S, s: S, basis: Matrix<S> },
    /// `T = lambda * A [[1, 1], [0, 1]] A^-1`.
    JordanBlock { lambda: S, basis: Matrix<S> },
    /// `T = t * A R(theta) A^-1` with `theta` in `(0, pi)` and `det A = +-1`.
    ComplexPair { modulus: S, angle: S, basis: Matrix<S> },
}

impl<S: Real> CanonicalKind<S> {
    pub fn basis(&self) -> &Matrix<S> {
        match self {
            CanonicalKind::RealDiagonalizable { basis, .. }
            | CanonicalKind::JordanBlock { basis, .. }
            | CanonicalKind::ComplexPair { basis, .. } => basis,
        }
    }

    /// The middle factor `B`, including the scalar factor where the form has one.
    pub fn middle(&self) -> Matrix<S> {
        match *self {
            CanonicalKind::RealDiagonalizable { t, s, .. } => Matrix::diag(&[t, s]),
            CanonicalKind::JordanBlock { lambda, .. } => {
                Matrix::from_row_major(2, vec![lambda, lambda, S::zero(), lambda]).unwrap()
            }
            CanonicalKind::ComplexPair { modulus, angle, .. } => Matrix::rotation(angle).scale(modulus),
        }
    }

    /// `A B A^-1`.
    pub fn reconstruct(&self) -> Matrix<S> {
        let a = self.basis();
        let inv = a.inverse(0.0).expect("canonical basis is invertible");
        a.mul(&self.middle()).mul(&inv)
    }

    /// `|A| |A^-1|`.
    pub fn conditioning(&self) -> S {
        let (max, min) = svd::singular_values_2x2(self.basis());
        max / min
    }
}

/// Eigenvalues that coincide up to the cluster tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenCluster<S> {
    pub value: Complex<S>,
    pub algebraic: usize,
    pub geometric: usize,
    /// Largest distance between members of the cluster.
    pub spread: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Real + Serialize"))]
pub struct EigenStructure<S> {
    pub eigenvalues: Vec<Complex<S>>,
    pub semisimple: bool,
    pub clusters: Vec<EigenCluster<S>>,
    /// Present for 2x2 input only.
    pub kind: Option<CanonicalKind<S>>,
    pub conditioning: Option<S>,
}

impl<S: Real> EigenStructure<S> {
    pub fn moduli(&self) -> Vec<S> {
        self.eigenvalues.iter().map(|z| z.norm()).collect()
    }

    /// Largest `| |lambda| - 1 |`.
    pub fn max_modulus_deviation(&self) -> S {
        self.moduli().iter().fold(S::zero(), |m, &r| m.max((r - S::one()).abs()))
    }

    pub fn has_positive_real(&self, tol: S) -> bool {
        self.eigenvalues.iter().any(|z| z.im.abs() <= tol && z.re > S::zero())
    }
}

/// Eigenvalues of any square matrix: closed form for 2x2, bisected real root
/// plus quadratic for 3x3, Aberth iteration beyond.
pub fn eigenvalues<S: Real>(m: &Matrix<S>) -> Vec<Complex<S>> {
    match m.dim() {
        1 => vec![Complex::new(m.get(0, 0), S::zero())],
        2 => eigenvalues_2x2(m).to_vec(),
        3 => polish_3x3(m, poly::roots(&poly::characteristic(m))),
        _ => poly::roots(&poly::characteristic(m)),
    }
}

/// The bisected root of the characteristic cubic is only accurate to about
/// `eps / gap^2` when the other roots are close. One two-sided Rayleigh
/// quotient on the matrix itself brings it back to roundoff, and the
/// remaining pair is then deflated from the trace and determinant.
fn polish_3x3<S: Real>(m: &Matrix<S>, eig: Vec<Complex<S>>) -> Vec<Complex<S>> {
    let r = eig[0].re;
    let a = m.shift(r);
    let (Some(v), Some(u)) = (null_vector_3(&a.rows()), null_vector_3(&a.transpose().rows())) else {
        return eig;
    };
    let uv = vector::dot(&u, &v);
    if !(uv.abs() > S::lit(1e-6)) {
        return eig;
    }
    let refined = vector::dot(&u, &m.mul_vec(&v)) / uv;
    if !((refined - r).abs() <= S::lit(1e-6) * m.max_abs()) || refined == S::zero() {
        return eig;
    }
    let [p, q] = poly::quadratic_roots(-(m.trace() - refined), m.det() / refined);
    vec![Complex::new(refined, S::zero()), p, q]
}

/// Unit vector orthogonal to three nearly dependent rows, from the largest
/// pairwise cross product. `None` when the rows span less than a plane.
fn null_vector_3<S: Real>(rows: &[Vec<S>]) -> Option<Vec<S>> {
    let cross =
        |x: &[S], y: &[S]| vec![x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]];
    let scale = rows.iter().map(|r| vector::norm(r)).fold(S::zero(), S::max);
    let best = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| cross(&rows[i], &rows[j]))
        .max_by(|x, y| vector::norm(x).partial_cmp(&vector::norm(y)).unwrap_or(std::cmp::Ordering::Equal))?;
    if !(vector::norm(&best) > S::lit(1e-6) * scale * scale) {
        return None;
    }
    vector::normalize(&best)
}

/// Uses the discriminant `((a - d) / 2)^2 + b c`, which avoids cancellation
/// against `trace^2`.
pub fn eigenvalues_2x2<S: Real>(m: &Matrix<S>) -> [Complex<S>; 2] {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let two = S::lit(2.0);
    let half = (a + d) / two;
    let diff = (a - d) / two;
    let disc = diff * diff + b * c;
    poly::quadratic_from_half(half, disc, a * d - b * c)
}

/// Eigenstructure for `d` in `{2, 3}`.
pub fn eigen_structure<S: Real>(m: &Matrix<S>, tol: &Tolerances) -> Result<EigenStructure<S>> {
    match m.dim() {
        2 => real_schur_2x2(m, tol),
        3 => {
            check_invertible(m, tol)?;
            let eig = eigenvalues(m);
            let clusters = cluster(m, &eig, tol);
            let semisimple = clusters.iter().all(|c| c.algebraic == c.geometric);
            Ok(EigenStructure { eigenvalues: eig, semisimple, clusters, kind: None, conditioning: None })
        }
        d => Err(Error::DimensionUnsupported(d)),
    }
}

fn check_invertible<S: Real>(m: &Matrix<S>, tol: &Tolerances) -> Result<()> {
    let det = m.det();
    if !(det.abs() > S::lit(tol.singular)) {
        return Err(Error::SingularMatrix { det: det.to_f64_lossy() });
    }
    Ok(())
}

fn cluster<S: Real>(m: &Matrix<S>, eig: &[Complex<S>], tol: &Tolerances) -> Vec<EigenCluster<S>> {
    let scale = svd::operator_norm(m);
    let gap = S::lit(tol.cluster) * scale;
    let n = eig.len();
    // union-find over the "close" relation
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eig[i] - eig[j]).norm() < gap {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[rj] = ri;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => groups[k].push(i),
            None => {
                roots.push(r);
                groups.push(vec![i]);
            }
        }
    }
    let rank_tol = S::lit(tol.rank) * scale;
    groups
        .into_iter()
        .map(|g| {
            let k = S::from_usize(g.len()).unwrap();
            let sum = g.iter().fold(Complex::new(S::zero(), S::zero()), |acc, &i| acc + eig[i]);
            let mut value = sum / k;
            let mut spread = S::zero();
            for &i in &g {
                for &j in &g {
                    spread = spread.max((eig[i] - eig[j]).norm());
                }
            }
            let geometric = if g.len() == 1 {
                1
            } else if value.im.abs() <= gap {
                value.im = S::zero();
                m.dim() - svd::numerical_rank(&m.shift(value.re), rank_tol)
            } else {
                // repeated non-real eigenvalues need d >= 4
                1
            };
            EigenCluster { value, algebraic: g.len(), geometric: geometric.min(g.len()), spread }
        })
        .collect()
}

/// Real canonical form of a 2x2 matrix, discriminating distinct real,
/// defective and complex spectra.
pub fn real_schur_2x2<S: Real>(m: &Matrix<S>, tol: &Tolerances) -> Result<EigenStructure<S>> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: m.dim() });
    }
    check_invertible(m, tol)?;
    let eig = eigenvalues_2x2(m);
    let clusters = cluster(m, &eig, tol);
    let semisimple = clusters.iter().all(|c| c.algebraic == c.geometric);
    let kind = if clusters.len() == 1 {
        let lambda = m.trace() / S::lit(2.0);
        if semisimple {
            CanonicalKind::RealDiagonalizable { t: lambda, s: lambda, basis: Matrix::identity(2) }
        } else {
            jordan_form(m, lambda)
        }
    } else if eig[0].im != S::zero() {
        complex_form(m, eig[0])
    } else {
        let (t, s) = (eig[0].re, eig[1].re);
        let v1 = real_eigenvector(m, t);
        let v2 = real_eigenvector(m, s);
        CanonicalKind::RealDiagonalizable { t, s, basis: Matrix::from_columns(&[v1, v2])? }
    };
    let conditioning = Some(kind.conditioning());
    Ok(EigenStructure { eigenvalues: eig.to_vec(), semisimple, clusters, kind: Some(kind), conditioning })
}

fn real_eigenvector<S: Real>(m: &Matrix<S>, lambda: S) -> Vec<S> {
    let shifted = m.shift(lambda);
    let rows = shifted.rows();
    let row = if vector::norm(&rows[0]) >= vector::norm(&rows[1]) { &rows[0] } else { &rows[1] };
    let v = vector::normalize(&[-row[1], row[0]]).unwrap_or_else(|| vec![S::one(), S::zero()]);
    vector::canonical_sign(v)
}

fn jordan_form<S: Real>(m: &Matrix<S>, lambda: S) -> CanonicalKind<S> {
    let nil = m.shift(lambda).scale(lambda.recip());
    let (c0, c1) = (nil.column(0), nil.column(1));
    let (v2, v1) =
        if vector::norm(&c0) >= vector::norm(&c1) { (vector::basis(2, 0), c0) } else { (vector::basis(2, 1), c1) };
    let basis = Matrix::from_columns(&[v1, v2]).unwrap();
    let s = crate::scalar::inverse_root(basis.det(), 2);
    CanonicalKind::JordanBlock { lambda, basis: basis.scale(s) }
}

fn complex_form<S: Real>(m: &Matrix<S>, lambda: Complex<S>) -> CanonicalKind<S> {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let lambda = if lambda.im < S::zero() { lambda.conj() } else { lambda };
    // eigenvector v = u + i w for lambda, from whichever row is better scaled
    let v = if b.abs() >= c.abs() {
        [Complex::new(b, S::zero()), lambda - a]
    } else {
        [lambda - d, Complex::new(c, S::zero())]
    };
    let u = [v[0].re, v[1].re];
    let w = [v[0].im, v[1].im];
    let mut basis = Matrix::from_columns(&[w.to_vec(), u.to_vec()]).unwrap();
    basis = basis.scale(crate::scalar::inverse_root(basis.det(), 2));
    let basis = canonical_complex_basis(&basis);
    let modulus = m.det().sqrt();
    let angle = lambda.im.atan2(lambda.re);
    CanonicalKind::ComplexPair { modulus, angle, basis }
}

/// Chooses the representative of `A * SO(2)` given by the symmetric
/// positive-definite polar factor (times `diag(1, -1)` when `det A < 0`).
fn canonical_complex_basis<S: Real>(a: &Matrix<S>) -> Matrix<S> {
    let flip = Matrix::diag(&[S::one(), -S::one()]);
    let positive = if a.det() > S::zero() { a.clone() } else { a.mul(&flip) };
    let phi = (positive.get(1, 0) - positive.get(0, 1)).atan2(positive.get(0, 0) + positive.get(1, 1));
    if a.det() > S::zero() {
        a.mul(&Matrix::rotation(-phi))
    } else {
        a.mul(&Matrix::rotation(phi))
    }
}
