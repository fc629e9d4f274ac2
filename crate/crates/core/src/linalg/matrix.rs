use core::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::vector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense real square matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[S]> = self.data.chunks(self.dim).collect();
        f.debug_struct("Matrix").field("dim", &self.dim).field("rows", &rows).finish()
    }
}

impl<S: Real> Matrix<S> {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_row_major(dim: usize, data: Vec<S>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for dimension {dim}, found {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Matrix { dim, data })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidMatrix("rows must form a square array".into()));
        }
        Self::from_row_major(dim, rows.concat())
    }

    /// Panicking constructor for literals in code and tests.
    pub fn new<const D: usize>(rows: [[f64; D]; D]) -> Self {
        let data = rows.iter().flatten().map(|&v| S::lit(v)).collect();
        Self::from_row_major(D, data).expect("finite literal matrix")
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag(&vec![S::one(); dim])
    }

    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![S::zero(); dim * dim] }
    }

    pub fn diag(values: &[S]) -> Self {
        let dim = values.len();
        let mut m = Self::zeros(dim);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * dim + i] = v;
        }
        m
    }

    /// Counter-clockwise rotation of the plane by `theta` radians.
    pub fn rotation(theta: S) -> Self {
        let (s, c) = theta.sin_cos();
        Matrix { dim: 2, data: vec![c, -s, s, c] }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<S>]) -> Result<Self> {
        let dim = cols.len();
        if cols.iter().any(|c| c.len() != dim) {
            return Err(Error::InvalidMatrix("columns must form a square array".into()));
        }
        let mut m = Self::zeros(dim);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.data[i * dim + j] = v;
            }
        }
        if m.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.dim + j] = v;
    }

    pub fn as_row_major(&self) -> &[S] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.data.chunks(self.dim).map(<[S]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.data[j * d + i] = self.data[i * d + j];
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let d = self.dim;
        let mut m = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == S::zero() {
                    continue;
                }
                for j in 0..d {
                    m.data[i * d + j] = m.data[i * d + j] + a * other.data[k * d + j];
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(self.dim, x.len(), "matrix-vector dimension mismatch");
        self.data.chunks(self.dim).map(|row| vector::dot(row, x)).collect()
    }

    pub fn scale(&self, c: S) -> Self {
        Matrix { dim: self.dim, data: self.data.iter().map(|&v| v * c).collect() }
    }

    /// Entrywise `m / c`, rounded once per entry.
    pub fn div_scalar(&self, c: S) -> Self {
        Matrix { dim: self.dim, data: self.data.iter().map(|&v| v / c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Matrix { dim: self.dim, data: vector::add(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Matrix { dim: self.dim, data: vector::sub(&self.data, &other.data) }
    }

    /// `self - lambda * I`
    pub fn shift(&self, lambda: S) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] = m.data[i * self.dim + i] - lambda;
        }
        m
    }

    pub fn trace(&self) -> S {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> S {
        vector::norm(&self.data)
    }

    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, v| m.max(v.abs()))
    }

    pub fn det(&self) -> S {
        let d = self.dim;
        let a = &self.data;
        match d {
            1 => a[0],
            2 => a[0] * a[3] - a[1] * a[2],
            3 => {
                a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                    + a[2] * (a[3] * a[7] - a[4] * a[6])
            }
            _ => {
                let mut lu = a.clone();
                let mut det = S::one();
                for k in 0..d {
                    let p =
                        (k..d).max_by(|&i, &j| lu[i * d + k].abs().partial_cmp(&lu[j * d + k].abs()).unwrap()).unwrap();
                    if lu[p * d + k] == S::zero() {
                        return S::zero();
                    }
                    if p != k {
                        for j in 0..d {
                            lu.swap(p * d + j, k * d + j);
                        }
                        det = -det;
                    }
                    let piv = lu[k * d + k];
                    det = det * piv;
                    for i in k + 1..d {
                        let f = lu[i * d + k] / piv;
                        for j in k..d {
                            lu[i * d + j] = lu[i * d + j] - f * lu[k * d + j];
                        }
                    }
                }
                det
            }
        }
    }

    /// Inverse; `singular_tol` bounds |det| from below.
    pub fn inverse(&self, singular_tol: f64) -> Result<Self> {
        let det = self.det();
        if !(det.abs() > S::lit(singular_tol)) {
            return Err(Error::SingularMatrix { det: det.to_f64_lossy() });
        }
        let d = self.dim;
        if d == 2 {
            let a = &self.data;
            return Ok(Matrix { dim: 2, data: vec![a[3] / det, -a[1] / det, -a[2] / det, a[0] / det] });
        }
        // Gauss-Jordan with partial pivoting.
        let mut left = self.data.clone();
        let mut right = Self::identity(d).data;
        for k in 0..d {
            let p = (k..d).max_by(|&i, &j| left[i * d + k].abs().partial_cmp(&left[j * d + k].abs()).unwrap()).unwrap();
            if left[p * d + k] == S::zero() {
                return Err(Error::SingularMatrix { det: det.to_f64_lossy() });
            }
            if p != k {
                for j in 0..d {
                    left.swap(p * d + j, k * d + j);
                    right.swap(p * d + j, k * d + j);
                }
            }
            let piv = left[k * d + k];
            for j in 0..d {
                left[k * d + j] = left[k * d + j] / piv;
                right[k * d + j] = right[k * d + j] / piv;
            }
            for i in 0..d {
                if i == k {
                    continue;
                }
                let f = left[i * d + k];
                if f == S::zero() {
                    continue;
                }
                for j in 0..d {
                    left[i * d + j] = left[i * d + j] - f * left[k * d + j];
                    right[i * d + j] = right[i * d + j] - f * right[k * d + j];
                }
            }
        }
        Ok(Matrix { dim: d, data: right })
    }

    /// Solves `self * x = b`.
    pub fn solve(&self, b: &[S], singular_tol: f64) -> Result<Vec<S>> {
        Ok(self.inverse(singular_tol)?.mul_vec(b))
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// A positive multiple of `self^n`, rescaled at every step so that the
    /// entries stay in range. Only its direction action is meaningful.
    pub fn projective_pow(&self, mut n: u64) -> Self {
        let renorm = |m: Self| {
            let s = m.max_abs();
            if s > S::zero() && s.is_finite() {
                m.scale(s.recip())
            } else {
                m
            }
        };
        let mut result = Self::identity(self.dim);
        let mut base = renorm(self.clone());
        while n > 0 {
            if n & 1 == 1 {
                result = renorm(result.mul(&base));
            }
            n >>= 1;
            if n > 0 {
                base = renorm(base.mul(&base));
            }
        }
        result
    }

    /// Largest |entry| of `self^T self - I`.
    pub fn orthogonality_defect(&self) -> S {
        self.transpose().mul(self).sub(&Self::identity(self.dim)).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Converts the scalar type.
    pub fn cast<T: Real>(&self) -> Matrix<T> {
        Matrix { dim: self.dim, data: self.data.iter().map(|v| T::lit(v.to_f64_lossy())).collect() }
    }
}

/// JSON form `{"dim": d, "rows": [[...], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr<S> {
    dim: usize,
    rows: Vec<Vec<S>>,
}

impl<S: Real + Serialize> Serialize for Matrix<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> core::result::Result<Z::Ok, Z::Error> {
        MatrixRepr { dim: self.dim, rows: self.rows() }.serialize(serializer)
    }
}

impl<'de, S: Real + Deserialize<'de>> Deserialize<'de> for Matrix<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let repr = MatrixRepr::<S>::deserialize(deserializer)?;
        if repr.dim < 2 {
            return Err(serde::de::Error::custom("dim must be at least 2"));
        }
        if repr.rows.len() != repr.dim {
            return Err(serde::de::Error::custom(format!(
                "dim is {} but {} rows were given",
                repr.dim,
                repr.rows.len()
            )));
        }
        Matrix::from_rows(&repr.rows).map_err(serde::de::Error::custom)
    }
}
