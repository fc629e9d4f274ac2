//! Singular values: closed form for 2x2, one-sided Jacobi otherwise.

use super::matrix::Matrix;
use super::vector;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct Svd<S> {
    /// Singular values in non-increasing order.
    pub values: Vec<S>,
    /// Left singular vectors, one per value.
    pub left: Vec<Vec<S>>,
    /// Right singular vectors, one per value.
    pub right: Vec<Vec<S>>,
}

/// Singular values of a 2x2 matrix `[[a, b], [c, d]]`, largest first.
///
/// Uses `sigma_max = (|(a+d, b-c)| + |(a-d, b+c)|) / 2` and recovers the
/// smaller value as `|det| / sigma_max` to keep it accurate.
pub fn singular_values_2x2<S: Real>(m: &Matrix<S>) -> (S, S) {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let two = S::lit(2.0);
    let p = (a + d).hypot(b - c);
    let q = (a - d).hypot(b + c);
    let max = (p + q) / two;
    if max == S::zero() {
        return (S::zero(), S::zero());
    }
    let min = (a * d - b * c).abs() / max;
    (max, min)
}

/// Full SVD by one-sided (Hestenes) Jacobi rotations.
pub fn svd<S: Real>(m: &Matrix<S>) -> Svd<S> {
    let d = m.dim();
    let mut cols: Vec<Vec<S>> = (0..d).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<S>> = (0..d).map(|j| vector::basis(d, j)).collect();
    let eps = S::epsilon();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..d {
            for q in p + 1..d {
                let alpha = vector::dot(&cols[p], &cols[p]);
                let beta = vector::dot(&cols[q], &cols[q]);
                let gamma = vector::dot(&cols[p], &cols[q]);
                if gamma == S::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (S::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (S::one() + zeta * zeta).sqrt());
                let c = (S::one() + t * t).sqrt().recip();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..d).collect();
    let norms: Vec<S> = cols.iter().map(|c| vector::norm(c)).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap().then(i.cmp(&j)));
    let values: Vec<S> = order.iter().map(|&i| norms[i]).collect();
    let right: Vec<Vec<S>> = order.iter().map(|&i| v[i].clone()).collect();
    let mut left: Vec<Vec<S>> = Vec::with_capacity(d);
    let floor = values.first().copied().unwrap_or(S::zero()) * eps * S::from_usize(d).unwrap();
    for (k, &i) in order.iter().enumerate() {
        if values[k] > floor {
            left.push(vector::scale(&cols[i], values[k].recip()));
        } else {
            left.push(Vec::new());
        }
    }
    complete_basis(&mut left, d);
    Svd { values, left, right }
}

fn rotate<S: Real>(vecs: &mut [Vec<S>], p: usize, q: usize, c: S, s: S) {
    for k in 0..vecs[p].len() {
        let x = vecs[p][k];
        let y = vecs[q][k];
        vecs[p][k] = c * x - s * y;
        vecs[q][k] = s * x + c * y;
    }
}

/// Replaces empty slots with unit vectors orthogonal to the filled ones.
fn complete_basis<S: Real>(vecs: &mut [Vec<S>], d: usize) {
    for slot in 0..vecs.len() {
        if !vecs[slot].is_empty() {
            continue;
        }
        let filled: Vec<Vec<S>> = vecs.iter().filter(|v| !v.is_empty()).cloned().collect();
        let mut best: Option<Vec<S>> = None;
        let mut best_norm = S::zero();
        for i in 0..d {
            let w = vector::orthogonalize(&vector::basis(d, i), &filled);
            let n = vector::norm(&w);
            if n > best_norm {
                best_norm = n;
                best = Some(w);
            }
        }
        vecs[slot] = vector::normalize(&best.expect("dimension > 0")).expect("nonzero completion");
    }
}

/// Largest singular value.
pub fn operator_norm<S: Real>(m: &Matrix<S>) -> S {
    if m.dim() == 2 {
        singular_values_2x2(m).0
    } else if m.dim() == 1 {
        m.get(0, 0).abs()
    } else {
        svd(m).values[0]
    }
}

/// Smallest singular value.
pub fn min_singular_value<S: Real>(m: &Matrix<S>) -> S {
    if m.dim() == 2 {
        singular_values_2x2(m).1
    } else {
        *svd(m).values.last().unwrap()
    }
}

/// Number of singular values above `tol`.
pub fn numerical_rank<S: Real>(m: &Matrix<S>, tol: S) -> usize {
    if m.dim() == 2 {
        let (a, b) = singular_values_2x2(m);
        return usize::from(a > tol) + usize::from(b > tol);
    }
    svd(m).values.iter().filter(|&&s| s > tol).count()
}
