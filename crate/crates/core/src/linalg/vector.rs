//! Dense real vectors as plain slices.

use crate::scalar::Real;

#[inline]
pub fn dot<S: Real>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

/// Euclidean norm, scaled to avoid overflow and underflow.
pub fn norm<S: Real>(x: &[S]) -> S {
    let scale = x.iter().fold(S::zero(), |m, v| m.max(v.abs()));
    if scale == S::zero() || !scale.is_finite() {
        return scale;
    }
    let s: S = x.iter().map(|&v| (v / scale) * (v / scale)).sum();
    scale * s.sqrt()
}

#[inline]
pub fn sub<S: Real>(x: &[S], y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(&a, &b)| a - b).collect()
}

#[inline]
pub fn add<S: Real>(x: &[S], y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(&a, &b)| a + b).collect()
}

#[inline]
pub fn scale<S: Real>(x: &[S], c: S) -> Vec<S> {
    x.iter().map(|&a| a * c).collect()
}

/// `x + c * y`
#[inline]
pub fn axpy<S: Real>(x: &[S], c: S, y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(&a, &b)| a + c * b).collect()
}

#[inline]
pub fn distance<S: Real>(x: &[S], y: &[S]) -> S {
    norm(&sub(x, y))
}

/// `|x - y|^2` without rescaling; meant for bounded inputs such as points
/// on the unit sphere.
#[inline]
pub fn distance_squared<S: Real>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).map(|(&a, &b)| (a - b) * (a - b)).sum()
}

/// Returns `x / |x|`, or `None` for the zero vector.
pub fn normalize<S: Real>(x: &[S]) -> Option<Vec<S>> {
    let n = norm(x);
    if n > S::zero() && n.is_finite() {
        Some(x.iter().map(|&v| v / n).collect())
    } else {
        None
    }
}

pub fn basis<S: Real>(d: usize, i: usize) -> Vec<S> {
    let mut e = vec![S::zero(); d];
    e[i] = S::one();
    e
}

/// Flips the sign so that the first entry of largest magnitude is positive.
pub fn canonical_sign<S: Real>(mut x: Vec<S>) -> Vec<S> {
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[best].abs() + S::epsilon() {
            best = i;
        }
    }
    if x[best] < S::zero() {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }
    x
}

/// Gram-Schmidt (modified, two passes) of `v` against an orthonormal set.
pub fn orthogonalize<S: Real>(v: &[S], against: &[Vec<S>]) -> Vec<S> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for q in against {
            let c = dot(&w, q);
            w = axpy(&w, -c, q);
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_handles_extremes() {
        assert_eq!(norm(&[3.0_f64, 4.0]), 5.0);
        assert!((norm(&[3e200_f64, 4e200]) / 5e200 - 1.0).abs() < 1e-15);
        assert!((norm(&[3e-200_f64, 4e-200]) - 5e-200).abs() < 1e-214);
        assert_eq!(norm::<f64>(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn normalize_rejects_zero() {
        assert!(normalize::<f64>(&[0.0, 0.0]).is_none());
        assert_eq!(normalize(&[0.0_f64, 2.0]).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn orthogonalize_removes_components() {
        let q = vec![vec![1.0_f64, 0.0, 0.0]];
        let w = orthogonalize(&[0.3, 0.4, 0.5], &q);
        assert!(w[0].abs() < 1e-16);
    }
}
