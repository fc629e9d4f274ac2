#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sphere_distal::linalg::vector;
use sphere_distal::Matrix64 as M;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(r: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(r)
}

pub fn unit_vector(r: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| gaussian(r)).collect();
        if let Some(u) = vector::normalize(&v) {
            return u;
        }
    }
}

/// Gram-Schmidt on Gaussian columns, with a random sign on the last column.
pub fn random_orthogonal(r: &mut ChaCha8Rng, d: usize) -> M {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < d {
        let v: Vec<f64> = (0..d).map(|_| gaussian(r)).collect();
        if let Some(u) = vector::normalize(&vector::orthogonalize(&v, &cols)) {
            cols.push(u);
        }
    }
    if r.random_bool(0.5) {
        let last = cols.last_mut().unwrap();
        for v in last.iter_mut() {
            *v = -*v;
        }
    }
    M::from_columns(&cols).unwrap()
}

/// `R(phi1) diag(1, k) R(phi2)`, whose condition number is exactly `k`.
pub fn conditioned_basis(r: &mut ChaCha8Rng, k: f64) -> M {
    let p1 = r.random_range(0.0..std::f64::consts::TAU);
    let p2 = r.random_range(0.0..std::f64::consts::TAU);
    M::rotation(p1).mul(&M::diag(&[1.0, k])).mul(&M::rotation(p2))
}

pub fn conjugate(a: &M, b: &M) -> M {
    a.mul(b).mul(&a.inverse(0.0).unwrap())
}

/// Random invertible matrix with singular values in `[lo, hi]`.
pub fn random_invertible(r: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> M {
    let s: Vec<f64> = (0..d).map(|_| r.random_range(lo..hi)).collect();
    random_orthogonal(r, d).mul(&M::diag(&s)).mul(&random_orthogonal(r, d))
}

/// `lambda (I + N)` with `N = c [[x y, y^2], [-x^2, -x y]]` built from
/// dyadic numbers, so that the matrix is exactly defective.
pub fn dyadic_jordan(r: &mut ChaCha8Rng, lambda: f64) -> M {
    loop {
        let x = r.random_range(-16i32..=16) as f64 / 8.0;
        let y = r.random_range(-16i32..=16) as f64 / 8.0;
        if x == 0.0 && y == 0.0 {
            continue;
        }
        let c = [0.5, 1.0, 2.0][r.random_range(0..3)] * if r.random_bool(0.5) { 1.0 } else { -1.0 };
        let n = M::new([[x * y, y * y], [-x * x, -x * y]]).scale(c);
        return M::identity(2).add(&n).scale(lambda);
    }
}

pub fn dyadic_scale(r: &mut ChaCha8Rng) -> f64 {
    [0.25, 0.5, 1.0, 2.0, 4.0][r.random_range(0..5)]
}

/// Prints a criterion line and returns whether it passed.
pub fn report(index: usize, title: &str, outcome: Result<String, String>) -> bool {
    match outcome {
        Ok(detail) => {
            println!("criterion {index} PASS  {title}: {detail}");
            true
        }
        Err(detail) => {
            println!("criterion {index} FAIL  {title}: {detail}");
            false
        }
    }
}
