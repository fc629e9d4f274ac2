//! Characteristic polynomials and their roots.
//!
//! Polynomials are monic and stored by ascending coefficient, without the
//! leading one: `[c0, c1, ..., c_{n-1}]` stands for
//! `x^n + c_{n-1} x^{n-1} + ... + c0`.

use num_complex::Complex;

use super::matrix::Matrix;
use crate::scalar::Real;

/// Characteristic polynomial `det(xI - M)` by Faddeev-LeVerrier.
pub fn characteristic<S: Real>(m: &Matrix<S>) -> Vec<S> {
    let n = m.dim();
    match n {
        2 => vec![m.det(), -m.trace()],
        3 => {
            let minors = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0) + m.get(0, 0) * m.get(2, 2)
                - m.get(0, 2) * m.get(2, 0)
                + m.get(1, 1) * m.get(2, 2)
                - m.get(1, 2) * m.get(2, 1);
            vec![-m.det(), minors, -m.trace()]
        }
        _ => {
            let mut coeffs = vec![S::zero(); n];
            let mut mk = Matrix::zeros(n);
            let mut c = S::one();
            for k in 1..=n {
                // M_k = A M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A M_k) / k
                mk = m.mul(&mk).shift(-c);
                let am = m.mul(&mk);
                c = -am.trace() / S::from_usize(k).unwrap();
                coeffs[n - k] = c;
            }
            coeffs
        }
    }
}

pub fn eval<S: Real>(coeffs: &[S], x: S) -> S {
    coeffs.iter().rev().fold(S::one(), |acc, &c| acc * x + c)
}

fn eval_complex<S: Real>(coeffs: &[S], z: Complex<S>) -> (Complex<S>, Complex<S>) {
    let mut p = Complex::new(S::one(), S::zero());
    let mut dp = Complex::new(S::zero(), S::zero());
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(c, S::zero());
    }
    (p, dp)
}

/// Roots of `x^2 + p x + q`, larger real part first; conjugate pairs are
/// returned with positive imaginary part first.
pub fn quadratic_roots<S: Real>(p: S, q: S) -> [Complex<S>; 2] {
    let half = -p / S::lit(2.0);
    let disc = half * half - q;
    quadratic_from_half(half, disc, q)
}

/// Roots from the centre `half` and discriminant `half^2 - q`.
pub(crate) fn quadratic_from_half<S: Real>(half: S, disc: S, q: S) -> [Complex<S>; 2] {
    if disc >= S::zero() {
        let root = disc.sqrt();
        let big = if half >= S::zero() { half + root } else { half - root };
        let small = if big != S::zero() { q / big } else { S::zero() };
        let (r1, r2) = if big >= small { (big, small) } else { (small, big) };
        [Complex::new(r1, S::zero()), Complex::new(r2, S::zero())]
    } else {
        let im = (-disc).sqrt();
        [Complex::new(half, im), Complex::new(half, -im)]
    }
}

/// A real root of a monic cubic by bisection on a guaranteed bracket.
pub fn cubic_real_root<S: Real>(coeffs: &[S; 3]) -> S {
    let bound = S::one() + coeffs.iter().fold(S::zero(), |m, c| m.max(c.abs()));
    let (mut lo, mut hi) = (-bound, bound);
    // eval(lo) < 0 < eval(hi) by the Cauchy bound.
    for _ in 0..2000 {
        let mid = lo + (hi - lo) / S::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = eval(coeffs, mid);
        if v == S::zero() {
            return mid;
        }
        if v < S::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if eval(coeffs, lo).abs() <= eval(coeffs, hi).abs() {
        lo
    } else {
        hi
    }
}

/// Roots of a monic cubic: one bisected real root followed by the deflated
/// quadratic's roots.
pub fn cubic_roots<S: Real>(coeffs: &[S; 3]) -> [Complex<S>; 3] {
    let r = cubic_real_root(coeffs);
    // x^3 + c2 x^2 + c1 x + c0 = (x - r)(x^2 + q1 x + q0)
    let q1 = coeffs[2] + r;
    let q0 = coeffs[1] + r * q1;
    let [a, b] = quadratic_roots(q1, q0);
    [Complex::new(r, S::zero()), a, b]
}

/// All roots of a monic polynomial by Aberth-Ehrlich iteration.
pub fn roots<S: Real>(coeffs: &[S]) -> Vec<Complex<S>> {
    let n = coeffs.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![Complex::new(-coeffs[0], S::zero())],
        2 => return quadratic_roots(coeffs[1], coeffs[0]).to_vec(),
        3 => return cubic_roots(&[coeffs[0], coeffs[1], coeffs[2]]).to_vec(),
        _ => {}
    }
    let bound = S::one() + coeffs.iter().fold(S::zero(), |m, c| m.max(c.abs()));
    let radius = bound / S::lit(2.0);
    let mut z: Vec<Complex<S>> = (0..n)
        .map(|k| {
            let ang = S::TAU() * S::from_usize(k).unwrap() / S::from_usize(n).unwrap() + S::lit(0.4);
            Complex::from_polar(radius, ang)
        })
        .collect();
    for _ in 0..1000 {
        let mut moved = S::zero();
        for k in 0..n {
            let (p, dp) = eval_complex(coeffs, z[k]);
            if p.norm() == S::zero() {
                continue;
            }
            let ratio = p / dp;
            let mut sum = Complex::new(S::zero(), S::zero());
            for j in 0..n {
                if j != k {
                    sum = sum + (z[k] - z[j]).inv();
                }
            }
            let step = ratio / (Complex::new(S::one(), S::zero()) - ratio * sum);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] = z[k] - step;
                moved = moved.max(step.norm() / (S::one() + z[k].norm()));
            }
        }
        if moved < S::epsilon() * S::lit(4.0) {
            break;
        }
    }
    z.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap().then(b.im.partial_cmp(&a.im).unwrap()));
    z
}
