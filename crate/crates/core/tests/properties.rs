//! Invariants checked on random inputs.

mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use sphere_distal::distality::{
    classify_projective_distality, proximal_pair_search, semigroup_distality_test, SemigroupSpec, Verdict,
};
use sphere_distal::fixed::{find_fixed_point_complex, find_fixed_point_real_positive, minus_id_period2_points};
use sphere_distal::linalg::{
    contraction_subspace, eigen_structure, eigenvalues, operator_norm, real_schur_2x2, vector,
};
use sphere_distal::sphere::apply_projective;
use sphere_distal::{AffineSphereMap, Config, Matrix64 as M, Regime, SpherePoint, Tolerances};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

/// Entries on a `2^-24` grid in `(-8, 8)`: 27 significant bits, so every
/// multiple by a small integer is exact.
fn grid_entry() -> impl Strategy<Value = f64> {
    (-(1i64 << 27)..(1i64 << 27)).prop_map(|k| k as f64 / (1u64 << 24) as f64)
}

fn grid_matrix(d: usize) -> impl Strategy<Value = M> {
    prop::collection::vec(grid_entry(), d * d).prop_filter_map("singular", move |v| {
        let m = M::from_row_major(d, v).ok()?;
        (m.det().abs() > 1e-3).then_some(m)
    })
}

fn unit(d: usize) -> impl Strategy<Value = SpherePoint<f64>> {
    prop::collection::vec(-1.0..1.0f64, d)
        .prop_filter_map("zero", |v| (vector::norm(&v) > 1e-3).then(|| SpherePoint::from_vector(&v).unwrap()))
}

fn beta() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.5), Just(2.0), Just(3.0), Just(10.0), Just(0.125), Just(1000.0)]
}

/// A 2x2 or 3x3 matrix from a family with a clear verdict.
fn family_matrix(seed: u64) -> M {
    let mut r = rng(seed);
    match r.random_range(0..6) {
        0 => random_orthogonal(&mut r, 2),
        1 => random_orthogonal(&mut r, 3),
        2 => {
            let k = r.random_range(1.0..4.0);
            conjugate(&conditioned_basis(&mut r, k), &M::rotation(r.random_range(0.1..3.0)))
                .scale(r.random_range(0.2..5.0))
        }
        3 => {
            let sign = if r.random_bool(0.5) { 1.0 } else { -1.0 };
            dyadic_jordan(&mut r, sign)
        }
        4 => random_invertible(&mut r, 3, 0.3, 3.0),
        _ => {
            let k = r.random_range(1.0..4.0);
            let t = r.random_range(0.3..3.0);
            let s = t / r.random_range(1.3..3.0) * if r.random_bool(0.5) { 1.0 } else { -1.0 };
            conjugate(&conditioned_basis(&mut r, k), &M::diag(&[t, s]))
        }
    }
}

proptest! {
    #![proptest_config(cases(256))]

    #[test]
    fn projective_action_is_scale_equivariant(t in grid_matrix(3), x in unit(3), b in beta()) {
        let y = apply_projective(&t, &x).unwrap();
        prop_assert_eq!(apply_projective(&t.scale(b), &x).unwrap(), y);
    }

    #[test]
    fn affine_action_is_scale_equivariant(t in grid_matrix(2), a in prop::collection::vec(grid_entry(), 2),
                                          x in unit(2), b in beta()) {
        let tol = Tolerances::default();
        prop_assume!(a.iter().any(|&c| c != 0.0));
        let map = AffineSphereMap::new(t.clone(), a.clone(), &tol).unwrap();
        prop_assume!(!matches!(map.regime(), Regime::Degenerate { .. }));
        let scaled = AffineSphereMap::new(t.scale(b), vector::scale(&a, b), &tol).unwrap();
        prop_assert_eq!(map.apply(&x).ok(), scaled.apply(&x).ok());
    }

    #[test]
    fn unimodular_rescaling_is_projectively_neutral(t in grid_matrix(3), x in unit(3)) {
        // alpha T is rounded once per entry, so directions agree to a few ulps
        let n = sphere_distal::linalg::normalize_to_unimodular(&t, &Tolerances::default()).unwrap();
        prop_assert!(apply_projective(&n.unit, &x).unwrap().distance(&apply_projective(&t, &x).unwrap()) < 1e-15);
        prop_assert!((n.unit.det().abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_lie_between_singular_values(seed in any::<u64>(), d in 2usize..=3) {
        let t = random_invertible(&mut rng(seed), d, 0.2, 5.0);
        let hi = operator_norm(&t);
        let lo = 1.0 / operator_norm(&t.inverse(0.0).unwrap());
        for z in eigenvalues(&t) {
            prop_assert!(z.norm() <= hi * (1.0 + 1e-12) && z.norm() >= lo * (1.0 - 1e-12));
        }
    }

    #[test]
    fn canonical_form_reconstructs(seed in any::<u64>()) {
        let t = random_invertible(&mut rng(seed), 2, 0.2, 5.0);
        let s = real_schur_2x2(&t, &Tolerances::default()).unwrap();
        let back = s.kind.unwrap().reconstruct();
        prop_assert!(back.sub(&t).max_abs() <= 1e-9 * operator_norm(&t));
    }

    #[test]
    fn contraction_subspaces_meet_trivially_off_the_circle(seed in any::<u64>()) {
        let tol = Tolerances::default();
        let t = family_matrix(seed);
        let n = sphere_distal::linalg::normalize_to_unimodular(&t, &tol).unwrap().unit;
        let c = contraction_subspace(&n, &tol).unwrap();
        let e = contraction_subspace(&n.inverse(0.0).unwrap(), &tol).unwrap();
        let unit_moduli = eigen_structure(&n, &tol).unwrap().max_modulus_deviation() < tol.spectral;
        prop_assert_eq!(c.is_empty() && e.is_empty(), unit_moduli);
    }

    #[test]
    fn homeomorphisms_invert(t in grid_matrix(3), x in unit(3), u in unit(3), rho in 0.0..0.99f64) {
        let tol = Tolerances::default();
        let a = t.mul_vec(&vector::scale(u.coords(), rho.max(1e-6)));
        let map = AffineSphereMap::new(t, a, &tol).unwrap();
        let y = map.apply(&x).unwrap();
        prop_assert!(map.inverse_image(&y).unwrap().distance(&x) < 1e-8);
        prop_assert!(map.apply(&map.inverse_image(&x).unwrap()).unwrap().distance(&x) < 1e-8);
    }

    #[test]
    fn orbits_are_consistent(t in grid_matrix(2), u in unit(2), x in unit(2), rho in 0.01..0.95f64) {
        let tol = Tolerances::default();
        let map = AffineSphereMap::new(t.clone(), t.mul_vec(&vector::scale(u.coords(), rho)), &tol).unwrap();
        prop_assert!(map.orbit(&x, 50).unwrap().is_consistent(1e-12));
    }

    #[test]
    fn verdict_is_invariant_under_scaling_and_powers(seed in any::<u64>(), b in 0.01..100.0f64) {
        let cfg = Config::default();
        let t = family_matrix(seed);
        let v = classify_projective_distality(&t, &cfg).unwrap().verdict;
        prop_assert_ne!(v, Verdict::Inconclusive);
        prop_assert_eq!(classify_projective_distality(&t.scale(b), &cfg).unwrap().verdict, v);
        prop_assert_eq!(classify_projective_distality(&t.mul(&t), &cfg).unwrap().verdict, v);
        prop_assert_eq!(classify_projective_distality(&t.mul(&t).mul(&t), &cfg).unwrap().verdict, v);
    }

    #[test]
    fn not_distal_certificates_replay(seed in any::<u64>()) {
        let cfg = Config::default();
        let t = family_matrix(seed);
        let v = classify_projective_distality(&t, &cfg).unwrap();
        if v.verdict == Verdict::NotDistal {
            prop_assert!(v.replay(&t, &cfg).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(cases(128))]

    #[test]
    fn real_fixed_points_satisfy_the_equation(seed in any::<u64>(), rho in 0.01..0.95f64) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let k = r.random_range(1.0..3.0);
        let big = r.random_range(0.3..3.0);
        let small = if r.random_bool(0.5) { big / r.random_range(1.1..4.0) } else { -r.random_range(0.2..3.0) };
        let t = conjugate(&conditioned_basis(&mut r, k), &M::diag(&[big, small]));
        let a = t.mul_vec(&vector::scale(&unit_vector(&mut r, 2), rho));
        let res = find_fixed_point_real_positive(&t, &a, &tol).unwrap();
        prop_assert!(res.residual < 1e-8 && res.gamma > 0.0);
        let x = res.point.coords();
        let err = vector::distance(&vector::sub(&vector::scale(x, res.gamma), &t.mul_vec(x)), &a);
        prop_assert!(err <= 1e-8 * (1.0 + vector::norm(&a)));
    }

    #[test]
    fn complex_fixed_points_or_refusal(seed in any::<u64>(), rho in 0.01..0.95f64, theta in 0.01..(PI - 0.01)) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let k = r.random_range(1.0..3.0);
        let t = conjugate(&conditioned_basis(&mut r, k), &M::rotation(theta)).scale(r.random_range(0.3..3.0));
        let a = t.mul_vec(&vector::scale(&unit_vector(&mut r, 2), rho));
        match find_fixed_point_complex(&t, &a, &tol) {
            Ok(res) => {
                let x = res.point.coords();
                let err = vector::distance(&vector::sub(&vector::scale(x, res.gamma), &t.mul_vec(x)), &a);
                prop_assert!(res.residual < 1e-8 && err <= 1e-8 * (1.0 + vector::norm(&a)));
            }
            Err(e) => prop_assert!(matches!(e, sphere_distal::Error::HypothesisNotMet(_)), "{e}"),
        }
    }

    #[test]
    fn minus_id_points_pair_up(a in unit(2), r in 0.001..0.999f64) {
        let tol = Tolerances::default();
        let a = vector::scale(a.coords(), r);
        let p = minus_id_period2_points(&a, &tol).unwrap();
        let map = AffineSphereMap::new(M::identity(2).scale(-1.0), a, &tol).unwrap();
        for (i, x) in p.points.iter().enumerate() {
            let partner = &p.points[p.partners[i]];
            prop_assert!(map.apply(x).unwrap().distance(partner) < 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn semigroup_spec_round_trips(seed in any::<u64>(), n in 1usize..4, budget in 1usize..10) {
        let mut r = rng(seed);
        let mut spec = SemigroupSpec::new((0..n).map(|_| random_invertible(&mut r, 2, 0.5, 2.0)).collect());
        spec.word_length_budget = budget;
        spec.rng_seed = seed;
        let json = serde_json::to_string(&spec).unwrap();
        let back: SemigroupSpec<f64> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn semigroup_verdicts_are_deterministic(seed in any::<u64>()) {
        let cfg = Config::default();
        let mut r = rng(seed);
        let gens = vec![random_orthogonal(&mut r, 2), family_matrix(seed)];
        prop_assume!(gens[1].dim() == 2);
        let spec = SemigroupSpec { rng_seed: seed, word_length_budget: 6, ..SemigroupSpec::new(gens.clone()) };
        let v = semigroup_distality_test(&spec, &cfg).unwrap();
        let w = semigroup_distality_test(&spec, &cfg).unwrap();
        prop_assert_eq!(serde_json::to_string(&v).unwrap(), serde_json::to_string(&w).unwrap());
        if v.verdict == Verdict::NotDistal {
            prop_assert!(v.replay_semigroup(&gens, &cfg).unwrap());
        }
    }
}

/// Matrices with normalized eigen-moduli at least 0.05 away from 1, or
/// orthogonal.
fn agreement_sample(r: &mut rand_chacha::ChaCha8Rng) -> M {
    match r.random_range(0..4) {
        0 => random_orthogonal(r, 2),
        1 => M::rotation(r.random_range(-PI..PI)),
        _ => {
            // normalized moduli are sqrt|t/s| and its inverse
            let ratio = r.random_range(1.05f64.powi(2)..6.0);
            let t = r.random_range(0.3..3.0);
            let s = t / ratio * if r.random_bool(0.5) { 1.0 } else { -1.0 };
            let k = r.random_range(1.0..3.0);
            conjugate(&conditioned_basis(r, k), &M::diag(&[t, s])).scale(if r.random_bool(0.5) { 1.0 } else { -1.0 })
        }
    }
}

#[test]
fn oracle_agrees_with_classifier() {
    let cfg = Config::default();
    let o = cfg.oracle;
    let mut r = rng(2024);
    let mut tally = [0usize; 2];
    for i in 0..500 {
        let t = agreement_sample(&mut r);
        let v = classify_projective_distality(&t, &cfg).unwrap().verdict;
        assert_ne!(v, Verdict::Inconclusive, "sample {i}: {t:?}");
        let map = AffineSphereMap::projective(t.clone(), &cfg.tolerances).unwrap();
        let found = proximal_pair_search(&map, o.samples, o.iterations, o.eps, o.delta, i).unwrap().is_some();
        assert_eq!(found, v == Verdict::NotDistal, "sample {i}: verdict {v:?}, {t:?}");
        tally[usize::from(found)] += 1;
    }
    assert!(tally[0] > 100 && tally[1] > 100, "{tally:?}");
}
