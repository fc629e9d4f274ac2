//! Dynamics of invertible matrices acting on the unit sphere.
//!
//! An invertible `T` acts on `S^n` projectively, `x -> T x / |T x|`, and for
//! a translation `a` with `|T^-1 a| < 1` through the affine homeomorphism
//! `x -> (a + T x) / |a + T x|`. This crate provides:
//!
//! * [`linalg`]: small dense linear algebra (canonical forms, contraction
//!   subspaces, operator norms);
//! * [`sphere`]: the two actions, inverse images and orbits;
//! * [`distality`]: spectral distality classification for single matrices
//!   and finitely generated semigroups, certified by an orbit-based
//!   proximal-pair oracle;
//! * [`fixed`]: constructive fixed points and period-2 points of affine
//!   circle maps, and non-distality witnesses.
//!
//! ```
//! use sphere_distal::distality::{classify_projective_distality, Verdict};
//! use sphere_distal::fixed::find_fixed_point_real_positive;
//! use sphere_distal::{Config, Matrix64};
//!
//! let cfg = Config::default();
//! let shear = Matrix64::new([[1.0, 1.0], [0.0, 1.0]]);
//! let v = classify_projective_distality(&shear, &cfg).unwrap();
//! assert_eq!(v.verdict, Verdict::NotDistal);
//! assert!(v.replay(&shear, &cfg).unwrap());
//!
//! let t = Matrix64::diag(&[2.0, 0.5]);
//! let fixed = find_fixed_point_real_positive(&t, &[0.0, 0.2], &cfg.tolerances).unwrap();
//! assert_eq!(fixed.point.coords(), &[0.0, 1.0]);
//! ```
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the `*64` aliases below fix `f64`.

// Comparisons are written `!(x < bound)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod distality;
pub mod error;
pub mod fixed;
pub mod linalg;
pub mod scalar;
pub mod sphere;

pub use config::{Config, OracleBudget, Tolerances, WordBudget};
pub use error::{Error, Result};
pub use linalg::{EigenStructure, Matrix, NormalizedMatrix};
pub use scalar::Real;
pub use sphere::{AffineSphereMap, OrbitRecord, Regime, SpherePoint};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type SpherePoint64 = SpherePoint<f64>;
pub type AffineSphereMap64 = AffineSphereMap<f64>;
pub type OrbitRecord64 = OrbitRecord<f64>;
pub type EigenStructure64 = EigenStructure<f64>;
pub type DistalityVerdict64 = distality::DistalityVerdict<f64>;
pub type FixedPointResult64 = fixed::FixedPointResult<f64>;
pub type PeriodicPoints2_64 = fixed::PeriodicPoints2<f64>;
