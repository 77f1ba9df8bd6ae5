//! Differential privacy for set-valued data in R^n.
//!
//! A sensitive compact set `X` is released as `X + w` with one Laplace noise
//! vector `w ~ Laplace(0, 1/epsilon)^n` shared by every point. The release
//! is audited through its capacity functional `T(K) = P[(X + w) ∩ K ≠ ∅]`
//! against
//!
//! ```text
//! T_{M(X)}(K) <= exp(eps * diam K) * exp(eps * d_H(X, Y)) * T_{M(Y)}(K)
//! ```
//!
//! with the Hausdorff distance `d_H` and diameter taken in the 1-norm.
//!
//! ```
//! use setdp::{perturb, CompactSet, Mode, PrivacyParams, SeededStream};
//!
//! let square = CompactSet::points(vec![
//!     vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0],
//! ]).unwrap();
//! let params = PrivacyParams::new(1.0, 2).unwrap();
//! let out = perturb(&square, &params, &SeededStream::new(42, 0), Mode::Release).unwrap();
//! assert!(out.noise().is_none());
//! assert_eq!(setdp::geometry::diameter(out.set()), 2.0);
//! ```

pub mod audit;
mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod mechanism;
pub mod sampler;

pub use audit::{
    box_probability, exact_capacity, mc_capacity, privacy_bound, verify_privacy, AuditOptions, AuditReport,
    CapacityEstimate, CapacityMethod, MonteCarlo, ProbeGrid, Verdict,
};
pub use error::{Error, Result};
pub use geometry::{
    diameter, directed_hausdorff, hausdorff_distance, intersects, point_to_set_distance, translate, AxisBox,
    CompactSet, TestSet, Translation,
};
pub use mechanism::{expected_displacement, perturb, perturb_with, Mode, NoiseModel, PrivacyParams};
pub use sampler::{laplace_cdf, sample_scalar, sample_vector, LaplaceNoise, LaplaceParams, SeededStream};
