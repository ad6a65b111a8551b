//! Privacy auditing for synthetic tabular data.
//!
//! Distance-based proxy metrics (DCR, NNDR, IMS) with their binary privacy
//! tests, a shadow-model membership inference game, classical synthetic data
//! generators, and an experiment harness comparing the two views of risk.
//!
//! Numeric kernels are generic over [`Scalar`] (`f32` or `f64`); the
//! pipeline itself runs in `f64` and the aliases below name those
//! instantiations.

pub mod attacks;
pub mod error;
pub mod fixtures;
pub mod generators;
pub mod harness;
pub mod metrics;
pub mod rng;
pub mod scalar;
pub mod tabular;
pub mod vulnerability;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type DistanceVectorF64 = metrics::DistanceVector<f64>;
pub type DistanceVectorF32 = metrics::DistanceVector<f32>;
pub type PrivacyAuditorF64 = metrics::PrivacyAuditor<f64>;
pub type NeighborIndexF64 = metrics::NeighborIndex<f64>;
pub type LogisticModelF64 = attacks::LogisticModel<f64>;
pub type LogisticModelF32 = attacks::LogisticModel<f32>;
