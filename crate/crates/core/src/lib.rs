//! Lens depth and Fermat-weighted lens depth for samples in metric spaces.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! CLI and the benchmarks use.
//!
//! * [`metric`]: point domains (euclidean, SPD cone, precomputed) and distances.
//! * [`spd`]: affine-invariant geometry on symmetric positive definite matrices.
//! * [`fermat`]: power-weighted shortest paths, `L_p(x, y; X_n)`.
//! * [`depth`]: empirical lens depth and weighted lens depth.
//! * [`datagen`]: seeded synthetic generators.
//! * [`classify`]: depth-depth features and k-NN classification.

pub mod bench;
pub mod cache;
pub mod classify;
pub mod datagen;
pub mod depth;
pub mod error;
pub mod fermat;
pub mod io;
pub mod metric;
pub mod scalar;
pub mod spd;

pub use classify::{DepthFeatures, FeatureColumn};
pub use depth::{DepthConfig, DepthKind, DepthValue, TieRule};
pub use error::{Error, Result};
pub use fermat::Sparsification;
pub use scalar::Scalar;

pub type Point = metric::Point<f64>;
pub type MetricSpace = metric::MetricSpace<f64>;
pub type DistanceMatrix = metric::DistanceMatrix<f64>;
pub type SpdMatrix = spd::SpdMatrix<f64>;
pub type LandmarkGraph = fermat::LandmarkGraph<f64>;
pub type QueryLengths = fermat::QueryLengths<f64>;
pub type LabeledDataset = classify::LabeledDataset<f64>;
pub type DepthModel = depth::DepthModel<f64>;

pub type Point32 = metric::Point<f32>;
pub type MetricSpace32 = metric::MetricSpace<f32>;
pub type SpdMatrix32 = spd::SpdMatrix<f32>;
pub type LandmarkGraph32 = fermat::LandmarkGraph<f32>;
