//! Deterministic training-set generators.

mod adversarial;
mod blobs;
mod voronoi;

pub use adversarial::{gen_adversarial, AdvManifest, AdvParams, FarField};
pub use blobs::{gen_blobs, BlobParams};
pub use voronoi::{gen_voronoi, VoronoiParams};
