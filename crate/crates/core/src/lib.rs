//! Angular radial bins (ARB) shape descriptors for one-to-one matching of
//! binary silhouettes.
//!
//! The crate is layered bottom-up:
//!
//! - [`imgio`]: binary images, ingestion, resizing and a synthetic gesture generator.
//! - [`geometry`]: raw/central moments, orientation and outer-border following.
//! - [`arb`]: simple, overlapping, accumulative and oriented ARB descriptors.
//! - [`baselines`]: Fourier descriptors and the Hausdorff distance.
//! - [`deform`]: the six query deformations (translation, rotation, scaling,
//!   perspective, erosion, dilation).
//! - [`matching`]: l2 distance, exact nearest-neighbour search and index persistence.
//! - [`method`]: a single entry point mapping a method configuration to a descriptor.
//! - [`bench`]: accuracy and timing protocols with CSV reports.

pub mod arb;
pub mod baselines;
pub mod bench;
pub mod deform;
mod error;
pub mod geometry;
pub mod imgio;
pub mod matching;
pub mod method;
pub mod serial;

pub use error::{Error, Result};
pub use imgio::{BinaryImage, Dataset};
