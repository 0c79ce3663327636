//! Weakly-supervised cell tracking on time-lapse microscopy.
//!
//! The pipeline trains a co-detection network from point labels alone, mines
//! frame-to-frame associations out of the trained network by backward-and-forward
//! propagation, and retrains a tracking network on the mined pseudo-labels:
//!
//! 1. [`synth`] generates seeded synthetic sequences with exact ground truth
//!    (and a fluorescence-like channel for the annotation-free scenario).
//! 2. [`codetect`] jointly detects cells in two successive frames from
//!    Gaussian likelihood-map targets rendered by [`heatmap`].
//! 3. [`bfprop`] extracts per-cell relevance by guided backprop, isolates it by
//!    maximum projection, re-infers on background-masked images and matches
//!    detections one-by-one with confidence filtering.
//! 4. [`pseudo`] assembles the mined associations into position/motion targets
//!    with an ignore mask, and [`tracknet`] trains on them with the masked loss.
//! 5. [`metrics`] scores association accuracy, target effectiveness and
//!    detection precision/recall/F1 against ground truth.
//!
//! Conventions: images are `ndarray::Array2<f32>` indexed `[row, col]` with
//! intensities in `[0, 1]`; positions are `(x, y) = (col, row)` in `f32` pixels.

pub mod assignment;
pub mod bfprop;
pub mod codetect;
pub mod error;
pub mod heatmap;
pub mod io;
pub mod metrics;
pub mod nn;
pub mod pipeline;
pub mod plot;
pub mod pseudo;
pub mod synth;
pub mod track;
pub mod tracknet;

pub use error::{Error, Result};
pub use heatmap::{BackgroundModel, LikelihoodMap};
pub use synth::{ImageSequence, SimConfig};
pub use track::{Track, TrackPoint, TrackSet};

/// A grayscale frame or single-channel map, indexed `[row, col]`.
pub type Image = ndarray::Array2<f32>;

/// A position in pixels, `(x, y) = (col, row)`.
pub type Point = (f32, f32);
