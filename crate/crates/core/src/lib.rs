//! Landing-site detection from digital elevation models.
//!
//! Given a surface model (DSM) and a bare-earth terrain model (DTM), the
//! detector produces a tri-class map of each cell: landable, non-landable
//! terrain, or obstacle. The pipeline masks above-ground structures from
//! the DSM-DTM difference, thresholds the terrain slope computed with a
//! 3x3 rate-of-change kernel, keeps 8-connected flat regions of
//! sufficient area, and removes the obstacle overlap.
//!
//! The crate also ships a quadtree-variance baseline detector for
//! comparison, a seeded synthetic-terrain generator with automatic ground
//! truth, a precision/recall harness, and Esri ASCII grid I/O.
//!
//! Grid payloads are generic over the [`Scalar`] type; `f64` is the
//! default used by the CLI and the text formats, and `*32` aliases cover
//! memory-tight workloads.
//!
//! ```
//! use landscan_core::{detect, generate, evaluate, DetectionParams, SynthParams};
//!
//! let synth = SynthParams { seed: 7, size: 65, ..SynthParams::default() };
//! let (dtm, dsm, gt) = generate::<f64>(&synth).unwrap();
//! let map = detect(&dsm, &dtm, &DetectionParams::default()).unwrap();
//! let report = evaluate(&map, &gt).unwrap();
//! assert_eq!(
//!     report.true_pos + report.false_pos + report.false_neg + report.true_neg,
//!     65 * 65
//! );
//! ```

pub mod asc;
pub mod error;
pub mod eval;
pub mod grid;
pub mod label;
pub mod pipeline;
pub mod quadtree;
pub mod rng;
pub mod scalar;
pub mod synth;
pub mod terrain;
mod unionfind;

pub use asc::{parse_asc, write_asc};
pub use error::{Error, Result};
pub use eval::{evaluate, timed_run, EvalReport};
pub use grid::{fill_dsm_from_dtm, BitMask, DemGrid, GridHeader};
pub use label::{connected_components, filter_by_area, LabelMap};
pub use pipeline::{detect, min_pixels, DetectionParams, LandingClass, LandingMap};
pub use quadtree::{
    baseline_detect, build_quadtree, sweep_var_thresh, BaselineParams, QuadNode, Rect, SweepOutcome,
};
pub use scalar::Scalar;
pub use synth::{generate, gt_from_terrain, SynthParams};
pub use terrain::{obstacle_mask, slope_degrees, threshold_flat, SlopeMap};

/// Single-precision elevation grid.
pub type DemGrid32 = grid::DemGrid<f32>;
/// Single-precision slope raster.
pub type SlopeMap32 = terrain::SlopeMap<f32>;
