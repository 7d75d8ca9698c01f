//! Elevation scalar abstraction.
//!
//! All grid payloads are generic over a floating-point scalar so the same
//! kernels serve `f64` (the default, used by the CLI and the file formats)
//! and `f32` (half the memory for large tiles).

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::Float;

/// Floating-point elevation scalar: `f32` or `f64`.
///
/// `Display`/`FromStr` are required because grids round-trip through text
/// rasters; Rust prints floats as the shortest string that parses back to
/// the identical value, which is what makes the round-trip exact.
pub trait Scalar: Float + FromStr + Display + Debug + Send + Sync + 'static {
    /// Cast from `f64` parameter space (exact for `f64` itself).
    fn from_f64(v: f64) -> Self;
}

impl Scalar for f32 {
    fn from_f64(v: f64) -> Self {
        v as f32
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
}
