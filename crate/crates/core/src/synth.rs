//! Seeded synthetic DSM/DTM pairs with automatic ground truth.
//!
//! Bare terrain comes from a diamond-square fractal; vegetation is stamped
//! on top as elliptical canopy blobs; ground truth marks bare, low-slope
//! cells whose 8-connected region meets the minimum landing area. The
//! whole construction is a pure function of the parameters.

use crate::error::{Error, Result};
use crate::grid::{BitMask, DemGrid, GridHeader};
use crate::label::{connected_components, filter_by_area};
use crate::pipeline::min_pixels;
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::terrain::{slope_degrees, threshold_flat};

/// Mean footprint of one vegetation blob in pixels: semi-axes are drawn
/// uniformly from [2, 6], so E[pi * rx * ry] = pi * 16.
const EXPECTED_BLOB_AREA: f64 = std::f64::consts::PI * 16.0;
const BLOB_SEMI_AXIS: (f64, f64) = (2.0, 6.0);

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub seed: u64,
    /// Pixels per side (at least 9).
    pub size: usize,
    /// Meters per pixel.
    pub cellsize: f64,
    /// Peak-to-zero amplitude of the coarsest fractal octave, meters.
    pub relief_amplitude: f64,
    /// Per-octave amplitude decay factor, in (0, 1). Higher is rougher.
    pub roughness: f64,
    /// Fraction of the map area covered by vegetation in expectation.
    pub vegetation_density: f64,
    /// Canopy height range (min, max) in meters.
    pub vegetation_height: (f64, f64),
    /// Ground-truth slope ceiling, degrees.
    pub gt_slope_thresh: f64,
    /// Ground-truth minimum region area, square meters.
    pub gt_min_area: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            seed: 0,
            size: 129,
            cellsize: 1.2,
            relief_amplitude: 80.0,
            roughness: 0.55,
            vegetation_density: 0.1,
            vegetation_height: (2.0, 15.0),
            gt_slope_thresh: 5.0,
            gt_min_area: 25.0,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParameter(msg));
        if self.size < 9 {
            return fail(format!("size must be at least 9, got {}", self.size));
        }
        if !(self.cellsize > 0.0 && self.cellsize.is_finite()) {
            return fail(format!("cellsize must be positive, got {}", self.cellsize));
        }
        if !(self.relief_amplitude >= 0.0 && self.relief_amplitude.is_finite()) {
            return fail(format!(
                "relief_amplitude must be non-negative, got {}",
                self.relief_amplitude
            ));
        }
        if !(self.roughness > 0.0 && self.roughness < 1.0) {
            return fail(format!(
                "roughness must lie in (0, 1), got {}",
                self.roughness
            ));
        }
        if !(0.0..=1.0).contains(&self.vegetation_density) {
            return fail(format!(
                "vegetation_density must lie in [0, 1], got {}",
                self.vegetation_density
            ));
        }
        let (lo, hi) = self.vegetation_height;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return fail(format!(
                "vegetation_height must satisfy 0 < min <= max, got ({lo}, {hi})"
            ));
        }
        if !(self.gt_slope_thresh > 0.0 && self.gt_slope_thresh < 90.0) {
            return fail(format!(
                "gt_slope_thresh must lie in (0, 90), got {}",
                self.gt_slope_thresh
            ));
        }
        if !(self.gt_min_area > 0.0 && self.gt_min_area.is_finite()) {
            return fail(format!(
                "gt_min_area must be positive, got {}",
                self.gt_min_area
            ));
        }
        Ok(())
    }

    fn header(&self) -> GridHeader {
        GridHeader {
            ncols: self.size,
            nrows: self.size,
            xllcorner: 0.0,
            yllcorner: 0.0,
            cellsize: self.cellsize,
            nodata_value: -9999.0,
        }
    }
}

/// Diamond-square heightmap on the smallest `2^k + 1` lattice covering
/// `size`, cropped to the top-left `size x size` window. The RNG draw
/// order is fixed: four corners, then per round all diamond centers in
/// row-major order, then all square midpoints in row-major order.
fn diamond_square(size: usize, amplitude: f64, roughness: f64, rng: &mut Rng) -> Vec<f64> {
    let mut dim = 2usize;
    while dim + 1 < size {
        dim *= 2;
    }
    let n = dim + 1; // lattice side, power of two plus one

    let mut h = vec![0.0f64; n * n];
    let mut amp = amplitude;
    h[0] = amp * rng.symmetric();
    h[dim] = amp * rng.symmetric();
    h[dim * n] = amp * rng.symmetric();
    h[dim * n + dim] = amp * rng.symmetric();

    let mut step = dim;
    while step >= 2 {
        let half = step / 2;

        // diamond step: centers of each step-sized square
        let mut r = half;
        while r < n {
            let mut c = half;
            while c < n {
                let avg = (h[(r - half) * n + (c - half)]
                    + h[(r - half) * n + (c + half)]
                    + h[(r + half) * n + (c - half)]
                    + h[(r + half) * n + (c + half)])
                    / 4.0;
                h[r * n + c] = avg + amp * rng.symmetric();
                c += step;
            }
            r += step;
        }

        // square step: edge midpoints, averaging the in-bounds orthogonal
        // neighbors at distance `half`
        let mut r = 0;
        while r < n {
            let mut c = if (r / half).is_multiple_of(2) {
                half
            } else {
                0
            };
            while c < n {
                let mut sum = 0.0;
                let mut cnt = 0.0;
                if r >= half {
                    sum += h[(r - half) * n + c];
                    cnt += 1.0;
                }
                if r + half < n {
                    sum += h[(r + half) * n + c];
                    cnt += 1.0;
                }
                if c >= half {
                    sum += h[r * n + (c - half)];
                    cnt += 1.0;
                }
                if c + half < n {
                    sum += h[r * n + (c + half)];
                    cnt += 1.0;
                }
                h[r * n + c] = sum / cnt + amp * rng.symmetric();
                c += step;
            }
            r += half;
        }

        amp *= roughness;
        step = half;
    }

    // crop to the requested window
    let mut out = Vec::with_capacity(size * size);
    for r in 0..size {
        out.extend_from_slice(&h[r * n..r * n + size]);
    }
    out
}

/// Stamps elliptical canopy blobs and returns the per-pixel canopy height
/// (0 where bare). Draw order per blob: center row, center col, semi-axis
/// rows, semi-axis cols, height.
fn canopy_field(params: &SynthParams, rng: &mut Rng) -> Vec<f64> {
    let size = params.size;
    let mut canopy = vec![0.0f64; size * size];
    let blobs =
        (params.vegetation_density * (size * size) as f64 / EXPECTED_BLOB_AREA).round() as usize;
    let (lo, hi) = params.vegetation_height;
    let (ax_lo, ax_hi) = BLOB_SEMI_AXIS;
    for _ in 0..blobs {
        let cy = rng.range(0.0, size as f64);
        let cx = rng.range(0.0, size as f64);
        let ry = rng.range(ax_lo, ax_hi);
        let rx = rng.range(ax_lo, ax_hi);
        let height = rng.range(lo, hi);

        let r0 = (cy - ry).floor().max(0.0) as usize;
        let r1 = ((cy + ry).ceil() as usize).min(size - 1);
        let c0 = (cx - rx).floor().max(0.0) as usize;
        let c1 = ((cx + rx).ceil() as usize).min(size - 1);
        for r in r0..=r1 {
            let dy = (r as f64 + 0.5 - cy) / ry;
            for c in c0..=c1 {
                let dx = (c as f64 + 0.5 - cx) / rx;
                if dx * dx + dy * dy <= 1.0 {
                    let cell = &mut canopy[r * size + c];
                    *cell = cell.max(height);
                }
            }
        }
    }
    canopy
}

/// Generates a (DTM, DSM, ground truth) triple. Identical parameters give
/// bit-identical outputs.
pub fn generate<T: Scalar>(params: &SynthParams) -> Result<(DemGrid<T>, DemGrid<T>, BitMask)> {
    params.validate()?;
    let mut rng = Rng::new(params.seed);
    let header = params.header();

    let bare = diamond_square(
        params.size,
        params.relief_amplitude,
        params.roughness,
        &mut rng,
    );
    let canopy = canopy_field(params, &mut rng);

    let dtm_values: Vec<T> = bare.iter().map(|&v| T::from_f64(v)).collect();
    // add canopy only where present so bare cells keep the exact DTM bits
    let dsm_values: Vec<T> = dtm_values
        .iter()
        .zip(&canopy)
        .map(|(&ground, &veg)| {
            if veg > 0.0 {
                ground + T::from_f64(veg)
            } else {
                ground
            }
        })
        .collect();

    let cells = header.cells();
    let dtm = DemGrid::new(header.clone(), dtm_values, vec![false; cells])?;
    let dsm = DemGrid::new(header, dsm_values, vec![false; cells])?;
    let gt = gt_from_terrain(&dtm, &dsm, params.gt_slope_thresh, params.gt_min_area)?;
    Ok((dtm, dsm, gt))
}

/// Ground truth from a bare-terrain/surface pair: a cell is landable when
/// the bare slope is within `gt_slope_thresh`, nothing stands on it
/// (DSM == DTM), and its 8-connected region of such cells covers at least
/// `gt_min_area` square meters.
pub fn gt_from_terrain<T: Scalar>(
    dtm: &DemGrid<T>,
    dsm: &DemGrid<T>,
    gt_slope_thresh: f64,
    gt_min_area: f64,
) -> Result<BitMask> {
    dtm.header().ensure_aligned(dsm.header())?;
    if !(gt_min_area > 0.0 && gt_min_area.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gt_min_area must be positive, got {gt_min_area}"
        )));
    }
    let slope = slope_degrees(dtm)?;
    let flat = threshold_flat(&slope, gt_slope_thresh)?;

    let bare_bits = dtm
        .values()
        .iter()
        .zip(dtm.nodata_flags())
        .zip(dsm.values().iter().zip(dsm.nodata_flags()))
        .map(|((&t, &t_nd), (&s, &s_nd))| !t_nd && !s_nd && s == t)
        .collect();
    let bare = BitMask::new(dtm.header().clone(), bare_bits)?;

    let candidates = flat.intersection(&bare)?;
    let floor = min_pixels(gt_min_area, dtm.header().cellsize);
    Ok(filter_by_area(&connected_components(&candidates), floor))
}
