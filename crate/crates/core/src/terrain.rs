//! Per-pixel terrain analytics: above-ground obstacle masking from the
//! DSM-DTM difference and slope-in-degrees from the 3x3 rate-of-change
//! kernel.

use crate::error::{Error, Result};
use crate::grid::{BitMask, DemGrid, GridHeader};
use crate::scalar::Scalar;

/// Slope raster in degrees, `[0, 90)` for every defined cell. Cells whose
/// 3x3 neighborhood touches nodata carry `undefined = true`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeMap<T: Scalar = f64> {
    header: GridHeader,
    degrees: Vec<T>,
    undefined: Vec<bool>,
}

impl<T: Scalar> SlopeMap<T> {
    pub fn header(&self) -> &GridHeader {
        &self.header
    }

    pub fn degrees(&self) -> &[T] {
        &self.degrees
    }

    pub fn undefined_flags(&self) -> &[bool] {
        &self.undefined
    }

    #[inline]
    pub fn degree(&self, row: usize, col: usize) -> T {
        self.degrees[row * self.header.ncols + col]
    }

    #[inline]
    pub fn is_undefined(&self, row: usize, col: usize) -> bool {
        self.undefined[row * self.header.ncols + col]
    }

    /// Re-packages the slope raster as a grid for text output: degrees as
    /// values, undefined cells as nodata.
    pub fn to_grid(&self) -> DemGrid<T> {
        let sentinel = T::from_f64(self.header.nodata_value);
        let values = self
            .degrees
            .iter()
            .zip(&self.undefined)
            .map(|(&d, &u)| if u { sentinel } else { d })
            .collect();
        DemGrid::new(self.header.clone(), values, self.undefined.clone())
            .expect("slope grid is always valid")
    }
}

/// Marks cells standing higher than `height_thresh` meters above the bare
/// terrain. Cells with nodata in either input are marked as well: unknown
/// ground is never landable.
pub fn obstacle_mask<T: Scalar>(
    dsm: &DemGrid<T>,
    dtm: &DemGrid<T>,
    height_thresh: f64,
) -> Result<BitMask> {
    if !(height_thresh > 0.0 && height_thresh.is_finite()) {
        return Err(Error::NonPositiveThreshold(height_thresh));
    }
    dsm.header().ensure_aligned(dtm.header())?;
    let thresh = T::from_f64(height_thresh);
    let bits = dsm
        .values()
        .iter()
        .zip(dsm.nodata_flags())
        .zip(dtm.values().iter().zip(dtm.nodata_flags()))
        .map(|((&s, &s_nd), (&t, &t_nd))| s_nd || t_nd || s - t > thresh)
        .collect();
    BitMask::new(dsm.header().clone(), bits)
}

/// Slope in degrees at every cell.
///
/// For the 3x3 neighborhood `a b c / d e f / g h i` of a cell `e`:
///
/// ```text
/// dz/dx = ((c + 2f + i) - (a + 2d + g)) / (8 * cellsize)
/// dz/dy = ((g + 2h + i) - (a + 2b + c)) / (8 * cellsize)
/// slope = atan(sqrt((dz/dx)^2 + (dz/dy)^2)) in degrees
/// ```
///
/// Border cells replicate the edge row/column so the output keeps the
/// input dimensions. A cell is undefined when any of the nine (clamped)
/// neighborhood positions is nodata.
pub fn slope_degrees<T: Scalar>(dem: &DemGrid<T>) -> Result<SlopeMap<T>> {
    let h = dem.header();
    if h.ncols < 3 || h.nrows < 3 {
        return Err(Error::GridTooSmall {
            nrows: h.nrows,
            ncols: h.ncols,
        });
    }
    let (nrows, ncols) = (h.nrows, h.ncols);
    let two = T::from_f64(2.0);
    let denom = T::from_f64(8.0 * h.cellsize);
    let mut degrees = vec![T::zero(); nrows * ncols];
    let mut undefined = vec![false; nrows * ncols];

    for row in 0..nrows {
        let rn = row.saturating_sub(1);
        let rs = (row + 1).min(nrows - 1);
        for col in 0..ncols {
            let cw = col.saturating_sub(1);
            let ce = (col + 1).min(ncols - 1);
            let idx = row * ncols + col;

            if dem.is_nodata(rn, cw)
                || dem.is_nodata(rn, col)
                || dem.is_nodata(rn, ce)
                || dem.is_nodata(row, cw)
                || dem.is_nodata(row, col)
                || dem.is_nodata(row, ce)
                || dem.is_nodata(rs, cw)
                || dem.is_nodata(rs, col)
                || dem.is_nodata(rs, ce)
            {
                undefined[idx] = true;
                continue;
            }

            let a = dem.value(rn, cw);
            let b = dem.value(rn, col);
            let c = dem.value(rn, ce);
            let d = dem.value(row, cw);
            let f = dem.value(row, ce);
            let g = dem.value(rs, cw);
            let hh = dem.value(rs, col);
            let i = dem.value(rs, ce);

            let dzdx = ((c + two * f + i) - (a + two * d + g)) / denom;
            let dzdy = ((g + two * hh + i) - (a + two * b + c)) / denom;
            degrees[idx] = (dzdx * dzdx + dzdy * dzdy).sqrt().atan().to_degrees();
        }
    }

    Ok(SlopeMap {
        header: h.clone(),
        degrees,
        undefined,
    })
}

/// Marks cells whose slope is defined and at most `slope_thresh` degrees
/// (inclusive). Undefined cells stay clear: unknown terrain is not flat.
pub fn threshold_flat<T: Scalar>(slope: &SlopeMap<T>, slope_thresh: f64) -> Result<BitMask> {
    if !(slope_thresh > 0.0 && slope_thresh < 90.0) {
        return Err(Error::ThresholdOutOfRange(slope_thresh));
    }
    let thresh = T::from_f64(slope_thresh);
    let bits = slope
        .degrees
        .iter()
        .zip(&slope.undefined)
        .map(|(&d, &u)| !u && d <= thresh)
        .collect();
    BitMask::new(slope.header.clone(), bits)
}
