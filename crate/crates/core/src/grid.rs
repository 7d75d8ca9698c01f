//! Raster containers: georeferenced elevation grids and boolean masks.
//!
//! Grids are immutable after construction and row-major with row 0 the
//! northernmost row. All binary operations require the two headers to be
//! equal field-for-field ("aligned").

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Georeferencing metadata of a raster. Two grids are aligned iff all six
/// fields compare equal (floats exactly as parsed).
#[derive(Debug, Clone, PartialEq)]
pub struct GridHeader {
    pub ncols: usize,
    pub nrows: usize,
    /// X of the lower-left corner, map units (meters).
    pub xllcorner: f64,
    /// Y of the lower-left corner, map units (meters).
    pub yllcorner: f64,
    /// Square cell edge length in meters per pixel.
    pub cellsize: f64,
    /// Sentinel value marking cells without data.
    pub nodata_value: f64,
}

impl GridHeader {
    pub fn cells(&self) -> usize {
        self.ncols * self.nrows
    }

    /// Returns `Ok(())` when `self` and `other` are aligned, otherwise a
    /// `GridMismatch` naming the first field that differs.
    pub fn ensure_aligned(&self, other: &GridHeader) -> Result<()> {
        let field = if self.ncols != other.ncols {
            "ncols"
        } else if self.nrows != other.nrows {
            "nrows"
        } else if self.xllcorner != other.xllcorner {
            "xllcorner"
        } else if self.yllcorner != other.yllcorner {
            "yllcorner"
        } else if self.cellsize != other.cellsize {
            "cellsize"
        } else if self.nodata_value != other.nodata_value {
            "nodata_value"
        } else {
            return Ok(());
        };
        Err(Error::GridMismatch(format!("headers differ in `{field}`")))
    }
}

/// Elevation raster with per-cell nodata flags.
///
/// Invariants, enforced at construction:
/// - `values` and `nodata` both hold exactly `ncols * nrows` entries;
/// - every nodata cell stores the sentinel, every valid cell a finite value.
#[derive(Debug, Clone, PartialEq)]
pub struct DemGrid<T: Scalar = f64> {
    header: GridHeader,
    values: Vec<T>,
    nodata: Vec<bool>,
}

impl<T: Scalar> DemGrid<T> {
    pub fn new(header: GridHeader, values: Vec<T>, nodata: Vec<bool>) -> Result<Self> {
        if header.ncols == 0 {
            return Err(Error::NonPositiveDimension {
                key: "ncols",
                value: 0,
            });
        }
        if header.nrows == 0 {
            return Err(Error::NonPositiveDimension {
                key: "nrows",
                value: 0,
            });
        }
        // `<=` alone would let a NaN cellsize through
        if header.cellsize <= 0.0 || header.cellsize.is_nan() {
            return Err(Error::NonPositiveCellsize(header.cellsize));
        }
        let cells = header.cells();
        if values.len() != cells || nodata.len() != cells {
            return Err(Error::CellCountMismatch {
                expected: cells,
                found: values.len(),
            });
        }
        let sentinel = T::from_f64(header.nodata_value);
        for (i, (&v, &nd)) in values.iter().zip(&nodata).enumerate() {
            if nd {
                if v != sentinel {
                    return Err(Error::InvalidParameter(format!(
                        "nodata cell {i} does not hold the sentinel"
                    )));
                }
            } else if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "valid cell {i} holds a non-finite value"
                )));
            }
        }
        Ok(Self {
            header,
            values,
            nodata,
        })
    }

    /// Builds a grid from values alone; cells equal to the header's
    /// sentinel become nodata.
    pub fn from_values(header: GridHeader, values: Vec<T>) -> Result<Self> {
        let sentinel = T::from_f64(header.nodata_value);
        let nodata = values.iter().map(|&v| v == sentinel).collect();
        Self::new(header, values, nodata)
    }

    /// Grid filled with one value everywhere.
    pub fn constant(header: GridHeader, value: T) -> Result<Self> {
        let cells = header.cells();
        Self::new(header, vec![value; cells], vec![false; cells])
    }

    pub fn header(&self) -> &GridHeader {
        &self.header
    }

    pub fn ncols(&self) -> usize {
        self.header.ncols
    }

    pub fn nrows(&self) -> usize {
        self.header.nrows
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn nodata_flags(&self) -> &[bool] {
        &self.nodata
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.header.ncols + col
    }

    #[inline]
    pub fn value(&self, row: usize, col: usize) -> T {
        self.values[self.index(row, col)]
    }

    #[inline]
    pub fn is_nodata(&self, row: usize, col: usize) -> bool {
        self.nodata[self.index(row, col)]
    }

    pub fn has_nodata(&self) -> bool {
        self.nodata.iter().any(|&b| b)
    }

    /// Applies `f` to every valid cell, leaving nodata cells untouched.
    /// Returns an error if `f` produces a non-finite value anywhere.
    pub fn map_values(&self, f: impl Fn(T) -> T) -> Result<Self> {
        let values = self
            .values
            .iter()
            .zip(&self.nodata)
            .map(|(&v, &nd)| if nd { v } else { f(v) })
            .collect();
        Self::new(self.header.clone(), values, self.nodata.clone())
    }
}

/// Repairs a surface model: every nodata cell of `dsm` takes the value of
/// the corresponding `dtm` cell when that one is valid. Valid `dsm` cells
/// are never modified; cells missing in both stay nodata.
pub fn fill_dsm_from_dtm<T: Scalar>(dsm: &DemGrid<T>, dtm: &DemGrid<T>) -> Result<DemGrid<T>> {
    dsm.header.ensure_aligned(&dtm.header)?;
    let mut values = dsm.values.clone();
    let mut nodata = dsm.nodata.clone();
    for i in 0..values.len() {
        if nodata[i] && !dtm.nodata[i] {
            values[i] = dtm.values[i];
            nodata[i] = false;
        }
    }
    DemGrid::new(dsm.header.clone(), values, nodata)
}

/// Per-pixel boolean raster sharing the grid georeferencing.
#[derive(Debug, Clone, PartialEq)]
pub struct BitMask {
    header: GridHeader,
    bits: Vec<bool>,
}

impl BitMask {
    pub fn new(header: GridHeader, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != header.cells() {
            return Err(Error::CellCountMismatch {
                expected: header.cells(),
                found: bits.len(),
            });
        }
        Ok(Self { header, bits })
    }

    pub fn filled(header: GridHeader, value: bool) -> Self {
        let cells = header.cells();
        Self {
            header,
            bits: vec![value; cells],
        }
    }

    pub fn header(&self) -> &GridHeader {
        &self.header
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.header.ncols + col]
    }

    pub fn count_set(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Set difference `self AND NOT other`.
    pub fn difference(&self, other: &BitMask) -> Result<BitMask> {
        self.header.ensure_aligned(&other.header)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| a && !b)
            .collect();
        BitMask::new(self.header.clone(), bits)
    }

    /// Intersection `self AND other`.
    pub fn intersection(&self, other: &BitMask) -> Result<BitMask> {
        self.header.ensure_aligned(&other.header)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| a && b)
            .collect();
        BitMask::new(self.header.clone(), bits)
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitMask) -> bool {
        self.header == other.header && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// Encodes the mask as a 0/1 grid for text raster output.
    pub fn to_grid(&self) -> DemGrid<f64> {
        let values = self
            .bits
            .iter()
            .map(|&b| if b { 1.0 } else { 0.0 })
            .collect();
        let cells = self.header.cells();
        DemGrid::new(self.header.clone(), values, vec![false; cells])
            .expect("mask grid is always valid")
    }

    /// Decodes a 0/1 grid back into a mask; any other cell value is an error.
    pub fn from_grid(grid: &DemGrid<f64>) -> Result<BitMask> {
        let ncols = grid.ncols();
        let mut bits = Vec::with_capacity(grid.values().len());
        for (i, (&v, &nd)) in grid.values().iter().zip(grid.nodata_flags()).enumerate() {
            let bit = if nd || v == 0.0 {
                false
            } else if v == 1.0 {
                true
            } else {
                return Err(Error::InvalidClassCode {
                    row: i / ncols,
                    col: i % ncols,
                    value: v,
                });
            };
            bits.push(bit);
        }
        BitMask::new(grid.header().clone(), bits)
    }
}
