//! The five-step landing-site detection pipeline.
//!
//! 1. repair the DSM from the DTM;
//! 2. mask above-ground obstacles from the DSM-DTM difference;
//! 3. compute slope on the repaired DSM and threshold it into a flat mask;
//! 4. keep 8-connected flat regions of sufficient area;
//! 5. remove obstacle pixels and classify every cell.

use crate::error::{Error, Result};
use crate::grid::{fill_dsm_from_dtm, BitMask, DemGrid, GridHeader};
use crate::label::{connected_components, filter_by_area};
use crate::scalar::Scalar;
use crate::terrain::{obstacle_mask, slope_degrees, threshold_flat};

/// Per-pixel verdict of the detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LandingClass {
    /// Flat, large enough, unobstructed.
    Landing,
    /// Too steep, unknown, or part of a region below the area floor.
    NoLandingTerrain,
    /// Covered by a building or vegetation (or missing data).
    NoLandingObstacle,
}

impl LandingClass {
    /// Integer code used in text rasters.
    pub fn code(self) -> u8 {
        match self {
            LandingClass::NoLandingTerrain => 0,
            LandingClass::Landing => 1,
            LandingClass::NoLandingObstacle => 2,
        }
    }

    pub fn from_code(code: f64) -> Option<Self> {
        if code == 0.0 {
            Some(LandingClass::NoLandingTerrain)
        } else if code == 1.0 {
            Some(LandingClass::Landing)
        } else if code == 2.0 {
            Some(LandingClass::NoLandingObstacle)
        } else {
            None
        }
    }

    /// Legend color for rendered maps.
    pub fn rgb(self) -> [u8; 3] {
        match self {
            LandingClass::Landing => [0, 0, 255],
            LandingClass::NoLandingTerrain => [173, 216, 230],
            LandingClass::NoLandingObstacle => [255, 255, 0],
        }
    }
}

/// Tri-class classification raster.
#[derive(Debug, Clone, PartialEq)]
pub struct LandingMap {
    header: GridHeader,
    classes: Vec<LandingClass>,
}

impl LandingMap {
    pub fn new(header: GridHeader, classes: Vec<LandingClass>) -> Result<Self> {
        if classes.len() != header.cells() {
            return Err(Error::CellCountMismatch {
                expected: header.cells(),
                found: classes.len(),
            });
        }
        Ok(Self { header, classes })
    }

    pub fn header(&self) -> &GridHeader {
        &self.header
    }

    pub fn classes(&self) -> &[LandingClass] {
        &self.classes
    }

    #[inline]
    pub fn class(&self, row: usize, col: usize) -> LandingClass {
        self.classes[row * self.header.ncols + col]
    }

    pub fn count(&self, class: LandingClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    /// Mask of the pixels carrying `class`.
    pub fn mask_of(&self, class: LandingClass) -> BitMask {
        let bits = self.classes.iter().map(|&c| c == class).collect();
        BitMask::new(self.header.clone(), bits).expect("classes carry a consistent shape")
    }

    /// Encodes the map as an integer-coded grid (0 terrain, 1 landing,
    /// 2 obstacle) for text raster output.
    pub fn to_grid(&self) -> DemGrid<f64> {
        let values = self.classes.iter().map(|&c| f64::from(c.code())).collect();
        let cells = self.header.cells();
        DemGrid::new(self.header.clone(), values, vec![false; cells])
            .expect("class grid is always valid")
    }

    /// Decodes an integer-coded grid; any value outside {0, 1, 2} is an
    /// error.
    pub fn from_grid(grid: &DemGrid<f64>) -> Result<LandingMap> {
        let ncols = grid.ncols();
        let mut classes = Vec::with_capacity(grid.values().len());
        for (i, (&v, &nd)) in grid.values().iter().zip(grid.nodata_flags()).enumerate() {
            let class = if nd { None } else { LandingClass::from_code(v) };
            match class {
                Some(c) => classes.push(c),
                None => {
                    return Err(Error::InvalidClassCode {
                        row: i / ncols,
                        col: i % ncols,
                        value: v,
                    })
                }
            }
        }
        LandingMap::new(grid.header().clone(), classes)
    }

    /// Renders the map as a binary portable pixmap (P6), row 0 at the top:
    /// landing blue (0,0,255), non-landing terrain light blue
    /// (173,216,230), obstacles yellow (255,255,0).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out =
            format!("P6\n{} {}\n255\n", self.header.ncols, self.header.nrows).into_bytes();
        out.reserve(self.classes.len() * 3);
        for &c in &self.classes {
            out.extend_from_slice(&c.rgb());
        }
        out
    }
}

/// Pipeline thresholds. `min_area` is physical (square meters) and is
/// converted to a pixel floor with a ceiling division so a coarser raster
/// never shrinks the required footprint.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionParams {
    /// Maximum slope (degrees, inclusive) a landing pixel may have.
    pub slope_thresh: f64,
    /// Minimum height (meters, exclusive) above bare terrain that marks an
    /// obstacle.
    pub height_thresh: f64,
    /// Minimum landing-region footprint in square meters.
    pub min_area: f64,
    /// Re-run the component area filter after obstacle removal so no
    /// fragment below `min_area` survives.
    pub strict_area: bool,
}

impl Default for DetectionParams {
    fn default() -> Self {
        Self {
            slope_thresh: 5.0,
            height_thresh: 0.5,
            min_area: 25.0,
            strict_area: true,
        }
    }
}

impl DetectionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_area > 0.0 && self.min_area.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "min_area must be positive, got {}",
                self.min_area
            )));
        }
        Ok(())
    }
}

/// Pixel-count floor for a physical area at a given resolution.
pub fn min_pixels(min_area: f64, cellsize: f64) -> usize {
    let px = (min_area / (cellsize * cellsize)).ceil();
    (px as usize).max(1)
}

/// Runs the full detection pipeline over an aligned DSM/DTM pair.
pub fn detect<T: Scalar>(
    dsm: &DemGrid<T>,
    dtm: &DemGrid<T>,
    params: &DetectionParams,
) -> Result<LandingMap> {
    params.validate()?;
    let repaired = fill_dsm_from_dtm(dsm, dtm)?;
    let obstacles = obstacle_mask(&repaired, dtm, params.height_thresh)?;
    let slope = slope_degrees(&repaired)?;
    let flat = threshold_flat(&slope, params.slope_thresh)?;

    let floor = min_pixels(params.min_area, dsm.header().cellsize);
    let retained = filter_by_area(&connected_components(&flat), floor);
    let mut landing = retained.difference(&obstacles)?;
    if params.strict_area {
        landing = filter_by_area(&connected_components(&landing), floor);
    }

    let classes = landing
        .bits()
        .iter()
        .zip(obstacles.bits())
        .map(|(&land, &obst)| {
            if obst {
                LandingClass::NoLandingObstacle
            } else if land {
                LandingClass::Landing
            } else {
                LandingClass::NoLandingTerrain
            }
        })
        .collect();
    LandingMap::new(dsm.header().clone(), classes)
}
