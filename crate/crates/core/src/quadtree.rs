//! Quadtree-variance baseline detector.
//!
//! The comparison method partitions the DEM into a quadtree, accepting
//! partitions whose height variance stays under a limit, merges
//! edge-adjacent accepted partitions with similar mean heights, and keeps
//! merged regions that meet the minimum landing area. It knows nothing
//! about buildings or vegetation, so it never emits the obstacle class.

use crate::error::{Error, Result};
use crate::grid::{BitMask, DemGrid};
use crate::pipeline::{min_pixels, LandingClass, LandingMap};
use crate::scalar::Scalar;
use crate::unionfind::UnionFind;

/// Pixel rectangle of a quadtree node: `nrows x ncols` starting at
/// `(row0, col0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub row0: usize,
    pub col0: usize,
    pub nrows: usize,
    pub ncols: usize,
}

impl Rect {
    pub fn area(&self) -> usize {
        self.nrows * self.ncols
    }
}

/// Quadtree node over a DEM region. Statistics cover valid cells only.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadNode {
    pub rect: Rect,
    /// Mean height of the valid cells (0 when the rect is all nodata).
    pub mean: f64,
    /// Population variance of the valid cells (divide by n).
    pub variance: f64,
    /// Number of valid (non-nodata) cells in the rect.
    pub valid_cells: usize,
    /// Either a leaf or exactly four quadrants tiling the rect.
    pub children: Option<Box<[QuadNode; 4]>>,
}

impl QuadNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a QuadNode>) {
        match &self.children {
            None => out.push(self),
            Some(kids) => kids.iter().for_each(|k| k.collect_leaves(out)),
        }
    }

    /// All leaves in depth-first quadrant order.
    pub fn leaves(&self) -> Vec<&QuadNode> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }
}

/// Baseline parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineParams {
    /// Maximum height variance (m^2) an accepted partition may have.
    pub var_thresh: f64,
    /// Maximum mean-height difference (m) for merging adjacent partitions.
    pub height_tol: f64,
    /// Recursion stops once a partition side is at most this many pixels.
    pub min_leaf: usize,
    /// Minimum landing-region footprint in square meters.
    pub min_area: f64,
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            var_thresh: 1.0,
            height_tol: 1.0,
            min_leaf: 4,
            min_area: 25.0,
        }
    }
}

impl BaselineParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.var_thresh > 0.0 && self.var_thresh.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "var_thresh must be positive, got {}",
                self.var_thresh
            )));
        }
        if !(self.height_tol > 0.0 && self.height_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "height_tol must be positive, got {}",
                self.height_tol
            )));
        }
        if self.min_leaf < 1 {
            return Err(Error::InvalidParameter(
                "min_leaf must be at least 1".into(),
            ));
        }
        if !(self.min_area > 0.0 && self.min_area.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "min_area must be positive, got {}",
                self.min_area
            )));
        }
        Ok(())
    }
}

/// Two-pass mean and population variance over the valid cells of a rect.
fn rect_stats<T: Scalar>(dem: &DemGrid<T>, rect: Rect) -> (f64, f64, usize) {
    let mut sum = 0.0;
    let mut count = 0usize;
    for r in rect.row0..rect.row0 + rect.nrows {
        for c in rect.col0..rect.col0 + rect.ncols {
            if !dem.is_nodata(r, c) {
                sum += dem.value(r, c).to_f64().expect("valid cells are finite");
                count += 1;
            }
        }
    }
    if count == 0 {
        return (0.0, 0.0, 0);
    }
    let mean = sum / count as f64;
    let mut sq = 0.0;
    for r in rect.row0..rect.row0 + rect.nrows {
        for c in rect.col0..rect.col0 + rect.ncols {
            if !dem.is_nodata(r, c) {
                let d = dem.value(r, c).to_f64().expect("valid cells are finite") - mean;
                sq += d * d;
            }
        }
    }
    (mean, sq / count as f64, count)
}

fn build_node<T: Scalar>(dem: &DemGrid<T>, rect: Rect, params: &BaselineParams) -> QuadNode {
    let (mean, variance, valid_cells) = rect_stats(dem, rect);
    let splittable =
        rect.nrows.max(rect.ncols) > params.min_leaf && rect.nrows >= 2 && rect.ncols >= 2;
    let children = if variance > params.var_thresh && splittable {
        // odd sizes: the first (top/left) child takes the extra row/column
        let top = rect.nrows.div_ceil(2);
        let left = rect.ncols.div_ceil(2);
        let bottom = rect.nrows - top;
        let right = rect.ncols - left;
        let quads = [
            Rect {
                row0: rect.row0,
                col0: rect.col0,
                nrows: top,
                ncols: left,
            },
            Rect {
                row0: rect.row0,
                col0: rect.col0 + left,
                nrows: top,
                ncols: right,
            },
            Rect {
                row0: rect.row0 + top,
                col0: rect.col0,
                nrows: bottom,
                ncols: left,
            },
            Rect {
                row0: rect.row0 + top,
                col0: rect.col0 + left,
                nrows: bottom,
                ncols: right,
            },
        ];
        Some(Box::new(quads.map(|q| build_node(dem, q, params))))
    } else {
        None
    };
    QuadNode {
        rect,
        mean,
        variance,
        valid_cells,
        children,
    }
}

/// Builds the variance quadtree over the whole grid.
pub fn build_quadtree<T: Scalar>(dem: &DemGrid<T>, params: &BaselineParams) -> Result<QuadNode> {
    params.validate()?;
    let rect = Rect {
        row0: 0,
        col0: 0,
        nrows: dem.nrows(),
        ncols: dem.ncols(),
    };
    Ok(build_node(dem, rect, params))
}

/// A leaf is accepted when it holds data and its variance is within the
/// threshold. Entirely-nodata partitions are never accepted.
fn is_accepted(node: &QuadNode, var_thresh: f64) -> bool {
    node.valid_cells > 0 && node.variance <= var_thresh
}

/// Runs the baseline: accepted leaves are merged with edge-adjacent
/// accepted leaves of similar mean height (transitive closure via
/// union-find), and merged regions meeting the area floor become landing
/// pixels. Everything else is non-landing terrain.
pub fn baseline_detect<T: Scalar>(dem: &DemGrid<T>, params: &BaselineParams) -> Result<LandingMap> {
    let tree = build_quadtree(dem, params)?;
    let leaves = tree.leaves();
    let accepted: Vec<&QuadNode> = leaves
        .into_iter()
        .filter(|n| is_accepted(n, params.var_thresh))
        .collect();

    // Rasterize accepted leaf indices (id = index + 1, 0 = none).
    let (nrows, ncols) = (dem.nrows(), dem.ncols());
    let mut leaf_id = vec![0u32; nrows * ncols];
    for (i, node) in accepted.iter().enumerate() {
        for r in node.rect.row0..node.rect.row0 + node.rect.nrows {
            let base = r * ncols;
            for c in node.rect.col0..node.rect.col0 + node.rect.ncols {
                leaf_id[base + c] = (i + 1) as u32;
            }
        }
    }

    // Union edge-adjacent leaves whose means are within tolerance. Leaf
    // rects tile the raster, so scanning right/down pixel pairs visits
    // every edge-sharing leaf pair (corner-only contact never produces an
    // orthogonal pair).
    let mut forest = UnionFind::new(accepted.len() + 1);
    let link = |forest: &mut UnionFind, a: u32, b: u32| {
        if a != 0 && b != 0 && a != b {
            let diff = (accepted[(a - 1) as usize].mean - accepted[(b - 1) as usize].mean).abs();
            if diff <= params.height_tol {
                forest.union(a, b);
            }
        }
    };
    for r in 0..nrows {
        for c in 0..ncols {
            let idx = r * ncols + c;
            if c + 1 < ncols {
                link(&mut forest, leaf_id[idx], leaf_id[idx + 1]);
            }
            if r + 1 < nrows {
                link(&mut forest, leaf_id[idx], leaf_id[idx + ncols]);
            }
        }
    }

    // Pixel area per merged group, then the physical area floor.
    let mut group_area = vec![0usize; accepted.len() + 1];
    for (i, node) in accepted.iter().enumerate() {
        let root = forest.find((i + 1) as u32) as usize;
        group_area[root] += node.rect.area();
    }
    let floor = min_pixels(params.min_area, dem.header().cellsize);

    let classes = leaf_id
        .iter()
        .map(|&id| {
            if id != 0 && group_area[forest.find(id) as usize] >= floor {
                LandingClass::Landing
            } else {
                LandingClass::NoLandingTerrain
            }
        })
        .collect();
    LandingMap::new(dem.header().clone(), classes)
}

/// Result of a variance-threshold sweep.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Winning threshold: highest precision, ties to the smaller value.
    pub chosen: f64,
    pub chosen_map: LandingMap,
    /// Per-candidate reports in ascending threshold order.
    pub reports: Vec<(f64, crate::eval::EvalReport)>,
}

/// Runs the baseline once per candidate variance threshold and picks the
/// one with the best precision against the ground truth. An undefined
/// precision (nothing predicted) ranks below any defined one; if every
/// candidate is undefined the smallest threshold wins.
pub fn sweep_var_thresh<T: Scalar>(
    dem: &DemGrid<T>,
    gt: &BitMask,
    candidates: &[f64],
    base: &BaselineParams,
) -> Result<SweepOutcome> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter(
            "variance sweep needs at least one candidate".into(),
        ));
    }
    let mut sorted = candidates.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite candidates"));
    sorted.dedup();

    let mut reports = Vec::with_capacity(sorted.len());
    let mut best: Option<(f64, LandingMap, Option<f64>)> = None;
    for &var_thresh in &sorted {
        let params = BaselineParams {
            var_thresh,
            ..base.clone()
        };
        let map = baseline_detect(dem, &params)?;
        let report = crate::eval::evaluate(&map, gt)?;
        let precision = report.precision;
        reports.push((var_thresh, report));
        let better = match &best {
            None => true,
            Some((_, _, best_p)) => precision > *best_p, // Option: Some beats None, ties keep first
        };
        if better {
            best = Some((var_thresh, map, precision));
        }
    }
    let (chosen, chosen_map, _) = best.expect("at least one candidate ran");
    Ok(SweepOutcome {
        chosen,
        chosen_map,
        reports,
    })
}
