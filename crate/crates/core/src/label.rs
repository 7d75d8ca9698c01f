//! 8-connected component labeling and area filtering of binary masks.

use crate::grid::{BitMask, GridHeader};
use crate::unionfind::UnionFind;

/// Dense component labels over a mask: 0 is background, ids 1..=n are
/// assigned in raster-scan order of each component's first pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMap {
    header: GridHeader,
    labels: Vec<u32>,
    /// Pixel count per component, indexed by id; entry 0 is unused.
    component_sizes: Vec<usize>,
}

impl LabelMap {
    pub fn header(&self) -> &GridHeader {
        &self.header
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.header.ncols + col]
    }

    pub fn num_components(&self) -> usize {
        self.component_sizes.len() - 1
    }

    /// Pixel count of component `id` (1-based).
    pub fn size_of(&self, id: u32) -> usize {
        self.component_sizes[id as usize]
    }

    pub fn component_sizes(&self) -> &[usize] {
        &self.component_sizes
    }
}

/// Labels the 8-connected components of the set bits. Two-pass union-find:
/// provisional labels from the four already-visited neighbors, then a
/// relabeling sweep that numbers final components 1, 2, ... in order of
/// first appearance.
pub fn connected_components(mask: &BitMask) -> LabelMap {
    let header = mask.header().clone();
    let (nrows, ncols) = (header.nrows, header.ncols);
    let mut provisional = vec![0u32; nrows * ncols];
    // index 0 is the background pseudo-label
    let mut forest = UnionFind::new(1);

    for row in 0..nrows {
        for col in 0..ncols {
            if !mask.get(row, col) {
                continue;
            }
            let idx = row * ncols + col;
            let mut adjacent = [0u32; 4];
            let mut n_adj = 0;
            // west
            if col > 0 && provisional[idx - 1] != 0 {
                adjacent[n_adj] = provisional[idx - 1];
                n_adj += 1;
            }
            if row > 0 {
                let above = idx - ncols;
                // north-west, north, north-east
                if col > 0 && provisional[above - 1] != 0 {
                    adjacent[n_adj] = provisional[above - 1];
                    n_adj += 1;
                }
                if provisional[above] != 0 {
                    adjacent[n_adj] = provisional[above];
                    n_adj += 1;
                }
                if col + 1 < ncols && provisional[above + 1] != 0 {
                    adjacent[n_adj] = provisional[above + 1];
                    n_adj += 1;
                }
            }
            if n_adj == 0 {
                provisional[idx] = forest.push();
            } else {
                let first = adjacent[0];
                provisional[idx] = first;
                for &other in &adjacent[1..n_adj] {
                    forest.union(first, other);
                }
            }
        }
    }

    // Second pass: map each root to a dense id in first-encounter order.
    let mut root_to_id = vec![0u32; forest.len()];
    let mut labels = vec![0u32; nrows * ncols];
    let mut component_sizes = vec![0usize];
    for idx in 0..labels.len() {
        if provisional[idx] == 0 {
            continue;
        }
        let root = forest.find(provisional[idx]) as usize;
        if root_to_id[root] == 0 {
            root_to_id[root] = component_sizes.len() as u32;
            component_sizes.push(0);
        }
        let id = root_to_id[root];
        labels[idx] = id;
        component_sizes[id as usize] += 1;
    }

    LabelMap {
        header,
        labels,
        component_sizes,
    }
}

/// Keeps the pixels of components holding at least `min_pixels` pixels.
pub fn filter_by_area(labels: &LabelMap, min_pixels: usize) -> BitMask {
    let bits = labels
        .labels
        .iter()
        .map(|&l| l != 0 && labels.component_sizes[l as usize] >= min_pixels)
        .collect();
    BitMask::new(labels.header.clone(), bits).expect("labels carry a consistent shape")
}
