//! Per-pixel orbit verdicts on a raster.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Raster, Rect};
use crate::map::{FixedPointFamily, MapSpec};

use super::orbit::{run, Verdict};

pub const LABEL_ESCAPED: i32 = -1;
pub const LABEL_UNDECIDED: i32 = -2;

/// Labels are `encode_index(k)` for orbits converging to the fixed point
/// with index `k`, [`LABEL_ESCAPED`] or [`LABEL_UNDECIDED`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridClassification {
    pub raster: Raster,
    /// Row-major, row 0 at the bottom.
    pub labels: Vec<i32>,
    pub iterations: Vec<u32>,
}

/// Interleaves signed indices into `0, 1, 2, …`: `0 → 0, -1 → 1, 1 → 2, -2 → 3`.
pub fn encode_index(k: i64) -> i32 {
    if k >= 0 {
        (2 * k) as i32
    } else {
        (-2 * k - 1) as i32
    }
}

/// Inverse of [`encode_index`]; `None` for the escaped and undecided labels.
pub fn decode_label(label: i32) -> Option<i64> {
    if label < 0 {
        None
    } else if label % 2 == 0 {
        Some(label as i64 / 2)
    } else {
        Some(-(label as i64 + 1) / 2)
    }
}

impl GridClassification {
    pub fn nx(&self) -> usize {
        self.raster.nx
    }

    pub fn ny(&self) -> usize {
        self.raster.ny
    }

    pub fn label(&self, i: usize, j: usize) -> i32 {
        self.labels[j * self.raster.nx + i]
    }

    /// Fixed-point index at a pixel, if its orbit converged.
    pub fn index(&self, i: usize, j: usize) -> Option<i64> {
        decode_label(self.label(i, j))
    }
}

pub fn classify_grid(
    m: &MapSpec,
    window: &Rect,
    nx: usize,
    ny: usize,
    max_iter: usize,
) -> Result<GridClassification> {
    if m.fixed_point_family() == FixedPointFamily::Unknown {
        return Err(Error::Precondition(
            "basin classification needs an f_λ or h_λ map".into(),
        ));
    }
    if nx == 0 || ny == 0 || max_iter == 0 {
        return Err(Error::Precondition(
            "grid needs nx, ny, max_iter >= 1".into(),
        ));
    }
    window.validate()?;
    let raster = Raster::new(*window, nx, ny);
    let mut labels = vec![0i32; nx * ny];
    let mut iterations = vec![0u32; nx * ny];
    labels
        .par_chunks_mut(nx)
        .zip(iterations.par_chunks_mut(nx))
        .enumerate()
        .for_each(|(j, (lrow, irow))| {
            for i in 0..nx {
                let o = run(m, raster.center(i, j), max_iter, false);
                lrow[i] = match o.verdict {
                    Verdict::Converged { k_index, .. } => encode_index(k_index),
                    Verdict::Escaped { .. } => LABEL_ESCAPED,
                    Verdict::Undecided => LABEL_UNDECIDED,
                };
                irow[i] = o.steps_used as u32;
            }
        });
    Ok(GridClassification {
        raster,
        labels,
        iterations,
    })
}
