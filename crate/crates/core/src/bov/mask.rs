use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Raster, Rect};
use crate::map::EntireMap;

/// Boolean raster sampled at pixel centers; row 0 is the bottom row.
#[derive(Clone, Debug, PartialEq)]
pub struct GridMask {
    pub raster: Raster,
    /// Row-major, `bits[j * nx + i]`.
    pub bits: Vec<bool>,
}

impl GridMask {
    pub fn from_fn(raster: Raster, f: impl Fn(usize, usize) -> bool + Sync) -> Result<Self> {
        if raster.nx < 8 || raster.ny < 8 {
            return Err(Error::Precondition(format!(
                "mask needs at least 8x8 pixels, got {}x{}",
                raster.nx, raster.ny
            )));
        }
        let nx = raster.nx;
        let mut bits = vec![false; raster.len()];
        bits.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
            for (i, b) in row.iter_mut().enumerate() {
                *b = f(i, j);
            }
        });
        Ok(GridMask { raster, bits })
    }

    pub fn nx(&self) -> usize {
        self.raster.nx
    }

    pub fn ny(&self) -> usize {
        self.raster.ny
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.raster.nx + i]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Pixels where `|f| > R`. Saturated values count as exceeding every radius.
pub fn superlevel_mask<M: EntireMap + ?Sized>(
    m: &M,
    radius: f64,
    window: &Rect,
    nx: usize,
    ny: usize,
) -> Result<GridMask> {
    if !(radius > 0.0) {
        return Err(Error::Precondition("radius must be positive".into()));
    }
    window.validate()?;
    let raster = Raster::new(*window, nx, ny);
    GridMask::from_fn(raster, |i, j| m.eval(raster.center(i, j)).exceeds(radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{MapSpec, ReferenceExp};
    use crate::poly::Poly;

    #[test]
    fn exponential_half_plane() {
        let mask = superlevel_mask(&ReferenceExp, 10.0, &Rect::square(5.0), 64, 64).unwrap();
        let cut = 10f64.ln();
        for j in 0..64 {
            for i in 0..64 {
                let z = mask.raster.center(i, j);
                assert_eq!(mask.get(i, j), z.re > cut, "{z}");
            }
        }
    }

    #[test]
    fn huge_radius_is_empty() {
        let m = MapSpec::exp_plus(Poly::identity()).unwrap();
        let mask = superlevel_mask(&m, 1e200, &Rect::square(5.0), 16, 16).unwrap();
        assert_eq!(mask.count(), 0);
    }

    #[test]
    fn preconditions() {
        assert!(superlevel_mask(&ReferenceExp, 0.0, &Rect::square(1.0), 8, 8).is_err());
        assert!(superlevel_mask(&ReferenceExp, 1.0, &Rect::square(1.0), 4, 8).is_err());
    }
}
