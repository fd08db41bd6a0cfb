//! Counting preimages of a point inside a window.

use num_complex::Complex64;

use crate::error::Result;
use crate::geom::{seed_lattice, Rect};
use crate::map::EntireMap;
use crate::newton::{multi_start, FoundRoot, NewtonConfig};
use crate::singular::{DEDUP_RADIUS, NEWTON_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct PreimageCensus {
    pub roots: Vec<FoundRoot>,
    pub seeds: usize,
    pub failed_seeds: usize,
}

impl PreimageCensus {
    pub fn count(&self) -> usize {
        self.roots.len()
    }
}

/// Solutions of `f(z) = w` in `window`, by multi-start Newton from a
/// lattice of `seed_density` seeds per unit length.
pub fn preimages<M: EntireMap + ?Sized>(
    m: &M,
    w: Complex64,
    window: &Rect,
    seed_density: f64,
) -> Result<PreimageCensus> {
    if window.area() <= 0.0 {
        return Ok(PreimageCensus {
            roots: Vec::new(),
            seeds: 0,
            failed_seeds: 0,
        });
    }
    window.validate()?;
    let g = |z: Complex64| m.eval(z).as_complex().map(|v| v - w);
    let dg = |z: Complex64| m.derivative(z).as_complex();
    let cfg = NewtonConfig {
        tol: NEWTON_TOL,
        ..NewtonConfig::default()
    };
    let res = multi_start(
        &g,
        &dg,
        &seed_lattice(window, seed_density),
        window,
        &cfg,
        DEDUP_RADIUS,
    );
    Ok(PreimageCensus {
        roots: res.roots,
        seeds: res.seeds,
        failed_seeds: res.failed_seeds,
    })
}

/// Number of deduplicated solutions of `f(z) = w` in `window`.
pub fn preimage_count<M: EntireMap + ?Sized>(
    m: &M,
    w: Complex64,
    window: &Rect,
    seed_density: f64,
) -> Result<usize> {
    Ok(preimages(m, w, window, seed_density)?.count())
}
