//! Window-relative evidence that `∞` is a Baker omitted value.
//!
//! A boundary component of `f^{-1}({|w| > R})` is counted as bounded when
//! the sublevel component it encloses sits strictly inside a window and is
//! unchanged (bounding box within one pixel) when the window is enlarged.

use crate::error::{Error, Result};
use crate::geom::Rect;
use crate::map::EntireMap;
use crate::report::{Check, Status};

use super::census::{component_census, Component, ComponentCensus, Polarity};
use super::mask::{superlevel_mask, GridMask};

/// Width of the frame band, in pixels, used for the clipping heuristic.
pub const FRAME_MARGIN: usize = 2;
/// Above this share of sublevel pixels in the frame band the census is inconclusive.
pub const MARGIN_FRACTION_LIMIT: f64 = 0.2;
/// Components narrower than this many pixels of the coarsest raster, in
/// either direction, are below resolution and left out of both checks.
pub const RESOLVED_SPAN: f64 = 3.0;

const ANCHOR: &str = "each component of ∂f^{-1}({|w| > R}) is bounded";

#[derive(Clone, Debug, PartialEq)]
pub struct WindowCensus {
    pub window: Rect,
    pub components: usize,
    /// Resolved components not touching the frame.
    pub interior: usize,
    /// Interior components below resolution.
    pub unresolved: usize,
    /// Some sublevel component touches at least three frame edges.
    pub spanning: bool,
    pub margin_fraction: f64,
}

#[derive(Clone, Debug)]
pub struct BovEvidence {
    pub windows: Vec<WindowCensus>,
    /// Superlevel masks, one per window.
    pub masks: Vec<GridMask>,
    pub checks: Vec<Check>,
}

impl BovEvidence {
    pub fn status(&self) -> Status {
        crate::report::overall_status(&self.checks)
    }
}

/// Complex-plane extent of a component from its extreme pixel centers.
fn extent(mask: &GridMask, c: &Component) -> [f64; 4] {
    let r = &mask.raster;
    let lo = r.center(c.bbox.i_min, c.bbox.j_min);
    let hi = r.center(c.bbox.i_max, c.bbox.j_max);
    [lo.re, hi.re, lo.im, hi.im]
}

fn margin_fraction(census: &ComponentCensus) -> f64 {
    let (nx, ny) = (census.nx, census.ny);
    let mut total = 0usize;
    let mut band = 0usize;
    for j in 0..ny {
        for i in 0..nx {
            if census.labels[j * nx + i] >= 0 {
                total += 1;
                if i < FRAME_MARGIN
                    || j < FRAME_MARGIN
                    || i + FRAME_MARGIN >= nx
                    || j + FRAME_MARGIN >= ny
                {
                    band += 1;
                }
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        band as f64 / total as f64
    }
}

/// Physical width and height of a component's pixel footprint.
fn span(mask: &GridMask, c: &Component) -> (f64, f64) {
    (
        (c.bbox.i_max - c.bbox.i_min + 1) as f64 * mask.raster.dx(),
        (c.bbox.j_max - c.bbox.j_min + 1) as f64 * mask.raster.dy(),
    )
}

/// Whether a component of `mask` spans [`RESOLVED_SPAN`] pixels of the
/// `coarse` pitch in both directions.
fn resolved(mask: &GridMask, coarse: (f64, f64), c: &Component) -> bool {
    let (sx, sy) = span(mask, c);
    sx >= RESOLVED_SPAN * coarse.0 && sy >= RESOLVED_SPAN * coarse.1
}

/// Sublevel census of `{|f| ≤ R}` on each of at least three strictly nested
/// windows, sampled at `resolution × resolution`.
pub fn bov_evidence<M: EntireMap + ?Sized>(
    m: &M,
    radius: f64,
    windows: &[Rect],
    resolution: usize,
) -> Result<BovEvidence> {
    if windows.len() < 3 {
        return Err(Error::Precondition(format!(
            "need at least 3 windows, got {}",
            windows.len()
        )));
    }
    for pair in windows.windows(2) {
        if !pair[1].strictly_contains(&pair[0]) {
            return Err(Error::Precondition(
                "windows must be strictly nested and increasing".into(),
            ));
        }
    }
    let mut masks = Vec::with_capacity(windows.len());
    let mut censuses = Vec::with_capacity(windows.len());
    let mut summaries = Vec::with_capacity(windows.len());
    let outer = windows[windows.len() - 1];
    let coarse = (
        outer.width() / resolution as f64,
        outer.height() / resolution as f64,
    );
    for w in windows {
        let mask = superlevel_mask(m, radius, w, resolution, resolution)?;
        let census = component_census(&mask, Polarity::Unset);
        let interior = census
            .interior()
            .filter(|c| resolved(&mask, coarse, c))
            .count();
        summaries.push(WindowCensus {
            window: *w,
            components: census.components.len(),
            interior,
            unresolved: census.interior().count() - interior,
            spanning: census.components.iter().any(|c| c.touches.edges() >= 3),
            margin_fraction: margin_fraction(&census),
        });
        masks.push(mask);
        censuses.push(census);
    }

    let mut checks = Vec::new();
    let counts: Vec<usize> = summaries.iter().map(|s| s.interior).collect();

    if summaries.iter().all(|s| s.spanning) {
        checks.push(
            Check::new("bov.unbounded_component", ANCHOR, Status::Fail).with_details(format!(
                "R={radius}: a sublevel component touches at least three frame edges in every window"
            )),
        );
    } else if let Some(s) = summaries
        .iter()
        .find(|s| s.margin_fraction > MARGIN_FRACTION_LIMIT)
    {
        checks.push(
            Check::new("bov.frame_margin", ANCHOR, Status::Inconclusive)
                .with_residual(s.margin_fraction)
                .with_details(format!(
                    "R={radius}: {:.1}% of sublevel pixels lie within {FRAME_MARGIN} pixels of the frame of {:?}",
                    100.0 * s.margin_fraction,
                    s.window
                )),
        );
    }

    // (a) interior components persist when the window grows
    let mut unstable = 0usize;
    let mut worst: f64 = 0.0;
    let mut compared = 0usize;
    for s in 0..windows.len() - 1 {
        let (small_mask, big_mask) = (&masks[s], &masks[s + 1]);
        let tol = big_mask.raster.dx().max(big_mask.raster.dy());
        let big_extents: Vec<[f64; 4]> = censuses[s + 1]
            .components
            .iter()
            .map(|c| extent(big_mask, c))
            .collect();
        for c in censuses[s].interior() {
            if !resolved(small_mask, coarse, c) {
                continue;
            }
            compared += 1;
            let e = extent(small_mask, c);
            let best = big_extents
                .iter()
                .map(|b| (0..4).map(|q| (b[q] - e[q]).abs()).fold(0.0, f64::max))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best / tol);
            if best > tol {
                unstable += 1;
            }
        }
    }
    checks.push(
        Check::new(
            "bov.stable_components",
            ANCHOR,
            Status::from_bool(unstable == 0 && compared > 0),
        )
        .with_residual(worst)
        .with_details(format!(
            "R={radius}: {unstable} of {compared} resolved interior components moved by more than one coarse pixel; worst shift {worst:.3} pixels"
        )),
    );

    // (b) more bounded components appear as the window grows
    let increasing = counts.windows(2).all(|p| p[1] > p[0]);
    checks.push(
        Check::new(
            "bov.component_growth",
            "f^{-1}({|w| > R}) is infinitely connected",
            Status::from_bool(increasing),
        )
        .with_details(format!(
            "R={radius}: resolved interior sublevel components per window {counts:?}, unresolved {:?}",
            summaries.iter().map(|s| s.unresolved).collect::<Vec<_>>()
        )),
    );

    Ok(BovEvidence {
        windows: summaries,
        masks,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{MapSpec, ReferenceExp};
    use crate::poly::Poly;

    fn squares(h: &[f64]) -> Vec<Rect> {
        h.iter().map(|&h| Rect::square(h)).collect()
    }

    #[test]
    fn exp_plus_z_passes() {
        let m = MapSpec::exp_plus(Poly::identity()).unwrap();
        let ev = bov_evidence(&m, 10.0, &squares(&[20.0, 40.0, 80.0]), 1024).unwrap();
        assert_eq!(ev.status(), Status::Pass, "{:#?}", ev.checks);
    }

    #[test]
    fn exponential_fails() {
        let ev = bov_evidence(&ReferenceExp, 10.0, &squares(&[20.0, 40.0, 80.0]), 256).unwrap();
        assert_eq!(ev.status(), Status::Fail);
        assert!(ev.windows.iter().all(|w| w.spanning));
    }

    #[test]
    fn nesting_required() {
        let m = MapSpec::exp_plus(Poly::identity()).unwrap();
        assert!(bov_evidence(&m, 10.0, &squares(&[20.0, 20.0, 40.0]), 64).is_err());
        assert!(bov_evidence(&m, 10.0, &squares(&[20.0, 40.0]), 64).is_err());
    }
}
