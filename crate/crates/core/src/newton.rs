//! Multi-start damped Newton iteration with deterministic deduplication.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::geom::Rect;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    /// Accept when `|g(z)| ≤ tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Step halvings tried when `|g|` fails to decrease.
    pub max_halvings: usize,
    /// Extra Newton steps taken after the tolerance is reached.
    pub polish_steps: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            tol: 1e-10,
            max_iter: 80,
            max_halvings: 20,
            polish_steps: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeedOutcome {
    Root {
        z: Complex64,
        residual: f64,
    },
    /// Left the roaming region around the window.
    Escaped,
    /// No decrease after all step halvings, non-finite values, or out of iterations.
    Stalled,
}

/// Damped Newton for `g = 0` from `z0`, confined to `region`.
pub fn damped_newton<G, D>(
    g: &G,
    dg: &D,
    z0: Complex64,
    region: &Rect,
    cfg: &NewtonConfig,
) -> SeedOutcome
where
    G: Fn(Complex64) -> Option<Complex64>,
    D: Fn(Complex64) -> Option<Complex64>,
{
    let mut z = z0;
    let Some(mut gz) = g(z) else {
        return SeedOutcome::Stalled;
    };
    let mut converged_at = None;
    for iter in 0..cfg.max_iter {
        let r = gz.norm();
        if r <= cfg.tol {
            match converged_at {
                None => converged_at = Some(iter),
                Some(first) if iter - first >= cfg.polish_steps => break,
                Some(_) => {}
            }
        }
        let Some(d) = dg(z) else {
            return SeedOutcome::Stalled;
        };
        let step = gz / d;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..=cfg.max_halvings {
            let cand = z - step * t;
            if let Some(gc) = g(cand) {
                if gc.norm() < r {
                    z = cand;
                    gz = gc;
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
        if !region.contains(z) {
            return SeedOutcome::Escaped;
        }
    }
    let residual = gz.norm();
    if residual <= cfg.tol {
        SeedOutcome::Root { z, residual }
    } else {
        SeedOutcome::Stalled
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FoundRoot {
    pub z: Complex64,
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MultiStart {
    /// Deduplicated roots inside the window, sorted by (Im, Re).
    pub roots: Vec<FoundRoot>,
    pub seeds: usize,
    /// Seeds that stalled, left the roaming region, or converged outside the window.
    pub failed_seeds: usize,
}

/// Sort by `(Im, Re)` and drop candidates within `radius` of an earlier one.
pub fn dedup_sorted(mut cands: Vec<FoundRoot>, radius: f64) -> Vec<FoundRoot> {
    cands.sort_by(|a, b| a.z.im.total_cmp(&b.z.im).then(a.z.re.total_cmp(&b.z.re)));
    let mut kept: Vec<FoundRoot> = Vec::new();
    for c in cands {
        let dup = kept
            .iter()
            .rev()
            .take_while(|k| c.z.im - k.z.im < radius)
            .any(|k| (k.z - c.z).norm() < radius);
        if !dup {
            kept.push(c);
        }
    }
    kept
}

/// Runs [`damped_newton`] from every seed in parallel, keeps roots inside
/// `window`, and deduplicates them. The result does not depend on how seeds
/// are scheduled across workers.
pub fn multi_start<G, D>(
    g: &G,
    dg: &D,
    seeds: &[Complex64],
    window: &Rect,
    cfg: &NewtonConfig,
    dedup_radius: f64,
) -> MultiStart
where
    G: Fn(Complex64) -> Option<Complex64> + Sync,
    D: Fn(Complex64) -> Option<Complex64> + Sync,
{
    let region = window.expanded(0.5);
    let outcomes: Vec<SeedOutcome> = seeds
        .par_iter()
        .map(|&z0| damped_newton(g, dg, z0, &region, cfg))
        .collect();
    let mut failed = 0;
    let mut cands = Vec::new();
    for o in outcomes {
        match o {
            SeedOutcome::Root { z, residual } if window.contains(z) => {
                cands.push(FoundRoot { z, residual })
            }
            _ => failed += 1,
        }
    }
    MultiStart {
        roots: dedup_sorted(cands, dedup_radius),
        seeds: seeds.len(),
        failed_seeds: failed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::seed_lattice;

    #[test]
    fn cubic_roots() {
        let g = |z: Complex64| Some(z * z * z - 1.0);
        let dg = |z: Complex64| Some(3.0 * z * z);
        let w = Rect::square(2.0);
        let res = multi_start(
            &g,
            &dg,
            &seed_lattice(&w, 4.0),
            &w,
            &NewtonConfig::default(),
            1e-6,
        );
        assert_eq!(res.roots.len(), 3);
        for r in &res.roots {
            assert!((r.z.powu(3) - 1.0).norm() <= 1e-10);
        }
        // sorted by imaginary part
        assert!(res.roots[0].z.im < res.roots[1].z.im && res.roots[1].z.im < res.roots[2].z.im);
    }

    #[test]
    fn dedup_keeps_first_in_order() {
        let mk = |re, im| FoundRoot {
            z: Complex64::new(re, im),
            residual: 0.0,
        };
        let out = dedup_sorted(vec![mk(1.0, 0.0), mk(1.0 + 1e-8, 1e-9), mk(0.0, 5.0)], 1e-6);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].z, Complex64::new(1.0, 0.0));
    }
}
