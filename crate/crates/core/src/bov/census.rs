//! 4-connected component labeling of a [`GridMask`].
//!
//! The raster is cut into horizontal strips that are labeled independently
//! and stitched with a union-find over the strip seams. Final ids are
//! assigned in order of each component's first pixel in row-major storage
//! order, so the result is the same for every strip count.

use rayon::prelude::*;

use super::mask::GridMask;

/// Which pixels form the components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    /// Pixels where the mask is true.
    Set,
    /// Pixels where the mask is false.
    Unset,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrameContact {
    pub left: bool,
    pub right: bool,
    pub bottom: bool,
    pub top: bool,
}

impl FrameContact {
    pub fn any(&self) -> bool {
        self.left || self.right || self.bottom || self.top
    }

    pub fn edges(&self) -> usize {
        [self.left, self.right, self.bottom, self.top]
            .iter()
            .filter(|&&b| b)
            .count()
    }
}

/// Inclusive pixel bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PixelBox {
    pub i_min: usize,
    pub i_max: usize,
    pub j_min: usize,
    pub j_max: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub id: usize,
    pub pixel_count: usize,
    pub touches: FrameContact,
    pub bbox: PixelBox,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentCensus {
    pub nx: usize,
    pub ny: usize,
    /// Component id per pixel, `-1` outside the chosen polarity.
    pub labels: Vec<i32>,
    pub components: Vec<Component>,
}

impl ComponentCensus {
    pub fn interior(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| !c.touches.any())
    }
}

const NONE: u32 = u32::MAX;

fn label_strip(mask: &GridMask, target: bool, rows: std::ops::Range<usize>) -> (Vec<u32>, u32) {
    let nx = mask.nx();
    let j0 = rows.start;
    let h = rows.len();
    let mut labels = vec![NONE; nx * h];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..nx * h {
        if labels[start] != NONE || mask.bits[j0 * nx + start] != target {
            continue;
        }
        labels[start] = next;
        stack.push(start);
        while let Some(p) = stack.pop() {
            let (i, j) = (p % nx, p / nx);
            let mut visit = |q: usize| {
                if labels[q] == NONE && mask.bits[j0 * nx + q] == target {
                    labels[q] = next;
                    stack.push(q);
                }
            };
            if i > 0 {
                visit(p - 1);
            }
            if i + 1 < nx {
                visit(p + 1);
            }
            if j > 0 {
                visit(p - nx);
            }
            if j + 1 < h {
                visit(p + nx);
            }
        }
        next += 1;
    }
    (labels, next)
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let ra = find(parent, a);
    let rb = find(parent, b);
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// Labels with one strip per worker thread.
pub fn component_census(mask: &GridMask, polarity: Polarity) -> ComponentCensus {
    let strips = rayon::current_num_threads().clamp(1, mask.ny());
    component_census_with_strips(mask, polarity, strips)
}

/// Labels using exactly `strips` horizontal strips (clamped to `1..=ny`).
pub fn component_census_with_strips(
    mask: &GridMask,
    polarity: Polarity,
    strips: usize,
) -> ComponentCensus {
    let (nx, ny) = (mask.nx(), mask.ny());
    let target = polarity == Polarity::Set;
    let strips = strips.clamp(1, ny.max(1));
    let bounds: Vec<std::ops::Range<usize>> = (0..strips)
        .map(|s| (s * ny / strips)..((s + 1) * ny / strips))
        .filter(|r| !r.is_empty())
        .collect();
    let parts: Vec<(Vec<u32>, u32)> = bounds
        .par_iter()
        .map(|r| label_strip(mask, target, r.clone()))
        .collect();

    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 0u32;
    for (_, n) in &parts {
        offsets.push(total);
        total += n;
    }
    let mut parent: Vec<u32> = (0..total).collect();
    for s in 1..parts.len() {
        let below = &parts[s - 1].0;
        let above = &parts[s].0;
        let below_row = (bounds[s - 1].len() - 1) * nx;
        for i in 0..nx {
            let a = below[below_row + i];
            let b = above[i];
            if a != NONE && b != NONE {
                union(&mut parent, a + offsets[s - 1], b + offsets[s]);
            }
        }
    }

    let mut remap = vec![u32::MAX; total as usize];
    let mut labels = vec![-1i32; nx * ny];
    let mut components: Vec<Component> = Vec::new();
    for (s, (local, _)) in parts.iter().enumerate() {
        let j0 = bounds[s].start;
        for (p, &l) in local.iter().enumerate() {
            if l == NONE {
                continue;
            }
            let root = find(&mut parent, l + offsets[s]);
            let id = if remap[root as usize] == u32::MAX {
                let id = components.len() as u32;
                remap[root as usize] = id;
                let (i, j) = (p % nx, j0 + p / nx);
                components.push(Component {
                    id: id as usize,
                    pixel_count: 0,
                    touches: FrameContact::default(),
                    bbox: PixelBox {
                        i_min: i,
                        i_max: i,
                        j_min: j,
                        j_max: j,
                    },
                });
                id
            } else {
                remap[root as usize]
            };
            let (i, j) = (p % nx, j0 + p / nx);
            labels[j * nx + i] = id as i32;
            let c = &mut components[id as usize];
            c.pixel_count += 1;
            c.bbox.i_min = c.bbox.i_min.min(i);
            c.bbox.i_max = c.bbox.i_max.max(i);
            c.bbox.j_min = c.bbox.j_min.min(j);
            c.bbox.j_max = c.bbox.j_max.max(j);
            c.touches.left |= i == 0;
            c.touches.right |= i + 1 == nx;
            c.touches.bottom |= j == 0;
            c.touches.top |= j + 1 == ny;
        }
    }
    ComponentCensus {
        nx,
        ny,
        labels,
        components,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Raster, Rect};
    use proptest::prelude::*;

    fn mask_from(nx: usize, ny: usize, f: impl Fn(usize, usize) -> bool + Sync) -> GridMask {
        GridMask::from_fn(
            Raster::new(Rect::new(0.0, nx as f64, 0.0, ny as f64), nx, ny),
            f,
        )
        .unwrap()
    }

    #[test]
    fn all_true_is_one_component() {
        let m = mask_from(8, 8, |_, _| true);
        let c = component_census(&m, Polarity::Set);
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.components[0].touches.edges(), 4);
        assert_eq!(c.components[0].pixel_count, 64);
        assert!(component_census(&m, Polarity::Unset).components.is_empty());
    }

    #[test]
    fn checkerboard_single_pixels() {
        let m = mask_from(8, 8, |i, j| (i + j) % 2 == 0);
        let c = component_census(&m, Polarity::Set);
        assert_eq!(c.components.len(), 32);
        assert!(c.components.iter().all(|k| k.pixel_count == 1));
        // first in storage order is pixel (0, 0): bottom-left corner
        assert_eq!(
            c.components[0].touches,
            FrameContact {
                left: true,
                right: false,
                bottom: true,
                top: false
            }
        );
        assert_eq!(c.labels[0], 0);
        assert_eq!(c.labels[1], -1);
        assert_eq!(c.labels[2], 1);
        let interior = c.interior().count();
        // 6x6 interior block holds 18 set pixels
        assert_eq!(interior, 18);
    }

    #[test]
    fn ring_and_hole() {
        // a square ring encloses one hole; the outside touches the frame
        let m = mask_from(10, 10, |i, j| {
            (2..=7).contains(&i)
                && (2..=7).contains(&j)
                && !((4..=5).contains(&i) && (4..=5).contains(&j))
        });
        let set = component_census(&m, Polarity::Set);
        assert_eq!(set.components.len(), 1);
        let unset = component_census(&m, Polarity::Unset);
        assert_eq!(unset.components.len(), 2);
        assert_eq!(unset.interior().count(), 1);
        assert_eq!(unset.interior().next().unwrap().pixel_count, 4);
        assert_eq!(
            unset.interior().next().unwrap().bbox,
            PixelBox {
                i_min: 4,
                i_max: 5,
                j_min: 4,
                j_max: 5
            }
        );
    }

    proptest! {
        #[test]
        fn strip_count_does_not_matter(
            seed in any::<u64>(),
            nx in 8usize..40,
            ny in 8usize..40,
            density in 0.2f64..0.8,
            strips in 1usize..12,
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let bits: Vec<bool> = (0..nx * ny).map(|_| rng.gen_bool(density)).collect();
            let m = mask_from(nx, ny, |i, j| bits[j * nx + i]);
            for pol in [Polarity::Set, Polarity::Unset] {
                let one = component_census_with_strips(&m, pol, 1);
                let many = component_census_with_strips(&m, pol, strips);
                prop_assert_eq!(&one, &many);
                let total: usize = one.components.iter().map(|c| c.pixel_count).sum();
                let want = m.bits.iter().filter(|&&b| b == (pol == Polarity::Set)).count();
                prop_assert_eq!(total, want);
            }
        }
    }
}
