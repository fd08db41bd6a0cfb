//! Axis-aligned windows in the complex plane and raster conventions.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `[re_min, re_max] × [im_min, im_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Rect {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    /// `[-h, h]²`.
    pub fn square(half_width: f64) -> Self {
        Rect::new(-half_width, half_width, -half_width, half_width)
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn area(&self) -> f64 {
        self.width().max(0.0) * self.height().max(0.0)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    /// True when `inner` lies in the interior of `self`.
    pub fn strictly_contains(&self, inner: &Rect) -> bool {
        inner.re_min > self.re_min
            && inner.re_max < self.re_max
            && inner.im_min > self.im_min
            && inner.im_max < self.im_max
    }

    pub fn translated(&self, dz: Complex64) -> Rect {
        Rect::new(
            self.re_min + dz.re,
            self.re_max + dz.re,
            self.im_min + dz.im,
            self.im_max + dz.im,
        )
    }

    /// Grown by `margin` times its size on every side.
    pub fn expanded(&self, margin: f64) -> Rect {
        let dx = self.width() * margin;
        let dy = self.height() * margin;
        Rect::new(
            self.re_min - dx,
            self.re_max + dx,
            self.im_min - dy,
            self.im_max + dy,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|v| v.is_finite())
            && self.re_max >= self.re_min
            && self.im_max >= self.im_min;
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("malformed window {self:?}")))
        }
    }
}

/// Pixel-center sampling of a window: pixel `(i, j)` sits at
/// `(re_min + (i+0.5)·dx, im_min + (j+0.5)·dy)`. Row `j = 0` is the bottom
/// (smallest imaginary part).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Raster {
    pub window: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl Raster {
    pub fn new(window: Rect, nx: usize, ny: usize) -> Self {
        Raster { window, nx, ny }
    }

    pub fn dx(&self) -> f64 {
        self.window.width() / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.window.height() / self.ny as f64
    }

    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.window.re_min + (i as f64 + 0.5) * self.dx(),
            self.window.im_min + (j as f64 + 0.5) * self.dy(),
        )
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Seed lattice with `density` points per unit length along each axis,
/// placed at cell centers. Zero-area windows yield no seeds.
pub fn seed_lattice(window: &Rect, density: f64) -> Vec<Complex64> {
    if window.area() <= 0.0 || density <= 0.0 {
        return Vec::new();
    }
    let nx = (window.width() * density).ceil().max(1.0) as usize;
    let ny = (window.height() * density).ceil().max(1.0) as usize;
    let raster = Raster::new(*window, nx, ny);
    let mut seeds = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            seeds.push(raster.center(i, j));
        }
    }
    seeds
}
