//! Deterministic synthetic test images.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::GrayImage;

pub const SIDE: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    HorizontalGradient,
    DiagonalGradient,
    Radial,
    Checkerboard,
    Stripes,
    Sinusoid,
    SmoothNoise,
    Shapes,
    Noise,
    Constant,
}

impl Kind {
    pub const ALL: [Kind; 10] = [
        Kind::HorizontalGradient,
        Kind::DiagonalGradient,
        Kind::Radial,
        Kind::Checkerboard,
        Kind::Stripes,
        Kind::Sinusoid,
        Kind::SmoothNoise,
        Kind::Shapes,
        Kind::Noise,
        Kind::Constant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::HorizontalGradient => "hgradient",
            Kind::DiagonalGradient => "dgradient",
            Kind::Radial => "radial",
            Kind::Checkerboard => "checkerboard",
            Kind::Stripes => "stripes",
            Kind::Sinusoid => "sinusoid",
            Kind::SmoothNoise => "smooth_noise",
            Kind::Shapes => "shapes",
            Kind::Noise => "noise",
            Kind::Constant => "constant",
        }
    }

    /// Images with spatial structure resembling natural photographs
    /// (excludes white noise and the flat image).
    pub fn is_natural_like(self) -> bool {
        !matches!(self, Kind::Noise | Kind::Constant)
    }

    pub fn generate(self, side: usize) -> GrayImage {
        let s = side.max(1);
        let scale = |v: f64| v.round().clamp(0.0, 255.0) as u8;
        match self {
            Kind::HorizontalGradient => GrayImage::from_fn(s, s, |x, _| scale(x as f64 * 255.0 / (s - 1).max(1) as f64)),
            Kind::DiagonalGradient => GrayImage::from_fn(s, s, |x, y| {
                scale((x + y) as f64 * 255.0 / (2 * (s - 1)).max(1) as f64)
            }),
            Kind::Radial => {
                let c = (s as f64 - 1.0) / 2.0;
                let rmax = c * std::f64::consts::SQRT_2;
                GrayImage::from_fn(s, s, |x, y| {
                    let r = ((x as f64 - c).powi(2) + (y as f64 - c).powi(2)).sqrt();
                    scale(255.0 * (1.0 - r / rmax.max(1.0)))
                })
            }
            Kind::Checkerboard => GrayImage::from_fn(s, s, |x, y| if (x / 32 + y / 32) % 2 == 0 { 40 } else { 215 }),
            Kind::Stripes => GrayImage::from_fn(s, s, |x, _| if (x / 8) % 2 == 0 { 30 } else { 220 }),
            Kind::Sinusoid => GrayImage::from_fn(s, s, |x, y| {
                let (fx, fy) = (x as f64 / 20.0, y as f64 / 31.0);
                scale(127.5 + 60.0 * fx.sin() + 60.0 * fy.cos())
            }),
            Kind::SmoothNoise => smooth_noise(s, 7),
            Kind::Shapes => shapes(s),
            Kind::Noise => {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                GrayImage::from_fn(s, s, |_, _| rng.gen())
            }
            Kind::Constant => GrayImage::filled(s, s, 128),
        }
    }
}

/// Value noise: random lattice every 32 px, bilinearly interpolated.
fn smooth_noise(side: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cell = 32;
    let n = side / cell + 2;
    let lattice: Vec<f64> = (0..n * n).map(|_| rng.gen_range(0.0..255.0)).collect();
    GrayImage::from_fn(side, side, |x, y| {
        let (gx, gy) = (x / cell, y / cell);
        let (tx, ty) = ((x % cell) as f64 / cell as f64, (y % cell) as f64 / cell as f64);
        let at = |i: usize, j: usize| lattice[j * n + i];
        let top = at(gx, gy) * (1.0 - tx) + at(gx + 1, gy) * tx;
        let bottom = at(gx, gy + 1) * (1.0 - tx) + at(gx + 1, gy + 1) * tx;
        (top * (1.0 - ty) + bottom * ty).round() as u8
    })
}

/// Overlapping discs and rectangles on a gradient background.
fn shapes(side: usize) -> GrayImage {
    let f = side as f64 / 256.0;
    GrayImage::from_fn(side, side, |x, y| {
        let (xf, yf) = (x as f64 / f, y as f64 / f);
        let mut v = 60.0 + yf * 0.4;
        if (xf - 90.0).powi(2) + (yf - 100.0).powi(2) < 50.0f64.powi(2) {
            v = 200.0;
        }
        if (140.0..230.0).contains(&xf) && (150.0..220.0).contains(&yf) {
            v = 120.0 + (xf - 140.0) * 0.5;
        }
        if (xf - 180.0).powi(2) + (yf - 60.0).powi(2) < 30.0f64.powi(2) {
            v = 20.0;
        }
        v.round().clamp(0.0, 255.0) as u8
    })
}

/// The full 256x256 corpus as `(name, image)` pairs.
pub fn standard() -> Vec<(&'static str, GrayImage)> {
    Kind::ALL.iter().map(|k| (k.name(), k.generate(SIDE))).collect()
}
