//! Ciphertext and image distortions used by the robustness experiments.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::AnalysisError;
use crate::image::GrayImage;
use crate::pipeline::CipherImage;

fn probability(name: &str, p: f64) -> Result<(), AnalysisError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(AnalysisError::OutOfRange(format!("{name} must be in [0, 1], got {p}")));
    }
    Ok(())
}

/// Zeroes the `w x h` rectangle at `(x, y)` of a row-major `width`-wide buffer.
pub fn zero_rect(
    data: &mut [u8],
    width: usize,
    height: usize,
    (x, y, w, h): (usize, usize, usize, usize),
) -> Result<(), AnalysisError> {
    if x + w > width || y + h > height || width * height > data.len() {
        return Err(AnalysisError::OutOfRange(format!(
            "region {w}x{h}+{x}+{y} outside {width}x{height}"
        )));
    }
    for row in y..y + h {
        data[row * width + x..row * width + x + w].fill(0);
    }
    Ok(())
}

/// Zeroes a rectangle of the ciphertext viewed as a `width x height` image.
pub fn crop(c: &CipherImage, rect: (usize, usize, usize, usize)) -> Result<CipherImage, AnalysisError> {
    let mut out = c.clone();
    zero_rect(&mut out.ciphertext, c.width as usize, c.height as usize, rect)?;
    Ok(out)
}

/// Tiles the image with `block x block` cells (edge cells may be partial),
/// picks `round(fraction * cells)` of them without replacement and zeroes
/// them. Returns the distorted ciphertext and the number of cells zeroed.
pub fn data_loss(
    c: &CipherImage,
    fraction: f64,
    block: usize,
    rng: &mut impl Rng,
) -> Result<(CipherImage, usize), AnalysisError> {
    probability("loss fraction", fraction)?;
    if block == 0 {
        return Err(AnalysisError::OutOfRange("block size must be positive".into()));
    }
    let (w, h) = (c.width as usize, c.height as usize);
    let (cols, rows) = (w.div_ceil(block), h.div_ceil(block));
    let cells = cols * rows;
    let k = (fraction * cells as f64).round() as usize;
    let mut out = c.clone();
    for idx in rand::seq::index::sample(rng, cells, k) {
        let (cx, cy) = ((idx % cols) * block, (idx / cols) * block);
        let rect = (cx, cy, block.min(w - cx), block.min(h - cy));
        zero_rect(&mut out.ciphertext, w, h, rect)?;
    }
    Ok((out, k))
}

/// Each byte independently becomes 0 or 255 (equal odds) with probability `density`.
pub fn salt_pepper_bytes(
    data: &mut [u8],
    density: f64,
    rng: &mut impl Rng,
) -> Result<(), AnalysisError> {
    probability("density", density)?;
    for b in data.iter_mut() {
        if rng.gen_bool(density) {
            *b = if rng.gen_bool(0.5) { 255 } else { 0 };
        }
    }
    Ok(())
}

/// Adds rounded N(0, sigma^2) noise and clamps to [0, 255].
pub fn gaussian_bytes(data: &mut [u8], sigma: f64, rng: &mut impl Rng) -> Result<(), AnalysisError> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(AnalysisError::OutOfRange(format!("sigma must be >= 0, got {sigma}")));
    }
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| AnalysisError::OutOfRange(format!("sigma {sigma}: {e}")))?;
    for b in data.iter_mut() {
        let v = *b as f64 + normal.sample(rng).round();
        *b = v.clamp(0.0, 255.0) as u8;
    }
    Ok(())
}

pub fn salt_pepper(c: &CipherImage, density: f64, rng: &mut impl Rng) -> Result<CipherImage, AnalysisError> {
    let mut out = c.clone();
    salt_pepper_bytes(&mut out.ciphertext, density, rng)?;
    Ok(out)
}

pub fn gaussian(c: &CipherImage, sigma: f64, rng: &mut impl Rng) -> Result<CipherImage, AnalysisError> {
    let mut out = c.clone();
    gaussian_bytes(&mut out.ciphertext, sigma, rng)?;
    Ok(out)
}

/// XORs the ciphertext with `mask`, repeated as needed.
pub fn xor_mask(c: &CipherImage, mask: &[u8]) -> Result<CipherImage, AnalysisError> {
    if mask.is_empty() {
        return Err(AnalysisError::OutOfRange("empty XOR mask".into()));
    }
    let mut out = c.clone();
    for (b, m) in out.ciphertext.iter_mut().zip(mask.iter().cycle()) {
        *b ^= m;
    }
    Ok(out)
}

pub fn image_gaussian_noise(img: &GrayImage, sigma: f64, rng: &mut impl Rng) -> Result<GrayImage, AnalysisError> {
    let mut out = img.clone();
    gaussian_bytes(out.pixels_mut(), sigma, rng)?;
    Ok(out)
}

pub fn image_salt_pepper(img: &GrayImage, density: f64, rng: &mut impl Rng) -> Result<GrayImage, AnalysisError> {
    let mut out = img.clone();
    salt_pepper_bytes(out.pixels_mut(), density, rng)?;
    Ok(out)
}

/// Gaussian blur with a `size x size` kernel; borders are clamped.
pub fn image_gaussian_blur(img: &GrayImage, size: usize, sigma: f64) -> Result<GrayImage, AnalysisError> {
    if size % 2 == 0 || sigma <= 0.0 || sigma.is_nan() {
        return Err(AnalysisError::OutOfRange(format!(
            "blur kernel needs odd size and positive sigma, got {size}, {sigma}"
        )));
    }
    let half = (size / 2) as isize;
    let mut k: Vec<f64> = (-half..=half)
        .map(|d| (-((d * d) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= s);

    let (w, h) = (img.width() as isize, img.height() as isize);
    if w == 0 || h == 0 {
        return Ok(img.clone());
    }
    let clamp = |v: isize, hi: isize| v.clamp(0, hi - 1) as usize;
    let mut tmp = vec![0.0; img.len()];
    for y in 0..h {
        for x in 0..w {
            tmp[(y * w + x) as usize] = (-half..=half)
                .map(|d| k[(d + half) as usize] * img.get(clamp(x + d, w), y as usize) as f64)
                .sum();
        }
    }
    Ok(GrayImage::from_fn(w as usize, h as usize, |x, y| {
        let v: f64 = (-half..=half)
            .map(|d| k[(d + half) as usize] * tmp[clamp(y as isize + d, h) * w as usize + x])
            .sum();
        v.round().clamp(0.0, 255.0) as u8
    }))
}
