//! Encrypt/decrypt experiments built from the metrics and attacks.

use rand::Rng;

use super::attacks;
use super::metrics::{npcr, psnr, uaci};
use super::ssim::ssim;
use crate::block_cipher::CipherKey;
use crate::error::AnalysisError;
use crate::image::GrayImage;
use crate::keydist::QrCodec;
use crate::pipeline::{decrypt_image, encrypt_image, ChaoticParams, CipherImage, Flags, Session};

/// Flips bit `bit` of the key (bit 0 is the MSB of byte 0).
pub fn flip_key_bit(key: &CipherKey, bit: usize) -> Result<CipherKey, AnalysisError> {
    if bit >= 128 {
        return Err(AnalysisError::OutOfRange(format!("key bit {bit} >= 128")));
    }
    let mut k = *key;
    k.0[bit / 8] ^= 0x80 >> (bit % 8);
    Ok(k)
}

/// Hamming distance between two byte strings of equal length, as a
/// percentage of all bits.
pub fn bit_difference(a: &[u8], b: &[u8]) -> Result<f64, AnalysisError> {
    if a.len() != b.len() {
        return Err(AnalysisError::OutOfRange(format!(
            "length mismatch {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let diff: u32 = a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum();
    Ok(diff as f64 / (a.len() * 8) as f64 * 100.0)
}

/// Percentage of ciphertext bits that change when the listed key bits are
/// flipped (no bits: 0%). IV, parameters and flags stay fixed.
pub fn avalanche(
    img: &GrayImage,
    key: &CipherKey,
    key_bits: &[usize],
    iv: [u8; 16],
    params: &ChaoticParams,
    flags: Flags,
) -> Result<f64, AnalysisError> {
    let mut other = *key;
    for &b in key_bits {
        other = flip_key_bit(&other, b)?;
    }
    let c1 = encrypt_image(img, key, iv, params, flags)?;
    let c2 = encrypt_image(img, &other, iv, params, flags)?;
    bit_difference(&c1.ciphertext, &c2.ciphertext)
}

/// Copy of `img` with pixel (0, 0) incremented modulo 256.
pub fn bump_first_pixel(img: &GrayImage) -> GrayImage {
    let mut out = img.clone();
    if !out.is_empty() {
        out.set(0, 0, out.get(0, 0).wrapping_add(1));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Differential {
    pub npcr: f64,
    pub uaci: f64,
}

/// NPCR / UACI between the ciphertext images of `img` and of `img` with
/// pixel (0, 0) bumped by one, under the same key, IV and parameters.
pub fn differential(
    img: &GrayImage,
    key: &CipherKey,
    iv: [u8; 16],
    params: &ChaoticParams,
    flags: Flags,
) -> Result<Differential, AnalysisError> {
    let session = Session::new(key, params)?;
    let c1 = session.encrypt(img, iv, flags)?.to_image();
    let c2 = session.encrypt(&bump_first_pixel(img), iv, flags)?.to_image();
    Ok(Differential {
        npcr: npcr(&c1, &c2)?,
        uaci: uaci(&c1, &c2)?,
    })
}

/// SSIM between `img` and its decryption under a key with `bit` flipped.
pub fn key_sensitivity(
    img: &GrayImage,
    key: &CipherKey,
    bit: usize,
    iv: [u8; 16],
    params: &ChaoticParams,
    flags: Flags,
) -> Result<f64, AnalysisError> {
    let c = encrypt_image(img, key, iv, params, flags)?;
    let wrong = decrypt_image(&c, &flip_key_bit(key, bit)?, params)?;
    ssim(img, &wrong)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quality {
    pub ssim: f64,
    pub psnr: f64,
}

/// Decrypts a distorted ciphertext and compares against the original image.
pub fn decrypt_quality(
    original: &GrayImage,
    distorted: &CipherImage,
    key: &CipherKey,
    params: &ChaoticParams,
) -> Result<Quality, AnalysisError> {
    let dec = decrypt_image(distorted, key, params)?;
    Ok(Quality {
        ssim: ssim(original, &dec)?,
        psnr: psnr(original, &dec)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std_dev: f64,
    pub samples: Vec<f64>,
}

impl Summary {
    /// Mean and population standard deviation.
    pub fn of(samples: Vec<f64>) -> Self {
        let n = samples.len().max(1) as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
        Self {
            mean,
            std_dev: var.sqrt(),
            samples,
        }
    }
}

/// Repeats a random ciphertext distortion and summarizes decryption SSIM.
pub fn robustness<R: Rng>(
    img: &GrayImage,
    key: &CipherKey,
    iv: [u8; 16],
    params: &ChaoticParams,
    flags: Flags,
    iterations: usize,
    rng: &mut R,
    mut attack: impl FnMut(&CipherImage, &mut R) -> Result<CipherImage, AnalysisError>,
) -> Result<Summary, AnalysisError> {
    let c = encrypt_image(img, key, iv, params, flags)?;
    let mut samples = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        let distorted = attack(&c, rng)?;
        samples.push(decrypt_quality(img, &distorted, key, params)?.ssim);
    }
    Ok(Summary::of(samples))
}

/// Mean decryption SSIM after zeroing `fraction` of the `block`-sized cells.
#[allow(clippy::too_many_arguments)]
pub fn data_loss_ssim(
    img: &GrayImage,
    key: &CipherKey,
    iv: [u8; 16],
    params: &ChaoticParams,
    flags: Flags,
    fraction: f64,
    block: usize,
    iterations: usize,
    rng: &mut impl Rng,
) -> Result<Summary, AnalysisError> {
    robustness(img, key, iv, params, flags, iterations, rng, |c, r| {
        Ok(attacks::data_loss(c, fraction, block, r)?.0)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QrTrial {
    pub distortion: &'static str,
    pub decoded: bool,
}

/// Tries to decode `qr` after Gaussian noise (sigma 20), a 5x5 Gaussian
/// blur (sigma 1) and salt-and-pepper noise (density 0.05). `expected` is
/// the payload the decoder must return for a trial to count as success.
pub fn qr_distortion_trials(
    qr: &GrayImage,
    expected: &str,
    codec: &dyn QrCodec,
    rng: &mut impl Rng,
) -> Result<Vec<QrTrial>, AnalysisError> {
    let variants = [
        ("gaussian_noise_20", attacks::image_gaussian_noise(qr, 20.0, rng)?),
        ("gaussian_blur_5x5_1", attacks::image_gaussian_blur(qr, 5, 1.0)?),
        ("salt_pepper_0.05", attacks::image_salt_pepper(qr, 0.05, rng)?),
    ];
    Ok(variants
        .into_iter()
        .map(|(name, img)| QrTrial {
            distortion: name,
            decoded: codec.decode(&img).map(|t| t == expected).unwrap_or(false),
        })
        .collect())
}
