//! LSB steganography: `p' = (p & !1) | bit`, row-major, MSB-first.
//!
//! Layout: magic `0x53 0x47`, u32 big-endian payload length, payload.

use crate::error::KeyDistError;
use crate::image::GrayImage;

pub const STEGO_MAGIC: [u8; 2] = [0x53, 0x47];
pub const HEADER_BITS: usize = 48;

#[inline]
pub fn embed_bit(pixel: u8, bit: u8) -> u8 {
    (pixel & !1) | (bit & 1)
}

pub fn embed_lsb(img: &GrayImage, payload: &[u8]) -> Result<GrayImage, KeyDistError> {
    let need = HEADER_BITS + 8 * payload.len();
    if need > img.len() || payload.len() > u32::MAX as usize {
        return Err(KeyDistError::Capacity {
            need,
            have: img.len(),
        });
    }
    let mut out = img.clone();
    let header = STEGO_MAGIC
        .iter()
        .copied()
        .chain((payload.len() as u32).to_be_bytes());
    let bits = header
        .chain(payload.iter().copied())
        .flat_map(|byte| (0..8).rev().map(move |i| (byte >> i) & 1));
    for (px, bit) in out.pixels_mut().iter_mut().zip(bits) {
        *px = embed_bit(*px, bit);
    }
    Ok(out)
}

fn read_bytes(pixels: &[u8], start_bit: usize, n: usize) -> Vec<u8> {
    pixels[start_bit..start_bit + 8 * n]
        .chunks_exact(8)
        .map(|c| c.iter().fold(0u8, |acc, &p| (acc << 1) | (p & 1)))
        .collect()
}

pub fn extract_lsb(img: &GrayImage) -> Result<Vec<u8>, KeyDistError> {
    let px = img.pixels();
    if px.len() < HEADER_BITS {
        return Err(KeyDistError::StegoMagic);
    }
    let header = read_bytes(px, 0, 6);
    if header[..2] != STEGO_MAGIC {
        return Err(KeyDistError::StegoMagic);
    }
    let len = u32::from_be_bytes(header[2..6].try_into().expect("4 bytes")) as usize;
    if HEADER_BITS + 8 * len > px.len() {
        return Err(KeyDistError::StegoLength(len));
    }
    Ok(read_bytes(px, HEADER_BITS, len))
}
