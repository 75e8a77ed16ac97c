//! Ciphertext container, big-endian:
//!
//! ```text
//! "MAE1" | version u8 | flags u8 | width u32 | height u32 | iv [16] | ciphertext
//! ```

use super::{CipherImage, Flags};
use crate::error::ContainerError;

pub const MAGIC: [u8; 4] = *b"MAE1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 4 + 1 + 1 + 4 + 4 + 16;

pub fn write_container(c: &CipherImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + c.ciphertext.len());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(c.flags.bits());
    out.extend_from_slice(&c.width.to_be_bytes());
    out.extend_from_slice(&c.height.to_be_bytes());
    out.extend_from_slice(&c.iv);
    out.extend_from_slice(&c.ciphertext);
    out
}

pub fn read_container(bytes: &[u8]) -> Result<CipherImage, ContainerError> {
    if bytes.len() < HEADER_LEN {
        if bytes.len() >= 4 && bytes[..4] != MAGIC {
            return Err(ContainerError::BadMagic);
        }
        return Err(ContainerError::Truncated {
            need: HEADER_LEN,
            have: bytes.len(),
        });
    }
    if bytes[..4] != MAGIC {
        return Err(ContainerError::BadMagic);
    }
    if bytes[4] != VERSION {
        return Err(ContainerError::BadVersion(bytes[4]));
    }
    let flags = Flags::from_bits(bytes[5])?;
    let width = u32::from_be_bytes(bytes[6..10].try_into().expect("4 bytes"));
    let height = u32::from_be_bytes(bytes[10..14].try_into().expect("4 bytes"));
    let iv: [u8; 16] = bytes[14..30].try_into().expect("16 bytes");
    let c = CipherImage {
        iv,
        width,
        height,
        flags,
        ciphertext: bytes[HEADER_LEN..].to_vec(),
    };
    c.check()?;
    Ok(c)
}
