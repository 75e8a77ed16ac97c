//! Whole-image encryption.
//!
//! Encryption order: zero-pad to 16 bytes, chaotic permutation, feedback XOR
//! mask, CBC over the modified block cipher (fresh S-box and shift pattern per
//! block), post-encryption XOR chaining, and optionally a chaotic shuffle of
//! the ciphertext bytes. Decryption undoes the stages in reverse.

pub mod container;

pub use container::{read_container, write_container, HEADER_LEN, MAGIC, VERSION};

use crate::block_cipher::{
    decrypt_block_modified, encrypt_block_modified, expand_key, CipherKey, RoundKeys, BLOCK_LEN,
};
use crate::chaos::{
    keystream_bytes, logistic_sequence, permutation_from_sequence,
    shift_pattern, HenonState, SBox, SBoxChain, ShiftPattern, DEFAULT_HENON_A, DEFAULT_HENON_B,
    DEFAULT_LOGISTIC_R,
};
use crate::error::{ChaosError, ContainerError, PipelineError};
use crate::image::GrayImage;

/// IV of the reference configuration (the published simulation setup).
pub const REFERENCE_IV: [u8; 16] = [
    23, 145, 67, 89, 12, 200, 34, 222, 57, 104, 18, 73, 94, 161, 205, 19,
];

/// Static key of the reference configuration.
pub const REFERENCE_KEY: [u8; 16] = [
    43, 40, 171, 9, 126, 174, 247, 207, 21, 210, 21, 79, 22, 166, 136, 60,
];

/// Seeds and map parameters fixing one encryption session.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaoticParams {
    pub r: f64,
    pub mask_seed: f64,
    pub perm_seed: f64,
    pub shift_seed: f64,
    pub henon_a: f64,
    pub henon_b: f64,
    pub henon_x0: f64,
    pub henon_y0: f64,
    pub shuffle_seed: f64,
}

impl Default for ChaoticParams {
    fn default() -> Self {
        Self {
            r: DEFAULT_LOGISTIC_R,
            mask_seed: 0.5,
            perm_seed: 0.75,
            shift_seed: 0.7,
            henon_a: DEFAULT_HENON_A,
            henon_b: DEFAULT_HENON_B,
            henon_x0: 0.1,
            henon_y0: 0.1,
            shuffle_seed: 0.37,
        }
    }
}

impl ChaoticParams {
    pub fn validate(&self) -> Result<(), ChaosError> {
        if !(self.r > 0.0 && self.r <= 4.0) {
            return Err(ChaosError::InvalidRate(self.r));
        }
        for seed in [
            self.mask_seed,
            self.perm_seed,
            self.shift_seed,
            self.shuffle_seed,
        ] {
            if !(seed > 0.0 && seed < 1.0) {
                return Err(ChaosError::InvalidSeed(seed));
            }
        }
        let (x, y) = (self.henon_x0, self.henon_y0);
        if !(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0) {
            return Err(ChaosError::InvalidHenonSeed { x, y });
        }
        HenonState::with_params(x, y, self.henon_a, self.henon_b)?;
        Ok(())
    }

    fn henon_start(&self) -> HenonState<f64> {
        HenonState {
            x: self.henon_x0,
            y: self.henon_y0,
            a: self.henon_a,
            b: self.henon_b,
        }
    }
}

/// Container flag bits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Flags {
    pub post_shuffle: bool,
}

impl Flags {
    pub const POST_SHUFFLE: u8 = 0b0000_0001;

    pub fn bits(&self) -> u8 {
        if self.post_shuffle {
            Self::POST_SHUFFLE
        } else {
            0
        }
    }

    pub fn from_bits(bits: u8) -> Result<Self, ContainerError> {
        if bits & !Self::POST_SHUFFLE != 0 {
            return Err(ContainerError::UnknownFlags(bits));
        }
        Ok(Self {
            post_shuffle: bits & Self::POST_SHUFFLE != 0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherImage {
    pub iv: [u8; 16],
    pub width: u32,
    pub height: u32,
    pub flags: Flags,
    pub ciphertext: Vec<u8>,
}

impl CipherImage {
    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Checks the ciphertext length against the stored dimensions.
    pub fn check(&self) -> Result<(), ContainerError> {
        let n = self.pixel_count();
        if n == 0 {
            return Err(ContainerError::EmptyImage);
        }
        let expected = padded_len(n);
        if self.ciphertext.len() != expected {
            return Err(ContainerError::LengthMismatch {
                width: self.width,
                height: self.height,
                expected,
                actual: self.ciphertext.len(),
            });
        }
        Ok(())
    }

    /// Ciphertext laid out as a `width x height` image (padding dropped).
    pub fn to_image(&self) -> GrayImage {
        let n = self.pixel_count();
        GrayImage::new(
            self.width as usize,
            self.height as usize,
            self.ciphertext[..n.min(self.ciphertext.len())].to_vec(),
        )
        .expect("ciphertext covers the image")
    }
}

pub fn padded_len(n: usize) -> usize {
    n.div_ceil(BLOCK_LEN) * BLOCK_LEN
}

/// Zero-fills to the next multiple of 16.
pub fn pad_to_block(data: &[u8]) -> Vec<u8> {
    let mut out = data.to_vec();
    out.resize(padded_len(data.len()), 0);
    out
}

/// `M[0] = P[0] ^ K[0]`, `M[i] = P[i] ^ K[i] ^ M[i-1]`.
pub fn mask_with_feedback(data: &[u8], keystream: &[u8]) -> Result<Vec<u8>, PipelineError> {
    if data.len() != keystream.len() {
        return Err(PipelineError::LengthMismatch(data.len(), keystream.len()));
    }
    let mut prev = 0u8;
    Ok(data
        .iter()
        .zip(keystream)
        .map(|(&p, &k)| {
            prev ^= p ^ k;
            prev
        })
        .collect())
}

pub fn unmask_with_feedback(masked: &[u8], keystream: &[u8]) -> Result<Vec<u8>, PipelineError> {
    if masked.len() != keystream.len() {
        return Err(PipelineError::LengthMismatch(masked.len(), keystream.len()));
    }
    let mut prev = 0u8;
    Ok(masked
        .iter()
        .zip(keystream)
        .map(|(&m, &k)| {
            let p = m ^ k ^ prev;
            prev = m;
            p
        })
        .collect())
}

/// `out[i] = data[perm[i]]`.
pub fn permute(data: &[u8], perm: &[usize]) -> Result<Vec<u8>, PipelineError> {
    if data.len() != perm.len() {
        return Err(PipelineError::LengthMismatch(data.len(), perm.len()));
    }
    Ok(perm.iter().map(|&i| data[i]).collect())
}

/// Inverse of [`permute`] for the same `perm`.
pub fn unpermute(data: &[u8], perm: &[usize]) -> Result<Vec<u8>, PipelineError> {
    if data.len() != perm.len() {
        return Err(PipelineError::LengthMismatch(data.len(), perm.len()));
    }
    let mut out = vec![0u8; data.len()];
    for (&src, &b) in perm.iter().zip(data) {
        out[src] = b;
    }
    Ok(out)
}

/// `C'[0] = C[0]`, `C'[i] = C[i] ^ C'[i-1]` over 16-byte blocks.
pub fn post_chain(data: &mut [u8]) {
    for i in 1..data.len() / BLOCK_LEN {
        let (head, tail) = data.split_at_mut(i * BLOCK_LEN);
        let prev = &head[(i - 1) * BLOCK_LEN..];
        for (c, p) in tail[..BLOCK_LEN].iter_mut().zip(prev) {
            *c ^= p;
        }
    }
}

pub fn post_unchain(data: &mut [u8]) {
    for i in (1..data.len() / BLOCK_LEN).rev() {
        let (head, tail) = data.split_at_mut(i * BLOCK_LEN);
        let prev = &head[(i - 1) * BLOCK_LEN..];
        for (c, p) in tail[..BLOCK_LEN].iter_mut().zip(prev) {
            *c ^= p;
        }
    }
}

/// Per-session material derived once from the key and chaotic parameters.
#[derive(Debug, Clone)]
pub struct Session {
    params: ChaoticParams,
    round_keys: RoundKeys,
    first_sbox: SBox,
    after_first: HenonState<f64>,
}

impl Session {
    pub fn new(key: &CipherKey, params: &ChaoticParams) -> Result<Self, PipelineError> {
        params.validate()?;
        let (first_sbox, after_first) = crate::chaos::generate_sbox_from(params.henon_start())?;
        let round_keys = expand_key(key, &first_sbox);
        Ok(Self {
            params: *params,
            round_keys,
            first_sbox,
            after_first,
        })
    }

    pub fn round_keys(&self) -> &RoundKeys {
        &self.round_keys
    }

    /// S-box and shift pattern for each of `blocks` blocks.
    pub fn block_schedule(
        &self,
        blocks: usize,
    ) -> Result<Vec<(SBox, ShiftPattern)>, PipelineError> {
        let mut out = Vec::with_capacity(blocks);
        if blocks == 0 {
            return Ok(out);
        }
        out.push((
            self.first_sbox.clone(),
            shift_pattern(self.params.shift_seed, self.params.r, 0),
        ));
        let mut chain = SBoxChain::new(self.after_first);
        for i in 1..blocks {
            let sbox = chain.next().expect("infinite iterator")?;
            out.push((sbox, shift_pattern(self.params.shift_seed, self.params.r, i)));
        }
        Ok(out)
    }

    fn pixel_permutation(&self, n: usize) -> Result<Vec<usize>, PipelineError> {
        Ok(permutation_from_sequence(&logistic_sequence(
            self.params.perm_seed,
            self.params.r,
            n,
        )?)?)
    }

    fn shuffle_permutation(&self, n: usize) -> Result<Vec<usize>, PipelineError> {
        Ok(permutation_from_sequence(&logistic_sequence(
            self.params.shuffle_seed,
            self.params.r,
            n,
        )?)?)
    }

    pub fn encrypt(
        &self,
        img: &GrayImage,
        iv: [u8; 16],
        flags: Flags,
    ) -> Result<CipherImage, PipelineError> {
        if img.is_empty() {
            return Err(ContainerError::EmptyImage.into());
        }
        let padded = pad_to_block(img.pixels());
        let n = padded.len();
        let permuted = permute(&padded, &self.pixel_permutation(n)?)?;
        let keystream = keystream_bytes(self.params.mask_seed, self.params.r, n)?;
        let mut data = mask_with_feedback(&permuted, &keystream)?;

        let schedule = self.block_schedule(n / BLOCK_LEN)?;
        let mut prev = iv;
        for (chunk, (sbox, pattern)) in data.chunks_exact_mut(BLOCK_LEN).zip(&schedule) {
            let mut block: [u8; 16] = chunk.try_into().expect("exact chunk");
            for (b, p) in block.iter_mut().zip(&prev) {
                *b ^= p;
            }
            prev = encrypt_block_modified(&block, &self.round_keys, sbox, *pattern);
            chunk.copy_from_slice(&prev);
        }

        post_chain(&mut data);
        if flags.post_shuffle {
            data = permute(&data, &self.shuffle_permutation(n)?)?;
        }
        Ok(CipherImage {
            iv,
            width: dim(img.width())?,
            height: dim(img.height())?,
            flags,
            ciphertext: data,
        })
    }

    pub fn decrypt(&self, c: &CipherImage) -> Result<GrayImage, PipelineError> {
        c.check()?;
        let n = c.ciphertext.len();
        let mut data = if c.flags.post_shuffle {
            unpermute(&c.ciphertext, &self.shuffle_permutation(n)?)?
        } else {
            c.ciphertext.clone()
        };
        post_unchain(&mut data);

        let schedule = self.block_schedule(n / BLOCK_LEN)?;
        let mut prev = c.iv;
        for (chunk, (sbox, pattern)) in data.chunks_exact_mut(BLOCK_LEN).zip(&schedule) {
            let block: [u8; 16] = chunk.try_into().expect("exact chunk");
            let mut plain = decrypt_block_modified(&block, &self.round_keys, sbox, *pattern);
            for (b, p) in plain.iter_mut().zip(&prev) {
                *b ^= p;
            }
            prev = block;
            chunk.copy_from_slice(&plain);
        }

        let keystream = keystream_bytes(self.params.mask_seed, self.params.r, n)?;
        let unmasked = unmask_with_feedback(&data, &keystream)?;
        let mut pixels = unpermute(&unmasked, &self.pixel_permutation(n)?)?;
        pixels.truncate(c.pixel_count());
        Ok(GrayImage::new(c.width as usize, c.height as usize, pixels)
            .expect("length checked against dimensions"))
    }
}

fn dim(v: usize) -> Result<u32, PipelineError> {
    u32::try_from(v).map_err(|_| ContainerError::EmptyImage.into())
}

pub fn encrypt_image(
    img: &GrayImage,
    key: &CipherKey,
    iv: [u8; 16],
    params: &ChaoticParams,
    flags: Flags,
) -> Result<CipherImage, PipelineError> {
    Session::new(key, params)?.encrypt(img, iv, flags)
}

pub fn decrypt_image(
    c: &CipherImage,
    key: &CipherKey,
    params: &ChaoticParams,
) -> Result<GrayImage, PipelineError> {
    c.check()?;
    Session::new(key, params)?.decrypt(c)
}
