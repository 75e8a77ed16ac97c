//! AES-128 round transform with a pluggable S-box and ShiftRows pattern.
//!
//! With [`aes_sbox`] and [`ShiftPattern::CLASSIC`] the transform is FIPS-197
//! AES-128; [`aes128_ecb_classic`] is exactly that and is used only to wrap
//! the 16-byte session key.

use std::sync::OnceLock;

use crate::chaos::{SBox, ShiftPattern};
use crate::error::CipherError;

pub const BLOCK_LEN: usize = 16;
const ROUNDS: usize = 10;
const RCON: [u8; 10] = [0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36];

/// 128-bit cipher key.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CipherKey(pub [u8; 16]);

impl CipherKey {
    pub fn from_slice(bytes: &[u8]) -> Result<Self, CipherError> {
        <[u8; 16]>::try_from(bytes)
            .map(Self)
            .map_err(|_| CipherError::KeyLength(bytes.len()))
    }

    pub fn as_bytes(&self) -> &[u8; 16] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl std::fmt::Debug for CipherKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CipherKey({})", self.to_hex())
    }
}

impl std::str::FromStr for CipherKey {
    type Err = CipherError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = hex::decode(s.trim()).map_err(|_| CipherError::KeyLength(s.len() / 2))?;
        Self::from_slice(&bytes)
    }
}

/// 4x4 byte state; byte `i` sits at row `i % 4`, column `i / 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct State(pub [u8; 16]);

impl State {
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.0[row + 4 * col]
    }

    #[inline]
    fn set(&mut self, row: usize, col: usize, v: u8) {
        self.0[row + 4 * col] = v;
    }
}

/// Expanded key: 44 words, i.e. 11 round keys of 16 bytes.
#[derive(Clone, PartialEq, Eq)]
pub struct RoundKeys {
    words: [[u8; 4]; 44],
}

impl std::fmt::Debug for RoundKeys {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RoundKeys").finish_non_exhaustive()
    }
}

impl RoundKeys {
    pub fn words(&self) -> &[[u8; 4]; 44] {
        &self.words
    }

    pub fn round_key(&self, round: usize) -> [u8; 16] {
        let mut rk = [0u8; 16];
        for (j, w) in self.words[4 * round..4 * round + 4].iter().enumerate() {
            rk[4 * j..4 * j + 4].copy_from_slice(w);
        }
        rk
    }
}

/// Multiplication in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1.
#[inline]
pub fn gf_mul(mut a: u8, mut b: u8) -> u8 {
    let mut acc = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    acc
}

#[inline]
fn xtime(a: u8) -> u8 {
    (a << 1) ^ if a & 0x80 != 0 { 0x1b } else { 0 }
}

/// The FIPS-197 S-box.
pub fn aes_sbox() -> &'static SBox {
    static SBOX: OnceLock<SBox> = OnceLock::new();
    SBOX.get_or_init(|| SBox::from_forward(build_aes_sbox()).expect("AES S-box is bijective"))
}

fn build_aes_sbox() -> [u8; 256] {
    // walk p over the multiplicative group with generator 3 while q tracks
    // its inverse, then apply the affine map
    let mut table = [0u8; 256];
    let (mut p, mut q) = (1u8, 1u8);
    loop {
        p = p ^ (p << 1) ^ if p & 0x80 != 0 { 0x1b } else { 0 };
        q ^= q << 1;
        q ^= q << 2;
        q ^= q << 4;
        if q & 0x80 != 0 {
            q ^= 0x09;
        }
        let x = q ^ q.rotate_left(1) ^ q.rotate_left(2) ^ q.rotate_left(3) ^ q.rotate_left(4);
        table[p as usize] = x ^ 0x63;
        if p == 1 {
            break;
        }
    }
    table[0] = 0x63;
    table
}

pub fn sub_bytes(state: &State, sbox: &SBox) -> State {
    State(state.0.map(|b| sbox.sub(b)))
}

pub fn inv_sub_bytes(state: &State, sbox: &SBox) -> State {
    State(state.0.map(|b| sbox.inv_sub(b)))
}

/// Row `r` rotates left by `pattern.shifts()[r]`.
pub fn shift_rows_dynamic(state: &State, pattern: ShiftPattern) -> State {
    let mut out = State([0; 16]);
    for (row, &s) in pattern.shifts().iter().enumerate() {
        for col in 0..4 {
            out.set(row, col, state.get(row, (col + s as usize) % 4));
        }
    }
    out
}

pub fn inv_shift_rows_dynamic(state: &State, pattern: ShiftPattern) -> State {
    let mut out = State([0; 16]);
    for (row, &s) in pattern.shifts().iter().enumerate() {
        for col in 0..4 {
            out.set(row, (col + s as usize) % 4, state.get(row, col));
        }
    }
    out
}

fn mix_with(state: &State, m: [u8; 4]) -> State {
    let mut out = State([0; 16]);
    for col in 0..4 {
        let a = [
            state.get(0, col),
            state.get(1, col),
            state.get(2, col),
            state.get(3, col),
        ];
        for row in 0..4 {
            // circulant matrix: row r is m rotated right by r
            let v = (0..4).fold(0u8, |acc, k| acc ^ gf_mul(m[(k + 4 - row) % 4], a[k]));
            out.set(row, col, v);
        }
    }
    out
}

pub fn mix_columns(state: &State) -> State {
    mix_with(state, [0x02, 0x03, 0x01, 0x01])
}

pub fn inv_mix_columns(state: &State) -> State {
    mix_with(state, [0x0e, 0x0b, 0x0d, 0x09])
}

pub fn add_round_key(state: &State, rk: &[u8; 16]) -> State {
    let mut out = *state;
    for (s, k) in out.0.iter_mut().zip(rk) {
        *s ^= k;
    }
    out
}

/// AES-128 key schedule with SubWord routed through `sbox`.
pub fn expand_key(key: &CipherKey, sbox: &SBox) -> RoundKeys {
    let mut words = [[0u8; 4]; 44];
    for (i, w) in words.iter_mut().take(4).enumerate() {
        w.copy_from_slice(&key.0[4 * i..4 * i + 4]);
    }
    for i in 4..44 {
        let mut temp = words[i - 1];
        if i % 4 == 0 {
            temp.rotate_left(1);
            temp = temp.map(|b| sbox.sub(b));
            temp[0] ^= RCON[i / 4 - 1];
        }
        for j in 0..4 {
            words[i][j] = words[i - 4][j] ^ temp[j];
        }
    }
    RoundKeys { words }
}

pub fn encrypt_block_modified(
    block: &[u8; 16],
    rks: &RoundKeys,
    sbox: &SBox,
    pattern: ShiftPattern,
) -> [u8; 16] {
    let mut s = add_round_key(&State(*block), &rks.round_key(0));
    for round in 1..ROUNDS {
        s = sub_bytes(&s, sbox);
        s = shift_rows_dynamic(&s, pattern);
        s = mix_columns(&s);
        s = add_round_key(&s, &rks.round_key(round));
    }
    s = sub_bytes(&s, sbox);
    s = shift_rows_dynamic(&s, pattern);
    add_round_key(&s, &rks.round_key(ROUNDS)).0
}

/// Undoes [`encrypt_block_modified`] step by step in reverse order.
pub fn decrypt_block_modified(
    block: &[u8; 16],
    rks: &RoundKeys,
    sbox: &SBox,
    pattern: ShiftPattern,
) -> [u8; 16] {
    let mut s = add_round_key(&State(*block), &rks.round_key(ROUNDS));
    s = inv_shift_rows_dynamic(&s, pattern);
    s = inv_sub_bytes(&s, sbox);
    for round in (1..ROUNDS).rev() {
        s = add_round_key(&s, &rks.round_key(round));
        s = inv_mix_columns(&s);
        s = inv_shift_rows_dynamic(&s, pattern);
        s = inv_sub_bytes(&s, sbox);
    }
    add_round_key(&s, &rks.round_key(0)).0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Encrypt,
    Decrypt,
}

/// FIPS-197 AES-128 in ECB mode with PKCS#7 padding.
pub fn aes128_ecb_classic(
    data: &[u8],
    key: &CipherKey,
    direction: Direction,
) -> Result<Vec<u8>, CipherError> {
    let sbox = aes_sbox();
    let rks = expand_key(key, sbox);
    let pattern = ShiftPattern::CLASSIC;
    match direction {
        Direction::Encrypt => {
            let pad = BLOCK_LEN - data.len() % BLOCK_LEN;
            let mut buf = data.to_vec();
            buf.resize(data.len() + pad, pad as u8);
            for chunk in buf.chunks_exact_mut(BLOCK_LEN) {
                let block: [u8; 16] = chunk.try_into().expect("exact chunk");
                chunk.copy_from_slice(&encrypt_block_modified(&block, &rks, sbox, pattern));
            }
            Ok(buf)
        }
        Direction::Decrypt => {
            if data.is_empty() || data.len() % BLOCK_LEN != 0 {
                return Err(CipherError::BlockLength(data.len()));
            }
            let mut buf = data.to_vec();
            for chunk in buf.chunks_exact_mut(BLOCK_LEN) {
                let block: [u8; 16] = chunk.try_into().expect("exact chunk");
                chunk.copy_from_slice(&decrypt_block_modified(&block, &rks, sbox, pattern));
            }
            let pad = *buf.last().expect("non-empty") as usize;
            if pad == 0 || pad > BLOCK_LEN || !buf[buf.len() - pad..].iter().all(|&b| b as usize == pad) {
                return Err(CipherError::BadPadding);
            }
            buf.truncate(buf.len() - pad);
            Ok(buf)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::{generate_sbox, shift_pattern};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hex16(s: &str) -> [u8; 16] {
        hex::decode(s).unwrap().try_into().unwrap()
    }

    fn random_sbox(rng: &mut impl Rng) -> SBox {
        use rand::seq::SliceRandom;
        let mut t: Vec<u8> = (0..=255).collect();
        t.shuffle(rng);
        SBox::from_forward(t.try_into().unwrap()).unwrap()
    }

    fn random_pattern(rng: &mut impl Rng) -> ShiftPattern {
        use rand::seq::SliceRandom;
        let mut p = [0u8, 1, 2, 3];
        p.shuffle(rng);
        ShiftPattern::new(p).unwrap()
    }

    #[test]
    fn aes_sbox_spot_values() {
        let s = aes_sbox();
        assert_eq!(s.sub(0x00), 0x63);
        assert_eq!(s.sub(0x01), 0x7c);
        assert_eq!(s.sub(0x53), 0xed);
        assert_eq!(s.sub(0xff), 0x16);
        assert_eq!(s.inv_sub(0x63), 0x00);
    }

    #[test]
    fn aes_sbox_matches_inverse_plus_affine() {
        // brute-force multiplicative inverse, then the FIPS affine transform
        for b in 0..=255u8 {
            let inv = if b == 0 {
                0
            } else {
                (1..=255u8).find(|&c| gf_mul(b, c) == 1).unwrap()
            };
            let mut out = 0u8;
            for i in 0..8 {
                let bit = ((inv >> i)
                    ^ (inv >> ((i + 4) % 8))
                    ^ (inv >> ((i + 5) % 8))
                    ^ (inv >> ((i + 6) % 8))
                    ^ (inv >> ((i + 7) % 8))
                    ^ (0x63 >> i))
                    & 1;
                out |= bit << i;
            }
            assert_eq!(aes_sbox().sub(b), out, "byte {b:#04x}");
        }
    }

    #[test]
    fn sub_bytes_examples() {
        let st = State(hex16("00112233445566778899aabbccddeeff"));
        assert_eq!(sub_bytes(&st, &SBox::identity()), st);
        let (sbox, _) = generate_sbox(0.1, 0.1).unwrap();
        let zero = sub_bytes(&State([0; 16]), &sbox);
        assert!(zero.0.iter().all(|&b| b == sbox.sub(0)));
    }

    #[test]
    fn shift_rows_classic() {
        let st = State(core::array::from_fn(|i| i as u8));
        let out = shift_rows_dynamic(&st, ShiftPattern::CLASSIC);
        // FIPS-197 ShiftRows on column-major 0..15
        assert_eq!(
            out.0,
            [0, 5, 10, 15, 4, 9, 14, 3, 8, 13, 2, 7, 12, 1, 6, 11]
        );
    }

    #[test]
    fn shift_rows_custom_pattern() {
        let st = State(core::array::from_fn(|i| i as u8));
        let out = shift_rows_dynamic(&st, ShiftPattern::new([1, 0, 2, 3]).unwrap());
        // row 0 rotated by one, row 1 untouched
        assert_eq!([out.get(0, 0), out.get(0, 1), out.get(0, 2), out.get(0, 3)], [4, 8, 12, 0]);
        assert_eq!([out.get(1, 0), out.get(1, 1), out.get(1, 2), out.get(1, 3)], [1, 5, 9, 13]);
    }

    #[test]
    fn mix_columns_examples() {
        assert_eq!(mix_columns(&State([0; 16])).0, [0; 16]);
        let mut col = [0u8; 16];
        col[..4].copy_from_slice(&[0xdb, 0x13, 0x53, 0x45]);
        let out = mix_columns(&State(col));
        assert_eq!(&out.0[..4], &[0x8e, 0x4d, 0xa1, 0xbc]);
    }

    #[test]
    fn add_round_key_examples() {
        let st = State(hex16("000102030405060708090a0b0c0d0e0f"));
        assert_eq!(add_round_key(&st, &[0; 16]), st);
        let rk = [0x5au8; 16];
        assert_eq!(add_round_key(&add_round_key(&st, &rk), &rk), st);
        let comp = add_round_key(&st, &[0xff; 16]);
        for (i, b) in comp.0.iter().enumerate() {
            assert_eq!(*b, !(i as u8));
        }
    }

    #[test]
    fn inverses_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let st = State(rng.gen());
            let sbox = random_sbox(&mut rng);
            let pat = random_pattern(&mut rng);
            assert_eq!(inv_sub_bytes(&sub_bytes(&st, &sbox), &sbox), st);
            assert_eq!(inv_shift_rows_dynamic(&shift_rows_dynamic(&st, pat), pat), st);
            assert_eq!(inv_mix_columns(&mix_columns(&st)), st);
        }
    }

    #[test]
    fn key_schedule_zero_key() {
        let rks = expand_key(&CipherKey([0; 16]), aes_sbox());
        assert_eq!(rks.words()[4], [0x62, 0x63, 0x63, 0x63]);
        assert_eq!(rks.round_key(10), hex16("b4ef5bcb3e92e21123e951cf6f8f188e"));
    }

    #[test]
    fn key_schedule_fips_key() {
        let key = CipherKey(hex16("2b7e151628aed2a6abf7158809cf4f3c"));
        let rks = expand_key(&key, aes_sbox());
        assert_eq!(rks.words()[4], [0xa0, 0xfa, 0xfe, 0x17]);
        assert_eq!(rks.words()[43], [0xb6, 0x63, 0x0c, 0xa6]);
    }

    #[test]
    fn key_schedule_identity_sbox() {
        let key = CipherKey(hex16("000102030405060708090a0b0c0d0e0f"));
        let rks = expand_key(&key, &SBox::identity());
        // w4 = w0 ^ (RotWord(w3) ^ rcon)
        let w3 = [0x0c, 0x0d, 0x0e, 0x0f];
        let expect = [0x00 ^ w3[1] ^ 0x01, 0x01 ^ w3[2], 0x02 ^ w3[3], 0x03 ^ w3[0]];
        assert_eq!(rks.words()[4], expect);
    }

    #[test]
    fn fips_appendix_vectors() {
        let cases = [
            (
                "2b7e151628aed2a6abf7158809cf4f3c",
                "3243f6a8885a308d313198a2e0370734",
                "3925841d02dc09fbdc118597196a0b32",
            ),
            (
                "000102030405060708090a0b0c0d0e0f",
                "00112233445566778899aabbccddeeff",
                "69c4e0d86a7b0430d8cdb78070b4c55a",
            ),
        ];
        for (k, p, c) in cases {
            let rks = expand_key(&CipherKey(hex16(k)), aes_sbox());
            let ct = encrypt_block_modified(&hex16(p), &rks, aes_sbox(), ShiftPattern::CLASSIC);
            assert_eq!(ct, hex16(c));
            let pt = decrypt_block_modified(&ct, &rks, aes_sbox(), ShiftPattern::CLASSIC);
            assert_eq!(pt, hex16(p));
        }
    }

    #[test]
    fn block_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let key = CipherKey(rng.gen());
            let sbox = random_sbox(&mut rng);
            let pat = random_pattern(&mut rng);
            let rks = expand_key(&key, &sbox);
            let block: [u8; 16] = rng.gen();
            let ct = encrypt_block_modified(&block, &rks, &sbox, pat);
            assert_eq!(decrypt_block_modified(&ct, &rks, &sbox, pat), block);
        }
    }

    #[test]
    fn block_diffusion() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (sbox, _) = generate_sbox(0.1, 0.1).unwrap();
        let mut total = 0u32;
        for t in 0..1000 {
            let rks = expand_key(&CipherKey(rng.gen()), &sbox);
            let pat = shift_pattern(0.7, 3.99, t);
            let block: [u8; 16] = rng.gen();
            let mut flipped = block;
            let bit = rng.gen_range(0..128);
            flipped[bit / 8] ^= 0x80 >> (bit % 8);
            let a = encrypt_block_modified(&block, &rks, &sbox, pat);
            let b = encrypt_block_modified(&flipped, &rks, &sbox, pat);
            total += a.iter().zip(&b).map(|(x, y)| (x ^ y).count_ones()).sum::<u32>();
        }
        assert!(total as f64 / 1000.0 >= 40.0);
    }

    #[test]
    fn wrong_key_does_not_decrypt() {
        let (sbox, _) = generate_sbox(0.1, 0.1).unwrap();
        let key = CipherKey(hex16("2b7e151628aed2a6abf7158809cf4f3c"));
        let mut other = key;
        other.0[15] ^= 1;
        let block = [7u8; 16];
        let pat = ShiftPattern::CLASSIC;
        let ct = encrypt_block_modified(&block, &expand_key(&key, &sbox), &sbox, pat);
        assert_ne!(decrypt_block_modified(&ct, &expand_key(&other, &sbox), &sbox, pat), block);
    }

    #[test]
    fn ecb_wrap_roundtrip_and_padding() {
        let key = CipherKey(hex16("2b7e151628aed2a6abf7158809cf4f3c"));
        let dk = hex16("00112233445566778899aabbccddeeff");
        let wrapped = aes128_ecb_classic(&dk, &key, Direction::Encrypt).unwrap();
        assert_eq!(wrapped.len(), 32);
        assert_eq!(aes128_ecb_classic(&wrapped, &key, Direction::Decrypt).unwrap(), dk);
    }

    #[test]
    fn ecb_rejects_bad_lengths() {
        let key = CipherKey([1; 16]);
        assert_eq!(
            aes128_ecb_classic(&[], &key, Direction::Decrypt),
            Err(CipherError::BlockLength(0))
        );
        assert_eq!(
            aes128_ecb_classic(&[0; 17], &key, Direction::Decrypt),
            Err(CipherError::BlockLength(17))
        );
    }

    #[test]
    fn ecb_wrong_key_never_silently_succeeds() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let key = CipherKey(rng.gen());
            let dk: [u8; 16] = rng.gen();
            let wrapped = aes128_ecb_classic(&dk, &key, Direction::Encrypt).unwrap();
            let mut wrong = key;
            wrong.0[rng.gen_range(0..16)] ^= 1 << rng.gen_range(0..8);
            match aes128_ecb_classic(&wrapped, &wrong, Direction::Decrypt) {
                Err(CipherError::BadPadding) => {}
                Ok(out) => assert_ne!(out, dk),
                Err(e) => panic!("unexpected {e}"),
            }
        }
    }

    #[test]
    fn key_parse() {
        let k: CipherKey = "2b7e151628aed2a6abf7158809cf4f3c".parse().unwrap();
        assert_eq!(k.0[0], 43);
        assert!("2b7e".parse::<CipherKey>().is_err());
        assert!("zz".parse::<CipherKey>().is_err());
    }
}
