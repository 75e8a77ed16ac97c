//! Static-key bit flip and the mod-128 hint message that encodes its position.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::block_cipher::CipherKey;
use crate::error::KeyDistError;

pub const KEY_BITS: usize = 128;
const ALPHABET: std::ops::RangeInclusive<u8> = b'A'..=b'Z';

/// Short uppercase text whose character-code sum mod 128 is a bit position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HintMessage(String);

impl HintMessage {
    pub fn new(text: impl Into<String>) -> Result<Self, KeyDistError> {
        let text = text.into();
        hint_position(&text)?;
        Ok(Self(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn position(&self) -> u8 {
        hint_position(&self.0).expect("validated at construction")
    }
}

impl std::fmt::Display for HintMessage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Toggles bit `position`; bit 0 is the most significant bit of byte 0.
pub fn flip_bit(key: &CipherKey, position: usize) -> Result<CipherKey, KeyDistError> {
    if position >= KEY_BITS {
        return Err(KeyDistError::BitPosition(position));
    }
    let mut out = *key;
    out.0[position / 8] ^= 0x80 >> (position % 8);
    Ok(out)
}

/// Sum of character codes mod 128.
pub fn hint_position(msg: &str) -> Result<u8, KeyDistError> {
    if msg.is_empty() {
        return Err(KeyDistError::EmptyHint);
    }
    if !msg.is_ascii() {
        return Err(KeyDistError::NonAscii);
    }
    Ok((msg.bytes().map(u32::from).sum::<u32>() % 128) as u8)
}

/// Random 2-4 letter uppercase hint for `position`.
///
/// Tries random prefixes first and solves for the final letter; falls back to
/// an exhaustive scan in shuffled length order so every residue is reachable.
pub fn make_hint(position: usize, rng: &mut impl Rng) -> Result<HintMessage, KeyDistError> {
    if position >= KEY_BITS {
        return Err(KeyDistError::BitPosition(position));
    }
    let target = position as u32;
    let mut lengths = [2usize, 3, 4];
    lengths.shuffle(rng);

    for _ in 0..64 {
        for &len in &lengths {
            let prefix: Vec<u8> = (0..len - 1).map(|_| rng.gen_range(ALPHABET)).collect();
            if let Some(last) = closing_letter(&prefix, target) {
                let mut text = prefix;
                text.push(last);
                return Ok(HintMessage(String::from_utf8(text).expect("ASCII")));
            }
        }
    }

    for &len in &lengths {
        if let Some(text) = exhaustive(len, target) {
            return Ok(HintMessage(text));
        }
    }
    unreachable!("lengths 2..=4 cover every residue mod 128")
}

fn closing_letter(prefix: &[u8], target: u32) -> Option<u8> {
    let sum: u32 = prefix.iter().map(|&b| b as u32).sum();
    let need = ((target + 128 * 4) - sum % 128) % 128;
    // the last letter may add 128 wrap-arounds; only codes 65..=90 qualify
    let candidate = need as u8;
    ALPHABET.contains(&candidate).then_some(candidate)
}

fn exhaustive(len: usize, target: u32) -> Option<String> {
    let mut idx = vec![0u8; len - 1];
    loop {
        let prefix: Vec<u8> = idx.iter().map(|&i| b'A' + i).collect();
        if let Some(last) = closing_letter(&prefix, target) {
            let mut text = prefix;
            text.push(last);
            return Some(String::from_utf8(text).expect("ASCII"));
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == idx.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < 26 {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn table_rows() {
        for (msg, pos) in [
            ("HI", 17),
            ("HEY", 102),
            ("GO", 22),
            ("SHE", 96),
            ("CAT", 88),
            ("HELLO", 116),
            ("GOOD", 41),
        ] {
            assert_eq!(hint_position(msg).unwrap(), pos, "{msg}");
        }
    }

    #[test]
    fn hint_position_errors() {
        assert!(matches!(hint_position(""), Err(KeyDistError::EmptyHint)));
        assert!(matches!(hint_position("HÉ"), Err(KeyDistError::NonAscii)));
    }

    #[test]
    fn flip_examples() {
        let zero = CipherKey([0; 16]);
        assert_eq!(flip_bit(&zero, 0).unwrap().0[0], 0x80);
        assert_eq!(flip_bit(&zero, 127).unwrap().0[15], 0x01);
        let k = CipherKey(core::array::from_fn(|i| i as u8 * 17));
        assert_eq!(flip_bit(&flip_bit(&k, 45).unwrap(), 45).unwrap(), k);
        assert!(flip_bit(&k, 128).is_err());
    }

    #[test]
    fn recover_with_table_hint() {
        let k = CipherKey(core::array::from_fn(|i| (i as u8).wrapping_mul(29)));
        let flipped = flip_bit(&k, 17).unwrap();
        let pos = hint_position("HI").unwrap() as usize;
        assert_eq!(flip_bit(&flipped, pos).unwrap(), k);
    }

    #[test]
    fn every_position_has_a_hint() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in 0..128 {
            let h = make_hint(p, &mut rng).unwrap();
            assert!((2..=4).contains(&h.as_str().len()));
            assert!(h.as_str().bytes().all(|b| b.is_ascii_uppercase()));
            assert_eq!(h.position() as usize, p);
        }
        assert!(make_hint(128, &mut rng).is_err());
    }

    #[test]
    fn exhaustive_coverage_by_length() {
        // 2 letters: {2..52}; 3 letters: {0..14} u {67..127}; 4 letters: {4..104}
        let reach = |len: usize| -> Vec<bool> {
            (0..128).map(|t| exhaustive(len, t).is_some()).collect()
        };
        let (r2, r3, r4) = (reach(2), reach(3), reach(4));
        for t in 0..128usize {
            assert_eq!(r2[t], (2..=52).contains(&t), "len 2, {t}");
            assert_eq!(r3[t], t <= 14 || t >= 67, "len 3, {t}");
            assert_eq!(r4[t], (4..=104).contains(&t), "len 4, {t}");
            assert!(r2[t] || r3[t] || r4[t]);
        }
    }
}
