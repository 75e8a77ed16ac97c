//! Cross-checks against independent implementations and frozen golden vectors.

use aes::cipher::{generic_array::GenericArray, BlockEncrypt, KeyInit};
use chaos_aes::block_cipher::{
    aes_sbox, decrypt_block_modified, encrypt_block_modified, expand_key, gf_mul,
};
use chaos_aes::chaos::{generate_sbox, shift_pattern};
use chaos_aes::pipeline::REFERENCE_KEY;
use chaos_aes::{CipherKey, ShiftPattern};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Produced by a standalone Python script iterating the Hénon map in 512-step
// chunks from (0.1, 0.1) with a = 1.4, b = 0.3.
const GOLDEN_SBOX_01_01: &str = "169fc90c3b23735fab7bdf12412e952bc8302fe9ad6af63fc12abc31d956a2a4\
9b89cc4424be925206601bd55c90a98fc20b6d0fb3a11df7b45083f36b0aa3bd\
38119aef1846e7865775e80445e0766f97ac8c4f19d11e3972aa7edc3d77948d\
c5541363b94b0e7802da34d6293603b08074ffe64a26f11ab121ec28af6242e5\
a87cfded5bcd8117dd4333518782cbbb9679008be22c011085f064b59e407d25\
aeea09475322d8618a3a715a936e1ca6b748bfa505377ae3fc4d15eb27a7203c\
b84e141fdea088ba595dcfd4e4079df5db9c91f83235653e08fefbee68c0c37f\
f20de16c67995ef9c67084b2988eb6d758c75549fa66d269ce4c2dc4d0caf4d3";

fn carryless_then_reduce(a: u8, b: u8) -> u8 {
    let mut prod: u16 = 0;
    for i in 0..8 {
        if b >> i & 1 == 1 {
            prod ^= (a as u16) << i;
        }
    }
    for bit in (8..15).rev() {
        if prod >> bit & 1 == 1 {
            prod ^= 0x11b << (bit - 8);
        }
    }
    prod as u8
}

/// Textbook schedule with an explicit Rcon table and a pluggable S-box.
fn schedule_oracle(key: &[u8; 16], sbox: &[u8; 256]) -> Vec<[u8; 4]> {
    const RCON: [u8; 10] = [0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36];
    let mut w: Vec<[u8; 4]> = key.chunks(4).map(|c| [c[0], c[1], c[2], c[3]]).collect();
    for i in 4..44 {
        let mut t = w[i - 1];
        if i % 4 == 0 {
            t = [sbox[t[1] as usize], sbox[t[2] as usize], sbox[t[3] as usize], sbox[t[0] as usize]];
            t[0] ^= RCON[i / 4 - 1];
        }
        let prev = w[i - 4];
        w.push([prev[0] ^ t[0], prev[1] ^ t[1], prev[2] ^ t[2], prev[3] ^ t[3]]);
    }
    w
}

#[test]
fn gf_mul_all_pairs() {
    for a in 0..=255u8 {
        for b in 0..=255u8 {
            assert_eq!(gf_mul(a, b), carryless_then_reduce(a, b), "{a:02x}*{b:02x}");
        }
    }
}

#[test]
fn standard_configuration_matches_aes_crate() {
    let sbox = aes_sbox().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0xae5);
    let mut cases: Vec<([u8; 16], [u8; 16])> = vec![(
        hex::decode("000102030405060708090a0b0c0d0e0f").unwrap().try_into().unwrap(),
        hex::decode("00112233445566778899aabbccddeeff").unwrap().try_into().unwrap(),
    )];
    cases.extend((0..150).map(|_| (rng.gen(), rng.gen())));
    for (key, block) in cases {
        let rks = expand_key(&CipherKey(key), &sbox);
        let ours = encrypt_block_modified(&block, &rks, &sbox, ShiftPattern::CLASSIC);
        let mut theirs = GenericArray::clone_from_slice(&block);
        aes::Aes128::new(&GenericArray::from(key)).encrypt_block(&mut theirs);
        assert_eq!(ours.as_slice(), theirs.as_slice());
        assert_eq!(decrypt_block_modified(&ours, &rks, &sbox, ShiftPattern::CLASSIC), block);
    }
}

#[test]
fn fips_vector() {
    let sbox = aes_sbox().clone();
    let key: [u8; 16] = hex::decode("000102030405060708090a0b0c0d0e0f").unwrap().try_into().unwrap();
    let pt: [u8; 16] = hex::decode("00112233445566778899aabbccddeeff").unwrap().try_into().unwrap();
    let ct = encrypt_block_modified(&pt, &expand_key(&CipherKey(key), &sbox), &sbox, ShiftPattern::CLASSIC);
    assert_eq!(hex::encode(ct), "69c4e0d86a7b0430d8cdb78070b4c55a");
}

#[test]
fn key_schedule_random_keys() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let standard = aes_sbox().clone();
    let (chaotic, _) = generate_sbox(0.1, 0.1).unwrap();
    for _ in 0..20 {
        let key: [u8; 16] = rng.gen();
        for sbox in [&standard, &chaotic] {
            let rks = expand_key(&CipherKey(key), sbox);
            assert_eq!(rks.words().to_vec(), schedule_oracle(&key, sbox.forward()));
        }
    }
}

#[test]
fn golden_sbox() {
    let (sbox, state) = generate_sbox(0.1, 0.1).unwrap();
    assert_eq!(hex::encode(sbox.forward()), GOLDEN_SBOX_01_01);
    assert_eq!(sbox.forward()[0], 0x16);
    // 3072 steps (six chunks); final state bit patterns from the same script
    assert_eq!(state.x.to_bits(), 0x3fdc_d38a_3f38_2d3d);
    assert_eq!(state.y.to_bits(), 0x3fca_491f_344a_bcad);
}

#[test]
fn golden_shift_patterns() {
    for i in 0..4 {
        assert_eq!(shift_pattern(0.7f64, 3.99, i).shifts(), [3, 2, 0, 1]);
    }
}

#[test]
fn golden_reference_key_schedule() {
    let (sbox, _) = generate_sbox(0.1, 0.1).unwrap();
    let rks = expand_key(&CipherKey(REFERENCE_KEY), &sbox);
    assert_eq!(hex::encode(rks.words()[4]), "f2f5c0ff");
    assert_eq!(hex::encode(rks.words()[43]), "3f926a5e");
    assert_eq!(hex::encode(rks.round_key(10)), "6a2df845397675c40658b8bd3f926a5e");
}
