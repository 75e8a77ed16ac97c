//! Textbook ElGamal over the multiplicative group mod p.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::KeyDistError;

/// RFC 3526 group 14: 2048-bit safe prime, generator 2.
const MODP_2048_HEX: &str = concat!(
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD1",
    "29024E088A67CC74020BBEA63B139B22514A08798E3404DD",
    "EF9519B3CD3A431B302B0A6DF25F14374FE1356D6D51C245",
    "E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED",
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3D",
    "C2007CB8A163BF0598DA48361C55D39A69163FA8FD24CF5F",
    "83655D23DCA3AD961C62F356208552BB9ED529077096966D",
    "670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B",
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9",
    "DE2BCBF6955817183995497CEA956AE515D2261898FA0510",
    "15728E5A8AACAA68FFFFFFFFFFFFFFFF",
);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElGamalParams {
    p: BigUint,
    g: BigUint,
}

impl ElGamalParams {
    pub fn new(p: BigUint, g: BigUint) -> Result<Self, KeyDistError> {
        if p < BigUint::from(5u32) || !is_probable_prime(&p) {
            return Err(KeyDistError::ElGamalParams("modulus is not prime".into()));
        }
        if g <= BigUint::one() || g >= p {
            return Err(KeyDistError::ElGamalParams(
                "generator must satisfy 1 < g < p".into(),
            ));
        }
        Ok(Self { p, g })
    }

    /// 2048-bit MODP group, g = 2.
    pub fn modp_2048() -> Self {
        Self {
            p: BigUint::parse_bytes(MODP_2048_HEX.as_bytes(), 16).expect("valid hex"),
            g: BigUint::from(2u32),
        }
    }

    /// 64-bit prime 2^64 - 59 with g = 2; large enough for any hint of up
    /// to 4 bytes, small enough for fast tests.
    pub fn test_64() -> Self {
        Self {
            p: BigUint::from(18_446_744_073_709_551_557u64),
            g: BigUint::from(2u32),
        }
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn g(&self) -> &BigUint {
        &self.g
    }

    fn p_minus_2(&self) -> BigUint {
        &self.p - 2u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub params: ElGamalParams,
    pub y: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    pub params: ElGamalParams,
    pub x: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElGamalKeyPair {
    pub public: PublicKey,
    pub private: PrivateKey,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub c1: BigUint,
    pub c2: BigUint,
}

/// Key pair from an explicit private exponent in [1, p-2].
pub fn keypair_from_private(
    params: &ElGamalParams,
    x: BigUint,
) -> Result<ElGamalKeyPair, KeyDistError> {
    if x.is_zero() || x > params.p_minus_2() {
        return Err(KeyDistError::ElGamalRange);
    }
    let y = params.g.modpow(&x, &params.p);
    Ok(ElGamalKeyPair {
        public: PublicKey {
            params: params.clone(),
            y,
        },
        private: PrivateKey {
            params: params.clone(),
            x,
        },
    })
}

/// x uniform in [1, p-2], y = g^x mod p.
pub fn elgamal_keygen(params: &ElGamalParams, rng: &mut impl RngCore) -> ElGamalKeyPair {
    let x = rng.gen_biguint_range(&BigUint::one(), &(&params.p - 1u32));
    keypair_from_private(params, x).expect("sampled in range")
}

/// c1 = g^k mod p, c2 = m * y^k mod p.
pub fn elgamal_encrypt(
    m: &BigUint,
    public: &PublicKey,
    k: &BigUint,
) -> Result<Ciphertext, KeyDistError> {
    let params = &public.params;
    if m.is_zero() || m >= &params.p {
        return Err(KeyDistError::MessageTooLarge);
    }
    if k.is_zero() || k > &params.p_minus_2() {
        return Err(KeyDistError::ElGamalRange);
    }
    let c1 = params.g.modpow(k, &params.p);
    let c2 = (m * public.y.modpow(k, &params.p)) % &params.p;
    Ok(Ciphertext { c1, c2 })
}

/// Encrypts with a fresh ephemeral exponent drawn from `rng`.
pub fn elgamal_encrypt_random(
    m: &BigUint,
    public: &PublicKey,
    rng: &mut impl RngCore,
) -> Result<Ciphertext, KeyDistError> {
    let k = rng.gen_biguint_range(&BigUint::one(), &(&public.params.p - 1u32));
    elgamal_encrypt(m, public, &k)
}

/// m = c2 * (c1^x)^-1 mod p, with the inverse taken as c1^(p-1-x).
pub fn elgamal_decrypt(c: &Ciphertext, private: &PrivateKey) -> Result<BigUint, KeyDistError> {
    let p = &private.params.p;
    let in_group = |v: &BigUint| !v.is_zero() && v < p;
    if !in_group(&c.c1) || !in_group(&c.c2) {
        return Err(KeyDistError::ElGamalRange);
    }
    let exp = p - 1u32 - &private.x;
    Ok((&c.c2 * c.c1.modpow(&exp, p)) % p)
}

impl Ciphertext {
    /// `u16 len || c1 (big-endian) || u16 len || c2 (big-endian)`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for v in [&self.c1, &self.c2] {
            let b = v.to_bytes_be();
            out.extend_from_slice(&(b.len() as u16).to_be_bytes());
            out.extend_from_slice(&b);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, KeyDistError> {
        fn take<'a>(buf: &mut &'a [u8]) -> Result<&'a [u8], KeyDistError> {
            if buf.len() < 2 {
                return Err(KeyDistError::CiphertextEncoding);
            }
            let len = u16::from_be_bytes([buf[0], buf[1]]) as usize;
            if buf.len() < 2 + len || len == 0 {
                return Err(KeyDistError::CiphertextEncoding);
            }
            let v = &buf[2..2 + len];
            *buf = &buf[2 + len..];
            Ok(v)
        }
        let mut rest = bytes;
        let c1 = BigUint::from_bytes_be(take(&mut rest)?);
        let c2 = BigUint::from_bytes_be(take(&mut rest)?);
        if !rest.is_empty() {
            return Err(KeyDistError::CiphertextEncoding);
        }
        Ok(Self { c1, c2 })
    }
}

#[derive(Serialize, Deserialize)]
struct KeyFile {
    p: String,
    g: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    y: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    x: Option<String>,
}

fn from_hex(s: &str) -> Result<BigUint, KeyDistError> {
    BigUint::parse_bytes(s.as_bytes(), 16)
        .ok_or_else(|| KeyDistError::ElGamalParams(format!("bad hex integer {s:?}")))
}

fn parse_keyfile(json: &str) -> Result<(ElGamalParams, KeyFile), KeyDistError> {
    let kf: KeyFile = serde_json::from_str(json)
        .map_err(|e| KeyDistError::ElGamalParams(format!("bad key file: {e}")))?;
    let params = ElGamalParams::new(from_hex(&kf.p)?, from_hex(&kf.g)?)?;
    Ok((params, kf))
}

impl PublicKey {
    /// JSON with hex fields `p`, `g`, `y`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&KeyFile {
            p: self.params.p.to_str_radix(16),
            g: self.params.g.to_str_radix(16),
            y: Some(self.y.to_str_radix(16)),
            x: None,
        })
        .expect("serializable")
    }

    pub fn from_json(json: &str) -> Result<Self, KeyDistError> {
        let (params, kf) = parse_keyfile(json)?;
        let y = from_hex(kf.y.as_deref().ok_or_else(|| {
            KeyDistError::ElGamalParams("public key file lacks y".into())
        })?)?;
        if y.is_zero() || y >= params.p {
            return Err(KeyDistError::ElGamalRange);
        }
        Ok(Self { params, y })
    }
}

impl PrivateKey {
    /// JSON with hex fields `p`, `g`, `x`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&KeyFile {
            p: self.params.p.to_str_radix(16),
            g: self.params.g.to_str_radix(16),
            y: None,
            x: Some(self.x.to_str_radix(16)),
        })
        .expect("serializable")
    }

    pub fn from_json(json: &str) -> Result<Self, KeyDistError> {
        let (params, kf) = parse_keyfile(json)?;
        let x = from_hex(kf.x.as_deref().ok_or_else(|| {
            KeyDistError::ElGamalParams("private key file lacks x".into())
        })?)?;
        Ok(keypair_from_private(&params, x)?.private)
    }
}

/// Miller-Rabin with the first twelve prime bases; deterministic below
/// 3.3e24 and a negligible error bound above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for b in BASES {
        let b = BigUint::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for b in BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
