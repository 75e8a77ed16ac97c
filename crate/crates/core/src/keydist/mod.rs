//! Dual-key distribution over a steganographic QR code.
//!
//! Sender: flip one random bit of the static key, choose a hint whose ASCII
//! sum mod 128 names that bit, ElGamal-encrypt the hint for the recipient,
//! wrap the dynamic key with AES-128-ECB under the original static key, put
//! `{flipped key, wrapped key}` in a QR code and hide the ElGamal ciphertext
//! in the QR image's pixel LSBs.
//!
//! Receiver: decode the QR, extract and decrypt the hint, undo the bit flip,
//! unwrap the dynamic key.

pub mod elgamal;
pub mod hint;
pub mod qr;
pub mod stego;

use base64::Engine as _;
use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::block_cipher::{aes128_ecb_classic, CipherKey, Direction};
use crate::error::KeyDistError;
use crate::image::GrayImage;

pub use elgamal::{
    elgamal_decrypt, elgamal_encrypt, elgamal_encrypt_random, elgamal_keygen,
    keypair_from_private, Ciphertext, ElGamalKeyPair, ElGamalParams, PrivateKey, PublicKey,
};
pub use hint::{flip_bit, hint_position, make_hint, HintMessage};
pub use qr::{DefaultQrCodec, EcLevel, QrCodec};
pub use stego::{embed_lsb, extract_lsb};

/// Visible QR content. Serialized as compact JSON `{"sk":..,"dk":..,"meta":..}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QrPayload {
    /// Flipped static key, 32 lowercase hex characters.
    pub sk: String,
    /// AES-ECB wrapped dynamic key (32 bytes), standard base64.
    pub dk: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub meta: Option<String>,
}

impl QrPayload {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, KeyDistError> {
        serde_json::from_str(text).map_err(|e| KeyDistError::Payload(e.to_string()))
    }

    pub fn flipped_static_key(&self) -> Result<CipherKey, KeyDistError> {
        let bytes = hex::decode(&self.sk).map_err(|e| KeyDistError::Payload(e.to_string()))?;
        CipherKey::from_slice(&bytes).map_err(|e| KeyDistError::Payload(e.to_string()))
    }

    pub fn wrapped_dynamic_key(&self) -> Result<Vec<u8>, KeyDistError> {
        let bytes = base64::engine::general_purpose::STANDARD
            .decode(&self.dk)
            .map_err(|e| KeyDistError::Payload(e.to_string()))?;
        if bytes.len() != 32 {
            return Err(KeyDistError::Payload(format!(
                "wrapped key is {} bytes, expected 32",
                bytes.len()
            )));
        }
        Ok(bytes)
    }
}

/// QR image carrying the hidden ElGamal ciphertext in its LSBs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StegoQr(pub GrayImage);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PackageOptions {
    pub ec_level: EcLevel,
    pub module_pixel_size: usize,
    pub quiet_zone_modules: usize,
}

impl Default for PackageOptions {
    fn default() -> Self {
        Self {
            ec_level: EcLevel::H,
            module_pixel_size: 8,
            quiet_zone_modules: 4,
        }
    }
}

/// Everything the sender produces; only `stego` is transmitted.
#[derive(Debug, Clone)]
pub struct KeyPackage {
    pub payload: QrPayload,
    pub hint_ciphertext: Ciphertext,
    pub clean_qr: GrayImage,
    pub stego: StegoQr,
}

pub fn sender_package(
    static_key: &CipherKey,
    dynamic_key: &CipherKey,
    recipient: &PublicKey,
    codec: &dyn QrCodec,
    options: &PackageOptions,
    meta: Option<String>,
    rng: &mut impl Rng,
) -> Result<KeyPackage, KeyDistError> {
    let position = rng.gen_range(0..hint::KEY_BITS);
    let flipped = flip_bit(static_key, position)?;
    let hint = make_hint(position, rng)?;

    let m = BigUint::from_bytes_be(hint.as_str().as_bytes());
    if &m >= recipient.params.p() {
        return Err(KeyDistError::MessageTooLarge);
    }
    let hint_ciphertext = elgamal_encrypt_random(&m, recipient, rng)?;

    let wrapped = aes128_ecb_classic(&dynamic_key.0, static_key, Direction::Encrypt)
        .expect("encryption of 16 bytes cannot fail");
    let payload = QrPayload {
        sk: flipped.to_hex(),
        dk: base64::engine::general_purpose::STANDARD.encode(wrapped),
        meta,
    };

    let clean_qr = codec.encode(
        &payload.to_json(),
        options.ec_level,
        options.module_pixel_size,
        options.quiet_zone_modules,
    )?;
    let stego = StegoQr(embed_lsb(&clean_qr, &hint_ciphertext.to_bytes())?);
    Ok(KeyPackage {
        payload,
        hint_ciphertext,
        clean_qr,
        stego,
    })
}

/// Recovered material on the receiver side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovered {
    pub dynamic_key: CipherKey,
    pub static_key: CipherKey,
    pub hint: HintMessage,
}

pub fn receiver_recover(
    qr: &StegoQr,
    private: &PrivateKey,
    codec: &dyn QrCodec,
) -> Result<Recovered, KeyDistError> {
    let payload = QrPayload::from_json(&codec.decode(&qr.0)?)?;
    let flipped = payload.flipped_static_key()?;
    let wrapped = payload.wrapped_dynamic_key()?;

    let hidden = Ciphertext::from_bytes(&extract_lsb(&qr.0)?)?;
    let m = elgamal_decrypt(&hidden, private)?;
    let text = String::from_utf8(m.to_bytes_be()).map_err(|_| KeyDistError::NonAscii)?;
    let hint = HintMessage::new(text)?;

    let static_key = flip_bit(&flipped, hint.position() as usize)?;
    let dk = aes128_ecb_classic(&wrapped, &static_key, Direction::Decrypt)
        .map_err(KeyDistError::Unwrap)?;
    let dynamic_key = CipherKey::from_slice(&dk).map_err(KeyDistError::Unwrap)?;
    Ok(Recovered {
        dynamic_key,
        static_key,
        hint,
    })
}
