use rand::Rng;
use serde::{Serialize, Serializer};

use super::experiments::{differential, key_sensitivity};
use super::glcm::glcm;
use super::metrics::{correlation, entropy, mse, psnr_from_mse, Direction};
use crate::block_cipher::CipherKey;
use crate::error::AnalysisError;
use crate::image::GrayImage;
use crate::pipeline::{decrypt_image, encrypt_image, ChaoticParams, Flags};

fn finite_or_inf<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("nan")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTriple {
    pub horizontal: f64,
    pub vertical: f64,
    pub diagonal: f64,
    /// True when any direction had a zero-variance sample.
    pub degenerate: bool,
}

/// Summary of one encryption, computed on the ciphertext image unless noted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub width: usize,
    pub height: usize,
    pub plain_entropy: f64,
    pub entropy: f64,
    pub plain_correlation: CorrelationTriple,
    pub correlation: CorrelationTriple,
    /// Differential attack: pixel (0, 0) bumped by one.
    pub npcr: f64,
    pub uaci: f64,
    /// Plain image vs. its decryption with the correct key.
    pub mse: f64,
    #[serde(serialize_with = "finite_or_inf")]
    pub psnr: f64,
    /// Plain image vs. decryption under a key with bit 0 flipped.
    pub wrong_key_ssim: f64,
    /// 8-level, offset (1, 0).
    pub homogeneity: f64,
    /// 16-level, offset (1, 0).
    pub energy: f64,
}

pub const CORRELATION_PAIRS: usize = 5000;

fn correlations(img: &GrayImage, rng: &mut impl Rng) -> Result<CorrelationTriple, AnalysisError> {
    let mut r = [0.0; 3];
    let mut degenerate = false;
    for (slot, dir) in r.iter_mut().zip(Direction::ALL) {
        let c = correlation(img, dir, CORRELATION_PAIRS, rng)?;
        *slot = c.r;
        degenerate |= c.degenerate;
    }
    Ok(CorrelationTriple {
        horizontal: r[0],
        vertical: r[1],
        diagonal: r[2],
        degenerate,
    })
}

impl MetricReport {
    pub fn compute(
        plain: &GrayImage,
        key: &CipherKey,
        iv: [u8; 16],
        params: &ChaoticParams,
        flags: Flags,
        rng: &mut impl Rng,
    ) -> Result<Self, AnalysisError> {
        let c = encrypt_image(plain, key, iv, params, flags)?;
        let cimg = c.to_image();
        let dec = decrypt_image(&c, key, params)?;
        let diff = differential(plain, key, iv, params, flags)?;
        let m = mse(plain, &dec)?;
        Ok(Self {
            width: plain.width(),
            height: plain.height(),
            plain_entropy: entropy(plain),
            entropy: entropy(&cimg),
            plain_correlation: correlations(plain, rng)?,
            correlation: correlations(&cimg, rng)?,
            npcr: diff.npcr,
            uaci: diff.uaci,
            mse: m,
            psnr: psnr_from_mse(m),
            wrong_key_ssim: key_sensitivity(plain, key, 0, iv, params, flags)?,
            homogeneity: glcm(&cimg, 8, (1, 0))?.homogeneity(),
            energy: glcm(&cimg, 16, (1, 0))?.energy(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let corr = |c: &CorrelationTriple| {
            format!(
                "h {:+.4}  v {:+.4}  d {:+.4}{}",
                c.horizontal,
                c.vertical,
                c.diagonal,
                if c.degenerate { "  (degenerate)" } else { "" }
            )
        };
        let mut s = String::new();
        s += &format!("image            {}x{}\n", self.width, self.height);
        s += &format!("entropy          plain {:.4}  cipher {:.4}\n", self.plain_entropy, self.entropy);
        s += &format!("correlation      plain  {}\n", corr(&self.plain_correlation));
        s += &format!("                 cipher {}\n", corr(&self.correlation));
        s += &format!("NPCR             {:.4} %\n", self.npcr);
        s += &format!("UACI             {:.4} %\n", self.uaci);
        s += &format!("MSE              {:.4}\n", self.mse);
        if self.psnr.is_finite() {
            s += &format!("PSNR             {:.4} dB\n", self.psnr);
        } else {
            s += "PSNR             inf\n";
        }
        s += &format!("wrong-key SSIM   {:.4}\n", self.wrong_key_ssim);
        s += &format!("homogeneity      {:.4}\n", self.homogeneity);
        s += &format!("energy           {:.6}\n", self.energy);
        s
    }
}
