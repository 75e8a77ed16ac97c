//! QR codec boundary.
//!
//! The protocol only needs `encode(text) -> image` and `decode(image) -> text`;
//! [`DefaultQrCodec`] wires those to the `qrcode` and `rqrr` crates.

use crate::error::KeyDistError;
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EcLevel {
    L,
    M,
    Q,
    #[default]
    H,
}

impl std::str::FromStr for EcLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "L" => Ok(Self::L),
            "M" => Ok(Self::M),
            "Q" => Ok(Self::Q),
            "H" => Ok(Self::H),
            other => Err(format!("unknown error-correction level {other:?}")),
        }
    }
}

pub trait QrCodec {
    /// Renders `text` as a grayscale image with pixel values in {0, 255}.
    fn encode(
        &self,
        text: &str,
        ec_level: EcLevel,
        module_pixel_size: usize,
        quiet_zone_modules: usize,
    ) -> Result<GrayImage, KeyDistError>;

    fn decode(&self, img: &GrayImage) -> Result<String, KeyDistError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DefaultQrCodec;

impl QrCodec for DefaultQrCodec {
    fn encode(
        &self,
        text: &str,
        ec_level: EcLevel,
        module_pixel_size: usize,
        quiet_zone_modules: usize,
    ) -> Result<GrayImage, KeyDistError> {
        let level = match ec_level {
            EcLevel::L => qrcode::EcLevel::L,
            EcLevel::M => qrcode::EcLevel::M,
            EcLevel::Q => qrcode::EcLevel::Q,
            EcLevel::H => qrcode::EcLevel::H,
        };
        let code = qrcode::QrCode::with_error_correction_level(text.as_bytes(), level)
            .map_err(|e| KeyDistError::QrEncode(e.to_string()))?;
        let modules = code.width();
        let colors = code.to_colors();
        let scale = module_pixel_size.max(1);
        let side = (modules + 2 * quiet_zone_modules) * scale;
        Ok(GrayImage::from_fn(side, side, |x, y| {
            let (mx, my) = (x / scale, y / scale);
            let inside = |m: usize| m >= quiet_zone_modules && m < quiet_zone_modules + modules;
            if inside(mx) && inside(my) {
                let idx = (my - quiet_zone_modules) * modules + (mx - quiet_zone_modules);
                if colors[idx] == qrcode::Color::Dark {
                    0
                } else {
                    255
                }
            } else {
                255
            }
        }))
    }

    fn decode(&self, img: &GrayImage) -> Result<String, KeyDistError> {
        let mut prepared =
            rqrr::PreparedImage::prepare_from_greyscale(img.width(), img.height(), |x, y| {
                img.get(x, y)
            });
        let grids = prepared.detect_grids();
        let mut last_err = String::from("no QR code found");
        for grid in grids {
            match grid.decode() {
                Ok((_, text)) => return Ok(text),
                Err(e) => last_err = e.to_string(),
            }
        }
        Err(KeyDistError::QrDecode(last_err))
    }
}

/// Binarizes at 128: values >= 128 become 255, the rest 0.
pub fn threshold(img: &GrayImage) -> GrayImage {
    let px = img
        .pixels()
        .iter()
        .map(|&p| if p >= 128 { 255 } else { 0 })
        .collect();
    GrayImage::new(img.width(), img.height(), px).expect("same dimensions")
}
