//! 8-bit grayscale images and PGM/PNG I/O.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::ImageError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        let expected = width * height;
        if pixels.len() != expected {
            return Err(ImageError::BufferSize {
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.pixels[y * self.width + x] = v;
    }

    /// Binary P5 PGM with maxval 255.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> Result<(), ImageError> {
        write!(w, "P5\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.pixels)?;
        Ok(())
    }

    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() + 20);
        self.write_pgm(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    /// Reads a binary (P5) PGM. Only maxval 255 is accepted.
    pub fn read_pgm<R: BufRead>(mut r: R) -> Result<Self, ImageError> {
        // magic, width, height, maxval: four whitespace separated tokens, '#'
        // comments allowed between them.
        let mut tokens: Vec<String> = Vec::with_capacity(4);
        let mut buf = [0u8; 1];
        let mut current = String::new();
        let mut in_comment = false;
        while tokens.len() < 4 {
            if r.read(&mut buf)? == 0 {
                return Err(ImageError::Unsupported("truncated PGM header".into()));
            }
            let c = buf[0] as char;
            if in_comment {
                if c == '\n' {
                    in_comment = false;
                }
                continue;
            }
            if c == '#' {
                in_comment = true;
                continue;
            }
            if c.is_ascii_whitespace() {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            } else {
                current.push(c);
            }
        }
        if tokens[0] != "P5" {
            return Err(ImageError::Unsupported(format!(
                "expected P5 PGM, found {}",
                tokens[0]
            )));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| ImageError::Unsupported(format!("bad PGM header field {s:?}")))
        };
        let (width, height, maxval) = (parse(&tokens[1])?, parse(&tokens[2])?, parse(&tokens[3])?);
        if maxval != 255 {
            return Err(ImageError::Unsupported(format!("PGM maxval {maxval}")));
        }
        let mut pixels = vec![0u8; width * height];
        r.read_exact(&mut pixels)?;
        Self::new(width, height, pixels)
    }

    /// Loads PGM natively; anything else goes through the `image` crate and
    /// is reduced to luma with integer rounding of 0.299R + 0.587G + 0.114B.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ImageError> {
        let path = path.as_ref();
        let bytes = std::fs::read(path)?;
        if bytes.starts_with(b"P5") {
            return Self::read_pgm(std::io::Cursor::new(bytes));
        }
        let dynamic = ::image::load_from_memory(&bytes)?;
        Ok(Self::from_dynamic(&dynamic))
    }

    pub fn from_dynamic(img: &::image::DynamicImage) -> Self {
        use ::image::DynamicImage;
        match img {
            DynamicImage::ImageLuma8(g) => Self {
                width: g.width() as usize,
                height: g.height() as usize,
                pixels: g.as_raw().clone(),
            },
            other => {
                let rgb = other.to_rgb8();
                let pixels = rgb
                    .pixels()
                    .map(|p| luma_from_rgb(p.0[0], p.0[1], p.0[2]))
                    .collect();
                Self {
                    width: rgb.width() as usize,
                    height: rgb.height() as usize,
                    pixels,
                }
            }
        }
    }

    /// Writes PNG for `.png` paths, PGM otherwise.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ImageError> {
        let path = path.as_ref();
        let is_png = path
            .extension()
            .map(|e| e.eq_ignore_ascii_case("png"))
            .unwrap_or(false);
        if is_png {
            let buf = ::image::GrayImage::from_raw(
                self.width as u32,
                self.height as u32,
                self.pixels.clone(),
            )
            .expect("buffer length checked at construction");
            buf.save(path)?;
        } else {
            let f = std::fs::File::create(path)?;
            self.write_pgm(std::io::BufWriter::new(f))?;
        }
        Ok(())
    }
}

/// round(0.299 R + 0.587 G + 0.114 B) in integer arithmetic.
pub fn luma_from_rgb(r: u8, g: u8, b: u8) -> u8 {
    let v = 299 * r as u32 + 587 * g as u32 + 114 * b as u32;
    ((v + 500) / 1000) as u8
}
