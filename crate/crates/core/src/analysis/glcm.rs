//! Gray-level co-occurrence matrix and its homogeneity / energy statistics.

use crate::error::AnalysisError;
use crate::image::GrayImage;

#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    levels: usize,
    offset: (isize, isize),
    /// Row-major `levels x levels` probabilities.
    matrix: Vec<f64>,
}

impl Glcm {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn offset(&self) -> (isize, isize) {
        self.offset
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.matrix[a * self.levels + b]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// Sum of P(A, B) / (1 + |A - B|).
    pub fn homogeneity(&self) -> f64 {
        let l = self.levels;
        self.matrix
            .iter()
            .enumerate()
            .map(|(i, &p)| p / (1.0 + (i / l).abs_diff(i % l) as f64))
            .sum()
    }

    /// Sum of P(A, B)^2.
    pub fn energy(&self) -> f64 {
        self.matrix.iter().map(|p| p * p).sum()
    }
}

/// Quantizes `p` to `floor(p * levels / 256)` and counts pairs
/// `(x, y) -> (x + dx, y + dy)` inside the image.
pub fn glcm(img: &GrayImage, levels: usize, offset: (isize, isize)) -> Result<Glcm, AnalysisError> {
    if !(2..=256).contains(&levels) {
        return Err(AnalysisError::OutOfRange(format!(
            "GLCM levels must be in 2..=256, got {levels}"
        )));
    }
    let (w, h) = (img.width() as isize, img.height() as isize);
    let (dx, dy) = offset;
    let q = |p: u8| p as usize * levels / 256;
    let mut counts = vec![0u64; levels * levels];
    let mut total = 0u64;
    for y in 0..h {
        let y2 = y + dy;
        if y2 < 0 || y2 >= h {
            continue;
        }
        for x in 0..w {
            let x2 = x + dx;
            if x2 < 0 || x2 >= w {
                continue;
            }
            let a = q(img.get(x as usize, y as usize));
            let b = q(img.get(x2 as usize, y2 as usize));
            counts[a * levels + b] += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(AnalysisError::TooSmall(img.width(), img.height()));
    }
    Ok(Glcm {
        levels,
        offset,
        matrix: counts.iter().map(|&c| c as f64 / total as f64).collect(),
    })
}

pub fn homogeneity(g: &Glcm) -> f64 {
    g.homogeneity()
}

pub fn energy(g: &Glcm) -> f64 {
    g.energy()
}

/// Expected homogeneity when both quantized levels are independent and
/// uniform: sum over |A - B| = d of count(d) / (1 + d), divided by L^2.
pub fn uniform_homogeneity(levels: usize) -> f64 {
    let l = levels as f64;
    let mut s = l; // d = 0
    for d in 1..levels {
        s += 2.0 * (levels - d) as f64 / (1.0 + d as f64);
    }
    s / (l * l)
}
