use rand::Rng;

use crate::error::AnalysisError;
use crate::image::GrayImage;

pub(crate) fn same_dims(a: &GrayImage, b: &GrayImage) -> Result<(), AnalysisError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(AnalysisError::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(())
}

pub fn histogram(img: &GrayImage) -> [u64; 256] {
    let mut h = [0u64; 256];
    for &p in img.pixels() {
        h[p as usize] += 1;
    }
    h
}

/// Shannon entropy of the 256-bin intensity histogram, in bits.
pub fn entropy(img: &GrayImage) -> f64 {
    let n = img.len() as f64;
    if n == 0.0 {
        return 0.0;
    }
    histogram(img)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Horizontal,
    Vertical,
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [
        Direction::Horizontal,
        Direction::Vertical,
        Direction::Diagonal,
    ];

    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (1, 0),
            Direction::Vertical => (0, 1),
            Direction::Diagonal => (1, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
            Direction::Diagonal => "diagonal",
        }
    }
}

/// Correlation coefficient of a pair sample. `degenerate` marks a sample in
/// which either side had zero variance; `r` is reported as 0 in that case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub r: f64,
    pub degenerate: bool,
}

/// Pearson correlation with population moments: Cov(x,y) / (sqrt(D(x)) sqrt(D(y))).
pub fn pearson(xs: &[f64], ys: &[f64]) -> Correlation {
    let n = xs.len().min(ys.len()) as f64;
    if n == 0.0 {
        return Correlation {
            r: 0.0,
            degenerate: true,
        };
    }
    let ex = xs.iter().sum::<f64>() / n;
    let ey = ys.iter().sum::<f64>() / n;
    let (mut dx, mut dy, mut cov) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        dx += (x - ex) * (x - ex);
        dy += (y - ey) * (y - ey);
        cov += (x - ex) * (y - ey);
    }
    let (dx, dy, cov) = (dx / n, dy / n, cov / n);
    if dx == 0.0 || dy == 0.0 {
        return Correlation {
            r: 0.0,
            degenerate: true,
        };
    }
    Correlation {
        r: (cov / (dx.sqrt() * dy.sqrt())).clamp(-1.0, 1.0),
        degenerate: false,
    }
}

/// Adjacent-pixel correlation over `n_pairs` sampled anchors. Anchors are
/// drawn without replacement when the image has enough of them.
pub fn correlation(
    img: &GrayImage,
    direction: Direction,
    n_pairs: usize,
    rng: &mut impl Rng,
) -> Result<Correlation, AnalysisError> {
    let (dx, dy) = direction.offset();
    let (w, h) = (img.width(), img.height());
    if w <= dx || h <= dy || n_pairs == 0 {
        return Err(AnalysisError::TooSmall(w, h));
    }
    let aw = w - dx;
    let anchors = aw * (h - dy);
    let picks: Vec<usize> = if n_pairs <= anchors {
        rand::seq::index::sample(rng, anchors, n_pairs).into_vec()
    } else {
        (0..n_pairs).map(|_| rng.gen_range(0..anchors)).collect()
    };
    let mut xs = Vec::with_capacity(n_pairs);
    let mut ys = Vec::with_capacity(n_pairs);
    for a in picks {
        let (x, y) = (a % aw, a / aw);
        xs.push(img.get(x, y) as f64);
        ys.push(img.get(x + dx, y + dy) as f64);
    }
    Ok(pearson(&xs, &ys))
}

/// Percentage of positions where the two images differ.
pub fn npcr(a: &GrayImage, b: &GrayImage) -> Result<f64, AnalysisError> {
    same_dims(a, b)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let diff = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .filter(|(x, y)| x != y)
        .count();
    Ok(diff as f64 / a.len() as f64 * 100.0)
}

/// Mean absolute intensity difference, normalized by 255, as a percentage.
pub fn uaci(a: &GrayImage, b: &GrayImage) -> Result<f64, AnalysisError> {
    same_dims(a, b)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let sum: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| x.abs_diff(y) as u64)
        .sum();
    Ok(sum as f64 / 255.0 / a.len() as f64 * 100.0)
}

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64, AnalysisError> {
    same_dims(a, b)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let sum: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum();
    Ok(sum as f64 / a.len() as f64)
}

/// PSNR in dB with peak 255; `f64::INFINITY` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64, AnalysisError> {
    Ok(psnr_from_mse(mse(a, b)?))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0f64 * 255.0 / mse).log10()
    }
}
