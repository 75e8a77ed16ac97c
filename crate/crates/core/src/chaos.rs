//! Chaotic generators and the artifacts derived from them.
//!
//! All recurrences evaluate in a fixed order with no fused multiply-add so
//! a given float type reproduces the same orbit on every platform. The
//! pipeline instantiates everything at `f64`.

use num_traits::Float;

use crate::error::ChaosError;

/// Logistic control parameter used throughout the pipeline.
pub const DEFAULT_LOGISTIC_R: f64 = 3.99;
pub const DEFAULT_HENON_A: f64 = 1.4;
pub const DEFAULT_HENON_B: f64 = 0.3;
/// Per-block seed offset: block `i` starts from `(seed + i * 0.0001) mod 1`.
pub const BLOCK_SEED_STEP: f64 = 0.0001;

const SBOX_CHUNK: usize = 512;
const SBOX_STEP_CAP: usize = 1_000_000;
/// Orbits leaving this radius are outside the Hénon basin and diverge.
const HENON_ESCAPE_RADIUS: f64 = 10.0;

#[inline]
fn c<T: Float>(v: f64) -> T {
    T::from(v).expect("constant representable in float type")
}

fn f64_of<T: Float>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn check_rate<T: Float>(r: T) -> Result<(), ChaosError> {
    if r > T::zero() && r <= c(4.0) {
        Ok(())
    } else {
        Err(ChaosError::InvalidRate(f64_of(r)))
    }
}

fn check_seed<T: Float>(x: T) -> Result<(), ChaosError> {
    if x > T::zero() && x < T::one() {
        Ok(())
    } else {
        Err(ChaosError::InvalidSeed(f64_of(x)))
    }
}

/// `r * x * (1 - x)`, evaluated as `(r * x) * (1 - x)`. An iterate landing
/// exactly on 0 or 1 is replaced by 0.5 so the orbit never sticks on a fixed
/// point.
#[inline]
fn logistic_raw<T: Float>(x: T, r: T) -> T {
    let next = r * x * (T::one() - x);
    if next <= T::zero() || next >= T::one() {
        c(0.5)
    } else {
        next
    }
}

/// One step of the logistic map with domain checks.
pub fn logistic_step<T: Float>(x: T, r: T) -> Result<T, ChaosError> {
    check_seed(x)?;
    check_rate(r)?;
    Ok(logistic_raw(x, r))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticState<T> {
    x: T,
    r: T,
}

impl<T: Float> LogisticState<T> {
    pub fn new(x: T, r: T) -> Result<Self, ChaosError> {
        check_seed(x)?;
        check_rate(r)?;
        Ok(Self { x, r })
    }

    pub fn x(&self) -> T {
        self.x
    }

    pub fn r(&self) -> T {
        self.r
    }
}

impl<T: Float> Iterator for LogisticState<T> {
    type Item = T;

    #[inline]
    fn next(&mut self) -> Option<T> {
        self.x = logistic_raw(self.x, self.r);
        Some(self.x)
    }
}

/// `n` iterates following `seed` (the seed itself is not emitted).
pub fn logistic_sequence<T: Float>(seed: T, r: T, n: usize) -> Result<Vec<T>, ChaosError> {
    if n == 0 {
        return Err(ChaosError::EmptySequence);
    }
    Ok(LogisticState::new(seed, r)?.take(n).collect())
}

/// `floor(256 * x_i) mod 256` over the logistic orbit.
pub fn keystream_bytes<T: Float>(seed: T, r: T, n: usize) -> Result<Vec<u8>, ChaosError> {
    let scale: T = c(256.0);
    Ok(logistic_sequence(seed, r, n)?
        .into_iter()
        .map(|x| ((x * scale).floor().to_u64().unwrap_or(0) % 256) as u8)
        .collect())
}

/// Indices that sort `seq` ascending, ties resolved by original index.
pub fn permutation_from_sequence<T: PartialOrd>(seq: &[T]) -> Result<Vec<usize>, ChaosError> {
    if seq.is_empty() {
        return Err(ChaosError::EmptySequence);
    }
    let mut idx: Vec<usize> = (0..seq.len()).collect();
    idx.sort_by(|&a, &b| {
        seq[a]
            .partial_cmp(&seq[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(idx)
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// One-dimensional logistic/tent hybrid:
/// `4x(1-x)` below one half, `mu * (1 - |2x - 1|)` otherwise.
pub fn logistic_tent_step<T: Float>(x: T, mu: T) -> Result<T, ChaosError> {
    let half: T = c(0.5);
    if !(x >= T::zero() && x <= T::one() && mu > T::zero() && mu <= T::one()) {
        return Err(ChaosError::TentDomain {
            x: f64_of(x),
            mu: f64_of(mu),
        });
    }
    Ok(if x < half {
        c::<T>(4.0) * x * (T::one() - x)
    } else {
        mu * (T::one() - (c::<T>(2.0) * x - T::one()).abs())
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HenonState<T> {
    pub x: T,
    pub y: T,
    pub a: T,
    pub b: T,
}

impl<T: Float> HenonState<T> {
    /// State with the classical parameters a = 1.4, b = 0.3.
    pub fn new(x: T, y: T) -> Self {
        Self {
            x,
            y,
            a: c(DEFAULT_HENON_A),
            b: c(DEFAULT_HENON_B),
        }
    }

    pub fn with_params(x: T, y: T, a: T, b: T) -> Result<Self, ChaosError> {
        if !(a >= T::one() && a <= c(1.4) && b > T::zero() && b < T::one()) {
            return Err(ChaosError::InvalidHenonParams {
                a: f64_of(a),
                b: f64_of(b),
            });
        }
        Ok(Self { x, y, a, b })
    }

    /// `x' = 1 - a * (x * x) + y`, `y' = b * x`.
    #[inline]
    pub fn step(self) -> Self {
        Self {
            x: T::one() - self.a * (self.x * self.x) + self.y,
            y: self.b * self.x,
            a: self.a,
            b: self.b,
        }
    }
}

pub fn henon_step<T: Float>(s: HenonState<T>) -> HenonState<T> {
    s.step()
}

/// Bijective byte substitution with its inverse.
#[derive(Clone, PartialEq, Eq)]
pub struct SBox {
    forward: [u8; 256],
    inverse: [u8; 256],
}

impl std::fmt::Debug for SBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SBox")
            .field("forward[..8]", &&self.forward[..8])
            .finish_non_exhaustive()
    }
}

impl SBox {
    /// Returns `None` unless `forward` is a permutation of 0..=255.
    pub fn from_forward(forward: [u8; 256]) -> Option<Self> {
        let mut inverse = [0u8; 256];
        let mut seen = [false; 256];
        for (i, &v) in forward.iter().enumerate() {
            if std::mem::replace(&mut seen[v as usize], true) {
                return None;
            }
            inverse[v as usize] = i as u8;
        }
        Some(Self { forward, inverse })
    }

    pub fn identity() -> Self {
        let mut t = [0u8; 256];
        for (i, v) in t.iter_mut().enumerate() {
            *v = i as u8;
        }
        Self {
            forward: t,
            inverse: t,
        }
    }

    #[inline]
    pub fn forward(&self) -> &[u8; 256] {
        &self.forward
    }

    #[inline]
    pub fn inverse(&self) -> &[u8; 256] {
        &self.inverse
    }

    #[inline]
    pub fn sub(&self, b: u8) -> u8 {
        self.forward[b as usize]
    }

    #[inline]
    pub fn inv_sub(&self, b: u8) -> u8 {
        self.inverse[b as usize]
    }
}

/// S-box from the Hénon orbit starting at `(x0, y0)` with a = 1.4, b = 0.3.
///
/// Seeds must lie in (0, 1]. Also returns the Hénon state after the last
/// iteration so the next block can continue the orbit.
pub fn generate_sbox(x0: f64, y0: f64) -> Result<(SBox, HenonState<f64>), ChaosError> {
    let in_range = |v: f64| v > 0.0 && v <= 1.0;
    if !(in_range(x0) && in_range(y0)) {
        return Err(ChaosError::InvalidHenonSeed { x: x0, y: y0 });
    }
    generate_sbox_from(HenonState::new(x0, y0))
}

/// S-box from an arbitrary starting state.
///
/// The orbit is iterated in chunks of 512 steps. Each iterate contributes
/// `min(floor(256 * (|x| mod 1)), 255)`; the first 256 distinct values, in
/// order of appearance, form the forward table. Iteration stops at the end
/// of the first chunk in which the table is complete.
pub fn generate_sbox_from<T: Float>(
    start: HenonState<T>,
) -> Result<(SBox, HenonState<T>), ChaosError> {
    let scale: T = c(256.0);
    let escape: T = c(HENON_ESCAPE_RADIUS);
    let mut state = start;
    let mut seen = [false; 256];
    let mut table = [0u8; 256];
    let mut filled = 0usize;
    let mut steps = 0usize;

    while filled < 256 {
        if steps >= SBOX_STEP_CAP {
            return Err(ChaosError::DegenerateOrbit {
                steps,
                unique: filled,
            });
        }
        for _ in 0..SBOX_CHUNK {
            state = state.step();
            steps += 1;
            if !state.x.is_finite() || state.x.abs() > escape {
                return Err(ChaosError::DegenerateOrbit {
                    steps,
                    unique: filled,
                });
            }
            if filled == 256 {
                continue;
            }
            let frac = state.x.abs() % T::one();
            let v = (frac * scale).floor().to_usize().unwrap_or(0).min(255);
            if !seen[v] {
                seen[v] = true;
                table[filled] = v as u8;
                filled += 1;
            }
        }
    }
    let sbox = SBox::from_forward(table).expect("distinct values by construction");
    Ok((sbox, state))
}

/// Successive per-block S-boxes along one Hénon orbit.
#[derive(Debug, Clone)]
pub struct SBoxChain {
    state: HenonState<f64>,
}

impl SBoxChain {
    pub fn new(start: HenonState<f64>) -> Self {
        Self { state: start }
    }
}

impl Iterator for SBoxChain {
    type Item = Result<SBox, ChaosError>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(generate_sbox_from(self.state).map(|(sbox, next)| {
            self.state = next;
            sbox
        }))
    }
}

/// Row shift amounts; always a permutation of {0, 1, 2, 3}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShiftPattern {
    shifts: [u8; 4],
}

impl ShiftPattern {
    /// Classical AES ShiftRows.
    pub const CLASSIC: ShiftPattern = ShiftPattern {
        shifts: [0, 1, 2, 3],
    };

    pub fn new(shifts: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &s in &shifts {
            if s > 3 || std::mem::replace(&mut seen[s as usize], true) {
                return None;
            }
        }
        Some(Self { shifts })
    }

    pub fn shifts(&self) -> [u8; 4] {
        self.shifts
    }
}

/// Shift pattern for `block_index`.
///
/// Starts from `x = (seed + block_index * 0.0001) mod 1`, takes four logistic
/// iterates, keeps each `floor(4x) mod 4` not already present, then appends
/// the missing values of {0, 1, 2, 3} in ascending order.
pub fn shift_pattern<T: Float>(seed: T, r: T, block_index: usize) -> ShiftPattern {
    let offset = T::from(block_index).unwrap_or_else(T::zero) * c(BLOCK_SEED_STEP);
    let mut x = (seed + offset) % T::one();
    let mut shifts = [0u8; 4];
    let mut len = 0usize;
    let mut seen = [false; 4];
    for _ in 0..4 {
        x = logistic_raw(x, r);
        let v = ((x * c(4.0)).floor().to_u64().unwrap_or(0) % 4) as usize;
        if !seen[v] {
            seen[v] = true;
            shifts[len] = v as u8;
            len += 1;
        }
    }
    for v in 0..4 {
        if !seen[v] {
            shifts[len] = v as u8;
            len += 1;
        }
    }
    ShiftPattern { shifts }
}
