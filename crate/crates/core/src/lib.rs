//! Chaos-enhanced AES-128 image encryption.
//!
//! The crate is split along the data flow:
//!
//! * [`chaos`]: logistic, Hénon and logistic-tent generators and the artifacts
//!   derived from them (keystreams, permutations, shift patterns, S-boxes).
//! * [`block_cipher`]: the AES-128 round transform with pluggable S-box and
//!   ShiftRows pattern, plus classical AES-128 ECB used for key wrapping.
//! * [`pipeline`]: whole-image encryption (permute, feedback mask, CBC with
//!   per-block S-boxes, post-chaining, optional post-shuffle) and the
//!   ciphertext container format.
//! * [`keydist`]: ElGamal, bit-flip hints, LSB steganography and the QR
//!   dual-key package protocol.
//! * [`analysis`]: statistical metrics and attack simulations.
//!
//! The chaotic maps are generic over the float type; the encryption pipeline
//! is pinned to `f64` so keystreams are bit-reproducible across platforms.

pub mod analysis;
pub mod block_cipher;
pub mod chaos;
pub mod corpus;
pub mod error;
pub mod image;
pub mod keydist;
pub mod pipeline;

pub use block_cipher::{CipherKey, RoundKeys, State};
pub use chaos::{HenonState, LogisticState, SBox, ShiftPattern};
pub use error::{
    AnalysisError, ChaosError, CipherError, ContainerError, ImageError, KeyDistError, PipelineError,
};
pub use image::GrayImage;
pub use pipeline::{ChaoticParams, CipherImage, Flags};

/// Scalar used by the encryption pipeline. Keystreams must be reproduced
/// bit-for-bit at decryption time, so this is fixed to binary64.
pub type Real = f64;

/// Logistic map state over the pipeline scalar.
pub type Logistic64 = LogisticState<f64>;
/// Logistic map state over single precision (analysis / experimentation only).
pub type Logistic32 = LogisticState<f32>;
/// Hénon map state over the pipeline scalar.
pub type Henon64 = HenonState<f64>;
/// Hénon map state over single precision (analysis / experimentation only).
pub type Henon32 = HenonState<f32>;
