use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChaosError {
    #[error("logistic seed {0} is outside the open interval (0, 1)")]
    InvalidSeed(f64),
    #[error("logistic control parameter {0} is outside (0, 4]")]
    InvalidRate(f64),
    #[error("logistic-tent parameter out of domain (x = {x}, mu = {mu})")]
    TentDomain { x: f64, mu: f64 },
    #[error("Hénon seed ({x}, {y}) is outside (0, 1]")]
    InvalidHenonSeed { x: f64, y: f64 },
    #[error("Hénon parameters a = {a}, b = {b} are outside a in [1, 1.4], b in (0, 1)")]
    InvalidHenonParams { a: f64, b: f64 },
    #[error("requested an empty sequence")]
    EmptySequence,
    #[error("Hénon orbit is degenerate after {steps} steps ({unique} unique S-box values)")]
    DegenerateOrbit { steps: usize, unique: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CipherError {
    #[error("key must be exactly 16 bytes, got {0}")]
    KeyLength(usize),
    #[error("data length {0} is not a positive multiple of 16")]
    BlockLength(usize),
    #[error("invalid PKCS#7 padding")]
    BadPadding,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContainerError {
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported container version {0}")]
    BadVersion(u8),
    #[error("container truncated: need {need} bytes, have {have}")]
    Truncated { need: usize, have: usize },
    #[error("ciphertext length {actual} does not match {width}x{height} image (expected {expected})")]
    LengthMismatch {
        width: u32,
        height: u32,
        expected: usize,
        actual: usize,
    },
    #[error("zero-sized image")]
    EmptyImage,
    #[error("unknown flag bits {0:#04x}")]
    UnknownFlags(u8),
}

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("pixel buffer has {actual} bytes, expected {expected}")]
    BufferSize { expected: usize, actual: usize },
    #[error("unsupported image file: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Codec(#[from] ::image::ImageError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("image {0}x{1} is too small for this metric")]
    TooSmall(usize, usize),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

#[derive(Debug, Error)]
pub enum KeyDistError {
    #[error("bit position {0} is outside 0..128")]
    BitPosition(usize),
    #[error("message is not ASCII")]
    NonAscii,
    #[error("empty hint message")]
    EmptyHint,
    #[error("message integer is not below the group modulus")]
    MessageTooLarge,
    #[error("ElGamal value out of range")]
    ElGamalRange,
    #[error("invalid ElGamal parameters: {0}")]
    ElGamalParams(String),
    #[error("stego capacity exceeded: need {need} bits, image has {have} pixels")]
    Capacity { need: usize, have: usize },
    #[error("no stego header found")]
    StegoMagic,
    #[error("stego length field {0} exceeds image capacity")]
    StegoLength(usize),
    #[error("malformed ElGamal ciphertext encoding")]
    CiphertextEncoding,
    #[error("QR encoding failed: {0}")]
    QrEncode(String),
    #[error("QR decoding failed: {0}")]
    QrDecode(String),
    #[error("malformed QR payload: {0}")]
    Payload(String),
    #[error("dynamic key unwrap failed (wrong static key)")]
    Unwrap(#[source] CipherError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("invalid chaotic parameters: {0}")]
    Params(#[from] ChaosError),
    #[error(transparent)]
    Container(#[from] ContainerError),
    #[error("stage length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}
