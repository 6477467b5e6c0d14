use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("K = {k} is out of range for N = {n}")]
    DimensionOutOfRange { k: usize, n: usize },
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("list size must be at least 1")]
    ZeroListSize,
    #[error("ML decoding enumerates 2^K codewords; K = {0} exceeds the limit of {max}", max = crate::decoders::ML_MAX_K)]
    MlTooLarge(usize),
    #[error("CRC payload of {payload} bits is too short for a degree-{degree} CRC")]
    CrcPayloadTooShort { payload: usize, degree: u32 },
    #[error("invalid CRC configuration: {0}")]
    InvalidCrc(&'static str),
}
