//! Polar codes over the BPSK/AWGN channel with successive cancellation
//! decoding and its list variants.
//!
//! Besides plain SC, SCL and CRC-aided SCL the crate implements the
//! split-reduced list decoder, which only splits a path when the bit LLR
//! falls inside a reliability window derived from Gaussian-approximation
//! density evolution and prunes competitors once one path has survived
//! `omega` unfrozen stages without splitting, and its enhanced variant,
//! which replaces list decoding of the trailing rate-1 block of `K1` bits
//! by a hard decision on that block's LLRs.
//!
//! Bit indices are 1-based in every external format and 0-based in the API.

pub mod channel;
pub mod construction;
pub mod crc;
pub mod decoders;
mod error;
pub mod formats;
pub mod polar;
pub mod simulator;

pub use error::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;
