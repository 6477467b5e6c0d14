//! SC, SCL, split-reduced SCL, enhanced split-reduced SCL, CRC-aided
//! selection, exhaustive ML and genie-aided SC.
//!
//! Every decoder walks the same decoding tree: the channel LLRs are put in
//! bit-reversed order and the tree splits each node's LLR vector into halves,
//! which makes `c = u B_N F^{⊗n}` consistent with the encoder. The final
//! codeword of any list decoder is the candidate with the largest
//! correlation `Σ (1 − 2c_i) L_i`.

mod kernels;
mod list;
mod ml;
mod sc;
mod trace;

use serde::{Deserialize, Serialize};

pub use kernels::{boxplus, correlation, llr_recurse, path_metric_update, softplus};
pub use list::{Candidate, ListDecoder, ListOutcome, Splitting};
pub use ml::{ml_decode, ML_MAX_K};
pub use sc::{sc_decode, sc_decode_genie, sc_decode_traced, sc_leaf_llrs};
pub use trace::{DecodeTrace, StageRecord};

use crate::construction::ReliabilityProfile;
use crate::crc::{crc_check, CrcConfig};
use crate::polar::PolarCode;
use crate::{Error, Result};

/// `omega` value that never triggers counter pruning.
pub const OMEGA_INF: u32 = u32::MAX;

/// Which stages advance a path's no-split counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterMode {
    /// Only unfrozen stages decided without a split; frozen stages leave the
    /// counter alone.
    #[default]
    UnfrozenOnly,
    /// Every stage that does not split, frozen ones included.
    AllStages,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub info_bits: Vec<u8>,
    pub u_hat: Vec<u8>,
    pub codeword: Vec<u8>,
    /// Correlation of the returned codeword with the channel LLRs.
    pub selected_metric: f64,
    pub trace: Option<DecodeTrace>,
    /// CRC-aided selection found no CRC-valid candidate.
    pub crc_fallback: bool,
}

impl DecodeResult {
    pub(crate) fn from_u(code: &PolarCode, u_hat: Vec<u8>, llrs: &[f64]) -> Self {
        let codeword = crate::polar::encode(&u_hat).expect("code length is a power of two");
        Self {
            info_bits: code.extract(&u_hat),
            selected_metric: correlation(&codeword, llrs),
            u_hat,
            codeword,
            trace: None,
            crc_fallback: false,
        }
    }
}

pub(crate) fn check_llr_len(llrs: &[f64], code: &PolarCode) -> Result<()> {
    if llrs.len() != code.len() {
        return Err(Error::LengthMismatch {
            expected: code.len(),
            got: llrs.len(),
        });
    }
    Ok(())
}

/// Classic SCL: every unfrozen bit splits, the best `list_size` paths by
/// metric survive.
pub fn scl_decode(llrs: &[f64], code: &PolarCode, list_size: usize) -> Result<DecodeResult> {
    ListDecoder::scl(code, list_size).decode(llrs)
}

/// Split-reduced SCL with thresholds from `profile`.
pub fn sr_scl_decode(
    llrs: &[f64],
    code: &PolarCode,
    profile: &ReliabilityProfile,
    list_size: usize,
    omega: u32,
) -> Result<DecodeResult> {
    ListDecoder::split_reduced(code, &profile.tau, list_size, omega).decode(llrs)
}

/// Split-reduced SCL up to bit `N − K1`, then a rate-1 hard decision per
/// surviving path on the last `K1` bits.
pub fn esr_scl_decode(
    llrs: &[f64],
    code: &PolarCode,
    profile: &ReliabilityProfile,
    list_size: usize,
    omega: u32,
) -> Result<DecodeResult> {
    ListDecoder::enhanced(code, &profile.tau, list_size, omega).decode(llrs)
}

/// Among candidates whose information bits pass the CRC, the one with the
/// largest correlation; if none passes, the overall best, flagged.
pub fn crc_aided_select(
    candidates: &[Candidate],
    code: &PolarCode,
    crc: &CrcConfig,
) -> Result<DecodeResult> {
    crc.validate()?;
    if code.dimension() <= crc.degree as usize {
        return Err(Error::CrcPayloadTooShort {
            payload: code.dimension(),
            degree: crc.degree,
        });
    }
    let mut passing = Vec::with_capacity(candidates.len());
    for c in candidates {
        if crc_check(&code.extract(&c.u_hat), crc)? {
            passing.push(c.clone());
        }
    }
    let fallback = passing.is_empty();
    let pool = if fallback { candidates } else { &passing[..] };
    let best = list::best_by_correlation(pool).ok_or(Error::ZeroListSize)?;
    Ok(DecodeResult {
        info_bits: code.extract(&best.u_hat),
        u_hat: best.u_hat.clone(),
        codeword: best.codeword.clone(),
        selected_metric: best.correlation,
        trace: None,
        crc_fallback: fallback,
    })
}

/// SCL followed by CRC-aided selection over the final list.
pub fn crc_scl_decode(
    llrs: &[f64],
    code: &PolarCode,
    list_size: usize,
    crc: &CrcConfig,
) -> Result<DecodeResult> {
    let outcome = ListDecoder::scl(code, list_size).decode_list(llrs, None, false)?;
    crc_aided_select(&outcome.candidates, code, crc)
}
