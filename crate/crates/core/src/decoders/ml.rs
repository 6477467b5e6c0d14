//! Exhaustive maximum-likelihood decoding for short codes.

use super::kernels::correlation;
use super::{check_llr_len, DecodeResult};
use crate::polar::{encode, PolarCode};
use crate::{Error, Result};

/// Largest `K` [`ml_decode`] will enumerate.
pub const ML_MAX_K: usize = 20;

/// Codeword maximising `Σ (1 − 2x_i) L_i` over all `2^K` information words.
/// Ties go to the smallest information word read as an unsigned integer
/// with the first information bit most significant.
pub fn ml_decode(llrs: &[f64], code: &PolarCode) -> Result<DecodeResult> {
    check_llr_len(llrs, code)?;
    let k = code.dimension();
    if k > ML_MAX_K {
        return Err(Error::MlTooLarge(k));
    }
    let len = code.len();
    let rows: Vec<Vec<u8>> = code
        .info_positions()
        .iter()
        .map(|&p| {
            let mut e = vec![0u8; len];
            e[p] = 1;
            encode(&e).expect("power-of-two length")
        })
        .collect();

    // Gray-code walk: step w flips information bit `trailing_zeros(w)`
    // counted from the least significant end.
    let mut codeword = vec![0u8; len];
    let mut word = 0u32;
    let mut best = (correlation(&codeword, llrs), 0u32);
    for step in 1u32..(1u32 << k) {
        let bit = step.trailing_zeros() as usize;
        word ^= 1 << bit;
        for (c, r) in codeword.iter_mut().zip(&rows[k - 1 - bit]) {
            *c ^= r;
        }
        let corr = correlation(&codeword, llrs);
        if corr > best.0 || (corr == best.0 && word < best.1) {
            best = (corr, word);
        }
    }
    let info: Vec<u8> = (0..k).map(|j| ((best.1 >> (k - 1 - j)) & 1) as u8).collect();
    let u = code.embed(&info)?;
    Ok(DecodeResult::from_u(code, u, llrs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_all_zero() {
        let code = PolarCode::from_frozen_indices(3, &[1, 2, 3, 5]).unwrap();
        let r = ml_decode(&[2.0; 8], &code).unwrap();
        assert_eq!(r.codeword, vec![0; 8]);
    }

    #[test]
    fn ties_prefer_smallest_word() {
        // All-zero LLRs: every codeword scores 0.
        let code = PolarCode::from_frozen_indices(2, &[1]).unwrap();
        let r = ml_decode(&[0.0; 4], &code).unwrap();
        assert_eq!(r.info_bits, vec![0, 0, 0]);
    }

    #[test]
    fn refuses_large_dimension() {
        let code = PolarCode::new(vec![false; 32]).unwrap();
        assert_eq!(ml_decode(&[1.0; 32], &code).unwrap_err(), Error::MlTooLarge(32));
    }

    #[test]
    fn finds_the_maximum_by_brute_force() {
        let code = PolarCode::from_frozen_indices(3, &[1, 2, 5]).unwrap();
        let llrs = [0.4, -1.1, 0.9, 0.2, -0.3, 1.7, -0.8, 0.05];
        let r = ml_decode(&llrs, &code).unwrap();
        let mut best = f64::NEG_INFINITY;
        for w in 0..32u32 {
            let info: Vec<u8> = (0..5).map(|j| ((w >> j) & 1) as u8).collect();
            best = best.max(correlation(&code.encode_info(&info).unwrap(), &llrs));
        }
        assert_eq!(r.selected_metric, best);
    }
}
