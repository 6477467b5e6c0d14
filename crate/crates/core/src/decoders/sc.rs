//! Single-path successive cancellation.

use super::kernels::{check_llrs, hard, variable_llrs};
use super::trace::{DecodeTrace, StageRecord};
use super::{check_llr_len, DecodeResult};
use crate::polar::{bit_reverse_in_place, PolarCode};
use crate::{Error, Result};

struct ScTree {
    n: u32,
    alpha: Vec<Vec<f64>>,
    beta: Vec<Vec<u8>>,
}

impl ScTree {
    fn new(llrs: &[f64], n: u32) -> Self {
        let len = llrs.len();
        let mut root = llrs.to_vec();
        bit_reverse_in_place(&mut root);
        let mut alpha = vec![root];
        let mut beta = vec![Vec::new()];
        for d in 1..=n as usize {
            alpha.push(vec![0.0; len >> d]);
            beta.push(vec![0u8; len >> d]);
        }
        Self { n, alpha, beta }
    }

    fn leaf_llr(&mut self, i: usize) -> f64 {
        let n = self.n as usize;
        let start = if i == 0 { 1 } else { n - i.trailing_zeros() as usize };
        for d in start..=n {
            let (upper, lower) = self.alpha.split_at_mut(d);
            if d == start && i != 0 {
                variable_llrs(&upper[d - 1], &self.beta[d], &mut lower[0]);
            } else {
                check_llrs(&upper[d - 1], &mut lower[0]);
            }
        }
        self.alpha[n][0]
    }

    fn propagate(&mut self, i: usize, bit: u8) {
        let n = self.n as usize;
        let mut cur = vec![bit];
        let mut d = n;
        while d > 0 && (i >> (n - d)) & 1 == 1 {
            let mut merged: Vec<u8> = self.beta[d].iter().zip(&cur).map(|(a, b)| a ^ b).collect();
            merged.extend_from_slice(&cur);
            cur = merged;
            d -= 1;
        }
        if d > 0 {
            self.beta[d] = cur;
        }
    }
}

fn run_sc(
    llrs: &[f64],
    code: &PolarCode,
    genie: Option<(&[u8], usize)>,
    truth: Option<&[u8]>,
) -> (Vec<u8>, Option<DecodeTrace>) {
    let len = code.len();
    let mut tree = ScTree::new(llrs, code.n());
    let mut u = vec![0u8; len];
    let mut trace = truth.map(|_| DecodeTrace {
        correct_path_pruned: Some(false),
        ..DecodeTrace::default()
    });
    let mut correct = true;
    for i in 0..len {
        let llr = tree.leaf_llr(i);
        let bit = match genie {
            Some((t, upto)) if i < upto => t[i],
            _ if code.is_frozen(i) => 0,
            _ => hard(llr),
        };
        u[i] = bit;
        if let (Some(tr), Some(t)) = (trace.as_mut(), truth) {
            correct &= t[i] == bit;
            tr.stages.push(StageRecord {
                i: i + 1,
                splits: 0,
                paths_before_prune: 1,
                paths_after_prune: 1,
                counter_prune_fired: false,
                correct_path_alive: Some(correct),
                frozen: code.is_frozen(i),
                pruned: false,
                correct_path_split: false,
                correct_path_counter: None,
            });
        }
        if i + 1 < len {
            tree.propagate(i, bit);
        }
    }
    (u, trace)
}

/// Bit-by-bit SC: frozen bits are 0, unfrozen bits follow the LLR sign.
pub fn sc_decode(llrs: &[f64], code: &PolarCode) -> Result<DecodeResult> {
    check_llr_len(llrs, code)?;
    let (u, _) = run_sc(llrs, code, None, None);
    Ok(DecodeResult::from_u(code, u, llrs))
}

/// SC with a per-stage trace against the transmitted `u`.
pub fn sc_decode_traced(llrs: &[f64], code: &PolarCode, truth: &[u8]) -> Result<DecodeResult> {
    check_llr_len(llrs, code)?;
    if truth.len() != code.len() {
        return Err(Error::LengthMismatch {
            expected: code.len(),
            got: truth.len(),
        });
    }
    let (u, trace) = run_sc(llrs, code, None, Some(truth));
    let mut result = DecodeResult::from_u(code, u, llrs);
    result.trace = trace;
    Ok(result)
}

/// SC with bits `1..=genie_upto` forced to `true_u`.
pub fn sc_decode_genie(
    llrs: &[f64],
    code: &PolarCode,
    true_u: &[u8],
    genie_upto: usize,
) -> Result<DecodeResult> {
    check_llr_len(llrs, code)?;
    if true_u.len() != code.len() {
        return Err(Error::LengthMismatch {
            expected: code.len(),
            got: true_u.len(),
        });
    }
    if genie_upto > code.len() {
        return Err(Error::Domain {
            name: "genie_upto",
            value: genie_upto as f64,
            domain: "0..=N",
        });
    }
    let (u, _) = run_sc(llrs, code, Some((true_u, genie_upto)), None);
    Ok(DecodeResult::from_u(code, u, llrs))
}

/// LLR seen at every leaf when the earlier decisions are `decisions`.
pub fn sc_leaf_llrs(llrs: &[f64], code: &PolarCode, decisions: &[u8]) -> Result<Vec<f64>> {
    check_llr_len(llrs, code)?;
    if decisions.len() != code.len() {
        return Err(Error::LengthMismatch {
            expected: code.len(),
            got: decisions.len(),
        });
    }
    let mut tree = ScTree::new(llrs, code.n());
    let mut out = Vec::with_capacity(code.len());
    for (i, &bit) in decisions.iter().enumerate() {
        out.push(tree.leaf_llr(i));
        if i + 1 < code.len() {
            tree.propagate(i, bit);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_all_zero() {
        let code = PolarCode::from_frozen_indices(3, &[1, 2, 3, 5]).unwrap();
        let r = sc_decode(&[4.0; 8], &code).unwrap();
        assert_eq!(r.u_hat, vec![0; 8]);
        assert_eq!(r.codeword, vec![0; 8]);
        assert_eq!(r.selected_metric, 32.0);
    }

    #[test]
    fn single_bit_code() {
        let code = PolarCode::new(vec![false]).unwrap();
        let r = sc_decode(&[-3.0], &code).unwrap();
        assert_eq!(r.u_hat, vec![1]);
        assert_eq!(r.info_bits, vec![1]);
    }

    #[test]
    fn noiseless_random_words_are_recovered() {
        let code = PolarCode::from_frozen_indices(4, &[1, 2, 3, 4, 5, 6, 9, 10]).unwrap();
        for w in 0..256u32 {
            let info: Vec<u8> = (0..8).map(|j| ((w >> j) & 1) as u8).collect();
            let c = code.encode_info(&info).unwrap();
            let llrs: Vec<f64> = c.iter().map(|&b| if b == 0 { 5.0 } else { -5.0 }).collect();
            assert_eq!(sc_decode(&llrs, &code).unwrap().info_bits, info);
        }
    }

    #[test]
    fn genie_edge_cases() {
        let code = PolarCode::from_frozen_indices(3, &[1, 2, 3, 5]).unwrap();
        let llrs = [0.3, -1.2, 2.2, 0.1, -0.4, 1.9, -2.5, 0.8];
        let truth = [0, 0, 0, 1, 0, 1, 0, 1];
        assert_eq!(sc_decode_genie(&llrs, &code, &truth, 8).unwrap().u_hat, truth);
        assert_eq!(
            sc_decode_genie(&llrs, &code, &truth, 0).unwrap(),
            sc_decode(&llrs, &code).unwrap()
        );
        assert!(sc_decode_genie(&llrs, &code, &truth, 9).is_err());
        assert!(sc_decode(&llrs[..7], &code).is_err());
    }

    #[test]
    fn leaf_llrs_follow_the_decisions() {
        let code = PolarCode::new(vec![false; 2]).unwrap();
        let l = sc_leaf_llrs(&[1.0, -2.0], &code, &[1, 0]).unwrap();
        assert!((l[0] - crate::decoders::boxplus(1.0, -2.0)).abs() < 1e-12);
        assert_eq!(l[1], -1.0 - 2.0);
    }
}
