//! Code definition, the polar transform `G_N = B_N F^{⊗n}` and the position
//! of the trailing rate-1 block.

use crate::{Error, Result};

/// A polar code of length `N = 2^n`, fixed by its frozen set.
///
/// The frozen mask is indexed from 0 here; all file formats use 1-based
/// indices. `k1` is derived from the mask on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCode {
    n: u32,
    frozen: Vec<bool>,
    info_positions: Vec<usize>,
    k1: usize,
}

impl PolarCode {
    /// Builds a code from its frozen mask (`true` = frozen).
    pub fn new(frozen_mask: Vec<bool>) -> Result<Self> {
        let len = frozen_mask.len();
        if !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let info_positions = frozen_mask
            .iter()
            .enumerate()
            .filter(|(_, &f)| !f)
            .map(|(i, _)| i)
            .collect();
        let k1 = compute_k1(&frozen_mask);
        Ok(Self {
            n: len.trailing_zeros(),
            frozen: frozen_mask,
            info_positions,
            k1,
        })
    }

    /// Builds a code of length `2^n` from 1-based frozen indices.
    pub fn from_frozen_indices(n: u32, frozen_indices: &[usize]) -> Result<Self> {
        if n >= usize::BITS - 1 {
            return Err(Error::Domain {
                name: "n",
                value: f64::from(n),
                domain: "0..63",
            });
        }
        let len = 1usize << n;
        let mut mask = vec![false; len];
        for &idx in frozen_indices {
            if idx == 0 || idx > len {
                return Err(Error::Domain {
                    name: "frozen index",
                    value: idx as f64,
                    domain: "1..=N",
                });
            }
            mask[idx - 1] = true;
        }
        Self::new(mask)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Block length `N`.
    pub fn len(&self) -> usize {
        self.frozen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frozen.is_empty()
    }

    /// Number of unfrozen bits `K`.
    pub fn dimension(&self) -> usize {
        self.info_positions.len()
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    /// Unfrozen positions (0-based, ascending).
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// Frozen positions as 1-based indices, ascending.
    pub fn frozen_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.frozen[i])
            .map(|i| i + 1)
            .collect()
    }

    /// Places `info` on the unfrozen positions of an otherwise all-zero `u`.
    pub fn embed(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                got: info.len(),
            });
        }
        let mut u = vec![0u8; self.len()];
        for (&pos, &bit) in self.info_positions.iter().zip(info) {
            u[pos] = bit & 1;
        }
        Ok(u)
    }

    /// Reads the unfrozen positions of `u`.
    pub fn extract(&self, u: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&p| u[p]).collect()
    }

    /// Encodes an information word of length `K`.
    pub fn encode_info(&self, info: &[u8]) -> Result<Vec<u8>> {
        encode(&self.embed(info)?)
    }
}

/// `c = u G_N` over GF(2), with `G_N = B_N F^{⊗n}`.
pub fn encode(u: &[u8]) -> Result<Vec<u8>> {
    if !u.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(u.len()));
    }
    let mut x = u.to_vec();
    bit_reverse_in_place(&mut x);
    butterfly_in_place(&mut x);
    Ok(x)
}

/// Recovers `u` from `c = u G_N`. `G_N` is its own inverse over GF(2).
pub fn inverse_transform(c: &[u8]) -> Result<Vec<u8>> {
    encode(c)
}

/// The permutation sending `i` to the integer whose `n`-bit expansion is the
/// reverse of `i`'s.
pub fn bit_reversal_permutation(n: u32) -> Vec<usize> {
    (0..1usize << n).map(|i| reverse_bits(i, n)).collect()
}

pub(crate) fn reverse_bits(i: usize, n: u32) -> usize {
    if n == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - n)
    }
}

pub(crate) fn bit_reverse_in_place<T>(x: &mut [T]) {
    let n = x.len().trailing_zeros();
    for i in 0..x.len() {
        let j = reverse_bits(i, n);
        if i < j {
            x.swap(i, j);
        }
    }
}

/// `x <- x F^{⊗n}` in natural order.
pub(crate) fn butterfly_in_place(x: &mut [u8]) {
    let len = x.len();
    let mut half = 1;
    while half < len {
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}

/// Size of the trailing all-unfrozen block: `2^⌊log2 r⌋` where `r` is the
/// number of consecutive unfrozen bits ending at `u_N`, or 0 if `u_N` is
/// frozen.
pub fn compute_k1(frozen_mask: &[bool]) -> usize {
    let run = frozen_mask.iter().rev().take_while(|&&f| !f).count();
    if run == 0 {
        0
    } else {
        1 << (usize::BITS - 1 - run.leading_zeros())
    }
}
