//! BPSK over AWGN: modulation, noise, channel LLRs and per-trial RNG streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// One use of the channel for a whole block.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Transmitted symbols `1 − 2c`.
    pub x: Vec<f64>,
    /// Received values.
    pub y: Vec<f64>,
    /// Channel LLRs `2y/σ²`.
    pub llr: Vec<f64>,
    pub sigma2: f64,
}

/// Noise variance for unit-energy BPSK at the given `Eb/N0` and code rate.
pub fn ebn0_to_sigma2(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Domain {
            name: "rate",
            value: rate,
            domain: "(0, 1]",
        });
    }
    Ok(1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0)))
}

/// The random stream owned by one Monte Carlo trial. Streams for different
/// trial indices are independent, so trials can run in any order.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// Sends codeword `c` through the channel.
pub fn transmit<R: Rng + ?Sized>(c: &[u8], sigma2: f64, rng: &mut R) -> Result<ChannelRealization> {
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::Domain {
            name: "sigma2",
            value: sigma2,
            domain: "(0, inf)",
        });
    }
    let sd = sigma2.sqrt();
    let x: Vec<f64> = c.iter().map(|&b| 1.0 - 2.0 * f64::from(b & 1)).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|&s| s + sd * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let llr = y.iter().map(|&v| 2.0 * v / sigma2).collect();
    Ok(ChannelRealization { x, y, llr, sigma2 })
}

/// Result of the binned check of `f(l) = f(−l) e^l` on an LLR sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    /// Bin centre, empirical `f(l)`, empirical `f(−l) e^l`.
    pub bins: Vec<(f64, f64, f64)>,
    /// Largest relative deviation over bins holding at least `min_count`
    /// samples on both sides.
    pub max_relative_deviation: f64,
}

/// Histogram diagnostic of the LLR symmetry condition. Only positive bins
/// with enough mass on both sides are compared.
pub fn symmetry_check(llrs: &[f64], bin_width: f64, max_abs: f64, min_count: usize) -> SymmetryReport {
    let bins_per_side = (max_abs / bin_width).ceil() as usize;
    let mut pos = vec![0usize; bins_per_side];
    let mut neg = vec![0usize; bins_per_side];
    for &l in llrs {
        let b = (l.abs() / bin_width) as usize;
        if b < bins_per_side {
            if l >= 0.0 {
                pos[b] += 1;
            } else {
                neg[b] += 1;
            }
        }
    }
    let total = llrs.len() as f64 * bin_width;
    let mut bins = Vec::new();
    let mut worst = 0.0f64;
    for b in 0..bins_per_side {
        if pos[b] < min_count || neg[b] < min_count {
            continue;
        }
        let lo = b as f64 * bin_width;
        let hi = lo + bin_width;
        // Average e^l over the bin so that wide bins stay unbiased.
        let mean_exp = (hi.exp() - lo.exp()) / bin_width;
        let fp = pos[b] as f64 / total;
        let fn_scaled = neg[b] as f64 / total * mean_exp;
        worst = worst.max(((fp - fn_scaled) / fp).abs());
        bins.push((lo + 0.5 * bin_width, fp, fn_scaled));
    }
    SymmetryReport {
        bins,
        max_relative_deviation: worst,
    }
}
