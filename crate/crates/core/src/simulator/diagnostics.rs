//! Empirical checks of how correct and incorrect paths behave under the
//! split-reduced rule.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::{ebn0_to_sigma2, transmit, trial_rng};
use crate::construction::reliability_profile;
use crate::decoders::{sc_leaf_llrs, CounterMode, DecodeTrace, ListDecoder};
use crate::polar::{butterfly_in_place, encode, PolarCode};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureParams {
    pub list_size: usize,
    pub omega: u32,
    pub ebn0_db: f64,
    pub trials: u64,
    pub seed: u64,
    pub counter_mode: CounterMode,
    /// Transmit the all-zero word.
    pub all_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConjectureReport {
    pub trials: u64,
    /// Trials in which the correct path's counter reached `omega`.
    pub reached_omega: u64,
    /// Of those, trials in which it then neither split nor got pruned.
    pub held_after_omega: u64,
    /// `gap_histogram[g]`: incorrect paths that split again after surviving
    /// `g` stages since their creation.
    pub gap_histogram: Vec<u64>,
    /// Incorrect paths that reached the end of the block without splitting
    /// again.
    pub censored: u64,
}

impl ConjectureReport {
    /// Share of trials with a correct path past `omega` that kept it to the
    /// end without splitting. `None` if no trial got there.
    pub fn held_fraction(&self) -> Option<f64> {
        (self.reached_omega > 0).then(|| self.held_after_omega as f64 / self.reached_omega as f64)
    }

    /// Share of incorrect-path observations that ended in a split.
    pub fn incorrect_split_fraction(&self) -> Option<f64> {
        let split: u64 = self.gap_histogram.iter().sum();
        let total = split + self.censored;
        (total > 0).then(|| split as f64 / total as f64)
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.reached_omega += other.reached_omega;
        self.held_after_omega += other.held_after_omega;
        if self.gap_histogram.len() < other.gap_histogram.len() {
            self.gap_histogram.resize(other.gap_histogram.len(), 0);
        }
        for (a, b) in self.gap_histogram.iter_mut().zip(&other.gap_histogram) {
            *a += b;
        }
        self.censored += other.censored;
        self
    }

    fn add_trace(&mut self, trace: &DecodeTrace, omega: u32) {
        self.trials += 1;
        let mut reached = false;
        let mut held = true;
        for s in &trace.stages {
            if reached && (s.correct_path_split || s.correct_path_alive == Some(false)) {
                held = false;
            }
            if s.correct_path_counter.is_some_and(|c| c >= omega) {
                reached = true;
            }
        }
        if reached {
            self.reached_omega += 1;
            self.held_after_omega += u64::from(held);
        }
        for &g in &trace.incorrect_split_gaps {
            let g = g as usize;
            if self.gap_histogram.len() <= g {
                self.gap_histogram.resize(g + 1, 0);
            }
            self.gap_histogram[g] += 1;
        }
        self.censored += u64::from(trace.incorrect_censored);
    }
}

/// Runs split-reduced SCL with truth tracking and summarises how the
/// correct path and the incorrect paths split.
pub fn conjecture_diagnostics(code: &PolarCode, p: &ConjectureParams) -> Result<ConjectureReport> {
    let k = code.dimension();
    let sigma2 = ebn0_to_sigma2(p.ebn0_db, k as f64 / code.len() as f64)?;
    let profile = reliability_profile(code.n(), sigma2)?;
    let decoder = ListDecoder::split_reduced(code, &profile.tau, p.list_size, p.omega).with_counter_mode(p.counter_mode);
    (0..p.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(p.seed, t);
            let info: Vec<u8> = if p.all_zero {
                vec![0; k]
            } else {
                (0..k).map(|_| u8::from(rng.random::<bool>())).collect()
            };
            let u = code.embed(&info)?;
            let rx = transmit(&encode(&u)?, sigma2, &mut rng)?;
            let out = decoder.decode_list(&rx.llr, Some(&u), true)?;
            let mut r = ConjectureReport::default();
            r.add_trace(out.trace.as_ref().expect("trace requested"), p.omega);
            Ok(r)
        })
        .try_reduce(ConjectureReport::default, |a, b| Ok(a.merge(b)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroMeanReport {
    pub errors: usize,
    pub realizations: u64,
    /// Empirical mean and standard error of each leaf LLR under the right
    /// half of the block.
    pub means: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Leaves whose mean is within 3 standard errors of zero.
    pub zero_mean_leaves: usize,
}

/// Sends the all-zero word of a rate-1 code of length `2^n`, forces the
/// left half's codeword to carry `errors` ones and measures the mean LLR at
/// every leaf of the right half (decided correctly).
pub fn zero_mean_leaves(n: u32, errors: usize, sigma2: f64, realizations: u64, seed: u64) -> Result<ZeroMeanReport> {
    if n == 0 || n > 16 {
        return Err(Error::Domain {
            name: "n",
            value: f64::from(n),
            domain: "1..=16",
        });
    }
    let len = 1usize << n;
    let half = len / 2;
    if errors > half {
        return Err(Error::Domain {
            name: "errors",
            value: errors as f64,
            domain: "0..=N/2",
        });
    }
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::Domain {
            name: "sigma2",
            value: sigma2,
            domain: "(0, inf)",
        });
    }
    let code = PolarCode::new(vec![false; len])?;
    let mut left = vec![0u8; half];
    left[..errors].fill(1);
    butterfly_in_place(&mut left);
    let mut decisions = left;
    decisions.resize(len, 0);

    let sd = sigma2.sqrt();
    let (sum, sum_sq) = (0..realizations)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let llrs: Vec<f64> = (0..len)
                .map(|_| 2.0 * (1.0 + sd * rng.sample::<f64, _>(StandardNormal)) / sigma2)
                .collect();
            let leaves = sc_leaf_llrs(&llrs, &code, &decisions).expect("lengths match");
            let right = &leaves[half..];
            (right.to_vec(), right.iter().map(|v| v * v).collect::<Vec<_>>())
        })
        .reduce(
            || (vec![0.0; half], vec![0.0; half]),
            |(mut a, mut a2), (b, b2)| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a2.iter_mut().zip(&b2).for_each(|(x, y)| *x += y);
                (a, a2)
            },
        );
    let r = realizations as f64;
    let means: Vec<f64> = sum.iter().map(|s| s / r).collect();
    let std_errors: Vec<f64> = sum_sq
        .iter()
        .zip(&means)
        .map(|(s2, m)| ((s2 / r - m * m).max(0.0) / r).sqrt())
        .collect();
    let zero_mean_leaves = means.iter().zip(&std_errors).filter(|(m, se)| m.abs() < 3.0 * **se).count();
    Ok(ZeroMeanReport {
        errors,
        realizations,
        means,
        std_errors,
        zero_mean_leaves,
    })
}
