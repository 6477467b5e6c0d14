//! Per-point aggregates. Every field is an integer sum, so merging partial
//! results is exact and independent of how trials were partitioned.

use serde::Serialize;

use crate::decoders::DecodeTrace;

/// Normal-approximation 95% quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointStats {
    pub trials: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    /// Bits compared per trial for the BER (information bits less CRC).
    pub bits_per_trial: u64,
    /// List size used for θ; 0 when not a list decoder.
    pub list_size: u64,
    /// Per stage: splits, paths before pruning, paths after pruning.
    pub splits: Vec<u64>,
    pub paths_before: Vec<u64>,
    pub paths_after: Vec<u64>,
    /// Σ_t S_t and Σ_t S_t² where S_t sums paths-after-pruning over all
    /// stages of trial `t`.
    pub path_total: u64,
    pub path_total_sq: u128,
    /// Stages where pruning ran, and Σ (paths_before − L) over them.
    pub prune_stages: u64,
    pub prune_excess: u64,
    pub counter_prunes: u64,
    pub correct_path_pruned: u64,
    pub crc_fallbacks: u64,
    /// Trials that produced a trace.
    pub traced_trials: u64,
}

impl PointStats {
    pub fn new(len: usize, bits_per_trial: u64, list_size: u64) -> Self {
        Self {
            trials: 0,
            block_errors: 0,
            bit_errors: 0,
            bits_per_trial,
            list_size,
            splits: vec![0; len],
            paths_before: vec![0; len],
            paths_after: vec![0; len],
            path_total: 0,
            path_total_sq: 0,
            prune_stages: 0,
            prune_excess: 0,
            counter_prunes: 0,
            correct_path_pruned: 0,
            crc_fallbacks: 0,
            traced_trials: 0,
        }
    }

    /// Adds one trial.
    pub fn record(&mut self, block_error: bool, bit_errors: u64, trace: Option<&DecodeTrace>, crc_fallback: bool) {
        self.trials += 1;
        self.bit_errors += bit_errors;
        self.block_errors += u64::from(block_error);
        self.crc_fallbacks += u64::from(crc_fallback);
        let Some(trace) = trace else { return };
        self.traced_trials += 1;
        let mut total = 0u64;
        for (j, s) in trace.stages.iter().enumerate() {
            self.splits[j] += u64::from(s.splits);
            self.paths_before[j] += u64::from(s.paths_before_prune);
            self.paths_after[j] += u64::from(s.paths_after_prune);
            total += u64::from(s.paths_after_prune);
            if s.pruned {
                self.prune_stages += 1;
                self.prune_excess += u64::from(s.paths_before_prune) - self.list_size.min(u64::from(s.paths_before_prune));
            }
            self.counter_prunes += u64::from(s.counter_prune_fired);
        }
        self.path_total += total;
        self.path_total_sq += u128::from(total) * u128::from(total);
        self.correct_path_pruned += u64::from(trace.correct_path_pruned == Some(true));
    }

    /// Associative, commutative combination of two partial results.
    pub fn merge(mut self, other: &Self) -> Self {
        debug_assert_eq!(self.splits.len(), other.splits.len());
        self.trials += other.trials;
        self.block_errors += other.block_errors;
        self.bit_errors += other.bit_errors;
        for (a, b) in self.splits.iter_mut().zip(&other.splits) {
            *a += b;
        }
        for (a, b) in self.paths_before.iter_mut().zip(&other.paths_before) {
            *a += b;
        }
        for (a, b) in self.paths_after.iter_mut().zip(&other.paths_after) {
            *a += b;
        }
        self.path_total += other.path_total;
        self.path_total_sq += other.path_total_sq;
        self.prune_stages += other.prune_stages;
        self.prune_excess += other.prune_excess;
        self.counter_prunes += other.counter_prunes;
        self.correct_path_pruned += other.correct_path_pruned;
        self.crc_fallbacks += other.crc_fallbacks;
        self.traced_trials += other.traced_trials;
        self
    }

    pub fn bler(&self) -> f64 {
        ratio(self.block_errors, self.trials)
    }

    /// Half-width of the normal-approximation 95% interval on the BLER.
    pub fn bler_ci95(&self) -> f64 {
        if self.trials == 0 {
            return f64::NAN;
        }
        let p = self.bler();
        Z95 * (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Standard error of the BLER estimate.
    pub fn bler_se(&self) -> f64 {
        let p = self.bler();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.trials * self.bits_per_trial)
    }

    /// Paths after pruning, averaged over stages and trials.
    pub fn avg_paths_mean(&self) -> Option<f64> {
        let stages = self.splits.len() as u64;
        (self.traced_trials > 0).then(|| ratio(self.path_total, self.traced_trials * stages))
    }

    /// Half-width of the 95% interval on [`avg_paths_mean`](Self::avg_paths_mean),
    /// treating per-trial stage averages as i.i.d.
    pub fn avg_paths_ci95(&self) -> Option<f64> {
        let t = self.traced_trials;
        if t < 2 {
            return None;
        }
        let stages = self.splits.len() as f64;
        let mean = self.path_total as f64 / t as f64;
        let var = (self.path_total_sq as f64 / t as f64 - mean * mean).max(0.0) * t as f64 / (t - 1) as f64;
        Some(Z95 * (var / t as f64).sqrt() / stages)
    }

    /// Average relative overshoot of the list before pruning,
    /// `mean(paths_before / L − 1)` over the stages where pruning ran.
    pub fn theta(&self) -> f64 {
        if self.prune_stages == 0 || self.list_size == 0 {
            0.0
        } else {
            self.prune_excess as f64 / (self.list_size * self.prune_stages) as f64
        }
    }

    pub fn counter_prune_rate(&self) -> f64 {
        ratio(self.counter_prunes, self.traced_trials)
    }

    pub fn correct_path_pruned_rate(&self) -> f64 {
        ratio(self.correct_path_pruned, self.traced_trials)
    }

    /// `l_i`, the average number of splits at each stage.
    pub fn l_i(&self) -> Vec<f64> {
        self.splits.iter().map(|&s| ratio(s, self.traced_trials)).collect()
    }

    pub fn stage_rows(&self, frozen: &[bool]) -> Vec<StageRow> {
        let t = self.traced_trials;
        (0..self.splits.len())
            .map(|j| StageRow {
                i: j + 1,
                frozen: u8::from(frozen[j]),
                l_i: ratio(self.splits[j], t),
                paths_before: ratio(self.paths_before[j], t),
                paths_after: ratio(self.paths_after[j], t),
            })
            .collect()
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// One row of the per-stage CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRow {
    pub i: usize,
    pub frozen: u8,
    pub l_i: f64,
    pub paths_before: f64,
    pub paths_after: f64,
}

/// Difference of two rates divided by their pooled standard error; positive
/// when `a` exceeds `b`.
pub fn pooled_z(a: &PointStats, b: &PointStats) -> f64 {
    let diff = a.bler() - b.bler();
    let se = (a.bler_se().powi(2) + b.bler_se().powi(2)).sqrt();
    if se == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    } else {
        diff / se
    }
}
