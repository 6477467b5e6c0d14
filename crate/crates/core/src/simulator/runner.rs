//! Monte Carlo runner. Every trial owns an RNG stream keyed by its index and
//! decodes one channel realization with every configured decoder, so results
//! do not depend on thread count or scheduling.

use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ConfigError, DecoderSpec, ResolvedCode, SimConfig};
use super::stats::PointStats;
use crate::channel::{ebn0_to_sigma2, transmit, trial_rng};
use crate::construction::{reliability_profile, ReliabilityProfile};
use crate::crc::crc_append;
use crate::decoders::{crc_aided_select, ml_decode, sc_decode_traced, DecodeResult, ListDecoder};
use crate::polar::encode;
use crate::Result;

/// A configuration bound to its resolved code.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: SimConfig,
    pub code: ResolvedCode,
}

/// Statistics of one decoder at one `Eb/N0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub decoder: DecoderSpec,
    pub ebn0_db: f64,
    pub sigma2: f64,
    pub stats: PointStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub len: usize,
    pub k: usize,
    pub k1: usize,
    pub design_ebn0_db: Option<f64>,
    pub seed: u64,
    pub frozen: Vec<bool>,
    /// Grid-major: all decoders at the first `Eb/N0`, then the next.
    pub points: Vec<PointResult>,
}

struct PointContext {
    sigma2: f64,
    profile: Option<ReliabilityProfile>,
}

impl Simulation {
    pub fn new(config: SimConfig, base_dir: &Path) -> Result<Self, ConfigError> {
        config.validate()?;
        let code = config.resolve_code(base_dir)?;
        Ok(Self { config, code })
    }

    fn fresh(&self) -> Vec<PointStats> {
        let code = &self.code.code;
        self.config
            .decoders
            .iter()
            .map(|d| {
                let bits = if d.uses_crc() {
                    code.dimension() - self.config.crc.degree as usize
                } else {
                    code.dimension()
                };
                PointStats::new(code.len(), bits as u64, d.list_size().unwrap_or(0) as u64)
            })
            .collect()
    }

    /// Runs every decoder at one `Eb/N0`. `σ²` uses the code rate `K/N`;
    /// split thresholds are computed by GA at that `σ²`.
    pub fn run_point(&self, ebn0_db: f64) -> Result<Vec<PointResult>> {
        let code = &self.code.code;
        let sigma2 = ebn0_to_sigma2(ebn0_db, code.dimension() as f64 / code.len() as f64)?;
        let profile = if self.config.decoders.iter().any(DecoderSpec::uses_profile) {
            Some(reliability_profile(code.n(), sigma2)?)
        } else {
            None
        };
        let ctx = PointContext { sigma2, profile };

        let stop = self.config.stopping;
        let max_trials = stop.max_trials();
        let mut totals = self.fresh();
        let mut active = vec![true; totals.len()];
        let mut done = 0u64;
        while done < max_trials && active.iter().any(|&a| a) {
            let end = max_trials.min(done + self.config.batch_size);
            let batch = (done..end)
                .into_par_iter()
                .try_fold(
                    || self.fresh(),
                    |mut acc, t| {
                        self.trial(&ctx, t, &active, &mut acc)?;
                        Ok::<_, crate::Error>(acc)
                    },
                )
                .try_reduce(|| self.fresh(), |a, b| Ok(merge_all(a, &b)))?;
            totals = merge_all(totals, &batch);
            done = end;
            if let Some(target) = stop.error_target() {
                for (a, s) in active.iter_mut().zip(&totals) {
                    *a &= s.block_errors < target;
                }
            }
        }
        Ok(self
            .config
            .decoders
            .iter()
            .zip(totals)
            .map(|(&decoder, stats)| PointResult {
                decoder,
                ebn0_db,
                sigma2,
                stats,
            })
            .collect())
    }

    /// Runs the whole grid, points in configuration order.
    pub fn run_sweep(&self) -> Result<SweepResult> {
        let mut points = Vec::new();
        for &e in &self.config.ebn0_db {
            points.extend(self.run_point(e)?);
        }
        let code = &self.code.code;
        Ok(SweepResult {
            len: code.len(),
            k: code.dimension(),
            k1: code.k1(),
            design_ebn0_db: self.code.design_ebn0_db,
            seed: self.config.seed,
            frozen: code.frozen_mask().to_vec(),
            points,
        })
    }

    fn trial(&self, ctx: &PointContext, t: u64, active: &[bool], acc: &mut [PointStats]) -> Result<()> {
        let cfg = &self.config;
        let code = &self.code.code;
        let k = code.dimension();
        let mut rng = trial_rng(cfg.seed, t);
        let info: Vec<u8> = if cfg.all_zero {
            vec![0; k]
        } else {
            (0..k).map(|_| u8::from(rng.random::<bool>())).collect()
        };
        let u = code.embed(&info)?;
        let c = encode(&u)?;
        let rx = transmit(&c, ctx.sigma2, &mut rng)?;

        let needs_crc = cfg.decoders.iter().zip(active).any(|(d, &a)| a && d.uses_crc());
        let framed = if needs_crc {
            let payload = k - cfg.crc.degree as usize;
            let frame = crc_append(&info[..payload], &cfg.crc);
            let u_crc = code.embed(&frame)?;
            let c_crc = encode(&u_crc)?;
            // Same noise, different codeword.
            let llr: Vec<f64> = c_crc
                .iter()
                .zip(rx.y.iter().zip(&rx.x))
                .map(|(&b, (&y, &x))| 2.0 * (1.0 - 2.0 * f64::from(b) + y - x) / ctx.sigma2)
                .collect();
            Some((frame, u_crc, llr))
        } else {
            None
        };

        for ((spec, &on), stats) in cfg.decoders.iter().zip(active).zip(acc.iter_mut()) {
            if !on {
                continue;
            }
            let (truth_info, truth_u, llr) = match (&framed, spec.uses_crc()) {
                (Some((frame, u_crc, llr)), true) => (&frame[..], &u_crc[..], &llr[..]),
                _ => (&info[..], &u[..], &rx.llr[..]),
            };
            let result = self.decode(spec, ctx, llr, truth_u)?;
            let compared = stats.bits_per_trial as usize;
            let bit_errors = result.info_bits[..compared]
                .iter()
                .zip(&truth_info[..compared])
                .filter(|(a, b)| a != b)
                .count() as u64;
            let block_error = result.info_bits != truth_info;
            stats.record(block_error, bit_errors, result.trace.as_ref(), result.crc_fallback);
        }
        Ok(())
    }

    fn decode(&self, spec: &DecoderSpec, ctx: &PointContext, llr: &[f64], truth: &[u8]) -> Result<DecodeResult> {
        let code = &self.code.code;
        let mode = self.config.counter_mode;
        let tau = || &ctx.profile.as_ref().expect("profile computed for threshold decoders").tau[..];
        match *spec {
            DecoderSpec::Sc => sc_decode_traced(llr, code, truth),
            DecoderSpec::Scl { list_size } => ListDecoder::scl(code, list_size).decode_with(llr, Some(truth), true),
            DecoderSpec::SrScl { list_size, omega } => ListDecoder::split_reduced(code, tau(), list_size, omega.0)
                .with_counter_mode(mode)
                .decode_with(llr, Some(truth), true),
            DecoderSpec::EsrScl { list_size, omega } => ListDecoder::enhanced(code, tau(), list_size, omega.0)
                .with_counter_mode(mode)
                .decode_with(llr, Some(truth), true),
            DecoderSpec::CrcScl { list_size } => {
                let outcome = ListDecoder::scl(code, list_size).decode_list(llr, Some(truth), true)?;
                let mut r = crc_aided_select(&outcome.candidates, code, &self.config.crc)?;
                r.trace = outcome.trace;
                Ok(r)
            }
            DecoderSpec::Ml => ml_decode(llr, code),
        }
    }
}

fn merge_all(a: Vec<PointStats>, b: &[PointStats]) -> Vec<PointStats> {
    a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()
}

/// Resolves the code against `base_dir` and runs the grid.
pub fn run_sweep(config: &SimConfig, base_dir: &Path) -> Result<SweepResult, SweepError> {
    let sim = Simulation::new(config.clone(), base_dir)?;
    Ok(sim.run_sweep()?)
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Run(#[from] crate::Error),
}

#[derive(Serialize)]
struct ResultRow<'a> {
    decoder: &'a str,
    #[serde(rename = "N")]
    len: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "L")]
    list_size: Option<usize>,
    omega: Option<String>,
    ebn0_db: f64,
    design_ebn0_db: Option<f64>,
    trials: u64,
    block_errors: u64,
    bler: f64,
    bler_ci95: f64,
    ber: f64,
    avg_paths_mean: Option<f64>,
    theta_measured: f64,
    k1: usize,
    seed: u64,
}

impl SweepResult {
    pub fn results_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for p in &self.points {
            let s = &p.stats;
            w.serialize(ResultRow {
                decoder: p.decoder.label(),
                len: self.len,
                k: self.k,
                list_size: p.decoder.list_size(),
                omega: p.decoder.omega().map(|o| o.to_string()),
                ebn0_db: p.ebn0_db,
                design_ebn0_db: self.design_ebn0_db,
                trials: s.trials,
                block_errors: s.block_errors,
                bler: s.bler(),
                bler_ci95: s.bler_ci95(),
                ber: s.ber(),
                avg_paths_mean: s.avg_paths_mean(),
                theta_measured: s.theta(),
                k1: self.k1,
                seed: self.seed,
            })
            .expect("writing to memory");
        }
        into_string(w)
    }

    /// Per-stage CSV for one point.
    pub fn stage_csv(&self, point: &PointResult) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in point.stats.stage_rows(&self.frozen) {
            w.serialize(row).expect("writing to memory");
        }
        into_string(w)
    }

    /// File-name-safe identifier of a point, e.g. `esr-scl_L8_w45_2dB`.
    pub fn point_id(point: &PointResult) -> String {
        let mut id = point.decoder.label().to_string();
        if let Some(l) = point.decoder.list_size() {
            id.push_str(&format!("_L{l}"));
        }
        if let Some(o) = point.decoder.omega() {
            id.push_str(&format!("_w{o}"));
        }
        id.push_str(&format!("_{}dB", point.ebn0_db));
        id
    }

    /// Share of the information bits decided by the rate-1 tail shortcut.
    pub fn k1_fraction(&self) -> f64 {
        self.k1 as f64 / self.k as f64
    }
}

fn into_string(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}
