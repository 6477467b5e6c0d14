//! List decoding engine behind SCL, split-reduced SCL and its enhanced
//! variant.
//!
//! Per-path LLR and partial-sum arrays are reference counted; a split only
//! clones pointers and an array is reallocated the first time a shared copy
//! is written.

use std::cmp::Ordering;
use std::rc::Rc;

use super::kernels::{check_llrs, correlation, hard, path_metric_update, variable_llrs};
use super::trace::{DecodeTrace, StageRecord};
use super::{check_llr_len, CounterMode, DecodeResult, OMEGA_INF};
use crate::polar::{bit_reverse_in_place, butterfly_in_place, encode, PolarCode};
use crate::{Error, Result};

/// When a path splits at an unfrozen bit.
#[derive(Debug, Clone, Copy)]
pub enum Splitting<'a> {
    /// Every unfrozen bit splits.
    Always,
    /// Decide 0 if `L > τ_i`, 1 if `L < −τ_i`, split otherwise.
    Thresholds(&'a [f64]),
}

/// A completed path.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub u_hat: Vec<u8>,
    pub codeword: Vec<u8>,
    pub log_metric: f64,
    pub correlation: f64,
    pub counter: u32,
    /// Creation order; the root path is 0.
    pub seq: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ListOutcome {
    pub candidates: Vec<Candidate>,
    pub trace: Option<DecodeTrace>,
}

impl ListOutcome {
    pub fn best(&self) -> &Candidate {
        best_by_correlation(&self.candidates).expect("list decoding never empties the list")
    }
}

/// Largest correlation; ties go to the larger metric, then the older path.
pub(crate) fn best_by_correlation(candidates: &[Candidate]) -> Option<&Candidate> {
    candidates.iter().max_by(|a, b| {
        a.correlation
            .total_cmp(&b.correlation)
            .then(a.log_metric.total_cmp(&b.log_metric))
            .then(b.seq.cmp(&a.seq))
    })
}

#[derive(Debug, Clone)]
pub struct ListDecoder<'a> {
    code: &'a PolarCode,
    list_size: usize,
    splitting: Splitting<'a>,
    omega: u32,
    counter_mode: CounterMode,
    rate1_tail: bool,
}

impl<'a> ListDecoder<'a> {
    pub fn scl(code: &'a PolarCode, list_size: usize) -> Self {
        Self {
            code,
            list_size,
            splitting: Splitting::Always,
            omega: OMEGA_INF,
            counter_mode: CounterMode::UnfrozenOnly,
            rate1_tail: false,
        }
    }

    pub fn split_reduced(code: &'a PolarCode, tau: &'a [f64], list_size: usize, omega: u32) -> Self {
        Self {
            splitting: Splitting::Thresholds(tau),
            omega,
            ..Self::scl(code, list_size)
        }
    }

    pub fn enhanced(code: &'a PolarCode, tau: &'a [f64], list_size: usize, omega: u32) -> Self {
        Self {
            rate1_tail: true,
            ..Self::split_reduced(code, tau, list_size, omega)
        }
    }

    pub fn with_counter_mode(mut self, mode: CounterMode) -> Self {
        self.counter_mode = mode;
        self
    }

    pub fn with_rate1_tail(mut self, on: bool) -> Self {
        self.rate1_tail = on;
        self
    }

    pub fn code(&self) -> &PolarCode {
        self.code
    }

    /// Decodes and returns the best candidate by correlation.
    pub fn decode(&self, llrs: &[f64]) -> Result<DecodeResult> {
        self.decode_with(llrs, None, false)
    }

    /// Like [`decode`](Self::decode), optionally tracking the transmitted
    /// `u` and recording a per-stage trace.
    pub fn decode_with(&self, llrs: &[f64], truth: Option<&[u8]>, trace: bool) -> Result<DecodeResult> {
        let outcome = self.decode_list(llrs, truth, trace)?;
        let best = outcome.best();
        Ok(DecodeResult {
            info_bits: self.code.extract(&best.u_hat),
            u_hat: best.u_hat.clone(),
            codeword: best.codeword.clone(),
            selected_metric: best.correlation,
            trace: outcome.trace,
            crc_fallback: false,
        })
    }

    /// Runs the list decoder and returns every surviving candidate.
    pub fn decode_list(&self, llrs: &[f64], truth: Option<&[u8]>, want_trace: bool) -> Result<ListOutcome> {
        let code = self.code;
        check_llr_len(llrs, code)?;
        if self.list_size == 0 {
            return Err(Error::ZeroListSize);
        }
        if let Splitting::Thresholds(tau) = self.splitting {
            if tau.len() != code.len() {
                return Err(Error::LengthMismatch {
                    expected: code.len(),
                    got: tau.len(),
                });
            }
        }
        if let Some(t) = truth {
            if t.len() != code.len() {
                return Err(Error::LengthMismatch {
                    expected: code.len(),
                    got: t.len(),
                });
            }
        }

        let len = code.len();
        let n = code.n() as usize;
        let head = if self.rate1_tail { len - code.k1() } else { len };

        let mut root = llrs.to_vec();
        bit_reverse_in_place(&mut root);
        let mut paths = vec![Path::root(Rc::new(root), n, truth.is_some())];
        let mut next_seq = 1u64;
        let mut trace = want_trace.then(|| DecodeTrace {
            correct_path_pruned: truth.map(|_| false),
            ..DecodeTrace::default()
        });

        for i in 0..head {
            let frozen = code.is_frozen(i);
            let mut next = Vec::with_capacity(2 * paths.len());
            let mut splits = 0u32;
            let mut correct_split = false;
            for mut p in paths {
                let llr = p.leaf_llr(i, n);
                let decision = if frozen {
                    Some(0)
                } else {
                    match self.splitting {
                        Splitting::Always => None,
                        Splitting::Thresholds(tau) => {
                            if llr > tau[i] {
                                Some(0)
                            } else if llr < -tau[i] {
                                Some(1)
                            } else {
                                None
                            }
                        }
                    }
                };
                match decision {
                    Some(bit) => {
                        p.decide(i, bit, llr, truth);
                        if !frozen || self.counter_mode == CounterMode::AllStages {
                            p.counter = p.counter.saturating_add(1);
                        }
                        next.push(p);
                    }
                    None => {
                        splits += 1;
                        if p.correct {
                            correct_split = true;
                        } else if let (Some(tr), Some(_)) = (trace.as_mut(), truth) {
                            tr.incorrect_split_gaps.push(p.counter);
                        }
                        let mut one = p.clone();
                        let mut zero = p;
                        zero.seq = next_seq;
                        one.seq = next_seq + 1;
                        next_seq += 2;
                        zero.counter = 0;
                        one.counter = 0;
                        zero.decide(i, 0, llr, truth);
                        one.decide(i, 1, llr, truth);
                        next.push(zero);
                        next.push(one);
                    }
                }
            }

            let before = next.len();
            let correct_before = next.iter().any(|p| p.correct);
            let mut fired = false;
            let pruned = before > self.list_size;
            if pruned {
                fired = prune(&mut next, self.list_size, self.omega);
            }
            paths = next;
            if i + 1 < len {
                for p in &mut paths {
                    p.propagate(i, n);
                }
            }

            if let Some(tr) = trace.as_mut() {
                let correct = paths.iter().find(|p| p.correct);
                if truth.is_some() && correct_before && correct.is_none() {
                    tr.correct_path_pruned = Some(true);
                }
                tr.stages.push(StageRecord {
                    i: i + 1,
                    splits,
                    paths_before_prune: before as u32,
                    paths_after_prune: paths.len() as u32,
                    counter_prune_fired: fired,
                    correct_path_alive: truth.map(|_| correct.is_some()),
                    frozen,
                    pruned,
                    correct_path_split: correct_split,
                    correct_path_counter: correct.map(|p| p.counter),
                });
            }
        }

        if let (Some(tr), Some(_)) = (trace.as_mut(), truth) {
            tr.incorrect_censored = paths.iter().filter(|p| !p.correct).count() as u32;
        }

        if head < len {
            for p in &mut paths {
                p.rate1_tail(head, n);
            }
            if let Some(tr) = trace.as_mut() {
                for i in head..len {
                    let alive = truth.map(|t| paths.iter().any(|p| p.u[..=i] == t[..=i]));
                    tr.stages.push(StageRecord {
                        i: i + 1,
                        splits: 0,
                        paths_before_prune: paths.len() as u32,
                        paths_after_prune: paths.len() as u32,
                        counter_prune_fired: false,
                        correct_path_alive: alive,
                        frozen: false,
                        pruned: false,
                        correct_path_split: false,
                        correct_path_counter: None,
                    });
                }
            }
        }

        let candidates = paths
            .into_iter()
            .map(|p| {
                let codeword = encode(&p.u).expect("power-of-two length");
                Candidate {
                    correlation: correlation(&codeword, llrs),
                    codeword,
                    u_hat: p.u,
                    log_metric: p.log_metric,
                    counter: p.counter,
                    seq: p.seq,
                }
            })
            .collect();
        Ok(ListOutcome { candidates, trace })
    }
}

/// Keeps at most `list_size` paths. Paths whose counter reached `omega`
/// take precedence over all others. Returns whether that rule fired.
fn prune(paths: &mut Vec<Path>, list_size: usize, omega: u32) -> bool {
    let fired = paths.iter().any(|p| p.counter >= omega);
    if fired {
        paths.retain(|p| p.counter >= omega);
    }
    if paths.len() > list_size {
        paths.sort_by(rank);
        paths.truncate(list_size);
    }
    fired
}

/// Better metric first, then larger counter, then older path.
fn rank(a: &Path, b: &Path) -> Ordering {
    b.log_metric
        .total_cmp(&a.log_metric)
        .then(b.counter.cmp(&a.counter))
        .then(a.seq.cmp(&b.seq))
}

#[derive(Clone)]
struct Path {
    /// LLRs of the active node at each depth; depth 0 is the (shared)
    /// bit-reversed channel vector.
    alpha: Vec<Rc<Vec<f64>>>,
    /// Codeword of the finished left child at each depth.
    beta: Vec<Rc<Vec<u8>>>,
    u: Vec<u8>,
    log_metric: f64,
    counter: u32,
    seq: u64,
    /// Decisions so far agree with the transmitted word.
    correct: bool,
}

fn writable<T: Clone + Default>(slot: &mut Rc<Vec<T>>, len: usize) -> &mut Vec<T> {
    if Rc::get_mut(slot).is_none() {
        *slot = Rc::new(vec![T::default(); len]);
    }
    Rc::get_mut(slot).expect("slot was just made unique")
}

impl Path {
    fn root(channel: Rc<Vec<f64>>, n: usize, track_truth: bool) -> Self {
        let len = channel.len();
        let mut alpha = vec![channel];
        let mut beta = vec![Rc::new(Vec::new())];
        for d in 1..=n {
            alpha.push(Rc::new(vec![0.0; len >> d]));
            beta.push(Rc::new(vec![0u8; len >> d]));
        }
        Self {
            alpha,
            beta,
            u: vec![0; len],
            log_metric: 0.0,
            counter: 0,
            seq: 0,
            correct: track_truth,
        }
    }

    /// Fills the LLRs from the deepest still-valid ancestor of leaf `i` down
    /// to `stop_depth`.
    fn descend(&mut self, i: usize, n: usize, stop_depth: usize) {
        let len = self.u.len();
        let start = if i == 0 { 1 } else { n - i.trailing_zeros() as usize };
        for d in start..=stop_depth {
            let (upper, lower) = self.alpha.split_at_mut(d);
            let child = writable(&mut lower[0], len >> d);
            if d == start && i != 0 {
                variable_llrs(&upper[d - 1], &self.beta[d], child);
            } else {
                check_llrs(&upper[d - 1], child);
            }
        }
    }

    fn leaf_llr(&mut self, i: usize, n: usize) -> f64 {
        self.descend(i, n, n);
        self.alpha[n][0]
    }

    fn decide(&mut self, i: usize, bit: u8, llr: f64, truth: Option<&[u8]>) {
        self.u[i] = bit;
        self.log_metric = path_metric_update(self.log_metric, llr, bit);
        if let Some(t) = truth {
            self.correct &= t[i] == bit;
        }
    }

    /// Pushes the decision for leaf `i` up through every ancestor it
    /// completes, storing the first left-child codeword it reaches.
    fn propagate(&mut self, i: usize, n: usize) {
        let mut cur = vec![self.u[i]];
        let mut d = n;
        while d > 0 && (i >> (n - d)) & 1 == 1 {
            let mut merged: Vec<u8> = self.beta[d].iter().zip(&cur).map(|(a, b)| a ^ b).collect();
            merged.extend_from_slice(&cur);
            cur = merged;
            d -= 1;
        }
        if d > 0 {
            self.beta[d] = Rc::new(cur);
        }
    }

    /// Decides bits `first..N`, which form the right-most all-unfrozen node,
    /// by a hard decision on that node's LLRs and an inverse transform.
    fn rate1_tail(&mut self, first: usize, n: usize) {
        let depth = if first == 0 { 0 } else { n - first.trailing_zeros() as usize };
        if depth > 0 {
            self.descend(first, n, depth);
        }
        let mut bits: Vec<u8> = self.alpha[depth].iter().map(|&l| hard(l)).collect();
        butterfly_in_place(&mut bits);
        self.u[first..].copy_from_slice(&bits);
    }
}
