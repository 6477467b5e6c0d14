#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srscl::channel::{ebn0_to_sigma2, transmit, trial_rng};
use srscl::construction::{ga_code, ReliabilityProfile};
use srscl::polar::PolarCode;

/// The (8,4) example code with frozen set {1,2,3,5}.
pub fn fig3() -> PolarCode {
    PolarCode::from_frozen_indices(3, &[1, 2, 3, 5]).unwrap()
}

/// The (256,128) GA code designed at 2 dB.
pub fn ga256() -> (PolarCode, ReliabilityProfile) {
    ga_code(8, 128, 2.0, 0.5).unwrap()
}

pub struct Trial {
    pub u: Vec<u8>,
    pub llr: Vec<f64>,
}

/// A random information word sent at `sigma2`, reproducible from `(seed, t)`.
pub fn trial(code: &PolarCode, sigma2: f64, seed: u64, t: u64) -> Trial {
    let mut rng = trial_rng(seed, t);
    let info: Vec<u8> = (0..code.dimension()).map(|_| u8::from(rng.random::<bool>())).collect();
    let u = code.embed(&info).unwrap();
    let c = code.encode_info(&info).unwrap();
    let llr = transmit(&c, sigma2, &mut rng).unwrap().llr;
    Trial { u, llr }
}

pub fn sigma2_at(code: &PolarCode, ebn0_db: f64) -> f64 {
    ebn0_to_sigma2(ebn0_db, code.dimension() as f64 / code.len() as f64).unwrap()
}

/// A random code of length `2^n` whose trailing unfrozen run is exactly
/// `run` (so `K1` is the largest power of two not above it).
pub fn random_code(n: u32, run: usize, rng: &mut ChaCha8Rng) -> PolarCode {
    let len = 1usize << n;
    let mut mask: Vec<bool> = (0..len).map(|_| rng.random::<bool>()).collect();
    for m in &mut mask[len - run..] {
        *m = false;
    }
    if run < len {
        mask[len - run - 1] = true;
    }
    PolarCode::new(mask).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Best completion of `head` over all `2^(N − head.len())` tails by
/// correlation with `llr`, ignoring the frozen set.
pub fn ml_tail(head: &[u8], llr: &[f64]) -> Vec<u8> {
    let len = llr.len();
    let tail = len - head.len();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for w in 0..1u64 << tail {
        let mut u = head.to_vec();
        u.extend((0..tail).map(|j| ((w >> (tail - 1 - j)) & 1) as u8));
        let c = srscl::polar::encode(&u).unwrap();
        let corr = srscl::decoders::correlation(&c, llr);
        if corr > best.0 {
            best = (corr, u);
        }
    }
    best.1
}
