//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary (`harness = false`) and exits non-zero if any criterion fails.

mod common;

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use common::*;
use rand::Rng;
use rand_distr::StandardNormal;
use srscl::construction::{
    ga_code, predicted_no_split_correct, predicted_no_split_error, q_inv, select_frozen_set, TAU_CAP,
};
use srscl::crc::{crc_append, crc_check, CrcConfig};
use srscl::decoders::*;
use srscl::polar::{bit_reversal_permutation, compute_k1, encode, inverse_transform, PolarCode};
use srscl::simulator::{pooled_z, PointResult, SimConfig, Simulation, SweepResult};

// Pinned tolerances.
/// Standard errors allowed between Monte Carlo and closed forms.
const MC_SIGMAS: f64 = 3.0;
/// Pooled standard errors allowed for "no worse than" comparisons.
const POOLED_SIGMAS: f64 = 2.0;
/// Largest allowed BLER ratio between ESR-SCL (ω = 60) and SCL.
const BLER_FACTOR: f64 = 2.0;
/// Floating-point slack for closed-form kernel values.
const KERNEL_EPS: f64 = 1e-9;

type Criterion = (&'static str, &'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1", "degeneracy equivalences", ac1_degeneracies),
        ("AC2", "rate-1 tail SC equals tail ML", ac2_tail_ml),
        ("AC3", "exhaustive list equals ML", ac3_list_saturation),
        ("AC4", "K1 golden values", ac4_k1),
        ("AC5", "no-split error/correct probabilities", ac5_prop2),
        ("AC6", "SCL list stays full", ac6_scl_paths),
        ("AC7", "ESR-SCL path-count reduction", ac7_complexity),
        ("AC8", "BLER ordering at 2 dB", ac8_bler_ordering),
        ("AC9", "ESR-SCL no worse than SR-SCL", ac9_esr_vs_sr),
        ("AC10", "kernel golden vectors", ac10_kernels),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let v = check();
        let status = if v.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!v.pass);
        println!("{id} {status} {name} [{:.1}s]: {}", start.elapsed().as_secs_f64(), v.detail);
        std::io::stdout().flush().ok();
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

/// The GA (256,128) code with `u_N` frozen in place of the best frozen bit,
/// so that `K1 = 0`.
fn k1_zero_code() -> PolarCode {
    let (code, profile) = ga256();
    let mut mask = code.frozen_mask().to_vec();
    mask[255] = true;
    let best_frozen = (0..256)
        .filter(|&i| code.is_frozen(i))
        .max_by(|&a, &b| profile.means[a].total_cmp(&profile.means[b]))
        .unwrap();
    mask[best_frozen] = false;
    PolarCode::new(mask).unwrap()
}

fn ac1_degeneracies() -> Verdict {
    // Under the rule "0 if L > τ, 1 if L < −τ, split otherwise", τ ≡ 0 never
    // splits (SC) and τ ≡ TAU_CAP always splits (SCL).
    let (code, _) = ga256();
    let zero_tail = k1_zero_code();
    let sigma2 = sigma2_at(&code, 2.0);
    let all_split = vec![TAU_CAP; 256];
    let no_split = vec![0.0; 256];
    let (_, profile) = ga_code(8, 128, 2.0, 0.5).unwrap();
    let mut mismatches = [0u32; 5];
    for t in 0..1000 {
        let tr = trial(&code, sigma2, 101, t);
        let sc = sc_decode(&tr.llr, &code).unwrap();
        let scl1 = scl_decode(&tr.llr, &code, 1).unwrap();
        mismatches[0] += u32::from(scl1.u_hat != sc.u_hat);
        let scl8 = scl_decode(&tr.llr, &code, 8).unwrap();
        let sr_all = ListDecoder::split_reduced(&code, &all_split, 8, OMEGA_INF).decode(&tr.llr).unwrap();
        mismatches[1] += u32::from(sr_all != scl8);
        let sr_none = ListDecoder::split_reduced(&code, &no_split, 8, OMEGA_INF).decode(&tr.llr).unwrap();
        mismatches[2] += u32::from(sr_none.u_hat != sc.u_hat);
        let sr_none_w = ListDecoder::split_reduced(&code, &no_split, 8, 5).decode(&tr.llr).unwrap();
        mismatches[3] += u32::from(sr_none_w.u_hat != sc.u_hat);

        let tr0 = trial(&zero_tail, sigma2, 102, t);
        let sr = sr_scl_decode(&tr0.llr, &zero_tail, &profile, 8, 20).unwrap();
        let esr = esr_scl_decode(&tr0.llr, &zero_tail, &profile, 8, 20).unwrap();
        mismatches[4] += u32::from(sr != esr);
    }
    verdict(
        mismatches.iter().all(|&m| m == 0) && zero_tail.k1() == 0,
        format!(
            "1000 trials at 2 dB; mismatches scl(L=1)/sc {}, sr(τ≡TAU_CAP,ω=∞)/scl(L=8) {}, sr(τ≡0,ω=∞)/sc {}, sr(τ≡0,ω=5)/sc {}, esr/sr on K1=0 code {}",
            mismatches[0], mismatches[1], mismatches[2], mismatches[3], mismatches[4]
        ),
    )
}

/// Tail of the best completion of `u[..head]` by correlation, enumerated in
/// Gray-code order over the generator rows of the tail positions.
fn ml_tail_fast(u: &[u8], head: usize, llr: &[f64]) -> Vec<u8> {
    let len = u.len();
    let tail = len - head;
    let mut base = u[..head].to_vec();
    base.resize(len, 0);
    let mut c = encode(&base).unwrap();
    let rows: Vec<Vec<u8>> = (head..len)
        .map(|p| {
            let mut e = vec![0u8; len];
            e[p] = 1;
            encode(&e).unwrap()
        })
        .collect();
    let mut word = 0u64;
    let mut best = (correlation(&c, llr), 0u64);
    for step in 1u64..1 << tail {
        let bit = step.trailing_zeros() as usize;
        word ^= 1 << bit;
        for (x, r) in c.iter_mut().zip(&rows[bit]) {
            *x ^= r;
        }
        let corr = correlation(&c, llr);
        if corr > best.0 {
            best = (corr, word);
        }
    }
    (0..tail).map(|j| ((best.1 >> j) & 1) as u8).collect()
}

fn ac2_tail_ml() -> Verdict {
    let mut r = rng(202);
    let mut codes = vec![fig3()];
    while codes.len() < 21 {
        let n = r.random_range(3..=5u32);
        let run = r.random_range(2..=(1usize << n).min(15));
        codes.push(random_code(n, run, &mut r));
    }
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    let mut k1s = Vec::new();
    for (j, code) in codes.iter().enumerate() {
        let head = code.len() - code.k1();
        k1s.push(code.k1());
        for t in 0..10_000 {
            let tr = trial(code, 0.8, 300 + j as u64, t);
            let genie = sc_decode_genie(&tr.llr, code, &tr.u, head).unwrap();
            let ml = ml_tail_fast(&tr.u, head, &tr.llr);
            checked += 1;
            mismatches += u64::from(genie.u_hat[head..] != ml[..]);
        }
    }
    verdict(
        mismatches == 0 && k1s.iter().all(|&k| k >= 2),
        format!("{} codes (N ≤ 32, K1 ∈ {:?}), {checked} trials, {mismatches} mismatches", codes.len(), {
            let mut s = k1s.clone();
            s.sort_unstable();
            s.dedup();
            s
        }),
    )
}

fn ac3_list_saturation() -> Verdict {
    let code = fig3();
    let mut mismatches = 0;
    for t in 0..10_000 {
        let tr = trial(&code, 0.5, 303, t);
        let scl = scl_decode(&tr.llr, &code, 16).unwrap();
        let ml = ml_decode(&tr.llr, &code).unwrap();
        mismatches += u32::from(scl.codeword != ml.codeword);
    }
    verdict(mismatches == 0, format!("(8,4) code, L = 16, 10000 trials, {mismatches} mismatches"))
}

fn ac4_k1() -> Verdict {
    let fig = compute_k1(fig3().frozen_mask());
    let grid = [1.0, 1.5, 2.0, 2.5, 3.0];
    let k1s: Vec<usize> = grid
        .iter()
        .map(|&e| ga_code(8, 128, e, 0.5).unwrap().0.k1())
        .collect();
    let listing: Vec<String> = grid.iter().zip(&k1s).map(|(e, k)| format!("{e} dB → {k}")).collect();
    verdict(
        fig == 2 && k1s.contains(&32),
        format!("(8,4) code K1 = {fig}; (256,128) GA K1: {} (K1/K = {:.0}% at 32)", listing.join(", "), 100.0 * 32.0 / 128.0),
    )
}

fn ac5_prop2() -> Verdict {
    const SAMPLES: u64 = 10_000_000;
    let pes = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut ok = true;
    let mut err_ratio = Vec::new();
    let mut correct = Vec::new();
    let mut worst_z = 0.0f64;
    for (j, &pe) in pes.iter().enumerate() {
        let e = predicted_no_split_error(pe).unwrap();
        let c = predicted_no_split_correct(pe).unwrap();
        err_ratio.push(e / pe);
        correct.push(c);
        // L ~ N(μ, 2μ) with μ = 2t², t = Q⁻¹(pe).
        let t = q_inv(pe).unwrap();
        let mu = 2.0 * t * t;
        let sd = (2.0 * mu).sqrt();
        let tau = (1.0 / pe - 1.0).ln();
        let mut g = rng(505 + j as u64);
        let (mut below, mut above) = (0u64, 0u64);
        for _ in 0..SAMPLES {
            let l = mu + sd * g.sample::<f64, _>(StandardNormal);
            below += u64::from(l < -tau);
            above += u64::from(l > tau);
        }
        let n = SAMPLES as f64;
        for (p, k) in [(e, below), (c, above)] {
            let se = (p * (1.0 - p) / n).sqrt().max(1.0 / n);
            let z = (k as f64 / n - p).abs() / se;
            worst_z = worst_z.max(z);
            ok &= z <= MC_SIGMAS;
        }
    }
    ok &= err_ratio.windows(2).all(|w| w[1] < w[0]) && err_ratio[3] < 1e-2;
    ok &= correct.windows(2).all(|w| w[1] > w[0]) && correct[3] > 0.99;
    verdict(
        ok,
        format!(
            "P'e/Pe = {}, P'r = {}; worst Monte Carlo deviation {worst_z:.2} SE ({SAMPLES} samples per pe)",
            err_ratio.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join("/"),
            correct.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join("/"),
        ),
    )
}

fn ac6_scl_paths() -> Verdict {
    let (code, _) = ga256();
    let sigma2 = sigma2_at(&code, 2.0);
    let third_unfrozen = code.info_positions()[2];
    let mut violations = 0;
    for t in 0..1000 {
        let tr = trial(&code, sigma2, 606, t);
        let out = ListDecoder::scl(&code, 8).decode_list(&tr.llr, Some(&tr.u), true).unwrap();
        for s in &out.trace.unwrap().stages {
            let full = s.i > third_unfrozen;
            if full && s.paths_after_prune != 8 {
                violations += 1;
            }
        }
    }
    verdict(
        violations == 0,
        format!("1000 trials, list full from stage {} on, {violations} stages with != 8 paths", third_unfrozen + 1),
    )
}

fn sweep(decoders: &str, ebn0: &str, stopping: &str, seed: u64) -> SweepResult {
    let cfg = SimConfig::from_json(&format!(
        r#"{{"code": {{"construct": {{"n": 8, "k": 128, "design_ebn0_db": 2.0}}}},
            "decoders": [{decoders}], "ebn0_db": [{ebn0}], "stopping": {stopping}, "seed": {seed}}}"#
    ))
    .unwrap();
    Simulation::new(cfg, Path::new(".")).unwrap().run_sweep().unwrap()
}

fn find<'a>(r: &'a SweepResult, label: &str, omega: Option<&str>, ebn0: f64) -> &'a PointResult {
    r.points
        .iter()
        .find(|p| {
            p.decoder.label() == label
                && p.decoder.omega().map(|o| o.to_string()).as_deref() == omega
                && p.ebn0_db == ebn0
        })
        .unwrap()
}

fn ac7_complexity() -> Verdict {
    let omegas = ["5", "20", "45", "60"];
    let decoders: Vec<String> = omegas
        .iter()
        .map(|w| format!(r#"{{"kind": "esr-scl", "list_size": 8, "omega": {w}}}"#))
        .collect();
    let r = sweep(&decoders.join(","), "2, 3", r#"{"trials": 2000}"#, 707);
    let mut ok = true;
    let mut parts = Vec::new();
    for w in omegas {
        let a = &find(&r, "esr-scl", Some(w), 2.0).stats;
        let b = &find(&r, "esr-scl", Some(w), 3.0).stats;
        let (ma, ca) = (a.avg_paths_mean().unwrap(), a.avg_paths_ci95().unwrap());
        let (mb, cb) = (b.avg_paths_mean().unwrap(), b.avg_paths_ci95().unwrap());
        let bound = if w == "5" || w == "20" { 4.0 } else { 8.0 };
        ok &= ma + ca < bound;
        ok &= mb + cb < ma - ca;
        parts.push(format!("ω={w}: {ma:.3}±{ca:.3} → {mb:.3}±{cb:.3} (< {bound})"));
    }
    verdict(ok, format!("2000 trials, 2 dB → 3 dB; {}", parts.join("; ")))
}

fn ac8_bler_ordering() -> Verdict {
    let r = sweep(
        r#"{"kind": "scl", "list_size": 8},
           {"kind": "esr-scl", "list_size": 8, "omega": 20},
           {"kind": "esr-scl", "list_size": 8, "omega": 45},
           {"kind": "esr-scl", "list_size": 8, "omega": 60},
           {"kind": "crc-scl", "list_size": 8}"#,
        "2",
        r#"{"min_block_errors": 300, "max_trials": 1000000}"#,
        808,
    );
    let scl = &find(&r, "scl", None, 2.0).stats;
    let w20 = &find(&r, "esr-scl", Some("20"), 2.0).stats;
    let w45 = &find(&r, "esr-scl", Some("45"), 2.0).stats;
    let w60 = &find(&r, "esr-scl", Some("60"), 2.0).stats;
    let crc = &find(&r, "crc-scl", None, 2.0).stats;
    let z60_45 = pooled_z(w60, w45);
    let z45_20 = pooled_z(w45, w20);
    let factor = w60.bler() / scl.bler();
    let z_crc = pooled_z(crc, scl);
    let ok = z60_45 <= POOLED_SIGMAS
        && z45_20 <= POOLED_SIGMAS
        && (1.0 / BLER_FACTOR..=BLER_FACTOR).contains(&factor)
        && z_crc < -POOLED_SIGMAS;
    let fmt = |s: &srscl::simulator::PointStats| format!("{:.4e} ({}/{})", s.bler(), s.block_errors, s.trials);
    verdict(
        ok,
        format!(
            "BLER scl {}, ω=20 {}, ω=45 {}, ω=60 {}, crc-scl {}; z(60−45) {z60_45:.2}, z(45−20) {z45_20:.2}, ω=60/scl {factor:.2}, z(crc−scl) {z_crc:.2}",
            fmt(scl),
            fmt(w20),
            fmt(w45),
            fmt(w60),
            fmt(crc)
        ),
    )
}

fn ac9_esr_vs_sr() -> Verdict {
    let r = sweep(
        r#"{"kind": "sr-scl", "list_size": 8, "omega": 20},
           {"kind": "esr-scl", "list_size": 8, "omega": 20},
           {"kind": "sr-scl", "list_size": 8, "omega": 45},
           {"kind": "esr-scl", "list_size": 8, "omega": 45}"#,
        "2, 3",
        r#"{"min_block_errors": 100, "max_trials": 400000}"#,
        909,
    );
    let mut ok = true;
    let mut parts = Vec::new();
    for e in [2.0, 3.0] {
        for w in ["20", "45"] {
            let sr = &find(&r, "sr-scl", Some(w), e).stats;
            let esr = &find(&r, "esr-scl", Some(w), e).stats;
            let z = pooled_z(esr, sr);
            ok &= z <= POOLED_SIGMAS;
            parts.push(format!(
                "{e} dB ω={w}: esr {:.3e} vs sr {:.3e} (z {z:.2})",
                esr.bler(),
                sr.bler()
            ));
        }
    }
    verdict(ok, parts.join("; "))
}

fn ac10_kernels() -> Verdict {
    let mut fails: Vec<&str> = Vec::new();
    let mut check = |ok: bool, what: &'static str| {
        if !ok {
            fails.push(what);
        }
    };
    check(boxplus(0.0, 5.0) == 0.0, "boxplus(0,5)");
    check((boxplus(TAU_CAP, 1.7) - 1.7).abs() < KERNEL_EPS, "boxplus(cap,b)");
    let direct = ((1.0 + 5f64.exp()) / (2f64.exp() + 3f64.exp())).ln();
    check((boxplus(2.0, 3.0) - direct).abs() < 1e-12, "boxplus(2,3)");
    let ln2 = 2f64.ln();
    check((path_metric_update(-1.0, 0.0, 0) - (-1.0 - ln2)).abs() < 1e-15, "metric llr=0 bit 0");
    check((path_metric_update(-1.0, 0.0, 1) - (-1.0 - ln2)).abs() < 1e-15, "metric llr=0 bit 1");
    check((path_metric_update(-1.0, 1e3, 0) + 1.0).abs() < KERNEL_EPS, "metric large llr");
    check(
        (path_metric_update(0.0, 2.0, 1) + (1.0 + 2f64.exp()).ln()).abs() < 1e-12,
        "metric bit 1 llr 2",
    );
    check(encode(&[0, 1]).unwrap() == [1, 1], "encode N=2");
    check(encode(&[0; 8]).unwrap() == [0; 8], "encode zero");
    check(encode(&[0, 0, 0, 1]).unwrap() == [1, 1, 1, 1], "encode N=4");
    let u = [1, 0, 1, 1, 0, 0, 1, 0];
    check(inverse_transform(&encode(&u).unwrap()).unwrap() == u, "inverse(encode)");
    check(inverse_transform(&[1, 1]).unwrap() == [0, 1], "inverse N=2");
    check(bit_reversal_permutation(1) == [0, 1], "bitrev n=1");
    check(bit_reversal_permutation(2) == [0, 2, 1, 3], "bitrev n=2");
    check(bit_reversal_permutation(3) == [0, 4, 2, 6, 1, 5, 3, 7], "bitrev n=3");
    check(llr_recurse(&[0.7, -1.2], Some(&[0])) == [0.7 - 1.2], "llr_recurse u=0");
    check(llr_recurse(&[0.7, -1.2], Some(&[1])) == [-1.2 - 0.7], "llr_recurse u=1");
    let cfg = CrcConfig::default();
    check(cfg.poly == 0x80_0063, "crc poly");
    check(crc_append(&[0; 24], &cfg)[24..] == [0; 24], "crc zero payload");
    // Long division of x^23 · x^24 by g(x).
    let mut payload = vec![0u8; 24];
    payload[0] = 1;
    let mut reg: Vec<u8> = payload.iter().copied().chain(std::iter::repeat_n(0, 24)).collect();
    let g: Vec<u8> = (0..=24).rev().map(|j| u8::from(j == 24 || (0x80_0063u64 >> j) & 1 == 1)).collect();
    for i in 0..24 {
        if reg[i] == 1 {
            for (r, &gb) in reg[i..i + 25].iter_mut().zip(&g) {
                *r ^= gb;
            }
        }
    }
    let frame = crc_append(&payload, &cfg);
    check(frame[24..] == reg[24..], "crc long division");
    check(crc_check(&frame, &cfg).unwrap(), "crc check valid");
    check(
        (0..frame.len()).all(|i| {
            let mut f = frame.clone();
            f[i] ^= 1;
            !crc_check(&f, &cfg).unwrap()
        }),
        "crc single errors",
    );
    check(compute_k1(&[true, true, true, true, false, false, false, false]) == 4, "k1 run 4");
    check(select_frozen_set(&[1.0, 3.0, 2.0, 4.0], 2).unwrap() == [true, false, true, false], "frozen set");
    let n = fails.len();
    verdict(n == 0, if n == 0 { "all golden vectors match".to_string() } else { format!("failed: {fails:?}") })
}
