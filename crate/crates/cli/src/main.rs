//! `srscl`: polar code construction, coding and Monte Carlo simulation.
//!
//! Exit status is 0 on success, 2 when a configuration or input file is
//! invalid, 1 for any other failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use srscl::channel::{ebn0_to_sigma2, transmit, trial_rng};
use srscl::construction::{ga_code, ReliabilityProfile};
use srscl::crc::CrcConfig;
use srscl::decoders::{
    crc_aided_select, ml_decode, sc_decode, CounterMode, DecodeResult, ListDecoder, ML_MAX_K, OMEGA_INF,
};
use srscl::formats::{
    parse_bits, parse_llrs, parse_profile_csv, write_bits, write_llrs, write_profile_csv, CodeFile,
    ConstructionInfo, FormatError,
};
use srscl::polar::PolarCode;
use srscl::simulator::{
    conjecture_diagnostics, zero_mean_leaves, ConfigError, ConjectureParams, SimConfig, Simulation, SweepResult,
};

const EXIT_RUNTIME: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "srscl", version, about = "Polar codes with split-reduced SCL decoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code by Gaussian approximation at a design Eb/N0.
    Construct(ConstructArgs),
    /// Encode information bits, optionally sending them over an AWGN channel.
    Encode(EncodeArgs),
    /// Decode one block of channel LLRs.
    Decode(DecodeArgs),
    /// Run a Monte Carlo simulation described by a JSON config.
    Simulate(SimulateArgs),
    /// Same as `simulate`.
    Sweep(SimulateArgs),
    /// Statistics behind the counter-pruning and rate-1 tail arguments.
    #[command(subcommand)]
    Diagnose(Diagnose),
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: usize,
    #[arg(long, allow_hyphen_values = true)]
    design_ebn0_db: f64,
    /// Rate used to convert Eb/N0 to σ²; defaults to K/N.
    #[arg(long)]
    rate_for_sigma: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    code: PathBuf,
    /// K information bits.
    #[arg(long)]
    bits_in: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Also write channel LLRs at this Eb/N0.
    #[arg(long, allow_hyphen_values = true)]
    ebn0_db: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecoderKind {
    Sc,
    Scl,
    SrScl,
    EsrScl,
    CrcScl,
    Ml,
}

impl DecoderKind {
    fn label(self) -> &'static str {
        match self {
            Self::Sc => "sc",
            Self::Scl => "scl",
            Self::SrScl => "sr-scl",
            Self::EsrScl => "esr-scl",
            Self::CrcScl => "crc-scl",
            Self::Ml => "ml",
        }
    }
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    llrs_in: PathBuf,
    #[arg(long, value_enum)]
    decoder: DecoderKind,
    #[arg(long, default_value_t = 8)]
    list_size: usize,
    /// Counter threshold: an integer or `inf`.
    #[arg(long, default_value = "inf", value_parser = parse_omega)]
    omega: u32,
    /// Profile CSV with the splitting thresholds (sr-scl, esr-scl).
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Count every non-splitting stage, frozen ones included.
    #[arg(long)]
    count_frozen: bool,
    /// Write per-stage trace records as JSON lines.
    #[arg(long)]
    trace: bool,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Diagnose {
    /// How long the correct and incorrect paths go without splitting.
    Conjecture(ConjectureArgs),
    /// Leaves of a rate-1 block whose LLR mean vanishes after left-half errors.
    ZeroMean(ZeroMeanArgs),
}

#[derive(Args)]
struct ConjectureArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long, default_value_t = 8)]
    list_size: usize,
    #[arg(long, default_value = "inf", value_parser = parse_omega)]
    omega: u32,
    #[arg(long, allow_hyphen_values = true)]
    ebn0_db: f64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    count_frozen: bool,
    #[arg(long)]
    all_zero: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ZeroMeanArgs {
    #[arg(long)]
    n: u32,
    /// Ones in the left half's codeword.
    #[arg(long)]
    errors: usize,
    #[arg(long, allow_hyphen_values = true)]
    ebn0_db: f64,
    #[arg(long, default_value_t = 20_000)]
    realizations: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_omega(s: &str) -> Result<u32, String> {
    if s == "inf" {
        return Ok(OMEGA_INF);
    }
    match s.parse::<u32>() {
        Ok(w) if w != OMEGA_INF => Ok(w),
        _ => Err(format!("expected a non-negative integer or `inf`, got `{s}`")),
    }
}

/// An error in what the user supplied rather than in running it.
#[derive(Debug)]
struct Invalid(String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Invalid(msg.into()).into()
}

fn is_config_error(e: &anyhow::Error) -> bool {
    e.chain()
        .any(|c| c.is::<Invalid>() || c.is::<ConfigError>() || c.is::<FormatError>() || c.is::<srscl::Error>())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_config_error(&e) { EXIT_CONFIG } else { EXIT_RUNTIME })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Construct(a) => construct(&a),
        Command::Encode(a) => encode_cmd(&a),
        Command::Decode(a) => decode_cmd(&a),
        Command::Simulate(a) => simulate(&a, "simulate"),
        Command::Sweep(a) => simulate(&a, "sweep"),
        Command::Diagnose(Diagnose::Conjecture(a)) => conjecture(&a),
        Command::Diagnose(Diagnose::ZeroMean(a)) => zero_mean(&a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_manifest(dir: &Path, command: &str, body: Value) -> Result<()> {
    let mut manifest = json!({
        "tool": "srscl",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
    });
    if let (Value::Object(m), Value::Object(b)) = (&mut manifest, body) {
        m.extend(b);
    }
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    write(dir, "manifest.json", &text)
}

fn omega_json(w: u32) -> Value {
    if w == OMEGA_INF {
        json!("inf")
    } else {
        json!(w)
    }
}

fn load_code(path: &Path) -> Result<(CodeFile, PolarCode)> {
    let file = CodeFile::parse(&read(path)?).with_context(|| format!("code file {}", path.display()))?;
    let code = file.to_code()?;
    Ok((file, code))
}

fn construct(a: &ConstructArgs) -> Result<()> {
    if a.n > srscl::construction::MAX_N {
        return Err(invalid(format!("--n must be at most {}", srscl::construction::MAX_N)));
    }
    let len = 1usize << a.n;
    if a.k == 0 || a.k > len {
        return Err(invalid(format!("--k must be in 1..={len}")));
    }
    let rate = a.rate_for_sigma.unwrap_or(a.k as f64 / len as f64);
    let (code, profile) = ga_code(a.n, a.k, a.design_ebn0_db, rate)?;
    let info = ConstructionInfo {
        method: "GA".into(),
        design_ebn0_db: a.design_ebn0_db,
        rate_for_sigma: rate,
    };
    let file = CodeFile::from_code(&code, Some(info));
    write(&a.out, "code.json", &file.to_json())?;
    write(&a.out, "profile.csv", &write_profile_csv(&profile))?;
    write_manifest(
        &a.out,
        "construct",
        json!({
            "n": a.n,
            "K": a.k,
            "design_ebn0_db": a.design_ebn0_db,
            "rate_for_sigma": rate,
            "design_sigma2": profile.design_sigma2,
            "N": code.len(),
            "k1": code.k1(),
            "outputs": ["code.json", "profile.csv"],
        }),
    )?;
    println!("N = {}, K = {}, K1 = {}", code.len(), code.dimension(), code.k1());
    Ok(())
}

fn encode_cmd(a: &EncodeArgs) -> Result<()> {
    let (file, code) = load_code(&a.code)?;
    let info = parse_bits(&read(&a.bits_in)?).with_context(|| format!("bits file {}", a.bits_in.display()))?;
    if info.len() != code.dimension() {
        return Err(invalid(format!("expected {} information bits, got {}", code.dimension(), info.len())));
    }
    let codeword = code.encode_info(&info)?;
    write(&a.out, "codeword.txt", &write_bits(&codeword))?;
    let mut outputs = vec!["codeword.txt"];
    let mut channel = Value::Null;
    if let Some(ebn0) = a.ebn0_db {
        let sigma2 = ebn0_to_sigma2(ebn0, code.dimension() as f64 / code.len() as f64)?;
        let rx = transmit(&codeword, sigma2, &mut trial_rng(a.seed, 0))?;
        write(&a.out, "llrs.txt", &write_llrs(&rx.llr))?;
        outputs.push("llrs.txt");
        channel = json!({ "ebn0_db": ebn0, "sigma2": sigma2, "seed": a.seed });
    }
    write_manifest(
        &a.out,
        "encode",
        json!({
            "code": file,
            "info_bits": write_bits(&info).trim(),
            "channel": channel,
            "outputs": outputs,
        }),
    )
}

fn load_profile(path: Option<&Path>, kind: DecoderKind, len: usize) -> Result<ReliabilityProfile> {
    let Some(path) = path else {
        return Err(invalid(format!("decoder {} needs split thresholds; pass --profile", kind.label())));
    };
    let profile =
        parse_profile_csv(&read(path)?).with_context(|| format!("profile {}", path.display()))?;
    if profile.len() != len {
        return Err(invalid(format!("profile has {} rows but the code has N = {len}", profile.len())));
    }
    Ok(profile)
}

fn decode_cmd(a: &DecodeArgs) -> Result<()> {
    let (file, code) = load_code(&a.code)?;
    let llrs = parse_llrs(&read(&a.llrs_in)?).with_context(|| format!("LLR file {}", a.llrs_in.display()))?;
    if llrs.len() != code.len() {
        return Err(invalid(format!("expected {} LLRs, got {}", code.len(), llrs.len())));
    }
    if a.decoder == DecoderKind::Ml && code.dimension() > ML_MAX_K {
        return Err(invalid(format!(
            "ml enumerates 2^K codewords and is limited to K <= {ML_MAX_K}; this code has K = {}",
            code.dimension()
        )));
    }
    let mode = if a.count_frozen {
        CounterMode::AllStages
    } else {
        CounterMode::UnfrozenOnly
    };
    let crc = CrcConfig::default();
    let profile = match a.decoder {
        DecoderKind::SrScl | DecoderKind::EsrScl => Some(load_profile(a.profile.as_deref(), a.decoder, code.len())?),
        _ => None,
    };
    let result: DecodeResult = match a.decoder {
        DecoderKind::Sc => sc_decode(&llrs, &code)?,
        DecoderKind::Ml => ml_decode(&llrs, &code)?,
        DecoderKind::Scl => ListDecoder::scl(&code, a.list_size).decode_with(&llrs, None, a.trace)?,
        DecoderKind::SrScl => {
            let tau = &profile.as_ref().expect("loaded above").tau;
            ListDecoder::split_reduced(&code, tau, a.list_size, a.omega)
                .with_counter_mode(mode)
                .decode_with(&llrs, None, a.trace)?
        }
        DecoderKind::EsrScl => {
            let tau = &profile.as_ref().expect("loaded above").tau;
            ListDecoder::enhanced(&code, tau, a.list_size, a.omega)
                .with_counter_mode(mode)
                .decode_with(&llrs, None, a.trace)?
        }
        DecoderKind::CrcScl => {
            let outcome = ListDecoder::scl(&code, a.list_size).decode_list(&llrs, None, a.trace)?;
            let mut r = crc_aided_select(&outcome.candidates, &code, &crc)?;
            r.trace = outcome.trace;
            r
        }
    };

    let bits = |b: &[u8]| write_bits(b).trim().to_string();
    let mut decoded = json!({
        "u_hat": bits(&result.u_hat),
        "info_bits": bits(&result.info_bits),
        "codeword": bits(&result.codeword),
        "metric": result.selected_metric,
    });
    if a.decoder == DecoderKind::CrcScl {
        decoded["crc_fallback"] = json!(result.crc_fallback);
    }
    write(&a.out, "decoded.json", &format!("{}\n", serde_json::to_string_pretty(&decoded)?))?;
    write(&a.out, "u_hat.txt", &write_bits(&result.u_hat))?;
    write(&a.out, "codeword.txt", &write_bits(&result.codeword))?;
    let mut outputs = vec!["decoded.json", "u_hat.txt", "codeword.txt"];
    if let Some(trace) = result.trace.as_ref().filter(|_| a.trace) {
        write(&a.out, "trace.jsonl", &trace.to_json_lines())?;
        outputs.push("trace.jsonl");
    }
    let list = !matches!(a.decoder, DecoderKind::Sc | DecoderKind::Ml);
    let split = matches!(a.decoder, DecoderKind::SrScl | DecoderKind::EsrScl);
    write_manifest(
        &a.out,
        "decode",
        json!({
            "code": file,
            "decoder": a.decoder.label(),
            "list_size": if list { json!(a.list_size) } else { Value::Null },
            "omega": if split { omega_json(a.omega) } else { Value::Null },
            "count_frozen": a.count_frozen,
            "profile_csv": profile.as_ref().map(write_profile_csv),
            "crc": if a.decoder == DecoderKind::CrcScl { json!(crc) } else { Value::Null },
            "llrs": llrs,
            "outputs": outputs,
        }),
    )?;
    println!("{}", bits(&result.info_bits));
    Ok(())
}

fn simulate(a: &SimulateArgs, command: &str) -> Result<()> {
    let text = read(&a.config)?;
    let config = SimConfig::from_json(&text).with_context(|| format!("config {}", a.config.display()))?;
    let base = a.config.parent().unwrap_or(Path::new("."));
    let sim = Simulation::new(config, base).with_context(|| format!("config {}", a.config.display()))?;
    let file = CodeFile::from_code(&sim.code.code, None);
    let result = sim.run_sweep()?;

    write(&a.out, "results.csv", &result.results_csv())?;
    let mut stage_files = Vec::new();
    for p in &result.points {
        let name = format!("stages/{}.csv", SweepResult::point_id(p));
        write(&a.out, &name, &result.stage_csv(p))?;
        stage_files.push(name);
    }
    let config: Value = serde_json::from_str(&sim.config.to_json())?;
    write_manifest(
        &a.out,
        command,
        json!({
            "config": config,
            "seed": sim.config.seed,
            "code": file,
            "k1": result.k1,
            "outputs": { "results": "results.csv", "stages": stage_files },
        }),
    )?;

    println!(
        "N = {}, K = {}, K1 = {} ({:.1}% of K)",
        result.len,
        result.k,
        result.k1,
        100.0 * result.k1_fraction()
    );
    for p in &result.points {
        let s = &p.stats;
        let paths = s.avg_paths_mean().map_or_else(|| "-".to_string(), |m| format!("{m:.3}"));
        println!(
            "{:<28} trials {:>8}  errors {:>6}  BLER {:.3e}  avg paths {paths}",
            SweepResult::point_id(p),
            s.trials,
            s.block_errors,
            s.bler()
        );
    }
    Ok(())
}

fn conjecture(a: &ConjectureArgs) -> Result<()> {
    let (file, code) = load_code(&a.code)?;
    let params = ConjectureParams {
        list_size: a.list_size,
        omega: a.omega,
        ebn0_db: a.ebn0_db,
        trials: a.trials,
        seed: a.seed,
        counter_mode: if a.count_frozen {
            CounterMode::AllStages
        } else {
            CounterMode::UnfrozenOnly
        },
        all_zero: a.all_zero,
    };
    let r = conjecture_diagnostics(&code, &params)?;
    let report = json!({
        "trials": r.trials,
        "reached_omega": r.reached_omega,
        "held_after_omega": r.held_after_omega,
        "held_fraction": r.held_fraction(),
        "incorrect_split_fraction": r.incorrect_split_fraction(),
        "gap_histogram": r.gap_histogram,
        "censored": r.censored,
    });
    write(&a.out, "conjecture.json", &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
    write_manifest(
        &a.out,
        "diagnose conjecture",
        json!({
            "code": file,
            "list_size": a.list_size,
            "omega": omega_json(a.omega),
            "ebn0_db": a.ebn0_db,
            "trials": a.trials,
            "seed": a.seed,
            "count_frozen": a.count_frozen,
            "all_zero": a.all_zero,
            "outputs": ["conjecture.json"],
        }),
    )?;
    match r.held_fraction() {
        Some(f) => println!("correct path held after omega in {f:.4} of {} trials", r.reached_omega),
        None => println!("correct path never reached omega"),
    }
    Ok(())
}

fn zero_mean(a: &ZeroMeanArgs) -> Result<()> {
    if a.n == 0 {
        return Err(invalid("--n must be at least 1"));
    }
    let sigma2 = ebn0_to_sigma2(a.ebn0_db, 1.0)?;
    let r = zero_mean_leaves(a.n, a.errors, sigma2, a.realizations, a.seed)?;
    let report = json!({
        "errors": r.errors,
        "realizations": r.realizations,
        "means": r.means,
        "std_errors": r.std_errors,
        "zero_mean_leaves": r.zero_mean_leaves,
    });
    write(&a.out, "zero_mean.json", &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
    write_manifest(
        &a.out,
        "diagnose zero-mean",
        json!({
            "n": a.n,
            "errors": a.errors,
            "ebn0_db": a.ebn0_db,
            "sigma2": sigma2,
            "realizations": a.realizations,
            "seed": a.seed,
            "outputs": ["zero_mean.json"],
        }),
    )?;
    println!("{} of {} right-half leaves have zero mean", r.zero_mean_leaves, r.means.len());
    Ok(())
}
