//! Simulation configuration (JSON) and its validation.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::construction::{ga_code, ReliabilityProfile, MAX_N};
use crate::crc::CrcConfig;
use crate::decoders::{CounterMode, ML_MAX_K, OMEGA_INF};
use crate::formats::{CodeFile, FormatError};
use crate::polar::PolarCode;

pub const DEFAULT_MIN_BLOCK_ERRORS: u64 = 100;
pub const DEFAULT_MAX_TRIALS: u64 = 1_000_000;
pub const DEFAULT_BATCH_SIZE: u64 = 1000;

/// A configuration problem, located by a JSON path such as
/// `decoders[2].omega`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}: {msg}")]
pub struct ConfigError {
    pub path: String,
    pub msg: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub code: CodeSpec,
    pub decoders: Vec<DecoderSpec>,
    pub ebn0_db: Vec<f64>,
    #[serde(default)]
    pub stopping: Stopping,
    pub seed: u64,
    /// Transmit the all-zero word instead of random information words.
    #[serde(default)]
    pub all_zero: bool,
    #[serde(default)]
    pub counter_mode: CounterMode,
    /// Used by `crc-scl` decoders.
    #[serde(default)]
    pub crc: CrcConfig,
    /// Trials per parallel batch. Adaptive stopping is checked between
    /// batches, so this is part of what makes a run reproducible.
    #[serde(default = "default_batch_size")]
    pub batch_size: u64,
}

fn default_batch_size() -> u64 {
    DEFAULT_BATCH_SIZE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CodeSpec {
    /// GA construction; `rate_for_sigma` defaults to `K/N`.
    Construct {
        n: u32,
        k: usize,
        design_ebn0_db: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rate_for_sigma: Option<f64>,
    },
    /// Code file, relative paths resolved against the config's directory.
    File(PathBuf),
}

/// A decoder and its parameters. On disk this is a flat object with a
/// `kind` and, as the kind requires, `list_size` and `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDecoder", into = "RawDecoder")]
pub enum DecoderSpec {
    Sc,
    Scl { list_size: usize },
    SrScl { list_size: usize, omega: Omega },
    EsrScl { list_size: usize, omega: Omega },
    CrcScl { list_size: usize },
    Ml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum DecoderKind {
    Sc,
    Scl,
    SrScl,
    EsrScl,
    CrcScl,
    Ml,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDecoder {
    kind: DecoderKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    list_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<Omega>,
}

impl TryFrom<RawDecoder> for DecoderSpec {
    type Error = String;

    fn try_from(r: RawDecoder) -> Result<Self, String> {
        let need_list = matches!(
            r.kind,
            DecoderKind::Scl | DecoderKind::SrScl | DecoderKind::EsrScl | DecoderKind::CrcScl
        );
        let need_omega = matches!(r.kind, DecoderKind::SrScl | DecoderKind::EsrScl);
        let label = serde_json::to_value(r.kind).expect("kind serialises");
        let label = label.as_str().unwrap_or_default();
        match (need_list, r.list_size) {
            (true, None) => return Err(format!("list_size is required for {label}")),
            (false, Some(_)) => return Err(format!("list_size does not apply to {label}")),
            _ => {}
        }
        match (need_omega, r.omega) {
            (true, None) => return Err(format!("omega is required for {label}")),
            (false, Some(_)) => return Err(format!("omega does not apply to {label}")),
            _ => {}
        }
        let list_size = r.list_size.unwrap_or(1);
        let omega = r.omega.unwrap_or(Omega::INF);
        Ok(match r.kind {
            DecoderKind::Sc => Self::Sc,
            DecoderKind::Scl => Self::Scl { list_size },
            DecoderKind::SrScl => Self::SrScl { list_size, omega },
            DecoderKind::EsrScl => Self::EsrScl { list_size, omega },
            DecoderKind::CrcScl => Self::CrcScl { list_size },
            DecoderKind::Ml => Self::Ml,
        })
    }
}

impl From<DecoderSpec> for RawDecoder {
    fn from(d: DecoderSpec) -> Self {
        let kind = match d {
            DecoderSpec::Sc => DecoderKind::Sc,
            DecoderSpec::Scl { .. } => DecoderKind::Scl,
            DecoderSpec::SrScl { .. } => DecoderKind::SrScl,
            DecoderSpec::EsrScl { .. } => DecoderKind::EsrScl,
            DecoderSpec::CrcScl { .. } => DecoderKind::CrcScl,
            DecoderSpec::Ml => DecoderKind::Ml,
        };
        let list_size = match d {
            DecoderSpec::Sc | DecoderSpec::Ml => None,
            _ => d.list_size(),
        };
        Self {
            kind,
            list_size,
            omega: d.omega(),
        }
    }
}

impl DecoderSpec {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Sc => "sc",
            Self::Scl { .. } => "scl",
            Self::SrScl { .. } => "sr-scl",
            Self::EsrScl { .. } => "esr-scl",
            Self::CrcScl { .. } => "crc-scl",
            Self::Ml => "ml",
        }
    }

    /// 1 for SC, `None` for ML.
    pub fn list_size(&self) -> Option<usize> {
        match *self {
            Self::Sc => Some(1),
            Self::Scl { list_size }
            | Self::SrScl { list_size, .. }
            | Self::EsrScl { list_size, .. }
            | Self::CrcScl { list_size } => Some(list_size),
            Self::Ml => None,
        }
    }

    pub fn omega(&self) -> Option<Omega> {
        match *self {
            Self::SrScl { omega, .. } | Self::EsrScl { omega, .. } => Some(omega),
            _ => None,
        }
    }

    pub fn uses_crc(&self) -> bool {
        matches!(self, Self::CrcScl { .. })
    }

    /// Whether the decoder needs reliability thresholds.
    pub fn uses_profile(&self) -> bool {
        self.omega().is_some()
    }
}

/// Counter threshold: an integer or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Omega(pub u32);

impl Omega {
    pub const INF: Omega = Omega(OMEGA_INF);
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == OMEGA_INF {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Omega {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == OMEGA_INF {
            s.serialize_str("inf")
        } else {
            s.serialize_u32(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Omega {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Omega;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Omega, E> {
                u32::try_from(v)
                    .ok()
                    .filter(|&w| w != OMEGA_INF)
                    .map(Omega)
                    .ok_or_else(|| E::custom("omega too large; use \"inf\""))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Omega, E> {
                u64::try_from(v)
                    .map_err(|_| E::custom("omega must be non-negative"))
                    .and_then(|v| self.visit_u64(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Omega, E> {
                match v {
                    "inf" => Ok(Omega::INF),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Fixed `trials`, or run until `min_block_errors` (default 100) block
/// errors or `max_trials` (default 10^6) trials, whichever comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stopping {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_block_errors: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_trials: Option<u64>,
}

impl Stopping {
    pub fn fixed(trials: u64) -> Self {
        Self {
            trials: Some(trials),
            ..Self::default()
        }
    }

    pub fn adaptive(min_block_errors: u64, max_trials: u64) -> Self {
        Self {
            trials: None,
            min_block_errors: Some(min_block_errors),
            max_trials: Some(max_trials),
        }
    }

    pub fn max_trials(&self) -> u64 {
        self.trials.or(self.max_trials).unwrap_or(DEFAULT_MAX_TRIALS)
    }

    /// Block errors after which a decoder stops, if any.
    pub fn error_target(&self) -> Option<u64> {
        match self.trials {
            Some(_) => None,
            None => Some(self.min_block_errors.unwrap_or(DEFAULT_MIN_BLOCK_ERRORS)),
        }
    }
}

/// The code a simulation runs on.
#[derive(Debug, Clone)]
pub struct ResolvedCode {
    pub code: PolarCode,
    pub design_ebn0_db: Option<f64>,
    /// Profile the frozen set was selected from, for GA constructions.
    pub design_profile: Option<ReliabilityProfile>,
}

impl SimConfig {
    /// Parses and validates. Errors carry the JSON path of the bad field.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ConfigError::new(path, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let k = match &self.code {
            CodeSpec::Construct {
                n,
                k,
                design_ebn0_db,
                rate_for_sigma,
            } => {
                if *n > MAX_N {
                    return Err(ConfigError::new("code.construct.n", format!("must be at most {MAX_N}")));
                }
                if *k == 0 || *k > 1usize << n {
                    return Err(ConfigError::new("code.construct.k", "must lie in 1..=2^n"));
                }
                if !design_ebn0_db.is_finite() {
                    return Err(ConfigError::new("code.construct.design_ebn0_db", "must be finite"));
                }
                if let Some(r) = rate_for_sigma {
                    if !(*r > 0.0 && *r <= 1.0) {
                        return Err(ConfigError::new("code.construct.rate_for_sigma", "must lie in (0, 1]"));
                    }
                }
                Some(*k)
            }
            CodeSpec::File(_) => None,
        };
        if self.decoders.is_empty() {
            return Err(ConfigError::new("decoders", "must not be empty"));
        }
        for (j, d) in self.decoders.iter().enumerate() {
            if d.list_size() == Some(0) {
                return Err(ConfigError::new(format!("decoders[{j}].list_size"), "must be at least 1"));
            }
            if let (DecoderSpec::Ml, Some(k)) = (d, k) {
                if k > ML_MAX_K {
                    return Err(ConfigError::new(
                        format!("decoders[{j}].kind"),
                        format!("ml needs K <= {ML_MAX_K}, code has K = {k}"),
                    ));
                }
            }
            if let (true, Some(k)) = (d.uses_crc(), k) {
                if k <= self.crc.degree as usize {
                    return Err(ConfigError::new(
                        format!("decoders[{j}].kind"),
                        format!("crc-scl needs K > {} (the CRC degree)", self.crc.degree),
                    ));
                }
            }
        }
        if self.decoders.iter().any(DecoderSpec::uses_crc) {
            self.crc.validate().map_err(|e| ConfigError::new("crc", e.to_string()))?;
        }
        if self.ebn0_db.is_empty() {
            return Err(ConfigError::new("ebn0_db", "must not be empty"));
        }
        for (j, v) in self.ebn0_db.iter().enumerate() {
            if !v.is_finite() {
                return Err(ConfigError::new(format!("ebn0_db[{j}]"), "must be finite"));
            }
        }
        let s = &self.stopping;
        if s.trials.is_some() && (s.min_block_errors.is_some() || s.max_trials.is_some()) {
            return Err(ConfigError::new(
                "stopping",
                "give either trials or min_block_errors/max_trials, not both",
            ));
        }
        if s.trials == Some(0) {
            return Err(ConfigError::new("stopping.trials", "must be at least 1"));
        }
        if s.max_trials == Some(0) {
            return Err(ConfigError::new("stopping.max_trials", "must be at least 1"));
        }
        if s.min_block_errors == Some(0) {
            return Err(ConfigError::new("stopping.min_block_errors", "must be at least 1"));
        }
        if self.batch_size == 0 {
            return Err(ConfigError::new("batch_size", "must be at least 1"));
        }
        Ok(())
    }

    /// Builds or loads the code. `base` is the directory relative code file
    /// paths are resolved against.
    pub fn resolve_code(&self, base: &Path) -> Result<ResolvedCode, ConfigError> {
        let resolved = match &self.code {
            CodeSpec::Construct {
                n,
                k,
                design_ebn0_db,
                rate_for_sigma,
            } => {
                let rate = rate_for_sigma.unwrap_or(*k as f64 / (1usize << n) as f64);
                let (code, profile) = ga_code(*n, *k, *design_ebn0_db, rate)
                    .map_err(|e| ConfigError::new("code.construct", e.to_string()))?;
                ResolvedCode {
                    code,
                    design_ebn0_db: Some(*design_ebn0_db),
                    design_profile: Some(profile),
                }
            }
            CodeSpec::File(path) => {
                let full = base.join(path);
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| ConfigError::new("code.file", format!("{}: {e}", full.display())))?;
                let file = CodeFile::parse(&text).map_err(|e: FormatError| ConfigError::new("code.file", e.to_string()))?;
                let code = file.to_code().map_err(|e| ConfigError::new("code.file", e.to_string()))?;
                ResolvedCode {
                    code,
                    design_ebn0_db: file.construction.map(|c| c.design_ebn0_db),
                    design_profile: None,
                }
            }
        };
        let k = resolved.code.dimension();
        for (j, d) in self.decoders.iter().enumerate() {
            if matches!(d, DecoderSpec::Ml) && k > ML_MAX_K {
                return Err(ConfigError::new(
                    format!("decoders[{j}].kind"),
                    format!("ml needs K <= {ML_MAX_K}, code has K = {k}"),
                ));
            }
            if d.uses_crc() && k <= self.crc.degree as usize {
                return Err(ConfigError::new(
                    format!("decoders[{j}].kind"),
                    format!("crc-scl needs K > {} (the CRC degree)", self.crc.degree),
                ));
            }
        }
        Ok(resolved)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"{
        "code": {"construct": {"n": 8, "k": 128, "design_ebn0_db": 2.0}},
        "decoders": [
            {"kind": "scl", "list_size": 8},
            {"kind": "esr-scl", "list_size": 8, "omega": 45},
            {"kind": "sr-scl", "list_size": 8, "omega": "inf"},
            {"kind": "crc-scl", "list_size": 8}
        ],
        "ebn0_db": [1.0, 2.0],
        "stopping": {"trials": 100},
        "seed": 7
    }"#;

    #[test]
    fn parses_with_defaults() {
        let cfg = SimConfig::from_json(BASIC).unwrap();
        assert_eq!(cfg.decoders[1].omega(), Some(Omega(45)));
        assert_eq!(cfg.decoders[2].omega(), Some(Omega::INF));
        assert_eq!(cfg.crc, CrcConfig::default());
        assert_eq!(cfg.counter_mode, CounterMode::UnfrozenOnly);
        assert_eq!(cfg.batch_size, DEFAULT_BATCH_SIZE);
        assert_eq!(cfg.stopping.error_target(), None);
        assert_eq!(SimConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn default_stopping_is_adaptive() {
        let cfg = SimConfig::from_json(&BASIC.replace(r#""stopping": {"trials": 100},"#, "")).unwrap();
        assert_eq!(cfg.stopping.error_target(), Some(DEFAULT_MIN_BLOCK_ERRORS));
        assert_eq!(cfg.stopping.max_trials(), DEFAULT_MAX_TRIALS);
    }

    fn err(text: &str) -> ConfigError {
        SimConfig::from_json(text).unwrap_err()
    }

    #[test]
    fn errors_name_the_field() {
        assert_eq!(err(&BASIC.replace(r#""trials": 100"#, r#""trials": 0"#)).path, "stopping.trials");
        assert_eq!(err(&BASIC.replace(r#""omega": 45"#, r#""omega": -1"#)).path, "decoders[1].omega");
        assert_eq!(err(&BASIC.replace(r#""omega": 45"#, r#""omega": "lots""#)).path, "decoders[1].omega");
        assert_eq!(err(&BASIC.replace(r#""list_size": 8}"#, r#""list_size": 0}"#)).path, "decoders[0].list_size");
        assert_eq!(err(&BASIC.replace("[1.0, 2.0]", "[]")).path, "ebn0_db");
        assert_eq!(err(&BASIC.replace(r#""seed": 7"#, r#""seed": 7, "sed": 1"#)).path, "sed");
        assert_eq!(err(&BASIC.replace("\"scl\"", "\"fancy\"")).path, "decoders[0].kind");
        let e = err(&BASIC.replace(r#", "omega": 45"#, ""));
        assert_eq!(e.path, "decoders[1]");
        assert!(e.msg.contains("omega is required for esr-scl"), "{e}");
        assert_eq!(err(&BASIC.replace("\"k\": 128", "\"k\": 0")).path, "code.construct.k");
        assert_eq!(
            err(&BASIC.replace(r#"{"kind": "scl", "list_size": 8}"#, r#"{"kind": "ml"}"#)).path,
            "decoders[0].kind"
        );
    }

    #[test]
    fn resolves_constructed_code() {
        let cfg = SimConfig::from_json(BASIC).unwrap();
        let r = cfg.resolve_code(Path::new(".")).unwrap();
        assert_eq!(r.code.len(), 256);
        assert_eq!(r.code.dimension(), 128);
        assert_eq!(r.design_ebn0_db, Some(2.0));
    }
}
