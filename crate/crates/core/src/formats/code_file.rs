use serde::{Deserialize, Serialize};

use super::FormatError;
use crate::construction::MAX_N;
use crate::polar::PolarCode;

/// How a code was built. Informational; the frozen set is authoritative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionInfo {
    pub method: String,
    pub design_ebn0_db: f64,
    pub rate_for_sigma: f64,
}

/// On-disk form of a [`PolarCode`]. `K1` is derived and never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub n: u32,
    #[serde(rename = "N")]
    pub len: usize,
    #[serde(rename = "K")]
    pub k: usize,
    /// 1-based, ascending.
    pub frozen_indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionInfo>,
}

impl CodeFile {
    pub fn from_code(code: &PolarCode, construction: Option<ConstructionInfo>) -> Self {
        Self {
            n: code.n(),
            len: code.len(),
            k: code.dimension(),
            frozen_indices: code.frozen_indices(),
            construction,
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: Self = serde_path_to_error::deserialize(de).map_err(|e| FormatError::Json {
            path: e.path().to_string(),
            msg: e.inner().to_string(),
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("code file serialises");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        if self.n > MAX_N {
            return Err(FormatError::invalid("n", format!("must be at most {MAX_N}")));
        }
        let len = 1usize << self.n;
        if self.len != len {
            return Err(FormatError::invalid("N", format!("must equal 2^n = {len}")));
        }
        if self.frozen_indices.len() > len {
            return Err(FormatError::invalid("frozen_indices", "more entries than N"));
        }
        if self.k != len - self.frozen_indices.len() {
            return Err(FormatError::invalid(
                "K",
                format!("must equal N minus the number of frozen indices ({})", len - self.frozen_indices.len()),
            ));
        }
        for (j, &idx) in self.frozen_indices.iter().enumerate() {
            if idx == 0 || idx > len {
                return Err(FormatError::invalid(format!("frozen_indices[{j}]"), format!("{idx} is outside 1..={len}")));
            }
            if j > 0 && idx <= self.frozen_indices[j - 1] {
                return Err(FormatError::invalid(format!("frozen_indices[{j}]"), "indices must be strictly ascending"));
            }
        }
        if let Some(c) = &self.construction {
            if c.method != "GA" {
                return Err(FormatError::invalid("construction.method", "only \"GA\" is known"));
            }
            if !c.design_ebn0_db.is_finite() {
                return Err(FormatError::invalid("construction.design_ebn0_db", "must be finite"));
            }
            if !(c.rate_for_sigma > 0.0 && c.rate_for_sigma <= 1.0) {
                return Err(FormatError::invalid("construction.rate_for_sigma", "must lie in (0, 1]"));
            }
        }
        Ok(())
    }

    pub fn to_code(&self) -> Result<PolarCode, FormatError> {
        self.validate()?;
        Ok(PolarCode::from_frozen_indices(self.n, &self.frozen_indices)?)
    }
}
