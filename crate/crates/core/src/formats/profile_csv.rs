use serde::{Deserialize, Serialize};

use super::FormatError;
use crate::construction::ReliabilityProfile;

#[derive(Serialize, Deserialize)]
struct Row {
    index: usize,
    mean: f64,
    pe: f64,
    tau: f64,
}

/// CSV with columns `index,mean,pe,tau`, one row per bit, 1-based.
pub fn write_profile_csv(profile: &ReliabilityProfile) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for i in 0..profile.len() {
        w.serialize(Row {
            index: i + 1,
            mean: profile.means[i],
            pe: profile.pe[i],
            tau: profile.tau[i],
        })
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

/// Reads a profile written by [`write_profile_csv`]. Rows must be in index
/// order and their count a power of two.
pub fn parse_profile_csv(text: &str) -> Result<ReliabilityProfile, FormatError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut profile = ReliabilityProfile {
        means: Vec::new(),
        pe: Vec::new(),
        tau: Vec::new(),
        design_sigma2: None,
    };
    for (j, row) in r.deserialize::<Row>().enumerate() {
        let row = row?;
        let field = |name: &str| format!("row {} {name}", j + 1);
        if row.index != j + 1 {
            return Err(FormatError::invalid(field("index"), format!("expected {}", j + 1)));
        }
        if !(row.mean.is_finite() && row.mean >= 0.0) {
            return Err(FormatError::invalid(field("mean"), "must be finite and non-negative"));
        }
        if !(row.pe > 0.0 && row.pe <= 0.5) {
            return Err(FormatError::invalid(field("pe"), "must lie in (0, 0.5]"));
        }
        if !(row.tau.is_finite() && row.tau >= 0.0) {
            return Err(FormatError::invalid(field("tau"), "must be finite and non-negative"));
        }
        profile.means.push(row.mean);
        profile.pe.push(row.pe);
        profile.tau.push(row.tau);
    }
    if !profile.len().is_power_of_two() {
        return Err(FormatError::invalid("rows", format!("{} is not a power of two", profile.len())));
    }
    Ok(profile)
}
