//! Domain types shared by every stage of the pipeline, and the dBm/mW
//! conversions.
//!
//! Levels travel through the crate in dBm, the unit a receiver in zero-span
//! sample-detector mode reports. Whenever a "linear" average is needed it is
//! taken over power in milliwatts, never over voltage.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A power level in dBm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LevelDbm(pub f64);

/// A strictly positive power in milliwatts.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct PowerMw(f64);

impl LevelDbm {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn offset(self, db: f64) -> LevelDbm {
        LevelDbm(self.0 + db)
    }
}

impl fmt::Display for LevelDbm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} dBm", self.0)
    }
}

impl PowerMw {
    pub fn new(mw: f64) -> Result<Self> {
        if mw.is_finite() && mw > 0.0 {
            Ok(PowerMw(mw))
        } else {
            Err(Error::Domain(format!(
                "power must be finite and > 0 mW, got {mw}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn dbm_to_mw(level: LevelDbm) -> Result<PowerMw> {
    if !level.0.is_finite() {
        return Err(Error::InvalidSample(level.0));
    }
    PowerMw::new(10f64.powf(level.0 / 10.0))
}

pub fn mw_to_dbm(power: PowerMw) -> LevelDbm {
    LevelDbm(10.0 * power.0.log10())
}

/// Power-domain mean of a set of dBm levels, expressed back in dBm.
///
/// Powers are referenced to the largest level before summation so that very
/// low or very high levels neither underflow nor overflow. Returns `None` for
/// an empty slice.
pub fn power_mean_dbm(levels: &[f64]) -> Option<f64> {
    let peak = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if levels.is_empty() || !peak.is_finite() {
        return None;
    }
    let sum: f64 = levels.iter().map(|&v| 10f64.powf((v - peak) / 10.0)).sum();
    Some(peak + 10.0 * (sum / levels.len() as f64).log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RecordKind {
    /// Background measurement taken with the source of interest switched off.
    Wgn,
    /// Measurement taken while the source is operating.
    #[default]
    In,
}

impl RecordKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Wgn => "WGN",
            RecordKind::In => "IN",
        }
    }
}

impl std::str::FromStr for RecordKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "WGN" => Ok(RecordKind::Wgn),
            "IN" => Ok(RecordKind::In),
            other => Err(format!(
                "unknown record kind {other:?} (expected WGN or IN)"
            )),
        }
    }
}

/// Scenario description attached to every record.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MeasurementMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency_khz: Option<f64>,
    #[serde(default)]
    pub event: String,
    #[serde(default)]
    pub location: String,
    #[serde(default)]
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub started_at: Option<String>,
}

/// A time series of receiver level samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub id: String,
    /// Level samples in dBm, in acquisition order.
    pub levels: Vec<f64>,
    pub sample_rate_hz: f64,
    pub kind: RecordKind,
    pub meta: MeasurementMeta,
}

impl SampleRecord {
    pub fn new(
        id: impl Into<String>,
        levels: Vec<f64>,
        sample_rate_hz: f64,
        kind: RecordKind,
    ) -> Self {
        SampleRecord {
            id: id.into(),
            levels,
            sample_rate_hz,
            kind,
            meta: MeasurementMeta::default(),
        }
    }

    pub fn with_meta(mut self, meta: MeasurementMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Sample period in milliseconds.
    pub fn period_ms(&self) -> f64 {
        1000.0 / self.sample_rate_hz
    }

    pub fn duration_ms(&self) -> f64 {
        self.levels.len() as f64 * self.period_ms()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RecordIssue {
    Empty,
    NonPositiveSampleRate(f64),
    NonFiniteSample { index: usize, value: f64 },
    NonPositiveFrequency(f64),
}

impl fmt::Display for RecordIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordIssue::Empty => f.write_str("empty record"),
            RecordIssue::NonPositiveSampleRate(r) => {
                write!(f, "sample rate must be > 0 Hz, got {r}")
            }
            RecordIssue::NonFiniteSample { index, value } => {
                write!(f, "non-finite sample {value} at index {index}")
            }
            RecordIssue::NonPositiveFrequency(fr) => {
                write!(f, "frequency must be > 0 kHz, got {fr}")
            }
        }
    }
}

/// A record whose invariants have been checked.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedRecord(SampleRecord);

impl ValidatedRecord {
    pub fn into_inner(self) -> SampleRecord {
        self.0
    }
}

impl Deref for ValidatedRecord {
    type Target = SampleRecord;

    fn deref(&self) -> &SampleRecord {
        &self.0
    }
}

/// Checks every record invariant and reports all violations at once.
pub fn validate_record(
    record: SampleRecord,
) -> std::result::Result<ValidatedRecord, Vec<RecordIssue>> {
    let mut issues = Vec::new();
    if record.levels.is_empty() {
        issues.push(RecordIssue::Empty);
    }
    if !(record.sample_rate_hz.is_finite() && record.sample_rate_hz > 0.0) {
        issues.push(RecordIssue::NonPositiveSampleRate(record.sample_rate_hz));
    }
    if let Some(fr) = record.meta.frequency_khz {
        if !(fr.is_finite() && fr > 0.0) {
            issues.push(RecordIssue::NonPositiveFrequency(fr));
        }
    }
    issues.extend(
        record
            .levels
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_finite())
            .map(|(index, &value)| RecordIssue::NonFiniteSample { index, value }),
    );
    if issues.is_empty() {
        Ok(ValidatedRecord(record))
    } else {
        Err(issues)
    }
}

pub(crate) fn ensure_non_empty(record: &SampleRecord) -> Result<()> {
    if record.levels.is_empty() {
        Err(Error::Domain(format!("record {:?} is empty", record.id)))
    } else {
        Ok(())
    }
}
