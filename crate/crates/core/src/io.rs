//! File formats.
//!
//! * Sample records: UTF-8 text, `# key=value` header lines followed by one
//!   dBm level per line. `sample_rate_hz` is required; `record_id`, `kind`,
//!   `frequency_khz`, `event`, `location`, `source` and `started_at` are
//!   optional.
//! * Campaign manifests: JSON, see [`CampaignManifest`].
//! * Reports: JSON at full precision plus a sibling CSV rounded to two
//!   decimals for side-by-side reading.
//! * Plot data and APD curves: CSV.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::apd::ApdCurve;
use crate::baseline::{Baseline, WgnValidation, DEFAULT_OFFSET_DB};
use crate::bursts::{BurstSet, Span};
use crate::error::{Error, Result};
use crate::model::{validate_record, MeasurementMeta, RecordIssue, RecordKind, SampleRecord};
use crate::stats::{CampaignMeta, MeasurementStats, SourceCharacterization};
use crate::synth::BurstEventSpec;

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    write_text(path, &text)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Error::format(path, Some(e.line()), e.to_string()))
}

/// Two-decimal presentation, rounding halves away from zero.
fn fixed2(x: f64) -> String {
    let r = (x * 100.0).round() / 100.0 + 0.0;
    format!("{r:.2}")
}

fn opt_fixed2(x: Option<f64>) -> String {
    x.map(fixed2).unwrap_or_default()
}

fn single_line(s: &str) -> String {
    s.replace(['\r', '\n'], " ")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Sibling CSV path of a JSON report: same stem, `.csv` extension.
pub fn csv_sibling(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

// ---------------------------------------------------------------------------
// sample records

pub fn read_record(path: &Path) -> Result<SampleRecord> {
    let text = read_text(path)?;
    parse_record(&text, path)
}

pub fn parse_record(text: &str, path: &Path) -> Result<SampleRecord> {
    let fmt_err = |line: usize, msg: String| Error::format(path, Some(line), msg);
    let mut sample_rate = None;
    let mut id = None;
    let mut kind = RecordKind::default();
    let mut meta = MeasurementMeta::default();
    let mut levels = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let Some((key, value)) = comment.split_once('=') else {
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            let number = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| fmt_err(line_no, format!("{key}: {v:?} is not a number")))
            };
            match key {
                "sample_rate_hz" => sample_rate = Some(number(value)?),
                "frequency_khz" => meta.frequency_khz = Some(number(value)?),
                "record_id" => id = Some(value.to_string()),
                "kind" => kind = value.parse().map_err(|e| fmt_err(line_no, e))?,
                "event" => meta.event = value.to_string(),
                "location" => meta.location = value.to_string(),
                "source" => meta.source = value.to_string(),
                "started_at" => meta.started_at = Some(value.to_string()),
                _ => {}
            }
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| fmt_err(line_no, format!("{line:?} is not a level in dBm")))?;
        if !v.is_finite() {
            return Err(fmt_err(line_no, format!("non-finite level {line:?}")));
        }
        levels.push(v);
    }

    let Some(sample_rate_hz) = sample_rate else {
        return Err(Error::format(
            path,
            None,
            "missing header `# sample_rate_hz=...`",
        ));
    };
    let id = id.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    let record = SampleRecord {
        id,
        levels,
        sample_rate_hz,
        kind,
        meta,
    };
    validate_record(record)
        .map(|v| v.into_inner())
        .map_err(|issues| {
            let msg = issues
                .iter()
                .map(RecordIssue::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            Error::format(path, None, msg)
        })
}

pub fn format_record(record: &SampleRecord) -> String {
    let mut out = String::with_capacity(record.len() * 20 + 256);
    let _ = writeln!(out, "# sample_rate_hz={}", record.sample_rate_hz);
    let _ = writeln!(out, "# kind={}", record.kind.as_str());
    let _ = writeln!(out, "# record_id={}", single_line(&record.id));
    let m = &record.meta;
    if let Some(f) = m.frequency_khz {
        let _ = writeln!(out, "# frequency_khz={f}");
    }
    for (key, value) in [
        ("event", &m.event),
        ("location", &m.location),
        ("source", &m.source),
    ] {
        if !value.is_empty() {
            let _ = writeln!(out, "# {key}={}", single_line(value));
        }
    }
    if let Some(t) = &m.started_at {
        let _ = writeln!(out, "# started_at={}", single_line(t));
    }
    for v in &record.levels {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn write_record(record: &SampleRecord, path: &Path) -> Result<()> {
    write_text(path, &format_record(record))
}

// ---------------------------------------------------------------------------
// campaign manifest

fn default_offset_db() -> f64 {
    DEFAULT_OFFSET_DB
}

/// One WGN record plus repeated IN records of the same event at one
/// frequency.
///
/// Relative record paths are resolved against the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignManifest {
    pub wgn_record: PathBuf,
    pub in_records: Vec<PathBuf>,
    pub event: String,
    pub frequency_khz: f64,
    pub location: String,
    pub source: String,
    #[serde(default = "default_offset_db")]
    pub offset_db: f64,
    #[serde(default)]
    pub max_exceed_fraction: f64,
}

impl CampaignManifest {
    pub fn campaign_meta(&self) -> CampaignMeta {
        CampaignMeta {
            event: self.event.clone(),
            frequency_khz: Some(self.frequency_khz),
        }
    }

    fn validate(&self, path: &Path) -> Result<()> {
        let err = |msg: String| Err(Error::format(path, None, msg));
        if self.in_records.is_empty() {
            return err("in_records must list at least one IN record".into());
        }
        let mut seen = HashSet::new();
        for p in std::iter::once(&self.wgn_record).chain(&self.in_records) {
            if !seen.insert(p) {
                return err(format!("record path {} listed more than once", p.display()));
            }
        }
        if !(self.frequency_khz.is_finite() && self.frequency_khz > 0.0) {
            return err(format!(
                "frequency_khz must be > 0, got {}",
                self.frequency_khz
            ));
        }
        if !(self.offset_db.is_finite() && self.offset_db > 0.0) {
            return err(format!("offset_db must be > 0, got {}", self.offset_db));
        }
        if !(0.0..=1.0).contains(&self.max_exceed_fraction) {
            return err(format!(
                "max_exceed_fraction must lie in [0, 1], got {}",
                self.max_exceed_fraction
            ));
        }
        Ok(())
    }
}

pub fn read_manifest(path: &Path) -> Result<CampaignManifest> {
    let manifest: CampaignManifest = read_json(path)?;
    manifest.validate(path)?;
    Ok(manifest)
}

pub fn write_manifest(manifest: &CampaignManifest, path: &Path) -> Result<()> {
    write_json(manifest, path)
}

// ---------------------------------------------------------------------------
// baseline artifact

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub baseline: Baseline,
    pub validation: WgnValidation,
}

pub fn write_baseline(report: &BaselineReport, path: &Path) -> Result<()> {
    write_json(report, path)
}

pub fn read_baseline(path: &Path) -> Result<BaselineReport> {
    let report: BaselineReport = read_json(path)?;
    let b = &report.baseline;
    if !(b.offset_db > 0.0
        && (b.threshold_dbm.value() - b.rms_dbm.value() - b.offset_db).abs() < 1e-9)
    {
        return Err(Error::format(
            path,
            None,
            "threshold_dbm must equal rms_dbm + offset_db with offset_db > 0",
        ));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// measurement report

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurstRow {
    pub start_ms: f64,
    pub duration_ms: f64,
    pub amplitude_dbm: f64,
    pub start_idx: usize,
    pub end_idx: usize,
    pub above_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementReport {
    pub record_id: String,
    pub sample_rate_hz: f64,
    pub threshold_dbm: f64,
    pub bursts: Vec<BurstRow>,
    pub separations_ms: Vec<f64>,
    pub summary: MeasurementStats,
}

impl MeasurementReport {
    pub fn new(stats: &MeasurementStats, set: &BurstSet) -> Self {
        let period_ms = 1000.0 / set.sample_rate_hz;
        MeasurementReport {
            record_id: set.record_id.clone(),
            sample_rate_hz: set.sample_rate_hz,
            threshold_dbm: set.threshold_dbm.value(),
            bursts: set
                .bursts
                .iter()
                .map(|b| BurstRow {
                    start_ms: b.start_idx as f64 * period_ms,
                    duration_ms: b.duration_ms,
                    amplitude_dbm: b.amplitude_dbm.value(),
                    start_idx: b.start_idx,
                    end_idx: b.end_idx,
                    above_count: b.above_count,
                })
                .collect(),
            separations_ms: set.separations_ms.clone(),
            summary: stats.clone(),
        }
    }
}

fn measurement_csv(stats: &MeasurementStats) -> String {
    let mut out = String::from("parameter,value\n");
    let _ = writeln!(out, "Number of Bursts,{}", stats.n_bursts);
    let _ = writeln!(
        out,
        "Average Burst Duration (ms),{}",
        opt_fixed2(stats.avg_duration_ms)
    );
    let _ = writeln!(
        out,
        "Average Burst Amplitude (dBm),{}",
        opt_fixed2(stats.avg_amplitude_dbm.map(|a| a.value()))
    );
    let _ = writeln!(
        out,
        "Average Burst Separation (ms),{}",
        opt_fixed2(stats.avg_separation_ms)
    );
    out
}

/// Writes the JSON report at `path` and its CSV summary next to it.
pub fn write_measurement_report(
    stats: &MeasurementStats,
    set: &BurstSet,
    path: &Path,
) -> Result<()> {
    write_json(&MeasurementReport::new(stats, set), path)?;
    write_text(&csv_sibling(path), &measurement_csv(stats))
}

pub fn read_measurement_report(path: &Path) -> Result<MeasurementReport> {
    read_json(path)
}

type Cell = fn(&MeasurementStats) -> String;

/// Side-by-side table of several measurements, one column each.
pub fn write_measurement_table(stats: &[MeasurementStats], path: &Path) -> Result<()> {
    let mut out = String::from("parameter");
    for s in stats {
        let _ = write!(out, ",{}", csv_field(&s.record_id));
    }
    out.push('\n');
    let rows: [(&str, Cell); 4] = [
        ("Number of Bursts", |s| s.n_bursts.to_string()),
        ("Average Burst Duration (ms)", |s| {
            opt_fixed2(s.avg_duration_ms)
        }),
        ("Average Burst Amplitude (dBm)", |s| {
            opt_fixed2(s.avg_amplitude_dbm.map(|a| a.value()))
        }),
        ("Average Burst Separation (ms)", |s| {
            opt_fixed2(s.avg_separation_ms)
        }),
    ];
    for (label, cell) in rows {
        out.push_str(label);
        for s in stats {
            out.push(',');
            out.push_str(&cell(s));
        }
        out.push('\n');
    }
    write_text(path, &out)
}

// ---------------------------------------------------------------------------
// campaign report

pub fn campaign_csv(c: &SourceCharacterization) -> String {
    let mut out = String::from("parameter,value\n");
    let rows = [
        ("Number of Bursts", Some(c.mean_n_bursts)),
        ("Average Burst Duration (ms)", c.mean_duration_ms),
        ("Standard Deviation of Duration (ms)", c.sd_duration_ms),
        ("Average Burst Amplitude (dBm)", c.mean_amplitude_dbm),
        ("Standard Deviation of Amplitude (dB)", c.sd_amplitude_db),
        ("Average Burst Separation (ms)", c.mean_separation_ms),
        ("Standard Deviation of Separation (ms)", c.sd_separation_ms),
    ];
    for (label, value) in rows {
        let _ = writeln!(out, "{label},{}", opt_fixed2(value));
    }
    out
}

pub fn write_campaign_report(c: &SourceCharacterization, path: &Path) -> Result<()> {
    write_json(c, path)?;
    write_text(&csv_sibling(path), &campaign_csv(c))
}

pub fn read_campaign_report(path: &Path) -> Result<SourceCharacterization> {
    read_json(path)
}

// ---------------------------------------------------------------------------
// plot data and APD

/// One row per sample: time, level and the 1-based id of the burst that
/// contains it (empty outside bursts).
pub fn write_plot_data(record: &SampleRecord, set: &BurstSet, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(record.len() * 32);
    out.push_str("time_ms,level_dbm,burst_id\n");
    let period_ms = record.period_ms();
    let mut bursts = set.bursts.iter().enumerate().peekable();
    for (i, v) in record.levels.iter().enumerate() {
        while bursts.peek().is_some_and(|(_, b)| b.end_idx < i) {
            bursts.next();
        }
        let id = match bursts.peek() {
            Some((k, b)) if b.start_idx <= i => (k + 1).to_string(),
            _ => String::new(),
        };
        let _ = writeln!(out, "{},{v},{id}", i as f64 * period_ms);
    }
    write_text(path, &out)
}

/// Writes one APD curve (`level_dbm,exceedance`) or a WGN/IN pair
/// (`level_dbm,exceedance_wgn,exceedance_in`) evaluated on the same levels.
/// A leading `# y_scale=log` line hints how the probabilities are best
/// plotted.
pub fn write_apd_csv(first: &ApdCurve, second: Option<&ApdCurve>, path: &Path) -> Result<()> {
    let mut out = String::from("# y_scale=log\n");
    match second {
        None => {
            out.push_str("level_dbm,exceedance\n");
            for p in &first.points {
                let _ = writeln!(out, "{},{}", p.level_dbm, p.exceedance);
            }
        }
        Some(second) => {
            if !first.shares_grid_with(second) {
                return Err(Error::Config(
                    "APD curves are not evaluated on a shared grid".into(),
                ));
            }
            out.push_str("level_dbm,exceedance_wgn,exceedance_in\n");
            for (a, b) in first.points.iter().zip(&second.points) {
                let _ = writeln!(out, "{},{},{}", a.level_dbm, a.exceedance, b.exceedance);
            }
        }
    }
    write_text(path, &out)
}

// ---------------------------------------------------------------------------
// synthetic event specs and ground truth

pub fn read_events(path: &Path) -> Result<Vec<BurstEventSpec>> {
    read_json(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub record_id: String,
    pub events: Vec<BurstEventSpec>,
    pub spans: Vec<Span>,
}

pub fn write_ground_truth(truth: &GroundTruth, path: &Path) -> Result<()> {
    write_json(truth, path)
}

pub fn read_ground_truth(path: &Path) -> Result<GroundTruth> {
    read_json(path)
}
