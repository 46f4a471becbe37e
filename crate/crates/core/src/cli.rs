//! Command-line front end: argument definitions and the command drivers
//! behind the `impnoise` binary.
//!
//! Exit codes: 0 success, 1 WGN validation failure, 2 I/O error,
//! 3 format or configuration error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::apd::{apd_pair, compute_apd};
use crate::baseline::{validate_wgn, Baseline, DEFAULT_OFFSET_DB};
use crate::bursts::detect_bursts;
use crate::error::{Error, Result};
use crate::io::{self, BaselineReport, GroundTruth};
use crate::model::{LevelDbm, RecordKind, SampleRecord};
use crate::stats::{
    aggregate_campaign, measurement_stats, measurement_stats_with_main_burst, MeasurementStats,
    SourceCharacterization,
};
use crate::synth::{generate_wgn, inject_bursts, DEFAULT_SAMPLE_RATE_HZ};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    ValidationFailed,
    IoError,
    FormatError,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::ValidationFailed => 1,
            ExitStatus::IoError => 2,
            ExitStatus::FormatError => 3,
        }
    }
}

impl From<&Error> for ExitStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Io { .. } => ExitStatus::IoError,
            _ => ExitStatus::FormatError,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "impnoise",
    version,
    about = "Impulsive radio noise characterization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the WGN r.m.s. level and detection threshold, and check the
    /// record is impulse-free.
    Baseline(BaselineArgs),
    /// Detect bursts in an IN record and report its parameters.
    Analyze(AnalyzeArgs),
    /// Run a whole campaign described by a JSON manifest.
    Campaign(CampaignArgs),
    /// Amplitude probability distribution of one record or a WGN/IN pair.
    Apd(ApdArgs),
    /// Generate a synthetic record, optionally with injected bursts.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    pub wgn_file: PathBuf,
    #[arg(long, default_value_t = DEFAULT_OFFSET_DB)]
    pub offset_db: f64,
    #[arg(long, default_value_t = 0.0)]
    pub max_exceed_fraction: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub in_file: PathBuf,
    /// Baseline JSON written by `impnoise baseline`.
    #[arg(long)]
    pub baseline: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Also write per-sample plot data.
    #[arg(long)]
    pub plot_data: bool,
    /// Include the longest-burst analysis in the report.
    #[arg(long)]
    pub main_burst: bool,
}

#[derive(Debug, Args)]
pub struct CampaignArgs {
    pub manifest: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ApdArgs {
    /// A single record, or a WGN record followed by an IN record.
    #[arg(num_args = 1..=2, required = true)]
    pub files: Vec<PathBuf>,
    /// Uniform level grid spacing in dB; distinct sample levels when absent.
    #[arg(long)]
    pub grid_db: Option<f64>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub mean_dbm: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON array of burst events to inject.
    #[arg(long)]
    pub events: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_RATE_HZ)]
    pub sample_rate_hz: f64,
    #[arg(long)]
    pub frequency_khz: Option<f64>,
    #[arg(long, default_value = "")]
    pub event: String,
    /// Output file stem.
    #[arg(long, default_value = "simulated")]
    pub name: String,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> ExitStatus {
    let result = match cli.command {
        Command::Baseline(a) => cmd_baseline(&a).map(|r| verdict(r.validation.passed)),
        Command::Analyze(a) => cmd_analyze(&a).map(|_| ExitStatus::Success),
        Command::Campaign(a) => {
            cmd_campaign(&a).map(|o| verdict(matches!(o, CampaignOutcome::Completed { .. })))
        }
        Command::Apd(a) => cmd_apd(&a).map(|_| ExitStatus::Success),
        Command::Simulate(a) => cmd_simulate(&a).map(|_| ExitStatus::Success),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitStatus::from(&e)
    })
}

fn verdict(passed: bool) -> ExitStatus {
    if passed {
        ExitStatus::Success
    } else {
        ExitStatus::ValidationFailed
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

fn file_safe(id: &str) -> String {
    let s: String = id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() {
        "record".into()
    } else {
        s
    }
}

fn establish_baseline(
    record: &SampleRecord,
    offset_db: f64,
    max_exceed_fraction: f64,
) -> Result<BaselineReport> {
    let baseline = Baseline::establish(record, offset_db)?;
    let validation = validate_wgn(record, &baseline, max_exceed_fraction)?;
    Ok(BaselineReport {
        baseline,
        validation,
    })
}

/// Writes `<out>/baseline.json`; the report is written even when validation
/// fails.
pub fn cmd_baseline(args: &BaselineArgs) -> Result<BaselineReport> {
    let record = io::read_record(&args.wgn_file)?;
    let report = establish_baseline(&record, args.offset_db, args.max_exceed_fraction)?;
    ensure_dir(&args.out)?;
    io::write_baseline(&report, &args.out.join("baseline.json"))?;
    if !report.validation.passed {
        eprintln!(
            "WGN check failed: {} sample(s) above {:.2} dBm",
            report.validation.exceed_count,
            report.baseline.threshold_dbm.value()
        );
    }
    Ok(report)
}

fn analyze_record(
    record: &SampleRecord,
    baseline: &Baseline,
    with_main_burst: bool,
) -> (MeasurementStats, crate::bursts::BurstSet) {
    let set = detect_bursts(record, baseline);
    let stats = if with_main_burst {
        measurement_stats_with_main_burst(&set)
    } else {
        measurement_stats(&set)
    };
    (stats, set)
}

/// Writes `<out>/<record_id>.report.json` and `.report.csv`, plus
/// `<record_id>.plot.csv` when requested.
pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<MeasurementStats> {
    let baseline = io::read_baseline(&args.baseline)?.baseline;
    let record = io::read_record(&args.in_file)?;
    let (stats, set) = analyze_record(&record, &baseline, args.main_burst);
    ensure_dir(&args.out)?;
    let stem = file_safe(&record.id);
    io::write_measurement_report(&stats, &set, &args.out.join(format!("{stem}.report.json")))?;
    if args.plot_data {
        io::write_plot_data(&record, &set, &args.out.join(format!("{stem}.plot.csv")))?;
    }
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CampaignOutcome {
    /// The WGN record failed the impulse-free check; nothing else was run.
    BaselineRejected(BaselineReport),
    Completed {
        baseline: BaselineReport,
        measurements: Vec<MeasurementStats>,
        characterization: SourceCharacterization,
    },
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Output layout under `<out>`:
///
/// ```text
/// baseline.json
/// measurements/NN_<record_id>.report.{json,csv}
/// table1.csv
/// campaign.{json,csv}
/// ```
///
/// IN records are processed in parallel; every output follows manifest
/// order.
pub fn cmd_campaign(args: &CampaignArgs) -> Result<CampaignOutcome> {
    let manifest = io::read_manifest(&args.manifest)?;
    let base = args
        .manifest
        .parent()
        .unwrap_or(Path::new(""))
        .to_path_buf();

    let wgn = io::read_record(&resolve(&base, &manifest.wgn_record))?;
    let baseline = establish_baseline(&wgn, manifest.offset_db, manifest.max_exceed_fraction)?;
    ensure_dir(&args.out)?;
    io::write_baseline(&baseline, &args.out.join("baseline.json"))?;
    if !baseline.validation.passed {
        eprintln!(
            "WGN check failed: {} sample(s) above {:.2} dBm; IN records not analyzed",
            baseline.validation.exceed_count,
            baseline.baseline.threshold_dbm.value()
        );
        return Ok(CampaignOutcome::BaselineRejected(baseline));
    }

    let analyzed: Vec<(SampleRecord, MeasurementStats, crate::bursts::BurstSet)> = manifest
        .in_records
        .par_iter()
        .map(|p| {
            let mut record = io::read_record(&resolve(&base, p))?;
            if record.meta.event.is_empty() {
                record.meta.event = manifest.event.clone();
            }
            record
                .meta
                .frequency_khz
                .get_or_insert(manifest.frequency_khz);
            let (stats, set) = analyze_record(&record, &baseline.baseline, true);
            Ok((record, stats, set))
        })
        .collect::<Result<_>>()?;

    let measurements_dir = args.out.join("measurements");
    ensure_dir(&measurements_dir)?;
    for (k, (record, stats, set)) in analyzed.iter().enumerate() {
        let name = format!("{:02}_{}.report.json", k + 1, file_safe(&record.id));
        io::write_measurement_report(stats, set, &measurements_dir.join(name))?;
    }
    let measurements: Vec<MeasurementStats> = analyzed.into_iter().map(|(_, s, _)| s).collect();
    io::write_measurement_table(&measurements, &args.out.join("table1.csv"))?;

    let characterization = aggregate_campaign(&measurements, &manifest.campaign_meta())?;
    io::write_campaign_report(&characterization, &args.out.join("campaign.json"))?;
    Ok(CampaignOutcome::Completed {
        baseline,
        measurements,
        characterization,
    })
}

/// Writes `<out>/apd.csv`.
pub fn cmd_apd(args: &ApdArgs) -> Result<PathBuf> {
    let path = args.out.join("apd.csv");
    match args.files.as_slice() {
        [single] => {
            let record = io::read_record(single)?;
            let curve = compute_apd(&record, args.grid_db)?;
            ensure_dir(&args.out)?;
            io::write_apd_csv(&curve, None, &path)?;
        }
        [wgn, in_file] => {
            let wgn = io::read_record(wgn)?;
            let in_rec = io::read_record(in_file)?;
            let (a, b) = apd_pair(&wgn, &in_rec, args.grid_db)?;
            ensure_dir(&args.out)?;
            io::write_apd_csv(&a, Some(&b), &path)?;
        }
        other => {
            return Err(Error::Config(format!(
                "apd takes 1 or 2 records, got {}",
                other.len()
            )))
        }
    }
    Ok(path)
}

/// Writes `<out>/<name>.csv` and, when events are given,
/// `<out>/<name>.truth.json`.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<SampleRecord> {
    if !(args.sample_rate_hz.is_finite() && args.sample_rate_hz > 0.0) {
        return Err(Error::Config(format!(
            "sample rate must be > 0 Hz, got {}",
            args.sample_rate_hz
        )));
    }
    let mut record = generate_wgn(args.n, LevelDbm(args.mean_dbm), args.seed)?;
    record.id = args.name.clone();
    record.sample_rate_hz = args.sample_rate_hz;
    record.meta.frequency_khz = args.frequency_khz;
    record.meta.event = args.event.clone();

    let truth = match &args.events {
        Some(path) => {
            let events = io::read_events(path)?;
            let injected = inject_bursts(&record, &events)?;
            record = injected.record;
            record.kind = RecordKind::In;
            Some(GroundTruth {
                record_id: record.id.clone(),
                events,
                spans: injected.spans,
            })
        }
        None => None,
    };

    ensure_dir(&args.out)?;
    let stem = file_safe(&args.name);
    io::write_record(&record, &args.out.join(format!("{stem}.csv")))?;
    if let Some(truth) = truth {
        io::write_ground_truth(&truth, &args.out.join(format!("{stem}.truth.json")))?;
    }
    Ok(record)
}
