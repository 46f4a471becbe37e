//! Per-measurement burst statistics and cross-measurement aggregation.
//!
//! Within one measurement the average duration and separation are plain
//! means, and the average amplitude is the duration-weighted mean of burst
//! amplitudes taken on their dBm values. Across measurements every parameter
//! is averaged arithmetically and its dispersion reported as the sample
//! standard deviation (n - 1 denominator).

use serde::{Deserialize, Serialize};

use crate::bursts::{separations_ms, Burst, BurstSet};
use crate::error::{Error, Result};
use crate::model::LevelDbm;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementStats {
    #[serde(default)]
    pub record_id: String,
    #[serde(default)]
    pub event: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency_khz: Option<f64>,
    pub n_bursts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_duration_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_amplitude_dbm: Option<LevelDbm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_separation_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub main_burst: Option<MainBurst>,
}

/// The longest burst of a measurement, reported apart from the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainBurst {
    /// Position in the measurement's burst list.
    pub index: usize,
    pub start_idx: usize,
    pub duration_ms: f64,
    pub amplitude_dbm: LevelDbm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_to_second_longest: Option<f64>,
    /// Statistics of the remaining bursts.
    pub others: Box<MeasurementStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceCharacterization {
    pub event: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency_khz: Option<f64>,
    pub n_measurements: usize,
    pub mean_n_bursts: f64,
    /// Measurements with at least one burst; duration and amplitude are
    /// aggregated over these.
    pub n_with_bursts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_duration_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sd_duration_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_amplitude_dbm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sd_amplitude_db: Option<f64>,
    /// Measurements with at least two bursts; separation is aggregated over
    /// these.
    pub n_with_separations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_separation_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sd_separation_ms: Option<f64>,
}

/// Identifies the event and frequency a campaign was run for.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CampaignMeta {
    pub event: String,
    pub frequency_khz: Option<f64>,
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

fn summarize(bursts: &[Burst], sample_rate_hz: f64, set: &BurstSet) -> MeasurementStats {
    let durations: Vec<f64> = bursts.iter().map(|b| b.duration_ms).collect();
    let total_duration: f64 = durations.iter().sum();
    let avg_amplitude_dbm = (!bursts.is_empty()).then(|| {
        let weighted: f64 = bursts
            .iter()
            .map(|b| b.amplitude_dbm.value() * b.duration_ms)
            .sum();
        LevelDbm(weighted / total_duration)
    });
    MeasurementStats {
        record_id: set.record_id.clone(),
        event: set.event.clone(),
        frequency_khz: set.frequency_khz,
        n_bursts: bursts.len(),
        avg_duration_ms: mean(&durations),
        avg_amplitude_dbm,
        avg_separation_ms: mean(&separations_ms(bursts, sample_rate_hz)),
        main_burst: None,
    }
}

fn sorted_bursts(set: &BurstSet) -> Vec<Burst> {
    let mut bursts = set.bursts.clone();
    bursts.sort_by_key(|b| b.start_idx);
    bursts
}

/// Number of bursts, average duration, duration-weighted average amplitude
/// and average separation of one measurement.
///
/// Separations are recomputed from the start-ordered bursts, so the result
/// does not depend on the order of `set.bursts`.
pub fn measurement_stats(set: &BurstSet) -> MeasurementStats {
    summarize(&sorted_bursts(set), set.sample_rate_hz, set)
}

/// Picks the longest burst (earliest on ties) and recomputes the statistics
/// of the others without it.
pub fn main_burst(set: &BurstSet) -> Option<MainBurst> {
    let bursts = sorted_bursts(set);
    let (index, main) =
        bursts
            .iter()
            .enumerate()
            .fold(None::<(usize, &Burst)>, |best, (i, b)| match best {
                Some((_, m)) if m.duration_ms >= b.duration_ms => best,
                _ => Some((i, b)),
            })?;
    let others: Vec<Burst> = bursts
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != index)
        .map(|(_, b)| b.clone())
        .collect();
    let second = others
        .iter()
        .map(|b| b.duration_ms)
        .fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.max(d)))
        });
    Some(MainBurst {
        index,
        start_idx: main.start_idx,
        duration_ms: main.duration_ms,
        amplitude_dbm: main.amplitude_dbm,
        ratio_to_second_longest: second.map(|s| main.duration_ms / s),
        others: Box::new(summarize(&others, set.sample_rate_hz, set)),
    })
}

/// [`measurement_stats`] with the main-burst section filled in.
pub fn measurement_stats_with_main_burst(set: &BurstSet) -> MeasurementStats {
    let mut stats = measurement_stats(set);
    stats.main_burst = main_burst(set);
    stats
}

/// Sample standard deviation with the n - 1 denominator.
pub fn std_dev(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::Domain(format!(
            "standard deviation needs at least 2 values, got {}",
            values.len()
        )));
    }
    let m = mean(values).expect("non-empty");
    let ss: f64 = values.iter().map(|q| (q - m).powi(2)).sum();
    Ok((ss / (values.len() - 1) as f64).sqrt())
}

fn mean_and_sd(values: &[f64]) -> (Option<f64>, Option<f64>) {
    (mean(values), std_dev(values).ok())
}

fn same_frequency(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => (x - y).abs() <= 1e-9 * x.abs().max(y.abs()),
        (None, None) => true,
        _ => false,
    }
}

/// Characterizes a source from repeated measurements of the same event.
pub fn aggregate_campaign(
    stats: &[MeasurementStats],
    meta: &CampaignMeta,
) -> Result<SourceCharacterization> {
    if stats.is_empty() {
        return Err(Error::Domain("campaign has no measurements".into()));
    }
    for s in stats {
        if s.event != meta.event || !same_frequency(s.frequency_khz, meta.frequency_khz) {
            return Err(Error::Config(format!(
                "measurement {:?} ({:?} at {:?} kHz) does not match campaign ({:?} at {:?} kHz)",
                s.record_id, s.event, s.frequency_khz, meta.event, meta.frequency_khz
            )));
        }
    }
    let counts: Vec<f64> = stats.iter().map(|s| s.n_bursts as f64).collect();
    let durations: Vec<f64> = stats.iter().filter_map(|s| s.avg_duration_ms).collect();
    let amplitudes: Vec<f64> = stats
        .iter()
        .filter_map(|s| s.avg_amplitude_dbm.map(LevelDbm::value))
        .collect();
    let separations: Vec<f64> = stats.iter().filter_map(|s| s.avg_separation_ms).collect();

    let (mean_duration_ms, sd_duration_ms) = mean_and_sd(&durations);
    let (mean_amplitude_dbm, sd_amplitude_db) = mean_and_sd(&amplitudes);
    let (mean_separation_ms, sd_separation_ms) = mean_and_sd(&separations);
    Ok(SourceCharacterization {
        event: meta.event.clone(),
        frequency_khz: meta.frequency_khz,
        n_measurements: stats.len(),
        mean_n_bursts: mean(&counts).expect("non-empty"),
        n_with_bursts: durations.len(),
        mean_duration_ms,
        sd_duration_ms,
        mean_amplitude_dbm,
        sd_amplitude_db,
        n_with_separations: separations.len(),
        mean_separation_ms,
        sd_separation_ms,
    })
}
