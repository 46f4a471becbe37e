//! Deterministic synthetic records with known ground truth.
//!
//! Background noise is a Rayleigh envelope: envelope power is drawn i.i.d.
//! from an exponential distribution whose mean is the requested level. The
//! random stream comes from ChaCha8 seeded through `seed_from_u64`, which is
//! fully specified and independent of platform, so a seed names the same
//! fixture everywhere.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baseline::compute_rms_level;
use crate::bursts::Span;
use crate::error::{Error, Result};
use crate::model::{LevelDbm, RecordKind, SampleRecord};

/// Sample rate used for synthetic records unless overridden.
pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 8001.0;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventShape {
    #[default]
    Constant,
    /// Linear ramp in dB from the event offset down by `drop_db` at the
    /// last sample.
    Decaying { drop_db: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurstEventSpec {
    pub start_idx: usize,
    pub length_samples: usize,
    /// Elevation above the record's mean noise level, in dB.
    pub level_offset_db: f64,
    #[serde(default)]
    pub shape: EventShape,
}

impl BurstEventSpec {
    pub fn constant(start_idx: usize, length_samples: usize, level_offset_db: f64) -> Self {
        BurstEventSpec {
            start_idx,
            length_samples,
            level_offset_db,
            shape: EventShape::Constant,
        }
    }

    pub fn span(&self) -> Span {
        Span::new(self.start_idx, self.start_idx + self.length_samples - 1)
    }

    fn offset_at(&self, k: usize) -> f64 {
        match self.shape {
            EventShape::Constant => self.level_offset_db,
            EventShape::Decaying { drop_db } if self.length_samples > 1 => {
                self.level_offset_db - drop_db * k as f64 / (self.length_samples - 1) as f64
            }
            EventShape::Decaying { .. } => self.level_offset_db,
        }
    }
}

/// `count` identical events of `length_samples`, the first at `first_idx`
/// and one every `spacing_samples` after it.
pub fn periodic_events(
    first_idx: usize,
    count: usize,
    length_samples: usize,
    spacing_samples: usize,
    level_offset_db: f64,
) -> Vec<BurstEventSpec> {
    (0..count)
        .map(|k| {
            BurstEventSpec::constant(
                first_idx + k * spacing_samples,
                length_samples,
                level_offset_db,
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InjectedRecord {
    pub record: SampleRecord,
    /// Exact spans of the injected events, in event order.
    pub spans: Vec<Span>,
}

/// Uniform draw in the open interval (0, 1) from 53 random bits.
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

pub fn generate_wgn(n: usize, mean_level_dbm: LevelDbm, seed: u64) -> Result<SampleRecord> {
    if n < 1 {
        return Err(Error::Domain(
            "synthetic record needs at least one sample".into(),
        ));
    }
    if !mean_level_dbm.value().is_finite() {
        return Err(Error::InvalidSample(mean_level_dbm.value()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // exponential power with unit mean is -ln(u)
    let levels = (0..n)
        .map(|_| mean_level_dbm.value() + 10.0 * (-open_unit(&mut rng).ln()).log10())
        .collect();
    Ok(SampleRecord::new(
        format!("wgn-seed{seed}"),
        levels,
        DEFAULT_SAMPLE_RATE_HZ,
        RecordKind::Wgn,
    ))
}

pub fn validate_events(events: &[BurstEventSpec], n: usize) -> Result<()> {
    let mut prev_end: Option<usize> = None;
    for (i, ev) in events.iter().enumerate() {
        if ev.length_samples == 0 {
            return Err(Error::Config(format!("event {i} has zero length")));
        }
        if !ev.level_offset_db.is_finite() {
            return Err(Error::Config(format!("event {i} has a non-finite offset")));
        }
        if let EventShape::Decaying { drop_db } = ev.shape {
            if !drop_db.is_finite() {
                return Err(Error::Config(format!("event {i} has a non-finite decay")));
            }
        }
        let end = ev
            .start_idx
            .checked_add(ev.length_samples)
            .filter(|&e| e <= n);
        let Some(end) = end else {
            return Err(Error::Config(format!(
                "event {i} [{}, +{}) exceeds record length {n}",
                ev.start_idx, ev.length_samples
            )));
        };
        if prev_end.is_some_and(|p| ev.start_idx < p) {
            return Err(Error::Config(format!(
                "event {i} overlaps or precedes the previous event"
            )));
        }
        prev_end = Some(end);
    }
    Ok(())
}

/// Replaces the samples inside each event span with the record's mean noise
/// power raised by the event offset.
pub fn inject_bursts(record: &SampleRecord, events: &[BurstEventSpec]) -> Result<InjectedRecord> {
    validate_events(events, record.len())?;
    let mut out = record.clone();
    if !events.is_empty() {
        let reference = compute_rms_level(record)?.value();
        for ev in events {
            for k in 0..ev.length_samples {
                out.levels[ev.start_idx + k] = reference + ev.offset_at(k);
            }
        }
        out.kind = RecordKind::In;
    }
    Ok(InjectedRecord {
        record: out,
        spans: events.iter().map(BurstEventSpec::span).collect(),
    })
}

/// Reference segmentation used to cross-check the burst combiner.
///
/// Walks the record one sample at a time and, whenever a new above-threshold
/// run ends, recounts the above-threshold samples of the whole tentative span
/// from scratch. Quadratic in the worst case; intended for records of at most
/// a few thousand samples.
pub fn brute_force_segment(record: &SampleRecord, threshold: LevelDbm) -> Vec<Span> {
    let above: Vec<bool> = record
        .levels
        .iter()
        .map(|&v| v > threshold.value())
        .collect();
    let n = above.len();
    let mut out = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    let mut run_start = None;
    for i in 0..n {
        if above[i] && run_start.is_none() {
            run_start = Some(i);
        }
        let run_ends_here = above[i] && (i + 1 == n || !above[i + 1]);
        if !run_ends_here {
            continue;
        }
        let start = run_start.take().expect("run has a start");
        current = match current {
            None => Some((start, i)),
            Some((s, e)) => {
                let hits = (s..=i).filter(|&k| above[k]).count();
                let width = i - s + 1;
                if hits * 2 > width {
                    Some((s, i))
                } else {
                    out.push(Span::new(s, e));
                    Some((start, i))
                }
            }
        };
    }
    if let Some((s, e)) = current {
        out.push(Span::new(s, e));
    }
    out
}
