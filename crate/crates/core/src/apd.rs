//! Amplitude probability distribution: the fraction of samples strictly
//! above each level.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ensure_non_empty, SampleRecord};

pub const DEFAULT_GRID_DB: f64 = 0.1;

const MAX_GRID_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApdPoint {
    pub level_dbm: f64,
    pub exceedance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApdCurve {
    pub points: Vec<ApdPoint>,
    pub n_samples: usize,
}

impl ApdCurve {
    pub fn levels(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.level_dbm)
    }

    /// Exceedance at an arbitrary level, read off the step curve.
    ///
    /// Exact for curves evaluated at the distinct sample levels, since the
    /// exceedance only changes at those levels. Below the first point the
    /// value is 1.
    pub fn exceedance_at(&self, level_dbm: f64) -> f64 {
        let k = self.points.partition_point(|p| p.level_dbm <= level_dbm);
        if k == 0 {
            1.0
        } else {
            self.points[k - 1].exceedance
        }
    }

    pub fn shares_grid_with(&self, other: &ApdCurve) -> bool {
        self.points.len() == other.points.len()
            && self.levels().zip(other.levels()).all(|(a, b)| a == b)
    }
}

fn sorted_levels(record: &SampleRecord) -> Result<Vec<f64>> {
    ensure_non_empty(record)?;
    let mut sorted = record.levels.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    Ok(sorted)
}

fn evaluate(sorted: &[f64], levels: &[f64]) -> ApdCurve {
    let n = sorted.len();
    let points = levels
        .iter()
        .map(|&level| {
            let at_or_below = sorted.partition_point(|&v| v <= level);
            ApdPoint {
                level_dbm: level,
                exceedance: (n - at_or_below) as f64 / n as f64,
            }
        })
        .collect();
    ApdCurve {
        points,
        n_samples: n,
    }
}

fn distinct(sorted: &[f64]) -> Vec<f64> {
    let mut levels = sorted.to_vec();
    levels.dedup();
    levels
}

/// Uniform grid whose first level lies strictly below `min` and whose last
/// level is at or above `max`.
fn uniform_grid(min: f64, max: f64, step_db: f64) -> Result<Vec<f64>> {
    if !(step_db.is_finite() && step_db > 0.0) {
        return Err(Error::Config(format!(
            "grid spacing must be > 0 dB, got {step_db}"
        )));
    }
    let mut first = (min / step_db).floor() as i64;
    if first as f64 * step_db >= min {
        first -= 1;
    }
    let mut last = (max / step_db).ceil() as i64;
    if (last as f64 * step_db) < max {
        last += 1;
    }
    let count = (last - first + 1) as usize;
    if count > MAX_GRID_POINTS {
        return Err(Error::Config(format!(
            "grid spacing {step_db} dB over [{min}, {max}] dBm needs {count} points"
        )));
    }
    Ok((first..=last).map(|k| k as f64 * step_db).collect())
}

/// APD of one record, at every distinct sample level or on a uniform grid.
pub fn compute_apd(record: &SampleRecord, grid_db: Option<f64>) -> Result<ApdCurve> {
    let sorted = sorted_levels(record)?;
    let levels = match grid_db {
        None => distinct(&sorted),
        Some(step) => uniform_grid(sorted[0], sorted[sorted.len() - 1], step)?,
    };
    Ok(evaluate(&sorted, &levels))
}

/// APDs of a WGN and an IN record evaluated on one shared set of levels,
/// ready to be overlaid.
pub fn apd_pair(
    wgn: &SampleRecord,
    in_rec: &SampleRecord,
    grid_db: Option<f64>,
) -> Result<(ApdCurve, ApdCurve)> {
    let a = sorted_levels(wgn)?;
    let b = sorted_levels(in_rec)?;
    let levels = match grid_db {
        None => {
            let mut all: Vec<f64> = a.iter().chain(&b).copied().collect();
            all.sort_by(|x, y| x.partial_cmp(y).expect("finite samples"));
            distinct(&all)
        }
        Some(step) => uniform_grid(a[0].min(b[0]), a[a.len() - 1].max(b[b.len() - 1]), step)?,
    };
    Ok((evaluate(&a, &levels), evaluate(&b, &levels)))
}
