//! Background (WGN) level estimation and impulse detection threshold.
//!
//! The r.m.s. level of a WGN record is the dB value of its mean envelope
//! power. The detection threshold sits a fixed crest-factor offset above it,
//! 13 dB by default, and a WGN record is considered impulse-free when no
//! sample lies strictly above that threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ensure_non_empty, power_mean_dbm, LevelDbm, SampleRecord};

/// Crest factor of Gaussian noise, in dB.
pub const DEFAULT_OFFSET_DB: f64 = 13.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub rms_dbm: LevelDbm,
    pub threshold_dbm: LevelDbm,
    pub offset_db: f64,
    #[serde(default)]
    pub source_record_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WgnValidation {
    pub passed: bool,
    pub exceed_count: usize,
    pub exceed_indices: Vec<usize>,
    pub max_level_dbm: LevelDbm,
    pub max_exceed_fraction: f64,
}

pub fn compute_rms_level(record: &SampleRecord) -> Result<LevelDbm> {
    ensure_non_empty(record)?;
    power_mean_dbm(&record.levels).map(LevelDbm).ok_or_else(|| {
        Error::Domain(format!(
            "record {:?} contains non-finite samples",
            record.id
        ))
    })
}

pub fn derive_threshold(rms: LevelDbm, offset_db: f64) -> Result<Baseline> {
    if !(offset_db.is_finite() && offset_db > 0.0) {
        return Err(Error::Config(format!(
            "threshold offset must be > 0 dB, got {offset_db}"
        )));
    }
    Ok(Baseline {
        rms_dbm: rms,
        threshold_dbm: rms.offset(offset_db),
        offset_db,
        source_record_id: String::new(),
    })
}

impl Baseline {
    /// Measures the r.m.s. level of `record` and places the threshold
    /// `offset_db` above it.
    pub fn establish(record: &SampleRecord, offset_db: f64) -> Result<Baseline> {
        let rms = compute_rms_level(record)?;
        let mut baseline = derive_threshold(rms, offset_db)?;
        baseline.source_record_id = record.id.clone();
        Ok(baseline)
    }
}

/// Counts samples strictly above the baseline threshold.
///
/// The record passes when `exceed_count / N <= max_exceed_fraction`; with
/// the default fraction of zero a single exceedance fails it.
pub fn validate_wgn(
    record: &SampleRecord,
    baseline: &Baseline,
    max_exceed_fraction: f64,
) -> Result<WgnValidation> {
    ensure_non_empty(record)?;
    if !(0.0..=1.0).contains(&max_exceed_fraction) {
        return Err(Error::Config(format!(
            "max exceed fraction must lie in [0, 1], got {max_exceed_fraction}"
        )));
    }
    let threshold = baseline.threshold_dbm.value();
    let exceed_indices: Vec<usize> = record
        .levels
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > threshold)
        .map(|(i, _)| i)
        .collect();
    let max_level = record
        .levels
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let exceed_count = exceed_indices.len();
    Ok(WgnValidation {
        passed: exceed_count as f64 / record.len() as f64 <= max_exceed_fraction,
        exceed_count,
        exceed_indices,
        max_level_dbm: LevelDbm(max_level),
        max_exceed_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RecordKind;
    use crate::synth::generate_wgn;
    use proptest::prelude::*;

    fn rec(levels: Vec<f64>) -> SampleRecord {
        SampleRecord::new("t", levels, 8001.0, RecordKind::Wgn)
    }

    #[test]
    fn rms_of_constant_record() {
        assert!((compute_rms_level(&rec(vec![-80.0; 100])).unwrap().value() + 80.0).abs() < 1e-12);
        for x in [-123.4, 0.0, 17.5] {
            let r = compute_rms_level(&rec(vec![x; 4])).unwrap().value();
            assert!((r - x).abs() < 1e-12);
        }
    }

    #[test]
    fn rms_of_two_levels() {
        let r = compute_rms_level(&rec(vec![-60.0, -70.0])).unwrap().value();
        assert!((r + 62.5964).abs() < 1e-3);
    }

    #[test]
    fn rms_of_empty_record_is_domain_error() {
        assert!(matches!(
            compute_rms_level(&rec(vec![])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn threshold_derivation() {
        let b = derive_threshold(LevelDbm(-80.0), 13.0).unwrap();
        assert_eq!(b.threshold_dbm.value(), -67.0);
        let b = derive_threshold(LevelDbm(-62.60), DEFAULT_OFFSET_DB).unwrap();
        assert!((b.threshold_dbm.value() + 49.60).abs() < 1e-12);
        assert!(matches!(
            derive_threshold(LevelDbm(-80.0), 0.0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            derive_threshold(LevelDbm(-80.0), -3.0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn validation_just_below_threshold_passes() {
        let b = derive_threshold(LevelDbm(-80.0), 13.0).unwrap();
        let v = validate_wgn(&rec(vec![-90.0, -67.1, -85.0]), &b, 0.0).unwrap();
        assert!(v.passed);
        assert_eq!(v.exceed_count, 0);
        assert_eq!(v.max_level_dbm.value(), -67.1);
    }

    #[test]
    fn validation_single_exceedance_fails() {
        let b = derive_threshold(LevelDbm(-80.0), 13.0).unwrap();
        let v = validate_wgn(&rec(vec![-90.0, -85.0, -66.9, -88.0]), &b, 0.0).unwrap();
        assert!(!v.passed);
        assert_eq!(v.exceed_count, 1);
        assert_eq!(v.exceed_indices, vec![2]);
    }

    #[test]
    fn sample_at_threshold_is_not_an_exceedance() {
        let b = derive_threshold(LevelDbm(-80.0), 13.0).unwrap();
        let v = validate_wgn(&rec(vec![-67.0, -80.0]), &b, 0.0).unwrap();
        assert!(v.passed);
    }

    #[test]
    fn tolerance_allows_sparse_exceedances() {
        let b = derive_threshold(LevelDbm(-80.0), 13.0).unwrap();
        let mut levels = vec![-85.0; 1000];
        levels[500] = -50.0;
        assert!(!validate_wgn(&rec(levels.clone()), &b, 0.0).unwrap().passed);
        assert!(validate_wgn(&rec(levels.clone()), &b, 1e-3).unwrap().passed);
        assert!(matches!(
            validate_wgn(&rec(levels), &b, 1.5),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn million_sample_wgn_is_clean() {
        let r = generate_wgn(1_000_000, LevelDbm(-100.0), 11).unwrap();
        let b = Baseline::establish(&r, DEFAULT_OFFSET_DB).unwrap();
        let v = validate_wgn(&r, &b, 0.0).unwrap();
        assert!(v.passed, "unexpected exceedances {:?}", v.exceed_indices);
    }

    proptest! {
        #[test]
        fn rms_is_permutation_invariant(mut levels in prop::collection::vec(-120.0f64..-20.0, 1..200), seed in any::<u64>()) {
            let a = compute_rms_level(&rec(levels.clone())).unwrap().value();
            // deterministic shuffle
            let mut s = seed;
            for i in (1..levels.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                levels.swap(i, (s >> 33) as usize % (i + 1));
            }
            let b = compute_rms_level(&rec(levels)).unwrap().value();
            prop_assert!((a - b).abs() < 1e-9);
        }

        #[test]
        fn uniform_offset_shifts_rms(levels in prop::collection::vec(-120.0f64..-20.0, 1..200), c in -40.0f64..40.0) {
            let a = compute_rms_level(&rec(levels.clone())).unwrap().value();
            let shifted: Vec<f64> = levels.iter().map(|v| v + c).collect();
            let b = compute_rms_level(&rec(shifted)).unwrap().value();
            prop_assert!((b - a - c).abs() < 1e-9);
        }

        #[test]
        fn zero_tolerance_passes_iff_max_below_threshold(levels in prop::collection::vec(-100.0f64..-50.0, 1..100), rms in -90.0f64..-70.0) {
            let b = derive_threshold(LevelDbm(rms), 13.0).unwrap();
            let r = rec(levels.clone());
            let v = validate_wgn(&r, &b, 0.0).unwrap();
            let max = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert_eq!(v.passed, max <= b.threshold_dbm.value());
            for &i in &v.exceed_indices {
                prop_assert!(levels[i] > b.threshold_dbm.value());
            }
        }
    }
}
