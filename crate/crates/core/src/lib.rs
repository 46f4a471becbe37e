//! Measurement post-processing for radio impulsive noise produced by a
//! specific source.
//!
//! The pipeline follows the usual two-phase procedure: a WGN record taken
//! with the source switched off fixes the background r.m.s. level and a
//! detection threshold 13 dB above it; IN records taken while the source
//! operates are then segmented into bursts, parameterized, averaged per
//! measurement and aggregated over a campaign. Amplitude probability
//! distributions are available as a complementary view.
//!
//! ```
//! use impnoise::prelude::*;
//!
//! let wgn = generate_wgn(20_000, LevelDbm(-100.0), 1).unwrap();
//! let baseline = Baseline::establish(&wgn, DEFAULT_OFFSET_DB).unwrap();
//! assert!(validate_wgn(&wgn, &baseline, 0.0).unwrap().passed);
//!
//! let events = [BurstEventSpec::constant(5_000, 8, 25.0)];
//! let injected = inject_bursts(&wgn, &events).unwrap();
//! let bursts = detect_bursts(&injected.record, &baseline);
//! assert_eq!(bursts.len(), 1);
//! assert_eq!(measurement_stats(&bursts).n_bursts, 1);
//! ```

pub mod apd;
pub mod baseline;
pub mod bursts;
pub mod cli;
pub mod error;
pub mod io;
pub mod model;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::apd::{apd_pair, compute_apd, ApdCurve, ApdPoint};
    pub use crate::baseline::{
        compute_rms_level, derive_threshold, validate_wgn, Baseline, WgnValidation,
        DEFAULT_OFFSET_DB,
    };
    pub use crate::bursts::{
        combine_pulses, detect_bursts, extract_pulses, parameterize_burst, Burst, BurstSet, Pulse,
        Span,
    };
    pub use crate::error::{Error, Result};
    pub use crate::model::{
        dbm_to_mw, mw_to_dbm, validate_record, LevelDbm, MeasurementMeta, PowerMw, RecordKind,
        SampleRecord,
    };
    pub use crate::stats::{
        aggregate_campaign, main_burst, measurement_stats, measurement_stats_with_main_burst,
        std_dev, CampaignMeta, MainBurst, MeasurementStats, SourceCharacterization,
    };
    pub use crate::synth::{
        brute_force_segment, generate_wgn, inject_bursts, periodic_events, BurstEventSpec,
        EventShape,
    };
}
