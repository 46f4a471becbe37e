//! Characterize a source from the per-measurement averages of two
//! repetitions of the same event (seven flickering tubes turning on,
//! 1910 kHz).
//!
//! ```bash
//! cargo run -p impnoise --example campaign_summary
//! ```

use impnoise::prelude::*;

fn measurement(
    id: &str,
    n: usize,
    duration_ms: f64,
    amplitude_dbm: f64,
    separation_ms: f64,
) -> MeasurementStats {
    MeasurementStats {
        record_id: id.into(),
        event: "turn on seven flickering tubes".into(),
        frequency_khz: Some(1910.0),
        n_bursts: n,
        avg_duration_ms: Some(duration_ms),
        avg_amplitude_dbm: Some(LevelDbm(amplitude_dbm)),
        avg_separation_ms: Some(separation_ms),
        main_burst: None,
    }
}

fn main() -> impnoise::Result<()> {
    let measurements = [
        measurement("measurement 1", 31, 0.53, -64.70, 118.91),
        measurement("measurement 2", 30, 0.65, -66.21, 103.13),
    ];
    let meta = CampaignMeta {
        event: "turn on seven flickering tubes".into(),
        frequency_khz: Some(1910.0),
    };
    let c = aggregate_campaign(&measurements, &meta)?;

    println!(
        "{} measurements, {} with bursts",
        c.n_measurements, c.n_with_bursts
    );
    // Same rounded table the campaign subcommand writes to campaign.csv.
    print!("{}", impnoise::io::campaign_csv(&c));
    Ok(())
}
