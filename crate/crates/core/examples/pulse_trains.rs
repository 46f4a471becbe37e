//! Separate impulsive samples from the background and combine pulse trains
//! into bursts.
//!
//! Pulses closer together than their own length merge as long as more than
//! half of the samples in the resulting burst stay above the threshold.
//!
//! ```bash
//! cargo run -p impnoise --example pulse_trains
//! ```

use impnoise::prelude::*;

fn main() -> impnoise::Result<()> {
    let wgn = generate_wgn(32_004, LevelDbm(-85.0), 1)?;
    let baseline = Baseline::establish(&wgn, DEFAULT_OFFSET_DB)?;

    // Four trains of 3-sample pulses with 1-sample gaps, tubes switching on
    // at 630 kHz.
    let mut events = Vec::new();
    for (start, pulses) in [(3_000, 6), (9_500, 12), (17_000, 4), (26_000, 9)] {
        events.extend((0..pulses).map(|k| BurstEventSpec::constant(start + 4 * k, 3, 22.0)));
    }
    let mut record = inject_bursts(&generate_wgn(32_004, LevelDbm(-85.0), 2)?, &events)?.record;
    record.meta.frequency_khz = Some(630.0);

    let pulses = extract_pulses(&record, baseline.threshold_dbm);
    let set = detect_bursts(&record, &baseline);
    println!("{} pulses combined into {} bursts", pulses.len(), set.len());
    println!(
        "{:>3} {:>10} {:>12} {:>15} {:>8}",
        "#", "start (ms)", "duration (ms)", "amplitude (dBm)", "above"
    );
    for (i, b) in set.bursts.iter().enumerate() {
        println!(
            "{:>3} {:>10.2} {:>12.3} {:>15.2} {:>7.0}%",
            i + 1,
            b.start_idx as f64 * record.period_ms(),
            b.duration_ms,
            b.amplitude_dbm.value(),
            100.0 * b.above_fraction()
        );
    }
    println!("separations (ms): {:.2?}", set.separations_ms);
    Ok(())
}
