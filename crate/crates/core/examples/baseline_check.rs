//! Establish the background level of a location and check that the WGN
//! record is free of impulses before any IN measurement is analyzed.
//!
//! ```bash
//! cargo run -p impnoise --example baseline_check
//! ```

use impnoise::prelude::*;

fn main() -> impnoise::Result<()> {
    // Four seconds at 8001 samples per second, source switched off.
    let mut wgn = generate_wgn(32_004, LevelDbm(-82.0), 1620)?;
    wgn.meta.frequency_khz = Some(1620.0);

    let baseline = Baseline::establish(&wgn, DEFAULT_OFFSET_DB)?;
    println!("r.m.s. level : {:8.2} dBm", baseline.rms_dbm.value());
    println!(
        "threshold    : {:8.2} dBm (+{} dB)",
        baseline.threshold_dbm.value(),
        baseline.offset_db
    );

    let check = validate_wgn(&wgn, &baseline, 0.0)?;
    println!(
        "peak level   : {:8.2} dBm, {} sample(s) above threshold -> {}",
        check.max_level_dbm.value(),
        check.exceed_count,
        if check.passed {
            "clean"
        } else {
            "contaminated"
        }
    );

    // The same check on a record where something switched on mid-way.
    let contaminated = inject_bursts(&wgn, &[BurstEventSpec::constant(16_000, 5, 20.0)])?.record;
    let check = validate_wgn(&contaminated, &baseline, 0.0)?;
    println!(
        "with impulses: {} sample(s) above threshold at {:?} -> {}",
        check.exceed_count,
        check.exceed_indices,
        if check.passed {
            "clean"
        } else {
            "contaminated"
        }
    );
    Ok(())
}
