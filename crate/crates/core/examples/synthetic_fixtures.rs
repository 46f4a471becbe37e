//! Reproducible test fixtures: seeded Rayleigh-envelope noise with injected
//! events, checked against both the ground truth and the brute-force
//! segmentation.
//!
//! ```bash
//! cargo run -p impnoise --example synthetic_fixtures
//! ```

use impnoise::prelude::*;

fn main() -> impnoise::Result<()> {
    let seed = 2024;
    let wgn = generate_wgn(8_001, LevelDbm(-95.0), seed)?;
    let baseline = Baseline::establish(&wgn, DEFAULT_OFFSET_DB)?;

    let events = [
        BurstEventSpec::constant(400, 12, 25.0),
        BurstEventSpec {
            start_idx: 2_000,
            length_samples: 30,
            level_offset_db: 32.0,
            shape: EventShape::Decaying { drop_db: 10.0 },
        },
        BurstEventSpec::constant(5_500, 3, 20.0),
    ];
    let injected = inject_bursts(&generate_wgn(8_001, LevelDbm(-95.0), seed + 1)?, &events)?;
    let set = detect_bursts(&injected.record, &baseline);

    for (truth, burst) in injected.spans.iter().zip(&set.bursts) {
        println!(
            "injected {:>5}..{:<5} detected {:>5}..{:<5} contained: {}",
            truth.start_idx,
            truth.end_idx,
            burst.start_idx,
            burst.end_idx,
            burst.span().contains(truth)
        );
    }
    let oracle = brute_force_segment(&injected.record, baseline.threshold_dbm);
    println!(
        "greedy and brute-force segmentations agree: {}",
        oracle == set.spans()
    );

    let again = generate_wgn(8_001, LevelDbm(-95.0), seed)?;
    println!(
        "seed {seed} regenerates the identical record: {}",
        again == wgn
    );
    Ok(())
}
