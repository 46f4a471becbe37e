//! Report the dominant burst of a measurement apart from the others.
//!
//! ```bash
//! cargo run -p impnoise --example main_burst
//! ```

use impnoise::prelude::*;

fn main() -> impnoise::Result<()> {
    let wgn = generate_wgn(40_005, LevelDbm(-80.0), 3)?;
    let baseline = Baseline::establish(&wgn, DEFAULT_OFFSET_DB)?;

    // A long ignition burst followed by short flicker.
    let mut events = vec![BurstEventSpec {
        start_idx: 1_000,
        length_samples: 400,
        level_offset_db: 30.0,
        shape: EventShape::Decaying { drop_db: 8.0 },
    }];
    events.extend((0..10).map(|k| BurstEventSpec::constant(5_000 + 2_500 * k, 4, 22.0)));
    let record = inject_bursts(&generate_wgn(40_005, LevelDbm(-80.0), 4)?, &events)?.record;

    let set = detect_bursts(&record, &baseline);
    let all = measurement_stats(&set);
    println!(
        "all bursts  : n = {:>2}, avg duration {:.3} ms, avg amplitude {:.2} dBm",
        all.n_bursts,
        all.avg_duration_ms.unwrap_or(f64::NAN),
        all.avg_amplitude_dbm.map_or(f64::NAN, |a| a.value())
    );
    if let Some(main) = main_burst(&set) {
        println!(
            "main burst  : #{} at sample {}, {:.3} ms, {:.2} dBm, {:.1}x the next longest",
            main.index + 1,
            main.start_idx,
            main.duration_ms,
            main.amplitude_dbm.value(),
            main.ratio_to_second_longest.unwrap_or(f64::NAN)
        );
        let rest = &main.others;
        println!(
            "without it  : n = {:>2}, avg duration {:.3} ms, avg amplitude {:.2} dBm, avg separation {:.2} ms",
            rest.n_bursts,
            rest.avg_duration_ms.unwrap_or(f64::NAN),
            rest.avg_amplitude_dbm.map_or(f64::NAN, |a| a.value()),
            rest.avg_separation_ms.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
