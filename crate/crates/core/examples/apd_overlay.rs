//! Amplitude probability distributions of a WGN record and an IN record on
//! a shared level grid, ready to be overlaid on a log-probability axis.
//!
//! ```bash
//! cargo run -p impnoise --example apd_overlay
//! ```

use impnoise::prelude::*;

fn main() -> impnoise::Result<()> {
    let wgn = generate_wgn(40_005, LevelDbm(-80.0), 10)?;
    let impulsive = inject_bursts(
        &generate_wgn(40_005, LevelDbm(-80.0), 11)?,
        &periodic_events(2_000, 31, 4, 951, 24.0),
    )?;

    let (wgn_apd, in_apd) = apd_pair(&wgn, &impulsive.record, Some(1.0))?;
    println!(
        "{:>10} {:>12} {:>12}",
        "level dBm", "P(WGN > L)", "P(IN > L)"
    );
    for (w, i) in wgn_apd.points.iter().zip(&in_apd.points) {
        println!(
            "{:>10.1} {:>12.3e} {:>12.3e}",
            w.level_dbm, w.exceedance, i.exceedance
        );
    }

    let out = std::env::temp_dir().join("impnoise-apd.csv");
    impnoise::io::write_apd_csv(&wgn_apd, Some(&in_apd), &out)?;
    println!("written to {}", out.display());
    Ok(())
}
