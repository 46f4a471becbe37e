//! End-to-end campaign on disk: write a WGN record, two IN records and a
//! manifest, then run the same driver as `impnoise campaign`.
//!
//! ```bash
//! cargo run -p impnoise --example full_campaign
//! ```

use std::fs;

use impnoise::cli::{cmd_campaign, CampaignArgs, CampaignOutcome};
use impnoise::io::{self, CampaignManifest};
use impnoise::prelude::*;

fn main() -> impnoise::Result<()> {
    let dir = std::env::temp_dir().join("impnoise-campaign");
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).expect("temp dir is writable");

    let meta = MeasurementMeta {
        frequency_khz: Some(1910.0),
        event: "turn on seven flickering tubes".into(),
        location: "classroom, ground floor".into(),
        source: "fluorescent tubes".into(),
        started_at: None,
    };

    let mut wgn = generate_wgn(40_005, LevelDbm(-78.0), 1)?.with_meta(meta.clone());
    wgn.id = "wgn".into();
    io::write_record(&wgn, &dir.join("wgn.csv"))?;

    let mut in_records = Vec::new();
    for (k, count) in [31, 30].into_iter().enumerate() {
        let background = generate_wgn(40_005, LevelDbm(-78.0), 10 + k as u64)?;
        let mut record = inject_bursts(
            &background,
            &periodic_events(1_500, count, 4 + k, 900 + 40 * k, 23.0),
        )?
        .record;
        record.id = format!("tubes-{}", k + 1);
        record.meta = meta.clone();
        let name = format!("{}.csv", record.id);
        io::write_record(&record, &dir.join(&name))?;
        in_records.push(name.into());
    }

    let manifest = CampaignManifest {
        wgn_record: "wgn.csv".into(),
        in_records,
        event: meta.event.clone(),
        frequency_khz: 1910.0,
        location: meta.location.clone(),
        source: meta.source.clone(),
        offset_db: DEFAULT_OFFSET_DB,
        max_exceed_fraction: 0.0,
    };
    io::write_manifest(&manifest, &dir.join("manifest.json"))?;

    let outcome = cmd_campaign(&CampaignArgs {
        manifest: dir.join("manifest.json"),
        out: dir.join("out"),
    })?;
    match outcome {
        CampaignOutcome::BaselineRejected(b) => {
            println!(
                "baseline rejected: {} exceedances",
                b.validation.exceed_count
            );
        }
        CampaignOutcome::Completed { measurements, .. } => {
            for m in &measurements {
                println!("{:<8} {} bursts", m.record_id, m.n_bursts);
            }
            print!(
                "{}",
                fs::read_to_string(dir.join("out/campaign.csv")).expect("campaign report written")
            );
            println!("outputs in {}", dir.join("out").display());
        }
    }
    Ok(())
}
