#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use impnoise::prelude::*;
use impnoise::synth::periodic_events;
use rand::Rng;

/// Flickering-tube style IN record: `count` short bursts roughly every
/// 119 ms at 8001 Hz, inside a 40005-sample WGN record.
pub fn flicker_record(seed: u64, count: usize, mean_dbm: f64) -> (SampleRecord, Vec<Span>) {
    let wgn = generate_wgn(40_005, LevelDbm(mean_dbm), seed).unwrap();
    let events = periodic_events(2_000, count, 4, 951, 24.0);
    let injected = inject_bursts(&wgn, &events).unwrap();
    let mut record = injected.record;
    record.id = format!("flicker-{seed}");
    record.meta = MeasurementMeta {
        frequency_khz: Some(1910.0),
        event: "turn on seven flickering tubes".into(),
        location: "classroom".into(),
        source: "fluorescent tubes".into(),
        started_at: None,
    };
    (record, injected.spans)
}

/// Random non-overlapping events, each followed by a gap of at least
/// `min_gap_factor` times the longer of its two neighbours.
pub fn random_events<R: Rng>(
    rng: &mut R,
    n: usize,
    max_events: usize,
    max_len: usize,
    offset_db: std::ops::Range<f64>,
    min_gap_factor: usize,
    keep_above_db: Option<f64>,
) -> Vec<BurstEventSpec> {
    let count = rng.random_range(0..=max_events);
    let mut events = Vec::new();
    let mut cursor = rng.random_range(0..=max_len);
    let mut prev_len = 0usize;
    for _ in 0..count {
        let len = rng.random_range(1..=max_len);
        let gap = min_gap_factor * prev_len.max(len);
        let start = if events.is_empty() {
            cursor
        } else {
            cursor + gap + rng.random_range(0..=max_len)
        };
        if start + len > n {
            break;
        }
        let offset = rng.random_range(offset_db.clone());
        let shape = if rng.random_bool(0.5) {
            EventShape::Constant
        } else {
            let max_drop = keep_above_db.map_or(15.0, |floor| (offset - floor).max(0.0));
            EventShape::Decaying {
                drop_db: rng.random_range(0.0..=max_drop),
            }
        };
        events.push(BurstEventSpec {
            start_idx: start,
            length_samples: len,
            level_offset_db: offset,
            shape,
        });
        cursor = start + len;
        prev_len = len;
    }
    events
}

pub fn write_flicker_campaign(dir: &Path, n_measurements: usize) -> PathBuf {
    let mut wgn = generate_wgn(40_005, LevelDbm(-78.0), 100).unwrap();
    wgn.id = "wgn".into();
    wgn.meta.frequency_khz = Some(1910.0);
    impnoise::io::write_record(&wgn, &dir.join("wgn.csv")).unwrap();
    let mut names = Vec::new();
    for k in 0..n_measurements {
        let (rec, _) = flicker_record(200 + k as u64, 31 - k % 2, -78.0);
        let name = format!("in_{}.csv", k + 1);
        impnoise::io::write_record(&rec, &dir.join(&name)).unwrap();
        names.push(name);
    }
    let manifest = serde_json::json!({
        "wgn_record": "wgn.csv",
        "in_records": names,
        "event": "turn on seven flickering tubes",
        "frequency_khz": 1910.0,
        "location": "classroom",
        "source": "fluorescent tubes",
    });
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
    path
}

/// Every file under `root`, relative path and contents, sorted by path.
pub fn snapshot(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(PathBuf, Vec<u8>)>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.push((
                    path.strip_prefix(root).unwrap().to_path_buf(),
                    fs::read(&path).unwrap(),
                ));
            }
        }
    }
    let mut out = Vec::new();
    walk(root, root, &mut out);
    out.sort();
    out
}
