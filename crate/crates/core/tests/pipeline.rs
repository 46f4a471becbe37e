use impnoise::prelude::*;

/// Four trains of short pulses (3 samples on, 1 off) separated by quiet
/// stretches, recorded at 630 kHz and 8001 samples per second.
fn pulse_train_record() -> (SampleRecord, Baseline) {
    let wgn = generate_wgn(32_004, LevelDbm(-85.0), 630).unwrap();
    let baseline = Baseline::establish(&wgn, DEFAULT_OFFSET_DB).unwrap();
    let mut events = Vec::new();
    for (train, pulses) in [(3_000, 6), (9_500, 12), (17_000, 4), (26_000, 9)] {
        for k in 0..pulses {
            events.push(BurstEventSpec::constant(train + 4 * k, 3, 22.0));
        }
    }
    let background = generate_wgn(32_004, LevelDbm(-85.0), 631).unwrap();
    let mut record = inject_bursts(&background, &events).unwrap().record;
    record.meta.frequency_khz = Some(630.0);
    (record, baseline)
}

#[test]
fn pulse_trains_combine_into_four_bursts() {
    let (record, baseline) = pulse_train_record();
    let pulses = extract_pulses(&record, baseline.threshold_dbm);
    assert_eq!(pulses.len(), 6 + 12 + 4 + 9);
    let set = detect_bursts(&record, &baseline);
    assert_eq!(set.len(), 4);
    let durations: Vec<usize> = set.bursts.iter().map(|b| b.span_count).collect();
    assert_eq!(durations, [23, 47, 15, 35]);
    for b in &set.bursts {
        assert!(b.above_fraction() > 0.5 && b.above_fraction() < 1.0);
    }
}

#[test]
fn five_injected_bursts_are_recovered_at_their_spans() {
    let wgn = generate_wgn(100_000, LevelDbm(-100.0), 17).unwrap();
    let baseline = Baseline::establish(&wgn, DEFAULT_OFFSET_DB).unwrap();
    let events: Vec<BurstEventSpec> = (0..5)
        .map(|k| BurstEventSpec::constant(20_000 + 510 * k, 10, 25.0))
        .collect();
    let injected = inject_bursts(&wgn, &events).unwrap();
    let set = detect_bursts(&injected.record, &baseline);
    assert_eq!(set.spans(), injected.spans);
    let stats = measurement_stats(&set);
    assert_eq!(stats.n_bursts, 5);
    assert!((stats.avg_duration_ms.unwrap() - 10.0 * 1000.0 / 8001.0).abs() < 1e-9);
    assert!((stats.avg_separation_ms.unwrap() - 501.0 * 1000.0 / 8001.0).abs() < 1e-9);
}

#[test]
fn detection_never_changes_between_runs() {
    let (record, baseline) = pulse_train_record();
    let a = detect_bursts(&record, &baseline);
    let b = detect_bursts(&record.clone(), &baseline.clone());
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}
