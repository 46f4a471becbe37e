//! Impulse extraction and pulse-to-burst combination.
//!
//! A pulse is a maximal run of samples strictly above the threshold. Pulses
//! are combined greedily from left to right: the next pulse joins the current
//! burst when more than half of the samples in the extended span would be
//! above the threshold, otherwise the current burst is closed and the pulse
//! starts a new one.

use serde::{Deserialize, Serialize};

use crate::baseline::Baseline;
use crate::model::{power_mean_dbm, LevelDbm, SampleRecord};

/// Inclusive range of sample indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start_idx: usize,
    pub end_idx: usize,
}

impl Span {
    pub fn new(start_idx: usize, end_idx: usize) -> Self {
        debug_assert!(start_idx <= end_idx);
        Span { start_idx, end_idx }
    }

    pub fn len(&self) -> usize {
        self.end_idx - self.start_idx + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start_idx <= other.start_idx && other.end_idx <= self.end_idx
    }
}

/// A maximal run of consecutive above-threshold samples.
pub type Pulse = Span;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Burst {
    pub start_idx: usize,
    pub end_idx: usize,
    pub duration_ms: f64,
    pub amplitude_dbm: LevelDbm,
    pub above_count: usize,
    pub span_count: usize,
}

impl Burst {
    pub fn span(&self) -> Span {
        Span::new(self.start_idx, self.end_idx)
    }

    pub fn above_fraction(&self) -> f64 {
        self.above_count as f64 / self.span_count as f64
    }
}

/// All bursts detected in one record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurstSet {
    pub record_id: String,
    pub sample_rate_hz: f64,
    pub threshold_dbm: LevelDbm,
    #[serde(default)]
    pub event: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency_khz: Option<f64>,
    pub bursts: Vec<Burst>,
    pub separations_ms: Vec<f64>,
}

impl BurstSet {
    pub fn len(&self) -> usize {
        self.bursts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bursts.is_empty()
    }

    pub fn spans(&self) -> Vec<Span> {
        self.bursts.iter().map(Burst::span).collect()
    }
}

/// Edge-to-edge gaps between consecutive bursts, in milliseconds.
pub fn separations_ms(bursts: &[Burst], sample_rate_hz: f64) -> Vec<f64> {
    bursts
        .windows(2)
        .map(|w| (w[1].start_idx - w[0].end_idx) as f64 * 1000.0 / sample_rate_hz)
        .collect()
}

pub fn extract_pulses(record: &SampleRecord, threshold: LevelDbm) -> Vec<Pulse> {
    pulses_in(&record.levels, threshold.value())
}

fn pulses_in(levels: &[f64], threshold: f64) -> Vec<Pulse> {
    let mut pulses = Vec::new();
    let mut start = None;
    for (i, &v) in levels.iter().enumerate() {
        match (v > threshold, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                pulses.push(Span::new(s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        pulses.push(Span::new(s, levels.len() - 1));
    }
    pulses
}

/// Greedy left-to-right combination of ordered pulses into burst spans.
pub fn combine_pulses(pulses: &[Pulse], record: &SampleRecord, threshold: LevelDbm) -> Vec<Span> {
    let levels = &record.levels;
    let threshold = threshold.value();
    let count_above =
        |from: usize, to: usize| levels[from..to].iter().filter(|&&v| v > threshold).count();

    let mut spans = Vec::new();
    let mut iter = pulses.iter();
    let Some(first) = iter.next() else {
        return spans;
    };
    let mut current = *first;
    let mut above = count_above(current.start_idx, current.end_idx + 1);
    for pulse in iter {
        let gap_above = count_above(current.end_idx + 1, pulse.start_idx);
        let tentative_above = above + gap_above + pulse.len();
        let tentative_len = pulse.end_idx - current.start_idx + 1;
        // strictly more than half: 2a > n avoids any rounding
        if 2 * tentative_above > tentative_len {
            current.end_idx = pulse.end_idx;
            above = tentative_above;
        } else {
            spans.push(current);
            current = *pulse;
            above = pulse.len();
        }
    }
    spans.push(current);
    spans
}

pub fn parameterize_burst(record: &SampleRecord, span: Span, threshold: LevelDbm) -> Burst {
    let samples = &record.levels[span.start_idx..=span.end_idx];
    let above_count = samples.iter().filter(|&&v| v > threshold.value()).count();
    let span_count = span.len();
    Burst {
        start_idx: span.start_idx,
        end_idx: span.end_idx,
        duration_ms: span_count as f64 * 1000.0 / record.sample_rate_hz,
        amplitude_dbm: LevelDbm(power_mean_dbm(samples).expect("span is non-empty")),
        above_count,
        span_count,
    }
}

/// Full detection pipeline: pulses, combination, then per-burst parameters.
pub fn detect_bursts(record: &SampleRecord, baseline: &Baseline) -> BurstSet {
    detect_bursts_at(record, baseline.threshold_dbm)
}

pub fn detect_bursts_at(record: &SampleRecord, threshold: LevelDbm) -> BurstSet {
    let pulses = extract_pulses(record, threshold);
    let bursts: Vec<Burst> = combine_pulses(&pulses, record, threshold)
        .into_iter()
        .map(|span| parameterize_burst(record, span, threshold))
        .collect();
    let separations_ms = separations_ms(&bursts, record.sample_rate_hz);
    BurstSet {
        record_id: record.id.clone(),
        sample_rate_hz: record.sample_rate_hz,
        threshold_dbm: threshold,
        event: record.meta.event.clone(),
        frequency_khz: record.meta.frequency_khz,
        bursts,
        separations_ms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::{derive_threshold, DEFAULT_OFFSET_DB};
    use crate::model::RecordKind;
    use crate::synth::{brute_force_segment, generate_wgn, inject_bursts, BurstEventSpec};
    use proptest::prelude::*;

    const LOW: f64 = -90.0;
    const HIGH: f64 = -50.0;
    const THRESHOLD: LevelDbm = LevelDbm(-67.0);

    fn record_with_high(n: usize, high: &[usize], fs: f64) -> SampleRecord {
        let mut levels = vec![LOW; n];
        for &i in high {
            levels[i] = HIGH;
        }
        SampleRecord::new("t", levels, fs, RecordKind::In)
    }

    fn spans(pairs: &[(usize, usize)]) -> Vec<Span> {
        pairs.iter().map(|&(a, b)| Span::new(a, b)).collect()
    }

    #[test]
    fn no_pulses_below_threshold() {
        let r = record_with_high(30, &[], 1000.0);
        assert!(extract_pulses(&r, THRESHOLD).is_empty());
        assert!(detect_bursts_at(&r, THRESHOLD).is_empty());
    }

    #[test]
    fn pulses_are_maximal_runs() {
        let r = record_with_high(30, &[10, 11, 13], 1000.0);
        assert_eq!(extract_pulses(&r, THRESHOLD), spans(&[(10, 11), (13, 13)]));
    }

    #[test]
    fn whole_record_above_is_one_pulse() {
        let r = SampleRecord::new("t", vec![HIGH; 17], 1000.0, RecordKind::In);
        assert_eq!(extract_pulses(&r, THRESHOLD), spans(&[(0, 16)]));
        assert_eq!(detect_bursts_at(&r, THRESHOLD).spans(), spans(&[(0, 16)]));
    }

    #[test]
    fn combination_hand_traces() {
        // 3 of 4 above
        let r = record_with_high(30, &[10, 11, 13], 1000.0);
        let p = extract_pulses(&r, THRESHOLD);
        assert_eq!(combine_pulses(&p, &r, THRESHOLD), spans(&[(10, 13)]));

        // 3 of 11 above
        let r = record_with_high(30, &[10, 11, 20], 1000.0);
        let p = extract_pulses(&r, THRESHOLD);
        assert_eq!(
            combine_pulses(&p, &r, THRESHOLD),
            spans(&[(10, 11), (20, 20)])
        );

        // 5 of 8 above
        let r = record_with_high(30, &[10, 11, 12, 16, 17], 1000.0);
        let p = extract_pulses(&r, THRESHOLD);
        assert_eq!(combine_pulses(&p, &r, THRESHOLD), spans(&[(10, 17)]));
    }

    #[test]
    fn exactly_half_does_not_merge() {
        // span 10..13 has 2 of 4 above
        let r = record_with_high(30, &[10, 13], 1000.0);
        let p = extract_pulses(&r, THRESHOLD);
        assert_eq!(
            combine_pulses(&p, &r, THRESHOLD),
            spans(&[(10, 10), (13, 13)])
        );
    }

    #[test]
    fn burst_parameters() {
        let r = SampleRecord::new(
            "t",
            vec![-90.0, -60.0, -70.0, -90.0],
            1000.0,
            RecordKind::In,
        );
        let b = parameterize_burst(&r, Span::new(1, 2), LevelDbm(-80.0));
        assert!((b.amplitude_dbm.value() + 62.5964).abs() < 1e-3);
        assert_eq!(b.duration_ms, 2.0);

        let r = record_with_high(10, &[2, 3, 4, 5], 1000.0);
        let b = parameterize_burst(&r, Span::new(2, 5), THRESHOLD);
        assert_eq!(b.duration_ms, 4.0);
        assert_eq!((b.above_count, b.span_count), (4, 4));

        let r = SampleRecord::new("t", vec![-90.0, -55.5, -90.0], 8001.0, RecordKind::In);
        let b = parameterize_burst(&r, Span::new(1, 1), THRESHOLD);
        assert!((b.amplitude_dbm.value() + 55.5).abs() < 1e-12);
        assert_eq!(b.duration_ms, 1000.0 / 8001.0);
    }

    #[test]
    fn amplitude_includes_sub_threshold_samples() {
        let r = record_with_high(30, &[10, 11, 13], 1000.0);
        let set = detect_bursts_at(&r, THRESHOLD);
        let b = &set.bursts[0];
        assert_eq!((b.above_count, b.span_count), (3, 4));
        let expected = power_mean_dbm(&[HIGH, HIGH, LOW, HIGH]).unwrap();
        assert_eq!(b.amplitude_dbm.value(), expected);
    }

    #[test]
    fn separations_are_edge_to_edge() {
        let r = record_with_high(300, &[10, 11, 110, 230], 1000.0);
        let set = detect_bursts_at(&r, THRESHOLD);
        assert_eq!(set.len(), 3);
        assert_eq!(set.separations_ms, vec![99.0, 120.0]);
    }

    #[test]
    fn injected_bursts_recovered() {
        let wgn = generate_wgn(100_000, LevelDbm(-100.0), 5).unwrap();
        let baseline = derive_threshold(LevelDbm(-100.0), DEFAULT_OFFSET_DB).unwrap();
        let events: Vec<BurstEventSpec> = (0..5)
            .map(|k| BurstEventSpec::constant(1000 + k * 510, 10, 25.0))
            .collect();
        let injected = inject_bursts(&wgn, &events).unwrap();
        let set = detect_bursts(&injected.record, &baseline);
        assert_eq!(set.len(), 5);
        for (b, truth) in set.bursts.iter().zip(&injected.spans) {
            assert!(b.span().contains(truth));
        }
    }

    fn arb_record() -> impl Strategy<Value = SampleRecord> {
        prop::collection::vec(prop::bool::weighted(0.45), 1..=64).prop_map(|bits| {
            let levels = bits
                .into_iter()
                .map(|b| if b { HIGH } else { LOW })
                .collect();
            SampleRecord::new("p", levels, 8001.0, RecordKind::In)
        })
    }

    proptest! {
        #[test]
        fn bursts_satisfy_invariants(r in arb_record()) {
            let set = detect_bursts_at(&r, THRESHOLD);
            for b in &set.bursts {
                prop_assert!(2 * b.above_count > b.span_count);
                prop_assert!(r.levels[b.start_idx] > THRESHOLD.0);
                prop_assert!(r.levels[b.end_idx] > THRESHOLD.0);
                prop_assert_eq!(b.duration_ms, b.span_count as f64 * 1000.0 / r.sample_rate_hz);
            }
            for (w, sep) in set.bursts.windows(2).zip(&set.separations_ms) {
                prop_assert!(w[0].end_idx < w[1].start_idx);
                prop_assert!(*sep > 0.0);
            }
            prop_assert_eq!(set.separations_ms.len(), set.len().saturating_sub(1));
        }

        #[test]
        fn greedy_matches_naive_oracle(r in arb_record()) {
            let p = extract_pulses(&r, THRESHOLD);
            prop_assert_eq!(combine_pulses(&p, &r, THRESHOLD), brute_force_segment(&r, THRESHOLD));
        }

        #[test]
        fn detection_is_deterministic(r in arb_record()) {
            prop_assert_eq!(detect_bursts_at(&r, THRESHOLD), detect_bursts_at(&r, THRESHOLD));
        }

        #[test]
        fn raising_threshold_never_adds_impulses(levels in prop::collection::vec(-100.0f64..-40.0, 1..200), t in -90.0f64..-50.0, d in 0.0f64..20.0) {
            let r = SampleRecord::new("m", levels, 1000.0, RecordKind::In);
            let count = |t: f64| extract_pulses(&r, LevelDbm(t)).iter().map(Span::len).sum::<usize>();
            prop_assert!(count(t + d) <= count(t));
        }
    }
}
