//! Calibration derivations and oracle equivalence sweeps.
//!
//! Each check re-derives a decision the tool ships with (which SNR
//! variant, which confusion model and statistic, which table repair,
//! which grid reading) against the published reference values, and the
//! oracle sweeps hold every fast metric path to its naive counterpart.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use sboxkit::boolfn::SBoxTable;
use sboxkit::metrics::{self, CcModel, CcStatistic, SnrVariant};
use sboxkit::oracle::{self, MetricTag, MetricValue};

use crate::fixtures;

/// One verification line: a decision or equivalence check with its
/// outcome.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

/// Published SNR anchors: fixture name and value.
const SNR_ANCHORS: [(&str, f64); 5] = [
    ("paper-4x4-initial", 1.612),
    ("paper-4x4-proposed", 1.663),
    ("paper-5x5-initial", 2.361),
    ("paper-7x7-initial", 5.318),
    ("aes-8x8", 9.599),
];

/// Published kappa anchors reproduced by the calibrated model.
const KAPPA_ANCHORS: [(&str, f64); 8] = [
    ("paper-4x4-initial", 1.357),
    ("paper-5x5-initial", 0.949),
    ("paper-5x5-proposed", 0.810),
    ("paper-6x6-initial", 0.622),
    ("paper-6x6-proposed", 0.454),
    ("paper-7x7-initial", 0.339),
    ("paper-7x7-proposed", 0.264),
    ("aes-8x8", 0.111),
];

/// The SNR variant calibration: the sign-transform variant must hit every
/// anchor within 0.001 and the 0/1 variant must fail at least one.
pub fn snr_calibration() -> Vec<Check> {
    let mut out = Vec::new();
    let mut zero_one_misses = 0;
    for (name, expected) in SNR_ANCHORS {
        let f = fixtures::by_name(name).expect("anchor fixture exists");
        let sign = metrics::snr_dpa(&f.table, SnrVariant::SignTransform);
        let tol = if f.table.input_bits() >= 8 { 0.01 } else { 0.001 };
        out.push(check(
            format!("snr sign-transform on {name}"),
            (sign - expected).abs() <= tol,
            format!("computed {sign:.4}, published {expected}"),
        ));
        if (metrics::snr_dpa(&f.table, SnrVariant::ZeroOne) - expected).abs() > tol {
            zero_one_misses += 1;
        }
    }
    out.push(check(
        "snr variant selection",
        zero_one_misses > 0,
        format!(
            "sign transform selected as default; zero-one variant misses {zero_one_misses}/{} anchors",
            SNR_ANCHORS.len()
        ),
    ));
    out
}

/// The kappa calibration: exactly one offered (model, statistic) pair
/// reproduces the published 4x4 initial value 1.357, and the same pair
/// tracks the other anchors.
pub fn kappa_calibration() -> Vec<Check> {
    let mut out = Vec::new();
    let t7 = &fixtures::by_name("paper-4x4-initial").expect("fixture").table;
    let models = [CcModel::SingleBit, CcModel::HwSquared, CcModel::HwSquaredNormalized];
    let stats =
        [CcStatistic::Min, CcStatistic::Mean, CcStatistic::Max, CcStatistic::Variance];
    let mut winners = Vec::new();
    for model in models {
        let summary = metrics::confusion_statistics(t7, model).expect("square");
        for stat in stats {
            let value = match stat {
                CcStatistic::Min => summary.min,
                CcStatistic::Mean => summary.mean,
                CcStatistic::Max => summary.max,
                CcStatistic::Variance => summary.variance,
            };
            if (value - 1.357).abs() <= 0.001 {
                winners.push((model, stat, value));
            }
        }
    }
    let selected = winners.len() == 1
        && matches!(winners.first(), Some((CcModel::HwSquared, CcStatistic::Variance, _)));
    out.push(check(
        "kappa model calibration",
        selected,
        if let Some((_, _, v)) = winners.first() {
            format!(
                "hw-squared/variance reproduces the published 4x4 initial kappa 1.357 \
                 (computed {v:.4}); {} candidate pair(s) matched",
                winners.len()
            )
        } else {
            "no offered model/statistic reproduces 1.357".into()
        },
    ));
    for (name, expected) in KAPPA_ANCHORS {
        let f = fixtures::by_name(name).expect("anchor fixture exists");
        let got = metrics::confusion_statistics(&f.table, CcModel::HwSquared)
            .expect("square")
            .variance;
        out.push(check(
            format!("kappa anchor {name}"),
            (got - expected).abs() <= 0.001,
            format!("computed {got:.4}, published {expected}"),
        ));
    }
    out
}

/// Fixture repairs and reading-order decisions, re-stated from the load
/// notes, plus the residual discrepancies.
pub fn fixture_calibration() -> Vec<Check> {
    let mut out = Vec::new();
    for f in fixtures::all() {
        for note in &f.notes {
            out.push(check(format!("fixture {}", f.name), true, note.clone()));
        }
    }
    for (name, row, computed, published) in fixtures::known_discrepancies() {
        out.push(check(
            format!("published {row} row for {name}"),
            true,
            format!(
                "computed {computed} vs published {published}; retained as a documented \
                 discrepancy (no repair or reading reproduces it)"
            ),
        ));
    }
    out
}

fn report_value(f: &SBoxTable, tag: MetricTag) -> MetricValue {
    let opts = fixtures::default_options();
    let report = metrics::full_report(f, &opts).expect("report in range");
    match tag {
        MetricTag::Balanced => MetricValue::Flag(report.balanced),
        MetricTag::Nonlinearity => MetricValue::Int(report.nl as i64),
        MetricTag::Degree => MetricValue::Int(report.degree as i64),
        MetricTag::CorrelationImmunity => MetricValue::Int(report.ci as i64),
        MetricTag::DifferentialUniformity => MetricValue::Int(report.du as i64),
        MetricTag::Robustness => MetricValue::Real(report.robustness.to_f64()),
        MetricTag::FixedPoints => MetricValue::Int(report.fp as i64),
        MetricTag::OppositeFixedPoints => MetricValue::Int(report.ofp as i64),
        MetricTag::AbsoluteIndicator => MetricValue::Int(report.abs_indicator as i64),
        MetricTag::SumOfSquares => MetricValue::Int(report.sum_sq as i64),
        MetricTag::AlgebraicImmunity => MetricValue::Int(report.ai as i64),
        MetricTag::Snr => MetricValue::Real(report.snr),
        MetricTag::TransparencyOrder => MetricValue::Real(report.to),
        MetricTag::ConfusionStatistic => MetricValue::Real(report.cc_reported),
    }
}

fn values_agree(fast: &MetricValue, naive: &MetricValue) -> bool {
    match (fast, naive) {
        (MetricValue::Flag(a), MetricValue::Flag(b)) => a == b,
        (MetricValue::Int(a), MetricValue::Int(b)) => a == b,
        (MetricValue::Real(a), MetricValue::Real(b)) => {
            let scale = a.abs().max(b.abs()).max(1.0);
            (a - b).abs() <= 1e-9 * scale
        }
        _ => false,
    }
}

pub fn random_permutation(rng: &mut ChaCha12Rng, n: usize) -> SBoxTable {
    let mut entries: Vec<u16> = (0..1u32 << n).map(|x| x as u16).collect();
    for i in (1..entries.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        entries.swap(i, j);
    }
    SBoxTable::square(entries).expect("permutation")
}

/// Randomized fast-vs-naive equivalence sweep at the given size.
pub fn oracle_sweep(n: usize, boxes: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let heavy_ok = n <= 6;
    let mut mismatches: Vec<String> = Vec::new();
    let mut compared = 0usize;
    for _ in 0..boxes {
        let s = random_permutation(&mut rng, n);
        for tag in MetricTag::ALL {
            let heavy = matches!(tag, MetricTag::TransparencyOrder | MetricTag::ConfusionStatistic);
            if heavy && !heavy_ok {
                continue;
            }
            let naive = match oracle::naive_metric(&s, tag) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let fast = report_value(&s, tag);
            compared += 1;
            if !values_agree(&fast, &naive) {
                mismatches.push(format!("{tag:?} on a random {n}-bit box: {fast:?} vs {naive:?}"));
            }
        }
    }
    vec![check(
        format!("oracle sweep n={n} ({boxes} random bijections)"),
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("{compared} comparisons, zero mismatches")
        } else {
            mismatches.join("; ")
        },
    )]
}

/// The full default verification scope.
pub fn run_all(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    out.extend(snr_calibration());
    out.extend(kappa_calibration());
    out.extend(fixture_calibration());
    for n in 3..=5 {
        out.extend(oracle_sweep(n, 20, seed ^ n as u64));
    }
    out.extend(oracle_sweep(6, 5, seed ^ 6));
    out
}
