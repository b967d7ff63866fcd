//! Structured report documents and the human-readable metric table.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sboxkit::boolfn::SBoxTable;
use sboxkit::metrics::{CcModel, CcStatistic, MetricsReport, SnrVariant};
use sboxkit::search::{PipelineTally, SearchResult};

pub const SCHEMA_VERSION: u32 = 1;

/// The metric rows in published order.
pub const ROW_ORDER: [&str; 14] =
    ["B", "NL", "AD", "CI", "R", "DU", "AC", "SIGMA", "AI", "FP", "OFP", "SNR", "TO", "K"];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KappaDoc {
    pub model: String,
    pub statistic: String,
    pub reported: f64,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MetricsDoc {
    pub balanced: bool,
    pub nl: u32,
    pub ad: u32,
    pub ci: u32,
    pub robustness: f64,
    pub robustness_exact: String,
    pub du: u32,
    pub ac: u32,
    pub sigma: u64,
    pub ai: u32,
    pub fp: u32,
    pub ofp: u32,
    pub snr: f64,
    pub snr_variant: String,
    pub to: f64,
    pub kappa: KappaDoc,
}

/// One evaluated box: identity, digest and metric values. Re-running on
/// the same input yields an identical document apart from the timestamp.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub box_name: String,
    pub digest_sha256: String,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub metrics: MetricsDoc,
}

pub fn digest(table: &SBoxTable) -> String {
    let mut hasher = Sha256::new();
    hasher.update([table.input_bits() as u8, table.output_bits() as u8]);
    for &e in table.entries() {
        hasher.update(e.to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

fn model_name(model: CcModel) -> &'static str {
    match model {
        CcModel::SingleBit => "single-bit",
        CcModel::HwSquared => "hw-squared",
        CcModel::HwSquaredNormalized => "hw-squared-normalized",
    }
}

fn statistic_name(stat: CcStatistic) -> &'static str {
    match stat {
        CcStatistic::Min => "min",
        CcStatistic::Mean => "mean",
        CcStatistic::Max => "max",
        CcStatistic::Variance => "variance",
    }
}

fn variant_name(variant: SnrVariant) -> &'static str {
    match variant {
        SnrVariant::SignTransform => "sign-transform",
        SnrVariant::ZeroOne => "zero-one",
    }
}

pub fn metrics_doc(report: &MetricsReport, cc_min: f64, cc_mean: f64, cc_max: f64) -> MetricsDoc {
    MetricsDoc {
        balanced: report.balanced,
        nl: report.nl,
        ad: report.degree,
        ci: report.ci,
        robustness: report.robustness.to_f64(),
        robustness_exact: format!("{}/{}", report.robustness.num, report.robustness.den),
        du: report.du,
        ac: report.abs_indicator,
        sigma: report.sum_sq,
        ai: report.ai,
        fp: report.fp,
        ofp: report.ofp,
        snr: report.snr,
        snr_variant: variant_name(report.snr_variant).into(),
        to: report.to,
        kappa: KappaDoc {
            model: model_name(report.cc_model).into(),
            statistic: statistic_name(report.cc_statistic).into(),
            reported: report.cc_reported,
            min: cc_min,
            mean: cc_mean,
            max: cc_max,
        },
    }
}

pub fn document(
    box_name: &str,
    table: &SBoxTable,
    report: &MetricsReport,
    seed: Option<u64>,
    timestamp_unix: Option<u64>,
) -> ReportDocument {
    ReportDocument {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        box_name: box_name.into(),
        digest_sha256: digest(table),
        n: table.input_bits(),
        m: table.output_bits(),
        timestamp_unix,
        seed,
        metrics: metrics_doc(report, report.cc_min, report.cc_mean, report.cc_max),
    }
}

fn row_value(doc: &ReportDocument, row: &str) -> String {
    let m = &doc.metrics;
    match row {
        "B" => if m.balanced { "yes".into() } else { "no".into() },
        "NL" => m.nl.to_string(),
        "AD" => m.ad.to_string(),
        "CI" => m.ci.to_string(),
        "R" => format!("{:.4}", m.robustness),
        "DU" => m.du.to_string(),
        "AC" => m.ac.to_string(),
        "SIGMA" => m.sigma.to_string(),
        "AI" => m.ai.to_string(),
        "FP" => m.fp.to_string(),
        "OFP" => m.ofp.to_string(),
        "SNR" => format!("{:.4}", m.snr),
        "TO" => format!("{:.4}", m.to),
        "K" => format!("{:.4}", m.kappa.reported),
        _ => String::new(),
    }
}

/// Renders documents side by side, one metric per row in the published
/// row order; extra summary columns may be appended by the caller.
pub fn human_table(docs: &[ReportDocument], rows: &[&str]) -> String {
    let mut widths: Vec<usize> = docs.iter().map(|d| d.box_name.len().max(8)).collect();
    let mut cells: Vec<Vec<String>> = Vec::new();
    for row in rows {
        let values: Vec<String> = docs.iter().map(|d| row_value(d, row)).collect();
        for (i, v) in values.iter().enumerate() {
            widths[i] = widths[i].max(v.len());
        }
        cells.push(values);
    }
    let mut out = String::new();
    out.push_str(&format!("{:<6}", "row"));
    for (d, w) in docs.iter().zip(&widths) {
        out.push_str(&format!(" {:>w$}", d.box_name, w = w));
    }
    out.push('\n');
    for (row, values) in rows.iter().zip(cells) {
        out.push_str(&format!("{row:<6}"));
        for (v, w) in values.iter().zip(&widths) {
            out.push_str(&format!(" {v:>w$}"));
        }
        out.push('\n');
    }
    out
}

fn numeric_row(doc: &ReportDocument, row: &str) -> Option<f64> {
    let m = &doc.metrics;
    Some(match row {
        "B" => return None,
        "NL" => m.nl as f64,
        "AD" => m.ad as f64,
        "CI" => m.ci as f64,
        "R" => m.robustness,
        "DU" => m.du as f64,
        "AC" => m.ac as f64,
        "SIGMA" => m.sigma as f64,
        "AI" => m.ai as f64,
        "FP" => m.fp as f64,
        "OFP" => m.ofp as f64,
        "SNR" => m.snr,
        "TO" => m.to,
        "K" => m.kappa.reported,
        _ => return None,
    })
}

/// Min/avg/max columns of each numeric row over a collection of boxes.
pub fn summary_table(docs: &[ReportDocument], rows: &[&str]) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<6} {:>12} {:>12} {:>12}\n", "row", "min", "avg", "max"));
    for row in rows {
        let values: Vec<f64> = docs.iter().filter_map(|d| numeric_row(d, row)).collect();
        if values.is_empty() {
            let balanced = docs.iter().filter(|d| d.metrics.balanced).count();
            out.push_str(&format!(
                "{row:<6} {:>12} {:>12} {:>12}\n",
                format!("{balanced}/{} balanced", docs.len()),
                "",
                ""
            ));
            continue;
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let avg = values.iter().sum::<f64>() / values.len() as f64;
        out.push_str(&format!(
            "{row:<6} {min:>12.4} {avg:>12.4} {max:>12.4}\n"
        ));
    }
    out
}

/// Pipeline tally serialized in the published row vocabulary.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TallyDoc {
    #[serde(rename = "#T_total")]
    pub total: u64,
    #[serde(rename = "#T_bij")]
    pub bijective: u64,
    #[serde(rename = "#T_FP")]
    pub fp_zero: u64,
    #[serde(rename = "#T_OFF")]
    pub ofp_zero: u64,
    #[serde(rename = "#T_SNR")]
    pub snr_better: u64,
    #[serde(rename = "#T_TO")]
    pub to_better: u64,
    #[serde(rename = "#T_K")]
    pub cc_better: u64,
    #[serde(rename = "#T_better")]
    pub all_better: u64,
}

impl From<&PipelineTally> for TallyDoc {
    fn from(t: &PipelineTally) -> Self {
        TallyDoc {
            total: t.total,
            bijective: t.bijective,
            fp_zero: t.fp_zero,
            ofp_zero: t.ofp_zero,
            snr_better: t.snr_better,
            to_better: t.to_better,
            cc_better: t.cc_better,
            all_better: t.all_better,
        }
    }
}

/// Search run summary: configuration echo, tally and accepted boxes.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SearchDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub initial_box: String,
    pub initial_digest: String,
    pub mode: String,
    pub seed: u64,
    pub workers_invariant: bool,
    pub tally: TallyDoc,
    pub baseline: MetricsDoc,
    pub accepted: Vec<AcceptedDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AcceptedDoc {
    pub masks: Vec<u16>,
    pub digest_sha256: String,
    pub snr: f64,
    pub to: f64,
    pub kappa: f64,
}

pub fn search_document(name: &str, initial: &SBoxTable, result: &SearchResult) -> SearchDocument {
    let mode = match result.config.mode {
        sboxkit::search::SearchMode::Exhaustive => "exhaustive",
        sboxkit::search::SearchMode::RandomSample => "random-sample",
        sboxkit::search::SearchMode::Genetic => "genetic",
    };
    SearchDocument {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        initial_box: name.into(),
        initial_digest: digest(initial),
        mode: mode.into(),
        seed: result.config.seed,
        workers_invariant: true,
        tally: TallyDoc::from(&result.tally),
        baseline: metrics_doc(
            &result.baseline,
            result.baseline.cc_min,
            result.baseline.cc_mean,
            result.baseline.cc_max,
        ),
        accepted: result
            .accepted
            .iter()
            .map(|a| AcceptedDoc {
                masks: a.candidate.masks().to_vec(),
                digest_sha256: digest(&a.table),
                snr: a.report.snr,
                to: a.report.to,
                kappa: a.report.cc_reported,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sboxkit::metrics::{full_report, MetricOptions};

    #[test]
    fn document_is_reproducible_modulo_timestamp() {
        let table =
            SBoxTable::square(vec![8, 0, 1, 10, 9, 4, 2, 6, 11, 7, 14, 12, 5, 15, 13, 3]).unwrap();
        let report = full_report(&table, &MetricOptions::default()).unwrap();
        let a = document("t", &table, &report, None, Some(1));
        let b = document("t", &table, &report, None, Some(2));
        let strip = |mut d: ReportDocument| {
            d.timestamp_unix = None;
            d
        };
        assert_eq!(strip(a), strip(b));
    }

    #[test]
    fn digests_separate_distinct_tables() {
        let a = SBoxTable::square(vec![0, 1, 2, 3]).unwrap();
        let b = SBoxTable::square(vec![0, 1, 3, 2]).unwrap();
        assert_ne!(digest(&a), digest(&b));
        assert_eq!(digest(&a).len(), 64);
    }
}
