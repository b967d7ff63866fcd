//! Bundled reference S-boxes.
//!
//! The tables are embedded exactly as printed in the source publication,
//! and known transcription defects are repaired at load time with the
//! repair recorded in the fixture notes:
//!
//! - the 5x5 initial table prints the value 16 twice and omits 14; the
//!   substitution whose metrics match the published 5x5 profile is
//!   selected (position 14 in print order);
//! - the 8x8 table prints 17 values per row with the first repeated at
//!   the end (the trailing column is stripped), and value 232 twice with
//!   242 missing; again the metric-matching substitution is selected;
//! - grids whose row-major reading contradicts the published fixed-point
//!   counts are read column-major where that reading matches better
//!   (both readings of a power-of-two grid are linear input relabelings,
//!   so only the fixed-point rows are sensitive to the choice).
//!
//! Residual contradictions that no repair or reading can resolve are
//! listed in [`known_discrepancies`].

use std::sync::OnceLock;

use sboxkit::boolfn::SBoxTable;
use sboxkit::metrics::{self, MetricOptions};

use crate::error::{CliError, CliResult};

const T7_4X4_INITIAL: [u16; 16] = [8, 0, 1, 10, 9, 4, 2, 6, 11, 7, 14, 12, 5, 15, 13, 3];

const T8_4X4_PROPOSED: [u16; 16] = [3, 0, 5, 15, 6, 13, 12, 1, 10, 4, 2, 14, 8, 7, 11, 9];

// As printed: 16 appears at positions 9 and 14, 14 is missing.
const T9_5X5_INITIAL_PRINTED: [u16; 32] = [
    8, 0, 26, 17, 22, 28, 29, 24, 19, 16, 4, 6, 7, 18, 16, 23, 13, 31, 25, 30, 2, 20, 12, 1, 5,
    3, 15, 27, 9, 21, 10, 11,
];

const T10_5X5_PROPOSED: [u16; 32] = [
    24, 0, 23, 22, 12, 28, 13, 31, 30, 7, 3, 11, 26, 15, 19, 29, 10, 5, 14, 20, 8, 4, 27, 17,
    18, 25, 2, 6, 9, 21, 16, 1,
];

const T11_6X6_INITIAL: [u16; 64] = [
    22, 25, 37, 10, 14, 5, 60, 15, 0, 7, 26, 63, 50, 59, 48, 23, 6, 62, 24, 38, 16, 58, 32, 61,
    43, 20, 29, 4, 52, 33, 35, 12, 13, 56, 44, 54, 51, 47, 42, 27, 28, 40, 11, 55, 9, 36, 41,
    45, 46, 8, 31, 34, 17, 2, 18, 19, 30, 39, 49, 1, 3, 57, 21, 53,
];

const T12_6X6_PROPOSED: [u16; 64] = [
    2, 30, 47, 53, 59, 41, 49, 28, 0, 11, 27, 52, 10, 58, 40, 37, 44, 19, 57, 42, 46, 29, 6, 22,
    20, 32, 16, 14, 38, 33, 3, 25, 62, 63, 31, 4, 45, 26, 51, 60, 55, 17, 18, 35, 48, 8, 54, 56,
    61, 23, 50, 36, 9, 34, 12, 43, 21, 13, 15, 39, 5, 24, 7, 1,
];

const T13_7X7_INITIAL: [u16; 128] = [
    66, 114, 56, 86, 115, 85, 11, 78, 124, 71, 44, 3, 41, 87, 4, 81, 104, 10, 34, 15, 108, 48,
    2, 16, 95, 92, 65, 67, 55, 62, 28, 97, 76, 57, 12, 96, 6, 18, 120, 91, 54, 35, 79, 100, 109,
    69, 121, 9, 36, 126, 111, 77, 74, 45, 125, 122, 73, 90, 26, 98, 58, 80, 51, 72, 118, 33, 21,
    116, 123, 117, 82, 61, 110, 64, 68, 99, 19, 37, 46, 53, 83, 31, 50, 24, 93, 89, 52, 60, 84,
    22, 63, 107, 25, 38, 88, 7, 39, 30, 17, 13, 119, 102, 8, 14, 5, 29, 20, 127, 70, 106, 43,
    112, 59, 49, 101, 1, 47, 113, 32, 0, 23, 94, 40, 75, 27, 103, 105, 42,
];

const T14_7X7_PROPOSED: [u16; 128] = [
    52, 17, 127, 112, 58, 18, 56, 123, 23, 10, 59, 98, 5, 91, 21, 7, 83, 19, 61, 45, 70, 37, 73,
    81, 1, 99, 86, 31, 82, 35, 30, 34, 50, 84, 79, 9, 92, 24, 2, 20, 121, 22, 80, 28, 109, 67,
    41, 113, 97, 94, 36, 25, 110, 16, 60, 75, 12, 63, 66, 64, 54, 44, 71, 39, 4, 95, 111, 77,
    96, 102, 101, 65, 15, 125, 104, 107, 51, 74, 114, 27, 78, 124, 108, 11, 72, 93, 48, 106, 57,
    13, 8, 49, 32, 40, 118, 119, 3, 87, 122, 100, 47, 85, 90, 6, 62, 53, 68, 117, 33, 26, 76,
    88, 29, 14, 55, 43, 89, 115, 116, 0, 38, 42, 46, 69, 105, 126, 120, 103,
];

// As printed: 16 rows of 17 values, the first value of each row repeated
// at the end. The trailing column is stripped during ingestion.
const T15_8X8_PROPOSED_PRINTED: [[u16; 17]; 16] = [
    [62, 248, 28, 48, 229, 103, 173, 102, 33, 116, 149, 194, 97, 147, 228, 134, 62],
    [109, 223, 110, 27, 25, 70, 120, 208, 11, 245, 58, 209, 73, 211, 212, 183, 109],
    [184, 203, 138, 187, 166, 179, 195, 135, 159, 142, 240, 78, 186, 141, 84, 254, 184],
    [90, 178, 23, 136, 54, 29, 61, 133, 51, 76, 193, 231, 9, 246, 232, 225, 90],
    [252, 4, 155, 44, 31, 177, 17, 77, 143, 94, 217, 131, 46, 96, 121, 190, 252],
    [251, 151, 130, 170, 216, 64, 26, 56, 243, 214, 249, 146, 160, 0, 52, 224, 251],
    [156, 127, 148, 132, 128, 201, 181, 60, 81, 2, 47, 20, 124, 85, 105, 153, 156],
    [80, 111, 157, 244, 63, 67, 83, 137, 71, 117, 182, 32, 139, 112, 235, 41, 80],
    [114, 74, 219, 3, 57, 45, 10, 140, 113, 145, 108, 18, 13, 144, 232, 50, 114],
    [238, 119, 191, 162, 21, 104, 196, 88, 14, 233, 72, 91, 107, 230, 176, 226, 238],
    [168, 30, 165, 68, 43, 125, 253, 164, 118, 115, 40, 206, 218, 188, 175, 255, 168],
    [19, 180, 204, 174, 37, 234, 172, 16, 49, 75, 213, 66, 189, 227, 126, 122, 19],
    [199, 106, 36, 7, 98, 247, 198, 236, 69, 154, 167, 6, 169, 222, 5, 161, 199],
    [210, 171, 192, 53, 197, 1, 42, 79, 59, 35, 100, 99, 202, 55, 93, 22, 210],
    [15, 129, 200, 86, 65, 152, 207, 158, 8, 38, 39, 92, 89, 250, 24, 82, 15],
    [220, 12, 101, 123, 150, 205, 87, 221, 241, 185, 215, 237, 95, 163, 34, 239, 220],
];

/// The AES S-box, the presumed 8x8 initial box: the published initial-row
/// SNR and TO values match AES's known values.
const AES_SBOX: [u16; 256] = [
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab,
    0x76, 0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4,
    0x72, 0xc0, 0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71,
    0xd8, 0x31, 0x15, 0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2,
    0xeb, 0x27, 0xb2, 0x75, 0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6,
    0xb3, 0x29, 0xe3, 0x2f, 0x84, 0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb,
    0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf, 0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45,
    0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8, 0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5,
    0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2, 0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44,
    0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73, 0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a,
    0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb, 0xe0, 0x32, 0x3a, 0x0a, 0x49,
    0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79, 0xe7, 0xc8, 0x37, 0x6d,
    0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08, 0xba, 0x78, 0x25,
    0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a, 0x70, 0x3e,
    0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e, 0xe1,
    0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb,
    0x16,
];

/// Reading order of a printed grid. Both readings of a 2^j x 2^k grid
/// relabel inputs linearly, so they agree on every mask-quantified metric
/// and differ only in fixed-point structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadingOrder {
    RowMajor,
    ColumnMajor,
}

fn read_grid(flat: &[u16], cols: usize, order: ReadingOrder) -> Vec<u16> {
    let rows = flat.len() / cols;
    match order {
        ReadingOrder::RowMajor => flat.to_vec(),
        ReadingOrder::ColumnMajor => {
            (0..flat.len()).map(|i| flat[(i % rows) * cols + i / rows]).collect()
        }
    }
}

/// A bundled S-box with provenance and the repairs applied while loading.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub provenance: &'static str,
    pub table: SBoxTable,
    pub notes: Vec<String>,
}

/// Repairs a printed table that duplicates one value and omits another:
/// both substitution positions are evaluated and the one matching the
/// published profile (differential uniformity plus SNR and TO within
/// 0.001) is selected.
fn repair_duplicate(
    printed: &[u16],
    expect_du: u32,
    expect_snr: f64,
    expect_to: f64,
) -> CliResult<(Vec<u16>, String)> {
    let size = printed.len();
    let mut count = vec![0usize; size];
    for &e in printed {
        count[e as usize] += 1;
    }
    let dup = count.iter().position(|&c| c > 1).ok_or_else(|| {
        CliError::Verification("expected a duplicated value in the printed table".into())
    })? as u16;
    let missing = count.iter().position(|&c| c == 0).ok_or_else(|| {
        CliError::Verification("expected a missing value in the printed table".into())
    })? as u16;
    let positions: Vec<usize> =
        printed.iter().enumerate().filter(|&(_, &e)| e == dup).map(|(i, _)| i).collect();
    for &pos in &positions {
        let mut fixed = printed.to_vec();
        fixed[pos] = missing;
        let table = SBoxTable::square(fixed.clone())
            .map_err(|e| CliError::Verification(e.to_string()))?;
        if !table.is_bijective() {
            continue;
        }
        let du = metrics::differential_uniformity(&table);
        let snr = metrics::snr_dpa(&table, Default::default());
        let to = metrics::transparency_order(&table);
        if du == expect_du && (snr - expect_snr).abs() <= 0.001 && (to - expect_to).abs() <= 0.001
        {
            let note = format!(
                "repaired duplicate value {dup} at print position {pos} with missing value \
                 {missing} (candidates at {positions:?}; selected by du={expect_du}, \
                 snr={expect_snr}, to={expect_to})"
            );
            return Ok((fixed, note));
        }
    }
    Err(CliError::Verification(format!(
        "no substitution of duplicate {dup} reproduces the published profile"
    )))
}

fn strip_trailing_column(printed: &[[u16; 17]; 16]) -> CliResult<(Vec<u16>, String)> {
    for (i, row) in printed.iter().enumerate() {
        if row[0] != row[16] {
            return Err(CliError::Verification(format!(
                "row {i} does not end with its first value; trailing-column strip is unsound"
            )));
        }
    }
    let flat: Vec<u16> = printed.iter().flat_map(|row| row[..16].iter().copied()).collect();
    Ok((flat, "stripped the 17th printed column (first value repeated per row)".into()))
}

fn fixture(
    name: &'static str,
    provenance: &'static str,
    entries: Vec<u16>,
    notes: Vec<String>,
) -> Fixture {
    let table = SBoxTable::square(entries).expect("bundled tables are well-formed");
    Fixture { name, provenance, table, notes }
}

fn reading_note(order: ReadingOrder, fp: u32, ofp: u32) -> String {
    let label = match order {
        ReadingOrder::RowMajor => "row-major",
        ReadingOrder::ColumnMajor => "column-major",
    };
    format!("grid read {label}; fixed points {fp}, opposite fixed points {ofp}")
}

fn with_reading(
    name: &'static str,
    provenance: &'static str,
    flat: &[u16],
    cols: usize,
    order: ReadingOrder,
    mut notes: Vec<String>,
) -> Fixture {
    let entries = read_grid(flat, cols, order);
    let table = SBoxTable::square(entries).expect("bundled tables are well-formed");
    let fp = metrics::fixed_points(&table).expect("square");
    let ofp = metrics::opposite_fixed_points(&table).expect("square");
    notes.push(reading_note(order, fp, ofp));
    Fixture { name, provenance, table, notes }
}

fn build_all() -> CliResult<Vec<Fixture>> {
    let mut out = Vec::new();

    out.push(fixture(
        "paper-4x4-initial",
        "published 4x4 initial box",
        T7_4X4_INITIAL.to_vec(),
        vec![],
    ));
    out.push(fixture(
        "paper-4x4-proposed",
        "published best generated 4x4 box",
        T8_4X4_PROPOSED.to_vec(),
        vec![],
    ));

    let (t9, t9_note) = repair_duplicate(&T9_5X5_INITIAL_PRINTED, 2, 2.361, 4.612)?;
    out.push(with_reading(
        "paper-5x5-initial",
        "published 5x5 initial box (repaired)",
        &t9,
        8,
        ReadingOrder::ColumnMajor,
        vec![t9_note],
    ));
    out.push(fixture(
        "paper-5x5-proposed",
        "published best generated 5x5 box",
        T10_5X5_PROPOSED.to_vec(),
        vec![],
    ));

    out.push(with_reading(
        "paper-6x6-initial",
        "published 6x6 initial box",
        &T11_6X6_INITIAL,
        8,
        ReadingOrder::ColumnMajor,
        vec![],
    ));
    out.push(with_reading(
        "paper-6x6-proposed",
        "published best generated 6x6 box",
        &T12_6X6_PROPOSED,
        8,
        ReadingOrder::ColumnMajor,
        vec![],
    ));

    out.push(fixture(
        "paper-7x7-initial",
        "published 7x7 initial box",
        T13_7X7_INITIAL.to_vec(),
        vec![],
    ));
    out.push(with_reading(
        "paper-7x7-proposed",
        "published best generated 7x7 box",
        &T14_7X7_PROPOSED,
        8,
        ReadingOrder::ColumnMajor,
        vec![],
    ));

    let (t15_stripped, strip_note) = strip_trailing_column(&T15_8X8_PROPOSED_PRINTED)?;
    let (t15, t15_note) = repair_duplicate(&t15_stripped, 4, 8.758, 7.850)?;
    out.push(fixture(
        "paper-8x8-proposed",
        "published best generated 8x8 box (repaired)",
        t15,
        vec![strip_note, t15_note],
    ));

    out.push(fixture(
        "aes-8x8",
        "AES S-box, stand-in for the unpublished 8x8 initial box",
        AES_SBOX.to_vec(),
        vec![],
    ));

    Ok(out)
}

/// All bundled fixtures; repairs run once and are cached.
pub fn all() -> &'static [Fixture] {
    static FIXTURES: OnceLock<Vec<Fixture>> = OnceLock::new();
    FIXTURES.get_or_init(|| build_all().expect("bundled fixtures load"))
}

/// Looks a fixture up by name.
pub fn by_name(name: &str) -> Option<&'static Fixture> {
    all().iter().find(|f| f.name == name)
}

/// Published integer rows that remain inconsistent with the printed
/// tables after every calibration choice; each entry is
/// (fixture, row, computed, published).
pub fn known_discrepancies() -> Vec<(&'static str, &'static str, u32, u32)> {
    let mut out = Vec::new();
    for f in all() {
        let fp = metrics::fixed_points(&f.table).expect("square");
        let ofp = metrics::opposite_fixed_points(&f.table).expect("square");
        if fp != 0 {
            out.push((f.name, "FP", fp, 0));
        }
        if ofp != 0 {
            out.push((f.name, "OFP", ofp, 0));
        }
    }
    out
}

/// Default metric options used everywhere in the CLI (the calibrated
/// variants).
pub fn default_options() -> MetricOptions {
    MetricOptions::default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_load_and_are_bijective() {
        for f in all() {
            assert!(f.table.is_bijective(), "{} must be bijective", f.name);
        }
        assert_eq!(all().len(), 10);
    }

    #[test]
    fn t9_repair_is_position_14() {
        let f = by_name("paper-5x5-initial").unwrap();
        assert!(f.notes[0].contains("position 14"));
        assert_eq!(metrics::differential_uniformity(&f.table), 2);
    }

    #[test]
    fn t15_repair_is_position_142() {
        let f = by_name("paper-8x8-proposed").unwrap();
        assert!(f.notes.iter().any(|n| n.contains("position 142")));
        assert_eq!(metrics::nonlinearity(&f.table), 112);
    }

    #[test]
    fn discrepancy_registry_is_stable() {
        let d = known_discrepancies();
        // Residual fixed-point contradictions in the printed tables.
        assert_eq!(
            d,
            vec![
                ("paper-5x5-initial", "OFP", 1, 0),
                ("paper-5x5-proposed", "FP", 2, 0),
                ("paper-6x6-proposed", "FP", 1, 0),
                ("paper-6x6-proposed", "OFP", 1, 0),
                ("paper-7x7-initial", "OFP", 1, 0),
                ("paper-8x8-proposed", "FP", 1, 0),
            ]
        );
    }
}
