//! S-box file parsing and serialization.
//!
//! Text files hold whitespace- or comma-separated integers in row-major
//! order, with optional `0x` prefixes and `#` comments; published tables
//! paste straight in. JSON files hold either a bare entry array or an
//! object `{"n": .., "m": .., "entries": [..]}`.

use std::fmt;
use std::path::{Path, PathBuf};

use sboxkit::boolfn::SBoxTable;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SBoxFormat {
    Decimal,
    Hex,
    Json,
}

impl SBoxFormat {
    pub fn from_flag(s: &str) -> CliResult<Self> {
        match s {
            "decimal" | "dec" => Ok(SBoxFormat::Decimal),
            "hex" => Ok(SBoxFormat::Hex),
            "json" => Ok(SBoxFormat::Json),
            other => Err(CliError::Usage(format!("unknown format '{other}'"))),
        }
    }
}

impl fmt::Display for SBoxFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SBoxFormat::Decimal => "decimal",
            SBoxFormat::Hex => "hex",
            SBoxFormat::Json => "json",
        };
        f.write_str(name)
    }
}

/// A parsed S-box with its origin.
#[derive(Debug, Clone)]
pub struct SBoxFile {
    pub path: Option<PathBuf>,
    pub format: SBoxFormat,
    pub table: SBoxTable,
    /// Fixture name or file description.
    pub provenance: String,
    /// Repair or calibration notes recorded while loading.
    pub notes: Vec<String>,
}

/// Parses raw entries into a table: the count must be a power of two,
/// n = log2(count), and m is the bit width of the largest entry unless
/// overridden.
pub fn table_from_entries(entries: Vec<u32>, out_bits: Option<usize>) -> CliResult<SBoxTable> {
    let count = entries.len();
    if count < 2 || !count.is_power_of_two() {
        return Err(CliError::Parse(format!(
            "entry count {count} is not a power of two (at least 2 required)"
        )));
    }
    let n = count.trailing_zeros() as usize;
    let max = entries.iter().copied().max().unwrap_or(0);
    let m = out_bits.unwrap_or_else(|| (32 - max.leading_zeros()).max(1) as usize);
    if m > 16 {
        return Err(CliError::Parse(format!("output width {m} exceeds the 16-bit limit")));
    }
    if let Some(&bad) = entries.iter().find(|&&e| e >= 1 << m) {
        return Err(CliError::Parse(format!("entry {bad} does not fit in {m} output bits")));
    }
    let entries16: Vec<u16> = entries.into_iter().map(|e| e as u16).collect();
    SBoxTable::new(n, m, entries16).map_err(|e| CliError::Parse(e.to_string()))
}

fn parse_token(token: &str, format: SBoxFormat, line: usize, col: usize) -> CliResult<u32> {
    let parsed = if let Some(hexpart) = token.strip_prefix("0x").or_else(|| token.strip_prefix("0X"))
    {
        u32::from_str_radix(hexpart, 16)
    } else {
        match format {
            SBoxFormat::Hex => u32::from_str_radix(token, 16),
            _ => token.parse::<u32>(),
        }
    };
    parsed.map_err(|_| {
        CliError::Parse(format!("line {line}, column {col}: invalid integer '{token}'"))
    })
}

/// Parses text content (decimal or hex). Errors carry line and column.
pub fn parse_text(content: &str, format: SBoxFormat) -> CliResult<Vec<u32>> {
    let mut entries = Vec::new();
    for (lineno, raw_line) in content.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        let mut col = 0;
        for token in line.split(|c: char| c.is_whitespace() || c == ',') {
            col += 1;
            if token.is_empty() {
                continue;
            }
            entries.push(parse_token(token, format, lineno + 1, col)?);
        }
    }
    Ok(entries)
}

/// Parses JSON content: a bare array or `{"n", "m", "entries"}`.
pub fn parse_json(content: &str) -> CliResult<(Vec<u32>, Option<usize>)> {
    let value: serde_json::Value = serde_json::from_str(content)
        .map_err(|e| CliError::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let to_entries = |arr: &[serde_json::Value]| -> CliResult<Vec<u32>> {
        arr.iter()
            .map(|v| {
                v.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| CliError::Parse(format!("non-integer entry {v}")))
            })
            .collect()
    };
    match &value {
        serde_json::Value::Array(arr) => Ok((to_entries(arr)?, None)),
        serde_json::Value::Object(map) => {
            let entries = map
                .get("entries")
                .and_then(|v| v.as_array())
                .ok_or_else(|| CliError::Parse("missing 'entries' array".into()))?;
            let m = map.get("m").and_then(|v| v.as_u64()).map(|v| v as usize);
            Ok((to_entries(entries)?, m))
        }
        _ => Err(CliError::Parse("expected a JSON array or object".into())),
    }
}

fn sniff_format(path: &Path, content: &str) -> SBoxFormat {
    if path.extension().is_some_and(|e| e == "json") {
        return SBoxFormat::Json;
    }
    if content.trim_start().starts_with(['{', '[']) {
        return SBoxFormat::Json;
    }
    SBoxFormat::Decimal
}

/// Loads an S-box from a file, detecting the format unless one is forced.
pub fn load_file(
    path: &Path,
    format: Option<SBoxFormat>,
    out_bits: Option<usize>,
) -> CliResult<SBoxFile> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let format = format.unwrap_or_else(|| sniff_format(path, &content));
    let (entries, m_from_json) = match format {
        SBoxFormat::Json => parse_json(&content)?,
        other => (parse_text(&content, other)?, None),
    };
    let table = table_from_entries(entries, out_bits.or(m_from_json))?;
    Ok(SBoxFile {
        path: Some(path.to_path_buf()),
        format,
        table,
        provenance: format!("file {}", path.display()),
        notes: Vec::new(),
    })
}

/// Serializes a table in the chosen format.
pub fn serialize(table: &SBoxTable, format: SBoxFormat) -> String {
    match format {
        SBoxFormat::Decimal => grid(table, |e| format!("{e}")),
        SBoxFormat::Hex => {
            let width = table.output_bits().div_ceil(4);
            grid(table, |e| format!("0x{e:0width$x}"))
        }
        SBoxFormat::Json => {
            let doc = serde_json::json!({
                "n": table.input_bits(),
                "m": table.output_bits(),
                "entries": table.entries(),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}

fn grid(table: &SBoxTable, render: impl Fn(u16) -> String) -> String {
    let per_row = 1usize << (table.input_bits() / 2);
    let mut out = String::new();
    for (i, &e) in table.entries().iter().enumerate() {
        out.push_str(&render(e));
        if (i + 1) % per_row == 0 {
            out.push('\n');
        } else {
            out.push(' ');
        }
    }
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_text_with_comments_and_hex() {
        let content = "# a 2x2 box\n0x3, 0\n1 2 # trailing\n";
        let entries = parse_text(content, SBoxFormat::Decimal).unwrap();
        assert_eq!(entries, vec![3, 0, 1, 2]);
        let table = table_from_entries(entries, None).unwrap();
        assert_eq!(table.input_bits(), 2);
        assert_eq!(table.output_bits(), 2);
    }

    #[test]
    fn rejects_bad_sizes_with_position() {
        let err = parse_text("1 2 x", SBoxFormat::Decimal).unwrap_err();
        assert!(err.to_string().contains("line 1"));
        let err = table_from_entries(vec![1], None).unwrap_err();
        assert!(err.to_string().contains("power of two"));
        let err = table_from_entries(vec![0, 1, 2], None).unwrap_err();
        assert!(err.to_string().contains("power of two"));
    }

    #[test]
    fn json_object_round_trip() {
        let table = SBoxTable::square(vec![3, 0, 1, 2]).unwrap();
        let json = serialize(&table, SBoxFormat::Json);
        let (entries, m) = parse_json(&json).unwrap();
        let back = table_from_entries(entries, m).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn text_round_trip_all_formats() {
        let table = SBoxTable::square(vec![8, 0, 1, 10, 9, 4, 2, 6, 11, 7, 14, 12, 5, 15, 13, 3])
            .unwrap();
        for format in [SBoxFormat::Decimal, SBoxFormat::Hex] {
            let text = serialize(&table, format);
            let entries = parse_text(&text, format).unwrap();
            let back = table_from_entries(entries, None).unwrap();
            assert_eq!(back, table, "{format} round trip");
        }
    }
}
