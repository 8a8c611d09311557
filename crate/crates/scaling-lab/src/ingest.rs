//! Score-file ingestion: size-label parsing, consistency-to-inconsistency
//! conversion, and grouping of rows into per-cell series.
//!
//! The input contract is CSV (UTF-8, header required) with columns
//! `family,dataset,metric,decoding,size,score,score_kind`:
//!
//! - `size` uses the `<decimal><unit>` grammar with unit `M` or `B`
//!   (case-insensitive, optional whitespace), e.g. `70M`, `1.4B`.
//! - `score_kind` is `consistency` or `inconsistency`; consistency
//!   scores `z` must lie in [0, 1] and are converted to `1 - z`.
//! - Unknown extra columns are ignored.
//!
//! Rows are grouped by `(family, dataset, metric, decoding)` into one
//! analysis cell each; rows sharing a size within a cell are averaged
//! into a single observation. Cells with fewer than three distinct
//! sizes are reported as skipped rather than silently dropped.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parse a human-readable model-size label into billions of parameters.
/// `M` divides by 1000, `B` passes through.
pub fn parse_size(label: &str) -> Result<f64> {
    let err = |reason: &str| Error::SizeParse {
        label: label.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = label.trim();
    if trimmed.is_empty() {
        return Err(err("empty label"));
    }
    let (number_part, unit) = trimmed.split_at(trimmed.len() - trimmed.chars().last().unwrap().len_utf8());
    let millions = match unit {
        "M" | "m" => true,
        "B" | "b" => false,
        other => return Err(err(&format!("unknown unit {other:?}, expected M or B"))),
    };
    let number_part = number_part.trim();
    if number_part.is_empty() {
        return Err(err("missing numeric part"));
    }
    if !number_part
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '.' | '+' | '-' | 'e' | 'E'))
    {
        return Err(err(&format!("malformed number {number_part:?}")));
    }
    // Divide by 1000 in decimal, by shifting the exponent before the one
    // parse; "0.56M" then lands on the f64 nearest 0.00056 exactly.
    let scaled;
    let to_parse: &str = if millions {
        scaled = match number_part.split_once(['e', 'E']) {
            Some((mantissa, exponent)) => {
                let e: i32 = exponent
                    .parse()
                    .map_err(|_| err(&format!("malformed number {number_part:?}")))?;
                format!("{mantissa}e{}", e - 3)
            }
            None => format!("{number_part}e-3"),
        };
        &scaled
    } else {
        number_part
    };
    let value: f64 = to_parse
        .parse()
        .map_err(|_| err(&format!("malformed number {number_part:?}")))?;
    if !value.is_finite() || value <= 0.0 {
        return Err(err(&format!("size must be a positive finite value, got {value}")));
    }
    Ok(value)
}

/// Canonical label for a size in billions. Prefers the `M` form below
/// one billion when it parses back to the identical value, otherwise
/// emits the `B` form, which always round-trips.
pub fn canonical_label(value_b: f64) -> String {
    if value_b < 1.0 {
        let label = format!("{}M", value_b * 1000.0);
        if parse_size(&label).map(|v| v == value_b).unwrap_or(false) {
            return label;
        }
    }
    format!("{value_b}B")
}

/// A size label together with its parsed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSpec {
    pub raw: String,
    pub value_b: f64,
}

impl SizeSpec {
    pub fn parse(label: &str) -> Result<Self> {
        Ok(SizeSpec {
            raw: label.to_string(),
            value_b: parse_size(label)?,
        })
    }

    pub fn canonical(&self) -> String {
        canonical_label(self.value_b)
    }
}

/// Whether a score column reports consistency (`z`) or inconsistency
/// (`1 - z`) directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreKind {
    Consistency,
    Inconsistency,
}

/// Convert a metric score to the inconsistency scale: consistency `z`
/// maps to `1 - z`, inconsistency passes through unchanged.
pub fn to_inconsistency(score: f64, kind: ScoreKind) -> Result<f64> {
    if !score.is_finite() {
        return Err(Error::Data(format!("non-finite score {score}")));
    }
    Ok(match kind {
        ScoreKind::Consistency => 1.0 - score,
        ScoreKind::Inconsistency => score,
    })
}

/// One (size, inconsistency) point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    /// Model size in billions of parameters, > 0.
    pub size_b: f64,
    pub inconsistency: f64,
}

/// Identifier of one analysis cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub family: String,
    pub dataset: String,
    pub metric: String,
    pub decoding: String,
}

impl CellKey {
    pub fn new(family: &str, dataset: &str, metric: &str, decoding: &str) -> Self {
        CellKey {
            family: family.to_string(),
            dataset: dataset.to_string(),
            metric: metric.to_string(),
            decoding: decoding.to_string(),
        }
    }

    pub fn synthetic(tag: &str) -> Self {
        CellKey::new("synthetic", "synthetic", "synthetic", tag)
    }

    /// Stable single-string form, used in plot CSVs.
    pub fn id(&self) -> String {
        format!("{}:{}:{}:{}", self.family, self.dataset, self.metric, self.decoding)
    }
}

impl std::fmt::Display for CellKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}/{}/{}/{}",
            self.family, self.dataset, self.metric, self.decoding
        )
    }
}

/// One analysis cell: its identifiers plus the ordered observations.
/// Sizes are strictly increasing and positive; fitting additionally
/// requires at least three points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSeries {
    pub key: CellKey,
    pub points: Vec<Observation>,
}

impl ScoreSeries {
    pub fn new(key: CellKey, mut points: Vec<Observation>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Data(format!("cell {key} has no points")));
        }
        for p in &points {
            if !(p.size_b > 0.0 && p.size_b.is_finite()) {
                return Err(Error::Data(format!(
                    "cell {key}: size {} must be positive and finite",
                    p.size_b
                )));
            }
            if !p.inconsistency.is_finite() {
                return Err(Error::Data(format!(
                    "cell {key}: non-finite inconsistency at size {}",
                    p.size_b
                )));
            }
        }
        points.sort_by(|a, b| a.size_b.total_cmp(&b.size_b));
        if points.windows(2).any(|w| w[0].size_b >= w[1].size_b) {
            return Err(Error::Data(format!("cell {key} has duplicate sizes")));
        }
        Ok(ScoreSeries { key, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sizes(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.size_b).collect()
    }

    pub fn scores(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.inconsistency).collect()
    }
}

#[derive(Debug, Clone)]
pub struct IngestOptions {
    /// Cells with fewer distinct sizes than this are skipped (default 3,
    /// the minimum for a 3-parameter fit).
    pub min_points: usize,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions { min_points: 3 }
    }
}

/// A cell rejected at ingest, with enough context to audit it.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedCell {
    pub key: CellKey,
    pub distinct_sizes: usize,
    /// Input rows that fed this cell.
    pub rows: usize,
}

/// Everything ingest produced: the usable series plus a skip report and
/// any non-fatal warnings.
#[derive(Debug, Clone)]
pub struct IngestReport {
    pub series: Vec<ScoreSeries>,
    pub skipped: Vec<SkippedCell>,
    pub warnings: Vec<String>,
}

const REQUIRED_COLUMNS: [&str; 7] = [
    "family",
    "dataset",
    "metric",
    "decoding",
    "size",
    "score",
    "score_kind",
];

/// Load and group a score CSV from a file path.
pub fn load_series(path: &Path, options: &IngestOptions) -> Result<IngestReport> {
    let file = std::fs::File::open(path)?;
    read_series(file, options)
}

/// Load and group a score CSV from any reader.
pub fn read_series<R: Read>(reader: R, options: &IngestOptions) -> Result<IngestReport> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);

    let headers = csv_reader.headers()?.clone();
    let mut column = BTreeMap::new();
    for name in REQUIRED_COLUMNS {
        let idx = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))?;
        column.insert(name, idx);
    }

    // (cell, size) -> scores; scores are sorted before averaging so the
    // result is independent of input row order.
    let mut cells: BTreeMap<CellKey, BTreeMap<u64, (f64, Vec<f64>)>> = BTreeMap::new();
    let mut bad_rows: Vec<String> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    let mut row_count = 0usize;

    for (i, record) in csv_reader.records().enumerate() {
        let line = i + 2; // header is line 1
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                bad_rows.push(format!("row {line}: {e}"));
                continue;
            }
        };
        row_count += 1;
        let field = |name: &str| record.get(column[name]).unwrap_or("").to_string();

        let size_b = match parse_size(&field("size")) {
            Ok(v) => v,
            Err(e) => {
                bad_rows.push(format!("row {line}: {e}"));
                continue;
            }
        };
        let kind = match field("score_kind").to_ascii_lowercase().as_str() {
            "consistency" => ScoreKind::Consistency,
            "inconsistency" => ScoreKind::Inconsistency,
            other => {
                bad_rows.push(format!(
                    "row {line}: score_kind {other:?} is not consistency|inconsistency"
                ));
                continue;
            }
        };
        let raw_score: f64 = match field("score").parse() {
            Ok(v) => v,
            Err(_) => {
                bad_rows.push(format!("row {line}: malformed score {:?}", field("score")));
                continue;
            }
        };
        if kind == ScoreKind::Consistency && !(0.0..=1.0).contains(&raw_score) {
            bad_rows.push(format!(
                "row {line}: consistency score {raw_score} outside [0, 1]"
            ));
            continue;
        }
        let inconsistency = match to_inconsistency(raw_score, kind) {
            Ok(v) => v,
            Err(e) => {
                bad_rows.push(format!("row {line}: {e}"));
                continue;
            }
        };
        if kind == ScoreKind::Inconsistency && !(0.0..=1.0).contains(&inconsistency) {
            warnings.push(format!(
                "row {line}: inconsistency score {inconsistency} outside [0, 1], kept"
            ));
        }

        let key = CellKey::new(
            &field("family"),
            &field("dataset"),
            &field("metric"),
            &field("decoding"),
        );
        cells
            .entry(key)
            .or_default()
            .entry(size_b.to_bits())
            .or_insert((size_b, Vec::new()))
            .1
            .push(inconsistency);
    }

    if !bad_rows.is_empty() {
        return Err(Error::IngestRows(bad_rows));
    }
    if row_count == 0 {
        return Err(Error::EmptyInput);
    }

    let mut series = Vec::new();
    let mut skipped = Vec::new();
    for (key, sizes) in cells {
        let rows: usize = sizes.values().map(|(_, scores)| scores.len()).sum();
        if sizes.len() < options.min_points {
            skipped.push(SkippedCell {
                key,
                distinct_sizes: sizes.len(),
                rows,
            });
            continue;
        }
        let points = sizes
            .into_values()
            .map(|(size_b, mut scores)| {
                scores.sort_by(|a, b| a.total_cmp(b));
                let mean = scores.iter().sum::<f64>() / scores.len() as f64;
                Observation {
                    size_b,
                    inconsistency: mean,
                }
            })
            .collect();
        series.push(ScoreSeries::new(key, points)?);
    }

    Ok(IngestReport {
        series,
        skipped,
        warnings,
    })
}
