//! File formats: labeled-dataset CSV, subset index files and benchmark
//! results tables.
//!
//! Floats are written with Rust's shortest round-trip representation, so
//! every format reads back to exactly what was written.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::{IndexSubset, RawTrainingSet, TrainingSet, Violation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeaderMode {
    /// A first row is a header when one of its coordinate cells is not a number.
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelColumn {
    #[default]
    Last,
    /// 0-based column index.
    Index(usize),
}

impl std::str::FromStr for LabelColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("last") {
            return Ok(LabelColumn::Last);
        }
        s.parse()
            .map(LabelColumn::Index)
            .map_err(|_| Error::invalid(format!("label column must be 'last' or an index, got '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadOptions {
    pub header: HeaderMode,
    pub label_column: LabelColumn,
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn read_dataset(path: impl AsRef<Path>, options: &ReadOptions) -> Result<TrainingSet> {
    let path = path.as_ref();
    parse_dataset(File::open(path)?, path, options)
}

/// Parses dataset CSV from any reader; `source` only names it in errors.
pub fn parse_dataset(reader: impl Read, source: impl AsRef<Path>, options: &ReadOptions) -> Result<TrainingSet> {
    let source = source.as_ref();
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut width = None;
    let mut first_row = true;
    let mut label_col = 0;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut lines = Vec::new();
    for (row, record) in csv.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(row as u64 + 1, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(parse_error(
                source,
                line,
                format!("expected {expected} columns, found {}", record.len()),
            ));
        }
        if first_row {
            first_row = false;
            if expected < 2 {
                return Err(parse_error(source, line, "need at least one coordinate and a label column"));
            }
            label_col = match options.label_column {
                LabelColumn::Last => expected - 1,
                LabelColumn::Index(i) if i < expected => i,
                LabelColumn::Index(i) => {
                    return Err(parse_error(source, line, format!("label column {i} out of range for {expected} columns")))
                }
            };
            let is_header = match options.header {
                HeaderMode::Present => true,
                HeaderMode::Absent => false,
                HeaderMode::Auto => record
                    .iter()
                    .enumerate()
                    .any(|(k, cell)| k != label_col && cell.parse::<f64>().is_err()),
            };
            if is_header {
                continue;
            }
        }

        let mut point = Vec::with_capacity(expected - 1);
        for (k, cell) in record.iter().enumerate() {
            if k == label_col {
                continue;
            }
            let x: f64 = cell
                .parse()
                .map_err(|_| parse_error(source, line, format!("column {k}: '{cell}' is not a number")))?;
            if !x.is_finite() {
                return Err(parse_error(source, line, format!("column {k}: non-finite value '{cell}'")));
            }
            point.push(x);
        }
        let label = &record[label_col];
        if label.is_empty() {
            return Err(parse_error(source, line, "empty label"));
        }
        points.push(point);
        labels.push(label.to_string());
        lines.push(line);
    }
    if points.is_empty() {
        return Err(parse_error(source, 1, "no data rows"));
    }

    let raw = RawTrainingSet::from_named(points, &labels);
    let report = raw.validate();
    if let Some(Violation::CoincidentEnemies { first, second }) = report
        .violations
        .iter()
        .find(|v| matches!(v, Violation::CoincidentEnemies { .. }))
    {
        return Err(parse_error(
            source,
            lines[*second],
            format!("point coincides with the differently labeled point on line {}", lines[*first]),
        ));
    }
    TrainingSet::try_from(raw)
}

/// Writes a header `x0,…,x{d-1},label`, then one row per point with the
/// label last.
pub fn write_dataset(ts: &TrainingSet, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    write_dataset_to(ts, &mut w)?;
    w.flush()?;
    Ok(())
}

fn write_dataset_to<W: Write>(ts: &TrainingSet, w: &mut csv::Writer<W>) -> Result<()> {
    let mut header: Vec<String> = (0..ts.dim()).map(|k| format!("x{k}")).collect();
    header.push("label".to_string());
    w.write_record(&header)?;
    for i in 0..ts.len() {
        let mut row: Vec<String> = ts.point(i).iter().map(|x| x.to_string()).collect();
        row.push(ts.class_name(ts.label(i)).to_string());
        w.write_record(&row)?;
    }
    Ok(())
}

/// Reads a subset file for a dataset of `n` points.
pub fn read_subset(path: impl AsRef<Path>, n: usize) -> Result<IndexSubset> {
    let path = path.as_ref();
    parse_subset(BufReader::new(File::open(path)?), path, n)
}

pub fn parse_subset(reader: impl BufRead, source: impl AsRef<Path>, n: usize) -> Result<IndexSubset> {
    let source = source.as_ref();
    let mut out: Vec<usize> = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line_no = k as u64 + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let i: usize = text
            .parse()
            .map_err(|_| parse_error(source, line_no, format!("'{text}' is not a point index")))?;
        if i >= n {
            return Err(parse_error(source, line_no, format!("index {i} out of range for n = {n}")));
        }
        if let Some(&prev) = out.last() {
            if i <= prev {
                return Err(parse_error(
                    source,
                    line_no,
                    format!("indices must be strictly increasing, {i} follows {prev}"),
                ));
            }
        }
        out.push(i);
    }
    IndexSubset::from_sorted(out, n)
}

pub fn write_subset(subset: &IndexSubset, path: impl AsRef<Path>) -> Result<()> {
    let mut w = io::BufWriter::new(File::create(path)?);
    for i in subset.iter() {
        writeln!(w, "{i}")?;
    }
    w.flush()?;
    Ok(())
}

pub const RESULTS_HEADER: [&str; 14] = [
    "dataset",
    "algorithm",
    "n",
    "d",
    "c",
    "kappa",
    "gamma_norm",
    "subset_size",
    "size_over_kappa",
    "runtime_ns_median",
    "runtime_ns_per_point",
    "consistent",
    "repeats",
    "seed",
];

/// One benchmark measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsRow {
    pub dataset: String,
    pub algorithm: String,
    pub n: usize,
    pub d: usize,
    pub c: usize,
    pub kappa: usize,
    pub gamma_norm: f64,
    pub subset_size: usize,
    /// `subset_size / kappa`, rounded to 6 decimals.
    pub size_over_kappa: f64,
    pub runtime_ns_median: u64,
    /// `runtime_ns_median / n`.
    pub runtime_ns_per_point: f64,
    pub consistent: bool,
    pub repeats: usize,
    pub seed: u64,
}

impl ResultsRow {
    /// Fills in the two derived columns.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dataset: impl Into<String>,
        algorithm: impl Into<String>,
        (n, d, c): (usize, usize, usize),
        kappa: usize,
        gamma_norm: f64,
        subset_size: usize,
        runtime_ns_median: u64,
        consistent: bool,
        repeats: usize,
        seed: u64,
    ) -> Self {
        ResultsRow {
            dataset: dataset.into(),
            algorithm: algorithm.into(),
            n,
            d,
            c,
            kappa,
            gamma_norm,
            subset_size,
            size_over_kappa: round6(subset_size as f64 / kappa as f64),
            runtime_ns_median,
            runtime_ns_per_point: runtime_ns_median as f64 / n as f64,
            consistent,
            repeats,
            seed,
        }
    }

    fn to_record(&self) -> Vec<String> {
        vec![
            self.dataset.clone(),
            self.algorithm.clone(),
            self.n.to_string(),
            self.d.to_string(),
            self.c.to_string(),
            self.kappa.to_string(),
            self.gamma_norm.to_string(),
            self.subset_size.to_string(),
            format!("{:.6}", self.size_over_kappa),
            self.runtime_ns_median.to_string(),
            self.runtime_ns_per_point.to_string(),
            self.consistent.to_string(),
            self.repeats.to_string(),
            self.seed.to_string(),
        ]
    }

    fn from_record(r: &csv::StringRecord, path: &Path, line: u64) -> Result<Self> {
        if r.len() != RESULTS_HEADER.len() {
            return Err(parse_error(
                path,
                line,
                format!("expected {} columns, found {}", RESULTS_HEADER.len(), r.len()),
            ));
        }
        fn field<T: std::str::FromStr>(r: &csv::StringRecord, k: usize, path: &Path, line: u64) -> Result<T> {
            r[k].parse().map_err(|_| {
                parse_error(path, line, format!("{}: cannot parse '{}'", RESULTS_HEADER[k], &r[k]))
            })
        }
        Ok(ResultsRow {
            dataset: r[0].to_string(),
            algorithm: r[1].to_string(),
            n: field(r, 2, path, line)?,
            d: field(r, 3, path, line)?,
            c: field(r, 4, path, line)?,
            kappa: field(r, 5, path, line)?,
            gamma_norm: field(r, 6, path, line)?,
            subset_size: field(r, 7, path, line)?,
            size_over_kappa: field(r, 8, path, line)?,
            runtime_ns_median: field(r, 9, path, line)?,
            runtime_ns_per_point: field(r, 10, path, line)?,
            consistent: field(r, 11, path, line)?,
            repeats: field(r, 12, path, line)?,
            seed: field(r, 13, path, line)?,
        })
    }
}

/// Rounds through the 6-decimal text form, so the value survives a write and
/// read unchanged.
fn round6(x: f64) -> f64 {
    format!("{x:.6}").parse().expect("formatted float reparses")
}

/// Appends `row`, writing the header first when the file is missing or empty.
pub fn append_result(row: &ResultsRow, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let fresh = fs::metadata(path).map_or(true, |m| m.len() == 0);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::Writer::from_writer(file);
    if fresh {
        w.write_record(RESULTS_HEADER)?;
    }
    w.write_record(row.to_record())?;
    w.flush()?;
    Ok(())
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultsRow>> {
    let path: PathBuf = path.as_ref().to_path_buf();
    let mut csv = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_path(&path)?;
    let header = csv.headers()?.clone();
    if header.iter().ne(RESULTS_HEADER) {
        return Err(parse_error(&path, 1, "not a results table header"));
    }
    csv.records()
        .map(|r| {
            let r = r?;
            let line = r.position().map_or(0, |p| p.line());
            ResultsRow::from_record(&r, &path, line)
        })
        .collect()
}
