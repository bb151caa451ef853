//! CSV export. Floats use Rust's shortest round-trip formatting, so every
//! value re-parses to the identical `f64`.

use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// A row type with a fixed column layout.
pub trait Record {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Writes the header and one line per row.
pub fn write_csv<R: Record, W: Write>(rows: &[R], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_csv<R: Record>(rows: &[R], path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(rows, std::io::BufWriter::new(file))
}

/// One line of Monte-Carlo verification output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McRow {
    pub n_pixels: usize,
    pub alpha0: f64,
    pub rate: f64,
    pub empirical_alpha: f64,
    pub empirical_power: f64,
    pub theory_power: f64,
}

impl Record for McRow {
    const HEADER: &'static [&'static str] = &[
        "n_pixels",
        "alpha0",
        "rate",
        "empirical_alpha",
        "empirical_power",
        "theory_power",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.n_pixels.to_string(),
            fmt_f64(self.alpha0),
            fmt_f64(self.rate),
            fmt_f64(self.empirical_alpha),
            fmt_f64(self.empirical_power),
            fmt_f64(self.theory_power),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerRow {
    pub n_pixels: usize,
    pub alpha0: f64,
    pub rate: f64,
    pub power: f64,
}

impl Record for PowerRow {
    const HEADER: &'static [&'static str] = &["n_pixels", "alpha0", "rate", "power"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.n_pixels.to_string(),
            fmt_f64(self.alpha0),
            fmt_f64(self.rate),
            fmt_f64(self.power),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub file: String,
    pub statistic: f64,
}

impl Record for ScoreRow {
    const HEADER: &'static [&'static str] = &["file", "statistic"];

    fn fields(&self) -> Vec<String> {
        vec![self.file.clone(), fmt_f64(self.statistic)]
    }
}

impl Record for (f64, f64) {
    const HEADER: &'static [&'static str] = &["false_alarm_rate", "detection_rate"];

    fn fields(&self) -> Vec<String> {
        vec![fmt_f64(self.0), fmt_f64(self.1)]
    }
}

/// Reads the `statistic` column of a score file, or its first column that
/// parses as numbers when there is no such header.
pub fn read_scores(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let records: Vec<csv::StringRecord> = reader.records().collect::<std::result::Result<_, _>>()?;
    let column = match headers.iter().position(|h| h.trim() == "statistic") {
        Some(c) => c,
        None => (0..headers.len())
            .find(|&c| records.iter().all(|r| r.get(c).is_some_and(|v| v.trim().parse::<f64>().is_ok())))
            .ok_or_else(|| crate::Error::Config("no numeric score column".into()))?,
    };
    records
        .iter()
        .map(|r| {
            let v = r.get(column).unwrap_or("").trim();
            v.parse::<f64>()
                .map_err(|_| crate::Error::Config(format!("bad score {v:?}")))
        })
        .collect()
}
