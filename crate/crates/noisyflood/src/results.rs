//! `results.csv`, the relative-change summary table and plot series.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::runner::{ResultRow, ResultTable, Varied};

pub const CSV_HEADER: [&str; 10] = [
    "varied_name",
    "varied_value",
    "p_c",
    "rch",
    "rch_stderr",
    "ret",
    "ret_stderr",
    "s_rch",
    "s_ret",
    "samples",
];

/// p_c columns of the summary table.
pub const TABLE_P_C: [f64; 2] = [0.5, 0.6];

const P_C_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ResultsError {
    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{0}: no result rows")]
    Empty(String),
    #[error("mixed swept parameters in one file: {0} and {1}")]
    MixedParameters(String, String),
    #[error("unknown swept parameter '{0}'")]
    UnknownParameter(String),
    #[error("{0}")]
    MissingRows(String),
    #[error("unknown figure '{0}' (expected rch or ret)")]
    UnknownFigure(String),
}

/// Rows as stored in `results.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvResults {
    pub varied: Varied,
    pub rows: Vec<ResultRow>,
}

impl From<&ResultTable> for CsvResults {
    fn from(t: &ResultTable) -> Self {
        Self {
            varied: t.varied,
            rows: t.rows.clone(),
        }
    }
}

impl CsvResults {
    /// Swept values in first-seen order.
    pub fn values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.varied_value) {
                out.push(r.varied_value);
            }
        }
        out
    }

    pub fn row(&self, value: f64, p_c: f64) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.varied_value == value && (r.p_c - p_c).abs() < P_C_TOLERANCE)
    }
}

/// Shortest representation that parses back to the same `f64`.
fn num(v: f64) -> String {
    v.to_string()
}

pub fn write_csv<W: io::Write>(table: &ResultTable, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let name = table.varied.key();
    for r in &table.rows {
        w.write_record([
            name.to_string(),
            num(r.varied_value),
            num(r.p_c),
            num(r.rch),
            num(r.rch_stderr),
            num(r.ret),
            num(r.ret_stderr),
            num(r.s_rch),
            num(r.s_ret),
            r.samples.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(table: &ResultTable, path: &Path) -> Result<(), ResultsError> {
    let file = std::fs::File::create(path).map_err(|source| ResultsError::Io {
        path: path.display().to_string(),
        source,
    })?;
    write_csv(table, io::BufWriter::new(file)).map_err(|source| ResultsError::Csv {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Deserialize)]
struct CsvRecord {
    varied_name: String,
    varied_value: f64,
    p_c: f64,
    rch: f64,
    rch_stderr: f64,
    ret: f64,
    ret_stderr: f64,
    s_rch: f64,
    s_ret: f64,
    samples: usize,
}

pub fn read_csv<R: io::Read>(input: R, origin: &str) -> Result<CsvResults, ResultsError> {
    let csv_err = |source| ResultsError::Csv {
        path: origin.to_string(),
        source,
    };
    let mut reader = csv::Reader::from_reader(input);
    let mut name: Option<String> = None;
    let mut rows = Vec::new();
    for record in reader.deserialize::<CsvRecord>() {
        let r = record.map_err(csv_err)?;
        match &name {
            None => name = Some(r.varied_name.clone()),
            Some(n) if *n != r.varied_name => {
                return Err(ResultsError::MixedParameters(n.clone(), r.varied_name));
            }
            Some(_) => {}
        }
        rows.push(ResultRow {
            varied_value: r.varied_value,
            p_c: r.p_c,
            rch: r.rch,
            rch_stderr: r.rch_stderr,
            ret: r.ret,
            ret_stderr: r.ret_stderr,
            s_rch: r.s_rch,
            s_ret: r.s_ret,
            samples: r.samples,
        });
    }
    let name = name.ok_or_else(|| ResultsError::Empty(origin.to_string()))?;
    let varied = Varied::from_key(&name).ok_or(ResultsError::UnknownParameter(name))?;
    Ok(CsvResults { varied, rows })
}

pub fn read_csv_file(path: &Path) -> Result<CsvResults, ResultsError> {
    let origin = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|source| ResultsError::Io {
        path: origin.clone(),
        source,
    })?;
    read_csv(io::BufReader::new(file), &origin)
}

fn display_value(varied: Varied, v: f64) -> String {
    match varied {
        Varied::NodeCount => format!("{v}"),
        _ => format!("{v:?}"),
    }
}

/// Summary of `S_RCH` and `S_RET` at `p_c = 0.5` and `0.6`, one row per swept
/// value. Retransmission-probability sweeps list the largest value first,
/// all other sweeps ascend.
pub fn format_table(results: &CsvResults) -> Result<String, ResultsError> {
    let mut values = results.values();
    values.sort_by(f64::total_cmp);
    if results.varied == Varied::RetransmitProbability {
        values.reverse();
    }

    let key = results.varied.key();
    let mut missing = Vec::new();
    for &v in &values {
        for p_c in [1.0, TABLE_P_C[0], TABLE_P_C[1]] {
            if results.row(v, p_c).is_none() {
                missing.push(format!(
                    "p_c = {p_c:?} for {key} = {}",
                    display_value(results.varied, v)
                ));
            }
        }
    }
    if !missing.is_empty() {
        return Err(ResultsError::MissingRows(format!(
            "the table needs rows at p_c = 0.5 and 0.6 and the p_c = 1.0 baseline; missing {}",
            missing.join(", ")
        )));
    }

    let mut out = String::new();
    writeln!(out, "{:<8}{:<20}S_RET (%)", "", "S_RCH (%)").unwrap();
    writeln!(
        out,
        "{:<8}{:<10}{:<10}{:<10}p_c=0.6",
        key, "p_c=0.5", "p_c=0.6", "p_c=0.5"
    )
    .unwrap();
    for &v in &values {
        let at = |p_c| results.row(v, p_c).expect("checked above");
        let (a, b) = (at(TABLE_P_C[0]), at(TABLE_P_C[1]));
        writeln!(
            out,
            "{:<8}{:<10.1}{:<10.1}{:<10.1}{:.1}",
            display_value(results.varied, v),
            a.s_rch,
            b.s_rch,
            a.s_ret,
            b.s_ret
        )
        .unwrap();
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Rch,
    Ret,
}

impl std::str::FromStr for Figure {
    type Err = ResultsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rch" => Ok(Figure::Rch),
            "ret" => Ok(Figure::Ret),
            other => Err(ResultsError::UnknownFigure(other.to_string())),
        }
    }
}

impl Figure {
    pub fn name(&self) -> &'static str {
        match self {
            Figure::Rch => "rch",
            Figure::Ret => "ret",
        }
    }
}

/// One `(file name, contents)` pair per swept value: `p_c value` lines in
/// grid order.
pub fn plot_series(results: &CsvResults, figure: Figure) -> Vec<(String, String)> {
    results
        .values()
        .into_iter()
        .map(|v| {
            let mut body = String::new();
            for r in results.rows.iter().filter(|r| r.varied_value == v) {
                let y = match figure {
                    Figure::Rch => r.rch,
                    Figure::Ret => r.ret,
                };
                writeln!(body, "{} {}", r.p_c, y).unwrap();
            }
            let name = format!(
                "{}_{}_{}.dat",
                figure.name(),
                results.varied.key(),
                display_value(results.varied, v)
            );
            (name, body)
        })
        .collect()
}

/// Writes every series of [`plot_series`] into `dir`; nothing is written
/// when the results are empty.
pub fn write_plot_series(results: &CsvResults, figure: Figure, dir: &Path) -> Result<Vec<PathBuf>, ResultsError> {
    let series = plot_series(results, figure);
    if series.is_empty() {
        return Err(ResultsError::Empty(dir.display().to_string()));
    }
    let io_err = |path: &Path| {
        let path = path.display().to_string();
        move |source| ResultsError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::with_capacity(series.len());
    for (name, body) in series {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}
