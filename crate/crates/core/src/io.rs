//! JSON inputs (sources, channels) and CSV/JSON outputs.
//!
//! A source file lists alphabet sizes and either a flat PMF over
//! `X, Y, Z, E` in row-major order, or a PMF over `X, Y, Z` plus the rows of
//! `P(e|y)`:
//!
//! ```json
//! { "axes": { "X": 2, "Y": 2, "Z": 2, "E": 2 }, "pmf": [ ... 16 values ... ] }
//! { "axes": { "X": 2, "Y": 2, "Z": 2 }, "pxyz": [ ... ], "e_given_y": [[0.7, 0.3], [0.3, 0.7]] }
//! ```
//!
//! A missing `E` has size 1. PMFs whose sum is within `1e-9` of one are
//! rescaled to sum to one; anything further off is rejected.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dist::{compose_markov, kahan_sum, Alphabet, Axis, Channel, JointSource};
use crate::error::{Error, Result};

/// PMFs within this distance of unit sum are rescaled.
pub const RENORMALIZE_TOL: f64 = 1e-9;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceFile {
    axes: BTreeMap<String, usize>,
    #[serde(default)]
    pmf: Option<Vec<f64>>,
    #[serde(default)]
    pxyz: Option<Vec<f64>>,
    #[serde(default)]
    e_given_y: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_path_buf(), message: message.into() }
}

fn renormalized(path: &Path, field: &str, mut pmf: Vec<f64>) -> Result<Vec<f64>> {
    if let Some((i, v)) = pmf.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
        return Err(parse_err(path, format!("`{field}`[{i}] = {v} is not a probability")));
    }
    let total = kahan_sum(pmf.iter().copied());
    if (total - 1.0).abs() > RENORMALIZE_TOL {
        return Err(parse_err(path, format!("`{field}` sums to {total}, not 1")));
    }
    pmf.iter_mut().for_each(|v| *v /= total);
    Ok(pmf)
}

pub fn parse_source(text: &str, path: &Path) -> Result<JointSource> {
    let file: SourceFile = serde_json::from_str(text)
        .map_err(|e| parse_err(path, format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let mut sizes = [0usize, 0, 0, 1];
    for (name, &size) in &file.axes {
        let slot = match Axis::parse(name) {
            Some(Axis::X) => 0,
            Some(Axis::Y) => 1,
            Some(Axis::Z) => 2,
            Some(Axis::E) => 3,
            _ => return Err(parse_err(path, format!("`axes`: unexpected axis `{name}`"))),
        };
        sizes[slot] = size;
    }
    for (slot, name) in ["X", "Y", "Z"].iter().enumerate() {
        if sizes[slot] == 0 {
            return Err(parse_err(path, format!("`axes`: missing or zero size for {name}")));
        }
    }
    match (file.pmf, file.pxyz, file.e_given_y) {
        (Some(pmf), None, None) => JointSource::xyze(sizes, renormalized(path, "pmf", pmf)?),
        (None, Some(pxyz), Some(rows)) => {
            let pxyz = renormalized(path, "pxyz", pxyz)?;
            let base = JointSource::new(
                vec![Alphabet::new(Axis::X, sizes[0])?, Alphabet::new(Axis::Y, sizes[1])?, Alphabet::new(Axis::Z, sizes[2])?],
                pxyz,
            )?;
            let rows = rows
                .into_iter()
                .enumerate()
                .map(|(i, r)| renormalized(path, &format!("e_given_y[{i}]"), r))
                .collect::<Result<Vec<_>>>()?;
            let e = Channel::new(vec![Alphabet::new(Axis::Y, sizes[1])?], Alphabet::new(Axis::E, sizes[3])?, rows)?;
            compose_markov(&base, &e)
        }
        _ => Err(parse_err(path, "give either `pmf`, or both `pxyz` and `e_given_y`")),
    }
}

pub fn load_source(path: &Path) -> Result<JointSource> {
    parse_source(&read(path)?, path)
}

pub fn load_channel(path: &Path) -> Result<Channel> {
    let ch: Channel = serde_json::from_str(&read(path)?)
        .map_err(|e| parse_err(path, format!("line {}, column {}: {e}", e.line(), e.column())))?;
    ch.check()?;
    Ok(ch)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let io = |source| Error::Io { path: path.to_path_buf(), source };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io { path: path.to_path_buf(), source: e.into() })?;
    w.write_all(b"\n").map_err(io)?;
    w.flush().map_err(io)
}

/// Formats `v` with 9 significant digits: plain notation for moderate
/// magnitudes, exponent notation otherwise.
pub fn format_sig9(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let rounded: f64 = sci.parse().expect("round trip");
        let s = format!("{:.*}", (8 - exp) as usize, rounded);
        trim_zeros(&s)
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(v) => format_sig9(*v),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Float(v.unwrap_or(f64::NAN))
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v as i64)
            }
        }
    )*};
}
int_cell!(usize, u32, u64, i64);

/// A header plus rows of equal width.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Invalid(format!("row has {} cells, header has {}", row.len(), self.header.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn write_to(&self, w: impl Write) -> std::result::Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::render))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 cells")
    }
}

/// Writes `table` as CSV to `path`, or to stdout when `path` is `None`.
pub fn emit_csv(table: &Table, path: Option<&Path>) -> Result<()> {
    let to_err = |path: PathBuf, e: csv::Error| Error::Io { path, source: e.into() };
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|source| Error::Io { path: p.to_path_buf(), source })?;
            table.write_to(BufWriter::new(f)).map_err(|e| to_err(p.to_path_buf(), e))
        }
        None => table.write_to(std::io::stdout().lock()).map_err(|e| to_err(PathBuf::from("<stdout>"), e)),
    }
}
