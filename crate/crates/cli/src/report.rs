//! Report rows and their CSV / JSON serialization.
//!
//! CSV numbers are written with 17 significant digits (`{:.16e}`), which is
//! round-trip exact for binary64; absent values are empty fields and
//! non-finite values are written as `NaN` / `inf` / `-inf`.  JSON uses
//! shortest round-trip numbers with `null` for absent or non-finite values.
//! Output is UTF-8 with `\n` line endings and depends only on its input.

use std::io::Write;

use means_lab_core::explore::{Cell, CellSign, ScanConfig, SignMap};
use means_lab_core::{CertifiedSign, InequalityId, MarginRecord, SignOutcome};
use serde::Serialize;

/// Version of the CSV and JSON schemas below.
pub const SCHEMA_VERSION: u32 = 1;

/// Columns of a sign-map CSV.
pub const SIGNMAP_HEADER: [&str; 8] = ["id", "t", "n", "margin", "rel_margin", "sign", "digits", "certified"];

/// Columns of a margin report CSV.
pub const REPORT_HEADER: [&str; 10] = [
    "id",
    "x",
    "y",
    "t",
    "n",
    "margin",
    "rel_margin",
    "sign",
    "digits",
    "certified",
];

/// Formats a binary64 with 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// `Some(v)` for finite `v`.
fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn relative(margin: f64, magnitude: f64) -> f64 {
    if magnitude == 0.0 {
        0.0
    } else {
        margin / magnitude
    }
}

/// Report name of a certified outcome.
pub fn outcome_name(s: SignOutcome) -> &'static str {
    match s {
        SignOutcome::Positive => "positive",
        SignOutcome::Negative => "negative",
        SignOutcome::ZeroWithinBound => "zero",
    }
}

/// Report name of a cell sign.
pub fn cell_sign_name(s: CellSign) -> &'static str {
    match s {
        CellSign::Positive => "positive",
        CellSign::Negative => "negative",
        CellSign::Zero => "zero",
        CellSign::OutOfRange => "out_of_range",
    }
}

fn binary64_sign(v: f64) -> &'static str {
    if v.is_nan() {
        "out_of_range"
    } else if v > 0.0 {
        "positive"
    } else if v < 0.0 {
        "negative"
    } else {
        "zero"
    }
}

/// One margin evaluation as reported.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub id: InequalityId,
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub n: Option<f64>,
    pub margin: f64,
    pub rel_margin: f64,
    pub sign: &'static str,
    pub digits: u32,
    pub certified: bool,
}

impl ReportRow {
    /// Row from a binary64 record and an optional certification, which
    /// decides the sign when present.
    pub fn new(rec: &MarginRecord, cert: Option<&CertifiedSign>) -> Self {
        let t = rec.pair.x() / rec.pair.y();
        Self {
            id: rec.id,
            x: rec.pair.x(),
            y: rec.pair.y(),
            t,
            n: rec.exponent,
            margin: rec.margin,
            rel_margin: rec.relative(),
            sign: cert.map_or_else(|| binary64_sign(rec.margin), |c| outcome_name(c.outcome)),
            digits: cert.map_or(rec.digits, |c| c.digits),
            certified: cert.is_some(),
        }
    }

    fn csv_fields(&self) -> [String; 10] {
        [
            self.id.as_str().to_owned(),
            fmt_num(self.x),
            fmt_num(self.y),
            fmt_num(self.t),
            fmt_opt(self.n),
            fmt_num(self.margin),
            fmt_num(self.rel_margin),
            self.sign.to_owned(),
            self.digits.to_string(),
            self.certified.to_string(),
        ]
    }
}

/// CSV writer with `\n` terminators.
pub fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

/// Writes report rows as CSV.
pub fn write_report_csv<W: Write>(rows: &[ReportRow], out: W) -> csv::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in rows {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

/// JSON form of a report row; non-finite numbers become `null`.
#[derive(Debug, Serialize)]
struct JsonRow<'a> {
    id: &'static str,
    x: f64,
    y: f64,
    t: Option<f64>,
    n: Option<f64>,
    margin: Option<f64>,
    rel_margin: Option<f64>,
    sign: &'a str,
    digits: u32,
    certified: bool,
}

impl<'a> From<&'a ReportRow> for JsonRow<'a> {
    fn from(r: &'a ReportRow) -> Self {
        Self {
            id: r.id.as_str(),
            x: r.x,
            y: r.y,
            t: finite(r.t),
            n: r.n,
            margin: finite(r.margin),
            rel_margin: finite(r.rel_margin),
            sign: r.sign,
            digits: r.digits,
            certified: r.certified,
        }
    }
}

/// Metadata header of every JSON document.
#[derive(Debug, Serialize)]
pub struct Meta<C: Serialize> {
    pub version: String,
    pub schema: u32,
    pub config: C,
    pub seed: Option<u64>,
}

impl<C: Serialize> Meta<C> {
    pub fn new(config: C, seed: Option<u64>) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_owned(),
            schema: SCHEMA_VERSION,
            config,
            seed,
        }
    }
}

/// Writes `value` as pretty JSON followed by a newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")
}

#[derive(Serialize)]
struct ReportDoc<'a, C: Serialize> {
    meta: Meta<C>,
    records: Vec<JsonRow<'a>>,
}

/// Writes report rows as JSON under a metadata header.
pub fn write_report_json<C: Serialize, W: Write>(rows: &[ReportRow], meta: Meta<C>, out: W) -> std::io::Result<()> {
    let doc = ReportDoc {
        meta,
        records: rows.iter().map(JsonRow::from).collect(),
    };
    write_json(&doc, out)
}

/// Scan configuration as recorded in JSON metadata.
#[derive(Debug, Clone, Serialize)]
pub struct ScanMeta {
    pub id: &'static str,
    pub t_lo: f64,
    pub t_hi: f64,
    pub t_steps: usize,
    pub log_t: bool,
    pub n_lo: Option<f64>,
    pub n_hi: Option<f64>,
    pub n_steps: Option<usize>,
    pub budget: usize,
    pub start_digits: u32,
}

impl ScanMeta {
    pub fn new(cfg: &ScanConfig, start_digits: u32) -> Self {
        Self {
            id: cfg.id.as_str(),
            t_lo: cfg.t_lo,
            t_hi: cfg.t_hi,
            t_steps: cfg.t_steps,
            log_t: cfg.log_t,
            n_lo: cfg.exponents.map(|g| g.lo),
            n_hi: cfg.exponents.map(|g| g.hi),
            n_steps: cfg.exponents.map(|g| g.steps),
            budget: cfg.budget,
            start_digits,
        }
    }
}

fn cell_fields(c: &Cell) -> [String; 8] {
    [
        c.id.as_str().to_owned(),
        fmt_num(c.t),
        fmt_opt(c.n),
        fmt_num(c.margin),
        fmt_num(relative(c.margin, c.magnitude)),
        cell_sign_name(c.sign).to_owned(),
        c.digits.to_string(),
        c.certified.is_some().to_string(),
    ]
}

#[derive(Serialize)]
struct JsonCell {
    id: &'static str,
    t: f64,
    n: Option<f64>,
    margin: Option<f64>,
    rel_margin: Option<f64>,
    sign: &'static str,
    digits: u32,
    certified: bool,
}

#[derive(Serialize)]
struct SignMapDoc<C: Serialize> {
    meta: Meta<C>,
    complete: bool,
    records: Vec<JsonCell>,
}

/// Writes a sign map as CSV (header plus one row per cell, in grid order).
pub fn emit_signmap_csv<W: Write>(map: &SignMap, out: W) -> csv::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(SIGNMAP_HEADER)?;
    for c in &map.cells {
        w.write_record(cell_fields(c))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a sign map as JSON with a metadata header.
pub fn emit_signmap_json<C: Serialize, W: Write>(map: &SignMap, meta: Meta<C>, out: W) -> std::io::Result<()> {
    let doc = SignMapDoc {
        meta,
        complete: map.complete,
        records: map
            .cells
            .iter()
            .map(|c| JsonCell {
                id: c.id.as_str(),
                t: c.t,
                n: c.n,
                margin: finite(c.margin),
                rel_margin: finite(relative(c.margin, c.magnitude)),
                sign: cell_sign_name(c.sign),
                digits: c.digits,
                certified: c.certified.is_some(),
            })
            .collect(),
    };
    write_json(&doc, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -0.50851435669022252141, 6.02e23, 5e-324, 1.7976931348623157e308] {
            let s = fmt_num(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(fmt_num(1.5), "1.5000000000000000e0");
        assert_eq!(fmt_num(f64::NAN), "NaN");
    }

    #[test]
    fn empty_signmap_is_header_only() {
        let map = SignMap {
            cells: Vec::new(),
            complete: true,
        };
        let mut buf = Vec::new();
        emit_signmap_csv(&map, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "id,t,n,margin,rel_margin,sign,digits,certified\n");
    }
}
