//! Command line front end of `means-lab-core`.
//!
//! [`run`] parses arguments, evaluates, and writes CSV or JSON to the given
//! streams.  Exit codes: `0` success (including a hunt that found nothing),
//! `3` a hunt produced a certified counterexample, `2` usage or domain
//! errors, `1` output failures.
//!
//! Grid scans and exponent profiles run on a rayon pool; cells are merged
//! by grid index, so output bytes do not depend on the thread count.

pub mod args;
pub mod report;

use std::io::Write;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use means_lab_core::explore::{
    self, bracket_ratio_crossing, evaluate_cell, hunt, profile_row, scan_len, CriticalProfile, ExponentGrid,
    HuntOptions, HuntOutcome, MinOptions, ScanConfig, SignMap,
};
use means_lab_core::margins::{self, chain_margins, lemma_gap, proof_identity_residuals, ChainMargins};
use means_lab_core::means::{self};
use means_lab_core::oracle::{self, certify_sign, CertifyOptions};
use means_lab_core::{
    DomainError, ExploreError, InequalityId, MarginError, MarginRecord, MeanKind, OracleError, PositivePair,
};

use args::{Cli, Command, OutFormat, PairArgs, RegionArgs};
use report::{fmt_num, Meta, ReportRow, ScanMeta};

/// Environment variable holding the default starting precision of sign
/// certification.
pub const DIGITS_ENV: &str = "MEANS_LAB_DIGITS";

/// Exit code of a hunt that found a certified counterexample.
pub const EXIT_WITNESS: i32 = 3;
/// Exit code of usage and domain errors.
pub const EXIT_USAGE: i32 = 2;

/// Failure of one invocation.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Domain(#[from] DomainError),
    #[error("{0}")]
    Margin(#[from] MarginError),
    #[error("{0}")]
    Explore(#[from] ExploreError),
    #[error("{0}")]
    Oracle(#[from] OracleError),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Csv(_) => 1,
            _ => EXIT_USAGE,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Runs one invocation; `argv[0]` is the program name.  `env_digits` is the
/// value of [`DIGITS_ENV`], if set.
pub fn run<I, S>(argv: I, env_digits: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, env_digits, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn start_digits(flag: Option<u32>, env_digits: Option<&str>) -> Result<u32, CliError> {
    let d = match (flag, env_digits) {
        (Some(d), _) => d,
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("{DIGITS_ENV} must be a positive integer, got {s:?}")))?,
        (None, None) => oracle::DEFAULT_START_DIGITS,
    };
    if !(oracle::MIN_DIGITS..=oracle::MAX_DIGITS / 2).contains(&d) {
        return Err(usage(format!(
            "digits must lie in {}..={}, got {d}",
            oracle::MIN_DIGITS,
            oracle::MAX_DIGITS / 2
        )));
    }
    Ok(d)
}

fn certify_options(digits: u32) -> CertifyOptions {
    CertifyOptions {
        start_digits: digits,
        cap_digits: oracle::DEFAULT_CAP_DIGITS.max(2 * digits),
    }
}

fn parse_id(s: &str) -> Result<InequalityId, CliError> {
    s.parse().map_err(|_| {
        let names: Vec<_> = InequalityId::ALL.iter().map(|i| i.as_str()).collect();
        usage(format!("unknown inequality {s:?}; expected one of {}", names.join(", ")))
    })
}

fn parse_pair(p: &PairArgs) -> Result<PositivePair, CliError> {
    match (p.x, p.y, p.t) {
        (Some(x), Some(y), None) => Ok(PositivePair::new(x, y)?),
        (None, None, Some(t)) => {
            if t < 1.0 {
                return Err(usage("--t is a ratio max/min and must be at least 1"));
            }
            Ok(PositivePair::from_ratio(t)?)
        }
        _ => Err(usage("give either --x and --y, or --t")),
    }
}

fn threads_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| usage(format!("cannot start worker threads: {e}")))
}

fn region_config(r: &RegionArgs) -> Result<ScanConfig, CliError> {
    let id = parse_id(&r.ineq)?;
    let exponents = match (r.n, r.n_lo, r.n_hi, r.n_steps) {
        (Some(n), None, None, None) => Some(ExponentGrid::single(n)),
        (None, Some(lo), Some(hi), Some(steps)) => Some(ExponentGrid { lo, hi, steps }),
        (None, None, None, None) => None,
        _ => return Err(usage("give either --n, or --n-lo, --n-hi and --n-steps")),
    };
    let cfg = ScanConfig {
        id,
        t_lo: r.t_lo,
        t_hi: r.t_hi,
        t_steps: r.t_steps,
        log_t: !r.linear,
        exponents,
        seed: r.seed,
        budget: r.budget,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cmd: Command, env_digits: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Eval {
            kind,
            pair,
            digits,
            out: o,
        } => cmd_eval(&kind, &pair, digits, o.format, out),
        Command::Margin {
            ineq,
            pair,
            n,
            precision,
            out: o,
        } => {
            let d = start_digits(precision.digits, env_digits)?;
            cmd_margin(&ineq, &pair, n, d, o.format, out)
        }
        Command::Chain { pair, out: o } => cmd_chain(&pair, o.format, out),
        Command::Identities { pair, out: o } => cmd_identities(&pair, o.format, out),
        Command::Lemma { a, b, c, d, n, out: o } => cmd_lemma([a, b, c, d], n, o.format, out),
        Command::Scan {
            region,
            precision,
            threads,
            out: o,
        } => {
            let d = start_digits(precision.digits, env_digits)?;
            let cfg = region_config(&region)?;
            let pool = threads_pool(threads.threads)?;
            writeln!(err, "seed: {}", cfg.seed)?;
            let map = parallel_scan(&pool, &cfg, certify_options(d))?;
            if !map.complete {
                writeln!(
                    err,
                    "budget exhausted: {} of {} cells evaluated",
                    map.cells.len(),
                    cfg.cell_count()
                )?;
            }
            match o.format {
                OutFormat::Csv => report::emit_signmap_csv(&map, out)?,
                OutFormat::Json => report::emit_signmap_json(&map, Meta::new(ScanMeta::new(&cfg, d), Some(cfg.seed)), out)?,
            }
            Ok(0)
        }
        Command::Hunt {
            region,
            refine_samples,
            precision,
            out: o,
        } => {
            let d = start_digits(precision.digits, env_digits)?;
            let cfg = region_config(&region)?;
            writeln!(err, "seed: {}", cfg.seed)?;
            let opts = HuntOptions {
                refine_samples,
                certify: certify_options(d),
                ..HuntOptions::default()
            };
            cmd_hunt(&cfg, &opts, d, o.format, out, err)
        }
        Command::Bracket {
            ineq,
            n,
            t_lo,
            t_hi,
            tol,
            precision,
            out: o,
        } => {
            let d = start_digits(precision.digits, env_digits)?;
            cmd_bracket(&ineq, n, t_lo, t_hi, tol, d, o.format, out)
        }
        Command::Profile {
            n_list,
            t_lo,
            t_hi,
            grid,
            precision,
            threads,
            out: o,
        } => {
            let d = start_digits(precision.digits, env_digits)?;
            let pool = threads_pool(threads.threads)?;
            cmd_profile(&pool, &n_list, t_lo, t_hi, grid, d, o.format, out)
        }
    }
}

/// Scans the grid of `cfg` on `pool`; same result as [`explore::scan`].
pub fn parallel_scan(pool: &rayon::ThreadPool, cfg: &ScanConfig, certify: CertifyOptions) -> Result<SignMap, CliError> {
    cfg.validate()?;
    let len = scan_len(cfg);
    let cells = pool.install(|| {
        (0..len)
            .into_par_iter()
            .map(|i| evaluate_cell(cfg, i, certify))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(SignMap {
        cells,
        complete: len == cfg.cell_count(),
    })
}

/// Profiles each exponent on `pool`; same result as
/// [`explore::exponent_profile`].
pub fn parallel_profile(
    pool: &rayon::ThreadPool,
    n_grid: &[f64],
    t_lo: f64,
    t_hi: f64,
    opts: MinOptions,
) -> Result<CriticalProfile, CliError> {
    if n_grid.iter().any(|n| !n.is_finite()) {
        return Err(usage("exponents must be finite"));
    }
    let rows = pool.install(|| {
        n_grid
            .par_iter()
            .map(|&n| profile_row(n, t_lo, t_hi, opts))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(CriticalProfile { rows })
}

fn write_table<W: Write + ?Sized>(header: &[&str], rows: &[Vec<String>], out: &mut W) -> Result<(), CliError> {
    let mut w = report::csv_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PairMeta {
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct Doc<C: Serialize, R: Serialize> {
    meta: Meta<C>,
    records: R,
}

fn write_doc<C: Serialize, R: Serialize>(config: C, seed: Option<u64>, records: R, out: &mut dyn Write) -> Result<(), CliError> {
    report::write_json(
        &Doc {
            meta: Meta::new(config, seed),
            records,
        },
        out,
    )?;
    Ok(())
}

fn cmd_eval(kind: &str, pair: &PairArgs, digits: Option<u32>, format: OutFormat, out: &mut dyn Write) -> Result<i32, CliError> {
    let kinds: Vec<MeanKind> = if kind.eq_ignore_ascii_case("all") {
        MeanKind::ALL.to_vec()
    } else {
        vec![kind
            .parse()
            .map_err(|e| usage(format!("unknown mean {kind:?}: {e}")))?]
    };
    let p = parse_pair(pair)?;
    if let Some(d) = digits {
        if !(oracle::MIN_DIGITS..=oracle::MAX_DIGITS).contains(&d) {
            return Err(OracleError::UnsupportedDigits(d).into());
        }
    }
    #[derive(Serialize)]
    struct Row {
        kind: &'static str,
        x: f64,
        y: f64,
        value: f64,
        decimal: Option<String>,
        digits: u32,
    }
    let mut rows = Vec::new();
    for k in kinds {
        let (value, decimal, dg) = match digits {
            Some(d) => {
                let hp = oracle::eval_mean_hp(k, p, d)?;
                (hp.to_f64(), Some(hp.to_scientific()), d)
            }
            None => (means::eval(k, p), None, means_lab_core::BINARY64_DIGITS),
        };
        rows.push(Row {
            kind: k.as_str(),
            x: p.x(),
            y: p.y(),
            value,
            decimal,
            digits: dg,
        });
    }
    match format {
        OutFormat::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.kind.to_owned(),
                        fmt_num(r.x),
                        fmt_num(r.y),
                        r.decimal.clone().unwrap_or_else(|| fmt_num(r.value)),
                        r.digits.to_string(),
                    ]
                })
                .collect();
            write_table(&["kind", "x", "y", "value", "digits"], &table, out)?;
        }
        OutFormat::Json => write_doc(PairMeta { x: p.x(), y: p.y() }, None, &rows, out)?,
    }
    Ok(0)
}

fn emit_rows(rows: &[ReportRow], config: impl Serialize, seed: Option<u64>, format: OutFormat, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        OutFormat::Csv => report::write_report_csv(rows, out)?,
        OutFormat::Json => report::write_report_json(rows, Meta::new(config, seed), out)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct MarginMeta {
    id: &'static str,
    x: f64,
    y: f64,
    n: Option<f64>,
    start_digits: u32,
}

fn cmd_margin(ineq: &str, pair: &PairArgs, n: Option<f64>, digits: u32, format: OutFormat, out: &mut dyn Write) -> Result<i32, CliError> {
    let id = parse_id(ineq)?;
    let p = parse_pair(pair)?;
    let rec = margins::margin(id, p, n)?;
    let cert = certify_sign(id, p, n, certify_options(digits))?;
    let row = ReportRow::new(&rec, Some(&cert));
    let meta = MarginMeta {
        id: id.as_str(),
        x: p.x(),
        y: p.y(),
        n,
        start_digits: digits,
    };
    emit_rows(&[row], meta, None, format, out)?;
    Ok(0)
}

fn cmd_chain(pair: &PairArgs, format: OutFormat, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = parse_pair(pair)?;
    let c: ChainMargins = chain_margins(p);
    #[derive(Serialize)]
    struct Row {
        kind: &'static str,
        index: usize,
        label: String,
        value: f64,
    }
    let mut rows = Vec::new();
    for (i, (label, v)) in ChainMargins::LABELS.iter().zip(c.quantities).enumerate() {
        rows.push(Row {
            kind: "quantity",
            index: i,
            label: (*label).to_owned(),
            value: v,
        });
    }
    for (i, v) in c.margins.iter().enumerate() {
        rows.push(Row {
            kind: "margin",
            index: i,
            label: format!("{} - {}", ChainMargins::LABELS[i + 1], ChainMargins::LABELS[i]),
            value: *v,
        });
    }
    match format {
        OutFormat::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.kind.to_owned(), r.index.to_string(), r.label.clone(), fmt_num(r.value)])
                .collect();
            write_table(&["kind", "index", "label", "value"], &table, out)?;
        }
        OutFormat::Json => write_doc(PairMeta { x: p.x(), y: p.y() }, None, &rows, out)?,
    }
    Ok(0)
}

fn cmd_identities(pair: &PairArgs, format: OutFormat, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = parse_pair(pair)?;
    let r = proof_identity_residuals(p);
    let items = [
        ("product_quartic_margin", r.product_quartic_margin),
        ("mean_difference_residual", r.mean_difference_residual),
        ("sum_margin", r.sum_margin),
        ("rationalization_residual", r.rationalization_residual),
    ];
    match format {
        OutFormat::Csv => {
            let table: Vec<Vec<String>> = items.iter().map(|(k, v)| vec![(*k).to_owned(), fmt_num(*v)]).collect();
            write_table(&["name", "value"], &table, out)?;
        }
        OutFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                name: &'static str,
                value: f64,
            }
            let rows: Vec<Row> = items.iter().map(|&(name, value)| Row { name, value }).collect();
            write_doc(PairMeta { x: p.x(), y: p.y() }, None, rows, out)?;
        }
    }
    Ok(0)
}

fn cmd_lemma(q: [f64; 4], n: i32, format: OutFormat, out: &mut dyn Write) -> Result<i32, CliError> {
    let m = lemma_gap(q[0], q[1], q[2], q[3], n)?;
    #[derive(Serialize)]
    struct Row {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        n: i32,
        margin: f64,
        rel_margin: f64,
        holds: bool,
    }
    let row = Row {
        a: q[0],
        b: q[1],
        c: q[2],
        d: q[3],
        n,
        margin: m.value,
        rel_margin: m.relative(),
        holds: m.holds_within_tol(),
    };
    match format {
        OutFormat::Csv => {
            let fields = vec![
                fmt_num(row.a),
                fmt_num(row.b),
                fmt_num(row.c),
                fmt_num(row.d),
                row.n.to_string(),
                fmt_num(row.margin),
                fmt_num(row.rel_margin),
                row.holds.to_string(),
            ];
            write_table(&["a", "b", "c", "d", "n", "margin", "rel_margin", "holds"], &[fields], out)?;
        }
        OutFormat::Json => write_doc((), None, [row], out)?,
    }
    Ok(0)
}

fn cmd_hunt(
    cfg: &ScanConfig,
    opts: &HuntOptions,
    digits: u32,
    format: OutFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let outcome = hunt(cfg, opts)?;
    let meta = ScanMeta::new(cfg, digits);
    match outcome {
        HuntOutcome::Found(w) => {
            let rec = MarginRecord {
                id: w.id,
                pair: w.pair(),
                exponent: w.exponent,
                margin: w.margin,
                magnitude: w.magnitude,
                digits: means_lab_core::BINARY64_DIGITS,
            };
            writeln!(
                err,
                "certified counterexample at t = {} (margin {}, {} digits)",
                fmt_num(w.ratio.t),
                fmt_num(w.margin),
                w.digits()
            )?;
            emit_rows(&[ReportRow::new(&rec, Some(&w.certified))], meta, Some(cfg.seed), format, out)?;
            Ok(EXIT_WITNESS)
        }
        HuntOutcome::NotFound {
            min,
            evaluations,
            exhausted,
        } => {
            writeln!(
                err,
                "no counterexample found ({evaluations} evaluations{})",
                if exhausted { ", budget exhausted" } else { "" }
            )?;
            let rows: Vec<ReportRow> = match min {
                Some(m) => {
                    writeln!(err, "minimal observed margin {} at t = {}", fmt_num(m.margin), fmt_num(m.t))?;
                    let rec = MarginRecord {
                        id: cfg.id,
                        pair: PositivePair::from_ratio(m.t)?,
                        exponent: m.exponent,
                        margin: m.margin,
                        magnitude: m.magnitude,
                        digits: means_lab_core::BINARY64_DIGITS,
                    };
                    vec![ReportRow::new(&rec, None)]
                }
                None => Vec::new(),
            };
            emit_rows(&rows, meta, Some(cfg.seed), format, out)?;
            Ok(0)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bracket(
    ineq: &str,
    n: Option<f64>,
    t_lo: f64,
    t_hi: f64,
    tol: f64,
    digits: u32,
    format: OutFormat,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let id = parse_id(ineq)?;
    let b = bracket_ratio_crossing(id, n, t_lo, t_hi, tol, certify_options(digits))?;
    #[derive(Serialize)]
    struct Row {
        id: &'static str,
        n: Option<f64>,
        t_lo: f64,
        t_hi: f64,
        sign_lo: &'static str,
        sign_hi: &'static str,
        log_width: f64,
        steps: usize,
        digits: u32,
    }
    let row = Row {
        id: id.as_str(),
        n,
        t_lo: b.t_lo,
        t_hi: b.t_hi,
        sign_lo: report::outcome_name(b.sign_lo.outcome),
        sign_hi: report::outcome_name(b.sign_hi.outcome),
        log_width: b.log_width(),
        steps: b.steps,
        digits: b.sign_lo.digits.max(b.sign_hi.digits),
    };
    match format {
        OutFormat::Csv => {
            let fields = vec![
                row.id.to_owned(),
                n.map(fmt_num).unwrap_or_default(),
                fmt_num(row.t_lo),
                fmt_num(row.t_hi),
                row.sign_lo.to_owned(),
                row.sign_hi.to_owned(),
                fmt_num(row.log_width),
                row.steps.to_string(),
                row.digits.to_string(),
            ];
            write_table(
                &["id", "n", "t_lo", "t_hi", "sign_lo", "sign_hi", "log_width", "steps", "digits"],
                &[fields],
                out,
            )?;
        }
        OutFormat::Json => {
            #[derive(Serialize)]
            struct BracketMeta {
                id: &'static str,
                n: Option<f64>,
                t_lo: f64,
                t_hi: f64,
                tol: f64,
                start_digits: u32,
            }
            let meta = BracketMeta {
                id: id.as_str(),
                n,
                t_lo,
                t_hi,
                tol,
                start_digits: digits,
            };
            write_doc(meta, None, [row], out)?;
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_profile(
    pool: &rayon::ThreadPool,
    n_list: &[f64],
    t_lo: f64,
    t_hi: f64,
    grid: usize,
    digits: u32,
    format: OutFormat,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let opts = MinOptions {
        grid,
        open_lo: true,
        certify: certify_options(digits),
        ..MinOptions::default()
    };
    let profile = parallel_profile(pool, n_list, t_lo, t_hi, opts)?;
    #[derive(Serialize)]
    struct Row {
        n: f64,
        t_at_min: f64,
        min_margin: Option<f64>,
        rel_margin: Option<f64>,
        class: &'static str,
        certified_sign: Option<&'static str>,
        digits: u32,
    }
    let rows: Vec<Row> = profile
        .rows
        .iter()
        .map(|r| Row {
            n: r.n,
            t_at_min: r.t_at_min,
            min_margin: r.min_margin.is_finite().then_some(r.min_margin),
            rel_margin: (r.min_margin / r.magnitude).is_finite().then_some(r.min_margin / r.magnitude),
            class: r.class.as_str(),
            certified_sign: r.certified.map(|c| report::outcome_name(c.outcome)),
            digits: r.certified.map_or(means_lab_core::BINARY64_DIGITS, |c| c.digits),
        })
        .collect();
    match format {
        OutFormat::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        fmt_num(r.n),
                        fmt_num(r.t_at_min),
                        r.min_margin.map(fmt_num).unwrap_or_else(|| "NaN".into()),
                        r.rel_margin.map(fmt_num).unwrap_or_else(|| "NaN".into()),
                        r.class.to_owned(),
                        r.certified_sign.unwrap_or("").to_owned(),
                        r.digits.to_string(),
                    ]
                })
                .collect();
            write_table(
                &["n", "t_at_min", "min_margin", "rel_margin", "class", "certified_sign", "digits"],
                &table,
                out,
            )?;
        }
        OutFormat::Json => {
            #[derive(Serialize)]
            struct ProfileMeta<'a> {
                n_list: &'a [f64],
                t_lo: f64,
                t_hi: f64,
                grid: usize,
                start_digits: u32,
            }
            let meta = ProfileMeta {
                n_list,
                t_lo,
                t_hi,
                grid,
                start_digits: digits,
            };
            write_doc(meta, None, rows, out)?;
        }
    }
    Ok(0)
}

#[doc(hidden)]
pub use explore::DEFAULT_BUDGET;
