//! CSV output for aggregate reports and per-run traces.
//!
//! Aggregate files carry values rounded to ten significant digits; trace
//! files carry full precision so they can be re-aggregated exactly.

use std::fmt::Write as _;
use std::path::Path;

use super::{AggregateReport, Metric, RegretTrace, ReportRow, TracePoint};
use crate::error::{Error, Result};

pub const REPORT_HEADER: &str = "t,algorithm,adversary,metric,mean,q05,q95,n_seeds";
pub const TRACE_HEADER: &str =
    "algorithm,adversary,seed_index,t,static_regret,dynamic_regret,cumulative_reward,leaves,grid_error";

/// Rounds to ten significant digits and prints the shortest text that
/// parses back to the rounded value.
pub fn format_sig10(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.9e}").parse().expect("formatted float parses");
    let mag = rounded.abs();
    if (1e-4..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Renders a report as CSV text.
pub fn report_to_string(report: &AggregateReport) -> String {
    let mut out = String::with_capacity(64 * (report.rows.len() + 1));
    out.push_str(REPORT_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.t,
            r.algorithm,
            r.adversary,
            r.metric.label(),
            format_sig10(r.mean),
            format_sig10(r.q05),
            format_sig10(r.q95),
            r.n_seeds
        );
    }
    out
}

pub fn write_csv(report: &AggregateReport, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, report_to_string(report)).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, name: &str, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| parse_err(path, line, format!("bad {name} `{s}`")))
}

/// Splits a CSV body after checking its header; yields `(line_no, fields)`.
fn rows<'a>(path: &'a Path, text: &'a str, header: &str) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == header => {}
        Some(h) => return Err(parse_err(path, 1, format!("unexpected header `{h}`"))),
        None => return Err(parse_err(path, 1, "empty file")),
    }
    let width = header.split(',').count();
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let fields: Vec<&str> = l.trim_end().split(',').collect();
            if fields.len() != width {
                return Err(parse_err(path, i + 2, format!("expected {width} fields, found {}", fields.len())));
            }
            Ok((i + 2, fields))
        })
        .collect()
}

/// Parses an aggregate CSV.
pub fn read_csv(path: &Path) -> Result<AggregateReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_report(path, &text)
}

pub fn parse_report(path: &Path, text: &str) -> Result<AggregateReport> {
    let mut report = AggregateReport::default();
    for (ln, f) in rows(path, text, REPORT_HEADER)? {
        report.rows.push(ReportRow {
            t: field(path, ln, "t", f[0])?,
            algorithm: f[1].to_string(),
            adversary: f[2].to_string(),
            metric: Metric::parse(f[3]).ok_or_else(|| parse_err(path, ln, format!("unknown metric `{}`", f[3])))?,
            mean: field(path, ln, "mean", f[4])?,
            q05: field(path, ln, "q05", f[5])?,
            q95: field(path, ln, "q95", f[6])?,
            n_seeds: field(path, ln, "n_seeds", f[7])?,
        });
    }
    Ok(report)
}

pub fn write_trace(trace: &RegretTrace, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut out = String::new();
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for p in &trace.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{:?},{:?},{:?},{},{:?}",
            trace.algorithm,
            trace.adversary,
            trace.seed_index,
            p.t,
            p.static_regret,
            p.dynamic_regret,
            p.cumulative_reward,
            p.leaves,
            trace.grid_error
        );
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_trace(path: &Path) -> Result<RegretTrace> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let rows = rows(path, &text, TRACE_HEADER)?;
    let Some((first_ln, first)) = rows.first() else {
        return Err(parse_err(path, 2, "trace has no rows"));
    };
    let mut trace = RegretTrace {
        algorithm: first[0].to_string(),
        adversary: first[1].to_string(),
        seed_index: field(path, *first_ln, "seed_index", first[2])?,
        grid_error: field(path, *first_ln, "grid_error", first[8])?,
        points: Vec::with_capacity(rows.len()),
    };
    for (ln, f) in &rows {
        if f[0] != trace.algorithm || f[1] != trace.adversary || f[2] != first[2] {
            return Err(parse_err(path, *ln, "rows from more than one run"));
        }
        trace.points.push(TracePoint {
            t: field(path, *ln, "t", f[3])?,
            static_regret: field(path, *ln, "static_regret", f[4])?,
            dynamic_regret: field(path, *ln, "dynamic_regret", f[5])?,
            cumulative_reward: field(path, *ln, "cumulative_reward", f[6])?,
            leaves: field(path, *ln, "leaves", f[7])?,
        });
    }
    Ok(trace)
}

/// Reads every `*.csv` trace in `dir`, sorted by run.
pub fn read_traces(dir: &Path) -> Result<Vec<RegretTrace>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut traces = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == "csv") {
            traces.push(read_trace(&path)?);
        }
    }
    traces.sort_by(|a, b| (&a.algorithm, &a.adversary, a.seed_index).cmp(&(&b.algorithm, &b.adversary, b.seed_index)));
    Ok(traces)
}

/// Trace file name for one run.
pub fn trace_file_name(trace: &RegretTrace) -> String {
    format!("{}_{}_seed{:04}.csv", trace.algorithm, trace.adversary, trace.seed_index)
}
