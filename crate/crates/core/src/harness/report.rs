use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::VerificationReport;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Parse(format!("unknown format `{s}` (expected json or csv)"))),
        }
    }
}

const CSV_HEADER: &str =
    "ensemble,trial,bound,kind,target,value,upper,reference_lower,reference_upper,slack,uncertainty,t,r";

/// One CSV line: a bound evaluated on a trial.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub ensemble: String,
    pub trial: usize,
    pub bound: String,
    pub kind: String,
    pub target: String,
    pub value: f64,
    pub upper: Option<f64>,
    pub reference_lower: Option<f64>,
    pub reference_upper: Option<f64>,
    pub slack: Option<f64>,
    pub uncertainty: f64,
    pub t: f64,
    pub r: f64,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// The report as JSON (full records and summary) or CSV (one row per trial
/// and bound id). Identical reports give identical bytes.
pub fn report_to_string(report: &VerificationReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string(report).map_err(|e| Error::Parse(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for rec in &report.records {
                for b in &rec.bounds {
                    let rf = match b.target {
                        crate::bounds::Target::W => rec.references.w,
                        crate::bounds::Target::We => rec.references.we,
                        crate::bounds::Target::WOffdiag => rec.references.w_offdiag,
                    };
                    writeln!(
                        s,
                        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                        // scaled kinds carry commas in their label
                        rec.ensemble.replace(',', ";"),
                        rec.trial,
                        b.id,
                        b.kind,
                        b.target,
                        b.value,
                        opt(b.upper),
                        opt(rf.map(|r| r.lower)),
                        opt(rf.map(|r| r.upper)),
                        opt(rec.slack.get(b.id.name()).copied()),
                        b.uncertainty(),
                        rec.params.t,
                        rec.params.r,
                    )
                    .expect("writing to a string");
                }
            }
            Ok(s)
        }
    }
}

pub fn emit_report(report: &VerificationReport, format: ReportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, report_to_string(report, format)?)?;
    Ok(())
}

/// Reads a JSON report back. CSV keeps only per-bound rows; see
/// [`parse_csv_rows`].
pub fn parse_report(text: &str) -> Result<VerificationReport> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("report: {e}")))
}

pub fn parse_csv_rows(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        _ => return Err(Error::Parse("missing CSV header".into())),
    }
    lines
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(k, line)| {
            let bad = |what: &str| Error::Parse(format!("CSV row {}: bad {what}", k + 1));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 13 {
                return Err(bad("field count"));
            }
            let num = |i: usize, name: &str| f[i].parse::<f64>().map_err(|_| bad(name));
            let maybe = |i: usize, name: &str| {
                if f[i].is_empty() {
                    Ok(None)
                } else {
                    num(i, name).map(Some)
                }
            };
            Ok(CsvRow {
                ensemble: f[0].to_string(),
                trial: f[1].parse().map_err(|_| bad("trial"))?,
                bound: f[2].to_string(),
                kind: f[3].to_string(),
                target: f[4].to_string(),
                value: num(5, "value")?,
                upper: maybe(6, "upper")?,
                reference_lower: maybe(7, "reference_lower")?,
                reference_upper: maybe(8, "reference_upper")?,
                slack: maybe(9, "slack")?,
                uncertainty: num(10, "uncertainty")?,
                t: num(11, "t")?,
                r: num(12, "r")?,
            })
        })
        .collect()
}
