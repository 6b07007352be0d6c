//! Experiment reports and their CSV / JSON encodings.
//!
//! All floats are printed with ten significant digits. Per-run values are
//! stored already rounded to that precision, so every summary statistic in a
//! report recomputes exactly from the listed estimates.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::format::Sig10;
use crate::stats::{mean, sample_variance};

pub const CSV_HEADER: [&str; 9] = [
    "network",
    "method",
    "tier",
    "n_sim",
    "n_run",
    "mean",
    "variance",
    "mae",
    "mean_time_s",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format `{other}` (use csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub seed: u64,
    pub beta: usize,
    pub networks: Vec<NetworkSummary>,
    pub rows: Vec<ReportRow>,
    pub comparisons: Vec<Comparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSummary {
    pub network: String,
    pub nodes: usize,
    pub arcs: usize,
    /// Absent when the network is too large to enumerate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Sig10>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRow {
    pub network: String,
    pub method: String,
    pub tier: String,
    pub n_sim: u64,
    pub n_run: usize,
    pub mean: Sig10,
    pub variance: Sig10,
    /// Mean absolute error against the exact value, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mae: Option<Sig10>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
    pub estimates: Vec<Sig10>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub mean_s: Sig10,
    pub min_s: Sig10,
    pub max_s: Sig10,
    pub runs_s: Vec<Sig10>,
}

/// Welch p-values between two methods on the same network and tier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Comparison {
    pub network: String,
    pub tier: String,
    pub method_a: String,
    pub method_b: String,
    pub estimate_p: Sig10,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_error_p: Option<Sig10>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_p: Option<Sig10>,
}

impl ReportRow {
    /// Builds a row from rounded per-run values.
    pub fn from_runs(
        network: &str,
        method: &str,
        tier: &str,
        n_sim: u64,
        estimates: Vec<f64>,
        exact: Option<f64>,
        times: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n_run = estimates.len();
        let (Some(m), Some(v)) = (mean(&estimates), sample_variance(&estimates)) else {
            return Err(BenchError::Stats(format!(
                "{network}/{method}/{tier}: fewer than two runs"
            )));
        };
        let mae = exact.map(|r| {
            let errors: Vec<f64> = estimates.iter().map(|e| (r - e).abs()).collect();
            Sig10(mean(&errors).unwrap())
        });
        let timing = times.map(|t| Timing {
            mean_s: Sig10(mean(&t).unwrap()),
            min_s: Sig10(t.iter().copied().fold(f64::INFINITY, f64::min)),
            max_s: Sig10(t.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
            runs_s: t.into_iter().map(Sig10).collect(),
        });
        Ok(ReportRow {
            network: network.to_string(),
            method: method.to_string(),
            tier: tier.to_string(),
            n_sim,
            n_run,
            mean: Sig10(m),
            variance: Sig10(v),
            mae,
            timing,
            estimates: estimates.into_iter().map(Sig10).collect(),
        })
    }

    pub fn estimate_values(&self) -> Vec<f64> {
        self.estimates.iter().map(|e| e.0).collect()
    }
}

pub fn emit_report<W: Write>(report: &RunReport, format: ReportFormat, out: W) -> Result<()> {
    match format {
        ReportFormat::Csv => write_csv(report, out),
        ReportFormat::Json => write_json(report, out),
    }
}

pub fn report_to_string(report: &RunReport, format: ReportFormat) -> Result<String> {
    let mut buf = Vec::new();
    emit_report(report, format, &mut buf)?;
    String::from_utf8(buf).map_err(|e| BenchError::Report(e.to_string()))
}

fn write_csv<W: Write>(report: &RunReport, out: W) -> Result<()> {
    let report_err = |e: csv::Error| BenchError::Report(e.to_string());
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER).map_err(report_err)?;
    for row in &report.rows {
        let opt = |v: Option<Sig10>| v.map(|x| x.to_string()).unwrap_or_default();
        writer
            .write_record([
                row.network.clone(),
                row.method.clone(),
                row.tier.clone(),
                row.n_sim.to_string(),
                row.n_run.to_string(),
                row.mean.to_string(),
                row.variance.to_string(),
                opt(row.mae),
                opt(row.timing.as_ref().map(|t| t.mean_s)),
            ])
            .map_err(report_err)?;
    }
    writer
        .flush()
        .map_err(|e| BenchError::Report(e.to_string()))
}

fn write_json<W: Write>(report: &RunReport, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)
        .map_err(|e| BenchError::Report(e.to_string()))?;
    out.write_all(b"\n")
        .map_err(|e| BenchError::Report(e.to_string()))
}

pub fn parse_json_report(text: &str) -> Result<RunReport> {
    serde_json::from_str(text).map_err(|e| BenchError::Report(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_row_report() -> RunReport {
        let row = ReportRow::from_runs(
            "bridge.net",
            "crude",
            "Ex1",
            100,
            vec![0.77, 0.75, 0.79],
            Some(0.766),
            Some(vec![0.001, 0.002, 0.0015]),
        )
        .unwrap();
        RunReport {
            seed: 3,
            beta: 2,
            networks: vec![NetworkSummary {
                network: "bridge.net".into(),
                nodes: 4,
                arcs: 5,
                exact: Some(Sig10(0.766)),
            }],
            rows: vec![row],
            comparisons: vec![],
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let report = RunReport {
            seed: 0,
            beta: 2,
            networks: vec![],
            rows: vec![],
            comparisons: vec![],
        };
        let csv = report_to_string(&report, ReportFormat::Csv).unwrap();
        assert_eq!(
            csv,
            "network,method,tier,n_sim,n_run,mean,variance,mae,mean_time_s\n"
        );
    }

    #[test]
    fn one_row_csv_round_trips() {
        let text = report_to_string(&one_row_report(), ReportFormat::Csv).unwrap();
        assert_eq!(text.lines().count(), 2);
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers = reader.headers().unwrap().clone();
        assert_eq!(headers.iter().collect::<Vec<_>>(), CSV_HEADER);
        let records: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert_eq!(&r[0], "bridge.net");
        assert_eq!(r[5].parse::<f64>().unwrap(), 0.77);
        assert_eq!(r[6].parse::<f64>().unwrap(), 0.0004);
        assert_eq!(r[7].parse::<f64>().unwrap(), 0.01466666667);
        assert_eq!(&r[8], "0.0015");
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let first = report_to_string(&one_row_report(), ReportFormat::Json).unwrap();
        let parsed = parse_json_report(&first).unwrap();
        let second = report_to_string(&parsed, ReportFormat::Json).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn missing_oracle_omits_error_fields() {
        let row =
            ReportRow::from_runs("big", "crude", "Ex1", 10, vec![0.5, 0.6], None, None).unwrap();
        let json = serde_json::to_string(&row).unwrap();
        assert!(!json.contains("mae"));
        assert!(!json.contains("timing"));
        let report = RunReport {
            seed: 0,
            beta: 2,
            networks: vec![],
            rows: vec![row],
            comparisons: vec![],
        };
        let csv = report_to_string(&report, ReportFormat::Csv).unwrap();
        assert!(csv.lines().nth(1).unwrap().ends_with(",,"));
    }

    #[test]
    fn single_run_rejected() {
        assert!(ReportRow::from_runs("n", "crude", "Ex1", 10, vec![0.5], None, None).is_err());
    }
}
