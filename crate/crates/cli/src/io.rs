//! Trajectory CSV, report JSON and sweep summaries.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use beamqubit_core::analysis::{CoherenceReport, ObservableSeries};
use beamqubit_core::engine::TrajectoryRecord;

use crate::config::fmt_f64;
use crate::error::{CliError, CliResult};

pub const OBSERVABLE_COLUMNS: [&str; 5] = ["t", "P_gn", "P_em", "D", "S"];

/// `t,P_gn,P_em,D,S` plus `re_jk,im_jk` for every element when `full_state`.
pub fn csv_header(full_state: bool) -> Vec<String> {
    let mut h: Vec<String> = OBSERVABLE_COLUMNS.iter().map(|s| s.to_string()).collect();
    if full_state {
        for j in 0..4 {
            for k in 0..4 {
                h.push(format!("re_{j}{k}"));
                h.push(format!("im_{j}{k}"));
            }
        }
    }
    h
}

pub fn write_trajectory_csv<W: Write>(out: W, tr: &TrajectoryRecord, full_state: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(full_state))?;
    let o = &tr.observables;
    let mut row = Vec::with_capacity(37);
    for i in 0..tr.len() {
        row.clear();
        row.extend([tr.times[i], o.p_gn[i], o.p_em[i], o.d[i], o.s[i]].map(fmt_f64));
        if full_state {
            let m = tr.states[i].matrix();
            for j in 0..4 {
                for k in 0..4 {
                    row.push(fmt_f64(m[(j, k)].re));
                    row.push(fmt_f64(m[(j, k)].im));
                }
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_trajectory_csv(path: &Path, tr: &TrajectoryRecord, full_state: bool) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_trajectory_csv(BufWriter::new(file), tr, full_state).map_err(|e| CliError::io(path, e))
}

/// Times and observables read back from a trajectory CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableTable {
    pub times: Vec<f64>,
    pub observables: ObservableSeries,
}

/// Reads the observable columns by name; extra columns are ignored.
pub fn read_trajectory_csv<R: Read>(input: R) -> Result<ObservableTable, String> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(|e| e.to_string())?.clone();
    let mut idx = [0usize; 5];
    for (slot, name) in idx.iter_mut().zip(OBSERVABLE_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| format!("missing column '{name}'"))?;
    }
    let mut times = Vec::new();
    let mut obs = ObservableSeries::default();
    for (n, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let mut vals = [0.0; 5];
        for (v, &i) in vals.iter_mut().zip(&idx) {
            let field = rec.get(i).unwrap_or("");
            *v = field
                .trim()
                .parse()
                .map_err(|_| format!("row {}: '{field}' is not a number", n + 2))?;
        }
        times.push(vals[0]);
        obs.p_gn.push(vals[1]);
        obs.p_em.push(vals[2]);
        obs.d.push(vals[3]);
        obs.s.push(vals[4]);
    }
    Ok(ObservableTable { times, observables: obs })
}

pub fn load_trajectory_csv(path: &Path) -> CliResult<ObservableTable> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_trajectory_csv(file).map_err(|e| CliError::io(path, e))
}

pub fn report_json(report: &CoherenceReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn save_report_json(path: &Path, report: &CoherenceReport) -> CliResult<()> {
    std::fs::write(path, report_json(report) + "\n").map_err(|e| CliError::io(path, e))
}

/// One row of `summary.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub value: f64,
    /// Report on success, error text on failure.
    pub outcome: Result<CoherenceReport, String>,
}

pub const SUMMARY_HEADER: [&str; 6] = [
    "value",
    "oscillation_count",
    "descending_rate",
    "ascending_rate",
    "sum_decay_rate",
    "status",
];

/// Failed rows keep their value, leave the metrics blank and carry
/// `failed: <reason>` in the status column.
pub fn write_summary_csv<W: Write>(out: W, rows: &[SummaryRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    for row in rows {
        let record = match &row.outcome {
            Ok(r) => [
                fmt_f64(row.value),
                r.oscillation_count.to_string(),
                opt(r.descending_rate),
                opt(r.ascending_rate),
                opt(r.sum_decay_rate),
                "ok".to_string(),
            ],
            Err(e) => [
                fmt_f64(row.value),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                format!("failed: {e}"),
            ],
        };
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        assert_eq!(csv_header(false).join(","), "t,P_gn,P_em,D,S");
        let full = csv_header(true);
        assert_eq!(full.len(), 37);
        assert_eq!(&full[5..9], ["re_00", "im_00", "re_01", "im_01"]);
        assert_eq!(full[36], "im_33");
    }

    #[test]
    fn reader_rejects_bad_input() {
        assert!(read_trajectory_csv("t,P_gn,P_em,D\n0,0,0,0\n".as_bytes())
            .unwrap_err()
            .contains("'S'"));
        assert!(read_trajectory_csv("t,P_gn,P_em,D,S\n0,0,x,0,0\n".as_bytes())
            .unwrap_err()
            .contains("row 2"));
    }

    #[test]
    fn summary_marks_failures() {
        let rows = [
            SummaryRow {
                value: 1.0,
                outcome: Ok(CoherenceReport {
                    oscillation_count: 3,
                    sum_decay_rate: Some(2.0),
                    ..Default::default()
                }),
            },
            SummaryRow {
                value: 2.0,
                outcome: Err("divergence".into()),
            },
        ];
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SUMMARY_HEADER.join(","));
        assert_eq!(lines[1], "1.0000000000000000e0,3,,,2.0000000000000000e0,ok");
        assert_eq!(lines[2], "2.0000000000000000e0,,,,,failed: divergence");
    }
}
