//! Per-iteration and per-period traces, and their CSV tables.
//!
//! | file              | columns                                                        |
//! |-------------------|----------------------------------------------------------------|
//! | `spatial.csv`     | `n,M,delta,reports,cumulative_cost,error_proxy,error_vs_truth` |
//! | `temporal.csv`    | `period,reports,fraction,error_vs_truth`                       |
//! | `delta_trace.csv` | `n,delta`                                                      |
//!
//! In `spatial.csv`, `delta` is the margin used by the query of iteration `n`.
//! `delta_trace.csv` holds the margin in force after iteration `n`, with
//! `n = 0` for the initial margin.

use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::metrics;

pub const SPATIAL_HEADER: &str = "n,M,delta,reports,cumulative_cost,error_proxy,error_vs_truth";
pub const TEMPORAL_HEADER: &str = "period,reports,fraction,error_vs_truth";
pub const DELTA_HEADER: &str = "n,delta";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub n: usize,
    pub m: usize,
    pub delta: f64,
    pub reports: usize,
    pub cumulative_cost: usize,
    pub error_proxy: f64,
    pub error_vs_truth: f64,
    pub range: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalRecord {
    pub period: usize,
    pub reports: usize,
    pub fraction: f64,
    pub error_vs_truth: f64,
    pub error_proxy: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonitoringReport {
    pub spatial: Vec<IterationRecord>,
    pub temporal: Vec<TemporalRecord>,
    /// `(n, delta)` after iteration `n`; `n = 0` is the initial margin.
    pub delta_trace: Vec<(usize, f64)>,
    pub total_sensors: usize,
}

impl MonitoringReport {
    pub fn costs(&self) -> Vec<usize> {
        self.spatial.iter().map(|r| r.reports).collect()
    }

    pub fn cumulative_cost(&self) -> Vec<usize> {
        metrics::cumulative_cost(&self.costs())
    }

    pub fn final_m(&self) -> Option<usize> {
        self.spatial.last().map(|r| r.m)
    }

    pub fn final_delta(&self) -> Option<f64> {
        self.delta_trace.last().map(|d| d.1)
    }

    pub fn record_at_m(&self, m: usize) -> Option<&IterationRecord> {
        self.spatial.iter().find(|r| r.m == m)
    }

    pub fn mean_temporal_fraction(&self) -> Option<f64> {
        if self.temporal.is_empty() {
            return None;
        }
        Some(self.temporal.iter().map(|r| r.fraction).sum::<f64>() / self.temporal.len() as f64)
    }

    pub fn write_spatial_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{SPATIAL_HEADER}")?;
        for r in &self.spatial {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.n, r.m, r.delta, r.reports, r.cumulative_cost, r.error_proxy, r.error_vs_truth
            )?;
        }
        Ok(())
    }

    pub fn write_temporal_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{TEMPORAL_HEADER}")?;
        for r in &self.temporal {
            writeln!(w, "{},{},{},{}", r.period, r.reports, r.fraction, r.error_vs_truth)?;
        }
        Ok(())
    }

    pub fn write_delta_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{DELTA_HEADER}")?;
        for (n, d) in &self.delta_trace {
            writeln!(w, "{n},{d}")?;
        }
        Ok(())
    }
}

/// Reads a comma table with the exact `header`, returning its rows as numbers.
pub fn read_table<R: BufRead>(r: R, header: &str) -> Result<Vec<Vec<f64>>> {
    let width = header.split(',').count();
    let mut rows = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<table>", e))?;
        if idx == 0 {
            if line.trim() != header {
                return Err(Error::InvalidArgument(format!(
                    "expected header `{header}`, found `{line}`"
                )));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::InvalidArgument(format!("row {}: {e}", idx + 1)))?;
        if row.len() != width {
            return Err(Error::InvalidArgument(format!(
                "row {} has {} fields, expected {width}",
                idx + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MonitoringReport {
        let spatial = vec![
            IterationRecord {
                n: 1,
                m: 3,
                delta: 0.25,
                reports: 10,
                cumulative_cost: 10,
                error_proxy: 1.5,
                error_vs_truth: 0.75,
                range: (0.0, 1.0),
            },
            IterationRecord {
                n: 2,
                m: 4,
                delta: 0.125,
                reports: 20,
                cumulative_cost: 30,
                error_proxy: 0.5,
                error_vs_truth: 0.5,
                range: (0.0, 1.0),
            },
        ];
        MonitoringReport {
            spatial,
            temporal: vec![TemporalRecord {
                period: 1,
                reports: 475,
                fraction: 0.095,
                error_vs_truth: 0.2,
                error_proxy: 0.1,
                delta: 0.1,
            }],
            delta_trace: vec![(0, 0.25), (1, 0.25), (2, 0.125)],
            total_sensors: 5000,
        }
    }

    #[test]
    fn tables_parse_back() {
        let rep = sample();
        let mut buf = Vec::new();
        rep.write_spatial_csv(&mut buf).unwrap();
        let rows = read_table(&buf[..], SPATIAL_HEADER).unwrap();
        assert_eq!(rows[1], vec![2.0, 4.0, 0.125, 20.0, 30.0, 0.5, 0.5]);

        let mut buf = Vec::new();
        rep.write_temporal_csv(&mut buf).unwrap();
        let rows = read_table(&buf[..], TEMPORAL_HEADER).unwrap();
        assert_eq!(rows, vec![vec![1.0, 475.0, 0.095, 0.2]]);

        let mut buf = Vec::new();
        rep.write_delta_csv(&mut buf).unwrap();
        assert_eq!(read_table(&buf[..], DELTA_HEADER).unwrap().len(), 3);
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(read_table(&b"a,b\n1,2\n"[..], DELTA_HEADER).is_err());
        assert!(read_table(&b"n,delta\n1\n"[..], DELTA_HEADER).is_err());
    }

    #[test]
    fn summaries() {
        let rep = sample();
        assert_eq!(rep.cumulative_cost(), vec![10, 30]);
        assert_eq!(rep.final_m(), Some(4));
        assert_eq!(rep.final_delta(), Some(0.125));
        assert_eq!(rep.record_at_m(3).unwrap().n, 1);
        assert_eq!(rep.mean_temporal_fraction(), Some(0.095));
    }
}
