//! File export and import: per-run CSV rows, per-environment indicator
//! curves, and JSON summaries. CSV numbers render in shortest round-trip
//! form, so reading a file back reproduces the values bit for bit.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::runner::{EnvRecord, RunRecord};
use crate::stats::Summary;
use crate::Result;

/// One CSV row: a single environment of a single run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub run_id: u32,
    pub problem: String,
    pub config: String,
    pub algorithm: String,
    pub env_index: u32,
    pub t: f64,
    pub igd: f64,
    pub igdx: f64,
}

/// Flatten records into rows, sorted by experiment coordinates so output is
/// independent of execution order.
pub fn run_rows(records: &[RunRecord]) -> Vec<RunRow> {
    let mut rows: Vec<RunRow> = records
        .iter()
        .flat_map(|r| {
            r.envs.iter().map(move |e| RunRow {
                run_id: r.run_index,
                problem: r.problem.clone(),
                config: r.config.clone(),
                algorithm: r.algorithm.clone(),
                env_index: e.env_index,
                t: e.t,
                igd: e.igd,
                igdx: e.igdx,
            })
        })
        .collect();
    rows.sort_by(|a, b| {
        (&a.problem, &a.config, &a.algorithm, a.run_id, a.env_index).cmp(&(
            &b.problem,
            &b.config,
            &b.algorithm,
            b.run_id,
            b.env_index,
        ))
    });
    rows
}

pub fn render_runs_csv(rows: &[RunRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer.into_inner().expect("in-memory writer");
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_runs_csv(text: &str) -> Result<Vec<RunRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for row in reader.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

pub fn write_runs_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    fs::write(path, render_runs_csv(&run_rows(records))?)?;
    Ok(())
}

pub fn read_runs_csv(path: &Path) -> Result<Vec<RunRow>> {
    parse_runs_csv(&fs::read_to_string(path)?)
}

/// Indicator-versus-environment curves averaged over runs, one row per
/// (problem, config, algorithm, environment).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub problem: String,
    pub config: String,
    pub algorithm: String,
    pub env_index: u32,
    pub t: f64,
    pub mean_igd: f64,
    pub mean_igdx: f64,
    pub runs: u32,
}

type CurveKey = (String, String, String, u32);

pub fn curve_rows(records: &[RunRecord]) -> Vec<CurveRow> {
    let mut acc: BTreeMap<CurveKey, (f64, f64, f64, u32)> = BTreeMap::new();
    for r in records {
        for e in &r.envs {
            let entry = acc
                .entry((
                    r.problem.clone(),
                    r.config.clone(),
                    r.algorithm.clone(),
                    e.env_index,
                ))
                .or_insert((e.t, 0.0, 0.0, 0));
            entry.1 += e.igd;
            entry.2 += e.igdx;
            entry.3 += 1;
        }
    }
    acc.into_iter()
        .map(|((problem, config, algorithm, env_index), (t, igd, igdx, runs))| CurveRow {
            problem,
            config,
            algorithm,
            env_index,
            t,
            mean_igd: igd / runs as f64,
            mean_igdx: igdx / runs as f64,
            runs,
        })
        .collect()
}

pub fn write_curves_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in curve_rows(records) {
        writer.serialize(row)?;
    }
    let bytes = writer.into_inner().expect("in-memory writer");
    fs::write(path, bytes)?;
    Ok(())
}

pub fn write_summary_json(path: &Path, summary: &Summary) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(summary)?)?;
    Ok(())
}

/// Full records, including archived Pareto sets and wall time.
pub fn write_records_json(path: &Path, records: &[RunRecord]) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(records)?)?;
    Ok(())
}

/// Rebuild minimal run records from CSV rows: per-run aggregates become the
/// plain means of the per-environment values. Archived sets and wall time
/// are not representable in rows and stay empty.
pub fn records_from_rows(rows: &[RunRow]) -> Vec<RunRecord> {
    let mut grouped: BTreeMap<(String, String, String, u32), Vec<&RunRow>> = BTreeMap::new();
    for row in rows {
        grouped
            .entry((
                row.problem.clone(),
                row.config.clone(),
                row.algorithm.clone(),
                row.run_id,
            ))
            .or_default()
            .push(row);
    }
    grouped
        .into_iter()
        .map(|((problem, config, algorithm, run_id), mut rows)| {
            rows.sort_by_key(|r| r.env_index);
            let n = rows.len() as f64;
            RunRecord {
                run_index: run_id,
                problem,
                config,
                algorithm,
                seed: 0,
                envs: rows
                    .iter()
                    .map(|r| EnvRecord {
                        env_index: r.env_index,
                        t: r.t,
                        igd: r.igd,
                        igdx: r.igdx,
                        pos: Vec::new(),
                    })
                    .collect(),
                migd: rows.iter().map(|r| r.igd).sum::<f64>() / n,
                migdx: rows.iter().map(|r| r.igdx).sum::<f64>() / n,
                wall_secs: 0.0,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(problem: &str, algorithm: &str, run: u32) -> RunRecord {
        RunRecord {
            run_index: run,
            problem: problem.into(),
            config: "C1".into(),
            algorithm: algorithm.into(),
            seed: 1,
            envs: (0..3)
                .map(|i| EnvRecord {
                    env_index: i,
                    t: i as f64 / 5.0,
                    igd: 0.1 * (i + run) as f64 + 0.01,
                    igdx: 0.2 * (i + 1) as f64,
                    pos: vec![vec![0.1, 0.2]],
                })
                .collect(),
            migd: 0.1,
            migdx: 0.2,
            wall_secs: 1.0,
        }
    }

    #[test]
    fn rows_are_sorted_and_complete() {
        let records = vec![record("DMMF2", "CAE-AN", 1), record("DMMF1", "CAE-AN", 0)];
        let rows = run_rows(&records);
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].problem, "DMMF1");
        assert_eq!(rows[0].env_index, 0);
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let records = vec![record("DMMF1", "CAE-AN", 0), record("DMMF1", "DNSGA2-A", 1)];
        let rows = run_rows(&records);
        let rendered = render_runs_csv(&rows).unwrap();
        let parsed = parse_runs_csv(&rendered).unwrap();
        assert_eq!(rows, parsed);
    }

    #[test]
    fn curves_average_over_runs() {
        let records = vec![record("DMMF1", "CAE-AN", 0), record("DMMF1", "CAE-AN", 1)];
        let curves = curve_rows(&records);
        assert_eq!(curves.len(), 3);
        // Environment 0: igd values 0.01 and 0.11.
        assert!((curves[0].mean_igd - 0.06).abs() < 1e-15);
        assert_eq!(curves[0].runs, 2);
    }

    #[test]
    fn records_rebuild_from_rows() {
        let records = vec![record("DMMF1", "CAE-AN", 0)];
        let rebuilt = records_from_rows(&run_rows(&records));
        assert_eq!(rebuilt.len(), 1);
        assert_eq!(rebuilt[0].envs.len(), 3);
        let expected: f64 =
            records[0].envs.iter().map(|e| e.igd).sum::<f64>() / 3.0;
        assert!((rebuilt[0].migd - expected).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn csv_round_trips_arbitrary_floats(
            t in proptest::num::f64::NORMAL,
            igd in 0.0f64..1e6,
            igdx in proptest::num::f64::POSITIVE,
        ) {
            let rows = vec![RunRow {
                run_id: 7,
                problem: "DMMF3".into(),
                config: "C4".into(),
                algorithm: "CAE-AN_noC".into(),
                env_index: 2,
                t,
                igd,
                igdx,
            }];
            let parsed = parse_runs_csv(&render_runs_csv(&rows).unwrap()).unwrap();
            prop_assert_eq!(rows, parsed);
        }
    }
}
