//! Rank-sum significance testing and experiment summaries.
//!
//! Small samples (both below eight) get an exact two-sided p-value by
//! enumerating every group assignment of the pooled values; larger samples
//! use the tie-corrected normal approximation. Exact arithmetic runs on
//! doubled midranks so enumeration counts are integer-exact.

use std::collections::BTreeMap;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::runner::RunRecord;
use crate::{Error, Result};

/// Two-sided rank-sum test. Returns `(p_value, direction)` where direction
/// is the sign of `median(a) - median(b)`. Fully tied data yields `(1.0, 0)`.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<(f64, i32)> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidParameter(
            "each sample needs at least two values".into(),
        ));
    }
    let direction = match median(a).partial_cmp(&median(b)).unwrap() {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    };
    let (n, m) = (a.len(), b.len());
    let pooled = pooled_double_ranks(a, b);
    let exact_feasible = n < 8 && m < 8;
    let p = if exact_feasible {
        exact_p(&pooled, n)
    } else {
        normal_p(&pooled, n, m)
    };
    Ok((p, direction))
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Doubled midranks of the pooled sample (integers even under ties), tagged
/// with the group each value came from (true = first sample).
fn pooled_double_ranks(a: &[f64], b: &[f64]) -> Vec<(i64, bool)> {
    let mut values: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    values.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let total = values.len();
    let mut out = vec![(0i64, false); total];
    let mut i = 0;
    while i < total {
        let mut j = i + 1;
        while j < total && values[j].0 == values[i].0 {
            j += 1;
        }
        // Tied block occupies ranks i+1..=j; doubled midrank is their sum
        // over the count, times two: (i+1 + j).
        let doubled = (i + 1 + j) as i64;
        for k in i..j {
            out[k] = (doubled, values[k].1);
        }
        i = j;
    }
    out
}

/// Doubled U statistic of the first group given doubled ranks at the chosen
/// positions.
fn doubled_u(rank_sum2: i64, n: usize) -> i64 {
    rank_sum2 - (n * (n + 1)) as i64
}

/// Exact two-sided p: the fraction of equally likely group assignments whose
/// U deviates from the mean at least as much as observed.
fn exact_p(pooled: &[(i64, bool)], n: usize) -> f64 {
    let total = pooled.len();
    let m = total - n;
    let observed_sum2: i64 = pooled.iter().filter(|r| r.1).map(|r| r.0).sum();
    // Deviation of 2U from its mean n*m, all integer.
    let observed_dev = (doubled_u(observed_sum2, n) - (n * m) as i64).abs();
    let ranks: Vec<i64> = pooled.iter().map(|r| r.0).collect();
    let mut hits = 0u64;
    let mut count = 0u64;
    enumerate_subsets(&ranks, 0, n, 0, &mut |sum2| {
        count += 1;
        if (doubled_u(sum2, n) - (n * m) as i64).abs() >= observed_dev {
            hits += 1;
        }
    });
    hits as f64 / count as f64
}

fn enumerate_subsets(
    ranks: &[i64],
    start: usize,
    remaining: usize,
    sum2: i64,
    visit: &mut impl FnMut(i64),
) {
    if remaining == 0 {
        visit(sum2);
        return;
    }
    // Not enough elements left to complete the subset.
    if ranks.len() - start < remaining {
        return;
    }
    enumerate_subsets(ranks, start + 1, remaining - 1, sum2 + ranks[start], visit);
    enumerate_subsets(ranks, start + 1, remaining, sum2, visit);
}

/// Tie-corrected normal approximation of the two-sided p-value.
fn normal_p(pooled: &[(i64, bool)], n: usize, m: usize) -> f64 {
    let total = (n + m) as f64;
    let rank_sum_a: f64 = pooled
        .iter()
        .filter(|r| r.1)
        .map(|r| r.0 as f64 / 2.0)
        .sum();
    let u = rank_sum_a - (n * (n + 1)) as f64 / 2.0;
    let mean = (n * m) as f64 / 2.0;
    // Tie correction over duplicate blocks.
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i + 1;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let variance = (n * m) as f64 / 12.0
        * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    if variance <= 0.0 {
        return 1.0;
    }
    let z = (u - mean) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * normal.cdf(-z.abs())).min(1.0)
}

/// Per-variant aggregate cell of a comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct VariantCell {
    pub algorithm: String,
    pub runs: usize,
    pub migd_mean: f64,
    pub migd_std: f64,
    pub migd_median: f64,
    pub migdx_mean: f64,
    pub migdx_std: f64,
    pub migdx_median: f64,
}

/// Pairwise significance verdicts at the 0.05 level. Marks are read from the
/// first algorithm's perspective: '+' significantly worse (higher metric),
/// '-' significantly better, '=' no significant difference.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub a: String,
    pub b: String,
    pub migd_p: f64,
    pub migd_mark: char,
    pub migdx_p: f64,
    pub migdx_mark: char,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub problem: String,
    pub config: String,
    pub cells: Vec<VariantCell>,
    pub comparisons: Vec<Comparison>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub groups: Vec<GroupSummary>,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mu = mean(values);
    (values.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

fn mark(p: f64, direction: i32) -> char {
    if p < 0.05 {
        match direction {
            d if d > 0 => '+',
            d if d < 0 => '-',
            _ => '=',
        }
    } else {
        '='
    }
}

/// Aggregate run records into per-(problem, config) tables with pairwise
/// rank-sum marks between all algorithms present.
pub fn summarize(records: &[RunRecord]) -> Result<Summary> {
    let mut grouped: BTreeMap<(String, String), BTreeMap<String, Vec<&RunRecord>>> =
        BTreeMap::new();
    for r in records {
        grouped
            .entry((r.problem.clone(), r.config.clone()))
            .or_default()
            .entry(r.algorithm.clone())
            .or_default()
            .push(r);
    }
    let mut groups = Vec::new();
    for ((problem, config), by_algorithm) in grouped {
        let mut cells = Vec::new();
        let mut samples: Vec<(String, Vec<f64>, Vec<f64>)> = Vec::new();
        for (algorithm, runs) in &by_algorithm {
            let migd: Vec<f64> = runs.iter().map(|r| r.migd).collect();
            let migdx: Vec<f64> = runs.iter().map(|r| r.migdx).collect();
            cells.push(VariantCell {
                algorithm: algorithm.clone(),
                runs: runs.len(),
                migd_mean: mean(&migd),
                migd_std: sample_std(&migd),
                migd_median: median(&migd),
                migdx_mean: mean(&migdx),
                migdx_std: sample_std(&migdx),
                migdx_median: median(&migdx),
            });
            samples.push((algorithm.clone(), migd, migdx));
        }
        let mut comparisons = Vec::new();
        for i in 0..samples.len() {
            for j in (i + 1)..samples.len() {
                let (ref name_a, ref migd_a, ref migdx_a) = samples[i];
                let (ref name_b, ref migd_b, ref migdx_b) = samples[j];
                if migd_a.len() < 2 || migd_b.len() < 2 {
                    continue;
                }
                let (p_igd, dir_igd) = wilcoxon_rank_sum(migd_a, migd_b)?;
                let (p_igdx, dir_igdx) = wilcoxon_rank_sum(migdx_a, migdx_b)?;
                comparisons.push(Comparison {
                    a: name_a.clone(),
                    b: name_b.clone(),
                    migd_p: p_igd,
                    migd_mark: mark(p_igd, dir_igd),
                    migdx_p: p_igdx,
                    migdx_mark: mark(p_igdx, dir_igdx),
                });
            }
        }
        groups.push(GroupSummary {
            problem,
            config,
            cells,
            comparisons,
        });
    }
    Ok(Summary { groups })
}
