//! Quality indicators: inverted generational distance in objective and
//! decision space, their run-level means, and exact hypervolume for two and
//! three objectives.

use crate::types::{DecisionVector, ObjectiveVector};
use crate::{Error, Result, Scalar};

fn mean_min_distance<S: Scalar>(reference: &[&[S]], approx: &[&[S]]) -> Result<S> {
    if reference.is_empty() {
        return Err(Error::EmptyInput("reference set"));
    }
    if approx.is_empty() {
        return Err(Error::EmptyInput("approximation set"));
    }
    let dims = reference[0].len();
    for p in reference.iter().chain(approx.iter()) {
        if p.len() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                got: p.len(),
            });
        }
    }
    let total = reference
        .iter()
        .map(|r| {
            approx
                .iter()
                .map(|a| {
                    r.iter()
                        .zip(a.iter())
                        .map(|(&x, &y)| (x - y) * (x - y))
                        .sum::<S>()
                })
                .fold(S::infinity(), |acc, d| acc.min(d))
                .sqrt()
        })
        .sum::<S>();
    Ok(total / S::from_usize(reference.len()).unwrap())
}

/// Mean distance from each reference front point to its nearest neighbour in
/// the approximation front. Zero iff the reference is covered exactly.
pub fn igd<S: Scalar>(
    reference: &[ObjectiveVector<S>],
    approx: &[ObjectiveVector<S>],
) -> Result<S> {
    let r: Vec<&[S]> = reference.iter().map(|p| p.values()).collect();
    let a: Vec<&[S]> = approx.iter().map(|p| p.values()).collect();
    mean_min_distance(&r, &a)
}

/// The decision-space analogue of [`igd`], measuring how well the equivalent
/// Pareto sets are covered.
pub fn igdx<S: Scalar>(
    reference: &[DecisionVector<S>],
    approx: &[DecisionVector<S>],
) -> Result<S> {
    let r: Vec<&[S]> = reference.iter().map(|p| p.values()).collect();
    let a: Vec<&[S]> = approx.iter().map(|p| p.values()).collect();
    mean_min_distance(&r, &a)
}

/// One per-environment measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricRecord<S> {
    pub t: S,
    pub igd: S,
    pub igdx: S,
}

/// Per-environment indicator values of one run, aggregated by plain
/// arithmetic means.
#[derive(Debug, Clone, Default)]
pub struct MetricSeries<S> {
    records: Vec<MetricRecord<S>>,
}

impl<S: Scalar> MetricSeries<S> {
    pub fn new() -> Self {
        Self {
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: MetricRecord<S>) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[MetricRecord<S>] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Mean IGD over all recorded environments.
    pub fn migd(&self) -> Result<S> {
        mean(self.records.iter().map(|r| r.igd), self.records.len())
    }

    /// Mean IGDx over all recorded environments.
    pub fn migdx(&self) -> Result<S> {
        mean(self.records.iter().map(|r| r.igdx), self.records.len())
    }
}

fn mean<S: Scalar>(values: impl Iterator<Item = S>, n: usize) -> Result<S> {
    if n == 0 {
        return Err(Error::EmptyInput("metric series"));
    }
    Ok(values.sum::<S>() / S::from_usize(n).unwrap())
}

/// Exact hypervolume dominated by `front` with respect to `reference`
/// (minimization; points not strictly better than the reference point in
/// every coordinate contribute nothing and are discarded).
pub fn hypervolume<S: Scalar>(
    front: &[ObjectiveVector<S>],
    reference: &ObjectiveVector<S>,
) -> Result<S> {
    match reference.len() {
        2 => {
            let pts = contributing(front, reference);
            Ok(hv2(&pts, reference.values()))
        }
        3 => {
            let pts = contributing(front, reference);
            Ok(hv3(&pts, reference.values()))
        }
        m => Err(Error::UnsupportedObjectives(m)),
    }
}

fn contributing<S: Scalar>(
    front: &[ObjectiveVector<S>],
    reference: &ObjectiveVector<S>,
) -> Vec<Vec<S>> {
    front
        .iter()
        .filter(|p| {
            p.len() == reference.len()
                && p.values()
                    .iter()
                    .zip(reference.values())
                    .all(|(&v, &r)| v < r)
        })
        .map(|p| p.values().to_vec())
        .collect()
}

/// Sweep in the first objective; kept points form a strictly improving
/// staircase in the second.
fn hv2<S: Scalar>(points: &[Vec<S>], reference: &[S]) -> S {
    if points.is_empty() {
        return S::zero();
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap()
            .then(a[1].partial_cmp(&b[1]).unwrap())
    });
    let mut kept: Vec<&Vec<S>> = Vec::new();
    for p in &sorted {
        if kept.last().is_none_or(|last| p[1] < last[1]) {
            kept.push(p);
        }
    }
    let mut area = S::zero();
    for (i, p) in kept.iter().enumerate() {
        let right = if i + 1 < kept.len() {
            kept[i + 1][0]
        } else {
            reference[0]
        };
        area = area + (right - p[0]) * (reference[1] - p[1]);
    }
    area
}

/// Slice along the third objective and integrate two-dimensional areas.
fn hv3<S: Scalar>(points: &[Vec<S>], reference: &[S]) -> S {
    if points.is_empty() {
        return S::zero();
    }
    let mut levels: Vec<S> = points.iter().map(|p| p[2]).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    let mut volume = S::zero();
    for (i, &z) in levels.iter().enumerate() {
        let top = if i + 1 < levels.len() {
            levels[i + 1]
        } else {
            reference[2]
        };
        let slab: Vec<Vec<S>> = points
            .iter()
            .filter(|p| p[2] <= z)
            .map(|p| vec![p[0], p[1]])
            .collect();
        volume = volume + (top - z) * hv2(&slab, &reference[..2]);
    }
    volume
}
