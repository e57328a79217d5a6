//! Foundational value types: decision/objective vectors, Pareto dominance,
//! box bounds, and the environment-change clock.

use std::cmp::Ordering;

use crate::{s, Error, Result, Scalar};
use rand::Rng;

/// A point in decision space. One entry per decision variable.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionVector<S>(Vec<S>);

impl<S: Scalar> DecisionVector<S> {
    pub fn new(values: Vec<S>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[S] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<S> {
        self.0
    }

    /// Euclidean distance to another point. Panics on length mismatch.
    pub fn distance(&self, other: &Self) -> S {
        euclidean(&self.0, &other.0)
    }

    /// Lexicographic comparison, used to put populations into a canonical
    /// order before clustering. Values are finite by invariant.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.partial_cmp(b).expect("finite decision values") {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl<S: Scalar> std::ops::Index<usize> for DecisionVector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

/// A point in objective space, minimization convention.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector<S>(Vec<S>);

impl<S: Scalar> ObjectiveVector<S> {
    pub fn new(values: Vec<S>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[S] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff `self` Pareto-dominates `other`: no objective is worse and at
    /// least one is strictly better. Panics on length mismatch (a contract
    /// violation: the vectors belong to different problems).
    pub fn dominates(&self, other: &Self) -> bool {
        assert_eq!(
            self.0.len(),
            other.0.len(),
            "objective vectors of different lengths cannot be compared"
        );
        let mut strictly_better = false;
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if *a > *b {
                return false;
            }
            if *a < *b {
                strictly_better = true;
            }
        }
        strictly_better
    }

    pub fn distance(&self, other: &Self) -> S {
        euclidean(&self.0, &other.0)
    }
}

impl<S: Scalar> std::ops::Index<usize> for ObjectiveVector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

/// Free-function form of Pareto dominance.
pub fn dominates<S: Scalar>(a: &ObjectiveVector<S>, b: &ObjectiveVector<S>) -> bool {
    a.dominates(b)
}

pub(crate) fn euclidean<S: Scalar>(a: &[S], b: &[S]) -> S {
    assert_eq!(a.len(), b.len(), "point dimensionalities differ");
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<S>()
        .sqrt()
}

/// An evaluated candidate: decision point, its objectives, and the time the
/// evaluation was made at. Re-evaluating the decision at `eval_time`
/// reproduces `objectives` bit-identically.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<S> {
    pub decision: DecisionVector<S>,
    pub objectives: ObjectiveVector<S>,
    pub eval_time: S,
}

/// Per-dimension `[lo, hi]` box constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBounds<S>(Vec<(S, S)>);

impl<S: Scalar> BoxBounds<S> {
    pub fn new(bounds: Vec<(S, S)>) -> Self {
        assert!(bounds.iter().all(|(lo, hi)| lo < hi), "empty bound interval");
        Self(bounds)
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[(S, S)] {
        &self.0
    }

    /// Length of the box diagonal.
    pub fn diagonal(&self) -> S {
        self.0
            .iter()
            .map(|&(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<S>()
            .sqrt()
    }

    pub fn check(&self, point: &DecisionVector<S>) -> Result<()> {
        if point.len() != self.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                got: point.len(),
            });
        }
        for (i, (&v, &(lo, hi))) in point.values().iter().zip(self.0.iter()).enumerate() {
            if !(v >= lo && v <= hi) {
                return Err(Error::OutOfBounds {
                    index: i,
                    value: v.to_f64().unwrap_or(f64::NAN),
                    lo: lo.to_f64().unwrap_or(f64::NAN),
                    hi: hi.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    pub fn clip(&self, values: &mut [S]) {
        for (v, &(lo, hi)) in values.iter_mut().zip(self.0.iter()) {
            *v = v.max(lo).min(hi);
        }
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> DecisionVector<S> {
        DecisionVector::new(
            self.0
                .iter()
                .map(|&(lo, hi)| crate::rng_util::range(rng, lo, hi))
                .collect(),
        )
    }
}

/// Schedule parameters of one dynamic run: `t = floor(tau / tau_t) / n_t`.
///
/// Following the source convention, `n_t` scales the magnitude of each time
/// step while `tau_t` is the number of generations an environment lasts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DynamicConfig {
    pub n_t: u32,
    pub tau_t: u32,
    pub num_changes: u32,
}

impl DynamicConfig {
    pub fn new(n_t: u32, tau_t: u32, num_changes: u32) -> Result<Self> {
        if n_t == 0 || tau_t == 0 || num_changes == 0 {
            return Err(Error::InvalidParameter(
                "n_t, tau_t and num_changes must all be >= 1".into(),
            ));
        }
        Ok(Self {
            n_t,
            tau_t,
            num_changes,
        })
    }

    /// Total generations of a full run: one window of `tau_t` generations per
    /// environment.
    pub fn total_generations(&self) -> u64 {
        self.num_changes as u64 * self.tau_t as u64
    }
}

/// Time at generation `tau`: `(1 / n_t) * floor(tau / tau_t)`, exact.
pub fn time_of_generation<S: Scalar>(tau: u64, config: &DynamicConfig) -> S {
    let window = tau / config.tau_t as u64;
    s::<S>(window as f64) / s::<S>(config.n_t as f64)
}

/// True iff the environment switches between generations `tau - 1` and `tau`.
/// Changes are schedule-driven: the clock is ground truth, no re-evaluation
/// sentinel is involved.
pub fn environment_changed(tau: u64, config: &DynamicConfig) -> bool {
    assert!(tau >= 1, "tau must be >= 1");
    time_of_generation::<f64>(tau, config) != time_of_generation::<f64>(tau - 1, config)
}

/// Generation counter tied to a [`DynamicConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnvironmentClock {
    pub generation: u64,
    pub config: DynamicConfig,
}

impl EnvironmentClock {
    pub fn new(config: DynamicConfig) -> Self {
        Self {
            generation: 0,
            config,
        }
    }

    pub fn time<S: Scalar>(&self) -> S {
        time_of_generation(self.generation, &self.config)
    }

    /// Index of the environment the clock currently sits in.
    pub fn environment_index(&self) -> u64 {
        self.generation / self.config.tau_t as u64
    }

    /// Advance one generation; returns true when this step crossed an
    /// environment boundary.
    pub fn advance(&mut self) -> bool {
        self.generation += 1;
        environment_changed(self.generation, &self.config)
    }
}
