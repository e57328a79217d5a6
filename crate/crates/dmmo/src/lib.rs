//! Dynamic multimodal multiobjective optimization toolkit.
//!
//! The crate bundles everything needed to study optimizers on problems whose
//! Pareto front moves over time while several equivalent Pareto sets coexist
//! in decision space:
//!
//! * [`types`] — decision/objective vectors, Pareto dominance, and the
//!   environment-change clock.
//! * [`suite`] — the DMMF benchmark family with analytic front/set samplers.
//! * [`moea`] — an NSGA-II style static optimizer with adaptive decision-space
//!   niching.
//! * [`cae`] — the cluster-and-predict dynamic response: DBSCAN over archived
//!   Pareto sets, centroid matching, a regularized linear transfer model, and
//!   perturbed one-step prediction.
//! * [`metrics`] — IGD, IGDx, their run-level means, and exact hypervolume.
//! * [`variants`] — the full algorithm, a random-reinitialization baseline,
//!   and the ablation variants.
//! * [`runner`], [`stats`], [`io`] — seeded experiment execution, rank-sum
//!   comparisons, and file export. The `dmmo` binary exposes these on the
//!   command line.
//!
//! Core math is generic over the scalar type through [`Scalar`]; the harness
//! and CLI use the `f64` aliases exported at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

pub mod cae;
pub mod io;
pub mod metrics;
pub mod moea;
pub mod runner;
pub mod stats;
pub mod suite;
pub mod types;
pub mod variants;

/// Floating-point scalar the core math is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}

/// Shorthand for lifting an `f64` literal into the generic scalar type.
#[inline]
pub(crate) fn s<S: Scalar>(v: f64) -> S {
    S::from_f64(v).expect("f64 literal representable in scalar type")
}

pub(crate) mod rng_util {
    use super::{s, Scalar};
    use rand::Rng;
    use rand_distr::StandardNormal;

    /// Uniform draw in `[0, 1)`.
    #[inline]
    pub fn unit<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> S {
        s(rng.gen::<f64>())
    }

    /// Uniform draw in `[lo, hi)`.
    #[inline]
    pub fn range<S: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: S, hi: S) -> S {
        lo + (hi - lo) * unit::<S, R>(rng)
    }

    /// Standard normal draw.
    #[inline]
    pub fn normal<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> S {
        s(rng.sample::<f64, _>(StandardNormal))
    }
}

/// Errors reported by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("decision variable {index} = {value} outside [{lo}, {hi}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("singular system: increase the regularization strength")]
    SingularSystem,

    #[error("unsupported objective count {0} (expected 2 or 3)")]
    UnsupportedObjectives(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use types::{dominates, environment_changed, time_of_generation};

/// Double-precision aliases used by the harness and the CLI.
pub type Decision64 = types::DecisionVector<f64>;
pub type Objective64 = types::ObjectiveVector<f64>;
pub type Solution64 = types::Solution<f64>;
pub type Population64 = Vec<types::Solution<f64>>;
pub type Problem64 = suite::DynamicProblem<f64>;
pub type GaParams64 = moea::GaParams<f64>;
pub type NicheParams64 = moea::NicheParams<f64>;
pub type NichingMode64 = moea::NichingMode<f64>;
pub type CaeParams64 = cae::CaeParams<f64>;
