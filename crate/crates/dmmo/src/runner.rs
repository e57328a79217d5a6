//! Experiment orchestration: environment scheduling, seeded repeated runs,
//! and per-environment metric recording. All randomness flows from one
//! deterministic seed per run, derived from the experiment coordinates, so
//! results are independent of execution order and parallelism.

use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cae::CaeParams;
use crate::metrics::{self, MetricRecord, MetricSeries};
use crate::moea::{run_static_optimizer, GaParams, NicheParams, NichingMode};
use crate::suite::DynamicProblem;
use crate::types::{time_of_generation, DynamicConfig};
use crate::variants::{respond, AlgorithmVariant, NichingKind};
use crate::{Error, Problem64, Result, Solution64};

/// The four standard change schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConfigId {
    C1,
    C2,
    C3,
    C4,
}

impl ConfigId {
    pub const ALL: [ConfigId; 4] = [ConfigId::C1, ConfigId::C2, ConfigId::C3, ConfigId::C4];

    pub fn id(&self) -> &'static str {
        match self {
            ConfigId::C1 => "C1",
            ConfigId::C2 => "C2",
            ConfigId::C3 => "C3",
            ConfigId::C4 => "C4",
        }
    }

    /// Step granularity `n_t` and environment length `tau_t`.
    pub fn parameters(&self) -> (u32, u32) {
        match self {
            ConfigId::C1 => (5, 10),
            ConfigId::C2 => (10, 5),
            ConfigId::C3 => (5, 5),
            ConfigId::C4 => (10, 10),
        }
    }

    pub fn dynamic_config(&self, num_changes: u32) -> Result<DynamicConfig> {
        let (n_t, tau_t) = self.parameters();
        DynamicConfig::new(n_t, tau_t, num_changes)
    }
}

impl std::fmt::Display for ConfigId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ConfigId {
    type Err = Error;

    fn from_str(value: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.id() == value)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown configuration '{value}'")))
    }
}

/// Tunables shared by every run of an experiment. `None` fields fall back to
/// per-problem defaults.
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub pop_size: Option<usize>,
    pub num_changes: u32,
    /// Niche decay/variance factor.
    pub alpha: f64,
    /// Initial niche radius; see [`default_niche_radius`].
    pub r0: Option<f64>,
    /// DBSCAN radius; defaults to 5% of the decision-space diagonal.
    pub epsilon: Option<f64>,
    pub eta: usize,
    pub lambda: f64,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            pop_size: None,
            num_changes: 30,
            alpha: 0.5,
            r0: None,
            epsilon: None,
            eta: 5,
            lambda: 1e-3,
        }
    }
}

/// 100 individuals for two objectives, 150 for three.
pub fn default_pop_size(problem: &Problem64) -> usize {
    if problem.objectives() == 3 {
        150
    } else {
        100
    }
}

/// Default initial niche radius: the decision-space diagonal divided by the
/// population size. The niche scale has to sit near the expected spacing of
/// archive points along the Pareto sets; radii of a tenth of the diagonal
/// drown convergence under diversity pressure, while radii below the point
/// spacing let equivalent branches starve.
pub fn default_niche_radius(problem: &Problem64, pop_size: usize) -> f64 {
    problem.bounds().diagonal() / pop_size as f64
}

/// Reference-set sizes used for the indicators, fixed across algorithms.
pub const POF_REFERENCE_2D: usize = 500;
pub const POF_REFERENCE_3D: usize = 1000;
pub const POS_REFERENCE: usize = 500;

/// End-of-environment measurement, including the archived Pareto set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvRecord {
    pub env_index: u32,
    pub t: f64,
    pub igd: f64,
    pub igdx: f64,
    /// Decision vectors of the non-dominated archive at the end of the
    /// environment.
    pub pos: Vec<Vec<f64>>,
}

/// One full dynamic run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_index: u32,
    pub problem: String,
    pub config: String,
    pub algorithm: String,
    pub seed: u64,
    pub envs: Vec<EnvRecord>,
    pub migd: f64,
    pub migdx: f64,
    pub wall_secs: f64,
}

impl RunRecord {
    /// Equality on everything except wall time.
    pub fn same_results(&self, other: &RunRecord) -> bool {
        self.run_index == other.run_index
            && self.problem == other.problem
            && self.config == other.config
            && self.algorithm == other.algorithm
            && self.seed == other.seed
            && self.envs == other.envs
            && self.migd == other.migd
            && self.migdx == other.migdx
    }
}

fn fnv1a(mut hash: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100_0000_01b3);
    }
    hash
}

/// Stable per-run seed from the experiment coordinates, so any execution
/// order yields identical runs.
pub fn derive_seed(
    base_seed: u64,
    problem: &str,
    config: &str,
    algorithm: &str,
    run_index: u32,
) -> u64 {
    let mut h = fnv1a(0xcbf2_9ce4_8422_2325, &base_seed.to_le_bytes());
    for part in [problem, config, algorithm] {
        h = fnv1a(h, part.as_bytes());
        h = fnv1a(h, &[0xff]);
    }
    fnv1a(h, &run_index.to_le_bytes())
}

/// Execute one seeded dynamic run: `num_changes` environments of `tau_t`
/// generations each, with the variant's response applied at every boundary
/// and indicators recorded from the end-of-environment archive.
pub fn run_single(
    problem: &Problem64,
    config: ConfigId,
    variant: AlgorithmVariant,
    seed: u64,
    settings: &RunSettings,
    run_index: u32,
) -> Result<RunRecord> {
    let cfg = config.dynamic_config(settings.num_changes)?;
    let n = settings.pop_size.unwrap_or_else(|| default_pop_size(problem));
    let ga = GaParams::<f64>::defaults(problem.decision_dims(), n);
    ga.validate()?;
    let gmax = cfg.tau_t as usize;
    let radius = settings
        .r0
        .unwrap_or_else(|| default_niche_radius(problem, n));
    let mode = match variant.config().niching {
        NichingKind::Adaptive => NichingMode::Adaptive(NicheParams {
            r0: radius,
            alpha: settings.alpha,
            gmax,
        }),
        NichingKind::FixedRadius => NichingMode::Fixed(radius),
        NichingKind::Off => NichingMode::Off,
    };
    let cae = CaeParams {
        epsilon: settings
            .epsilon
            .unwrap_or_else(|| 0.05 * problem.bounds().diagonal()),
        eta: settings.eta,
        lambda: settings.lambda,
    };
    let pof_count = if problem.objectives() == 3 {
        POF_REFERENCE_3D
    } else {
        POF_REFERENCE_2D
    };

    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pop: Vec<Solution64> = problem.random_population(n, 0.0, &mut rng)?;
    let mut archives: Vec<Vec<Solution64>> = Vec::new();
    let mut series = MetricSeries::new();
    let mut envs = Vec::with_capacity(cfg.num_changes as usize);

    for env in 0..cfg.num_changes as usize {
        let t = time_of_generation::<f64>(env as u64 * cfg.tau_t as u64, &cfg);
        if env > 0 {
            pop = respond(
                variant, env, &pop, &archives, &cae, &ga, &mode, problem, t, &mut rng,
            )?;
        }
        let (next, front) =
            run_static_optimizer(problem, t, pop, gmax, &ga, &mode, &mut rng)?;
        pop = next;

        let pof_ref = problem.sample_true_pof(t, pof_count);
        let pos_ref = problem.sample_true_pos(t, POS_REFERENCE);
        let front_objs: Vec<_> = front.iter().map(|s| s.objectives.clone()).collect();
        let front_decs: Vec<_> = front.iter().map(|s| s.decision.clone()).collect();
        let igd = metrics::igd(&pof_ref, &front_objs)?;
        let igdx = metrics::igdx(&pos_ref, &front_decs)?;
        series.push(MetricRecord { t, igd, igdx });
        envs.push(EnvRecord {
            env_index: env as u32,
            t,
            igd,
            igdx,
            pos: front_decs
                .iter()
                .map(|d| d.values().to_vec())
                .collect(),
        });
        archives.push(front);
    }

    Ok(RunRecord {
        run_index,
        problem: problem.id().to_string(),
        config: config.id().to_string(),
        algorithm: variant.id().to_string(),
        seed,
        envs,
        migd: series.migd()?,
        migdx: series.migdx()?,
        wall_secs: started.elapsed().as_secs_f64(),
    })
}

/// A full experiment: problems x algorithms x repeated runs under one
/// schedule.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub problems: Vec<String>,
    pub config: ConfigId,
    pub algorithms: Vec<AlgorithmVariant>,
    pub runs: u32,
    pub base_seed: u64,
    pub settings: RunSettings,
    /// Worker threads for run-level parallelism.
    pub jobs: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidParameter("runs must be >= 1".into()));
        }
        if self.problems.is_empty() || self.algorithms.is_empty() {
            return Err(Error::InvalidParameter(
                "need at least one problem and one algorithm".into(),
            ));
        }
        for id in &self.problems {
            if DynamicProblem::<f64>::by_id(id).is_none() {
                return Err(Error::InvalidParameter(format!("unknown problem '{id}'")));
            }
        }
        Ok(())
    }
}

/// Run every (problem, algorithm, run) job, possibly in parallel, and return
/// records sorted by experiment coordinates. Seeds are derived per job, so
/// the output is identical for any job count.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let mut jobs = Vec::new();
    for problem_id in &spec.problems {
        for &algorithm in &spec.algorithms {
            for run_index in 0..spec.runs {
                jobs.push((problem_id.clone(), algorithm, run_index));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let mut records = pool.install(|| {
        jobs.par_iter()
            .map(|(problem_id, algorithm, run_index)| {
                let problem = DynamicProblem::<f64>::by_id(problem_id)
                    .expect("validated problem id");
                let seed = derive_seed(
                    spec.base_seed,
                    problem_id,
                    spec.config.id(),
                    algorithm.id(),
                    *run_index,
                );
                run_single(
                    &problem,
                    spec.config,
                    *algorithm,
                    seed,
                    &spec.settings,
                    *run_index,
                )
            })
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by(|a, b| {
        (&a.problem, &a.config, &a.algorithm, a.run_index).cmp(&(
            &b.problem,
            &b.config,
            &b.algorithm,
            b.run_index,
        ))
    });
    Ok(records)
}

/// Repeat an experiment for each niche-decay factor in `alphas`.
pub fn sweep_alpha(spec: &ExperimentSpec, alphas: &[f64]) -> Result<Vec<(f64, Vec<RunRecord>)>> {
    alphas
        .iter()
        .map(|&alpha| {
            let mut swept = spec.clone();
            swept.settings.alpha = alpha;
            run_experiment(&swept).map(|records| (alpha, records))
        })
        .collect()
}

/// The standard sweep grid 0.1, 0.2, ..., 0.9.
pub fn alpha_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}
