//! Algorithm variants sharing one optimizer: the full method, the
//! random-reinitialization baseline, and the ablations that each disable one
//! documented component. A variant is fully determined by its response
//! strategy and its niching mode; nothing else differs between them.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::cae::{cae_generate_initpop, transfer_response, CaeParams, PredictionRule};
use crate::moea::{GaParams, NichingMode};
use crate::suite::DynamicProblem;
use crate::types::Solution;
use crate::{s, Error, Result, Scalar};

/// The selectable algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmVariant {
    /// Clustered transfer prediction plus adaptive niching.
    CaeAn,
    /// Random 20% reinitialization on change, plain NSGA-II optimizer.
    Dnsga2A,
    /// Prediction and niching both removed.
    CaeAnNone,
    /// Cluster matching removed: one transfer model on the whole archives.
    CaeAnNoC,
    /// Fitted transfer replaced by a centroid-shift translation.
    CaeAnNoAe,
    /// Adaptive radius replaced by conventional fixed-radius niching.
    CaeAnNoAdaptive,
}

impl AlgorithmVariant {
    pub const ALL: [AlgorithmVariant; 6] = [
        AlgorithmVariant::CaeAn,
        AlgorithmVariant::Dnsga2A,
        AlgorithmVariant::CaeAnNone,
        AlgorithmVariant::CaeAnNoC,
        AlgorithmVariant::CaeAnNoAe,
        AlgorithmVariant::CaeAnNoAdaptive,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            AlgorithmVariant::CaeAn => "CAE-AN",
            AlgorithmVariant::Dnsga2A => "DNSGA2-A",
            AlgorithmVariant::CaeAnNone => "CAE-AN_none",
            AlgorithmVariant::CaeAnNoC => "CAE-AN_noC",
            AlgorithmVariant::CaeAnNoAe => "CAE-AN_noAE",
            AlgorithmVariant::CaeAnNoAdaptive => "CAE-AN_noadaptive",
        }
    }

    /// The two switch points that define a variant.
    pub fn config(&self) -> VariantConfig {
        match self {
            AlgorithmVariant::CaeAn => VariantConfig {
                response: ResponseKind::ClusteredTransfer,
                niching: NichingKind::Adaptive,
            },
            AlgorithmVariant::Dnsga2A => VariantConfig {
                response: ResponseKind::RandomReinit { fraction: 0.2 },
                niching: NichingKind::Off,
            },
            AlgorithmVariant::CaeAnNone => VariantConfig {
                response: ResponseKind::RandomReinit { fraction: 1.0 },
                niching: NichingKind::Off,
            },
            AlgorithmVariant::CaeAnNoC => VariantConfig {
                response: ResponseKind::UnclusteredTransfer,
                niching: NichingKind::Adaptive,
            },
            AlgorithmVariant::CaeAnNoAe => VariantConfig {
                response: ResponseKind::CentroidShift,
                niching: NichingKind::Adaptive,
            },
            AlgorithmVariant::CaeAnNoAdaptive => VariantConfig {
                response: ResponseKind::ClusteredTransfer,
                niching: NichingKind::FixedRadius,
            },
        }
    }
}

impl fmt::Display for AlgorithmVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for AlgorithmVariant {
    type Err = Error;

    fn from_str(value: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.id() == value)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm '{value}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResponseKind {
    ClusteredTransfer,
    UnclusteredTransfer,
    CentroidShift,
    RandomReinit { fraction: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NichingKind {
    Adaptive,
    FixedRadius,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariantConfig {
    pub response: ResponseKind,
    pub niching: NichingKind,
}

/// Keep `(1 - fraction) * N` previous solutions re-evaluated at `t_new` and
/// replace a random `fraction` of slots with uniform in-bounds solutions.
pub fn random_reinit_response<S: Scalar, R: Rng + ?Sized>(
    prev_pop: &[Solution<S>],
    fraction: S,
    problem: &DynamicProblem<S>,
    t_new: S,
    rng: &mut R,
) -> Result<Vec<Solution<S>>> {
    if fraction < S::zero() || fraction > S::one() {
        return Err(Error::InvalidParameter(
            "reinitialization fraction must lie in [0, 1]".into(),
        ));
    }
    let n = prev_pop.len();
    let replaced = (fraction.to_f64().unwrap() * n as f64).round() as usize;
    let mut replace_idx = rand::seq::index::sample(rng, n, replaced.min(n)).into_vec();
    replace_idx.sort_unstable();
    let mut out = Vec::with_capacity(n);
    for (i, sol) in prev_pop.iter().enumerate() {
        let decision = if replace_idx.binary_search(&i).is_ok() {
            problem.bounds().random_point(rng)
        } else {
            sol.decision.clone()
        };
        out.push(problem.solution(decision, t_new)?);
    }
    Ok(out)
}

/// Response of a prediction-based variant once two archives exist.
#[allow(clippy::too_many_arguments)]
pub fn ablation_response<S: Scalar, R: Rng + ?Sized>(
    variant: AlgorithmVariant,
    pos_t2: &[Solution<S>],
    pos_t1: &[Solution<S>],
    n: usize,
    cae: &CaeParams<S>,
    ga: &GaParams<S>,
    mode: &NichingMode<S>,
    problem: &DynamicProblem<S>,
    t_new: S,
    rng: &mut R,
) -> Result<Vec<Solution<S>>> {
    match variant.config().response {
        ResponseKind::ClusteredTransfer => {
            cae_generate_initpop(pos_t2, pos_t1, n, cae, ga, mode, problem, t_new, rng)
        }
        ResponseKind::UnclusteredTransfer => transfer_response(
            pos_t2,
            pos_t1,
            n,
            false,
            PredictionRule::FittedTransfer,
            cae,
            ga,
            mode,
            problem,
            t_new,
            rng,
        ),
        ResponseKind::CentroidShift => transfer_response(
            pos_t2,
            pos_t1,
            n,
            true,
            PredictionRule::CentroidShift,
            cae,
            ga,
            mode,
            problem,
            t_new,
            rng,
        ),
        ResponseKind::RandomReinit { fraction } => {
            // Archives carry no information for these variants; reseed from
            // the most recent population shape.
            let seed_pop = if pos_t1.len() >= n {
                &pos_t1[..n]
            } else {
                pos_t1
            };
            let mut pop =
                random_reinit_response(seed_pop, s::<S>(fraction), problem, t_new, rng)?;
            while pop.len() < n {
                pop.push(problem.solution(problem.bounds().random_point(rng), t_new)?);
            }
            Ok(pop)
        }
    }
}

/// Full dispatch used by the harness at every environment boundary:
/// reinitialization variants always apply their own rule; prediction
/// variants need two archives and fall back to full reinitialization during
/// the cold start.
#[allow(clippy::too_many_arguments)]
pub fn respond<S: Scalar, R: Rng + ?Sized>(
    variant: AlgorithmVariant,
    env_index: usize,
    prev_pop: &[Solution<S>],
    archives: &[Vec<Solution<S>>],
    cae: &CaeParams<S>,
    ga: &GaParams<S>,
    mode: &NichingMode<S>,
    problem: &DynamicProblem<S>,
    t_new: S,
    rng: &mut R,
) -> Result<Vec<Solution<S>>> {
    let n = ga.pop_size;
    match variant.config().response {
        ResponseKind::RandomReinit { fraction } => {
            random_reinit_response(prev_pop, s::<S>(fraction), problem, t_new, rng)
        }
        _ if env_index < 2 => {
            random_reinit_response(prev_pop, S::one(), problem, t_new, rng)
        }
        _ => ablation_response(
            variant,
            &archives[env_index - 2],
            &archives[env_index - 1],
            n,
            cae,
            ga,
            mode,
            problem,
            t_new,
            rng,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::DecisionVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn problem() -> DynamicProblem<f64> {
        DynamicProblem::dmmf1()
    }

    fn population(n: usize, seed: u64) -> Vec<Solution<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        problem().random_population(n, 0.0, &mut rng).unwrap()
    }

    #[test]
    fn variant_ids_round_trip() {
        for v in AlgorithmVariant::ALL {
            assert_eq!(v.id().parse::<AlgorithmVariant>().unwrap(), v);
        }
        assert!("CAE".parse::<AlgorithmVariant>().is_err());
    }

    #[test]
    fn variants_differ_only_at_the_documented_switch_points() {
        use AlgorithmVariant::*;
        use NichingKind::*;
        let expect = [
            (CaeAn, ResponseKind::ClusteredTransfer, Adaptive),
            (Dnsga2A, ResponseKind::RandomReinit { fraction: 0.2 }, Off),
            (CaeAnNone, ResponseKind::RandomReinit { fraction: 1.0 }, Off),
            (CaeAnNoC, ResponseKind::UnclusteredTransfer, Adaptive),
            (CaeAnNoAe, ResponseKind::CentroidShift, Adaptive),
            (CaeAnNoAdaptive, ResponseKind::ClusteredTransfer, FixedRadius),
        ];
        for (variant, response, niching) in expect {
            let cfg = variant.config();
            assert_eq!(cfg.response, response, "{variant}");
            assert_eq!(cfg.niching, niching, "{variant}");
        }
        // The ablations each flip exactly one switch off the full method.
        let full = CaeAn.config();
        assert_eq!(CaeAnNoAdaptive.config().response, full.response);
        assert_eq!(CaeAnNoC.config().niching, full.niching);
        assert_eq!(CaeAnNoAe.config().niching, full.niching);
    }

    #[test]
    fn reinit_fraction_edges() {
        let problem = problem();
        let prev = population(50, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let same = random_reinit_response(&prev, 0.0, &problem, 0.2, &mut rng).unwrap();
        for (a, b) in same.iter().zip(&prev) {
            assert_eq!(a.decision, b.decision);
            assert_eq!(a.eval_time, 0.2);
        }
        let fresh = random_reinit_response(&prev, 1.0, &problem, 0.2, &mut rng).unwrap();
        let survivors = fresh
            .iter()
            .filter(|s| prev.iter().any(|p| p.decision == s.decision))
            .count();
        assert_eq!(survivors, 0);
        assert!(random_reinit_response(&prev, 1.5, &problem, 0.2, &mut rng).is_err());
    }

    #[test]
    fn reinit_replaces_exactly_twenty_percent() {
        let problem = problem();
        let prev = population(100, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let out = random_reinit_response(&prev, 0.2, &problem, 0.2, &mut rng).unwrap();
        let retained = out
            .iter()
            .zip(&prev)
            .filter(|(a, b)| a.decision == b.decision)
            .count();
        assert_eq!(retained, 80);
    }

    #[test]
    fn centroid_shift_is_exact_on_pure_translation() {
        let problem = problem();
        let cae = CaeParams::for_problem(&problem);
        let ga = GaParams::defaults(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let make = |offset: f64| -> Vec<Solution<f64>> {
            (0..20)
                .map(|i| {
                    let x1 = i as f64 / 19.0;
                    problem
                        .solution(DecisionVector::new(vec![x1, offset]), 0.0)
                        .unwrap()
                })
                .collect()
        };
        let pos_t2 = make(0.0);
        let pos_t1 = make(0.2);
        let out = ablation_response(
            AlgorithmVariant::CaeAnNoAe,
            &pos_t2,
            &pos_t1,
            20,
            &cae,
            &ga,
            &NichingMode::Off,
            &problem,
            0.4,
            &mut rng,
        )
        .unwrap();
        for sol in &out {
            assert!((sol.decision[1] - 0.4).abs() < 1e-12, "not a pure shift");
        }
    }

    #[test]
    fn unclustered_model_cannot_track_opposing_drifts() {
        let problem = problem();
        let cae = CaeParams::for_problem(&problem);
        let ga = GaParams::defaults(2, 4);
        let make = |low: f64, high: f64| -> Vec<Solution<f64>> {
            let mut v = Vec::new();
            for i in 0..25 {
                let x1 = i as f64 / 24.0;
                v.push(problem.solution(DecisionVector::new(vec![x1, low]), 0.0).unwrap());
                v.push(problem.solution(DecisionVector::new(vec![x1, high]), 0.0).unwrap());
            }
            v
        };
        // Lower cluster drifts up, upper cluster drifts down.
        let pos_t2 = make(0.3, 2.2);
        let pos_t1 = make(0.5, 2.0);
        let truth = [0.7, 1.8];
        let error_of = |pop: &[Solution<f64>]| -> f64 {
            pop.iter()
                .map(|sol| {
                    truth
                        .iter()
                        .map(|&c| (sol.decision[1] - c).abs())
                        .fold(f64::INFINITY, f64::min)
                })
                .sum::<f64>()
                / pop.len() as f64
        };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let clustered = ablation_response(
            AlgorithmVariant::CaeAn,
            &pos_t2,
            &pos_t1,
            50,
            &cae,
            &ga,
            &NichingMode::Off,
            &problem,
            0.4,
            &mut rng,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let global = ablation_response(
            AlgorithmVariant::CaeAnNoC,
            &pos_t2,
            &pos_t1,
            50,
            &cae,
            &ga,
            &NichingMode::Off,
            &problem,
            0.4,
            &mut rng,
        )
        .unwrap();
        let (per_cluster, single) = (error_of(&clustered), error_of(&global));
        assert!(
            single > per_cluster,
            "global residual {single} should exceed per-cluster residual {per_cluster}"
        );
    }

    #[test]
    fn full_reinit_population_is_uniform() {
        let problem = problem();
        let cae = CaeParams::for_problem(&problem);
        let ga = GaParams::defaults(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let prev = population(100, 8);
        let archives = vec![prev.clone(), prev.clone()];
        let mut samples = Vec::new();
        for _ in 0..5 {
            let pop = respond(
                AlgorithmVariant::CaeAnNone,
                4,
                &prev,
                &archives,
                &cae,
                &ga,
                &NichingMode::Off,
                &problem,
                0.8,
                &mut rng,
            )
            .unwrap();
            samples.extend(pop.into_iter().map(|s| s.decision[0]));
        }
        // Kolmogorov-Smirnov distance of the first coordinate against
        // uniform on [0, 1].
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = samples.len() as f64;
        let d = samples
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let ecdf_hi = (i + 1) as f64 / n;
                let ecdf_lo = i as f64 / n;
                (ecdf_hi - v).abs().max((v - ecdf_lo).abs())
            })
            .fold(0.0f64, f64::max);
        assert!(d < 0.1, "KS distance {d} too large for a uniform sample");
    }

    #[test]
    fn every_variant_returns_a_valid_population() {
        let problem = problem();
        let cae = CaeParams::for_problem(&problem);
        let n = 30;
        let ga = GaParams::defaults(2, n);
        let prev = population(n, 9);
        let archives = vec![population(n, 10), population(n, 11)];
        for variant in AlgorithmVariant::ALL {
            let mut rng = ChaCha8Rng::seed_from_u64(12);
            let pop = respond(
                variant,
                2,
                &prev,
                &archives,
                &cae,
                &ga,
                &NichingMode::Off,
                &problem,
                0.4,
                &mut rng,
            )
            .unwrap();
            assert_eq!(pop.len(), n, "{variant}");
            for sol in &pop {
                assert!(problem.bounds().check(&sol.decision).is_ok(), "{variant}");
                assert_eq!(sol.eval_time, 0.4, "{variant}");
            }
        }
    }

    #[test]
    fn cold_start_reinitializes_prediction_variants() {
        let problem = problem();
        let cae = CaeParams::for_problem(&problem);
        let ga = GaParams::defaults(2, 20);
        let prev = population(20, 13);
        let archives = vec![prev.clone()];
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let pop = respond(
            AlgorithmVariant::CaeAn,
            1,
            &prev,
            &archives,
            &cae,
            &ga,
            &NichingMode::Off,
            &problem,
            0.2,
            &mut rng,
        )
        .unwrap();
        let survivors = pop
            .iter()
            .filter(|s| prev.iter().any(|p| p.decision == s.decision))
            .count();
        assert_eq!(survivors, 0, "cold start must be a full reinitialization");
    }
}
