//! The static optimizer: a generational NSGA-II with simulated binary
//! crossover, polynomial mutation, and decision-space niching whose radius
//! shrinks over the environment and swells with local fitness variance:
//!
//! ```text
//! R_i(g) = R0 * (1 - alpha * g / Gmax) * (1 + alpha * Var_i)
//! ```
//!
//! Niche counts inside `R_i(g)` act as the secondary selection key on the
//! critical front and in tournaments; objective-space crowding stays as the
//! tie-breaker so the front keeps its spread while the decision space keeps
//! its branches.

use rand::Rng;

use crate::rng_util::unit;
use crate::suite::DynamicProblem;
use crate::types::{BoxBounds, DecisionVector, Solution};
use crate::{s, Error, Result, Scalar};

/// Variation-operator parameters.
#[derive(Debug, Clone, Copy)]
pub struct GaParams<S> {
    pub crossover_prob: S,
    pub sbx_eta: S,
    /// Per-variable mutation probability.
    pub mutation_prob: S,
    pub pm_eta: S,
    pub pop_size: usize,
}

impl<S: Scalar> GaParams<S> {
    /// Standard settings: certain crossover, distribution indices of 20, one
    /// expected mutation per individual.
    pub fn defaults(dims: usize, pop_size: usize) -> Self {
        Self {
            crossover_prob: S::one(),
            sbx_eta: s(20.0),
            mutation_prob: S::one() / s(dims as f64),
            pm_eta: s(20.0),
            pop_size,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit_interval = |p: S| p >= S::zero() && p <= S::one();
        if !unit_interval(self.crossover_prob) || !unit_interval(self.mutation_prob) {
            return Err(Error::InvalidParameter(
                "operator probabilities must lie in [0, 1]".into(),
            ));
        }
        if self.sbx_eta <= S::zero() || self.pm_eta <= S::zero() {
            return Err(Error::InvalidParameter(
                "distribution indices must be positive".into(),
            ));
        }
        if self.pop_size < 4 || self.pop_size % 2 != 0 {
            return Err(Error::InvalidParameter(
                "population size must be even and at least 4".into(),
            ));
        }
        Ok(())
    }
}

/// Adaptive niche radius parameters.
#[derive(Debug, Clone, Copy)]
pub struct NicheParams<S> {
    /// Initial radius, decision-space units.
    pub r0: S,
    /// Decay/variance weight in (0, 1).
    pub alpha: S,
    /// Generations per environment; the decay bottoms out here.
    pub gmax: usize,
}

impl<S: Scalar> NicheParams<S> {
    /// Population-scaled radius: the decision-space diagonal over the
    /// population size, roughly the expected spacing of converged solutions
    /// along the Pareto sets.
    pub fn for_problem(
        problem: &DynamicProblem<S>,
        pop_size: usize,
        alpha: S,
        gmax: usize,
    ) -> Self {
        Self {
            r0: problem.bounds().diagonal() / s::<S>(pop_size as f64),
            alpha,
            gmax,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r0 <= S::zero() {
            return Err(Error::InvalidParameter("R0 must be positive".into()));
        }
        if self.alpha <= S::zero() || self.alpha >= S::one() {
            return Err(Error::InvalidParameter("alpha must lie in (0, 1)".into()));
        }
        if self.gmax == 0 {
            return Err(Error::InvalidParameter("Gmax must be at least 1".into()));
        }
        Ok(())
    }
}

/// How the optimizer maintains decision-space diversity.
#[derive(Debug, Clone, Copy)]
pub enum NichingMode<S> {
    /// The adaptive radius above.
    Adaptive(NicheParams<S>),
    /// Conventional niching with a constant radius.
    Fixed(S),
    /// Plain NSGA-II crowding only.
    Off,
}

/// Population with non-dominated sorting results attached.
#[derive(Debug, Clone)]
pub struct RankedPopulation<S> {
    pub solutions: Vec<Solution<S>>,
    /// Front index per solution, 0 = non-dominated.
    pub front_of: Vec<usize>,
    /// Solution indices per front; together the fronts partition the
    /// population.
    pub fronts: Vec<Vec<usize>>,
    /// Objective-space crowding distance per solution.
    pub crowding: Vec<S>,
}

impl<S: Scalar> RankedPopulation<S> {
    pub fn first_front(&self) -> Vec<Solution<S>> {
        self.fronts[0]
            .iter()
            .map(|&i| self.solutions[i].clone())
            .collect()
    }
}

/// Fast non-dominated sorting plus per-front crowding distances.
pub fn nondominated_sort<S: Scalar>(solutions: Vec<Solution<S>>) -> RankedPopulation<S> {
    let n = solutions.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dom_count = vec![0usize; n];
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if solutions[i].objectives.dominates(&solutions[j].objectives) {
                dominated_by[i].push(j);
            } else if solutions[j].objectives.dominates(&solutions[i].objectives) {
                dom_count[i] += 1;
            }
        }
        if dom_count[i] == 0 {
            current.push(i);
        }
    }
    let mut front_of = vec![0usize; n];
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            front_of[i] = fronts.len();
            for &j in &dominated_by[i] {
                dom_count[j] -= 1;
                if dom_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    let crowding = crowding_distances(&solutions, &fronts);
    RankedPopulation {
        solutions,
        front_of,
        fronts,
        crowding,
    }
}

fn crowding_distances<S: Scalar>(solutions: &[Solution<S>], fronts: &[Vec<usize>]) -> Vec<S> {
    let mut crowding = vec![S::zero(); solutions.len()];
    if solutions.is_empty() {
        return crowding;
    }
    let m = solutions[0].objectives.len();
    for front in fronts {
        if front.len() <= 2 {
            for &i in front {
                crowding[i] = S::infinity();
            }
            continue;
        }
        for obj in 0..m {
            let mut order = front.clone();
            order.sort_by(|&a, &b| {
                solutions[a].objectives[obj]
                    .partial_cmp(&solutions[b].objectives[obj])
                    .unwrap()
                    .then(a.cmp(&b))
            });
            let lo = solutions[order[0]].objectives[obj];
            let hi = solutions[*order.last().unwrap()].objectives[obj];
            crowding[order[0]] = S::infinity();
            crowding[*order.last().unwrap()] = S::infinity();
            let range = hi - lo;
            if range > S::zero() {
                for w in order.windows(3) {
                    let gap =
                        (solutions[w[2]].objectives[obj] - solutions[w[0]].objectives[obj]) / range;
                    crowding[w[1]] = crowding[w[1]] + gap;
                }
            }
        }
    }
    crowding
}

/// The scalar used in tournaments and niche variance: front index plus one
/// minus the population-normalized crowding distance. Lower is better.
pub fn scalar_fitness<S: Scalar>(ranked: &RankedPopulation<S>) -> Vec<S> {
    let max_finite = ranked
        .crowding
        .iter()
        .filter(|c| c.is_finite())
        .fold(S::zero(), |acc, &c| acc.max(c));
    ranked
        .front_of
        .iter()
        .zip(&ranked.crowding)
        .map(|(&front, &cd)| {
            let norm = if cd.is_infinite() {
                S::one()
            } else if max_finite > S::zero() {
                (cd / max_finite).min(S::one())
            } else {
                S::zero()
            };
            s::<S>(front as f64) + (S::one() - norm)
        })
        .collect()
}

/// The adaptive radius product, evaluated exactly as written.
pub fn adaptive_niche_radius<S: Scalar>(params: &NicheParams<S>, g: usize, var: S) -> S {
    let frac = s::<S>(g as f64) / s::<S>(params.gmax as f64);
    params.r0 * (S::one() - params.alpha * frac) * (S::one() + params.alpha * var)
}

/// Neighbour count and raw niche fitness variance per solution, all measured
/// with the same radius (inclusive distance). Variance is zero for fewer
/// than two neighbours.
pub fn raw_niche_statistics<S: Scalar>(
    decisions: &[DecisionVector<S>],
    fitness: &[S],
    radius: S,
) -> Vec<(usize, S)> {
    let n = decisions.len();
    (0..n)
        .map(|i| {
            let mut vals = Vec::new();
            for j in 0..n {
                if i != j && decisions[i].distance(&decisions[j]) <= radius {
                    vals.push(fitness[j]);
                }
            }
            if vals.len() < 2 {
                (vals.len(), S::zero())
            } else {
                (vals.len(), population_variance(&vals))
            }
        })
        .collect()
}

/// As [`raw_niche_statistics`] for one solution, with the variance normalized
/// to `[0, 1]` by the population-wide maximum.
pub fn niche_statistics<S: Scalar>(
    index: usize,
    decisions: &[DecisionVector<S>],
    fitness: &[S],
    radius: S,
) -> (usize, S) {
    let raw = raw_niche_statistics(decisions, fitness, radius);
    let max = raw.iter().fold(S::zero(), |acc, &(_, v)| acc.max(v));
    let (count, var) = raw[index];
    if max > S::zero() {
        (count, (var / max).min(S::one()))
    } else {
        (count, S::zero())
    }
}

fn population_variance<S: Scalar>(values: &[S]) -> S {
    let n = s::<S>(values.len() as f64);
    let mean = values.iter().copied().sum::<S>() / n;
    values.iter().map(|&v| (v - mean) * (v - mean)).sum::<S>() / n
}

/// Per-individual radii and neighbour counts for the active niching mode.
struct NicheState<S> {
    radii: Vec<S>,
    counts: Vec<usize>,
}

fn distance_matrix<S: Scalar>(solutions: &[Solution<S>]) -> Vec<S> {
    let n = solutions.len();
    let mut d = vec![S::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = solutions[i].decision.distance(&solutions[j].decision);
            d[i * n + j] = dist;
            d[j * n + i] = dist;
        }
    }
    d
}

fn niche_state<S: Scalar>(
    ranked: &RankedPopulation<S>,
    mode: &NichingMode<S>,
    g: usize,
) -> Option<NicheState<S>> {
    let n = ranked.solutions.len();
    match mode {
        NichingMode::Off => None,
        NichingMode::Fixed(r) => {
            let d = distance_matrix(&ranked.solutions);
            let counts = (0..n)
                .map(|i| (0..n).filter(|&j| j != i && d[i * n + j] <= *r).count())
                .collect();
            Some(NicheState {
                radii: vec![*r; n],
                counts,
            })
        }
        NichingMode::Adaptive(params) => {
            let d = distance_matrix(&ranked.solutions);
            let fitness = scalar_fitness(ranked);
            let base = adaptive_niche_radius(params, g, S::zero());
            // Raw variances inside the base radius, normalized by the
            // population maximum; each radius then widens with its variance.
            let mut raw = Vec::with_capacity(n);
            for i in 0..n {
                let mut vals = Vec::new();
                for j in 0..n {
                    if j != i && d[i * n + j] <= base {
                        vals.push(fitness[j]);
                    }
                }
                raw.push(if vals.len() < 2 {
                    S::zero()
                } else {
                    population_variance(&vals)
                });
            }
            let max = raw.iter().fold(S::zero(), |acc, &v| acc.max(v));
            let radii: Vec<S> = raw
                .iter()
                .map(|&v| {
                    let var = if max > S::zero() {
                        (v / max).min(S::one())
                    } else {
                        S::zero()
                    };
                    adaptive_niche_radius(params, g, var)
                })
                .collect();
            let counts = (0..n)
                .map(|i| {
                    (0..n)
                        .filter(|&j| j != i && d[i * n + j] <= radii[i])
                        .count()
                })
                .collect();
            Some(NicheState { radii, counts })
        }
    }
}

/// Simulated binary crossover. Children are clipped to the bounds.
pub fn sbx_crossover<S: Scalar, R: Rng + ?Sized>(
    p1: &DecisionVector<S>,
    p2: &DecisionVector<S>,
    bounds: &BoxBounds<S>,
    params: &GaParams<S>,
    rng: &mut R,
) -> (DecisionVector<S>, DecisionVector<S>) {
    let mut c1 = p1.values().to_vec();
    let mut c2 = p2.values().to_vec();
    if unit::<S, R>(rng) < params.crossover_prob {
        let half = s::<S>(0.5);
        for i in 0..c1.len() {
            if unit::<S, R>(rng) >= half {
                continue;
            }
            let (y1, y2) = if p1[i] <= p2[i] {
                (p1[i], p2[i])
            } else {
                (p2[i], p1[i])
            };
            if y2 - y1 <= S::epsilon() {
                continue;
            }
            let u = unit::<S, R>(rng);
            let exp = S::one() / (params.sbx_eta + S::one());
            let beta = if u <= half {
                (s::<S>(2.0) * u).powf(exp)
            } else {
                (S::one() / (s::<S>(2.0) * (S::one() - u))).powf(exp)
            };
            let mean = half * (y1 + y2);
            let spread = half * beta * (y2 - y1);
            if p1[i] <= p2[i] {
                c1[i] = mean - spread;
                c2[i] = mean + spread;
            } else {
                c1[i] = mean + spread;
                c2[i] = mean - spread;
            }
        }
    }
    bounds.clip(&mut c1);
    bounds.clip(&mut c2);
    (DecisionVector::new(c1), DecisionVector::new(c2))
}

/// Bound-respecting polynomial mutation.
pub fn polynomial_mutation<S: Scalar, R: Rng + ?Sized>(
    x: &DecisionVector<S>,
    bounds: &BoxBounds<S>,
    params: &GaParams<S>,
    rng: &mut R,
) -> DecisionVector<S> {
    let mut v = x.values().to_vec();
    let half = s::<S>(0.5);
    let two = s::<S>(2.0);
    for (i, &(lo, hi)) in bounds.as_slice().iter().enumerate() {
        if unit::<S, R>(rng) >= params.mutation_prob {
            continue;
        }
        let span = hi - lo;
        let d1 = (v[i] - lo) / span;
        let d2 = (hi - v[i]) / span;
        let u = unit::<S, R>(rng);
        let pow = params.pm_eta + S::one();
        let exp = S::one() / pow;
        let delta = if u < half {
            let b = two * u + (S::one() - two * u) * (S::one() - d1).powf(pow);
            b.powf(exp) - S::one()
        } else {
            let b = two * (S::one() - u) + two * (u - half) * (S::one() - d2).powf(pow);
            S::one() - b.powf(exp)
        };
        v[i] = v[i] + delta * span;
    }
    bounds.clip(&mut v);
    DecisionVector::new(v)
}

/// Reduce a parent+offspring union to `n` survivors: whole fronts while they
/// fit, then the critical front truncated by niche pressure (or by crowding
/// when niching is off).
pub fn environmental_selection<S: Scalar>(
    union: Vec<Solution<S>>,
    n: usize,
    mode: &NichingMode<S>,
    g: usize,
) -> Vec<Solution<S>> {
    if union.len() <= n {
        return union;
    }
    let ranked = nondominated_sort(union);
    let mut admitted: Vec<usize> = Vec::with_capacity(n);
    let mut critical: Option<&Vec<usize>> = None;
    for front in &ranked.fronts {
        if admitted.len() + front.len() <= n {
            admitted.extend_from_slice(front);
            if admitted.len() == n {
                break;
            }
        } else {
            critical = Some(front);
            break;
        }
    }
    if let Some(front) = critical {
        let capacity = n - admitted.len();
        match mode {
            NichingMode::Off => {
                let mut order = front.clone();
                order.sort_by(|&a, &b| {
                    ranked.crowding[b]
                        .partial_cmp(&ranked.crowding[a])
                        .unwrap()
                        .then(a.cmp(&b))
                });
                admitted.extend(order.into_iter().take(capacity));
            }
            _ => {
                admitted.extend(truncate_by_niche(&ranked, &admitted, front, capacity, mode, g));
            }
        }
    }
    admitted.sort_unstable();
    admitted
        .into_iter()
        .map(|i| ranked.solutions[i].clone())
        .collect()
}

/// Iteratively drop the most crowded candidate (highest niche count, then
/// lowest crowding distance, then highest index) until the front fits.
/// Counts run over admitted members plus surviving candidates.
fn truncate_by_niche<S: Scalar>(
    ranked: &RankedPopulation<S>,
    admitted: &[usize],
    front: &[usize],
    capacity: usize,
    mode: &NichingMode<S>,
    g: usize,
) -> Vec<usize> {
    let state = niche_state(ranked, mode, g).expect("niching enabled");
    let n = ranked.solutions.len();
    let dist = distance_matrix(&ranked.solutions);
    let mut active = vec![false; n];
    for &i in admitted.iter().chain(front.iter()) {
        active[i] = true;
    }
    let mut counts = vec![0usize; n];
    for &i in front {
        counts[i] = (0..n)
            .filter(|&j| j != i && active[j] && dist[i * n + j] <= state.radii[i])
            .count();
    }
    let mut remaining: Vec<usize> = front.to_vec();
    while remaining.len() > capacity {
        let mut worst = remaining[0];
        for &i in &remaining[1..] {
            let more_crowded = counts[i] > counts[worst]
                || (counts[i] == counts[worst]
                    && (ranked.crowding[i] < ranked.crowding[worst]
                        || (ranked.crowding[i] == ranked.crowding[worst] && i > worst)));
            if more_crowded {
                worst = i;
            }
        }
        active[worst] = false;
        remaining.retain(|&i| i != worst);
        for &i in &remaining {
            if dist[i * n + worst] <= state.radii[i] {
                counts[i] -= 1;
            }
        }
    }
    remaining
}

/// Binary tournament by front, then niche count where niching is active,
/// then crowding distance. The first contestant wins full ties.
fn tournament<S: Scalar, R: Rng + ?Sized>(
    ranked: &RankedPopulation<S>,
    state: Option<&NicheState<S>>,
    rng: &mut R,
) -> usize {
    let n = ranked.solutions.len();
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    let better = |x: usize, y: usize| -> bool {
        if ranked.front_of[x] != ranked.front_of[y] {
            return ranked.front_of[x] < ranked.front_of[y];
        }
        if let Some(st) = state {
            if st.counts[x] != st.counts[y] {
                return st.counts[x] < st.counts[y];
            }
        }
        ranked.crowding[x] > ranked.crowding[y]
    };
    if better(b, a) {
        b
    } else {
        a
    }
}

/// Run the optimizer for `generations` iterations at fixed time `t`; returns
/// the final population together with its non-dominated front.
///
/// Deterministic: a pure function of `(problem, t, init_pop, params, seed)`.
pub fn run_static_optimizer<S: Scalar, R: Rng + ?Sized>(
    problem: &DynamicProblem<S>,
    t: S,
    init_pop: Vec<Solution<S>>,
    generations: usize,
    ga: &GaParams<S>,
    mode: &NichingMode<S>,
    rng: &mut R,
) -> Result<(Vec<Solution<S>>, Vec<Solution<S>>)> {
    ga.validate()?;
    if let NichingMode::Adaptive(p) = mode {
        p.validate()?;
    }
    let n = ga.pop_size;
    debug_assert_eq!(init_pop.len(), n, "initial population must have size N");
    let mut pop: Vec<Solution<S>> = init_pop
        .into_iter()
        .map(|sol| {
            if sol.eval_time == t {
                Ok(sol)
            } else {
                problem.solution(sol.decision, t)
            }
        })
        .collect::<Result<_>>()?;
    for g in 0..generations {
        let ranked = nondominated_sort(pop);
        let state = niche_state(&ranked, mode, g);
        let mut offspring = Vec::with_capacity(n);
        while offspring.len() < n {
            let i = tournament(&ranked, state.as_ref(), rng);
            let j = tournament(&ranked, state.as_ref(), rng);
            let (c1, c2) = sbx_crossover(
                &ranked.solutions[i].decision,
                &ranked.solutions[j].decision,
                problem.bounds(),
                ga,
                rng,
            );
            let c1 = polynomial_mutation(&c1, problem.bounds(), ga, rng);
            offspring.push(problem.solution(c1, t)?);
            if offspring.len() < n {
                let c2 = polynomial_mutation(&c2, problem.bounds(), ga, rng);
                offspring.push(problem.solution(c2, t)?);
            }
        }
        let mut union = ranked.solutions;
        union.append(&mut offspring);
        pop = environmental_selection(union, n, mode, g);
    }
    let ranked = nondominated_sort(pop);
    let front = ranked.first_front();
    Ok((ranked.solutions, front))
}
