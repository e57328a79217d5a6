//! The dynamic response: cluster the two most recent archived Pareto sets
//! with DBSCAN, match clusters across time by centroid distance, fit one
//! regularized linear transfer model per matched pair, and seed the next
//! environment with perturbed one-step predictions.
//!
//! The transfer model solves `M = (X_curr X_prevᵀ)(X_prev X_prevᵀ + λI)⁻¹`
//! in closed form; predictions are `M x + v` with `v` zero-mean Gaussian
//! noise whose standard deviation is the root mean squared residual of the
//! fit. Decision variables are normalized to the unit box per dimension
//! before fitting and mapped back afterwards, so λ acts scale-free.

use rand::Rng;

use crate::moea::{environmental_selection, polynomial_mutation, GaParams, NichingMode};
use crate::rng_util::normal;
use crate::suite::DynamicProblem;
use crate::types::{BoxBounds, DecisionVector, ObjectiveVector, Solution};
use crate::{s, Error, Result, Scalar};

/// Density clustering output: clusters and noise partition the input indices.
#[derive(Debug, Clone)]
pub struct ClusterSet<S> {
    /// Point-index groups, each containing at least one core point.
    pub clusters: Vec<Vec<usize>>,
    pub noise: Vec<usize>,
    pub epsilon: S,
    pub eta: usize,
}

impl<S> ClusterSet<S> {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// Standard density-based clustering over Euclidean decision-space distance.
///
/// Core points have at least `eta` neighbours within `epsilon` counting
/// themselves. Border points join the cluster of their lowest-index core
/// neighbour, which makes the outcome independent of traversal order.
pub fn dbscan<S: Scalar>(
    points: &[DecisionVector<S>],
    epsilon: S,
    eta: usize,
) -> ClusterSet<S> {
    assert!(epsilon > S::zero(), "epsilon must be positive");
    assert!(eta >= 1, "eta must be at least 1");
    let n = points.len();
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if points[i].distance(&points[j]) <= epsilon {
                neighbours[i].push(j);
                neighbours[j].push(i);
            }
        }
    }
    let core: Vec<bool> = neighbours.iter().map(|nb| nb.len() + 1 >= eta).collect();
    const UNASSIGNED: usize = usize::MAX;
    let mut cluster_of = vec![UNASSIGNED; n];
    let mut cluster_count = 0;
    for i in 0..n {
        if !core[i] || cluster_of[i] != UNASSIGNED {
            continue;
        }
        let id = cluster_count;
        cluster_count += 1;
        cluster_of[i] = id;
        let mut queue = vec![i];
        while let Some(j) = queue.pop() {
            for &k in &neighbours[j] {
                if core[k] && cluster_of[k] == UNASSIGNED {
                    cluster_of[k] = id;
                    queue.push(k);
                }
            }
        }
    }
    for i in 0..n {
        if core[i] {
            continue;
        }
        // Lowest-index core neighbour wins; neighbour lists are ascending.
        if let Some(&c) = neighbours[i].iter().find(|&&j| core[j]) {
            cluster_of[i] = cluster_of[c];
        }
    }
    let mut clusters = vec![Vec::new(); cluster_count];
    let mut noise = Vec::new();
    for i in 0..n {
        if cluster_of[i] == UNASSIGNED {
            noise.push(i);
        } else {
            clusters[cluster_of[i]].push(i);
        }
    }
    ClusterSet {
        clusters,
        noise,
        epsilon,
        eta,
    }
}

/// Arithmetic mean of a cluster in decision and objective space.
#[derive(Debug, Clone)]
pub struct Centroid<S> {
    pub decision_mean: DecisionVector<S>,
    pub objective_mean: ObjectiveVector<S>,
    pub size: usize,
}

/// Per-cluster centroids over the source population.
pub fn compute_centroids<S: Scalar>(
    clusters: &ClusterSet<S>,
    source: &[Solution<S>],
) -> Vec<Centroid<S>> {
    centroids_of(&clusters.clusters, source)
}

fn centroids_of<S: Scalar>(groups: &[Vec<usize>], source: &[Solution<S>]) -> Vec<Centroid<S>> {
    groups
        .iter()
        .map(|members| {
            let count = s::<S>(members.len() as f64);
            let d = source[members[0]].decision.len();
            let m = source[members[0]].objectives.len();
            let mut dec = vec![S::zero(); d];
            let mut obj = vec![S::zero(); m];
            for &i in members {
                for (acc, &v) in dec.iter_mut().zip(source[i].decision.values()) {
                    *acc = *acc + v;
                }
                for (acc, &v) in obj.iter_mut().zip(source[i].objectives.values()) {
                    *acc = *acc + v;
                }
            }
            Centroid {
                decision_mean: DecisionVector::new(dec.into_iter().map(|v| v / count).collect()),
                objective_mean: ObjectiveVector::new(obj.into_iter().map(|v| v / count).collect()),
                size: members.len(),
            }
        })
        .collect()
}

/// A cluster from the older archive paired with its counterpart in the newer
/// one.
#[derive(Debug, Clone, Copy)]
pub struct MatchedPair<S> {
    pub prev: usize,
    pub curr: usize,
    pub centroid_distance: S,
}

#[derive(Debug, Clone)]
pub struct MatchResult<S> {
    /// Accepted pairs in order of ascending centroid distance.
    pub pairs: Vec<MatchedPair<S>>,
    pub unmatched_prev: Vec<usize>,
    pub unmatched_curr: Vec<usize>,
}

/// Greedy minimal-distance pairing of cluster centroids in decision space,
/// injective on both sides; leftovers are reported unmatched.
pub fn match_clusters<S: Scalar>(prev: &[Centroid<S>], curr: &[Centroid<S>]) -> MatchResult<S> {
    let mut candidates: Vec<(S, usize, usize)> = Vec::with_capacity(prev.len() * curr.len());
    for (i, p) in prev.iter().enumerate() {
        for (j, c) in curr.iter().enumerate() {
            candidates.push((p.decision_mean.distance(&c.decision_mean), i, j));
        }
    }
    candidates.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut prev_taken = vec![false; prev.len()];
    let mut curr_taken = vec![false; curr.len()];
    let mut pairs = Vec::new();
    for (d, i, j) in candidates {
        if !prev_taken[i] && !curr_taken[j] {
            prev_taken[i] = true;
            curr_taken[j] = true;
            pairs.push(MatchedPair {
                prev: i,
                curr: j,
                centroid_distance: d,
            });
        }
    }
    MatchResult {
        pairs,
        unmatched_prev: (0..prev.len()).filter(|&i| !prev_taken[i]).collect(),
        unmatched_curr: (0..curr.len()).filter(|&j| !curr_taken[j]).collect(),
    }
}

/// Fitted linear map between consecutive cluster snapshots.
#[derive(Debug, Clone)]
pub struct TransferModel<S> {
    /// Row-major square matrix over decision dimensions.
    pub matrix: Vec<Vec<S>>,
    pub lambda: S,
    /// Mean squared residual per matrix entry.
    pub mse: S,
    /// Gaussian prediction noise, `sqrt(mse)` per entry.
    pub perturbation_scale: S,
}

impl<S: Scalar> TransferModel<S> {
    pub fn dims(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(&m, &v)| m * v).sum())
            .collect()
    }
}

/// Solve the ridge system `M (X_prev X_prevᵀ + λI) = X_curr X_prevᵀ` by the
/// closed form. Points are matrix columns; both sets must pair up one to one.
pub fn fit_transfer<S: Scalar>(
    prev_points: &[Vec<S>],
    curr_points: &[Vec<S>],
    lambda: S,
) -> Result<TransferModel<S>> {
    if prev_points.is_empty() {
        return Err(Error::EmptyInput("transfer training columns"));
    }
    if prev_points.len() != curr_points.len() {
        return Err(Error::DimensionMismatch {
            expected: prev_points.len(),
            got: curr_points.len(),
        });
    }
    if lambda < S::zero() {
        return Err(Error::InvalidParameter("lambda must be nonnegative".into()));
    }
    let d = prev_points[0].len();
    for p in prev_points.iter().chain(curr_points.iter()) {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
    }
    let mut gram = vec![vec![S::zero(); d]; d];
    let mut cross = vec![vec![S::zero(); d]; d];
    for (p, c) in prev_points.iter().zip(curr_points) {
        for i in 0..d {
            for j in 0..d {
                gram[i][j] = gram[i][j] + p[i] * p[j];
                cross[i][j] = cross[i][j] + c[i] * p[j];
            }
        }
    }
    for i in 0..d {
        gram[i][i] = gram[i][i] + lambda;
    }
    let chol = cholesky(&gram)?;
    let matrix: Vec<Vec<S>> = cross.iter().map(|row| chol.solve(row)).collect();
    let model_stub = TransferModel {
        matrix,
        lambda,
        mse: S::zero(),
        perturbation_scale: S::zero(),
    };
    let mut sse = S::zero();
    for (p, c) in prev_points.iter().zip(curr_points) {
        let pred = model_stub.apply(p);
        for (a, b) in c.iter().zip(pred) {
            sse = sse + (*a - b) * (*a - b);
        }
    }
    let mse = sse / s::<S>((d * prev_points.len()) as f64);
    Ok(TransferModel {
        mse,
        perturbation_scale: mse.sqrt(),
        ..model_stub
    })
}

struct Cholesky<S> {
    l: Vec<Vec<S>>,
}

impl<S: Scalar> Cholesky<S> {
    fn solve(&self, b: &[S]) -> Vec<S> {
        let d = self.l.len();
        let mut y = vec![S::zero(); d];
        for i in 0..d {
            let mut sum = b[i];
            for k in 0..i {
                sum = sum - self.l[i][k] * y[k];
            }
            y[i] = sum / self.l[i][i];
        }
        let mut x = vec![S::zero(); d];
        for i in (0..d).rev() {
            let mut sum = y[i];
            for k in (i + 1)..d {
                sum = sum - self.l[k][i] * x[k];
            }
            x[i] = sum / self.l[i][i];
        }
        x
    }
}

fn cholesky<S: Scalar>(a: &[Vec<S>]) -> Result<Cholesky<S>> {
    let d = a.len();
    let scale = (0..d).fold(S::zero(), |acc, i| acc.max(a[i][i].abs()));
    let tol = scale.max(S::one()) * S::epsilon() * s::<S>(d as f64);
    let mut l = vec![vec![S::zero(); d]; d];
    for i in 0..d {
        for j in 0..=i {
            let mut sum = a[i][j];
            for k in 0..j {
                sum = sum - l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= tol {
                    return Err(Error::SingularSystem);
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Ok(Cholesky { l })
}

/// One-step prediction `M x + v` for every column, `v` i.i.d. Gaussian per
/// entry with the model's perturbation scale. Callers clip to bounds.
pub fn predict<S: Scalar, R: Rng + ?Sized>(
    model: &TransferModel<S>,
    points: &[Vec<S>],
    rng: &mut R,
) -> Vec<Vec<S>> {
    points
        .iter()
        .map(|p| {
            model
                .apply(p)
                .into_iter()
                .map(|v| v + model.perturbation_scale * normal::<S, R>(rng))
                .collect()
        })
        .collect()
}

/// Clustering and fitting knobs of the response.
#[derive(Debug, Clone, Copy)]
pub struct CaeParams<S> {
    pub epsilon: S,
    pub eta: usize,
    pub lambda: S,
}

impl<S: Scalar> CaeParams<S> {
    /// Defaults: epsilon at 5% of the decision-space diagonal (small enough
    /// to keep neighbouring branches apart under archive noise), five
    /// neighbours for a core point, and a mild scale-free ridge.
    pub fn for_problem(problem: &DynamicProblem<S>) -> Self {
        Self {
            epsilon: s::<S>(0.05) * problem.bounds().diagonal(),
            eta: 5,
            lambda: s(1e-3),
        }
    }
}

/// How predictions per matched pair are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PredictionRule {
    /// Fit the ridge transfer model and apply it.
    FittedTransfer,
    /// Translate by the centroid difference only.
    CentroidShift,
}

fn normalize<S: Scalar>(bounds: &BoxBounds<S>, x: &[S]) -> Vec<S> {
    x.iter()
        .zip(bounds.as_slice())
        .map(|(&v, &(lo, hi))| (v - lo) / (hi - lo))
        .collect()
}

fn denormalize<S: Scalar>(bounds: &BoxBounds<S>, z: &[S]) -> Vec<S> {
    z.iter()
        .zip(bounds.as_slice())
        .map(|(&v, &(lo, hi))| lo + v * (hi - lo))
        .collect()
}

/// Cluster, match, and predict. Returns `None` when no cluster pair could be
/// matched (the caller falls back to copying the newer archive). With
/// `clustered == false` both archives are treated as single clusters.
pub(crate) fn predict_population<S: Scalar, R: Rng + ?Sized>(
    prev_archive: &[Solution<S>],
    curr_archive: &[Solution<S>],
    clustered: bool,
    rule: PredictionRule,
    cae: &CaeParams<S>,
    problem: &DynamicProblem<S>,
    rng: &mut R,
) -> Result<Option<Vec<DecisionVector<S>>>> {
    // Canonical ordering makes clustering independent of archive history.
    let mut prev: Vec<&Solution<S>> = prev_archive.iter().collect();
    let mut curr: Vec<&Solution<S>> = curr_archive.iter().collect();
    prev.sort_by(|a, b| a.decision.lex_cmp(&b.decision));
    curr.sort_by(|a, b| a.decision.lex_cmp(&b.decision));

    let (prev_groups, curr_groups) = if clustered {
        let prev_pts: Vec<_> = prev.iter().map(|sol| sol.decision.clone()).collect();
        let curr_pts: Vec<_> = curr.iter().map(|sol| sol.decision.clone()).collect();
        let pc = dbscan(&prev_pts, cae.epsilon, cae.eta);
        let cc = dbscan(&curr_pts, cae.epsilon, cae.eta);
        if pc.is_empty() || cc.is_empty() {
            return Ok(None);
        }
        (pc.clusters, cc.clusters)
    } else {
        (
            vec![(0..prev.len()).collect::<Vec<_>>()],
            vec![(0..curr.len()).collect::<Vec<_>>()],
        )
    };

    let prev_sols: Vec<Solution<S>> = prev.iter().map(|&sol| sol.clone()).collect();
    let curr_sols: Vec<Solution<S>> = curr.iter().map(|&sol| sol.clone()).collect();
    let prev_cents = centroids_of(&prev_groups, &prev_sols);
    let curr_cents = centroids_of(&curr_groups, &curr_sols);
    let matches = match_clusters(&prev_cents, &curr_cents);
    if matches.pairs.is_empty() {
        return Ok(None);
    }

    let bounds = problem.bounds();
    let mut predictions = Vec::new();
    for pair in &matches.pairs {
        let prev_members = &prev_groups[pair.prev];
        let curr_members = &curr_groups[pair.curr];
        match rule {
            PredictionRule::CentroidShift => {
                let shift: Vec<S> = curr_cents[pair.curr]
                    .decision_mean
                    .values()
                    .iter()
                    .zip(prev_cents[pair.prev].decision_mean.values())
                    .map(|(&c, &p)| c - p)
                    .collect();
                for &i in curr_members {
                    let moved: Vec<S> = curr_sols[i]
                        .decision
                        .values()
                        .iter()
                        .zip(&shift)
                        .map(|(&v, &dv)| v + dv)
                        .collect();
                    predictions.push(DecisionVector::new(moved));
                }
            }
            PredictionRule::FittedTransfer => {
                let prev_norm: Vec<Vec<S>> = prev_members
                    .iter()
                    .map(|&i| normalize(bounds, prev_sols[i].decision.values()))
                    .collect();
                let curr_norm: Vec<Vec<S>> = curr_members
                    .iter()
                    .map(|&i| normalize(bounds, curr_sols[i].decision.values()))
                    .collect();
                let shift: Vec<S> = normalize(
                    bounds,
                    curr_cents[pair.curr].decision_mean.values(),
                )
                .iter()
                .zip(normalize(
                    bounds,
                    prev_cents[pair.prev].decision_mean.values(),
                ))
                .map(|(&c, p)| c - p)
                .collect();
                // Align columns: each current point pairs with its nearest
                // centroid-translated older point, with replacement.
                let paired_prev: Vec<Vec<S>> = curr_norm
                    .iter()
                    .map(|c| {
                        prev_norm
                            .iter()
                            .min_by(|a, b| {
                                let da = translated_dist2(a, &shift, c);
                                let db = translated_dist2(b, &shift, c);
                                da.partial_cmp(&db).unwrap()
                            })
                            .unwrap()
                            .clone()
                    })
                    .collect();
                let model = fit_transfer(&paired_prev, &curr_norm, cae.lambda)?;
                for z in predict(&model, &curr_norm, rng) {
                    predictions.push(DecisionVector::new(denormalize(bounds, &z)));
                }
            }
        }
    }
    // Clusters of the newer archive without an older counterpart (a branch
    // that just reappeared, say) have no motion model; carry their points
    // forward unchanged so the branch is not dropped from the seed.
    for &j in &matches.unmatched_curr {
        for &i in &curr_groups[j] {
            predictions.push(curr_sols[i].decision.clone());
        }
    }
    Ok(Some(predictions))
}

fn translated_dist2<S: Scalar>(p: &[S], shift: &[S], c: &[S]) -> S {
    p.iter()
        .zip(shift)
        .zip(c)
        .map(|((&pv, &sv), &cv)| {
            let d = pv + sv - cv;
            d * d
        })
        .sum()
}

/// Which filler closes the gap when predictions undershoot `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FillRule {
    /// Polynomial-mutated copies of predictions, cycling through them.
    MutateThenRandom,
    /// Uniform random solutions only (fallback path).
    RandomOnly,
}

/// Clip, evaluate, and resize a prediction pool to exactly `n` members.
pub(crate) fn assemble_initpop<S: Scalar, R: Rng + ?Sized>(
    predictions: Vec<DecisionVector<S>>,
    n: usize,
    fill: FillRule,
    ga: &GaParams<S>,
    mode: &NichingMode<S>,
    problem: &DynamicProblem<S>,
    t_new: S,
    rng: &mut R,
) -> Result<Vec<Solution<S>>> {
    let bounds = problem.bounds();
    let mut pop: Vec<Solution<S>> = predictions
        .into_iter()
        .map(|p| {
            let mut v = p.into_inner();
            bounds.clip(&mut v);
            problem.solution(DecisionVector::new(v), t_new)
        })
        .collect::<Result<_>>()?;
    if pop.len() > n {
        return Ok(environmental_selection(pop, n, mode, 0));
    }
    let seeds: Vec<DecisionVector<S>> = pop.iter().map(|sol| sol.decision.clone()).collect();
    let mut next = 0usize;
    while pop.len() < n {
        let decision = match fill {
            FillRule::MutateThenRandom if !seeds.is_empty() => {
                let base = &seeds[next % seeds.len()];
                next += 1;
                polynomial_mutation(base, bounds, ga, rng)
            }
            _ => bounds.random_point(rng),
        };
        pop.push(problem.solution(decision, t_new)?);
    }
    Ok(pop)
}

/// Shared response engine: predict per the rule, then fill or truncate to a
/// size-`n` evaluated population at `t_new`. With zero matched pairs the
/// newer archive is copied and topped up with random solutions instead.
#[allow(clippy::too_many_arguments)]
pub(crate) fn transfer_response<S: Scalar, R: Rng + ?Sized>(
    pos_prev2: &[Solution<S>],
    pos_prev1: &[Solution<S>],
    n: usize,
    clustered: bool,
    rule: PredictionRule,
    cae: &CaeParams<S>,
    ga: &GaParams<S>,
    mode: &NichingMode<S>,
    problem: &DynamicProblem<S>,
    t_new: S,
    rng: &mut R,
) -> Result<Vec<Solution<S>>> {
    if pos_prev2.is_empty() || pos_prev1.is_empty() {
        return Err(Error::EmptyInput("archived Pareto set"));
    }
    match predict_population(pos_prev2, pos_prev1, clustered, rule, cae, problem, rng)? {
        Some(predictions) => assemble_initpop(
            predictions,
            n,
            FillRule::MutateThenRandom,
            ga,
            mode,
            problem,
            t_new,
            rng,
        ),
        None => {
            log::warn!(
                "{}: no matched cluster pairs at t = {t_new}; copying previous Pareto set",
                problem.id()
            );
            let copies: Vec<DecisionVector<S>> = pos_prev1
                .iter()
                .map(|sol| sol.decision.clone())
                .collect();
            assemble_initpop(
                copies,
                n,
                FillRule::RandomOnly,
                ga,
                mode,
                problem,
                t_new,
                rng,
            )
        }
    }
}

/// The full response: cluster both archives, match, fit one transfer model
/// per matched pair, and predict the next initial population.
#[allow(clippy::too_many_arguments)]
pub fn cae_generate_initpop<S: Scalar, R: Rng + ?Sized>(
    pos_prev2: &[Solution<S>],
    pos_prev1: &[Solution<S>],
    n: usize,
    cae: &CaeParams<S>,
    ga: &GaParams<S>,
    mode: &NichingMode<S>,
    problem: &DynamicProblem<S>,
    t_new: S,
    rng: &mut R,
) -> Result<Vec<Solution<S>>> {
    transfer_response(
        pos_prev2,
        pos_prev1,
        n,
        true,
        PredictionRule::FittedTransfer,
        cae,
        ga,
        mode,
        problem,
        t_new,
        rng,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dv(v: &[f64]) -> DecisionVector<f64> {
        DecisionVector::new(v.to_vec())
    }

    fn sol2(decision: &[f64]) -> Solution<f64> {
        Solution {
            decision: dv(decision),
            objectives: ObjectiveVector::new(vec![decision[0], 1.0 - decision[0]]),
            eval_time: 0.0,
        }
    }

    /// Oracle: adjacency graph by brute force, core flags, connected
    /// components of cores, then border attachment.
    fn dbscan_oracle(points: &[DecisionVector<f64>], eps: f64, eta: usize) -> Vec<Vec<usize>> {
        let n = points.len();
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && points[i].distance(&points[j]) <= eps)
                    .collect()
            })
            .collect();
        let core: Vec<bool> = adj.iter().map(|a| a.len() + 1 >= eta).collect();
        let mut comp = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if !core[i] || comp[i] != usize::MAX {
                continue;
            }
            let id = groups.len();
            groups.push(Vec::new());
            let mut stack = vec![i];
            comp[i] = id;
            while let Some(j) = stack.pop() {
                groups[id].push(j);
                for &k in &adj[j] {
                    if core[k] && comp[k] == usize::MAX {
                        comp[k] = id;
                        stack.push(k);
                    }
                }
            }
        }
        for i in 0..n {
            if core[i] {
                continue;
            }
            if let Some(&c) = adj[i].iter().find(|&&j| core[j]) {
                groups[comp[c]].push(i);
            }
        }
        for g in &mut groups {
            g.sort_unstable();
        }
        groups
    }

    #[test]
    fn dbscan_separates_two_groups() {
        let mut points = Vec::new();
        for i in 0..10 {
            points.push(dv(&[i as f64 * 0.01, 0.0]));
        }
        for i in 0..10 {
            points.push(dv(&[5.0 + i as f64 * 0.01, 0.0]));
        }
        let cs = dbscan(&points, 0.1, 3);
        assert_eq!(cs.clusters.len(), 2);
        assert!(cs.noise.is_empty());
        assert_eq!(cs.clusters, dbscan_oracle(&points, 0.1, 3));
    }

    #[test]
    fn dbscan_isolated_point_is_noise() {
        let points = vec![dv(&[0.0, 0.0]), dv(&[10.0, 10.0]), dv(&[10.05, 10.0])];
        let cs = dbscan(&points, 0.1, 2);
        assert_eq!(cs.noise, vec![0]);
        assert_eq!(cs.clusters, vec![vec![1, 2]]);
    }

    #[test]
    fn dbscan_coincident_points_form_one_cluster() {
        let points = vec![dv(&[1.0, 1.0]); 5];
        let cs = dbscan(&points, 0.5, 5);
        assert_eq!(cs.clusters.len(), 1);
        assert_eq!(cs.clusters[0].len(), 5);
    }

    #[test]
    fn dbscan_empty_input() {
        let cs = dbscan::<f64>(&[], 0.5, 3);
        assert!(cs.is_empty());
        assert!(cs.noise.is_empty());
    }

    #[test]
    fn centroid_examples() {
        let source = vec![sol2(&[0.0, 0.0]), sol2(&[1.0, 2.0])];
        let cs = ClusterSet {
            clusters: vec![vec![0, 1], vec![1]],
            noise: vec![],
            epsilon: 1.0,
            eta: 1,
        };
        let cents = compute_centroids(&cs, &source);
        assert_eq!(cents[0].decision_mean.values(), &[0.5, 1.0]);
        assert_eq!(cents[0].size, 2);
        // Singleton centroid equals the point itself.
        assert_eq!(cents[1].decision_mean, source[1].decision);
    }

    #[test]
    fn centroid_matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let source: Vec<_> = (0..5)
            .map(|_| sol2(&[rng.gen::<f64>(), rng.gen::<f64>()]))
            .collect();
        let cs = ClusterSet {
            clusters: vec![(0..5).collect()],
            noise: vec![],
            epsilon: 1.0,
            eta: 1,
        };
        let cent = &compute_centroids(&cs, &source)[0];
        for dim in 0..2 {
            let expected =
                source.iter().map(|s| s.decision[dim]).sum::<f64>() / 5.0;
            assert!((cent.decision_mean[dim] - expected).abs() < 1e-12);
        }
    }

    fn centroid_at(values: &[f64]) -> Centroid<f64> {
        Centroid {
            decision_mean: dv(values),
            objective_mean: ObjectiveVector::new(vec![0.0, 0.0]),
            size: 1,
        }
    }

    #[test]
    fn matching_examples() {
        let prev = vec![centroid_at(&[0.0, 0.0]), centroid_at(&[5.0, 5.0])];
        let curr = vec![centroid_at(&[0.1, 0.0]), centroid_at(&[5.0, 5.1])];
        let result = match_clusters(&prev, &curr);
        let pairs: Vec<(usize, usize)> =
            result.pairs.iter().map(|p| (p.prev, p.curr)).collect();
        assert!(pairs.contains(&(0, 0)) && pairs.contains(&(1, 1)));
        // Exhaustive oracle: the other pairing has larger total distance.
        let total: f64 = result.pairs.iter().map(|p| p.centroid_distance).sum();
        let swapped = prev[0].decision_mean.distance(&curr[1].decision_mean)
            + prev[1].decision_mean.distance(&curr[0].decision_mean);
        assert!(total < swapped);

        // One against one pairs regardless of distance.
        let single = match_clusters(&prev[..1], &curr[1..]);
        assert_eq!(single.pairs.len(), 1);

        // Injectivity: three against two leaves one unmatched.
        let three = vec![
            centroid_at(&[0.0, 0.0]),
            centroid_at(&[5.0, 5.0]),
            centroid_at(&[9.0, 9.0]),
        ];
        let result = match_clusters(&three, &curr);
        assert_eq!(result.pairs.len(), 2);
        assert_eq!(result.unmatched_prev.len(), 1);
        assert!(result.unmatched_curr.is_empty());
    }

    #[test]
    fn fit_transfer_identity_examples() {
        let prev: Vec<Vec<f64>> = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let curr: Vec<Vec<f64>> = vec![vec![2.0, 0.0], vec![0.0, 2.0]];
        let m = fit_transfer(&prev, &curr, 0.0).unwrap();
        assert!((m.matrix[0][0] - 2.0).abs() < 1e-12);
        assert!((m.matrix[1][1] - 2.0).abs() < 1e-12);
        assert!(m.matrix[0][1].abs() < 1e-12);
        assert!(m.mse < 1e-20);

        let ridged = fit_transfer(&prev, &curr, 1.0).unwrap();
        assert!((ridged.matrix[0][0] - 1.0).abs() < 1e-12);
        assert!((ridged.matrix[1][1] - 1.0).abs() < 1e-12);
        assert!((ridged.mse - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fit_transfer_recovers_random_linear_maps() {
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = 10;
            let cols = 50;
            let a: Vec<Vec<f64>> = (0..d)
                .map(|_| (0..d).map(|_| normal::<f64, _>(&mut rng)).collect())
                .collect();
            let prev: Vec<Vec<f64>> = (0..cols)
                .map(|_| (0..d).map(|_| normal::<f64, _>(&mut rng)).collect())
                .collect();
            let curr: Vec<Vec<f64>> = prev
                .iter()
                .map(|p| {
                    a.iter()
                        .map(|row| row.iter().zip(p).map(|(&m, &v)| m * v).sum())
                        .collect()
                })
                .collect();
            let model = fit_transfer(&prev, &curr, 1e-6).unwrap();
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..d {
                for j in 0..d {
                    num += (model.matrix[i][j] - a[i][j]).powi(2);
                    den += a[i][j].powi(2);
                }
            }
            let rel = (num / den).sqrt();
            assert!(rel < 1e-3, "seed {seed}: relative error {rel}");
        }
    }

    #[test]
    fn fit_transfer_singular_without_ridge() {
        let prev: Vec<Vec<f64>> = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let curr: Vec<Vec<f64>> = vec![vec![2.0, 2.0], vec![2.0, 2.0]];
        assert!(matches!(
            fit_transfer(&prev, &curr, 0.0),
            Err(Error::SingularSystem)
        ));
        // The same system is solvable with any positive ridge.
        assert!(fit_transfer(&prev, &curr, 1e-6).is_ok());
    }

    #[test]
    fn predict_is_exact_with_zero_mse() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let model = TransferModel {
            matrix: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            lambda: 0.0,
            mse: 0.0,
            perturbation_scale: 0.0,
        };
        let pts = vec![vec![0.3, -1.2], vec![0.9, 2.0]];
        assert_eq!(predict(&model, &pts, &mut rng), pts);
    }

    #[test]
    fn predict_noise_matches_perturbation_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let model = TransferModel {
            matrix: vec![vec![1.0]],
            lambda: 0.0,
            mse: 0.25,
            perturbation_scale: 0.5,
        };
        let pts: Vec<Vec<f64>> = (0..100_000).map(|_| vec![0.0]).collect();
        let out = predict(&model, &pts, &mut rng);
        let n = out.len() as f64;
        let mean = out.iter().map(|p| p[0]).sum::<f64>() / n;
        let var = out.iter().map(|p| (p[0] - mean).powi(2)).sum::<f64>() / n;
        let std = var.sqrt();
        assert!((std - 0.5).abs() / 0.5 < 0.02, "std = {std}");
    }

    fn line_cluster(y: f64, count: usize) -> Vec<Solution<f64>> {
        let problem = DynamicProblem::<f64>::dmmf1();
        (0..count)
            .map(|i| {
                let x1 = i as f64 / (count - 1) as f64;
                let y_val = y + 0.3 * (2.0 * std::f64::consts::PI * x1).sin();
                problem
                    .solution(dv(&[x1, y_val]), 0.0)
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn initpop_tracks_stationary_clusters() {
        let problem = DynamicProblem::<f64>::dmmf1();
        let cae = CaeParams::for_problem(&problem);
        let ga = GaParams::defaults(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut archive = line_cluster(0.5, 30);
        archive.extend(line_cluster(1.7, 30));
        let pop = cae_generate_initpop(
            &archive,
            &archive,
            60,
            &cae,
            &ga,
            &NichingMode::Off,
            &problem,
            0.2,
            &mut rng,
        )
        .unwrap();
        // Predicted points stay near the two original branch curves.
        for sol in &pop {
            let x1 = sol.decision[0];
            let wave = 0.3 * (2.0 * std::f64::consts::PI * x1).sin();
            let d_low = (sol.decision[1] - (0.5 + wave)).abs();
            let d_high = (sol.decision[1] - (1.7 + wave)).abs();
            assert!(d_low.min(d_high) < 0.2, "strayed to y = {}", sol.decision[1]);
        }
    }

    #[test]
    fn initpop_extrapolates_translating_clusters() {
        let problem = DynamicProblem::<f64>::dmmf1();
        let cae = CaeParams::for_problem(&problem);
        let ga = GaParams::defaults(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        // Two clusters drifting by +0.2 per step.
        let mut prev2 = line_cluster(0.5, 30);
        prev2.extend(line_cluster(1.9, 30));
        let mut prev1 = line_cluster(0.7, 30);
        prev1.extend(line_cluster(2.1, 30));
        let pop = cae_generate_initpop(
            &prev2, &prev1, 60, &cae, &ga, &NichingMode::Off, &problem, 0.4, &mut rng,
        )
        .unwrap();
        let (low, high): (Vec<f64>, Vec<f64>) = pop
            .iter()
            .map(|s| s.decision[1])
            .partition(|&y| y < 1.5);
        assert!(!low.is_empty() && !high.is_empty());
        let center = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        // Expected next centers one step beyond the newer archive.
        assert!((center(&low) - 0.9).abs() < 0.07, "low = {}", center(&low));
        assert!(
            (center(&high) - 2.3).abs() < 0.07,
            "high = {}",
            center(&high)
        );
    }

    #[test]
    fn initpop_fills_to_requested_size() {
        let problem = DynamicProblem::<f64>::dmmf1();
        let cae = CaeParams::for_problem(&problem);
        let ga = GaParams::defaults(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let archive = line_cluster(0.5, 10);
        let pop = cae_generate_initpop(
            &archive,
            &archive,
            100,
            &cae,
            &ga,
            &NichingMode::Off,
            &problem,
            0.2,
            &mut rng,
        )
        .unwrap();
        assert_eq!(pop.len(), 100);
        for sol in &pop {
            assert!(problem.bounds().check(&sol.decision).is_ok());
            assert_eq!(sol.eval_time, 0.2);
        }
    }

    #[test]
    fn initpop_falls_back_when_nothing_clusters() {
        let problem = DynamicProblem::<f64>::dmmf1();
        // eta larger than the archive: everything is noise.
        let cae = CaeParams {
            eta: 50,
            ..CaeParams::for_problem(&problem)
        };
        let ga = GaParams::defaults(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let archive = line_cluster(0.5, 10);
        let pop = cae_generate_initpop(
            &archive,
            &archive,
            40,
            &cae,
            &ga,
            &NichingMode::Off,
            &problem,
            0.2,
            &mut rng,
        )
        .unwrap();
        assert_eq!(pop.len(), 40);
    }

    #[test]
    fn initpop_rejects_empty_archives() {
        let problem = DynamicProblem::<f64>::dmmf1();
        let cae = CaeParams::for_problem(&problem);
        let ga = GaParams::defaults(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        assert!(cae_generate_initpop(
            &[],
            &line_cluster(0.5, 5),
            10,
            &cae,
            &ga,
            &NichingMode::Off,
            &problem,
            0.2,
            &mut rng,
        )
        .is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dbscan_output_partitions_input(seed in any::<u64>(), n in 0usize..40) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let points: Vec<_> = (0..n)
                .map(|_| dv(&[rng.gen::<f64>() * 4.0, rng.gen::<f64>() * 4.0]))
                .collect();
            let cs = dbscan(&points, 0.3, 3);
            let mut seen: Vec<usize> = cs.noise.clone();
            for c in &cs.clusters {
                prop_assert!(!c.is_empty());
                seen.extend(c);
            }
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
            prop_assert_eq!(cs.clusters, dbscan_oracle(&points, 0.3, 3));
        }

        #[test]
        fn matching_distances_are_monotone(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let prev: Vec<_> = (0..5)
                .map(|_| centroid_at(&[rng.gen::<f64>() * 5.0, rng.gen::<f64>() * 5.0]))
                .collect();
            let curr: Vec<_> = (0..4)
                .map(|_| centroid_at(&[rng.gen::<f64>() * 5.0, rng.gen::<f64>() * 5.0]))
                .collect();
            let result = match_clusters(&prev, &curr);
            prop_assert_eq!(result.pairs.len(), 4);
            for w in result.pairs.windows(2) {
                prop_assert!(w[1].centroid_distance >= w[0].centroid_distance);
            }
        }

        #[test]
        fn ridge_fit_never_fails_with_positive_lambda(
            seed in any::<u64>(),
            cols in 1usize..8,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // Degenerate on purpose: all columns identical.
            let point: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
            let prev = vec![point.clone(); cols];
            let curr = vec![point; cols];
            prop_assert!(fit_transfer(&prev, &curr, 1e-6).is_ok());
        }
    }
}
