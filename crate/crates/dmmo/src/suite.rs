//! The DMMF benchmark family: time-varying multiobjective problems whose
//! Pareto-optimal set splits into several equivalent branches in decision
//! space.
//!
//! Every instance follows the same template. A position variable `x1` (two of
//! them for the three-objective instance) traces the front, a distance
//! variable `y` must sit on one of several branch curves, and a scalar
//! penalty `g` measures the squared distance to the nearest branch:
//!
//! ```text
//! f1 = x1 * (1 + g)              f2 = (1 - x1^e(t)) * (1 + g)
//! g  = min_b (y - B_b(x1, t))^2
//! ```
//!
//! The time parameter `G(t) = sin(0.5*pi*t)` drives both the front exponent
//! `e(t)` and the branch curves `B_b`, so instances can hold either space
//! still while the other moves. The didactic instance `DMMF0` instead selects
//! its branch by the sign of `x1 - 0.5`, giving two disjoint solution paths
//! that split the front between them.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::types::{BoxBounds, DecisionVector, ObjectiveVector, Solution};
use crate::{s, Result, Scalar};

/// Which of the two spaces moves over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicClass {
    /// Static front, moving Pareto sets.
    TypeI,
    /// Moving front, static Pareto sets.
    TypeII,
    /// Both move.
    TypeIII,
}

impl DynamicClass {
    pub fn label(&self) -> &'static str {
        match self {
            DynamicClass::TypeI => "Type I",
            DynamicClass::TypeII => "Type II",
            DynamicClass::TypeIII => "Type III",
        }
    }
}

/// Front exponent rule: `f2 = 1 - x1^e(t)`.
#[derive(Debug, Clone, Copy)]
enum PofExponent<S> {
    Fixed(S),
    /// `e(t) = base + |G(t)|`, always positive and well-defined for
    /// `x1 in [0, 1]`.
    AbsShift(S),
}

impl<S: Scalar> PofExponent<S> {
    fn value(&self, g_t: S) -> S {
        match *self {
            PofExponent::Fixed(e) => e,
            PofExponent::AbsShift(base) => base + g_t.abs(),
        }
    }

    fn is_static(&self) -> bool {
        matches!(self, PofExponent::Fixed(_))
    }
}

/// Shape term of a branch curve, added on top of `offset + drift * G(t)`.
#[derive(Debug, Clone, Copy)]
enum BranchShape<S> {
    Flat,
    /// `amp * sin(freq * pi * x1)`
    Sine { amp: S, freq: S },
    /// `coeff * x1^2`
    Parabola { coeff: S },
    /// `coeff * G(t) * x1^2` — curvature flips sign with the time parameter.
    FlipParabola { coeff: S },
    /// `coeff * G(t) * (1 - (2*x1 - 1)^2)` — a bump whose sign tracks G(t).
    FlipBump { coeff: S },
}

impl<S: Scalar> BranchShape<S> {
    fn value(&self, x1: S, g_t: S) -> S {
        match *self {
            BranchShape::Flat => S::zero(),
            BranchShape::Sine { amp, freq } => {
                amp * (freq * s::<S>(PI) * x1).sin()
            }
            BranchShape::Parabola { coeff } => coeff * x1 * x1,
            BranchShape::FlipParabola { coeff } => coeff * g_t * x1 * x1,
            BranchShape::FlipBump { coeff } => {
                let c = s::<S>(2.0) * x1 - S::one();
                coeff * g_t * (S::one() - c * c)
            }
        }
    }

    fn uses_time(&self) -> bool {
        matches!(
            self,
            BranchShape::FlipParabola { .. } | BranchShape::FlipBump { .. }
        )
    }

    fn formula(&self) -> String {
        match self {
            BranchShape::Flat => String::new(),
            BranchShape::Sine { amp, freq } => format!(
                " + {}*sin({}*pi*x1)",
                amp.to_f64().unwrap(),
                freq.to_f64().unwrap()
            ),
            BranchShape::Parabola { coeff } => {
                format!(" + {}*x1^2", coeff.to_f64().unwrap())
            }
            BranchShape::FlipParabola { coeff } => {
                format!(" + {}*G(t)*x1^2", coeff.to_f64().unwrap())
            }
            BranchShape::FlipBump { coeff } => format!(
                " + {}*G(t)*(1 - (2*x1 - 1)^2)",
                coeff.to_f64().unwrap()
            ),
        }
    }
}

/// One branch curve `B(x1, t) = offset + drift * G(t) + shape(x1, t)`.
#[derive(Debug, Clone, Copy)]
struct Branch<S> {
    offset: S,
    drift: S,
    shape: BranchShape<S>,
}

impl<S: Scalar> Branch<S> {
    fn value(&self, x1: S, g_t: S) -> S {
        self.offset + self.drift * g_t + self.shape.value(x1, g_t)
    }

    fn uses_time(&self) -> bool {
        !self.drift.is_zero() || self.shape.uses_time()
    }

    fn formula(&self, idx: usize) -> String {
        let drift = self.drift.to_f64().unwrap();
        let drift_part = if drift == 0.0 {
            String::new()
        } else if drift == 1.0 {
            " + G(t)".to_string()
        } else {
            format!(" + {drift}*G(t)")
        };
        format!(
            "B_{idx} = {}{}{}",
            self.offset.to_f64().unwrap(),
            drift_part,
            self.shape.formula()
        )
    }
}

/// JSON-friendly catalog entry describing one instance.
#[derive(Debug, Clone, Serialize)]
pub struct ProblemDescriptor {
    pub id: String,
    pub objectives: usize,
    pub decision_dims: usize,
    pub position_dims: usize,
    pub distance_dims: usize,
    pub bounds: Vec<[f64; 2]>,
    pub class: String,
    pub pof_geometry: String,
    pub pos_geometry: String,
    pub branch_count: usize,
    pub scalable_branches: bool,
    pub coexisting_local_pos: bool,
    pub formula: String,
}

/// An evaluatable benchmark instance with analytic front/set samplers.
///
/// Instances are immutable after construction; `evaluate` and the samplers
/// are pure functions of their arguments.
#[derive(Debug, Clone)]
pub struct DynamicProblem<S> {
    id: String,
    class: DynamicClass,
    objectives: usize,
    position_dims: usize,
    distance_dims: usize,
    bounds: BoxBounds<S>,
    exponent: PofExponent<S>,
    branches: Vec<Branch<S>>,
    /// Locally optimal branch with a strictly positive penalty floor.
    local_branch: Option<(Branch<S>, S)>,
    /// Branch chosen by the `x1 < 0.5` region instead of by distance.
    region_branches: bool,
    pof_geometry: &'static str,
    pos_geometry: &'static str,
    scalable: bool,
}

/// `G(t) = sin(0.5 * pi * t)`.
pub fn time_parameter<S: Scalar>(t: S) -> S {
    (s::<S>(0.5) * s::<S>(PI) * t).sin()
}

fn linspace<S: Scalar>(lo: S, hi: S, n: usize) -> Vec<S> {
    if n == 1 {
        return vec![lo];
    }
    let span = hi - lo;
    let denom = s::<S>((n - 1) as f64);
    (0..n)
        .map(|i| lo + span * s::<S>(i as f64) / denom)
        .collect()
}

/// First `count` points of the smallest uniform lattice on the unit simplex
/// that holds at least `count` points, in a fixed enumeration order.
fn simplex_lattice<S: Scalar>(count: usize) -> Vec<[S; 3]> {
    let mut d = 1usize;
    while (d + 1) * (d + 2) / 2 < count {
        d += 1;
    }
    let denom = s::<S>(d as f64);
    let mut pts = Vec::with_capacity(count);
    'outer: for i in 0..=d {
        for j in 0..=(d - i) {
            let k = d - i - j;
            pts.push([
                s::<S>(i as f64) / denom,
                s::<S>(j as f64) / denom,
                s::<S>(k as f64) / denom,
            ]);
            if pts.len() == count {
                break 'outer;
            }
        }
    }
    pts
}

/// Split `count` across `k` branches, remainder to the first branches.
fn allocate(count: usize, k: usize) -> Vec<usize> {
    let base = count / k;
    let rem = count % k;
    (0..k).map(|b| base + usize::from(b < rem)).collect()
}

impl<S: Scalar> DynamicProblem<S> {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn class(&self) -> DynamicClass {
        self.class
    }

    pub fn objectives(&self) -> usize {
        self.objectives
    }

    pub fn decision_dims(&self) -> usize {
        self.position_dims + self.distance_dims
    }

    pub fn position_dims(&self) -> usize {
        self.position_dims
    }

    pub fn bounds(&self) -> &BoxBounds<S> {
        &self.bounds
    }

    /// Number of equivalent global Pareto sets at time `t`.
    pub fn pos_count(&self, _t: S) -> usize {
        self.branches.len()
    }

    pub fn has_local_pos(&self) -> bool {
        self.local_branch.is_some()
    }

    fn exponent_at(&self, g_t: S) -> S {
        self.exponent.value(g_t)
    }

    fn distance_penalty(&self, x1: S, y: S, g_t: S) -> S {
        let dist2 = |b: &Branch<S>| {
            let d = y - b.value(x1, g_t);
            d * d
        };
        let mut g = if self.region_branches {
            let idx = usize::from(x1 >= s::<S>(0.5));
            dist2(&self.branches[idx])
        } else {
            self.branches
                .iter()
                .map(dist2)
                .fold(S::infinity(), |acc, v| acc.min(v))
        };
        if let Some((branch, floor)) = &self.local_branch {
            g = g.min(*floor + dist2(branch));
        }
        g
    }

    /// Objective values at decision point `x` and time `t`. Deterministic in
    /// `(x, t)`; rejects out-of-bounds points.
    pub fn evaluate(&self, x: &DecisionVector<S>, t: S) -> Result<ObjectiveVector<S>> {
        self.bounds.check(x)?;
        let g_t = time_parameter(t);
        let e = self.exponent_at(g_t);
        let x1 = x[0];
        let y = x[self.position_dims];
        let g = self.distance_penalty(x1, y, g_t);
        let scale = S::one() + g;
        let values = match self.objectives {
            2 => vec![x1 * scale, (S::one() - x1.powf(e)) * scale],
            3 => {
                let (v1, v2) = (x[0], x[1]);
                let w = [v1 * v2, v1 * (S::one() - v2), S::one() - v1];
                w.iter().map(|&wj| wj.powf(e) * scale).collect()
            }
            m => unreachable!("objective count {m} rejected at construction"),
        };
        Ok(ObjectiveVector::new(values))
    }

    /// Evaluate and wrap into a [`Solution`].
    pub fn solution(&self, decision: DecisionVector<S>, t: S) -> Result<Solution<S>> {
        let objectives = self.evaluate(&decision, t)?;
        Ok(Solution {
            decision,
            objectives,
            eval_time: t,
        })
    }

    /// `n` uniform random in-bounds solutions evaluated at `t`.
    pub fn random_population<R: Rng + ?Sized>(
        &self,
        n: usize,
        t: S,
        rng: &mut R,
    ) -> Result<Vec<Solution<S>>> {
        (0..n)
            .map(|_| self.solution(self.bounds.random_point(rng), t))
            .collect()
    }

    /// `count` points on the analytic front at time `t`, uniformly spaced in
    /// the first objective (on a simplex lattice for three objectives).
    pub fn sample_true_pof(&self, t: S, count: usize) -> Vec<ObjectiveVector<S>> {
        assert!(count >= 2, "need at least the two extreme points");
        let g_t = time_parameter(t);
        let e = self.exponent_at(g_t);
        match self.objectives {
            2 => linspace(S::zero(), S::one(), count)
                .into_iter()
                .map(|u| ObjectiveVector::new(vec![u, S::one() - u.powf(e)]))
                .collect(),
            3 => simplex_lattice::<S>(count)
                .into_iter()
                .map(|w| ObjectiveVector::new(w.iter().map(|&wj| wj.powf(e)).collect()))
                .collect(),
            m => unreachable!("objective count {m} rejected at construction"),
        }
    }

    /// `count` points spread across all global branches at time `t`,
    /// allocated near-equally per branch.
    pub fn sample_true_pos(&self, t: S, count: usize) -> Vec<DecisionVector<S>> {
        let k = self.branches.len();
        assert!(count >= k, "need at least one point per branch");
        let g_t = time_parameter(t);
        let mut out = Vec::with_capacity(count);
        for (b, (branch, n)) in self.branches.iter().zip(allocate(count, k)).enumerate() {
            if self.objectives == 3 {
                for w in simplex_lattice::<S>(n) {
                    let v1 = w[0] + w[1];
                    let v2 = if v1 > S::zero() { w[0] / v1 } else { S::zero() };
                    out.push(DecisionVector::new(vec![v1, v2, branch.value(v1, g_t)]));
                }
            } else {
                let xs = if self.region_branches {
                    // Half-open left region, closed right region.
                    if b == 0 {
                        let half = s::<S>(0.5);
                        (0..n)
                            .map(|i| half * s::<S>(i as f64) / s::<S>(n as f64))
                            .collect()
                    } else {
                        linspace(s::<S>(0.5), S::one(), n)
                    }
                } else {
                    linspace(S::zero(), S::one(), n)
                };
                for x1 in xs {
                    out.push(DecisionVector::new(vec![x1, branch.value(x1, g_t)]));
                }
            }
        }
        out
    }

    /// Points of a single branch's Pareto set, for branch-level checks.
    pub fn sample_branch_pos(&self, branch: usize, t: S, count: usize) -> Vec<DecisionVector<S>> {
        assert!(branch < self.branches.len());
        let g_t = time_parameter(t);
        let br = &self.branches[branch];
        if self.objectives == 3 {
            simplex_lattice::<S>(count)
                .into_iter()
                .map(|w| {
                    let v1 = w[0] + w[1];
                    let v2 = if v1 > S::zero() { w[0] / v1 } else { S::zero() };
                    DecisionVector::new(vec![v1, v2, br.value(v1, g_t)])
                })
                .collect()
        } else if self.region_branches {
            let span = if branch == 0 {
                let half = s::<S>(0.5);
                return (0..count)
                    .map(|i| {
                        let x1 = half * s::<S>(i as f64) / s::<S>(count as f64);
                        DecisionVector::new(vec![x1, br.value(x1, g_t)])
                    })
                    .collect();
            } else {
                (s::<S>(0.5), S::one())
            };
            linspace(span.0, span.1, count)
                .into_iter()
                .map(|x1| DecisionVector::new(vec![x1, br.value(x1, g_t)]))
                .collect()
        } else {
            linspace(S::zero(), S::one(), count)
                .into_iter()
                .map(|x1| DecisionVector::new(vec![x1, br.value(x1, g_t)]))
                .collect()
        }
    }

    pub fn descriptor(&self) -> ProblemDescriptor {
        let exponent = match self.exponent {
            PofExponent::Fixed(e) => format!("{}", e.to_f64().unwrap()),
            PofExponent::AbsShift(b) => format!("({} + |G(t)|)", b.to_f64().unwrap()),
        };
        let branches = self
            .branches
            .iter()
            .enumerate()
            .map(|(i, b)| b.formula(i))
            .collect::<Vec<_>>()
            .join("; ");
        let g_term = if self.region_branches {
            "g = (y - B_0)^2 if x1 < 0.5 else (y - B_1)^2".to_string()
        } else {
            "g = min_b (y - B_b)^2".to_string()
        };
        let local = match &self.local_branch {
            Some((b, floor)) => format!(
                "; local branch {} with penalty floor {}",
                b.formula(9),
                floor.to_f64().unwrap()
            ),
            None => String::new(),
        };
        let head = if self.objectives == 2 {
            format!("f1 = x1*(1 + g); f2 = (1 - x1^{exponent})*(1 + g)")
        } else {
            format!(
                "w = (v1*v2, v1*(1 - v2), 1 - v1); f_j = w_j^{exponent}*(1 + g); x1 := v1"
            )
        };
        ProblemDescriptor {
            id: self.id.clone(),
            objectives: self.objectives,
            decision_dims: self.decision_dims(),
            position_dims: self.position_dims,
            distance_dims: self.distance_dims,
            bounds: self
                .bounds
                .as_slice()
                .iter()
                .map(|&(lo, hi)| [lo.to_f64().unwrap(), hi.to_f64().unwrap()])
                .collect(),
            class: self.class.label().to_string(),
            pof_geometry: self.pof_geometry.to_string(),
            pos_geometry: self.pos_geometry.to_string(),
            branch_count: self.branches.len(),
            scalable_branches: self.scalable,
            coexisting_local_pos: self.local_branch.is_some(),
            formula: format!("{head}; {g_term}; {branches}{local}; G(t) = sin(0.5*pi*t)"),
        }
    }

    /// True when neither sampler output depends on `t` in the given space.
    pub fn pof_is_static(&self) -> bool {
        self.exponent.is_static()
    }

    pub fn pos_is_static(&self) -> bool {
        self.branches.iter().all(|b| !b.uses_time())
    }
}

fn two_dim_bounds<S: Scalar>() -> BoxBounds<S> {
    BoxBounds::new(vec![(S::zero(), S::one()), (s(-2.0), s(3.0))])
}

fn offset_branches<S: Scalar>(k: usize, base: f64, drift: f64, shape: BranchShape<S>) -> Vec<Branch<S>> {
    (0..k)
        .map(|b| Branch {
            offset: s(base + b as f64),
            drift: s(drift),
            shape,
        })
        .collect()
}

impl<S: Scalar> DynamicProblem<S> {
    /// The didactic two-path instance: branch selected by the `x1` region, so
    /// the two solution paths split the front between them.
    pub fn dmmf0() -> Self {
        Self {
            id: "DMMF0".into(),
            class: DynamicClass::TypeIII,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: two_dim_bounds(),
            exponent: PofExponent::AbsShift(S::one()),
            branches: offset_branches(2, 0.0, 1.0, BranchShape::Flat),
            local_branch: None,
            region_branches: true,
            pof_geometry: "linear-concavity",
            pos_geometry: "two offset linear paths",
            scalable: false,
        }
    }

    pub fn dmmf1() -> Self {
        Self {
            id: "DMMF1".into(),
            class: DynamicClass::TypeI,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: two_dim_bounds(),
            exponent: PofExponent::Fixed(s(2.0)),
            branches: offset_branches(2, 0.0, 1.0, BranchShape::Flat),
            local_branch: None,
            region_branches: false,
            pof_geometry: "concave",
            pos_geometry: "linear",
            scalable: false,
        }
    }

    pub fn dmmf2() -> Self {
        Self {
            id: "DMMF2".into(),
            class: DynamicClass::TypeIII,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: two_dim_bounds(),
            exponent: PofExponent::AbsShift(s(0.75)),
            branches: offset_branches(2, -0.5, 0.0, BranchShape::FlipParabola { coeff: S::one() }),
            local_branch: None,
            region_branches: false,
            pof_geometry: "convexity-concavity",
            pos_geometry: "convexity-concavity",
            scalable: false,
        }
    }

    pub fn dmmf3() -> Self {
        Self {
            id: "DMMF3".into(),
            class: DynamicClass::TypeIII,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: two_dim_bounds(),
            exponent: PofExponent::AbsShift(s(0.75)),
            branches: offset_branches(2, -0.25, 0.5, BranchShape::Parabola { coeff: s(-0.5) }),
            local_branch: None,
            region_branches: false,
            pof_geometry: "convexity-concavity",
            pos_geometry: "concave",
            scalable: false,
        }
    }

    /// Mixed Pareto-set dynamics: one branch never moves, the other follows
    /// the time parameter.
    pub fn dmmf4() -> Self {
        Self {
            id: "DMMF4".into(),
            class: DynamicClass::TypeIII,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: two_dim_bounds(),
            exponent: PofExponent::AbsShift(s(0.75)),
            branches: vec![
                Branch {
                    offset: s(-1.5),
                    drift: S::zero(),
                    shape: BranchShape::Flat,
                },
                Branch {
                    offset: s(0.5),
                    drift: S::one(),
                    shape: BranchShape::Flat,
                },
            ],
            local_branch: None,
            region_branches: false,
            pof_geometry: "convexity-concavity",
            pos_geometry: "static-dynamic",
            scalable: false,
        }
    }

    pub fn dmmf5() -> Self {
        Self {
            id: "DMMF5".into(),
            class: DynamicClass::TypeII,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: two_dim_bounds(),
            exponent: PofExponent::AbsShift(s(0.75)),
            branches: offset_branches(
                2,
                -0.5,
                0.0,
                BranchShape::Sine {
                    amp: s(0.3),
                    freq: s(2.0),
                },
            ),
            local_branch: None,
            region_branches: false,
            pof_geometry: "convexity-concavity",
            pos_geometry: "sine wave",
            scalable: false,
        }
    }

    pub fn dmmf6() -> Self {
        Self {
            id: "DMMF6".into(),
            class: DynamicClass::TypeIII,
            objectives: 3,
            position_dims: 2,
            distance_dims: 1,
            bounds: BoxBounds::new(vec![
                (S::zero(), S::one()),
                (S::zero(), S::one()),
                (s(-2.0), s(3.0)),
            ]),
            exponent: PofExponent::AbsShift(s(0.75)),
            branches: offset_branches(2, -0.5, 0.0, BranchShape::FlipBump { coeff: s(0.5) }),
            local_branch: None,
            region_branches: false,
            pof_geometry: "convexity-concavity",
            pos_geometry: "convexity-concavity",
            scalable: false,
        }
    }

    pub fn dmmf7() -> Self {
        Self::dmmf7_with_branches(2)
    }

    /// The scalable instance: `k` equivalent sine-wave branches offset by
    /// integer steps. The distance-variable upper bound widens with `k` so
    /// every branch stays interior.
    pub fn dmmf7_with_branches(k: usize) -> Self {
        assert!(k >= 1, "at least one branch");
        let hi = 3.0f64.max(k as f64 + 0.5);
        Self {
            id: "DMMF7".into(),
            class: DynamicClass::TypeI,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: BoxBounds::new(vec![(S::zero(), S::one()), (s(-2.0), s(hi))]),
            exponent: PofExponent::Fixed(s(2.0)),
            branches: offset_branches(
                k,
                0.0,
                1.0,
                BranchShape::Sine {
                    amp: s(0.3),
                    freq: s(2.0),
                },
            ),
            local_branch: None,
            region_branches: false,
            pof_geometry: "concave",
            pos_geometry: "sine wave",
            scalable: true,
        }
    }

    pub fn dmmf8() -> Self {
        Self {
            id: "DMMF8".into(),
            class: DynamicClass::TypeIII,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: two_dim_bounds(),
            exponent: PofExponent::AbsShift(s(0.75)),
            branches: vec![
                Branch {
                    offset: s(-1.0),
                    drift: s(0.5),
                    shape: BranchShape::Flat,
                },
                Branch {
                    offset: S::zero(),
                    drift: s(0.5),
                    shape: BranchShape::Parabola { coeff: s(0.5) },
                },
            ],
            local_branch: None,
            region_branches: false,
            pof_geometry: "convexity-concavity",
            pos_geometry: "linear-convex",
            scalable: false,
        }
    }

    /// Two equivalent global branches plus one locally optimal branch whose
    /// penalty never reaches zero, so it attracts but never joins the front.
    pub fn dmmf9() -> Self {
        Self {
            id: "DMMF9".into(),
            class: DynamicClass::TypeIII,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: two_dim_bounds(),
            exponent: PofExponent::AbsShift(s(1.5)),
            branches: offset_branches(2, -0.5, 0.0, BranchShape::FlipParabola { coeff: S::one() }),
            local_branch: Some((
                Branch {
                    offset: s(1.75),
                    drift: S::zero(),
                    shape: BranchShape::FlipParabola { coeff: S::one() },
                },
                s(0.1),
            )),
            region_branches: false,
            pof_geometry: "concave",
            pos_geometry: "convexity-concavity",
            scalable: false,
        }
    }

    pub fn dmmf10() -> Self {
        Self {
            id: "DMMF10".into(),
            class: DynamicClass::TypeIII,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: two_dim_bounds(),
            exponent: PofExponent::AbsShift(s(0.75)),
            branches: offset_branches(
                2,
                -0.5,
                1.0,
                BranchShape::Sine {
                    amp: s(0.4),
                    freq: s(2.0),
                },
            ),
            local_branch: None,
            region_branches: false,
            pof_geometry: "convexity-concavity",
            pos_geometry: "sine wave",
            scalable: false,
        }
    }

    pub fn dmmf11() -> Self {
        Self {
            id: "DMMF11".into(),
            class: DynamicClass::TypeI,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: two_dim_bounds(),
            exponent: PofExponent::Fixed(s(0.5)),
            branches: offset_branches(
                2,
                -0.5,
                1.0,
                BranchShape::Sine {
                    amp: s(0.25),
                    freq: s(4.0),
                },
            ),
            local_branch: None,
            region_branches: false,
            pof_geometry: "convex",
            pos_geometry: "sine wave",
            scalable: false,
        }
    }

    pub fn dmmf12() -> Self {
        Self {
            id: "DMMF12".into(),
            class: DynamicClass::TypeIII,
            objectives: 2,
            position_dims: 1,
            distance_dims: 1,
            bounds: two_dim_bounds(),
            exponent: PofExponent::AbsShift(S::one()),
            branches: offset_branches(
                2,
                -0.5,
                0.5,
                BranchShape::Sine {
                    amp: s(0.3),
                    freq: s(3.0),
                },
            ),
            local_branch: None,
            region_branches: false,
            pof_geometry: "linear-concavity",
            pos_geometry: "sine wave",
            scalable: false,
        }
    }

    /// Look up an instance by id. `DMMF1`..`DMMF12` are the catalog;
    /// `DMMF0` is the didactic two-path instance.
    pub fn by_id(id: &str) -> Option<Self> {
        match id {
            "DMMF0" => Some(Self::dmmf0()),
            "DMMF1" => Some(Self::dmmf1()),
            "DMMF2" => Some(Self::dmmf2()),
            "DMMF3" => Some(Self::dmmf3()),
            "DMMF4" => Some(Self::dmmf4()),
            "DMMF5" => Some(Self::dmmf5()),
            "DMMF6" => Some(Self::dmmf6()),
            "DMMF7" => Some(Self::dmmf7()),
            "DMMF8" => Some(Self::dmmf8()),
            "DMMF9" => Some(Self::dmmf9()),
            "DMMF10" => Some(Self::dmmf10()),
            "DMMF11" => Some(Self::dmmf11()),
            "DMMF12" => Some(Self::dmmf12()),
            _ => None,
        }
    }
}

/// The twelve catalog instances in order.
pub fn list_problems<S: Scalar>() -> Vec<DynamicProblem<S>> {
    (1..=12)
        .map(|i| DynamicProblem::by_id(&format!("DMMF{i}")).unwrap())
        .collect()
}
