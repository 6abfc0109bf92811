//! Construction of a box-union body whose log projection vector is `λ·v`,
//! for `v` satisfying every nontrivial generator strictly.
//!
//! Subsets are processed from the largest down. At step `S` the running
//! volume targets `x` are halved on the proper subsets of `S`, a box in
//! `Span(S)` is sized by a log-space linear program so that its volume is
//! exactly `x_S` while none of its projections exceeds the halved targets,
//! and its projection volumes are subtracted from the targets. The boxes are
//! finally laid out with pairwise disjoint projections.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::boxgeom::{disjoint_offset, log_projection_vector, AxisBox, BoxUnionBody};
use crate::cone::{membership, ConeSystem};
use crate::error::{Error, Result};
use crate::precise::{self, Real};
use crate::rational::{format_rational, int, Rational};
use crate::simplex::{LinearProgram, LpOutcome, Relation};
use crate::subset::SubsetMask;
use crate::vector::ProjectionVector;

/// Largest accepted `|log|T_A| - λ·v_A|` after construction.
pub const LOG_TOLERANCE: f64 = 1e-6;

/// Bits of the log-space targets handed to the exact LP.
const TARGET_BITS: usize = 128;

/// Significant bits kept for box side lengths (relative error below 1e-18).
const SIDE_BITS: usize = 64;

/// Adds `epsilon` to every coordinate. A nontrivial cover with `l` parts and
/// multiplicity `k < l` gains `(l - k)·epsilon` of slack, so the result is
/// strictly inside whenever `v` is inside.
pub fn interior_shift(
    sys: &ConeSystem,
    v: &ProjectionVector,
    epsilon: &Rational,
) -> Result<ProjectionVector> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let report = membership(sys, v)?;
    if !report.inside {
        return Err(Error::NotInCone {
            violated: report.violated.len(),
        });
    }
    Ok(v.shifted(epsilon))
}

/// One step of the construction: log-space targets `η_Y = log y_Y` and the
/// minimal solution `ζ_Y = log z_Y` for every nonempty `Y ⊆ ground`.
#[derive(Clone, Debug)]
pub struct BoxSystem {
    ground: SubsetMask,
    log_targets: BTreeMap<SubsetMask, Rational>,
    log_solution: BTreeMap<SubsetMask, Rational>,
}

impl BoxSystem {
    pub fn ground(&self) -> SubsetMask {
        self.ground
    }

    pub fn log_targets(&self) -> &BTreeMap<SubsetMask, Rational> {
        &self.log_targets
    }

    pub fn log_solution(&self) -> &BTreeMap<SubsetMask, Rational> {
        &self.log_solution
    }

    /// Log side length of the box along element `i ∈ ground`.
    pub fn log_side(&self, element: usize) -> &Rational {
        &self.log_solution[&SubsetMask::singleton(element)]
    }
}

/// Solves, in log space,
///
/// * `z_ground = y_ground`,
/// * `0 < z_Y ≤ y_Y` for every proper `Y`,
/// * `z_Y ≤ ∏_{i∈Y} z_i`,
/// * `y_ground^k ≤ ∏ z_{Y_j}` for every nontrivial irreducible cover of the
///   ground,
///
/// minimizing `Σ log z_Y`. Among minimizers the one maximizing the smallest
/// slack `log y_Y - log z_Y` is returned, which makes the choice canonical.
/// A minimal solution is induced by a box: `z_Y = ∏_{i∈Y} z_i` for all `Y`,
/// which is checked exactly.
pub fn solve_box_system(
    sys: &ConeSystem,
    ground: SubsetMask,
    log_targets: &BTreeMap<SubsetMask, Rational>,
) -> Result<BoxSystem> {
    if ground.is_empty() || !ground.fits(sys.n()) {
        return Err(Error::InvalidArgument(format!(
            "ground {{{ground}}} is not a nonempty subset of [{}]",
            sys.n()
        )));
    }
    let subsets = ground.nonempty_subsets();
    for y in &subsets {
        if !log_targets.contains_key(y) {
            return Err(Error::InvalidArgument(format!(
                "missing target for {{{y}}}"
            )));
        }
    }
    let eta = |y: SubsetMask| &log_targets[&y];
    let proper: Vec<SubsetMask> = subsets.iter().copied().filter(|&y| y != ground).collect();
    let var: BTreeMap<SubsetMask, usize> =
        proper.iter().enumerate().map(|(j, &y)| (y, j)).collect();
    let nvars = proper.len();
    let sum_eta = |y: SubsetMask| {
        y.elements()
            .map(|i| eta(SubsetMask::singleton(i)).clone())
            .fold(Rational::zero(), |a, b| a + b)
    };

    // Variables are the slacks σ_Y = η_Y - ζ_Y ≥ 0 of the upper bounds.
    let mut lp = LinearProgram::new(nvars);
    for &y in subsets.iter().filter(|y| y.len() >= 2) {
        let mut terms: Vec<(usize, Rational)> = y
            .elements()
            .map(|i| (var[&SubsetMask::singleton(i)], Rational::one()))
            .collect();
        if y != ground {
            terms.push((var[&y], -Rational::one()));
        }
        lp.add_sparse_row(&terms, Relation::Le, sum_eta(y) - eta(y));
    }
    for g in sys.generators_for(ground) {
        let cover = g.cover();
        let terms: Vec<(usize, Rational)> = cover
            .parts()
            .iter()
            .map(|p| (var[p], Rational::one()))
            .collect();
        let rhs = cover
            .parts()
            .iter()
            .map(|&p| eta(p).clone())
            .fold(Rational::zero(), |a, b| a + b)
            - eta(ground) * int(cover.k().into());
        lp.add_sparse_row(&terms, Relation::Le, rhs);
    }

    let sigma = if nvars == 0 {
        Vec::new()
    } else {
        lp.maximize(vec![Rational::one(); nvars]);
        let best = match lp.solve()? {
            LpOutcome::Optimal { value, .. } => value,
            LpOutcome::Infeasible { .. } => {
                return Err(Error::Infeasible {
                    ground,
                    reason: "targets violate a cover inequality of the step system".into(),
                })
            }
            LpOutcome::Unbounded => unreachable!("slacks are bounded by the cover rows"),
        };

        // Second stage: stay on the optimal face, maximize the least slack.
        let mut balanced = LinearProgram::new(nvars + 1);
        for row in lp.rows() {
            let mut coeffs = row.coeffs.clone();
            coeffs.push(Rational::zero());
            balanced.add_row(coeffs, row.relation, row.rhs.clone());
        }
        let mut face = vec![Rational::one(); nvars];
        face.push(Rational::zero());
        balanced.add_row(face, Relation::Ge, best);
        for j in 0..nvars {
            balanced.add_sparse_row(
                &[(nvars, Rational::one()), (j, -Rational::one())],
                Relation::Le,
                Rational::zero(),
            );
        }
        let mut objective = vec![Rational::zero(); nvars + 1];
        objective[nvars] = Rational::one();
        balanced.maximize(objective);
        match balanced.solve()? {
            LpOutcome::Optimal { mut x, .. } => {
                x.truncate(nvars);
                x
            }
            other => unreachable!("optimal face is nonempty and bounded: {other:?}"),
        }
    };

    let mut log_solution = BTreeMap::new();
    log_solution.insert(ground, eta(ground).clone());
    for (&y, &j) in &var {
        log_solution.insert(y, eta(y) - &sigma[j]);
    }
    for &y in &subsets {
        let product: Rational = y
            .elements()
            .map(|i| log_solution[&SubsetMask::singleton(i)].clone())
            .fold(Rational::zero(), |a, b| a + b);
        if product != log_solution[&y] {
            return Err(Error::VerificationFailed {
                subset: y,
                detail: format!(
                    "minimal solution is not induced by a box: log z = {}, sum of log sides = {}",
                    log_solution[&y], product
                ),
            });
        }
    }
    Ok(BoxSystem {
        ground,
        log_targets: log_targets.clone(),
        log_solution,
    })
}

#[derive(Clone, Debug)]
pub struct RealizationResult {
    pub lambda: Rational,
    /// The vector that was scaled; differs from the input when an interior
    /// shift was applied.
    pub vector: ProjectionVector,
    pub shifted: bool,
    pub body: BoxUnionBody,
    pub steps: Vec<BoxSystem>,
    /// `|log|T_A| - λ·v_A|` per subset, in canonical order.
    pub gaps: Vec<(SubsetMask, f64)>,
}

impl RealizationResult {
    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().map(|(_, g)| *g).fold(0.0, f64::max)
    }

    pub fn report(&self) -> RealizationReport {
        RealizationReport {
            lambda: format_rational(&self.lambda),
            shifted: self.shifted,
            max_gap: self.max_gap(),
            gaps: self
                .gaps
                .iter()
                .map(|(m, g)| GapEntry {
                    subset: m.to_string(),
                    gap: *g,
                })
                .collect(),
            steps: self
                .steps
                .iter()
                .map(|s| StepEntry {
                    ground: s.ground.to_string(),
                    log_z: s
                        .log_solution
                        .iter()
                        .map(|(m, z)| {
                            (
                                m.to_string(),
                                precise::to_decimal(&precise::from_rational(z), 30),
                            )
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizationReport {
    pub lambda: String,
    pub shifted: bool,
    pub max_gap: f64,
    pub gaps: Vec<GapEntry>,
    pub steps: Vec<StepEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapEntry {
    pub subset: String,
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepEntry {
    pub ground: String,
    pub log_z: Vec<(String, String)>,
}

fn ln2() -> Real {
    precise::ln(&precise::real_from_int(2))
}

/// Builds a body with `log|T_A| = λ·v_A` (within [`LOG_TOLERANCE`]).
pub fn realize_vector(
    sys: &ConeSystem,
    v: &ProjectionVector,
    lambda: &Rational,
) -> Result<RealizationResult> {
    if !lambda.is_positive() {
        return Err(Error::InvalidArgument("lambda must be positive".into()));
    }
    if !sys.is_strictly_inside(v)? {
        return Err(Error::NotStrict);
    }
    let n = v.n();
    let mut targets: Vec<Real> = (1..(1u32 << n))
        .map(|bits| precise::exp_rational(&(v.get(SubsetMask::from_bits(bits)) * lambda)))
        .collect();
    let target = |targets: &Vec<Real>, m: SubsetMask| targets[m.bits() as usize - 1].clone();
    let half = ln2();

    let mut order = SubsetMask::full(n).nonempty_subsets();
    order.reverse();
    let mut boxes = Vec::with_capacity(order.len());
    let mut steps = Vec::with_capacity(order.len());
    for &ground in &order {
        let mut log_targets = BTreeMap::new();
        for y in ground.nonempty_subsets() {
            let x = target(&targets, y);
            if !precise::is_positive(&x) {
                return Err(Error::Infeasible {
                    ground,
                    reason: format!("running target for {{{y}}} is no longer positive"),
                });
            }
            let mut eta = precise::ln(&x);
            if y != ground {
                eta -= &half;
            }
            log_targets.insert(y, precise::round_to_dyadic(&eta, TARGET_BITS));
        }
        let step = solve_box_system(sys, ground, &log_targets)?;

        let mut sides = vec![Rational::zero(); n];
        for i in ground.elements() {
            sides[i - 1] =
                precise::round_to_dyadic(&precise::exp_rational(step.log_side(i)), SIDE_BITS);
        }
        let cell = AxisBox::in_span(n, ground, &vec![Rational::zero(); n], &sides)?;
        for y in ground.nonempty_subsets() {
            let idx = y.bits() as usize - 1;
            targets[idx] = &targets[idx] - precise::from_rational(&cell.projection_volume(y));
        }
        boxes.push(cell);
        steps.push(step);
    }

    let body = disjoint_offset(boxes)?;
    let logs = log_projection_vector(&body);
    let mut gaps = Vec::with_capacity(order.len());
    for a in SubsetMask::full(n).nonempty_subsets() {
        let Some(achieved) = logs.log(a) else {
            return Err(Error::VerificationFailed {
                subset: a,
                detail: "projection has zero volume".into(),
            });
        };
        let wanted = precise::from_rational(&(v.get(a) * lambda));
        let gap = precise::to_f64(&precise::abs(&(achieved - &wanted)));
        if !(gap <= LOG_TOLERANCE) {
            return Err(Error::VerificationFailed {
                subset: a,
                detail: format!("log gap {gap:e} exceeds {LOG_TOLERANCE:e}"),
            });
        }
        gaps.push((a, gap));
    }
    Ok(RealizationResult {
        lambda: lambda.clone(),
        vector: v.clone(),
        shifted: false,
        body,
        steps,
        gaps,
    })
}

/// Tries `λ = 1, 2, 4, ..` up to `lambda_cap`, shifting `v` into the
/// interior by `epsilon` first when some generator is tight.
pub fn find_lambda(
    sys: &ConeSystem,
    v: &ProjectionVector,
    epsilon: &Rational,
    lambda_cap: &Rational,
) -> Result<RealizationResult> {
    let report = membership(sys, v)?;
    if !report.inside {
        return Err(Error::NotInCone {
            violated: report.violated.len(),
        });
    }
    let (w, shifted) = if sys.is_strictly_inside(v)? {
        (v.clone(), false)
    } else {
        (interior_shift(sys, v, epsilon)?, true)
    };
    let mut lambda = Rational::one();
    let mut last = String::from("no attempt made");
    while &lambda <= lambda_cap {
        match realize_vector(sys, &w, &lambda) {
            Ok(mut result) => {
                result.shifted = shifted;
                return Ok(result);
            }
            Err(e @ Error::Infeasible { .. }) => last = format!("lambda = {lambda}: {e}"),
            Err(e) => return Err(e),
        }
        lambda *= int(2);
    }
    Err(Error::Inconclusive {
        cap: format_rational(lambda_cap),
        last,
    })
}
