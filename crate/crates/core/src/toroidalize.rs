//! The iteration: compute the log ramification divisor, blow up the target
//! points it maps onto, principalize over them, move source germs to the
//! new charts, and watch the divisor decrease.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{rational_roots, Axis, Frac2};
use crate::blowup::{blowup_y, landing_point, recenter_x, recenter_y, retarget, BlowupError, LandingPoint};
use crate::model::{
    boundary_mask, compare_divisors, ComponentId, Diagnostic, GermInput, State, WeilDivisor,
};
use crate::principalize::{canonical_principalize, points_over, PrincipalizeError};
use crate::ramification::{
    classify_subcase, component_coefficient, component_image, exponent_matrix, log_jacobian,
    toroidal_at, ClassifyError, Image, Subcase, SubcaseData,
};
use crate::trace::Event;

pub const DEFAULT_MAX_STEPS: usize = 64;
pub const PRINCIPALIZATION_CAP: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("irrational center: {0}")]
    IrrationalCenter(String),
    #[error("no toroidal atlas after {steps} steps")]
    NonTermination { steps: usize },
    #[error("germ x{germ} is not log smooth: {diag}")]
    InvalidGerm { germ: usize, diag: Diagnostic },
    #[error("germ x{germ}: {err}")]
    Classify { germ: usize, err: ClassifyError },
    #[error("the morphism is already toroidal")]
    AlreadyToroidal,
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl From<PrincipalizeError> for StepError {
    fn from(e: PrincipalizeError) -> Self {
        match e {
            PrincipalizeError::IrrationalCenter { germ, poly } => {
                StepError::IrrationalCenter(format!("x{germ}: {poly}"))
            }
            other => StepError::Internal(other.to_string()),
        }
    }
}

impl From<BlowupError> for StepError {
    fn from(e: BlowupError) -> Self {
        StepError::Internal(e.to_string())
    }
}

fn internal(msg: impl Into<String>) -> StepError {
    StepError::Internal(msg.into())
}

/// Log ramification divisor over all active source germs. Every component
/// must get the same coefficient from every germ it passes through.
pub fn ramification_divisor(state: &State) -> Result<WeilDivisor, StepError> {
    let mut seen: BTreeMap<ComponentId, (u32, usize)> = BTreeMap::new();
    for x in state.active_x() {
        let map = state.local_map(x);
        for axis in Axis::BOTH {
            let Some(comp) = state.x[x].boundary[axis.index()] else {
                continue;
            };
            let c = component_coefficient(&map, axis).map_err(|err| match err {
                ClassifyError::Invalid(diag) => StepError::InvalidGerm { germ: x, diag },
                err => StepError::Classify { germ: x, err },
            })?;
            match seen.get(&comp) {
                Some((prev, other)) if *prev != c => {
                    return Err(internal(format!(
                        "coefficient of {comp} is {prev} at x{other} but {c} at x{x}"
                    )))
                }
                _ => {
                    seen.insert(comp, (c, x));
                }
            }
        }
    }
    Ok(seen.into_iter().map(|(k, (c, _))| (k, c)).collect())
}

/// The current divisor, computed and logged when stale.
pub fn current_rlog(state: &mut State) -> Result<WeilDivisor, StepError> {
    if let Some(r) = &state.rlog {
        return Ok(r.clone());
    }
    let r = ramification_divisor(state)?;
    state.log(Event::RamificationComputed { sorted: r.sorted_key().0, divisor: r.clone() });
    state.rlog = Some(r.clone());
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifiedGerm {
    pub germ: usize,
    pub target: usize,
    pub data: SubcaseData,
    pub toroidal: bool,
    /// Components on the normalized axes 1 and 2.
    pub components: [Option<ComponentId>; 2],
    pub exponents: [[i64; 2]; 2],
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MonitorOutcome {
    pub ok: bool,
    pub one_q_center: bool,
    pub two_q_run: usize,
    pub run_bound: Option<u32>,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub before: WeilDivisor,
    pub after: WeilDivisor,
    /// Blown-up target germs with their number of boundary components.
    pub centers: Vec<(usize, usize)>,
    pub classified: Vec<ClassifiedGerm>,
    pub x_blowups: usize,
    /// Source exceptional divisors created this step, with the classified
    /// germ they lie over.
    pub exceptional: BTreeMap<ComponentId, usize>,
    pub monitor: MonitorOutcome,
    pub bound_violations: Vec<String>,
    pub formula_checks: usize,
    pub formula_mismatches: Vec<String>,
}

impl StepReport {
    pub fn all_ok(&self) -> bool {
        self.monitor.ok && self.bound_violations.is_empty() && self.formula_mismatches.is_empty()
    }
}

/// Coefficients predicted after one step for the normalized components of a
/// germ in normal form, `(component index, value)`.
pub fn predicted_coefficients(d: &SubcaseData) -> Vec<(usize, u32)> {
    fn drop(o: u32, s: crate::model::Ext, a: u32) -> u32 {
        let m = match s.fin() {
            Some(s) => o.min(s),
            None => o,
        };
        o - a.min(m)
    }
    let (Some(i_o), a, b) = (d.i_o.fin(), d.a, d.b) else {
        return Vec::new();
    };
    match d.subcase {
        Subcase::S1p1q1 => vec![(0, drop(i_o, d.i_s, a))],
        Subcase::S2p1q1 => vec![(0, drop(i_o, d.i_s, a)), (1, 0)],
        Subcase::S2p1q2 => match d.j_o.fin() {
            Some(j_o) => vec![(0, drop(i_o, d.i_s, a)), (1, drop(j_o, d.j_s, b))],
            None => Vec::new(),
        },
        _ => Vec::new(),
    }
}

/// Pull of the boundary coordinate is a bare monomial and the other pull is
/// a polynomial, so term supports are coordinate data.
fn normal_form(state: &State, g: usize, d: &SubcaseData) -> bool {
    let pulls = &state.x[g].pulls;
    let (p1, p2) = if d.swapped_y { (&pulls[1], &pulls[0]) } else { (&pulls[0], &pulls[1]) };
    p1.is_polynomial() && p1.num().len() == 1 && p2.is_polynomial()
}

fn exceptional_bound(c: &ClassifiedGerm, before: &WeilDivisor) -> u32 {
    let coef = |k: usize| c.components[k].map_or(0, |comp| before.get(&comp));
    match c.data.subcase {
        Subcase::S2p1q1 => coef(0).saturating_sub(1),
        Subcase::S2p1q2 => coef(0).max(coef(1)).saturating_sub(1),
        _ => 0,
    }
}

fn center_type(state: &State, q: usize) -> usize {
    state.y[q].boundary.iter().filter(|b| b.is_some()).count()
}

/// Clauses (o) and (ii) of the termination monitor for one step. Each
/// violation is reported with its clause label.
pub fn monitor_check(before: &WeilDivisor, after: &WeilDivisor, one_q_center: bool) -> Vec<String> {
    let ord = compare_divisors(after, before);
    let (kb, ka) = (before.sorted_key().0, after.sorted_key().0);
    let mut out = Vec::new();
    if ord.is_gt() {
        out.push(format!("(o) divisor increased: {kb:?} -> {ka:?}"));
    }
    if one_q_center && ord.is_eq() {
        out.push(format!("(ii) no strict decrease with a 1q center: {kb:?} -> {ka:?}"));
    }
    out
}

/// One iteration.
pub fn algorithm_step(state: &mut State) -> Result<StepReport, StepError> {
    let before = current_rlog(state)?;
    if before.is_zero() {
        return Err(StepError::AlreadyToroidal);
    }
    state.step += 1;

    let mut centers: BTreeSet<usize> = BTreeSet::new();
    for x in state.active_x() {
        let map = state.local_map(x);
        for axis in Axis::BOTH {
            let Some(comp) = state.x[x].boundary[axis.index()] else {
                continue;
            };
            if before.get(&comp) == 0 {
                continue;
            }
            match component_image(&map, axis) {
                Ok(Image::OntoPoint) => {
                    centers.insert(state.x[x].target);
                }
                Ok(Image::OntoComponent(_)) => {
                    return Err(internal(format!("{comp} has positive coefficient but dominates a target component")))
                }
                Err(err) => return Err(StepError::Classify { germ: x, err }),
            }
        }
    }
    let centers: Vec<usize> = centers.into_iter().collect();
    let types: Vec<(usize, usize)> = centers.iter().map(|q| (*q, center_type(state, *q))).collect();
    let one_q = types.iter().any(|(_, t)| *t == 1);

    let owners: Vec<usize> = state.x.iter().filter(|g| g.is_scan_owner()).map(|g| g.id).collect();
    let mut seeds: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut classified = Vec::new();
    for &q in &centers {
        let mut over: Vec<usize> =
            state.x.iter().filter(|g| g.active && g.target == q).map(|g| g.id).collect();
        for &owner in &owners {
            for t in points_over(state, owner, q)? {
                over.push(recenter_x(state, owner, &t)?);
            }
        }
        for &g in &over {
            let map = state.local_map(g);
            let data = classify_subcase(&map).map_err(|err| StepError::Classify { germ: g, err })?;
            let toroidal = toroidal_at(&map).map_err(|diag| StepError::InvalidGerm { germ: g, diag })?;
            let b = state.x[g].boundary;
            let components = if data.swapped_x { [b[1], b[0]] } else { b };
            state.log(Event::SubcaseClassified {
                germ: g,
                target: q,
                subcase: data.subcase,
                a: data.a,
                b: data.b,
                i_o: data.i_o,
                j_o: data.j_o,
                i_s: data.i_s,
                j_s: data.j_s,
                toroidal,
            });
            state.subcases.insert(g, data.subcase);
            classified.push(ClassifiedGerm {
                germ: g,
                target: q,
                data,
                toroidal,
                components,
                exponents: exponent_matrix(&map),
            });
        }
        seeds.insert(q, over);
    }

    let mut monitor = MonitorOutcome { one_q_center: one_q, ..Default::default() };
    if one_q {
        state.two_q_run = 0;
        state.run_bound = None;
    } else {
        if state.two_q_run == 0 {
            state.run_bound = classified
                .iter()
                .filter(|c| !c.toroidal)
                .map(|c| c.exponents.iter().flatten().map(|v| *v as u32).sum::<u32>())
                .max();
        }
        state.two_q_run += 1;
    }
    monitor.two_q_run = state.two_q_run;
    monitor.run_bound = state.run_bound;

    for &q in &centers {
        blowup_y(state, q)?;
    }
    let mut x_blowups = 0;
    let mut exceptional = BTreeMap::new();
    for &q in &centers {
        let p = canonical_principalize(state, q, &seeds[&q], PRINCIPALIZATION_CAP)?;
        x_blowups += p.blowups;
        exceptional.extend(p.exceptional);
    }
    for &q in &centers {
        let movers: Vec<usize> =
            state.x.iter().filter(|g| g.active && g.target == q).map(|g| g.id).collect();
        for g in movers {
            let landing = landing_point(&state.x[g].pulls)
                .map_err(|e| internal(e.to_string()))?
                .ok_or_else(|| internal(format!("ideal still not principal at x{g}")))?;
            let first = state.y_child_of(q, &crate::model::ChartStep::Blowup(crate::algebra::Chart::First));
            let second = state.y_child_of(q, &crate::model::ChartStep::Blowup(crate::algebra::Chart::Second));
            let (first, second) = (first.expect("blown up"), second.expect("blown up"));
            let to = match landing {
                LandingPoint::First(t) if t == num_traits::Zero::zero() => first,
                LandingPoint::First(t) => recenter_y(state, first, &t)?,
                LandingPoint::SecondOrigin => second,
            };
            retarget(state, g, to)?;
        }
    }
    check_new_axes(state, &exceptional)?;

    state.rlog = None;
    let after = current_rlog(state)?;

    let key_before = before.sorted_key();
    let key_after = after.sorted_key();
    monitor.violations = monitor_check(&before, &after, one_q);
    if !one_q {
        if let Some(bound) = state.run_bound {
            if state.two_q_run as u32 > bound {
                monitor
                    .violations
                    .push(format!("(i) {} consecutive 2q steps exceed bound {bound}", state.two_q_run));
            }
        }
    }
    monitor.ok = monitor.violations.is_empty();
    state.log(Event::MonitorCheck {
        before: key_before.0.clone(),
        after: key_after.0.clone(),
        one_q_center: one_q,
        two_q_run: monitor.two_q_run,
        run_bound: monitor.run_bound,
        ok: monitor.ok,
        violations: monitor.violations.clone(),
    });

    let mut bound_violations = Vec::new();
    for (exc, seed) in &exceptional {
        let c = classified.iter().find(|c| c.germ == *seed).expect("seed classified");
        let bound = exceptional_bound(c, &before);
        let got = after.get(exc);
        let ok = match c.data.subcase {
            Subcase::S2p1q1 | Subcase::S2p1q2 => got <= bound,
            _ => got == 0,
        };
        if !ok {
            bound_violations.push(format!(
                "{exc} over x{seed} ({}) has coefficient {got}, allowed {bound}",
                c.data.subcase
            ));
        }
    }

    let mut formula_checks = 0;
    let mut formula_mismatches = Vec::new();
    for c in &classified {
        if !normal_form(state, c.germ, &c.data) {
            continue;
        }
        for (k, want) in predicted_coefficients(&c.data) {
            let Some(comp) = c.components[k] else { continue };
            formula_checks += 1;
            let got = after.get(&comp);
            if got != want {
                formula_mismatches.push(format!(
                    "{comp} at x{} ({}): predicted {want}, got {got}",
                    c.germ, c.data.subcase
                ));
            }
        }
    }

    Ok(StepReport {
        step: state.step,
        before,
        after,
        centers: types,
        classified,
        x_blowups,
        exceptional,
        monitor,
        bound_violations,
        formula_checks,
        formula_mismatches,
    })
}

/// Along each new exceptional axis the residual of `r_log` may only vanish
/// where other boundary components cross, which are chart origins.
fn check_new_axes(state: &State, exceptional: &BTreeMap<ComponentId, usize>) -> Result<(), StepError> {
    for g in &state.x {
        let Some(claimed) = &g.claimed else { continue };
        if !g.active || !exceptional.contains_key(&g.boundary[0].expect("exceptional axis")) {
            continue;
        }
        let map = state.local_map(g.id);
        let r = log_jacobian(&map);
        if r.is_zero() {
            return Err(StepError::InvalidGerm { germ: g.id, diag: Diagnostic::NotDominant });
        }
        let (_, _, res) = r.num().split_axes(boundary_mask(&g.boundary)).expect("nonzero");
        let on_axis = res.restrict_axis(Axis::One);
        if on_axis.is_zero() || on_axis.degree() == Some(0) {
            continue;
        }
        let dens: Vec<_> = g.pulls.iter().map(|p: &Frac2| p.den().restrict_axis(Axis::One)).collect();
        let roots = rational_roots(&on_axis).map_err(|e| internal(e.to_string()))?;
        for t in roots.roots {
            if t == num_traits::Zero::zero() || claimed.contains(&t) {
                continue;
            }
            if dens.iter().all(|d| d.is_zero() || d.eval(&t) != num_traits::Zero::zero()) {
                return Err(internal(format!("r_log of x{} vanishes off the boundary at t = {t}", g.id)));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct AtlasGerm {
    pub germ: usize,
    pub target: usize,
    pub boundary_x: [Option<ComponentId>; 2],
    pub boundary_y: [Option<ComponentId>; 2],
    pub pull1: String,
    pub pull2: String,
    pub exponents: [[i64; 2]; 2],
    pub det: i64,
    pub toroidal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeNode {
    pub germ: usize,
    pub parent: Option<usize>,
    pub step: Option<String>,
    pub boundary: [Option<ComponentId>; 2],
    pub depth: u32,
    pub live: bool,
}

/// Final charts with their exponent matrices, and both blowup forests.
#[derive(Clone, Debug, Serialize)]
pub struct Atlas {
    pub steps: usize,
    pub germs: Vec<AtlasGerm>,
    pub source_tree: Vec<TreeNode>,
    pub target_tree: Vec<TreeNode>,
}

pub fn atlas(state: &State) -> Result<Atlas, StepError> {
    let mut germs = Vec::new();
    for x in state.active_x() {
        let g = &state.x[x];
        let map = state.local_map(x);
        let exponents = exponent_matrix(&map);
        germs.push(AtlasGerm {
            germ: x,
            target: g.target,
            boundary_x: g.boundary,
            boundary_y: state.y[g.target].boundary,
            pull1: g.pulls[0].to_string(),
            pull2: g.pulls[1].to_string(),
            exponents,
            det: exponents[0][0] * exponents[1][1] - exponents[0][1] * exponents[1][0],
            toroidal: toroidal_at(&map).map_err(|diag| StepError::InvalidGerm { germ: x, diag })?,
        });
    }
    let node = |id: usize, parent: &Option<(usize, crate::model::ChartStep)>, boundary, depth, live| TreeNode {
        germ: id,
        parent: parent.as_ref().map(|p| p.0),
        step: parent.as_ref().map(|p| p.1.to_string()),
        boundary,
        depth,
        live,
    };
    Ok(Atlas {
        steps: state.step,
        germs,
        source_tree: state.x.iter().map(|g| node(g.id, &g.parent, g.boundary, g.depth, g.active)).collect(),
        target_tree: state.y.iter().map(|g| node(g.id, &g.parent, g.boundary, g.depth, !g.blown_up)).collect(),
    })
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub atlas: Atlas,
    pub reports: Vec<StepReport>,
}

/// Iterates until the log ramification divisor vanishes. On failure the
/// event log still ends with a `Done` event naming the outcome.
pub fn run(state: &mut State, max_steps: usize) -> Result<RunSummary, StepError> {
    let mut reports = Vec::new();
    let result = (|| loop {
        let r = current_rlog(state)?;
        if r.is_zero() {
            if let Some(x) = state.active_x().into_iter().find(|x| toroidal_at(&state.local_map(*x)) != Ok(true)) {
                return Err(internal(format!("divisor is zero but x{x} is not toroidal")));
            }
            return atlas(state);
        }
        if state.step >= max_steps {
            return Err(StepError::NonTermination { steps: state.step });
        }
        reports.push(algorithm_step(state)?);
    })();
    let outcome = match &result {
        Ok(_) => "toroidal".to_string(),
        Err(StepError::IrrationalCenter(_)) => "irrational-center".into(),
        Err(StepError::NonTermination { .. }) => "non-termination".into(),
        Err(_) => "error".into(),
    };
    state.log(Event::Done { steps: state.step, outcome });
    result.map(|atlas| RunSummary { atlas, reports })
}

/// Validates the input and runs to completion.
pub fn toroidalize(input: &GermInput, max_steps: usize) -> Result<(State, RunSummary), StepError> {
    let mut state = State::new(input).map_err(|diag| StepError::InvalidGerm { germ: 0, diag })?;
    let summary = run(&mut state, max_steps)?;
    Ok((state, summary))
}
