//! Germs of morphisms, boundary components and Weil divisors.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{scalar_text, AlgebraError, Axis, Chart, Frac2, Poly2, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    SourceX,
    TargetY,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    /// Input boundary component on axis 1 or 2.
    Original(u8),
    /// Exceptional divisor numbered by its birth order on its side.
    Exceptional(u32),
}

/// Irreducible boundary component. Exceptional ones keep their identity
/// under strict transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentId {
    pub side: Side,
    pub kind: ComponentKind,
}

impl ComponentId {
    pub fn original(side: Side, axis: Axis) -> Self {
        ComponentId { side, kind: ComponentKind::Original(axis.index() as u8 + 1) }
    }

    pub fn exceptional(side: Side, n: u32) -> Self {
        ComponentId { side, kind: ComponentKind::Exceptional(n) }
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(self.kind, ComponentKind::Exceptional(_))
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.side, self.kind) {
            (Side::SourceX, ComponentKind::Original(i)) => write!(f, "G{i}"),
            (Side::SourceX, ComponentKind::Exceptional(n)) => write!(f, "E{n}"),
            (Side::TargetY, ComponentKind::Original(i)) => write!(f, "H{i}"),
            (Side::TargetY, ComponentKind::Exceptional(n)) => write!(f, "F{n}"),
        }
    }
}

impl Serialize for ComponentId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// How a germ chart was obtained from its parent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChartStep {
    Blowup(Chart),
    /// Translation of the exceptional axis of a `First` chart, moving the
    /// point `(0, c)` to the origin.
    Recenter(Scalar),
}

impl fmt::Display for ChartStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartStep::Blowup(Chart::First) => f.write_str("first"),
            ChartStep::Blowup(Chart::Second) => f.write_str("second"),
            ChartStep::Recenter(c) => write!(f, "recenter {}", scalar_text(c)),
        }
    }
}

/// Natural number or infinity, ordered with infinity last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    Fin(u32),
    Inf,
}

impl Ext {
    pub fn fin(self) -> Option<u32> {
        match self {
            Ext::Fin(n) => Some(n),
            Ext::Inf => None,
        }
    }
}

impl From<Option<u32>> for Ext {
    fn from(v: Option<u32>) -> Ext {
        v.map_or(Ext::Inf, Ext::Fin)
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(n) => write!(f, "{n}"),
            Ext::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ext::Fin(n) => s.serialize_u32(*n),
            Ext::Inf => s.serialize_str("inf"),
        }
    }
}

/// Effective divisor supported on boundary components; zero coefficients
/// are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WeilDivisor(BTreeMap<ComponentId, u32>);

impl WeilDivisor {
    pub fn new() -> Self {
        WeilDivisor::default()
    }

    pub fn set(&mut self, c: ComponentId, v: u32) {
        if v == 0 {
            self.0.remove(&c);
        } else {
            self.0.insert(c, v);
        }
    }

    pub fn get(&self, c: &ComponentId) -> u32 {
        self.0.get(c).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ComponentId, &u32)> {
        self.0.iter()
    }

    pub fn sorted_key(&self) -> SortedKey {
        let mut v: Vec<u32> = self.0.values().copied().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        SortedKey(v)
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|(c, v)| format!("{v}*{c}")).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl FromIterator<(ComponentId, u32)> for WeilDivisor {
    fn from_iter<I: IntoIterator<Item = (ComponentId, u32)>>(it: I) -> Self {
        let mut d = WeilDivisor::new();
        for (c, v) in it {
            d.set(c, v);
        }
        d
    }
}

/// Coefficients in descending order; compared lexicographically after
/// padding the shorter one with zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SortedKey(pub Vec<u32>);

impl Ord for SortedKey {
    fn cmp(&self, o: &Self) -> Ordering {
        let n = self.0.len().max(o.0.len());
        for i in 0..n {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = o.0.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for SortedKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub fn compare_divisors(a: &WeilDivisor, b: &WeilDivisor) -> Ordering {
    a.sorted_key().cmp(&b.sorted_key())
}

/// Germ of a morphism at the origin: pullbacks of the target coordinates
/// and which coordinate axes are boundary on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMap {
    pub pulls: [Frac2; 2],
    pub x_boundary: [bool; 2],
    pub y_boundary: [bool; 2],
}

impl LocalMap {
    pub fn polynomial(p1: Poly2, p2: Poly2, x_boundary: [bool; 2], y_boundary: [bool; 2]) -> Self {
        LocalMap {
            pulls: [Frac2::from_poly(p1), Frac2::from_poly(p2)],
            x_boundary,
            y_boundary,
        }
    }

    pub fn x_boundary_count(&self) -> usize {
        self.x_boundary.iter().filter(|b| **b).count()
    }

    pub fn y_boundary_count(&self) -> usize {
        self.y_boundary.iter().filter(|b| **b).count()
    }

    pub fn jacobian(&self) -> Frac2 {
        let (n, d) = self.jacobian_parts();
        Frac2::new(n, d).expect("nonzero denominator")
    }

    /// Unreduced numerator and denominator of the Jacobian determinant.
    pub(crate) fn jacobian_parts(&self) -> (Poly2, Poly2) {
        // d(n/d) = (d * dn - n * dd) / d^2, and both pulls share the shape.
        let parts = |f: &Frac2, axis: Axis| -> Poly2 {
            let (n, d) = (f.num(), f.den());
            if d.is_one() {
                return n.partial_derivative(axis);
            }
            &(d * &n.partial_derivative(axis)) - &(n * &d.partial_derivative(axis))
        };
        let [p, q] = &self.pulls;
        let num = &(&parts(p, Axis::One) * &parts(q, Axis::Two)) - &(&parts(p, Axis::Two) * &parts(q, Axis::One));
        let den = &(p.den() * p.den()) * &(q.den() * q.den());
        (num, den)
    }

    /// Pullback of the product of the target boundary coordinates.
    pub fn boundary_pullback(&self) -> Frac2 {
        let mut acc = Frac2::one();
        for axis in Axis::BOTH {
            if self.y_boundary[axis.index()] {
                acc = acc.mul(&self.pulls[axis.index()]);
            }
        }
        acc
    }

    pub fn swap_x(&self) -> LocalMap {
        LocalMap {
            pulls: [self.pulls[0].swap_vars(), self.pulls[1].swap_vars()],
            x_boundary: [self.x_boundary[1], self.x_boundary[0]],
            y_boundary: self.y_boundary,
        }
    }

    pub fn swap_y(&self) -> LocalMap {
        LocalMap {
            pulls: [self.pulls[1].clone(), self.pulls[0].clone()],
            x_boundary: self.x_boundary,
            y_boundary: [self.y_boundary[1], self.y_boundary[0]],
        }
    }
}

/// Why a germ is not a dominant morphism of log-smooth germs.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("the origin is not mapped to the origin ({0} does not vanish there)")]
    CenterNotMapped(&'static str),
    #[error("(i) {0} has a pole at the origin")]
    PoleAtOrigin(&'static str),
    #[error("(ii) boundary pullback vanishes on axes {found:?}, declared {declared:?}")]
    BoundaryMismatch { found: [bool; 2], declared: [bool; 2] },
    #[error("(ii) boundary pullback residual vanishes at the origin")]
    BoundaryResidualVanishes,
    #[error("(iii) Jacobian residual {0} vanishes at the origin")]
    JacobianResidualVanishes(String),
    #[error("(iv) Jacobian is identically zero; the germ is not dominant")]
    NotDominant,
}

const PULL_NAMES: [&str; 2] = ["pullback of y1", "pullback of y2"];

fn check_regular(map: &LocalMap) -> Result<(), Diagnostic> {
    for (i, p) in map.pulls.iter().enumerate() {
        if !p.is_regular_at_origin() {
            return Err(Diagnostic::PoleAtOrigin(PULL_NAMES[i]));
        }
        if !p.num().eval_origin().is_zero() {
            return Err(Diagnostic::CenterNotMapped(PULL_NAMES[i]));
        }
    }
    Ok(())
}

fn check_boundary(map: &LocalMap) -> Result<(), Diagnostic> {
    // Denominators are units at the origin here, so the product of the
    // numerators carries the same monomial part and residual value.
    let mut pb = Poly2::one();
    for axis in Axis::BOTH {
        if map.y_boundary[axis.index()] {
            pb = &pb * map.pulls[axis.index()].num();
        }
    }
    if pb.is_zero() {
        return Err(Diagnostic::NotDominant);
    }
    let (e1, e2, residual) = pb.monomial_split().expect("nonzero");
    let found = [e1 > 0, e2 > 0];
    if found != map.x_boundary {
        return Err(Diagnostic::BoundaryMismatch { found, declared: map.x_boundary });
    }
    if residual.eval_origin().is_zero() {
        return Err(Diagnostic::BoundaryResidualVanishes);
    }
    Ok(())
}

fn check_jacobian(map: &LocalMap) -> Result<(), Diagnostic> {
    let (j, _) = map.jacobian_parts();
    if j.is_zero() {
        return Err(Diagnostic::NotDominant);
    }
    let (_, _, residual) = j.split_axes(map.x_boundary).expect("nonzero");
    if residual.eval_origin().is_zero() {
        return Err(Diagnostic::JacobianResidualVanishes(residual.to_string()));
    }
    Ok(())
}

/// Checks regularity, the boundary condition, log smoothness and
/// dominance, in that order.
pub fn validate_germ(map: &LocalMap) -> Result<(), Diagnostic> {
    check_regular(map)?;
    if map.jacobian_parts().0.is_zero() {
        return Err(Diagnostic::NotDominant);
    }
    check_boundary(map)?;
    check_jacobian(map)
}

/// Same checks as [`validate_germ`] except dominance, which is reported
/// as `Ok(false)`.
pub(crate) fn validate_unless_degenerate(map: &LocalMap) -> Result<bool, Diagnostic> {
    check_regular(map)?;
    if map.jacobian_parts().0.is_zero() {
        return Ok(false);
    }
    check_boundary(map)?;
    check_jacobian(map)?;
    Ok(true)
}

/// A point `c != 0` on the exceptional axis of one chart of a blowup is the
/// point `1/c` on the exceptional axis of the other chart.
pub fn identify_overlap_point(c: &Scalar) -> Result<Scalar, AlgebraError> {
    if c.is_zero() {
        return Err(AlgebraError::ZeroDenominator);
    }
    Ok(c.recip())
}

#[derive(Clone, Debug)]
pub struct YGerm {
    pub id: usize,
    pub boundary: [Option<ComponentId>; 2],
    pub parent: Option<(usize, ChartStep)>,
    pub depth: u32,
    pub blown_up: bool,
}

#[derive(Clone, Debug)]
pub struct XGerm {
    pub id: usize,
    pub boundary: [Option<ComponentId>; 2],
    pub parent: Option<(usize, ChartStep)>,
    pub depth: u32,
    /// Target point; `pulls` are written in its coordinates.
    pub target: usize,
    pub pulls: [Frac2; 2],
    /// The input map composed with this chart, in the root target coordinates.
    pub root_pulls: [Poly2; 2],
    /// False once the origin has been blown up.
    pub active: bool,
    /// Set on `First` charts: positions already split off along the
    /// exceptional axis, which this germ otherwise represents.
    pub claimed: Option<BTreeSet<Scalar>>,
}

pub(crate) fn boundary_mask(b: &[Option<ComponentId>; 2]) -> [bool; 2] {
    [b[0].is_some(), b[1].is_some()]
}

impl XGerm {
    pub fn is_scan_owner(&self) -> bool {
        self.claimed.is_some()
    }
}

/// Boundary of a blowup chart: the kept coordinate's axis is the new
/// exceptional divisor, the other axis is the strict transform of the
/// parent axis with the same index.
pub(crate) fn chart_boundary(
    parent: &[Option<ComponentId>; 2],
    chart: Chart,
    exc: ComponentId,
) -> [Option<ComponentId>; 2] {
    match chart {
        Chart::First => [Some(exc), parent[1]],
        Chart::Second => [parent[0], Some(exc)],
    }
}

/// Input germ: polynomial pullbacks and declared boundary axes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermInput {
    pub pulls: [Poly2; 2],
    pub x_boundary: [bool; 2],
    pub y_boundary: [bool; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("in {field}: {err}")]
    Poly { field: &'static str, err: AlgebraError },
    #[error("unknown boundary coordinate {0:?}")]
    UnknownCoordinate(String),
}

fn parse_mask(names: &[&str], vars: crate::algebra::VarSet) -> Result<[bool; 2], InputError> {
    let mut mask = [false; 2];
    for n in names {
        let k = vars.names().iter().position(|v| *v == n.trim());
        mask[k.ok_or_else(|| InputError::UnknownCoordinate(n.to_string()))?] = true;
    }
    Ok(mask)
}

impl GermInput {
    /// Parses the two pullbacks as polynomials in `x1, x2` and the boundary
    /// coordinate names.
    pub fn parse(f_y1: &str, f_y2: &str, boundary_x: &[&str], boundary_y: &[&str]) -> Result<GermInput, InputError> {
        use crate::algebra::{parse_poly, VarSet};
        let p1 = parse_poly(f_y1, VarSet::X).map_err(|err| InputError::Poly { field: "f_y1", err })?;
        let p2 = parse_poly(f_y2, VarSet::X).map_err(|err| InputError::Poly { field: "f_y2", err })?;
        Ok(GermInput {
            pulls: [p1, p2],
            x_boundary: parse_mask(boundary_x, VarSet::X)?,
            y_boundary: parse_mask(boundary_y, VarSet::Y)?,
        })
    }

    pub fn local_map(&self) -> LocalMap {
        LocalMap::polynomial(
            self.pulls[0].clone(),
            self.pulls[1].clone(),
            self.x_boundary,
            self.y_boundary,
        )
    }
}

/// Every germ ever created on both sides, the event log and the step
/// counter. Germ ids are indices into `x` and `y`.
#[derive(Clone, Debug)]
pub struct State {
    pub x: Vec<XGerm>,
    pub y: Vec<YGerm>,
    pub events: Vec<crate::trace::TraceEvent>,
    pub step: usize,
    pub(crate) rlog: Option<WeilDivisor>,
    /// Latest classification of each source germ that was over a center.
    pub subcases: BTreeMap<usize, crate::ramification::Subcase>,
    pub(crate) two_q_run: usize,
    pub(crate) run_bound: Option<u32>,
    x_exceptional: u32,
    y_exceptional: u32,
    y_children: BTreeMap<(usize, ChartStep), usize>,
    y_exceptional_of: BTreeMap<usize, ComponentId>,
}

fn original_boundary(side: Side, mask: [bool; 2]) -> [Option<ComponentId>; 2] {
    [
        mask[0].then(|| ComponentId::original(side, Axis::One)),
        mask[1].then(|| ComponentId::original(side, Axis::Two)),
    ]
}

impl State {
    pub fn new(input: &GermInput) -> Result<State, Diagnostic> {
        validate_germ(&input.local_map())?;
        let y0 = YGerm {
            id: 0,
            boundary: original_boundary(Side::TargetY, input.y_boundary),
            parent: None,
            depth: 0,
            blown_up: false,
        };
        let x0 = XGerm {
            id: 0,
            boundary: original_boundary(Side::SourceX, input.x_boundary),
            parent: None,
            depth: 0,
            target: 0,
            pulls: [
                Frac2::from_poly(input.pulls[0].clone()),
                Frac2::from_poly(input.pulls[1].clone()),
            ],
            root_pulls: input.pulls.clone(),
            active: true,
            claimed: None,
        };
        Ok(State {
            x: vec![x0],
            y: vec![y0],
            events: Vec::new(),
            step: 0,
            rlog: None,
            subcases: BTreeMap::new(),
            two_q_run: 0,
            run_bound: None,
            x_exceptional: 0,
            y_exceptional: 0,
            y_children: BTreeMap::new(),
            y_exceptional_of: BTreeMap::new(),
        })
    }

    pub fn log(&mut self, event: crate::trace::Event) {
        let seq = self.events.len() as u64 + 1;
        self.events.push(crate::trace::TraceEvent { seq, step: self.step, event });
    }

    pub fn local_map(&self, x: usize) -> LocalMap {
        let g = &self.x[x];
        LocalMap {
            pulls: g.pulls.clone(),
            x_boundary: boundary_mask(&g.boundary),
            y_boundary: boundary_mask(&self.y[g.target].boundary),
        }
    }

    pub fn active_x(&self) -> Vec<usize> {
        self.x.iter().filter(|g| g.active).map(|g| g.id).collect()
    }

    pub(crate) fn new_exceptional(&mut self, side: Side) -> ComponentId {
        match side {
            Side::SourceX => {
                self.x_exceptional += 1;
                ComponentId::exceptional(side, self.x_exceptional)
            }
            Side::TargetY => {
                self.y_exceptional += 1;
                ComponentId::exceptional(side, self.y_exceptional)
            }
        }
    }

    /// Exceptional divisor created by blowing up the origin of `y`.
    pub fn y_exceptional_of(&self, y: usize) -> Option<ComponentId> {
        self.y_exceptional_of.get(&y).copied()
    }

    pub(crate) fn set_y_exceptional(&mut self, y: usize, c: ComponentId) {
        self.y_exceptional_of.insert(y, c);
    }

    pub fn y_child_of(&self, parent: usize, step: &ChartStep) -> Option<usize> {
        self.y_children.get(&(parent, step.clone())).copied()
    }

    pub(crate) fn push_y(&mut self, parent: usize, step: ChartStep, boundary: [Option<ComponentId>; 2]) -> usize {
        let id = self.y.len();
        let depth = self.y[parent].depth + 1;
        self.y.push(YGerm { id, boundary, parent: Some((parent, step.clone())), depth, blown_up: false });
        self.y_children.insert((parent, step), id);
        id
    }

    /// Chart steps from the root target germ down to `y`.
    pub fn y_path(&self, mut y: usize) -> Vec<ChartStep> {
        let mut steps = Vec::new();
        while let Some((p, s)) = &self.y[y].parent {
            steps.push(s.clone());
            y = *p;
        }
        steps.reverse();
        steps
    }
}
