//! Point blowups on both sides, recentering along exceptional axes and
//! moving source germs onto the charts of a blown-up target.

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{gcd2, AlgebraError, Axis, Chart, Frac2, Poly2, Scalar};
use crate::model::{chart_boundary, ChartStep, Diagnostic, Side, State, XGerm};
use crate::trace::Event;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("target germ y{0} is already blown up")]
    AlreadyBlownUp(usize),
    #[error("source germ x{0} is no longer a point")]
    InactiveGerm(usize),
    #[error("recentering needs a nonzero position")]
    ZeroShift,
    #[error("germ {0} has no exceptional axis to recenter along")]
    NotRecenterable(String),
    #[error("position {0} on x{1} was already split off")]
    AlreadyClaimed(String, usize),
    #[error("retargeting x{germ} to y{target}: {why}")]
    Retarget { germ: usize, target: usize, why: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Where the origin of a source germ lands on the exceptional curve after
/// blowing up its target point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LandingPoint {
    /// Position on the exceptional axis of the `First` chart.
    First(Scalar),
    /// Origin of the `Second` chart.
    SecondOrigin,
}

/// Rewrites pullbacks of the parent coordinates as pullbacks of the chart
/// coordinates.
pub fn descend(pulls: &[Frac2; 2], step: &ChartStep) -> Result<[Frac2; 2], AlgebraError> {
    let [p, q] = pulls;
    Ok(match step {
        ChartStep::Blowup(Chart::First) => [p.clone(), q.div(p)?],
        ChartStep::Blowup(Chart::Second) => [p.div(q)?, q.clone()],
        ChartStep::Recenter(c) => [p.clone(), q.sub_scalar(c)],
    })
}

/// Pullbacks of the coordinates of target germ `y`, starting from
/// pullbacks of the root target coordinates.
pub fn pulls_in(state: &State, root: &[Poly2; 2], y: usize) -> Result<[Frac2; 2], AlgebraError> {
    let mut cur = [Frac2::from_poly(root[0].clone()), Frac2::from_poly(root[1].clone())];
    for step in state.y_path(y) {
        cur = descend(&cur, &step)?;
    }
    Ok(cur)
}

/// Blows up the origin of target germ `q`. Returns the `First` and
/// `Second` chart germs.
pub fn blowup_y(state: &mut State, q: usize) -> Result<[usize; 2], BlowupError> {
    if state.y[q].blown_up {
        return Err(BlowupError::AlreadyBlownUp(q));
    }
    let exc = state.new_exceptional(Side::TargetY);
    let parent = state.y[q].boundary;
    let first = state.push_y(q, ChartStep::Blowup(Chart::First), chart_boundary(&parent, Chart::First, exc));
    let second = state.push_y(q, ChartStep::Blowup(Chart::Second), chart_boundary(&parent, Chart::Second, exc));
    state.y[q].blown_up = true;
    state.set_y_exceptional(q, exc);
    let center_type = format!("{}q", parent.iter().filter(|b| b.is_some()).count());
    state.log(Event::YBlowup { germ: q, center_type, exceptional: exc.to_string(), first, second });
    Ok([first, second])
}

/// Target germ at position `c` on the exceptional axis of the `First`
/// chart `first`, created on first use.
pub fn recenter_y(state: &mut State, first: usize, c: &Scalar) -> Result<usize, BlowupError> {
    if c.is_zero() {
        return Err(BlowupError::ZeroShift);
    }
    match &state.y[first].parent {
        Some((_, ChartStep::Blowup(Chart::First))) => {}
        _ => return Err(BlowupError::NotRecenterable(format!("y{first}"))),
    }
    let step = ChartStep::Recenter(c.clone());
    if let Some(id) = state.y_child_of(first, &step) {
        return Ok(id);
    }
    let boundary = [state.y[first].boundary[0], None];
    let id = state.push_y(first, step, boundary);
    state.log(Event::Recenter {
        side: "y".into(),
        germ: id,
        parent: first,
        at: crate::algebra::scalar_text(c),
    });
    Ok(id)
}

fn push_x(state: &mut State, germ: XGerm) -> usize {
    let id = state.x.len();
    state.x.push(XGerm { id, ..germ });
    id
}

/// Blows up the origin of source germ `p`; both charts keep the target of
/// `p`. Returns the `First` and `Second` chart germs.
pub fn blowup_x(state: &mut State, p: usize) -> Result<[usize; 2], BlowupError> {
    if !state.x[p].active {
        return Err(BlowupError::InactiveGerm(p));
    }
    let exc = state.new_exceptional(Side::SourceX);
    let parent = state.x[p].clone();
    let mut ids = [0; 2];
    for (k, chart) in [Chart::First, Chart::Second].into_iter().enumerate() {
        let germ = XGerm {
            id: 0,
            boundary: chart_boundary(&parent.boundary, chart, exc),
            parent: Some((p, ChartStep::Blowup(chart))),
            depth: parent.depth + 1,
            target: parent.target,
            pulls: [parent.pulls[0].substitute_blowup(chart), parent.pulls[1].substitute_blowup(chart)],
            root_pulls: [
                parent.root_pulls[0].substitute_blowup(chart),
                parent.root_pulls[1].substitute_blowup(chart),
            ],
            active: true,
            claimed: (chart == Chart::First).then(Default::default),
        };
        ids[k] = push_x(state, germ);
    }
    state.x[p].active = false;
    state.log(Event::XBlowup {
        germ: p,
        over: parent.target,
        exceptional: exc.to_string(),
        first: ids[0],
        second: ids[1],
    });
    Ok(ids)
}

/// New source germ at the point `(0, c)` of the exceptional axis of the
/// `First` chart germ `owner`. Only that axis stays boundary.
pub fn recenter_x(state: &mut State, owner: usize, c: &Scalar) -> Result<usize, BlowupError> {
    if c.is_zero() {
        return Err(BlowupError::ZeroShift);
    }
    let parent = state.x[owner].clone();
    let Some(claimed) = &parent.claimed else {
        return Err(BlowupError::NotRecenterable(format!("x{owner}")));
    };
    if claimed.contains(c) {
        return Err(BlowupError::AlreadyClaimed(crate::algebra::scalar_text(c), owner));
    }
    let germ = XGerm {
        id: 0,
        boundary: [parent.boundary[0], None],
        parent: Some((owner, ChartStep::Recenter(c.clone()))),
        depth: parent.depth + 1,
        target: parent.target,
        pulls: [
            parent.pulls[0].shift_axis(Axis::Two, c),
            parent.pulls[1].shift_axis(Axis::Two, c),
        ],
        root_pulls: [
            parent.root_pulls[0].shift_axis2(c),
            parent.root_pulls[1].shift_axis2(c),
        ],
        active: true,
        claimed: None,
    };
    let id = push_x(state, germ);
    state.x[owner].claimed.as_mut().expect("owner").insert(c.clone());
    state.log(Event::Recenter {
        side: "x".into(),
        germ: id,
        parent: owner,
        at: crate::algebra::scalar_text(c),
    });
    Ok(id)
}

/// Generator-free parts of the pulled back maximal ideal: `(n1, n2) =
/// d * (r1, r2)` with `d` their gcd.
pub fn ideal_residuals(pulls: &[Frac2; 2]) -> Result<(Poly2, Poly2), AlgebraError> {
    let (n1, n2) = (pulls[0].num(), pulls[1].num());
    let d = gcd2(n1, n2)?;
    Ok((
        n1.div_exact(&d).expect("gcd divides"),
        n2.div_exact(&d).expect("gcd divides"),
    ))
}

/// Landing point on the new exceptional curve when the pulled back ideal
/// is principal at the origin. Points of the overlap are reported in the
/// `First` chart.
pub fn landing_point(pulls: &[Frac2; 2]) -> Result<Option<LandingPoint>, AlgebraError> {
    let (r1, r2) = ideal_residuals(pulls)?;
    let a1 = r1.eval_origin();
    let a2 = r2.eval_origin();
    if !a1.is_zero() {
        let d1 = pulls[0].den().eval_origin();
        let d2 = pulls[1].den().eval_origin();
        return Ok(Some(LandingPoint::First(a2 * d1 / (a1 * d2))));
    }
    if !a2.is_zero() {
        return Ok(Some(LandingPoint::SecondOrigin));
    }
    Ok(None)
}

/// Moves source germ `x` to target germ `to`, which must lie below its
/// current target. The new pullbacks must be regular at the origin and
/// vanish there.
pub fn retarget(state: &mut State, x: usize, to: usize) -> Result<(), BlowupError> {
    let from = state.x[x].target;
    let full = state.y_path(to);
    let base = state.y_path(from);
    let err = |why: String| BlowupError::Retarget { germ: x, target: to, why };
    let mut pulls = if full.starts_with(&base) {
        let mut cur = state.x[x].pulls.clone();
        for step in &full[base.len()..] {
            cur = descend(&cur, step).map_err(|e| err(e.to_string()))?;
        }
        cur
    } else {
        pulls_in(state, &state.x[x].root_pulls, to).map_err(|e| err(e.to_string()))?
    };
    for (k, p) in pulls.iter().enumerate() {
        if !p.is_regular_at_origin() {
            return Err(err(Diagnostic::PoleAtOrigin(["pullback of y1", "pullback of y2"][k]).to_string()));
        }
        if !p.num().eval_origin().is_zero() {
            return Err(err("origin does not map to the target center".into()));
        }
    }
    std::mem::swap(&mut state.x[x].pulls, &mut pulls);
    state.x[x].target = to;
    state.log(Event::Retarget { germ: x, from, to });
    Ok(())
}
