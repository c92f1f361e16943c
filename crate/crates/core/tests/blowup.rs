mod common;

use common::germ;
use proptest::prelude::*;
use toro_core::algebra::{int, ratio, Axis, Chart, Frac2, Poly2};
use toro_core::blowup::{
    blowup_x, blowup_y, landing_point, pulls_in, recenter_x, recenter_y, retarget, BlowupError,
    LandingPoint,
};
use toro_core::model::{ChartStep, ComponentId, Side, State};
use toro_core::ramification::toroidal_at;

fn frac(s: &str) -> Frac2 {
    Frac2::from_poly(s.parse::<Poly2>().unwrap())
}

fn pair(a: &str, b: &str) -> [Frac2; 2] {
    [frac(a), frac(b)]
}

fn flagship() -> State {
    State::new(&germ("x1^2", "x1 x2", &["x1"], &["y1"])).unwrap()
}

fn h(axis: Axis) -> Option<ComponentId> {
    Some(ComponentId::original(Side::TargetY, axis))
}

#[test]
fn source_blowup_charts_of_the_flagship() {
    let mut s = flagship();
    let [first, second] = blowup_x(&mut s, 0).unwrap();
    assert_eq!(s.x[first].pulls, pair("x1^2", "x1^2 x2"));
    assert_eq!(s.x[second].pulls, pair("x1^2 x2^2", "x1 x2^2"));
    let e1 = Some(ComponentId::exceptional(Side::SourceX, 1));
    let g1 = Some(ComponentId::original(Side::SourceX, Axis::One));
    assert_eq!(s.x[first].boundary, [e1, None]);
    assert_eq!(s.x[second].boundary, [g1, e1]);
    assert!(!s.x[0].active);
    assert!(s.x[first].is_scan_owner() && !s.x[second].is_scan_owner());
    assert_eq!(blowup_x(&mut s, 0), Err(BlowupError::InactiveGerm(0)));
}

#[test]
fn target_blowup_boundaries() {
    let mut s = flagship();
    let [first, second] = blowup_y(&mut s, 0).unwrap();
    let f1 = Some(ComponentId::exceptional(Side::TargetY, 1));
    assert_eq!(s.y[first].boundary, [f1, None]);
    assert_eq!(s.y[second].boundary, [h(Axis::One), f1]);
    assert_eq!(s.y_exceptional_of(0), f1);
    assert_eq!(blowup_y(&mut s, 0), Err(BlowupError::AlreadyBlownUp(0)));

    let mut s = State::new(&germ("x1^2", "x2", &["x1", "x2"], &["y1", "y2"])).unwrap();
    let [first, second] = blowup_y(&mut s, 0).unwrap();
    assert_eq!(s.y[first].boundary, [f1, h(Axis::Two)]);
    assert_eq!(s.y[second].boundary, [h(Axis::One), f1]);
    let kinds: Vec<&str> = s.events.iter().map(|e| e.event.kind()).collect();
    assert_eq!(kinds, ["YBlowup"]);
}

#[test]
fn landing_points() {
    assert_eq!(landing_point(&pair("x1^2", "x1^2 x2")).unwrap(), Some(LandingPoint::First(int(0))));
    assert_eq!(landing_point(&pair("x1^2 x2^2", "x1 x2^2")).unwrap(), Some(LandingPoint::SecondOrigin));
    assert_eq!(
        landing_point(&pair("2 x1", "3 x1 + x1 x2")).unwrap(),
        Some(LandingPoint::First(ratio(3, 2)))
    );
    assert_eq!(landing_point(&pair("x1", "x2")).unwrap(), None);
}

#[test]
fn retarget_moves_charts_onto_the_blown_up_target() {
    let mut s = flagship();
    let [yf, ys] = blowup_y(&mut s, 0).unwrap();
    let [xf, xs] = blowup_x(&mut s, 0).unwrap();
    retarget(&mut s, xf, yf).unwrap();
    retarget(&mut s, xs, ys).unwrap();
    assert_eq!(s.x[xf].pulls, pair("x1^2", "x2"));
    assert_eq!(s.x[xs].pulls, pair("x1", "x1 x2^2"));
    // Recomputing from the root pullbacks agrees with the incremental descent.
    for x in [xf, xs] {
        assert_eq!(pulls_in(&s, &s.x[x].root_pulls, s.x[x].target).unwrap(), s.x[x].pulls);
    }

    // The second source chart does not map into the first target chart.
    let mut s = flagship();
    let [yf, _] = blowup_y(&mut s, 0).unwrap();
    let [_, xs] = blowup_x(&mut s, 0).unwrap();
    assert!(matches!(retarget(&mut s, xs, yf), Err(BlowupError::Retarget { .. })));
}

#[test]
fn recentering() {
    let shifted = pair("x1", "x2^2 - x2").map(|f| f.shift_axis(Axis::Two, &int(1)));
    assert_eq!(shifted, pair("x1", "x2^2 + x2"));

    let mut s = flagship();
    let [xf, xs] = blowup_x(&mut s, 0).unwrap();
    let r = recenter_x(&mut s, xf, &int(1)).unwrap();
    assert_eq!(s.x[r].pulls, pair("x1^2", "x1^2 x2 + x1^2"));
    assert_eq!(s.x[r].boundary, [s.x[xf].boundary[0], None]);
    assert_eq!(s.x[r].parent, Some((xf, ChartStep::Recenter(int(1)))));
    assert!(matches!(recenter_x(&mut s, xf, &int(1)), Err(BlowupError::AlreadyClaimed(..))));
    assert_eq!(recenter_x(&mut s, xf, &int(0)), Err(BlowupError::ZeroShift));
    assert!(matches!(recenter_x(&mut s, xs, &int(2)), Err(BlowupError::NotRecenterable(_))));

    let [yf, ys] = blowup_y(&mut s, 0).unwrap();
    let a = recenter_y(&mut s, yf, &ratio(-1, 2)).unwrap();
    assert_eq!(recenter_y(&mut s, yf, &ratio(-1, 2)).unwrap(), a);
    assert_eq!(s.y[a].boundary, [s.y[yf].boundary[0], None]);
    assert!(matches!(recenter_y(&mut s, ys, &int(1)), Err(BlowupError::NotRecenterable(_))));
}

#[test]
fn depths_grow_along_chains() {
    let mut s = flagship();
    let mut cur = 0;
    for d in 1..=4 {
        let [first, second] = blowup_x(&mut s, cur).unwrap();
        assert_eq!((s.x[first].depth, s.x[second].depth), (d, d));
        cur = second;
    }
    let mut y = 0;
    for d in 1..=3 {
        let [first, _] = blowup_y(&mut s, y).unwrap();
        assert_eq!(s.y[first].depth, d);
        assert_eq!(s.y_path(first).len(), d as usize);
        assert_eq!(s.y_path(first).last(), Some(&ChartStep::Blowup(Chart::First)));
        y = first;
    }
}

proptest! {
    // A monomial germ with nonzero determinant stays monomial with nonzero
    // determinant in both source charts.
    #[test]
    fn monomial_charts_stay_toroidal(a in 0u32..=5, b in 0u32..=5, c in 0u32..=5, d in 0u32..=5) {
        prop_assume!(a * d != b * c);
        let mut s = State::new(&germ(
            &format!("x1^{a} x2^{b}"),
            &format!("x1^{c} x2^{d}"),
            &["x1", "x2"],
            &["y1", "y2"],
        ))
        .unwrap();
        for x in blowup_x(&mut s, 0).unwrap() {
            prop_assert_eq!(toroidal_at(&s.local_map(x)), Ok(true));
        }
    }
}
