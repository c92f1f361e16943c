mod common;

use common::germ;
use toro_core::algebra::Axis;
use toro_core::model::{ComponentId, Side, State, WeilDivisor};
use toro_core::ramification::Subcase;
use toro_core::toroidalize::{
    algorithm_step, current_rlog, monitor_check, predicted_coefficients, ramification_divisor,
    run, toroidalize, StepError, DEFAULT_MAX_STEPS,
};
use toro_core::trace::{dot_x, dot_y, trace_json, Event};

fn g(axis: Axis) -> ComponentId {
    ComponentId::original(Side::SourceX, axis)
}

fn e(n: u32) -> ComponentId {
    ComponentId::exceptional(Side::SourceX, n)
}

fn divisor(entries: &[(ComponentId, u32)]) -> WeilDivisor {
    entries.iter().copied().collect()
}

fn kinds(s: &State) -> Vec<&'static str> {
    s.events.iter().map(|e| e.event.kind()).collect()
}

#[test]
fn flagship_in_one_step() {
    let input = germ("x1^2", "x1 x2", &["x1"], &["y1"]);
    let mut s = State::new(&input).unwrap();
    assert_eq!(current_rlog(&mut s).unwrap(), divisor(&[(g(Axis::One), 1)]));
    let r = algorithm_step(&mut s).unwrap();
    assert_eq!(r.centers, [(0, 1)]);
    assert_eq!(r.x_blowups, 1);
    assert_eq!(r.classified.len(), 1);
    assert_eq!(r.classified[0].data.subcase, Subcase::S1p1q1);
    assert!(r.after.is_zero());
    assert!(r.all_ok());
    assert_eq!(r.exceptional.get(&e(1)), Some(&0));

    let k = kinds(&s);
    assert_eq!(k.iter().filter(|k| **k == "YBlowup").count(), 1);
    assert_eq!(k.iter().filter(|k| **k == "XBlowup").count(), 1);
    let ty = s.events.iter().find_map(|e| match &e.event {
        Event::YBlowup { center_type, .. } => Some(center_type.clone()),
        _ => None,
    });
    assert_eq!(ty.as_deref(), Some("1q"));

    let summary = run(&mut s, DEFAULT_MAX_STEPS).unwrap();
    assert_eq!(summary.atlas.steps, 1);
    let rows: Vec<_> = summary.atlas.germs.iter().map(|g| (g.exponents, g.det)).collect();
    assert!(rows.contains(&([[1, 0], [1, 2]], 2)), "{rows:?}");
    assert!(summary.atlas.germs.iter().all(|g| g.toroidal));
    assert!(matches!(s.events.last().map(|e| &e.event), Some(Event::Done { outcome, .. }) if outcome == "toroidal"));
}

#[test]
fn identity_is_already_toroidal() {
    let input = germ("x1", "x2", &["x1", "x2"], &["y1", "y2"]);
    let (s, summary) = toroidalize(&input, DEFAULT_MAX_STEPS).unwrap();
    assert_eq!(s.step, 0);
    assert!(summary.reports.is_empty());
    assert_eq!(kinds(&s), ["RamificationComputed", "Done"]);
    let mut s = State::new(&input).unwrap();
    assert_eq!(algorithm_step(&mut s).unwrap_err(), StepError::AlreadyToroidal);
}

#[test]
fn degenerate_two_q_point() {
    // Both pulls are monomials times units but the exponent matrix is
    // singular, so the first step blows up a 2q point without a decrease.
    let input = germ("x1 x2", "x1^2 x2 + x1 x2", &["x1", "x2"], &["y1", "y2"]);
    let (_, summary) = toroidalize(&input, DEFAULT_MAX_STEPS).unwrap();
    let first = &summary.reports[0];
    assert_eq!(first.classified[0].data.subcase, Subcase::S2p2q2);
    assert_eq!(first.classified[0].data.det(), Some(0));
    assert_eq!(first.centers, [(0, 2)]);
    assert_eq!(first.monitor.run_bound, Some(4));
    assert_eq!(first.before.sorted_key(), first.after.sorted_key());
    assert!(summary.reports.iter().all(|r| r.all_ok()));
    assert!(summary.atlas.germs.iter().all(|g| g.toroidal && g.det != 0));
}

#[test]
fn two_component_trajectory() {
    let input = germ("x1 x2", "x1^3 x2^2", &["x1", "x2"], &["y1"]);
    let (_, summary) = toroidalize(&input, DEFAULT_MAX_STEPS).unwrap();
    let keys: Vec<Vec<u32>> = std::iter::once(summary.reports[0].before.sorted_key().0)
        .chain(summary.reports.iter().map(|r| r.after.sorted_key().0))
        .collect();
    assert_eq!(keys, [vec![3, 2], vec![2, 1], vec![1], vec![]]);
    assert_eq!(summary.reports[0].classified[0].data.subcase, Subcase::S2p1q2);
    assert!(summary.reports.iter().all(|r| r.all_ok() && r.formula_checks > 0));
}

#[test]
fn monitor_clauses() {
    let g1 = g(Axis::One);
    let one = divisor(&[(g1, 1)]);
    let grown = divisor(&[(g1, 1), (e(1), 1)]);
    let v = monitor_check(&one, &grown, false);
    assert_eq!(v.len(), 1);
    assert!(v[0].starts_with("(o)"));
    let v = monitor_check(&one, &one, true);
    assert_eq!(v.len(), 1);
    assert!(v[0].starts_with("(ii)"));
    assert!(monitor_check(&one, &one, false).is_empty());
    assert!(monitor_check(&one, &WeilDivisor::new(), true).is_empty());
    assert!(monitor_check(&divisor(&[(g1, 3)]), &divisor(&[(g1, 2), (e(1), 2)]), true).is_empty());
}

#[test]
fn predictions_follow_the_closed_forms() {
    let data = |f1: &str, f2: &str, bx: &[&str]| {
        toro_core::ramification::classify_subcase(&germ(f1, f2, bx, &["y1"]).local_map()).unwrap()
    };
    assert_eq!(predicted_coefficients(&data("x1^2", "x1^3 + x1 x2", &["x1"])), [(0, 0)]);
    assert_eq!(predicted_coefficients(&data("x1", "x1^3 + x1^2 x2", &["x1"])), [(0, 1)]);
    assert_eq!(predicted_coefficients(&data("x1 x2", "x1^3 x2^2", &["x1", "x2"])), [(0, 2), (1, 1)]);
}

#[test]
fn step_limit_is_reported() {
    let input = germ("x1 x2", "x1^3 x2^2", &["x1", "x2"], &["y1"]);
    let mut s = State::new(&input).unwrap();
    assert_eq!(run(&mut s, 1).unwrap_err(), StepError::NonTermination { steps: 1 });
    assert!(matches!(s.events.last().map(|e| &e.event), Some(Event::Done { outcome, .. }) if outcome == "non-termination"));
}

#[test]
fn invalid_input_is_rejected() {
    let input = germ("x1", "x1 + x2^2", &["x1"], &["y1"]);
    assert!(matches!(toroidalize(&input, 8), Err(StepError::InvalidGerm { germ: 0, .. })));
}

#[test]
fn traces_are_byte_stable() {
    let input = germ("x1^4", "x1 x2 - x1^2", &["x1"], &["y1"]);
    let (s1, r1) = toroidalize(&input, DEFAULT_MAX_STEPS).unwrap();
    let (s2, r2) = toroidalize(&input, DEFAULT_MAX_STEPS).unwrap();
    assert_eq!(trace_json(&s1.events, Some(&r1.atlas)), trace_json(&s2.events, Some(&r2.atlas)));
    let seqs: Vec<u64> = s1.events.iter().map(|e| e.seq).collect();
    assert!(seqs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn dot_graphs_are_forests_over_all_germs() {
    let input = germ("x1^4", "x1 x2 - x1^2", &["x1"], &["y1"]);
    let (s, _) = toroidalize(&input, DEFAULT_MAX_STEPS).unwrap();
    let x = dot_x(&s, &s.subcases);
    let y = dot_y(&s);
    let count = |dot: &str, pat: &str| dot.lines().filter(|l| l.contains(pat)).count();
    let nodes = |dot: &str| dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
    assert_eq!(nodes(&x), s.x.len());
    assert_eq!(nodes(&y), s.y.len());
    // One root per side, so a forest has one edge fewer than nodes.
    assert_eq!(count(&x, "->"), s.x.len() - 1);
    assert_eq!(count(&y, "->"), s.y.len() - 1);
    assert!(x.contains("1p1q1"));
}

#[test]
fn divisor_agrees_across_charts() {
    let input = germ("x1^4", "x1 x2 - x1^2", &["x1"], &["y1"]);
    let (s, _) = toroidalize(&input, DEFAULT_MAX_STEPS).unwrap();
    assert!(ramification_divisor(&s).unwrap().is_zero());
}
