use std::cmp::Ordering;

use proptest::prelude::*;
use toro_core::algebra::{int, ratio, Axis, Frac2};
use toro_core::input::{InputSpec, SpecError};
use toro_core::model::{
    compare_divisors, identify_overlap_point, validate_germ, ComponentId, Diagnostic, GermInput,
    InputError, LocalMap, Side, WeilDivisor,
};

fn germ(f1: &str, f2: &str, bx: &[&str], by: &[&str]) -> LocalMap {
    GermInput::parse(f1, f2, bx, by).unwrap().local_map()
}

fn g(n: u8) -> ComponentId {
    ComponentId::original(Side::SourceX, if n == 1 { Axis::One } else { Axis::Two })
}

fn e(n: u32) -> ComponentId {
    ComponentId::exceptional(Side::SourceX, n)
}

fn divisor(entries: &[(ComponentId, u32)]) -> WeilDivisor {
    entries.iter().copied().collect()
}

#[test]
fn validator_accepts_identity_and_cusp_like_germ() {
    assert_eq!(validate_germ(&germ("x1", "x2", &["x1"], &["y1"])), Ok(()));
    assert_eq!(validate_germ(&germ("x1^2", "x1^3 + x1 x2", &["x1"], &["y1"])), Ok(()));
    assert_eq!(
        validate_germ(&germ("x1^2", "x2^2", &["x1", "x2"], &["y1", "y2"])),
        Ok(())
    );
}

#[test]
fn validator_names_the_failed_clause() {
    let m = germ("x1", "x1 + x2^2", &["x1"], &["y1"]);
    match validate_germ(&m) {
        Err(Diagnostic::JacobianResidualVanishes(r)) => assert_eq!(r, "2*x2"),
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(
        validate_germ(&germ("x1", "x2", &["x1", "x2"], &["y1"])),
        Err(Diagnostic::BoundaryMismatch { found: [true, false], declared: [true, true] })
    );
    assert_eq!(
        validate_germ(&germ("x1 + x1 x2 + x2^2", "x2", &["x1"], &["y1"])),
        Err(Diagnostic::BoundaryMismatch { found: [false, false], declared: [true, false] })
    );
    assert_eq!(
        validate_germ(&germ("x1^2", "x1^3", &["x1"], &["y1"])),
        Err(Diagnostic::NotDominant)
    );
    assert!(matches!(
        validate_germ(&germ("x1 + 1", "x2", &["x1"], &["y1"])),
        Err(Diagnostic::CenterNotMapped(_))
    ));
    let pole = LocalMap {
        pulls: [
            Frac2::new("x1".parse().unwrap(), "x2".parse().unwrap()).unwrap(),
            Frac2::from_poly("x2".parse().unwrap()),
        ],
        x_boundary: [true, false],
        y_boundary: [true, false],
    };
    assert!(matches!(validate_germ(&pole), Err(Diagnostic::PoleAtOrigin(_))));
}

#[test]
fn divisor_order_examples() {
    let left = divisor(&[(g(1), 3), (g(2), 1)]);
    let right = divisor(&[(e(4), 3), (e(7), 1)]);
    assert_eq!(compare_divisors(&left, &right), Ordering::Equal);
    assert_eq!(
        compare_divisors(&divisor(&[(g(1), 3)]), &divisor(&[(g(1), 2), (g(2), 2)])),
        Ordering::Greater
    );
    assert_eq!(compare_divisors(&WeilDivisor::new(), &divisor(&[(g(1), 1)])), Ordering::Less);
    assert_eq!(
        compare_divisors(&divisor(&[(g(1), 2), (g(2), 1)]), &divisor(&[(g(1), 2)])),
        Ordering::Greater
    );
}

#[test]
fn zero_coefficients_are_not_stored() {
    let mut d = divisor(&[(g(1), 2), (g(2), 0)]);
    assert_eq!(d.iter().count(), 1);
    d.set(g(1), 0);
    assert!(d.is_zero());
    assert_eq!(d.sorted_key().0, Vec::<u32>::new());
}

#[test]
fn component_names() {
    let names: Vec<String> = [
        g(1),
        g(2),
        e(3),
        ComponentId::original(Side::TargetY, Axis::Two),
        ComponentId::exceptional(Side::TargetY, 1),
    ]
    .iter()
    .map(|c| c.to_string())
    .collect();
    assert_eq!(names, ["G1", "G2", "E3", "H2", "F1"]);
}

#[test]
fn overlap_points_invert() {
    assert_eq!(identify_overlap_point(&int(1)).unwrap(), int(1));
    assert_eq!(identify_overlap_point(&int(2)).unwrap(), ratio(1, 2));
    assert_eq!(identify_overlap_point(&ratio(-3, 4)).unwrap(), ratio(-4, 3));
    assert!(identify_overlap_point(&int(0)).is_err());
}

#[test]
fn input_spec_round_trip() {
    let spec = InputSpec::from_toml(
        "f_y1 = \"x1^2\"\nf_y2 = \"x1 x2\"\nboundary_x = [\"x1\"]\nboundary_y = [\"y1\"]\nmax_steps = 5\n",
    )
    .unwrap();
    assert_eq!(spec.max_steps, Some(5));
    let input = spec.germ().unwrap();
    assert_eq!(input.x_boundary, [true, false]);
    assert_eq!(input.pulls[1].to_string(), "x1*x2");

    let bad = InputSpec::from_toml("f_y1 = \"x1\"\nf_y2 = \"x2\"\nboundary_x = [\"x1\"]\n").unwrap();
    assert!(matches!(bad.germ(), Err(SpecError::EmptyTargetBoundary)));
    assert!(InputSpec::from_toml("f_y1 = \"x1\"\nf_y2 = \"x2\"\ncolour = 1\n").is_err());
    assert!(matches!(
        GermInput::parse("x1", "x2", &["x3"], &[]),
        Err(InputError::UnknownCoordinate(_))
    ));
    assert!(matches!(
        GermInput::parse("x1 +", "x2", &[], &[]),
        Err(InputError::Poly { field: "f_y1", .. })
    ));
}

fn padded_lex(a: &[u32], b: &[u32]) -> Ordering {
    let n = a.len().max(b.len());
    let pad = |v: &[u32]| {
        let mut v = v.to_vec();
        v.sort_unstable_by(|x, y| y.cmp(x));
        v.resize(n, 0);
        v
    };
    pad(a).cmp(&pad(b))
}

proptest! {
    #[test]
    fn divisor_order_matches_padded_lex(a in prop::collection::vec(0u32..5, 0..5), b in prop::collection::vec(0u32..5, 0..5)) {
        let da: WeilDivisor = a.iter().enumerate().map(|(k, v)| (e(k as u32 + 1), *v)).collect();
        let db: WeilDivisor = b.iter().enumerate().map(|(k, v)| (e(k as u32 + 10), *v)).collect();
        prop_assert_eq!(compare_divisors(&da, &db), padded_lex(&a, &b));
        prop_assert_eq!(compare_divisors(&db, &da), padded_lex(&a, &b).reverse());
    }

    // Axis 1 maps to the target point and the data along it does not depend
    // on x2, so every point of the axis passes the same checks.
    #[test]
    fn validity_is_constant_along_a_homogeneous_axis(
        a in 1u32..4, m in 1u32..3, n in 1u32..5,
        alpha in -2i64..3, gamma in prop::sample::select(vec![-2i64, -1, 1, 3]), eps in -2i64..3,
        c in prop::sample::select(vec![(1, 1), (-1, 1), (2, 1), (1, 3), (-5, 2)]),
    ) {
        let f1 = format!("x1^{a} + ({alpha}) x1^{}", a + 1);
        let f2 = format!("({gamma}) x1^{m} x2 + ({eps}) x1^{n} + x1^{} x2^2", m + 1);
        let map = germ(&f1, &f2, &["x1"], &["y1"]);
        let shift = ratio(c.0, c.1);
        let moved = LocalMap {
            pulls: [map.pulls[0].shift_axis(Axis::Two, &shift), map.pulls[1].shift_axis(Axis::Two, &shift)],
            ..map.clone()
        };
        prop_assert_eq!(validate_germ(&map), Ok(()));
        prop_assert_eq!(validate_germ(&moved), Ok(()));
    }
}
