#![allow(dead_code)]

use num_traits::Zero;
use rand::Rng;
use toro_core::algebra::{int, Axis, Monomial2, Poly2, Scalar, UniPoly};
use toro_core::model::{validate_germ, GermInput};

pub fn germ(f1: &str, f2: &str, bx: &[&str], by: &[&str]) -> GermInput {
    GermInput::parse(f1, f2, bx, by).unwrap()
}

/// Exponent data a germ was built from; `None` stands for an empty
/// minimum.
#[derive(Clone, Copy, Debug)]
pub struct Built {
    pub a: u32,
    pub b: u32,
    pub i_o: u32,
    pub j_o: u32,
    pub i_s: Option<u32>,
    pub j_s: Option<u32>,
}

/// `(x1^a, x1^i_o x2 + c x1^i_s + x1^(i_o+1) x2^2)` over one boundary
/// component on each side.
pub fn s1p1q1(a: u32, i_o: u32, i_s: Option<u32>, c: i64) -> (GermInput, Built) {
    let mut f2 = format!("x1^{i_o} x2 + x1^{} x2^2", i_o + 1);
    if let Some(i_s) = i_s {
        f2 += &format!(" + ({c}) x1^{i_s}");
    }
    let g = germ(&format!("x1^{a}"), &f2, &["x1"], &["y1"]);
    (g, Built { a, b: 0, i_o, j_o: 0, i_s, j_s: None })
}

/// `(x1^a x2^b, x1^i_o + x1^(i_o+1) x2 + c x1^(k a) x2^(k b))`; the last
/// term is collinear with `(a, b)` and the middle one is dropped when it
/// would be.
pub fn s2p1q1(a: u32, b: u32, i_o: u32, k: Option<u32>, c: i64) -> (GermInput, Built) {
    let mut f2 = format!("x1^{i_o}");
    if (i_o + 1) * b != a {
        f2 += &format!(" + x1^{} x2", i_o + 1);
    }
    if let Some(k) = k {
        f2 += &format!(" + ({c}) x1^{} x2^{}", k * a, k * b);
    }
    let g = germ(&format!("x1^{a} x2^{b}"), &f2, &["x1", "x2"], &["y1"]);
    (g, Built { a, b, i_o, j_o: 0, i_s: k.map(|k| k * a), j_s: k.map(|k| k * b) })
}

/// `(x1^a x2^b, x1^i_o x2^j_o + x1^(i_o+1) x2^(j_o+1) + c x1^(k a) x2^(k b))`
/// with `a j_o != b i_o`, dropping the middle term when it is collinear
/// with `(a, b)`.
pub fn s2p1q2(a: u32, b: u32, i_o: u32, j_o: u32, k: Option<u32>, c: i64) -> (GermInput, Built) {
    assert_ne!(a * j_o, b * i_o);
    let mut f2 = format!("x1^{i_o} x2^{j_o}");
    if (i_o + 1) * b != (j_o + 1) * a {
        f2 += &format!(" + x1^{} x2^{}", i_o + 1, j_o + 1);
    }
    if let Some(k) = k {
        f2 += &format!(" + ({c}) x1^{} x2^{}", k * a, k * b);
    }
    let g = germ(&format!("x1^{a} x2^{b}"), &f2, &["x1", "x2"], &["y1"]);
    (g, Built { a, b, i_o, j_o, i_s: k.map(|k| k * a), j_s: k.map(|k| k * b) })
}

/// Coefficient of the first component after one step, read off the
/// building exponents.
pub fn expected_g1(d: &Built) -> u32 {
    let m = d.i_s.map_or(d.i_o, |s| s.min(d.i_o));
    if d.a >= m {
        d.i_o - m
    } else {
        d.i_o - d.a
    }
}

pub fn expected_g2(d: &Built) -> u32 {
    let m = d.j_s.map_or(d.j_o, |s| s.min(d.j_o));
    if d.b >= m {
        d.j_o - m
    } else {
        d.j_o - d.b
    }
}

fn random_term<R: Rng>(rng: &mut R, max: u32) -> String {
    format!(
        "({}) x1^{} x2^{}",
        rng.gen_range(-3i64..=3),
        rng.gen_range(0..=max),
        rng.gen_range(0..=max)
    )
}

/// A random germ built as monomial times unit plus a few extra terms, with
/// random boundaries. Often invalid; callers filter with the validator.
pub fn random_germ<R: Rng>(rng: &mut R) -> GermInput {
    let bx_choices: [&[&str]; 3] = [&["x1"], &["x2"], &["x1", "x2"]];
    let by_choices: [&[&str]; 3] = [&["y1"], &["y2"], &["y1", "y2"]];
    let bx = bx_choices[rng.gen_range(0..3)];
    let by = by_choices[rng.gen_range(0..3)];
    let pull = |rng: &mut R| {
        let (e1, e2) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let mut f = format!("x1^{e1} x2^{e2} (1 + {})", random_term(rng, 2));
        for _ in 0..rng.gen_range(0..=2) {
            f += &format!(" + {}", random_term(rng, 5));
        }
        f
    };
    let f1 = pull(rng);
    let f2 = pull(rng);
    GermInput::parse(&f1, &f2, bx, by).expect("generated text parses")
}

pub fn random_valid_germ<R: Rng>(rng: &mut R) -> GermInput {
    loop {
        let g = random_germ(rng);
        if validate_germ(&g.local_map()).is_ok() {
            return g;
        }
    }
}

/// Coprimality decided by specializing one variable at a time: a common
/// factor involving `x1` survives every specialization `x2 = c` that keeps
/// both leading coefficients in `x1`, and symmetrically for `x2`.
pub fn coprime_by_specialization(a: &Poly2, b: &Poly2) -> bool {
    fn no_factor_in(a: &Poly2, b: &Poly2, axis: Axis) -> bool {
        let other = axis.other();
        let da = a.degree_in(axis).unwrap();
        let db = b.degree_in(axis).unwrap();
        if da == 0 || db == 0 {
            return true;
        }
        for c in -15i64..=15 {
            let c = int(c);
            let spec = |p: &Poly2, d: u32| -> Option<UniPoly> {
                let mut coeffs = vec![Scalar::zero(); d as usize + 1];
                for (m, k) in p.terms() {
                    let v = num_traits::pow(c.clone(), m.exp(other) as usize);
                    coeffs[m.exp(axis) as usize] += k * v;
                }
                let u = UniPoly::from_coeffs(coeffs);
                (u.degree() == Some(d as usize)).then_some(u)
            };
            if let (Some(ua), Some(ub)) = (spec(a, da), spec(b, db)) {
                if ua.gcd(&ub).degree() == Some(0) {
                    return true;
                }
            }
        }
        false
    }
    no_factor_in(a, b, Axis::One) && no_factor_in(a, b, Axis::Two)
}

/// Random polynomial with up to `terms` terms of degree at most `deg` in
/// each variable and small integer coefficients; never zero.
pub fn random_poly<R: Rng>(rng: &mut R, deg: u32, terms: usize) -> Poly2 {
    loop {
        let n = rng.gen_range(1..=terms);
        let p = Poly2::from_terms((0..n).map(|_| {
            let m = Monomial2::new(rng.gen_range(0..=deg), rng.gen_range(0..=deg));
            (m, int(rng.gen_range(-5i64..=5)))
        }));
        if !p.is_zero() {
            return p;
        }
    }
}
