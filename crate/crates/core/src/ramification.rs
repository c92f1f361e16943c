//! Logarithmic ramification: the function `r_log` with
//! `f^* (dlog y1 ^ dlog y2) = r_log * (dlog x1 ^ dlog x2)` (boundary
//! coordinates only get a `dlog`), its divisor, and the subcase taxonomy.

use num_traits::Zero;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Axis, Frac2, Monomial2, Poly2};
use crate::model::{validate_germ, validate_unless_degenerate, Diagnostic, Ext, LocalMap};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Invalid(#[from] Diagnostic),
    #[error("no boundary component passes through the point")]
    NotBoundaryPoint,
    #[error("axis is not a boundary component")]
    NotBoundaryAxis,
    #[error("boundary component maps outside the target boundary")]
    ImageOutsideBoundary,
    #[error("impossible configuration {0} reached")]
    Impossible(&'static str),
}

/// `r_log = J * prod(x boundary coords) / prod(pulled back y boundary coords)`.
pub fn log_jacobian(map: &LocalMap) -> Frac2 {
    match log_jacobian_parts(map) {
        Some((num, den)) => Frac2::new(num, den).expect("nonzero boundary pullback"),
        None => Frac2::zero(),
    }
}

/// Unreduced `r_log`, or `None` when a boundary pullback vanishes. For a
/// valid germ the denominator is a monomial times a unit at the origin, so
/// valuations and the unit test can be read off without reducing.
pub(crate) fn log_jacobian_parts(map: &LocalMap) -> Option<(Poly2, Poly2)> {
    let (mut num, mut den) = map.jacobian_parts();
    for axis in Axis::BOTH {
        if map.x_boundary[axis.index()] {
            num = &num * &Poly2::var(axis);
        }
        if map.y_boundary[axis.index()] {
            let pull = &map.pulls[axis.index()];
            if pull.is_zero() {
                return None;
            }
            num = &num * pull.den();
            den = &den * pull.num();
        }
    }
    Some((num, den))
}

/// Whether `r_log` is a unit at the origin. A germ with identically zero
/// Jacobian is reported as not toroidal.
pub fn toroidal_at(map: &LocalMap) -> Result<bool, Diagnostic> {
    if !validate_unless_degenerate(map)? {
        return Ok(false);
    }
    let (num, den) = log_jacobian_parts(map).expect("valid germ");
    let (a1, a2, rn) = num.monomial_split().expect("dominant germ");
    let (b1, b2, rd) = den.monomial_split().expect("nonzero denominator");
    Ok((a1, a2) == (b1, b2) && !rn.eval_origin().is_zero() && !rd.eval_origin().is_zero())
}

/// Order of `r_log` along a boundary axis.
pub fn component_coefficient(map: &LocalMap, axis: Axis) -> Result<u32, ClassifyError> {
    validate_germ(map)?;
    if !map.x_boundary[axis.index()] {
        return Err(ClassifyError::NotBoundaryAxis);
    }
    let (num, den) = log_jacobian_parts(map).expect("valid germ");
    let v = num.axis_valuation(axis).expect("dominant germ") as i64
        - den.axis_valuation(axis).expect("nonzero denominator") as i64;
    u32::try_from(v).map_err(|_| ClassifyError::Invalid(Diagnostic::NotDominant))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Image {
    OntoPoint,
    /// Dominates the target boundary component on this axis.
    OntoComponent(Axis),
}

pub fn component_image(map: &LocalMap, axis: Axis) -> Result<Image, ClassifyError> {
    if !map.x_boundary[axis.index()] {
        return Err(ClassifyError::NotBoundaryAxis);
    }
    let vanish: Vec<bool> = map
        .pulls
        .iter()
        .map(|p| p.num().restrict_axis(axis).is_zero())
        .collect();
    if vanish[0] && vanish[1] {
        return Ok(Image::OntoPoint);
    }
    for target in Axis::BOTH {
        if map.y_boundary[target.index()] && vanish[target.index()] {
            return Ok(Image::OntoComponent(target));
        }
    }
    Err(ClassifyError::ImageOutsideBoundary)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Subcase {
    S2p2q0,
    S2p2q1,
    S2p2q2,
    S1p2q1,
    S1p1q0,
    S1p1q1,
    S2p1q1,
    S2p1q2,
}

impl Subcase {
    pub const ALL: [Subcase; 8] = [
        Subcase::S2p2q0,
        Subcase::S2p2q1,
        Subcase::S2p2q2,
        Subcase::S1p2q1,
        Subcase::S1p1q0,
        Subcase::S1p1q1,
        Subcase::S2p1q1,
        Subcase::S2p1q2,
    ];

    pub fn target_is_two(self) -> bool {
        matches!(self, Subcase::S2p2q0 | Subcase::S2p2q1 | Subcase::S2p2q2 | Subcase::S1p2q1)
    }

    pub fn name(self) -> &'static str {
        match self {
            Subcase::S2p2q0 => "2p2q0",
            Subcase::S2p2q1 => "2p2q1",
            Subcase::S2p2q2 => "2p2q2",
            Subcase::S1p2q1 => "1p2q1",
            Subcase::S1p1q0 => "1p1q0",
            Subcase::S1p1q1 => "1p1q1",
            Subcase::S2p1q1 => "2p1q1",
            Subcase::S2p1q2 => "2p1q2",
        }
    }
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Subcase with its exponent data. Exponents are read after putting the
/// boundary on axis 1 where the subcase singles out one component. For a
/// target with two boundary components `(a, b, i_o, j_o)` hold the exponent
/// matrix `[[a, b], [i_o, j_o]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubcaseData {
    pub subcase: Subcase,
    pub a: u32,
    pub b: u32,
    pub i_o: Ext,
    pub j_o: Ext,
    pub i_s: Ext,
    pub j_s: Ext,
    pub swapped_x: bool,
    pub swapped_y: bool,
}

impl SubcaseData {
    pub fn matrix(&self) -> Option<[[u32; 2]; 2]> {
        if !self.subcase.target_is_two() {
            return None;
        }
        Some([[self.a, self.b], [self.i_o.fin()?, self.j_o.fin()?]])
    }

    pub fn det(&self) -> Option<i64> {
        self.matrix()
            .map(|m| m[0][0] as i64 * m[1][1] as i64 - m[0][1] as i64 * m[1][0] as i64)
    }
}

/// Valuations of both pulls along both axes, rows indexed by pull.
pub fn exponent_matrix(map: &LocalMap) -> [[i64; 2]; 2] {
    let mut m = [[0i64; 2]; 2];
    for (r, p) in map.pulls.iter().enumerate() {
        for axis in Axis::BOTH {
            m[r][axis.index()] = p.axis_valuation(axis).unwrap_or(0);
        }
    }
    m
}

fn val(p: &Frac2, axis: Axis) -> u32 {
    p.axis_valuation(axis).unwrap_or(0).max(0) as u32
}

/// Terms of the power series of a pull, to a depth sufficient for the data
/// read off it.
fn series_terms(p: &Frac2) -> Vec<Monomial2> {
    let series = if p.is_polynomial() {
        p.num().clone()
    } else {
        let deg = p.num().total_degree().unwrap_or(0) + p.den().total_degree().unwrap_or(0) + 6;
        p.taylor(deg).expect("regular pull")
    };
    series.terms().map(|(m, _)| *m).collect()
}

fn min_over<F: Fn(&Monomial2) -> bool, G: Fn(&Monomial2) -> u32>(
    terms: &[Monomial2],
    keep: F,
    key: G,
) -> Ext {
    terms.iter().filter(|m| keep(m)).map(key).min().into()
}

fn lexmin_collinear(terms: &[Monomial2], a: u32, b: u32) -> (Ext, Ext) {
    let det0 = |m: &Monomial2| a as i64 * m.e2 as i64 - b as i64 * m.e1 as i64 == 0;
    match terms.iter().filter(|m| det0(m)).min_by_key(|m| (m.e1, m.e2)) {
        Some(m) => (Ext::Fin(m.e1), Ext::Fin(m.e2)),
        None => (Ext::Inf, Ext::Inf),
    }
}

pub fn classify_subcase(map: &LocalMap) -> Result<SubcaseData, ClassifyError> {
    validate_germ(map)?;
    let nx = map.x_boundary_count();
    let ny = map.y_boundary_count();
    if nx == 0 || ny == 0 {
        return Err(ClassifyError::NotBoundaryPoint);
    }
    let mut m = map.clone();
    let mut swapped_x = false;
    let mut swapped_y = false;
    if ny == 1 && !m.y_boundary[0] {
        m = m.swap_y();
        swapped_y = true;
    }
    let onto = |m: &LocalMap, axis: Axis| -> Result<bool, ClassifyError> {
        Ok(component_image(m, axis)? == Image::OntoPoint)
    };
    if nx == 1 && !m.x_boundary[0] {
        m = m.swap_x();
        swapped_x = true;
    }
    if nx == 2 && ny == 1 && !onto(&m, Axis::One)? && onto(&m, Axis::Two)? {
        m = m.swap_x();
        swapped_x = true;
    }
    let [p1, p2] = &m.pulls;
    let mut data = SubcaseData {
        subcase: Subcase::S1p1q0,
        a: val(p1, Axis::One),
        b: val(p1, Axis::Two),
        i_o: Ext::Inf,
        j_o: Ext::Inf,
        i_s: Ext::Inf,
        j_s: Ext::Inf,
        swapped_x,
        swapped_y,
    };
    let matrix_row2 = |d: &mut SubcaseData| {
        d.i_o = Ext::Fin(val(p2, Axis::One));
        d.j_o = Ext::Fin(val(p2, Axis::Two));
    };
    match (nx, ny) {
        (1, 1) => {
            let terms = series_terms(p2);
            if onto(&m, Axis::One)? {
                data.subcase = Subcase::S1p1q1;
                data.b = 0;
                data.i_o = min_over(&terms, |t| t.e2 > 0, |t| t.e1);
                data.i_s = min_over(&terms, |t| t.e2 == 0, |t| t.e1);
            } else {
                data.subcase = Subcase::S1p1q0;
                data.b = 0;
                data.j_o = min_over(&terms, |t| t.e1 == 0, |t| t.e2);
            }
        }
        (1, 2) => {
            if !onto(&m, Axis::One)? {
                return Err(ClassifyError::Impossible("1p2q0"));
            }
            data.subcase = Subcase::S1p2q1;
            matrix_row2(&mut data);
        }
        (2, 1) => {
            let o1 = onto(&m, Axis::One)?;
            let o2 = onto(&m, Axis::Two)?;
            let terms = series_terms(p2);
            let (a, b) = (data.a, data.b);
            let det_nonzero = |t: &Monomial2| a as i64 * t.e2 as i64 - b as i64 * t.e1 as i64 != 0;
            let (i_s, j_s) = lexmin_collinear(&terms, a, b);
            data.i_s = i_s;
            data.j_s = j_s;
            match (o1, o2) {
                (false, false) => return Err(ClassifyError::Impossible("2p1q0")),
                (true, true) => {
                    data.subcase = Subcase::S2p1q2;
                    data.i_o = min_over(&terms, det_nonzero, |t| t.e1);
                    data.j_o = min_over(&terms, det_nonzero, |t| t.e2);
                }
                _ => {
                    data.subcase = Subcase::S2p1q1;
                    data.i_o = min_over(&terms, |t| t.e2 == 0, |t| t.e1);
                }
            }
        }
        (2, 2) => {
            let count = [Axis::One, Axis::Two]
                .iter()
                .map(|a| onto(&m, *a))
                .collect::<Result<Vec<bool>, _>>()?
                .into_iter()
                .filter(|b| *b)
                .count();
            data.subcase = [Subcase::S2p2q0, Subcase::S2p2q1, Subcase::S2p2q2][count];
            matrix_row2(&mut data);
        }
        _ => unreachable!("at most two boundary axes"),
    }
    Ok(data)
}
