//! Exact arithmetic over the rationals: sparse bivariate polynomials,
//! reduced fractions, univariate helpers, gcds and a small text parser.

mod frac;
mod gcd;
mod parse;
mod poly;
mod uni;

pub use frac::Frac2;
pub use gcd::{gcd2, reduce_fraction};
pub use parse::{parse_poly, VarSet};
pub use poly::{Monomial2, Poly2};
pub use uni::{rational_roots, RootSet, UniPoly};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(n.into(), d.into())
}

/// Renders a rational as `n` or `n/d`.
pub fn scalar_text(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Coordinate axis `{x_i = 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    One,
    Two,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::One, Axis::Two];

    pub fn index(self) -> usize {
        match self {
            Axis::One => 0,
            Axis::Two => 1,
        }
    }

    pub fn other(self) -> Axis {
        match self {
            Axis::One => Axis::Two,
            Axis::Two => Axis::One,
        }
    }
}

/// Affine chart of a point blowup. `First` keeps coordinate 1 and divides
/// coordinate 2 by it; `Second` keeps coordinate 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Chart {
    First,
    Second,
}

impl Chart {
    pub fn other(self) -> Chart {
        match self {
            Chart::First => Chart::Second,
            Chart::Second => Chart::First,
        }
    }

    /// The exceptional divisor of the blowup is this axis in the chart.
    pub fn exceptional_axis(self) -> Axis {
        match self {
            Chart::First => Axis::One,
            Chart::Second => Axis::Two,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} of the zero polynomial")]
    ZeroPolynomial(&'static str),
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes at the origin")]
    SingularAtOrigin,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
