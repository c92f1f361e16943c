use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{scalar_text, AlgebraError, Axis, Chart, Scalar, UniPoly};

/// Exponent pair of `x1^e1 * x2^e2`. The derived order is lexicographic with
/// `x1 > x2`, so the last key of a polynomial is its lex-greatest term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial2 {
    pub e1: u32,
    pub e2: u32,
}

impl Monomial2 {
    pub const ONE: Monomial2 = Monomial2 { e1: 0, e2: 0 };

    pub fn new(e1: u32, e2: u32) -> Self {
        Monomial2 { e1, e2 }
    }

    pub fn exp(self, axis: Axis) -> u32 {
        match axis {
            Axis::One => self.e1,
            Axis::Two => self.e2,
        }
    }

    pub fn total(self) -> u32 {
        self.e1 + self.e2
    }

    pub fn divides(self, other: Monomial2) -> bool {
        self.e1 <= other.e1 && self.e2 <= other.e2
    }

    fn mul(self, other: Monomial2) -> Monomial2 {
        Monomial2::new(self.e1 + other.e1, self.e2 + other.e2)
    }
}

/// Sparse polynomial in `x1, x2` over the rationals. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<Monomial2, Scalar>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn one() -> Self {
        Poly2::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly2::term(c, 0, 0)
    }

    pub fn term(c: Scalar, e1: u32, e2: u32) -> Self {
        let mut p = Poly2::zero();
        p.add_term(Monomial2::new(e1, e2), c);
        p
    }

    /// `x1^e1 x2^e2` with coefficient one.
    pub fn monomial(e1: u32, e2: u32) -> Self {
        Poly2::term(Scalar::one(), e1, e2)
    }

    pub fn var(axis: Axis) -> Self {
        match axis {
            Axis::One => Poly2::monomial(1, 0),
            Axis::Two => Poly2::monomial(0, 1),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial2, Scalar)>>(it: I) -> Self {
        let mut p = Poly2::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial2, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial2, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial2) -> Scalar {
        self.terms.get(&m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(Monomial2::ONE).is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial2::ONE)
    }

    /// Lex-greatest term.
    pub fn leading(&self) -> Option<(Monomial2, &Scalar)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total()).max()
    }

    pub fn degree_in(&self, axis: Axis) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(axis)).max()
    }

    pub fn scale(&self, c: &Scalar) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn shift_monomial(&self, by: Monomial2) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(m, a)| (m.mul(by), a.clone())).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Poly2 {
        let mut base = self.clone();
        let mut acc = Poly2::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales so that the lex-greatest coefficient is one.
    pub fn normalized(&self) -> Poly2 {
        match self.leading() {
            None => Poly2::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn partial_derivative(&self, axis: Axis) -> Poly2 {
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            let e = m.exp(axis);
            if e == 0 {
                continue;
            }
            let dm = match axis {
                Axis::One => Monomial2::new(m.e1 - 1, m.e2),
                Axis::Two => Monomial2::new(m.e1, m.e2 - 1),
            };
            out.add_term(dm, c * Scalar::from_integer(e.into()));
        }
        out
    }

    /// Pulls back along the blowup chart map: `First` substitutes
    /// `x2 <- x1*x2`, `Second` substitutes `x1 <- x1*x2`.
    pub fn substitute_blowup(&self, chart: Chart) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let nm = match chart {
                        Chart::First => Monomial2::new(m.e1 + m.e2, m.e2),
                        Chart::Second => Monomial2::new(m.e1, m.e1 + m.e2),
                    };
                    (nm, c.clone())
                })
                .collect(),
        }
    }

    /// Substitutes `x_axis <- x_axis + c`.
    pub fn shift_axis(&self, axis: Axis, c: &Scalar) -> Poly2 {
        if c.is_zero() {
            return self.clone();
        }
        let var = Poly2::var(axis);
        let shifted = &var + &Poly2::constant(c.clone());
        let other = axis.other();
        let mut out = Poly2::zero();
        // group by exponent of the shifted variable so each power is expanded once
        let mut by_power: BTreeMap<u32, Poly2> = BTreeMap::new();
        for (m, a) in &self.terms {
            let rest = match other {
                Axis::One => Monomial2::new(m.e1, 0),
                Axis::Two => Monomial2::new(0, m.e2),
            };
            by_power.entry(m.exp(axis)).or_default().add_term(rest, a.clone());
        }
        let mut power = Poly2::one();
        let mut k = 0;
        for (e, rest) in by_power {
            while k < e {
                power = &power * &shifted;
                k += 1;
            }
            out = &out + &(&rest * &power);
        }
        out
    }

    /// `x2 <- x2 + c`.
    pub fn shift_axis2(&self, c: &Scalar) -> Poly2 {
        self.shift_axis(Axis::Two, c)
    }

    pub fn swap_vars(&self) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial2::new(m.e2, m.e1), c.clone()))
                .collect(),
        }
    }

    /// Order of vanishing along `{x_axis = 0}`; `None` for the zero
    /// polynomial (infinite order).
    pub fn axis_valuation(&self, axis: Axis) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(axis)).min()
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Option<Monomial2> {
        Some(Monomial2::new(
            self.axis_valuation(Axis::One)?,
            self.axis_valuation(Axis::Two)?,
        ))
    }

    /// Writes `p = x1^i x2^j * r` with `r` divisible by neither variable.
    pub fn monomial_split(&self) -> Result<(u32, u32, Poly2), AlgebraError> {
        let m = self
            .monomial_content()
            .ok_or(AlgebraError::ZeroPolynomial("monomial split"))?;
        Ok((m.e1, m.e2, self.divide_monomial(m)))
    }

    /// Like [`Poly2::monomial_split`] but only factors out the listed axes.
    pub fn split_axes(&self, axes: [bool; 2]) -> Result<(u32, u32, Poly2), AlgebraError> {
        let m = self
            .monomial_content()
            .ok_or(AlgebraError::ZeroPolynomial("monomial split"))?;
        let m = Monomial2::new(
            if axes[0] { m.e1 } else { 0 },
            if axes[1] { m.e2 } else { 0 },
        );
        Ok((m.e1, m.e2, self.divide_monomial(m)))
    }

    pub fn divide_monomial(&self, m: Monomial2) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    debug_assert!(m.divides(*k));
                    (Monomial2::new(k.e1 - m.e1, k.e2 - m.e2), c.clone())
                })
                .collect(),
        }
    }

    pub fn eval_origin(&self) -> Scalar {
        self.coeff(Monomial2::ONE)
    }

    pub fn eval(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            acc += c * num_traits::pow(a.clone(), m.e1 as usize) * num_traits::pow(b.clone(), m.e2 as usize);
        }
        acc
    }

    /// Sets `x_axis = 0`; the result is a polynomial in the other variable.
    pub fn restrict_axis(&self, axis: Axis) -> UniPoly {
        let other = axis.other();
        let mut coeffs: Vec<Scalar> = Vec::new();
        for (m, c) in &self.terms {
            if m.exp(axis) != 0 {
                continue;
            }
            let k = m.exp(other) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Scalar::zero());
            }
            coeffs[k] += c;
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// Substitutes `x1 <- a`, `x2 <- b` for polynomials `a`, `b`.
    pub fn compose(&self, a: &Poly2, b: &Poly2) -> Poly2 {
        let mut pa: Vec<Poly2> = vec![Poly2::one()];
        let mut pb: Vec<Poly2> = vec![Poly2::one()];
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            while pa.len() <= m.e1 as usize {
                let next = pa.last().unwrap() * a;
                pa.push(next);
            }
            while pb.len() <= m.e2 as usize {
                let next = pb.last().unwrap() * b;
                pb.push(next);
            }
            out = &out + &(&pa[m.e1 as usize] * &pb[m.e2 as usize]).scale(c);
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &Poly2) -> Option<Poly2> {
        let (dm, dc) = d.leading()?;
        let dc_inv = dc.recip();
        let mut rem = self.clone();
        let mut quo = Poly2::zero();
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let qm = Monomial2::new(rm.e1 - dm.e1, rm.e2 - dm.e2);
            let qc = rc * &dc_inv;
            rem = &rem - &d.shift_monomial(qm).scale(&qc);
            quo.add_term(qm, qc);
        }
        Some(quo)
    }

    /// Views the polynomial as a polynomial in `x1` with coefficients in
    /// `Q[x2]`; index `k` holds the coefficient of `x1^k`.
    pub(crate) fn to_x1_coeffs(&self) -> Vec<UniPoly> {
        let deg = self.degree_in(Axis::One).unwrap_or(0) as usize;
        let mut raw: Vec<Vec<Scalar>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let row = &mut raw[m.e1 as usize];
            let k = m.e2 as usize;
            if row.len() <= k {
                row.resize(k + 1, Scalar::zero());
            }
            row[k] += c;
        }
        raw.into_iter().map(UniPoly::from_coeffs).collect()
    }

    pub(crate) fn from_x1_coeffs(coeffs: &[UniPoly]) -> Poly2 {
        let mut p = Poly2::zero();
        for (i, u) in coeffs.iter().enumerate() {
            for (j, c) in u.coeffs().iter().enumerate() {
                p.add_term(Monomial2::new(i as u32, j as u32), c.clone());
            }
        }
        p
    }

    pub fn to_text(&self, names: [&str; 2]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || *m == Monomial2::ONE {
                factors.push(scalar_text(&mag));
            }
            for (name, e) in [(names[0], m.e1), (names[1], m.e2)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(["x1", "x2"]))
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

impl<'a> Add<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(*m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly2> for Poly2 {
            type Output = Poly2;
            fn $f(self, rhs: Poly2) -> Poly2 {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}
