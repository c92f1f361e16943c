use std::fmt;

use num_traits::Zero;

use super::{reduce_fraction, AlgebraError, Axis, Chart, Poly2, Scalar, UniPoly};

/// Reduced quotient of bivariate polynomials. The denominator is nonzero,
/// shares no factor with the numerator, and has lex-greatest coefficient one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frac2 {
    num: Poly2,
    den: Poly2,
}

impl Frac2 {
    pub fn new(num: Poly2, den: Poly2) -> Result<Frac2, AlgebraError> {
        let (num, den) = reduce_fraction(&num, &den)?;
        Ok(Frac2 { num, den })
    }

    pub fn from_poly(p: Poly2) -> Frac2 {
        Frac2 { num: p, den: Poly2::one() }
    }

    pub fn zero() -> Frac2 {
        Frac2::from_poly(Poly2::zero())
    }

    pub fn one() -> Frac2 {
        Frac2::from_poly(Poly2::one())
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &Frac2) -> Frac2 {
        if self.den == o.den {
            return Frac2::new(&self.num + &o.num, self.den.clone()).expect("nonzero den");
        }
        Frac2::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
        .expect("nonzero den")
    }

    pub fn neg(&self) -> Frac2 {
        Frac2 { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &Frac2) -> Frac2 {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Frac2) -> Frac2 {
        Frac2::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero den")
    }

    pub fn div(&self, o: &Frac2) -> Result<Frac2, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Frac2::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn sub_scalar(&self, c: &Scalar) -> Frac2 {
        self.sub(&Frac2::from_poly(Poly2::constant(c.clone())))
    }

    /// Quotient rule.
    pub fn partial_derivative(&self, axis: Axis) -> Frac2 {
        let dn = self.num.partial_derivative(axis);
        if self.den.is_one() {
            return Frac2::from_poly(dn);
        }
        let dd = self.den.partial_derivative(axis);
        Frac2::new(
            &(&dn * &self.den) - &(&self.num * &dd),
            &self.den * &self.den,
        )
        .expect("nonzero den")
    }

    pub fn substitute_blowup(&self, chart: Chart) -> Frac2 {
        Frac2::new(self.num.substitute_blowup(chart), self.den.substitute_blowup(chart))
            .expect("substitution keeps den nonzero")
    }

    pub fn shift_axis(&self, axis: Axis, c: &Scalar) -> Frac2 {
        Frac2::new(self.num.shift_axis(axis, c), self.den.shift_axis(axis, c))
            .expect("shift keeps den nonzero")
    }

    pub fn swap_vars(&self) -> Frac2 {
        Frac2::new(self.num.swap_vars(), self.den.swap_vars()).expect("nonzero den")
    }

    pub fn is_regular_at_origin(&self) -> bool {
        !self.den.eval_origin().is_zero()
    }

    pub fn eval_origin(&self) -> Result<Scalar, AlgebraError> {
        let d = self.den.eval_origin();
        if d.is_zero() {
            return Err(AlgebraError::SingularAtOrigin);
        }
        Ok(self.num.eval_origin() / d)
    }

    pub fn is_unit_at_origin(&self) -> bool {
        self.is_regular_at_origin() && !self.num.eval_origin().is_zero()
    }

    /// Order along `{x_axis = 0}` of numerator minus denominator; `None`
    /// for zero.
    pub fn axis_valuation(&self, axis: Axis) -> Option<i64> {
        let n = self.num.axis_valuation(axis)? as i64;
        let d = self.den.axis_valuation(axis).expect("nonzero den") as i64;
        Some(n - d)
    }

    /// Restriction of numerator and denominator to an axis.
    pub fn restrict_axis(&self, axis: Axis) -> (UniPoly, UniPoly) {
        (self.num.restrict_axis(axis), self.den.restrict_axis(axis))
    }

    /// Truncated power series at the origin up to the given total degree.
    pub fn taylor(&self, max_degree: u32) -> Result<Poly2, AlgebraError> {
        let d0 = self.den.eval_origin();
        if d0.is_zero() {
            return Err(AlgebraError::SingularAtOrigin);
        }
        let truncate = |p: &Poly2| {
            Poly2::from_terms(
                p.terms()
                    .filter(|(m, _)| m.total() <= max_degree)
                    .map(|(m, c)| (*m, c.clone())),
            )
        };
        if self.den.is_one() {
            return Ok(truncate(&self.num));
        }
        // 1/den = (1/d0) * sum (-e)^k with e = den/d0 - 1
        let inv0 = d0.recip();
        let e = &self.den.scale(&inv0) - &Poly2::one();
        let neg_e = -&e;
        let mut inv = Poly2::one();
        let mut power = Poly2::one();
        for _ in 0..=max_degree {
            power = truncate(&(&power * &neg_e));
            if power.is_zero() {
                break;
            }
            inv = &inv + &power;
        }
        let inv = inv.scale(&inv0);
        Ok(truncate(&(&self.num * &inv)))
    }

    pub fn to_text(&self, names: [&str; 2]) -> String {
        if self.den.is_one() {
            return self.num.to_text(names);
        }
        format!("({})/({})", self.num.to_text(names), self.den.to_text(names))
    }
}

impl From<Poly2> for Frac2 {
    fn from(p: Poly2) -> Frac2 {
        Frac2::from_poly(p)
    }
}

impl fmt::Display for Frac2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(["x1", "x2"]))
    }
}

impl fmt::Debug for Frac2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frac2({self})")
    }
}
