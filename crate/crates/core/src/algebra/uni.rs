use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{scalar_text, AlgebraError, Scalar};

/// Dense univariate polynomial, coefficients from degree 0 upwards, with no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn one() -> Self {
        UniPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: &Scalar) -> Self {
        UniPoly::from_coeffs(vec![-r.clone(), Scalar::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        UniPoly::from_coeffs(cs.iter().map(|&c| Scalar::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = vec![Scalar::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            v[i] += c;
        }
        UniPoly::from_coeffs(v)
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.scale(&-Scalar::one()))
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(v)
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, n: usize) -> UniPoly {
        let mut acc = UniPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        self.scale(&self.lc().recip())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Scalar::from_integer((i as i64).into()))
                .collect(),
        )
    }

    /// Euclidean division over the rationals.
    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), AlgebraError> {
        let dd = d.degree().ok_or(AlgebraError::ZeroDenominator)?;
        let inv = d.lc().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quo = vec![Scalar::zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::from_coeffs(quo), UniPoly::from_coeffs(rem)))
    }

    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of `x` as a factor, and the cofactor.
    fn strip_x(&self) -> (usize, UniPoly) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, UniPoly::from_coeffs(self.coeffs[k..].to_vec()))
    }

    /// Integer polynomial with the same roots, content removed.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Scalar::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => scalar_text(c),
                1 => format!("{}*{var}", scalar_text(c)),
                _ => format!("{}*{var}^{i}", scalar_text(c)),
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self.to_text("t"))
    }
}

/// Distinct rational roots in ascending order, plus whether an irreducible
/// factor of degree at least two remains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub roots: Vec<Scalar>,
    pub has_irrational_factor: bool,
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if let Some(small) = n.to_u64() {
        let mut out = Vec::new();
        let r = small.sqrt();
        for d in 1..=r {
            if small % d == 0 {
                out.push(BigInt::from(d));
                if d != small / d {
                    out.push(BigInt::from(small / d));
                }
            }
        }
        return out;
    }
    let mut out = Vec::new();
    let r = n.sqrt();
    let mut d = BigInt::one();
    while d <= r {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

/// Rational roots by the rational root theorem.
pub fn rational_roots(u: &UniPoly) -> Result<RootSet, AlgebraError> {
    if u.is_zero() {
        return Err(AlgebraError::ZeroPolynomial("roots"));
    }
    let (k, mut rest) = u.strip_x();
    let mut roots = Vec::new();
    if k > 0 {
        roots.push(Scalar::zero());
    }
    if rest.degree().unwrap_or(0) > 0 {
        let ints = rest.primitive_integer();
        let a0 = ints.first().cloned().unwrap_or_default();
        let an = ints.last().cloned().unwrap_or_default();
        let mut candidates: Vec<Scalar> = Vec::new();
        for p in positive_divisors(&a0) {
            for q in positive_divisors(&an) {
                let r = Scalar::new(p.clone(), q.clone());
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
        candidates.sort();
        candidates.dedup();
        for r in candidates {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            if rest.eval(&r).is_zero() {
                let lin = UniPoly::linear_root(&r);
                while let Some(q) = rest.div_exact(&lin) {
                    rest = q;
                }
                roots.push(r);
            }
        }
    }
    roots.sort();
    Ok(RootSet {
        roots,
        has_irrational_factor: rest.degree().unwrap_or(0) > 0,
    })
}
