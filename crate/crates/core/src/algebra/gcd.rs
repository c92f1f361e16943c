use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{AlgebraError, Axis, Monomial2, Poly2, Scalar, UniPoly};

// Polynomials in x1 with coefficients in Q[x2], lowest degree first.
type RecPoly = Vec<UniPoly>;

fn rec_trim(mut p: RecPoly) -> RecPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rec_deg(p: &RecPoly) -> usize {
    p.len().saturating_sub(1)
}

fn rec_content(p: &RecPoly) -> UniPoly {
    p.iter().fold(UniPoly::zero(), |g, c| g.gcd(c))
}

fn rec_div_uni(p: &RecPoly, d: &UniPoly) -> RecPoly {
    p.iter()
        .map(|c| c.div_exact(d).expect("exact division in Q[x2]"))
        .collect()
}

fn rec_primitive(p: &RecPoly) -> RecPoly {
    let c = rec_content(p);
    rec_div_uni(p, &c)
}

fn rec_scale(p: &RecPoly, s: &UniPoly) -> RecPoly {
    p.iter().map(|c| c.mul(s)).collect()
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn rec_prem(a: &RecPoly, b: &RecPoly) -> RecPoly {
    let n = rec_deg(b);
    let lb = b[n].clone();
    let mut r = a.clone();
    let mut e = rec_deg(a) + 1 - n;
    while !r.is_empty() && rec_deg(&r) >= n {
        let k = rec_deg(&r) - n;
        let lr = r[rec_deg(&r)].clone();
        let mut next = rec_scale(&r, &lb);
        for (j, bc) in b.iter().enumerate() {
            next[k + j] = next[k + j].sub(&bc.mul(&lr));
        }
        r = rec_trim(next);
        e -= 1;
    }
    let f = lb.pow(e);
    rec_scale(&r, &f)
}

/// Gcd of two primitive polynomials of positive degree in x1, by the
/// subresultant remainder sequence.
fn subresultant_gcd(a: RecPoly, b: RecPoly) -> RecPoly {
    let (mut a, mut b) = if rec_deg(&a) >= rec_deg(&b) { (a, b) } else { (b, a) };
    let mut g = UniPoly::one();
    let mut h = UniPoly::one();
    loop {
        let delta = rec_deg(&a) - rec_deg(&b);
        let r = rec_prem(&a, &b);
        if r.is_empty() {
            return rec_primitive(&b);
        }
        if rec_deg(&r) == 0 {
            return vec![UniPoly::one()];
        }
        a = b;
        let div = g.mul(&h.pow(delta));
        b = rec_div_uni(&r, &div);
        g = a[rec_deg(&a)].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant h update is exact"),
        };
    }
}

// Arithmetic modulo the Mersenne prime 2^61 - 1, used only to certify
// that two polynomials are coprime.
const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

fn int_mod(n: &BigInt) -> u64 {
    let m = n % BigInt::from(P);
    let m = if m < BigInt::zero() { m + BigInt::from(P) } else { m };
    m.to_u64().expect("reduced below the modulus")
}

fn scalar_mod(s: &Scalar) -> Option<u64> {
    let d = int_mod(s.denom());
    (d != 0).then(|| mul_mod(int_mod(s.numer()), inv_mod(d)))
}

fn trim_mod(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Dense image in `F_P[x_keep]` with the other variable set to `at`.
fn specialize_mod(p: &Poly2, keep: Axis, at: u64) -> Option<Vec<u64>> {
    let other = keep.other();
    let mut out = vec![0u64; p.degree_in(keep).unwrap_or(0) as usize + 1];
    for (m, c) in p.terms() {
        let v = mul_mod(scalar_mod(c)?, pow_mod(at, m.exp(other) as u64));
        let k = m.exp(keep) as usize;
        out[k] = (out[k] + v) % P;
    }
    Some(trim_mod(out))
}

fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> Option<usize> {
    loop {
        if b.is_empty() {
            return a.len().checked_sub(1);
        }
        let lb = inv_mod(*b.last().expect("nonempty"));
        while a.len() >= b.len() {
            let q = mul_mod(*a.last().expect("nonempty"), lb);
            let shift = a.len() - b.len();
            for (j, bc) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + P - mul_mod(q, *bc)) % P;
            }
            a = trim_mod(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// True only if `p` and `q` certainly have no common factor of positive
/// degree in `keep`: an image of such a factor under a specialization
/// that keeps the leading coefficient of `p` would divide both images.
fn no_factor_in(p: &Poly2, q: &Poly2, keep: Axis) -> bool {
    let deg = p.degree_in(keep).unwrap_or(0) as usize;
    if deg == 0 || q.degree_in(keep).unwrap_or(0) == 0 {
        return true;
    }
    for at in [1_234_577u64, 98_765_431] {
        let (Some(a), Some(b)) = (specialize_mod(p, keep, at), specialize_mod(q, keep, at)) else {
            return false;
        };
        if a.len() != deg + 1 {
            continue;
        }
        if gcd_degree_mod(a, b) == Some(0) {
            return true;
        }
    }
    false
}

fn certainly_coprime(p: &Poly2, q: &Poly2) -> bool {
    no_factor_in(p, q, Axis::One) && no_factor_in(p, q, Axis::Two)
}

/// Greatest common divisor, scaled so its lex-greatest coefficient is one.
pub fn gcd2(p: &Poly2, q: &Poly2) -> Result<Poly2, AlgebraError> {
    if p.is_zero() && q.is_zero() {
        return Err(AlgebraError::BothZero);
    }
    if p.is_zero() {
        return Ok(q.normalized());
    }
    if q.is_zero() {
        return Ok(p.normalized());
    }
    let mp = p.monomial_content().expect("nonzero");
    let mq = q.monomial_content().expect("nonzero");
    let common = Poly2::monomial(mp.e1.min(mq.e1), mp.e2.min(mq.e2));
    let p1 = p.divide_monomial(mp);
    let q1 = q.divide_monomial(mq);
    if p1.is_constant() || q1.is_constant() {
        return Ok(common);
    }
    if p1.div_exact(&q1).is_some() {
        return Ok((&common * &q1).normalized());
    }
    if q1.div_exact(&p1).is_some() {
        return Ok((&common * &p1).normalized());
    }
    if certainly_coprime(&p1, &q1) {
        return Ok(common);
    }
    let pa = p1.to_x1_coeffs();
    let qa = q1.to_x1_coeffs();
    let cp = rec_content(&pa);
    let cq = rec_content(&qa);
    let c = cp.gcd(&cq);
    let pp = rec_div_uni(&pa, &cp);
    let qp = rec_div_uni(&qa, &cq);
    let g = if rec_deg(&pp) == 0 || rec_deg(&qp) == 0 {
        vec![UniPoly::one()]
    } else {
        subresultant_gcd(pp, qp)
    };
    let g = Poly2::from_x1_coeffs(&g);
    let cpoly = Poly2::from_x1_coeffs(&[c]);
    Ok((&(&common * &cpoly) * &g).normalized())
}

/// Cancels common factors and scales so the denominator's lex-greatest
/// coefficient is one.
pub fn reduce_fraction(num: &Poly2, den: &Poly2) -> Result<(Poly2, Poly2), AlgebraError> {
    if den.is_zero() {
        return Err(AlgebraError::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok((Poly2::zero(), Poly2::one()));
    }
    let mn = num.monomial_content().expect("nonzero");
    let md = den.monomial_content().expect("nonzero");
    let m = Monomial2::new(mn.e1.min(md.e1), mn.e2.min(md.e2));
    let mut n = num.divide_monomial(m);
    let mut d = den.divide_monomial(m);
    if !d.is_constant() {
        if let Some(q) = n.div_exact(&d) {
            n = q;
            d = Poly2::one();
        } else {
            let g = gcd2(&n, &d)?;
            if !g.is_one() {
                n = n.div_exact(&g).expect("gcd divides numerator");
                d = d.div_exact(&g).expect("gcd divides denominator");
            }
        }
    }
    let lead = d.leading().expect("nonzero").1.clone();
    if !lead.is_one() {
        let inv: Scalar = lead.recip();
        n = n.scale(&inv);
        d = d.scale(&inv);
    }
    Ok((n, d))
}
