//! Fans in the plane: smoothness, star subdivisions and the strong
//! factorization of a pair of smooth fans through their common refinement.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ray(pub i64, pub i64);

impl Ray {
    pub fn primitive(a: i64, b: i64) -> Option<Ray> {
        let g = a.gcd(&b);
        (g != 0).then(|| Ray(a / g, b / g))
    }

    pub fn is_primitive(self) -> bool {
        self.0.gcd(&self.1) == 1
    }

    pub fn det(self, other: Ray) -> i64 {
        self.0 * other.1 - self.1 * other.0
    }

    pub fn add(self, other: Ray) -> Ray {
        Ray(self.0 + other.0, self.1 + other.1)
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("a fan needs at least two rays")]
    TooFewRays,
    #[error("ray {0} is not a primitive lattice vector")]
    NotPrimitive(Ray),
    #[error("rays do not lie in a strictly convex cone")]
    NotConvex,
    #[error("cone {0}, {1} is not smooth (det {2})")]
    NotSmooth(Ray, Ray, i64),
    #[error("fans have different supports: {0} vs {1}")]
    SupportMismatch(String, String),
    #[error("ray {0} is not inside the support")]
    OutsideSupport(Ray),
    #[error("ray {0} is already in the fan")]
    AlreadyPresent(Ray),
    #[error("exponent matrix {0:?} is not nonnegative and unimodular")]
    BadMatrix([[i64; 2]; 2]),
}

/// Complete fan of a two-dimensional strictly convex cone, stored as its
/// rays in counterclockwise order; consecutive rays span the cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fan2 {
    rays: Vec<Ray>,
}

impl Fan2 {
    pub fn new(rays: impl IntoIterator<Item = Ray>) -> Result<Fan2, FanError> {
        let set: BTreeSet<Ray> = rays.into_iter().collect();
        if set.len() < 2 {
            return Err(FanError::TooFewRays);
        }
        if let Some(r) = set.iter().find(|r| !r.is_primitive()) {
            return Err(FanError::NotPrimitive(*r));
        }
        let mut rays: Vec<Ray> = set.into_iter().collect();
        // A start ray with every other ray strictly counterclockwise and
        // less than a half turn away.
        let start = rays
            .iter()
            .copied()
            .find(|s| rays.iter().all(|r| r == s || s.det(*r) > 0))
            .ok_or(FanError::NotConvex)?;
        rays.sort_by(|p, q| {
            if p == q {
                Ordering::Equal
            } else if *p == start {
                Ordering::Less
            } else if *q == start {
                Ordering::Greater
            } else {
                0.cmp(&p.det(*q))
            }
        });
        for w in rays.windows(2) {
            if w[0].det(w[1]) <= 0 {
                return Err(FanError::NotConvex);
            }
        }
        Ok(Fan2 { rays })
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn cones(&self) -> impl Iterator<Item = (Ray, Ray)> + '_ {
        self.rays.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn support(&self) -> (Ray, Ray) {
        (self.rays[0], *self.rays.last().expect("two rays"))
    }

    pub fn is_smooth(&self) -> bool {
        self.cones().all(|(u, v)| u.det(v) == 1)
    }

    pub fn check_smooth(&self) -> Result<(), FanError> {
        match self.cones().find(|(u, v)| u.det(*v) != 1) {
            Some((u, v)) => Err(FanError::NotSmooth(u, v, u.det(v))),
            None => Ok(()),
        }
    }

    pub fn contains_ray(&self, r: Ray) -> bool {
        self.rays.contains(&r)
    }

    /// Index of the cone whose interior contains `r`.
    fn cone_containing(&self, r: Ray) -> Option<usize> {
        self.cones().position(|(u, v)| u.det(r) > 0 && r.det(v) > 0)
    }

    pub fn star_subdivide(&self, r: Ray) -> Result<Fan2, FanError> {
        if !r.is_primitive() {
            return Err(FanError::NotPrimitive(r));
        }
        if self.contains_ray(r) {
            return Err(FanError::AlreadyPresent(r));
        }
        let k = self.cone_containing(r).ok_or(FanError::OutsideSupport(r))?;
        let mut rays = self.rays.clone();
        rays.insert(k + 1, r);
        Ok(Fan2 { rays })
    }

    /// Star subdivision of a smooth cone at the sum of its rays.
    pub fn blowup_cone(&self, k: usize) -> Result<Fan2, FanError> {
        let (u, v) = self.cones().nth(k).ok_or(FanError::TooFewRays)?;
        if u.det(v) != 1 {
            return Err(FanError::NotSmooth(u, v, u.det(v)));
        }
        self.star_subdivide(u.add(v))
    }
}

impl fmt::Display for Fan2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rays.iter().map(|r| r.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "move", content = "ray")]
pub enum Move {
    /// Smooth star subdivision adding the ray.
    Up(Ray),
    /// Inverse of a smooth star subdivision, removing the ray.
    Down(Ray),
}

#[derive(Clone, Debug, Serialize)]
pub struct Factorization {
    pub ups: usize,
    pub downs: usize,
    pub common: Fan2,
    pub moves: Vec<Move>,
}

/// Smooth star subdivisions leading from `from` to `to`, which must be a
/// smooth refinement of `from`.
fn blowup_path(from: &Fan2, to: &Fan2) -> Result<Vec<Ray>, FanError> {
    let mut cur = from.clone();
    let mut path = Vec::new();
    while cur.rays.len() < to.rays.len() {
        let next = cur
            .cones()
            .map(|(u, v)| u.add(v))
            .find(|m| to.contains_ray(*m))
            .ok_or_else(|| {
                let (u, v) = cur.cones().find(|(u, v)| u.det(*v) != 1).unwrap_or(cur.support());
                FanError::NotSmooth(u, v, u.det(v))
            })?;
        cur = cur.star_subdivide(next)?;
        path.push(next);
    }
    Ok(path)
}

/// Factors the birational map between two smooth fans of the same support
/// as blowups up to the coarsest common smooth refinement followed by
/// blowdowns.
pub fn strong_factorize(a: &Fan2, b: &Fan2) -> Result<Factorization, FanError> {
    if a.support() != b.support() {
        return Err(FanError::SupportMismatch(
            format!("{} .. {}", a.support().0, a.support().1),
            format!("{} .. {}", b.support().0, b.support().1),
        ));
    }
    a.check_smooth()?;
    b.check_smooth()?;
    let common = Fan2::new(a.rays.iter().chain(&b.rays).copied())?;
    common.check_smooth()?;
    let ups = blowup_path(a, &common)?;
    let mut downs = blowup_path(b, &common)?;
    downs.reverse();
    let mut moves: Vec<Move> = ups.iter().map(|r| Move::Up(*r)).collect();
    moves.extend(downs.iter().map(|r| Move::Down(*r)));
    Ok(Factorization { ups: ups.len(), downs: downs.len(), common, moves })
}

/// Mediants visited on the way from the basis `(u, v)` down to `r`, which
/// must lie in the smooth cone they span; empty otherwise.
pub fn ancestors(u: Ray, v: Ray, r: Ray) -> Vec<Ray> {
    let (mut l, mut h) = (u, v);
    let mut out = Vec::new();
    if u.det(v) != 1 || u.det(r) < 0 || r.det(v) < 0 {
        return out;
    }
    loop {
        if r == l || r == h {
            return out;
        }
        let m = l.add(h);
        out.push(m);
        match m.det(r).cmp(&0) {
            Ordering::Equal => return out,
            Ordering::Greater => l = m,
            Ordering::Less => h = m,
        }
    }
}

/// Local fan model of a birational monomial germ with a nonnegative
/// unimodular exponent matrix: the standard quadrant, and the quadrant
/// refined so that the image of the standard cone (spanned by the matrix
/// columns) is one of its cones. The refinement adds the Stern–Brocot
/// ancestors of both columns.
pub fn germ_exponent_fan(m: [[i64; 2]; 2]) -> Result<(Fan2, Fan2), FanError> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if m.iter().flatten().any(|v| *v < 0) || det.abs() != 1 {
        return Err(FanError::BadMatrix(m));
    }
    let (e1, e2) = (Ray(1, 0), Ray(0, 1));
    let mut rays: BTreeSet<Ray> = [e1, e2].into_iter().collect();
    for col in [Ray(m[0][0], m[1][0]), Ray(m[0][1], m[1][1])] {
        rays.insert(col);
        rays.extend(ancestors(e1, e2, col));
    }
    Ok((Fan2::new([e1, e2])?, Fan2::new(rays)?))
}
