//! Canonical principalization of the pulled back maximal ideal of a target
//! point: blow up source points where it is not principal until none is
//! left.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::algebra::{gcd2, rational_roots, AlgebraError, Axis, Frac2, Scalar, UniPoly};
use crate::blowup::{blowup_x, ideal_residuals, pulls_in, recenter_x, BlowupError};
use crate::model::{ComponentId, State};

/// Principal at the origin iff the gcd-free parts of the two numerators do
/// not both vanish there.
pub fn is_principal_at(pulls: &[Frac2; 2]) -> Result<bool, AlgebraError> {
    if pulls[0].is_zero() || pulls[1].is_zero() {
        return Ok(!(pulls[0].is_zero() && pulls[1].is_zero()));
    }
    let (r1, r2) = ideal_residuals(pulls)?;
    Ok(!(r1.eval_origin().is_zero() && r2.eval_origin().is_zero()))
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PrincipalizeError {
    #[error("center on x{germ} is not rational: {poly}")]
    IrrationalCenter { germ: usize, poly: String },
    #[error("principalization over y{0} exceeded {1} blowups")]
    Cap(usize, usize),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn has_root(u: &UniPoly, t: &Scalar) -> bool {
    !u.is_zero() && u.eval(t).is_zero()
}

/// Positions `t != 0` on the exceptional axis of `First` chart `owner`
/// whose points map to the origin of target germ `q`. When the whole axis
/// maps there, only the points where the pulled back ideal is not
/// principal are returned. Positions already split off are skipped.
pub fn points_over(state: &State, owner: usize, q: usize) -> Result<Vec<Scalar>, PrincipalizeError> {
    let g = &state.x[owner];
    let Some(claimed) = &g.claimed else {
        return Ok(Vec::new());
    };
    let pulls = if g.target == q {
        g.pulls.clone()
    } else {
        match pulls_in(state, &g.root_pulls, q) {
            Ok(p) => p,
            Err(AlgebraError::ZeroDenominator) => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        }
    };
    let dens: Vec<UniPoly> = pulls.iter().map(|p| p.den().restrict_axis(Axis::One)).collect();
    if dens.iter().any(|d| d.is_zero()) {
        return Ok(Vec::new());
    }
    let n1 = pulls[0].num().restrict_axis(Axis::One);
    let n2 = pulls[1].num().restrict_axis(Axis::One);
    let common = if n1.is_zero() && n2.is_zero() {
        let d = gcd2(pulls[0].num(), pulls[1].num())?;
        let r1 = pulls[0].num().div_exact(&d).expect("gcd divides");
        let r2 = pulls[1].num().div_exact(&d).expect("gcd divides");
        r1.restrict_axis(Axis::One).gcd(&r2.restrict_axis(Axis::One))
    } else {
        n1.gcd(&n2)
    };
    if common.is_zero() || common.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let roots = rational_roots(&common)?;
    if roots.has_irrational_factor {
        return Err(PrincipalizeError::IrrationalCenter {
            germ: owner,
            poly: common.to_text("t"),
        });
    }
    Ok(roots
        .roots
        .into_iter()
        .filter(|t| !t.is_zero() && !claimed.contains(t) && !dens.iter().any(|d| has_root(d, t)))
        .collect())
}

/// Outcome of principalizing over one target point.
#[derive(Clone, Debug, Default)]
pub struct Principalization {
    pub blowups: usize,
    /// New source exceptional divisors with the seed germ they lie over.
    pub exceptional: BTreeMap<ComponentId, usize>,
    /// Germs split off exceptional axes, with their seed germ.
    pub spawned: BTreeMap<usize, usize>,
}

/// Blows up non-principal points among `seeds` and everything created
/// below them, in increasing germ order, until the ideal pulled back from
/// the origin of `q` is principal everywhere over it.
pub fn canonical_principalize(
    state: &mut State,
    q: usize,
    seeds: &[usize],
    cap: usize,
) -> Result<Principalization, PrincipalizeError> {
    let mut out = Principalization::default();
    let mut origin: BTreeMap<usize, usize> = seeds.iter().map(|s| (*s, *s)).collect();
    let mut queue: BTreeSet<usize> = seeds.iter().copied().collect();
    while let Some(g) = queue.pop_first() {
        if !state.x[g].active || state.x[g].target != q {
            continue;
        }
        if is_principal_at(&state.x[g].pulls)? {
            continue;
        }
        out.blowups += 1;
        if out.blowups > cap {
            return Err(PrincipalizeError::Cap(q, cap));
        }
        let seed = origin[&g];
        let [first, second] = blowup_x(state, g)?;
        let exc = state.x[first].boundary[0].expect("exceptional axis");
        out.exceptional.insert(exc, seed);
        for child in [first, second] {
            origin.insert(child, seed);
            queue.insert(child);
        }
        for t in points_over(state, first, q)? {
            let id = recenter_x(state, first, &t)?;
            origin.insert(id, seed);
            out.spawned.insert(id, seed);
            queue.insert(id);
        }
    }
    Ok(out)
}
