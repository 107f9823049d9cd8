//! Quadratic root finding in 2-Henselian rings.

use crate::error::{domain, indeterminate, Error, Result};
use crate::valuation::RingElem;

const MAX_NEWTON_STEPS: usize = 400;

/// Which root of `A t^2 + B t + C` to return.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Branch {
    /// The root of valuation `v(C/B)`.
    #[default]
    Small,
    /// The root of valuation `v(B/A)` (needs `A != 0`).
    Large,
}

/// Root of `eps s^2 + s + 1` congruent to `-1`, for `v(eps) > 0`.
fn normalized_root(eps: &RingElem) -> Result<RingElem> {
    let cfg = eps.config();
    let one = RingElem::one(cfg);
    let f = |s: &RingElem| eps * &s.square() + s + &one;
    let df = |s: &RingElem| &(eps * s).mul_i64(2) + &one;
    let eps_guess = eps.lifted();
    let mut s = -one.clone();
    for _ in 0..MAX_NEWTON_STEPS {
        let fs = &(&eps_guess * &s.square()) + &s + &one;
        if fs.is_zero_at_prec() {
            break;
        }
        let step = fs.checked_div(&(&(&eps_guess * &s).mul_i64(2) + &one))?;
        s = (&s - &step).lifted();
    }
    // One tracked step turns the approximant into a certified root.
    let fs = f(&s);
    let certified = &s - &fs.checked_div(&df(&s))?;
    if !f(&certified).is_zero_at_prec() {
        return Err(indeterminate("Newton iteration did not converge within the precision cap"));
    }
    Ok(certified)
}

/// Solves `A t^2 + B t + C = 0` under `v(AC) > 2 v(B)`.
///
/// The default branch has valuation `v(C/B)`; [`Branch::Large`] gives the other
/// root, of valuation `v(B/A)`.
pub fn solve_quadratic(a: &RingElem, b: &RingElem, c: &RingElem, branch: Branch) -> Result<RingElem> {
    if b.is_zero_at_prec() {
        if a.is_zero_at_prec() {
            return Err(domain("A = B = 0"));
        }
        return Err(indeterminate("B is zero at working precision"));
    }
    let vb = b.valuation()?;
    let ac = a * c;
    if !ac.val_gt(vb.times(2))? {
        return Err(domain(format!("v(AC) = {} is not > 2 v(B) = {}", ac.val_lower(), vb.times(2))));
    }
    let small = if c.is_zero_at_prec() {
        c.checked_div(b)?
    } else {
        let eps = ac.checked_div(&b.square())?;
        let s = normalized_root(&eps)?;
        &c.checked_div(b)? * &s
    };
    match branch {
        Branch::Small => Ok(small),
        Branch::Large => {
            if a.is_zero_at_prec() {
                return Err(domain("A = 0: the equation is linear"));
            }
            Ok(&(-b).checked_div(a)? - &small)
        }
    }
}

/// `z` with `(1+z)^2 = 1+y` and `v(z) = v(y) - v(2)`, for `v(y) > 2 v(2)`.
pub fn sqrt_one_plus(y: &RingElem) -> Result<RingElem> {
    let cfg = y.config();
    let v2 = cfg.v2();
    if !y.val_gt(v2.times(2))? {
        return Err(domain(format!("v(y) = {} is not > 2 v(2)", y.val_lower())));
    }
    // (1+z)^2 = 1+y  <=>  z^2 + 2z - y = 0, small branch.
    solve_quadratic(&RingElem::one(cfg), &RingElem::from_i64(cfg, 2), &(-y), Branch::Small)
}

/// `x` with `x^2 - x = y`, residue characteristic 2.
///
/// Fails with [`Error::NoSolution`] exactly when `y` is not in `R_AS`, i.e. when
/// its residue is not of the form `r^2 - r`; over `F_2` that means `y` is odd.
pub fn artin_schreier_solve(y: &RingElem) -> Result<RingElem> {
    let cfg = y.config();
    if cfg.residue_char() != 2 {
        return Err(domain("Artin-Schreier equations need residue characteristic 2"));
    }
    if !y.is_integral()? {
        return Err(domain("y is not in R"));
    }
    if !y.residue()?.is_zero() {
        return Err(Error::NoSolution(format!("residue of {y} is not in the Artin-Schreier image")));
    }
    // Residue root 1, then t = s + 1: s^2 + s + (1 - 1 - y) = 0.
    let one = RingElem::one(cfg);
    let s = solve_quadratic(&one, &one, &(-y), Branch::Small)?;
    Ok(&one + &s)
}

/// Membership of `y` in `R_AS` (decided on the residue).
pub fn in_r_as(y: &RingElem) -> Result<bool> {
    match artin_schreier_solve(y) {
        Ok(_) => Ok(true),
        Err(Error::NoSolution(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Unit whose residue is a nonzero square.
pub fn is_residual_square(a: &RingElem) -> Result<bool> {
    let v = a.valuation()?;
    if v != a.config().zero_val() {
        return Err(domain(format!("v(a) = {v} is not 0")));
    }
    Ok(a.residue()?.is_nonzero_square())
}

/// `a = b^2 mod I_{v(a)}` for some `b`.
pub fn is_approximate_square(a: &RingElem) -> Result<bool> {
    let v = a.valuation()?;
    if !v.is_even() {
        return Ok(false);
    }
    let sigma = RingElem::sigma(a.config(), v.half())?;
    is_residual_square(&a.checked_div(&sigma.square())?)
}

/// `b` with `v(a - b^2) > v(a)`, when `a` is an approximate square.
pub fn approximate_sqrt(a: &RingElem) -> Result<Option<RingElem>> {
    if !is_approximate_square(a)? {
        return Ok(None);
    }
    let cfg = a.config();
    let v = a.valuation()?;
    let sigma = RingElem::sigma(cfg, v.half())?;
    let unit = a.checked_div(&sigma.square())?;
    let r = unit.residue()?;
    let root = (1..r.modulus)
        .find(|&c| c * c % r.modulus == r.value)
        .expect("residual square has a root");
    Ok(Some(&sigma * &RingElem::from_i64(cfg, root as i64)))
}
