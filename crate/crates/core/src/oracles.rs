//! Slow reference computations for tests: exhaustive HR-Min, place
//! counting and the Jacobian order from the zeta function.

use crate::algebra::factor;
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::field::{FFElem, Field};
use crate::jacobian::JacobianCtx;
use crate::order::Side;
use crate::place;
use crate::riemann_roch::rr_basis;

const ENUM_GUARD: u64 = 1 << 16;

/// Minimal `m` in `0..=g` with `l(D + mA) = 1`, found by computing every
/// Riemann-Roch space in turn.
pub fn brute_hr_min(ctx: &JacobianCtx, d: &Divisor) -> Result<(u32, FFElem)> {
    if d.degree() != 0 {
        return Err(Error::NonzeroDegree(d.degree()));
    }
    let field = ctx.field();
    for m in 0..=ctx.genus() {
        let dm = d.add(&Divisor::from_place(field, ctx.base_place(), m as i64))?;
        let rr = rr_basis(&dm)?;
        if rr.dim() == 1 {
            return Ok((m, rr.basis.into_iter().next().unwrap()));
        }
    }
    Err(Error::HrMinNoSolution)
}

/// Number of degree-one places of `F * F_{p^m}`.
///
/// A place of degree `d` splits into `d` rational places over `F_{p^m}`
/// exactly when `d | m`, so `N_m` is the sum of `d * B_d` over `d | m`.
pub fn count_degree_one_places(field: &Field, m: u32) -> Result<u64> {
    let p = field.p() as u64;
    if m == 0 || p.checked_pow(m).is_none_or(|v| v > ENUM_GUARD) {
        return Err(Error::GuardExceeded(format!("p^m = {p}^{m} exceeds 2^16")));
    }
    let mut total = 0u64;
    let mut count = |deg: u32| {
        if m % deg == 0 {
            total += deg as u64;
        }
    };
    for pl in place::infinite_places(field)? {
        count(pl.degree());
    }
    for k in 1..=m as usize {
        if m as usize % k != 0 {
            continue;
        }
        for q in factor::monic_irreducibles(field.p(), k) {
            for pl in place::places_above(field, Side::Finite, &q)? {
                count(pl.degree());
            }
        }
    }
    Ok(total)
}

/// Coefficients `a_0..a_{2g}` of the L-polynomial.
pub fn l_polynomial(field: &Field) -> Result<Vec<i128>> {
    let g = field.genus() as usize;
    let q = field.p() as i128;
    if g > 3 {
        return Err(Error::GuardExceeded(format!("genus {g} > 3")));
    }
    let mut s = vec![0i128; g + 1];
    for k in 1..=g {
        let n = count_degree_one_places(field, k as u32)? as i128;
        s[k] = q.pow(k as u32) + 1 - n;
    }
    let mut a = vec![0i128; 2 * g + 1];
    a[0] = 1;
    for k in 1..=g {
        let acc: i128 = (1..=k).map(|j| s[j] * a[k - j]).sum();
        if acc % k as i128 != 0 {
            return Err(Error::Invalid("Newton identity gave a non-integer coefficient".into()));
        }
        a[k] = -acc / k as i128;
    }
    for i in 0..g {
        a[2 * g - i] = q.pow((g - i) as u32) * a[i];
    }
    Ok(a)
}

/// `#Pic^0(F) = L(1)`.
pub fn jacobian_order(field: &Field) -> Result<u128> {
    let sum: i128 = l_polynomial(field)?.iter().sum();
    u128::try_from(sum).map_err(|_| Error::Invalid(format!("L(1) = {sum} is not positive")))
}
