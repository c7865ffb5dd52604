//! Irreducibility of `f(x, t) = t^n + a_{n-1}(x) t^{n-1} + ... + a_0(x)` over
//! `F_p(x)`.
//!
//! A specialization `f(c, t)` that is squarefree and irreducible over `F_p`
//! proves irreducibility. Otherwise the factorization of a squarefree
//! specialization is lifted `x`-adically and every candidate factor is
//! checked by exact division.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{factor, Poly};
use crate::error::{Error, Result};

const SPECIALIZATION_TRIES: usize = 40;

/// `a(x + c)`
pub(crate) fn shift_var(a: &Poly, c: u32) -> Poly {
    let p = a.modulus();
    let lin = Poly::from_raw(vec![c, 1], p);
    let mut r = Poly::zero(p);
    for &k in a.coeffs().iter().rev() {
        r = r.mul(&lin).add(&Poly::constant(k, p));
    }
    r
}

fn specialize(coeffs: &[Poly], c: u32) -> Poly {
    let p = coeffs[0].modulus();
    let mut v: Vec<u32> = coeffs.iter().map(|a| a.eval(c)).collect();
    v.push(1);
    Poly::from_raw(v, p)
}

fn compute_cf(coeffs: &[Poly]) -> usize {
    let n = coeffs.len();
    coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, a)| a.degree().map(|d| d.div_ceil(n - i)))
        .max()
        .unwrap_or(0)
}

/// Decide irreducibility. Errors when no squarefree specialization exists
/// over `F_p` (possible only for tiny `p` or inseparable `f`).
pub fn is_irreducible(coeffs: &[Poly]) -> Result<bool> {
    let n = coeffs.len();
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let p = coeffs[0].modulus();
    let mut cs: Vec<u32> = if (p as usize) <= SPECIALIZATION_TRIES {
        (0..p).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1bad_5eed);
        let mut v: Vec<u32> = (0..SPECIALIZATION_TRIES).map(|i| i as u32).collect();
        v.extend((0..SPECIALIZATION_TRIES).map(|_| rand::Rng::gen_range(&mut rng, 0..p)));
        v.sort_unstable();
        v.dedup();
        v
    };
    cs.shuffle(&mut ChaCha8Rng::seed_from_u64(7));
    cs.truncate(SPECIALIZATION_TRIES);
    let mut good = None;
    for &c in &cs {
        let s = specialize(coeffs, c);
        let ds = s.derivative();
        if ds.is_zero() || !s.gcd(&ds).is_one() {
            continue;
        }
        if factor::is_irreducible(&s) {
            return Ok(true);
        }
        good.get_or_insert(c);
    }
    let Some(c) = good else {
        return Err(Error::IrreducibilityUndecided("no squarefree specialization over F_p".into()));
    };
    Ok(!has_factor_via_hensel(coeffs, c)?)
}

/// True if `f` has a proper factor, using a squarefree specialization at `c`.
fn has_factor_via_hensel(coeffs: &[Poly], c: u32) -> Result<bool> {
    let n = coeffs.len();
    let p = coeffs[0].modulus();
    let cf = compute_cf(coeffs);
    let shifted: Vec<Poly> = coeffs.iter().map(|a| shift_var(a, c)).collect();
    let prec = n * cf + 1;
    // f_k(t): coefficient of x^k
    let fk: Vec<Poly> = (0..prec)
        .map(|k| {
            let mut v: Vec<u32> = shifted.iter().map(|a| a.coeff(k)).collect();
            v.push(if k == 0 { 1 } else { 0 });
            Poly::from_raw(v, p)
        })
        .collect();
    let local: Vec<Poly> = factor::factor(&fk[0])?.into_iter().map(|(q, _)| q).collect();
    let r = local.len();
    if r == 1 {
        return Ok(false);
    }
    for mask in 1u32..(1 << r) - 1 {
        let size = mask.count_ones() as usize;
        // each split is visited twice; keep the half with the smaller side first
        if size > r / 2 || (2 * size == r && mask & 1 == 0) {
            continue;
        }
        let mut g0 = Poly::one(p);
        let mut h0 = Poly::one(p);
        for (i, q) in local.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g0 = g0.mul(q);
            } else {
                h0 = h0.mul(q);
            }
        }
        if let Some(g) = lift_split(&fk, &g0, &h0, cf)? {
            if divides_bivariate(&g, &shifted) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Lift `f = g0 * h0 mod x` to precision `fk.len()`; return the lifted `g`
/// as coefficients in `x` (indexed by `t`-degree) if its degrees respect the
/// bound for a true factor.
fn lift_split(fk: &[Poly], g0: &Poly, h0: &Poly, cf: usize) -> Result<Option<Vec<Poly>>> {
    let p = g0.modulus();
    let (one, _s, t) = g0.xgcd(h0)?;
    debug_assert!(one.is_one());
    let prec = fk.len();
    let mut gs = vec![g0.clone()];
    let mut hs = vec![h0.clone()];
    for k in 1..prec {
        let mut e = fk[k].clone();
        for i in 1..k {
            e = e.sub(&gs[i].mul(&hs[k - i]));
        }
        let gk = e.mul(&t).rem(g0);
        let hk = e.sub(&gk.mul(h0)).div_exact(g0).expect("hensel step");
        gs.push(gk);
        hs.push(hk);
    }
    let d = g0.degree().unwrap();
    let mut out = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let c: Vec<u32> = gs.iter().map(|gk| gk.coeff(j)).collect();
        let cj = Poly::from_raw(c, p);
        if cj.deg() > ((d - j) * cf) as i64 {
            return Ok(None);
        }
        out.push(cj);
    }
    Ok(Some(out))
}

/// Does monic `g` (in `t`) divide `t^n + sum a_i t^i` in `F_p[x][t]`?
fn divides_bivariate(g: &[Poly], a: &[Poly]) -> bool {
    let p = a[0].modulus();
    let n = a.len();
    let d = g.len() - 1;
    let mut rem: Vec<Poly> = a.to_vec();
    rem.push(Poly::one(p));
    for k in (d..=n).rev() {
        let lead = rem[k].clone();
        if lead.is_zero() {
            continue;
        }
        for (j, gj) in g.iter().enumerate() {
            rem[k - d + j].sub_mul(&lead, gj);
        }
    }
    rem.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fp;

    fn px(c: &[i64], p: u32) -> Poly {
        Poly::from_i64(c, p)
    }

    #[test]
    fn simple_cases() {
        let p = 5;
        // t^2 - x
        assert!(is_irreducible(&[px(&[0, -1], p), Poly::zero(p)]).unwrap());
        // t^2 - x^2
        assert!(!is_irreducible(&[px(&[0, 0, -1], p), Poly::zero(p)]).unwrap());
        // t^2 + t + x^3 over F_2
        assert!(is_irreducible(&[px(&[0, 0, 0, 1], 2), Poly::one(2)]).unwrap());
    }

    #[test]
    fn products_are_detected() {
        // (t^2 - x)(t - x^2 - 1) over F_7: every specialization splits off a
        // linear factor, so the lifting path has to find it
        let p = 7;
        let a = [px(&[0, -1], p), Poly::zero(p), Poly::one(p)];
        let b = [px(&[-1, 0, -1], p), Poly::one(p)];
        let mut prod = vec![Poly::zero(p); 4];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = prod[i + j].add(&x.mul(y));
            }
        }
        assert!(prod[3].is_one());
        prod.pop();
        assert!(!is_irreducible(&prod).unwrap());
        // (t^2 - x)(t^2 - x - 1) needs a degree-two split
        let c = [px(&[-1, -1], p), Poly::zero(p), Poly::one(p)];
        let mut prod = vec![Poly::zero(p); 5];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in c.iter().enumerate() {
                prod[i + j] = prod[i + j].add(&x.mul(y));
            }
        }
        prod.pop();
        assert!(!is_irreducible(&prod).unwrap());
    }

    #[test]
    fn shift_is_composition() {
        let p = 11;
        let a = px(&[3, 0, 2, 5], p);
        let s = shift_var(&a, 4);
        for x in 0..p {
            assert_eq!(s.eval(x), a.eval(fp::add(x, 4, p)));
        }
    }
}
