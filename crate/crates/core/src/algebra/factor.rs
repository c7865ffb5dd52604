//! Factorization of polynomials over `F_p`: squarefree decomposition,
//! distinct-degree splitting and Cantor-Zassenhaus equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use crate::error::{Error, Result};

/// Seed used when callers do not supply a generator. The output of
/// [`factor`] does not depend on it.
const DEFAULT_SEED: u64 = 0x5eed_f00d;

/// Squarefree decomposition: pairs `(s_i, i)` with `s_i` squarefree, pairwise
/// coprime and `f = lc * prod s_i^i`.
pub fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let p = f.modulus();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = f.monic();
    let d = f.derivative();
    let mut c = f.gcd(&d);
    let mut w = f.div(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div(&w);
        i += 1;
    }
    if !c.is_one() {
        let root = c.pth_root();
        for (s, m) in squarefree(&root) {
            out.push((s, m * p));
        }
    }
    out
}

/// `x^(p^k) mod m` by `k` Frobenius steps.
fn frobenius_power(h: &Poly, m: &Poly) -> Poly {
    h.pow_mod(h.modulus() as u128, m)
}

/// Distinct-degree factorization of a squarefree monic polynomial: pairs
/// `(g_d, d)` where `g_d` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let p = f.modulus();
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = Poly::x(p);
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = frobenius_power(&h, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let k = rest.degree().unwrap();
        out.push((rest, k));
    }
    out
}

/// Split a product of distinct irreducibles of common degree `d`.
pub fn equal_degree<R: Rng + ?Sized>(f: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n <= d {
        return vec![f.monic()];
    }
    let p = f.modulus();
    loop {
        let a = Poly::random(rng, n - 1, p);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..d {
                t = t.mul_mod(&t, f);
                s = s.add(&t);
            }
            s
        } else {
            // a^((p^d - 1)/2) = N(a)^((p-1)/2) with N(a) = a^(1+p+...+p^(d-1))
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..d {
                t = frobenius_power(&t, f);
                s = s.mul_mod(&t, f);
            }
            s.pow_mod(((p - 1) / 2) as u128, f).sub(&Poly::one(p))
        };
        let g = f.gcd(&b);
        let k = g.degree().unwrap_or(0);
        if k > 0 && k < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.div(&g), d, rng));
            return out;
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities, sorted by
/// [`Poly::canonical_cmp`]. The leading coefficient is dropped.
pub fn factor(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    factor_with_rng(f, &mut rng)
}

pub fn factor_with_rng<R: Rng + ?Sized>(f: &Poly, rng: &mut R) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (s, m) in squarefree(f) {
        for (g, d) in distinct_degree(&s) {
            for q in equal_degree(&g, d, rng) {
                out.push((q, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(out)
}

/// Distinct monic irreducible factors.
pub fn prime_factors(f: &Poly) -> Result<Vec<Poly>> {
    Ok(factor(f)?.into_iter().map(|(q, _)| q).collect())
}

/// Roots in `F_p`, ascending.
pub fn roots(f: &Poly) -> Vec<u32> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let p = f.modulus();
    let x = Poly::x(p);
    let fm = f.monic();
    let g = fm.gcd(&frobenius_power(&x.rem(&fm), &fm).sub(&x));
    if g.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut r: Vec<u32> = equal_degree(&g, 1, &mut rng)
        .into_iter()
        .map(|l| super::fp::neg(l.coeff(0), p))
        .collect();
    r.sort_unstable();
    r
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &Poly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let p = f.modulus();
    let f = f.monic();
    let x = Poly::x(p);
    // frob[k] = x^(p^k) mod f
    let mut frob = vec![x.rem(&f)];
    for k in 1..=n {
        let next = frobenius_power(&frob[k - 1], &f);
        frob.push(next);
    }
    if !frob[n].sub(&x).rem(&f).is_zero() {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| f.gcd(&frob[n / r].sub(&x)).is_one())
}

/// All monic irreducible polynomials of degree `d` over `F_p`, in canonical
/// order. Only sensible for small `p^d`.
pub fn monic_irreducibles(p: u32, d: usize) -> Vec<Poly> {
    let total = (p as u64).pow(d as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut c = Vec::with_capacity(d + 1);
        let mut v = idx;
        for _ in 0..d {
            c.push((v % p as u64) as u32);
            v /= p as u64;
        }
        c.push(1);
        let q = Poly::from_raw(c, p);
        if is_irreducible(&q) {
            out.push(q);
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn px(c: &[i64], p: u32) -> Poly {
        Poly::from_i64(c, p)
    }

    fn reassemble(fs: &[(Poly, u32)], p: u32) -> Poly {
        fs.iter().fold(Poly::one(p), |acc, (q, m)| acc.mul(&q.pow(*m as u64)))
    }

    /// Brute-force irreducibility: no monic divisor of degree <= deg/2.
    fn brute_irreducible(f: &Poly) -> bool {
        let n = f.degree().unwrap();
        let p = f.modulus();
        for d in 1..=n / 2 {
            let total = (p as u64).pow(d as u32);
            for idx in 0..total {
                let mut c = Vec::new();
                let mut v = idx;
                for _ in 0..d {
                    c.push((v % p as u64) as u32);
                    v /= p as u64;
                }
                c.push(1);
                if Poly::from_raw(c, p).divides(f) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn small_examples() {
        let f = factor(&px(&[-1, 0, 1], 5)).unwrap();
        assert_eq!(f, vec![(px(&[1, 1], 5), 1), (px(&[-1, 1], 5), 1)]);
        let f = factor(&Poly::x(2)).unwrap();
        assert_eq!(f, vec![(Poly::x(2), 1)]);
        assert!(factor(&Poly::zero(3)).is_err());
    }

    #[test]
    fn random_degree_eight_over_f7() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let f = Poly::random_monic(&mut rng, 8, 7);
            let fs = factor(&f).unwrap();
            assert_eq!(reassemble(&fs, 7), f);
            for (q, _) in &fs {
                assert!(brute_irreducible(q), "{q} not irreducible");
            }
        }
    }

    #[test]
    fn roundtrip_many_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in [2u32, 3, 5, 32771] {
            for _ in 0..500 {
                let d = rng.gen_range(1..10);
                let f = Poly::random(&mut rng, d, p);
                if f.is_zero() {
                    continue;
                }
                let fs = factor(&f).unwrap();
                assert_eq!(reassemble(&fs, p), f.monic());
            }
        }
    }

    #[test]
    fn inseparable_input() {
        // (x^2 + x + 1)^2 * x^2 over F_2 has zero-derivative parts
        let p = 2;
        let q = px(&[1, 1, 1], p);
        let f = q.pow(2).mul(&Poly::x(p).pow(2));
        let fs = factor(&f).unwrap();
        assert_eq!(fs, vec![(Poly::x(p), 2), (q, 2)]);
        let g = px(&[1, 0, 0, 1], 3).pow(3);
        assert_eq!(reassemble(&factor(&g).unwrap(), 3), g);
    }

    #[test]
    fn rabin_matches_enumeration() {
        assert_eq!(monic_irreducibles(2, 2), vec![px(&[1, 1, 1], 2)]);
        assert_eq!(monic_irreducibles(2, 3).len(), 2);
        assert_eq!(monic_irreducibles(3, 2).len(), 3);
        assert_eq!(roots(&px(&[-1, 0, 1], 5)), vec![1, 4]);
    }
}
