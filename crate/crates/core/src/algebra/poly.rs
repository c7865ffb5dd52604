//! Dense univariate polynomials over `F_p`.
//!
//! Coefficients are stored lowest degree first with no trailing zeros; the
//! zero polynomial is the empty coefficient vector.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use super::fp;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u32,
    c: Vec<u32>,
}

impl Poly {
    pub fn zero(p: u32) -> Self {
        Poly { p, c: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        Poly::constant(1, p)
    }

    pub fn constant(v: u32, p: u32) -> Self {
        Poly::from_raw(vec![v % p], p)
    }

    /// The monomial `x`.
    pub fn x(p: u32) -> Self {
        Poly::from_raw(vec![0, 1], p)
    }

    pub fn monomial(coef: u32, k: usize, p: u32) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = coef % p;
        Poly::from_raw(c, p)
    }

    /// Build from residues already reduced below `p`.
    pub fn from_raw(mut c: Vec<u32>, p: u32) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        debug_assert!(c.iter().all(|&v| v < p));
        Poly { p, c }
    }

    /// Build from arbitrary integers, lowest degree first.
    pub fn from_i64(coeffs: &[i64], p: u32) -> Self {
        Poly::from_raw(coeffs.iter().map(|&v| fp::from_i64(v, p)).collect(), p)
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 1
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree as a signed integer with `deg(0) = -1`; use only where the zero
    /// polynomial has been excluded or is harmless.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(fp::inv(self.lc(), self.p))
    }

    pub fn scale(&self, s: u32) -> Poly {
        if s == 0 {
            return Poly::zero(self.p);
        }
        let p = self.p;
        Poly { p, c: self.c.iter().map(|&a| fp::mul(a, s, p)).collect() }
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Poly { p: self.p, c }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let p = self.p;
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (a, &b) in c.iter_mut().zip(&short.c) {
            *a = fp::add(*a, b, p);
        }
        let mut r = Poly { p, c };
        r.trim();
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let p = self.p;
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(fp::sub(self.coeff(i), o.coeff(i), p));
        }
        let mut r = Poly { p, c };
        r.trim();
        r
    }

    pub fn neg(&self) -> Poly {
        let p = self.p;
        Poly { p, c: self.c.iter().map(|&a| fp::neg(a, p)).collect() }
    }

    /// `self += s * x^k * o`
    pub fn add_scaled_shifted(&mut self, o: &Poly, s: u32, k: usize) {
        if s == 0 || o.is_zero() {
            return;
        }
        let p = self.p;
        if self.c.len() < o.c.len() + k {
            self.c.resize(o.c.len() + k, 0);
        }
        for (i, &b) in o.c.iter().enumerate() {
            let t = fp::mul(b, s, p);
            self.c[i + k] = fp::add(self.c[i + k], t, p);
        }
        self.trim();
    }

    /// `self -= q * o`
    pub fn sub_mul(&mut self, q: &Poly, o: &Poly) {
        if q.is_zero() || o.is_zero() {
            return;
        }
        *self = self.sub(&q.mul(o));
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.p);
        }
        let p = self.p;
        let (a, b) = (&self.c, &o.c);
        let n = a.len() + b.len() - 1;
        let mut c = Vec::with_capacity(n);
        if p < (1 << 16) {
            // products < 2^32, so up to 2^32 of them fit a u64 accumulator
            let mut acc = vec![0u64; n];
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let ai = ai as u64;
                for (slot, &bj) in acc[i..i + b.len()].iter_mut().zip(b) {
                    *slot += ai * bj as u64;
                }
            }
            c.extend(acc.into_iter().map(|v| (v % p as u64) as u32));
        } else {
            let mut acc = vec![0u128; n];
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let ai = ai as u64;
                for (slot, &bj) in acc[i..i + b.len()].iter_mut().zip(b) {
                    *slot += (ai * bj as u64) as u128;
                }
            }
            c.extend(acc.into_iter().map(|v| (v % p as u128) as u32));
        }
        let mut r = Poly { p, c };
        r.trim();
        r
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut r = Poly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        r
    }

    /// Quotient and remainder; errors on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        if self.c.len() < d.c.len() {
            return Ok((Poly::zero(p), self.clone()));
        }
        let dl = d.c.len();
        let inv = fp::inv(d.lc(), p);
        let mut q = vec![0u32; self.c.len() - dl + 1];
        if p < (1 << 16) && q.len() < (1 << 30) {
            // lazy reduction: each slot takes at most q.len() products < 2^32
            let pp = p as u64;
            let mut r: Vec<u64> = self.c.iter().map(|&v| v as u64).collect();
            for k in (0..q.len()).rev() {
                let t = (r[k + dl - 1] % pp) as u32;
                if t == 0 {
                    continue;
                }
                let f = fp::mul(t, inv, p);
                q[k] = f;
                let nf = (p - f) as u64;
                for (slot, &dj) in r[k..k + dl - 1].iter_mut().zip(&d.c) {
                    *slot += nf * dj as u64;
                }
            }
            let r: Vec<u32> = r[..dl - 1].iter().map(|&v| (v % pp) as u32).collect();
            return Ok((Poly::from_raw(q, p), Poly::from_raw(r, p)));
        }
        let mut r = self.c.clone();
        for k in (0..q.len()).rev() {
            let t = r[k + dl - 1];
            if t == 0 {
                continue;
            }
            let f = fp::mul(t, inv, p);
            q[k] = f;
            let nf = fp::neg(f, p);
            for (j, &dj) in d.c.iter().enumerate() {
                r[k + j] = fp::add(r[k + j], fp::mul(nf, dj, p), p);
            }
        }
        r.truncate(dl - 1);
        Ok((Poly::from_raw(q, p), Poly::from_raw(r, p)))
    }

    /// Remainder modulo a nonzero polynomial.
    pub fn rem(&self, d: &Poly) -> Poly {
        if self.c.len() < d.c.len() {
            return self.clone();
        }
        self.div_rem(d).expect("remainder by zero polynomial").1
    }

    pub fn div(&self, d: &Poly) -> Poly {
        self.div_rem(d).expect("division by zero polynomial").0
    }

    /// Exact division, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, o: &Poly) -> bool {
        !self.is_zero() && o.rem(self).is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd `(g, s, t)` with `g = s*self + t*o`, `g` monic.
    pub fn xgcd(&self, o: &Poly) -> Result<(Poly, Poly, Poly)> {
        if self.is_zero() && o.is_zero() {
            return Err(Error::XgcdZeroPair);
        }
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(p), Poly::zero(p));
        let (mut t0, mut t1) = (Poly::zero(p), Poly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        let inv = fp::inv(r0.lc(), p);
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    pub fn lcm(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.p);
        }
        self.div(&self.gcd(o)).mul(o).monic()
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).xgcd(m).ok()?;
        g.is_one().then(|| s.rem(m))
    }

    pub fn mul_mod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m)
    }

    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut r = Poly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        r
    }

    pub fn derivative(&self) -> Poly {
        let p = self.p;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| fp::mul(a, (i as u64 % p as u64) as u32, p))
            .collect();
        Poly::from_raw(c, p)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let p = self.p;
        self.c.iter().rev().fold(0, |acc, &a| fp::add(fp::mul(acc, x, p), a, p))
    }

    /// Evaluate at another polynomial modulo `m` (Horner).
    pub fn compose_mod(&self, g: &Poly, m: &Poly) -> Poly {
        let mut acc = Poly::zero(self.p);
        for &a in self.c.iter().rev() {
            acc = acc.mul_mod(g, m).add(&Poly::constant(a, self.p));
        }
        acc
    }

    /// `x^deg * self(1/x)` with respect to a given degree bound `d >= deg`.
    pub fn reverse(&self, d: usize) -> Poly {
        debug_assert!(self.c.len() <= d + 1);
        let mut c = self.c.clone();
        c.resize(d + 1, 0);
        c.reverse();
        Poly::from_raw(c, self.p)
    }

    /// Multiplicity of `x` as a factor.
    pub fn low_order(&self) -> usize {
        self.c.iter().take_while(|&&v| v == 0).count()
    }

    /// Largest `k` with `q^k | self`; `self` must be nonzero.
    pub fn valuation(&self, q: &Poly) -> u32 {
        debug_assert!(!self.is_zero() && !q.is_constant());
        let mut k = 0;
        let mut a = self.clone();
        while let Some(b) = a.div_exact(q) {
            a = b;
            k += 1;
        }
        k
    }

    /// `p`-th root of a polynomial whose derivative vanishes (char p).
    pub fn pth_root(&self) -> Poly {
        let p = self.p as usize;
        let c: Vec<u32> = self.c.iter().step_by(p).copied().collect();
        // a^(1/p) = a in F_p
        Poly::from_raw(c, self.p)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_deg: usize, p: u32) -> Poly {
        Poly::from_raw((0..=max_deg).map(|_| rng.gen_range(0..p)).collect(), p)
    }

    pub fn random_monic<R: Rng + ?Sized>(rng: &mut R, deg: usize, p: u32) -> Poly {
        let mut c: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
        c.push(1);
        Poly::from_raw(c, p)
    }

    /// Total order used for canonical sorting: degree first, then
    /// coefficients from the top.
    pub fn canonical_cmp(&self, o: &Poly) -> Ordering {
        self.c.len().cmp(&o.c.len()).then_with(|| self.c.iter().rev().cmp(o.c.iter().rev()))
    }

    #[cfg(debug_assertions)]
    pub fn assert_canonical(&self) {
        assert!(self.c.last() != Some(&0), "stored leading zero");
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p.cmp(&other.p).then_with(|| self.canonical_cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{a}*x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({})", self.p, self)
    }
}
