//! Fractional ideals of the maximal orders, as `H / den` with `H` in HNF
//! (columns are basis vectors in order coordinates).
//!
//! Infinite-side ideals are kept localized at `u`: their HNF has a power of
//! `u` as determinant and their denominator is a power of `u`.

use crate::algebra::{Poly, PolyMatrix};
use crate::error::{Error, Result};
use crate::order::{Order, OrderElem, Side};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    side: Side,
    h: PolyMatrix,
    den: Poly,
}

fn diag_product(h: &PolyMatrix) -> Poly {
    (0..h.rows()).fold(Poly::one(h.modulus()), |a, i| a.mul(h.get(i, i)))
}

/// HNF of `L + d T^n` for a lattice known to have determinant `d`. First
/// tries `n + 1` constant combinations of the generators and keeps the result
/// when its determinant is right.
fn hnf_with_norm(g: &PolyMatrix, d: &Poly) -> Result<PolyMatrix> {
    let (n, m) = (g.rows(), g.cols());
    let p = g.modulus();
    if m > n + 1 && p > 2 * m as u32 {
        let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ m as u64;
        let cols: Vec<Vec<Poly>> = (0..=n)
            .map(|_| {
                let mut acc = vec![Poly::zero(p); n];
                for j in 0..m {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let lam = ((state >> 33) % (p as u64 - 1)) as u32 + 1;
                    for (i, a) in acc.iter_mut().enumerate() {
                        let e = g.get(i, j);
                        if !e.is_zero() {
                            *a = a.add(&e.scale(lam));
                        }
                    }
                }
                acc
            })
            .collect();
        let h = PolyMatrix::from_cols(&cols).hnf_mod_sum(d)?;
        if diag_product(&h) == d.monic() {
            return Ok(h);
        }
    }
    g.hnf_mod_sum(d)
}

fn reduce_frac(side: Side, num: Poly, den: Poly) -> (Poly, Poly) {
    let p = num.modulus();
    match side {
        Side::Finite => {
            let g = num.gcd(&den);
            (num.div(&g).monic(), den.div(&g).monic())
        }
        Side::Infinite => {
            let (a, b) = (num.low_order(), den.low_order());
            let k = a.min(b);
            (Poly::monomial(1, a - k, p), Poly::monomial(1, b - k, p))
        }
    }
}

fn u_part(a: &Poly) -> Poly {
    Poly::monomial(1, a.low_order(), a.modulus())
}

impl Ideal {
    /// The order itself.
    pub fn unit(o: &Order) -> Ideal {
        Ideal { side: o.side, h: PolyMatrix::identity(o.n, o.p), den: Poly::one(o.p) }
    }

    /// The ideal spanned by the columns of `gens` over `den`. `bound` must be
    /// a multiple of the determinant of the lattice spanned by `gens`
    /// (only its `u`-part matters on the infinite side).
    pub fn from_generators(o: &Order, gens: &PolyMatrix, den: &Poly, bound: Option<&Poly>) -> Result<Ideal> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let h = match (o.side, bound) {
            (Side::Finite, Some(d)) => gens.hnf_mod(d)?,
            (Side::Finite, None) => gens.hnf_of_columns()?,
            (Side::Infinite, b) => {
                let k = match b {
                    Some(d) => d.low_order(),
                    None => diag_product(&gens.hnf_of_columns()?).low_order(),
                };
                gens.hnf_mod(&Poly::monomial(1, k, o.p))?
            }
        };
        Ok(Self::canonical(o.side, h, den.clone()))
    }

    /// `(gens + d O) / den`; `d` only matters through its `u`-part on the
    /// infinite side.
    pub fn from_generators_plus(o: &Order, gens: &PolyMatrix, d: &Poly, den: &Poly) -> Result<Ideal> {
        if den.is_zero() || d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = match o.side {
            Side::Finite => d.clone(),
            Side::Infinite => Poly::monomial(1, d.low_order(), o.p),
        };
        Ok(Self::canonical(o.side, gens.hnf_mod_sum(&d)?, den.clone()))
    }

    /// Coprime monic `(num, den)` with `num / den` the norm `det(H) / den^n`
    /// (their `u`-parts on the infinite side).
    pub fn norm_parts(&self) -> (Poly, Poly) {
        let n = self.h.rows() as u64;
        reduce_frac(self.side, diag_product(&self.h), self.den.pow(n))
    }

    /// HNF of `gens / gden`, where the ideal has norm `nu.0 / nu.1`. The
    /// denominator is widened until the scaled generators are integral, then
    /// the norm of the scaled ideal is used as modulus.
    fn from_norm(o: &Order, gens: &PolyMatrix, gden: &Poly, nu: (Poly, Poly)) -> Result<Ideal> {
        let (num, c) = nu;
        let p = o.p;
        let n = o.n as u64;
        let bad = || Error::Invalid("generators do not match the norm".into());
        match o.side {
            Side::Finite => {
                let scaled = gens.scale(&c);
                let quick = if gden.is_one() { Some(scaled) } else { scaled.div_exact(gden) };
                if let Some(g) = quick {
                    let d = c.pow(n).mul(&num).div_exact(&c).ok_or_else(bad)?;
                    return Ok(Self::canonical(Side::Finite, hnf_with_norm(&g, &d)?, c));
                }
                let mut c2 = c.clone();
                if !gden.is_one() {
                    for e in gens.entries() {
                        let x = e.mul(&c2);
                        let r = gden.div_exact(&gden.gcd(&x)).ok_or_else(bad)?;
                        if !r.is_one() {
                            c2 = c2.mul(&r);
                        }
                    }
                }
                let d = c2.pow(n).mul(&num).div_exact(&c).ok_or_else(bad)?;
                let mut g = gens.scale(&c2);
                if !gden.is_one() {
                    g = g.div_exact(gden).ok_or_else(bad)?;
                }
                Ok(Self::canonical(Side::Finite, hnf_with_norm(&g, &d)?, c2))
            }
            Side::Infinite => {
                let vc = c.low_order();
                let s = gden.low_order();
                let k = gens
                    .entries()
                    .iter()
                    .filter(|e| !e.is_zero())
                    .map(|e| (s as i64 - (e.low_order() + vc) as i64).max(0) as usize)
                    .max()
                    .unwrap_or(0);
                let vc2 = vc + k;
                let d = Poly::monomial(1, n as usize * vc2 + num.low_order() - vc, p);
                let unit = gden.div(&Poly::monomial(1, s, p));
                let winv = if d.is_one() { Poly::zero(p) } else { unit.inv_mod(&d).ok_or_else(bad)? };
                let mut g = gens.clone();
                for e in g.entries_mut() {
                    if e.is_zero() {
                        continue;
                    }
                    let y = e.shift(vc2);
                    *e = y.div(&Poly::monomial(1, s, p)).mul(&winv).rem(&d);
                }
                Ok(Self::canonical(Side::Infinite, hnf_with_norm(&g, &d)?, Poly::monomial(1, vc2, p)))
            }
        }
    }

    fn canonical(side: Side, h: PolyMatrix, den: Poly) -> Ideal {
        let mut den = den.monic();
        if side == Side::Infinite {
            den = u_part(&den);
        }
        let c = h.content().gcd(&den);
        if c.is_one() {
            Ideal { side, h, den }
        } else {
            Ideal { side, h: h.div_exact(&c).expect("content divides"), den: den.div(&c) }
        }
    }

    /// Build from a matrix already in HNF (no checks beyond shape).
    pub fn from_hnf(side: Side, h: PolyMatrix, den: Poly) -> Result<Ideal> {
        if !h.is_hnf() {
            return Err(Error::Invalid("matrix not in Hermite normal form".into()));
        }
        Ok(Self::canonical(side, h, den))
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn hnf(&self) -> &PolyMatrix {
        &self.h
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_unit(&self) -> bool {
        self.den.is_one() && self.h.is_identity()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Determinant of the HNF (product of its diagonal).
    pub fn det_numerator(&self) -> Poly {
        diag_product(&self.h)
    }

    /// Degree of the norm: the sum of `v_P * deg P` over places on this side.
    pub fn degree(&self) -> i64 {
        let n = self.h.rows() as i64;
        let d = self.det_numerator();
        match self.side {
            Side::Finite => d.deg() - n * self.den.deg(),
            Side::Infinite => d.low_order() as i64 - n * self.den.low_order() as i64,
        }
    }

    fn check(&self, o: &Order) -> Result<()> {
        if self.side != o.side {
            Err(Error::SideMismatch)
        } else {
            Ok(())
        }
    }

    pub fn principal(o: &Order, a: &OrderElem) -> Result<Ideal> {
        Ideal::unit(o).mul_elem(o, a)
    }

    pub fn mul(&self, o: &Order, other: &Ideal) -> Result<Ideal> {
        self.check(o)?;
        other.check(o)?;
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        if let Some(r) = self.mul_coprime_cyclic(other)? {
            return Ok(r);
        }
        self.mul_generic(o, other)
    }

    fn mul_generic(&self, o: &Order, other: &Ideal) -> Result<Ideal> {
        let n = o.n;
        let mut gens = Vec::with_capacity(n * n);
        let bcols: Vec<Vec<Poly>> = (0..n).map(|j| other.h.col(j)).collect();
        for i in 0..n {
            let m = o.mult_matrix(&self.h.col(i));
            for b in &bcols {
                gens.push(m.mul_vec(b));
            }
        }
        let gens = PolyMatrix::from_cols(&gens);
        let (a, b) = self.norm_parts();
        let (c, d) = other.norm_parts();
        let nu = reduce_frac(self.side, a.mul(&c), b.mul(&d));
        Ideal::from_norm(o, &gens, &self.den.mul(&other.den), nu)
    }

    /// `(c_0, ..., c_{n-2})` when `H` has diagonal `(1, ..., 1, nu)`: then
    /// `c` lies in `I` iff `c_{n-1} = sum h_{n-1,j} c_j mod nu`.
    fn cyclic_row(&self) -> Option<(Vec<Poly>, Poly)> {
        let n = self.h.rows();
        if self.side != Side::Finite || !self.den.is_one() || n < 2 {
            return None;
        }
        if (0..n - 1).any(|i| !self.h.get(i, i).is_one()) {
            return None;
        }
        Some(((0..n - 1).map(|j| self.h.get(n - 1, j).clone()).collect(), self.h.get(n - 1, n - 1).clone()))
    }

    /// For integral ideals of coprime norms with cyclic quotients, `IJ` is
    /// `I ∩ J`, glued by CRT.
    fn mul_coprime_cyclic(&self, other: &Ideal) -> Result<Option<Ideal>> {
        let (Some((r1, nu1)), Some((r2, nu2))) = (self.cyclic_row(), other.cyclic_row()) else { return Ok(None) };
        let (g, u, _) = nu1.xgcd(&nu2)?;
        if !g.is_one() {
            return Ok(None);
        }
        let n = self.h.rows();
        let nu = nu1.mul(&nu2);
        let e = nu1.mul(&u);
        let mut h = PolyMatrix::identity(n, nu.modulus());
        for (j, (a, b)) in r1.iter().zip(&r2).enumerate() {
            h.set(n - 1, j, a.add(&e.mul(&b.sub(a))).rem(&nu));
        }
        h.set(n - 1, n - 1, nu);
        Ok(Some(Ideal { side: Side::Finite, h, den: self.den.clone() }))
    }

    /// `a * I`
    pub fn mul_elem(&self, o: &Order, a: &OrderElem) -> Result<Ideal> {
        self.check(o)?;
        if a.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let m = o.mult_matrix(&a.num);
        let det = m.det()?;
        let gens = m.mul(&self.h)?;
        let (x, y) = self.norm_parts();
        let nu = reduce_frac(self.side, x.mul(&det), y.mul(&a.den.pow(o.n as u64)));
        Ideal::from_norm(o, &gens, &self.den.mul(&a.den), nu)
    }

    /// `(1/a) * I`, via the adjugate of the multiplication matrix.
    pub fn div_elem(&self, o: &Order, a: &OrderElem) -> Result<Ideal> {
        self.check(o)?;
        if a.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let m = o.mult_matrix(&a.num);
        let (adj, det) = m.adjugate()?;
        let gens = adj.mul(&self.h)?.scale(&a.den);
        let (x, y) = self.norm_parts();
        let nu = reduce_frac(self.side, x.mul(&a.den.pow(o.n as u64)), y.mul(&det));
        Ideal::from_norm(o, &gens, &self.den.mul(&det), nu)
    }

    /// With `H = nu O + w O` and `w' = N(w) / w`, `nu H^{-1} = nu O + w' O`
    /// as long as `w` generates `H` locally above `nu`. Checked through the
    /// determinant; `None` after a few unlucky draws.
    fn inv_two_element(&self, o: &Order) -> Result<Option<Ideal>> {
        let (n, p) = (o.n, o.p);
        let mut nu = diag_product(&self.h);
        if self.side == Side::Infinite {
            nu = u_part(&nu);
        }
        if nu.is_one() {
            return Ok(Some(Self::canonical(self.side, PolyMatrix::identity(n, p).scale(&self.den), Poly::one(p))));
        }
        let target = nu.pow(n as u64 - 1);
        let cyclic = (0..n - 1).all(|i| self.h.get(i, i).is_one());
        let one = o.one();
        let one_at = one.iter().position(|x| !x.is_zero()).filter(|&j| one[j].is_one() && one.iter().filter(|x| !x.is_zero()).count() == 1);
        let mut state = 0x2545_f491_4f6c_dd1du64;
        for _ in 0..4 {
            let mut w = vec![Poly::zero(p); n];
            for j in 0..n {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let lam = ((state >> 33) % (p as u64 - 1).max(1)) as u32 + 1;
                for (i, x) in w.iter_mut().enumerate() {
                    let e = self.h.get(i, j);
                    if !e.is_zero() {
                        *x = x.add(&e.scale(lam % p));
                    }
                }
            }
            let m = o.mult_matrix(&w);
            // O acts on nu H^{-1} / nu O through O / H, so with a cyclic
            // quotient w' alone spans it over k[x]
            let h = match (cyclic, one_at) {
                (true, Some(j)) => PolyMatrix::from_cols(&[m.adjugate_col(j)?]).hnf_mod_sum(&nu)?,
                // adj(M_w) is the multiplication matrix of w'
                _ => m.adjugate()?.0.hnf_mod_sum(&nu)?,
            };
            if diag_product(&h) == target {
                return Ok(Some(Self::canonical(self.side, h.scale(&self.den), nu)));
            }
        }
        Ok(None)
    }

    /// Dual lattice with respect to the trace form, for a lattice `N / d`.
    fn dual(o: &Order, n: &PolyMatrix, d: &Poly) -> Result<(PolyMatrix, Poly, Poly)> {
        let m = n.transpose().mul(o.gram())?;
        let (adj, det) = m.adjugate()?;
        let gens = adj.scale(d);
        let bound = d.pow(o.n as u64).mul(&det.pow(o.n as u64 - 1));
        Ok((gens, det, bound))
    }

    /// `I^{-1} = (I * O^*)^*`.
    pub fn inv(&self, o: &Order) -> Result<Ideal> {
        self.check(o)?;
        if self.is_unit() {
            return Ok(self.clone());
        }
        if let Some(r) = self.inv_two_element(o)? {
            return Ok(r);
        }
        let n = o.n;
        // O^* = adj(G) / det(G)
        let (gadj, gdet) = o.gram().adjugate()?;
        let mut gens = Vec::with_capacity(n * n);
        for i in 0..n {
            let m = o.mult_matrix(&self.h.col(i));
            for j in 0..n {
                gens.push(m.mul_vec(&gadj.col(j)));
            }
        }
        let gens = PolyMatrix::from_cols(&gens);
        let bound = self.det_numerator().mul(&gdet.pow(n as u64 - 1));
        let prod = gens.hnf_mod(&bound)?;
        let (dgens, dden, dbound) = Ideal::dual(o, &prod, &self.den.mul(&gdet))?;
        Ideal::from_generators(o, &dgens, &dden, Some(&dbound))
    }

    pub fn pow(&self, o: &Order, k: i64) -> Result<Ideal> {
        let base = if k < 0 { self.inv(o)? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Ideal::unit(o);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(o, &b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(o, &b)?;
            }
        }
        Ok(acc)
    }

    /// Membership of an element; local at `u` on the infinite side.
    pub fn contains(&self, o: &Order, x: &OrderElem) -> Result<bool> {
        self.check(o)?;
        if x.is_zero() {
            return Ok(true);
        }
        let (adj, det) = self.h.adjugate()?;
        let c = adj.mul_vec(&x.num);
        // coordinates c * den / (det * x.den)
        let q = det.mul(&x.den);
        Ok(c.iter().all(|ci| {
            if ci.is_zero() {
                return true;
            }
            let num = ci.mul(&self.den);
            match self.side {
                Side::Finite => q.divides(&num),
                Side::Infinite => num.low_order() >= q.low_order(),
            }
        }))
    }

    /// Compact canonical byte encoding, used in place keys.
    pub fn key_string(&self) -> String {
        let mut s = String::new();
        for x in self.h.entries() {
            s.push_str(&coeff_string(x));
            s.push(';');
        }
        s.push('/');
        s.push_str(&coeff_string(&self.den));
        s
    }
}

pub(crate) fn coeff_string(a: &Poly) -> String {
    let v: Vec<String> = a.coeffs().iter().map(|c| c.to_string()).collect();
    v.join(",")
}
