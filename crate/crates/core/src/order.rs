//! Orders of `F` over a polynomial ring `K[T]`, in a uniform presentation.
//!
//! Both maximal orders are handled as orders over `K[T]` in `K(T)[z]/(g)`:
//! the finite side uses `T = x`, `z = y`, `g = f`; the infinite side uses
//! `T = u = 1/x` and `z = u^cf * y`, which is integral over `K[u]`. The
//! infinite order is only made maximal at `u`; its ideals are lattices that
//! agree with the order away from `u`.
//!
//! Elements are written in the order basis `w_j = (sum_i W[i][j] z^i) / den`.

use rand::Rng;

use crate::algebra::fp;
use crate::algebra::linalg::{self, Subspace};
use crate::algebra::{Poly, PolyMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Finite,
    Infinite,
}

impl Side {
    pub fn tag(self) -> &'static str {
        match self {
            Side::Finite => "fin",
            Side::Infinite => "inf",
        }
    }
}

/// An element `num / den` in order coordinates (`den` monic, and coprime to
/// the content of `num` unless `num` is zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderElem {
    pub num: Vec<Poly>,
    pub den: Poly,
}

impl OrderElem {
    pub fn new(num: Vec<Poly>, den: Poly) -> Self {
        let p = den.modulus();
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if num.iter().all(|c| c.is_zero()) {
            return OrderElem { num, den: Poly::one(p) };
        }
        let lc = den.lc();
        let inv = fp::inv(lc, p);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.iter().map(|c| c.div(&g)).collect(), den.div(&g))
        };
        OrderElem { num: num.iter().map(|c| c.scale(inv)).collect(), den: den.scale(inv) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    /// Scale so that the first nonzero coordinate of `num` is monic.
    pub fn normalized(&self) -> Self {
        match self.num.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(c) => {
                let inv = fp::inv(c.lc(), c.modulus());
                OrderElem { num: self.num.iter().map(|x| x.scale(inv)).collect(), den: self.den.clone() }
            }
        }
    }
}

/// Polynomials in `z` with `K[T]` coefficients, reduced modulo monic `g`.
fn zmul_mod(a: &[Poly], b: &[Poly], g: &[Poly]) -> Vec<Poly> {
    let n = g.len();
    let p = g[0].modulus();
    let mut prod = vec![Poly::zero(p); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] = prod[i + j].add(&x.mul(y));
            }
        }
    }
    for k in (n..prod.len()).rev() {
        let lead = std::mem::replace(&mut prod[k], Poly::zero(p));
        if lead.is_zero() {
            continue;
        }
        for (i, gi) in g.iter().enumerate() {
            prod[k - n + i].sub_mul(&lead, gi);
        }
    }
    prod.truncate(n);
    prod.resize(n, Poly::zero(p));
    prod
}

#[derive(Clone, Debug)]
pub struct Order {
    pub side: Side,
    pub p: u32,
    pub n: usize,
    /// Coefficients `g_0..g_{n-1}` of the monic defining polynomial in `z`.
    pub g: Vec<Poly>,
    pub w: PolyMatrix,
    pub den: Poly,
    winv: PolyMatrix,
    winv_d: Poly,
    mult: Vec<PolyMatrix>,
    gram: PolyMatrix,
    disc: Poly,
}

impl Order {
    pub fn equation_order(side: Side, g: Vec<Poly>) -> Result<Order> {
        let n = g.len();
        let p = g[0].modulus();
        Order::from_basis(side, g, PolyMatrix::identity(n, p), Poly::one(p))
    }

    pub fn from_basis(side: Side, g: Vec<Poly>, w: PolyMatrix, den: Poly) -> Result<Order> {
        let n = g.len();
        let p = g[0].modulus();
        let (winv, winv_d) = w.adjugate()?;
        let cols: Vec<Vec<Poly>> = (0..n).map(|j| w.col(j)).collect();
        let scale = den.mul(&winv_d);
        let mut mult = vec![PolyMatrix::zero(n, n, p); n];
        for i in 0..n {
            for j in i..n {
                let prod = zmul_mod(&cols[i], &cols[j], &g);
                let c = winv.mul_vec(&prod);
                let c: Vec<Poly> = c
                    .iter()
                    .map(|x| x.div_exact(&scale).ok_or_else(|| Error::Invalid("basis does not span a ring".into())))
                    .collect::<Result<_>>()?;
                mult[i].set_col(j, &c);
                mult[j].set_col(i, &c);
            }
        }
        let trace: Vec<Poly> = (0..n)
            .map(|k| (0..n).fold(Poly::zero(p), |acc, i| acc.add(mult[k].get(i, i))))
            .collect();
        let mut gram = PolyMatrix::zero(n, n, p);
        for i in 0..n {
            for j in 0..n {
                let c = mult[i].col(j);
                let t = c.iter().zip(&trace).fold(Poly::zero(p), |acc, (a, b)| acc.add(&a.mul(b)));
                gram.set(i, j, t);
            }
        }
        let disc = gram.det()?;
        if disc.is_zero() {
            return Err(Error::Invalid("inseparable defining polynomial".into()));
        }
        Ok(Order { side, p, n, g, w, den, winv, winv_d, mult, gram, disc: disc.monic() })
    }

    /// Enlarge at each listed prime until maximal there (round 2).
    pub fn make_maximal_at(mut self, primes: &[Poly]) -> Result<Order> {
        for q in primes {
            loop {
                match self.enlarge_at(q)? {
                    Some(o) => self = o,
                    None => break,
                }
            }
        }
        Ok(self)
    }

    /// One round-2 step: the multiplier ring of the `q`-radical, or `None`
    /// when the order is already `q`-maximal.
    fn enlarge_at(&self, q: &Poly) -> Result<Option<Order>> {
        let n = self.n;
        let alg = ResidueAlgebra::new(self, q);
        let rad = alg.radical();
        if rad.dimension() == 0 {
            return Ok(None);
        }
        let gens: Vec<Vec<Poly>> = rad.basis().iter().map(|v| alg.lift(v)).collect();
        let u = PolyMatrix::from_cols(&gens).hnf_mod_sum(q)?;
        let (uadj, udet) = u.adjugate()?;
        let ucols: Vec<Vec<Poly>> = (0..n).map(|j| u.col(j)).collect();
        // a -> (U-coordinates of a*u_m mod q)_m
        let dim = alg.dim();
        let mut rows: Vec<Vec<u32>> = vec![Vec::with_capacity(dim); n * dim];
        for b in 0..dim {
            let a = alg.lift(&alg.unit_vector(b));
            let mut img = Vec::with_capacity(n * dim);
            for um in &ucols {
                let x = self.mul(&a, um);
                let y: Vec<Poly> = uadj
                    .mul_vec(&x)
                    .iter()
                    .map(|c| c.div_exact(&udet).expect("radical is an ideal"))
                    .collect();
                img.extend(alg.to_vec(&y));
            }
            for (r, v) in rows.iter_mut().zip(img) {
                r.push(v);
            }
        }
        let ker = linalg::kernel(&rows, dim, self.p);
        if ker.is_empty() {
            return Ok(None);
        }
        let vg: Vec<Vec<Poly>> = ker.iter().map(|v| alg.lift(v)).collect();
        let v = PolyMatrix::from_cols(&vg).hnf_mod_sum(q)?;
        // new basis W * V / (den * q)
        let nw = self.w.mul(&v)?;
        let det = nw.entries().iter().step_by(n + 1).fold(Poly::one(self.p), |a, b| a.mul(b));
        let nw = nw.hnf_mod(&det)?;
        let mut nden = self.den.mul(q);
        let c = nw.content().gcd(&nden);
        let nw = if c.is_one() { nw } else {
            nden = nden.div(&c);
            nw.div_exact(&c).unwrap()
        };
        Order::from_basis(self.side, self.g.clone(), nw, nden).map(Some)
    }

    pub fn disc(&self) -> &Poly {
        &self.disc
    }

    pub fn gram(&self) -> &PolyMatrix {
        &self.gram
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// `[O : K[T][z]]` as `den^n / det W` (monic).
    pub fn index(&self) -> Poly {
        let det = (0..self.n).fold(Poly::one(self.p), |a, i| a.mul(self.w.get(i, i)));
        self.den.pow(self.n as u64).div(&det).monic()
    }

    pub fn one(&self) -> Vec<Poly> {
        // 1 = den * W^{-1} e_0
        let mut e0 = vec![Poly::zero(self.p); self.n];
        e0[0] = self.den.clone();
        self.winv.mul_vec(&e0).iter().map(|c| c.div_exact(&self.winv_d).expect("1 is in the order")).collect()
    }

    pub fn zero(&self) -> Vec<Poly> {
        vec![Poly::zero(self.p); self.n]
    }

    pub fn mul(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        let mut out = vec![Poly::zero(self.p); self.n];
        for (k, ak) in a.iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            let col = self.mult[k].mul_vec(b);
            for (o, c) in out.iter_mut().zip(col) {
                if !c.is_zero() {
                    *o = o.add(&ak.mul(&c));
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `a` in order coordinates.
    pub fn mult_matrix(&self, a: &[Poly]) -> PolyMatrix {
        let mut m = PolyMatrix::zero(self.n, self.n, self.p);
        for (k, ak) in a.iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            for i in 0..self.n {
                for j in 0..self.n {
                    let c = self.mult[k].get(i, j);
                    if !c.is_zero() {
                        let v = m.get(i, j).add(&ak.mul(c));
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn mult_basis(&self, k: usize) -> &PolyMatrix {
        &self.mult[k]
    }

    /// Trace of an integral element.
    pub fn trace(&self, a: &[Poly]) -> Poly {
        let m = self.mult_matrix(a);
        (0..self.n).fold(Poly::zero(self.p), |acc, i| acc.add(m.get(i, i)))
    }

    /// Order coordinates of `sum_i x[i] z^i / d`.
    pub fn from_z(&self, x: &[Poly], d: &Poly) -> OrderElem {
        let num: Vec<Poly> = self.winv.mul_vec(x).iter().map(|c| c.mul(&self.den)).collect();
        OrderElem::new(num, d.mul(&self.winv_d))
    }

    /// `z`-coordinates of an element: `(x, d)` with element `sum x_i z^i / d`.
    pub fn to_z(&self, e: &OrderElem) -> (Vec<Poly>, Poly) {
        (self.w.mul_vec(&e.num), e.den.mul(&self.den))
    }

    pub fn w_adjugate(&self) -> (&PolyMatrix, &Poly) {
        (&self.winv, &self.winv_d)
    }
}

/// The `F_p`-algebra `O / qO` of dimension `n * deg q`. Elements are
/// coordinate vectors of polynomials reduced mod `q`; flat vectors index
/// `T^k w_j` at `j * deg q + k`.
pub struct ResidueAlgebra<'a> {
    pub order: &'a Order,
    pub q: Poly,
    dq: usize,
}

impl<'a> ResidueAlgebra<'a> {
    pub fn new(order: &'a Order, q: &Poly) -> Self {
        ResidueAlgebra { order, q: q.monic(), dq: q.degree().expect("prime of positive degree") }
    }

    pub fn dim(&self) -> usize {
        self.order.n * self.dq
    }

    pub fn deg_q(&self) -> usize {
        self.dq
    }

    pub fn unit_vector(&self, b: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[b] = 1;
        v
    }

    pub fn to_vec(&self, c: &[Poly]) -> Vec<u32> {
        let mut v = vec![0u32; self.dim()];
        for (j, x) in c.iter().enumerate() {
            let r = x.rem(&self.q);
            for (k, &a) in r.coeffs().iter().enumerate() {
                v[j * self.dq + k] = a;
            }
        }
        v
    }

    pub fn lift(&self, v: &[u32]) -> Vec<Poly> {
        (0..self.order.n).map(|j| Poly::from_raw(v[j * self.dq..(j + 1) * self.dq].to_vec(), self.order.p)).collect()
    }

    pub fn reduce(&self, c: &[Poly]) -> Vec<Poly> {
        c.iter().map(|x| x.rem(&self.q)).collect()
    }

    pub fn mul(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        self.reduce(&self.order.mul(a, b))
    }

    pub fn pow(&self, a: &[Poly], mut e: u128) -> Vec<Poly> {
        let mut base = self.reduce(a);
        let mut r = self.reduce(&self.order.one());
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        r
    }

    /// Images of the flat basis under `a -> a^(p^j)`.
    fn frobenius_images(&self, j: u32) -> Vec<Vec<u32>> {
        let p = self.order.p;
        let e = (p as u128).pow(j);
        let n = self.order.n;
        let mut fw = Vec::with_capacity(n);
        for i in 0..n {
            let mut wi = vec![Poly::zero(p); n];
            wi[i] = Poly::one(p);
            fw.push(self.pow(&wi, e));
        }
        // F(T^k w_i) = F(T)^k F(w_i), with F(T) = T^(p^j) mod q
        let ft = Poly::x(p).pow_mod(e, &self.q);
        let mut out = Vec::with_capacity(self.dim());
        for f in fw.iter() {
            let mut tk = Poly::one(p);
            for _ in 0..self.dq {
                let img: Vec<Poly> = f.iter().map(|c| c.mul_mod(&tk, &self.q)).collect();
                out.push(self.to_vec(&img));
                tk = tk.mul_mod(&ft, &self.q);
            }
        }
        out
    }

    /// The nilradical of `O / qO`.
    pub fn radical(&self) -> Subspace {
        let p = self.order.p as u128;
        let n = self.dim() as u128;
        let mut j = 1;
        while p.pow(j) < n {
            j += 1;
        }
        let imgs = self.frobenius_images(j);
        let rows = transpose(&imgs, self.dim());
        let ker = linalg::kernel(&rows, self.dim(), self.order.p);
        Subspace::new(&ker, self.dim(), self.order.p)
    }

    /// `{a : a^p - a in rad}`, a subspace containing `rad`.
    pub fn berlekamp(&self, rad: &Subspace) -> Subspace {
        let pp = self.order.p;
        let imgs = self.frobenius_images(1);
        let dim = self.dim();
        let mut cols = Vec::with_capacity(dim);
        for (b, img) in imgs.iter().enumerate() {
            let mut v = img.clone();
            v[b] = fp::sub(v[b], 1, pp);
            cols.push(rad.reduce(&v));
        }
        let rows = transpose(&cols, dim);
        let ker = linalg::kernel(&rows, dim, pp);
        Subspace::new(&ker, dim, pp)
    }

    pub fn random_in<R: Rng + ?Sized>(&self, s: &Subspace, rng: &mut R) -> Vec<u32> {
        let pp = self.order.p;
        let mut v = vec![0u32; self.dim()];
        for b in s.basis() {
            let c = rng.gen_range(0..pp);
            for (x, &y) in v.iter_mut().zip(b) {
                *x = fp::add(*x, fp::mul(c, y, pp), pp);
            }
        }
        v
    }

    pub fn mul_vec(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.to_vec(&self.mul(&self.lift(a), &self.lift(b)))
    }
}

/// Columns given as vectors -> rows.
pub(crate) fn transpose(cols: &[Vec<u32>], nrows: usize) -> Vec<Vec<u32>> {
    (0..nrows).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Primes `q` with `q^2 | d`.
pub(crate) fn square_divisors(d: &Poly) -> Result<Vec<Poly>> {
    let dd = d.derivative();
    if dd.is_zero() {
        return Ok(crate::algebra::factor::factor(d)?.into_iter().filter(|(_, m)| *m >= 2).map(|(q, _)| q).collect());
    }
    let s = d.gcd(&dd);
    if s.is_one() {
        return Ok(Vec::new());
    }
    crate::algebra::factor::prime_factors(&s)
}
