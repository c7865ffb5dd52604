//! Places of `F`: prime ideals of the maximal orders, found by splitting
//! `O / qO` with idempotents.

use std::collections::HashMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::linalg::{self, Subspace};
use crate::algebra::{factor, fp, Poly, PolyMatrix};
use crate::error::{Error, Result};
use crate::field::FunctionField;
use crate::ideal::{coeff_string, Ideal};
use crate::order::{Order, OrderElem, ResidueAlgebra, Side};

pub struct Place {
    side: Side,
    q: Poly,
    e: u32,
    f: u32,
    degree: u32,
    ideal: Ideal,
    inv: Ideal,
    beta: Vec<Poly>,
    key: String,
}

impl PartialEq for Place {
    fn eq(&self, o: &Self) -> bool {
        self.key == o.key
    }
}

impl Eq for Place {}

impl std::hash::Hash for Place {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.key.hash(h)
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Place {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.key.cmp(&o.key)
    }
}

impl std::fmt::Debug for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Place({}, q={}, e={}, deg={})", self.side.tag(), self.q, self.e, self.degree)
    }
}

#[derive(Default)]
pub(crate) struct PlaceCache {
    by_prime: HashMap<(Side, Poly), Vec<Arc<Place>>>,
    by_key: HashMap<String, Arc<Place>>,
}

impl Place {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn is_infinite(&self) -> bool {
        self.side == Side::Infinite
    }

    /// The prime of `K[x]` (or `u = 1/x`) below this place.
    pub fn prime(&self) -> &Poly {
        &self.q
    }

    pub fn ramification(&self) -> u32 {
        self.e
    }

    pub fn residue_degree(&self) -> u32 {
        self.f
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    /// The prime ideal.
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn inverse_ideal(&self) -> &Ideal {
        &self.inv
    }

    /// `P^k` for any integer `k`.
    pub fn ideal_pow(&self, o: &Order, k: i64) -> Result<Ideal> {
        let base = if k < 0 { &self.inv } else { &self.ideal };
        base.pow(o, k.abs())
    }

    /// Valuation of an integral element given by order coordinates.
    fn valuation_integral(&self, o: &Order, x: &[Poly]) -> u32 {
        let mut x = x.to_vec();
        let mut v = 0;
        loop {
            let y = o.mul(&x, &self.beta);
            match y.iter().map(|c| c.div_exact(&self.q)).collect::<Option<Vec<_>>>() {
                Some(z) => {
                    x = z;
                    v += 1;
                }
                None => return v,
            }
        }
    }

    pub fn valuation_elem(&self, o: &Order, a: &OrderElem) -> Result<i64> {
        if a.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let vd = if a.den.is_one() { 0 } else { a.den.valuation(&self.q) as i64 * self.e as i64 };
        Ok(self.valuation_integral(o, &a.num) as i64 - vd)
    }

    /// Exact exponent of this place in an ideal on the same side.
    pub fn valuation_ideal(&self, o: &Order, i: &Ideal) -> Result<i64> {
        if i.side() != self.side {
            return Err(Error::SideMismatch);
        }
        let vd = if i.den().is_one() { 0 } else { i.den().valuation(&self.q) as i64 * self.e as i64 };
        let det = i.det_numerator();
        let vh = if !self.q.divides(&det) {
            0
        } else {
            let n = o.n;
            let mut m = i.hnf().clone();
            let mb = o.mult_matrix(&self.beta);
            let mut v = 0;
            loop {
                let y = mb.mul(&m).expect("square");
                match y.div_exact(&self.q) {
                    Some(z) => {
                        m = z;
                        v += 1;
                    }
                    None => break,
                }
                debug_assert!(v <= n as i64 * det.deg());
            }
            v
        };
        Ok(vh - vd)
    }
}

fn place_key(side: Side, q: &Poly, ideal: &Ideal) -> String {
    format!("{}|{}|{}", side.tag(), coeff_string(q), ideal.key_string())
}

/// Multiplication in `A / rad` on flat vectors.
fn mul_mod_rad(alg: &ResidueAlgebra, rad: &Subspace, a: &[u32], b: &[u32]) -> Vec<u32> {
    rad.reduce(&alg.mul_vec(a, b))
}

fn axpy(acc: &mut [u32], c: u32, v: &[u32], p: u32) {
    if c == 0 {
        return;
    }
    for (x, &y) in acc.iter_mut().zip(v) {
        *x = fp::add(*x, fp::mul(c, y, p), p);
    }
}

/// Primitive idempotents of `A / rad` (one per prime above `q`).
fn idempotents(alg: &ResidueAlgebra, rad: &Subspace, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let p = alg.order.p;
    let dim = alg.dim();
    let bl = alg.berlekamp(rad);
    let one = rad.reduce(&alg.to_vec(&alg.order.one()));
    if bl.dimension() - rad.dimension() == 1 {
        return vec![one];
    }
    let rank_of = |e: &[u32]| {
        let vs: Vec<Vec<u32>> = bl.basis().iter().map(|b| mul_mod_rad(alg, rad, e, b)).collect();
        linalg::rank(&vs, dim, p)
    };
    let mut pending = vec![one];
    let mut done = Vec::new();
    while let Some(e) = pending.pop() {
        if rank_of(&e) <= 1 {
            done.push(e);
            continue;
        }
        loop {
            let x = alg.random_in(&bl, rng);
            let b = mul_mod_rad(alg, rad, &e, &rad.reduce(&x));
            // minimal polynomial of b in e(A/rad), whose unit is e
            let mut pw = vec![e.clone()];
            let coeffs = loop {
                let next = mul_mod_rad(alg, rad, pw.last().unwrap(), &b);
                pw.push(next);
                let k = pw.len();
                let rows: Vec<Vec<u32>> = (0..dim).map(|i| pw.iter().map(|v| v[i]).collect()).collect();
                let ker = linalg::kernel(&rows, k, p);
                if let Some(c) = ker.into_iter().next() {
                    break c;
                }
            };
            let m = Poly::from_raw(coeffs, p);
            let roots = factor::roots(&m);
            if roots.len() < 2 {
                continue;
            }
            for (i, &ci) in roots.iter().enumerate() {
                let mut ei = e.clone();
                for (j, &cj) in roots.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    // (b - cj e) / (ci - cj)
                    let mut t = b.clone();
                    axpy(&mut t, fp::neg(cj, p), &e, p);
                    let s = fp::inv(fp::sub(ci, cj, p), p);
                    let t: Vec<u32> = t.iter().map(|&v| fp::mul(v, s, p)).collect();
                    ei = mul_mod_rad(alg, rad, &ei, &t);
                }
                pending.push(ei);
            }
            break;
        }
    }
    done
}

struct RawPrime {
    ideal: Ideal,
    inv: Ideal,
    beta: Vec<Poly>,
    e: u32,
    f: u32,
}

/// Primes of `o` above the prime `q` of the base ring.
fn decompose(o: &Order, q: &Poly) -> Result<Vec<RawPrime>> {
    let p = o.p;
    let n = o.n;
    let alg = ResidueAlgebra::new(o, q);
    let dq = alg.deg_q();
    let dim = alg.dim();
    let rad = alg.radical();
    let mut seed = 0x9e37_79b9u64;
    for &c in q.coeffs() {
        seed = seed.wrapping_mul(0x100_0000_01b3).wrapping_add(c as u64);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idems = idempotents(&alg, &rad, &mut rng);
    let one = rad.reduce(&alg.to_vec(&o.one()));
    let mut out = Vec::with_capacity(idems.len());
    for e in &idems {
        let mut not_e = one.clone();
        axpy(&mut not_e, fp::neg(1, p), e, p);
        let mut gens: Vec<Vec<Poly>> = rad.basis().iter().map(|v| alg.lift(v)).collect();
        for j in 0..n {
            gens.push(alg.lift(&alg.mul_vec(&not_e, &alg.unit_vector(j * dq))));
        }
        let ideal = Ideal::from_generators_plus(o, &PolyMatrix::from_cols(&gens), q, &Poly::one(p))?;
        let f = (ideal.det_numerator().deg() as usize / dq) as u32;
        // qP^{-1} / qO = {a : a P in qO}
        let pis: Vec<Vec<Poly>> = (0..n).map(|j| ideal.hnf().col(j)).collect();
        let mut rows: Vec<Vec<u32>> = vec![Vec::with_capacity(dim); n * dim];
        for b in 0..dim {
            let a = alg.lift(&alg.unit_vector(b));
            let mut img = Vec::with_capacity(n * dim);
            for pi in &pis {
                img.extend(alg.to_vec(&o.mul(&a, pi)));
            }
            for (r, v) in rows.iter_mut().zip(img) {
                r.push(v);
            }
        }
        let ker = linalg::kernel(&rows, dim, p);
        if ker.is_empty() {
            return Err(Error::Invalid("prime ideal has trivial inverse".into()));
        }
        let beta = alg.lift(&ker[0]);
        let kl: Vec<Vec<Poly>> = ker.iter().map(|v| alg.lift(v)).collect();
        let inv = Ideal::from_generators_plus(o, &PolyMatrix::from_cols(&kl), q, q)?;
        out.push(RawPrime { ideal, inv, beta, e: 0, f });
    }
    // ramification: v_P(q)
    let mut qe = o.one();
    for c in qe.iter_mut() {
        *c = c.mul(q);
    }
    for rp in out.iter_mut() {
        let tmp = Place {
            side: o.side,
            q: q.clone(),
            e: 1,
            f: rp.f,
            degree: 0,
            ideal: rp.ideal.clone(),
            inv: rp.inv.clone(),
            beta: rp.beta.clone(),
            key: String::new(),
        };
        rp.e = tmp.valuation_integral(o, &qe);
    }
    let total: u32 = out.iter().map(|r| r.e * r.f).sum();
    if total as usize != n {
        return Err(Error::Invalid(format!("fundamental identity failed: sum e f = {total}, n = {n}")));
    }
    Ok(out)
}

fn build_places(field: &FunctionField, side: Side, q: &Poly) -> Result<Vec<Arc<Place>>> {
    let o = field.order(side);
    let dq = q.degree().unwrap_or(0) as u32;
    let mut v: Vec<Arc<Place>> = decompose(o, q)?
        .into_iter()
        .map(|r| {
            let key = place_key(side, q, &r.ideal);
            Arc::new(Place {
                side,
                q: q.clone(),
                e: r.e,
                f: r.f,
                degree: r.f * dq,
                ideal: r.ideal,
                inv: r.inv,
                beta: r.beta,
                key,
            })
        })
        .collect();
    v.sort();
    Ok(v)
}

/// Places above a monic irreducible `q` (finite side) or above `u = 1/x`
/// (infinite side, `q = x` as a polynomial in `u`).
pub fn places_above(field: &FunctionField, side: Side, q: &Poly) -> Result<Vec<Arc<Place>>> {
    let q = q.monic();
    if let Some(v) = field.places_lock().by_prime.get(&(side, q.clone())) {
        return Ok(v.clone());
    }
    if q.modulus() != field.p() {
        return Err(Error::FieldMismatch);
    }
    if q.is_constant() || !factor::is_irreducible(&q) {
        return Err(Error::NotIrreducible(q.to_string()));
    }
    let v = build_places(field, side, &q)?;
    let mut cache = field.places_lock();
    for pl in &v {
        cache.by_key.insert(pl.key.clone(), pl.clone());
    }
    cache.by_prime.insert((side, q), v.clone());
    Ok(v)
}

/// Decomposition with ramification indices.
pub fn prime_decomposition(field: &FunctionField, side: Side, q: &Poly) -> Result<Vec<(Arc<Place>, u32)>> {
    Ok(places_above(field, side, q)?.into_iter().map(|pl| {
        let e = pl.e;
        (pl, e)
    }).collect())
}

pub fn infinite_places(field: &FunctionField) -> Result<Vec<Arc<Place>>> {
    if let Some(v) = field.infinite_places.get() {
        return Ok(v.clone());
    }
    let v = places_above(field, Side::Infinite, &Poly::x(field.p()))?;
    Ok(field.infinite_places.get_or_init(|| v).clone())
}

/// Look a place up by key, decomposing its base prime if needed.
pub fn place_from_key(field: &FunctionField, key: &str) -> Result<Arc<Place>> {
    if let Some(pl) = field.places_lock().by_key.get(key) {
        return Ok(pl.clone());
    }
    let mut parts = key.splitn(3, '|');
    let side = match parts.next() {
        Some("fin") => Side::Finite,
        Some("inf") => Side::Infinite,
        _ => return Err(Error::UnknownPlace(key.into())),
    };
    let qs = parts.next().ok_or_else(|| Error::UnknownPlace(key.into()))?;
    let coeffs: Vec<i64> = if qs.is_empty() {
        Vec::new()
    } else {
        qs.split(',').map(|c| c.parse::<i64>()).collect::<std::result::Result<_, _>>().map_err(|_| Error::UnknownPlace(key.into()))?
    };
    let q = Poly::from_i64(&coeffs, field.p());
    if q.is_constant() {
        return Err(Error::UnknownPlace(key.into()));
    }
    places_above(field, side, &q)?;
    field.places_lock().by_key.get(key).cloned().ok_or_else(|| Error::UnknownPlace(key.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefer {
    Infinite,
    Any,
}

/// A degree-one place: the smallest-key infinite one when preferred and
/// available, else the smallest-key one above the first `x - c` that has one.
pub fn find_degree_one_place(field: &FunctionField, prefer: Prefer, bound: u32) -> Result<Arc<Place>> {
    if prefer == Prefer::Infinite {
        if let Some(pl) = infinite_places(field)?.into_iter().find(|pl| pl.degree == 1) {
            return Ok(pl);
        }
    }
    let p = field.p();
    for c in 0..p.min(bound.max(1)) {
        let q = Poly::from_raw(vec![fp::neg(c, p), 1], p);
        if let Some(pl) = places_above(field, Side::Finite, &q)?.into_iter().find(|pl| pl.degree == 1) {
            return Ok(pl);
        }
    }
    if prefer == Prefer::Any {
        if let Some(pl) = infinite_places(field)?.into_iter().find(|pl| pl.degree == 1) {
            return Ok(pl);
        }
    }
    Err(Error::NoDegreeOnePlace)
}
