//! Riemann-Roch spaces from ideal pairs, and the short-circuited variant.
//!
//! For `L(D)` take the pair `(I, J)` of `-D`. A basis `H_I / e_I` of `I` is
//! written in the `K[u]`-local basis of `J`; with `u = 1/x` the coordinates
//! become `N H_I k / (c e_I)` for `k` in `K[x]^n`, where `(N, c)` depends on
//! `J` only. An element lies in `J` iff every coordinate has degree `<= 0`,
//! so after column reduction of `N H_I` the column degrees `d_j` (shifted by
//! `deg(c e_I)`) give `L(D) = span{x^t b_j : 0 <= t <= -d_j}`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::matrix::reduce_columns;
use crate::algebra::{Poly, PolyMatrix, RatFunc};
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::field::{FFElem, FunctionField};
use crate::ideal::Ideal;
use crate::order::{OrderElem, Side};
use crate::place;

/// Coordinates of finite-order elements in the basis of an infinite ideal:
/// `c = n * alpha / c_den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfTransform {
    pub n: PolyMatrix,
    pub c_den: Poly,
}

pub fn inf_transform(field: &FunctionField, j: &Ideal) -> Result<InfTransform> {
    if j.side() != Side::Infinite {
        return Err(Error::SideMismatch);
    }
    let p = field.p();
    let n = field.n();
    let oi = field.order(Side::Infinite);
    let of = field.order(Side::Finite);
    let m = oi.w.mul(j.hnf())?;
    let s = oi.den.mul(j.den());
    let (x, d) = m.adjugate()?;
    let k = x.entries().iter().map(|e| e.deg()).max().unwrap_or(0).max(0) as usize;
    let xr = x.map(|e| if e.is_zero() { e.clone() } else { e.reverse(k) });
    let r = RatFunc::new(s, d)?.invert_variable();
    let cf = field.cf() as usize;
    let mut wf = of.w.clone();
    for i in 1..n {
        for c in 0..n {
            let v = wf.get(i, c).shift(cf * i);
            wf.set(i, c, v);
        }
    }
    let nm = xr.mul(&wf)?.scale(r.num());
    let c_den = r.den().mul(&Poly::monomial(1, k, p)).mul(&of.den);
    let g = nm.content().gcd(&c_den);
    if g.is_one() {
        Ok(InfTransform { n: nm, c_den })
    } else {
        Ok(InfTransform { n: nm.div_exact(&g).unwrap(), c_den: c_den.div(&g) })
    }
}

/// Cache of [`InfTransform`]s keyed by the canonical infinite ideal.
#[derive(Default)]
pub struct SsrrCache {
    map: HashMap<Ideal, Arc<InfTransform>>,
    max_entries: Option<usize>,
    hits: u64,
    misses: u64,
}

impl SsrrCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_max_entries(max: usize) -> Self {
        SsrrCache { max_entries: Some(max), ..Default::default() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn get(&mut self, field: &FunctionField, j: &Ideal) -> Result<Arc<InfTransform>> {
        if let Some(t) = self.map.get(j) {
            self.hits += 1;
            return Ok(t.clone());
        }
        self.misses += 1;
        let t = Arc::new(inf_transform(field, j)?);
        if self.max_entries.is_none_or(|m| self.map.len() < m) {
            self.map.insert(j.clone(), t.clone());
        }
        Ok(t)
    }
}

struct Reduced {
    p: PolyMatrix,
    q: PolyMatrix,
    shift: i64,
    e: Poly,
}

fn setup(fin: &Ideal, t: &InfTransform) -> Result<Reduced> {
    if fin.side() != Side::Finite {
        return Err(Error::SideMismatch);
    }
    let p = t.n.mul(fin.hnf())?;
    let mut c = t.c_den.mul(fin.den());
    let g = p.content().gcd(&c);
    let p = if g.is_one() { p } else {
        c = c.div(&g);
        p.div_exact(&g).unwrap()
    };
    Ok(Reduced { p, q: fin.hnf().clone(), shift: c.deg(), e: fin.den().clone() })
}

/// A nonzero element of `I ∩ J` (finite-order coordinates), or `None`.
pub fn ssrr_ideals(field: &FunctionField, fin: &Ideal, inf: &Ideal, cache: Option<&mut SsrrCache>) -> Result<Option<OrderElem>> {
    let t = match cache {
        Some(c) => c.get(field, inf)?,
        None => Arc::new(inf_transform(field, inf)?),
    };
    let mut r = setup(fin, &t)?;
    let shift = r.shift;
    let hit = reduce_columns(&mut r.p, Some(&mut r.q), |_, d| d <= shift)?;
    Ok(hit.map(|j| OrderElem::new(r.q.col(j), r.e.clone()).normalized()))
}

/// A `K`-basis of `I ∩ J` in finite-order coordinates.
pub fn rr_basis_ideals(field: &FunctionField, fin: &Ideal, inf: &Ideal) -> Result<Vec<OrderElem>> {
    let t = inf_transform(field, inf)?;
    let mut r = setup(fin, &t)?;
    reduce_columns(&mut r.p, Some(&mut r.q), |_, _| false)?;
    let degs = r.p.col_degrees();
    let mut out = Vec::new();
    for (j, &d) in degs.iter().enumerate() {
        let col = r.q.col(j);
        for k in 0..=(r.shift - d).max(-1) {
            let c: Vec<Poly> = col.iter().map(|x| x.shift(k as usize)).collect();
            out.push(OrderElem::new(c, r.e.clone()));
        }
    }
    Ok(out)
}

pub fn rr_dimension_ideals(field: &FunctionField, fin: &Ideal, inf: &Ideal) -> Result<usize> {
    let t = inf_transform(field, inf)?;
    let mut r = setup(fin, &t)?;
    reduce_columns(&mut r.p, None, |_, _| false)?;
    Ok(r.p.col_degrees().iter().map(|&d| (r.shift - d + 1).max(0) as usize).sum())
}

#[derive(Clone, Debug)]
pub struct RRResult {
    pub basis: Vec<FFElem>,
}

impl RRResult {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn rr_basis(d: &Divisor) -> Result<RRResult> {
    let f = d.field();
    let (fin, inf) = d.neg().to_ideal_pair()?;
    let basis = rr_basis_ideals(f, &fin, &inf)?.iter().map(|e| f.from_order(Side::Finite, e)).collect();
    Ok(RRResult { basis })
}

/// `l(D)`
pub fn dimension(d: &Divisor) -> Result<usize> {
    let (fin, inf) = d.neg().to_ideal_pair()?;
    rr_dimension_ideals(d.field(), &fin, &inf)
}

pub fn ssrr(d: &Divisor, cache: Option<&mut SsrrCache>) -> Result<Option<FFElem>> {
    let f = d.field();
    let (fin, inf) = d.neg().to_ideal_pair()?;
    Ok(ssrr_ideals(f, &fin, &inf, cache)?.map(|e| f.from_order(Side::Finite, &e)))
}

/// `deg(M P) + 1 - l(M P)` for `M deg P >= 2 g_bound + 1`.
pub fn genus_at_place(field: &FunctionField, pl: &place::Place) -> Result<u32> {
    let bound = 2 * field.genus_bound() as i64 + 1;
    let dp = pl.degree() as i64;
    let m = (bound + dp - 1) / dp;
    let o = field.order(pl.side());
    let ideal = pl.ideal_pow(o, -m)?;
    let (fin, inf) = match pl.side() {
        Side::Finite => (ideal, Ideal::unit(field.order(Side::Infinite))),
        Side::Infinite => (Ideal::unit(field.order(Side::Finite)), ideal),
    };
    let l = rr_dimension_ideals(field, &fin, &inf)? as i64;
    let g = m * dp + 1 - l;
    if g < 0 {
        return Err(Error::Invalid(format!("negative genus {g}")));
    }
    Ok(g as u32)
}

pub fn compute_genus(field: &FunctionField) -> Result<u32> {
    let inf = place::infinite_places(field)?;
    let pl = inf.iter().min_by_key(|p| p.degree()).expect("a place above infinity");
    genus_at_place(field, pl)
}
