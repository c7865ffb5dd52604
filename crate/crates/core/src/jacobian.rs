//! Jacobian arithmetic with unique Hess representatives along a fixed
//! degree-one place `A`.
//!
//! `L(.)` computations consume the ideal pair of `-E`; the test divisor
//! `E + mA` then has pair `pair(-E) * P_A^{-m}`. A class keeps the finite
//! ideal of `D~ - rA` (no inverse needed when adding) and the infinite ideal
//! of its negative. The effective `D~` is rebuilt on request by factoring.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{factor, Poly};
use crate::divisor::{Divisor, DivisorTerm};
use crate::error::{Error, Result};
use crate::field::{FFElem, Field};
use crate::ideal::Ideal;
use crate::order::{OrderElem, Side};
use crate::place::{self, Place, Prefer};
use crate::riemann_roch::{ssrr_ideals, SsrrCache};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    Linear,
    Binary,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Linear => "linear",
            Strategy::Binary => "binary",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub strategy: Strategy,
    pub caching: bool,
    /// Keep every ideal pair handed to SSRR (for height checks).
    pub trace: bool,
    /// Recompute every infinite-cache hit and compare.
    pub verify_cache: bool,
    pub max_cache_entries: Option<usize>,
    pub prefer: Prefer,
    pub place_search_bound: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            strategy: Strategy::Linear,
            caching: true,
            trace: false,
            verify_cache: false,
            max_cache_entries: None,
            prefer: Prefer::Infinite,
            place_search_bound: 1000,
        }
    }
}

impl Config {
    pub fn new(strategy: Strategy, caching: bool) -> Self {
        Config { strategy, caching, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounters {
    pub ssrr_calls: u64,
    pub partial_additions: u64,
    pub infinite_cache_hits: u64,
    pub infinite_cache_misses: u64,
    pub ssrr_cache_hits: u64,
    pub ssrr_cache_misses: u64,
}

impl OpCounters {
    pub fn since(&self, earlier: &OpCounters) -> OpCounters {
        OpCounters {
            ssrr_calls: self.ssrr_calls - earlier.ssrr_calls,
            partial_additions: self.partial_additions - earlier.partial_additions,
            infinite_cache_hits: self.infinite_cache_hits - earlier.infinite_cache_hits,
            infinite_cache_misses: self.infinite_cache_misses - earlier.infinite_cache_misses,
            ssrr_cache_hits: self.ssrr_cache_hits - earlier.ssrr_cache_hits,
            ssrr_cache_misses: self.ssrr_cache_misses - earlier.ssrr_cache_misses,
        }
    }
}

/// The class of `D~ - rA`. `inf` is the infinite ideal of `-(D~ - rA)`;
/// `fin` is the finite ideal of `D~ - rA`, integral when `A` is infinite,
/// so sums only multiply ideals of small norm.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedClassRep {
    field_id: u64,
    a_key: Arc<str>,
    fin: Ideal,
    inf: Ideal,
    r: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub dtilde: Vec<DivisorTerm>,
    pub r: u32,
}

impl ReducedClassRep {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0 && self.fin.is_unit() && self.inf.is_unit()
    }

    /// Ideal pair of `-(D~ - rA)`.
    pub fn ideal_pair(&self, field: &Field) -> Result<(Ideal, Ideal)> {
        Ok((self.fin.inv(field.order(Side::Finite))?, self.inf.clone()))
    }
}

pub struct JacobianCtx {
    field: Field,
    a: Arc<Place>,
    a_key: Arc<str>,
    g: u32,
    config: Config,
    /// `P_A^k` for the exponents the strategy needs.
    pa: HashMap<i64, Ideal>,
    inf_cache: HashMap<(Ideal, Ideal), Ideal>,
    /// With `A` infinite and one other infinite place `B`, the infinite part
    /// of a reduced `D~ - rA` is `kB - rA`; keyed by `(k, r)`.
    other_inf: Option<Arc<Place>>,
    height_cache: HashMap<(i64, u32), Ideal>,
    ssrr_cache: SsrrCache,
    counters: OpCounters,
    trace: Vec<(Ideal, Ideal)>,
}

type Pair = (Ideal, Ideal);

impl JacobianCtx {
    pub fn new(field: &Field, config: Config) -> Result<JacobianCtx> {
        let a = place::find_degree_one_place(field, config.prefer, config.place_search_bound)?;
        JacobianCtx::with_place(field, a, config)
    }

    pub fn with_place(field: &Field, a: Arc<Place>, config: Config) -> Result<JacobianCtx> {
        if a.degree() != 1 {
            return Err(Error::Invalid("base place must have degree one".into()));
        }
        let g = field.genus();
        let ssrr_cache = match config.max_cache_entries {
            Some(m) => SsrrCache::with_max_entries(m),
            None => SsrrCache::new(),
        };
        let mut ctx = JacobianCtx {
            field: field.clone(),
            a_key: Arc::from(a.key()),
            a,
            g,
            config,
            pa: HashMap::new(),
            inf_cache: HashMap::new(),
            other_inf: None,
            height_cache: HashMap::new(),
            ssrr_cache,
            counters: OpCounters::default(),
            trace: Vec::new(),
        };
        let gi = g as i64;
        let exps: Vec<i64> = if g <= 1 {
            (-gi..=1).collect()
        } else {
            match ctx.config.strategy {
                Strategy::Linear => vec![-(gi - 1), -1, 1],
                Strategy::Binary => (-gi..=1).collect(),
            }
        };
        if ctx.a.side() == Side::Infinite {
            let pls = place::infinite_places(field)?;
            if pls.len() == 2 {
                ctx.other_inf = pls.into_iter().find(|pl| *pl != ctx.a);
            }
        }
        let o = field.order(ctx.a.side());
        for k in exps {
            let id = ctx.a.ideal_pow(o, k)?;
            ctx.pa.insert(k, id);
        }
        Ok(ctx)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn base_place(&self) -> &Arc<Place> {
        &self.a
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn counters(&self) -> OpCounters {
        self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = OpCounters::default();
    }

    pub fn infinite_cache_len(&self) -> usize {
        self.inf_cache.len() + self.height_cache.len()
    }

    pub fn ssrr_cache_len(&self) -> usize {
        self.ssrr_cache.len()
    }

    pub fn clear_caches(&mut self) {
        self.inf_cache.clear();
        self.height_cache.clear();
        self.ssrr_cache = match self.config.max_cache_entries {
            Some(m) => SsrrCache::with_max_entries(m),
            None => SsrrCache::new(),
        };
    }

    /// Ideal pairs given to SSRR since the last call (needs `trace`).
    pub fn take_trace(&mut self) -> Vec<(Ideal, Ideal)> {
        std::mem::take(&mut self.trace)
    }

    fn check(&self, c: &ReducedClassRep) -> Result<()> {
        if c.field_id != self.field.id() || c.a_key != self.a_key {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }

    fn make_rep(&self, fin: Ideal, inf: Ideal, r: u32) -> ReducedClassRep {
        ReducedClassRep { field_id: self.field.id(), a_key: self.a_key.clone(), fin, inf, r }
    }

    // ---- partial additions ----------------------------------------------

    pub fn partial_add_finite(&mut self, i1: &Ideal, i2: &Ideal) -> Result<Ideal> {
        self.counters.partial_additions += 1;
        i1.mul(self.field.order(Side::Finite), i2)
    }

    /// Product of infinite ideals, served from the cache when caching is on.
    pub fn partial_add_infinite(&mut self, j1: &Ideal, j2: &Ideal) -> Result<Ideal> {
        self.counters.partial_additions += 1;
        let oi = self.field.order(Side::Infinite);
        if !self.config.caching {
            return j1.mul(oi, j2);
        }
        let key = if j1.key_string() <= j2.key_string() { (j1.clone(), j2.clone()) } else { (j2.clone(), j1.clone()) };
        if let Some(v) = self.inf_cache.get(&key) {
            self.counters.infinite_cache_hits += 1;
            if self.config.verify_cache {
                assert_eq!(v, &j1.mul(oi, j2)?, "infinite cache returned a stale product");
            }
            return Ok(v.clone());
        }
        self.counters.infinite_cache_misses += 1;
        let v = j1.mul(oi, j2)?;
        if self.config.max_cache_entries.is_none_or(|m| self.inf_cache.len() < m) {
            self.inf_cache.insert(key, v.clone());
        }
        Ok(v)
    }

    fn partial_add(&mut self, side: Side, i1: &Ideal, i2: &Ideal) -> Result<Ideal> {
        match side {
            Side::Finite => self.partial_add_finite(i1, i2),
            Side::Infinite => self.partial_add_infinite(i1, i2),
        }
    }

    /// `pair * P_A^k`, one partial addition on A's side.
    fn shift(&mut self, pair: &Pair, k: i64) -> Result<Pair> {
        let pk = match self.pa.get(&k) {
            Some(p) => p.clone(),
            None => {
                let id = self.a.ideal_pow(self.field.order(self.a.side()), k)?;
                self.pa.insert(k, id.clone());
                id
            }
        };
        Ok(match self.a.side() {
            Side::Finite => (self.partial_add(Side::Finite, &pair.0, &pk)?, pair.1.clone()),
            Side::Infinite => (pair.0.clone(), self.partial_add(Side::Infinite, &pair.1, &pk)?),
        })
    }

    fn ssrr(&mut self, pair: &Pair) -> Result<Option<OrderElem>> {
        self.counters.ssrr_calls += 1;
        if self.config.trace {
            self.trace.push(pair.clone());
        }
        if self.config.caching {
            let (h0, m0) = (self.ssrr_cache.hits(), self.ssrr_cache.misses());
            let out = ssrr_ideals(&self.field, &pair.0, &pair.1, Some(&mut self.ssrr_cache))?;
            self.counters.ssrr_cache_hits += self.ssrr_cache.hits() - h0;
            self.counters.ssrr_cache_misses += self.ssrr_cache.misses() - m0;
            Ok(out)
        } else {
            ssrr_ideals(&self.field, &pair.0, &pair.1, None)
        }
    }

    // ---- HR-Min ------------------------------------------------------------

    /// Minimal `r` with `l(E + rA) = 1`, where `base` is the pair of `-E`.
    fn hr_min_pair(&mut self, base: &Pair, strategy: Strategy) -> Result<(u32, OrderElem)> {
        if self.g <= 1 {
            return self.hr_min_scan(base);
        }
        match strategy {
            Strategy::Linear => self.hr_min_linear_pair(base),
            Strategy::Binary => self.hr_min_binary_pair(base),
        }
    }

    fn hr_min_scan(&mut self, base: &Pair) -> Result<(u32, OrderElem)> {
        for m in 0..=self.g {
            let t = self.shift(base, -(m as i64))?;
            if let Some(a) = self.ssrr(&t)? {
                return Ok((m, a));
            }
        }
        Err(Error::HrMinNoSolution)
    }

    fn hr_min_linear_pair(&mut self, base: &Pair) -> Result<(u32, OrderElem)> {
        let g = self.g;
        let mut t = self.shift(base, -(g as i64 - 1))?;
        let mut a = match self.ssrr(&t)? {
            Some(a) => a,
            None => {
                t = self.shift(&t, -1)?;
                return match self.ssrr(&t)? {
                    Some(a) => Ok((g, a)),
                    None => Err(Error::HrMinNoSolution),
                };
            }
        };
        for m in (0..g - 1).rev() {
            t = self.shift(&t, 1)?;
            match self.ssrr(&t)? {
                None => return Ok((m + 1, a)),
                Some(b) => a = b,
            }
        }
        Ok((0, a))
    }

    /// Bisection with the upper probe at `ceil` of the midpoint, so the
    /// typical case `r = g` takes `ceil(log2(g + 1))` probes.
    fn hr_min_binary_pair(&mut self, base: &Pair) -> Result<(u32, OrderElem)> {
        let (mut lo_int, mut hi_int) = (0u32, self.g);
        let (mut lo, mut hi) = (0.0f64, self.g as f64);
        let mut found: Option<OrderElem> = None;
        loop {
            if lo_int == hi_int {
                if let Some(a) = found {
                    return Ok((hi_int, a));
                }
            }
            let upper = if found.is_some() { hi_int - 1 } else { hi_int };
            let m = (((lo + hi) / 2.0).ceil() as u32).clamp(lo_int, upper);
            let t = self.shift(base, -(m as i64))?;
            match self.ssrr(&t)? {
                Some(a) => {
                    hi_int = m;
                    hi = m as f64;
                    found = Some(a);
                }
                None => {
                    if m == self.g {
                        return Err(Error::HrMinNoSolution);
                    }
                    lo_int = m + 1;
                    lo = m as f64;
                }
            }
        }
    }

    fn pair_of_neg(&self, d: &Divisor) -> Result<Pair> {
        self.field.check_same(d.field())?;
        if d.degree() != 0 {
            return Err(Error::NonzeroDegree(d.degree()));
        }
        d.neg().to_ideal_pair()
    }

    pub fn hr_min_linear(&mut self, d: &Divisor) -> Result<(u32, FFElem)> {
        let base = self.pair_of_neg(d)?;
        let (r, a) = self.hr_min_pair(&base, Strategy::Linear)?;
        Ok((r, self.field.from_order(Side::Finite, &a)))
    }

    pub fn hr_min_binary(&mut self, d: &Divisor) -> Result<(u32, FFElem)> {
        let base = self.pair_of_neg(d)?;
        let (r, a) = self.hr_min_pair(&base, Strategy::Binary)?;
        Ok((r, self.field.from_order(Side::Finite, &a)))
    }

    /// HR-Min on `pair(-E)`, then `pair(-(E + div a)) = pair(-E) * (1/a)`.
    /// `pos` is the finite ideal of `E`.
    fn reduce_pair(&mut self, base: &Pair, pos: &Ideal) -> Result<ReducedClassRep> {
        let strategy = self.config.strategy;
        let (r, a) = self.hr_min_pair(base, strategy)?;
        let field = self.field.clone();
        let oi = field.order(Side::Infinite);
        self.counters.partial_additions += 1;
        let fin = pos.mul_elem(field.order(Side::Finite), &a)?;
        let inf = match self.inf_from_height(&fin, r)? {
            Some(inf) if !self.config.verify_cache => inf,
            cached => {
                let ainf = field.finite_to_infinite(&a);
                let jinv = Ideal::unit(oi).div_elem(oi, &ainf)?;
                let inf = if cached.is_some() { base.1.mul(oi, &jinv)? } else { self.partial_add_infinite(&base.1, &jinv)? };
                if let Some(c) = cached {
                    assert_eq!(c, inf, "height cache returned a stale ideal");
                }
                inf
            }
        };
        Ok(self.make_rep(fin, inf, r))
    }

    /// Infinite ideal of `-(kB - rA)` with `k` read off the degree of the
    /// finite ideal `fin` of `D~`; only with caching on and two infinite
    /// places.
    fn inf_from_height(&mut self, fin: &Ideal, r: u32) -> Result<Option<Ideal>> {
        let Some(b) = self.other_inf.clone() else { return Ok(None) };
        if !self.config.caching {
            return Ok(None);
        }
        self.counters.partial_additions += 1;
        let (num, den) = fin.norm_parts();
        let rest = r as i64 - (num.deg() as i64 - den.deg() as i64);
        if rest % b.degree() as i64 != 0 {
            return Err(Error::Invalid("degree of the finite part is inconsistent".into()));
        }
        let k = rest / b.degree() as i64;
        if let Some(v) = self.height_cache.get(&(k, r)) {
            self.counters.infinite_cache_hits += 1;
            return Ok(Some(v.clone()));
        }
        self.counters.infinite_cache_misses += 1;
        let d = Divisor::from_place(&self.field, &self.a, r as i64).sub(&Divisor::from_place(&self.field, &b, k))?;
        let inf = d.to_ideal_pair()?.1;
        if self.config.max_cache_entries.is_none_or(|m| self.height_cache.len() < m) {
            self.height_cache.insert((k, r), inf.clone());
        }
        Ok(Some(inf))
    }

    pub fn reduce(&mut self, d: &Divisor) -> Result<ReducedClassRep> {
        let base = self.pair_of_neg(d)?;
        let pos = base.0.inv(self.field.order(Side::Finite))?;
        self.reduce_pair(&base, &pos)
    }

    // ---- group law -----------------------------------------------------------

    pub fn zero(&self) -> ReducedClassRep {
        self.make_rep(Ideal::unit(self.field.order(Side::Finite)), Ideal::unit(self.field.order(Side::Infinite)), 0)
    }

    pub fn add(&mut self, c1: &ReducedClassRep, c2: &ReducedClassRep) -> Result<ReducedClassRep> {
        self.check(c1)?;
        self.check(c2)?;
        let pos = self.partial_add_finite(&c1.fin, &c2.fin)?;
        let inf = self.partial_add_infinite(&c1.inf, &c2.inf)?;
        let fin = pos.inv(self.field.order(Side::Finite))?;
        self.reduce_pair(&(fin, inf), &pos)
    }

    pub fn neg(&mut self, c: &ReducedClassRep) -> Result<ReducedClassRep> {
        self.check(c)?;
        if c.is_zero() {
            return Ok(c.clone());
        }
        let pos = c.fin.inv(self.field.order(Side::Finite))?;
        let inf = c.inf.inv(self.field.order(Side::Infinite))?;
        self.reduce_pair(&(c.fin.clone(), inf), &pos)
    }

    pub fn sub(&mut self, c1: &ReducedClassRep, c2: &ReducedClassRep) -> Result<ReducedClassRep> {
        let n2 = self.neg(c2)?;
        self.add(c1, &n2)
    }

    pub fn scalar_mul(&mut self, k: i64, c: &ReducedClassRep) -> Result<ReducedClassRep> {
        self.check(c)?;
        let mut base = if k < 0 { self.neg(c)? } else { c.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.zero();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc)
    }

    // ---- divisors ------------------------------------------------------------

    /// The effective divisor `D~` of a representative.
    pub fn dtilde(&self, c: &ReducedClassRep) -> Result<Divisor> {
        self.check(c)?;
        let d = self.class_divisor(c)?;
        d.add(&Divisor::from_place(&self.field, &self.a, c.r as i64))
    }

    /// `D~ - rA`
    pub fn class_divisor(&self, c: &ReducedClassRep) -> Result<Divisor> {
        self.check(c)?;
        let (fin, inf) = c.ideal_pair(&self.field)?;
        Ok(Divisor::from_ideal_pair(&self.field, &fin, &inf)?.neg())
    }

    pub fn to_json(&self, c: &ReducedClassRep) -> Result<String> {
        let j = ClassJson { dtilde: self.dtilde(c)?.to_terms(), r: c.r };
        Ok(serde_json::to_string(&j)?)
    }

    /// Trusts that the stored data is reduced.
    pub fn from_json(&self, s: &str) -> Result<ReducedClassRep> {
        let j: ClassJson = serde_json::from_str(s)?;
        let dt = Divisor::from_term_list(&self.field, &j.dtilde)?;
        if dt.degree() != j.r as i64 {
            return Err(Error::Invalid("deg D~ differs from r".into()));
        }
        let d = dt.sub(&Divisor::from_place(&self.field, &self.a, j.r as i64))?;
        let (fin, inf) = d.neg().to_ideal_pair()?;
        let pos = fin.inv(self.field.order(Side::Finite))?;
        Ok(self.make_rep(pos, inf, j.r))
    }

    /// A uniformly random place of degree `k` other than `A`, where `k` is
    /// least with `p^k >= 4096`. Only places of residue degree one count:
    /// an inert place of degree `n k` is (nearly) principal, and drawing
    /// it skews small fields towards the zero class.
    pub fn random_place<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Arc<Place>> {
        let p = self.field.p();
        let mut k = 1;
        while (p as u64).pow(k as u32) < 4096 {
            k += 1;
        }
        for _ in 0..10_000 {
            let q = Poly::random_monic(rng, k, p);
            if !factor::is_irreducible(&q) {
                continue;
            }
            let pls = place::places_above(&self.field, Side::Finite, &q)?;
            let good: Vec<_> = pls.iter().filter(|pl| pl.residue_degree() == 1).collect();
            let i = rng.gen_range(0..self.field.n());
            if i < good.len() && *good[i] != self.a {
                return Ok(good[i].clone());
            }
        }
        Err(Error::RetryBudget { seed: 0, what: "random place".into() })
    }

    /// `P_1 + ... + P_k - deg * A` with `deg >= g`.
    pub fn random_divisor<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Divisor> {
        let mut d = Divisor::zero(&self.field);
        while d.degree() < self.g.max(1) as i64 {
            d = d.add(&Divisor::from_place(&self.field, &self.random_place(rng)?, 1))?;
        }
        let deg = d.degree();
        d.sub(&Divisor::from_place(&self.field, &self.a, deg))
    }

    pub fn random_element<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<ReducedClassRep> {
        let d = self.random_divisor(rng)?;
        self.reduce(&d)
    }
}
