//! The function field `F = K(x)[t]/(f)` and its elements.
//!
//! `F/K` is assumed geometric (`K` algebraically closed in `F`). This is not
//! checked; for a non-geometric `f` the genus and class group come out wrong.

pub mod irreducible;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::algebra::{fp, Poly, PolyMatrix, RatFunc};
use crate::error::{Error, Result};
use crate::order::{square_divisors, Order, OrderElem, Side};
use crate::place::PlaceCache;

pub type Field = Arc<FunctionField>;

/// Generation metadata carried along in field files.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cf: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eq3_equality: Option<bool>,
}

/// On-disk field description; `coeffs[i]` lists `a_i` lowest degree first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub n: usize,
    pub coeffs: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<FieldMeta>,
}

pub struct FunctionField {
    p: u32,
    n: usize,
    coeffs: Vec<Poly>,
    cf: u32,
    id: u64,
    finite: Order,
    infinite: Order,
    genus: OnceLock<u32>,
    pub(crate) places: Mutex<PlaceCache>,
    pub(crate) infinite_places: OnceLock<Vec<Arc<crate::place::Place>>>,
    meta: Mutex<Option<FieldMeta>>,
}

impl std::fmt::Debug for FunctionField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FunctionField(p={}, f={})", self.p, self.poly_string())
    }
}

/// `max ceil(deg a_i / (n - i))` over nonzero `a_i`; zero if all vanish.
pub fn compute_cf(coeffs: &[Poly]) -> u32 {
    let n = coeffs.len();
    coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, a)| a.degree().map(|d| d.div_ceil(n - i) as u32))
        .max()
        .unwrap_or(0)
}

/// Build a field from integer coefficient lists (lowest degree first).
pub fn make_field(p: u64, coeffs: &[Vec<i64>]) -> Result<Field> {
    let p = fp::check_modulus(p)?;
    let polys: Vec<Poly> = coeffs.iter().map(|c| Poly::from_i64(c, p)).collect();
    FunctionField::new(p, polys)
}

impl FunctionField {
    pub fn new(p: u32, coeffs: Vec<Poly>) -> Result<Field> {
        let p = fp::check_modulus(p as u64)?;
        let n = coeffs.len();
        if n < 2 {
            return Err(Error::DegreeTooSmall);
        }
        if coeffs.iter().any(|c| c.modulus() != p) {
            return Err(Error::Invalid("coefficient modulus mismatch".into()));
        }
        if !irreducible::is_irreducible(&coeffs)? {
            return Err(Error::Reducible);
        }
        let cf = compute_cf(&coeffs);
        let finite = {
            let e = Order::equation_order(Side::Finite, coeffs.clone())?;
            let qs = square_divisors(e.disc())?;
            e.make_maximal_at(&qs)?
        };
        let infinite = {
            let g: Vec<Poly> = coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let top = cf as usize * (n - i);
                    if a.is_zero() {
                        a.clone()
                    } else {
                        a.reverse(top)
                    }
                })
                .collect();
            let e = Order::equation_order(Side::Infinite, g)?;
            let u = Poly::x(p);
            if e.disc().valuation(&u) >= 2 {
                e.make_maximal_at(&[u])?
            } else {
                e
            }
        };
        let mut h = DefaultHasher::new();
        p.hash(&mut h);
        coeffs.hash(&mut h);
        Ok(Arc::new(FunctionField {
            p,
            n,
            coeffs,
            cf,
            id: h.finish(),
            finite,
            infinite,
            genus: OnceLock::new(),
            places: Mutex::new(PlaceCache::default()),
            infinite_places: OnceLock::new(),
            meta: Mutex::new(None),
        }))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        if spec.coeffs.len() != spec.n {
            return Err(Error::Invalid(format!("expected {} coefficient lists, got {}", spec.n, spec.coeffs.len())));
        }
        let f = make_field(spec.p, &spec.coeffs)?;
        *f.meta.lock().unwrap() = spec.meta.clone();
        Ok(f)
    }

    pub fn from_json(s: &str) -> Result<Field> {
        let spec: FieldSpec = serde_json::from_str(s)?;
        Self::from_spec(&spec)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p as u64,
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a.coeffs().iter().map(|&c| c as i64).collect()).collect(),
            meta: self.meta.lock().unwrap().clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.spec()).expect("field spec serializes")
    }

    pub fn set_meta(&self, meta: FieldMeta) {
        *self.meta.lock().unwrap() = Some(meta);
    }

    pub fn meta(&self) -> Option<FieldMeta> {
        self.meta.lock().unwrap().clone()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn cf(&self) -> u32 {
        self.cf
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn order(&self, side: Side) -> &Order {
        match side {
            Side::Finite => &self.finite,
            Side::Infinite => &self.infinite,
        }
    }

    /// `floor((cf n - 2)(n - 1) / 2)`, clamped at zero.
    pub fn genus_bound(&self) -> u32 {
        let a = (self.cf as i64 * self.n as i64 - 2) * (self.n as i64 - 1);
        (a.max(0) / 2) as u32
    }

    pub fn genus(&self) -> u32 {
        *self.genus.get_or_init(|| crate::riemann_roch::compute_genus(self).expect("genus computation"))
    }

    pub fn poly_string(&self) -> String {
        let mut s = format!("t^{}", self.n);
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            match i {
                0 => s += &format!(" + ({a})"),
                1 => s += &format!(" + ({a})*t"),
                _ => s += &format!(" + ({a})*t^{i}"),
            }
        }
        s
    }

    pub fn check_same(&self, other: &FunctionField) -> Result<()> {
        if self.id == other.id && self.p == other.p && self.coeffs == other.coeffs {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    // ---- elements -------------------------------------------------------

    pub fn zero(&self) -> FFElem {
        FFElem { coords: vec![RatFunc::zero(self.p); self.n] }
    }

    pub fn one(&self) -> FFElem {
        self.from_rat(RatFunc::one(self.p))
    }

    pub fn from_rat(&self, r: RatFunc) -> FFElem {
        let mut e = self.zero();
        e.coords[0] = r;
        e
    }

    pub fn from_poly(&self, a: Poly) -> FFElem {
        self.from_rat(RatFunc::from_poly(a))
    }

    /// The generator `y`.
    pub fn gen(&self) -> FFElem {
        let mut e = self.zero();
        e.coords[1] = RatFunc::one(self.p);
        e
    }

    pub fn element(&self, coords: Vec<RatFunc>) -> Result<FFElem> {
        if coords.len() != self.n {
            return Err(Error::Shape(format!("element needs {} coordinates", self.n)));
        }
        Ok(FFElem { coords })
    }

    /// Clear denominators: `(A, d)` with `a = sum A_i y^i / d`.
    fn cleared(&self, a: &FFElem) -> (Vec<Poly>, Poly) {
        let d = a.coords.iter().fold(Poly::one(self.p), |acc, c| acc.lcm(c.den()));
        let num = a.coords.iter().map(|c| c.num().mul(&d.div(c.den()))).collect();
        (num, d)
    }

    fn from_cleared(&self, num: &[Poly], d: &Poly) -> FFElem {
        FFElem {
            coords: num.iter().map(|c| RatFunc::new(c.clone(), d.clone()).expect("nonzero denominator")).collect(),
        }
    }

    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        FFElem { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        FFElem { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x.sub(y)).collect() }
    }

    pub fn neg(&self, a: &FFElem) -> FFElem {
        FFElem { coords: a.coords.iter().map(|x| x.neg()).collect() }
    }

    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let (an, ad) = self.cleared(a);
        let (bn, bd) = self.cleared(b);
        let prod = self.finite.mul_z(&an, &bn);
        self.from_cleared(&prod, &ad.mul(&bd))
    }

    /// Matrix of multiplication by `A` (cleared numerator) on the basis `y^i`.
    fn mult_matrix_y(&self, num: &[Poly]) -> PolyMatrix {
        let n = self.n;
        let mut m = PolyMatrix::zero(n, n, self.p);
        let mut col = num.to_vec();
        let y = {
            let mut v = vec![Poly::zero(self.p); n];
            v[1] = Poly::one(self.p);
            v
        };
        for j in 0..n {
            m.set_col(j, &col);
            if j + 1 < n {
                col = self.finite.mul_z(&col, &y);
            }
        }
        m
    }

    pub fn inv(&self, a: &FFElem) -> Result<FFElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, d) = self.cleared(a);
        let m = self.mult_matrix_y(&num);
        let (x, det) = m.adjugate()?;
        // a^{-1} = d * M^{-1} e_0
        let col: Vec<Poly> = x.col(0).iter().map(|c| c.mul(&d)).collect();
        Ok(self.from_cleared(&col, &det))
    }

    pub fn div(&self, a: &FFElem, b: &FFElem) -> Result<FFElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Norm to `K(x)`: determinant of multiplication by `a`.
    pub fn norm(&self, a: &FFElem) -> RatFunc {
        let (num, d) = self.cleared(a);
        let det = self.mult_matrix_y(&num).det().expect("square");
        RatFunc::new(det, d.pow(self.n as u64)).expect("nonzero denominator")
    }

    pub fn scale_const(&self, a: &FFElem, c: u32) -> FFElem {
        let k = RatFunc::from_poly(Poly::constant(c, self.p));
        FFElem { coords: a.coords.iter().map(|x| x.mul(&k)).collect() }
    }

    // ---- conversions to order coordinates --------------------------------

    pub fn to_order(&self, side: Side, a: &FFElem) -> OrderElem {
        match side {
            Side::Finite => {
                let (num, d) = self.cleared(a);
                self.finite.from_z(&num, &d)
            }
            Side::Infinite => {
                // y^i = u^{-cf i} z^i, and x = 1/u
                let z: Vec<RatFunc> = a
                    .coords
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let c = c.invert_variable();
                        let s = Poly::monomial(1, self.cf as usize * i, self.p);
                        RatFunc::new(c.num().clone(), c.den().mul(&s)).unwrap()
                    })
                    .collect();
                let d = z.iter().fold(Poly::one(self.p), |acc, c| acc.lcm(c.den()));
                let num: Vec<Poly> = z.iter().map(|c| c.num().mul(&d.div(c.den()))).collect();
                self.infinite.from_z(&num, &d)
            }
        }
    }

    pub fn from_order(&self, side: Side, e: &OrderElem) -> FFElem {
        let o = self.order(side);
        let (z, d) = o.to_z(e);
        match side {
            Side::Finite => self.from_cleared(&z, &d),
            Side::Infinite => {
                let d = RatFunc::from_poly(d).invert_variable();
                let coords = z
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let c = RatFunc::from_poly(c.clone()).invert_variable();
                        // z^i = x^{-cf i} y^i
                        let s = Poly::monomial(1, self.cf as usize * i, self.p);
                        RatFunc::new(c.num().clone(), c.den().mul(&s)).unwrap().div(&d).unwrap()
                    })
                    .collect();
                FFElem { coords }
            }
        }
    }

    pub fn finite_to_infinite(&self, e: &OrderElem) -> OrderElem {
        self.to_order(Side::Infinite, &self.from_order(Side::Finite, e))
    }

    /// A random element with coordinates of degree at most `d`, and random
    /// denominators of degree at most `dd`.
    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R, d: usize, dd: usize) -> FFElem {
        let coords = (0..self.n)
            .map(|_| {
                let num = Poly::random(rng, d, self.p);
                let k = rng.gen_range(0..=dd);
                let mut den = Poly::random_monic(rng, k, self.p);
                if den.is_zero() {
                    den = Poly::one(self.p);
                }
                RatFunc::new(num, den).unwrap()
            })
            .collect();
        FFElem { coords }
    }

    pub(crate) fn places_lock(&self) -> std::sync::MutexGuard<'_, PlaceCache> {
        self.places.lock().unwrap()
    }
}

impl Order {
    /// Multiply `z`-coordinate vectors modulo the defining polynomial.
    pub fn mul_z(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        let n = self.n;
        let p = self.p;
        let mut prod = vec![Poly::zero(p); 2 * n];
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
        for k in (n..2 * n).rev() {
            let lead = std::mem::replace(&mut prod[k], Poly::zero(p));
            if lead.is_zero() {
                continue;
            }
            for (i, gi) in self.g.iter().enumerate() {
                prod[k - n + i].sub_mul(&lead, gi);
            }
        }
        prod.truncate(n);
        prod
    }
}

/// An element `sum coords[i] y^i` of `F`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFElem {
    pub coords: Vec<RatFunc>,
}

impl FFElem {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Whether the element lies in `K`.
    pub fn is_constant(&self) -> bool {
        self.coords[0].is_poly()
            && self.coords[0].num().degree().unwrap_or(0) == 0
            && self.coords[1..].iter().all(|c| c.is_zero())
    }
}

impl std::fmt::Debug for FFElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*y"),
                _ => format!("({c})*y^{i}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
