//! Divisors as formal sums over places, with the ideal-pair view.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::factor;
use crate::error::{Error, Result};
use crate::field::{FFElem, Field};
use crate::ideal::Ideal;
use crate::order::Side;
use crate::place::{self, Place};

#[derive(Clone)]
pub struct Divisor {
    field: Field,
    terms: BTreeMap<Arc<Place>, i64>,
    degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorTerm {
    pub place_key: String,
    pub coefficient: i64,
}

impl PartialEq for Divisor {
    fn eq(&self, o: &Self) -> bool {
        self.field.id() == o.field.id() && self.terms == o.terms
    }
}

impl Eq for Divisor {}

impl std::fmt::Debug for Divisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(pl, v)| format!("{v}*{pl:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Divisor {
    pub fn zero(field: &Field) -> Divisor {
        Divisor { field: field.clone(), terms: BTreeMap::new(), degree: 0 }
    }

    pub fn from_place(field: &Field, pl: &Arc<Place>, k: i64) -> Divisor {
        let mut d = Divisor::zero(field);
        d.add_term(pl, k);
        d
    }

    pub fn from_terms<'a>(field: &Field, terms: impl IntoIterator<Item = (&'a Arc<Place>, i64)>) -> Divisor {
        let mut d = Divisor::zero(field);
        for (pl, k) in terms {
            d.add_term(pl, k);
        }
        d
    }

    fn add_term(&mut self, pl: &Arc<Place>, k: i64) {
        if k == 0 {
            return;
        }
        let v = self.terms.entry(pl.clone()).or_insert(0);
        *v += k;
        if *v == 0 {
            self.terms.remove(pl);
        }
        self.degree += k * pl.degree() as i64;
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Arc<Place>, i64)> {
        self.terms.iter().map(|(p, &v)| (p, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn valuation(&self, pl: &Place) -> i64 {
        self.terms.iter().find(|(p, _)| p.as_ref() == pl).map_or(0, |(_, &v)| v)
    }

    pub fn height(&self) -> i64 {
        self.terms.iter().map(|(p, v)| v.abs() * p.degree() as i64).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&v| v > 0)
    }

    pub fn add(&self, o: &Divisor) -> Result<Divisor> {
        self.field.check_same(&o.field)?;
        let mut d = self.clone();
        for (pl, &k) in &o.terms {
            d.add_term(pl, k);
        }
        Ok(d)
    }

    pub fn neg(&self) -> Divisor {
        self.scale(-1)
    }

    pub fn sub(&self, o: &Divisor) -> Result<Divisor> {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i64) -> Divisor {
        if k == 0 {
            return Divisor::zero(&self.field);
        }
        Divisor {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(p, &v)| (p.clone(), v * k)).collect(),
            degree: self.degree * k,
        }
    }

    fn restrict(&self, side: Side) -> Divisor {
        Divisor::from_terms(&self.field, self.terms().filter(|(p, _)| p.side() == side))
    }

    /// `(finite part, infinite part)`
    pub fn decompose(&self) -> (Divisor, Divisor) {
        (self.restrict(Side::Finite), self.restrict(Side::Infinite))
    }

    /// Ideals with exponents equal to the valuations of `self`.
    pub fn to_ideal_pair(&self) -> Result<(Ideal, Ideal)> {
        let mut out = [Ideal::unit(self.field.order(Side::Finite)), Ideal::unit(self.field.order(Side::Infinite))];
        for (pl, v) in self.terms() {
            let o = self.field.order(pl.side());
            let slot = &mut out[pl.side() as usize];
            *slot = slot.mul(o, &pl.ideal_pow(o, v)?)?;
        }
        let [fin, inf] = out;
        Ok((fin, inf))
    }

    pub fn from_ideal_pair(field: &Field, fin: &Ideal, inf: &Ideal) -> Result<Divisor> {
        if fin.side() != Side::Finite || inf.side() != Side::Infinite {
            return Err(Error::SideMismatch);
        }
        let mut d = Divisor::zero(field);
        let mut primes = Vec::new();
        for a in [fin.det_numerator(), fin.den().clone()] {
            if !a.is_constant() {
                primes.extend(factor::prime_factors(&a)?);
            }
        }
        primes.sort_by(|a, b| a.canonical_cmp(b));
        primes.dedup();
        let of = field.order(Side::Finite);
        for q in &primes {
            for pl in place::places_above(field, Side::Finite, q)? {
                let v = pl.valuation_ideal(of, fin)?;
                d.add_term(&pl, v);
            }
        }
        if !inf.is_unit() {
            let oi = field.order(Side::Infinite);
            for pl in place::infinite_places(field)? {
                let v = pl.valuation_ideal(oi, inf)?;
                d.add_term(&pl, v);
            }
        }
        Ok(d)
    }

    /// `div(a)`
    pub fn principal(field: &Field, a: &FFElem) -> Result<Divisor> {
        if a.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let mut ideals = Vec::with_capacity(2);
        for side in [Side::Finite, Side::Infinite] {
            let o = field.order(side);
            ideals.push(Ideal::principal(o, &field.to_order(side, a))?);
        }
        Divisor::from_ideal_pair(field, &ideals[0], &ideals[1])
    }

    /// Does `self + div(a) >= 0` hold?
    pub fn admits(&self, a: &FFElem) -> Result<bool> {
        Ok(self.add(&Divisor::principal(&self.field, a)?)?.is_effective())
    }

    pub fn to_terms(&self) -> Vec<DivisorTerm> {
        self.terms.iter().map(|(p, &v)| DivisorTerm { place_key: p.key().to_string(), coefficient: v }).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_terms()).expect("terms serialize")
    }

    pub fn from_term_list(field: &Field, terms: &[DivisorTerm]) -> Result<Divisor> {
        let mut d = Divisor::zero(field);
        for t in terms {
            let pl = place::place_from_key(field, &t.place_key)?;
            d.add_term(&pl, t.coefficient);
        }
        Ok(d)
    }

    pub fn from_json(field: &Field, s: &str) -> Result<Divisor> {
        let terms: Vec<DivisorTerm> = serde_json::from_str(s)?;
        Divisor::from_term_list(field, &terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;
    use crate::field::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn principal_divisors() {
        let f = make_field(7, &[vec![1, 0, 0, 0, 0, 1], vec![]]).unwrap();
        assert!(Divisor::principal(&f, &f.from_poly(Poly::constant(3, 7))).unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let a = f.random_element(&mut rng, 3, 2);
            let b = f.random_element(&mut rng, 3, 2);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let da = Divisor::principal(&f, &a).unwrap();
            let db = Divisor::principal(&f, &b).unwrap();
            assert_eq!(da.degree(), 0);
            assert_eq!(Divisor::principal(&f, &f.mul(&a, &b)).unwrap(), da.add(&db).unwrap());
            let (fin, inf) = da.to_ideal_pair().unwrap();
            assert_eq!(Divisor::from_ideal_pair(&f, &fin, &inf).unwrap(), da);
        }
    }

    #[test]
    fn height_and_json() {
        let f = make_field(7, &[vec![1, 0, 0, 0, 0, 1], vec![]]).unwrap();
        let p1 = place::places_above(&f, Side::Finite, &Poly::from_i64(&[1, 1], 7)).unwrap()[0].clone();
        let q2 = place::places_above(&f, Side::Finite, &Poly::from_i64(&[1, 0, 1], 7)).unwrap();
        let q = q2.iter().find(|p| p.degree() == 2).unwrap().clone();
        let d = Divisor::from_terms(&f, [(&p1, 2), (&q, -3)]);
        assert_eq!(d.height(), 8);
        assert_eq!(d.neg().height(), 8);
        let s = d.to_json();
        assert_eq!(Divisor::from_json(&f, &s).unwrap(), d);
        let (a, b) = d.decompose();
        assert_eq!(a.add(&b).unwrap(), d);
    }
}
