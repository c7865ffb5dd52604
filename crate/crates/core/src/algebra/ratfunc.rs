//! Elements of the rational function field `F_p(x)`.

use std::fmt;

use super::poly::Poly;
use crate::error::{Error, Result};

/// `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        let p = den.modulus();
        if num.is_zero() {
            return RatFunc { num, den: Poly::one(p) };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num.div(&g), den.div(&g)) };
        if !d.is_monic() {
            let inv = super::fp::inv(d.lc(), p);
            n = n.scale(inv);
            d = d.scale(inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(num: Poly) -> Self {
        let p = num.modulus();
        RatFunc { num, den: Poly::one(p) }
    }

    pub fn zero(p: u32) -> Self {
        Self::from_poly(Poly::zero(p))
    }

    pub fn one(p: u32) -> Self {
        Self::from_poly(Poly::one(p))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn modulus(&self) -> u32 {
        self.den.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Degree `deg num - deg den` (negated valuation at infinity); `None` for 0.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.num.deg() - self.den.deg())
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        Self::reduce(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.modulus());
        }
        // cross-cancel before multiplying to keep degrees small
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n = self.num.div(&g1).mul(&o.num.div(&g2));
        let d = self.den.div(&g2).mul(&o.den.div(&g1));
        let mut r = RatFunc { num: n, den: d };
        if !r.den.is_monic() {
            r = Self::reduce(r.num, r.den);
        }
        r
    }

    pub fn mul_poly(&self, a: &Poly) -> RatFunc {
        self.mul(&RatFunc::from_poly(a.clone()))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    /// Substitute `x -> 1/x`.
    pub fn invert_variable(&self) -> RatFunc {
        if self.is_zero() {
            return self.clone();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let n = self.num.reverse(dn);
        let d = self.den.reverse(dd);
        // num(1/x)/den(1/x) = x^(dd - dn) * rev(num) / rev(den)
        if dd >= dn {
            Self::reduce(n.shift(dd - dn), d)
        } else {
            Self::reduce(n, d.shift(dn - dd))
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_normal_form() {
        let p = 7;
        let a = RatFunc::new(Poly::from_i64(&[-1, 0, 1], p), Poly::from_i64(&[2, 2], p)).unwrap();
        // (x^2-1)/(2x+2) = (x-1)/2
        assert!(a.is_poly());
        assert_eq!(a.num(), &Poly::from_i64(&[-1, 1], p).scale(super::super::fp::inv(2, p)));
        let b = RatFunc::new(Poly::one(p), Poly::x(p)).unwrap();
        let c = a.mul(&b).add(&b);
        assert_eq!(c.mul(&RatFunc::from_poly(Poly::x(p))), a.add(&RatFunc::one(p)));
        assert_eq!(b.degree(), Some(-1));
        assert!(RatFunc::new(Poly::one(p), Poly::zero(p)).is_err());
        assert!(RatFunc::zero(p).inv().is_err());
    }

    #[test]
    fn variable_inversion() {
        let p = 5;
        let a = RatFunc::new(Poly::from_i64(&[1, 1], p), Poly::from_i64(&[0, 0, 1], p)).unwrap();
        // (1/x + 1)/(1/x^2) = x + x^2
        assert_eq!(a.invert_variable(), RatFunc::from_poly(Poly::from_i64(&[0, 1, 1], p)));
        assert_eq!(a.invert_variable().invert_variable(), a);
    }
}
