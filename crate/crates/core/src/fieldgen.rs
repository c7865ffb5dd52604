//! Random test fields: Tang's construction and an ad-hoc random search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Poly;
use crate::error::{Error, Result};
use crate::field::{Field, FieldMeta, FunctionField};
use crate::place;

pub const RETRY_BUDGET: usize = 2000;

fn poly_of_degree<R: Rng + ?Sized>(rng: &mut R, d: usize, p: u32) -> Poly {
    let lc = rng.gen_range(1..p);
    Poly::random_monic(rng, d, p).add(&Poly::monomial(lc + p - 1, d, p))
}

fn poly_below<R: Rng + ?Sized>(rng: &mut R, d: usize, p: u32) -> Poly {
    if d == 0 {
        Poly::zero(p)
    } else {
        Poly::random(rng, d - 1, p)
    }
}

/// `floor((cf n - 2)(n - 1) / 2)`
pub fn eq3_bound(n: usize, cf: u32) -> u32 {
    let a = (cf as i64 * n as i64 - 2) * (n as i64 - 1);
    (a.max(0) / 2) as u32
}

fn degree_one_infinite(field: &FunctionField) -> Result<usize> {
    Ok(place::infinite_places(field)?.iter().filter(|pl| pl.degree() == 1).count())
}

/// `deg a_{n-1} = cf`, `deg a_i < (n - i) cf`, `deg a_0 = n cf - 1`.
pub fn tang_coeffs<R: Rng + ?Sized>(rng: &mut R, p: u32, n: usize, cf: u32) -> Vec<Poly> {
    let cf = cf as usize;
    (0..n)
        .map(|i| {
            if i == 0 {
                poly_of_degree(rng, n * cf - 1, p)
            } else if i == n - 1 {
                poly_of_degree(rng, cf, p)
            } else {
                poly_below(rng, (n - i) * cf, p)
            }
        })
        .collect()
}

pub fn gen_tang(p: u32, n: usize, cf: u32, seed: u64) -> Result<Field> {
    if n < 2 {
        return Err(Error::DegreeTooSmall);
    }
    if cf < 1 {
        return Err(Error::Invalid("cf must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let coeffs = tang_coeffs(&mut rng, p, n, cf);
        let f = match FunctionField::new(p, coeffs) {
            Ok(f) => f,
            Err(Error::Reducible) => continue,
            Err(e) => return Err(e),
        };
        let t = place::infinite_places(&f)?.len();
        if t != 2 || degree_one_infinite(&f)? != 2 {
            return Err(Error::Invalid(format!("Tang field with seed {seed} lacks two degree-one infinite places")));
        }
        let g = f.genus();
        f.set_meta(FieldMeta {
            genus: Some(g),
            n: Some(n),
            cf: Some(f.cf()),
            t: Some(t),
            seed: Some(seed),
            method: Some("tang".into()),
            eq3_equality: Some(g == eq3_bound(n, f.cf())),
        });
        return Ok(f);
    }
    Err(Error::RetryBudget { seed, what: "irreducible Tang polynomial".into() })
}

/// Random monic `f` with `C_f <= cf_max`, irreducible, with a degree-one
/// infinite place.
pub fn adhoc_candidate<R: Rng + ?Sized>(rng: &mut R, p: u32, n: usize, cf_max: u32) -> Result<Option<Field>> {
    let cf = rng.gen_range(1..=cf_max.max(1)) as usize;
    let coeffs: Vec<Poly> = (0..n)
        .map(|i| {
            let top = (n - i) * cf;
            if i > 0 && rng.gen_bool(0.3) {
                Poly::zero(p)
            } else {
                let d = rng.gen_range(0..=top);
                Poly::random(rng, d, p)
            }
        })
        .collect();
    if coeffs[0].is_zero() {
        return Ok(None);
    }
    let f = match FunctionField::new(p, coeffs) {
        Ok(f) => f,
        Err(Error::Reducible) | Err(Error::IrreducibilityUndecided(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if degree_one_infinite(&f)? == 0 {
        return Ok(None);
    }
    Ok(Some(f))
}

/// Ad-hoc generation; with `genus` set, candidates of another genus are
/// rejected.
pub fn gen_adhoc(p: u32, n: usize, cf_max: u32, genus: Option<u32>, seed: u64) -> Result<Field> {
    if n < 2 {
        return Err(Error::DegreeTooSmall);
    }
    if let Some(g) = genus {
        if eq3_bound(n, cf_max) < g {
            return Err(Error::Invalid(format!("genus {g} unreachable with n = {n}, cf <= {cf_max}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let Some(f) = adhoc_candidate(&mut rng, p, n, cf_max)? else { continue };
        if let Some(g) = genus {
            if f.genus_bound() < g || f.genus() != g {
                continue;
            }
        }
        let g = f.genus();
        f.set_meta(FieldMeta {
            genus: Some(g),
            n: Some(n),
            cf: Some(f.cf()),
            t: Some(place::infinite_places(&f)?.len()),
            seed: Some(seed),
            method: Some("adhoc".into()),
            eq3_equality: Some(g == f.genus_bound()),
        });
        return Ok(f);
    }
    Err(Error::RetryBudget { seed, what: format!("ad-hoc field with n = {n}, genus {genus:?}") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tang_small() {
        let f = gen_tang(32771, 3, 2, 7).unwrap();
        assert_eq!(f.coeffs()[2].deg(), 2);
        assert_eq!(f.coeffs()[0].deg(), 5);
        assert!(f.coeffs()[1].deg() < 4);
        assert_eq!(f.genus(), 4);
        let m = f.meta().unwrap();
        assert_eq!(m.eq3_equality, Some(true));
        assert_eq!(m.t, Some(2));
        // deterministic
        assert_eq!(gen_tang(32771, 3, 2, 7).unwrap().coeffs(), f.coeffs());
    }

    #[test]
    fn adhoc_has_degree_one_infinite_place() {
        let f = gen_adhoc(101, 3, 2, None, 1).unwrap();
        assert!(degree_one_infinite(&f).unwrap() >= 1);
        assert!(f.cf() <= 2);
    }
}
