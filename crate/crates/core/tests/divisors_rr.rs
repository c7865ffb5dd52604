use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ffjac::algebra::Poly;
use ffjac::divisor::Divisor;
use ffjac::field::{make_field, Field};
use ffjac::fieldgen::gen_tang;
use ffjac::ideal::Ideal;
use ffjac::order::Side;
use ffjac::place::{find_degree_one_place, infinite_places, places_above, Place, Prefer};
use ffjac::riemann_roch::{dimension, rr_basis, ssrr};

use std::sync::Arc;

fn genus_two() -> Field {
    make_field(7, &[vec![-1, 0, 0, 0, 0, -1], vec![]]).unwrap()
}

fn random_place(f: &Field, rng: &mut ChaCha8Rng, max_deg: usize) -> Arc<Place> {
    loop {
        let d = rng.gen_range(1..=max_deg);
        let q = Poly::random_monic(rng, d, f.p());
        if !ffjac::algebra::factor::is_irreducible(&q) {
            continue;
        }
        let pls = places_above(f, Side::Finite, &q).unwrap();
        return pls[rng.gen_range(0..pls.len())].clone();
    }
}

fn random_divisor(f: &Field, rng: &mut ChaCha8Rng, terms: usize, max_coeff: i64) -> Divisor {
    let mut d = Divisor::zero(f);
    for _ in 0..terms {
        let pl = if rng.gen_bool(0.2) {
            let inf = infinite_places(f).unwrap();
            inf[rng.gen_range(0..inf.len())].clone()
        } else {
            random_place(f, rng, 2)
        };
        let k = rng.gen_range(-max_coeff..=max_coeff);
        d = d.add(&Divisor::from_place(f, &pl, k)).unwrap();
    }
    d
}

#[test]
fn divisor_group_examples() {
    let f = genus_two();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let z = Divisor::zero(&f);
    for _ in 0..100 {
        let d1 = random_divisor(&f, &mut rng, 4, 3);
        let d2 = random_divisor(&f, &mut rng, 4, 3);
        assert_eq!(d1.add(&z).unwrap(), d1);
        assert!(d1.add(&d1.neg()).unwrap().is_zero());
        let independent: i64 = d1.terms().chain(d2.terms()).map(|(p, v)| v * p.degree() as i64).sum();
        assert_eq!(d1.add(&d2).unwrap().degree(), independent);
    }
}

#[test]
fn principal_divisors() {
    let f = genus_two();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = f.from_poly(Poly::constant(3, 7));
    assert!(Divisor::principal(&f, &c).unwrap().is_zero());
    for _ in 0..100 {
        let a = f.random_element(&mut rng, 3, 2);
        let b = f.random_element(&mut rng, 3, 2);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let da = Divisor::principal(&f, &a).unwrap();
        let db = Divisor::principal(&f, &b).unwrap();
        assert_eq!(da.degree(), 0);
        assert_eq!(Divisor::principal(&f, &f.mul(&a, &b)).unwrap(), da.add(&db).unwrap());
    }
}

#[test]
fn height_examples() {
    let f = make_field(7, &[vec![-1, 0, 0, 0, 0, -1], vec![]]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p1 = loop {
        let pl = random_place(&f, &mut rng, 1);
        if pl.degree() == 1 {
            break pl;
        }
    };
    let q2 = loop {
        let pl = random_place(&f, &mut rng, 2);
        if pl.degree() == 2 {
            break pl;
        }
    };
    let d = Divisor::from_place(&f, &p1, 2).sub(&Divisor::from_place(&f, &q2, 3)).unwrap();
    assert_eq!(d.height(), 8);
    assert_eq!(d.neg().height(), 8);
    let e = Divisor::from_place(&f, &p1, 2).add(&Divisor::from_place(&f, &q2, 1)).unwrap();
    assert_eq!(e.height(), e.degree());
}

#[test]
fn decompose_and_ideal_pairs() {
    let f = genus_two();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let oi = f.order(Side::Infinite);
    let (a, b) = Divisor::zero(&f).to_ideal_pair().unwrap();
    assert!(a.is_unit() && b.is_unit());
    let pl = random_place(&f, &mut rng, 1);
    let (a, b) = Divisor::from_place(&f, &pl, 1).to_ideal_pair().unwrap();
    assert_eq!(&a, pl.ideal());
    assert_eq!(b, Ideal::unit(oi));
    let eff = Divisor::from_place(&f, &pl, 2);
    let (fin, inf) = eff.decompose();
    assert_eq!(fin, eff);
    assert!(inf.is_zero());
    // pole divisor of x
    let x = f.from_poly(Poly::x(7));
    let poles = Divisor::principal(&f, &x).unwrap().decompose().1.neg();
    let (fin, inf) = poles.decompose();
    assert!(fin.is_zero());
    assert_eq!(inf, poles);
    for _ in 0..100 {
        let d = random_divisor(&f, &mut rng, 5, 3);
        let (fin, inf) = d.decompose();
        assert_eq!(fin.add(&inf).unwrap(), d);
        let (i, j) = d.to_ideal_pair().unwrap();
        assert_eq!(Divisor::from_ideal_pair(&f, &i, &j).unwrap(), d);
    }
}

#[test]
fn base_place_examples() {
    let tang = gen_tang(32771, 3, 2, 4).unwrap();
    let a = find_degree_one_place(&tang, Prefer::Infinite, 100).unwrap();
    assert!(a.is_infinite() && a.degree() == 1);
    let f = genus_two();
    let inf = infinite_places(&f).unwrap();
    assert_eq!(inf.len(), 1);
    assert_eq!(inf[0].ramification(), 2);
    assert_eq!(find_degree_one_place(&f, Prefer::Infinite, 100).unwrap(), inf[0]);
    let as_field = make_field(2, &[vec![0, 0, 0, -1], vec![1]]).unwrap();
    assert_eq!(find_degree_one_place(&as_field, Prefer::Any, 100).unwrap().degree(), 1);
}

#[test]
fn riemann_roch_examples() {
    let f = genus_two();
    let g = f.genus() as i64;
    let z = rr_basis(&Divisor::zero(&f)).unwrap();
    assert_eq!(z.dim(), 1);
    assert!(z.basis[0].is_constant());
    let a = find_degree_one_place(&f, Prefer::Infinite, 100).unwrap();
    assert_eq!(dimension(&Divisor::from_place(&f, &a, -1)).unwrap(), 0);
    for m in 2 * g - 1..2 * g + 6 {
        assert_eq!(dimension(&Divisor::from_place(&f, &a, m)).unwrap() as i64, m + 1 - g);
    }
    let c = ssrr(&Divisor::zero(&f), None).unwrap().unwrap();
    assert!(c.is_constant() && !c.is_zero());
    assert!(ssrr(&Divisor::from_place(&f, &a, -1), None).unwrap().is_none());
}

#[test]
fn basis_elements_lie_in_the_space() {
    let f = genus_two();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let d = random_divisor(&f, &mut rng, 4, 3);
        for b in rr_basis(&d).unwrap().basis {
            assert!(d.admits(&b).unwrap());
        }
    }
}

#[test]
fn ssrr_agrees_with_basis() {
    let fields = [genus_two(), gen_tang(32771, 3, 2, 5).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    for f in &fields {
        let g = f.genus() as i64;
        while checked < 250 * (1 + (f.genus() > 2) as usize) {
            let d = random_divisor(f, &mut rng, 4, 2);
            if d.height() > 3 * g + 1 {
                continue;
            }
            let dim = dimension(&d).unwrap();
            let s = ssrr(&d, None).unwrap();
            assert_eq!(s.is_none(), dim == 0);
            if let Some(a) = s {
                assert!(d.admits(&a).unwrap());
            }
            checked += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn riemann_inequality(seed in any::<u64>()) {
        let f = genus_two();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_divisor(&f, &mut rng, 4, 3);
        let l = dimension(&d).unwrap() as i64;
        let g = f.genus() as i64;
        prop_assert!(l >= d.degree() + 1 - g);
        if d.degree() < 0 {
            prop_assert_eq!(l, 0);
        }
        if d.degree() >= 2 * g - 1 {
            prop_assert_eq!(l, d.degree() + 1 - g);
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let f = genus_two();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_divisor(&f, &mut rng, 4, 3);
        prop_assert_eq!(Divisor::from_json(&f, &d.to_json()).unwrap(), d);
    }
}
