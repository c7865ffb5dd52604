use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ffjac::algebra::factor::factor;
use ffjac::algebra::Poly;
use ffjac::error::Error;
use ffjac::field::{compute_cf, irreducible::is_irreducible, make_field};
use ffjac::fieldgen::{gen_adhoc, tang_coeffs};
use ffjac::ideal::Ideal;
use ffjac::order::{Order, Side};
use ffjac::place::{infinite_places, places_above, prime_decomposition};

fn polys(p: u32, c: &[&[i64]]) -> Vec<Poly> {
    c.iter().map(|v| Poly::from_i64(v, p)).collect()
}

#[test]
fn make_field_examples() {
    let f = make_field(5, &[vec![-1, 0, 0, 0, 0, -1], vec![]]).unwrap();
    assert_eq!((f.n(), f.cf()), (2, 3));
    // t^2 + t + x^3 over F_2: no root, since deg x^3 is odd and a root
    // would be a polynomial r with r^2 + r = x^3.
    assert!(make_field(2, &[vec![0, 0, 0, 1], vec![1]]).is_ok());
    assert!(matches!(make_field(5, &[vec![0, 0, -1], vec![]]), Err(Error::Reducible)));
}

#[test]
fn cf_examples() {
    let p = 7;
    assert_eq!(compute_cf(&polys(p, &[&[0, 0, 0, -1], &[]])), 2);
    assert_eq!(compute_cf(&polys(p, &[&[0, 0, 0, 0, 1], &[0, 1], &[]])), 2);
    assert_eq!(compute_cf(&polys(p, &[&[3], &[], &[]])), 0);
}

#[test]
fn element_arithmetic() {
    let f = make_field(7, &[vec![-1, 0, 0, 0, 0, -1], vec![]]).unwrap();
    let y = f.gen();
    let x5p1 = f.from_poly(Poly::from_i64(&[1, 0, 0, 0, 0, 1], 7));
    assert_eq!(f.mul(&y, &y), x5p1);
    assert_eq!(f.inv(&f.one()).unwrap(), f.one());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let a = f.random_element(&mut rng, 3, 2);
        let b = f.random_element(&mut rng, 3, 2);
        assert_eq!(f.norm(&f.mul(&a, &b)), f.norm(&a).mul(&f.norm(&b)));
    }
}

#[test]
fn irreducibility_examples() {
    let p = 7;
    assert!(is_irreducible(&polys(p, &[&[0, -1], &[]])).unwrap());
    assert!(!is_irreducible(&polys(p, &[&[0, 0, -1], &[]])).unwrap());
}

// t^n + sum a_i(c) t^i over F_p for a constant c.
fn specialize(coeffs: &[Poly], c: u32) -> Poly {
    let p = coeffs[0].modulus();
    let mut v: Vec<u32> = coeffs.iter().map(|a| a.eval(c)).collect();
    v.push(1);
    Poly::from_raw(v, p)
}

#[test]
fn tang_polynomials_are_irreducible() {
    let p = 32771;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let coeffs = tang_coeffs(&mut rng, p, 3, 2);
        assert!(is_irreducible(&coeffs).unwrap());
        // an irreducible specialization of the same degree certifies it
        let witness = (0..40u32).any(|c| {
            let s = specialize(&coeffs, c);
            let fs = factor(&s).unwrap();
            fs.len() == 1 && fs[0].1 == 1
        });
        assert!(witness, "no irreducible specialization found");
    }
}

#[test]
fn genus_examples() {
    assert_eq!(make_field(7, &[vec![-1, 0, 0, 0, 0, -1], vec![]]).unwrap().genus(), 2);
    assert_eq!(make_field(5, &[vec![0, -1, 0, -1], vec![]]).unwrap().genus(), 1);
}

#[test]
fn maximal_order_examples() {
    let f = make_field(7, &[vec![-1, 0, 0, 0, 0, -1], vec![]]).unwrap();
    assert!(f.order(Side::Finite).index().is_one());
    // squarefree discriminant: every prime factor appears once
    let d = f.order(Side::Finite).disc().clone();
    assert!(factor(&d).unwrap().iter().all(|(_, e)| *e == 1));

    // cusp y^2 = x^3: y/x is integral with (y/x)^2 = x
    let cusp = make_field(7, &[vec![0, 0, 0, -1], vec![]]).unwrap();
    let o = cusp.order(Side::Finite);
    assert!(!o.index().is_one());
    let x = cusp.from_poly(Poly::x(7));
    let t = cusp.div(&cusp.gen(), &x).unwrap();
    assert_eq!(cusp.mul(&t, &t), x);
    let te = cusp.to_order(Side::Finite, &t);
    assert!(te.den.is_one(), "y/x is not in the order");
}

#[test]
fn index_discriminant_identity() {
    let mut fields = vec![
        make_field(7, &[vec![0, 0, 0, -1], vec![]]).unwrap(),
        make_field(5, &[vec![0, -1, 0, -1], vec![]]).unwrap(),
    ];
    for s in 0..3 {
        fields.push(gen_adhoc(101, 3, 3, None, s).unwrap());
    }
    for f in fields {
        let o = f.order(Side::Finite);
        let eq = Order::equation_order(Side::Finite, f.coeffs().to_vec()).unwrap();
        let lhs = o.disc().mul(&o.index().pow(2)).monic();
        assert_eq!(lhs, eq.disc().monic());
    }
}

#[test]
fn ideal_identities() {
    let f = make_field(7, &[vec![-1, 0, 0, 0, 0, -1], vec![]]).unwrap();
    let o = f.order(Side::Finite);
    let one = Ideal::unit(o);
    assert_eq!(one.inv(o).unwrap(), one);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut ideals = Vec::new();
    for _ in 0..100 {
        let a = f.random_element(&mut rng, 3, 1);
        if a.is_zero() {
            continue;
        }
        let b = f.random_element(&mut rng, 2, 0);
        if b.is_zero() {
            continue;
        }
        let ia = Ideal::principal(o, &f.to_order(Side::Finite, &a)).unwrap();
        let ib = Ideal::principal(o, &f.to_order(Side::Finite, &b)).unwrap();
        // a two-generator, usually non-principal ideal
        let i = ia.mul(o, &ib).unwrap();
        let q = Poly::random_monic(&mut rng, 1, 7);
        let pls = places_above(&f, Side::Finite, &q).unwrap();
        let j = i.mul(o, pls[0].ideal()).unwrap();
        ideals.push((a, ia, j));
    }
    for (k, (a, ia, j)) in ideals.iter().enumerate() {
        assert_eq!(j.mul(o, &one).unwrap(), *j);
        let ji = j.inv(o).unwrap();
        assert!(j.mul(o, &ji).unwrap().is_unit());
        assert_eq!(ji.inv(o).unwrap(), *j);
        let ainv = f.inv(a).unwrap();
        assert_eq!(ia.inv(o).unwrap(), Ideal::principal(o, &f.to_order(Side::Finite, &ainv)).unwrap());
        let (_, _, other) = &ideals[(k + 1) % ideals.len()];
        assert_eq!(j.mul(o, other).unwrap(), other.mul(o, j).unwrap());
    }
    let oi = f.order(Side::Infinite);
    assert!(matches!(one.mul(oi, &Ideal::unit(oi)), Err(Error::SideMismatch)));
}

#[test]
fn prime_decomposition_examples() {
    let f = make_field(5, &[vec![0, -1, 0, -1], vec![]]).unwrap();
    let dec = prime_decomposition(&f, Side::Finite, &Poly::x(5)).unwrap();
    assert_eq!(dec.len(), 1);
    let (pl, e) = &dec[0];
    assert_eq!((*e, pl.residue_degree()), (2, 1));
    let o = f.order(Side::Finite);
    let x = f.to_order(Side::Finite, &f.from_poly(Poly::x(5)));
    assert_eq!(pl.valuation_elem(o, &x).unwrap(), 2);

    let g = make_field(101, &[vec![3, 5, 7, 11], vec![1, 0, 2], vec![0, 4]]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let d = rand::Rng::gen_range(&mut rng, 1..=2);
        let q = Poly::random_monic(&mut rng, d, 101);
        if !ffjac::algebra::factor::is_irreducible(&q) {
            continue;
        }
        let dec = prime_decomposition(&g, Side::Finite, &q).unwrap();
        let s: u32 = dec.iter().map(|(pl, e)| e * pl.residue_degree()).sum();
        assert_eq!(s as usize, g.n());
        let degs: u32 = dec.iter().map(|(pl, e)| e * pl.degree() as u32).sum();
        assert_eq!(degs as usize, g.n() * d);
    }
    assert!(prime_decomposition(&g, Side::Finite, &Poly::from_i64(&[-1, 0, 1], 101)).is_err());
}

#[test]
fn tang_infinite_places() {
    let f = ffjac::fieldgen::gen_tang(32771, 3, 2, 3).unwrap();
    let inf = infinite_places(&f).unwrap();
    assert_eq!(inf.len(), 2);
    assert!(inf.iter().any(|pl| pl.degree() == 1));
}

#[test]
fn valuations() {
    let f = make_field(7, &[vec![-1, 0, 0, 0, 0, -1], vec![]]).unwrap();
    let o = f.order(Side::Finite);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let q = Poly::random_monic(&mut rng, 1, 7);
        for pl in places_above(&f, Side::Finite, &q).unwrap() {
            assert_eq!(pl.valuation_ideal(o, &Ideal::unit(o)).unwrap(), 0);
            for k in -2..=2 {
                assert_eq!(pl.valuation_ideal(o, &pl.ideal_pow(o, k).unwrap()).unwrap(), k);
            }
        }
    }
    // sum v_P(I) deg P = deg N(I)
    for _ in 0..100 {
        let a = f.random_element(&mut rng, 3, 0);
        if a.is_zero() {
            continue;
        }
        let i = Ideal::principal(o, &f.to_order(Side::Finite, &a)).unwrap();
        let (num, den) = i.norm_parts();
        let mut total = 0i64;
        for (q, _) in factor(&num.mul(&den)).unwrap() {
            for pl in places_above(&f, Side::Finite, &q).unwrap() {
                total += pl.valuation_ideal(o, &i).unwrap() * pl.degree() as i64;
            }
        }
        assert_eq!(total, num.deg() - den.deg());
        let norm = f.norm(&a);
        assert_eq!(num.mul(norm.den()).monic(), norm.num().mul(&den).monic());
    }
}
