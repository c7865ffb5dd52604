use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ffjac::algebra::factor::{factor, is_irreducible};
use ffjac::algebra::{Poly, PolyMatrix};

const P: u32 = 32771;

fn poly(c: &[i64], p: u32) -> Poly {
    Poly::from_i64(c, p)
}

#[test]
fn xgcd_examples() {
    let p = 5;
    let (g, s, t) = poly(&[-1, 0, 1], p).xgcd(&poly(&[-1, 1], p)).unwrap();
    assert_eq!((g, s, t), (poly(&[-1, 1], p), Poly::zero(p), Poly::one(p)));
    let a = poly(&[1, 2, 3], p);
    let (g, s, t) = a.xgcd(&Poly::zero(p)).unwrap();
    let inv3 = 2; // 3 * 2 = 1 mod 5
    assert_eq!(g, a.scale(inv3));
    assert_eq!(s, Poly::constant(inv3, p));
    assert!(t.is_zero());
    assert!(Poly::zero(p).xgcd(&Poly::zero(p)).is_err());
}

#[test]
fn xgcd_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let a = Poly::random(&mut rng, 12, P);
        let b = Poly::random(&mut rng, 9, P);
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let (g, s, t) = a.xgcd(&b).unwrap();
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert!(g.is_monic());
        assert!(g.divides(&a) && g.divides(&b));
    }
}

#[test]
fn factor_examples() {
    let mut f = factor(&poly(&[-1, 0, 1], 5)).unwrap();
    f.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    assert_eq!(f, vec![(poly(&[1, 1], 5), 1), (poly(&[4, 1], 5), 1)]);
    assert_eq!(factor(&Poly::x(2)).unwrap(), vec![(Poly::x(2), 1)]);
}

// Is q irreducible, by trying every monic divisor of degree <= deg/2?
fn brute_irreducible(q: &Poly) -> bool {
    let p = q.modulus();
    let d = q.deg() as usize;
    for k in 1..=d / 2 {
        let total = (p as u64).pow(k as u32);
        for idx in 0..total {
            let mut c = Vec::with_capacity(k + 1);
            let mut v = idx;
            for _ in 0..k {
                c.push((v % p as u64) as u32);
                v /= p as u64;
            }
            c.push(1);
            if Poly::from_raw(c, p).divides(q) {
                return false;
            }
        }
    }
    true
}

#[test]
fn random_degree_eight_over_f7() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let f = Poly::random_monic(&mut rng, 8, 7);
        let fs = factor(&f).unwrap();
        let mut prod = Poly::one(7);
        for (q, e) in &fs {
            assert!(q.is_monic());
            assert!(brute_irreducible(q), "{q} is reducible");
            assert!(is_irreducible(q));
            prod = prod.mul(&q.pow(*e as u64));
        }
        assert_eq!(prod, f);
    }
}

#[test]
fn hnf_examples() {
    let id = PolyMatrix::identity(3, P);
    let (h, u) = id.hnf().unwrap();
    assert!(h.is_identity() && u.is_identity());
    let x = Poly::x(P);
    let d = PolyMatrix::diagonal(&[x.clone(), x.clone()]);
    let (h, u) = d.hnf().unwrap();
    assert_eq!(h, d);
    assert!(u.is_identity());
}

#[test]
fn hnf_random_three_by_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 20 {
        let rows: Vec<Vec<Poly>> = (0..3).map(|_| (0..3).map(|_| Poly::random(&mut rng, 3, P)).collect()).collect();
        let m = PolyMatrix::from_rows(rows).unwrap();
        if m.det().unwrap().is_zero() {
            continue;
        }
        let (h, u) = m.hnf().unwrap();
        assert!(h.is_hnf());
        assert_eq!(m.mul(&u).unwrap(), h);
        let du = u.det().unwrap();
        assert!(du.is_constant() && !du.is_zero(), "transform not unimodular");
        done += 1;
    }
}

#[test]
fn column_reduce_examples() {
    let (_, degs) = PolyMatrix::identity(3, P).column_reduce().unwrap();
    assert_eq!(degs, vec![0, 0, 0]);
    let x = Poly::x(P);
    let (_, mut degs) = PolyMatrix::diagonal(&[x.pow(2), x.pow(5)]).column_reduce().unwrap();
    degs.sort();
    assert_eq!(degs, vec![2, 5]);
}

// Rank of a matrix over F_p by Gaussian elimination.
fn rank_mod_p(mut a: Vec<Vec<u32>>, p: u32) -> usize {
    let (rows, cols) = (a.len(), a[0].len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = (1..p).find(|&v| (a[r][c] as u64 * v as u64) % p as u64 == 1).unwrap();
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = (a[i][c] as u64 * inv as u64) % p as u64;
                for j in 0..cols {
                    a[i][j] = ((a[i][j] as u64 + (p as u64 - f) * a[r][j] as u64) % p as u64) as u32;
                }
            }
        }
        r += 1;
    }
    r
}

#[test]
fn column_reduce_random_four_by_four() {
    let p = 101;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let rows: Vec<Vec<Poly>> = (0..4).map(|_| (0..4).map(|_| Poly::random(&mut rng, 4, p)).collect()).collect();
        let m = PolyMatrix::from_rows(rows).unwrap();
        let det = m.det().unwrap();
        if det.is_zero() {
            continue;
        }
        let (r, degs) = m.column_reduce().unwrap();
        assert_eq!(degs.iter().sum::<i64>(), det.deg());
        assert_eq!(rank_mod_p(r.leading_matrix(), p), 4);
    }
}

fn arb_poly(p: u32, max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0..p, 0..=max_deg + 1).prop_map(move |c| Poly::from_raw(c, p))
}

proptest! {
    #[test]
    fn div_rem_identity(a in arb_poly(P, 15), b in arb_poly(P, 8)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.deg() < b.deg());
    }

    #[test]
    fn mul_commutes_and_distributes(a in arb_poly(P, 10), b in arb_poly(P, 10), c in arb_poly(P, 10)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn factor_round_trip(c in prop::collection::vec(0u32..7, 1..10)) {
        let mut c = c;
        c.push(1);
        let f = Poly::from_raw(c, 7);
        let fs = factor(&f).unwrap();
        let prod = fs.iter().fold(Poly::one(7), |acc, (q, e)| acc.mul(&q.pow(*e as u64)));
        prop_assert_eq!(prod, f);
        for (q, _) in &fs {
            prop_assert!(is_irreducible(q));
        }
    }
}
