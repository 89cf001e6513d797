use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weilmod::coeff::*;

fn cyc(f: &CycField, level: u32, c: &[i64]) -> Cyc {
    f.from_exponents(level, c.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(1))
}

// Naive oracle: polynomial product reduced by long division modulo Φ_{p^k}.
fn naive_mul_mod_phi(p: u64, k: u32, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut prod = vec![0i64; a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    let step = p.pow(k - 1) as usize;
    let deg = (p as usize - 1) * step;
    // Φ = Σ_{i<p} x^{i·step}, monic of degree `deg`
    for top in (deg..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for i in 0..p as usize {
            prod[top - deg + i * step] -= c;
        }
    }
    prod.truncate(deg);
    prod
}

#[test]
fn small_identities() {
    let f3 = CycField::new(3).unwrap();
    let z = f3.zeta(1, 1).unwrap();
    let z2 = f3.zeta(1, 2).unwrap();
    assert_eq!(f3.add(&z, &z2), f3.from_i64(-1));
    let a = cyc(&f3, 1, &[1, 2]);
    assert_eq!(f3.mul(&a, &a), f3.from_i64(-3));
    let f5 = CycField::new(5).unwrap();
    assert_eq!(f5.inv(&f5.zeta(1, 1).unwrap()).unwrap(), f5.zeta(1, 4).unwrap());
    assert_eq!(f5.pow(&f5.zeta(1, 1).unwrap(), 5), f5.one());
}

#[test]
fn products_match_long_division() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for &(p, k) in &[(3u64, 1u32), (3, 2), (5, 1), (7, 1), (3, 3)] {
        let f = CycField::new(p).unwrap();
        let d = phi(p, k);
        for _ in 0..50 {
            let a: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
            let b: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
            let got = f.mul(&cyc(&f, k, &a), &cyc(&f, k, &b));
            let want = cyc(&f, k, &naive_mul_mod_phi(p, k, &a, &b));
            assert_eq!(got, want);
        }
    }
}

#[test]
fn inverse_and_fraction_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(p, k) in &[(3u64, 2u32), (5, 1), (7, 1)] {
        let f = CycField::new(p).unwrap();
        let d = phi(p, k);
        for _ in 0..30 {
            let a: Vec<i64> = (0..d).map(|_| rng.gen_range(-4..=4)).collect();
            let b: Vec<i64> = (0..d).map(|_| rng.gen_range(-4..=4)).collect();
            let (a, b) = (cyc(&f, k, &a), cyc(&f, k, &b));
            if f.is_zero(&b) {
                continue;
            }
            let q = f.div(&a, &b).unwrap();
            assert_eq!(f.mul(&q, &b), a);
            assert_eq!(f.mul(&f.inv(&b).unwrap(), &b), f.one());
        }
    }
}

#[test]
fn embedding_agrees_numerically() {
    let f = CycField::new(5).unwrap();
    let a = cyc(&f, 1, &[1, -2, 3, 0]);
    let b = cyc(&f, 1, &[0, 1, 1, -1]);
    let (ar, ai) = f.approx(&a);
    let (br, bi) = f.approx(&b);
    let (pr, pi) = f.approx(&f.mul(&a, &b));
    assert!((pr - (ar * br - ai * bi)).abs() < 1e-9);
    assert!((pi - (ar * bi + ai * br)).abs() < 1e-9);
}

#[test]
fn levels_normalize() {
    let f = CycField::new(3).unwrap();
    // ζ_9^3 = ζ_3
    assert_eq!(f.zeta(2, 3).unwrap(), f.zeta(1, 1).unwrap());
    assert_eq!(f.zeta(2, 3).unwrap().level(), 1);
    let s = f.add(&f.zeta(2, 1).unwrap(), &f.neg(&f.zeta(2, 1).unwrap()));
    assert!(f.is_zero(&s));
}

#[test]
fn finite_roots_of_unity() {
    let f7 = FinField::new(7, 1, 3, 1).unwrap();
    assert_eq!(f7.zeta(1, 1).unwrap(), 2);
    assert!(matches!(FinField::new(5, 1, 3, 1), Err(CoeffError::RootUnavailable { .. })));
    assert!(FinField::new(5, 2, 3, 1).is_ok());
    assert!(matches!(FinField::for_roots(7, 7, 1), Err(CoeffError::RootUnavailable { .. })));
    for &(ell, p, k) in &[(2u64, 3u64, 1u32), (2, 5, 1), (7, 5, 1), (2, 7, 1), (7, 3, 2), (5, 3, 1)] {
        let f = FinField::for_roots(ell, p, k).unwrap();
        let n = p.pow(k);
        let z = f.zeta(k, 1).unwrap();
        assert_eq!(f.pow(&z, n), 1);
        assert_ne!(f.pow(&z, n / p), 1);
        // exhaustive field axioms on the small ones
        if f.size() <= 16 {
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.add(&a, &b), f.add(&b, &a));
                    assert_eq!(f.sub(&f.add(&a, &b), &b), a);
                    for c in [1u32, 2, f.size() - 1] {
                        let lhs = f.mul(&a, &f.add(&b, &c));
                        let rhs = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                        assert_eq!(lhs, rhs);
                    }
                }
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
            }
        }
    }
    let r = RingDesc::Fin(f7.clone());
    assert_eq!(root_of_unity(&r, 3).unwrap(), CoeffScalar::Fin(f7, 2));
    let c3 = RingDesc::Cyclo(CycField::new(3).unwrap());
    assert!(root_of_unity(&c3, 5).is_err());
}

#[test]
fn reduction_examples() {
    let src = CycField::new(3).unwrap();
    let map = ReductionMap::new(src.clone(), FinField::new(7, 1, 3, 1).unwrap()).unwrap();
    let a = cyc(&src, 1, &[1, 2]);
    assert_eq!(map.reduce(&a).unwrap(), 5);
    assert_eq!(map.reduce(&src.zero()).unwrap(), 0);
    assert_eq!(map.reduce(&src.mul(&a, &a)).unwrap(), 4);
    let third = src.rational(BigInt::from(1), BigInt::from(7));
    assert_eq!(map.reduce(&third), Err(CoeffError::DenominatorNotUnit(7)));
    let half = src.rational(BigInt::from(1), BigInt::from(2));
    assert_eq!(map.reduce(&half).unwrap(), 4);
}

#[test]
fn reduction_is_a_ring_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for &(ell, p, k) in &[(7u64, 3u64, 2u32), (2, 5, 1), (7, 5, 1), (2, 3, 1)] {
        let src = CycField::new(p).unwrap();
        let map = ReductionMap::new(src.clone(), FinField::for_roots(ell, p, k).unwrap()).unwrap();
        let t = map.target().clone();
        let d = phi(p, k);
        let n = if ell == 7 && p == 3 { 10_000 } else { 2_500 };
        for _ in 0..n {
            let a: Vec<i64> = (0..d).map(|_| rng.gen_range(-9..=9)).collect();
            let b: Vec<i64> = (0..d).map(|_| rng.gen_range(-9..=9)).collect();
            let (a, b) = (cyc(&src, k, &a), cyc(&src, k, &b));
            let (ra, rb) = (map.reduce(&a).unwrap(), map.reduce(&b).unwrap());
            assert_eq!(map.reduce(&src.add(&a, &b)).unwrap(), t.add(&ra, &rb));
            assert_eq!(map.reduce(&src.mul(&a, &b)).unwrap(), t.mul(&ra, &rb));
        }
        assert_eq!(map.reduce(&src.one()).unwrap(), 1);
        // the image of ζ is a root of Φ_{p^k}
        let z = map.zeta_image();
        let step = p.pow(k - 1);
        let s = (0..p).fold(0u32, |acc, i| t.add(&acc, &t.pow(&z, i * step)));
        assert_eq!(s, 0);
    }
}

#[test]
fn ring_arith_checks_rings() {
    let f3 = CycField::new(3).unwrap();
    let f5 = CycField::new(5).unwrap();
    let a = CoeffScalar::Cyc(f3.clone(), f3.zeta(1, 1).unwrap());
    let b = CoeffScalar::Cyc(f5.clone(), f5.one());
    assert!(matches!(ring_arith(&a, &b, ArithOp::Add), Err(CoeffError::RingMismatch(..))));
    let z = CoeffScalar::Cyc(f3.clone(), f3.zero());
    assert_eq!(ring_arith(&z, &z, ArithOp::Inv), Err(CoeffError::NotInvertible));
    let inv = ring_arith(&a, &a, ArithOp::Inv).unwrap();
    assert!(ring_arith(&inv, &a, ArithOp::Mul).unwrap().is_one());
    let j = a.to_json();
    assert_eq!(j["ring"], "Z[zeta_3]");
    assert_eq!(j["coeffs"], serde_json::json!([0, 1]));
}
