use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weilmod::basefield::{BaseField, Fq, Psi, Qp};
use weilmod::coeff::{CycField, Field, FinField};
use weilmod::linalg::{self, Mat};
use weilmod::metaplectic::*;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn qmat(rows: &[&[i64]]) -> Mat<BigRational> {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
}

fn f3() -> Fq {
    Fq::new(3, 1).unwrap()
}

#[test]
fn bruhat_examples() {
    let q5 = Qp::new(5).unwrap();
    let g = qmat(&[&[1, 0], &[5, 1]]);
    let d = bruhat_decompose(&q5, &g).unwrap();
    assert_eq!(d.j, 1);
    let x = x_invariant(&q5, &g).unwrap();
    assert_eq!(q5.square_class(&x).unwrap(), q5.square_class(&rat(5)).unwrap());
    for m in 1..=3 {
        let w = w_j(&q5, m, m);
        let d = bruhat_decompose(&q5, &w).unwrap();
        assert_eq!(d.j, m);
        assert!(q5.is_square(&x_det(&q5, &d)));
    }
    let p = random_parabolic(&q5, 2, &mut ChaCha8Rng::seed_from_u64(1));
    let d = bruhat_decompose(&q5, &p).unwrap();
    assert_eq!(d.j, 0);
}

#[test]
fn bruhat_random_and_redecomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for p in [3u64, 5, 7] {
        let f = Qp::new(p).unwrap();
        for m in 1..=3 {
            for _ in 0..30 {
                let g = random_symplectic(&f, m, &mut rng);
                let d = bruhat_decompose(&f, &g).unwrap();
                let x = x_det(&f, &d);
                let a = random_invertible(&f, m, &mut rng);
                let r = levi(&f, &a).unwrap();
                if let Some(d2) = redecompose(&f, &d, &r) {
                    check_bruhat(&f, &g, &d2).unwrap();
                    assert_eq!(f.square_class(&x_det(&f, &d2)).unwrap(), f.square_class(&x).unwrap());
                }
            }
        }
    }
}

#[test]
fn sigma_intertwines_and_is_multiplicative_on_parabolic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, fdeg, m) in [(3u64, 1u32, 1usize), (5, 1, 1), (3, 1, 2), (3, 2, 1)] {
        let f = Fq::new(p, fdeg).unwrap();
        let w = FiniteWeil::new(Psi::standard(f.clone()), CycField::new(p).unwrap(), m).unwrap();
        for _ in 0..10 {
            let g = random_symplectic(&f, m, &mut rng);
            assert!(w.intertwines(&g, &w.sigma(&g).unwrap()), "{g:?}");
            let a = random_parabolic(&f, m, &mut rng);
            let b = random_parabolic(&f, m, &mut rng);
            let sa = w.sigma_parabolic(&a).unwrap();
            let sb = w.sigma_parabolic(&b).unwrap();
            assert_eq!(sa.mul(w.ring(), &sb), w.sigma_parabolic(&linalg::mul(&f, &a, &b)).unwrap());
        }
        assert_eq!(w.sigma(&linalg::identity(&f, 2 * m)).unwrap(), linalg::identity(w.ring(), w.dim()));
    }
}

#[test]
fn cocycle_trivial_sl2_f3() {
    let f = f3();
    let w = FiniteWeil::new(Psi::standard(f.clone()), CycField::new(3).unwrap(), 1).unwrap();
    let all = all_sl2(&f);
    assert_eq!(all.len(), 24);
    let pairs: Vec<_> = all.iter().flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone()))).collect();
    let bad = count_failures(&pairs, |(a, b)| w.cocycle(a, b).map(|c| w.ring().is_one(&c)).unwrap_or(false));
    assert_eq!(bad, 0);
    let w4 = FiniteWeil::new(Psi::standard(f.clone()), FinField::for_roots(2, 3, 1).unwrap(), 1).unwrap();
    let bad = count_failures(&pairs, |(a, b)| w4.cocycle(a, b).map(|c| w4.ring().is_one(&c)).unwrap_or(false));
    assert_eq!(bad, 0);
}

#[test]
fn leray_and_formula_padic() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for p in [3u64, 5, 7] {
        let f = Qp::new(p).unwrap();
        for m in 1..=2 {
            for _ in 0..40 {
                let g1 = random_symplectic(&f, m, &mut rng);
                let g2 = random_symplectic(&f, m, &mut rng);
                let g3 = random_symplectic(&f, m, &mut rng);
                let c = |a: &Mat<BigRational>, b: &Mat<BigRational>| cocycle_formula(&f, a, b).unwrap();
                let g12 = linalg::mul(&f, &g1, &g2);
                let g23 = linalg::mul(&f, &g2, &g3);
                assert_eq!(c(&g1, &g2) * c(&g12, &g3), c(&g1, &g23) * c(&g2, &g3));
            }
        }
    }
}

fn cyc_weil(p: u64, fdeg: u32, m: usize) -> FiniteWeil<CycField> {
    FiniteWeil::new(Psi::standard(Fq::new(p, fdeg).unwrap()), CycField::new(p).unwrap(), m).unwrap()
}

#[test]
fn sigma_w_is_reflected_fourier() {
    for (p, fdeg, m) in [(3u64, 1u32, 1usize), (3, 1, 2), (5, 1, 1), (3, 2, 1)] {
        let w = cyc_weil(p, fdeg, m);
        let f = w.field().clone();
        let four = w.weil.fourier_matrix(&linalg::identity(&f, m)).unwrap();
        let refl: Vec<Vec<_>> = four.columns().iter().map(|c| w.weil.reflect(m, c)).collect();
        let expected = Mat::from_cols(w.dim(), &refl);
        assert_eq!(w.sigma_w(m), &expected);
        assert_eq!(w.sigma(&w_j(&f, m, m)).unwrap(), expected);
    }
}

#[test]
fn m_bracket_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [3u64, 5] {
        let w = cyc_weil(p, 1, 1);
        let f = w.field().clone();
        let r = w.ring().clone();
        let id = linalg::identity(&f, 2);
        let m_id = w.m_bracket(&id).unwrap();
        assert!(scalar_ratio(&r, &m_id, &linalg::identity(&r, w.dim())).is_some());
        for _ in 0..50 {
            let g = random_symplectic(&f, 1, &mut rng);
            let mg = w.m_bracket(&g).unwrap();
            assert!(!linalg::is_zero(&r, &mg));
            assert!(w.intertwines(&g, &mg));
            assert!(scalar_ratio(&r, &mg, &w.sigma(&g).unwrap()).is_some());
            // a commuting partner: a power of g times ±1
            let k = rand::Rng::gen_range(&mut rng, 0..5);
            let mut h = linalg::identity(&f, 2);
            for _ in 0..k {
                h = linalg::mul(&f, &h, &g);
            }
            if rand::Rng::gen_bool(&mut rng, 0.5) {
                h = linalg::neg(&f, &h);
            }
            let mh = w.m_bracket(&h).unwrap();
            assert_eq!(linalg::mul(&r, &mg, &mh), linalg::mul(&r, &mh, &mg));
        }
    }
}

#[test]
fn contragredient_traces() {
    for p in [3u64, 5, 7] {
        let f = Fq::new(p, 1).unwrap();
        let ring = CycField::new(p).unwrap();
        let w = FiniteWeil::new(Psi::standard(f.clone()), ring.clone(), 1).unwrap();
        let winv = FiniteWeil::new(Psi::standard(f.clone()).inverse(), ring.clone(), 1).unwrap();
        for g in all_sl2(&f) {
            let dual = linalg::trace(&ring, &w.dual_sigma(&g).unwrap());
            let other = linalg::trace(&ring, &winv.sigma(&g).unwrap());
            assert_eq!(dual, other, "p={p} g={g:?}");
        }
    }
}

#[test]
fn tensor_compatibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let w1 = cyc_weil(3, 1, 1);
    let w2 = cyc_weil(3, 1, 2);
    let f = w1.field().clone();
    let r = w1.ring().clone();
    for _ in 0..20 {
        let a = random_symplectic(&f, 1, &mut rng);
        let b = random_symplectic(&f, 1, &mut rng);
        let g = linalg::mul(&f, &embed(&f, 2, &[0], &a), &embed(&f, 2, &[1], &b));
        let big = w2.sigma(&g).unwrap();
        let prod = linalg::kron(&r, &w1.sigma(&b).unwrap(), &w1.sigma(&a).unwrap());
        assert!(scalar_ratio(&r, &big, &prod).is_some());
    }
}

#[test]
fn cocycle_trivial_sp4_f3_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let w = cyc_weil(3, 1, 2);
    let f = w.field().clone();
    for _ in 0..200 {
        let a = random_symplectic(&f, 2, &mut rng);
        let b = random_symplectic(&f, 2, &mut rng);
        assert!(w.ring().is_one(&w.cocycle(&a, &b).unwrap()));
    }
}

#[test]
fn padic_lemmas() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in [3u64, 5, 7] {
        let f = Qp::new(p).unwrap();
        for m in 1..=2 {
            for _ in 0..15 {
                let g = random_symplectic(&f, m, &mut rng);
                let q = random_parabolic(&f, m, &mut rng);
                let expect = cocycle_parabolic(&f, &q, &g).unwrap();
                assert_eq!(cocycle_formula(&f, &q, &g).unwrap(), expect);
                assert_eq!(cocycle_formula(&f, &g, &q).unwrap(), expect);
                assert_eq!(cocycle_formula(&f, &sp_inverse(&f, &q), &g).unwrap(), expect);
            }
        }
        // w_S pairs
        for (s, s2) in [(vec![0], vec![0]), (vec![0, 1], vec![1]), (vec![0, 1], vec![0, 1]), (vec![0], vec![1])] {
            let (a, b) = (w_set(&f, 2, &s), w_set(&f, 2, &s2));
            assert_eq!(cocycle_formula(&f, &a, &b).unwrap(), cocycle_w_pair(&f, &s, &s2).unwrap());
        }
        // commuting blocks
        for _ in 0..15 {
            let a = embed(&f, 2, &[0], &random_symplectic(&f, 1, &mut rng));
            let b = embed(&f, 2, &[1], &random_symplectic(&f, 1, &mut rng));
            let expect = f.hilbert(&x_invariant(&f, &a).unwrap(), &x_invariant(&f, &b).unwrap()).unwrap();
            assert_eq!(cocycle_formula(&f, &a, &b).unwrap(), expect);
            assert_eq!(cocycle_formula(&f, &b, &a).unwrap(), expect);
        }
        // ĉ(w_S u, w_S)
        for _ in 0..15 {
            let k = rand::Rng::gen_range(&mut rng, 1..=2);
            let b = loop {
                let b = random_symmetric(&f, k, &mut rng);
                if !f.is_zero(&linalg::det(&f, &b)) {
                    break b;
                }
            };
            let mut full = linalg::zeros(&f, 2, 2);
            for i in 0..k {
                for j in 0..k {
                    full.set(i, j, b.get(i, j).clone());
                }
            }
            let ws = w_set(&f, 2, &(0..k).collect::<Vec<_>>());
            let wu = linalg::mul(&f, &ws, &unipotent(&f, &full));
            assert_eq!(cocycle_formula(&f, &wu, &ws).unwrap(), cocycle_wsu_ws(&f, &b).unwrap());
        }
    }
}

#[test]
fn padic_parabolic_relation_and_rao() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in [3u64, 5, 7] {
        let f = Qp::new(p).unwrap();
        for _ in 0..20 {
            let g1 = random_symplectic(&f, 1, &mut rng);
            let g2 = random_symplectic(&f, 1, &mut rng);
            let q = random_parabolic(&f, 1, &mut rng);
            let q2 = random_parabolic(&f, 1, &mut rng);
            let xi = |g: &Mat<BigRational>| x_invariant(&f, g).unwrap();
            let h = |a: &BigRational, b: &BigRational| f.hilbert(a, b).unwrap();
            let cf = |a: &Mat<BigRational>, b: &Mat<BigRational>| cocycle_formula(&f, a, b).unwrap();
            let mul = |a: &Mat<BigRational>, b: &Mat<BigRational>| linalg::mul(&f, a, b);
            let base = cf(&g1, &g2);
            let xq = xi(&q);
            // ĉ(g1 q^{-1}, q g2) = ĉ(g1,g2)·(x(q),x(g1))(x(q),x(g2))(x(q),x(q))
            let lhs = cf(&mul(&g1, &sp_inverse(&f, &q)), &mul(&q, &g2));
            assert_eq!(lhs, base * h(&xq, &xi(&g1)) * h(&xq, &xi(&g2)) * h(&xq, &xq));
            // ĉ(q g1, g2 q2) = ĉ(g1,g2)·ĉ(q, g1g2)·ĉ(q g1 g2, q2) / (ĉ(q,g1)·ĉ(g2,q2))
            let g12 = mul(&g1, &g2);
            let lhs = cf(&mul(&q, &g1), &mul(&g2, &q2));
            let x2 = xi(&q2);
            let rhs = base * h(&xq, &xi(&g12)) * h(&x2, &xi(&mul(&q, &g12))) * h(&xq, &xi(&g1)) * h(&x2, &xi(&g2));
            assert_eq!(lhs, rhs);
            let g3 = random_symplectic(&f, 1, &mut rng);
            let c = |a: &Mat<BigRational>, b: &Mat<BigRational>| cocycle_formula_rao(&f, a, b).unwrap();
            let g12 = linalg::mul(&f, &g1, &g2);
            let g23 = linalg::mul(&f, &g2, &g3);
            assert_eq!(c(&g1, &g2) * c(&g12, &g3), c(&g1, &g23) * c(&g2, &g3));
        }
    }
}
