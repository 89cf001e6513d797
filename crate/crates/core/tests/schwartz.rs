use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weilmod::basefield::{BaseField, Psi, Qp};
use weilmod::coeff::{CoeffRing, CycField, Field};
use weilmod::heisenberg::{h_mul, HeisenbergElement};
use weilmod::linalg::{self, Mat};
use weilmod::metaplectic::*;
use weilmod::schwartz::*;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn model(p: u64, m: usize) -> PadicSchrodinger<CycField> {
    let f = Qp::new(p).unwrap();
    PadicSchrodinger::new(Psi::standard(f), CycField::new(p).unwrap(), m).unwrap()
}

fn random_point(p: u64, rng: &mut ChaCha8Rng) -> BigRational {
    let k = rng.gen_range(-40i64..=40);
    let v = rng.gen_range(-3i64..=2);
    rat(k) * Qp::new(p).unwrap().pow_p(v)
}

type F = PhaseStepFunction<<CycField as Field>::Elem>;

#[test]
fn eval_examples() {
    let s5 = model(5, 1);
    let one = s5.unit_indicator();
    assert_eq!(s5.eval(&one, &[rat(7)]).unwrap(), s5.ring.one());
    assert_eq!(s5.eval(&one, &[frac(1, 5)]).unwrap(), s5.ring.zero());
    let s3 = model(3, 1);
    let mut g = s3.unit_indicator();
    g.terms[0].quad.set(0, 0, rat(1));
    assert_eq!(s3.eval(&g, &[rat(1)]).unwrap(), s3.ring.one());
    // a level-1 value away from Z_p
    g.terms[0].quad.set(0, 0, frac(1, 3));
    assert_eq!(s3.eval(&g, &[rat(1)]).unwrap(), s3.ring.zeta(1, 1).unwrap());
}

#[test]
fn heisenberg_action() {
    let s = model(3, 1);
    let f = s.unit_indicator();
    let central = HeisenbergElement { w: vec![rat(0), rat(0)], t: frac(1, 3) };
    let zf = s.act_heisenberg(&f, &central).unwrap();
    let z = s.ring.zeta(1, 1).unwrap();
    assert!(s.equal(&zf, &s.scale(&z, &f)).unwrap());
    // δ(f₁): translation by an integer keeps 1_{Z_p}
    let tf = s.act_heisenberg(&f, &HeisenbergElement { w: vec![rat(0), rat(1)], t: rat(0) }).unwrap();
    assert!(s.equal(&tf, &f).unwrap());
    // δ(e₁/3): multiplication by ψ(−y/3) on Z_p
    let ef = s.act_heisenberg(&f, &HeisenbergElement { w: vec![frac(1, 3), rat(0)], t: rat(0) }).unwrap();
    for y in 0..3 {
        let expect = s.weil().psi().eval(&s.ring, &frac(-y, 3)).unwrap();
        assert_eq!(s.eval(&ef, &[rat(y)]).unwrap(), expect);
    }
    // homomorphism on random rational elements
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let q = Qp::new(3).unwrap();
    for _ in 0..50 {
        let mut h = || HeisenbergElement { w: vec![random_point(3, &mut rng), random_point(3, &mut rng)], t: random_point(3, &mut rng) };
        let (a, b) = (h(), h());
        let lhs = s.act_heisenberg(&s.act_heisenberg(&f, &b).unwrap(), &a).unwrap();
        let rhs = s.act_heisenberg(&f, &h_mul(&q, &a, &b)).unwrap();
        assert!(s.equal(&lhs, &rhs).unwrap());
    }
}

#[test]
fn parabolic_action() {
    let s = model(5, 1);
    let q = Qp::new(5).unwrap();
    let f = s.unit_indicator();
    let id = linalg::identity(&q, 2);
    assert!(s.equal(&s.act_parabolic(&f, &id).unwrap(), &f).unwrap());
    // torus diag(5, 1/5): 1_{Z_p}(5y) = 1_{5^{-1}Z_p}(y), times Ω_{1,5}
    let t = levi(&q, &Mat::from_rows(vec![vec![rat(5)]])).unwrap();
    let tf = s.act_parabolic(&f, &t).unwrap();
    let om = s.weil().omega_ratio(&rat(1), &rat(5)).unwrap();
    assert!(s.equal(&tf, &s.indicator(om, vec![rat(0)], -1)).unwrap());
    // unipotent b = 1/5: ψ(½ y²/5) on Z_p
    let u = unipotent(&q, &Mat::from_rows(vec![vec![frac(1, 5)]]));
    let uf = s.act_parabolic(&f, &u).unwrap();
    for y in 0..5 {
        let expect = s.weil().psi().eval(&s.ring, &frac(y * y, 10)).unwrap();
        assert_eq!(s.eval(&uf, &[rat(y)]).unwrap(), expect);
    }
    // I_p is multiplicative; σ on P(X) picks up (det a, det a')
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..40 {
        let (p1, p2) = (random_parabolic(&q, 1, &mut rng), random_parabolic(&q, 1, &mut rng));
        let p12 = linalg::mul(&q, &p1, &p2);
        let lhs = s.act_parabolic_raw(&s.act_parabolic_raw(&f, &p2).unwrap(), &p1).unwrap();
        assert!(s.equal(&lhs, &s.act_parabolic_raw(&f, &p12).unwrap()).unwrap());
        let sl = s.act_parabolic(&s.act_parabolic(&f, &p2).unwrap(), &p1).unwrap();
        let c = s.ratio(&sl, &s.act_parabolic(&f, &p12).unwrap()).unwrap();
        let h = q.hilbert(&det_x(&q, &p1), &det_x(&q, &p2)).unwrap();
        assert_eq!(c, s.ring.from_i64(h as i64));
    }
}

#[test]
fn fourier_self_duality_and_square() {
    for p in [3u64, 5] {
        let s = model(p, 1);
        let q = Qp::new(p).unwrap();
        let f = s.unit_indicator();
        let ff = s.act_fourier(&f, &[0]).unwrap();
        assert!(s.equal(&ff, &f).unwrap());
        // σ(w)² f(y) = ε f(−y)
        let reflect = levi(&q, &Mat::from_rows(vec![vec![rat(-1)]])).unwrap();
        let eps = s.weil().epsilon(&Mat::from_rows(vec![vec![rat(-1)]])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..20 {
            let h = HeisenbergElement { w: vec![random_point(p, &mut rng), random_point(p, &mut rng)], t: rat(0) };
            let mut g = s.act_heisenberg(&f, &h).unwrap();
            g.terms[0].quad.set(0, 0, random_point(p, &mut rng));
            let lhs = s.act_fourier(&s.act_fourier(&g, &[0]).unwrap(), &[0]).unwrap();
            let rhs = s.scale(&eps, &s.act_parabolic_raw(&g, &reflect).unwrap());
            assert!(s.equal(&lhs, &rhs).unwrap());
        }
    }
}

#[test]
fn fourier_gaussian_matches_numeric_sum() {
    let s = model(3, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for c in [frac(1, 3), frac(2, 9), frac(-1, 27), frac(5, 81)] {
        let mut g = s.unit_indicator();
        g.terms[0].quad.set(0, 0, c.clone());
        let fg = s.act_fourier(&g, &[0]).unwrap();
        assert_eq!(fg.terms[0].quad.get(0, 0), &(-(c.clone() * rat(4)).recip()));
        for _ in 0..20 {
            let y = random_point(3, &mut rng);
            let expect = s.fourier_numeric(&g, &y, 1 << 20).unwrap();
            assert_eq!(s.eval(&fg, &[y.clone()]).unwrap(), expect, "c = {c}, y = {y}");
        }
    }
}

enum Step {
    Heis(HeisenbergElement<BigRational>),
    Par(Mat<BigRational>),
    Four,
}

fn oracle(s: &PadicSchrodinger<CycField>, prev: &F, step: &Step, y: &BigRational) -> Option<<CycField as Field>::Elem> {
    let r = &s.ring;
    let psi = s.weil().psi();
    match step {
        Step::Heis(h) => {
            let (x, v) = (&h.w[0], &h.w[1]);
            let ph = &h.t - y * x - frac(1, 2) * v * x;
            Some(r.mul(&psi.eval(r, &ph).unwrap(), &s.eval(prev, &[y + v]).unwrap()))
        }
        Step::Par(p) => {
            let (a, b) = (p.get(0, 0), p.get(0, 1));
            let om = s.weil().omega_ratio(&rat(1), a).unwrap();
            let ph = frac(1, 2) * a * b * y * y;
            Some(r.mul(&om, &r.mul(&psi.eval(r, &ph).unwrap(), &s.eval(prev, &[a * y]).unwrap())))
        }
        Step::Four => s.fourier_numeric(prev, y, 1 << 16).ok(),
    }
}

#[test]
fn closure_under_random_words() {
    let s = model(3, 1);
    let q = Qp::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut numeric = 0;
    for _ in 0..1000 {
        let len = rng.gen_range(1..=6);
        let mut f = s.unit_indicator();
        let mut prev = f.clone();
        let mut last = Step::Four;
        for _ in 0..len {
            let step = match rng.gen_range(0..3) {
                0 => Step::Heis(HeisenbergElement { w: vec![random_point(3, &mut rng), random_point(3, &mut rng)], t: random_point(3, &mut rng) }),
                1 => Step::Par(random_parabolic(&q, 1, &mut rng)),
                _ => Step::Four,
            };
            prev = f;
            f = match &step {
                Step::Heis(h) => s.act_heisenberg(&prev, h).unwrap(),
                Step::Par(p) => s.act_parabolic(&prev, p).unwrap(),
                Step::Four => s.act_fourier(&prev, &[0]).unwrap(),
            };
            assert_eq!(f.len(), prev.len());
            last = step;
        }
        let c = s.canon(&f).unwrap();
        assert_eq!(s.canon(&c).unwrap(), c);
        for _ in 0..10 {
            let y = random_point(3, &mut rng);
            let got = s.eval(&f, &[y.clone()]).unwrap();
            assert_eq!(s.eval(&c, &[y.clone()]).unwrap(), got);
            if let Some(expect) = oracle(&s, &prev, &last, &y) {
                assert_eq!(got, expect);
                numeric += 1;
            }
        }
    }
    // the Fourier oracle only skips grids above 3^16 points
    assert!(numeric > 9000, "{numeric}");
}

#[test]
fn canonical_form_merges_refinements() {
    let s = model(3, 1);
    let f = s.unit_indicator();
    let mut g = f.clone();
    g.terms[0].lin[0] = frac(1, 9);
    g.terms[0].quad.set(0, 0, frac(1, 3));
    // f − f cancels after merging
    let sum = s.add(&g, &s.scale(&s.ring.from_i64(-1), &g)).unwrap();
    assert!(s.canon(&sum).unwrap().is_empty());
    let c = s.canon(&s.add(&g, &s.indicator(s.ring.one(), vec![rat(1)], 1)).unwrap()).unwrap();
    // three refined pieces plus the indicator, whose phase differs from its piece
    assert_eq!(c.len(), 4);
    assert_eq!(s.canon(&c).unwrap(), c);
    for y in -10..10 {
        let expect = s.ring.add(&s.eval(&g, &[rat(y)]).unwrap(), &if y.rem_euclid(3) == 1 { s.ring.one() } else { s.ring.zero() });
        assert_eq!(s.eval(&c, &[rat(y)]).unwrap(), expect);
    }
    // linear phases differing by p^{-n}Z_p are the same function
    let mut h = g.clone();
    h.terms[0].lin[0] = frac(1, 9) + rat(7);
    assert!(s.equal(&g, &h).unwrap());
}

#[test]
fn operator_cocycle_matches_formula() {
    for (p, seed) in [(3u64, 21u64), (5, 22)] {
        let s = model(p, 1);
        let q = Qp::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut minus = 0;
        for _ in 0..100 {
            let g1 = random_symplectic(&q, 1, &mut rng);
            let g2 = random_symplectic(&q, 1, &mut rng);
            let op = s.cocycle(&g1, &g2).unwrap();
            assert_eq!(op, cocycle_formula(&q, &g1, &g2).unwrap(), "{g1:?} {g2:?}");
            minus += (op == -1) as usize;
        }
        assert!(minus > 0, "no −1 values for p = {p}");
    }
}

#[test]
fn two_dimensional_diagonal_phases() {
    let s = model(3, 2);
    let q = Qp::new(3).unwrap();
    let f = s.unit_indicator();
    assert!(s.equal(&s.act_fourier(&f, &[0, 1]).unwrap(), &f).unwrap());
    let mut g = f.clone();
    g.terms[0].quad = Mat::from_rows(vec![vec![frac(1, 3), rat(0)], vec![rat(0), rat(1)]]);
    let once = s.act_fourier(&g, &[0]).unwrap();
    assert_eq!(once.terms[0].depth, 0);
    // partial transforms commute and compose to the full one
    let a = s.act_fourier(&once, &[1]).unwrap();
    let b = s.act_fourier(&s.act_fourier(&g, &[1]).unwrap(), &[0]).unwrap();
    assert!(s.equal(&a, &b).unwrap());
    assert!(s.equal(&a, &s.act_fourier(&g, &[0, 1]).unwrap()).unwrap());
    // diagonal torus with different valuations forces refinement
    let t = levi(&q, &linalg::diag(&q, &[rat(3), rat(1)])).unwrap();
    let tf = s.act_parabolic_raw(&f, &t).unwrap();
    assert_eq!(s.canon(&tf).unwrap().len(), 3);
    g.terms[0].quad.set(0, 1, rat(1));
    g.terms[0].quad.set(1, 0, rat(1));
    assert!(matches!(s.act_fourier(&g, &[0]), Err(SchwartzError::Unsupported(_))));
    let twisted = Psi::twisted(q.clone(), rat(3)).unwrap();
    assert!(PadicSchrodinger::new(twisted, CycField::new(3).unwrap(), 1).is_err());
}
