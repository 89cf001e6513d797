use weilmod::basefield::{Fq, Psi};
use weilmod::coeff::{CoeffRing, CycField, Field, FinField, ReductionMap};
use weilmod::heisenberg::*;
use weilmod::linalg;
use weilmod::operator::{commutant_dim_dense, commutant_dim_monomial, Monomial};

fn fq(p: u64, f: u32) -> Fq {
    Fq::new(p, f).unwrap()
}

fn check_homomorphism<R: CoeffRing>(model: &SchrodingerModel<R>) {
    let f = model.field().clone();
    let all = model.all_elements();
    let reps: Vec<_> = all.iter().map(|h| model.rho(h)).collect();
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            let ab = h_mul(&f, a, b);
            assert_eq!(reps[i].mul(&model.ring, &reps[j]), model.rho(&ab), "{a:?} {b:?}");
        }
    }
}

#[test]
fn homomorphism_exhaustive_q3() {
    let model = cyclotomic_model(fq(3, 1), 1).unwrap();
    check_homomorphism(&model);
    let y = SchrodingerModel::new(Psi::standard(fq(3, 1)), CycField::new(3).unwrap(), 1, Polarization::Y).unwrap();
    check_homomorphism(&y);
}

#[test]
fn homomorphism_modular_and_extension_fields() {
    check_homomorphism(&modular_model(fq(3, 1), 2, 1).unwrap());
    check_homomorphism(&modular_model(fq(5, 1), 3, 1).unwrap());
    check_homomorphism(&cyclotomic_model(fq(3, 2), 1).unwrap());
}

#[test]
fn central_character() {
    let model = cyclotomic_model(fq(5, 1), 1).unwrap();
    let f = model.field().clone();
    for t in 0..5u32 {
        let z = model.rho(&HeisenbergElement::central(&f, 1, t));
        assert_eq!(z, Monomial::scalar::<CycField>(model.psi(t).clone(), 5));
    }
}

#[test]
fn irreducible_and_doubled_commutant() {
    for (p, ell) in [(3u64, 2u64), (5, 2), (5, 3), (7, 2)] {
        let m = modular_model(fq(p, 1), ell, 1).unwrap();
        assert_eq!(m.commutant_dim(), 1);
        let gens: Vec<_> = m.generators().iter().map(|h| m.rho(h)).collect();
        let doubled: Vec<_> = gens.iter().map(|g| Monomial::direct_sum(g, g)).collect();
        assert_eq!(commutant_dim_monomial(&m.ring, &doubled), 4);
    }
    let m = cyclotomic_model(fq(3, 1), 2).unwrap();
    assert_eq!(m.commutant_dim(), 1);
    // over F_9 the generators must run over an F_3-basis of F_9
    assert_eq!(cyclotomic_model(fq(3, 2), 1).unwrap().commutant_dim(), 1);
    assert_eq!(modular_model(fq(3, 2), 2, 2).unwrap().commutant_dim(), 1);
    assert_eq!(cyclotomic_model(fq(3, 2), 1).unwrap().generators().len(), 6);
}

#[test]
fn monomial_solver_matches_dense() {
    let m = cyclotomic_model(fq(3, 1), 2).unwrap();
    let gens: Vec<_> = m.generators().iter().map(|h| m.rho(h)).collect();
    let dense: Vec<_> = gens.iter().map(|g| g.to_dense(&m.ring)).collect();
    assert_eq!(commutant_dim_dense(&m.ring, &dense), commutant_dim_monomial(&m.ring, &gens));
    // a reducible example: only the centre and one translation
    let sub = vec![gens[1].clone(), gens[4].clone()];
    let sub_d: Vec<_> = sub.iter().map(|g| g.to_dense(&m.ring)).collect();
    assert_eq!(commutant_dim_dense(&m.ring, &sub_d), commutant_dim_monomial(&m.ring, &sub));
}

#[test]
fn x_to_y_intertwiner() {
    let f = fq(3, 1);
    let ring = CycField::new(3).unwrap();
    let x = SchrodingerModel::new(Psi::standard(f.clone()), ring.clone(), 1, Polarization::X).unwrap();
    let y = SchrodingerModel::new(Psi::standard(f.clone()), ring.clone(), 1, Polarization::Y).unwrap();
    let i_xy = intertwiner_x_to_y(&x);
    let i_yx = intertwiner_y_to_x(&x);
    for h in x.all_elements() {
        let lhs = x.rho(&h).dense_mul(&ring, &i_xy);
        let rhs = y.rho(&h).mul_dense(&ring, &i_xy);
        assert_eq!(lhs, rhs);
    }
    let round = linalg::mul(&ring, &i_yx, &i_xy);
    assert_eq!(round, linalg::scale(&ring, &ring.from_i64(3), &linalg::identity(&ring, 3)));
}

#[test]
fn tensor_model_is_the_product_model() {
    let f = fq(3, 1);
    let m1 = cyclotomic_model(f.clone(), 1).unwrap();
    let m2 = cyclotomic_model(f.clone(), 2).unwrap();
    for h in m2.all_elements().iter().step_by(7) {
        assert_eq!(tensor_rho(&m1, &m1, h), m2.rho(h));
    }
}

#[test]
fn contragredient_is_the_inverse_character_model() {
    let m = cyclotomic_model(fq(5, 1), 1).unwrap();
    assert_eq!(contragredient_intertwiners(&m).unwrap().len(), 1);
    let mm = modular_model(fq(3, 1), 2, 1).unwrap();
    assert_eq!(contragredient_intertwiners(&mm).unwrap().len(), 1);
}

#[test]
fn reduction_commutes_with_rho() {
    let f = fq(3, 1);
    let c = cyclotomic_model(f.clone(), 1).unwrap();
    let target = FinField::for_roots(7, 3, 1).unwrap();
    let map = ReductionMap::new(c.ring.clone(), target.clone()).unwrap();
    let modl = SchrodingerModel::x_model(Psi::standard(f.clone()), target.clone(), 1).unwrap();
    for h in c.all_elements() {
        assert_eq!(reduce_monomial(&map, &c.rho(&h)).unwrap(), modl.rho(&h));
    }
}

#[test]
fn homomorphism_random_m2() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for (p, f) in [(5u64, 1u32), (7, 1), (3, 2)] {
        let m = cyclotomic_model(fq(p, f), 2).unwrap();
        let q = m.field().q();
        let rand_h = |rng: &mut rand_chacha::ChaCha8Rng| HeisenbergElement {
            w: (0..4).map(|_| rng.gen_range(0..q)).collect(),
            t: rng.gen_range(0..q),
        };
        for _ in 0..1000 {
            let (a, b) = (rand_h(&mut rng), rand_h(&mut rng));
            let ab = h_mul(m.field(), &a, &b);
            assert_eq!(m.rho(&a).mul(&m.ring, &m.rho(&b)), m.rho(&ab));
        }
    }
}

#[test]
fn commutator_and_modular_svn() {
    let f = fq(3, 1);
    let e1 = HeisenbergElement::delta(&f, vec![1, 0]);
    let f1 = HeisenbergElement::delta(&f, vec![0, 1]);
    // ½ = 2 in F_3
    assert_eq!(h_mul(&f, &e1, &f1), HeisenbergElement { w: vec![1, 1], t: 2 });
    let comm = h_mul(&f, &h_mul(&f, &e1, &f1), &h_mul(&f, &h_inv(&f, &e1), &h_inv(&f, &f1)));
    assert_eq!(comm, HeisenbergElement { w: vec![0, 0], t: 1 });
    let m = modular_model(fq(5, 1), 7, 1).unwrap();
    assert_eq!(m.commutant_dim(), 1);
    let t = cyclotomic_model(f.clone(), 1).unwrap();
    let gens: Vec<_> = cyclotomic_model(f, 2).unwrap().generators();
    let tens: Vec<_> = gens.iter().map(|h| tensor_rho(&t, &t, h)).collect();
    assert_eq!(commutant_dim_monomial(&t.ring, &tens), 1);
}
