use weilmod::basefield::{Fq, Psi};
use weilmod::coeff::{CycField, Field, FinField};
use weilmod::linalg::{self, Mat};
use weilmod::metaplectic::FiniteWeil;
use weilmod::quadratic::QuadraticForm;
use weilmod::theta::*;

fn fq(p: u64) -> Fq {
    Fq::new(p, 1).unwrap()
}

fn line(f: &Fq) -> QuadraticForm<Fq> {
    QuadraticForm::diagonal(f.clone(), &[1]).unwrap()
}

fn cyc_weil(f: &Fq, m: usize) -> FiniteWeil<CycField> {
    FiniteWeil::new(Psi::standard(f.clone()), CycField::new(f.p()).unwrap(), m).unwrap()
}

fn mod_weil(f: &Fq, ell: u64, m: usize) -> FiniteWeil<FinField> {
    FiniteWeil::new(Psi::standard(f.clone()), FinField::for_roots(ell, f.p(), 1).unwrap(), m).unwrap()
}

#[test]
fn dual_pair_enumeration() {
    let f = fq(3);
    let pair = build_dual_pair(&line(&f), 1).unwrap();
    assert_eq!((pair.h1.len(), pair.h2.len()), (2, 24));
    assert_eq!(pair.group().unwrap().order(), 48);
    let hyp = QuadraticForm::new(f.clone(), Mat::from_rows(vec![vec![0, 1], vec![1, 0]])).unwrap();
    let pair2 = build_dual_pair(&hyp, 1).unwrap();
    assert_eq!((pair2.h1.len(), pair2.h2.len()), (4, 24));
    assert_eq!(pair2.h1_images[0].rows, 4);
    let degenerate = QuadraticForm::diagonal(f.clone(), &[1, 0]).unwrap();
    assert!(matches!(build_dual_pair(&degenerate, 1), Err(ThetaError::Degenerate)));
    assert!(matches!(build_dual_pair(&line(&f), 2), Err(ThetaError::TooLarge(_))));
}

#[test]
fn restricted_weil_is_a_representation() {
    let f = fq(3);
    let pair = build_dual_pair(&line(&f), 1).unwrap();
    let weil = cyc_weil(&f, 1);
    let omega = RestrictedWeil::new(&pair, &weil).unwrap();
    let g = pair.group().unwrap();
    let joint = omega.joint(&pair);
    assert!(joint.is_homomorphism(&g));
    let r = weil.ring();
    assert_eq!(joint.mats[g.identity], linalg::identity(r, 3));
    // −1 ∈ O₁ acts by φ ↦ φ(−·), and σ(−Id) is a scalar multiple of it
    let minus = pair.h1.iter().position(|h| h.data == vec![2]).unwrap();
    let parity = Mat::from_fn(3, 3, |i, j| if (i + j) % 3 == 0 { r.one() } else { r.zero() });
    assert_eq!(omega.h1.mats[minus], parity);
    let sigma = weil.sigma(&pair.h1_images[minus]).unwrap();
    let c = weilmod::metaplectic::scalar_ratio(r, &sigma, &parity).unwrap();
    assert_eq!(c, weil.omega_1(&2).unwrap());
}

#[test]
fn theta_lifts_for_o1_sp2_f3() {
    let f = fq(3);
    let pair = build_dual_pair(&line(&f), 1).unwrap();
    let omega = RestrictedWeil::new(&pair, &cyc_weil(&f, 1)).unwrap();
    let table = lift_table(&pair, &omega).unwrap();
    let dims: Vec<(&str, usize)> = table.iter().map(|r| (r.label.as_str(), r.dim_theta)).collect();
    assert_eq!(dims, vec![("trivial", 2), ("sign", 1)]);
    assert!(table.iter().all(|r| r.irreducible && r.bookkeeping));
    let omega = RestrictedWeil::new(&pair, &mod_weil(&f, 7, 1)).unwrap();
    let table = lift_table(&pair, &omega).unwrap();
    assert_eq!(table.iter().map(|r| r.dim_theta).collect::<Vec<_>>(), vec![2, 1]);
    assert!(table.iter().all(|r| r.irreducible && r.bookkeeping));
}

#[test]
fn hyperbolic_plane_bookkeeping() {
    let f = fq(3);
    let hyp = QuadraticForm::new(f.clone(), Mat::from_rows(vec![vec![0, 1], vec![1, 0]])).unwrap();
    let pair = build_dual_pair(&hyp, 1).unwrap();
    let omega = RestrictedWeil::new(&pair, &cyc_weil(&f, 2)).unwrap();
    assert!(omega.joint(&pair).is_homomorphism(&pair.group().unwrap()));
    let table = lift_table(&pair, &omega).unwrap();
    // O₂⁺(F₃) is abelian of order 4, so its four sign characters are all of Irr
    assert_eq!(table.len(), 4);
    assert!(table.iter().all(|r| r.bookkeeping));
    assert_eq!(table.iter().map(|r| r.dim_pi * r.dim_theta).sum::<usize>(), 9);
}

#[test]
fn central_idempotents() {
    let f = fq(3);
    let pair = build_dual_pair(&line(&f), 1).unwrap();
    let r = CycField::new(3).unwrap();
    let g = pair.group().unwrap();
    // trivial representation of G: (1/|G|)Σ g
    let triv = FiniteRep { ring: r.clone(), dim: 1, mats: vec![Mat::from_rows(vec![vec![r.one()]]); g.order()] };
    let e = central_idempotent(&triv, &g).unwrap();
    let c = r.div(&r.one(), &r.from_i64(48)).unwrap();
    assert!(e.coeffs.iter().all(|x| *x == c));
    assert!(e.is_idempotent(&r, &g) && e.is_central(&r, &g));
    // O₁: orthogonal, complete, and acting as 1 or 0 on each character
    let h1 = &pair.h1_group;
    let chars = sign_characters(&r, h1);
    let es: Vec<_> = chars.iter().map(|c| central_idempotent(c, h1).unwrap()).collect();
    assert!(es[0].mul(&r, h1, &es[1]).is_zero(&r));
    assert_eq!(es[0].add(&r, &es[1]), GroupAlgebraElement::one(&r, h1));
    for (i, e) in es.iter().enumerate() {
        assert!(e.is_idempotent(&r, h1) && e.is_central(&r, h1));
        for (j, chi) in chars.iter().enumerate() {
            let expect = if i == j { r.one() } else { r.zero() };
            assert_eq!(chi.act(e).data[0], expect);
        }
    }
    // idempotents of the joint group for the two constituents
    let weil = cyc_weil(&f, 1);
    let omega = RestrictedWeil::new(&pair, &weil).unwrap();
    let joint = omega.joint(&pair);
    let mut total = linalg::zeros(&r, 3, 3);
    for pi in &chars {
        let lift = theta_lift(&omega, pi).unwrap();
        let n2 = pair.h2.len();
        let mats = (0..g.order()).map(|x| linalg::kron(&r, &pi.mats[x / n2], &lift.rep.mats[x % n2])).collect();
        let big = FiniteRep { ring: r.clone(), dim: lift.rep.dim, mats };
        assert!(big.is_irreducible(&g));
        let e = central_idempotent(&big, &g).unwrap();
        assert!(e.is_idempotent(&r, &g) && e.is_central(&r, &g));
        assert_eq!(big.act(&e), linalg::identity(&r, big.dim));
        total = linalg::add(&r, &total, &joint.act(&e));
    }
    assert_eq!(total, linalg::identity(&r, 3));
}

#[test]
fn banality_gate() {
    let f = fq(3);
    let pair = build_dual_pair(&line(&f), 1).unwrap();
    let f4 = FinField::for_roots(2, 3, 1).unwrap();
    let chars = sign_characters(&f4, &pair.h1_group);
    assert!(matches!(central_idempotent(&chars[0], &pair.h1_group), Err(ThetaError::NonBanal { ell: 2, order: 2 })));
    let err = congruence_check(&pair, &cyc_weil(&f, 1), &mod_weil(&f, 2, 1)).unwrap_err();
    assert_eq!(err, ThetaError::NonBanal { ell: 2, order: 48 });
}

#[test]
fn congruence_mod_7() {
    let f = fq(3);
    let pair = build_dual_pair(&line(&f), 1).unwrap();
    let report = congruence_check(&pair, &cyc_weil(&f, 1), &mod_weil(&f, 7, 1)).unwrap();
    assert_eq!(report.group_order, 48);
    assert!(report.weil_reduces);
    assert_eq!(report.rows.len(), 2);
    for row in &report.rows {
        assert_eq!(row.dim_char0, row.dim_mod_ell);
        assert!(row.idempotent_h1 && row.idempotent_joint && row.projector && row.brauer, "{row:?}");
        assert!(row.irreducible_char0 && row.irreducible_mod_ell);
    }
    assert!(report.all_pass());
}

#[test]
fn weil_representation_splits_by_parity() {
    for p in [3u64, 5, 7] {
        let f = fq(p);
        let weil = cyc_weil(&f, 1);
        let r = weil.ring();
        let d = WeilDecomposition::new(&weil).unwrap();
        assert_eq!(d.group.order() as u64, p * (p * p - 1));
        let ip = |a: &[_], b: &[_]| inner_product(r, &d.group, a, b).unwrap();
        assert_eq!(ip(&d.chi, &d.chi), r.from_i64(2));
        assert_eq!(ip(&d.chi_even, &d.chi_even), r.one());
        assert_eq!(ip(&d.chi_odd, &d.chi_odd), r.one());
        assert_eq!(ip(&d.chi_even, &d.chi_odd), r.zero());
        let e = d.identity_index();
        assert_eq!(d.chi_even[e], r.from_i64((p as i64 + 1) / 2));
        assert_eq!(d.chi_odd[e], r.from_i64((p as i64 - 1) / 2));
    }
}

#[test]
fn conjugacy_classes_of_sl2_f3() {
    let f = fq(3);
    let pair = build_dual_pair(&line(&f), 1).unwrap();
    let classes = pair.h2_group.conjugacy_classes();
    assert_eq!(classes.len(), 7);
    assert_eq!(classes.iter().map(|c| c.len()).sum::<usize>(), 24);
}
