use num_bigint::BigInt;
use proptest::prelude::*;
use weilmod::basefield::{BaseField, Fq, Qp};
use weilmod::coeff::Field;
use weilmod::linalg::{self, Mat};
use weilmod::quadratic::{diagonalize_with, hasse_of, parse_form, PivotOrder, QuadraticForm};

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-2000i64..-1, 1i64..2000]
}

fn q(p: u64, n: i64) -> (Qp, <Qp as Field>::Elem) {
    let f = Qp::new(p).unwrap();
    let x = f.from_rational(&BigInt::from(n), &BigInt::from(1)).unwrap();
    (f, x)
}

proptest! {
    #[test]
    fn hilbert_symbol_laws(p in prop::sample::select(vec![3u64, 5, 7, 13]), a in nonzero(), b in nonzero(), c in nonzero()) {
        let (f, x) = q(p, a);
        let y = f.from_i64(b);
        let z = f.from_i64(c);
        let h = |u: &_, v: &_| f.hilbert(u, v).unwrap();
        prop_assert_eq!(h(&x, &y), h(&y, &x));
        prop_assert_eq!(h(&x, &f.mul(&y, &z)), h(&x, &y) * h(&x, &z));
        prop_assert_eq!(h(&x, &f.neg(&x)), 1);
        prop_assert_eq!(h(&x, &f.mul(&y, &y)), 1);
        let one_minus = f.sub(&f.one(), &x);
        if !f.is_zero(&one_minus) {
            prop_assert_eq!(h(&x, &one_minus), 1);
        }
    }

    #[test]
    fn hasse_is_a_basis_invariant(p in prop::sample::select(vec![3u64, 5, 7]), d in prop::collection::vec(nonzero(), 1..5), m in prop::collection::vec(-6i64..7, 16)) {
        let f = Qp::new(p).unwrap();
        let n = d.len();
        let diag: Vec<_> = d.iter().map(|&a| f.from_i64(a)).collect();
        let form = QuadraticForm::diagonal(f.clone(), &diag).unwrap();
        let phi = Mat::from_rows((0..n).map(|i| (0..n).map(|j| f.from_i64(m[i * 4 + j])).collect()).collect());
        prop_assume!(!f.is_zero(&linalg::det(&f, &phi)));
        let moved = form.pullback(&phi).unwrap();
        prop_assert_eq!(moved.hasse(), form.hasse());
        prop_assert_eq!(moved.det_class(), form.det_class());
        for order in [PivotOrder::First, PivotOrder::Last] {
            let dz = diagonalize_with(&f, &moved.gram, order);
            prop_assert_eq!(hasse_of(&f, &dz.entries).unwrap(), form.hasse());
        }
    }
}

#[test]
fn hilbert_over_q5_by_hand() {
    let (f, five) = q(5, 5);
    let h = |a: i64, b: i64| f.hilbert(&f.from_i64(a), &f.from_i64(b)).unwrap();
    assert_eq!(f.hilbert(&five, &f.from_i64(2)).unwrap(), -1);
    assert_eq!(h(5, 5), 1);
    assert_eq!(h(5, 4), 1);
    assert_eq!(h(2, 3), 1);
    assert_eq!(h(10, 15), 1);
    assert_eq!(h(10, 5), -1);
}

#[test]
fn finite_field_hilbert_is_trivial() {
    for (p, e) in [(3, 1), (3, 2), (5, 1), (7, 1)] {
        let f = Fq::new(p, e).unwrap();
        let els: Vec<_> = f.elements().unwrap().into_iter().filter(|x| !f.is_zero(x)).collect();
        for a in &els {
            for b in &els {
                assert_eq!(f.hilbert(a, b).unwrap(), 1);
            }
        }
    }
}

#[test]
fn degenerate_forms_use_the_radical_quotient() {
    let f = Fq::new(5, 1).unwrap();
    let form = parse_form(&f, "gram:1,1;1,1").unwrap();
    assert_eq!(form.rank(), 1);
    assert_eq!(form.radical().len(), 1);
    assert!(!form.is_nondegenerate());
    let x = &form.radical()[0];
    assert!(f.is_zero(&form.eval(x)));
}

#[test]
fn parse_rejects_bad_forms() {
    let f = Fq::new(3, 1).unwrap();
    assert!(parse_form(&f, "gram:1,2;0,1").is_err());
    assert!(parse_form(&f, "diag:").is_err());
    assert!(parse_form(&f, "lin:1").is_err());
}
