//! The closed-form cocycle through a Leray-type normal form of the triple
//! of Lagrangians (X, g1^{-1}X, g2X).
//!
//! Coordinates are reordered into blocks S, C, D1, D2, R0 so that
//!
//!   g1 = p1 · w_{T1} · u · p^{-1},   g2 = p · w_{T2} · p2,
//!
//! with T1 = S ∪ C ∪ D1, T2 = S ∪ C ∪ D2 and u = [[I, b], [0, I]] for a
//! symmetric non-degenerate b supported on S × S.

use crate::basefield::BaseField;
use crate::linalg::{self, Mat};
use crate::quadratic::QuadraticForm;

use super::bruhat::dual_vectors;
use super::{is_parabolic, is_symplectic, parabolic, sp_inverse, unipotent, w_set, x_invariant, MetaError};

#[derive(Clone, Debug, PartialEq)]
pub struct LerayData<E> {
    /// Where u lives.
    pub s: Vec<usize>,
    pub t1: Vec<usize>,
    pub t2: Vec<usize>,
    /// The symmetric block of u on S × S.
    pub b: Mat<E>,
    pub p: Mat<E>,
    pub p1: Mat<E>,
    pub p2: Mat<E>,
}

impl<E: Clone> LerayData<E> {
    /// l = |T1 ∩ T2 \ S|.
    pub fn l(&self) -> usize {
        self.t1.iter().filter(|i| self.t2.contains(i) && !self.s.contains(i)).count()
    }

    pub fn u<F: BaseField<Elem = E>>(&self, f: &F) -> Mat<E> {
        let m = self.p.rows / 2;
        let mut full = linalg::zeros(f, m, m);
        for (a, &i) in self.s.iter().enumerate() {
            for (c, &j) in self.s.iter().enumerate() {
                full.set(i, j, self.b.get(a, c).clone());
            }
        }
        unipotent(f, &full)
    }
}

fn first_columns<E: Clone>(g: &Mat<E>) -> Vec<Vec<E>> {
    (0..g.rows / 2).map(|c| g.col(c)).collect()
}

pub fn leray_decompose<F: BaseField>(f: &F, g1: &Mat<F::Elem>, g2: &Mat<F::Elem>) -> Result<LerayData<F::Elem>, MetaError> {
    if !is_symplectic(f, g1) || !is_symplectic(f, g2) {
        return Err(MetaError::NotSymplectic);
    }
    let m = g1.rows / 2;
    let n = 2 * m;
    let xs: Vec<Vec<F::Elem>> = (0..m)
        .map(|i| {
            let mut v = vec![f.zero(); n];
            v[i] = f.one();
            v
        })
        .collect();
    let a_lag = first_columns(&sp_inverse(f, g1));
    let b_lag = first_columns(g2);
    let xa = linalg::intersect(f, n, &xs, &a_lag);
    let xb = linalg::intersect(f, n, &xs, &b_lag);
    let ab = linalg::intersect(f, n, &a_lag, &b_lag);
    let u0 = linalg::intersect(f, n, &xa, &b_lag);
    let d2 = linalg::complete_within(f, n, &u0, &xa);
    let d1 = linalg::complete_within(f, n, &u0, &xb);
    let fc = linalg::complete_within(f, n, &u0, &ab);
    let xpart = |v: &Vec<F::Elem>| v[..m].to_vec();
    let ypart = |v: &Vec<F::Elem>| v[m..].to_vec();
    // Z = {x ∈ X : ⟨x, F_C⟩ = 0}
    let z: Vec<Vec<F::Elem>> = if fc.is_empty() {
        (0..m).map(|i| xpart(&xs[i])).collect()
    } else {
        linalg::nullspace(f, &Mat::from_rows(fc.iter().map(ypart).collect()))
    };
    let known: Vec<Vec<F::Elem>> = d1.iter().chain(&d2).chain(&u0).map(xpart).collect();
    let es = linalg::complete_within(f, m, &known, &z);
    let ec = dual_vectors(f, m, &fc.iter().map(ypart).collect::<Vec<_>>())?;
    let (ns, nc, nd1, nd2) = (es.len(), ec.len(), d1.len(), d2.len());
    let cols: Vec<Vec<F::Elem>> = es.iter().cloned().chain(ec).chain(d1.iter().map(xpart)).chain(d2.iter().map(xpart)).chain(u0.iter().map(xpart)).collect();
    if cols.len() != m {
        return Err(MetaError::Decomposition("block sizes do not add up".into()));
    }
    let e = Mat::from_cols(m, &cols);
    let e_inv = linalg::inverse(f, &e).ok_or_else(|| MetaError::Decomposition("singular basis".into()))?;
    let c_range = ns..ns + nc;
    let in_c = |i: usize| c_range.contains(&i);

    // unknowns: s_ij (i ≤ j, both off C) then b_ij (i ≤ j < ns)
    let mut s_var = vec![vec![None; m]; m];
    let mut nv = 0;
    for i in 0..m {
        for j in i..m {
            if !in_c(i) && !in_c(j) {
                s_var[i][j] = Some(nv);
                s_var[j][i] = Some(nv);
                nv += 1;
            }
        }
    }
    let mut b_var = vec![vec![0; ns]; ns];
    for i in 0..ns {
        for j in i..ns {
            b_var[i][j] = nv;
            b_var[j][i] = nv;
            nv += 1;
        }
    }
    // known columns of s from F_C
    let mut s_known = linalg::zeros(f, m, m);
    for (k, fv) in fc.iter().enumerate() {
        let col = linalg::mul_vec(f, &e_inv, &xpart(fv));
        for i in 0..m {
            s_known.set(i, ns + k, col[i].clone());
            s_known.set(ns + k, i, col[i].clone());
        }
    }
    let y_of = |k: usize| e_inv.row(k);
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    let mut rhs: Vec<F::Elem> = Vec::new();
    // ⟨f'_k − Σ_l b_lk e'_l, ℓ⟩ = 0 for every ℓ in a basis of `lag`
    let mut add_constraint = |k: usize, with_b: bool, lag: &[Vec<F::Elem>]| {
        let yk = y_of(k);
        for ell in lag {
            let (lx, ly) = (xpart(ell), ypart(ell));
            let mut row = vec![f.zero(); nv];
            let mut c = f.neg(&linalg::mul_vec(f, &Mat::from_rows(vec![yk.clone()]), &lx)[0]);
            for i in 0..m {
                let coef: F::Elem = cols[i].iter().zip(&ly).fold(f.zero(), |a, (x, y)| f.add(&a, &f.mul(x, y)));
                match s_var[i][k] {
                    Some(v) => row[v] = f.add(&row[v], &coef),
                    None => c = f.add(&c, &f.mul(&coef, s_known.get(i, k))),
                }
                if with_b && i < ns {
                    let v = b_var[i][k];
                    row[v] = f.sub(&row[v], &coef);
                }
            }
            rows.push(row);
            rhs.push(f.neg(&c));
        }
    };
    for k in ns + nc..ns + nc + nd1 {
        add_constraint(k, false, &a_lag);
    }
    for k in ns + nc + nd1..ns + nc + nd1 + nd2 {
        add_constraint(k, false, &b_lag);
    }
    for k in 0..ns {
        add_constraint(k, false, &b_lag);
        add_constraint(k, true, &a_lag);
    }
    let sol = if rows.is_empty() {
        vec![f.zero(); nv]
    } else {
        linalg::solve(f, &Mat::from_rows(rows), &rhs).ok_or_else(|| MetaError::Decomposition("inconsistent normal-form equations".into()))?
    };
    let s = Mat::from_fn(m, m, |i, j| match s_var[i][j] {
        Some(v) => sol[v].clone(),
        None => s_known.get(i, j).clone(),
    });
    let b = Mat::from_fn(ns, ns, |i, j| sol[b_var[i][j]].clone());
    if ns > 0 && f.is_zero(&linalg::det(f, &b)) {
        return Err(MetaError::Decomposition("degenerate u-block".into()));
    }
    let p = parabolic(f, &e, &s).expect("invertible");
    let t1: Vec<usize> = (0..ns + nc + nd1).collect();
    let t2: Vec<usize> = (0..ns + nc).chain(ns + nc + nd1..ns + nc + nd1 + nd2).collect();
    let mut data = LerayData { s: (0..ns).collect(), t1, t2, b, p: p.clone(), p1: p.clone(), p2: p.clone() };
    let u = data.u(f);
    let wt1 = w_set(f, m, &data.t1);
    let wt2 = w_set(f, m, &data.t2);
    let p_inv = sp_inverse(f, &p);
    data.p2 = linalg::mul(f, &linalg::mul(f, &sp_inverse(f, &wt2), &p_inv), g2);
    data.p1 = linalg::mul(f, &linalg::mul(f, &linalg::mul(f, g1, &p), &sp_inverse(f, &u)), &sp_inverse(f, &wt1));
    check_leray(f, g1, g2, &data)?;
    Ok(data)
}

pub fn check_leray<F: BaseField>(f: &F, g1: &Mat<F::Elem>, g2: &Mat<F::Elem>, d: &LerayData<F::Elem>) -> Result<(), MetaError> {
    let m = g1.rows / 2;
    let r1 = linalg::mul(f, &linalg::mul(f, &linalg::mul(f, &d.p1, &w_set(f, m, &d.t1)), &d.u(f)), &sp_inverse(f, &d.p));
    let r2 = linalg::mul(f, &linalg::mul(f, &d.p, &w_set(f, m, &d.t2)), &d.p2);
    let ok = &r1 == g1 && &r2 == g2 && is_parabolic(f, &d.p1) && is_parabolic(f, &d.p2) && is_parabolic(f, &d.p);
    let sym = d.b == d.b.transpose();
    if !ok || !sym {
        return Err(MetaError::Decomposition("normal-form product check failed".into()));
    }
    Ok(())
}

/// ĉ(w_S u, w_S) = (−2, det b)_F · h_F(b).
pub fn cocycle_wsu_ws<F: BaseField>(f: &F, b: &Mat<F::Elem>) -> Result<i8, MetaError> {
    if b.rows == 0 {
        return Ok(1);
    }
    let q = QuadraticForm::new(f.clone(), b.clone())?;
    let det = linalg::det(f, b);
    Ok(f.hilbert(&f.from_i64(-2), &det)? * q.hasse())
}

/// Every ingredient of the closed form.
#[derive(Clone, Debug)]
pub struct CocycleFormula<E> {
    pub value: i8,
    pub leray: LerayData<E>,
    pub x_g1: E,
    pub x_g2: E,
    pub x_g12: E,
    pub x_wuw: E,
}

pub fn cocycle_formula_full<F: BaseField>(f: &F, g1: &Mat<F::Elem>, g2: &Mat<F::Elem>) -> Result<CocycleFormula<F::Elem>, MetaError> {
    let leray = leray_decompose(f, g1, g2)?;
    let m = g1.rows / 2;
    let x1 = x_invariant(f, g1)?;
    let x2 = x_invariant(f, g2)?;
    let x12 = x_invariant(f, &linalg::mul(f, g1, g2))?;
    let ws = w_set(f, m, &leray.s);
    let wuw = linalg::mul(f, &linalg::mul(f, &ws, &leray.u(f)), &ws);
    let xw = x_invariant(f, &wuw)?;
    let l = leray.l() as i64;
    let minus1 = f.from_i64(-1);
    let mut v = f.hilbert(&x1, &x2)?;
    v *= f.hilbert(&f.mul(&x1, &x2), &f.neg(&x12))?;
    if (l * (l + 1) / 2) % 2 == 1 {
        v *= f.hilbert(&minus1, &minus1)?;
    }
    if l % 2 == 1 {
        v *= f.hilbert(&minus1, &xw)?;
    }
    v *= cocycle_wsu_ws(f, &leray.b)?;
    Ok(CocycleFormula { value: v, leray, x_g1: x1, x_g2: x2, x_g12: x12, x_wuw: xw })
}

/// ĉ(g1, g2) ∈ {±1} from the closed form.
pub fn cocycle_formula<F: BaseField>(f: &F, g1: &Mat<F::Elem>, g2: &Mat<F::Elem>) -> Result<i8, MetaError> {
    Ok(cocycle_formula_full(f, g1, g2)?.value)
}

/// The cocycle of σ_Rao(g) = (2, x(g))_F σ(g).
pub fn cocycle_formula_rao<F: BaseField>(f: &F, g1: &Mat<F::Elem>, g2: &Mat<F::Elem>) -> Result<i8, MetaError> {
    let full = cocycle_formula_full(f, g1, g2)?;
    let two = f.from_i64(2);
    let t = f.hilbert(&two, &full.x_g1)? * f.hilbert(&two, &full.x_g2)? * f.hilbert(&two, &full.x_g12)?;
    Ok(full.value * t)
}

/// (x(p), x(g))_F, the value of ĉ(p, g) and ĉ(g, p) for p ∈ P(X).
pub fn cocycle_parabolic<F: BaseField>(f: &F, p: &Mat<F::Elem>, g: &Mat<F::Elem>) -> Result<i8, MetaError> {
    if !is_parabolic(f, p) {
        return Err(MetaError::NotParabolic);
    }
    Ok(f.hilbert(&super::det_x(f, p), &x_invariant(f, g)?)?)
}

/// ĉ(w_S, w_S') = (−1, −1)_F^{l(l+1)/2} with l = |S ∩ S'|.
pub fn cocycle_w_pair<F: BaseField>(f: &F, s: &[usize], s2: &[usize]) -> Result<i8, MetaError> {
    let l = s.iter().filter(|i| s2.contains(i)).count() as i64;
    let minus1 = f.from_i64(-1);
    Ok(if (l * (l + 1) / 2) % 2 == 1 { f.hilbert(&minus1, &minus1)? } else { 1 })
}
