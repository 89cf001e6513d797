use crate::basefield::{BaseField, SquareClass};
use crate::linalg::{self, Mat};

use super::{det_x, is_parabolic, is_symplectic, parabolic, sp_inverse, w_j, MetaError};

/// g = p1 · w_j · p2 with p1, p2 ∈ P(X).
#[derive(Clone, Debug, PartialEq)]
pub struct BruhatData<E> {
    pub j: usize,
    pub p1: Mat<E>,
    pub p2: Mat<E>,
}

impl<E: Clone> BruhatData<E> {
    pub fn w<F: BaseField<Elem = E>>(&self, f: &F) -> Mat<E> {
        w_j(f, self.p1.rows / 2, self.j)
    }
}

/// Constructive Bruhat decomposition. With L = gX, the vectors u_i spanning
/// L ∩ X and the v_k = (x_k; y_k) completing them in L, p1 has columns
/// e'_i (dual to the y_k on the first j slots, then the u_i) and
/// s = E^{-1}·x; then p2 = w_j^{-1} p1^{-1} g.
pub fn bruhat_decompose<F: BaseField>(f: &F, g: &Mat<F::Elem>) -> Result<BruhatData<F::Elem>, MetaError> {
    if !is_symplectic(f, g) {
        return Err(MetaError::NotSymplectic);
    }
    let m = g.rows / 2;
    let (a, _, c, _) = super::split_blocks(g);
    let ker = linalg::nullspace(f, &c);
    let j = m - ker.len();
    let u: Vec<Vec<F::Elem>> = ker.iter().map(|n| linalg::mul_vec(f, &a, n)).collect();
    let comp = linalg::complete_basis(f, m, &ker);
    let xs: Vec<Vec<F::Elem>> = comp.iter().map(|n| linalg::mul_vec(f, &a, n)).collect();
    let ys: Vec<Vec<F::Elem>> = comp.iter().map(|n| linalg::mul_vec(f, &c, n)).collect();
    let e_dual = dual_vectors(f, m, &ys)?;
    let mut cols = e_dual;
    cols.extend(u);
    let e = Mat::from_cols(m, &cols);
    let e_inv = linalg::inverse(f, &e).ok_or_else(|| MetaError::Decomposition("singular Levi part".into()))?;
    let mut s = linalg::zeros(f, m, m);
    for k in 0..j {
        let col = linalg::mul_vec(f, &e_inv, &xs[k]);
        for i in 0..m {
            s.set(i, k, col[i].clone());
            if i >= j {
                s.set(k, i, col[i].clone());
            }
        }
    }
    let p1 = parabolic(f, &e, &s).expect("invertible");
    let w = w_j(f, m, j);
    let p2 = linalg::mul(f, &linalg::mul(f, &sp_inverse(f, &w), &sp_inverse(f, &p1)), g);
    let data = BruhatData { j, p1, p2 };
    check_bruhat(f, g, &data)?;
    Ok(data)
}

/// Vectors e_i with e_i · y_k = δ_ik, supported on a set of rows where the
/// y's are independent.
pub(crate) fn dual_vectors<F: BaseField>(f: &F, m: usize, ys: &[Vec<F::Elem>]) -> Result<Vec<Vec<F::Elem>>, MetaError> {
    let j = ys.len();
    if j == 0 {
        return Ok(Vec::new());
    }
    let ym = Mat::from_cols(m, ys);
    let (_, rows) = linalg::rref(f, &ym.transpose());
    if rows.len() != j {
        return Err(MetaError::Decomposition("dependent Y-parts".into()));
    }
    let sub = Mat::from_fn(j, j, |r, c| ym.get(rows[r], c).clone());
    let inv = linalg::inverse(f, &sub).ok_or_else(|| MetaError::Decomposition("singular minor".into()))?;
    // E'ᵀ Y = I with E'ᵀ supported on `rows`: E'ᵀ|rows = sub^{-1}
    Ok((0..j)
        .map(|i| {
            let mut v = vec![f.zero(); m];
            for (r, &row) in rows.iter().enumerate() {
                v[row] = inv.get(i, r).clone();
            }
            v
        })
        .collect())
}

pub fn check_bruhat<F: BaseField>(f: &F, g: &Mat<F::Elem>, d: &BruhatData<F::Elem>) -> Result<(), MetaError> {
    let prod = linalg::mul(f, &linalg::mul(f, &d.p1, &d.w(f)), &d.p2);
    if &prod != g || !is_parabolic(f, &d.p1) || !is_parabolic(f, &d.p2) {
        return Err(MetaError::Decomposition("Bruhat product check failed".into()));
    }
    Ok(())
}

/// det_X(p1 p2), whose square class is x(g).
pub fn x_det<F: BaseField>(f: &F, d: &BruhatData<F::Elem>) -> F::Elem {
    f.mul(&det_x(f, &d.p1), &det_x(f, &d.p2))
}

/// A representative of x(g) ∈ F^×/F^{×2}.
pub fn x_invariant<F: BaseField>(f: &F, g: &Mat<F::Elem>) -> Result<F::Elem, MetaError> {
    Ok(x_det(f, &bruhat_decompose(f, g)?))
}

pub fn x_class<F: BaseField>(f: &F, g: &Mat<F::Elem>) -> Result<SquareClass, MetaError> {
    Ok(f.square_class(&x_invariant(f, g)?)?)
}

/// Another decomposition g = (p1 r)·w_j·(w_j^{-1} r^{-1} w_j p2), for r ∈ P(X)
/// with w_j^{-1} r w_j ∈ P(X). Returns None if r does not qualify.
pub fn redecompose<F: BaseField>(f: &F, d: &BruhatData<F::Elem>, r: &Mat<F::Elem>) -> Option<BruhatData<F::Elem>> {
    let w = d.w(f);
    let conj = linalg::mul(f, &linalg::mul(f, &sp_inverse(f, &w), &sp_inverse(f, r)), &w);
    if !is_parabolic(f, r) || !is_parabolic(f, &conj) {
        return None;
    }
    Some(BruhatData { j: d.j, p1: linalg::mul(f, &d.p1, r), p2: linalg::mul(f, &conj, &d.p2) })
}
