//! Symplectic groups, the Bruhat decomposition and x(g), the section σ and
//! its cocycle ĉ: operator level over F_q, closed form via Leray data over
//! any base field.
//!
//! Matrices act on W = X ⊕ Y in the basis e_1..e_m, f_1..f_m and are split
//! into m×m blocks [[A, B], [C, D]]; P(X) is the subgroup with C = 0.

mod bruhat;
mod finite;
mod leray;

pub use bruhat::*;
pub use finite::*;
pub use leray::*;

use rand::Rng;
use thiserror::Error;

use crate::basefield::{BaseError, BaseField};
use crate::coeff::{CoeffError, Field};
use crate::heisenberg::HeisenbergError;
use crate::linalg::{self, Mat};
use crate::weilfactor::WeilError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetaError {
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Heisenberg(#[from] HeisenbergError),
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("matrix is not in P(X)")]
    NotParabolic,
    #[error("operator product is not a scalar")]
    NotScalar,
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// J = [[0, I], [−I, 0]], so ⟨w, w'⟩ = wᵀ J w'.
pub fn j_matrix<F: Field>(f: &F, m: usize) -> Mat<F::Elem> {
    Mat::from_fn(2 * m, 2 * m, |r, c| {
        if c == r + m {
            f.one()
        } else if r == c + m {
            f.neg(&f.one())
        } else {
            f.zero()
        }
    })
}

pub fn is_symplectic<F: Field>(f: &F, g: &Mat<F::Elem>) -> bool {
    if !g.is_square() || g.rows % 2 != 0 {
        return false;
    }
    let j = j_matrix(f, g.rows / 2);
    linalg::mul(f, &linalg::mul(f, &g.transpose(), &j), g) == j
}

/// The m×m blocks (A, B, C, D).
pub fn split_blocks<E: Clone>(g: &Mat<E>) -> (Mat<E>, Mat<E>, Mat<E>, Mat<E>) {
    let m = g.rows / 2;
    (g.block(0, 0, m, m), g.block(0, m, m, m), g.block(m, 0, m, m), g.block(m, m, m, m))
}

pub fn is_parabolic<F: Field>(f: &F, g: &Mat<F::Elem>) -> bool {
    let m = g.rows / 2;
    linalg::is_zero(f, &g.block(m, 0, m, m))
}

/// det_X(p) = det A for p ∈ P(X).
pub fn det_x<F: Field>(f: &F, p: &Mat<F::Elem>) -> F::Elem {
    let m = p.rows / 2;
    linalg::det(f, &p.block(0, 0, m, m))
}

/// w_S: e_i ↦ f_i, f_i ↦ −e_i for i ∈ S, identity elsewhere.
pub fn w_set<F: Field>(f: &F, m: usize, s: &[usize]) -> Mat<F::Elem> {
    let mut g = linalg::identity(f, 2 * m);
    for &i in s {
        g.set(i, i, f.zero());
        g.set(m + i, m + i, f.zero());
        g.set(m + i, i, f.one());
        g.set(i, m + i, f.neg(&f.one()));
    }
    g
}

/// w_j = w_{1..j}.
pub fn w_j<F: Field>(f: &F, m: usize, j: usize) -> Mat<F::Elem> {
    w_set(f, m, &(0..j).collect::<Vec<_>>())
}

/// The Levi element diag(a, a^{-T}).
pub fn levi<F: Field>(f: &F, a: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    let m = a.rows;
    let inv_t = linalg::inverse(f, a)?.transpose();
    Some(Mat::blocks(a, &linalg::zeros(f, m, m), &linalg::zeros(f, m, m), &inv_t))
}

/// The unipotent [[I, s], [0, I]] for symmetric s.
pub fn unipotent<F: Field>(f: &F, s: &Mat<F::Elem>) -> Mat<F::Elem> {
    let m = s.rows;
    Mat::blocks(&linalg::identity(f, m), s, &linalg::zeros(f, m, m), &linalg::identity(f, m))
}

/// The lower unipotent [[I, 0], [c, I]] for symmetric c.
pub fn lower_unipotent<F: Field>(f: &F, c: &Mat<F::Elem>) -> Mat<F::Elem> {
    let m = c.rows;
    Mat::blocks(&linalg::identity(f, m), &linalg::zeros(f, m, m), c, &linalg::identity(f, m))
}

/// [[E, E·s], [0, E^{-T}]].
pub fn parabolic<F: Field>(f: &F, e: &Mat<F::Elem>, s: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    let m = e.rows;
    let inv_t = linalg::inverse(f, e)?.transpose();
    Some(Mat::blocks(e, &linalg::mul(f, e, s), &linalg::zeros(f, m, m), &inv_t))
}

/// Inverse of a symplectic matrix: −J gᵀ J.
pub fn sp_inverse<F: Field>(f: &F, g: &Mat<F::Elem>) -> Mat<F::Elem> {
    let j = j_matrix(f, g.rows / 2);
    linalg::neg(f, &linalg::mul(f, &linalg::mul(f, &j, &g.transpose()), &j))
}

/// k·p^v with |k| ≤ 2p and v ∈ {−1, 0, 1} (v = 0 over a finite field):
/// every valuation parity and unit class occurs while entries of products
/// stay small.
pub fn random_small<F: BaseField, G: Rng>(f: &F, rng: &mut G) -> F::Elem {
    let p = f.residue_char() as i64;
    let k = f.from_i64(rng.gen_range(-2 * p..=2 * p));
    if f.is_finite() {
        return k;
    }
    match rng.gen_range(0..4) {
        0 => f.mul(&k, &f.from_i64(p)),
        1 => f.div(&k, &f.from_i64(p)).expect("p invertible"),
        _ => k,
    }
}

pub fn random_symmetric<F: BaseField, G: Rng>(f: &F, m: usize, rng: &mut G) -> Mat<F::Elem> {
    let mut s = linalg::zeros(f, m, m);
    for i in 0..m {
        for j in i..m {
            let x = random_small(f, rng);
            s.set(i, j, x.clone());
            s.set(j, i, x);
        }
    }
    s
}

pub fn random_invertible<F: BaseField, G: Rng>(f: &F, m: usize, rng: &mut G) -> Mat<F::Elem> {
    loop {
        let a = Mat::from_fn(m, m, |_, _| random_small(f, rng));
        if !f.is_zero(&linalg::det(f, &a)) {
            return a;
        }
    }
}

pub fn random_parabolic<F: BaseField, G: Rng>(f: &F, m: usize, rng: &mut G) -> Mat<F::Elem> {
    let e = random_invertible(f, m, rng);
    let s = random_symmetric(f, m, rng);
    parabolic(f, &e, &s).expect("invertible")
}

/// A random element p·n⁻(c)·p' of Sp_{2m}(F) with p, p' ∈ P(X) and c
/// symmetric; the Bruhat cell is rank(c), so every cell is reached.
pub fn random_symplectic<F: BaseField, G: Rng>(f: &F, m: usize, rng: &mut G) -> Mat<F::Elem> {
    let c = random_symmetric(f, m, rng);
    let g = linalg::mul(f, &random_parabolic(f, m, rng), &lower_unipotent(f, &c));
    linalg::mul(f, &g, &random_parabolic(f, m, rng))
}

/// Every element of Sp₂(F_q) = SL₂(F_q).
pub fn all_sl2<F: BaseField>(f: &F) -> Vec<Mat<F::Elem>> {
    let elts = f.elements().expect("finite field");
    let mut out = Vec::new();
    for a in &elts {
        for b in &elts {
            for c in &elts {
                for d in &elts {
                    if f.is_one(&f.sub(&f.mul(a, d), &f.mul(b, c))) {
                        out.push(Mat::from_rows(vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]));
                    }
                }
            }
        }
    }
    out
}

/// Embed g ∈ Sp(W_T) for the coordinate set T ⊆ {0..m} into Sp(W) as the
/// identity on the other coordinates.
pub fn embed<F: Field>(f: &F, m: usize, t: &[usize], g: &Mat<F::Elem>) -> Mat<F::Elem> {
    let k = t.len();
    let pos = |i: usize| if i < k { t[i] } else { m + t[i - k] };
    let mut out = linalg::identity(f, 2 * m);
    for r in 0..2 * k {
        for c in 0..2 * k {
            out.set(pos(r), pos(c), g.get(r, c).clone());
        }
    }
    out
}
