//! The Heisenberg group H = W × F and its Schrödinger models over F_q as
//! explicit monomial matrices.
//!
//! W = F^{2m} has coordinates (x; y) in the basis e_1..e_m, f_1..f_m with
//! ⟨e_i, f_j⟩ = δ_ij, so ⟨w, w'⟩ = x·y' − y·x'. The X-model acts on
//! functions of y ∈ Y = F^m, indexed by Σ y_i q^i:
//!
//!   ρ(x, v, t) φ(y) = ψ(t − y·x − ½ v·x) φ(y + v).

use thiserror::Error;

use crate::basefield::{BaseError, BaseField, Fq, Psi};
use crate::coeff::{CoeffError, CoeffRing, Cyc, CycField, Field, FinField, ReductionMap};
use crate::linalg::{self, Mat};
use crate::operator::{commutant_dim_monomial, hom_space_monomial, Monomial};
use crate::vecspace::FqVecSpace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeisenbergError {
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("model too large: dimension {0}")]
    TooLarge(usize),
    #[error("dimension mismatch")]
    Dimension,
}

/// ⟨w, w'⟩ = x·y' − y·x'.
pub fn symplectic_pairing<F: Field>(f: &F, w1: &[F::Elem], w2: &[F::Elem]) -> F::Elem {
    let m = w1.len() / 2;
    let mut acc = f.zero();
    for i in 0..m {
        acc = f.add(&acc, &f.mul(&w1[i], &w2[m + i]));
        acc = f.sub(&acc, &f.mul(&w1[m + i], &w2[i]));
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergElement<E> {
    pub w: Vec<E>,
    pub t: E,
}

impl<E: Clone + PartialEq> HeisenbergElement<E> {
    pub fn identity<F: Field<Elem = E>>(f: &F, m: usize) -> Self {
        HeisenbergElement { w: vec![f.zero(); 2 * m], t: f.zero() }
    }

    /// δ(w) = (w, 0).
    pub fn delta<F: Field<Elem = E>>(f: &F, w: Vec<E>) -> Self {
        HeisenbergElement { w, t: f.zero() }
    }

    pub fn central<F: Field<Elem = E>>(f: &F, m: usize, t: E) -> Self {
        HeisenbergElement { w: vec![f.zero(); 2 * m], t }
    }

    pub fn m(&self) -> usize {
        self.w.len() / 2
    }
}

/// (w,t)(w',t') = (w+w', t+t'+½⟨w,w'⟩).
pub fn h_mul<F: BaseField>(f: &F, a: &HeisenbergElement<F::Elem>, b: &HeisenbergElement<F::Elem>) -> HeisenbergElement<F::Elem> {
    let w = a.w.iter().zip(&b.w).map(|(x, y)| f.add(x, y)).collect();
    let half = f.mul(&f.half(), &symplectic_pairing(f, &a.w, &b.w));
    HeisenbergElement { w, t: f.add(&f.add(&a.t, &b.t), &half) }
}

pub fn h_inv<F: BaseField>(f: &F, a: &HeisenbergElement<F::Elem>) -> HeisenbergElement<F::Elem> {
    HeisenbergElement { w: a.w.iter().map(|x| f.neg(x)).collect(), t: f.neg(&a.t) }
}

/// Action of a 2m×2m matrix on H: g·(w,t) = (gw, t).
pub fn h_act<F: BaseField>(f: &F, g: &Mat<F::Elem>, h: &HeisenbergElement<F::Elem>) -> HeisenbergElement<F::Elem> {
    HeisenbergElement { w: linalg::mul_vec(f, g, &h.w), t: h.t.clone() }
}

/// Which Lagrangian the model is induced from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarization {
    /// Functions of y; X acts by characters.
    X,
    /// Functions of x; Y acts by characters.
    Y,
}

/// A Schrödinger model of the Heisenberg representation over F_q with
/// coefficients in R.
#[derive(Clone, Debug)]
pub struct SchrodingerModel<R: CoeffRing> {
    pub space: FqVecSpace,
    pub psi: Psi<Fq>,
    pub ring: R,
    pub polarization: Polarization,
    psi_vals: Vec<R::Elem>,
}

pub const MAX_MODEL_DIM: usize = 81;

impl<R: CoeffRing> SchrodingerModel<R> {
    pub fn new(psi: Psi<Fq>, ring: R, m: usize, polarization: Polarization) -> Result<Self, HeisenbergError> {
        let q = psi.field.q() as usize;
        let dim = q.checked_pow(m as u32).unwrap_or(usize::MAX);
        if dim > MAX_MODEL_DIM {
            return Err(HeisenbergError::TooLarge(dim));
        }
        let psi_vals = (0..q as u32).map(|x| psi.eval(&ring, &x)).collect::<Result<Vec<_>, _>>()?;
        Ok(SchrodingerModel { space: FqVecSpace::new(psi.field.clone(), m), psi, ring, polarization, psi_vals })
    }

    pub fn x_model(psi: Psi<Fq>, ring: R, m: usize) -> Result<Self, HeisenbergError> {
        Self::new(psi, ring, m, Polarization::X)
    }

    pub fn field(&self) -> &Fq {
        &self.psi.field
    }

    pub fn m(&self) -> usize {
        self.space.m
    }

    pub fn dim(&self) -> usize {
        self.space.size()
    }

    #[inline]
    pub fn psi(&self, x: u32) -> &R::Elem {
        &self.psi_vals[x as usize]
    }

    pub fn psi_values(&self) -> &[R::Elem] {
        &self.psi_vals
    }

    /// ρ_ψ(h) as a monomial matrix.
    pub fn rho(&self, h: &HeisenbergElement<u32>) -> Monomial<R::Elem> {
        let f = self.field();
        let m = self.m();
        let (wx, wy) = h.w.split_at(m);
        // X-model: shift by v = w_Y, character in w_X; Y-model swaps roles
        let (shift, chr, sign) = match self.polarization {
            Polarization::X => (wy, wx, true),
            Polarization::Y => (wx, wy, false),
        };
        let sidx = self.space.index(shift);
        let half_sv = f.mul(&f.half(), &self.space.dot(shift, chr));
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut val = Vec::with_capacity(n);
        for j in 0..n {
            let i = self.space.sub(j, sidx);
            perm[j] = i;
            let d = self.space.dot(self.space.vec(i), chr);
            let e = if sign { f.sub(&f.sub(&h.t, &d), &half_sv) } else { f.add(&f.add(&h.t, &d), &half_sv) };
            val.push(self.psi(e).clone());
        }
        Monomial { perm, val }
    }

    /// Generators δ(c·e_i), δ(c·f_i) and (0, c) for c running over the
    /// F_p-basis 1, x, .., x^{f−1} of F_q.
    pub fn generators(&self) -> Vec<HeisenbergElement<u32>> {
        let f = self.field();
        let m = self.m();
        let basis: Vec<u32> = (0..f.degree()).map(|k| (f.p() as u32).pow(k)).collect();
        let mut out = Vec::new();
        for &c in &basis {
            for i in 0..2 * m {
                let mut w = vec![0u32; 2 * m];
                w[i] = c;
                out.push(HeisenbergElement::delta(f, w));
            }
            out.push(HeisenbergElement::central(f, m, c));
        }
        out
    }

    /// Every element of H, in a fixed order.
    pub fn all_elements(&self) -> Vec<HeisenbergElement<u32>> {
        let m = self.m();
        let w_space = FqVecSpace::new(self.field().clone(), 2 * m);
        let q = self.field().q();
        let mut out = Vec::with_capacity(w_space.size() * q as usize);
        for i in 0..w_space.size() {
            for t in 0..q {
                out.push(HeisenbergElement { w: w_space.vec(i).to_vec(), t });
            }
        }
        out
    }

    pub fn commutant_dim(&self) -> usize {
        let gens: Vec<_> = self.generators().iter().map(|h| self.rho(h)).collect();
        commutant_dim_monomial(&self.ring, &gens)
    }

    /// Contragredient h ↦ ρ(h^{-1})ᵀ.
    pub fn dual_rho(&self, h: &HeisenbergElement<u32>) -> Monomial<R::Elem> {
        self.rho(&h_inv(self.field(), h)).transpose(&self.ring)
    }
}

/// I_{X→Y}: φ ↦ (x ↦ Σ_a ψ(−x·a) φ(a)), from the X-model to the Y-model.
pub fn intertwiner_x_to_y<R: CoeffRing>(xm: &SchrodingerModel<R>) -> Mat<R::Elem> {
    let f = xm.field();
    let n = xm.dim();
    Mat::from_fn(n, n, |x, a| xm.psi(f.neg(&xm.space.dot(xm.space.vec(x), xm.space.vec(a)))).clone())
}

/// I_{Y→X}: φ ↦ (y ↦ Σ_a ψ(a·y) φ(a)), from the Y-model to the X-model.
pub fn intertwiner_y_to_x<R: CoeffRing>(xm: &SchrodingerModel<R>) -> Mat<R::Elem> {
    let n = xm.dim();
    Mat::from_fn(n, n, |y, a| xm.psi(xm.space.dot(xm.space.vec(a), xm.space.vec(y))).clone())
}

/// The model of W₁ ⊕ W₂ as ψ(t)·ρ₁(w₁,0) ⊗ ρ₂(w₂,0), on functions of
/// (y₁, y₂) indexed by y₁ + q^{m₁} y₂. Elements are given in the
/// coordinates (x₁, x₂; y₁, y₂).
pub fn tensor_rho<R: CoeffRing>(m1: &SchrodingerModel<R>, m2: &SchrodingerModel<R>, h: &HeisenbergElement<u32>) -> Monomial<R::Elem> {
    let f = m1.field();
    let (a, b) = (m1.m(), m2.m());
    let m = a + b;
    let mut w1 = Vec::with_capacity(2 * a);
    w1.extend_from_slice(&h.w[..a]);
    w1.extend_from_slice(&h.w[m..m + a]);
    let mut w2 = Vec::with_capacity(2 * b);
    w2.extend_from_slice(&h.w[a..m]);
    w2.extend_from_slice(&h.w[m + a..]);
    let r1 = m1.rho(&HeisenbergElement::delta(f, w1));
    let r2 = m2.rho(&HeisenbergElement::delta(f, w2));
    Monomial::kron(&m1.ring, &r2, &r1).scale(&m1.ring, m1.psi(h.t))
}

/// Entrywise reduction of a cyclotomic-model operator to characteristic ℓ.
pub fn reduce_monomial(map: &ReductionMap, a: &Monomial<Cyc>) -> Result<Monomial<u32>, CoeffError> {
    Ok(Monomial { perm: a.perm.clone(), val: a.val.iter().map(|v| map.reduce(v)).collect::<Result<_, _>>()? })
}

pub fn reduce_dense(map: &ReductionMap, a: &Mat<Cyc>) -> Result<Mat<u32>, CoeffError> {
    let data = a.data.iter().map(|v| map.reduce(v)).collect::<Result<Vec<_>, _>>()?;
    Ok(Mat { rows: a.rows, cols: a.cols, data })
}

/// Intertwiners from the contragredient of the ψ-model to the ψ^{-1}-model.
pub fn contragredient_intertwiners<R: CoeffRing>(model: &SchrodingerModel<R>) -> Result<Vec<Mat<R::Elem>>, HeisenbergError> {
    let inv = SchrodingerModel::new(model.psi.inverse(), model.ring.clone(), model.m(), model.polarization)?;
    let pairs: Vec<_> = model.generators().iter().map(|h| (model.dual_rho(h), inv.rho(h))).collect();
    Ok(hom_space_monomial(&model.ring, &pairs))
}

/// Convenience constructors for the two coefficient flavours.
pub fn cyclotomic_model(q_field: Fq, m: usize) -> Result<SchrodingerModel<CycField>, HeisenbergError> {
    let ring = CycField::new(q_field.p())?;
    SchrodingerModel::x_model(Psi::standard(q_field), ring, m)
}

pub fn modular_model(q_field: Fq, ell: u64, m: usize) -> Result<SchrodingerModel<FinField>, HeisenbergError> {
    let ring = FinField::for_roots(ell, q_field.p(), 1)?;
    SchrodingerModel::x_model(Psi::standard(q_field), ring, m)
}
