//! Operators of the metaplectic group on the X-model over F_q.
//!
//! The operator attached to g satisfies M ρ(h) M^{-1} = ρ(g·h). On P(X),
//!
//!   I_p φ(y) = ψ(½ yᵀ A Bᵀ y) φ(Aᵀ y),   σ(p) = Ω_{1,det A} · I_p,
//!
//! and σ(w_S)φ(y) = Ω(ψ∘Q_{1/2})^{−|S|} Σ_{a ∈ F^S} ψ(−a·y_S) φ(a, y_{ᶜS}).
//! For g = p1 w_j p2, σ(g) = Ω_{1, det_X(p1 p2)} · I_{p1} σ(w_j) I_{p2}.

use crate::basefield::{BaseField, Fq, Psi};
use crate::coeff::{CoeffRing, Field};
use crate::heisenberg::{h_act, HeisenbergElement, SchrodingerModel};
use crate::linalg::{self, Mat};
use crate::operator::Monomial;
use crate::vecspace::FqVecSpace;
use crate::weilfactor::WeilFactor;

use super::{bruhat_decompose, is_parabolic, split_blocks, x_det, BruhatData, MetaError};

pub struct FiniteWeil<R: CoeffRing> {
    pub model: SchrodingerModel<R>,
    pub weil: WeilFactor<Fq, R>,
    w_ops: Vec<Mat<R::Elem>>,
}

impl<R: CoeffRing> FiniteWeil<R> {
    pub fn new(psi: Psi<Fq>, ring: R, m: usize) -> Result<Self, MetaError> {
        let model = SchrodingerModel::x_model(psi.clone(), ring.clone(), m)?;
        let weil = WeilFactor::new(psi, ring);
        let mut out = FiniteWeil { model, weil, w_ops: Vec::new() };
        out.w_ops = (0..=m).map(|j| out.build_sigma_w(j)).collect::<Result<_, _>>()?;
        Ok(out)
    }

    pub fn field(&self) -> &Fq {
        self.model.field()
    }

    pub fn ring(&self) -> &R {
        &self.model.ring
    }

    pub fn m(&self) -> usize {
        self.model.m()
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    fn space(&self) -> &FqVecSpace {
        &self.model.space
    }

    /// Ω_{1,d} = Ω(ψ∘Q_1)/Ω(ψ∘Q_d).
    pub fn omega_1(&self, d: &u32) -> Result<R::Elem, MetaError> {
        Ok(self.weil.omega_ratio(&1, d)?)
    }

    /// I_p for p ∈ P(X), without normalization.
    pub fn i_p(&self, p: &Mat<u32>) -> Result<Monomial<R::Elem>, MetaError> {
        let f = self.field();
        if !is_parabolic(f, p) {
            return Err(MetaError::NotParabolic);
        }
        let (a, b, _, _) = split_blocks(p);
        let a_inv_t = linalg::inverse(f, &a).ok_or(MetaError::NotSymplectic)?.transpose();
        let q = linalg::mul(f, &a, &b.transpose());
        let sp = self.space();
        let n = self.dim();
        let half = f.half();
        let mut perm = vec![0; n];
        let mut val = Vec::with_capacity(n);
        for k in 0..n {
            let z = linalg::mul_vec(f, &a_inv_t, sp.vec(k));
            let qz = linalg::mul_vec(f, &q, &z);
            perm[k] = sp.index(&z);
            val.push(self.model.psi(f.mul(&half, &sp.dot(&z, &qz))).clone());
        }
        Ok(Monomial { perm, val })
    }

    /// σ(p) = Ω_{1, det_X p} · I_p.
    pub fn sigma_parabolic(&self, p: &Mat<u32>) -> Result<Monomial<R::Elem>, MetaError> {
        let c = self.omega_1(&super::det_x(self.field(), p))?;
        Ok(self.i_p(p)?.scale(self.ring(), &c))
    }

    fn build_sigma_w(&self, j: usize) -> Result<Mat<R::Elem>, MetaError> {
        let f = self.field();
        let r = self.ring();
        let sp = self.space();
        let n = self.dim();
        // Q(x) = ½⟨w^{-1}x, x⟩ = ½x², the form matching the law ρ(g·h)
        let om = self.weil.omega_1d(&f.half())?;
        let c = r.inv(&r.pow(&om, j as u64)).ok_or(MetaError::NotScalar)?;
        let vals: Vec<R::Elem> = self.model.psi_values().iter().map(|v| r.mul(&c, v)).collect();
        Ok(Mat::from_fn(n, n, |y, z| {
            let (vy, vz) = (sp.vec(y), sp.vec(z));
            if vy[j..] != vz[j..] {
                return r.zero();
            }
            let d = sp.dot(&vy[..j], &vz[..j]);
            vals[f.neg(&d) as usize].clone()
        }))
    }

    /// σ(w_j).
    pub fn sigma_w(&self, j: usize) -> &Mat<R::Elem> {
        &self.w_ops[j]
    }

    pub fn sigma_from(&self, d: &BruhatData<u32>) -> Result<Mat<R::Elem>, MetaError> {
        let f = self.field();
        let r = self.ring();
        let c = self.omega_1(&x_det(f, d))?;
        let p1 = self.i_p(&d.p1)?.scale(r, &c);
        let p2 = self.i_p(&d.p2)?;
        Ok(p1.mul_dense(r, &p2.dense_mul(r, self.sigma_w(d.j))))
    }

    /// σ(g) as a dense operator.
    pub fn sigma(&self, g: &Mat<u32>) -> Result<Mat<R::Elem>, MetaError> {
        self.sigma_from(&bruhat_decompose(self.field(), g)?)
    }

    /// ĉ(g1, g2) = σ(g1)σ(g2)σ(g1g2)^{-1}; fails if the product is not scalar.
    pub fn cocycle(&self, g1: &Mat<u32>, g2: &Mat<u32>) -> Result<R::Elem, MetaError> {
        let f = self.field();
        let r = self.ring();
        let lhs = linalg::mul(r, &self.sigma(g1)?, &self.sigma(g2)?);
        let rhs = self.sigma(&linalg::mul(f, g1, g2))?;
        scalar_ratio(r, &lhs, &rhs).ok_or(MetaError::NotScalar)
    }

    /// Checks M ρ(h) = ρ(g·h) M on the generators of H.
    pub fn intertwines(&self, g: &Mat<u32>, op: &Mat<R::Elem>) -> bool {
        let f = self.field();
        let r = self.ring();
        self.model.generators().iter().all(|h| {
            let lhs = self.model.rho(h).dense_mul(r, op);
            let rhs = self.model.rho(&h_act(f, g, h)).mul_dense(r, op);
            lhs == rhs
        })
    }

    /// M[g] = |Ker(1−g)|^{-1} Σ_{w ∈ W} ψ(½⟨w, gw⟩) ρ((1−g)w, 0), an
    /// intertwiner for the law above.
    pub fn m_bracket(&self, g: &Mat<u32>) -> Result<Mat<R::Elem>, MetaError> {
        let f = self.field();
        let r = self.ring();
        let m = self.m();
        let n = self.dim();
        let one_minus = linalg::sub(f, &linalg::identity(f, 2 * m), g);
        let ker = linalg::nullspace(f, &one_minus).len();
        let w_space = FqVecSpace::new(f.clone(), 2 * m);
        let mut acc = linalg::zeros(r, n, n);
        let half = f.half();
        for i in 0..w_space.size() {
            let w = w_space.vec(i);
            let gw = linalg::mul_vec(f, g, w);
            let phase = f.mul(&half, &crate::heisenberg::symplectic_pairing(f, w, &gw));
            let u = linalg::mul_vec(f, &one_minus, w);
            let op = self.model.rho(&HeisenbergElement::delta(f, u));
            let c = self.model.psi(phase);
            for (j, (&row, v)) in op.perm.iter().zip(&op.val).enumerate() {
                let cur = acc.get(row, j).clone();
                acc.set(row, j, r.add(&cur, &r.mul(c, v)));
            }
        }
        let size = r.powi(&r.from_i64(f.q() as i64), ker as i64).ok_or(MetaError::NotScalar)?;
        let inv = r.inv(&size).ok_or(MetaError::NotScalar)?;
        Ok(linalg::scale(r, &inv, &acc))
    }

    /// σ(g) for the contragredient: g ↦ σ(g^{-1})ᵀ.
    pub fn dual_sigma(&self, g: &Mat<u32>) -> Result<Mat<R::Elem>, MetaError> {
        Ok(self.sigma(&super::sp_inverse(self.field(), g))?.transpose())
    }
}

/// The c with a = c·b, if it exists (b ≠ 0).
pub fn scalar_ratio<R: Field>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Option<R::Elem> {
    let k = b.data.iter().position(|x| !r.is_zero(x))?;
    let c = r.div(&a.data[k], &b.data[k])?;
    let ok = a.data.iter().zip(&b.data).all(|(x, y)| *x == r.mul(&c, y));
    ok.then_some(c)
}

/// Number of items failing `check`, evaluated in parallel.
pub fn count_failures<T: Sync>(items: &[T], check: impl Fn(&T) -> bool + Sync) -> usize {
    use rayon::prelude::*;
    items.par_iter().filter(|x| !check(x)).count()
}
