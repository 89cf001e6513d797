//! Non-normalised Weil factors Ω_μ(ψ∘Q), their ratios and the Hilbert
//! symbol identity, and the ψ-normalized Fourier transform on F_q^m.
//!
//! Measures: over F_q the counting measure with μ({0}) = 1; over Q_p the
//! Haar measure giving Z_p^r volume 1. For a degenerate Q the measure lives
//! on X/rad(Q), identified with the span of the standard coordinate vectors
//! that `linalg::complete_basis` adds to a basis of the radical.

use std::sync::OnceLock;

use thiserror::Error;

use crate::basefield::{BaseError, BaseField, Fq, Psi, Qp, SquareClass};
use crate::coeff::{CoeffError, CoeffRing, Field};
use crate::linalg::{self, Mat};
use crate::quadratic::{diagonalize_with, PivotOrder, QuadraticForm};
use crate::vecspace::FqVecSpace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeilError {
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("form is degenerate")]
    Degenerate,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("consistency check failed: {0}")]
    Mismatch(String),
}

fn class_slot(c: SquareClass) -> usize {
    (c.odd_valuation as usize) * 2 + (!c.unit_square) as usize
}

/// Weil factors for a fixed character ψ with values in a coefficient field.
#[derive(Clone, Debug)]
pub struct WeilFactor<F: BaseField, R: CoeffRing> {
    psi: Psi<F>,
    ring: R,
    // write-once Gauss sums, one per square class of the twisted argument
    gauss: [OnceLock<R::Elem>; 4],
}

impl<F: BaseField, R: CoeffRing> WeilFactor<F, R> {
    pub fn new(psi: Psi<F>, ring: R) -> Self {
        WeilFactor { psi, ring, gauss: Default::default() }
    }

    pub fn psi(&self) -> &Psi<F> {
        &self.psi
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn field(&self) -> &F {
        &self.psi.field
    }

    fn p_power(&self, k: i64) -> Result<R::Elem, WeilError> {
        let p = self.ring.from_i64(self.field().residue_char() as i64);
        self.ring.powi(&p, k).ok_or(WeilError::Coeff(CoeffError::NotInvertible))
    }

    /// Σ_x ψ₀(c·x²) over F_q, or Σ_{s mod p} ψ₀(c·s²) for c of valuation −1.
    fn gauss_sum(&self, c: &F::Elem, points: &[F::Elem]) -> Result<R::Elem, WeilError> {
        let f = self.field();
        let p = f.residue_char() as usize;
        let exps: Vec<(u32, u64)> = points.iter().map(|x| f.psi_exponent(&f.mul(c, &f.mul(x, x)))).collect();
        let level = exps.iter().map(|e| e.0).max().unwrap_or(0);
        let mut hist = vec![0i64; p.pow(level)];
        for (l, e) in exps {
            hist[e as usize * p.pow(level - l)] += 1;
        }
        Ok(self.ring.from_zeta_histogram(level, &hist)?)
    }

    /// Ω(ψ∘Q_a) for Q_a(x) = a·x² on F with the standard measure.
    pub fn omega_1d(&self, a: &F::Elem) -> Result<R::Elem, WeilError> {
        let f = self.field();
        if f.is_zero(a) {
            return Ok(self.ring.one());
        }
        let a2 = f.mul(&self.psi.twist, a);
        let cls = f.square_class(&a2)?;
        let slot = &self.gauss[class_slot(cls)];
        let rep = f.class_rep(cls);
        if f.is_finite() {
            if let Some(v) = slot.get() {
                return Ok(v.clone());
            }
            let pts = f.elements().expect("finite field");
            let g = self.gauss_sum(&rep, &pts)?;
            return Ok(slot.get_or_init(|| g).clone());
        }
        // Q_p: a' = p^{2k+r}u gives p^k, times g(ū) when r = 1
        let v = f.valuation(&a2).expect("nonzero");
        let k = v.div_euclid(2);
        let pk = self.p_power(k)?;
        if v.rem_euclid(2) == 0 {
            return Ok(pk);
        }
        let g = match slot.get() {
            Some(g) => g.clone(),
            None => {
                let p = f.residue_char() as i64;
                let pinv2 = f.inv(&f.from_i64(p * p)).expect("p invertible");
                let c = f.mul(&rep, &pinv2);
                let pts: Vec<F::Elem> = (0..p).map(|s| f.from_i64(s)).collect();
                let g = self.gauss_sum(&c, &pts)?;
                slot.get_or_init(|| g).clone()
            }
        };
        Ok(self.ring.mul(&pk, &g))
    }

    /// Ω_{a,b} = Ω(ψ∘Q_a)/Ω(ψ∘Q_b); independent of the measure.
    pub fn omega_ratio(&self, a: &F::Elem, b: &F::Elem) -> Result<R::Elem, WeilError> {
        let f = self.field();
        if f.is_zero(a) || f.is_zero(b) {
            return Err(BaseError::Zero.into());
        }
        let num = self.omega_1d(a)?;
        let den = self.omega_1d(b)?;
        self.ring.div(&num, &den).ok_or(WeilError::Coeff(CoeffError::NotInvertible))
    }

    /// (a,b)_F read off from Ω₁Ω_{ab}/(Ω_aΩ_b).
    pub fn hilbert_via_omega(&self, a: &F::Elem, b: &F::Elem) -> Result<i8, WeilError> {
        let f = self.field();
        let r = &self.ring;
        let ab = f.mul(a, b);
        let num = r.mul(&self.omega_1d(&f.one())?, &self.omega_1d(&ab)?);
        let den = r.mul(&self.omega_1d(a)?, &self.omega_1d(b)?);
        let q = r.div(&num, &den).ok_or(WeilError::Coeff(CoeffError::NotInvertible))?;
        self.sign_of(&q).ok_or_else(|| WeilError::Mismatch("Weil factor quotient is not ±1".into()))
    }

    fn sign_of(&self, x: &R::Elem) -> Option<i8> {
        if self.ring.is_one(x) {
            Some(1)
        } else if self.ring.is_one(&self.ring.neg(x)) {
            Some(-1)
        } else {
            None
        }
    }

    pub fn sign(&self, s: i8) -> R::Elem {
        if s >= 0 {
            self.ring.one()
        } else {
            self.ring.neg(&self.ring.one())
        }
    }

    /// Ω_μ(ψ∘Q) with μ the standard measure on X_Q (see the module docs).
    pub fn omega(&self, q: &QuadraticForm<F>) -> Result<R::Elem, WeilError> {
        self.omega_with_order(q, PivotOrder::First)
    }

    /// Ω through a diagonalization with the given pivot order:
    /// |det P|·Π Ω(ψ∘Q_{a_i}) with P the diagonal basis in complement
    /// coordinates.
    pub fn omega_with_order(&self, q: &QuadraticForm<F>, order: PivotOrder) -> Result<R::Elem, WeilError> {
        let f = self.field();
        let d = diagonalize_with(f, &q.gram, order);
        let idx = complement_indices(f, &q.gram);
        let p = Mat::from_fn(idx.len(), d.basis.len(), |r, c| d.basis[c][idx[r]].clone());
        let mut acc = if idx.is_empty() { self.ring.one() } else { f.modulus(&self.ring, &linalg::det(f, &p))? };
        for a in &d.entries {
            acc = self.ring.mul(&acc, &self.omega_1d(a)?);
        }
        Ok(acc)
    }

    /// Ω_{λμ} = λ·Ω_μ.
    pub fn omega_scaled(&self, q: &QuadraticForm<F>, lambda: &R::Elem) -> Result<R::Elem, WeilError> {
        Ok(self.ring.mul(lambda, &self.omega(q)?))
    }

    /// Right-hand side of Ω_μ(ψ∘Q) = Ω_{det_B,1}·Ω_μ(ψ∘Q_{Id_B})·h_F(Q),
    /// checked against Ω computed from an independent diagonalization.
    pub fn omega_diag_product(&self, q: &QuadraticForm<F>) -> Result<R::Elem, WeilError> {
        if !q.is_nondegenerate() {
            return Err(WeilError::Degenerate);
        }
        let f = self.field();
        let r = &self.ring;
        let d = q.diagonalization();
        let n = q.dim();
        let p = Mat::from_cols(n, &d.basis);
        let det_b = q.det_nd();
        let om1 = self.omega_1d(&f.one())?;
        let id_b = r.mul(&f.modulus(r, &linalg::det(f, &p))?, &r.pow(&om1, n as u64));
        let ratio = self.omega_ratio(&det_b, &f.one())?;
        let rhs = r.mul(&r.mul(&ratio, &id_b), &self.sign(q.hasse()));
        let lhs = self.omega_with_order(q, PivotOrder::Last)?;
        if lhs != rhs {
            return Err(WeilError::Mismatch("Hasse product formula".into()));
        }
        Ok(rhs)
    }

    /// ε = Ω_{−1,1}^m·(−1, det Q_{½ρ})_F for a symmetric non-degenerate ρ.
    pub fn epsilon(&self, rho: &Mat<F::Elem>) -> Result<R::Elem, WeilError> {
        let f = self.field();
        let m = rho.rows;
        let det = f.mul(&linalg::det(f, rho), &f.pow(&f.half(), m as u64));
        if f.is_zero(&det) {
            return Err(WeilError::Degenerate);
        }
        let om = self.omega_ratio(&f.from_i64(-1), &f.one())?;
        let h = f.hilbert(&f.from_i64(-1), &det)?;
        Ok(self.ring.mul(&self.ring.pow(&om, m as u64), &self.sign(h)))
    }

    /// μ_ρ({0}) relative to the standard measure: Ω(ψ∘Q_{½ρ})^{-1}.
    pub fn normalizing_scalar(&self, rho: &Mat<F::Elem>) -> Result<R::Elem, WeilError> {
        let f = self.field();
        let half = linalg::scale(f, &f.half(), rho);
        let q = QuadraticForm::new(f.clone(), half)?;
        if !q.is_nondegenerate() {
            return Err(WeilError::Degenerate);
        }
        self.ring.inv(&self.omega(&q)?).ok_or(WeilError::Coeff(CoeffError::NotInvertible))
    }
}

/// Indices of the standard vectors spanning the chosen complement of
/// ker(G).
pub fn complement_indices<F: Field>(f: &F, g: &Mat<F::Elem>) -> Vec<usize> {
    let radical = linalg::nullspace(f, g);
    linalg::complete_basis(f, g.rows, &radical)
        .iter()
        .map(|e| e.iter().position(|x| !f.is_zero(x)).expect("standard vector"))
        .collect()
}

impl<R: CoeffRing> WeilFactor<Fq, R> {
    fn psi_values(&self) -> Result<Vec<R::Elem>, WeilError> {
        (0..self.psi.field.q()).map(|x| self.psi.eval(&self.ring, &x).map_err(WeilError::from)).collect()
    }

    /// The defining sum Σ_{x ∈ X_Q} ψ(Q_nd(x)) in complement coordinates.
    pub fn omega_sum(&self, q: &QuadraticForm<Fq>) -> Result<R::Elem, WeilError> {
        let f = self.field();
        let idx = complement_indices(f, &q.gram);
        let psi = self.psi_values()?;
        let n = q.dim();
        let qq = f.q();
        let mut counts = vec![0i64; qq as usize];
        for i in 0..qq.pow(idx.len() as u32) {
            let mut x = vec![0u32; n];
            let mut rest = i;
            for &c in &idx {
                x[c] = rest % qq;
                rest /= qq;
            }
            counts[q.eval(&x) as usize] += 1;
        }
        let mut acc = self.ring.zero();
        for (v, &c) in counts.iter().enumerate() {
            if c != 0 {
                acc = self.ring.add(&acc, &self.ring.mul(&self.ring.from_i64(c), &psi[v]));
            }
        }
        Ok(acc)
    }

    /// Matrix of 𝓕f(x) = μ_ρ({0})·Σ_u ψ(xᵀρu) f(u) on functions on F_q^m.
    pub fn fourier_matrix(&self, rho: &Mat<u32>) -> Result<Mat<R::Elem>, WeilError> {
        let space = FqVecSpace::new(self.field().clone(), rho.rows);
        let mu = self.normalizing_scalar(rho)?;
        let psi = self.psi_values()?;
        let f = self.field();
        let n = space.size();
        let rho_u: Vec<Vec<u32>> = (0..n).map(|u| linalg::mul_vec(f, rho, space.vec(u))).collect();
        Ok(Mat::from_fn(n, n, |x, u| self.ring.mul(&mu, &psi[space.dot(space.vec(x), &rho_u[u]) as usize])))
    }

    /// (f ⋆ g)(x) = μ_ρ({0})·Σ_u f(u) g(x − u).
    pub fn convolve(&self, rho: &Mat<u32>, a: &[R::Elem], b: &[R::Elem]) -> Result<Vec<R::Elem>, WeilError> {
        let space = FqVecSpace::new(self.field().clone(), rho.rows);
        let mu = self.normalizing_scalar(rho)?;
        let r = &self.ring;
        Ok((0..space.size())
            .map(|x| {
                let s = (0..space.size()).fold(r.zero(), |acc, u| r.add(&acc, &r.mul(&a[u], &b[space.sub(x, u)])));
                r.mul(&mu, &s)
            })
            .collect())
    }

    /// x ↦ f(−x).
    pub fn reflect(&self, m: usize, a: &[R::Elem]) -> Vec<R::Elem> {
        let space = FqVecSpace::new(self.field().clone(), m);
        (0..space.size()).map(|x| a[space.neg(x)].clone()).collect()
    }
}

impl<R: CoeffRing> WeilFactor<Qp, R> {
    /// Smallest depth n at which the truncated integral of ψ(a x²) over
    /// p^{-n}Z_p has stabilized.
    pub fn stabilization_depth(&self, a: &num_rational::BigRational) -> i64 {
        let f = self.field();
        let v = f.valuation(&f.mul(&self.psi.twist, a)).unwrap_or(0);
        // the shell |x| = p^n contributes nothing once v − 2n ≤ −2
        crate::util::ceil_div(v, 2)
    }

    /// ∫_{p^{-n}Z_p} ψ(a x²) dx as an exact lattice sum:
    /// p^{v−n}·Σ_{y mod p^L} ζ_{p^L}^{u y²} with L = 2n − v.
    pub fn omega_1d_lattice(&self, a: &num_rational::BigRational, n: i64) -> Result<R::Elem, WeilError> {
        use num_traits::ToPrimitive;
        let f = self.field();
        let a2 = f.mul(&self.psi.twist, a);
        let (v, u) = f.split(&a2).ok_or(BaseError::Zero)?;
        let l = 2 * n - v;
        if l <= 0 {
            // ψ(a x²) is trivial on p^{-n}Z_p
            return self.p_power(n);
        }
        let p = f.p();
        let pl = p.checked_pow(l as u32).filter(|x| *x <= 50_000_000).ok_or_else(|| WeilError::Unsupported("lattice too large".into()))?;
        let plb = num_bigint::BigInt::from(pl);
        use num_integer::Integer;
        let un = u.numer().mod_floor(&plb);
        let ud = u.denom().mod_floor(&plb);
        let ui = crate::basefield::mod_inverse_big(&ud, &plb);
        let uu = (un * ui).mod_floor(&plb).to_u64().unwrap() as u128;
        let mut hist = vec![0i64; pl as usize];
        for y in 0..pl as u128 {
            hist[((uu * ((y * y) % pl as u128)) % pl as u128) as usize] += 1;
        }
        let s = self.ring.from_zeta_histogram(l as u32, &hist)?;
        Ok(self.ring.mul(&self.p_power(v - n)?, &s))
    }
}
