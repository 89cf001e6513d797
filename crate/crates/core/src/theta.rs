//! Type-I dual pairs (O(V), Sp(W')) inside Sp(V ⊗ W') over F_q, the
//! restriction of the Weil representation, isotypic theta lifts, central
//! idempotents of group algebras and reduction modulo a banal prime ℓ.
//!
//! Coordinates on W = V ⊗ W': X = V ⊗ X' with basis e_a ⊗ e_i at index
//! a·m' + i, and Y = V ⊗ Y' with the G-dual basis e*_a ⊗ f_i, so the form
//! ⟨v⊗w, v'⊗w'⟩ = vᵀGv'·⟨w, w'⟩ is the standard one. Then h ∈ O(V) maps to
//! diag(h ⊗ I, h^{-T} ⊗ I) and g' = [[A, B], [C, D]] to
//! [[I ⊗ A, G^{-1} ⊗ B], [G ⊗ C, I ⊗ D]].

use std::collections::HashMap;

use thiserror::Error;

use crate::basefield::{BaseError, Fq};
use crate::coeff::{CoeffError, CoeffRing, Cyc, CycField, Field, FinField, ReductionMap};
use crate::linalg::{self, Mat};
use crate::metaplectic::{all_sl2, is_symplectic, FiniteWeil, MetaError};
use crate::operator::{commutant_dim_dense, hom_space_dense};
use crate::quadratic::QuadraticForm;

/// Largest group order enumerated.
pub const MAX_GROUP: usize = 10_000;
/// Largest Schrödinger model dimension.
pub const MAX_MODEL: usize = 81;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Meta(#[from] MetaError),
    #[error("quadratic space is degenerate")]
    Degenerate,
    #[error("size bound exceeded: {0}")]
    TooLarge(String),
    #[error("ℓ = {ell} divides the group order {order}")]
    NonBanal { ell: u64, order: usize },
    #[error("check failed: {0}")]
    Mismatch(String),
}

// ---------------------------------------------------------------- groups

/// A finite group given by its multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    pub identity: usize,
}

impl FiniteGroup {
    /// The group formed by a list of matrices; fails unless the list is
    /// closed under products.
    pub fn from_matrices(f: &Fq, elems: &[Mat<u32>]) -> Result<Self, ThetaError> {
        let index: HashMap<&[u32], usize> = elems.iter().enumerate().map(|(i, g)| (g.data.as_slice(), i)).collect();
        let n = elems.len();
        let mut mul = vec![vec![0; n]; n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let ab = linalg::mul(f, a, b);
                mul[i][j] = *index.get(ab.data.as_slice()).ok_or_else(|| ThetaError::Mismatch("element list is not closed".into()))?;
            }
        }
        Self::from_table(mul)
    }

    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Self, ThetaError> {
        let n = mul.len();
        let identity = (0..n).find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x)).ok_or_else(|| ThetaError::Mismatch("no identity".into()))?;
        let inv = (0..n)
            .map(|x| (0..n).find(|&y| mul[x][y] == identity).ok_or_else(|| ThetaError::Mismatch("element without inverse".into())))
            .collect::<Result<_, _>>()?;
        Ok(FiniteGroup { mul, inv, identity })
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    /// A × B with (a, b) at index a·|B| + b.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, ThetaError> {
        let (na, nb) = (a.order(), b.order());
        if na * nb > MAX_GROUP {
            return Err(ThetaError::TooLarge(format!("group order {}", na * nb)));
        }
        let mul = (0..na * nb)
            .map(|x| (0..na * nb).map(|y| a.mul[x / nb][y / nb] * nb + b.mul[x % nb][y % nb]).collect())
            .collect();
        Self::from_table(mul)
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul[x][g];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// A generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut seen = self.closure(&gens);
        for x in 0..self.order() {
            if !seen[x] {
                gens.push(x);
                seen = self.closure(&gens);
            }
        }
        gens
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|g| self.mul[self.mul[g][x]][self.inv[g]]).collect();
            cls.sort_unstable();
            cls.dedup();
            for &y in &cls {
                class_of[y] = classes.len();
            }
            classes.push(cls);
        }
        classes
    }
}

// ---------------------------------------------------------------- representations

/// A representation given by one matrix per group element.
#[derive(Clone, Debug)]
pub struct FiniteRep<R: CoeffRing> {
    pub ring: R,
    pub dim: usize,
    pub mats: Vec<Mat<R::Elem>>,
}

impl<R: CoeffRing> FiniteRep<R> {
    pub fn character(&self) -> Vec<R::Elem> {
        self.mats.iter().map(|m| linalg::trace(&self.ring, m)).collect()
    }

    pub fn is_homomorphism(&self, g: &FiniteGroup) -> bool {
        let r = &self.ring;
        (0..g.order()).all(|x| (0..g.order()).all(|y| linalg::mul(r, &self.mats[x], &self.mats[y]) == self.mats[g.mul[x][y]]))
    }

    /// Irreducibility: ⟨χ, χ⟩ = 1 in characteristic 0, a one-dimensional
    /// commutant otherwise.
    pub fn is_irreducible(&self, g: &FiniteGroup) -> bool {
        if self.dim == 0 {
            return false;
        }
        if self.ring.characteristic() == 0 {
            let chi = self.character();
            inner_product(&self.ring, g, &chi, &chi) == Some(self.ring.one())
        } else {
            let gens: Vec<Mat<R::Elem>> = g.generators().iter().map(|&x| self.mats[x].clone()).collect();
            let gens = if gens.is_empty() { vec![linalg::identity(&self.ring, self.dim)] } else { gens };
            commutant_dim_dense(&self.ring, &gens) == 1
        }
    }

    /// Σ_g c_g·ρ(g) for a group-algebra element.
    pub fn act(&self, e: &GroupAlgebraElement<R::Elem>) -> Mat<R::Elem> {
        let r = &self.ring;
        let mut acc = linalg::zeros(r, self.dim, self.dim);
        for (c, m) in e.coeffs.iter().zip(&self.mats) {
            if !r.is_zero(c) {
                acc = linalg::add(r, &acc, &linalg::scale(r, c, m));
            }
        }
        acc
    }
}

/// ⟨χ, χ'⟩ = |G|^{-1} Σ_g χ(g) χ'(g^{-1}); `None` if |G| is not invertible.
pub fn inner_product<R: CoeffRing>(r: &R, g: &FiniteGroup, a: &[R::Elem], b: &[R::Elem]) -> Option<R::Elem> {
    let s = (0..g.order()).fold(r.zero(), |acc, x| r.add(&acc, &r.mul(&a[x], &b[g.inv[x]])));
    r.div(&s, &r.from_i64(g.order() as i64))
}

/// The ±1-valued characters of a finite group, trivial first.
pub fn sign_characters<R: CoeffRing>(r: &R, g: &FiniteGroup) -> Vec<FiniteRep<R>> {
    let gens = g.generators();
    let mut out: Vec<Vec<i8>> = Vec::new();
    'assign: for mask in 0u64..(1 << gens.len()) {
        let mut val = vec![0i8; g.order()];
        val[g.identity] = 1;
        let mut stack = vec![g.identity];
        while let Some(x) = stack.pop() {
            for (k, &s) in gens.iter().enumerate() {
                let sign = if mask >> k & 1 == 1 { -1 } else { 1 };
                let y = g.mul[x][s];
                let v = val[x] * sign;
                if val[y] == 0 {
                    val[y] = v;
                    stack.push(y);
                } else if val[y] != v {
                    continue 'assign;
                }
            }
        }
        out.push(val);
    }
    out.into_iter()
        .map(|v| FiniteRep { ring: r.clone(), dim: 1, mats: v.iter().map(|&s| Mat::from_rows(vec![vec![r.from_i64(s as i64)]])).collect() })
        .collect()
}

// ---------------------------------------------------------------- group algebra

#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraElement<E> {
    pub coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> GroupAlgebraElement<E> {
    pub fn mul<R: CoeffRing<Elem = E>>(&self, r: &R, g: &FiniteGroup, o: &Self) -> Self {
        let mut out = vec![r.zero(); g.order()];
        for (x, a) in self.coeffs.iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (y, b) in o.coeffs.iter().enumerate() {
                if !r.is_zero(b) {
                    let z = g.mul[x][y];
                    out[z] = r.add(&out[z], &r.mul(a, b));
                }
            }
        }
        GroupAlgebraElement { coeffs: out }
    }

    pub fn basis<R: CoeffRing<Elem = E>>(r: &R, g: &FiniteGroup, x: usize) -> Self {
        let mut coeffs = vec![r.zero(); g.order()];
        coeffs[x] = r.one();
        GroupAlgebraElement { coeffs }
    }

    pub fn one<R: CoeffRing<Elem = E>>(r: &R, g: &FiniteGroup) -> Self {
        Self::basis(r, g, g.identity)
    }

    pub fn add<R: CoeffRing<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        GroupAlgebraElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| r.add(a, b)).collect() }
    }

    pub fn is_zero<R: CoeffRing<Elem = E>>(&self, r: &R) -> bool {
        self.coeffs.iter().all(|c| r.is_zero(c))
    }

    pub fn is_idempotent<R: CoeffRing<Elem = E>>(&self, r: &R, g: &FiniteGroup) -> bool {
        &self.mul(r, g, self) == self
    }

    pub fn is_central<R: CoeffRing<Elem = E>>(&self, r: &R, g: &FiniteGroup) -> bool {
        (0..g.order()).all(|x| {
            let b = Self::basis(r, g, x);
            b.mul(r, g, self) == self.mul(r, g, &b)
        })
    }
}

/// e_Π = (dim Π/|G|)·Σ_g χ_Π(g^{-1})·g. Refuses ℓ | |G|.
pub fn central_idempotent<R: CoeffRing>(rep: &FiniteRep<R>, g: &FiniteGroup) -> Result<GroupAlgebraElement<R::Elem>, ThetaError> {
    let r = &rep.ring;
    let ell = r.characteristic();
    if ell != 0 && g.order() as u64 % ell == 0 {
        return Err(ThetaError::NonBanal { ell, order: g.order() });
    }
    let c = r.div(&r.from_i64(rep.dim as i64), &r.from_i64(g.order() as i64)).ok_or(ThetaError::Coeff(CoeffError::NotInvertible))?;
    let chi = rep.character();
    Ok(GroupAlgebraElement { coeffs: (0..g.order()).map(|x| r.mul(&c, &chi[g.inv[x]])).collect() })
}

// ---------------------------------------------------------------- dual pairs

#[derive(Clone, Debug)]
pub struct DualPair {
    pub field: Fq,
    pub v: QuadraticForm<Fq>,
    pub mprime: usize,
    /// O(V) as matrices on V.
    pub h1: Vec<Mat<u32>>,
    /// Sp(W') as matrices on W'.
    pub h2: Vec<Mat<u32>>,
    pub h1_images: Vec<Mat<u32>>,
    pub h2_images: Vec<Mat<u32>>,
    pub h1_group: FiniteGroup,
    pub h2_group: FiniteGroup,
}

impl DualPair {
    /// m = dim V · m', the rank of the ambient symplectic group.
    pub fn m(&self) -> usize {
        self.v.dim() * self.mprime
    }

    pub fn group(&self) -> Result<FiniteGroup, ThetaError> {
        FiniteGroup::product(&self.h1_group, &self.h2_group)
    }

    /// Index of (h1, h2) in `group()`.
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        i * self.h2.len() + j
    }
}

fn all_matrices(f: &Fq, n: usize) -> Vec<Mat<u32>> {
    let q = f.q() as usize;
    let total = q.pow((n * n) as u32);
    (0..total)
        .map(|mut k| {
            Mat::from_fn(n, n, |_, _| {
                let v = (k % q) as u32;
                k /= q;
                v
            })
        })
        .collect()
}

fn embed_o(f: &Fq, gram: &Mat<u32>, gram_inv: &Mat<u32>, h: &Mat<u32>, mp: usize) -> Mat<u32> {
    let id = linalg::identity(f, mp);
    let top = linalg::kron(f, h, &id);
    // h^{-T} = G h G^{-1} on the dual coordinates
    let bottom = linalg::kron(f, &linalg::mul(f, &linalg::mul(f, gram, h), gram_inv), &id);
    let n = top.rows;
    Mat::blocks(&top, &linalg::zeros(f, n, n), &linalg::zeros(f, n, n), &bottom)
}

fn embed_sp(f: &Fq, gram: &Mat<u32>, gram_inv: &Mat<u32>, g: &Mat<u32>) -> Mat<u32> {
    let mp = g.rows / 2;
    let (a, b, c, d) = (g.block(0, 0, mp, mp), g.block(0, mp, mp, mp), g.block(mp, 0, mp, mp), g.block(mp, mp, mp, mp));
    let id = linalg::identity(f, gram.rows);
    Mat::blocks(&linalg::kron(f, &id, &a), &linalg::kron(f, gram_inv, &b), &linalg::kron(f, gram, &c), &linalg::kron(f, &id, &d))
}

/// Enumerate O(V) and Sp(W'), embed both into Sp(V ⊗ W') and verify that
/// the images are symplectic and commute pairwise.
pub fn build_dual_pair(v: &QuadraticForm<Fq>, mprime: usize) -> Result<DualPair, ThetaError> {
    let f = v.field.clone();
    if !v.is_nondegenerate() {
        return Err(ThetaError::Degenerate);
    }
    let n = v.dim();
    if n * 2 * mprime > 4 || mprime == 0 {
        return Err(ThetaError::TooLarge(format!("dim V · 2m' = {} exceeds 4", n * 2 * mprime)));
    }
    let q = f.q() as usize;
    if q.checked_pow((n * mprime) as u32).map_or(true, |d| d > MAX_MODEL) {
        return Err(ThetaError::TooLarge("model dimension".into()));
    }
    let h2 = match mprime {
        1 => all_sl2(&f),
        _ => return Err(ThetaError::TooLarge("Sp(W') with m' ≥ 2 exceeds the group bound".into())),
    };
    let gram = v.gram.clone();
    let gram_inv = linalg::inverse(&f, &gram).ok_or(ThetaError::Degenerate)?;
    let h1: Vec<Mat<u32>> = all_matrices(&f, n).into_iter().filter(|h| linalg::mul(&f, &linalg::mul(&f, &h.transpose(), &gram), h) == gram).collect();
    if h1.len() * h2.len() > MAX_GROUP {
        return Err(ThetaError::TooLarge(format!("group order {}", h1.len() * h2.len())));
    }
    let h1_images: Vec<Mat<u32>> = h1.iter().map(|h| embed_o(&f, &gram, &gram_inv, h, mprime)).collect();
    let h2_images: Vec<Mat<u32>> = h2.iter().map(|g| embed_sp(&f, &gram, &gram_inv, g)).collect();
    if !h1_images.iter().chain(&h2_images).all(|g| is_symplectic(&f, g)) {
        return Err(ThetaError::Mismatch("embedded element is not symplectic".into()));
    }
    for a in &h1_images {
        for b in &h2_images {
            if linalg::mul(&f, a, b) != linalg::mul(&f, b, a) {
                return Err(ThetaError::Mismatch("images do not commute".into()));
            }
        }
    }
    let h1_group = FiniteGroup::from_matrices(&f, &h1)?;
    let h2_group = FiniteGroup::from_matrices(&f, &h2)?;
    Ok(DualPair { field: f, v: v.clone(), mprime, h1, h2, h1_images, h2_images, h1_group, h2_group })
}

/// Weil operators restricted to the pair: ω(h1, h2) = I_{h1}·σ(h2), where
/// h1 ∈ O(V) acts linearly through I_{h1} (no Weil-factor normalization).
pub struct RestrictedWeil<R: CoeffRing> {
    pub h1: FiniteRep<R>,
    pub h2: FiniteRep<R>,
}

impl<R: CoeffRing> RestrictedWeil<R> {
    pub fn new(pair: &DualPair, weil: &FiniteWeil<R>) -> Result<Self, ThetaError> {
        if weil.m() != pair.m() || weil.field() != &pair.field {
            return Err(ThetaError::Mismatch("Weil model does not match the pair".into()));
        }
        let r = weil.ring().clone();
        let dim = weil.dim();
        let h1 = pair.h1_images.iter().map(|g| Ok(weil.i_p(g)?.to_dense(&r))).collect::<Result<Vec<_>, MetaError>>()?;
        let h2 = pair.h2_images.iter().map(|g| weil.sigma(g)).collect::<Result<Vec<_>, MetaError>>()?;
        Ok(RestrictedWeil { h1: FiniteRep { ring: r.clone(), dim, mats: h1 }, h2: FiniteRep { ring: r, dim, mats: h2 } })
    }

    /// The representation of H1 × H2.
    pub fn joint(&self, pair: &DualPair) -> FiniteRep<R> {
        let r = &self.h1.ring;
        let n2 = pair.h2.len();
        let mats = (0..pair.h1.len() * n2).map(|x| linalg::mul(r, &self.h1.mats[x / n2], &self.h2.mats[x % n2])).collect();
        FiniteRep { ring: r.clone(), dim: self.h1.dim, mats }
    }
}

/// Θ(π₁) on Hom_{H₁}(π₁, ω) with H₂ acting by composition.
#[derive(Clone, Debug)]
pub struct ThetaLift<R: CoeffRing> {
    pub rep: FiniteRep<R>,
    /// Basis of Hom_{H₁}(π₁, ω) as dim ω × dim π₁ matrices.
    pub hom_basis: Vec<Mat<R::Elem>>,
}

/// Coordinates of each flattened matrix in the span of `basis`.
fn coordinates<R: CoeffRing>(r: &R, basis: &[Mat<R::Elem>], targets: &[Mat<R::Elem>]) -> Result<Vec<Vec<R::Elem>>, ThetaError> {
    let k = basis.len();
    if k == 0 {
        return Ok(targets.iter().map(|_| Vec::new()).collect());
    }
    let len = basis[0].data.len();
    let bm = Mat::from_fn(len, k, |i, j| basis[j].data[i].clone());
    let (_, rows) = linalg::rref(r, &bm.transpose());
    let sub = Mat::from_fn(k, k, |i, j| bm.get(rows[i], j).clone());
    let inv = linalg::inverse(r, &sub).ok_or_else(|| ThetaError::Mismatch("dependent basis".into()))?;
    targets
        .iter()
        .map(|t| {
            let rhs: Vec<R::Elem> = rows.iter().map(|&i| t.data[i].clone()).collect();
            let c = linalg::mul_vec(r, &inv, &rhs);
            let back = (0..len).map(|i| (0..k).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&c[j], &basis[j].data[i]))));
            if back.zip(&t.data).all(|(a, b)| &a == b) {
                Ok(c)
            } else {
                Err(ThetaError::Mismatch("H₂ does not preserve the multiplicity space".into()))
            }
        })
        .collect()
}

pub fn theta_lift<R: CoeffRing>(omega: &RestrictedWeil<R>, pi1: &FiniteRep<R>) -> Result<ThetaLift<R>, ThetaError> {
    let r = &omega.h1.ring;
    let pairs: Vec<_> = pi1.mats.iter().zip(&omega.h1.mats).map(|(a, b)| (a.clone(), b.clone())).collect();
    let hom_basis = hom_space_dense(r, &pairs);
    let k = hom_basis.len();
    let mut mats = Vec::with_capacity(omega.h2.mats.len());
    for g in &omega.h2.mats {
        let images: Vec<Mat<R::Elem>> = hom_basis.iter().map(|t| linalg::mul(r, g, t)).collect();
        let cols = coordinates(r, &hom_basis, &images)?;
        mats.push(Mat::from_fn(k, k, |i, j| cols[j][i].clone()));
    }
    Ok(ThetaLift { rep: FiniteRep { ring: r.clone(), dim: k, mats }, hom_basis })
}

/// Checks ω_{π₁} ≅ π₁ ⊗ Θ(π₁): the trace of ω(h1, h2) on the image of the
/// H₁-idempotent e_{π₁} equals χ_{π₁}(h1)·χ_Θ(h2) for every pair.
pub fn isotypic_bookkeeping<R: CoeffRing>(pair: &DualPair, omega: &RestrictedWeil<R>, pi1: &FiniteRep<R>, lift: &ThetaLift<R>) -> Result<bool, ThetaError> {
    let r = &omega.h1.ring;
    let e = central_idempotent(pi1, &pair.h1_group)?;
    let proj = omega.h1.act(&e);
    let chi1 = pi1.character();
    let chit = lift.rep.character();
    let joint = omega.joint(pair);
    for i in 0..pair.h1.len() {
        for j in 0..pair.h2.len() {
            let t = linalg::trace(r, &linalg::mul(r, &joint.mats[pair.pair_index(i, j)], &proj));
            if t != r.mul(&chi1[i], &chit[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One row of the lift table.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftRow {
    pub label: String,
    pub dim_pi: usize,
    pub dim_theta: usize,
    pub irreducible: bool,
    pub bookkeeping: bool,
}

/// The characters of H₁ with labels: `trivial`, `sign` for det, and
/// `chi<k>` for the others.
pub fn labelled_characters<R: CoeffRing>(r: &R, pair: &DualPair) -> Vec<(String, FiniteRep<R>)> {
    let f = &pair.field;
    let det: Vec<R::Elem> = pair.h1.iter().map(|h| if linalg::det(f, h) == f.one() { r.one() } else { r.from_i64(-1) }).collect();
    sign_characters(r, &pair.h1_group)
        .into_iter()
        .enumerate()
        .map(|(k, rep)| {
            let chi = rep.character();
            let label = if chi.iter().all(|x| *x == r.one()) {
                "trivial".to_string()
            } else if chi == det {
                "sign".to_string()
            } else {
                format!("chi{k}")
            };
            (label, rep)
        })
        .collect()
}

pub fn lift_table<R: CoeffRing>(pair: &DualPair, omega: &RestrictedWeil<R>) -> Result<Vec<LiftRow>, ThetaError> {
    labelled_characters(&omega.h1.ring, pair)
        .into_iter()
        .map(|(label, pi)| {
            let lift = theta_lift(omega, &pi)?;
            let irreducible = lift.rep.is_irreducible(&pair.h2_group);
            let bookkeeping = isotypic_bookkeeping(pair, omega, &pi, &lift)?;
            Ok(LiftRow { label, dim_pi: pi.dim, dim_theta: lift.rep.dim, irreducible, bookkeeping })
        })
        .collect()
}

// ---------------------------------------------------------------- Weil representation of Sp₂

/// The Sp₂(F_q) Weil representation split by parity: χ_± is the character
/// on the ±1-eigenspace of φ ↦ φ(−·).
#[derive(Clone, Debug)]
pub struct WeilDecomposition<R: CoeffRing> {
    pub group: FiniteGroup,
    pub chi: Vec<R::Elem>,
    pub chi_even: Vec<R::Elem>,
    pub chi_odd: Vec<R::Elem>,
}

impl<R: CoeffRing> WeilDecomposition<R> {
    pub fn new(weil: &FiniteWeil<R>) -> Result<Self, ThetaError> {
        if weil.m() != 1 {
            return Err(ThetaError::TooLarge("only Sp₂ is enumerated".into()));
        }
        let f = weil.field();
        let r = weil.ring();
        let elems = all_sl2(f);
        let group = FiniteGroup::from_matrices(f, &elems)?;
        let minus = linalg::scale(f, &f.neg(&f.one()), &linalg::identity(f, 2));
        let parity = weil.i_p(&minus)?.to_dense(r);
        let half = r.inv(&r.from_i64(2)).ok_or(ThetaError::Coeff(CoeffError::NotInvertible))?;
        let mut chi = Vec::new();
        let mut chi_even = Vec::new();
        let mut chi_odd = Vec::new();
        for g in &elems {
            let s = weil.sigma(g)?;
            let t = linalg::trace(r, &s);
            let tp = linalg::trace(r, &linalg::mul(r, &s, &parity));
            chi_even.push(r.mul(&half, &r.add(&t, &tp)));
            chi_odd.push(r.mul(&half, &r.sub(&t, &tp)));
            chi.push(t);
        }
        Ok(WeilDecomposition { group, chi, chi_even, chi_odd })
    }

    pub fn identity_index(&self) -> usize {
        self.group.identity
    }
}

// ---------------------------------------------------------------- reduction mod ℓ

/// Reduction of a cyclotomic matrix entry-wise.
pub fn reduce_mat(map: &ReductionMap, m: &Mat<Cyc>) -> Result<Mat<u32>, ThetaError> {
    let data = m.data.iter().map(|x| map.reduce(x)).collect::<Result<_, _>>()?;
    Ok(Mat { rows: m.rows, cols: m.cols, data })
}

/// Per-character comparison of the characteristic-0 and mod-ℓ theta lifts.
#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceRow {
    pub label: String,
    pub dim_char0: usize,
    pub dim_mod_ell: usize,
    pub irreducible_char0: bool,
    pub irreducible_mod_ell: bool,
    /// r_ℓ(e_{Π₁}) = e_{π₁} in the group algebra of H₁.
    pub idempotent_h1: bool,
    /// r_ℓ(e_Π) = e_π for Π = Π₁ ⊗ Θ(Π₁) in the group algebra of H₁ × H₂.
    pub idempotent_joint: bool,
    /// r_ℓ(e_{Π₁}·ω) = e_{π₁}·ω_ℓ entry-wise.
    pub projector: bool,
    /// Characteristic polynomials of r_ℓ(Θ(Π₁))(g) and Θ(π₁)(g) agree for
    /// every g, hence so do the Brauer characters.
    pub brauer: bool,
}

#[derive(Clone, Debug)]
pub struct CongruenceReport {
    pub ell: u64,
    pub group_order: usize,
    /// r_ℓ(σ(g)) = σ_ℓ(g) for all g in both images.
    pub weil_reduces: bool,
    pub rows: Vec<CongruenceRow>,
}

impl CongruenceReport {
    pub fn all_pass(&self) -> bool {
        self.weil_reduces
            && self.rows.iter().all(|r| {
                r.dim_char0 == r.dim_mod_ell
                    && r.idempotent_h1
                    && r.idempotent_joint
                    && r.projector
                    && r.brauer
                    && (!r.irreducible_char0 || r.irreducible_mod_ell)
            })
    }
}

fn joint_rep<R: CoeffRing>(pair: &DualPair, pi1: &FiniteRep<R>, lift: &ThetaLift<R>) -> FiniteRep<R> {
    let r = &pi1.ring;
    let n2 = pair.h2.len();
    let mats = (0..pair.h1.len() * n2).map(|x| linalg::kron(r, &pi1.mats[x / n2], &lift.rep.mats[x % n2])).collect();
    FiniteRep { ring: r.clone(), dim: pi1.dim * lift.rep.dim, mats }
}

pub fn congruence_check(pair: &DualPair, char0: &FiniteWeil<CycField>, modl: &FiniteWeil<FinField>) -> Result<CongruenceReport, ThetaError> {
    let target = modl.ring().clone();
    let ell = target.ell();
    let g = pair.group()?;
    if g.order() as u64 % ell == 0 {
        return Err(ThetaError::NonBanal { ell, order: g.order() });
    }
    let map = ReductionMap::new(char0.ring().clone(), target.clone())?;
    let w0 = RestrictedWeil::new(pair, char0)?;
    let wl = RestrictedWeil::new(pair, modl)?;
    let mut weil_reduces = true;
    for (a, b) in w0.h1.mats.iter().zip(&wl.h1.mats).chain(w0.h2.mats.iter().zip(&wl.h2.mats)) {
        weil_reduces &= &reduce_mat(&map, a)? == b;
    }
    let chars0 = labelled_characters(char0.ring(), pair);
    let charsl = labelled_characters(&target, pair);
    let mut rows = Vec::new();
    for ((label, pi0), (_, pil)) in chars0.iter().zip(&charsl) {
        let lift0 = theta_lift(&w0, pi0)?;
        let liftl = theta_lift(&wl, pil)?;
        let e0 = central_idempotent(pi0, &pair.h1_group)?;
        let el = central_idempotent(pil, &pair.h1_group)?;
        let red = |e: &GroupAlgebraElement<Cyc>| -> Result<Vec<u32>, ThetaError> { Ok(e.coeffs.iter().map(|c| map.reduce(c)).collect::<Result<_, _>>()?) };
        let idempotent_h1 = red(&e0)? == el.coeffs;
        let projector = reduce_mat(&map, &w0.h1.act(&e0))? == wl.h1.act(&el);
        let idempotent_joint = if lift0.rep.dim == 0 || liftl.rep.dim == 0 {
            lift0.rep.dim == liftl.rep.dim
        } else {
            let ej0 = central_idempotent(&joint_rep(pair, pi0, &lift0), &g)?;
            let ejl = central_idempotent(&joint_rep(pair, pil, &liftl), &g)?;
            red(&ej0)? == ejl.coeffs
        };
        let mut brauer = lift0.rep.dim == liftl.rep.dim;
        if brauer {
            for (a, b) in lift0.rep.mats.iter().zip(&liftl.rep.mats) {
                let p0: Vec<u32> = linalg::charpoly(char0.ring(), a).iter().map(|c| map.reduce(c)).collect::<Result<_, _>>()?;
                if p0 != linalg::charpoly(&target, b) {
                    brauer = false;
                    break;
                }
            }
        }
        rows.push(CongruenceRow {
            label: label.clone(),
            dim_char0: lift0.rep.dim,
            dim_mod_ell: liftl.rep.dim,
            irreducible_char0: lift0.rep.is_irreducible(&pair.h2_group),
            irreducible_mod_ell: liftl.rep.is_irreducible(&pair.h2_group),
            idempotent_h1,
            idempotent_joint,
            projector,
            brauer,
        });
    }
    Ok(CongruenceReport { ell, group_order: g.order(), weil_reduces, rows })
}
