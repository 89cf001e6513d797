//! Step functions with quadratic and linear phases on Q_p^m,
//!
//!   f(y) = Σ c·ψ((y−a)ᵀG(y−a) + λ·(y−a))·1_{a + p^n Z_p^m}(y),
//!
//! and the action of the Heisenberg group and of σ on them in the X-model
//! (functions on Y). Measures give Z_p volume 1; ψ must have a unit twist so
//! that it is trivial exactly on Z_p.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::basefield::{BaseError, BaseField, Psi, Qp};
use crate::coeff::{CoeffError, CoeffRing};
use crate::heisenberg::HeisenbergElement;
use crate::linalg::{self, Mat};
use crate::metaplectic::{bruhat_decompose, det_x, is_parabolic, split_blocks, x_det, MetaError};
use crate::weilfactor::{WeilError, WeilFactor};

/// Upper bound on the number of terms produced by refinement.
pub const MAX_TERMS: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchwartzError {
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Meta(#[from] MetaError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dimension mismatch")]
    Dimension,
    #[error("refinement exceeds {MAX_TERMS} terms")]
    TooLarge,
    #[error("functions are not proportional")]
    NotProportional,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term<E> {
    pub coeff: E,
    pub center: Vec<BigRational>,
    pub depth: i64,
    /// Symmetric Gram matrix G of the quadratic phase.
    pub quad: Mat<BigRational>,
    pub lin: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseStepFunction<E> {
    pub m: usize,
    pub terms: Vec<Term<E>>,
}

impl<E: Clone> PhaseStepFunction<E> {
    pub fn zero(m: usize) -> Self {
        PhaseStepFunction { m, terms: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

// a term whose support is a box Π (a_i + p^{d_i} Z_p)
#[derive(Clone, Debug)]
struct Cell<E> {
    coeff: E,
    center: Vec<BigRational>,
    depths: Vec<i64>,
    quad: Mat<BigRational>,
    lin: Vec<BigRational>,
}

fn rz() -> BigRational {
    BigRational::zero()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(rz(), |acc, (x, y)| acc + x * y)
}

fn quad_form(g: &Mat<BigRational>, z: &[BigRational]) -> BigRational {
    let gz = linalg::mul_vec(&QP_ARITH, g, z);
    dot(z, &gz)
}

// field arithmetic on rationals that needs no prime
static QP_ARITH: RatArith = RatArith;

#[derive(Clone, Debug)]
struct RatArith;

impl crate::coeff::Field for RatArith {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        rz()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

fn cmp_vec(a: &[BigRational], b: &[BigRational]) -> Ordering {
    a.iter().cmp(b.iter())
}

/// Function spaces on Y = Q_p^m with a fixed ψ and coefficient field.
#[derive(Clone, Debug)]
pub struct PadicSchrodinger<R: CoeffRing> {
    pub field: Qp,
    pub psi: Psi<Qp>,
    pub ring: R,
    pub m: usize,
    weil: WeilFactor<Qp, R>,
}

impl<R: CoeffRing> PadicSchrodinger<R> {
    pub fn new(psi: Psi<Qp>, ring: R, m: usize) -> Result<Self, SchwartzError> {
        let field = psi.field.clone();
        if field.valuation(&psi.twist) != Some(0) {
            return Err(SchwartzError::Unsupported("ψ twist must be a p-adic unit".into()));
        }
        if ring.root_prime() != field.p() {
            return Err(SchwartzError::Unsupported("coefficient ring lacks p-power roots of unity".into()));
        }
        let weil = WeilFactor::new(psi.clone(), ring.clone());
        Ok(PadicSchrodinger { field, psi, ring, m, weil })
    }

    pub fn weil(&self) -> &WeilFactor<Qp, R> {
        &self.weil
    }

    fn p(&self) -> u64 {
        self.field.p()
    }

    fn psi_of(&self, x: &BigRational) -> Result<R::Elem, SchwartzError> {
        Ok(self.psi.eval(&self.ring, x)?)
    }

    fn pow_p(&self, e: i64) -> BigRational {
        self.field.pow_p(e)
    }

    fn p_power(&self, e: i64) -> Result<R::Elem, SchwartzError> {
        let p = self.ring.from_i64(self.p() as i64);
        self.ring.powi(&p, e).ok_or(SchwartzError::Coeff(CoeffError::NotInvertible))
    }

    /// v(x) ≥ n, with v(0) = ∞.
    fn in_lattice(&self, x: &BigRational, n: i64) -> bool {
        self.field.valuation(x).map_or(true, |v| v >= n)
    }

    /// The representative of x + p^n Z_p of the form p^n·b/p^k, 0 ≤ b < p^k.
    pub fn reduce_mod(&self, x: &BigRational, n: i64) -> BigRational {
        let scaled = x * self.pow_p(-n);
        let (b, k) = self.field.frac_part(&scaled);
        BigRational::new(b, num_traits::pow(BigInt::from(self.p()), k as usize)) * self.pow_p(n)
    }

    /// c·1_{a + p^n Z_p^m}.
    pub fn indicator(&self, c: R::Elem, center: Vec<BigRational>, depth: i64) -> PhaseStepFunction<R::Elem> {
        let m = center.len();
        PhaseStepFunction { m, terms: vec![Term { coeff: c, center, depth, quad: linalg::zeros(&QP_ARITH, m, m), lin: vec![rz(); m] }] }
    }

    /// 1_{Z_p^m}.
    pub fn unit_indicator(&self) -> PhaseStepFunction<R::Elem> {
        self.indicator(self.ring.one(), vec![rz(); self.m], 0)
    }

    pub fn eval(&self, f: &PhaseStepFunction<R::Elem>, y: &[BigRational]) -> Result<R::Elem, SchwartzError> {
        if y.len() != f.m {
            return Err(SchwartzError::Dimension);
        }
        let r = &self.ring;
        let mut acc = r.zero();
        for t in &f.terms {
            let z: Vec<BigRational> = y.iter().zip(&t.center).map(|(a, b)| a - b).collect();
            if z.iter().all(|x| self.in_lattice(x, t.depth)) {
                let ph = quad_form(&t.quad, &z) + dot(&t.lin, &z);
                acc = r.add(&acc, &r.mul(&t.coeff, &self.psi_of(&ph)?));
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &R::Elem, f: &PhaseStepFunction<R::Elem>) -> PhaseStepFunction<R::Elem> {
        let terms = f.terms.iter().map(|t| Term { coeff: self.ring.mul(c, &t.coeff), ..t.clone() }).collect();
        PhaseStepFunction { m: f.m, terms }
    }

    pub fn add(&self, f: &PhaseStepFunction<R::Elem>, g: &PhaseStepFunction<R::Elem>) -> Result<PhaseStepFunction<R::Elem>, SchwartzError> {
        if f.m != g.m {
            return Err(SchwartzError::Dimension);
        }
        let mut terms = f.terms.clone();
        terms.extend(g.terms.iter().cloned());
        Ok(PhaseStepFunction { m: f.m, terms })
    }

    // ------------------------------------------------------------ cells

    fn to_cell(t: &Term<R::Elem>) -> Cell<R::Elem> {
        Cell { coeff: t.coeff.clone(), center: t.center.clone(), depths: vec![t.depth; t.center.len()], quad: t.quad.clone(), lin: t.lin.clone() }
    }

    /// Move the expansion point of a cell's phase to `c`, inside the same box.
    fn recenter(&self, cell: &Cell<R::Elem>, c: Vec<BigRational>) -> Result<Cell<R::Elem>, SchwartzError> {
        let delta: Vec<BigRational> = c.iter().zip(&cell.center).map(|(a, b)| a - b).collect();
        let gd = linalg::mul_vec(&QP_ARITH, &cell.quad, &delta);
        let lin = cell.lin.iter().zip(&gd).map(|(l, x)| l + x * BigRational::from_integer(2.into())).collect();
        let k = dot(&delta, &gd) + dot(&cell.lin, &delta);
        let coeff = self.ring.mul(&cell.coeff, &self.psi_of(&k)?);
        Ok(Cell { coeff, center: c, depths: cell.depths.clone(), quad: cell.quad.clone(), lin })
    }

    /// Split every coordinate of the box down to depth `n`.
    fn refine_cell(&self, cell: Cell<R::Elem>, n: i64, out: &mut Vec<Cell<R::Elem>>) -> Result<(), SchwartzError> {
        let mut cur = vec![cell];
        for i in 0..cur[0].center.len() {
            let d = cur[0].depths[i];
            if d >= n {
                continue;
            }
            let count = (self.p() as u128).checked_pow((n - d) as u32).filter(|c| *c as usize * cur.len() <= MAX_TERMS).ok_or(SchwartzError::TooLarge)? as u64;
            let step = self.pow_p(d);
            let mut next = Vec::with_capacity(cur.len() * count as usize);
            for c in &cur {
                for k in 0..count {
                    let mut center = c.center.clone();
                    center[i] = &center[i] + &step * BigRational::from_integer(BigInt::from(k));
                    let mut nc = self.recenter(c, center)?;
                    nc.depths[i] = n;
                    next.push(nc);
                }
            }
            cur = next;
        }
        if out.len() + cur.len() > MAX_TERMS {
            return Err(SchwartzError::TooLarge);
        }
        out.extend(cur);
        Ok(())
    }

    /// Bring cells to a common depth per cell (the deepest coordinate).
    fn uniformize(&self, cells: Vec<Cell<R::Elem>>, m: usize) -> Result<PhaseStepFunction<R::Elem>, SchwartzError> {
        let mut out = Vec::new();
        for c in cells {
            let n = c.depths.iter().copied().max().unwrap_or(0);
            self.refine_cell(c, n, &mut out)?;
        }
        let terms = out.into_iter().map(|c| Term { coeff: c.coeff, center: c.center, depth: c.depths.first().copied().unwrap_or(0), quad: c.quad, lin: c.lin }).collect();
        Ok(PhaseStepFunction { m, terms })
    }

    // ------------------------------------------------------------ canonical form

    fn normalize_term(&self, t: &Term<R::Elem>) -> Result<Term<R::Elem>, SchwartzError> {
        let n = t.depth;
        let center: Vec<BigRational> = t.center.iter().map(|x| self.reduce_mod(x, n)).collect();
        let c = self.recenter(&Self::to_cell(t), center)?;
        let lin = c.lin.iter().map(|x| self.reduce_mod(x, -n)).collect();
        let quad = c.quad.map(|x| self.reduce_mod(x, -2 * n));
        Ok(Term { coeff: c.coeff, center: c.center, depth: n, quad, lin })
    }

    fn contains(&self, big: &Term<R::Elem>, small: &Term<R::Elem>) -> bool {
        big.depth <= small.depth && big.center.iter().zip(&small.center).all(|(a, b)| self.in_lattice(&(a - b), big.depth))
    }

    /// Canonical form: supports pairwise equal or disjoint, centers and
    /// phases reduced, equal (support, phase) merged, zero terms dropped,
    /// sorted by depth, center and phase.
    pub fn canon(&self, f: &PhaseStepFunction<R::Elem>) -> Result<PhaseStepFunction<R::Elem>, SchwartzError> {
        let r = &self.ring;
        let mut terms: Vec<Term<R::Elem>> = f.terms.iter().filter(|t| !r.is_zero(&t.coeff)).map(|t| self.normalize_term(t)).collect::<Result<_, _>>()?;
        // refine any coset strictly containing another support
        loop {
            let mut split = None;
            'outer: for (i, a) in terms.iter().enumerate() {
                for b in &terms {
                    if a.depth < b.depth && self.contains(a, b) {
                        split = Some((i, b.depth));
                        break 'outer;
                    }
                }
            }
            let Some((i, n)) = split else { break };
            let t = terms.swap_remove(i);
            let mut cells = Vec::new();
            self.refine_cell(Self::to_cell(&t), n, &mut cells)?;
            for c in cells {
                let t = Term { coeff: c.coeff, center: c.center, depth: n, quad: c.quad, lin: c.lin };
                terms.push(self.normalize_term(&t)?);
            }
            if terms.len() > MAX_TERMS {
                return Err(SchwartzError::TooLarge);
            }
        }
        let key_cmp = |a: &Term<R::Elem>, b: &Term<R::Elem>| {
            a.depth
                .cmp(&b.depth)
                .then_with(|| cmp_vec(&a.center, &b.center))
                .then_with(|| cmp_vec(&a.quad.data, &b.quad.data))
                .then_with(|| cmp_vec(&a.lin, &b.lin))
        };
        terms.sort_by(key_cmp);
        let mut merged: Vec<Term<R::Elem>> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if key_cmp(last, &t) == Ordering::Equal => last.coeff = r.add(&last.coeff, &t.coeff),
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !r.is_zero(&t.coeff));
        Ok(PhaseStepFunction { m: f.m, terms: merged })
    }

    /// Decides f = g when both reduce to the same canonical phases.
    pub fn equal(&self, f: &PhaseStepFunction<R::Elem>, g: &PhaseStepFunction<R::Elem>) -> Result<bool, SchwartzError> {
        let diff = self.add(f, &self.scale(&self.ring.from_i64(-1), g))?;
        Ok(self.canon(&diff)?.is_empty())
    }

    /// The c with f = c·g.
    pub fn ratio(&self, f: &PhaseStepFunction<R::Elem>, g: &PhaseStepFunction<R::Elem>) -> Result<R::Elem, SchwartzError> {
        let r = &self.ring;
        let gc = self.canon(g)?;
        for t in &gc.terms {
            let gv = self.eval(&gc, &t.center)?;
            if r.is_zero(&gv) {
                continue;
            }
            let c = r.div(&self.eval(f, &t.center)?, &gv).ok_or(SchwartzError::NotProportional)?;
            return if self.equal(f, &self.scale(&c, &gc))? { Ok(c) } else { Err(SchwartzError::NotProportional) };
        }
        Err(SchwartzError::NotProportional)
    }

    // ------------------------------------------------------------ operators

    /// ρ(x, v, t)f(y) = ψ(t − y·x − ½v·x)·f(y + v).
    pub fn act_heisenberg(&self, f: &PhaseStepFunction<R::Elem>, h: &HeisenbergElement<BigRational>) -> Result<PhaseStepFunction<R::Elem>, SchwartzError> {
        let m = f.m;
        if h.w.len() != 2 * m {
            return Err(SchwartzError::Dimension);
        }
        let (x, v) = h.w.split_at(m);
        let half = BigRational::new(1.into(), 2.into());
        let base = &h.t - half * dot(v, x);
        let terms = f
            .terms
            .iter()
            .map(|t| {
                let center: Vec<BigRational> = t.center.iter().zip(v).map(|(a, b)| a - b).collect();
                let k = &base - dot(&center, x);
                let lin = t.lin.iter().zip(x).map(|(l, xi)| l - xi).collect();
                Ok(Term { coeff: self.ring.mul(&t.coeff, &self.psi_of(&k)?), center, depth: t.depth, quad: t.quad.clone(), lin })
            })
            .collect::<Result<_, SchwartzError>>()?;
        Ok(PhaseStepFunction { m, terms })
    }

    /// I_p f(y) = ψ(½ yᵀABᵀy)·f(Aᵀy); for m ≥ 2 the block A must be monomial.
    pub fn act_parabolic_raw(&self, f: &PhaseStepFunction<R::Elem>, p: &Mat<BigRational>) -> Result<PhaseStepFunction<R::Elem>, SchwartzError> {
        let fld = &self.field;
        let m = f.m;
        if p.rows != 2 * m {
            return Err(SchwartzError::Dimension);
        }
        if !is_parabolic(fld, p) {
            return Err(MetaError::NotParabolic.into());
        }
        let (a, b, _, _) = split_blocks(p);
        let monomial = (0..m).all(|i| (0..m).filter(|&j| !a.get(i, j).is_zero()).count() == 1);
        if !monomial {
            return Err(SchwartzError::Unsupported("non-monomial Levi part in dimension ≥ 2".into()));
        }
        let ait = linalg::inverse(fld, &a).ok_or(MetaError::NotSymplectic)?.transpose();
        let mm = linalg::mul(fld, &a, &b.transpose());
        let half = BigRational::new(1.into(), 2.into());
        let mut cells = Vec::with_capacity(f.terms.len());
        for t in &f.terms {
            let center = linalg::mul_vec(fld, &ait, &t.center);
            // coordinate j of A^{-T}(p^n Z_p^m) is p^{n + v(β)} Z_p, β the entry in row j
            let depths = (0..m)
                .map(|j| {
                    let beta = (0..m).map(|k| ait.get(j, k)).find(|x| !x.is_zero()).expect("monomial");
                    t.depth + fld.valuation(beta).expect("nonzero")
                })
                .collect();
            let quad_a = linalg::mul(fld, &linalg::mul(fld, &a, &t.quad), &a.transpose());
            let quad = linalg::add(fld, &quad_a, &linalg::scale(fld, &half, &mm));
            let ml = linalg::mul_vec(fld, &mm, &center);
            let lin = linalg::mul_vec(fld, &a, &t.lin).iter().zip(&ml).map(|(x, y)| x + y).collect();
            let k = &half * dot(&center, &ml);
            cells.push(Cell { coeff: self.ring.mul(&t.coeff, &self.psi_of(&k)?), center, depths, quad, lin });
        }
        self.uniformize(cells, m)
    }

    /// σ(p) = Ω_{1, det A}·I_p.
    pub fn act_parabolic(&self, f: &PhaseStepFunction<R::Elem>, p: &Mat<BigRational>) -> Result<PhaseStepFunction<R::Elem>, SchwartzError> {
        let c = self.weil.omega_ratio(&BigRational::one(), &det_x(&self.field, p))?;
        Ok(self.scale(&c, &self.act_parabolic_raw(f, p)?))
    }

    /// σ(w_S)f(y) = Ω(ψ∘Q_{1/2})^{−|S|} ∫_{Q_p^S} ψ(−a·y_S) f(a, y_{ᶜS}) da.
    /// Phases may not couple a coordinate of S to any other coordinate.
    pub fn act_fourier(&self, f: &PhaseStepFunction<R::Elem>, s: &[usize]) -> Result<PhaseStepFunction<R::Elem>, SchwartzError> {
        let m = f.m;
        if s.iter().any(|&i| i >= m) {
            return Err(SchwartzError::Dimension);
        }
        let r = &self.ring;
        let om = self.weil.omega_1d(&BigRational::new(1.into(), 2.into()))?;
        let norm = r.inv(&r.pow(&om, s.len() as u64)).ok_or(SchwartzError::Coeff(CoeffError::NotInvertible))?;
        let four = BigRational::from_integer(4.into());
        let mut cells = Vec::with_capacity(f.terms.len());
        for t in &f.terms {
            for &i in s {
                if (0..m).any(|k| k != i && !t.quad.get(i, k).is_zero()) {
                    return Err(SchwartzError::Unsupported("phase couples a transformed coordinate".into()));
                }
            }
            let n = t.depth;
            let mut cell = Self::to_cell(t);
            cell.coeff = r.mul(&cell.coeff, &norm);
            for &i in s {
                let g = t.quad.get(i, i).clone();
                let a0 = t.center[i].clone();
                let lam = t.lin[i].clone();
                // ∫_{p^n Z_p} ψ(g z² + μ z) dz with μ = λ − y_i
                let gaussian = match self.field.valuation(&g) {
                    Some(v) => v + 2 * n < 0,
                    None => false,
                };
                let (factor, depth, q) = if gaussian {
                    let v = self.field.valuation(&g).expect("nonzero");
                    (self.weil.omega_1d(&g)?, v + n, -(&g * &four).recip())
                } else {
                    (self.p_power(-n)?, -n, rz())
                };
                let k = -(&a0 * &lam);
                cell.coeff = r.mul(&r.mul(&cell.coeff, &factor), &self.psi_of(&k)?);
                cell.center[i] = lam;
                cell.depths[i] = depth;
                cell.quad.set(i, i, q);
                cell.lin[i] = -a0;
            }
            cells.push(cell);
        }
        self.uniformize(cells, m)
    }

    /// σ(g)f through g = p1·w_j·p2: Ω_{1, det_X(p1p2)}·I_{p1}σ(w_j)I_{p2}f.
    pub fn act_sigma(&self, f: &PhaseStepFunction<R::Elem>, g: &Mat<BigRational>) -> Result<PhaseStepFunction<R::Elem>, SchwartzError> {
        let d = bruhat_decompose(&self.field, g)?;
        let c = self.weil.omega_ratio(&BigRational::one(), &x_det(&self.field, &d))?;
        let f2 = self.act_parabolic_raw(f, &d.p2)?;
        let fw = self.act_fourier(&f2, &(0..d.j).collect::<Vec<_>>())?;
        Ok(self.scale(&c, &self.act_parabolic_raw(&fw, &d.p1)?))
    }

    /// ĉ(g1, g2) read off from σ(g1)σ(g2)f = ĉ·σ(g1g2)f.
    pub fn cocycle_on(&self, g1: &Mat<BigRational>, g2: &Mat<BigRational>, f: &PhaseStepFunction<R::Elem>) -> Result<R::Elem, SchwartzError> {
        let lhs = self.act_sigma(&self.act_sigma(f, g2)?, g1)?;
        let rhs = self.act_sigma(f, &linalg::mul(&self.field, g1, g2))?;
        self.ratio(&lhs, &rhs)
    }

    /// ĉ(g1, g2) ∈ {±1} evaluated on 1_{Z_p^m}.
    pub fn cocycle(&self, g1: &Mat<BigRational>, g2: &Mat<BigRational>) -> Result<i8, SchwartzError> {
        let c = self.cocycle_on(g1, g2, &self.unit_indicator())?;
        let r = &self.ring;
        if c == r.one() {
            Ok(1)
        } else if c == r.from_i64(-1) {
            Ok(-1)
        } else {
            Err(SchwartzError::Unsupported(format!("cocycle value {c:?} is not a sign")))
        }
    }

    /// ∫ ψ(−a·y) f(a) da for m = 1 as an exact finite sum over a grid on
    /// which the integrand is constant. Independent of `act_fourier`.
    pub fn fourier_numeric(&self, f: &PhaseStepFunction<R::Elem>, y: &BigRational, max_points: u64) -> Result<R::Elem, SchwartzError> {
        if f.m != 1 {
            return Err(SchwartzError::Dimension);
        }
        let fld = &self.field;
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for t in &f.terms {
            let c = &t.center[0];
            lo = lo.min(fld.valuation(c).map_or(t.depth, |v| v.min(t.depth)));
            let n = t.depth;
            let mut need = n;
            if let Some(vg) = fld.valuation(t.quad.get(0, 0)) {
                need = need.max(-vg - n).max(crate::util::ceil_div(-vg, 2));
            }
            if let Some(vl) = fld.valuation(&t.lin[0]) {
                need = need.max(-vl);
            }
            hi = hi.max(need);
        }
        if f.terms.is_empty() {
            return Ok(self.ring.zero());
        }
        if let Some(vy) = fld.valuation(y) {
            hi = hi.max(-vy);
        }
        let hi = hi.max(lo);
        let count = (self.p() as u128).checked_pow((hi - lo) as u32).filter(|c| *c <= max_points as u128).ok_or(SchwartzError::TooLarge)? as u64;
        let step = self.pow_p(lo);
        let r = &self.ring;
        let mut acc = r.zero();
        for k in 0..count {
            let a = &step * BigRational::from_integer(BigInt::from(k));
            let v = self.eval(f, std::slice::from_ref(&a))?;
            if !r.is_zero(&v) {
                acc = r.add(&acc, &r.mul(&v, &self.psi_of(&-(&a * y))?));
            }
        }
        let om = self.weil.omega_1d(&BigRational::new(1.into(), 2.into()))?;
        let scale = r.div(&self.p_power(-hi)?, &om).ok_or(SchwartzError::Coeff(CoeffError::NotInvertible))?;
        Ok(r.mul(&acc, &scale))
    }
}
