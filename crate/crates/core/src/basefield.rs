//! Base fields F: finite fields F_q of odd characteristic and Q_p (p odd)
//! through exact rational representatives, with their additive characters.

use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::coeff::{CoeffError, CoeffRing, Field};
use crate::util::{is_prime, legendre, mod_inv, smallest_nonresidue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseError {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("zero argument")]
    Zero,
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// A class in F^×/F^×². Over F_q only `unit_square` matters; over Q_p the
/// four classes are 1, u₀, p, u₀p with u₀ the smallest non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub odd_valuation: bool,
    pub unit_square: bool,
}

impl SquareClass {
    pub const ONE: SquareClass = SquareClass { odd_valuation: false, unit_square: true };

    pub fn mul(self, o: SquareClass) -> SquareClass {
        SquareClass {
            odd_valuation: self.odd_valuation ^ o.odd_valuation,
            unit_square: self.unit_square == o.unit_square,
        }
    }

    pub fn label(&self) -> &'static str {
        match (self.odd_valuation, self.unit_square) {
            (false, true) => "1",
            (false, false) => "u0",
            (true, true) => "p",
            (true, false) => "u0*p",
        }
    }
}

/// Operations every base field provides beyond field arithmetic.
pub trait BaseField: Field {
    /// Residue characteristic p.
    fn residue_char(&self) -> u64;
    fn is_finite(&self) -> bool;
    /// q for F_q, `None` for Q_p.
    fn order(&self) -> Option<u64>;
    /// ψ(x) = ζ_{p^level}^exp for the default character.
    fn psi_exponent(&self, x: &Self::Elem) -> (u32, u64);
    /// Valuation of a nonzero element (0 over F_q), `None` for zero.
    fn valuation(&self, x: &Self::Elem) -> Option<i64>;
    fn is_square(&self, x: &Self::Elem) -> bool;
    fn square_class(&self, x: &Self::Elem) -> Result<SquareClass, BaseError>;
    /// Canonical representative of a square class.
    fn class_rep(&self, c: SquareClass) -> Self::Elem;
    fn hilbert(&self, a: &Self::Elem, b: &Self::Elem) -> Result<i8, BaseError>;
    /// |x|_F as an exact rational (num, den).
    fn abs(&self, x: &Self::Elem) -> Result<(BigInt, BigInt), BaseError>;
    fn from_rational(&self, n: &BigInt, d: &BigInt) -> Result<Self::Elem, BaseError>;
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    fn random<G: Rng>(&self, rng: &mut G) -> Self::Elem;
    fn descriptor(&self) -> String;
    fn format(&self, x: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, BaseError>;

    fn random_nonzero<G: Rng>(&self, rng: &mut G) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    fn half(&self) -> Self::Elem {
        self.inv(&self.from_i64(2)).expect("odd characteristic")
    }

    /// |x|_F inside a coefficient ring.
    fn modulus<R: CoeffRing>(&self, r: &R, x: &Self::Elem) -> Result<R::Elem, BaseError> {
        let (n, d) = self.abs(x)?;
        let n = n.to_i64().ok_or_else(|| BaseError::Parse("modulus too large".into()))?;
        let d = d.to_i64().ok_or_else(|| BaseError::Parse("modulus too large".into()))?;
        Ok(r.from_ratio(n, d)?)
    }
}

// ---------------------------------------------------------------- F_q

#[derive(Debug)]
struct FqTables {
    p: u64,
    f: u32,
    q: u32,
    modulus: Vec<u64>,
    add: Vec<u32>,
    neg: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
    squares: Vec<bool>,
    nonsquare: u32,
}

/// The finite field F_{p^f}, p odd. Elements are codes Σ c_i p^i of the
/// polynomial representative Σ c_i x^i.
#[derive(Clone, Debug)]
pub struct Fq {
    t: Arc<FqTables>,
}

impl PartialEq for Fq {
    fn eq(&self, o: &Self) -> bool {
        self.t.p == o.t.p && self.t.f == o.t.f
    }
}

impl Eq for Fq {}

/// Conway polynomials (low degree first, monic term omitted).
fn conway(p: u64, f: u32) -> Option<Vec<u64>> {
    let v: &[u64] = match (p, f) {
        (3, 2) => &[2, 2],
        (3, 3) => &[1, 2, 0],
        (3, 4) => &[2, 0, 0, 2],
        (5, 2) => &[2, 4],
        (5, 3) => &[3, 3, 0],
        (7, 2) => &[3, 6],
        (11, 2) => &[2, 7],
        (13, 2) => &[2, 12],
        _ => return None,
    };
    Some(v.to_vec())
}

fn digits(mut c: u64, p: u64, f: usize) -> Vec<u64> {
    (0..f)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn undigits(v: &[u64], p: u64) -> u32 {
    v.iter().rev().fold(0u64, |a, &c| a * p + c) as u32
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let f = m.len();
    let mut prod = vec![0u64; 2 * f];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for top in (f..2 * f).rev() {
        let c = prod[top];
        if c != 0 {
            prod[top] = 0;
            for (i, mi) in m.iter().enumerate() {
                prod[top - f + i] = (prod[top - f + i] + (p - c) * mi) % p;
            }
        }
    }
    prod.truncate(f);
    prod
}

/// Powers of the smallest primitive element: x itself for f > 1 (so the
/// modulus must be primitive), the smallest primitive root for f = 1.
fn primitive_powers(m: &[u64], p: u64) -> Option<Vec<u32>> {
    let f = m.len();
    let q = p.pow(f as u32);
    let n = (q - 1) as usize;
    let powers = |g: &[u64]| -> Option<Vec<u32>> {
        let mut seen = vec![false; q as usize];
        let mut out = Vec::with_capacity(n);
        let mut cur = digits(1, p, f);
        for _ in 0..n {
            let c = undigits(&cur, p);
            if seen[c as usize] {
                return None;
            }
            seen[c as usize] = true;
            out.push(c);
            cur = if f == 1 { vec![cur[0] * g[0] % p] } else { poly_mulmod(&cur, g, m, p) };
        }
        Some(out)
    };
    if f > 1 {
        return powers(&digits(p, p, f));
    }
    (2..p.max(3)).find_map(|g| powers(&[g % p]))
}

fn irreducible(m: &[u64], p: u64) -> bool {
    // monic m of degree f: reject any monic factor of degree <= f/2
    let f = m.len();
    let mut full = m.to_vec();
    full.push(1);
    for deg in 1..=f / 2 {
        for code in 0..p.pow(deg as u32) {
            let mut g = digits(code, p, deg);
            g.push(1);
            let mut r = full.clone();
            while r.len() > deg {
                let c = *r.last().unwrap();
                let s = r.len() - 1 - deg;
                for (i, gi) in g.iter().enumerate() {
                    r[s + i] = (r[s + i] + (p - c) * gi) % p;
                }
                r.pop();
            }
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Fq {
    pub fn new(p: u64, f: u32) -> Result<Self, BaseError> {
        if p == 2 || !is_prime(p) || f == 0 {
            return Err(BaseError::InvalidField(format!("fq:{p}:{f} needs an odd prime p and f >= 1")));
        }
        let q = p.checked_pow(f).filter(|q| *q <= 2187).ok_or_else(|| BaseError::InvalidField(format!("fq:{p}:{f} is too large")))?;
        let fu = f as usize;
        let (modulus, exp) = if f == 1 {
            (vec![0], primitive_powers(&[0], p).expect("prime fields are cyclic"))
        } else {
            let mut chosen = None;
            if let Some(m) = conway(p, f) {
                if irreducible(&m, p) {
                    if let Some(e) = primitive_powers(&m, p) {
                        chosen = Some((m, e));
                    }
                }
            }
            if chosen.is_none() {
                for code in 0..q {
                    let m = digits(code, p, fu);
                    if irreducible(&m, p) {
                        if let Some(e) = primitive_powers(&m, p) {
                            chosen = Some((m, e));
                            break;
                        }
                    }
                }
            }
            chosen.ok_or_else(|| BaseError::InvalidField("no primitive polynomial".into()))?
        };
        let qs = q as usize;
        let mut log = vec![u32::MAX; qs];
        for (i, &c) in exp.iter().enumerate() {
            log[c as usize] = i as u32;
        }
        let mut add = vec![0u32; qs * qs];
        for a in 0..qs {
            let da = digits(a as u64, p, fu);
            for b in 0..qs {
                let db = digits(b as u64, p, fu);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = undigits(&s, p);
            }
        }
        let neg: Vec<u32> = (0..qs)
            .map(|a| undigits(&digits(a as u64, p, fu).iter().map(|x| (p - x) % p).collect::<Vec<_>>(), p))
            .collect();
        let mul = |a: u32, b: u32| -> u32 {
            if a == 0 || b == 0 {
                0
            } else {
                exp[((log[a as usize] as u64 + log[b as usize] as u64) % (q - 1)) as usize]
            }
        };
        // Tr(x) = Σ x^{p^i}
        let mut trace = vec![0u32; qs];
        for (x, slot) in trace.iter_mut().enumerate() {
            let mut acc = 0u32;
            let mut y = x as u32;
            for _ in 0..f {
                acc = add[acc as usize * qs + y as usize];
                let mut z = 1u32;
                for _ in 0..p {
                    z = mul(z, y);
                }
                y = z;
            }
            assert!((acc as u64) < p, "trace lands in the prime field");
            *slot = acc;
        }
        let mut squares = vec![false; qs];
        for x in 0..qs as u32 {
            squares[mul(x, x) as usize] = true;
        }
        let nonsquare = (1..q as u32).find(|&x| !squares[x as usize]).expect("odd q has non-squares");
        Ok(Fq { t: Arc::new(FqTables { p, f, q: q as u32, modulus, add, neg, exp, log, trace, squares, nonsquare }) })
    }

    pub fn p(&self) -> u64 {
        self.t.p
    }

    pub fn degree(&self) -> u32 {
        self.t.f
    }

    pub fn q(&self) -> u32 {
        self.t.q
    }

    /// Defining polynomial, low degree first, leading 1 included.
    pub fn modulus(&self) -> Vec<u64> {
        let mut m = self.t.modulus.clone();
        m.push(1);
        m
    }

    pub fn trace(&self, x: u32) -> u32 {
        self.t.trace[x as usize]
    }

    pub fn nonsquare(&self) -> u32 {
        self.t.nonsquare
    }

    pub fn from_coeffs(&self, c: &[i64]) -> u32 {
        let p = self.t.p as i64;
        let v: Vec<u64> = (0..self.t.f as usize).map(|i| c.get(i).copied().unwrap_or(0).rem_euclid(p) as u64).collect();
        undigits(&v, self.t.p)
    }

    pub fn coeffs(&self, x: u32) -> Vec<u64> {
        digits(x as u64, self.t.p, self.t.f as usize)
    }
}

impl Field for Fq {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.t.p as i64) as u32
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.t.add[*a as usize * self.t.q as usize + *b as usize]
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.t.neg[*b as usize])
    }
    fn neg(&self, a: &u32) -> u32 {
        self.t.neg[*a as usize]
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let n = self.t.q as u64 - 1;
        self.t.exp[((self.t.log[*a as usize] as u64 + self.t.log[*b as usize] as u64) % n) as usize]
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let n = self.t.q - 1;
        Some(self.t.exp[((n - self.t.log[*a as usize]) % n) as usize])
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.t.p
    }
}

impl BaseField for Fq {
    fn residue_char(&self) -> u64 {
        self.t.p
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn order(&self) -> Option<u64> {
        Some(self.t.q as u64)
    }
    fn psi_exponent(&self, x: &u32) -> (u32, u64) {
        (1, self.t.trace[*x as usize] as u64)
    }
    fn valuation(&self, x: &u32) -> Option<i64> {
        if *x == 0 {
            None
        } else {
            Some(0)
        }
    }
    fn is_square(&self, x: &u32) -> bool {
        self.t.squares[*x as usize]
    }
    fn square_class(&self, x: &u32) -> Result<SquareClass, BaseError> {
        if *x == 0 {
            return Err(BaseError::Zero);
        }
        Ok(SquareClass { odd_valuation: false, unit_square: self.is_square(x) })
    }
    fn class_rep(&self, c: SquareClass) -> u32 {
        if c.unit_square {
            1
        } else {
            self.t.nonsquare
        }
    }
    fn hilbert(&self, a: &u32, b: &u32) -> Result<i8, BaseError> {
        if *a == 0 || *b == 0 {
            return Err(BaseError::Zero);
        }
        Ok(1)
    }
    fn abs(&self, x: &u32) -> Result<(BigInt, BigInt), BaseError> {
        if *x == 0 {
            return Err(BaseError::Zero);
        }
        Ok((BigInt::one(), BigInt::one()))
    }
    fn from_rational(&self, n: &BigInt, d: &BigInt) -> Result<u32, BaseError> {
        let p = BigInt::from(self.t.p);
        let dm = d.mod_floor(&p);
        if dm.is_zero() {
            return Err(BaseError::Parse(format!("{n}/{d} has a denominator divisible by {}", self.t.p)));
        }
        let nm = n.mod_floor(&p).to_i64().unwrap();
        let dm = dm.to_i64().unwrap();
        let di = mod_inv(dm, self.t.p as i64).unwrap();
        Ok(self.from_i64(nm * di))
    }
    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.t.q).collect())
    }
    fn random<G: Rng>(&self, rng: &mut G) -> u32 {
        rng.gen_range(0..self.t.q)
    }
    fn descriptor(&self) -> String {
        format!("fq:{}:{}", self.t.p, self.t.f)
    }
    fn format(&self, x: &u32) -> String {
        if self.t.f == 1 {
            return x.to_string();
        }
        let c = self.coeffs(*x);
        format!("[{}]", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
    }
    /// Integers and rationals map through F_p; "[c0 c1 ...]" gives polynomial
    /// coefficients.
    fn parse(&self, s: &str) -> Result<u32, BaseError> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let c: Result<Vec<i64>, _> = inner.split_whitespace().map(|t| t.parse::<i64>()).collect();
            let c = c.map_err(|_| BaseError::Parse(s.into()))?;
            if c.len() > self.t.f as usize {
                return Err(BaseError::Parse(s.into()));
            }
            return Ok(self.from_coeffs(&c));
        }
        let r = parse_rational(s)?;
        self.from_rational(r.numer(), r.denom())
    }
}

// ---------------------------------------------------------------- Q_p

/// Q_p for an odd prime p, on exact rational representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qp {
    p: u64,
    u0: u64,
}

pub fn parse_rational(s: &str) -> Result<BigRational, BaseError> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| BaseError::Parse(s.into()))?;
    let d: BigInt = d.parse().map_err(|_| BaseError::Parse(s.into()))?;
    if d.is_zero() {
        return Err(BaseError::Parse(s.into()));
    }
    Ok(BigRational::new(n, d))
}

fn val_int(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

impl Qp {
    pub fn new(p: u64) -> Result<Self, BaseError> {
        if p == 2 || !is_prime(p) {
            return Err(BaseError::InvalidField(format!("qp:{p} needs an odd prime")));
        }
        Ok(Qp { p, u0: smallest_nonresidue(p) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Write x = p^v · u with u a rational unit; returns (v, u).
    pub fn split(&self, x: &BigRational) -> Option<(i64, BigRational)> {
        if x.is_zero() {
            return None;
        }
        let p = BigInt::from(self.p);
        let (vn, n) = val_int(x.numer(), &p);
        let (vd, d) = val_int(x.denom(), &p);
        Some((vn - vd, BigRational::new(n, d)))
    }

    /// Residue of a rational unit modulo p.
    pub fn unit_residue(&self, u: &BigRational) -> u64 {
        let p = BigInt::from(self.p);
        let n = u.numer().mod_floor(&p).to_i64().unwrap();
        let d = u.denom().mod_floor(&p).to_i64().unwrap();
        let di = mod_inv(d, self.p as i64).expect("unit");
        ((n * di).rem_euclid(self.p as i64)) as u64
    }

    /// x ≡ a/p^n mod Z_p with 0 <= a < p^n and n minimal.
    pub fn frac_part(&self, x: &BigRational) -> (BigInt, u32) {
        let p = BigInt::from(self.p);
        let (vd, dprime) = val_int(x.denom(), &p);
        if vd == 0 {
            return (BigInt::zero(), 0);
        }
        let pn = num_traits::pow(p.clone(), vd as usize);
        // a ≡ numer · dprime^{-1} mod p^n
        let inv = mod_inverse_big(&dprime, &pn);
        let a = (x.numer() * inv).mod_floor(&pn);
        (a, vd as u32)
    }

    pub fn pow_p(&self, e: i64) -> BigRational {
        let p = BigInt::from(self.p);
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(p, e as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(p, (-e) as usize))
        }
    }
}

pub fn mod_inverse_big(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    assert!(g.gcd.is_one(), "not invertible");
    g.x.mod_floor(m)
}

impl Field for Qp {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
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
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

impl BaseField for Qp {
    fn residue_char(&self) -> u64 {
        self.p
    }
    fn is_finite(&self) -> bool {
        false
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn psi_exponent(&self, x: &BigRational) -> (u32, u64) {
        let (a, n) = self.frac_part(x);
        (n, a.to_u64().expect("level fits a machine word"))
    }
    fn valuation(&self, x: &BigRational) -> Option<i64> {
        self.split(x).map(|(v, _)| v)
    }
    fn is_square(&self, x: &BigRational) -> bool {
        match self.split(x) {
            None => true,
            Some((v, u)) => v % 2 == 0 && legendre(self.unit_residue(&u) as i64, self.p) == 1,
        }
    }
    fn square_class(&self, x: &BigRational) -> Result<SquareClass, BaseError> {
        let (v, u) = self.split(x).ok_or(BaseError::Zero)?;
        Ok(SquareClass {
            odd_valuation: v.rem_euclid(2) == 1,
            unit_square: legendre(self.unit_residue(&u) as i64, self.p) == 1,
        })
    }
    fn class_rep(&self, c: SquareClass) -> BigRational {
        let mut r = BigRational::one();
        if !c.unit_square {
            r *= BigRational::from_integer(BigInt::from(self.u0));
        }
        if c.odd_valuation {
            r *= BigRational::from_integer(BigInt::from(self.p));
        }
        r
    }
    fn hilbert(&self, a: &BigRational, b: &BigRational) -> Result<i8, BaseError> {
        let (alpha, u) = self.split(a).ok_or(BaseError::Zero)?;
        let (beta, v) = self.split(b).ok_or(BaseError::Zero)?;
        let lu = legendre(self.unit_residue(&u) as i64, self.p);
        let lv = legendre(self.unit_residue(&v) as i64, self.p);
        let lm = legendre(-1, self.p);
        let mut s = 1i8;
        if beta.rem_euclid(2) == 1 {
            s *= lu;
        }
        if alpha.rem_euclid(2) == 1 {
            s *= lv;
        }
        if (alpha * beta).rem_euclid(2) == 1 {
            s *= lm;
        }
        Ok(s)
    }
    fn abs(&self, x: &BigRational) -> Result<(BigInt, BigInt), BaseError> {
        let (v, _) = self.split(x).ok_or(BaseError::Zero)?;
        let r = self.pow_p(-v);
        Ok((r.numer().clone(), r.denom().clone()))
    }
    fn from_rational(&self, n: &BigInt, d: &BigInt) -> Result<BigRational, BaseError> {
        if d.is_zero() {
            return Err(BaseError::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(n.clone(), d.clone()))
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
    /// p^v · a/b with small a, b prime to p and v in [-3, 3]; zero with
    /// probability 1/16.
    fn random<G: Rng>(&self, rng: &mut G) -> BigRational {
        if rng.gen_range(0..16) == 0 {
            return BigRational::zero();
        }
        let p = self.p as i64;
        let pick = |rng: &mut G| loop {
            let a = rng.gen_range(1..=(4 * p));
            if a % p != 0 {
                return a;
            }
        };
        let a = pick(rng) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let b = if rng.gen_bool(0.5) { 1 } else { pick(rng) };
        let v = rng.gen_range(-3..=3);
        BigRational::new(BigInt::from(a), BigInt::from(b)) * self.pow_p(v)
    }
    fn descriptor(&self) -> String {
        format!("qp:{}", self.p)
    }
    fn format(&self, x: &BigRational) -> String {
        x.to_string()
    }
    fn parse(&self, s: &str) -> Result<BigRational, BaseError> {
        parse_rational(s)
    }
}

/// Valuation of a nonzero rational at p.
pub fn rational_valuation(p: u64, x: &BigRational) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    Some(val_int(x.numer(), &pb).0 - val_int(x.denom(), &pb).0)
}

// ---------------------------------------------------------------- ψ

/// The additive character x ↦ ψ₀(r·x) for the default character ψ₀ and a
/// nonzero twist r.
#[derive(Clone, Debug, PartialEq)]
pub struct Psi<F: BaseField> {
    pub field: F,
    pub twist: F::Elem,
}

impl<F: BaseField> Psi<F> {
    pub fn standard(field: F) -> Self {
        let one = field.one();
        Psi { field, twist: one }
    }

    pub fn twisted(field: F, twist: F::Elem) -> Result<Self, BaseError> {
        if field.is_zero(&twist) {
            return Err(BaseError::Zero);
        }
        Ok(Psi { field, twist })
    }

    /// ψ^{-1} = ψ_{-r}.
    pub fn inverse(&self) -> Self {
        Psi { field: self.field.clone(), twist: self.field.neg(&self.twist) }
    }

    pub fn exponent(&self, x: &F::Elem) -> (u32, u64) {
        self.field.psi_exponent(&self.field.mul(&self.twist, x))
    }

    pub fn eval<R: CoeffRing>(&self, r: &R, x: &F::Elem) -> Result<R::Elem, CoeffError> {
        let (l, e) = self.exponent(x);
        r.zeta(l, e)
    }

    pub fn descriptor(&self) -> String {
        if self.field.is_one(&self.twist) {
            "psi:level0".into()
        } else {
            format!("psi:twist:{}", self.field.format(&self.twist))
        }
    }

    pub fn parse(field: F, s: &str) -> Result<Self, BaseError> {
        let s = s.trim();
        if s == "psi:level0" || s == "psi" {
            return Ok(Psi::standard(field));
        }
        if let Some(r) = s.strip_prefix("psi:twist:") {
            let t = field.parse(r)?;
            return Psi::twisted(field, t);
        }
        Err(BaseError::Parse(s.into()))
    }
}

/// ψ values on every element of a finite field, indexed by code.
#[derive(Clone, Debug)]
pub struct PsiTable<R: CoeffRing> {
    pub values: Vec<R::Elem>,
}

impl<R: CoeffRing> PsiTable<R> {
    pub fn new(psi: &Psi<Fq>, r: &R) -> Result<Self, CoeffError> {
        let values = (0..psi.field.q()).map(|x| psi.eval(r, &x)).collect::<Result<Vec<_>, _>>()?;
        Ok(PsiTable { values })
    }

    pub fn get(&self, x: u32) -> &R::Elem {
        &self.values[x as usize]
    }
}

/// Parse "fq:p:f" or "qp:p".
pub enum AnyField {
    Fq(Fq),
    Qp(Qp),
}

pub fn parse_field(s: &str) -> Result<AnyField, BaseError> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    let num = |t: &str| t.parse::<u64>().map_err(|_| BaseError::Parse(s.into()));
    match parts.as_slice() {
        ["fq", p, f] => Ok(AnyField::Fq(Fq::new(num(p)?, num(f)? as u32)?)),
        ["fq", p] => Ok(AnyField::Fq(Fq::new(num(p)?, 1)?)),
        ["qp", p] => Ok(AnyField::Qp(Qp::new(num(p)?)?)),
        _ => Err(BaseError::Parse(s.into())),
    }
}
