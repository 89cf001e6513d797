use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{CoeffError, CoeffRing, Cyc, CycField, Field};
use crate::util::is_prime;

#[derive(Debug)]
struct Tables {
    ell: u64,
    d: u32,
    size: u32,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zeta: u32,
}

/// The finite field F_{ℓ^d} with a designated primitive p^k-th root of unity.
///
/// Elements are u32 codes Σ c_i ℓ^i for the polynomial representative
/// Σ c_i x^i modulo the lexicographically smallest monic irreducible of
/// degree d. Multiplication goes through log/exp tables.
#[derive(Clone, Debug)]
pub struct FinField {
    t: Arc<Tables>,
    p: u64,
    k: u32,
}

impl PartialEq for FinField {
    fn eq(&self, other: &Self) -> bool {
        self.t.ell == other.t.ell && self.t.d == other.t.d && self.p == other.p && self.k == other.k
    }
}

impl Eq for FinField {}

fn poly_from_code(mut c: u64, ell: u64, d: usize) -> Vec<u64> {
    let mut v = vec![0; d];
    for x in v.iter_mut() {
        *x = c % ell;
        c /= ell;
    }
    v
}

fn code_from_poly(v: &[u64], ell: u64) -> u32 {
    v.iter().rev().fold(0u64, |acc, &c| acc * ell + c) as u32
}

/// Product of two reduced polynomials modulo the monic `modulus` (given
/// without its leading 1).
fn mulmod(a: &[u64], b: &[u64], modulus: &[u64], ell: u64) -> Vec<u64> {
    let d = modulus.len();
    let mut prod = vec![0u64; 2 * d];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % ell;
        }
    }
    for top in (d..2 * d).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, m) in modulus.iter().enumerate() {
            let s = top - d + i;
            prod[s] = (prod[s] + (ell - c) * m) % ell;
        }
    }
    prod.truncate(d);
    prod
}

/// Monic polynomial `f` (coefficients low to high, leading 1 included) has
/// no monic factor of degree between 1 and deg/2.
fn is_irreducible(f: &[u64], ell: u64) -> bool {
    let n = f.len() - 1;
    for deg in 1..=n / 2 {
        for code in 0..ell.pow(deg as u32) {
            let mut g = poly_from_code(code, ell, deg);
            g.push(1);
            if poly_rem(f, &g, ell).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[u64], g: &[u64], ell: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if c != 0 {
            for (i, gi) in g.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (ell - c) * gi) % ell;
            }
        }
        r.pop();
    }
    r
}

impl FinField {
    /// F_{ℓ^d} with ζ of order p^k. Requires ℓ ≠ p and p^k | ℓ^d − 1.
    pub fn new(ell: u64, d: u32, p: u64, k: u32) -> Result<Self, CoeffError> {
        if !is_prime(ell) || !is_prime(p) || d == 0 {
            return Err(CoeffError::InvalidParameters(format!("F_{ell}^{d} with roots of order {p}^{k}")));
        }
        if ell == p {
            return Err(CoeffError::RootUnavailable { order: p.pow(k), ring: format!("F_{}", ell.pow(d)) });
        }
        let size = ell.checked_pow(d).filter(|s| *s <= 1 << 20).ok_or_else(|| {
            CoeffError::InvalidParameters(format!("F_{ell}^{d} is too large"))
        })?;
        let order = p.pow(k);
        if (size - 1) % order != 0 {
            return Err(CoeffError::RootUnavailable { order, ring: format!("F_{size}") });
        }
        let du = d as usize;
        let modulus = if d == 1 {
            vec![0]
        } else {
            (0..ell.pow(d))
                .map(|c| poly_from_code(c, ell, du))
                .find(|m| {
                    let mut f = m.clone();
                    f.push(1);
                    is_irreducible(&f, ell)
                })
                .expect("irreducible polynomials exist in every degree")
        };
        let n = (size - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut log = vec![u32::MAX; size as usize];
        let mut found = false;
        for g in 2..size.max(3) {
            let gp = poly_from_code(if size == 2 { 1 } else { g }, ell, du);
            let mut cur = poly_from_code(1, ell, du);
            let mut ok = true;
            log.iter_mut().for_each(|x| *x = u32::MAX);
            for (i, slot) in exp.iter_mut().enumerate() {
                let c = code_from_poly(&cur, ell);
                if log[c as usize] != u32::MAX {
                    ok = false;
                    break;
                }
                log[c as usize] = i as u32;
                *slot = c;
                cur = if d == 1 {
                    vec![(cur[0] * gp[0]) % ell]
                } else {
                    mulmod(&cur, &gp, &modulus, ell)
                };
            }
            if ok {
                found = true;
                break;
            }
        }
        assert!(found, "multiplicative group is cyclic");
        // smallest code of exact order p^k
        let zeta = (1..size as u32)
            .find(|&c| {
                let l = log[c as usize] as u64;
                l != 0 && n as u64 / l.gcd(&(n as u64)) == order
            })
            .expect("order divides the group order");
        Ok(FinField { t: Arc::new(Tables { ell, d, size: size as u32, modulus, exp, log, zeta }), p, k })
    }

    /// Smallest extension of F_ℓ containing a primitive p^k-th root of unity.
    pub fn for_roots(ell: u64, p: u64, k: u32) -> Result<Self, CoeffError> {
        if ell == p || !is_prime(ell) {
            return Err(CoeffError::RootUnavailable { order: p.pow(k), ring: format!("F_{ell}-algebras") });
        }
        let order = p.pow(k);
        let mut d = 1;
        let mut pw = ell % order;
        while pw != 1 % order {
            pw = pw * ell % order;
            d += 1;
        }
        FinField::new(ell, d, p, k)
    }

    pub fn ell(&self) -> u64 {
        self.t.ell
    }

    pub fn degree(&self) -> u32 {
        self.t.d
    }

    pub fn size(&self) -> u32 {
        self.t.size
    }

    /// Polynomial coefficients (low degree first) of the designated modulus,
    /// leading 1 included.
    pub fn modulus(&self) -> Vec<u64> {
        let mut m = self.t.modulus.clone();
        m.push(1);
        m
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u32) -> u64 {
        let n = (self.t.size - 1) as u64;
        let l = self.t.log[a as usize] as u64;
        if l == 0 {
            1
        } else {
            n / l.gcd(&n)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.t.size
    }

    /// Whether the element lies in the prime field F_ℓ.
    pub fn is_prime_field_elem(&self, a: u32) -> bool {
        (a as u64) < self.t.ell
    }
}

impl Field for FinField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.t.ell as i64) as u32
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        let ell = self.t.ell as u32;
        if ell == 2 {
            return a ^ b;
        }
        let (mut x, mut y) = (*a, *b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.t.d {
            let s = (x % ell + y % ell) % ell;
            out += s * place;
            place *= ell;
            x /= ell;
            y /= ell;
        }
        out
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &u32) -> u32 {
        let ell = self.t.ell as u32;
        if ell == 2 {
            return *a;
        }
        let mut x = *a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.t.d {
            out += ((ell - x % ell) % ell) * place;
            place *= ell;
            x /= ell;
        }
        out
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let n = self.t.size - 1;
        let s = (self.t.log[*a as usize] as u64 + self.t.log[*b as usize] as u64) % n as u64;
        self.t.exp[s as usize]
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let n = self.t.size - 1;
        let l = self.t.log[*a as usize];
        Some(self.t.exp[((n - l) % n) as usize])
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn characteristic(&self) -> u64 {
        self.t.ell
    }

    fn pow(&self, a: &u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if *a == 0 {
            return 0;
        }
        let n = (self.t.size - 1) as u64;
        let l = self.t.log[*a as usize] as u64;
        self.t.exp[((l * (e % n)) % n) as usize]
    }
}

impl CoeffRing for FinField {
    fn root_prime(&self) -> u64 {
        self.p
    }

    fn zeta(&self, level: u32, e: u64) -> Result<u32, CoeffError> {
        if level > self.k {
            return Err(CoeffError::RootUnavailable {
                order: self.p.pow(level),
                ring: format!("F_{}", self.t.size),
            });
        }
        let base = self.pow(&self.t.zeta, self.p.pow(self.k - level));
        Ok(self.pow(&base, e % self.p.pow(level)))
    }

    fn max_level(&self) -> Option<u32> {
        Some(self.k)
    }

    fn descriptor(&self) -> String {
        format!("fl:{}:{}", self.t.ell, self.t.d)
    }

    fn to_json(&self, a: &u32) -> serde_json::Value {
        let coeffs = poly_from_code(*a as u64, self.t.ell, self.t.d as usize);
        serde_json::json!({ "ring": format!("F_{}", self.t.size), "coeffs": coeffs })
    }
}

/// The reduction Z[ζ_{p^k}][1/n] → F_{ℓ^d} for n prime to ℓ, sending the
/// canonical ζ_{p^j} to the target's designated root of the same order.
#[derive(Clone, Debug)]
pub struct ReductionMap {
    source: CycField,
    target: FinField,
}

impl ReductionMap {
    pub fn new(source: CycField, target: FinField) -> Result<Self, CoeffError> {
        if source.p() != target.root_prime() {
            return Err(CoeffError::RingMismatch(source.descriptor(), target.descriptor()));
        }
        Ok(ReductionMap { source, target })
    }

    pub fn source(&self) -> &CycField {
        &self.source
    }

    pub fn target(&self) -> &FinField {
        &self.target
    }

    /// Image of ζ_{p^k} for the target's top level.
    pub fn zeta_image(&self) -> u32 {
        self.target.zeta(self.target.level(), 1).expect("top level exists")
    }

    pub fn reduce(&self, x: &Cyc) -> Result<u32, CoeffError> {
        let f = &self.target;
        let ell = BigInt::from(f.ell());
        let den = x.denominator().mod_floor(&ell);
        if den.is_zero() {
            return Err(CoeffError::DenominatorNotUnit(f.ell()));
        }
        let z = f.zeta(x.level(), 1)?;
        let mut acc = 0u32;
        let mut zp = 1u32;
        for c in x.numerators() {
            let cm = c.mod_floor(&ell).to_i64().expect("small residue");
            if cm != 0 {
                acc = f.add(&acc, &f.mul(&f.from_i64(cm), &zp));
            }
            zp = f.mul(&zp, &z);
        }
        let dinv = f.inv(&f.from_i64(den.to_i64().expect("small residue"))).expect("unit");
        Ok(f.mul(&acc, &dinv))
    }
}
