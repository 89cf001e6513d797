use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{CoeffError, CoeffRing, Field};

/// Euler totient of p^k.
pub fn phi(p: u64, k: u32) -> usize {
    if k == 0 {
        1
    } else {
        ((p - 1) * p.pow(k - 1)) as usize
    }
}

/// Element of Q(ζ_{p^level}) in the power basis 1, ζ, ..., ζ^{φ(p^level)-1},
/// stored as integer numerators over a common positive denominator.
///
/// Values are always normalized: the level is minimal, the denominator is
/// positive and coprime to the content of the numerators. Equality of
/// normalized values is equality of field elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyc {
    level: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyc {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_rational(&self) -> bool {
        self.level == 0
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        if self.level == 0 {
            Some((self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }
}

/// The cyclotomic tower Q(ζ_{p^∞}) for a fixed odd prime p. Elements carry
/// their own level and are lifted to a common level for arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycField {
    p: u64,
}

impl CycField {
    pub fn new(p: u64) -> Result<Self, CoeffError> {
        if p < 3 || !crate::util::is_prime(p) {
            return Err(CoeffError::InvalidParameters(format!("p = {p} must be an odd prime")));
        }
        Ok(CycField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn pk(&self, k: u32) -> usize {
        self.p.pow(k) as usize
    }

    /// Build an element at `level` from coefficients indexed by exponent of
    /// ζ_{p^level}; exponents are taken mod p^level.
    pub fn from_exponents(&self, level: u32, coeffs: Vec<BigInt>, den: BigInt) -> Cyc {
        let num = self.reduce(level, coeffs);
        self.normalize(level, num, den)
    }

    /// Σ counts[e] ζ_{p^level}^e for a histogram of small integer counts.
    pub fn from_histogram(&self, level: u32, counts: &[i64]) -> Cyc {
        let n = self.pk(level);
        let mut folded = vec![0i64; n];
        for (e, c) in counts.iter().enumerate() {
            folded[e % n] += *c;
        }
        let d = phi(self.p, level);
        if level > 0 {
            let step = self.pk(level - 1);
            for e in d..n {
                let c = folded[e];
                if c != 0 {
                    folded[e] = 0;
                    let s = e - d;
                    for i in 0..(self.p as usize - 1) {
                        folded[s + i * step] -= c;
                    }
                }
            }
        }
        folded.truncate(d);
        self.normalize(level, folded.into_iter().map(BigInt::from).collect(), BigInt::one())
    }

    pub fn rational(&self, n: BigInt, d: BigInt) -> Cyc {
        assert!(!d.is_zero(), "zero denominator");
        self.normalize(0, vec![n], d)
    }

    /// Reduce a polynomial in ζ_{p^level} of any length to the power basis.
    fn reduce(&self, level: u32, coeffs: Vec<BigInt>) -> Vec<BigInt> {
        let n = self.pk(level);
        let d = phi(self.p, level);
        let mut v: Vec<BigInt> = vec![BigInt::zero(); n];
        for (e, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                v[e % n] += c;
            }
        }
        if level > 0 {
            let step = self.pk(level - 1);
            for e in d..n {
                if v[e].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut v[e]);
                let s = e - d;
                for i in 0..(self.p as usize - 1) {
                    v[s + i * step] -= &c;
                }
            }
        }
        v.truncate(d);
        v
    }

    fn normalize(&self, mut level: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Cyc {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = den.clone();
        for c in num.iter() {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if num.iter().all(|c| c.is_zero()) {
            return Cyc { level: 0, num: vec![BigInt::zero()], den: BigInt::one() };
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= &g;
        }
        // descend to the smallest level containing the element
        loop {
            if level == 0 {
                break;
            }
            if level == 1 {
                if num.iter().skip(1).all(|c| c.is_zero()) {
                    num.truncate(1);
                    level = 0;
                }
                break;
            }
            let p = self.p as usize;
            if num.iter().enumerate().all(|(i, c)| i % p == 0 || c.is_zero()) {
                num = num.into_iter().step_by(p).collect();
                level -= 1;
            } else {
                break;
            }
        }
        Cyc { level, num, den }
    }

    /// Coefficients of `a` written at level `k >= a.level`.
    fn lift(&self, a: &Cyc, k: u32) -> Vec<BigInt> {
        if a.level == k {
            return a.num.clone();
        }
        let mut v = vec![BigInt::zero(); phi(self.p, k)];
        if a.level == 0 {
            v[0] = a.num[0].clone();
            return v;
        }
        let stride = self.pk(k - a.level);
        for (i, c) in a.num.iter().enumerate() {
            v[i * stride] = c.clone();
        }
        v
    }

    /// The Galois automorphism ζ ↦ ζ^t (t prime to p), applied at the
    /// element's own level.
    pub fn galois(&self, a: &Cyc, t: u64) -> Cyc {
        if a.level == 0 {
            return a.clone();
        }
        let n = self.pk(a.level) as u64;
        let mut v = vec![BigInt::zero(); n as usize];
        for (i, c) in a.num.iter().enumerate() {
            let e = ((i as u64) * (t % n)) % n;
            v[e as usize] += c;
        }
        self.from_exponents(a.level, v, a.den.clone())
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self, a: &Cyc) -> Cyc {
        if a.level == 0 {
            return a.clone();
        }
        let n = self.pk(a.level) as u64;
        self.galois(a, n - 1)
    }

    /// Field norm down to Q, as a rational pair.
    pub fn norm(&self, a: &Cyc) -> (BigInt, BigInt) {
        let (prod, _) = self.norm_and_cofactor(a);
        prod.as_rational().expect("norm is rational")
    }

    fn norm_and_cofactor(&self, a: &Cyc) -> (Cyc, Cyc) {
        if a.level == 0 {
            return (a.clone(), self.one());
        }
        let n = self.pk(a.level) as u64;
        let mut co = self.one();
        for t in 2..n {
            if t % self.p != 0 {
                co = self.mul(&co, &self.galois(a, t));
            }
        }
        (self.mul(a, &co), co)
    }

    /// Floating-point complex embedding ζ_{p^k} ↦ exp(2πi/p^k); only for
    /// human inspection.
    pub fn approx(&self, a: &Cyc) -> (f64, f64) {
        let n = self.pk(a.level) as f64;
        let den = a.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in a.num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            let ang = 2.0 * std::f64::consts::PI * (i as f64) / n;
            re += c * ang.cos();
            im += c * ang.sin();
        }
        (re, im)
    }
}

impl Field for CycField {
    type Elem = Cyc;

    fn zero(&self) -> Cyc {
        Cyc { level: 0, num: vec![BigInt::zero()], den: BigInt::one() }
    }

    fn one(&self) -> Cyc {
        Cyc { level: 0, num: vec![BigInt::one()], den: BigInt::one() }
    }

    fn from_i64(&self, n: i64) -> Cyc {
        Cyc { level: 0, num: vec![BigInt::from(n)], den: BigInt::one() }
    }

    fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        if a.level == 0 && a.num[0].is_zero() {
            return b.clone();
        }
        if b.level == 0 && b.num[0].is_zero() {
            return a.clone();
        }
        let k = a.level.max(b.level);
        let la = self.lift(a, k);
        let lb = self.lift(b, k);
        if a.den == b.den {
            let num = la.into_iter().zip(lb).map(|(x, y)| x + y).collect();
            return self.normalize(k, num, a.den.clone());
        }
        let num = la.into_iter().zip(lb).map(|(x, y)| x * &b.den + y * &a.den).collect();
        self.normalize(k, num, &a.den * &b.den)
    }

    fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &Cyc) -> Cyc {
        Cyc { level: a.level, num: a.num.iter().map(|c| -c).collect(), den: a.den.clone() }
    }

    fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        if a.level == 0 {
            if a.num[0].is_zero() {
                return self.zero();
            }
            let num = b.num.iter().map(|c| c * &a.num[0]).collect();
            return self.normalize(b.level, num, &a.den * &b.den);
        }
        if b.level == 0 {
            return self.mul(b, a);
        }
        let k = a.level.max(b.level);
        let la = self.lift(a, k);
        let lb = self.lift(b, k);
        let mut prod = vec![BigInt::zero(); la.len() + lb.len() - 1];
        for (i, x) in la.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in lb.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let num = self.reduce(k, prod);
        self.normalize(k, num, &a.den * &b.den)
    }

    fn inv(&self, a: &Cyc) -> Option<Cyc> {
        if self.is_zero(a) {
            return None;
        }
        if a.level == 0 {
            return Some(self.normalize(0, vec![a.den.clone()], a.num[0].clone()));
        }
        let (n, co) = self.norm_and_cofactor(a);
        let (nn, nd) = n.as_rational().expect("norm is rational");
        // a^{-1} = cofactor / N(a)
        let scale = self.normalize(0, vec![nd], nn);
        Some(self.mul(&co, &scale))
    }

    fn is_zero(&self, a: &Cyc) -> bool {
        a.level == 0 && a.num[0].is_zero()
    }

    fn characteristic(&self) -> u64 {
        0
    }
}

impl CoeffRing for CycField {
    fn root_prime(&self) -> u64 {
        self.p
    }

    fn zeta(&self, level: u32, e: u64) -> Result<Cyc, CoeffError> {
        if level == 0 {
            return Ok(self.one());
        }
        let n = self.pk(level) as u64;
        let e = (e % n) as usize;
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = BigInt::one();
        Ok(self.from_exponents(level, v, BigInt::one()))
    }

    fn max_level(&self) -> Option<u32> {
        None
    }

    fn descriptor(&self) -> String {
        format!("cyclo:{}", self.p)
    }

    fn to_json(&self, a: &Cyc) -> serde_json::Value {
        // rationals are printed in the ambient ring Z[ζ_p]
        let level = a.level.max(1);
        let n = self.p.pow(level);
        let ring = if a.den.is_one() { format!("Z[zeta_{n}]") } else { format!("Q(zeta_{n})") };
        let coeffs: Vec<serde_json::Value> = self
            .lift(a, level)
            .iter()
            .map(|c| {
                if a.den.is_one() {
                    match c.to_i64() {
                        Some(v) => serde_json::Value::from(v),
                        None => serde_json::Value::from(c.to_string()),
                    }
                } else {
                    let g = c.gcd(&a.den);
                    let (n0, d0) = (c / &g, &a.den / &g);
                    if d0.is_one() {
                        serde_json::Value::from(n0.to_string())
                    } else {
                        serde_json::Value::from(format!("{n0}/{d0}"))
                    }
                }
            })
            .collect();
        serde_json::json!({ "ring": ring, "coeffs": coeffs })
    }

    fn from_zeta_histogram(&self, level: u32, counts: &[i64]) -> Result<Cyc, CoeffError> {
        Ok(self.from_histogram(level, counts))
    }

    fn from_ratio(&self, num: i64, den: i64) -> Result<Cyc, CoeffError> {
        if den == 0 {
            return Err(CoeffError::NotInvertible);
        }
        Ok(self.rational(BigInt::from(num), BigInt::from(den)))
    }
}
