//! Coefficient rings: cyclotomic fields Q(ζ_{p^k}) and finite fields F_{ℓ^d}
//! holding p-power roots of unity, plus the reduction map between them.

mod cyclo;
mod finite;
mod scalar;

pub use cyclo::{phi, Cyc, CycField};
pub use finite::{FinField, ReductionMap};
pub use scalar::{ring_arith, root_of_unity, ArithOp, CoeffScalar, RingDesc};

use std::fmt::Debug;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("root of unity of order {order} not available in {ring}")]
    RootUnavailable { order: u64, ring: String },
    #[error("denominator divisible by {0}")]
    DenominatorNotUnit(u64),
    #[error("invalid ring parameters: {0}")]
    InvalidParameters(String),
}

/// Exact field arithmetic on values of type `Elem`, with the structure
/// carried by `self`.
pub trait Field: Clone + Send + Sync + Debug {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn characteristic(&self) -> u64;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power allowing negative exponents.
    fn powi(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|ai| self.pow(&ai, e.unsigned_abs()))
        }
    }

    fn sum<'a, I>(&self, it: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        it.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// A coefficient field containing the p-power roots of unity needed by ψ.
pub trait CoeffRing: Field {
    /// The prime p whose power roots of unity live in the ring.
    fn root_prime(&self) -> u64;

    /// ζ_{p^level}^e for the canonical choice of ζ_{p^level}.
    fn zeta(&self, level: u32, e: u64) -> Result<Self::Elem, CoeffError>;

    /// Largest level available, `None` when unbounded.
    fn max_level(&self) -> Option<u32>;

    fn descriptor(&self) -> String;

    fn to_json(&self, a: &Self::Elem) -> serde_json::Value;

    /// Σ counts[e]·ζ_{p^level}^e.
    fn from_zeta_histogram(&self, level: u32, counts: &[i64]) -> Result<Self::Elem, CoeffError> {
        let mut acc = self.zero();
        for (e, &c) in counts.iter().enumerate() {
            if c != 0 {
                let z = self.zeta(level, e as u64)?;
                acc = self.add(&acc, &self.mul(&self.from_i64(c), &z));
            }
        }
        Ok(acc)
    }

    /// Image of a rational number; fails when the denominator is not a unit.
    fn from_ratio(&self, num: i64, den: i64) -> Result<Self::Elem, CoeffError> {
        let d = self.from_i64(den);
        let di = self.inv(&d).ok_or(CoeffError::DenominatorNotUnit(self.characteristic()))?;
        Ok(self.mul(&self.from_i64(num), &di))
    }
}
