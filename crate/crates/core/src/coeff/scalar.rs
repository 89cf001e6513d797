use super::{CoeffError, CoeffRing, Cyc, CycField, Field, FinField};

/// A coefficient ring chosen at run time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingDesc {
    Cyclo(CycField),
    Fin(FinField),
}

impl RingDesc {
    pub fn descriptor(&self) -> String {
        match self {
            RingDesc::Cyclo(c) => c.descriptor(),
            RingDesc::Fin(f) => f.descriptor(),
        }
    }
}

/// A value together with the ring it lives in.
#[derive(Clone, Debug, PartialEq)]
pub enum CoeffScalar {
    Cyc(CycField, Cyc),
    Fin(FinField, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
}

impl CoeffScalar {
    pub fn ring(&self) -> RingDesc {
        match self {
            CoeffScalar::Cyc(r, _) => RingDesc::Cyclo(r.clone()),
            CoeffScalar::Fin(r, _) => RingDesc::Fin(r.clone()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CoeffScalar::Cyc(r, a) => r.to_json(a),
            CoeffScalar::Fin(r, a) => r.to_json(a),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            CoeffScalar::Cyc(r, a) => r.is_one(a),
            CoeffScalar::Fin(r, a) => r.is_one(a),
        }
    }
}

/// Exact ring operation on two scalars of the same ring. `Inv` ignores `b`.
pub fn ring_arith(a: &CoeffScalar, b: &CoeffScalar, op: ArithOp) -> Result<CoeffScalar, CoeffError> {
    match (a, b) {
        (CoeffScalar::Cyc(ra, x), CoeffScalar::Cyc(rb, y)) if ra == rb => Ok(CoeffScalar::Cyc(
            ra.clone(),
            match op {
                ArithOp::Add => ra.add(x, y),
                ArithOp::Mul => ra.mul(x, y),
                ArithOp::Inv => ra.inv(x).ok_or(CoeffError::NotInvertible)?,
            },
        )),
        (CoeffScalar::Fin(ra, x), CoeffScalar::Fin(rb, y)) if ra == rb => Ok(CoeffScalar::Fin(
            ra.clone(),
            match op {
                ArithOp::Add => ra.add(x, y),
                ArithOp::Mul => ra.mul(x, y),
                ArithOp::Inv => ra.inv(x).ok_or(CoeffError::NotInvertible)?,
            },
        )),
        _ => Err(CoeffError::RingMismatch(a.ring().descriptor(), b.ring().descriptor())),
    }
}

/// The designated root of unity of the given order, which must be a power
/// of the ring's prime p.
pub fn root_of_unity(ring: &RingDesc, order: u64) -> Result<CoeffScalar, CoeffError> {
    let p = match ring {
        RingDesc::Cyclo(c) => c.root_prime(),
        RingDesc::Fin(f) => f.root_prime(),
    };
    let mut level = 0u32;
    let mut n = order;
    while n > 1 && n % p == 0 {
        n /= p;
        level += 1;
    }
    if n != 1 {
        return Err(CoeffError::RootUnavailable { order, ring: ring.descriptor() });
    }
    match ring {
        RingDesc::Cyclo(c) => Ok(CoeffScalar::Cyc(c.clone(), c.zeta(level, 1)?)),
        RingDesc::Fin(f) => Ok(CoeffScalar::Fin(f.clone(), f.zeta(level, 1)?)),
    }
}
