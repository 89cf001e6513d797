//! Quadratic forms Q(x) = xᵀGx over a base field: radical, diagonalization,
//! square classes and the Hasse invariant.

use crate::basefield::{BaseError, BaseField, SquareClass};
use crate::linalg::{self, Mat};

/// Order in which the diagonalization picks pivot vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    /// First vector of the working basis with nonzero value.
    First,
    /// Last vector of the working basis with nonzero value.
    Last,
}

#[derive(Clone, Debug)]
pub struct Diagonalization<E> {
    /// Columns v_1..v_r spanning a complement of the radical.
    pub basis: Vec<Vec<E>>,
    /// a_i = Q(v_i), all nonzero; Q(v_i + v_j)-cross terms vanish.
    pub entries: Vec<E>,
}

#[derive(Clone, Debug)]
pub struct QuadraticForm<F: BaseField> {
    pub field: F,
    pub gram: Mat<F::Elem>,
    radical: Vec<Vec<F::Elem>>,
    diag: Diagonalization<F::Elem>,
    det_class: SquareClass,
    hasse: i8,
}

impl<F: BaseField> QuadraticForm<F> {
    pub fn new(field: F, gram: Mat<F::Elem>) -> Result<Self, BaseError> {
        if !gram.is_square() || gram != gram.transpose() {
            return Err(BaseError::Parse("Gram matrix must be square and symmetric".into()));
        }
        let radical = linalg::nullspace(&field, &gram);
        let diag = diagonalize_with(&field, &gram, PivotOrder::First);
        let det = diag.entries.iter().fold(field.one(), |a, x| field.mul(&a, x));
        let det_class = field.square_class(&det)?;
        let hasse = hasse_of(&field, &diag.entries)?;
        Ok(QuadraticForm { field, gram, radical, diag, det_class, hasse })
    }

    pub fn diagonal(field: F, entries: &[F::Elem]) -> Result<Self, BaseError> {
        let g = linalg::diag(&field, entries);
        Self::new(field, g)
    }

    pub fn dim(&self) -> usize {
        self.gram.rows
    }

    pub fn eval(&self, x: &[F::Elem]) -> F::Elem {
        let gx = linalg::mul_vec(&self.field, &self.gram, x);
        x.iter().zip(&gx).fold(self.field.zero(), |a, (u, v)| self.field.add(&a, &self.field.mul(u, v)))
    }

    /// The bilinear form xᵀGy; Q(x+y) − Q(x) − Q(y) = 2·bilinear(x, y).
    pub fn bilinear(&self, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
        let gy = linalg::mul_vec(&self.field, &self.gram, y);
        x.iter().zip(&gy).fold(self.field.zero(), |a, (u, v)| self.field.add(&a, &self.field.mul(u, v)))
    }

    pub fn radical(&self) -> &[Vec<F::Elem>] {
        &self.radical
    }

    pub fn rank(&self) -> usize {
        self.dim() - self.radical.len()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical.is_empty()
    }

    pub fn diagonalization(&self) -> &Diagonalization<F::Elem> {
        &self.diag
    }

    /// Square class of the determinant of Q_nd.
    pub fn det_class(&self) -> SquareClass {
        self.det_class
    }

    /// Determinant of Q_nd in the diagonal basis.
    pub fn det_nd(&self) -> F::Elem {
        self.diag.entries.iter().fold(self.field.one(), |a, x| self.field.mul(&a, x))
    }

    pub fn hasse(&self) -> i8 {
        self.hasse
    }

    /// Scaled form (c·Q)(x) = c·Q(x).
    pub fn scaled(&self, c: &F::Elem) -> Result<Self, BaseError> {
        Self::new(self.field.clone(), linalg::scale(&self.field, c, &self.gram))
    }

    /// Pulled back form x ↦ Q(φx), with Gram φᵀGφ.
    pub fn pullback(&self, phi: &Mat<F::Elem>) -> Result<Self, BaseError> {
        let f = &self.field;
        let g = linalg::mul(f, &linalg::mul(f, &phi.transpose(), &self.gram), phi);
        Self::new(f.clone(), g)
    }

    /// Orthogonal sum Q₁ ⊕ Q₂.
    pub fn direct_sum(&self, o: &Self) -> Result<Self, BaseError> {
        let f = &self.field;
        let (n, m) = (self.dim(), o.dim());
        let g = Mat::blocks(&self.gram, &linalg::zeros(f, n, m), &linalg::zeros(f, m, n), &o.gram);
        Self::new(f.clone(), g)
    }
}

/// Diagonalize the non-degenerate part of the form with Gram `g`.
pub fn diagonalize_with<F: BaseField>(f: &F, g: &Mat<F::Elem>, order: PivotOrder) -> Diagonalization<F::Elem> {
    let n = g.rows;
    let radical = linalg::nullspace(f, g);
    let mut work = linalg::complete_basis(f, n, &radical);
    if order == PivotOrder::Last {
        work.reverse();
    }
    let bil = |x: &[F::Elem], y: &[F::Elem]| -> F::Elem {
        let gy = linalg::mul_vec(f, g, y);
        x.iter().zip(&gy).fold(f.zero(), |a, (u, v)| f.add(&a, &f.mul(u, v)))
    };
    let mut basis = Vec::new();
    let mut entries = Vec::new();
    while !work.is_empty() {
        let pick = match order {
            PivotOrder::First => work.iter().position(|v| !f.is_zero(&bil(v, v))),
            PivotOrder::Last => work.iter().rposition(|v| !f.is_zero(&bil(v, v))),
        };
        let v = match pick {
            Some(i) => work.remove(i),
            None => {
                // all values vanish: v_i + v_j with B(v_i, v_j) ≠ 0
                let (i, j) = (0..work.len())
                    .flat_map(|i| (i + 1..work.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| !f.is_zero(&bil(&work[i], &work[j])))
                    .expect("non-degenerate on the working span");
                let s: Vec<F::Elem> = work[i].iter().zip(&work[j]).map(|(a, b)| f.add(a, b)).collect();
                work[i] = s;
                continue;
            }
        };
        let a = bil(&v, &v);
        let ainv = f.inv(&a).expect("nonzero");
        // project the rest orthogonally to v
        for w in work.iter_mut() {
            let c = f.mul(&bil(w, &v), &ainv);
            if !f.is_zero(&c) {
                for (wi, vi) in w.iter_mut().zip(&v) {
                    *wi = f.sub(wi, &f.mul(&c, vi));
                }
            }
        }
        basis.push(v);
        entries.push(a);
    }
    Diagonalization { basis, entries }
}

/// Π_{i<j} (a_i, a_j)_F.
pub fn hasse_of<F: BaseField>(f: &F, a: &[F::Elem]) -> Result<i8, BaseError> {
    let mut h = 1i8;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            h *= f.hilbert(&a[i], &a[j])?;
        }
    }
    Ok(h)
}

/// Parse "diag:a,b,..." or "gram:a,b;c,d".
pub fn parse_form<F: BaseField>(f: &F, s: &str) -> Result<QuadraticForm<F>, BaseError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("diag:") {
        let e: Result<Vec<_>, _> = rest.split(',').map(|t| f.parse(t)).collect();
        return QuadraticForm::diagonal(f.clone(), &e?);
    }
    if let Some(rest) = s.strip_prefix("gram:") {
        let m = parse_matrix(f, rest)?;
        return QuadraticForm::new(f.clone(), m);
    }
    Err(BaseError::Parse(s.into()))
}

/// Row-major "a,b;c,d" or a JSON array of rows.
pub fn parse_matrix<F: BaseField>(f: &F, s: &str) -> Result<Mat<F::Elem>, BaseError> {
    let s = s.trim();
    let rows: Vec<Vec<String>> = if s.starts_with('[') {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|_| BaseError::Parse(s.into()))?;
        let arr = v.as_array().ok_or_else(|| BaseError::Parse(s.into()))?;
        arr.iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| BaseError::Parse(s.into()))?
                    .iter()
                    .map(|x| match x {
                        serde_json::Value::Number(n) => Ok(n.to_string()),
                        serde_json::Value::String(t) => Ok(t.clone()),
                        _ => Err(BaseError::Parse(s.into())),
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?
    } else {
        s.split(';').map(|r| r.split(',').map(|t| t.trim().to_string()).collect()).collect()
    };
    let c = rows.first().map_or(0, |r| r.len());
    if c == 0 || rows.iter().any(|r| r.len() != c) {
        return Err(BaseError::Parse(s.into()));
    }
    let parsed: Result<Vec<Vec<F::Elem>>, _> = rows.iter().map(|r| r.iter().map(|t| f.parse(t)).collect()).collect();
    Ok(Mat::from_rows(parsed?))
}
