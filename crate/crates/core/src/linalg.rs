//! Dense matrices over any `Field`, with the structure passed explicitly.

use crate::coeff::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors, all of length `n`.
    pub fn from_cols(n: usize, cols: &[Vec<E>]) -> Self {
        Mat::from_fn(n, cols.len(), |r, c| cols[c][r].clone())
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<E> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Mat::from_fn(nr, nc, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Mat::from_fn(self.rows, self.cols + o.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                o.get(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Mat { rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Assemble [[a, b], [c, d]].
    pub fn blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn map<T: Clone>(&self, f: impl Fn(&E) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Mat<F::Elem> {
    Mat { rows, cols, data: vec![f.zero(); rows * cols] }
}

pub fn identity<F: Field>(f: &F, n: usize) -> Mat<F::Elem> {
    Mat::from_fn(n, n, |r, c| if r == c { f.one() } else { f.zero() })
}

pub fn diag<F: Field>(f: &F, d: &[F::Elem]) -> Mat<F::Elem> {
    Mat::from_fn(d.len(), d.len(), |r, c| if r == c { d[r].clone() } else { f.zero() })
}

pub fn mul<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch in product");
    let mut out = zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if f.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let y = b.get(k, j);
                if f.is_zero(y) {
                    continue;
                }
                let idx = i * b.cols + j;
                out.data[idx] = f.add(&out.data[idx], &f.mul(x, y));
            }
        }
    }
    out
}

pub fn mul_vec<F: Field>(f: &F, a: &Mat<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|r| {
            let mut acc = f.zero();
            for (c, x) in v.iter().enumerate() {
                let y = a.get(r, c);
                if !f.is_zero(x) && !f.is_zero(y) {
                    acc = f.add(&acc, &f.mul(y, x));
                }
            }
            acc
        })
        .collect()
}

pub fn add<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Mat { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| f.add(x, y)).collect() }
}

pub fn sub<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Mat { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| f.sub(x, y)).collect() }
}

pub fn scale<F: Field>(f: &F, s: &F::Elem, a: &Mat<F::Elem>) -> Mat<F::Elem> {
    a.map(|x| f.mul(s, x))
}

pub fn neg<F: Field>(f: &F, a: &Mat<F::Elem>) -> Mat<F::Elem> {
    a.map(|x| f.neg(x))
}

pub fn is_zero<F: Field>(f: &F, a: &Mat<F::Elem>) -> bool {
    a.data.iter().all(|x| f.is_zero(x))
}

pub fn trace<F: Field>(f: &F, a: &Mat<F::Elem>) -> F::Elem {
    (0..a.rows.min(a.cols)).fold(f.zero(), |acc, i| f.add(&acc, a.get(i, i)))
}

pub fn kron<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    Mat::from_fn(a.rows * b.rows, a.cols * b.cols, |r, c| {
        f.mul(a.get(r / b.rows, c / b.cols), b.get(r % b.rows, c % b.cols))
    })
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(f: &F, a: &Mat<F::Elem>) -> (Mat<F::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(piv) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
            continue;
        };
        if piv != row {
            for c in 0..m.cols {
                m.data.swap(piv * m.cols + c, row * m.cols + c);
            }
        }
        let inv = f.inv(m.get(row, col)).expect("nonzero pivot");
        for c in col..m.cols {
            let v = f.mul(m.get(row, c), &inv);
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col).clone();
            if f.is_zero(&factor) {
                continue;
            }
            for c in col..m.cols {
                let pv = m.get(row, c);
                if f.is_zero(pv) {
                    continue;
                }
                let v = f.sub(m.get(r, c), &f.mul(&factor, pv));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, a: &Mat<F::Elem>) -> usize {
    rref(f, a).1.len()
}

/// Basis of {x : a x = 0}.
pub fn nullspace<F: Field>(f: &F, a: &Mat<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (r, pivots) = rref(f, a);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); a.cols];
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, fc));
            }
            v
        })
        .collect()
}

pub fn inverse<F: Field>(f: &F, a: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    assert!(a.is_square());
    let n = a.rows;
    let aug = a.hstack(&identity(f, n));
    let (r, pivots) = rref(f, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.block(0, n, n, n))
}

pub fn det<F: Field>(f: &F, a: &Mat<F::Elem>) -> F::Elem {
    assert!(a.is_square());
    let n = a.rows;
    let mut m = a.clone();
    let mut d = f.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !f.is_zero(m.get(r, col))) else {
            return f.zero();
        };
        if piv != col {
            for c in 0..n {
                m.data.swap(piv * n + c, col * n + c);
            }
            d = f.neg(&d);
        }
        let p = m.get(col, col).clone();
        d = f.mul(&d, &p);
        let inv = f.inv(&p).expect("nonzero pivot");
        for r in col + 1..n {
            let factor = f.mul(m.get(r, col), &inv);
            if f.is_zero(&factor) {
                continue;
            }
            for c in col..n {
                let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(col, c)));
                m.set(r, c, v);
            }
        }
    }
    d
}

/// One solution of a x = b, if any.
pub fn solve<F: Field>(f: &F, a: &Mat<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(a.rows, b.len());
    let bm = Mat::from_fn(b.len(), 1, |r, _| b[r].clone());
    let (r, pivots) = rref(f, &a.hstack(&bm));
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![f.zero(); a.cols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = r.get(i, a.cols).clone();
    }
    Some(x)
}

/// Columns of `a` forming a basis of its column space.
pub fn column_basis<F: Field>(f: &F, a: &Mat<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (_, pivots) = rref(f, a);
    pivots.iter().map(|&c| a.col(c)).collect()
}

/// Extend independent vectors `basis` (length n) to a basis of F^n with
/// standard vectors, returning only the added vectors.
pub fn complete_basis<F: Field>(f: &F, n: usize, basis: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let mut cur: Vec<Vec<F::Elem>> = basis.to_vec();
    let mut added = Vec::new();
    for i in 0..n {
        let mut e = vec![f.zero(); n];
        e[i] = f.one();
        let mut trial = cur.clone();
        trial.push(e.clone());
        if rank(f, &Mat::from_cols(n, &trial)) == trial.len() {
            cur.push(e.clone());
            added.push(e);
        }
        if cur.len() == n {
            break;
        }
    }
    added
}

/// Extend independent `basis` vectors to span the subspace spanned by
/// `ambient`, returning only the vectors added (taken from `ambient`).
pub fn complete_within<F: Field>(f: &F, n: usize, basis: &[Vec<F::Elem>], ambient: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let mut cur: Vec<Vec<F::Elem>> = basis.to_vec();
    let mut added = Vec::new();
    for v in ambient {
        let mut trial = cur.clone();
        trial.push(v.clone());
        if rank(f, &Mat::from_cols(n, &trial)) == trial.len() {
            cur.push(v.clone());
            added.push(v.clone());
        }
    }
    added
}

/// Basis of span(u) ∩ span(v) for vectors of length n.
pub fn intersect<F: Field>(f: &F, n: usize, u: &[Vec<F::Elem>], v: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    let um = Mat::from_cols(n, u);
    let vm = Mat::from_cols(n, v);
    let m = um.hstack(&neg(f, &vm));
    let ns = nullspace(f, &m);
    let vecs: Vec<Vec<F::Elem>> = ns.iter().map(|c| mul_vec(f, &um, &c[..u.len()])).collect();
    if vecs.is_empty() {
        return vecs;
    }
    column_basis(f, &Mat::from_cols(n, &vecs))
}

pub fn in_span<F: Field>(f: &F, n: usize, u: &[Vec<F::Elem>], v: &[F::Elem]) -> bool {
    if u.is_empty() {
        return v.iter().all(|x| f.is_zero(x));
    }
    solve(f, &Mat::from_cols(n, u), v).is_some()
}

/// Characteristic polynomial det(tI − a) by Berkowitz's division-free
/// algorithm; coefficients from the leading 1 down to the constant term.
pub fn charpoly<F: Field>(f: &F, a: &Mat<F::Elem>) -> Vec<F::Elem> {
    assert!(a.is_square());
    let n = a.rows;
    if n == 0 {
        return vec![f.one()];
    }
    // vect holds the coefficients for the leading r×r principal submatrix
    let mut vect: Vec<F::Elem> = vec![f.one(), f.neg(a.get(0, 0))];
    for r in 1..n {
        // a = [[A_r, S], [R, a_rr]] with A_r the leading r×r block
        let s: Vec<F::Elem> = (0..r).map(|i| a.get(i, r).clone()).collect();
        let row: Vec<F::Elem> = (0..r).map(|j| a.get(r, j).clone()).collect();
        let ar = a.block(0, 0, r, r);
        // Toeplitz column: 1, -a_rr, -R S, -R A S, ..., -R A^{r-1} S
        let mut col = vec![f.one(), f.neg(a.get(r, r))];
        let mut v = s.clone();
        for _ in 0..r {
            let dotp = row.iter().zip(&v).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)));
            col.push(f.neg(&dotp));
            v = mul_vec(f, &ar, &v);
        }
        // new = T · vect with T lower-triangular Toeplitz of size (r+2)×(r+1)
        let mut new = vec![f.zero(); r + 2];
        for (i, slot) in new.iter_mut().enumerate() {
            let mut acc = f.zero();
            for (j, vj) in vect.iter().enumerate() {
                if i >= j {
                    acc = f.add(&acc, &f.mul(&col[i - j], vj));
                }
            }
            *slot = acc;
        }
        vect = new;
    }
    vect
}
