//! Monomial matrices and the linear algebra of intertwiner spaces.

use crate::coeff::Field;
use crate::linalg::{self, Mat};

/// A monomial matrix: column j has the single entry `val[j]` in row
/// `perm[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial<E> {
    pub perm: Vec<usize>,
    pub val: Vec<E>,
}

impl<E: Clone + PartialEq> Monomial<E> {
    pub fn identity<R: Field<Elem = E>>(r: &R, n: usize) -> Self {
        Monomial { perm: (0..n).collect(), val: vec![r.one(); n] }
    }

    pub fn scalar<R: Field<Elem = E>>(c: E, n: usize) -> Self {
        Monomial { perm: (0..n).collect(), val: vec![c; n] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn mul<R: Field<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        let perm = o.perm.iter().map(|&k| self.perm[k]).collect();
        let val = o.perm.iter().zip(&o.val).map(|(&k, v)| r.mul(&self.val[k], v)).collect();
        Monomial { perm, val }
    }

    pub fn inverse<R: Field<Elem = E>>(&self, r: &R) -> Option<Self> {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut val = vec![r.zero(); n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            val[self.perm[j]] = r.inv(&self.val[j])?;
        }
        Some(Monomial { perm, val })
    }

    pub fn transpose<R: Field<Elem = E>>(&self, r: &R) -> Self {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut val = vec![r.zero(); n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            val[self.perm[j]] = self.val[j].clone();
        }
        Monomial { perm, val }
    }

    pub fn scale<R: Field<Elem = E>>(&self, r: &R, c: &E) -> Self {
        Monomial { perm: self.perm.clone(), val: self.val.iter().map(|v| r.mul(c, v)).collect() }
    }

    pub fn to_dense<R: Field<Elem = E>>(&self, r: &R) -> Mat<E> {
        let n = self.dim();
        let mut m = linalg::zeros(r, n, n);
        for j in 0..n {
            m.set(self.perm[j], j, self.val[j].clone());
        }
        m
    }

    pub fn apply<R: Field<Elem = E>>(&self, r: &R, v: &[E]) -> Vec<E> {
        let mut out = vec![r.zero(); v.len()];
        for j in 0..v.len() {
            out[self.perm[j]] = r.mul(&self.val[j], &v[j]);
        }
        out
    }

    /// Kronecker product a ⊗ b (b is the fast index).
    pub fn kron<R: Field<Elem = E>>(r: &R, a: &Self, b: &Self) -> Self {
        let nb = b.dim();
        let mut perm = Vec::with_capacity(a.dim() * nb);
        let mut val = Vec::with_capacity(a.dim() * nb);
        for i in 0..a.dim() {
            for j in 0..nb {
                perm.push(a.perm[i] * nb + b.perm[j]);
                val.push(r.mul(&a.val[i], &b.val[j]));
            }
        }
        Monomial { perm, val }
    }

    /// Block-diagonal sum a ⊕ b.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let na = a.dim();
        let mut perm = a.perm.clone();
        perm.extend(b.perm.iter().map(|p| p + na));
        let mut val = a.val.clone();
        val.extend(b.val.iter().cloned());
        Monomial { perm, val }
    }

    /// The product m·d for a dense d.
    pub fn mul_dense<R: Field<Elem = E>>(&self, r: &R, d: &Mat<E>) -> Mat<E> {
        let n = self.dim();
        let mut out = linalg::zeros(r, n, d.cols);
        for j in 0..n {
            let (row, v) = (self.perm[j], &self.val[j]);
            for c in 0..d.cols {
                out.set(row, c, r.mul(v, d.get(j, c)));
            }
        }
        out
    }

    /// The product d·m for a dense d.
    pub fn dense_mul<R: Field<Elem = E>>(&self, r: &R, d: &Mat<E>) -> Mat<E> {
        let n = self.dim();
        let mut out = linalg::zeros(r, d.rows, n);
        for j in 0..n {
            let (k, v) = (self.perm[j], &self.val[j]);
            for row in 0..d.rows {
                out.set(row, j, r.mul(d.get(row, k), v));
            }
        }
        out
    }
}

/// Basis of {T : T·a_g = b_g·T for all g} for monomial pairs (a_g, b_g) of
/// sizes n_a and n_b. Entries of T are linked along orbits of
/// (i, j) ↦ (πb(i), πa(j)); an orbit carries a free parameter unless its
/// multipliers are inconsistent, in which case it vanishes.
pub fn hom_space_monomial<R: Field>(r: &R, pairs: &[(Monomial<R::Elem>, Monomial<R::Elem>)]) -> Vec<Mat<R::Elem>> {
    let (na, nb) = match pairs.first() {
        Some((a, b)) => (a.dim(), b.dim()),
        None => return Vec::new(),
    };
    let nodes = na * nb;
    let id = |i: usize, j: usize| i * na + j;
    let mut parent: Vec<usize> = (0..nodes).collect();
    // value(node) = pot[node] · value(parent chain root)
    let mut pot: Vec<R::Elem> = vec![r.one(); nodes];
    let mut dead = vec![false; nodes];

    fn find<R: Field>(r: &R, parent: &mut [usize], pot: &mut [R::Elem], x: usize) -> usize {
        let mut path = Vec::new();
        let mut cur = x;
        while parent[cur] != cur {
            path.push(cur);
            cur = parent[cur];
        }
        let root = cur;
        // compress from the top down
        for &node in path.iter().rev() {
            let p = parent[node];
            if p != root {
                pot[node] = r.mul(&pot[node], &pot[p]);
            }
            parent[node] = root;
        }
        root
    }

    for (a, b) in pairs {
        // T[πb i][πa j] = (b_i / a_j) · T[i][j]
        let ainv: Vec<R::Elem> = a.val.iter().map(|v| r.inv(v).expect("monomial entries are units")).collect();
        for i in 0..nb {
            for j in 0..na {
                let k = r.mul(&b.val[i], &ainv[j]);
                let (u, v) = (id(i, j), id(b.perm[i], a.perm[j]));
                let ru = find(r, &mut parent, &mut pot, u);
                let rv = find(r, &mut parent, &mut pot, v);
                // value(v) = k·value(u) = k·pot[u]·root_u ; value(v) = pot[v]·root_v
                if ru == rv {
                    if r.mul(&k, &pot[u]) != pot[v] {
                        dead[ru] = true;
                    }
                } else {
                    // attach rv under ru: root_v = (k·pot[u]/pot[v])·root_u
                    let c = r.div(&r.mul(&k, &pot[u]), &pot[v]).expect("units");
                    parent[rv] = ru;
                    pot[rv] = c;
                    if dead[rv] {
                        dead[ru] = true;
                    }
                }
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    for x in 0..nodes {
        let rt = find(r, &mut parent, &mut pot, x);
        if rt == x && !dead[x] {
            roots.push(x);
        }
    }
    roots
        .iter()
        .map(|&root| {
            let mut t = linalg::zeros(r, nb, na);
            for x in 0..nodes {
                if parent[x] == root {
                    t.set(x / na, x % na, pot[x].clone());
                }
            }
            t.set(root / na, root % na, r.one());
            t
        })
        .collect()
}

pub fn commutant_dim_monomial<R: Field>(r: &R, gens: &[Monomial<R::Elem>]) -> usize {
    let pairs: Vec<_> = gens.iter().map(|g| (g.clone(), g.clone())).collect();
    hom_space_monomial(r, &pairs).len()
}

/// Basis of {T : T·a_g = b_g·T} for dense pairs, by a direct linear solve
/// on the n_b·n_a entries of T.
pub fn hom_space_dense<R: Field>(r: &R, pairs: &[(Mat<R::Elem>, Mat<R::Elem>)]) -> Vec<Mat<R::Elem>> {
    let (na, nb) = match pairs.first() {
        Some((a, b)) => (a.rows, b.rows),
        None => return Vec::new(),
    };
    let unknowns = na * nb;
    let mut rows: Vec<Vec<R::Elem>> = Vec::new();
    for (a, b) in pairs {
        // (T a − b T)[i][j] = Σ_k T[i][k] a[k][j] − Σ_k b[i][k] T[k][j]
        for i in 0..nb {
            for j in 0..na {
                let mut row = vec![r.zero(); unknowns];
                for k in 0..na {
                    let v = a.get(k, j);
                    if !r.is_zero(v) {
                        row[i * na + k] = r.add(&row[i * na + k], v);
                    }
                }
                for k in 0..nb {
                    let v = b.get(i, k);
                    if !r.is_zero(v) {
                        row[k * na + j] = r.sub(&row[k * na + j], v);
                    }
                }
                if row.iter().any(|x| !r.is_zero(x)) {
                    rows.push(row);
                }
            }
        }
        // keep the system small
        if rows.len() > 2 * unknowns {
            let (red, piv) = linalg::rref(r, &Mat::from_rows(rows.clone()));
            rows = (0..piv.len()).map(|i| red.row(i)).collect();
        }
    }
    let sys = if rows.is_empty() { linalg::zeros(r, 1, unknowns) } else { Mat::from_rows(rows) };
    linalg::nullspace(r, &sys).into_iter().map(|v| Mat::from_fn(nb, na, |i, j| v[i * na + j].clone())).collect()
}

pub fn commutant_dim_dense<R: Field>(r: &R, gens: &[Mat<R::Elem>]) -> usize {
    let pairs: Vec<_> = gens.iter().map(|g| (g.clone(), g.clone())).collect();
    hom_space_dense(r, &pairs).len()
}
