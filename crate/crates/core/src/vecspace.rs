//! Enumeration of F_q^m with vectors indexed by Σ y_i q^i.

use crate::basefield::Fq;
use crate::coeff::Field;

#[derive(Clone, Debug)]
pub struct FqVecSpace {
    pub field: Fq,
    pub m: usize,
    q: usize,
    vecs: Vec<Vec<u32>>,
    add: Vec<u32>,
    neg: Vec<u32>,
}

impl FqVecSpace {
    pub fn new(field: Fq, m: usize) -> Self {
        let q = field.q() as usize;
        let n = q.pow(m as u32);
        let vecs: Vec<Vec<u32>> = (0..n)
            .map(|mut i| {
                (0..m)
                    .map(|_| {
                        let d = (i % q) as u32;
                        i /= q;
                        d
                    })
                    .collect()
            })
            .collect();
        let idx = |v: &[u32]| v.iter().rev().fold(0usize, |a, &c| a * q + c as usize);
        let mut add = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let s: Vec<u32> = vecs[a].iter().zip(&vecs[b]).map(|(x, y)| field.add(x, y)).collect();
                add[a * n + b] = idx(&s) as u32;
            }
        }
        let neg = (0..n).map(|a| idx(&vecs[a].iter().map(|x| field.neg(x)).collect::<Vec<_>>()) as u32).collect();
        FqVecSpace { field, m, q, vecs, add, neg }
    }

    pub fn size(&self) -> usize {
        self.vecs.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn vec(&self, i: usize) -> &[u32] {
        &self.vecs[i]
    }

    pub fn index(&self, v: &[u32]) -> usize {
        v.iter().rev().fold(0usize, |a, &c| a * self.q + c as usize)
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.vecs.len() + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        let f = &self.field;
        a.iter().zip(b).fold(0, |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
    }
}
