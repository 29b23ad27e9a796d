//! Linear systems whose unknowns are matrix blocks `Φ_key`, with equations
//! of the form `Σ ± L · Φ_key · R = B`.

use std::collections::BTreeMap;

use super::matrix::Matrix;
use super::ring::{BaseRing, Scalar};
use super::snf::{snf, Want};

/// Layout of block unknowns inside one flat vector (row-major per block).
#[derive(Clone, Debug, Default)]
pub(crate) struct BlockUnknowns {
    pub offsets: BTreeMap<(i64, i64), (usize, usize, usize)>,
    pub count: usize,
}

impl BlockUnknowns {
    pub fn push(&mut self, key: (i64, i64), rows: usize, cols: usize) {
        if rows > 0 && cols > 0 {
            self.offsets.insert(key, (self.count, rows, cols));
            self.count += rows * cols;
        }
    }

    /// The block `Φ_key` read from column `col` of `v` (zero if absent).
    pub fn block(&self, v: &Matrix, col: usize, key: (i64, i64), rows: usize, cols: usize) -> Matrix {
        match self.offsets.get(&key) {
            Some(&(off, t, s)) => Matrix::from_fn(v.ring(), t, s, |i, j| v.get(off + i * s + j, col).clone()),
            None => Matrix::zero(v.ring(), rows, cols),
        }
    }
}

pub(crate) struct LinearSystem {
    ring: BaseRing,
    rows: Vec<BTreeMap<usize, Scalar>>,
    rhs: Vec<Scalar>,
}

/// One term `± l · Φ_key · r`; `true` negates.
pub(crate) type Term<'a> = (&'a Matrix, (i64, i64), &'a Matrix, bool);

impl LinearSystem {
    pub fn new(ring: BaseRing) -> Self {
        LinearSystem { ring, rows: Vec::new(), rhs: Vec::new() }
    }

    /// Adds the equation block `Σ terms = rhs` (zero right-hand side if `None`).
    pub fn add(&mut self, unknowns: &BlockUnknowns, terms: &[Term<'_>], rhs: Option<&Matrix>) {
        let ring = self.ring;
        let Some(&(l, _, r, _)) = terms.first() else { return };
        let (h, w) = (l.rows(), r.cols());
        let base = self.rows.len();
        self.rows.extend((0..h * w).map(|_| BTreeMap::new()));
        match rhs {
            Some(b) => self.rhs.extend((0..h * w).map(|k| b.get(k / w, k % w).clone())),
            None => self.rhs.extend((0..h * w).map(|_| ring.zero())),
        }
        for &(l, key, r, negate) in terms {
            let Some(&(off, t, s)) = unknowns.offsets.get(&key) else { continue };
            for i in 0..h {
                for k in 0..t {
                    let a = l.get(i, k);
                    if ring.is_zero(a) {
                        continue;
                    }
                    for lcol in 0..s {
                        for j in 0..w {
                            let b = r.get(lcol, j);
                            if ring.is_zero(b) {
                                continue;
                            }
                            let mut c = ring.mul(a, b);
                            if negate {
                                c = ring.neg(&c);
                            }
                            let e = self.rows[base + i * w + j].entry(off + k * s + lcol).or_insert_with(|| ring.zero());
                            *e = ring.add(e, &c);
                        }
                    }
                }
            }
        }
    }

    fn live(&self) -> Vec<usize> {
        let ring = self.ring;
        (0..self.rows.len())
            .filter(|&i| self.rows[i].values().any(|v| !ring.is_zero(v)) || !ring.is_zero(&self.rhs[i]))
            .collect()
    }

    /// Coefficient matrix (zero equations dropped).
    pub fn matrix(&self, cols: usize) -> Matrix {
        let live = self.live();
        let mut m = Matrix::zero(self.ring, live.len(), cols);
        for (i, &k) in live.iter().enumerate() {
            for (&j, v) in &self.rows[k] {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// A particular solution of the inhomogeneous system, if one exists.
    pub fn solve(&self, cols: usize) -> Option<Matrix> {
        let a = self.matrix(cols);
        let live = self.live();
        let b = Matrix::from_fn(self.ring, live.len(), 1, |i, _| self.rhs[live[i]].clone());
        solve(&a, &b)
    }
}

/// Some `x` with `a · x = b`, over the ring of `a`.
pub fn solve(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let ring = a.ring();
    let s = snf(a, Want { u: true, v: true, ..Want::NONE });
    let c = s.u.as_ref().unwrap().mul(b);
    let mut y = Matrix::zero(ring, a.cols(), b.cols());
    for j in 0..b.cols() {
        for i in 0..c.rows() {
            let ci = c.get(i, j);
            if i < s.rank {
                let d = s.diagonal.get(i, i);
                if !ring.divides(d, ci) {
                    return None;
                }
                y.set(i, j, ring.div_exact(ci, d));
            } else if !ring.is_zero(ci) {
                return None;
            }
        }
    }
    Some(s.v.as_ref().unwrap().mul(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: BaseRing = BaseRing::Integers;

    #[test]
    fn solves_over_integers() {
        let a = Matrix::from_rows(Z, &[[2, 4], [6, 8]]);
        let b = Matrix::from_rows(Z, &[[2], [2]]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
        assert!(solve(&Matrix::from_rows(Z, &[[2]]), &Matrix::from_rows(Z, &[[1]])).is_none());
    }
}
