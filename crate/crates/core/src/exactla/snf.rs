use super::matrix::Matrix;
use super::ring::{BaseRing, Scalar};
use crate::error::{Error, Result};

/// Which transformation matrices to accumulate during reduction.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Want {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Want {
    pub const NONE: Want = Want { u: false, u_inv: false, v: false, v_inv: false };
    #[cfg(test)]
    pub const ALL: Want = Want { u: true, u_inv: true, v: true, v_inv: true };
}

/// `U · m · V = diagonal` with invertible `U`, `V` over the ring of `m`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diagonal: Matrix,
    pub rank: usize,
    pub u: Option<Matrix>,
    pub u_inv: Option<Matrix>,
    pub v: Option<Matrix>,
    pub v_inv: Option<Matrix>,
}

impl Snf {
    /// The non-zero diagonal entries, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<Scalar> {
        (0..self.rank).map(|i| self.diagonal.get(i, i).clone()).collect()
    }
}

struct Reducer {
    ring: BaseRing,
    a: Matrix,
    u: Option<Matrix>,
    ui: Option<Matrix>,
    v: Option<Matrix>,
    vi: Option<Matrix>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.ui {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.vi {
            vi.swap_rows(i, j);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, c: &Scalar) {
        self.a.add_row_multiple(dst, src, c);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, c);
        }
        if let Some(ui) = &mut self.ui {
            ui.add_col_multiple(src, dst, &self.ring.neg(c));
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &Scalar) {
        self.a.add_col_multiple(dst, src, c);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, c);
        }
        if let Some(vi) = &mut self.vi {
            vi.add_row_multiple(src, dst, &self.ring.neg(c));
        }
    }

    fn scale_row(&mut self, i: usize, unit: &Scalar) {
        self.a.scale_row(i, unit);
        if let Some(u) = &mut self.u {
            u.scale_row(i, unit);
        }
        if let Some(ui) = &mut self.ui {
            ui.scale_col(i, &self.ring.inverse(unit));
        }
    }

    fn inverse_2x2(&self, m: &[Scalar; 4]) -> [Scalar; 4] {
        let r = self.ring;
        [m[3].clone(), r.neg(&m[1]), r.neg(&m[2]), m[0].clone()]
    }

    /// Applies a determinant-one 2×2 row operation.
    fn mix_rows(&mut self, i: usize, j: usize, m: &[Scalar; 4]) {
        let inv = self.inverse_2x2(m);
        self.a.mix_rows(i, j, m);
        if let Some(u) = &mut self.u {
            u.mix_rows(i, j, m);
        }
        if let Some(ui) = &mut self.ui {
            ui.mix_cols(i, j, &inv);
        }
    }

    /// Applies a determinant-one 2×2 column operation.
    fn mix_cols(&mut self, i: usize, j: usize, m: &[Scalar; 4]) {
        let inv = self.inverse_2x2(m);
        self.a.mix_cols(i, j, m);
        if let Some(v) = &mut self.v {
            v.mix_cols(i, j, m);
        }
        if let Some(vi) = &mut self.vi {
            vi.mix_rows(i, j, &inv);
        }
    }

    fn entry(&self, i: usize, j: usize) -> &Scalar {
        self.a.get(i, j)
    }

    /// Smallest non-zero entry in the lower-right block starting at `k`.
    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let ring = self.ring;
        let mut best: Option<(usize, usize)> = None;
        for j in k..self.a.cols {
            for i in k..self.a.rows {
                let x = self.entry(i, j);
                if ring.is_zero(x) {
                    continue;
                }
                if ring.is_unit(x) {
                    return Some((i, j));
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => ring.size_cmp(x, self.entry(bi, bj)).is_lt(),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Clears row and column `k` using the pivot at `(k, k)`.
    fn eliminate(&mut self, k: usize) {
        let ring = self.ring;
        let (m, n) = self.a.dims();
        loop {
            let mut leftover = false;
            for i in k + 1..m {
                if ring.is_zero(self.entry(i, k)) {
                    continue;
                }
                let (q, r) = ring.div_rem(self.entry(i, k), self.entry(k, k));
                self.add_row(i, k, &ring.neg(&q));
                leftover |= !ring.is_zero(&r);
            }
            for j in k + 1..n {
                if ring.is_zero(self.entry(k, j)) {
                    continue;
                }
                let (q, r) = ring.div_rem(self.entry(k, j), self.entry(k, k));
                self.add_col(j, k, &ring.neg(&q));
                leftover |= !ring.is_zero(&r);
            }
            if !leftover {
                return;
            }
            let mut best: Option<(bool, usize)> = None;
            let mut best_val: Option<Scalar> = None;
            for i in k + 1..m {
                let x = self.entry(i, k);
                if !ring.is_zero(x) && best_val.as_ref().is_none_or(|b| ring.size_cmp(x, b).is_lt()) {
                    best = Some((true, i));
                    best_val = Some(x.clone());
                }
            }
            for j in k + 1..n {
                let x = self.entry(k, j);
                if !ring.is_zero(x) && best_val.as_ref().is_none_or(|b| ring.size_cmp(x, b).is_lt()) {
                    best = Some((false, j));
                    best_val = Some(x.clone());
                }
            }
            match best {
                Some((true, i)) => self.swap_rows(k, i),
                Some((false, j)) => self.swap_cols(k, j),
                None => return,
            }
        }
    }

    /// Makes each diagonal entry divide the next by gcd/lcm swaps.
    fn fix_divisibility(&mut self, rank: usize) {
        let ring = self.ring;
        for i in 0..rank {
            for j in i + 1..rank {
                let a = self.entry(i, i).clone();
                let b = self.entry(j, j).clone();
                if ring.divides(&a, &b) {
                    continue;
                }
                let (g, s, t) = ring.gcdext(&a, &b);
                let a_g = ring.div_exact(&a, &g);
                let b_g = ring.div_exact(&b, &g);
                let row_op = [s, t.clone(), ring.neg(&b_g), a_g.clone()];
                let col_op = [ring.one(), ring.neg(&ring.mul(&t, &b_g)), ring.one(), ring.mul(&row_op[0], &a_g)];
                self.mix_rows(i, j, &row_op);
                self.mix_cols(i, j, &col_op);
                debug_assert!(ring.is_zero(self.entry(i, j)) && ring.is_zero(self.entry(j, i)));
            }
        }
    }
}

/// Smith normal form over any of the supported rings (fields give the rank normal form).
pub(crate) fn snf(m: &Matrix, want: Want) -> Snf {
    let ring = m.ring();
    let (rows, cols) = m.dims();
    let mut red = Reducer {
        ring,
        a: m.clone(),
        u: want.u.then(|| Matrix::identity(ring, rows)),
        ui: want.u_inv.then(|| Matrix::identity(ring, rows)),
        v: want.v.then(|| Matrix::identity(ring, cols)),
        vi: want.v_inv.then(|| Matrix::identity(ring, cols)),
    };
    let mut rank = 0;
    while rank < rows.min(cols) {
        let Some((i, j)) = red.find_pivot(rank) else { break };
        red.swap_rows(rank, i);
        red.swap_cols(rank, j);
        red.eliminate(rank);
        rank += 1;
    }
    if !ring.is_field() {
        red.fix_divisibility(rank);
    }
    for k in 0..rank {
        let unit = ring.normalizer(red.entry(k, k));
        if unit != ring.one() {
            red.scale_row(k, &unit);
        }
    }
    Snf { diagonal: red.a, rank, u: red.u, u_inv: red.ui, v: red.v, v_inv: red.vi }
}

/// `(U, D, V)` with `U·m·V = D` in Smith form; integers only.
pub fn smith_normal_form(m: &Matrix) -> Result<(Matrix, Matrix, Matrix)> {
    if m.ring() != BaseRing::Integers {
        return Err(Error::RequiresIntegers { op: "smith_normal_form", ring: m.ring() });
    }
    let s = snf(m, Want { u: true, v: true, ..Want::NONE });
    Ok((s.u.unwrap(), s.diagonal, s.v.unwrap()))
}

/// `(U, D, V)` with `D = diag(1, …, 1, 0, …)`; fields only.
pub fn rank_normal_form(m: &Matrix) -> Result<(Matrix, Matrix, Matrix)> {
    if !m.ring().is_field() {
        return Err(Error::RequiresField { op: "rank_normal_form", ring: m.ring() });
    }
    let s = snf(m, Want { u: true, v: true, ..Want::NONE });
    Ok((s.u.unwrap(), s.diagonal, s.v.unwrap()))
}

/// Rank (over the fraction field for ℤ).
pub fn rank(m: &Matrix) -> usize {
    snf(m, Want::NONE).rank
}

/// Non-unit invariant factors of `m` as integers (empty over fields).
pub fn torsion_factors(m: &Matrix) -> Vec<num_bigint::BigInt> {
    let ring = m.ring();
    if ring.is_field() {
        return Vec::new();
    }
    snf(m, Want::NONE)
        .invariant_factors()
        .iter()
        .filter(|d| !ring.is_unit(d))
        .map(|d| ring.to_bigint(d).expect("integer factor"))
        .collect()
}

/// Basis of the kernel of `m` as the columns of an `cols × k` matrix.
pub fn kernel_basis(m: &Matrix) -> Matrix {
    let s = snf(m, Want { v: true, ..Want::NONE });
    let v = s.v.unwrap();
    v.submatrix(0..m.cols(), s.rank..m.cols())
}

/// Echelon basis of the row span of `m` (Hermite normal form over ℤ,
/// reduced row echelon form over fields), plus pivot columns.
pub(crate) fn row_echelon(m: &Matrix) -> (Matrix, Vec<usize>) {
    let ring = m.ring();
    let (rows, cols) = m.dims();
    let mut a = m.clone();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut piv: Option<usize> = None;
            for i in r..rows {
                let x = a.get(i, c);
                if ring.is_zero(x) {
                    continue;
                }
                if piv.is_none_or(|p| ring.size_cmp(x, a.get(p, c)).is_lt()) {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            a.swap_rows(r, p);
            let mut leftover = false;
            for i in r + 1..rows {
                if ring.is_zero(a.get(i, c)) {
                    continue;
                }
                let (q, rem) = ring.div_rem(a.get(i, c), a.get(r, c));
                a.add_row_multiple(i, r, &ring.neg(&q));
                leftover |= !ring.is_zero(&rem);
            }
            if leftover {
                continue;
            }
            let unit = ring.normalizer(a.get(r, c));
            if unit != ring.one() {
                a.scale_row(r, &unit);
            }
            let pivot = a.get(r, c).clone();
            for i in 0..r {
                let x = a.get(i, c);
                if ring.is_zero(x) {
                    continue;
                }
                let rem = ring.reduce_mod(x, &pivot);
                let q = ring.div_exact(&ring.sub(x, &rem), &pivot);
                a.add_row_multiple(i, r, &ring.neg(&q));
            }
            pivots.push(c);
            r += 1;
            break;
        }
    }
    (a.submatrix(0..r, 0..cols), pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: BaseRing = BaseRing::Integers;

    fn check(m: &Matrix) -> Snf {
        let s = snf(m, Want::ALL);
        let (u, ui, v, vi) = (s.u.clone().unwrap(), s.u_inv.clone().unwrap(), s.v.clone().unwrap(), s.v_inv.clone().unwrap());
        assert_eq!(&(&u * m) * &v, s.diagonal);
        assert!((&u * &ui).is_identity());
        assert!((&v * &vi).is_identity());
        s
    }

    #[test]
    fn identity_is_fixed() {
        let (u, d, v) = smith_normal_form(&Matrix::identity(Z, 2)).unwrap();
        assert!(u.is_identity() && d.is_identity() && v.is_identity());
    }

    #[test]
    fn two_by_two_example() {
        // d1 = gcd(2,4,6,8) = 2 and d1·d2 = |2·8 − 4·6| = 8.
        let s = check(&Matrix::from_rows(Z, &[[2, 4], [6, 8]]));
        assert_eq!(s.diagonal, Matrix::from_rows(Z, &[[2, 0], [0, 4]]));
    }

    #[test]
    fn zero_matrix() {
        let (_, d, _) = smith_normal_form(&Matrix::zero(Z, 3, 2)).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn needs_divisibility_fix() {
        let s = check(&Matrix::from_rows(Z, &[[2, 0], [0, 3]]));
        assert_eq!(s.invariant_factors(), vec![Z.from_i64(1), Z.from_i64(6)]);
        let s = check(&Matrix::from_rows(Z, &[[4, 0, 0], [0, 6, 0], [0, 0, 10]]));
        assert_eq!(s.invariant_factors(), vec![Z.from_i64(2), Z.from_i64(2), Z.from_i64(60)]);
    }

    #[test]
    fn fields_refuse_smith_form() {
        let q = Matrix::identity(BaseRing::Rationals, 1);
        assert!(matches!(smith_normal_form(&q), Err(Error::RequiresIntegers { .. })));
        let (_, d, _) = rank_normal_form(&Matrix::from_rows(BaseRing::Rationals, &[[2, 4], [1, 2]])).unwrap();
        assert_eq!(d, Matrix::from_rows(BaseRing::Rationals, &[[1, 0], [0, 0]]));
        assert!(rank_normal_form(&Matrix::identity(Z, 1)).is_err());
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = Matrix::from_rows(Z, &[[1, 2, 3]]);
        let k = kernel_basis(&m);
        assert_eq!(k.dims(), (3, 2));
        assert!((&m * &k).is_zero());
    }

    #[test]
    fn hermite_form() {
        let m = Matrix::from_rows(Z, &[[2, 4], [3, 1]]);
        let (h, piv) = row_echelon(&m);
        // Lattice of index |2·1 − 4·3| = 10.
        assert_eq!(h, Matrix::from_rows(Z, &[[1, 7], [0, 10]]));
        assert_eq!(piv, vec![0, 1]);
    }
}
