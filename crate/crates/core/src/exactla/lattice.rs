use std::fmt;

use num_bigint::BigInt;

use super::matrix::Matrix;
use super::ring::{BaseRing, Scalar};
use super::snf::{kernel_basis, row_echelon, snf, Want};

/// A finitely generated abelian group (or vector space) in invariant-factor form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologyModule {
    pub ring: BaseRing,
    pub free_rank: usize,
    /// Elementary divisors, each > 1 and dividing the next. Always empty over a field.
    pub torsion: Vec<BigInt>,
}

impl HomologyModule {
    pub fn zero(ring: BaseRing) -> Self {
        HomologyModule { ring, free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(ring: BaseRing, rank: usize) -> Self {
        HomologyModule { ring, free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of generators: torsion ones first, then free ones.
    pub fn generator_count(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    /// Order of each generator, `0` meaning infinite.
    pub fn orders(&self) -> Vec<BigInt> {
        let mut out = self.torsion.clone();
        out.extend(std::iter::repeat_n(BigInt::from(0), self.free_rank));
        out
    }
}

impl fmt::Display for HomologyModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let base = match self.ring {
            BaseRing::Integers => "Z".to_string(),
            BaseRing::Rationals => "Q".to_string(),
            BaseRing::PrimeField(p) => format!("F{p}"),
        };
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(base.clone()),
            r => parts.push(format!("{base}^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A submodule of `R^n`, stored by its echelon basis (Hermite form over ℤ),
/// which is unique; equal submodules compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    ambient: usize,
    /// `ambient × k`, columns form a basis.
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Submodule {
    pub fn zero(ring: BaseRing, n: usize) -> Self {
        Submodule { ambient: n, basis: Matrix::zero(ring, n, 0), pivots: Vec::new() }
    }

    pub fn full(ring: BaseRing, n: usize) -> Self {
        Submodule { ambient: n, basis: Matrix::identity(ring, n), pivots: (0..n).collect() }
    }

    /// Submodule generated by the columns of `gens`.
    pub fn span(gens: &Matrix) -> Self {
        let (rows, pivots) = row_echelon(&gens.transpose());
        Submodule { ambient: gens.rows(), basis: rows.transpose(), pivots }
    }

    /// Kernel of `m: R^cols → R^rows`.
    pub fn kernel(m: &Matrix) -> Self {
        Submodule::span(&kernel_basis(m))
    }

    /// `{x : m·x ∈ target}`.
    pub fn preimage(m: &Matrix, target: &Submodule) -> Self {
        assert_eq!(m.rows(), target.ambient, "preimage dimensions");
        let ring = m.ring();
        let stacked = Matrix::hstack(ring, m.rows(), &[m, &target.basis.neg()]);
        let k = kernel_basis(&stacked);
        Submodule::span(&k.submatrix(0..m.cols(), 0..k.cols()))
    }

    /// Image of this submodule under `m`.
    pub fn image(&self, m: &Matrix) -> Submodule {
        Submodule::span(&m.mul(&self.basis))
    }

    pub fn sum(&self, other: &Submodule) -> Submodule {
        assert_eq!(self.ambient, other.ambient);
        let ring = self.ring();
        Submodule::span(&Matrix::hstack(ring, self.ambient, &[&self.basis, &other.basis]))
    }

    pub fn intersect(&self, other: &Submodule) -> Submodule {
        assert_eq!(self.ambient, other.ambient);
        let ring = self.ring();
        let stacked = Matrix::hstack(ring, self.ambient, &[&self.basis, &other.basis.neg()]);
        let k = kernel_basis(&stacked);
        let coeffs = k.submatrix(0..self.rank(), 0..k.cols());
        Submodule::span(&self.basis.mul(&coeffs))
    }

    pub fn ring(&self) -> BaseRing {
        self.basis.ring()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Coordinates of the columns of `v` in the basis, if they all lie in the submodule.
    pub fn coords(&self, v: &Matrix) -> Option<Matrix> {
        assert_eq!(v.rows(), self.ambient, "coordinate dimensions");
        let ring = self.ring();
        let k = self.rank();
        let mut out = Matrix::zero(ring, k, v.cols());
        for c in 0..v.cols() {
            let mut rest: Vec<Scalar> = (0..self.ambient).map(|i| v.get(i, c).clone()).collect();
            for (j, &p) in self.pivots.iter().enumerate() {
                let x = &rest[p];
                if ring.is_zero(x) {
                    continue;
                }
                let piv = self.basis.get(p, j);
                if !ring.divides(piv, x) {
                    return None;
                }
                let q = ring.div_exact(x, piv);
                for (i, r) in rest.iter_mut().enumerate().skip(p) {
                    let b = self.basis.get(i, j);
                    if !ring.is_zero(b) {
                        *r = ring.sub(r, &ring.mul(&q, b));
                    }
                }
                out.set(j, c, q);
            }
            if rest.iter().any(|x| !ring.is_zero(x)) {
                return None;
            }
        }
        Some(out)
    }

    pub fn contains_vectors(&self, v: &Matrix) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains(&self, other: &Submodule) -> bool {
        self.contains_vectors(&other.basis)
    }
}

/// `num / den` for submodules `den ⊆ num` of a common ambient module, with
/// chosen generators: torsion generators (ascending orders) then free ones.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub num: Submodule,
    pub den: Submodule,
    /// Ambient vectors representing the generators, one per column.
    pub generators: Matrix,
    /// Maps coordinates in `num`'s basis to generator coordinates.
    projection: Matrix,
    module: HomologyModule,
    orders: Vec<Scalar>,
}

impl Subquotient {
    pub fn new(num: Submodule, den: Submodule) -> Self {
        let ring = num.ring();
        let rel = num.coords(den.basis()).expect("denominator inside numerator");
        let s = snf(&rel, Want { u: true, u_inv: true, ..Want::NONE });
        let (u, ui) = (s.u.unwrap(), s.u_inv.unwrap());
        let k = num.rank();
        let mut keep = Vec::new();
        let mut orders = Vec::new();
        let mut torsion = Vec::new();
        for i in 0..k {
            if i < s.rank {
                let d = s.diagonal.get(i, i);
                if ring.is_unit(d) {
                    continue;
                }
                torsion.push(ring.to_bigint(d).expect("integer factor"));
                orders.push(d.clone());
            } else {
                orders.push(ring.zero());
            }
            keep.push(i);
        }
        let generators = num.basis().mul(&ui.select_cols(&keep));
        let projection = u.select_rows(&keep);
        let module = HomologyModule { ring, free_rank: k - s.rank, torsion };
        Subquotient { num, den, generators, projection, module, orders }
    }

    pub fn module(&self) -> &HomologyModule {
        &self.module
    }

    /// Order of each generator; zero for free generators.
    pub fn orders(&self) -> &[Scalar] {
        &self.orders
    }

    /// Generator coordinates of ambient vectors lying in `num`, reduced modulo the orders.
    pub fn express(&self, v: &Matrix) -> Option<Matrix> {
        let c = self.num.coords(v)?;
        let mut y = self.projection.mul(&c);
        let ring = y.ring();
        for (i, d) in self.orders.iter().enumerate() {
            if ring.is_zero(d) {
                continue;
            }
            for j in 0..y.cols() {
                let r = ring.reduce_mod(y.get(i, j), d);
                y.set(i, j, r);
            }
        }
        Some(y)
    }
}

/// Homology of a presented map pair: `ker(out) / im(inp)` where both maps act
/// on modules given as `R^g / diag(orders)`.
pub fn presented_homology(
    ring: BaseRing,
    orders: &[Scalar],
    incoming: Option<(&Matrix, &[Scalar])>,
    outgoing: Option<(&Matrix, &[Scalar])>,
) -> HomologyModule {
    let g = orders.len();
    let relations = |ords: &[Scalar]| {
        let n = ords.len();
        Submodule::span(&Matrix::from_fn(ring, n, n, |i, j| if i == j { ords[i].clone() } else { ring.zero() }))
    };
    let own = relations(orders);
    let cycles = match outgoing {
        Some((m, tgt)) => Submodule::preimage(m, &relations(tgt)),
        None => Submodule::full(ring, g),
    };
    let boundaries = match incoming {
        Some((m, _)) => own.sum(&Submodule::span(m)),
        None => own,
    };
    Subquotient::new(cycles, boundaries).module().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: BaseRing = BaseRing::Integers;

    #[test]
    fn span_is_canonical() {
        let a = Submodule::span(&Matrix::from_rows(Z, &[[2, 0], [0, 2]]));
        let b = Submodule::span(&Matrix::from_rows(Z, &[[2, 0], [2, 4]]));
        assert_eq!(Submodule::span(&Matrix::from_rows(Z, &[[2, 2], [0, 2]])), a);
        assert_ne!(a, b);
        assert!(b.contains(&Submodule::span(&Matrix::from_rows(Z, &[[4], [0]]))));
    }

    #[test]
    fn coords_detect_non_members() {
        let s = Submodule::span(&Matrix::from_rows(Z, &[[2], [4]]));
        assert!(s.coords(&Matrix::from_rows(Z, &[[1], [2]])).is_none());
        assert_eq!(s.coords(&Matrix::from_rows(Z, &[[-6], [-12]])).unwrap(), Matrix::from_rows(Z, &[[-3]]));
    }

    #[test]
    fn intersection_of_lines() {
        let a = Submodule::span(&Matrix::from_rows(Z, &[[2], [0]]));
        let b = Submodule::span(&Matrix::from_rows(Z, &[[3], [0]]));
        assert_eq!(a.intersect(&b), Submodule::span(&Matrix::from_rows(Z, &[[6], [0]])));
        assert_eq!(a.sum(&b), Submodule::span(&Matrix::from_rows(Z, &[[1], [0]])));
    }

    #[test]
    fn preimage_of_sublattice() {
        let m = Matrix::from_rows(Z, &[[1, 1]]);
        let t = Submodule::span(&Matrix::from_rows(Z, &[[3]]));
        let p = Submodule::preimage(&m, &t);
        assert!(p.contains_vectors(&Matrix::from_rows(Z, &[[1], [2]])));
        assert!(!p.contains_vectors(&Matrix::from_rows(Z, &[[1], [0]])));
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn quotient_by_index_two() {
        let num = Submodule::full(Z, 2);
        let den = Submodule::span(&Matrix::from_rows(Z, &[[2], [0]]));
        let q = Subquotient::new(num, den);
        assert_eq!(q.module().torsion, vec![BigInt::from(2)]);
        assert_eq!(q.module().free_rank, 1);
        let y = q.express(&Matrix::from_rows(Z, &[[3], [0]])).unwrap();
        assert_eq!(y, Matrix::from_rows(Z, &[[1], [0]]));
    }

    #[test]
    fn display_forms() {
        let m = HomologyModule { ring: Z, free_rank: 2, torsion: vec![BigInt::from(2)] };
        assert_eq!(m.to_string(), "Z^2 + Z/2");
        assert_eq!(HomologyModule::zero(Z).to_string(), "0");
    }
}
