//! Graded complexes (weight → complex), their Day tensor product, the total
//! complex functor, and the equivalent description as comodules: a carrier
//! complex with orthogonal idempotents `ρ_w` summing to the identity.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::{BaseRing, ChainComplex, ChainMap, HomologyModule, Matrix, Submodule};
use crate::par;

/// Finitely supported family of complexes indexed by weight. Zero pieces are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedComplex {
    ring: BaseRing,
    pieces: BTreeMap<i64, ChainComplex>,
}

impl GradedComplex {
    pub fn new(ring: BaseRing, pieces: impl IntoIterator<Item = (i64, ChainComplex)>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (w, c) in pieces {
            if c.ring() != ring {
                return Err(Error::RingMismatch { left: ring, right: c.ring() });
            }
            if !c.is_zero() {
                out.insert(w, c);
            }
        }
        Ok(GradedComplex { ring, pieces: out })
    }

    pub(crate) fn from_parts(ring: BaseRing, pieces: impl IntoIterator<Item = (i64, ChainComplex)>) -> Self {
        GradedComplex { ring, pieces: pieces.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn zero(ring: BaseRing) -> Self {
        GradedComplex { ring, pieces: BTreeMap::new() }
    }

    /// The ring in weight 0, degree 0.
    pub fn unit(ring: BaseRing) -> Self {
        GradedComplex::concentrated(0, ChainComplex::unit(ring))
    }

    /// A single complex placed in one weight (`π^*` for weight 0).
    pub fn concentrated(weight: i64, c: ChainComplex) -> Self {
        GradedComplex::from_parts(c.ring(), [(weight, c)])
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn pieces(&self) -> &BTreeMap<i64, ChainComplex> {
        &self.pieces
    }

    /// The piece at `w` (zero outside the support).
    pub fn piece(&self, w: i64) -> ChainComplex {
        self.pieces.get(&w).cloned().unwrap_or_else(|| ChainComplex::zero(self.ring))
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.pieces.keys().next()?, *self.pieces.keys().next_back()?))
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Re-indexes pieces `w ↦ w + k`.
    pub fn twist(&self, k: i64) -> GradedComplex {
        GradedComplex { ring: self.ring, pieces: self.pieces.iter().map(|(&w, c)| (w + k, c.clone())).collect() }
    }

    /// Direct sum of all pieces, weights ascending.
    pub fn total(&self) -> ChainComplex {
        let parts: Vec<&ChainComplex> = self.pieces.values().collect();
        ChainComplex::direct_sum(&parts, self.ring)
    }

    /// `(x ⊗ y)(n) = ⊕_{i+j=n} x(i) ⊗ y(j)`, summands ordered by `i` ascending.
    pub fn day_tensor(&self, other: &GradedComplex) -> Result<GradedComplex> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring, right: other.ring });
        }
        let mut weights: Vec<i64> =
            self.pieces.keys().flat_map(|i| other.pieces.keys().map(move |j| i + j)).collect();
        weights.sort_unstable();
        weights.dedup();
        let pieces = par::map(&weights, |&n| {
            let parts: Vec<ChainComplex> = self
                .pieces
                .iter()
                .filter_map(|(&i, x)| other.pieces.get(&(n - i)).map(|y| x.tensor(y)))
                .collect();
            let refs: Vec<&ChainComplex> = parts.iter().collect();
            (n, ChainComplex::direct_sum(&refs, self.ring))
        });
        Ok(GradedComplex::from_parts(self.ring, pieces))
    }

    /// Non-zero `H_n(x(w))`, keyed by `(w, n)`.
    pub fn homology(&self) -> BTreeMap<(i64, i64), HomologyModule> {
        let items: Vec<(&i64, &ChainComplex)> = self.pieces.iter().collect();
        par::map(&items, |(w, c)| c.homology_all().into_iter().map(|(n, h)| ((**w, n), h)).collect::<Vec<_>>())
            .into_iter()
            .flatten()
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.pieces.values().all(ChainComplex::is_acyclic)
    }

    pub fn base_change(&self, ring: BaseRing) -> Option<GradedComplex> {
        let pieces = self
            .pieces
            .iter()
            .map(|(&w, c)| c.base_change(ring).map(|c| (w, c)))
            .collect::<Option<Vec<_>>>()?;
        Some(GradedComplex::from_parts(ring, pieces))
    }

    /// Carrier `total(x)` with `ρ_w` the projection onto the weight-`w` summand.
    pub fn to_comodule(&self) -> Comodule {
        let carrier = self.total();
        let mut coaction = BTreeMap::new();
        let mut offsets: BTreeMap<i64, usize> = BTreeMap::new();
        for (&w, piece) in &self.pieces {
            let comps = carrier
                .ranks()
                .iter()
                .map(|(&n, &r)| {
                    let off = offsets.get(&n).copied().unwrap_or(0);
                    let mut m = Matrix::zero(self.ring, r, r);
                    m.place(off, off, &Matrix::identity(self.ring, piece.rank(n)));
                    (n, m)
                })
                .collect();
            for (&n, &r) in piece.ranks() {
                *offsets.entry(n).or_default() += r;
            }
            coaction.insert(w, ChainMap::from_parts(carrier.clone(), carrier.clone(), comps));
        }
        Comodule { ring: self.ring, carrier, coaction }
    }
}

pub fn unit_graded(ring: BaseRing) -> GradedComplex {
    GradedComplex::unit(ring)
}

pub fn twist(x: &GradedComplex, k: i64) -> GradedComplex {
    x.twist(k)
}

pub fn total(x: &GradedComplex) -> ChainComplex {
    x.total()
}

pub fn day_tensor_graded(x: &GradedComplex, y: &GradedComplex) -> Result<GradedComplex> {
    x.day_tensor(y)
}

/// The isomorphism `total(x ⊗ y) → total(x) ⊗ total(y)`; every component is a
/// permutation matrix.
pub fn total_tensor_iso(x: &GradedComplex, y: &GradedComplex) -> Result<ChainMap> {
    let ring = x.ring;
    let lhs = x.day_tensor(y)?.total();
    let (tx, ty) = (x.total(), y.total());
    let rhs = tx.tensor(&ty);
    // Offset of weight i inside total(x) in degree p.
    let offset = |g: &GradedComplex, w: i64, p: i64| -> usize {
        g.pieces.range(..w).map(|(_, c)| c.rank(p)).sum()
    };
    let mut comps = BTreeMap::new();
    for (&n, &size) in lhs.ranks() {
        let mut m = Matrix::zero(ring, rhs.rank(n), size);
        let mut col = 0;
        let mut weights: Vec<i64> = x.pieces.keys().flat_map(|i| y.pieces.keys().map(move |j| i + j)).collect();
        weights.sort_unstable();
        weights.dedup();
        for w in weights {
            for (&i, xi) in &x.pieces {
                let Some(yj) = y.pieces.get(&(w - i)) else { continue };
                let j = w - i;
                for (&p, &ra) in xi.ranks() {
                    let rb = yj.rank(n - p);
                    if rb == 0 {
                        continue;
                    }
                    let block_start: usize = tx.ranks().range(..p).map(|(&q, &r)| r * ty.rank(n - q)).sum();
                    let width_y = ty.rank(n - p);
                    for a in 0..ra {
                        for b in 0..rb {
                            let row = block_start + (offset(x, i, p) + a) * width_y + offset(y, j, n - p) + b;
                            m.set(row, col, ring.one());
                            col += 1;
                        }
                    }
                }
            }
        }
        debug_assert_eq!(col, size);
        comps.insert(n, m);
    }
    ChainMap::new(lhs, rhs, comps)
}

/// A complex with a coaction of the Laurent coalgebra, stored as the
/// components `ρ_w` (orthogonal idempotent chain endomorphisms summing to 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comodule {
    ring: BaseRing,
    carrier: ChainComplex,
    coaction: BTreeMap<i64, ChainMap>,
}

impl Comodule {
    /// Validates counit, orthogonality, idempotence and the chain condition.
    pub fn new(carrier: ChainComplex, coaction: impl IntoIterator<Item = (i64, ChainMap)>) -> Result<Self> {
        let ring = carrier.ring();
        let mut comps = BTreeMap::new();
        for (w, rho) in coaction {
            if rho.source() != &carrier || rho.target() != &carrier {
                return Err(Error::InvalidComodule(format!("ρ_{w} is not an endomorphism of the carrier")));
            }
            if !rho.is_valid() {
                return Err(Error::InvalidComodule(format!("ρ_{w} does not commute with the differential")));
            }
            if !rho.is_zero() {
                comps.insert(w, rho);
            }
        }
        for (&n, &r) in carrier.ranks() {
            let mut sum = Matrix::zero(ring, r, r);
            for (&w, rho) in &comps {
                let a = rho.component(n);
                sum = sum.add(&a);
                for (&v, other) in &comps {
                    let prod = a.mul(&other.component(n));
                    let want = if v == w { a.clone() } else { Matrix::zero(ring, r, r) };
                    if prod != want {
                        let what = if v == w { "not idempotent" } else { "not orthogonal" };
                        return Err(Error::InvalidComodule(format!(
                            "ρ_{w} ∘ ρ_{v} in degree {n}: {what}"
                        )));
                    }
                }
            }
            if !sum.is_identity() {
                return Err(Error::InvalidComodule(format!("components do not sum to the identity in degree {n}")));
            }
        }
        Ok(Comodule { ring, carrier, coaction: comps })
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn carrier(&self) -> &ChainComplex {
        &self.carrier
    }

    pub fn coaction(&self) -> &BTreeMap<i64, ChainMap> {
        &self.coaction
    }

    /// `ρ_w` (zero outside the support).
    pub fn component(&self, w: i64) -> ChainMap {
        self.coaction.get(&w).cloned().unwrap_or_else(|| ChainMap::zero(&self.carrier, &self.carrier))
    }

    /// The weight `w` with `ρ_w(e) = e` for the `index`-th basis vector of
    /// degree `n`, when that vector is homogeneous.
    pub fn coaction_index(&self, n: i64, index: usize) -> Option<i64> {
        let r = self.carrier.rank(n);
        let e = Matrix::from_fn(self.ring, r, 1, |i, _| if i == index { self.ring.one() } else { self.ring.zero() });
        self.coaction.iter().find(|(_, rho)| rho.component(n).mul(&e) == e).map(|(&w, _)| w)
    }

    /// Conjugates by a degreewise change of basis `g_n` (with inverses `g_inv_n`).
    pub fn conjugate(&self, g: &BTreeMap<i64, Matrix>, g_inv: &BTreeMap<i64, Matrix>) -> Result<Comodule> {
        let ring = self.ring;
        let at = |m: &BTreeMap<i64, Matrix>, n: i64| m.get(&n).cloned().unwrap_or_else(|| Matrix::identity(ring, self.carrier.rank(n)));
        let diffs: Vec<(i64, Matrix)> = self
            .carrier
            .ranks()
            .keys()
            .map(|&n| (n, at(g, n - 1).mul(&self.carrier.differential(n)).mul(&at(g_inv, n))))
            .collect();
        let carrier = ChainComplex::new(ring, self.carrier.ranks().clone(), diffs)?;
        let coaction: Vec<(i64, ChainMap)> = self
            .coaction
            .iter()
            .map(|(&w, rho)| {
                let comps: Vec<(i64, Matrix)> = self
                    .carrier
                    .ranks()
                    .keys()
                    .map(|&n| (n, at(g, n).mul(&rho.component(n)).mul(&at(g_inv, n))))
                    .collect();
                ChainMap::new(carrier.clone(), carrier.clone(), comps).map(|m| (w, m))
            })
            .collect::<Result<_>>()?;
        Comodule::new(carrier, coaction)
    }
}

/// Graded complex of a comodule together with the isomorphism
/// `carrier → total(graded)` and its inverse.
#[derive(Clone, Debug)]
pub struct FromComodule {
    pub graded: GradedComplex,
    pub iso: ChainMap,
    pub inverse: ChainMap,
}

/// Piece `w` is the image of `ρ_w`, on its Hermite basis.
pub fn from_comodule(c: &Comodule) -> Result<FromComodule> {
    let ring = c.ring;
    let carrier = &c.carrier;
    let mut bases: BTreeMap<i64, BTreeMap<i64, Submodule>> = BTreeMap::new();
    for (&w, rho) in &c.coaction {
        let per_degree = carrier.ranks().keys().map(|&n| (n, Submodule::span(&rho.component(n)))).collect();
        bases.insert(w, per_degree);
    }
    let mut pieces = BTreeMap::new();
    for (&w, per_degree) in &bases {
        let ranks: Vec<(i64, usize)> = per_degree.iter().map(|(&n, s)| (n, s.rank())).collect();
        let diffs: Vec<(i64, Matrix)> = per_degree
            .iter()
            .filter_map(|(&n, s)| {
                let lower = per_degree.get(&(n - 1))?;
                let image = carrier.differential(n).mul(s.basis());
                Some((n, lower.coords(&image).expect("ρ_w commutes with d")))
            })
            .collect();
        pieces.insert(w, ChainComplex::new(ring, ranks, diffs)?);
    }
    let graded = GradedComplex::from_parts(ring, pieces);
    let total = graded.total();
    let mut iso = BTreeMap::new();
    let mut inverse = BTreeMap::new();
    for &n in carrier.ranks().keys() {
        let mut forward: Vec<Matrix> = Vec::new();
        let mut back: Vec<&Matrix> = Vec::new();
        for (&w, per_degree) in &bases {
            let s = &per_degree[&n];
            if s.rank() == 0 {
                continue;
            }
            forward.push(s.coords(&c.coaction[&w].component(n)).expect("image of ρ_w"));
            back.push(s.basis());
        }
        let refs: Vec<&Matrix> = forward.iter().collect();
        iso.insert(n, Matrix::vstack(ring, carrier.rank(n), &refs));
        inverse.insert(n, Matrix::hstack(ring, carrier.rank(n), &back));
    }
    let iso = ChainMap::new(carrier.clone(), total.clone(), iso)?;
    let inverse = ChainMap::new(total, carrier.clone(), inverse)?;
    Ok(FromComodule { graded, iso, inverse })
}

pub fn to_comodule(x: &GradedComplex) -> Comodule {
    x.to_comodule()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    const Z: BaseRing = BaseRing::Integers;

    fn times_two() -> ChainComplex {
        ChainComplex::two_term(1, Matrix::from_rows(Z, &[[2]]))
    }

    #[test]
    fn unit_law() {
        let y = GradedComplex::new(Z, [(1, times_two()), (-2, ChainComplex::concentrated(Z, 3, 2))]).unwrap();
        assert_eq!(GradedComplex::unit(Z).day_tensor(&y).unwrap(), y);
        let u = GradedComplex::unit(Z);
        assert_eq!(u.day_tensor(&u).unwrap(), u);
    }

    #[test]
    fn weights_add() {
        let a = GradedComplex::concentrated(1, ChainComplex::unit(Z));
        let b = GradedComplex::concentrated(2, ChainComplex::unit(Z));
        assert_eq!(a.day_tensor(&b).unwrap(), GradedComplex::concentrated(3, ChainComplex::unit(Z)));
    }

    #[test]
    fn tensor_square_of_times_two() {
        let x = GradedComplex::concentrated(0, times_two());
        let t = x.day_tensor(&x).unwrap().piece(0);
        assert_eq!(t.homology(0).torsion, vec![BigInt::from(2)]);
        assert_eq!(t.homology(1).torsion, vec![BigInt::from(2)]);
        assert!(t.homology(2).is_zero());
    }

    #[test]
    fn twists() {
        let u = GradedComplex::unit(Z);
        assert_eq!(u.twist(0), u);
        assert_eq!(u.twist(5).twist(-5), u);
        assert_eq!(u.twist(3).support(), Some((3, 3)));
        assert_eq!(u.twist(1).day_tensor(&u.twist(-1)).unwrap(), u);
    }

    #[test]
    fn totals() {
        assert_eq!(GradedComplex::unit(Z).total(), ChainComplex::unit(Z));
        let x = GradedComplex::new(Z, [(0, ChainComplex::unit(Z)), (1, ChainComplex::unit(Z))]).unwrap();
        assert_eq!(x.total(), ChainComplex::concentrated(Z, 0, 2));
    }

    #[test]
    fn total_is_monoidal() {
        let x = GradedComplex::new(Z, [(0, times_two()), (2, ChainComplex::concentrated(Z, 0, 2))]).unwrap();
        let y = GradedComplex::new(Z, [(-1, ChainComplex::concentrated(Z, 1, 1)), (1, times_two())]).unwrap();
        let iso = total_tensor_iso(&x, &y).unwrap();
        for m in iso.components().values() {
            assert_eq!(m.nonzero_count(), m.rows());
            assert_eq!(m.rows(), m.cols());
        }
    }

    #[test]
    fn comodule_projections() {
        let x = GradedComplex::concentrated(2, ChainComplex::unit(Z));
        let c = x.to_comodule();
        assert!(c.component(2).is_identity());
        assert!(c.component(0).is_zero());

        let two = GradedComplex::new(Z, [(0, ChainComplex::unit(Z)), (1, ChainComplex::unit(Z))]).unwrap();
        let c = two.to_comodule();
        assert_eq!(c.component(0).component(0), Matrix::from_rows(Z, &[[1, 0], [0, 0]]));
        assert_eq!(c.component(1).component(0), Matrix::from_rows(Z, &[[0, 0], [0, 1]]));
        assert_eq!(from_comodule(&c).unwrap().graded, two);
    }

    #[test]
    fn comodule_with_non_coordinate_idempotents() {
        let carrier = ChainComplex::concentrated(Z, 0, 2);
        let r0 = Matrix::from_rows(Z, &[[1, 1], [0, 0]]);
        let r1 = Matrix::from_rows(Z, &[[0, -1], [0, 1]]);
        assert_eq!(r0.mul(&r0), r0);
        assert_eq!(r1.mul(&r1), r1);
        assert!(r0.mul(&r1).is_zero());
        let rho0 = ChainMap::new(carrier.clone(), carrier.clone(), [(0, r0)]).unwrap();
        let rho1 = ChainMap::new(carrier.clone(), carrier.clone(), [(0, r1)]).unwrap();
        let c = Comodule::new(carrier, [(0, rho0), (1, rho1)]).unwrap();
        let back = from_comodule(&c).unwrap();
        let expect = GradedComplex::new(Z, [(0, ChainComplex::unit(Z)), (1, ChainComplex::unit(Z))]).unwrap();
        assert_eq!(back.graded, expect);
        assert!(back.iso.then(&back.inverse).is_identity());
        assert!(back.inverse.then(&back.iso).is_identity());
    }

    #[test]
    fn invalid_coactions_rejected() {
        let carrier = ChainComplex::concentrated(Z, 0, 2);
        let half = ChainMap::new(carrier.clone(), carrier.clone(), [(0, Matrix::from_rows(Z, &[[1, 0], [0, 0]]))]).unwrap();
        assert!(matches!(Comodule::new(carrier.clone(), [(0, half.clone())]), Err(Error::InvalidComodule(_))));
        assert!(matches!(
            Comodule::new(carrier.clone(), [(0, half.clone()), (1, half)]),
            Err(Error::InvalidComodule(_))
        ));
        let double = ChainMap::new(carrier.clone(), carrier.clone(), [(0, Matrix::from_rows(Z, &[[2, 0], [0, 2]]))]).unwrap();
        assert!(Comodule::new(carrier, [(0, double)]).is_err());
    }
}
