use std::collections::BTreeMap;

use super::lattice::{HomologyModule, Subquotient, Submodule};
use super::matrix::Matrix;
use super::ring::BaseRing;
use super::snf::{kernel_basis, snf, Want};
use crate::error::{Error, Result};
use crate::par;

/// Bounded, homologically indexed complex of finite free modules.
///
/// Only non-zero ranks are stored, and differentials only between two
/// non-zero modules, so structurally equal complexes compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainComplex {
    ring: BaseRing,
    ranks: BTreeMap<i64, usize>,
    diffs: BTreeMap<i64, Matrix>,
}

impl ChainComplex {
    /// Validating constructor. `diffs[n]` is `d_n: C_n → C_{n−1}`; missing
    /// differentials are zero.
    pub fn new(
        ring: BaseRing,
        ranks: impl IntoIterator<Item = (i64, usize)>,
        diffs: impl IntoIterator<Item = (i64, Matrix)>,
    ) -> Result<Self> {
        let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        let mut stored = BTreeMap::new();
        for (n, d) in diffs {
            if d.ring() != ring {
                return Err(Error::RingMismatch { left: ring, right: d.ring() });
            }
            let want = (ranks.get(&(n - 1)).copied().unwrap_or(0), ranks.get(&n).copied().unwrap_or(0));
            if d.dims() != want {
                return Err(Error::dim(format!("differential d_{n}"), want, d.dims()));
            }
            if want.0 > 0 && want.1 > 0 {
                stored.insert(n, d);
            }
        }
        let c = ChainComplex::assemble(ring, ranks, stored);
        c.check_square()?;
        Ok(c)
    }

    /// Trusted constructor for internal constructions that are complexes by design.
    pub(crate) fn from_parts(ring: BaseRing, ranks: BTreeMap<i64, usize>, diffs: BTreeMap<i64, Matrix>) -> Self {
        let c = ChainComplex::assemble(ring, ranks, diffs);
        debug_assert!(c.check_square().is_ok(), "d∘d ≠ 0 in an internal construction");
        c
    }

    fn assemble(ring: BaseRing, ranks: BTreeMap<i64, usize>, diffs: BTreeMap<i64, Matrix>) -> Self {
        let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        let mut stored = BTreeMap::new();
        for (n, d) in diffs {
            let lo = ranks.get(&(n - 1)).copied().unwrap_or(0);
            let hi = ranks.get(&n).copied().unwrap_or(0);
            debug_assert_eq!(d.dims(), (lo, hi), "differential d_{n}");
            if lo > 0 && hi > 0 {
                stored.insert(n, d);
            }
        }
        for (&n, &r) in &ranks {
            if let Some(&lo) = ranks.get(&(n - 1)) {
                stored.entry(n).or_insert_with(|| Matrix::zero(ring, lo, r));
            }
        }
        ChainComplex { ring, ranks, diffs: stored }
    }

    fn check_square(&self) -> Result<()> {
        for (&n, d) in &self.diffs {
            if let Some(lower) = self.diffs.get(&(n - 1)) {
                if !lower.mul(d).is_zero() {
                    return Err(Error::DifferentialSquare { upper: n });
                }
            }
        }
        Ok(())
    }

    /// Re-checks every invariant.
    pub fn is_valid(&self) -> bool {
        self.diffs.iter().all(|(&n, d)| d.dims() == (self.rank(n - 1), self.rank(n)))
            && self.check_square().is_ok()
    }

    pub fn zero(ring: BaseRing) -> Self {
        ChainComplex { ring, ranks: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// `R^rank` in a single degree.
    pub fn concentrated(ring: BaseRing, degree: i64, rank: usize) -> Self {
        ChainComplex::from_parts(ring, [(degree, rank)].into(), BTreeMap::new())
    }

    /// The ring in degree 0.
    pub fn unit(ring: BaseRing) -> Self {
        ChainComplex::concentrated(ring, 0, 1)
    }

    /// `R --m--> R^…` with the source in degree `degree` and target one below.
    pub fn two_term(degree: i64, m: Matrix) -> Self {
        let ring = m.ring();
        ChainComplex::from_parts(ring, [(degree, m.cols()), (degree - 1, m.rows())].into(), [(degree, m)].into())
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rank(&self, n: i64) -> usize {
        self.ranks.get(&n).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    /// `d_n: C_n → C_{n−1}` (a zero matrix of the right shape when not stored).
    pub fn differential(&self, n: i64) -> Matrix {
        match self.diffs.get(&n) {
            Some(d) => d.clone(),
            None => Matrix::zero(self.ring, self.rank(n - 1), self.rank(n)),
        }
    }

    /// Smallest and largest degree with non-zero rank.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        Some((*self.ranks.keys().next()?, *self.ranks.keys().next_back()?))
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().map(|(&n, &r)| if n.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) }).sum()
    }

    /// `H_n = ker d_n / im d_{n+1}` in invariant-factor form.
    pub fn homology(&self, n: i64) -> HomologyModule {
        let c = self.rank(n);
        if c == 0 {
            return HomologyModule::zero(self.ring);
        }
        let out_rank = self.diffs.get(&n).map_or(0, |d| snf(d, Want::NONE).rank);
        let (in_rank, torsion) = match self.diffs.get(&(n + 1)) {
            None => (0, Vec::new()),
            Some(d) => {
                let s = snf(d, Want::NONE);
                let tors = s
                    .invariant_factors()
                    .iter()
                    .filter(|x| !self.ring.is_unit(x))
                    .map(|x| self.ring.to_bigint(x).expect("integer factor"))
                    .collect();
                (s.rank, tors)
            }
        };
        HomologyModule { ring: self.ring, free_rank: c - out_rank - in_rank, torsion }
    }

    /// Non-zero homology in every degree.
    pub fn homology_all(&self) -> BTreeMap<i64, HomologyModule> {
        let degrees: Vec<i64> = self.ranks.keys().copied().collect();
        par::map(&degrees, |&n| (n, self.homology(n))).into_iter().filter(|(_, h)| !h.is_zero()).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        let degrees: Vec<i64> = self.ranks.keys().copied().collect();
        par::map(&degrees, |&n| self.homology(n).is_zero()).into_iter().all(|z| z)
    }

    /// Cycles and boundaries in degree `n` as a subquotient with explicit generators.
    pub fn homology_generators(&self, n: i64) -> Subquotient {
        let cycles = Submodule::kernel(&self.differential(n));
        let boundaries = Submodule::span(&self.differential(n + 1));
        Subquotient::new(cycles, boundaries)
    }

    /// `C[k]_n = C_{n−k}` with differential `(−1)^k d`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let sign = k.rem_euclid(2) == 1;
        let ranks = self.ranks.iter().map(|(&n, &r)| (n + k, r)).collect();
        let diffs = self.diffs.iter().map(|(&n, d)| (n + k, if sign { d.neg() } else { d.clone() })).collect();
        ChainComplex { ring: self.ring, ranks, diffs }
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(parts: &[&ChainComplex], ring: BaseRing) -> ChainComplex {
        let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
        for p in parts {
            for (&n, &r) in &p.ranks {
                *ranks.entry(n).or_default() += r;
            }
        }
        let mut diffs = BTreeMap::new();
        for &n in ranks.keys() {
            if ranks.contains_key(&(n - 1)) {
                let blocks: Vec<Matrix> = parts.iter().map(|p| p.differential(n)).collect();
                let refs: Vec<&Matrix> = blocks.iter().collect();
                diffs.insert(n, Matrix::block_diag(ring, &refs));
            }
        }
        ChainComplex::from_parts(ring, ranks, diffs)
    }

    /// Total complex of `self ⊗ other`, with sign `(−1)^p` on `c ⊗ d(d')` for
    /// `c` in degree `p`. Blocks of degree `n` are ordered by `p` ascending and
    /// each block is laid out as a Kronecker product.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        let ring = self.ring;
        let layout = TensorLayout::new(self, other);
        let mut diffs = BTreeMap::new();
        for (&n, &total) in &layout.totals {
            let Some(&lower) = layout.totals.get(&(n - 1)) else { continue };
            let mut d = Matrix::zero(ring, lower, total);
            for (&p, &off) in &layout.offsets[&n] {
                let q = n - p;
                let (ra, rb) = (self.rank(p), other.rank(q));
                if let Some(da) = self.diffs.get(&p) {
                    let block = da.kron(&Matrix::identity(ring, rb));
                    d.place(layout.offsets[&(n - 1)][&(p - 1)], off, &block);
                }
                if let Some(db) = other.diffs.get(&q) {
                    let mut block = Matrix::identity(ring, ra).kron(db);
                    if p.rem_euclid(2) == 1 {
                        block = block.neg();
                    }
                    d.place(layout.offsets[&(n - 1)][&p], off, &block);
                }
            }
            diffs.insert(n, d);
        }
        ChainComplex::from_parts(ring, layout.totals, diffs)
    }

    /// Same complex with entries reinterpreted in `ring` (ℤ → ℚ or 𝔽_p).
    pub fn base_change(&self, ring: BaseRing) -> Option<ChainComplex> {
        let diffs = self
            .diffs
            .iter()
            .map(|(&n, d)| d.base_change(ring).map(|m| (n, m)))
            .collect::<Option<BTreeMap<_, _>>>()?;
        Some(ChainComplex { ring, ranks: self.ranks.clone(), diffs })
    }
}

/// Block offsets of a tensor product: degree `n` → (`p` → offset of `A_p ⊗ B_{n−p}`).
pub(crate) struct TensorLayout {
    pub totals: BTreeMap<i64, usize>,
    pub offsets: BTreeMap<i64, BTreeMap<i64, usize>>,
}

impl TensorLayout {
    pub fn new(a: &ChainComplex, b: &ChainComplex) -> Self {
        let mut totals: BTreeMap<i64, usize> = BTreeMap::new();
        let mut offsets: BTreeMap<i64, BTreeMap<i64, usize>> = BTreeMap::new();
        for (&p, &ra) in &a.ranks {
            for (&q, &rb) in &b.ranks {
                let t = totals.entry(p + q).or_default();
                offsets.entry(p + q).or_default().insert(p, *t);
                *t += ra * rb;
            }
        }
        // Offsets must follow p ascending; the loop above already visits p in order.
        TensorLayout { totals, offsets }
    }

    fn offset(&self, n: i64, p: i64) -> Option<usize> {
        self.offsets.get(&n)?.get(&p).copied()
    }
}

/// Degreewise map between complexes commuting with the differentials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    /// Validating constructor; missing components are zero.
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: impl IntoIterator<Item = (i64, Matrix)>,
    ) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch { left: source.ring, right: target.ring });
        }
        let mut stored = BTreeMap::new();
        for (n, f) in components {
            let want = (target.rank(n), source.rank(n));
            if f.dims() != want {
                return Err(Error::dim(format!("component f_{n}"), want, f.dims()));
            }
            if f.ring() != source.ring {
                return Err(Error::RingMismatch { left: source.ring, right: f.ring() });
            }
            if want.0 > 0 && want.1 > 0 {
                stored.insert(n, f);
            }
        }
        let f = ChainMap { source, target, components: stored };
        if let Some(n) = f.first_noncommuting_degree() {
            return Err(Error::NotChainMap { degree: n });
        }
        Ok(f)
    }

    pub(crate) fn from_parts(source: ChainComplex, target: ChainComplex, components: BTreeMap<i64, Matrix>) -> Self {
        let stored = components
            .into_iter()
            .filter(|(n, f)| {
                debug_assert_eq!(f.dims(), (target.rank(*n), source.rank(*n)), "component f_{n}");
                f.rows() > 0 && f.cols() > 0
            })
            .collect();
        let f = ChainMap { source, target, components: stored };
        debug_assert!(f.first_noncommuting_degree().is_none(), "not a chain map");
        f
    }

    fn first_noncommuting_degree(&self) -> Option<i64> {
        let mut degrees: Vec<i64> = self.source.ranks.keys().copied().collect();
        degrees.extend(self.source.ranks.keys().map(|n| n + 1));
        degrees.sort_unstable();
        degrees.dedup();
        degrees.into_iter().find(|&n| {
            let left = self.target.differential(n).mul(&self.component(n));
            let right = self.component(n - 1).mul(&self.source.differential(n));
            left != right
        })
    }

    pub fn is_valid(&self) -> bool {
        self.first_noncommuting_degree().is_none()
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let comps = c.ranks.iter().map(|(&n, &r)| (n, Matrix::identity(c.ring, r))).collect();
        ChainMap { source: c.clone(), target: c.clone(), components: comps }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), components: BTreeMap::new() }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn ring(&self) -> BaseRing {
        self.source.ring
    }

    /// `f_n` (zero of the right shape when not stored).
    pub fn component(&self, n: i64) -> Matrix {
        match self.components.get(&n) {
            Some(f) => f.clone(),
            None => Matrix::zero(self.source.ring, self.target.rank(n), self.source.rank(n)),
        }
    }

    pub fn components(&self) -> &BTreeMap<i64, Matrix> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(Matrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.source.ranks.keys().all(|&n| self.component(n).is_identity())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ChainMap) -> ChainMap {
        assert_eq!(self.target, next.source, "composable maps");
        let comps = self
            .source
            .ranks
            .keys()
            .map(|&n| (n, next.component(n).mul(&self.component(n))))
            .collect();
        ChainMap::from_parts(self.source.clone(), next.target.clone(), comps)
    }

    fn combine(&self, other: &ChainMap, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> ChainMap {
        assert!(self.source == other.source && self.target == other.target, "parallel maps");
        let comps = self.source.ranks.keys().map(|&n| (n, f(&self.component(n), &other.component(n)))).collect();
        ChainMap::from_parts(self.source.clone(), self.target.clone(), comps)
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        self.combine(other, Matrix::add)
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.combine(other, Matrix::sub)
    }

    pub fn neg(&self) -> ChainMap {
        let comps = self.components.iter().map(|(&n, f)| (n, f.neg())).collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), components: comps }
    }

    /// Mapping cone: `tgt_n ⊕ src_{n−1}` with `d = [[d_tgt, f], [0, −d_src]]`.
    pub fn cone(&self) -> ChainComplex {
        let ring = self.ring();
        let (src, tgt) = (&self.source, &self.target);
        let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
        for (&n, &r) in &tgt.ranks {
            *ranks.entry(n).or_default() += r;
        }
        for (&n, &r) in &src.ranks {
            *ranks.entry(n + 1).or_default() += r;
        }
        let mut diffs = BTreeMap::new();
        for &n in ranks.keys() {
            let Some(&lower) = ranks.get(&(n - 1)) else { continue };
            let mut d = Matrix::zero(ring, lower, ranks[&n]);
            let (t_n, t_lo) = (tgt.rank(n), tgt.rank(n - 1));
            if let Some(dt) = tgt.diffs.get(&n) {
                d.place(0, 0, dt);
            }
            if let Some(f) = self.components.get(&(n - 1)) {
                d.place(0, t_n, f);
            }
            if let Some(ds) = src.diffs.get(&(n - 1)) {
                d.place(t_lo, t_n, &ds.neg());
            }
            diffs.insert(n, d);
        }
        ChainComplex::from_parts(ring, ranks, diffs)
    }

    /// Canonical inclusion `target → cone(self)`.
    pub fn cone_inclusion(&self) -> ChainMap {
        let cone = self.cone();
        let ring = self.ring();
        let comps = self
            .target
            .ranks
            .iter()
            .map(|(&n, &r)| {
                let mut m = Matrix::zero(ring, cone.rank(n), r);
                m.place(0, 0, &Matrix::identity(ring, r));
                (n, m)
            })
            .collect();
        ChainMap::from_parts(self.target.clone(), cone, comps)
    }

    /// Map `cone(self) → cone(other)` induced by a commuting square
    /// `other ∘ on_source = on_target ∘ self`.
    pub fn cone_map(&self, other: &ChainMap, on_source: &ChainMap, on_target: &ChainMap) -> ChainMap {
        let ring = self.ring();
        let (src, tgt) = (self.cone(), other.cone());
        let comps = src
            .ranks
            .keys()
            .filter(|n| tgt.rank(**n) > 0)
            .map(|&n| {
                let mut m = Matrix::zero(ring, tgt.rank(n), src.rank(n));
                let (b, a) = (on_target.component(n), on_source.component(n - 1));
                if b.rows() > 0 && b.cols() > 0 {
                    m.place(0, 0, &b);
                }
                if a.rows() > 0 && a.cols() > 0 {
                    m.place(other.target.rank(n), self.target.rank(n), &a);
                }
                (n, m)
            })
            .collect();
        ChainMap::from_parts(src, tgt, comps)
    }

    /// Whether the induced map on homology is an isomorphism (acyclic cone).
    pub fn is_quasi_isomorphism(&self) -> bool {
        self.cone().is_acyclic()
    }

    /// `f ⊗ g` on tensor products of complexes (layout as in [`ChainComplex::tensor`]).
    pub fn tensor(&self, other: &ChainMap) -> ChainMap {
        let ring = self.ring();
        let src = self.source.tensor(&other.source);
        let tgt = self.target.tensor(&other.target);
        let src_layout = TensorLayout::new(&self.source, &other.source);
        let tgt_layout = TensorLayout::new(&self.target, &other.target);
        let mut comps = BTreeMap::new();
        for (&n, offs) in &src_layout.offsets {
            let rows = tgt.rank(n);
            if rows == 0 {
                continue;
            }
            let mut m = Matrix::zero(ring, rows, src.rank(n));
            for (&p, &col) in offs {
                let (Some(f), Some(g)) = (self.components.get(&p), other.components.get(&(n - p))) else { continue };
                let row = tgt_layout.offset(n, p).expect("target block exists when map is non-zero");
                m.place(row, col, &f.kron(g));
            }
            comps.insert(n, m);
        }
        ChainMap::from_parts(src, tgt, comps)
    }

    /// `f[k]`, matching [`ChainComplex::shift`].
    pub fn shift(&self, k: i64) -> ChainMap {
        let comps = self.components.iter().map(|(&n, f)| (n + k, f.clone())).collect();
        ChainMap { source: self.source.shift(k), target: self.target.shift(k), components: comps }
    }

    /// Block map between direct sums: `blocks[(i, j)]` maps `sources[j]` into `targets[i]`.
    pub fn block(
        ring: BaseRing,
        sources: &[&ChainComplex],
        targets: &[&ChainComplex],
        blocks: &BTreeMap<(usize, usize), ChainMap>,
    ) -> ChainMap {
        let src = ChainComplex::direct_sum(sources, ring);
        let tgt = ChainComplex::direct_sum(targets, ring);
        let offset = |parts: &[&ChainComplex], idx: usize, n: i64| parts[..idx].iter().map(|p| p.rank(n)).sum::<usize>();
        let mut comps = BTreeMap::new();
        for &n in src.ranks.keys() {
            if tgt.rank(n) == 0 {
                continue;
            }
            let mut m = Matrix::zero(ring, tgt.rank(n), src.rank(n));
            for (&(i, j), f) in blocks {
                let c = f.component(n);
                if c.rows() > 0 && c.cols() > 0 {
                    m.place(offset(targets, i, n), offset(sources, j, n), &c);
                }
            }
            comps.insert(n, m);
        }
        ChainMap::from_parts(src, tgt, comps)
    }
}

/// Basis of the lattice of chain maps `source → target`.
pub fn hom_basis(source: &ChainComplex, target: &ChainComplex) -> Vec<ChainMap> {
    let ring = source.ring;
    // Unknown block for degree n: f_n, row-major.
    let mut offsets = BTreeMap::new();
    let mut unknowns = 0;
    for (&n, &s) in &source.ranks {
        let t = target.rank(n);
        if t > 0 {
            offsets.insert(n, unknowns);
            unknowns += t * s;
        }
    }
    if unknowns == 0 {
        return Vec::new();
    }
    // Equations d_t f_n − f_{n−1} d_s = 0 : rows t_{n−1} × cols s_n.
    let mut rows: Vec<Vec<(usize, crate::exactla::Scalar)>> = Vec::new();
    for (&n, &s) in &source.ranks {
        let t_lo = target.rank(n - 1);
        if t_lo == 0 {
            continue;
        }
        let t = target.rank(n);
        let s_lo = source.rank(n - 1);
        let dt = target.differential(n);
        let ds = source.differential(n);
        for i in 0..t_lo {
            for j in 0..s {
                let mut eq = Vec::new();
                if let Some(&off) = offsets.get(&n) {
                    for k in 0..t {
                        let c = dt.get(i, k);
                        if !ring.is_zero(c) {
                            eq.push((off + k * s + j, c.clone()));
                        }
                    }
                }
                if let Some(&off) = offsets.get(&(n - 1)) {
                    for k in 0..s_lo {
                        let c = ds.get(k, j);
                        if !ring.is_zero(c) {
                            eq.push((off + i * s_lo + k, ring.neg(c)));
                        }
                    }
                }
                if !eq.is_empty() {
                    rows.push(eq);
                }
            }
        }
    }
    let mut system = Matrix::zero(ring, rows.len(), unknowns);
    for (r, eq) in rows.iter().enumerate() {
        for (c, v) in eq {
            let cur = system.get(r, *c).clone();
            system.set(r, *c, ring.add(&cur, v));
        }
    }
    let kernel = Submodule::span(&kernel_basis(&system));
    let basis = kernel.basis();
    (0..basis.cols())
        .map(|b| {
            let comps = offsets
                .iter()
                .map(|(&n, &off)| {
                    let (t, s) = (target.rank(n), source.rank(n));
                    (n, Matrix::from_fn(ring, t, s, |i, j| basis.get(off + i * s + j, b).clone()))
                })
                .collect();
            ChainMap::from_parts(source.clone(), target.clone(), comps)
        })
        .collect()
}
