use std::collections::BTreeMap;

use super::complex::{ChainComplex, ChainMap};
use super::lattice::{HomologyModule, Subquotient, Submodule};
use super::matrix::Matrix;
use super::ring::BaseRing;
use super::snf::{snf, Want};
use crate::error::{Error, Result};

/// Finite poset-shaped diagram: objects plus maps along covering relations.
#[derive(Clone, Debug)]
pub struct PosetDiagram {
    ring: BaseRing,
    objects: Vec<ChainComplex>,
    edges: Vec<(usize, usize, ChainMap)>,
}

impl PosetDiagram {
    pub fn new(ring: BaseRing) -> Self {
        PosetDiagram { ring, objects: Vec::new(), edges: Vec::new() }
    }

    pub fn add_object(&mut self, c: ChainComplex) -> Result<usize> {
        if c.ring() != self.ring {
            return Err(Error::RingMismatch { left: self.ring, right: c.ring() });
        }
        self.objects.push(c);
        Ok(self.objects.len() - 1)
    }

    pub fn add_edge(&mut self, from: usize, to: usize, f: ChainMap) -> Result<()> {
        let n = self.objects.len();
        if from >= n || to >= n {
            return Err(Error::Diagram(format!("edge {from} -> {to} names a missing object")));
        }
        if f.source() != &self.objects[from] || f.target() != &self.objects[to] {
            return Err(Error::Diagram(format!("edge {from} -> {to}: map does not match its endpoints")));
        }
        self.edges.push((from, to, f));
        Ok(())
    }

    pub fn objects(&self) -> &[ChainComplex] {
        &self.objects
    }

    /// Vertices ordered so every edge goes from a later to an earlier entry.
    fn sinks_first(&self) -> Result<Vec<usize>> {
        let n = self.objects.len();
        let mut out_deg = vec![0usize; n];
        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (from, to, _) in &self.edges {
            out_deg[*from] += 1;
            incoming[*to].push(*from);
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| out_deg[v] == 0).collect();
        ready.reverse();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &u in &incoming[v] {
                out_deg[u] -= 1;
                if out_deg[u] == 0 {
                    ready.push(u);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Diagram("diagram has a cycle, so it is not a poset".into()));
        }
        Ok(order)
    }

    /// Checks that parallel composites agree.
    pub fn check_commutes(&self) -> Result<()> {
        let order = self.sinks_first()?;
        let mut reach: Vec<BTreeMap<usize, ChainMap>> = vec![BTreeMap::new(); self.objects.len()];
        for &v in &order {
            let mut mine: BTreeMap<usize, ChainMap> = BTreeMap::new();
            mine.insert(v, ChainMap::identity(&self.objects[v]));
            for (from, to, f) in &self.edges {
                if *from != v {
                    continue;
                }
                for (&w, g) in &reach[*to] {
                    let comp = f.then(g);
                    match mine.get(&w) {
                        Some(prev) if *prev != comp => {
                            return Err(Error::Diagram(format!(
                                "diagram does not commute: two paths from {v} to {w} differ"
                            )))
                        }
                        Some(_) => {}
                        None => {
                            mine.insert(w, comp);
                        }
                    }
                }
            }
            reach[v] = mine;
        }
        Ok(())
    }
}

/// A complex of finitely presented modules: free generators `G` modulo a
/// subcomplex of relations `R ⊆ G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedComplex {
    generators: ChainComplex,
    relations: BTreeMap<i64, Submodule>,
}

/// Free replacement of a torsion-free presented complex.
#[derive(Clone, Debug)]
pub struct FreeQuotient {
    pub complex: ChainComplex,
    /// `π_n: G_n → L_n`, the quotient map in coordinates.
    pub projection: BTreeMap<i64, Matrix>,
    /// `σ_n: L_n → G_n` with `π σ = 1`.
    pub section: BTreeMap<i64, Matrix>,
}

impl PresentedComplex {
    pub fn new(generators: ChainComplex, relations: BTreeMap<i64, Submodule>) -> Result<Self> {
        let ring = generators.ring();
        let mut rels = BTreeMap::new();
        for (&n, &r) in generators.ranks() {
            let s = relations.get(&n).cloned().unwrap_or_else(|| Submodule::zero(ring, r));
            if s.ambient() != r {
                return Err(Error::dim(format!("relations in degree {n}"), (r, s.rank()), (s.ambient(), s.rank())));
            }
            rels.insert(n, s);
        }
        let p = PresentedComplex { generators, relations: rels };
        for (&n, s) in &p.relations {
            let image = p.generators.differential(n).mul(s.basis());
            if !p.relation(n - 1).contains_vectors(&image) {
                return Err(Error::Diagram(format!("relations are not a subcomplex at degree {n}")));
            }
        }
        Ok(p)
    }

    /// A free complex with no relations.
    pub fn free(c: ChainComplex) -> Self {
        let ring = c.ring();
        let relations = c.ranks().iter().map(|(&n, &r)| (n, Submodule::zero(ring, r))).collect();
        PresentedComplex { generators: c, relations }
    }

    pub fn generators(&self) -> &ChainComplex {
        &self.generators
    }

    pub fn relation(&self, n: i64) -> Submodule {
        self.relations
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Submodule::zero(self.generators.ring(), self.generators.rank(n)))
    }

    /// The module `G_n / R_n` itself.
    pub fn module(&self, n: i64) -> HomologyModule {
        let ring = self.generators.ring();
        Subquotient::new(Submodule::full(ring, self.generators.rank(n)), self.relation(n)).module().clone()
    }

    pub fn homology(&self, n: i64) -> HomologyModule {
        let d_out = self.generators.differential(n);
        let cycles = Submodule::preimage(&d_out, &self.relation(n - 1));
        let boundaries = self.relation(n).sum(&Submodule::span(&self.generators.differential(n + 1)));
        Subquotient::new(cycles, boundaries).module().clone()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.generators.ranks().keys().all(|&n| self.module(n).torsion.is_empty())
    }

    /// Re-expresses the quotient on a free basis; `None` when some `G_n / R_n` has torsion.
    pub fn free_quotient(&self) -> Option<FreeQuotient> {
        let ring = self.generators.ring();
        let mut projection = BTreeMap::new();
        let mut section = BTreeMap::new();
        let mut ranks = BTreeMap::new();
        for (&n, &g) in self.generators.ranks() {
            let rel = self.relation(n);
            let s = snf(rel.basis(), Want { u: true, u_inv: true, ..Want::NONE });
            if s.invariant_factors().iter().any(|d| !ring.is_unit(d)) {
                return None;
            }
            let k = s.rank;
            projection.insert(n, s.u.unwrap().submatrix(k..g, 0..g));
            section.insert(n, s.u_inv.unwrap().submatrix(0..g, k..g));
            ranks.insert(n, g - k);
        }
        let mut diffs = BTreeMap::new();
        for &n in ranks.keys() {
            if let (Some(p), Some(sec)) = (projection.get(&(n - 1)), section.get(&n)) {
                diffs.insert(n, p.mul(&self.generators.differential(n)).mul(sec));
            }
        }
        let complex = ChainComplex::from_parts(ring, ranks, diffs);
        Some(FreeQuotient { complex, projection, section })
    }

    /// Free resolution `cone(R → G)` with the relation basis as a complex;
    /// quasi-isomorphic to the presented complex.
    pub fn resolve(&self) -> ChainComplex {
        let ring = self.generators.ring();
        let rel_ranks: BTreeMap<i64, usize> = self.relations.iter().map(|(&n, s)| (n, s.rank())).collect();
        let mut rel_diffs = BTreeMap::new();
        for (&n, s) in &self.relations {
            if let Some(lower) = self.relations.get(&(n - 1)) {
                let image = self.generators.differential(n).mul(s.basis());
                rel_diffs.insert(n, lower.coords(&image).expect("relations form a subcomplex"));
            }
        }
        let rel = ChainComplex::from_parts(ring, rel_ranks, rel_diffs);
        let incl = self
            .relations
            .iter()
            .filter(|(_, s)| s.rank() > 0)
            .map(|(&n, s)| (n, s.basis().clone()))
            .collect();
        ChainMap::from_parts(rel, self.generators.clone(), incl).cone()
    }
}

/// Colimit of a [`PosetDiagram`] with the canonical maps out of each object.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub presented: PresentedComplex,
    /// `φ_v: F(v) → G` for every vertex `v`, into the generator complex.
    pub vertex_maps: Vec<ChainMap>,
}

/// Strict colimit of a commuting finite poset diagram.
///
/// Generators are the objects without outgoing edges. Every other object is
/// identified with its image along its first outgoing edge; the remaining
/// edges contribute the relations `φ_w ∘ f − φ_v`.
pub fn poset_colimit(diagram: &PosetDiagram) -> Result<Colimit> {
    diagram.check_commutes()?;
    let order = diagram.sinks_first()?;
    let ring = diagram.ring;
    let n = diagram.objects.len();
    let mut preferred: Vec<Option<usize>> = vec![None; n];
    for (e, (from, _, _)) in diagram.edges.iter().enumerate() {
        preferred[*from].get_or_insert(e);
    }
    let minimal: Vec<usize> = (0..n).filter(|&v| preferred[v].is_none()).collect();
    let parts: Vec<&ChainComplex> = minimal.iter().map(|&v| &diagram.objects[v]).collect();
    let generators = ChainComplex::direct_sum(&parts, ring);

    let mut maps: Vec<Option<ChainMap>> = vec![None; n];
    for (slot, &v) in minimal.iter().enumerate() {
        let obj = &diagram.objects[v];
        let comps = obj
            .ranks()
            .iter()
            .map(|(&d, &r)| {
                let offset: usize = minimal[..slot].iter().map(|&u| diagram.objects[u].rank(d)).sum();
                let mut m = Matrix::zero(ring, generators.rank(d), r);
                m.place(offset, 0, &Matrix::identity(ring, r));
                (d, m)
            })
            .collect();
        maps[v] = Some(ChainMap::from_parts(obj.clone(), generators.clone(), comps));
    }
    for &v in &order {
        if maps[v].is_some() {
            continue;
        }
        let (_, to, f) = &diagram.edges[preferred[v].expect("non-minimal vertex")];
        let via = maps[*to].as_ref().expect("targets are processed first");
        maps[v] = Some(f.then(via));
    }
    let maps: Vec<ChainMap> = maps.into_iter().map(|m| m.expect("every vertex mapped")).collect();

    let mut rel_cols: BTreeMap<i64, Vec<Matrix>> = BTreeMap::new();
    for (e, (from, to, f)) in diagram.edges.iter().enumerate() {
        if preferred[*from] == Some(e) {
            continue;
        }
        let diff = f.then(&maps[*to]).sub(&maps[*from]);
        for (&d, m) in diff.components() {
            if !m.is_zero() {
                rel_cols.entry(d).or_default().push(m.clone());
            }
        }
    }
    let relations = generators
        .ranks()
        .iter()
        .map(|(&d, &r)| {
            let cols = rel_cols.remove(&d).unwrap_or_default();
            let refs: Vec<&Matrix> = cols.iter().collect();
            (d, Submodule::span(&Matrix::hstack(ring, r, &refs)))
        })
        .collect();
    let presented = PresentedComplex::new(generators, relations)?;
    Ok(Colimit { presented, vertex_maps: maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    const Z: BaseRing = BaseRing::Integers;

    fn scalar_map(c: &ChainComplex, k: i64) -> ChainMap {
        let comps = c.ranks().iter().map(|(&n, &r)| (n, Matrix::identity(Z, r).scale(&Z.from_i64(k)))).collect();
        ChainMap::from_parts(c.clone(), c.clone(), comps)
    }

    #[test]
    fn single_object() {
        let mut d = PosetDiagram::new(Z);
        let c = ChainComplex::two_term(1, Matrix::from_rows(Z, &[[3]]));
        d.add_object(c.clone()).unwrap();
        let col = poset_colimit(&d).unwrap();
        assert_eq!(col.presented.generators(), &c);
        assert_eq!(col.presented.free_quotient().unwrap().complex, c);
    }

    #[test]
    fn span_from_zero_is_sum() {
        let a = ChainComplex::concentrated(Z, 0, 1);
        let b = ChainComplex::concentrated(Z, 1, 2);
        let zero = ChainComplex::zero(Z);
        let mut d = PosetDiagram::new(Z);
        let ia = d.add_object(a.clone()).unwrap();
        let ib = d.add_object(b.clone()).unwrap();
        let ic = d.add_object(zero.clone()).unwrap();
        d.add_edge(ic, ia, ChainMap::zero(&zero, &a)).unwrap();
        d.add_edge(ic, ib, ChainMap::zero(&zero, &b)).unwrap();
        let col = poset_colimit(&d).unwrap();
        let free = col.presented.free_quotient().unwrap();
        assert_eq!(free.complex, ChainComplex::direct_sum(&[&a, &b], Z));
    }

    #[test]
    fn pushout_of_times_two_and_identity() {
        // coker(ℤ → ℤ ⊕ ℤ, x ↦ (2x, −x)) ≅ ℤ.
        let r = ChainComplex::unit(Z);
        let mut d = PosetDiagram::new(Z);
        let c = d.add_object(r.clone()).unwrap();
        let a = d.add_object(r.clone()).unwrap();
        let b = d.add_object(r.clone()).unwrap();
        d.add_edge(c, a, scalar_map(&r, 2)).unwrap();
        d.add_edge(c, b, ChainMap::identity(&r)).unwrap();
        let col = poset_colimit(&d).unwrap();
        assert_eq!(col.presented.homology(0), HomologyModule::free(Z, 1));
        assert_eq!(col.presented.free_quotient().unwrap().complex.total_rank(), 1);
    }

    #[test]
    fn torsion_colimit_resolves() {
        // Coequalizer of ×2 and 0 on ℤ: ℤ/2 in degree 0.
        let r = ChainComplex::unit(Z);
        let mut d = PosetDiagram::new(Z);
        let top = d.add_object(r.clone()).unwrap();
        let mid = d.add_object(r.clone()).unwrap();
        let bot = d.add_object(r.clone()).unwrap();
        d.add_edge(top, mid, ChainMap::identity(&r)).unwrap();
        d.add_edge(mid, bot, scalar_map(&r, 2)).unwrap();
        d.add_edge(top, bot, scalar_map(&r, 2)).unwrap();
        let col = poset_colimit(&d).unwrap();
        assert!(col.presented.is_torsion_free());

        let mut e = PosetDiagram::new(Z);
        let x = e.add_object(r.clone()).unwrap();
        let y = e.add_object(r.clone()).unwrap();
        let zero = ChainComplex::zero(Z);
        let z = e.add_object(zero.clone()).unwrap();
        e.add_edge(x, y, scalar_map(&r, 2)).unwrap();
        e.add_edge(x, z, ChainMap::zero(&r, &zero)).unwrap();
        let col = poset_colimit(&e).unwrap();
        assert!(!col.presented.is_torsion_free());
        assert_eq!(col.presented.homology(0).torsion, vec![BigInt::from(2)]);
        let tot = col.presented.resolve();
        assert_eq!(tot.homology(0).torsion, vec![BigInt::from(2)]);
        assert!(tot.homology(1).is_zero());
    }

    #[test]
    fn detects_non_commuting_square() {
        let r = ChainComplex::unit(Z);
        let mut d = PosetDiagram::new(Z);
        let top = d.add_object(r.clone()).unwrap();
        let left = d.add_object(r.clone()).unwrap();
        let right = d.add_object(r.clone()).unwrap();
        let bot = d.add_object(r.clone()).unwrap();
        d.add_edge(top, left, scalar_map(&r, 2)).unwrap();
        d.add_edge(top, right, scalar_map(&r, 3)).unwrap();
        d.add_edge(left, bot, ChainMap::identity(&r)).unwrap();
        d.add_edge(right, bot, ChainMap::identity(&r)).unwrap();
        assert!(matches!(poset_colimit(&d), Err(Error::Diagram(_))));
    }

    #[test]
    fn detects_cycles() {
        let r = ChainComplex::unit(Z);
        let mut d = PosetDiagram::new(Z);
        let a = d.add_object(r.clone()).unwrap();
        let b = d.add_object(r.clone()).unwrap();
        d.add_edge(a, b, ChainMap::identity(&r)).unwrap();
        d.add_edge(b, a, ChainMap::identity(&r)).unwrap();
        assert!(poset_colimit(&d).is_err());
    }
}
