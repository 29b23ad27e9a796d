//! Graded modules over the Rees algebra `R[t]`, `t` of weight −1.
//!
//! A module is a window of pieces `M(w)` with `t: M(w) → M(w−1)`; below the
//! window it is either constant (`t` the identity) or zero, as for filtered
//! complexes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::linsys::{BlockUnknowns, LinearSystem};
use crate::exactla::{BaseRing, ChainComplex, ChainMap, Matrix};
use crate::filtered::{cone_tower, kan_extend, DayTensor, FilteredComplex, Tail};
use crate::graded::{Comodule, GradedComplex};
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReesModule {
    ring: BaseRing,
    bottom: i64,
    pieces: Vec<ChainComplex>,
    /// `t_action[k]: M(bottom+k+1) → M(bottom+k)`.
    t_action: Vec<ChainMap>,
    tail: Tail,
}

impl ReesModule {
    /// `pieces[k]` is `M(bottom + k)`; `t_action[k]` is `t: M(bottom+k+1) → M(bottom+k)`.
    pub fn new(
        ring: BaseRing,
        bottom: i64,
        pieces: Vec<ChainComplex>,
        t_action: Vec<ChainMap>,
        tail: Tail,
    ) -> Result<Self> {
        if pieces.is_empty() {
            if !t_action.is_empty() {
                return Err(Error::InvalidRees("t-action without pieces".into()));
            }
            return Ok(ReesModule::zero(ring));
        }
        if t_action.len() + 1 != pieces.len() {
            return Err(Error::InvalidRees(format!(
                "{} pieces need {} t-components, got {}",
                pieces.len(),
                pieces.len() - 1,
                t_action.len()
            )));
        }
        if let Some(k) = pieces.iter().position(|c| c.ring() != ring) {
            return Err(Error::InvalidRees(format!("weight {} is not over {ring}", bottom + k as i64)));
        }
        for (k, t) in t_action.iter().enumerate() {
            let w = bottom + k as i64 + 1;
            if t.source() != &pieces[k + 1] || t.target() != &pieces[k] {
                return Err(Error::InvalidRees(format!("t at weight {w} does not go M({w}) → M({})", w - 1)));
            }
            if !t.is_valid() {
                return Err(Error::InvalidRees(format!("t at weight {w} does not commute with the differential")));
            }
        }
        Ok(ReesModule { ring, bottom, pieces, t_action, tail })
    }

    pub fn zero(ring: BaseRing) -> Self {
        ReesModule { ring, bottom: 0, pieces: Vec::new(), t_action: Vec::new(), tail: Tail::Zero }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        (!self.is_zero()).then(|| (self.bottom, self.bottom + self.pieces.len() as i64 - 1))
    }

    /// `M(w)` for any weight.
    pub fn piece(&self, w: i64) -> ChainComplex {
        match self.window() {
            Some((lo, hi)) if w <= hi => {
                if w >= lo {
                    self.pieces[(w - lo) as usize].clone()
                } else if self.tail == Tail::Constant {
                    self.pieces[0].clone()
                } else {
                    ChainComplex::zero(self.ring)
                }
            }
            _ => ChainComplex::zero(self.ring),
        }
    }

    /// `t: M(w) → M(w−1)` for any weight.
    pub fn t(&self, w: i64) -> ChainMap {
        if let Some((lo, hi)) = self.window() {
            if w > lo && w <= hi {
                return self.t_action[(w - lo - 1) as usize].clone();
            }
            if w <= lo && self.tail == Tail::Constant {
                return ChainMap::identity(&self.pieces[0]);
            }
        }
        ChainMap::zero(&self.piece(w), &self.piece(w - 1))
    }

    /// `t^k: M(w) → M(w−k)`.
    pub fn t_power(&self, w: i64, k: u32) -> ChainMap {
        let mut f = ChainMap::identity(&self.piece(w));
        for step in 0..k as i64 {
            f = f.then(&self.t(w - step));
        }
        f
    }

    /// The window pieces as a graded complex.
    pub fn underlying_graded(&self) -> GradedComplex {
        let Some((lo, hi)) = self.window() else { return GradedComplex::zero(self.ring) };
        GradedComplex::from_parts(self.ring, (lo..=hi).map(|w| (w, self.piece(w))))
    }

    /// Pieces down to `depth` weights below the window, materializing a constant tail.
    pub fn windowed(&self, depth: u32) -> GradedComplex {
        let Some((lo, hi)) = self.window() else { return GradedComplex::zero(self.ring) };
        GradedComplex::from_parts(self.ring, (lo - depth as i64..=hi).map(|w| (w, self.piece(w))))
    }

    /// Comodule of the windowed graded object.
    pub fn to_comodule(&self, depth: u32) -> Comodule {
        self.windowed(depth).to_comodule()
    }
}

/// `R[t]` itself: the ring in every weight `≤ 0`, `t` the identity.
pub fn rees_unit(ring: BaseRing) -> ReesModule {
    ReesModule { ring, bottom: 0, pieces: vec![ChainComplex::unit(ring)], t_action: Vec::new(), tail: Tail::Constant }
}

pub fn to_rees(x: &FilteredComplex) -> ReesModule {
    let Some((lo, hi)) = x.window() else { return ReesModule::zero(x.ring()) };
    ReesModule {
        ring: x.ring(),
        bottom: lo,
        pieces: x.levels().to_vec(),
        t_action: (lo + 1..=hi).map(|n| x.structure_map(n)).collect(),
        tail: x.tail(),
    }
}

pub fn from_rees(m: &ReesModule) -> FilteredComplex {
    FilteredComplex::new(m.ring, m.bottom, m.pieces.clone(), m.t_action.clone(), m.tail)
        .expect("Rees data is valid filtered data")
}

/// Derived base change along `t ↦ 0`: weight `w` is `cone(t: M(w+1) → M(w))`.
pub fn closed_point_pullback(m: &ReesModule) -> GradedComplex {
    let Some((lo, hi)) = m.window() else { return GradedComplex::zero(m.ring) };
    let lo = if m.tail == Tail::Zero { lo - 1 } else { lo };
    cone_tower(m.ring, lo, hi, |w| m.t(w + 1))
}

/// Base change along `t ↦ 1`: the colimit along `t`, reached at the bottom of the window.
pub fn generic_point_pullback(m: &ReesModule) -> ChainComplex {
    match (m.tail, m.window()) {
        (Tail::Constant, Some((lo, _))) => m.piece(lo),
        _ => ChainComplex::zero(m.ring),
    }
}

/// `0 → Rel → F → M → 0`, with `F = ⊕_w M(w)·R[t]` on generators in weight `w`
/// and one relation `t·e_w − e_{w−1}·t_w` in weight `w − 1` per non-bottom weight
/// (and at the bottom as well when the tail is zero).
#[derive(Clone, Debug)]
pub struct ReesResolution {
    pub free: ReesModule,
    pub relations: ReesModule,
    /// Weights of the relation generators' sources `M(w)`.
    relation_weights: Vec<i64>,
    /// Weights of the generators of `F`.
    generator_weights: Vec<i64>,
    module: ReesModule,
}

impl ReesResolution {
    /// Weights `w` of the generator slots `M(w)` of `F`.
    pub fn generator_weights(&self) -> &[i64] {
        &self.generator_weights
    }

    /// Weights `w` of the relation slots `M(w)`; each relation lives in weight `w − 1`.
    pub fn relation_weights(&self) -> &[i64] {
        &self.relation_weights
    }

    pub fn module(&self) -> &ReesModule {
        &self.module
    }

    /// `δ: Rel(v) → F(v)`.
    pub fn delta(&self, v: i64) -> ChainMap {
        let m = &self.module;
        let ring = m.ring;
        let rel_slots: Vec<i64> = self.relation_weights.iter().copied().filter(|&w| w > v).collect();
        let gen_slots: Vec<i64> = self.generator_weights.iter().copied().filter(|&w| w >= v).collect();
        let sources: Vec<ChainComplex> = rel_slots.iter().map(|&w| m.piece(w)).collect();
        let targets: Vec<ChainComplex> = gen_slots.iter().map(|&w| m.piece(w)).collect();
        let mut blocks = BTreeMap::new();
        for (j, &w) in rel_slots.iter().enumerate() {
            if let Some(i) = gen_slots.iter().position(|&u| u == w) {
                blocks.insert((i, j), ChainMap::identity(&m.piece(w)));
            }
            if let Some(i) = gen_slots.iter().position(|&u| u == w - 1) {
                blocks.insert((i, j), m.t(w).neg());
            }
        }
        let s: Vec<&ChainComplex> = sources.iter().collect();
        let t: Vec<&ChainComplex> = targets.iter().collect();
        ChainMap::block(ring, &s, &t, &blocks)
    }

    /// `ε: F(v) → M(v)`, summing `t^{w−v}` over the generator slots.
    pub fn augmentation(&self, v: i64) -> ChainMap {
        let m = &self.module;
        let gen_slots: Vec<i64> = self.generator_weights.iter().copied().filter(|&w| w >= v).collect();
        let sources: Vec<ChainComplex> = gen_slots.iter().map(|&w| m.piece(w)).collect();
        let target = m.piece(v);
        let blocks = gen_slots
            .iter()
            .enumerate()
            .map(|(j, &w)| ((0, j), m.t_power(w, (w - v) as u32)))
            .collect();
        let s: Vec<&ChainComplex> = sources.iter().collect();
        ChainMap::block(m.ring, &s, &[&target], &blocks)
    }

    /// Weights where the resolution is not yet in its tail.
    pub fn weights(&self) -> (i64, i64) {
        let (lo, hi) = self.module.window().unwrap_or((0, -1));
        (lo - 1, hi)
    }

    /// Whether `cone(δ_v) → M(v)` is a quasi-isomorphism at every weight of the window.
    pub fn is_resolution(&self) -> bool {
        let (lo, hi) = self.weights();
        let ws: Vec<i64> = (lo - 1..=hi).collect();
        par::map(&ws, |&v| {
            let (d, e) = (self.delta(v), self.augmentation(v));
            d.then(&e).is_zero() && cone_to(&d, &e).is_quasi_isomorphism()
        })
        .into_iter()
        .all(|ok| ok)
    }

    /// Whether `ε: F → M` has a degreewise `R[t]`-linear section, i.e. the
    /// resolution splits (exactly when `M` is free).
    pub fn splits(&self) -> bool {
        let m = &self.module;
        let (lo, hi) = self.weights();
        let mut unknowns = BlockUnknowns::default();
        for v in lo..=hi {
            let (mv, fv) = (m.piece(v), self.free.piece(v));
            for (&n, &r) in mv.ranks() {
                unknowns.push((v, n), fv.rank(n), r);
            }
        }
        let mut sys = LinearSystem::new(m.ring);
        for v in lo..=hi {
            let mv = m.piece(v);
            let (eps, t_free, t_mod) = (self.augmentation(v), self.free.t(v), m.t(v));
            for (&n, &r) in mv.ranks() {
                let id = Matrix::identity(m.ring, r);
                sys.add(&unknowns, &[(&eps.component(n), (v, n), &id, false)], Some(&id));
                if v > lo {
                    let rows = self.free.piece(v - 1).rank(n);
                    let left = Matrix::identity(m.ring, rows);
                    let tf = t_free.component(n);
                    let tm = t_mod.component(n);
                    sys.add(&unknowns, &[(&tf, (v, n), &id, false), (&left, (v - 1, n), &tm, true)], None);
                }
            }
        }
        sys.solve(unknowns.count).is_some()
    }
}

/// `cone(d) → target(e)` given `e ∘ d = 0`: `(a, b) ↦ e(a)`.
fn cone_to(d: &ChainMap, e: &ChainMap) -> ChainMap {
    let ring = d.ring();
    let cone = d.cone();
    let comps = cone
        .ranks()
        .keys()
        .filter(|n| e.target().rank(**n) > 0)
        .map(|&n| {
            let mut m = Matrix::zero(ring, e.target().rank(n), cone.rank(n));
            let c = e.component(n);
            if c.cols() > 0 {
                m.place(0, 0, &c);
            }
            (n, m)
        })
        .collect();
    ChainMap::from_parts(cone, e.target().clone(), comps)
}

pub fn rees_resolution(m: &ReesModule) -> ReesResolution {
    let ring = m.ring;
    let Some((lo, hi)) = m.window() else {
        return ReesResolution {
            free: ReesModule::zero(ring),
            relations: ReesModule::zero(ring),
            relation_weights: Vec::new(),
            generator_weights: Vec::new(),
            module: m.clone(),
        };
    };
    let generator_weights: Vec<i64> = (lo..=hi).collect();
    let relation_weights: Vec<i64> = match m.tail {
        Tail::Constant => (lo + 1..=hi).collect(),
        Tail::Zero => (lo..=hi).collect(),
    };
    let gens = GradedComplex::from_parts(ring, generator_weights.iter().map(|&w| (w, m.piece(w))));
    let rels = GradedComplex::from_parts(ring, relation_weights.iter().map(|&w| (w - 1, m.piece(w))));
    ReesResolution {
        free: to_rees(&kan_extend(&gens)),
        relations: to_rees(&kan_extend(&rels)),
        relation_weights,
        generator_weights,
        module: m.clone(),
    }
}

/// Derived tensor over `R[t]`, resolving the left factor:
/// weight `v` is `cone(⊕_{rel w} M(w)⊗N(v−w+1) → ⊕_w M(w)⊗N(v−w))` with
/// `x⊗y ↦ x⊗t y − t x⊗y`.
pub fn rees_tensor(m: &ReesModule, n: &ReesModule) -> Result<ReesModule> {
    Ok(ReesTensor::new(m, n)?.result)
}

/// The derived tensor together with its two-term presentation per weight.
pub struct ReesTensor {
    pub result: ReesModule,
    m: ReesModule,
    n: ReesModule,
    generator_weights: Vec<i64>,
    relation_weights: Vec<i64>,
    deltas: BTreeMap<i64, ChainMap>,
}

impl ReesTensor {
    pub fn new(m: &ReesModule, n: &ReesModule) -> Result<Self> {
        if m.ring != n.ring {
            return Err(Error::RingMismatch { left: m.ring, right: n.ring });
        }
        let ring = m.ring;
        let res = rees_resolution(m);
        let mut out = ReesTensor {
            result: ReesModule::zero(ring),
            m: m.clone(),
            n: n.clone(),
            generator_weights: res.generator_weights.clone(),
            relation_weights: res.relation_weights.clone(),
            deltas: BTreeMap::new(),
        };
        let (Some((mlo, mhi)), Some((nlo, nhi))) = (m.window(), n.window()) else { return Ok(out) };
        let (lo, hi) = (mlo + nlo - 1, mhi + nhi);
        let ws: Vec<i64> = (lo..=hi).collect();
        out.deltas = par::map(&ws, |&v| (v, out.delta(v))).into_iter().collect();
        let pieces: Vec<ChainComplex> = ws.iter().map(|v| out.deltas[v].cone()).collect();
        let t_action = par::map(&ws[1..], |&v| {
            let (upper, lower) = (&out.deltas[&v], &out.deltas[&(v - 1)]);
            upper.cone_map(lower, &out.t_on(v, true), &out.t_on(v, false))
        });
        out.result = ReesModule { ring, bottom: lo, pieces, t_action, tail: n.tail };
        Ok(out)
    }

    fn rel_slots(&self) -> &[i64] {
        &self.relation_weights
    }

    fn rel_parts(&self, v: i64) -> Vec<ChainComplex> {
        self.rel_slots().iter().map(|&w| self.m.piece(w).tensor(&self.n.piece(v - w + 1))).collect()
    }

    fn gen_parts(&self, v: i64) -> Vec<ChainComplex> {
        self.generator_weights.iter().map(|&w| self.m.piece(w).tensor(&self.n.piece(v - w))).collect()
    }

    fn delta(&self, v: i64) -> ChainMap {
        let ring = self.m.ring;
        let (rel, gen) = (self.rel_parts(v), self.gen_parts(v));
        let mut blocks = BTreeMap::new();
        for (j, &w) in self.rel_slots().iter().enumerate() {
            let (mw, nv) = (self.m.piece(w), self.n.piece(v - w + 1));
            if let Some(i) = self.generator_weights.iter().position(|&u| u == w) {
                blocks.insert((i, j), ChainMap::identity(&mw).tensor(&self.n.t(v - w + 1)));
            }
            if let Some(i) = self.generator_weights.iter().position(|&u| u == w - 1) {
                blocks.insert((i, j), self.m.t(w).tensor(&ChainMap::identity(&nv)).neg());
            }
        }
        let s: Vec<&ChainComplex> = rel.iter().collect();
        let t: Vec<&ChainComplex> = gen.iter().collect();
        ChainMap::block(ring, &s, &t, &blocks)
    }

    /// `1 ⊗ t_N` on the relation part (`relations = true`) or generator part at weight `v`.
    fn t_on(&self, v: i64, relations: bool) -> ChainMap {
        let ring = self.m.ring;
        let (slots, shift): (&[i64], i64) =
            if relations { (self.rel_slots(), 1) } else { (&self.generator_weights, 0) };
        let src: Vec<ChainComplex> = slots.iter().map(|&w| self.m.piece(w).tensor(&self.n.piece(v - w + shift))).collect();
        let tgt: Vec<ChainComplex> =
            slots.iter().map(|&w| self.m.piece(w).tensor(&self.n.piece(v - 1 - w + shift))).collect();
        let blocks = slots
            .iter()
            .enumerate()
            .map(|(k, &w)| ((k, k), ChainMap::identity(&self.m.piece(w)).tensor(&self.n.t(v - w + shift))))
            .collect();
        let s: Vec<&ChainComplex> = src.iter().collect();
        let t: Vec<&ChainComplex> = tgt.iter().collect();
        ChainMap::block(ring, &s, &t, &blocks)
    }

    /// Map from weight `v` into a target that receives each generator block
    /// `M(w) ⊗ N(v−w)` through `image(w, v−w)`; relations go to zero.
    fn map_out(&self, v: i64, target: &ChainComplex, image: impl Fn(i64, i64) -> Result<ChainMap>) -> Result<ChainMap> {
        let ring = self.m.ring;
        let d = self.delta_at(v);
        let gens = self.gen_parts(v);
        let mut blocks = BTreeMap::new();
        for (k, &w) in self.generator_weights.iter().enumerate() {
            blocks.insert((0, k), image(w, v - w)?);
        }
        let s: Vec<&ChainComplex> = gens.iter().collect();
        let g = ChainMap::block(ring, &s, &[target], &blocks);
        Ok(cone_to(&d, &g))
    }

    fn delta_at(&self, v: i64) -> ChainMap {
        self.deltas.get(&v).cloned().unwrap_or_else(|| self.delta(v))
    }
}

/// Per-weight comparison `rees_tensor(to_rees x, to_rees y)(v) → (x ⊗_Day y)_v`.
#[derive(Clone, Debug)]
pub struct MonoidalComparison {
    pub maps: BTreeMap<i64, ChainMap>,
}

impl MonoidalComparison {
    /// Every component is a valid chain map inducing isomorphisms on homology.
    pub fn is_quasi_isomorphism(&self) -> bool {
        self.maps.values().all(|f| f.is_valid() && f.is_quasi_isomorphism())
    }

    /// Homology of source and target agree in every weight and degree.
    pub fn homology_matches(&self) -> bool {
        self.maps.values().all(|f| f.source().homology_all() == f.target().homology_all())
    }
}

/// Builds the comparison map for cellular `x`, `y`.
pub fn monoidal_comparison(x: &FilteredComplex, y: &FilteredComplex) -> Result<MonoidalComparison> {
    let day = DayTensor::new(x, y)?;
    let tensor = ReesTensor::new(&to_rees(x), &to_rees(y))?;
    let Some((lo, hi)) = tensor.result.window() else { return Ok(MonoidalComparison { maps: BTreeMap::new() }) };
    let ws: Vec<i64> = (lo - 1..=hi).collect();
    let maps = par::map(&ws, |&v| {
        let target = day.result.level(v);
        let f = tensor.map_out(v, &target, |i, j| day.vertex_image(v, i, j))?;
        debug_assert_eq!(f.source(), &tensor.result.piece(v));
        Ok((v, f))
    });
    Ok(MonoidalComparison { maps: maps.into_iter().collect::<Result<_>>()? })
}

/// Reported homology of `windowed(depth)` and `windowed(depth + 1)` agree on
/// the weights retained by the shallower window.
pub fn tail_is_stable(m: &ReesModule, depth: u32) -> bool {
    let a = m.windowed(depth).homology();
    let b = m.windowed(depth + 1).homology();
    let lo = m.window().map_or(0, |w| w.0) - depth as i64;
    b.into_iter().filter(|((w, _), _)| *w >= lo).collect::<BTreeMap<_, _>>() == a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::HomologyModule;
    use num_bigint::BigInt;

    const Z: BaseRing = BaseRing::Integers;

    fn times_two() -> FilteredComplex {
        let r = ChainComplex::unit(Z);
        FilteredComplex::two_step(1, ChainMap::new(r.clone(), r, [(0, Matrix::from_rows(Z, &[[2]]))]).unwrap())
    }

    #[test]
    fn transcription_examples() {
        assert_eq!(to_rees(&FilteredComplex::unit(Z)), rees_unit(Z));
        assert_eq!(from_rees(&rees_unit(Z)), FilteredComplex::unit(Z));
        let a = to_rees(&FilteredComplex::algebra_a(Z));
        assert_eq!(a.window(), Some((0, 0)));
        assert!(a.t(0).is_zero());
        let m = to_rees(&times_two());
        assert_eq!(m.t(1).component(0), Matrix::from_rows(Z, &[[2]]));
        assert_eq!(from_rees(&m), times_two());
    }

    #[test]
    fn unit_window_total() {
        let g = rees_unit(Z).windowed(3);
        assert_eq!(g.total(), ChainComplex::concentrated(Z, 0, 4));
    }

    #[test]
    fn coaction_is_diagonal() {
        let c = rees_unit(Z).to_comodule(4);
        for n in 0..=4usize {
            assert_eq!(c.coaction_index(0, n), Some(n as i64 - 4));
        }
    }

    #[test]
    fn pullbacks() {
        assert_eq!(closed_point_pullback(&rees_unit(Z)), GradedComplex::unit(Z));
        assert_eq!(generic_point_pullback(&rees_unit(Z)), ChainComplex::unit(Z));
        let a = to_rees(&FilteredComplex::algebra_a(Z));
        assert!(generic_point_pullback(&a).is_zero());
        let g = closed_point_pullback(&a);
        assert_eq!(g.piece(0).homology(0), HomologyModule::free(Z, 1));
        assert_eq!(g.piece(-1).homology(1), HomologyModule::free(Z, 1));
        let x = times_two();
        assert_eq!(closed_point_pullback(&to_rees(&x)), x.gr());
    }

    #[test]
    fn resolutions() {
        assert!(rees_resolution(&rees_unit(Z)).is_resolution());
        let a = rees_resolution(&to_rees(&FilteredComplex::algebra_a(Z)));
        assert!(a.is_resolution());
        // Koszul: one generator in weight 0, one relation in weight −1 mapping by t.
        assert_eq!(a.relations.window(), Some((-1, -1)));
        assert_eq!(a.delta(-1).component(0), Matrix::from_rows(Z, &[[1]]));
        assert!(rees_resolution(&to_rees(&times_two())).is_resolution());
        let g = GradedComplex::new(Z, [(0, ChainComplex::unit(Z)), (2, ChainComplex::unit(Z))]).unwrap();
        assert!(rees_resolution(&to_rees(&kan_extend(&g))).splits());
        assert!(!rees_resolution(&to_rees(&times_two())).splits());
    }

    #[test]
    fn tensor_unit_law() {
        let m = to_rees(&times_two());
        let t = rees_tensor(&rees_unit(Z), &m).unwrap();
        for w in -2..=2 {
            assert_eq!(t.piece(w).homology_all(), m.piece(w).homology_all(), "weight {w}");
        }
    }

    #[test]
    fn a_tensor_a_has_tor_one() {
        let a = to_rees(&FilteredComplex::algebra_a(Z));
        let t = rees_tensor(&a, &a).unwrap();
        assert_eq!(t.piece(0).homology(0), HomologyModule::free(Z, 1));
        assert!(t.piece(0).homology(1).is_zero());
        assert_eq!(t.piece(-1).homology(1), HomologyModule::free(Z, 1));
        assert!(t.piece(-2).is_acyclic());
    }

    #[test]
    fn comparison_on_cellular_pair() {
        let g = GradedComplex::new(Z, [(0, ChainComplex::unit(Z)), (1, ChainComplex::concentrated(Z, 1, 1))]).unwrap();
        let x = kan_extend(&g);
        let c = monoidal_comparison(&x, &x).unwrap();
        assert!(c.is_quasi_isomorphism());
        assert!(c.homology_matches());
        let c = monoidal_comparison(&FilteredComplex::unit(Z), &x).unwrap();
        assert!(c.is_quasi_isomorphism());
    }

    #[test]
    fn times_two_square_matches_day_homology() {
        let x = times_two();
        let day = x.day_tensor(&x).unwrap();
        let t = rees_tensor(&to_rees(&x), &to_rees(&x)).unwrap();
        for w in -1..=2 {
            assert_eq!(t.piece(w).homology_all(), day.level(w).homology_all(), "weight {w}");
        }
        assert_eq!(day.level(1).homology(0).torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn tail_stability() {
        assert!(tail_is_stable(&rees_unit(Z), 4));
        assert!(tail_is_stable(&to_rees(&times_two()), 2));
    }
}
