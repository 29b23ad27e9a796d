//! Connectivity predicates and truncations: the standard t-structure (every
//! piece connective) and the Beilinson one (weight `n` connective from `−n`).

use std::collections::BTreeMap;

use crate::exactla::{ChainComplex, ChainMap, Submodule};
use crate::filtered::FilteredComplex;
use crate::graded::GradedComplex;
use crate::par;

/// Result of a connectivity test; on failure, the first offending
/// `(weight, degree)` in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub witness: Option<(i64, i64)>,
}

impl Connectivity {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Good truncation `τ_{≥n}`: `C_n` is replaced by the cycles `ker d_n`.
pub fn truncate(c: &ChainComplex, n: i64) -> ChainComplex {
    let ring = c.ring();
    let cycles = Submodule::kernel(&c.differential(n));
    let mut ranks: BTreeMap<i64, usize> = c.ranks().range(n + 1..).map(|(&k, &r)| (k, r)).collect();
    ranks.insert(n, cycles.rank());
    let mut diffs: BTreeMap<_, _> = c.ranks().range(n + 2..).map(|(&k, _)| (k, c.differential(k))).collect();
    if c.rank(n + 1) > 0 && cycles.rank() > 0 {
        let d = cycles.coords(&c.differential(n + 1)).expect("boundaries are cycles");
        diffs.insert(n + 1, d);
    }
    ChainComplex::new(ring, ranks, diffs).expect("truncation of a complex")
}

/// `τ_{≥n}` applied to a chain map; on `C_n` the map is restricted to cycles.
pub fn truncate_map(f: &ChainMap, n: i64) -> ChainMap {
    let (src, tgt) = (truncate(f.source(), n), truncate(f.target(), n));
    let mut comps: BTreeMap<i64, _> = f.components().range(n + 1..).map(|(&k, m)| (k, m.clone())).collect();
    let (zs, zt) = (Submodule::kernel(&f.source().differential(n)), Submodule::kernel(&f.target().differential(n)));
    if zs.rank() > 0 && zt.rank() > 0 {
        let image = f.component(n).mul(zs.basis());
        comps.insert(n, zt.coords(&image).expect("chain maps send cycles to cycles"));
    }
    ChainMap::new(src, tgt, comps).expect("truncation is functorial")
}

/// Levelwise `τ_{≥n}` of a filtered complex.
pub fn truncate_filtered(x: &FilteredComplex, n: i64) -> FilteredComplex {
    let Some((lo, hi)) = x.window() else { return x.clone() };
    let levels = (lo..=hi).map(|k| truncate(&x.level(k), n)).collect();
    let maps = (lo + 1..=hi).map(|k| truncate_map(&x.structure_map(k), n)).collect();
    FilteredComplex::new(x.ring(), lo, levels, maps, x.tail()).expect("levelwise truncation")
}

/// Piecewise `τ_{≥n}` of a graded complex.
pub fn truncate_graded(g: &GradedComplex, n: i64) -> GradedComplex {
    GradedComplex::new(g.ring(), g.pieces().iter().map(|(&w, c)| (w, truncate(c, n)))).expect("same ring")
}

fn first_negative(c: &ChainComplex, below: i64) -> Option<i64> {
    c.ranks().range(..below).map(|(&k, _)| k).find(|&k| !c.homology(k).is_zero())
}

fn first_failure(pieces: Vec<(i64, ChainComplex)>, threshold: impl Fn(i64) -> i64 + Sync + Send) -> Connectivity {
    let found = par::map(&pieces, |(w, c)| first_negative(c, threshold(*w)).map(|k| (*w, k)));
    Connectivity { witness: found.into_iter().flatten().next() }
}

/// Every piece has vanishing homology in negative degrees.
pub fn is_connective_standard(g: &GradedComplex) -> Connectivity {
    first_failure(g.pieces().iter().map(|(&w, c)| (w, c.clone())).collect(), |_| 0)
}

/// Every level (the window and its tail value) is connective; witness is `(level, degree)`.
pub fn is_connective_standard_filtered(x: &FilteredComplex) -> Connectivity {
    let Some((lo, hi)) = x.window() else { return Connectivity { witness: None } };
    first_failure((lo..=hi).map(|n| (n, x.level(n))).collect(), |_| 0)
}

/// `H_k(g(n)) = 0` for `k < −n`.
pub fn is_connective_beilinson(g: &GradedComplex) -> Connectivity {
    first_failure(g.pieces().iter().map(|(&w, c)| (w, c.clone())).collect(), |w| -w)
}

/// Piecewise `τ_{≥ −n}` on weight `n`.
pub fn truncate_beilinson(g: &GradedComplex) -> GradedComplex {
    truncate_beilinson_at(g, 0)
}

/// Beilinson `τ_{≥k}`: `τ_{≥ k−n}` on weight `n`.
pub fn truncate_beilinson_at(g: &GradedComplex, k: i64) -> GradedComplex {
    let pieces: Vec<(i64, &ChainComplex)> = g.pieces().iter().map(|(&w, c)| (w, c)).collect();
    let out = par::map(&pieces, |&(w, c)| (w, truncate(c, k - w)));
    GradedComplex::new(g.ring(), out).expect("same ring")
}

/// Beilinson connectivity detected on the associated graded.
pub fn is_connective_beilinson_filtered(x: &FilteredComplex) -> Connectivity {
    is_connective_beilinson(&x.gr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{BaseRing, ChainMap, HomologyModule, Matrix};
    use num_bigint::BigInt;

    const Z: BaseRing = BaseRing::Integers;

    #[test]
    fn truncation_examples() {
        let c = ChainComplex::two_term(1, Matrix::from_rows(Z, &[[2]]));
        let t = truncate(&c, 0);
        assert_eq!(t.homology(0).torsion, vec![BigInt::from(2)]);
        assert_eq!(truncate(&c, 1).homology_all(), BTreeMap::new());
        assert_eq!(truncate(&c, -5), c);
        let acyclic = ChainComplex::two_term(3, Matrix::from_rows(Z, &[[1]]));
        assert!(truncate(&acyclic, 2).is_acyclic());
    }

    #[test]
    fn truncation_keeps_upper_homology() {
        let c = ChainComplex::new(
            Z,
            [(2, 1), (1, 2), (0, 1)],
            [(2, Matrix::from_rows(Z, &[[1], [0]])), (1, Matrix::from_rows(Z, &[[0, 3]]))],
        )
        .unwrap();
        let t = truncate(&c, 1);
        assert_eq!(t.homology(1), c.homology(1));
        assert!(t.homology(0).is_zero());
        assert_eq!(t.homology(2), c.homology(2));
    }

    #[test]
    fn filtered_truncation_keeps_maps() {
        let r = ChainComplex::two_term(1, Matrix::from_rows(Z, &[[2]]));
        let f = ChainMap::new(ChainComplex::unit(Z), r, [(0, Matrix::from_rows(Z, &[[1]]))]).unwrap();
        let x = FilteredComplex::two_step(1, f);
        let t = truncate_filtered(&x, 0);
        assert!(is_connective_standard_filtered(&t).holds());
        assert_eq!(t.level(0).homology(0), x.level(0).homology(0));
        assert_eq!(t.structure_map(1).component(0), Matrix::from_rows(Z, &[[1]]));
        assert_eq!(truncate_filtered(&x, -3), x);
    }

    #[test]
    fn standard_connectivity() {
        assert!(is_connective_standard(&GradedComplex::unit(Z)).holds());
        let g = GradedComplex::new(Z, [(3, ChainComplex::concentrated(Z, -1, 1))]).unwrap();
        assert_eq!(is_connective_standard(&g).witness, Some((3, -1)));
        assert!(is_connective_standard_filtered(&FilteredComplex::unit(Z)).holds());
    }

    #[test]
    fn beilinson_connectivity() {
        let g = GradedComplex::new(Z, [(1, ChainComplex::concentrated(Z, -1, 1))]).unwrap();
        assert!(is_connective_beilinson(&g).holds());
        assert!(!is_connective_standard(&g).holds());
        assert!(is_connective_beilinson(&GradedComplex::unit(Z)).holds());
        let bad = GradedComplex::new(Z, [(0, ChainComplex::concentrated(Z, -1, 1))]).unwrap();
        assert_eq!(is_connective_beilinson(&bad).witness, Some((0, -1)));
    }

    #[test]
    fn beilinson_truncation() {
        let c = ChainComplex::new(Z, [(0, 1), (-2, 1)], []).unwrap();
        let g = GradedComplex::new(Z, [(0, c), (2, ChainComplex::concentrated(Z, -3, 1))]).unwrap();
        let t = truncate_beilinson(&g);
        assert!(is_connective_beilinson(&t).holds());
        assert_eq!(t.piece(0).homology(0), HomologyModule::free(Z, 1));
        assert!(t.piece(0).homology(-2).is_zero());
        assert!(t.piece(2).is_acyclic());
    }

    #[test]
    fn filtered_beilinson() {
        assert!(is_connective_beilinson_filtered(&FilteredComplex::unit(Z)).holds());
        assert!(is_connective_beilinson_filtered(&FilteredComplex::algebra_a(Z)).holds());
        // gr_0 = cone(X_1 → X_0) has homology in degree −2 < 0.
        let r = ChainComplex::concentrated(Z, -2, 1);
        let x = FilteredComplex::two_step(1, ChainMap::zero(&ChainComplex::zero(Z), &r));
        assert_eq!(is_connective_beilinson_filtered(&x).witness, Some((0, -2)));
    }
}
