use std::collections::BTreeMap;

use filtra::exactla::{
    poset_colimit, rank, smith_normal_form, BaseRing, ChainComplex, ChainMap, Matrix, PosetDiagram, Scalar, Submodule,
};
use filtra::filtered::{kan_extend, FilteredComplex, Tail};
use filtra::graded::{from_comodule, total_tensor_iso, GradedComplex};
use filtra::rees::{closed_point_pullback, from_rees, generic_point_pullback, to_rees};
use filtra::sample::{self, Shape};
use filtra::specseq::SpectralSequence;
use filtra::tstruct;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const Z: BaseRing = BaseRing::Integers;
const F2: BaseRing = BaseRing::PrimeField(2);

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn int(s: &Scalar) -> BigInt {
    match s {
        Scalar::Int(v) => v.clone(),
        other => panic!("not an integer: {other}"),
    }
}

/// Fraction-free Gaussian elimination (Bareiss).
fn determinant(m: &Matrix) -> BigInt {
    let n = m.rows();
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).iter().map(int).collect()).collect();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return sign;
    }
    sign * &a[n - 1][n - 1]
}

/// `dim H_n` over a field.
fn dim(c: &ChainComplex, n: i64) -> usize {
    c.homology(n).free_rank
}

/// Rank of `H_n(f)` over a field.
fn induced_rank(f: &ChainMap, n: i64) -> usize {
    let cycles = Submodule::kernel(&f.source().differential(n));
    let boundaries = Submodule::span(&f.target().differential(n + 1));
    if cycles.rank() == 0 {
        return 0;
    }
    Submodule::span(&f.component(n).mul(cycles.basis())).sum(&boundaries).rank() - boundaries.rank()
}

fn degrees(cs: &[&ChainComplex]) -> Vec<i64> {
    let lo = cs.iter().filter_map(|c| c.degree_range()).map(|r| r.0).min().unwrap_or(0);
    let hi = cs.iter().filter_map(|c| c.degree_range()).map(|r| r.1).max().unwrap_or(0);
    (lo - 1..=hi + 1).collect()
}

fn field_dims(g: &GradedComplex) -> BTreeMap<(i64, i64), usize> {
    g.homology().into_iter().map(|(k, h)| (k, h.free_rank)).collect()
}

fn add_dims(a: &BTreeMap<(i64, i64), usize>, b: &BTreeMap<(i64, i64), usize>) -> BTreeMap<(i64, i64), usize> {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(*k).or_default() += v;
    }
    out
}

fn is_unimodular(m: &Matrix) -> bool {
    m.rows() == m.cols() && determinant(m).abs() == BigInt::from(1)
}

// exactla

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn smith_form_is_a_unimodular_factorization(seed: u64, rows in 0usize..=6, cols in 0usize..=6) {
        let mut rng = sample::rng(seed);
        let m = sample::matrix(&mut rng, Z, rows, cols, 9);
        let (u, d, v) = smith_normal_form(&m).unwrap();
        prop_assert_eq!(&u.mul(&m).mul(&v), &d);
        prop_assert!(is_unimodular(&u) && is_unimodular(&v));
        let diag: Vec<BigInt> = (0..rows.min(cols)).map(|i| int(d.get(i, i))).collect();
        for i in 0..rows {
            for j in 0..cols {
                prop_assert!(i == j || d.get(i, j) == &Scalar::Int(BigInt::zero()));
            }
        }
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative() && !w[1].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
        prop_assert_eq!(diag.iter().filter(|x| !x.is_zero()).count(), rank(&m));
    }

    #[test]
    fn cones_and_colimits_are_complexes(seed: u64) {
        let mut rng = sample::rng(seed);
        let shape = Shape::new(Z).degrees(-1, 2);
        let (a, b, c) = (sample::complex(&mut rng, shape), sample::complex(&mut rng, shape), sample::complex(&mut rng, shape));
        let f = sample::chain_map(&mut rng, &c, &a, 4);
        let g = sample::chain_map(&mut rng, &c, &b, 4);
        prop_assert!(f.cone().is_valid());
        let mut diagram = PosetDiagram::new(Z);
        let (vc, va, vb) = (diagram.add_object(c).unwrap(), diagram.add_object(a).unwrap(), diagram.add_object(b).unwrap());
        diagram.add_edge(vc, va, f).unwrap();
        diagram.add_edge(vc, vb, g).unwrap();
        let colim = poset_colimit(&diagram).unwrap();
        prop_assert!(colim.presented.generators().is_valid());
        prop_assert!(colim.presented.resolve().is_valid());
        prop_assert!(colim.vertex_maps.iter().all(ChainMap::is_valid));
    }

    #[test]
    fn cone_long_exact_sequence(seed: u64) {
        let mut rng = sample::rng(seed);
        let shape = Shape::new(F2).degrees(-1, 2).max_rank(3);
        let (a, b) = (sample::complex(&mut rng, shape), sample::complex(&mut rng, shape));
        let f = sample::chain_map(&mut rng, &a, &b, 1);
        let c = f.cone();
        for n in degrees(&[&a, &b, &c]) {
            let coker = dim(&b, n) - induced_rank(&f, n);
            let ker = dim(&a, n - 1) - induced_rank(&f, n - 1);
            prop_assert_eq!(dim(&c, n), coker + ker, "degree {}", n);
        }
        let zc = Shape::new(Z).degrees(-1, 2);
        let (a, b) = (sample::complex(&mut rng, zc), sample::complex(&mut rng, zc));
        let f = sample::chain_map(&mut rng, &a, &b, 3);
        let c = f.cone();
        for n in degrees(&[&a, &b, &c]) {
            prop_assert!(c.homology(n).free_rank <= b.homology(n).free_rank + a.homology(n - 1).free_rank);
        }
    }

    #[test]
    fn homology_is_invariant_under_quasi_isomorphism(seed: u64) {
        let mut rng = sample::rng(seed);
        let shape = Shape::new(Z).degrees(-1, 2);
        let c = sample::complex(&mut rng, shape);
        let e = sample::complex(&mut rng, shape);
        let contractible = ChainMap::identity(&e).cone();
        let bigger = ChainComplex::direct_sum(&[&c, &contractible], Z);
        let comps: Vec<(i64, Matrix)> = c
            .ranks()
            .iter()
            .map(|(&n, &r)| (n, Matrix::vstack(Z, r, &[&Matrix::identity(Z, r), &Matrix::zero(Z, contractible.rank(n), r)])))
            .collect();
        let inclusion = ChainMap::new(c.clone(), bigger.clone(), comps).unwrap();
        prop_assert!(inclusion.is_quasi_isomorphism());
        prop_assert_eq!(bigger.homology_all(), c.homology_all());
    }
}

// graded

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn day_tensor_is_associative_and_commutative(seed: u64) {
        let mut rng = sample::rng(seed);
        let shape = Shape::new(Z).degrees(0, 1).max_rank(2).bound(3);
        let x = sample::graded(&mut rng, shape, (-1, 1));
        let y = sample::graded(&mut rng, shape, (-1, 1));
        let z = sample::graded(&mut rng, shape, (0, 1));
        let left = x.day_tensor(&y).unwrap().day_tensor(&z).unwrap();
        let right = x.day_tensor(&y.day_tensor(&z).unwrap()).unwrap();
        prop_assert_eq!(left.homology(), right.homology());
        prop_assert_eq!(x.day_tensor(&y).unwrap().homology(), y.day_tensor(&x).unwrap().homology());
    }

    #[test]
    fn total_is_monoidal(seed: u64) {
        let mut rng = sample::rng(seed);
        let shape = Shape::new(Z).degrees(-1, 1).max_rank(2);
        let x = sample::graded(&mut rng, shape, (-2, 1));
        let y = sample::graded(&mut rng, shape, (0, 2));
        let iso = total_tensor_iso(&x, &y).unwrap();
        prop_assert_eq!(iso.source(), &x.day_tensor(&y).unwrap().total());
        prop_assert_eq!(iso.target(), &x.total().tensor(&y.total()));
        prop_assert!(iso.is_valid());
        prop_assert!(iso.components().values().all(is_unimodular));
    }

    #[test]
    fn comodule_round_trips(seed: u64) {
        let mut rng = sample::rng(seed);
        let (g, c) = sample::comodule(&mut rng, Shape::new(Z).degrees(-1, 1), (-2, 2));
        let back = from_comodule(&c).unwrap();
        prop_assert_eq!(&back.graded.homology(), &g.homology());
        prop_assert!(back.iso.then(&back.inverse).is_identity());
        prop_assert!(back.inverse.then(&back.iso).is_identity());
        let again = from_comodule(&back.graded.to_comodule()).unwrap();
        prop_assert_eq!(&again.graded, &back.graded);
    }

    #[test]
    fn acyclic_total_forces_acyclic_pieces(seed: u64, acyclic in proptest::collection::vec(any::<bool>(), 1..4)) {
        let mut rng = sample::rng(seed);
        let shape = Shape::new(Z).degrees(-1, 1).max_rank(2);
        let pieces: Vec<(i64, ChainComplex)> = acyclic
            .iter()
            .enumerate()
            .map(|(w, &a)| {
                let c = sample::complex(&mut rng, shape);
                (w as i64, if a { ChainMap::identity(&c).cone() } else { c })
            })
            .collect();
        let g = GradedComplex::new(Z, pieces).unwrap();
        prop_assert_eq!(g.total().is_acyclic(), g.is_acyclic());
    }
}

// filtered

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn res_of_kan_extension(seed: u64) {
        let mut rng = sample::rng(seed);
        let g = sample::graded(&mut rng, Shape::new(Z).degrees(-1, 1), (-2, 2));
        let x = kan_extend(&g);
        let r = x.res();
        if let Some((lo, hi)) = g.support() {
            for n in lo..=hi {
                let parts: Vec<&ChainComplex> = g.pieces().range(n..).map(|(_, c)| c).collect();
                prop_assert_eq!(r.piece(n), ChainComplex::direct_sum(&parts, Z));
            }
        }
        let gr = x.gr();
        prop_assert_eq!(gr.homology(), g.homology());
    }

    #[test]
    fn gr_and_underlying_are_exact(seed: u64) {
        let mut rng = sample::rng(seed);
        let shape = Shape::new(F2).degrees(-1, 1).max_rank(2);
        let tail = if seed % 2 == 0 { Tail::Constant } else { Tail::Zero };
        let x = sample::filtered(&mut rng, shape, -1, 3, tail);
        let y = sample::filtered(&mut rng, shape, 0, 2, tail);
        let s = x.direct_sum(&y).unwrap();
        prop_assert_eq!(field_dims(&s.gr()), add_dims(&field_dims(&x.gr()), &field_dims(&y.gr())));
        let u = |c: &ChainComplex| -> BTreeMap<i64, usize> { c.homology_all().into_iter().map(|(n, h)| (n, h.free_rank)).collect() };
        let mut both = u(&x.underlying());
        for (n, d) in u(&y.underlying()) {
            *both.entry(n).or_default() += d;
        }
        prop_assert_eq!(u(&s.underlying()), both);
        let closed = |m: &FilteredComplex| field_dims(&closed_point_pullback(&to_rees(m)));
        prop_assert_eq!(closed(&s), add_dims(&closed(&x), &closed(&y)));
    }

    #[test]
    fn euler_characteristic_of_gr(seed: u64) {
        let mut rng = sample::rng(seed);
        let x = sample::cellular(&mut rng, Z, 1 + (seed % 4) as usize, 3, 9);
        let sum: i64 = x.gr().pieces().values().map(ChainComplex::euler_characteristic).sum();
        prop_assert_eq!(sum, x.underlying().euler_characteristic());
    }

    #[test]
    fn unit_laws(seed: u64) {
        let mut rng = sample::rng(seed);
        let x = sample::cellular(&mut rng, Z, 1 + (seed % 3) as usize, 2, 5);
        let unit = FilteredComplex::unit(Z);
        for y in [x.day_tensor(&unit).unwrap(), unit.day_tensor(&x).unwrap()] {
            let (lo, hi) = x.window().unwrap();
            for n in lo - 2..=hi + 1 {
                prop_assert_eq!(y.level(n).homology_all(), x.level(n).homology_all(), "level {}", n);
            }
        }
    }
}

// rees

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn rees_translation_is_an_equivalence(seed: u64) {
        let mut rng = sample::rng(seed);
        let x = sample::any_filtered(&mut rng, Shape::new(Z).degrees(-1, 2).max_rank(3), 4);
        let m = to_rees(&x);
        prop_assert_eq!(&from_rees(&m), &x);
        prop_assert_eq!(&to_rees(&from_rees(&m)), &m);
        prop_assert_eq!(closed_point_pullback(&m), x.gr());
        prop_assert_eq!(generic_point_pullback(&m), x.underlying());
    }

    #[test]
    fn t_acts_by_zero_on_the_closed_point(seed: u64) {
        let mut rng = sample::rng(seed);
        let m = sample::rees(&mut rng, Shape::new(Z).degrees(-1, 1).max_rank(2), 4);
        let Some((lo, hi)) = m.window() else { return Ok(()) };
        for w in lo - 1..=hi {
            let t_on_cone = m.t(w + 1).cone_map(&m.t(w), &m.t(w + 1), &m.t(w));
            prop_assert!(t_on_cone.is_valid());
            let (src, tgt) = (t_on_cone.source(), t_on_cone.target());
            for &n in src.ranks().keys() {
                let cycles = Submodule::kernel(&src.differential(n));
                let boundaries = Submodule::span(&tgt.differential(n + 1));
                if cycles.rank() > 0 && tgt.rank(n) > 0 {
                    prop_assert!(boundaries.contains_vectors(&t_on_cone.component(n).mul(cycles.basis())), "weight {} degree {}", w, n);
                }
            }
        }
    }
}

// tstruct

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn truncation_is_idempotent_and_monotone(seed: u64, n in -2i64..3, m in -2i64..3) {
        let mut rng = sample::rng(seed);
        let c = sample::complex(&mut rng, Shape::new(Z).degrees(-2, 2));
        let twice = tstruct::truncate(&tstruct::truncate(&c, m), n);
        prop_assert_eq!(twice.homology_all(), tstruct::truncate(&c, n.max(m)).homology_all());
        let once = tstruct::truncate(&c, n);
        prop_assert_eq!(tstruct::truncate(&once, n), once);
    }

    #[test]
    fn standard_implies_beilinson_in_nonnegative_weights(seed: u64) {
        let mut rng = sample::rng(seed);
        let g = sample::graded(&mut rng, Shape::new(Z).degrees(-1, 2), (0, 3));
        if tstruct::is_connective_standard(&g).holds() {
            prop_assert!(tstruct::is_connective_beilinson(&g).holds());
        }
        let t = tstruct::truncate_graded(&g, 0);
        prop_assert!(tstruct::is_connective_standard(&t).holds());
        prop_assert!(tstruct::is_connective_beilinson(&t).holds());
    }

    #[test]
    fn beilinson_truncation_is_connective(seed: u64) {
        let mut rng = sample::rng(seed);
        let g = sample::graded(&mut rng, Shape::new(Z).degrees(-3, 2), (-2, 3));
        prop_assert!(tstruct::is_connective_beilinson(&tstruct::truncate_beilinson(&g)).holds());
    }

    #[test]
    fn connective_objects_tensor_to_connective(seed: u64) {
        let mut rng = sample::rng(seed);
        let shape = Shape::new(Z).degrees(-1, 1).max_rank(2).bound(4);
        let x = tstruct::truncate_graded(&sample::graded(&mut rng, shape, (-1, 1)), 0);
        let y = tstruct::truncate_graded(&sample::graded(&mut rng, shape, (0, 1)), 0);
        prop_assert!(tstruct::is_connective_standard(&x.day_tensor(&y).unwrap()).holds());
    }
}

// specseq

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn pages_are_homology_of_the_previous_page(seed: u64) {
        let mut rng = sample::rng(seed);
        let ring = if seed % 2 == 0 { Z } else { F2 };
        let x = sample::any_filtered(&mut rng, Shape::new(ring).degrees(-1, 2).max_rank(3), 4);
        let ss = SpectralSequence::new(&x);
        let pages: Vec<_> = (1..=4).map(|r| ss.page(r)).collect();
        for w in pages.windows(2) {
            prop_assert!(w[0].squares_to_zero());
            prop_assert!(w[0].next_page_matches(&w[1]), "page {}", w[0].r);
        }
    }

    #[test]
    fn differentials_respect_the_bidegree(seed: u64) {
        let mut rng = sample::rng(seed);
        let x = sample::any_filtered(&mut rng, Shape::new(Z).degrees(-1, 2).max_rank(3), 4);
        let ss = SpectralSequence::new(&x);
        for r in 1..=3 {
            let page = ss.page(r);
            for (&(s, t), d) in &page.differentials {
                let target = (s + r as i64, t - r as i64 - 1);
                prop_assert_eq!(page.target(s, t), target);
                prop_assert_eq!(d.rows(), page.orders[&target].len());
                prop_assert_eq!(d.cols(), page.orders[&(s, t)].len());
            }
        }
    }

    #[test]
    fn euler_characteristic_is_constant_over_a_field(seed: u64) {
        let mut rng = sample::rng(seed);
        let x = sample::any_filtered(&mut rng, Shape::new(F2).degrees(-1, 2).max_rank(3), 4);
        let ss = SpectralSequence::new(&x);
        let chi: Vec<i64> = (1..=4).map(|r| ss.page(r).euler_characteristic()).collect();
        prop_assert!(chi.windows(2).all(|w| w[0] == w[1]), "{:?}", chi);
        let y = sample::cellular(&mut rng, F2, 1 + (seed % 4) as usize, 3, 1);
        prop_assert_eq!(SpectralSequence::new(&y).page(1).euler_characteristic(), y.underlying().euler_characteristic());
    }

    #[test]
    fn window_width_bounds_the_last_differential(seed: u64) {
        let mut rng = sample::rng(seed);
        let x = sample::any_filtered(&mut rng, Shape::new(Z).degrees(-1, 2).max_rank(3), 4);
        let Some((lo, hi)) = x.window() else { return Ok(()) };
        let w = (hi - lo + 1) as usize;
        let ss = SpectralSequence::new(&x);
        let (r_stab, e_inf) = ss.stabilization();
        prop_assert!(r_stab <= w + 1);
        prop_assert_eq!(ss.page(w + 1).entries, e_inf.entries);
    }
}
