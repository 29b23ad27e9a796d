//! Seeded random instances for tests, benches and the acceptance suite.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactla::{hom_basis, BaseRing, ChainComplex, ChainMap, Matrix, Scalar, Submodule};
use crate::filtered::{FilteredComplex, Tail};
use crate::graded::{Comodule, GradedComplex};
use crate::rees::ReesModule;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bounds for random complexes.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub ring: BaseRing,
    /// Lowest and highest homological degree.
    pub degrees: (i64, i64),
    pub max_rank: usize,
    /// Entries are drawn from `[−bound, bound]`.
    pub bound: i64,
}

impl Shape {
    pub fn new(ring: BaseRing) -> Self {
        Shape { ring, degrees: (0, 2), max_rank: 3, bound: 9 }
    }

    pub fn degrees(mut self, lo: i64, hi: i64) -> Self {
        self.degrees = (lo, hi);
        self
    }

    pub fn max_rank(mut self, r: usize) -> Self {
        self.max_rank = r;
        self
    }

    pub fn bound(mut self, b: i64) -> Self {
        self.bound = b;
        self
    }
}

fn scalar(ring: BaseRing, v: i64) -> Scalar {
    ring.from_i64(v)
}

pub fn matrix(rng: &mut SampleRng, ring: BaseRing, rows: usize, cols: usize, bound: i64) -> Matrix {
    Matrix::from_fn(ring, rows, cols, |_, _| scalar(ring, rng.random_range(-bound..=bound)))
}

/// Sparse-ish matrix: each entry non-zero with probability `density`.
fn sparse_matrix(rng: &mut SampleRng, ring: BaseRing, rows: usize, cols: usize, bound: i64, density: f64) -> Matrix {
    Matrix::from_fn(ring, rows, cols, |_, _| {
        if rng.random_bool(density) { scalar(ring, rng.random_range(-bound..=bound)) } else { ring.zero() }
    })
}

fn within(m: &Matrix, bound: i64) -> bool {
    let ring = m.ring();
    (0..m.rows()).all(|i| {
        (0..m.cols()).all(|j| match ring.to_bigint(m.get(i, j)) {
            Some(v) => v <= bound.into() && v >= (-bound).into(),
            None => true,
        })
    })
}

/// Random complex: `d_{n+1}` is drawn first, then `d_n` as a small combination
/// of vectors annihilating its image, so `d ∘ d = 0` by construction.
pub fn complex(rng: &mut SampleRng, shape: Shape) -> ChainComplex {
    let ring = shape.ring;
    let (lo, hi) = shape.degrees;
    let ranks: BTreeMap<i64, usize> = (lo..=hi).map(|n| (n, rng.random_range(0..=shape.max_rank))).collect();
    let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
    for n in (lo + 1..=hi).rev() {
        let (rows, cols) = (ranks[&(n - 1)], ranks[&n]);
        let d = match diffs.get(&(n + 1)) {
            None => sparse_matrix(rng, ring, rows, cols, shape.bound.min(3), 0.6),
            Some(upper) => {
                // Rows of d_n lie in the left kernel of d_{n+1}.
                let left = Submodule::kernel(&upper.transpose());
                let k = left.rank();
                let mut m = Matrix::zero(ring, rows, cols);
                for _ in 0..4 {
                    let c = sparse_matrix(rng, ring, rows, k, 1, 0.5);
                    let cand = c.mul(&left.basis().transpose());
                    if within(&cand, shape.bound) {
                        m = cand;
                        break;
                    }
                }
                m
            }
        };
        diffs.insert(n, d);
    }
    ChainComplex::new(ring, ranks, diffs).expect("sampled complex")
}

/// Random chain map `source → target` from small combinations of a hom basis.
pub fn chain_map(rng: &mut SampleRng, source: &ChainComplex, target: &ChainComplex, bound: i64) -> ChainMap {
    let basis = hom_basis(source, target);
    for _ in 0..6 {
        let mut f = ChainMap::zero(source, target);
        for b in &basis {
            let c = rng.random_range(-1..=1i64);
            if c != 0 {
                let scaled = if c == 1 { b.clone() } else { b.neg() };
                f = f.add(&scaled);
            }
        }
        if f.components().values().all(|m| within(m, bound)) {
            return f;
        }
    }
    ChainMap::zero(source, target)
}

/// Unimodular `g` with its inverse, as a product of elementary operations.
pub fn unimodular(rng: &mut SampleRng, ring: BaseRing, n: usize, steps: usize) -> (Matrix, Matrix) {
    let mut g = Matrix::identity(ring, n);
    let mut gi = Matrix::identity(ring, n);
    if n < 2 {
        if n == 1 && rng.random_bool(0.5) {
            let m = Matrix::from_fn(ring, 1, 1, |_, _| ring.neg(&ring.one()));
            return (m.clone(), m);
        }
        return (g, gi);
    }
    for _ in 0..steps {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = rng.random_range(-2..=2i64);
        let mut e = Matrix::identity(ring, n);
        e.set(i, j, ring.from_i64(c));
        let mut ei = Matrix::identity(ring, n);
        ei.set(i, j, ring.from_i64(-c));
        g = e.mul(&g);
        gi = gi.mul(&ei);
    }
    (g, gi)
}

/// Random graded complex on weights `weights.0 ..= weights.1`.
pub fn graded(rng: &mut SampleRng, shape: Shape, weights: (i64, i64)) -> GradedComplex {
    let mut pieces = Vec::new();
    for w in weights.0..=weights.1 {
        if rng.random_bool(0.75) {
            pieces.push((w, complex(rng, shape)));
        }
    }
    GradedComplex::new(shape.ring, pieces).expect("sampled graded complex")
}

/// How consecutive levels are related.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// `X_{n−1} = X_n ⊕ E`, structure map the inclusion.
    Split,
    /// Independent `X_{n−1}` with a random chain map.
    Twist,
    /// `X_{n−1} = X_n` with `k · id`.
    Scale(i64),
}

/// Random filtered complex with window width `width` (levels `bottom..bottom+width−1`).
pub fn filtered(rng: &mut SampleRng, shape: Shape, bottom: i64, width: usize, tail: Tail) -> FilteredComplex {
    let ring = shape.ring;
    let mut levels = vec![complex(rng, shape)];
    let mut maps = Vec::new();
    for _ in 1..width {
        let upper = levels.last().unwrap().clone();
        let room = shape.max_rank.saturating_sub(upper.ranks().values().copied().max().unwrap_or(0));
        let step = match rng.random_range(0..4) {
            0 if room > 0 => Step::Split,
            0 => Step::Twist,
            1 | 2 => Step::Twist,
            _ => Step::Scale(*[0i64, 2, 3, -1].get(rng.random_range(0..4)).unwrap()),
        };
        let (lower, f) = match step {
            Step::Split => {
                let extra = complex(rng, shape.max_rank(room));
                let sum = ChainComplex::direct_sum(&[&upper, &extra], ring);
                let comps: BTreeMap<i64, Matrix> = upper
                    .ranks()
                    .iter()
                    .map(|(&n, &r)| {
                        let mut m = Matrix::zero(ring, sum.rank(n), r);
                        m.place(0, 0, &Matrix::identity(ring, r));
                        (n, m)
                    })
                    .collect();
                let f = ChainMap::new(upper.clone(), sum.clone(), comps).expect("inclusion");
                (sum, f)
            }
            Step::Twist => {
                let lower = complex(rng, shape);
                let f = chain_map(rng, &upper, &lower, shape.bound);
                (lower, f)
            }
            Step::Scale(k) => {
                let f = ChainMap::new(
                    upper.clone(),
                    upper.clone(),
                    upper.ranks().iter().map(|(&n, &r)| (n, Matrix::identity(ring, r).scale(&ring.from_i64(k)))),
                )
                .expect("scalar map");
                (upper.clone(), f)
            }
        };
        levels.push(lower);
        maps.push(f);
    }
    levels.reverse();
    maps.reverse();
    FilteredComplex::new(ring, bottom, levels, maps, tail).expect("sampled filtered complex")
}

/// Random filtered complex with the window and tail drawn too.
pub fn any_filtered(rng: &mut SampleRng, shape: Shape, max_width: usize) -> FilteredComplex {
    let width = rng.random_range(1..=max_width);
    let bottom = rng.random_range(-2..=2);
    let tail = if rng.random_bool(0.7) { Tail::Constant } else { Tail::Zero };
    filtered(rng, shape, bottom, width, tail)
}

/// Cellular filtered complex: a two-term complex `C_1 → C_0` whose basis
/// vectors carry weights, filtered by the coordinate subcomplexes of weight
/// `≥ s`. Structure maps are coordinate inclusions.
pub fn cellular(rng: &mut SampleRng, ring: BaseRing, width: usize, max_rank: usize, bound: i64) -> FilteredComplex {
    let bottom = rng.random_range(-1..=1i64);
    let top = bottom + width as i64 - 1;
    let weights = |rng: &mut SampleRng, n: usize| -> Vec<i64> {
        let mut w: Vec<i64> = (0..n).map(|_| rng.random_range(bottom..=top)).collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w
    };
    let r1 = rng.random_range(0..=max_rank);
    let r0 = rng.random_range(0..=max_rank);
    let (mut w1, mut w0) = (weights(rng, r1), weights(rng, r0));
    // Something must sit at the bottom so that the window is exact.
    if w1.is_empty() && w0.is_empty() {
        w0.push(bottom);
    } else if !w1.contains(&bottom) && !w0.contains(&bottom) {
        if let Some(last) = w0.last_mut() {
            *last = bottom;
        } else {
            *w1.last_mut().unwrap() = bottom;
        }
    }
    let d = Matrix::from_fn(ring, r0, r1, |i, j| {
        if w0[i] >= w1[j] && rng.random_bool(0.7) { ring.from_i64(rng.random_range(-bound..=bound)) } else { ring.zero() }
    });
    let level = |s: i64| -> (Vec<usize>, Vec<usize>, ChainComplex) {
        let i1: Vec<usize> = (0..r1).filter(|&j| w1[j] >= s).collect();
        let i0: Vec<usize> = (0..r0).filter(|&i| w0[i] >= s).collect();
        let dd = d.select_rows(&i0).select_cols(&i1);
        let c = ChainComplex::new(ring, [(1, i1.len()), (0, i0.len())], [(1, dd)]).expect("subcomplex");
        (i1, i0, c)
    };
    let data: Vec<_> = (bottom..=top).map(level).collect();
    let inclusion = |small: &[usize], big: &[usize]| -> Matrix {
        Matrix::from_fn(ring, big.len(), small.len(), |i, j| if big[i] == small[j] { ring.one() } else { ring.zero() })
    };
    let maps = (1..data.len())
        .map(|k| {
            let (a1, a0, src) = &data[k];
            let (b1, b0, tgt) = &data[k - 1];
            let comps = [(1, inclusion(a1, b1)), (0, inclusion(a0, b0))];
            ChainMap::new(src.clone(), tgt.clone(), comps).expect("inclusion of subcomplexes")
        })
        .collect();
    let levels = data.into_iter().map(|(_, _, c)| c).collect();
    FilteredComplex::new(ring, bottom, levels, maps, Tail::Constant).expect("cellular filtered complex")
}

/// Random Rees module, drawn directly on the module side.
pub fn rees(rng: &mut SampleRng, shape: Shape, max_width: usize) -> ReesModule {
    let ring = shape.ring;
    let width = rng.random_range(1..=max_width);
    let bottom = rng.random_range(-3..=1);
    let tail = if rng.random_bool(0.6) { Tail::Constant } else { Tail::Zero };
    let pieces: Vec<ChainComplex> = (0..width).map(|_| complex(rng, shape)).collect();
    let t: Vec<ChainMap> = (1..width).map(|k| chain_map(rng, &pieces[k], &pieces[k - 1], shape.bound)).collect();
    ReesModule::new(ring, bottom, pieces, t, tail).expect("sampled Rees module")
}

/// A valid comodule that is not in coordinate form: the standard coaction
/// of a random graded complex, conjugated by a random change of basis.
pub fn comodule(rng: &mut SampleRng, shape: Shape, weights: (i64, i64)) -> (GradedComplex, Comodule) {
    let g = graded(rng, shape, weights);
    let c = g.to_comodule();
    let mut fwd = BTreeMap::new();
    let mut inv = BTreeMap::new();
    for (&n, &r) in c.carrier().ranks() {
        let (a, b) = unimodular(rng, shape.ring, r, 2 * r);
        fwd.insert(n, a);
        inv.insert(n, b);
    }
    let conj = c.conjugate(&fwd, &inv).expect("conjugate of a comodule");
    (g, conj)
}

/// Pieces in homological degree `−n` at weight `n`, for `n` in `1..=max_weight`.
pub fn beilinson_family(rng: &mut SampleRng, ring: BaseRing, max_weight: i64, max_rank: usize) -> GradedComplex {
    let top = rng.random_range(1..=max_weight);
    let mut pieces = Vec::new();
    for n in 1..=top {
        if n == top || rng.random_bool(0.7) {
            pieces.push((n, ChainComplex::concentrated(ring, -n, rng.random_range(1..=max_rank))));
        }
    }
    GradedComplex::new(ring, pieces).expect("same ring")
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: BaseRing = BaseRing::Integers;

    #[test]
    fn sampled_objects_are_valid() {
        let mut r = rng(7);
        for _ in 0..40 {
            let c = complex(&mut r, Shape::new(Z).max_rank(4));
            assert!(c.is_valid());
            let x = any_filtered(&mut r, Shape::new(Z), 4);
            assert!(x.window().is_some());
            let y = cellular(&mut r, Z, 3, 2, 3);
            assert!(y.is_cellular());
            let (_, m) = comodule(&mut r, Shape::new(Z), (-1, 1));
            assert!(m.carrier().is_valid());
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = any_filtered(&mut rng(3), Shape::new(Z), 5);
        let b = any_filtered(&mut rng(3), Shape::new(Z), 5);
        assert_eq!(a, b);
    }

    #[test]
    fn unimodular_inverse() {
        let (g, gi) = unimodular(&mut rng(1), Z, 4, 10);
        assert!(g.mul(&gi).is_identity());
    }
}
