//! Spectral sequence of a bounded filtered complex.
//!
//! Convention: decreasing filtration, `E_1^{s,t} = H_{s+t}(gr_s)`,
//! `d_r: E_r^{s,t} → E_r^{s+r, t−r−1}`. The filtered complex is first
//! replaced by the cone of its two-term Rees resolution, whose levels are
//! coordinate subcomplexes `F^s` of a single complex `C`; pages are then
//! `E_r^s(n) = Z_r^s / (Z_{r−1}^{s+1} + d Z_{r−1}^{s−r+1}(n+1))` with
//! `Z_r^s(n) = {x ∈ F^s C_n : dx ∈ F^{s+r}}`.

use std::collections::BTreeMap;

use crate::exactla::{presented_homology, BaseRing, ChainComplex, HomologyModule, Matrix, Scalar, Subquotient, Submodule};
use crate::filtered::{FilteredComplex, Tail};
use crate::par;
use crate::rees::{rees_resolution, to_rees};

/// Output bigrading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `(s, t)` with total homological degree `s + t`.
    Homological,
    /// Cohomological `(p, q) = (s, −t − 2s)`, so `p + q = −(s + t)` and
    /// `d_r: (p, q) → (p + r, q − r + 1)`.
    Serre,
}

impl Convention {
    pub fn parse(s: &str) -> Option<Convention> {
        match s {
            "homological" => Some(Convention::Homological),
            "serre" => Some(Convention::Serre),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Convention::Homological => "homological",
            Convention::Serre => "serre",
        }
    }

    pub fn index(&self, s: i64, t: i64) -> (i64, i64) {
        match self {
            Convention::Homological => (s, t),
            Convention::Serre => (s, -t - 2 * s),
        }
    }
}

/// One page `E_r`: non-zero entries by `(s, t)`, and `d_r` as a matrix on
/// the chosen generators wherever source and target are both non-zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSPage {
    pub r: usize,
    pub ring: BaseRing,
    pub entries: BTreeMap<(i64, i64), HomologyModule>,
    pub differentials: BTreeMap<(i64, i64), Matrix>,
    /// Generator orders per entry (zero for free generators).
    pub orders: BTreeMap<(i64, i64), Vec<Scalar>>,
}

impl SSPage {
    pub fn entry(&self, s: i64, t: i64) -> HomologyModule {
        self.entries.get(&(s, t)).cloned().unwrap_or_else(|| HomologyModule::zero(self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_nonzero_differential(&self) -> bool {
        self.differentials.values().any(|m| !m.is_zero())
    }

    /// Target bidegree of `d_r` from `(s, t)`.
    pub fn target(&self, s: i64, t: i64) -> (i64, i64) {
        (s + self.r as i64, t - self.r as i64 - 1)
    }

    /// Entries of total degree `n`, keyed by `s`.
    pub fn total_degree(&self, n: i64) -> BTreeMap<i64, HomologyModule> {
        self.entries.iter().filter(|((s, t), _)| s + t == n).map(|(&(s, _), h)| (s, h.clone())).collect()
    }

    /// `Σ (−1)^{s+t} rank E^{s,t}` (over a field: dimension).
    pub fn euler_characteristic(&self) -> i64 {
        self.entries
            .iter()
            .map(|(&(s, t), h)| {
                let k = h.generator_count() as i64;
                if (s + t).rem_euclid(2) == 0 { k } else { -k }
            })
            .sum()
    }

    /// `d_r ∘ d_r = 0` on every composable pair, modulo the target orders.
    pub fn squares_to_zero(&self) -> bool {
        self.differentials.iter().all(|(&(s, t), d)| {
            let mid = self.target(s, t);
            let Some(d2) = self.differentials.get(&mid) else { return true };
            let end = self.target(mid.0, mid.1);
            let ords = &self.orders[&end];
            let prod = d2.mul(d);
            (0..prod.rows()).all(|i| (0..prod.cols()).all(|j| reduces_to_zero(self.ring, prod.get(i, j), &ords[i])))
        })
    }

    /// `H(E_r, d_r)` at `(s, t)`, computed from this page's presentation.
    pub fn homology_at(&self, s: i64, t: i64) -> HomologyModule {
        let Some(ords) = self.orders.get(&(s, t)) else { return HomologyModule::zero(self.ring) };
        let r = self.r as i64;
        let source = (s - r, t + r + 1);
        let target = self.target(s, t);
        let incoming = self.differentials.get(&source).map(|m| (m, self.orders[&source].as_slice()));
        let outgoing = self.differentials.get(&(s, t)).map(|m| (m, self.orders[&target].as_slice()));
        presented_homology(self.ring, ords, incoming, outgoing)
    }

    /// Whether `next` is the homology of this page at every position.
    pub fn next_page_matches(&self, next: &SSPage) -> bool {
        let keys: std::collections::BTreeSet<(i64, i64)> =
            self.entries.keys().chain(next.entries.keys()).copied().collect();
        keys.into_iter().all(|(s, t)| self.homology_at(s, t) == next.entry(s, t))
    }

    /// Entries re-keyed to `convention`.
    pub fn reindexed(&self, convention: Convention) -> BTreeMap<(i64, i64), HomologyModule> {
        self.entries.iter().map(|(&(s, t), h)| (convention.index(s, t), h.clone())).collect()
    }
}

fn reduces_to_zero(ring: BaseRing, x: &Scalar, order: &Scalar) -> bool {
    if ring.is_zero(order) {
        ring.is_zero(x)
    } else {
        ring.is_zero(&ring.reduce_mod(x, order))
    }
}

/// The filtered replacement `C ⊇ … ⊇ F^s ⊇ F^{s+1} ⊇ …` of a filtered complex.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    ring: BaseRing,
    complex: ChainComplex,
    /// Filtration weight of each basis vector, by degree.
    weights: BTreeMap<i64, Vec<i64>>,
    range: Option<(i64, i64)>,
}

impl SpectralSequence {
    pub fn new(x: &FilteredComplex) -> Self {
        let ring = x.ring();
        let res = rees_resolution(&to_rees(x));
        let Some((lo, _)) = x.window() else {
            return SpectralSequence { ring, complex: ChainComplex::zero(ring), weights: BTreeMap::new(), range: None };
        };
        let bottom = lo - 1;
        let delta = res.delta(bottom);
        let complex = delta.cone();
        let m = res.module();
        let mut weights: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for &n in complex.ranks().keys() {
            let mut ws = Vec::new();
            for &w in res.generator_weights().iter().filter(|&&w| w >= bottom) {
                ws.extend(std::iter::repeat_n(w, m.piece(w).rank(n)));
            }
            for &w in res.relation_weights().iter().filter(|&&w| w > bottom) {
                ws.extend(std::iter::repeat_n(w - 1, m.piece(w).rank(n - 1)));
            }
            debug_assert_eq!(ws.len(), complex.rank(n));
            weights.insert(n, ws);
        }
        let all: Vec<i64> = weights.values().flatten().copied().collect();
        let range = all.iter().min().map(|&a| (a, *all.iter().max().unwrap()));
        SpectralSequence { ring, complex, weights, range }
    }

    /// The complex `C` whose coordinate subcomplexes give the filtration.
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    /// Lowest and highest filtration weight carrying a basis vector.
    pub fn filtration_range(&self) -> Option<(i64, i64)> {
        self.range
    }

    /// `F^s C_n`, spanned by basis vectors of weight `≥ s`.
    pub fn filtration(&self, s: i64, n: i64) -> Submodule {
        let ws = self.weights.get(&n).map(Vec::as_slice).unwrap_or(&[]);
        let idx: Vec<usize> = (0..ws.len()).filter(|&i| ws[i] >= s).collect();
        let basis = Matrix::from_fn(self.ring, ws.len(), idx.len(), |i, j| {
            if i == idx[j] { self.ring.one() } else { self.ring.zero() }
        });
        Submodule::span(&basis)
    }

    /// `Z_r^s(n) = {x ∈ F^s C_n : dx ∈ F^{s+r} C_{n−1}}`.
    pub fn cycles(&self, r: usize, s: i64, n: i64) -> Submodule {
        let d = self.complex.differential(n);
        let f = self.filtration(s, n);
        let good = Submodule::preimage(&d, &self.filtration(s + r as i64, n - 1));
        f.intersect(&good)
    }

    /// `Z_{r−1}^{s+1}(n) + d Z_{r−1}^{s−r+1}(n+1)`.
    pub fn boundaries(&self, r: usize, s: i64, n: i64) -> Submodule {
        let lower = self.cycles(r - 1, s + 1, n);
        let from = self.cycles(r - 1, s - r as i64 + 1, n + 1);
        lower.sum(&from.image(&self.complex.differential(n + 1)))
    }

    fn positions(&self) -> Vec<(i64, i64)> {
        let Some((a, b)) = self.range else { return Vec::new() };
        let degrees: Vec<i64> = self.complex.ranks().keys().copied().collect();
        (a..=b).flat_map(|s| degrees.iter().map(move |&n| (s, n))).collect()
    }

    pub fn page(&self, r: usize) -> SSPage {
        assert!(r >= 1, "pages start at 1");
        let ring = self.ring;
        let positions = self.positions();
        let quotients: BTreeMap<(i64, i64), Subquotient> = par::map(&positions, |&(s, n)| {
            ((s, n), Subquotient::new(self.cycles(r, s, n), self.boundaries(r, s, n)))
        })
        .into_iter()
        .filter(|(_, q)| !q.module().is_zero())
        .collect();
        let keys: Vec<(i64, i64)> = quotients.keys().copied().collect();
        let differentials = par::map(&keys, |&(s, n)| {
            let target = (s + r as i64, n - 1);
            let tq = quotients.get(&target)?;
            let images = self.complex.differential(n).mul(&quotients[&(s, n)].generators);
            let m = tq.express(&images).expect("d_r lands in Z_r");
            Some(((s, n - s), m))
        })
        .into_iter()
        .flatten()
        .collect();
        let entries = quotients.iter().map(|(&(s, n), q)| ((s, n - s), q.module().clone())).collect();
        let orders = quotients.iter().map(|(&(s, n), q)| ((s, n - s), q.orders().to_vec())).collect();
        SSPage { r, ring, entries, differentials, orders }
    }

    /// Least page after which every differential vanishes, with that page.
    pub fn stabilization(&self) -> (usize, SSPage) {
        let width = self.range.map_or(0, |(a, b)| (b - a) as usize);
        let mut last_nonzero = 0;
        let mut pages = Vec::new();
        for r in 1..=width + 1 {
            let p = self.page(r);
            if p.has_nonzero_differential() {
                last_nonzero = r;
            }
            pages.push(p);
        }
        let r_stab = last_nonzero + 1;
        let page = pages.into_iter().nth(r_stab - 1).unwrap_or_else(|| self.page(r_stab));
        (r_stab, page)
    }
}

pub fn page(x: &FilteredComplex, r: usize) -> SSPage {
    SpectralSequence::new(x).page(r)
}

pub fn stabilization(x: &FilteredComplex) -> (usize, SSPage) {
    SpectralSequence::new(x).stabilization()
}

/// One comparison `E_∞^{s, n−s}` against `F_s H_n / F_{s+1} H_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbutmentEntry {
    pub s: i64,
    pub n: i64,
    pub e_infinity: HomologyModule,
    pub graded: HomologyModule,
}

impl AbutmentEntry {
    pub fn matches(&self) -> bool {
        self.e_infinity == self.graded
    }
}

#[derive(Clone, Debug)]
pub struct AbutmentReport {
    pub r_stab: usize,
    pub entries: Vec<AbutmentEntry>,
}

impl AbutmentReport {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(AbutmentEntry::matches)
    }

    pub fn mismatches(&self) -> Vec<&AbutmentEntry> {
        self.entries.iter().filter(|e| !e.matches()).collect()
    }
}

/// Filtration `F_s H_n(U) = im(H_n(X_s) → H_n(U))` on the homology of the
/// underlying object, computed directly from the levels of `x`.
pub fn induced_filtration(x: &FilteredComplex, s: i64, n: i64) -> Submodule {
    let u = x.underlying();
    let boundaries = Submodule::span(&u.differential(n + 1));
    if x.tail() == Tail::Zero || x.is_zero() {
        return boundaries;
    }
    let lo = x.bottom();
    let level = x.level(s);
    let f = x.composite(s.max(lo), lo).component(n);
    let cycles = Submodule::kernel(&level.differential(n));
    if cycles.rank() == 0 || f.rows() == 0 {
        return boundaries;
    }
    Submodule::span(&f.mul(cycles.basis())).sum(&boundaries)
}

/// Compares `E_∞` with the associated graded of the induced filtration on
/// `H_*(underlying x)`, position by position.
pub fn compare_with_abutment(x: &FilteredComplex) -> AbutmentReport {
    let ss = SpectralSequence::new(x);
    let (r_stab, e_inf) = ss.stabilization();
    let u = x.underlying();
    let (mut a, mut b) = ss.filtration_range().unwrap_or((0, 0));
    if let Some((lo, hi)) = x.window() {
        a = a.min(lo);
        b = b.max(hi);
    }
    let degrees: std::collections::BTreeSet<i64> = u
        .ranks()
        .keys()
        .chain(ss.complex().ranks().keys())
        .chain(e_inf.entries.keys().map(|(s, t)| s + t).collect::<Vec<_>>().iter())
        .copied()
        .collect();
    let positions: Vec<(i64, i64)> = (a..=b).flat_map(|s| degrees.iter().map(move |&n| (s, n))).collect();
    let entries = par::map(&positions, |&(s, n)| {
        let upper = induced_filtration(x, s, n);
        let lower = induced_filtration(x, s + 1, n);
        let graded = Subquotient::new(upper, lower).module().clone();
        AbutmentEntry { s, n, e_infinity: e_inf.entry(s, n - s), graded }
    });
    AbutmentReport { r_stab, entries }
}
