//! Exact linear algebra over ℤ, ℚ and 𝔽_p: Smith forms, lattices, chain
//! complexes, mapping cones and colimits of finite poset diagrams.

mod colimit;
mod complex;
mod lattice;
pub(crate) mod linsys;
mod matrix;
mod ring;
mod snf;

pub use colimit::{poset_colimit, Colimit, FreeQuotient, PosetDiagram, PresentedComplex};
pub use complex::{hom_basis, ChainComplex, ChainMap};
pub use lattice::{presented_homology, HomologyModule, Subquotient, Submodule};
pub use matrix::Matrix;
pub use ring::{BaseRing, Scalar};
pub use linsys::solve;
pub use snf::{kernel_basis, rank, rank_normal_form, smith_normal_form, torsion_factors, Snf};
pub(crate) use snf::{snf, Want};

/// `H_n(c)`; the zero module outside the support.
pub fn homology(c: &ChainComplex, n: i64) -> HomologyModule {
    c.homology(n)
}

/// Mapping cone of `f`.
pub fn cone(f: &ChainMap) -> ChainComplex {
    f.cone()
}
