//! Exact homological algebra for filtered and graded chain complexes.
//!
//! Filtered complexes correspond to graded modules over the Rees algebra
//! `R[t]` (with `t` of weight −1); the associated graded and the underlying
//! complex are recovered as base change along `t ↦ 0` and `t ↦ 1`.

pub mod cliio;
pub mod error;
pub mod exactla;
pub mod filtered;
pub mod graded;
pub mod par;
pub mod rees;
pub mod sample;
pub mod specseq;
pub mod tstruct;

pub use error::{Error, Result};
pub use exactla::{BaseRing, ChainComplex, ChainMap, HomologyModule, Matrix};
pub use filtered::{FilteredComplex, Tail};
pub use graded::{Comodule, GradedComplex};
pub use rees::ReesModule;
pub use specseq::SSPage;
