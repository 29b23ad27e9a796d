//! File format and command surface.

mod commands;
mod document;

pub use commands::{
    error_document, run, times_two, two_step, Command, Options, Outcome, ReesDirection, TStructure, TensorKind,
};
pub use document::{
    encode_complex, encode_graded, encode_homology, encode_map, encode_matrix, envelope, parse, render, serialize,
    Object, FORMAT_VERSION,
};
