//! Bit-packed linear algebra over F2 and chain-complex reductions.

mod complex;
mod matrix;

pub use complex::{
    eliminate_entry, homology_at, induced_map, reduce_fully, Complex, ComplexMap, HomologyData,
};
pub(crate) use complex::homology_with;
pub use matrix::{first_set_bit, F2Matrix, Solver};
