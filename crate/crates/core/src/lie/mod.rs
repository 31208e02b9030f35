//! Structure constants, matrix realizations and the preset registry.

pub mod algebra;
pub mod preset;

pub use algebra::{combine, unit, JacobiReport, StructureConstants};
pub use preset::{AlgebraFile, LieAlgebraPreset};
