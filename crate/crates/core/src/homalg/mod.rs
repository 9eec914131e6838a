//! Representations of finite posets, complexes of them, and the Serre functor.

pub mod complex;
pub mod linalg;
pub mod rep;
pub mod resolution;

pub use complex::{ChainComplex, Morphism, SumComplex, SummandKind};
pub use linalg::{QMatrix, Q};
pub use rep::{hom_dim, interval_module, iso_thin, PosetRep};
pub use resolution::{
    boolean_resolution, min_proj_resolution, module_to_ip, serre_iterate, serre_module, SerreIteration,
};
