pub mod error;
pub mod homalg;
pub mod interval_poset;
pub mod matrix;
pub mod noncrossing;
pub mod poset;
pub mod relation;
pub mod tamari;
pub mod verify;

pub use error::{Error, Result};
pub use interval_poset::{HasseSplit, IntervalPoset};
pub use matrix::IntMatrix;
pub use noncrossing::NoncrossingTree;
pub use poset::FinitePoset;
pub use relation::Relation;
pub use tamari::{BinaryTree, TamariLattice};
