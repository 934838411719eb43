//! Cover-preserving geometric extensions of finite semimodular lattices.
//!
//! A semimodular lattice `L` is first turned into a standard form `P` by
//! inserting new atoms below join-irreducible elements. `P` is atomistic, so
//! it is represented by the family `S_P` of its atom sets. The insertion
//! search in [`algo1`] then grows `S_P` into atomistic lattices of the same
//! length; those satisfying the one-atom augmentation condition are
//! geometric, and the smallest of them are the best extensions of `L`.
//!
//! [`verify`] holds independent brute-force checks for all of this.

pub mod algo1;
pub mod bitset;
pub mod canon;
pub mod error;
pub mod extend;
pub mod family;
pub mod fixtures;
pub mod io;
pub mod lattice;
pub mod verify;

pub use algo1::{best_extensions, enumerate_outputs, run_deterministic, satisfies_m, ExtensionResult, SearchOptions};
pub use bitset::AtomSet;
pub use canon::{canonical_form, canonicalize, is_isomorphic};
pub use error::{Error, Result};
pub use extend::StandardForm;
pub use family::{set_representation, SetFamily};
pub use lattice::{FiniteLattice, FinitePoset};
