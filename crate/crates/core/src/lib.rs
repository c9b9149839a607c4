//! Wedderburn decompositions of group algebras `FG` over abelian number
//! fields, local Schur indices of the resulting cyclic cyclotomic and
//! quaternion algebras, and the classification of `F`-critical groups.
//!
//! All arithmetic is exact. Number fields are handled through the Galois
//! correspondence (conductor plus fixing subgroup of `(Z/mZ)^*`), so every
//! field/ramification question reduces to subgroup computations in finite
//! abelian groups.

pub mod abfield;
pub mod critical;
pub mod groupzoo;
pub mod schur;
pub mod wedderburn;
pub mod zarith;

pub use abfield::{AbelianNumberField, Place, PrimeSplitting};
pub use critical::{enumerate_critical, is_critical, CriticalReport};
pub use groupzoo::GroupSpec;
pub use schur::{classify_exceptional, schur_index, ExceptionalKind, LocalIndexProfile};
pub use wedderburn::{decompose, AlgebraKind, CyclicCyclotomicAlgebra, SimpleComponent};
