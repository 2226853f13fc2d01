//! Finite commutative semigroups.
//!
//! Rewriting presentations into confluent systems, Cayley tables and their
//! structure (Archimedean components, kernels, nil posets), finite Abelian
//! groups, the multiplicative semigroups of Z_n, ideal extensions of cyclic
//! semigroups and relatively free semilattices via implication closure.

pub mod abelian;
pub mod closure;
pub mod cyclic;
pub mod extension;
pub mod parse;
pub mod rewriting;
pub mod semigroup;
pub mod structure;
pub mod words;
pub mod zn;

pub use abelian::{AbelianType, IntMatrix};
pub use closure::{Implication, ImplicationFamily, Row012};
pub use cyclic::{ExqSet, Frame};
pub use extension::Quintuple;
pub use parse::ParseError;
pub use rewriting::{Rule, RuleSystem};
pub use semigroup::{CayleySemigroup, CongruencePartition, CyclicType};
pub use structure::StructureReport;
pub use words::Word;
