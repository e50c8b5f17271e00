//! Finite group structures: groups acting on finite point sets with an
//! equivariant assignment of a subgroup to each point. The crate provides
//! the morphism taxonomy (morphism / epimorphism / rigid / cover), quotient
//! and sub-structures, fiber products with cartesian-square checking, special
//! partitions, epimorphism extension and morphism factoring, embedding
//! problems with a certificate-producing solver, and special covers.

pub mod catalog;
pub mod cover;
pub mod embed;
pub mod extend;
pub mod fiber;
pub mod fixtures;
pub mod gen;
pub mod group;
pub mod partition;
pub mod structure;
pub mod topology;

pub use group::{enumerate_homs, FiniteGroup, GroupError, GroupHom, Subgroup};
pub use structure::{GroupStructure, StructureMorphism};
