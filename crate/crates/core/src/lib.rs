//! Multi-pullbacks of finite-dimensional algebras and the finite gluings
//! they dualize.
//!
//! * [`exactlin`]: exact subspace calculus over Q.
//! * [`algebra`]: algebras by structure constants, homomorphisms, ideals.
//! * [`lattice`]: sublattices generated by ideals and distributivity.
//! * [`multipullback`]: families of surjections, the cocycle condition,
//!   extension properties and repair.
//! * [`finset`]: finite gluing data, colimits, embeddings and dualization.
//! * [`specfile`] and [`report`]: the JSON file formats used by the CLI.

pub mod algebra;
pub mod cli;
pub mod exactlin;
pub mod finset;
pub mod lattice;
pub mod multipullback;
pub mod report;
pub mod specfile;
