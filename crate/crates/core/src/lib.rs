//! Workbench for finite relational structures: homomorphism search,
//! pinch constructions, pebble-game strategies, axiom closure checks,
//! and bounded-lattice counterexamples.
//!
//! Everything operates on explicit finite objects. Universes are the
//! integer ranges `0..size`, relation tables are explicit tuple sets,
//! and every search is exhaustive within configured budgets. Results
//! are deterministic: identical inputs (and seeds, where sampling is
//! involved) produce identical outputs, independent of thread count.

pub mod bounds;
pub mod catalog;
pub mod constructions;
pub mod duality;
pub mod game;
pub mod incidence;
pub mod lattice;
pub mod logic;
pub mod relational;
pub mod solver;
pub mod text;

pub use bounds::Bounds;
pub use relational::{Homomorphism, RelStructure, Signature};
