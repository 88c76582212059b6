//! Seat arrangement on grid seat graphs.
//!
//! Agents carry integer utilities toward one another and are seated
//! one-to-one on the vertices of a seat graph. An agent's utility is the sum
//! of its utilities toward the occupants of neighbouring seats. This crate
//! provides:
//!
//! - the model and its checkers ([`Instance`], [`StabilityReport`]): envy,
//!   blocking pairs, envy-freeness and exchange-stability;
//! - directed-graph tooling ([`digraph`]): universal-sink normalization and an
//!   exact Hamiltonian-path oracle;
//! - gadget reductions from Hamiltonian path to envy-free and exchange-stable
//!   seating on `2 x m`, `3 x m` and `l x m` grids, with witness mapping in
//!   both directions ([`reductions`]);
//! - exact deciders and swap dynamics ([`solver`]);
//! - the JSON interchange formats used by the command-line tool ([`formats`]).

pub mod arrangement;
pub mod digraph;
pub mod error;
pub mod formats;
pub mod profile;
pub mod reductions;
pub mod seats;
pub mod solver;
pub mod stability;

pub use arrangement::Arrangement;
pub use digraph::Digraph;
pub use error::ModelError;
pub use profile::{AgentId, PreferenceProfile, ProfileBuilder, Utility};
pub use reductions::{ReducedInstance, Theorem};
pub use seats::{Seat, SeatGraph};
pub use stability::{ArrangementStats, Instance, Stability, StabilityReport};
