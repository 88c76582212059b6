//! Exact existence deciders for envy-free and exchange-stable arrangements,
//! plus swap dynamics as a heuristic.
//!
//! Two exact strategies are offered:
//!
//! - [`Strategy::Naive`] tries every arrangement (up to grid symmetry) and runs
//!   the full checker on each. It is the reference oracle and refuses
//!   instances with more than [`NAIVE_SEAT_LIMIT`] seats.
//! - [`Strategy::Backtrack`] fills seats in [`SeatGraph::fill_order`] and
//!   prunes with utility bounds: once a placed agent is certain to envy some
//!   seat's eventual occupant (or two placed agents are certain to envy each
//!   other) no completion can succeed. Candidate placements are filtered by
//!   a one-step lookahead on those bounds, and the search branches on the
//!   seat or agent with the fewest surviving candidates.
//!
//! Both strategies pin agent 0 to one seat per orbit of the grid's
//! automorphism group. Envy is invariant under seat automorphisms, so every
//! solution has an image with agent 0 on a representative seat.
//!
//! [`SeatGraph::fill_order`]: crate::seats::SeatGraph::fill_order

mod backtrack;
mod dynamics;
mod naive;

use std::time::Duration;

use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::error::ModelError;
use crate::stability::{Instance, Stability};

pub use backtrack::solve_backtrack;
pub use dynamics::{swap_dynamics, swap_dynamics_from};
pub use naive::{enumerate_arrangements, solve_naive};

/// Largest seat count accepted by the enumeration-based routines.
pub const NAIVE_SEAT_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("{seats} seats exceed the enumeration limit of {limit}")]
    Capacity { seats: usize, limit: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("search produced a witness the checker rejects")]
    UncertifiedWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    Naive,
    #[default]
    Backtrack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub strategy: Strategy,
    /// Search-node cap for [`Strategy::Backtrack`]; `None` searches to the end.
    pub budget: Option<u64>,
    /// Threads sharing the top-level branches of the backtracking search.
    pub workers: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            strategy: Strategy::Backtrack,
            budget: None,
            workers: 1,
        }
    }
}

impl SolveOptions {
    pub fn naive() -> Self {
        SolveOptions {
            strategy: Strategy::Naive,
            ..Self::default()
        }
    }

    pub fn backtrack(budget: Option<u64>) -> Self {
        SolveOptions {
            budget,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Yes(Arrangement),
    No,
    /// Budget exhausted before the question was settled.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: Status,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

impl SolveOutcome {
    pub fn witness(&self) -> Option<&Arrangement> {
        match &self.status {
            Status::Yes(pi) => Some(pi),
            _ => None,
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self.status, Status::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self.status, Status::No)
    }
}

pub fn solve(
    instance: &Instance,
    notion: Stability,
    options: SolveOptions,
) -> Result<SolveOutcome, SolverError> {
    match options.strategy {
        Strategy::Naive => solve_naive(instance, notion),
        Strategy::Backtrack => solve_backtrack(instance, notion, options.budget, options.workers),
    }
}

pub fn solve_envy_free(instance: &Instance, options: SolveOptions) -> Result<SolveOutcome, SolverError> {
    solve(instance, Stability::EnvyFree, options)
}

pub fn solve_exchange_stable(
    instance: &Instance,
    options: SolveOptions,
) -> Result<SolveOutcome, SolverError> {
    solve(instance, Stability::ExchangeStable, options)
}

/// Re-runs the full checker on a witness before it leaves the solver.
fn certify(instance: &Instance, notion: Stability, pi: Arrangement) -> Result<Status, SolverError> {
    if instance.satisfies(&pi, notion)? {
        Ok(Status::Yes(pi))
    } else {
        Err(SolverError::UncertifiedWitness)
    }
}

/// Seats agent 0 may take: the smallest seat of every automorphism orbit.
fn anchor_seats(instance: &Instance) -> Vec<bool> {
    let mut allowed = vec![false; instance.len()];
    for seat in instance.seats().orbit_representatives() {
        allowed[seat] = true;
    }
    allowed
}
