use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arrangement::Arrangement;
use crate::profile::AgentId;
use crate::stability::Instance;

use super::{SolveOutcome, Status};

fn first_blocking_pair(instance: &Instance, pi: &Arrangement) -> Option<(AgentId, AgentId)> {
    let n = instance.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (AgentId::new(i), AgentId::new(j))))
        .find(|&(i, j)| instance.envies_fast(pi, i, j) && instance.envies_fast(pi, j, i))
}

/// Starting from a seeded random arrangement, repeatedly swaps the
/// lexicographically first blocking pair. Ends with `Yes` on reaching an
/// exchange-stable arrangement, `Unknown` after `max_steps` swaps. Never `No`:
/// the dynamics may cycle.
pub fn swap_dynamics(instance: &Instance, seed: u64, max_steps: u64) -> SolveOutcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut occupants: Vec<AgentId> = (0..instance.len()).map(AgentId::new).collect();
    occupants.shuffle(&mut rng);
    let pi = Arrangement::from_occupants(occupants).expect("shuffled identity");
    run_from(instance, pi, max_steps, start)
}

/// [`swap_dynamics`] from a given arrangement.
pub fn swap_dynamics_from(instance: &Instance, pi: Arrangement, max_steps: u64) -> SolveOutcome {
    run_from(instance, pi, max_steps, Instant::now())
}

fn run_from(instance: &Instance, mut pi: Arrangement, max_steps: u64, start: Instant) -> SolveOutcome {
    let mut steps = 0;
    loop {
        match first_blocking_pair(instance, &pi) {
            None => {
                return SolveOutcome {
                    status: Status::Yes(pi),
                    nodes_explored: steps,
                    elapsed: start.elapsed(),
                }
            }
            Some(_) if steps >= max_steps => {
                return SolveOutcome {
                    status: Status::Unknown,
                    nodes_explored: steps,
                    elapsed: start.elapsed(),
                }
            }
            Some((i, j)) => {
                pi.swap_in_place(i, j).expect("agents from the instance");
                steps += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileBuilder;
    use crate::seats::SeatGraph;

    fn path_example() -> Instance {
        let mut b = ProfileBuilder::new();
        let ids: Vec<_> = ["1", "2", "3", "4"].iter().map(|n| b.add_agent(*n).unwrap()).collect();
        b.set(ids[0], ids[2], 1).unwrap();
        b.set(ids[1], ids[3], 1).unwrap();
        Instance::new(b.build(), SeatGraph::grid(1, 4).unwrap()).unwrap()
    }

    #[test]
    fn stable_start_needs_no_steps() {
        let inst = path_example();
        let stable = Arrangement::from_occupants([0, 2, 1, 3].map(AgentId::new).to_vec()).unwrap();
        let out = swap_dynamics_from(&inst, stable.clone(), 10);
        assert_eq!(out.status, Status::Yes(stable));
        assert_eq!(out.nodes_explored, 0);
    }

    #[test]
    fn zero_step_cap_on_unstable_start_is_unknown() {
        let inst = path_example();
        let blocked = Arrangement::from_occupants([0, 3, 2, 1].map(AgentId::new).to_vec()).unwrap();
        let out = swap_dynamics_from(&inst, blocked, 0);
        assert_eq!(out.status, Status::Unknown);
    }

    #[test]
    fn path_example_converges_from_every_start() {
        let inst = path_example();
        crate::solver::enumerate_arrangements(&inst, |pi| {
            let out = swap_dynamics_from(&inst, pi.clone(), 24);
            let reached = out.witness().expect("converges within 4! swaps");
            assert!(inst.is_exchange_stable(reached).unwrap());
        })
        .unwrap();
        for seed in 0..20 {
            assert!(swap_dynamics(&inst, seed, 24).is_yes());
        }
    }
}
