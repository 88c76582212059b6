//! Utilities, envy, blocking pairs and the two stability predicates.

use crate::arrangement::Arrangement;
use crate::error::ModelError;
use crate::profile::{AgentId, PreferenceProfile, Utility};
use crate::seats::{Seat, SeatGraph};

/// A preference profile together with a seat graph of matching size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    profile: PreferenceProfile,
    seats: SeatGraph,
    adjacency: Vec<Vec<Seat>>,
}

/// Every ordered envy and every blocking pair of one arrangement.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StabilityReport {
    /// `(i, j)` with `i` envying `j`, in lexicographic order.
    pub envies: Vec<(AgentId, AgentId)>,
    /// Mutually envying pairs `(i, j)` with `i < j`, in lexicographic order.
    pub blocking_pairs: Vec<(AgentId, AgentId)>,
}

impl StabilityReport {
    pub fn is_envy_free(&self) -> bool {
        self.envies.is_empty()
    }

    pub fn is_exchange_stable(&self) -> bool {
        self.blocking_pairs.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArrangementStats {
    /// Sum of all agents' utilities.
    pub welfare: Utility,
    pub min_utility: Utility,
}

/// Which stability notion a search or check targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    EnvyFree,
    ExchangeStable,
}

impl Instance {
    pub fn new(profile: PreferenceProfile, seats: SeatGraph) -> Result<Self, ModelError> {
        if profile.len() != seats.num_seats() {
            return Err(ModelError::SizeMismatch {
                agents: profile.len(),
                seats: seats.num_seats(),
            });
        }
        let adjacency = seats.adjacency();
        Ok(Instance {
            profile,
            seats,
            adjacency,
        })
    }

    pub fn profile(&self) -> &PreferenceProfile {
        &self.profile
    }

    pub fn seats(&self) -> &SeatGraph {
        &self.seats
    }

    pub fn len(&self) -> usize {
        self.profile.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profile.is_empty()
    }

    #[inline]
    pub(crate) fn adjacency(&self) -> &[Vec<Seat>] {
        &self.adjacency
    }

    fn check_arrangement(&self, pi: &Arrangement) -> Result<(), ModelError> {
        if pi.len() != self.len() {
            return Err(ModelError::SizeMismatch {
                agents: self.len(),
                seats: pi.len(),
            });
        }
        Ok(())
    }

    #[inline]
    fn utility_unchecked(&self, pi: &Arrangement, i: AgentId) -> Utility {
        self.adjacency[pi.seat(i)]
            .iter()
            .map(|&v| self.profile.value(i, pi.occupant(v)))
            .sum()
    }

    /// `U_i(π)`: sum of `p_i` over the occupants of the seats next to `π(i)`.
    pub fn utility(&self, pi: &Arrangement, i: AgentId) -> Result<Utility, ModelError> {
        self.check_arrangement(pi)?;
        self.profile.check(i)?;
        Ok(self.utility_unchecked(pi, i))
    }

    pub fn utilities(&self, pi: &Arrangement) -> Result<Vec<Utility>, ModelError> {
        self.check_arrangement(pi)?;
        Ok(self
            .profile
            .agents()
            .map(|i| self.utility_unchecked(pi, i))
            .collect())
    }

    /// Whether `i` envies `j`, evaluated by materializing `π_ij` and
    /// recomputing `U_i` from scratch.
    pub fn envies(&self, pi: &Arrangement, i: AgentId, j: AgentId) -> Result<bool, ModelError> {
        self.check_arrangement(pi)?;
        self.profile.check(i)?;
        self.profile.check(j)?;
        if i == j {
            return Err(ModelError::SelfEnvy(self.profile.name(i).to_string()));
        }
        let swapped = pi.swap(i, j)?;
        Ok(self.utility_unchecked(&swapped, i) > self.utility_unchecked(pi, i))
    }

    /// Same relation as [`Instance::envies`] without building `π_ij`: `i`'s
    /// utility at `π(j)`, where the seat `π(i)` now holds `j`.
    #[inline]
    pub fn envies_fast(&self, pi: &Arrangement, i: AgentId, j: AgentId) -> bool {
        let (si, sj) = (pi.seat(i), pi.seat(j));
        let current: Utility = self.adjacency[si]
            .iter()
            .map(|&v| self.profile.value(i, pi.occupant(v)))
            .sum();
        let moved: Utility = self.adjacency[sj]
            .iter()
            .map(|&v| {
                let who = if v == si { j } else { pi.occupant(v) };
                self.profile.value(i, who)
            })
            .sum();
        moved > current
    }

    pub fn report(&self, pi: &Arrangement) -> Result<StabilityReport, ModelError> {
        self.check_arrangement(pi)?;
        let n = self.len();
        let mut envy = vec![false; n * n];
        let mut report = StabilityReport::default();
        for i in self.profile.agents() {
            for j in self.profile.agents() {
                if i != j && self.envies_fast(pi, i, j) {
                    envy[i.index() * n + j.index()] = true;
                    report.envies.push((i, j));
                }
            }
        }
        for &(i, j) in &report.envies {
            if i < j && envy[j.index() * n + i.index()] {
                report.blocking_pairs.push((i, j));
            }
        }
        Ok(report)
    }

    /// Early-exit form of [`Instance::report`].
    pub fn satisfies(&self, pi: &Arrangement, notion: Stability) -> Result<bool, ModelError> {
        self.check_arrangement(pi)?;
        for i in self.profile.agents() {
            for j in self.profile.agents() {
                if i == j || !self.envies_fast(pi, i, j) {
                    continue;
                }
                match notion {
                    Stability::EnvyFree => return Ok(false),
                    Stability::ExchangeStable if self.envies_fast(pi, j, i) => return Ok(false),
                    Stability::ExchangeStable => {}
                }
            }
        }
        Ok(true)
    }

    pub fn is_envy_free(&self, pi: &Arrangement) -> Result<bool, ModelError> {
        self.satisfies(pi, Stability::EnvyFree)
    }

    pub fn is_exchange_stable(&self, pi: &Arrangement) -> Result<bool, ModelError> {
        self.satisfies(pi, Stability::ExchangeStable)
    }

    pub fn stats(&self, pi: &Arrangement) -> Result<ArrangementStats, ModelError> {
        let utilities = self.utilities(pi)?;
        Ok(ArrangementStats {
            welfare: utilities.iter().sum(),
            min_utility: utilities.iter().copied().min().unwrap_or(0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileBuilder;

    fn a(i: usize) -> AgentId {
        AgentId::new(i)
    }

    /// 2x2 grid, only `p_1(2) = 1`; 1@(0,0), 2@(1,1), 3@(0,1), 4@(1,0).
    fn two_by_two() -> (Instance, Arrangement) {
        let mut b = ProfileBuilder::new();
        let ids: Vec<_> = ["1", "2", "3", "4"].iter().map(|n| b.add_agent(*n).unwrap()).collect();
        b.set(ids[0], ids[1], 1).unwrap();
        let inst = Instance::new(b.build(), SeatGraph::grid(2, 2).unwrap()).unwrap();
        let pi = Arrangement::new(vec![0, 3, 1, 2]).unwrap();
        (inst, pi)
    }

    #[test]
    fn utility_sums_over_neighbors() {
        let (inst, pi) = two_by_two();
        assert_eq!(inst.utility(&pi, a(0)).unwrap(), 0);
        for i in 1..4 {
            assert_eq!(inst.utility(&pi, a(i)).unwrap(), 0);
        }
        assert!(inst.utility(&pi, a(4)).is_err());
    }

    #[test]
    fn envy_after_swap_counts_new_neighborhood() {
        let (inst, pi) = two_by_two();
        assert!(inst.envies(&pi, a(0), a(2)).unwrap());
        assert!(!inst.envies(&pi, a(2), a(0)).unwrap());
        assert_eq!(
            inst.envies(&pi, a(1), a(1)),
            Err(ModelError::SelfEnvy("2".into()))
        );
        let swapped = pi.swap(a(0), a(2)).unwrap();
        assert_eq!(swapped.seats(), &[1, 3, 0, 2]);
    }

    #[test]
    fn stable_but_not_envy_free() {
        let (inst, pi) = two_by_two();
        let r = inst.report(&pi).unwrap();
        assert_eq!(r.envies, vec![(a(0), a(2)), (a(0), a(3))]);
        assert!(!r.is_envy_free());
        assert!(r.is_exchange_stable());
        assert_eq!(inst.stats(&pi).unwrap(), ArrangementStats { welfare: 0, min_utility: 0 });
    }

    #[test]
    fn blocking_pair_on_a_path() {
        // 1x4, p_1(3) = 1, p_2(4) = 1, seated 1 4 3 2 left to right.
        let mut b = ProfileBuilder::new();
        let ids: Vec<_> = ["1", "2", "3", "4"].iter().map(|n| b.add_agent(*n).unwrap()).collect();
        b.set(ids[0], ids[2], 1).unwrap();
        b.set(ids[1], ids[3], 1).unwrap();
        let inst = Instance::new(b.build(), SeatGraph::grid(1, 4).unwrap()).unwrap();
        let pi = Arrangement::from_occupants(vec![a(0), a(3), a(2), a(1)]).unwrap();
        let r = inst.report(&pi).unwrap();
        assert_eq!(r.blocking_pairs, vec![(a(0), a(1))]);
        assert!(!inst.is_exchange_stable(&pi).unwrap());
    }

    #[test]
    fn adjacent_swap_sees_the_partner_in_the_old_seat() {
        // 1x3 path: i at 0, j at 1, k at 2. i likes j only.
        let p = PreferenceProfile::from_matrix(
            ["i", "j", "k"],
            &[vec![0, 5, -1], vec![0; 3], vec![0; 3]],
        )
        .unwrap();
        let inst = Instance::new(p, SeatGraph::grid(1, 3).unwrap()).unwrap();
        let pi = Arrangement::identity(3);
        // After swapping, i sits in the middle next to j (in i's old seat) and k.
        assert_eq!(inst.utility(&pi.swap(a(0), a(1)).unwrap(), a(0)).unwrap(), 4);
        assert!(!inst.envies(&pi, a(0), a(1)).unwrap());
        assert_eq!(inst.envies(&pi, a(0), a(1)).unwrap(), inst.envies_fast(&pi, a(0), a(1)));
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let p = PreferenceProfile::from_matrix(["a", "b"], &[vec![0, 0], vec![0, 0]]).unwrap();
        assert!(matches!(
            Instance::new(p, SeatGraph::grid(1, 3).unwrap()),
            Err(ModelError::SizeMismatch { agents: 2, seats: 3 })
        ));
    }
}
