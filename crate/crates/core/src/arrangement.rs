use crate::error::ModelError;
use crate::profile::AgentId;
use crate::seats::Seat;

/// A bijection between agents and seats, stored in both directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrangement {
    seat_of: Vec<Seat>,
    agent_at: Vec<AgentId>,
}

impl Arrangement {
    /// From an agent-indexed seat list: `seat_of[i]` is `π(i)`.
    pub fn new(seat_of: Vec<Seat>) -> Result<Self, ModelError> {
        let n = seat_of.len();
        let mut agent_at = vec![None; n];
        for (i, &seat) in seat_of.iter().enumerate() {
            let slot = agent_at
                .get_mut(seat)
                .ok_or(ModelError::SeatOutOfRange { seat, seats: n })?;
            if slot.is_some() {
                return Err(ModelError::NotBijection(format!("seat {seat} assigned twice")));
            }
            *slot = Some(AgentId::new(i));
        }
        Ok(Arrangement {
            seat_of,
            agent_at: agent_at.into_iter().map(|a| a.expect("counted")).collect(),
        })
    }

    /// From a seat-indexed occupant list: `occupants[v]` is `π⁻¹(v)`.
    pub fn from_occupants(occupants: Vec<AgentId>) -> Result<Self, ModelError> {
        let n = occupants.len();
        let mut seat_of = vec![usize::MAX; n];
        for (seat, agent) in occupants.iter().enumerate() {
            let slot = seat_of
                .get_mut(agent.index())
                .ok_or(ModelError::AgentOutOfRange(agent.index()))?;
            if *slot != usize::MAX {
                return Err(ModelError::NotBijection(format!(
                    "agent {} seated twice",
                    agent.index()
                )));
            }
            *slot = seat;
        }
        Ok(Arrangement {
            seat_of,
            agent_at: occupants,
        })
    }

    pub fn identity(n: usize) -> Self {
        Arrangement {
            seat_of: (0..n).collect(),
            agent_at: (0..n).map(AgentId::new).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.seat_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seat_of.is_empty()
    }

    fn check(&self, agent: AgentId) -> Result<(), ModelError> {
        if agent.index() < self.seat_of.len() {
            Ok(())
        } else {
            Err(ModelError::AgentOutOfRange(agent.index()))
        }
    }

    #[inline]
    pub fn seat(&self, agent: AgentId) -> Seat {
        self.seat_of[agent.index()]
    }

    pub fn try_seat(&self, agent: AgentId) -> Result<Seat, ModelError> {
        self.check(agent)?;
        Ok(self.seat(agent))
    }

    #[inline]
    pub fn occupant(&self, seat: Seat) -> AgentId {
        self.agent_at[seat]
    }

    pub fn seats(&self) -> &[Seat] {
        &self.seat_of
    }

    pub fn occupants(&self) -> &[AgentId] {
        &self.agent_at
    }

    /// `π_ij`: `i` and `j` exchange seats, everyone else stays put.
    pub fn swap(&self, i: AgentId, j: AgentId) -> Result<Arrangement, ModelError> {
        let mut out = self.clone();
        out.swap_in_place(i, j)?;
        Ok(out)
    }

    pub fn swap_in_place(&mut self, i: AgentId, j: AgentId) -> Result<(), ModelError> {
        self.check(i)?;
        self.check(j)?;
        let (si, sj) = (self.seat(i), self.seat(j));
        self.seat_of.swap(i.index(), j.index());
        self.agent_at[si] = j;
        self.agent_at[sj] = i;
        Ok(())
    }

    /// `σ ∘ π` for a seat permutation `σ`.
    pub fn permute_seats(&self, sigma: &[Seat]) -> Result<Arrangement, ModelError> {
        if sigma.len() != self.len() {
            return Err(ModelError::SizeMismatch {
                agents: self.len(),
                seats: sigma.len(),
            });
        }
        Arrangement::new(self.seat_of.iter().map(|&s| sigma[s]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: usize) -> AgentId {
        AgentId::new(i)
    }

    #[test]
    fn swap_exchanges_exactly_two_seats() {
        // agents 0..4 on seats 0, 3, 1, 2
        let pi = Arrangement::new(vec![0, 3, 1, 2]).unwrap();
        let swapped = pi.swap(a(0), a(2)).unwrap();
        assert_eq!(swapped.seats(), &[1, 3, 0, 2]);
        assert_eq!(swapped.occupant(0), a(2));
        assert_eq!(swapped.occupant(1), a(0));
        assert_eq!(pi.swap(a(1), a(1)).unwrap(), pi);
        assert_eq!(swapped.swap(a(0), a(2)).unwrap(), pi);
        assert!(pi.swap(a(0), a(9)).is_err());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Arrangement::new(vec![0, 0, 1]).is_err());
        assert!(Arrangement::new(vec![0, 5]).is_err());
        assert!(Arrangement::from_occupants(vec![a(1), a(1)]).is_err());
        let pi = Arrangement::from_occupants(vec![a(2), a(0), a(1)]).unwrap();
        assert_eq!(pi.seats(), &[1, 2, 0]);
    }
}
