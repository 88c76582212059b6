use std::time::Instant;

use crate::arrangement::Arrangement;
use crate::profile::AgentId;
use crate::stability::{Instance, Stability};

use super::{anchor_seats, certify, SolveOutcome, SolverError, Status, NAIVE_SEAT_LIMIT};

fn check_capacity(instance: &Instance) -> Result<(), SolverError> {
    if instance.len() > NAIVE_SEAT_LIMIT {
        return Err(SolverError::Capacity {
            seats: instance.len(),
            limit: NAIVE_SEAT_LIMIT,
        });
    }
    Ok(())
}

/// Depth-first walk over seat-indexed occupant vectors in lexicographic order.
/// `visit` returns `false` to stop.
fn walk(
    occupants: &mut Vec<AgentId>,
    used: &mut [bool],
    allowed_for_first: Option<&[bool]>,
    visit: &mut dyn FnMut(&[AgentId]) -> bool,
) -> bool {
    let seat = occupants.len();
    if seat == used.len() {
        return visit(occupants);
    }
    for a in 0..used.len() {
        if used[a] {
            continue;
        }
        if a == 0 && allowed_for_first.is_some_and(|allowed| !allowed[seat]) {
            continue;
        }
        used[a] = true;
        occupants.push(AgentId::new(a));
        let go_on = walk(occupants, used, allowed_for_first, visit);
        occupants.pop();
        used[a] = false;
        if !go_on {
            return false;
        }
    }
    true
}

/// Visits every bijection agents -> seats exactly once, with no symmetry
/// reduction, and returns how many were visited (`n!`).
pub fn enumerate_arrangements(
    instance: &Instance,
    mut visitor: impl FnMut(&Arrangement),
) -> Result<u64, SolverError> {
    check_capacity(instance)?;
    let n = instance.len();
    let mut count = 0u64;
    walk(&mut Vec::with_capacity(n), &mut vec![false; n], None, &mut |occ| {
        let pi = Arrangement::from_occupants(occ.to_vec()).expect("walk yields bijections");
        visitor(&pi);
        count += 1;
        true
    });
    Ok(count)
}

/// Full enumeration modulo grid symmetry, checking every arrangement.
pub fn solve_naive(instance: &Instance, notion: Stability) -> Result<SolveOutcome, SolverError> {
    check_capacity(instance)?;
    let start = Instant::now();
    let n = instance.len();
    let allowed = anchor_seats(instance);
    let mut nodes = 0u64;
    let mut found = None;
    walk(
        &mut Vec::with_capacity(n),
        &mut vec![false; n],
        Some(&allowed),
        &mut |occ| {
            nodes += 1;
            let pi = Arrangement::from_occupants(occ.to_vec()).expect("walk yields bijections");
            if instance.satisfies(&pi, notion).expect("sizes match") {
                found = Some(pi);
                false
            } else {
                true
            }
        },
    );
    let status = match found {
        Some(pi) => certify(instance, notion, pi)?,
        None => Status::No,
    };
    Ok(SolveOutcome {
        status,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::PreferenceProfile;
    use crate::seats::SeatGraph;
    use std::collections::HashSet;

    fn zeros(rows: usize, cols: usize) -> Instance {
        let n = rows * cols;
        let p = PreferenceProfile::from_matrix((0..n).map(|i| format!("a{i}")), &vec![vec![0; n]; n])
            .unwrap();
        Instance::new(p, SeatGraph::grid(rows, cols).unwrap()).unwrap()
    }

    #[test]
    fn enumeration_counts_factorials() {
        assert_eq!(enumerate_arrangements(&zeros(2, 2), |_| {}).unwrap(), 24);
        assert_eq!(enumerate_arrangements(&zeros(2, 3), |_| {}).unwrap(), 720);
        assert_eq!(enumerate_arrangements(&zeros(1, 1), |_| {}).unwrap(), 1);
    }

    #[test]
    fn enumeration_visits_each_bijection_once() {
        let mut seen = HashSet::new();
        enumerate_arrangements(&zeros(1, 5), |pi| {
            assert!(seen.insert(pi.seats().to_vec()));
        })
        .unwrap();
        assert_eq!(seen.len(), 120);
    }
}
