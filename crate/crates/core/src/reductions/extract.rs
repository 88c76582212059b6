use std::fmt;

use thiserror::Error;

use crate::arrangement::Arrangement;

use super::ReducedInstance;

/// Vertex lists in these errors are 1-based, `u_i` standing for `v_i`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractionError {
    #[error("arrangement has {found} agents, the instance {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("missing out-arc at u_{0}")]
    MissingOutArc(usize),
    #[error("u_{vertex} branches to {}", VertexList(.targets))]
    Branching { vertex: usize, targets: Vec<usize> },
    #[error("u_{vertex} is entered from {}", VertexList(.sources))]
    SharedTarget { vertex: usize, sources: Vec<usize> },
    #[error("cycle {}", VertexList(.0))]
    Cycle(Vec<usize>),
    #[error("sequence {0:?} is not a Hamiltonian path of the source")]
    NotHamiltonian(Vec<usize>),
}

struct VertexList<'a>(&'a [usize]);

impl fmt::Display for VertexList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" -> ")?;
            }
            write!(f, "u_{v}")?;
        }
        Ok(())
    }
}

/// Reads a Hamiltonian path of the source off a seating.
///
/// Builds the digraph on `u_1..u_n` with an arc `u_i -> u_j` whenever `z_i`
/// sits next to `x_j`, and requires it to be a single path covering every
/// vertex. Arcs out of `u_n` are ignored: `v_n` is the sink, and nothing
/// stops `z_n` from sitting beside some `x_j` in a stable seating.
pub fn extract_path(ri: &ReducedInstance, pi: &Arrangement) -> Result<Vec<usize>, ExtractionError> {
    let instance = ri.instance();
    if pi.len() != instance.len() {
        return Err(ExtractionError::SizeMismatch {
            expected: instance.len(),
            found: pi.len(),
        });
    }
    let n = ri.n();
    let seats = instance.seats();
    let gadgets = &ri.roles().vertices;

    let mut next = vec![None; n];
    for i in 0..n - 1 {
        let zi = pi.seat(gadgets[i].z);
        let targets: Vec<usize> = (0..n)
            .filter(|&j| seats.is_adjacent(zi, pi.seat(gadgets[j].x)))
            .collect();
        match targets.as_slice() {
            [] => return Err(ExtractionError::MissingOutArc(i + 1)),
            [j] => next[i] = Some(*j),
            _ => {
                return Err(ExtractionError::Branching {
                    vertex: i + 1,
                    targets: targets.iter().map(|j| j + 1).collect(),
                })
            }
        }
    }

    let mut entered_from = vec![Vec::new(); n];
    for (i, target) in next.iter().enumerate() {
        if let Some(j) = *target {
            entered_from[j].push(i + 1);
        }
    }
    if let Some((j, sources)) = entered_from.iter().enumerate().find(|(_, s)| s.len() > 1) {
        return Err(ExtractionError::SharedTarget {
            vertex: j + 1,
            sources: sources.clone(),
        });
    }

    // n - 1 arcs with distinct heads: exactly one vertex has no in-arc, and
    // the walk from it cannot revisit anything, so it stops at u_n.
    let start = entered_from
        .iter()
        .position(Vec::is_empty)
        .expect("n - 1 distinct heads among n vertices");
    let mut walk = vec![start];
    let mut on_walk = vec![false; n];
    on_walk[start] = true;
    while let Some(j) = next[*walk.last().expect("non-empty")] {
        on_walk[j] = true;
        walk.push(j);
    }
    if walk.len() < n {
        let first = on_walk.iter().position(|&seen| !seen).expect("a vertex off the walk");
        let mut cycle = vec![first + 1];
        let mut v = next[first].expect("off-walk vertices lie on cycles");
        while v != first {
            cycle.push(v + 1);
            v = next[v].expect("off-walk vertices lie on cycles");
        }
        return Err(ExtractionError::Cycle(cycle));
    }

    let path: Vec<usize> = walk.into_iter().map(|v| v + 1).collect();
    if !ri.source().is_hamiltonian_path(&path) {
        return Err(ExtractionError::NotHamiltonian(path));
    }
    Ok(path)
}
