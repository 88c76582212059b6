//! Directed graphs as Hamiltonian-path sources.
//!
//! Vertices are numbered `1..=n` in every public signature and in files;
//! storage is 0-based.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Default largest vertex count accepted by [`hamiltonian_path`].
pub const DEFAULT_PATH_BOUND: usize = 24;
/// The oracle's table has `2^n` words; this caps its memory at 1 GiB.
pub const MAX_PATH_BOUND: usize = 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("a digraph needs at least one vertex")]
    Empty,
    #[error("arc ({0}, {1}) references a vertex outside 1..={2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("self-arc at vertex {0}")]
    SelfArc(usize),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("{n} vertices exceed the Hamiltonian-path oracle bound of {bound}")]
    Capacity { n: usize, bound: usize },
}

/// Simple directed graph on `v_1..v_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl Digraph {
    /// Builds a digraph from 1-based arcs.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, DigraphError> {
        if n == 0 {
            return Err(DigraphError::Empty);
        }
        let mut set = BTreeSet::new();
        for (u, v) in arcs {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(DigraphError::VertexOutOfRange(u, v, n));
            }
            if u == v {
                return Err(DigraphError::SelfArc(u));
            }
            if !set.insert((u - 1, v - 1)) {
                return Err(DigraphError::DuplicateArc(u, v));
            }
        }
        Ok(Digraph { n, arcs: set })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Arcs in lexicographic order, 1-based.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().map(|&(u, v)| (u + 1, v + 1))
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u >= 1 && v >= 1 && self.arcs.contains(&(u - 1, v - 1))
    }

    /// Out-neighbours of `u`, ascending, 1-based.
    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs
            .range((u - 1, 0)..(u, 0))
            .map(|&(_, v)| v + 1)
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.successors(u).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|&&(_, w)| w + 1 == v).count()
    }

    /// Whether `v_n` is a universal sink: no outgoing arcs and an arc from
    /// every other vertex.
    pub fn is_dhp_star(&self) -> bool {
        self.out_degree(self.n) == 0 && self.in_degree(self.n) == self.n - 1
    }

    /// Appends a fresh sink `v_{n+1}` with an arc from every original vertex.
    /// Hamiltonian paths of the result are those of `self` extended by the sink.
    pub fn with_universal_sink(&self) -> Digraph {
        let sink = self.n;
        let mut arcs = self.arcs.clone();
        arcs.extend((0..self.n).map(|u| (u, sink)));
        Digraph { n: self.n + 1, arcs }
    }

    /// Each ordered pair `(i, j)`, `i != j`, is kept independently with
    /// probability `p` (clamped to `[0, 1]`); pairs are drawn in lexicographic
    /// order from a ChaCha8 stream, so a seed fixes the result.
    pub fn random(n: usize, p: f64, seed: u64) -> Result<Digraph, DigraphError> {
        if n == 0 {
            return Err(DigraphError::Empty);
        }
        let p = p.clamp(0.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut arcs = BTreeSet::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(p) {
                    arcs.insert((u, v));
                }
            }
        }
        Ok(Digraph { n, arcs })
    }

    /// Whether `seq` (1-based) visits every vertex exactly once along arcs.
    pub fn is_hamiltonian_path(&self, seq: &[usize]) -> bool {
        if seq.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &v in seq {
            if v == 0 || v > self.n || std::mem::replace(&mut seen[v - 1], true) {
                return false;
            }
        }
        seq.windows(2).all(|w| self.has_arc(w[0], w[1]))
    }

    fn out_masks(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.n];
        for &(u, v) in &self.arcs {
            out[u] |= 1 << v;
        }
        out
    }
}

/// [`hamiltonian_path_bounded`] with [`DEFAULT_PATH_BOUND`].
pub fn hamiltonian_path(d: &Digraph) -> Result<Option<Vec<usize>>, DigraphError> {
    hamiltonian_path_bounded(d, DEFAULT_PATH_BOUND)
}

/// Exact subset dynamic programme over `(vertex set, endpoint)` states.
///
/// `starts[S]` is the set of vertices from which a Hamiltonian path of the
/// subgraph induced by `S` can begin. The returned path is the
/// lexicographically smallest one (lowest vertex index first at every step).
pub fn hamiltonian_path_bounded(d: &Digraph, bound: usize) -> Result<Option<Vec<usize>>, DigraphError> {
    let bound = bound.min(MAX_PATH_BOUND);
    let n = d.len();
    if n > bound {
        return Err(DigraphError::Capacity { n, bound });
    }
    let out = d.out_masks();
    let full: u32 = (1u32 << n) - 1;
    let mut starts = vec![0u32; 1usize << n];
    for mask in 1..=full {
        let mut can = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = mask & !(1 << v);
            if without == 0 || out[v] & starts[without as usize] != 0 {
                can |= 1 << v;
            }
        }
        starts[mask as usize] = can;
    }
    if starts[full as usize] == 0 {
        return Ok(None);
    }
    let mut path = Vec::with_capacity(n);
    let mut mask = full;
    let mut allowed = full;
    while mask != 0 {
        let v = (starts[mask as usize] & allowed).trailing_zeros() as usize;
        path.push(v + 1);
        mask &= !(1 << v);
        allowed = out[v];
    }
    Ok(Some(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::new(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn universal_sink_detection() {
        assert!(g(3, &[(1, 2), (2, 3), (1, 3)]).is_dhp_star());
        assert!(!g(3, &[(1, 2), (2, 3)]).is_dhp_star());
        assert!(!g(3, &[(1, 3), (2, 3), (3, 1)]).is_dhp_star());
        assert!(g(1, &[]).is_dhp_star());
    }

    #[test]
    fn sink_extension() {
        let d = g(1, &[]).with_universal_sink();
        assert_eq!(d.len(), 2);
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(1, 2)]);
        let d = g(3, &[(1, 2)]).with_universal_sink();
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(1, 2), (1, 4), (2, 4), (3, 4)]);
        assert!(d.is_dhp_star());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Digraph::new(0, []), Err(DigraphError::Empty));
        assert_eq!(Digraph::new(2, [(1, 1)]), Err(DigraphError::SelfArc(1)));
        assert_eq!(Digraph::new(2, [(1, 3)]), Err(DigraphError::VertexOutOfRange(1, 3, 2)));
        assert_eq!(Digraph::new(2, [(1, 2), (1, 2)]), Err(DigraphError::DuplicateArc(1, 2)));
    }

    #[test]
    fn path_checker() {
        let d = g(3, &[(1, 2), (2, 3), (1, 3)]);
        assert!(d.is_hamiltonian_path(&[1, 2, 3]));
        assert!(!d.is_hamiltonian_path(&[1, 3, 2]));
        assert!(!d.is_hamiltonian_path(&[1, 1, 2]));
        assert!(!d.is_hamiltonian_path(&[1, 2]));
        assert!(!d.is_hamiltonian_path(&[0, 1, 2]));
    }

    #[test]
    fn oracle_small_cases() {
        let d = g(3, &[(1, 2), (2, 3), (1, 3)]);
        assert_eq!(hamiltonian_path(&d).unwrap(), Some(vec![1, 2, 3]));
        let d = g(3, &[(1, 3), (2, 3)]);
        assert_eq!(hamiltonian_path(&d).unwrap(), None);
        assert_eq!(hamiltonian_path(&g(1, &[])).unwrap(), Some(vec![1]));
        // Both 2-1-3 and 3-1-2 exist; the lower start wins.
        let d = g(3, &[(2, 1), (1, 3), (3, 1), (1, 2)]);
        assert_eq!(hamiltonian_path(&d).unwrap(), Some(vec![2, 1, 3]));
    }

    #[test]
    fn oracle_capacity() {
        let d = Digraph::random(9, 0.5, 1).unwrap();
        assert_eq!(
            hamiltonian_path_bounded(&d, 8),
            Err(DigraphError::Capacity { n: 9, bound: 8 })
        );
    }

    #[test]
    fn random_digraph_contract() {
        assert_eq!(Digraph::random(6, 0.0, 3).unwrap().arc_count(), 0);
        assert_eq!(Digraph::random(6, 1.0, 3).unwrap().arc_count(), 30);
        assert_eq!(Digraph::random(7, 0.4, 42).unwrap(), Digraph::random(7, 0.4, 42).unwrap());
    }

    #[test]
    fn two_vertex_star_always_has_a_path() {
        let d = g(2, &[(1, 2)]);
        assert!(d.is_dhp_star());
        assert_eq!(hamiltonian_path(&d).unwrap(), Some(vec![1, 2]));
    }
}
