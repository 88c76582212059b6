//! Seat graphs: rectangular grids and explicit undirected graphs.

use std::collections::BTreeSet;

use crate::error::ModelError;

type CellMap = dyn Fn(usize, usize) -> (usize, usize);

/// Seat vertex id. Grid seats are numbered row-major, `(r, c) -> r * cols + c`.
pub type Seat = usize;

/// Undirected graph of seats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeatGraph {
    Grid { rows: usize, cols: usize },
    Explicit { adjacency: Vec<Vec<Seat>> },
}

impl SeatGraph {
    pub fn grid(rows: usize, cols: usize) -> Result<Self, ModelError> {
        if rows == 0 || cols == 0 {
            return Err(ModelError::EmptyGrid { rows, cols });
        }
        Ok(SeatGraph::Grid { rows, cols })
    }

    pub fn explicit(
        vertices: usize,
        edges: impl IntoIterator<Item = (Seat, Seat)>,
    ) -> Result<Self, ModelError> {
        let mut adjacency = vec![Vec::new(); vertices];
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertices {
                    return Err(ModelError::SeatOutOfRange { seat: w, seats: vertices });
                }
            }
            if u == v {
                return Err(ModelError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(ModelError::DuplicateEdge(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(SeatGraph::Explicit { adjacency })
    }

    pub fn num_seats(&self) -> usize {
        match self {
            SeatGraph::Grid { rows, cols } => rows * cols,
            SeatGraph::Explicit { adjacency } => adjacency.len(),
        }
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        match *self {
            SeatGraph::Grid { rows, cols } => Some((rows, cols)),
            SeatGraph::Explicit { .. } => None,
        }
    }

    fn check(&self, seat: Seat) -> Result<(), ModelError> {
        let seats = self.num_seats();
        if seat < seats {
            Ok(())
        } else {
            Err(ModelError::SeatOutOfRange { seat, seats })
        }
    }

    /// `N_G(v)`, in increasing seat order.
    pub fn neighbors(&self, seat: Seat) -> Result<Vec<Seat>, ModelError> {
        self.check(seat)?;
        Ok(self.neighbors_unchecked(seat))
    }

    pub(crate) fn neighbors_unchecked(&self, seat: Seat) -> Vec<Seat> {
        match *self {
            SeatGraph::Grid { rows, cols } => {
                let (r, c) = (seat / cols, seat % cols);
                let mut out = Vec::with_capacity(4);
                if r > 0 {
                    out.push(seat - cols);
                }
                if c > 0 {
                    out.push(seat - 1);
                }
                if c + 1 < cols {
                    out.push(seat + 1);
                }
                if r + 1 < rows {
                    out.push(seat + cols);
                }
                out
            }
            SeatGraph::Explicit { ref adjacency } => adjacency[seat].clone(),
        }
    }

    /// Materialized adjacency lists, one per seat.
    pub fn adjacency(&self) -> Vec<Vec<Seat>> {
        (0..self.num_seats()).map(|v| self.neighbors_unchecked(v)).collect()
    }

    pub fn is_adjacent(&self, u: Seat, v: Seat) -> bool {
        match *self {
            SeatGraph::Grid { cols, .. } => {
                let (r1, c1) = (u / cols, u % cols);
                let (r2, c2) = (v / cols, v % cols);
                r1.abs_diff(r2) + c1.abs_diff(c2) == 1
            }
            SeatGraph::Explicit { ref adjacency } => adjacency
                .get(u)
                .is_some_and(|list| list.binary_search(&v).is_ok()),
        }
    }

    pub fn degree(&self, seat: Seat) -> Result<usize, ModelError> {
        self.neighbors(seat).map(|n| n.len())
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_seats())
            .map(|v| self.neighbors_unchecked(v).len())
            .max()
            .unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        match *self {
            SeatGraph::Grid { rows, cols } => rows * (cols - 1) + cols * (rows - 1),
            SeatGraph::Explicit { ref adjacency } => {
                adjacency.iter().map(Vec::len).sum::<usize>() / 2
            }
        }
    }

    /// Edge list with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Seat, Seat)> {
        (0..self.num_seats())
            .flat_map(|u| {
                self.neighbors_unchecked(u)
                    .into_iter()
                    .filter(move |&v| u < v)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    pub fn seat_at(&self, row: usize, col: usize) -> Result<Seat, ModelError> {
        match *self {
            SeatGraph::Grid { rows, cols } if row < rows && col < cols => Ok(row * cols + col),
            SeatGraph::Grid { rows, cols } => Err(ModelError::CoordOutOfRange { row, col, rows, cols }),
            SeatGraph::Explicit { .. } => Err(ModelError::CoordOutOfRange {
                row,
                col,
                rows: 0,
                cols: 0,
            }),
        }
    }

    /// `(row, col)` of a grid seat; `None` for explicit graphs.
    pub fn coords(&self, seat: Seat) -> Option<(usize, usize)> {
        match *self {
            SeatGraph::Grid { rows, cols } if seat < rows * cols => Some((seat / cols, seat % cols)),
            _ => None,
        }
    }

    /// Column-major order for grids (each column closes after `rows` more
    /// placements), identity order for explicit graphs.
    pub fn fill_order(&self) -> Vec<Seat> {
        match *self {
            SeatGraph::Grid { rows, cols } => (0..cols)
                .flat_map(|c| (0..rows).map(move |r| r * cols + c))
                .collect(),
            SeatGraph::Explicit { ref adjacency } => (0..adjacency.len()).collect(),
        }
    }

    /// Distinct seat permutations of the grid's symmetry group: flips and the
    /// half turn, plus the transpose family on square grids. Explicit graphs
    /// report only the identity. The identity is always first.
    pub fn automorphisms(&self) -> Vec<Vec<Seat>> {
        let (rows, cols) = match *self {
            SeatGraph::Grid { rows, cols } => (rows, cols),
            SeatGraph::Explicit { ref adjacency } => return vec![(0..adjacency.len()).collect()],
        };
        let mut maps: Vec<Box<CellMap>> = vec![
            Box::new(|r, c| (r, c)),
            Box::new(move |r, c| (r, cols - 1 - c)),
            Box::new(move |r, c| (rows - 1 - r, c)),
            Box::new(move |r, c| (rows - 1 - r, cols - 1 - c)),
        ];
        if rows == cols {
            let n = rows;
            maps.push(Box::new(|r, c| (c, r)));
            maps.push(Box::new(move |r, c| (n - 1 - c, n - 1 - r)));
            maps.push(Box::new(move |r, c| (c, n - 1 - r)));
            maps.push(Box::new(move |r, c| (n - 1 - c, r)));
        }
        let mut out: Vec<Vec<Seat>> = Vec::new();
        for map in maps {
            let perm: Vec<Seat> = (0..rows * cols)
                .map(|v| {
                    let (r, c) = map(v / cols, v % cols);
                    r * cols + c
                })
                .collect();
            if !out.contains(&perm) {
                out.push(perm);
            }
        }
        out
    }

    /// Smallest seat of every orbit under [`SeatGraph::automorphisms`].
    pub fn orbit_representatives(&self) -> Vec<Seat> {
        let group = self.automorphisms();
        (0..self.num_seats())
            .filter(|&v| group.iter().all(|g| g[v] >= v))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_neighbors_follow_manhattan_adjacency() {
        let g = SeatGraph::grid(2, 3).unwrap();
        assert_eq!(g.neighbors(g.seat_at(0, 0).unwrap()).unwrap(), vec![1, 3]);
        let g = SeatGraph::grid(3, 3).unwrap();
        assert_eq!(g.neighbors(4).unwrap().len(), 4);
        let path = SeatGraph::grid(1, 4).unwrap();
        assert_eq!(path.neighbors(1).unwrap(), vec![0, 2]);
        assert!(matches!(
            path.neighbors(4),
            Err(ModelError::SeatOutOfRange { seat: 4, seats: 4 })
        ));
    }

    #[test]
    fn grid_degree_profile_and_edge_count() {
        for (rows, cols) in [(2, 2), (2, 5), (3, 4), (4, 4), (5, 7)] {
            let g = SeatGraph::grid(rows, cols).unwrap();
            assert_eq!(g.edge_count(), rows * (cols - 1) + cols * (rows - 1));
            assert_eq!(g.edges().len(), g.edge_count());
            for v in 0..g.num_seats() {
                let (r, c) = g.coords(v).unwrap();
                let border = [r == 0, r == rows - 1, c == 0, c == cols - 1]
                    .iter()
                    .filter(|&&b| b)
                    .count();
                assert_eq!(g.degree(v).unwrap(), 4 - border);
                for u in 0..g.num_seats() {
                    let (r2, c2) = g.coords(u).unwrap();
                    assert_eq!(g.is_adjacent(u, v), r.abs_diff(r2) + c.abs_diff(c2) == 1);
                }
            }
        }
    }

    #[test]
    fn explicit_graph_validation() {
        assert_eq!(SeatGraph::explicit(3, [(0, 0)]), Err(ModelError::SelfLoop(0)));
        assert_eq!(
            SeatGraph::explicit(3, [(0, 1), (1, 0)]),
            Err(ModelError::DuplicateEdge(1, 0))
        );
        assert!(SeatGraph::explicit(3, [(0, 3)]).is_err());
        let g = SeatGraph::explicit(4, [(0, 1), (2, 1), (3, 0)]).unwrap();
        assert_eq!(g.neighbors(1).unwrap(), vec![0, 2]);
        assert_eq!(g.edge_count(), 3);
        assert!(g.is_adjacent(3, 0));
        assert!(!g.is_adjacent(3, 2));
    }

    #[test]
    fn automorphism_group_orders() {
        let order = |r, c| SeatGraph::grid(r, c).unwrap().automorphisms().len();
        assert_eq!(order(2, 4), 4);
        assert_eq!(order(1, 5), 2);
        assert_eq!(order(3, 3), 8);
        assert_eq!(order(1, 1), 1);
        let g = SeatGraph::grid(3, 5).unwrap();
        for perm in g.automorphisms() {
            for (u, v) in g.edges() {
                assert!(g.is_adjacent(perm[u], perm[v]));
            }
        }
    }

    #[test]
    fn orbit_representatives_cover_quadrants() {
        let g = SeatGraph::grid(2, 4).unwrap();
        assert_eq!(g.orbit_representatives(), vec![0, 1]);
        let g = SeatGraph::grid(3, 3).unwrap();
        assert_eq!(g.orbit_representatives(), vec![0, 1, 4]);
    }

    #[test]
    fn column_major_fill() {
        let g = SeatGraph::grid(2, 3).unwrap();
        assert_eq!(g.fill_order(), vec![0, 3, 1, 4, 2, 5]);
    }
}
