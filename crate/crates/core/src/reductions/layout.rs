use crate::arrangement::Arrangement;
use crate::profile::AgentId;
use crate::solver::{solve_backtrack, Status};

use super::{ReducedInstance, ReductionError, Theorem, VertexGadget};

/// Node cap for the search used when a layout fails its checker.
const FALLBACK_BUDGET: u64 = 20_000_000;

struct Canvas {
    cols: usize,
    cells: Vec<Option<AgentId>>,
}

impl Canvas {
    fn new(rows: usize, cols: usize) -> Self {
        Canvas {
            cols,
            cells: vec![None; rows * cols],
        }
    }

    fn put(&mut self, row: usize, col: usize, agent: AgentId) {
        let cell = &mut self.cells[row * self.cols + col];
        debug_assert!(cell.is_none(), "cell ({row}, {col}) used twice");
        *cell = Some(agent);
    }

    /// Places the gadgets block by block, `rows[r]` picking the agent of row
    /// `r` at block offset 0, 1, 2.
    fn blocks(&mut self, gadgets: &[VertexGadget], offset: usize, rows: &[fn(&VertexGadget) -> [AgentId; 3]]) {
        for (k, g) in gadgets.iter().enumerate() {
            for (r, pick) in rows.iter().enumerate() {
                for (dc, agent) in pick(g).into_iter().enumerate() {
                    self.put(r, offset + 3 * k + dc, agent);
                }
            }
        }
    }

    fn fill(mut self, fillers: &[AgentId]) -> Vec<AgentId> {
        let mut rest = fillers.iter();
        for cell in self.cells.iter_mut().filter(|c| c.is_none()) {
            *cell = Some(*rest.next().expect("filler count matches free cells"));
        }
        debug_assert!(rest.next().is_none());
        self.cells.into_iter().map(|c| c.expect("filled")).collect()
    }
}

fn xyz(g: &VertexGadget) -> [AgentId; 3] {
    [g.x, g.y, g.z]
}

fn abc(g: &VertexGadget) -> [AgentId; 3] {
    [g.a, g.b, g.c]
}

fn def(g: &VertexGadget) -> [AgentId; 3] {
    [g.d.expect("d"), g.e.expect("e"), g.f.expect("f")]
}

/// The fixed gadget layout for `path`, before certification. Block `k`
/// holds the gadget of the `k`-th path vertex, so each `z` sits beside the
/// next vertex's `x`.
pub fn gadget_layout(ri: &ReducedInstance, path: &[usize]) -> Result<Arrangement, ReductionError> {
    let n = ri.n();
    if path.last() != Some(&n) || !ri.source().is_hamiltonian_path(path) {
        return Err(ReductionError::InvalidPath(path.to_vec()));
    }
    let roles = ri.roles();
    let gadgets: Vec<VertexGadget> = path.iter().map(|&v| roles.vertices[v - 1]).collect();
    let shape = ri.theorem().expected_shape(n);
    let mut canvas = Canvas::new(shape.rows, shape.cols);
    match ri.theorem() {
        Theorem::Efa2 => canvas.blocks(&gadgets, 0, &[abc, xyz]),
        Theorem::EfaGrid { .. } => canvas.blocks(&gadgets, 0, &[def, xyz, abc]),
        Theorem::Esa2 => {
            let s = roles.s.expect("s");
            canvas.put(0, 0, s);
            canvas.put(0, 1, roles.t[0]);
            canvas.put(1, 0, roles.t[1]);
            canvas.put(1, 1, roles.t[2]);
            canvas.blocks(&gadgets, 2, &[xyz, abc]);
        }
        Theorem::Esa3 | Theorem::EsaGrid { .. } => {
            let s = roles.s.expect("s");
            canvas.put(0, 0, roles.t[0]);
            canvas.put(1, 0, s);
            canvas.put(2, 0, roles.t[1]);
            canvas.put(1, 1, roles.t[2]);
            canvas.put(0, 1, roles.t[3]);
            canvas.blocks(&gadgets, 2, &[def, xyz, abc]);
        }
    }
    Ok(Arrangement::from_occupants(canvas.fill(&roles.dummies))?)
}

/// Maps a Hamiltonian path of the source (ending at its sink) to a seating
/// certified envy-free or exchange-stable, as the reduction demands.
///
/// The fixed layout is tried first. Should the checker reject it, a bounded
/// exact search takes over; an uncertified arrangement is never returned.
pub fn forward_witness(ri: &ReducedInstance, path: &[usize]) -> Result<Arrangement, ReductionError> {
    let pi = gadget_layout(ri, path)?;
    let notion = ri.theorem().target();
    if ri.instance().satisfies(&pi, notion)? {
        return Ok(pi);
    }
    let outcome = solve_backtrack(ri.instance(), notion, Some(FALLBACK_BUDGET), 1)
        .map_err(|e| ReductionError::ConstructionFailure(e.to_string()))?;
    match outcome.status {
        Status::Yes(pi) => Ok(pi),
        Status::No => Err(ReductionError::ConstructionFailure(
            "layout rejected by the checker and no certified arrangement exists".into(),
        )),
        Status::Unknown => Err(ReductionError::ConstructionFailure(format!(
            "layout rejected by the checker; search gave up after {} nodes",
            outcome.nodes_explored
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;
    use crate::reductions::reduce;

    fn d_yes() -> Digraph {
        Digraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    fn names(ri: &ReducedInstance, pi: &Arrangement, row: usize) -> Vec<String> {
        let (_, cols) = ri.instance().seats().dims().unwrap();
        (0..cols)
            .map(|c| ri.instance().profile().name(pi.occupant(row * cols + c)).to_string())
            .collect()
    }

    #[test]
    fn single_vertex_efa2_layout() {
        let d = Digraph::new(1, []).unwrap();
        let ri = reduce(&d, Theorem::Efa2).unwrap();
        let pi = forward_witness(&ri, &[1]).unwrap();
        assert_eq!(names(&ri, &pi, 0), ["a1", "b1", "c1"]);
        assert_eq!(names(&ri, &pi, 1), ["x1", "y1", "z1"]);
        assert!(ri.instance().is_envy_free(&pi).unwrap());
    }

    #[test]
    fn layouts_pass_their_checkers_without_fallback() {
        for theorem in [
            Theorem::Efa2,
            Theorem::efa_grid(3).unwrap(),
            Theorem::efa_grid(5).unwrap(),
            Theorem::Esa2,
            Theorem::Esa3,
            Theorem::esa_grid(4).unwrap(),
            Theorem::esa_grid(6).unwrap(),
        ] {
            let ri = reduce(&d_yes(), theorem).unwrap();
            let pi = gadget_layout(&ri, &[1, 2, 3]).unwrap();
            assert!(ri.instance().satisfies(&pi, theorem.target()).unwrap(), "{theorem}");
        }
    }

    #[test]
    fn esa2_layout_rows() {
        let ri = reduce(&d_yes(), Theorem::Esa2).unwrap();
        let pi = forward_witness(&ri, &[1, 2, 3]).unwrap();
        assert_eq!(names(&ri, &pi, 0)[..5], ["s", "t1", "x1", "y1", "z1"]);
        assert_eq!(names(&ri, &pi, 1)[..5], ["t2", "t3", "a1", "b1", "c1"]);
        let p = ri.instance().profile();
        let (b1, x1) = (p.require("b1").unwrap(), p.require("x1").unwrap());
        assert!(ri.instance().envies(&pi, b1, x1).unwrap());
        assert!(!ri.instance().envies(&pi, x1, b1).unwrap());
    }

    #[test]
    fn esa_grid_dummies_fill_the_left_columns() {
        let ri = reduce(&d_yes(), Theorem::esa_grid(4).unwrap()).unwrap();
        let pi = forward_witness(&ri, &[1, 2, 3]).unwrap();
        assert_eq!(names(&ri, &pi, 2)[..3], ["t2", "D1", "a1"]);
        assert!(names(&ri, &pi, 3).iter().all(|name| name.starts_with('D')));
    }

    #[test]
    fn gadgets_follow_the_path_order() {
        let d = Digraph::new(3, [(2, 1), (1, 3), (2, 3)]).unwrap();
        let ri = reduce(&d, Theorem::Efa2).unwrap();
        let pi = forward_witness(&ri, &[2, 1, 3]).unwrap();
        assert_eq!(names(&ri, &pi, 1), ["x2", "y2", "z2", "x1", "y1", "z1", "x3", "y3", "z3"]);
    }

    #[test]
    fn rejects_non_paths() {
        let ri = reduce(&d_yes(), Theorem::Efa2).unwrap();
        for bad in [vec![1, 3, 2], vec![1, 2], vec![2, 1, 3], vec![1, 2, 3, 3]] {
            assert_eq!(forward_witness(&ri, &bad), Err(ReductionError::InvalidPath(bad)));
        }
    }
}
