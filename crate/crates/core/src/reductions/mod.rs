//! Gadget reductions from Hamiltonian path (with a universal sink) to the
//! existence of envy-free or exchange-stable seatings on grids.
//!
//! Every source vertex `v_i` becomes a chain `x_i -> y_i -> z_i` of agents,
//! each liking the next, with `z_i` liking `x_p` for every arc `(v_i, v_p)`.
//! Anchor agents `a_i, b_i, c_i` (and `d_i, e_i, f_i` on taller grids) pin the
//! chain members down. The exchange-stability variants add an agent `s` whom
//! every gadget agent strongly dislikes and a handful of `t` agents who like
//! only `s`; a stable seating has to wall `s` off with `t` agents, and any
//! unhappy gadget agent would then form a blocking pair with `s`. Dummy agents
//! fill the rows the gadgets do not use.
//!
//! [`forward_witness`] turns a Hamiltonian path into a certified seating and
//! [`extract_path`] recovers a Hamiltonian path from a certified seating by
//! reading which `x_j` sits next to each `z_i`.

mod extract;
mod layout;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::digraph::Digraph;
use crate::error::ModelError;
use crate::profile::{AgentId, ProfileBuilder, Utility};
use crate::seats::SeatGraph;
use crate::stability::{Instance, Stability};

pub use extract::{extract_path, ExtractionError};
pub use layout::{forward_witness, gadget_layout};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("source digraph must have a universal sink at v_n (no out-arcs, an arc from every other vertex)")]
    NotDhpStar,
    #[error("{theorem} needs at least {min} rows, got {rows}")]
    RowsOutOfRange {
        theorem: &'static str,
        rows: usize,
        min: usize,
    },
    #[error("unknown reduction `{0}` (expected efa2, efa-grid, esa2, esa3 or esa-grid)")]
    UnknownTheorem(String),
    #[error("{0} requires a row count")]
    MissingRows(&'static str),
    #[error("{0} has a fixed row count")]
    UnexpectedRows(&'static str),
    #[error("{0:?} is not a Hamiltonian path of the source ending at its sink")]
    InvalidPath(Vec<usize>),
    #[error("could not build a certified witness: {0}")]
    ConstructionFailure(String),
    #[error("invalid role table: {0}")]
    InvalidRoles(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One of the five grid reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Envy-free seating on `2 x 3n`.
    Efa2,
    /// Envy-free seating on `rows x 3n`, `rows >= 3`.
    EfaGrid { rows: usize },
    /// Exchange-stable seating on `2 x (3n + 2)`.
    Esa2,
    /// Exchange-stable seating on `3 x (3n + 2)`.
    Esa3,
    /// Exchange-stable seating on `rows x (3n + 2)`, `rows >= 4`.
    EsaGrid { rows: usize },
}

/// Closed-form size of a reduced instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub agents: usize,
    pub rows: usize,
    pub cols: usize,
    pub dummies: usize,
}

impl Theorem {
    pub fn efa_grid(rows: usize) -> Result<Self, ReductionError> {
        Theorem::EfaGrid { rows }.validated()
    }

    pub fn esa_grid(rows: usize) -> Result<Self, ReductionError> {
        Theorem::EsaGrid { rows }.validated()
    }

    /// Parses a reduction name; `rows` is required exactly for the two
    /// variable-height reductions.
    pub fn from_name(name: &str, rows: Option<usize>) -> Result<Self, ReductionError> {
        let theorem = match (name, rows) {
            ("efa2", None) => Theorem::Efa2,
            ("esa2", None) => Theorem::Esa2,
            ("esa3", None) => Theorem::Esa3,
            ("efa-grid", Some(rows)) => Theorem::EfaGrid { rows },
            ("esa-grid", Some(rows)) => Theorem::EsaGrid { rows },
            ("efa2" | "esa2" | "esa3", Some(_)) => {
                return Err(ReductionError::UnexpectedRows(Theorem::static_name(name)))
            }
            ("efa-grid" | "esa-grid", None) => {
                return Err(ReductionError::MissingRows(Theorem::static_name(name)))
            }
            _ => return Err(ReductionError::UnknownTheorem(name.to_string())),
        };
        theorem.validated()
    }

    fn static_name(name: &str) -> &'static str {
        ["efa2", "efa-grid", "esa2", "esa3", "esa-grid"]
            .into_iter()
            .find(|&n| n == name)
            .unwrap_or("reduction")
    }

    fn validated(self) -> Result<Self, ReductionError> {
        let min = match self {
            Theorem::EfaGrid { .. } => 3,
            Theorem::EsaGrid { .. } => 4,
            _ => return Ok(self),
        };
        if self.rows() < min {
            return Err(ReductionError::RowsOutOfRange {
                theorem: self.name(),
                rows: self.rows(),
                min,
            });
        }
        Ok(self)
    }

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Efa2 => "efa2",
            Theorem::EfaGrid { .. } => "efa-grid",
            Theorem::Esa2 => "esa2",
            Theorem::Esa3 => "esa3",
            Theorem::EsaGrid { .. } => "esa-grid",
        }
    }

    pub fn rows(self) -> usize {
        match self {
            Theorem::Efa2 | Theorem::Esa2 => 2,
            Theorem::Esa3 => 3,
            Theorem::EfaGrid { rows } | Theorem::EsaGrid { rows } => rows,
        }
    }

    /// The property a witness seating must have.
    pub fn target(self) -> Stability {
        match self {
            Theorem::Efa2 | Theorem::EfaGrid { .. } => Stability::EnvyFree,
            _ => Stability::ExchangeStable,
        }
    }

    /// Whether each vertex also gets the second anchor triple `d, e, f`.
    pub fn has_second_anchors(self) -> bool {
        !matches!(self, Theorem::Efa2 | Theorem::Esa2)
    }

    /// Number of `t` agents guarding `s`; zero for the envy-free reductions.
    pub fn guard_count(self) -> usize {
        match self {
            Theorem::Efa2 | Theorem::EfaGrid { .. } => 0,
            Theorem::Esa2 => 3,
            Theorem::Esa3 | Theorem::EsaGrid { .. } => 4,
        }
    }

    /// `(utility toward s, utility toward a favourite)` for gadget agents.
    fn esa_values(self) -> Option<(Utility, Utility)> {
        match self {
            Theorem::Efa2 | Theorem::EfaGrid { .. } => None,
            Theorem::Esa2 => Some((-10, 3)),
            Theorem::Esa3 | Theorem::EsaGrid { .. } => Some((-17, 4)),
        }
    }

    pub fn expected_shape(self, n: usize) -> Shape {
        let l = self.rows();
        let (agents, cols, dummies) = match self {
            Theorem::Efa2 => (6 * n, 3 * n, 0),
            Theorem::EfaGrid { .. } => (3 * n * l, 3 * n, 3 * n * l - 9 * n),
            Theorem::Esa2 => (6 * n + 4, 3 * n + 2, 0),
            Theorem::Esa3 => (9 * n + 6, 3 * n + 2, 1),
            Theorem::EsaGrid { .. } => (3 * n * l + 2 * l, 3 * n + 2, 3 * n * l + 2 * l - 9 * n - 5),
        };
        Shape {
            agents,
            rows: l,
            cols,
            dummies,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theorem::EfaGrid { rows } | Theorem::EsaGrid { rows } => write!(f, "{} (rows={rows})", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for Theorem {
    type Err = ReductionError;

    /// Accepts `efa2`, `esa2`, `esa3`, `efa-grid:<rows>` and `esa-grid:<rows>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some((name, rows)) => {
                let rows = rows
                    .parse()
                    .map_err(|_| ReductionError::UnknownTheorem(s.to_string()))?;
                Theorem::from_name(name, Some(rows))
            }
            None => Theorem::from_name(s, None),
        }
    }
}

/// Closed-form counts for `n` source vertices.
pub fn expected_shape(theorem: Theorem, n: usize) -> Shape {
    theorem.expected_shape(n)
}

/// Agents standing for one source vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexGadget {
    pub x: AgentId,
    pub y: AgentId,
    pub z: AgentId,
    pub a: AgentId,
    pub b: AgentId,
    pub c: AgentId,
    pub d: Option<AgentId>,
    pub e: Option<AgentId>,
    pub f: Option<AgentId>,
}

/// Role of every agent in a reduced instance. The roles partition the agents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetRoles {
    /// Indexed by source vertex, `vertices[i - 1]` for `v_i`.
    pub vertices: Vec<VertexGadget>,
    pub s: Option<AgentId>,
    pub t: Vec<AgentId>,
    pub dummies: Vec<AgentId>,
}

const VERTEX_ROLES: [&str; 9] = ["x", "y", "z", "a", "b", "c", "d", "e", "f"];

impl VertexGadget {
    fn members(&self) -> [Option<AgentId>; 9] {
        [
            Some(self.x),
            Some(self.y),
            Some(self.z),
            Some(self.a),
            Some(self.b),
            Some(self.c),
            self.d,
            self.e,
            self.f,
        ]
    }

    /// Anchor agents with the chain member each one favours.
    pub fn anchors(&self) -> Vec<(AgentId, AgentId)> {
        let mut out = vec![(self.a, self.x), (self.b, self.y), (self.c, self.z)];
        if let (Some(d), Some(e), Some(f)) = (self.d, self.e, self.f) {
            out.extend([(d, self.x), (e, self.y), (f, self.z)]);
        }
        out
    }
}

impl GadgetRoles {
    /// Role name -> agents, the form stored in instance files. Per-vertex
    /// roles are listed in vertex order.
    pub fn table(&self) -> BTreeMap<String, Vec<AgentId>> {
        let mut table = BTreeMap::new();
        for (k, role) in VERTEX_ROLES.iter().enumerate() {
            let members: Vec<AgentId> = self.vertices.iter().filter_map(|g| g.members()[k]).collect();
            if !members.is_empty() {
                table.insert(role.to_string(), members);
            }
        }
        if let Some(s) = self.s {
            table.insert("s".into(), vec![s]);
        }
        if !self.t.is_empty() {
            table.insert("t".into(), self.t.clone());
        }
        if !self.dummies.is_empty() {
            table.insert("D".into(), self.dummies.clone());
        }
        table
    }

    /// Inverse of [`GadgetRoles::table`], checking that the roles fit the
    /// theorem and partition `0..agent_count`.
    pub fn from_table(
        table: &BTreeMap<String, Vec<AgentId>>,
        theorem: Theorem,
        n: usize,
        agent_count: usize,
    ) -> Result<Self, ReductionError> {
        let bad = |msg: String| ReductionError::InvalidRoles(msg);
        for key in table.keys() {
            if !VERTEX_ROLES.contains(&key.as_str()) && !["s", "t", "D"].contains(&key.as_str()) {
                return Err(bad(format!("unknown role `{key}`")));
            }
        }
        let per_vertex = |role: &str, required: bool| -> Result<Option<Vec<AgentId>>, ReductionError> {
            match table.get(role) {
                Some(list) if list.len() == n => Ok(Some(list.clone())),
                Some(list) => Err(bad(format!("role `{role}` lists {} agents, expected {n}", list.len()))),
                None if required => Err(bad(format!("role `{role}` is missing"))),
                None => Ok(None),
            }
        };
        let second = theorem.has_second_anchors();
        let mut columns = Vec::new();
        for (k, role) in VERTEX_ROLES.iter().enumerate() {
            let col = per_vertex(role, k < 6 || second)?;
            if k >= 6 && !second && col.is_some() {
                return Err(bad(format!("role `{role}` is not used by {}", theorem.name())));
            }
            columns.push(col);
        }
        let at = |k: usize, i: usize| columns[k].as_ref().map(|c| c[i]);
        let vertices = (0..n)
            .map(|i| VertexGadget {
                x: at(0, i).expect("required"),
                y: at(1, i).expect("required"),
                z: at(2, i).expect("required"),
                a: at(3, i).expect("required"),
                b: at(4, i).expect("required"),
                c: at(5, i).expect("required"),
                d: at(6, i),
                e: at(7, i),
                f: at(8, i),
            })
            .collect();
        let guards = theorem.guard_count();
        let s = match table.get("s").map(Vec::as_slice) {
            Some([s]) if guards > 0 => Some(*s),
            None if guards == 0 => None,
            _ => return Err(bad(format!("role `s` does not fit {}", theorem.name()))),
        };
        let t = table.get("t").cloned().unwrap_or_default();
        if t.len() != guards {
            return Err(bad(format!("expected {guards} `t` agents, found {}", t.len())));
        }
        let dummies = table.get("D").cloned().unwrap_or_default();
        let expected = theorem.expected_shape(n).dummies;
        if dummies.len() != expected {
            return Err(bad(format!("expected {expected} dummies, found {}", dummies.len())));
        }
        let roles = GadgetRoles {
            vertices,
            s,
            t,
            dummies,
        };
        let all: Vec<AgentId> = roles.table().into_values().flatten().collect();
        let distinct: BTreeSet<AgentId> = all.iter().copied().collect();
        if all.len() != agent_count || distinct.len() != agent_count || all.iter().any(|a| a.index() >= agent_count) {
            return Err(bad("roles do not partition the agent set".into()));
        }
        Ok(roles)
    }
}

/// A seat-arrangement instance produced by a reduction, with the metadata
/// needed to map witnesses back to the source digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    instance: Instance,
    roles: GadgetRoles,
    theorem: Theorem,
    source: Digraph,
}

impl ReducedInstance {
    /// Reassembles a reduced instance (e.g. read back from a file), checking
    /// the grid shape and the role partition.
    pub fn from_parts(
        instance: Instance,
        roles: GadgetRoles,
        theorem: Theorem,
        source: Digraph,
    ) -> Result<Self, ReductionError> {
        let shape = theorem.expected_shape(source.len());
        let dims = instance.seats().dims();
        if dims != Some((shape.rows, shape.cols)) || instance.len() != shape.agents {
            return Err(ReductionError::InvalidRoles(format!(
                "instance is not a {}x{} grid with {} agents",
                shape.rows, shape.cols, shape.agents
            )));
        }
        let roles = GadgetRoles::from_table(&roles.table(), theorem, source.len(), instance.len())?;
        Ok(ReducedInstance {
            instance,
            roles,
            theorem,
            source,
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn roles(&self) -> &GadgetRoles {
        &self.roles
    }

    pub fn theorem(&self) -> Theorem {
        self.theorem
    }

    pub fn source(&self) -> &Digraph {
        &self.source
    }

    pub fn n(&self) -> usize {
        self.source.len()
    }

    pub fn into_instance(self) -> Instance {
        self.instance
    }
}

/// Compiles a universal-sink digraph into the gadget instance of `theorem`.
pub fn reduce(source: &Digraph, theorem: Theorem) -> Result<ReducedInstance, ReductionError> {
    let theorem = theorem.validated()?;
    if !source.is_dhp_star() {
        return Err(ReductionError::NotDhpStar);
    }
    let n = source.len();
    let shape = theorem.expected_shape(n);
    let mut b = ProfileBuilder::new();

    let second = theorem.has_second_anchors();
    let mut vertices = Vec::with_capacity(n);
    for i in 1..=n {
        let mut add = |role: &str| b.add_agent(format!("{role}{i}"));
        let (x, y, z, a, bb, c) = (add("x")?, add("y")?, add("z")?, add("a")?, add("b")?, add("c")?);
        let (d, e, f) = if second {
            (Some(add("d")?), Some(add("e")?), Some(add("f")?))
        } else {
            (None, None, None)
        };
        vertices.push(VertexGadget { x, y, z, a, b: bb, c, d, e, f });
    }
    let s = if theorem.guard_count() > 0 {
        Some(b.add_agent("s")?)
    } else {
        None
    };
    let t = (1..=theorem.guard_count())
        .map(|k| b.add_agent(format!("t{k}")))
        .collect::<Result<Vec<_>, _>>()?;
    let dummies = (1..=shape.dummies)
        .map(|k| b.add_agent(format!("D{k}")))
        .collect::<Result<Vec<_>, _>>()?;

    let (favorite, isolator) = match theorem.esa_values() {
        Some((toward_s, fav)) => (fav, Some(toward_s)),
        None => (1, None),
    };
    for (idx, g) in vertices.iter().enumerate() {
        let i = idx + 1;
        let gadget_agents = g.members().into_iter().flatten();
        if let Some(toward_s) = isolator {
            let s = s.expect("esa has s");
            for q in gadget_agents {
                b.set_default(q, -1)?;
                b.set(q, s, toward_s)?;
                for &tk in &t {
                    b.set(q, tk, 0)?;
                }
            }
        }
        b.set(g.x, g.y, favorite)?;
        b.set(g.y, g.z, favorite)?;
        if i == n && isolator.is_some() {
            b.set(g.z, g.c, favorite)?;
        } else {
            for p in source.successors(i) {
                b.set(g.z, vertices[p - 1].x, favorite)?;
            }
        }
        for (anchor, target) in g.anchors() {
            b.set(anchor, target, favorite)?;
        }
    }
    if let Some(s) = s {
        b.set_default(s, 1)?;
        for &tk in &t {
            b.set(s, tk, 0)?;
            b.set(tk, s, 1)?;
        }
        for &dk in &dummies {
            b.set(dk, s, -17)?;
        }
    }

    let profile = b.build();
    let seats = SeatGraph::grid(shape.rows, shape.cols)?;
    let instance = Instance::new(profile, seats)?;
    Ok(ReducedInstance {
        instance,
        roles: GadgetRoles {
            vertices,
            s,
            t,
            dummies,
        },
        theorem,
        source: source.clone(),
    })
}
