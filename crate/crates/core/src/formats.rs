//! JSON interchange formats.
//!
//! Digraph files use 1-based vertex ids. Arrangement files use 0-based
//! `[row, col]` coordinates on grids and 0-based seat ids on explicit graphs.
//! Unknown fields are rejected everywhere.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::digraph::{Digraph, DigraphError};
use crate::error::ModelError;
use crate::profile::{AgentId, ProfileBuilder, Utility};
use crate::reductions::{GadgetRoles, ReducedInstance, ReductionError, Theorem};
use crate::seats::{Seat, SeatGraph};
use crate::stability::Instance;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("agent `{0}` has no seat in the arrangement")]
    Unseated(String),
    #[error("agent `{agent}`: {reason}")]
    BadSeat { agent: String, reason: String },
    #[error("seat {0} is assigned twice")]
    SeatTaken(Seat),
    #[error("reduction block: {0}")]
    BadReduction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphFile {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDims {
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub grid: GridDims,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub vertices: usize,
    pub edges: Vec<[Seat; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeatGraphSpec {
    Grid(GridSpec),
    Explicit(ExplicitSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionBlock {
    pub theorem: String,
    pub n: usize,
    pub rows: usize,
    pub roles: BTreeMap<String, Vec<String>>,
    pub source: DigraphFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct InstanceFile {
    pub agents: Vec<String>,
    pub seat_graph: SeatGraphSpec,
    #[serde(default)]
    pub defaults: BTreeMap<String, Utility>,
    /// `[i, j, value]`; later entries override earlier ones.
    #[serde(default)]
    pub utilities: Vec<(String, String, Utility)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeatRef {
    Coord([usize; 2]),
    Id(Seat),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    pub assignment: BTreeMap<String, SeatRef>,
}

impl DigraphFile {
    pub fn from_digraph(d: &Digraph) -> Self {
        DigraphFile {
            n: d.len(),
            arcs: d.arcs().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn to_digraph(&self) -> Result<Digraph, DigraphError> {
        Digraph::new(self.n, self.arcs.iter().map(|&[u, v]| (u, v)))
    }
}

impl SeatGraphSpec {
    pub fn from_seats(seats: &SeatGraph) -> Self {
        match seats.dims() {
            Some((rows, cols)) => SeatGraphSpec::Grid(GridSpec {
                grid: GridDims { rows, cols },
            }),
            None => SeatGraphSpec::Explicit(ExplicitSpec {
                vertices: seats.num_seats(),
                edges: seats.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            }),
        }
    }

    pub fn to_seats(&self) -> Result<SeatGraph, ModelError> {
        match self {
            SeatGraphSpec::Grid(GridSpec { grid }) => SeatGraph::grid(grid.rows, grid.cols),
            SeatGraphSpec::Explicit(e) => SeatGraph::explicit(e.vertices, e.edges.iter().map(|&[u, v]| (u, v))),
        }
    }
}

impl InstanceFile {
    /// Writes non-zero defaults and every explicit override.
    pub fn from_instance(instance: &Instance) -> Self {
        let p = instance.profile();
        InstanceFile {
            agents: p.names().to_vec(),
            seat_graph: SeatGraphSpec::from_seats(instance.seats()),
            defaults: p
                .agents()
                .filter(|&a| p.default_of(a) != 0)
                .map(|a| (p.name(a).to_string(), p.default_of(a)))
                .collect(),
            utilities: p
                .overrides()
                .map(|(i, j, v)| (p.name(i).to_string(), p.name(j).to_string(), v))
                .collect(),
            reduction: None,
        }
    }

    pub fn from_reduced(ri: &ReducedInstance) -> Self {
        let p = ri.instance().profile();
        let theorem = ri.theorem();
        InstanceFile {
            reduction: Some(ReductionBlock {
                theorem: theorem.name().to_string(),
                n: ri.n(),
                rows: theorem.rows(),
                roles: ri
                    .roles()
                    .table()
                    .into_iter()
                    .map(|(role, agents)| (role, agents.into_iter().map(|a| p.name(a).to_string()).collect()))
                    .collect(),
                source: DigraphFile::from_digraph(ri.source()),
            }),
            ..InstanceFile::from_instance(ri.instance())
        }
    }

    pub fn to_instance(&self) -> Result<Instance, FormatError> {
        let mut b = ProfileBuilder::new();
        for name in &self.agents {
            b.add_agent(name.clone())?;
        }
        let lookup = |b: &ProfileBuilder, name: &str| b.agent(name).ok_or_else(|| ModelError::UnknownAgent(name.to_string()));
        for (name, &value) in &self.defaults {
            let a = lookup(&b, name)?;
            b.set_default(a, value)?;
        }
        for (i, j, value) in &self.utilities {
            let (i, j) = (lookup(&b, i)?, lookup(&b, j)?);
            b.set(i, j, *value)?;
        }
        Ok(Instance::new(b.build(), self.seat_graph.to_seats()?)?)
    }

    /// The reduced instance, if the file carries a reduction block.
    pub fn to_reduced(&self) -> Result<Option<ReducedInstance>, FormatError> {
        let Some(block) = &self.reduction else {
            return Ok(None);
        };
        let instance = self.to_instance()?;
        let source = block.source.to_digraph()?;
        if source.len() != block.n {
            return Err(FormatError::BadReduction(format!(
                "n = {} but the source has {} vertices",
                block.n,
                source.len()
            )));
        }
        let theorem = match block.theorem.as_str() {
            "efa-grid" | "esa-grid" => Theorem::from_name(&block.theorem, Some(block.rows))?,
            name => {
                let theorem = Theorem::from_name(name, None)?;
                if theorem.rows() != block.rows {
                    return Err(FormatError::BadReduction(format!("{name} has {} rows, not {}", theorem.rows(), block.rows)));
                }
                theorem
            }
        };
        let p = instance.profile();
        let mut table = BTreeMap::new();
        for (role, names) in &block.roles {
            let agents = names.iter().map(|n| p.require(n)).collect::<Result<Vec<AgentId>, _>>()?;
            table.insert(role.clone(), agents);
        }
        let roles = GadgetRoles::from_table(&table, theorem, block.n, instance.len())?;
        Ok(Some(ReducedInstance::from_parts(instance, roles, theorem, source)?))
    }
}

impl ArrangementFile {
    pub fn from_arrangement(instance: &Instance, pi: &Arrangement) -> Self {
        let p = instance.profile();
        let seats = instance.seats();
        ArrangementFile {
            assignment: p
                .agents()
                .map(|a| {
                    let seat = pi.seat(a);
                    let at = match seats.coords(seat) {
                        Some((r, c)) => SeatRef::Coord([r, c]),
                        None => SeatRef::Id(seat),
                    };
                    (p.name(a).to_string(), at)
                })
                .collect(),
        }
    }

    pub fn to_arrangement(&self, instance: &Instance) -> Result<Arrangement, FormatError> {
        let p = instance.profile();
        let seats = instance.seats();
        let mut seat_of = vec![None; instance.len()];
        let mut taken = vec![false; instance.len()];
        for (name, at) in &self.assignment {
            let agent = p.require(name)?;
            let bad = |reason: String| FormatError::BadSeat {
                agent: name.clone(),
                reason,
            };
            let seat = match (*at, seats.dims()) {
                (SeatRef::Coord([r, c]), Some(_)) => seats.seat_at(r, c).map_err(|e| bad(e.to_string()))?,
                (SeatRef::Id(v), None) if v < instance.len() => v,
                (SeatRef::Id(v), None) => return Err(bad(format!("seat {v} does not exist"))),
                (SeatRef::Id(_), Some(_)) => return Err(bad("grid seats are written [row, col]".into())),
                (SeatRef::Coord(_), None) => return Err(bad("explicit seats are written as integer ids".into())),
            };
            if std::mem::replace(&mut taken[seat], true) {
                return Err(FormatError::SeatTaken(seat));
            }
            seat_of[agent.index()] = Some(seat);
        }
        let seat_of = seat_of
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| FormatError::Unseated(p.name(AgentId::new(i)).to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arrangement::new(seat_of)?)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn digraph_from_json(text: &str) -> Result<Digraph, FormatError> {
    let file: DigraphFile = serde_json::from_str(text)?;
    Ok(file.to_digraph()?)
}

pub fn digraph_to_json(d: &Digraph) -> String {
    to_json(&DigraphFile::from_digraph(d))
}

pub fn instance_file_from_json(text: &str) -> Result<InstanceFile, FormatError> {
    Ok(serde_json::from_str(text)?)
}

pub fn instance_from_json(text: &str) -> Result<Instance, FormatError> {
    instance_file_from_json(text)?.to_instance()
}

pub fn instance_to_json(instance: &Instance) -> String {
    to_json(&InstanceFile::from_instance(instance))
}

pub fn reduced_to_json(ri: &ReducedInstance) -> String {
    to_json(&InstanceFile::from_reduced(ri))
}

pub fn arrangement_from_json(text: &str, instance: &Instance) -> Result<Arrangement, FormatError> {
    let file: ArrangementFile = serde_json::from_str(text)?;
    file.to_arrangement(instance)
}

pub fn arrangement_to_json(instance: &Instance, pi: &Arrangement) -> String {
    to_json(&ArrangementFile::from_arrangement(instance, pi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{forward_witness, reduce};

    const TWO_BY_TWO: &str = r#"{
        "agents": ["1", "2", "3", "4"],
        "seatGraph": {"grid": {"rows": 2, "cols": 2}},
        "utilities": [["1", "2", 1], ["1", "4", 2], ["1", "4", 3]]
    }"#;

    #[test]
    fn parses_instances_with_later_triples_winning() {
        let inst = instance_from_json(TWO_BY_TWO).unwrap();
        let p = inst.profile();
        assert_eq!(p.value(AgentId::new(0), AgentId::new(3)), 3);
        assert_eq!(p.value(AgentId::new(0), AgentId::new(1)), 1);
        assert_eq!(p.value(AgentId::new(1), AgentId::new(0)), 0);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_references() {
        let typo = TWO_BY_TWO.replace("utilities", "utility");
        assert!(matches!(instance_from_json(&typo), Err(FormatError::Json(_))));
        let extra = r#"{"agents": ["a"], "seatGraph": {"grid": {"rows": 1, "cols": 1, "depth": 1}}}"#;
        assert!(instance_from_json(extra).is_err());
        let unknown = TWO_BY_TWO.replace(r#"["1", "2", 1]"#, r#"["1", "9", 1]"#);
        assert!(matches!(instance_from_json(&unknown), Err(FormatError::Model(ModelError::UnknownAgent(_)))));
        let self_pref = TWO_BY_TWO.replace(r#"["1", "2", 1]"#, r#"["2", "2", 1]"#);
        assert!(instance_from_json(&self_pref).is_err());
        let size = TWO_BY_TWO.replace(r#""rows": 2"#, r#""rows": 3"#);
        assert!(matches!(instance_from_json(&size), Err(FormatError::Model(ModelError::SizeMismatch { .. }))));
    }

    #[test]
    fn explicit_graph_round_trip() {
        let text = r#"{"agents": ["p", "q", "r"], "seatGraph": {"vertices": 3, "edges": [[0, 1], [1, 2]]},
                       "defaults": {"p": -1}, "utilities": [["q", "r", 2]]}"#;
        let inst = instance_from_json(text).unwrap();
        assert_eq!(instance_from_json(&instance_to_json(&inst)).unwrap(), inst);
        let pi = Arrangement::from_occupants(vec![AgentId::new(2), AgentId::new(0), AgentId::new(1)]).unwrap();
        let json = arrangement_to_json(&inst, &pi);
        assert!(json.contains(r#""p": 1"#));
        assert_eq!(arrangement_from_json(&json, &inst).unwrap(), pi);
        let as_coord = r#"{"assignment": {"p": [0, 1], "q": 2, "r": 0}}"#;
        assert!(matches!(arrangement_from_json(as_coord, &inst), Err(FormatError::BadSeat { .. })));
    }

    #[test]
    fn arrangement_errors() {
        let inst = instance_from_json(TWO_BY_TWO).unwrap();
        let missing = r#"{"assignment": {"1": [0, 0], "2": [0, 1], "3": [1, 0]}}"#;
        assert!(matches!(arrangement_from_json(missing, &inst), Err(FormatError::Unseated(name)) if name == "4"));
        let twice = r#"{"assignment": {"1": [0, 0], "2": [0, 0], "3": [1, 0], "4": [1, 1]}}"#;
        assert!(matches!(arrangement_from_json(twice, &inst), Err(FormatError::SeatTaken(0))));
        let outside = r#"{"assignment": {"1": [0, 0], "2": [0, 1], "3": [1, 0], "4": [2, 1]}}"#;
        assert!(arrangement_from_json(outside, &inst).is_err());
        let stranger = r#"{"assignment": {"1": [0, 0], "2": [0, 1], "3": [1, 0], "5": [1, 1]}}"#;
        assert!(arrangement_from_json(stranger, &inst).is_err());
    }

    #[test]
    fn digraph_round_trip_and_validation() {
        let d = Digraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(digraph_from_json(&digraph_to_json(&d)).unwrap(), d);
        assert!(matches!(digraph_from_json(r#"{"n": 2, "arcs": [[1, 1]]}"#), Err(FormatError::Digraph(_))));
        assert!(digraph_from_json(r#"{"n": 2, "arcs": [[0, 1]]}"#).is_err());
        assert!(digraph_from_json(r#"{"n": 2, "arcs": [], "m": 0}"#).is_err());
    }

    #[test]
    fn reduced_instance_round_trip() {
        let d = Digraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        for theorem in [Theorem::Efa2, Theorem::esa_grid(4).unwrap(), Theorem::Esa3] {
            let ri = reduce(&d, theorem).unwrap();
            let text = reduced_to_json(&ri);
            let file = instance_file_from_json(&text).unwrap();
            let back = file.to_reduced().unwrap().unwrap();
            assert_eq!(back, ri);
            let pi = forward_witness(&ri, &[1, 2, 3]).unwrap();
            let json = arrangement_to_json(ri.instance(), &pi);
            assert_eq!(arrangement_from_json(&json, back.instance()).unwrap(), pi);
        }
    }

    #[test]
    fn plain_instances_have_no_reduction() {
        let file = instance_file_from_json(TWO_BY_TWO).unwrap();
        assert_eq!(file.to_reduced().unwrap(), None);
    }

    #[test]
    fn tampered_reduction_blocks_are_rejected() {
        let d = Digraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let ri = reduce(&d, Theorem::Efa2).unwrap();
        let mut file = InstanceFile::from_reduced(&ri);
        file.reduction.as_mut().unwrap().rows = 3;
        assert!(file.to_reduced().is_err());
        let mut file = InstanceFile::from_reduced(&ri);
        file.reduction.as_mut().unwrap().roles.get_mut("x").unwrap().swap(0, 1);
        // still a partition, so accepted: roles are data, not derived from names
        assert!(file.to_reduced().is_ok());
        let mut file = InstanceFile::from_reduced(&ri);
        file.reduction.as_mut().unwrap().roles.remove("c");
        assert!(file.to_reduced().is_err());
        let mut file = InstanceFile::from_reduced(&ri);
        file.reduction.as_mut().unwrap().theorem = "esa2".into();
        assert!(file.to_reduced().is_err());
    }
}
