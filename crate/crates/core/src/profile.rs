//! Agents and their cardinal preferences over one another.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::ModelError;

/// Integer utility value `p_i(j)`.
pub type Utility = i64;

/// Dense index of an agent within its instance, `0..n`.
///
/// The stable string name lives in the owning [`PreferenceProfile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentId(usize);

impl AgentId {
    pub const fn new(index: usize) -> Self {
        AgentId(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Preference profile: one utility function per agent over all other agents.
///
/// Stored sparsely as a per-agent default plus explicit overrides, which is how
/// gadget tables are naturally written ("value v for these agents, d for the
/// rest"). A dense matrix is derived once at build time for fast lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    names: Vec<String>,
    by_name: HashMap<String, AgentId>,
    defaults: Vec<Utility>,
    overrides: BTreeMap<(AgentId, AgentId), Utility>,
    matrix: Vec<Utility>,
}

impl PreferenceProfile {
    /// Builds a profile from a dense matrix; diagonal entries are ignored.
    pub fn from_matrix<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        values: &[Vec<Utility>],
    ) -> Result<Self, ModelError> {
        let mut builder = ProfileBuilder::new();
        let ids = names
            .into_iter()
            .map(|name| builder.add_agent(name))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != ids.len() || values.iter().any(|row| row.len() != ids.len()) {
            return Err(ModelError::SizeMismatch {
                agents: ids.len(),
                seats: values.len(),
            });
        }
        for (&i, row) in ids.iter().zip(values) {
            for (&j, &v) in ids.iter().zip(row) {
                if i != j && v != 0 {
                    builder.set(i, j, v)?;
                }
            }
        }
        Ok(builder.build())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn agents(&self) -> impl ExactSizeIterator<Item = AgentId> {
        (0..self.names.len()).map(AgentId)
    }

    pub fn name(&self, agent: AgentId) -> &str {
        &self.names[agent.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn agent(&self, name: &str) -> Option<AgentId> {
        self.by_name.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<AgentId, ModelError> {
        self.agent(name)
            .ok_or_else(|| ModelError::UnknownAgent(name.to_string()))
    }

    pub fn check(&self, agent: AgentId) -> Result<AgentId, ModelError> {
        if agent.0 < self.names.len() {
            Ok(agent)
        } else {
            Err(ModelError::AgentOutOfRange(agent.0))
        }
    }

    /// `p_i(j)`. The diagonal is never consulted by utilities and reads as 0.
    #[inline]
    pub fn value(&self, i: AgentId, j: AgentId) -> Utility {
        self.matrix[i.0 * self.names.len() + j.0]
    }

    pub fn default_of(&self, agent: AgentId) -> Utility {
        self.defaults[agent.0]
    }

    pub fn overrides(&self) -> impl Iterator<Item = (AgentId, AgentId, Utility)> + '_ {
        self.overrides.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    /// Dense row-major matrix, `n * n` entries with a zero diagonal.
    pub fn matrix(&self) -> &[Utility] {
        &self.matrix
    }

    fn off_diagonal(&self) -> impl Iterator<Item = Utility> + '_ {
        let n = self.names.len();
        self.matrix
            .iter()
            .enumerate()
            .filter(move |(k, _)| k / n != k % n)
            .map(|(_, &v)| v)
    }

    pub fn is_binary(&self) -> bool {
        self.off_diagonal().all(|v| v == 0 || v == 1)
    }

    /// Largest off-diagonal value, `None` for fewer than two agents.
    pub fn max_value(&self) -> Option<Utility> {
        self.off_diagonal().max()
    }

    pub fn min_value(&self) -> Option<Utility> {
        self.off_diagonal().min()
    }
}

/// Incremental constructor for [`PreferenceProfile`].
#[derive(Debug, Default, Clone)]
pub struct ProfileBuilder {
    names: Vec<String>,
    by_name: HashMap<String, AgentId>,
    defaults: Vec<Utility>,
    overrides: BTreeMap<(AgentId, AgentId), Utility>,
}

impl ProfileBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_agent(&mut self, name: impl Into<String>) -> Result<AgentId, ModelError> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(ModelError::DuplicateAgent(name));
        }
        let id = AgentId(self.names.len());
        self.by_name.insert(name.clone(), id);
        self.names.push(name);
        self.defaults.push(0);
        Ok(id)
    }

    pub fn agent(&self, name: &str) -> Option<AgentId> {
        self.by_name.get(name).copied()
    }

    fn check(&self, agent: AgentId) -> Result<(), ModelError> {
        if agent.0 < self.names.len() {
            Ok(())
        } else {
            Err(ModelError::AgentOutOfRange(agent.0))
        }
    }

    pub fn set_default(&mut self, agent: AgentId, value: Utility) -> Result<(), ModelError> {
        self.check(agent)?;
        self.defaults[agent.0] = value;
        Ok(())
    }

    /// Sets `p_i(j)`; a later call for the same pair wins.
    pub fn set(&mut self, i: AgentId, j: AgentId, value: Utility) -> Result<(), ModelError> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(ModelError::SelfPreference(self.names[i.0].clone()));
        }
        self.overrides.insert((i, j), value);
        Ok(())
    }

    pub fn build(self) -> PreferenceProfile {
        let n = self.names.len();
        let mut matrix = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    matrix[i * n + j] = self.defaults[i];
                }
            }
        }
        for (&(i, j), &v) in &self.overrides {
            matrix[i.0 * n + j.0] = v;
        }
        PreferenceProfile {
            names: self.names,
            by_name: self.by_name,
            defaults: self.defaults,
            overrides: self.overrides,
            matrix,
        }
    }
}
