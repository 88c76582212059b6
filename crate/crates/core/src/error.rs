use thiserror::Error;

/// Input errors raised by the seat-arrangement model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate agent name `{0}`")]
    DuplicateAgent(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("agent index {0} is out of range")]
    AgentOutOfRange(usize),
    #[error("an agent has no preference toward itself (agent `{0}`)")]
    SelfPreference(String),
    #[error("grid dimensions must be positive, got {rows}x{cols}")]
    EmptyGrid { rows: usize, cols: usize },
    #[error("seat {seat} is out of range for a graph with {seats} seats")]
    SeatOutOfRange { seat: usize, seats: usize },
    #[error("seat ({row}, {col}) is outside the {rows}x{cols} grid")]
    CoordOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("self-loop at seat {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("{agents} agents cannot be seated on {seats} seats")]
    SizeMismatch { agents: usize, seats: usize },
    #[error("arrangement is not a bijection: {0}")]
    NotBijection(String),
    #[error("envy toward oneself is undefined (agent `{0}`)")]
    SelfEnvy(String),
}
