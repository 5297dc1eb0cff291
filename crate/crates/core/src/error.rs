use thiserror::Error;

use crate::grid::Pos;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a palette needs at least two colors, got k={0}")]
    Palette(u16),
    #[error("grid is empty")]
    EmptyGrid,
    #[error("grid must be at least 3x3, got {rows}x{cols}")]
    TooSmall { rows: usize, cols: usize },
    #[error("row {row} has {found} cells, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid token {token:?} at row {row}, column {col}")]
    BadToken {
        token: String,
        row: usize,
        col: usize,
    },
    #[error("color {value} at row {row}, column {col} is outside 1..={k}")]
    ColorOutOfRange {
        value: u64,
        k: u16,
        row: usize,
        col: usize,
    },
    #[error("cell count {found} does not match a {rows}x{cols} grid")]
    CellCount {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("position {pos:?} is outside the {rows}x{cols} grid")]
    OutOfRange { pos: Pos, rows: usize, cols: usize },
    #[error("rule {rule} cannot run on this grid: {reason}")]
    IncompatibleRule { rule: &'static str, reason: String },
    #[error("grid contains INF cells")]
    InfPresent,
    #[error("unsupported dimensions: {0}")]
    Dimensions(String),
    #[error("invalid row profile: {0}")]
    Profile(String),
    #[error("invalid corner window: {0}")]
    Window(String),
    #[error("window hypotheses violated: {}", .0.join(", "))]
    Hypotheses(Vec<String>),
    #[error("round budget must be at least 1")]
    ZeroBudget,
    #[error("simulation did not reach a fixed point within {0} rounds")]
    BudgetExhausted(usize),
    #[error("search space of {states} colorings exceeds the budget of {budget}")]
    SearchBudget { states: String, budget: u64 },
    #[error("malformed trace: {0}")]
    TraceFormat(String),
}
