//! Multicolored stubborn majority dynamics on toroidal meshes.
//!
//! A cell of color `x` moves up one color when two of its four neighbors
//! share a color above `x` and the other two either differ or are equal and
//! also above `x`. A coloring is a dynamo when this drives the whole torus
//! to the top color `k`. The crate simulates the rule (and the two classic
//! bi-color majority rules), finds blocking structures that rule dynamos
//! out, evaluates size bounds, builds known dynamo families, predicts
//! convergence times in corner windows, and brute-forces small tori.

pub mod blocks;
pub mod bounds;
pub mod color;
pub mod engine;
pub mod error;
pub mod grid;
pub mod monitor;
pub mod search;
pub mod window;

pub use blocks::{
    find_h_blocks, find_non_k_blocks, necessary_condition, phi, window_constraint_violations,
    BlockReason, BlockReport, NecessaryCondition,
};
pub use bounds::{
    check_theorem_conditions, lower_bound_size, propnew_bound, propnew_check, propnew_grid,
    row_column_grid, staircase_dynamo, strong_tiling, upper_bound_size, ConditionCheck,
    ProfileCondition, PropnewCheck, RowProfile,
};
pub use color::{Color, Palette};
pub use engine::{
    default_budget, is_monotone_dynamo, run, step, stub_condition, verdict, Outcome, Rule, Trace,
    Verdict,
};
pub use error::{Error, Result};
pub use grid::{bounding_rect, CellSet, Pos, Rect, TorusGrid};
pub use monitor::{monitor_lemmas, monitor_report, Lemma, MonitorReport, Violation};
pub use search::{
    bound_consistency, enumerate, min_dynamo, ConsistencyReport, Counterexample, SearchFilter,
    SearchResult, SearchSpec, DEFAULT_MAX_STATES,
};
pub use window::{
    check_window_hypotheses, decomposition_windows, m_table, verify_window_prediction, Corner,
    CornerWindow, HypothesisCheck, MTable, WindowCondition, WindowPrediction,
};
