//! Corner windows and the arrival-time recurrence.
//!
//! A corner window is a rectangle of the torus anchored at the `k`-colored
//! first row and column, closed off on the other two sides by a static row
//! and column of `INF`. Under the window hypotheses every cell reaches `k`,
//! and the round at which cell `(i, j)` gets there is
//!
//! ```text
//! M(i, j) = max(M(i, j-1), M(i-1, j)) + k - r(i, j),   M(0, .) = M(., 0) = 0
//! ```
//!
//! in the north-west orientation. The other three corners are handled by
//! reflecting the torus onto the north-west case (`i -> (m - i) mod m` and/or
//! `j -> (n - j) mod n`) and reflecting the result back.

use std::fmt;
use std::str::FromStr;

use crate::color::Color;
use crate::engine::{default_budget, run, Rule};
use crate::error::{Error, Result};
use crate::grid::{Pos, TorusGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Corner {
    Nw,
    Ne,
    Sw,
    Se,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::Nw, Corner::Ne, Corner::Sw, Corner::Se];

    fn flips_rows(self) -> bool {
        matches!(self, Corner::Sw | Corner::Se)
    }

    fn flips_cols(self) -> bool {
        matches!(self, Corner::Ne | Corner::Se)
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Corner::Nw => "nw",
            Corner::Ne => "ne",
            Corner::Sw => "sw",
            Corner::Se => "se",
        })
    }
}

impl FromStr for Corner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Corner::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Window(format!("unknown corner {s:?}")))
    }
}

/// A corner window of `grid` split at row `i_star` and column `j_star`.
#[derive(Debug, Clone, Copy)]
pub struct CornerWindow<'a> {
    grid: &'a TorusGrid,
    corner: Corner,
    i_star: usize,
    j_star: usize,
}

impl<'a> CornerWindow<'a> {
    pub fn new(grid: &'a TorusGrid, corner: Corner, i_star: usize, j_star: usize) -> Result<Self> {
        let (m, n) = (grid.rows(), grid.cols());
        if !(0 < i_star && i_star < m) || !(0 < j_star && j_star < n) {
            return Err(Error::Window(format!(
                "{corner}({i_star},{j_star}) needs 0 < i* < {m} and 0 < j* < {n}"
            )));
        }
        Ok(CornerWindow {
            grid,
            corner,
            i_star,
            j_star,
        })
    }

    pub fn grid(&self) -> &TorusGrid {
        self.grid
    }

    pub fn corner(&self) -> Corner {
        self.corner
    }

    pub fn i_star(&self) -> usize {
        self.i_star
    }

    pub fn j_star(&self) -> usize {
        self.j_star
    }

    /// Rows and columns of the window in the north-west frame, border
    /// included, `INF` row and column excluded.
    pub fn local_dims(&self) -> (usize, usize) {
        let (m, n) = (self.grid.rows(), self.grid.cols());
        let rows = if self.corner.flips_rows() {
            m - self.i_star
        } else {
            self.i_star
        };
        let cols = if self.corner.flips_cols() {
            n - self.j_star
        } else {
            self.j_star
        };
        (rows, cols)
    }

    /// Torus position of local north-west-frame cell `(i, j)`.
    pub fn to_torus(&self, (i, j): Pos) -> Pos {
        let (m, n) = (self.grid.rows(), self.grid.cols());
        let row = if self.corner.flips_rows() {
            (m - i) % m
        } else {
            i
        };
        let col = if self.corner.flips_cols() {
            (n - j) % n
        } else {
            j
        };
        (row, col)
    }

    fn local(&self, p: Pos) -> Color {
        self.grid.get(self.to_torus(p))
    }

    /// Torus row indices in display order (top to bottom).
    fn row_index(&self) -> Vec<usize> {
        let (rows, _) = self.local_dims();
        let mut idx: Vec<usize> = (0..rows).map(|i| self.to_torus((i, 0)).0).collect();
        if self.corner.flips_rows() {
            idx.reverse();
        }
        idx
    }

    fn col_index(&self) -> Vec<usize> {
        let (_, cols) = self.local_dims();
        let mut idx: Vec<usize> = (0..cols).map(|j| self.to_torus((0, j)).1).collect();
        if self.corner.flips_cols() {
            idx.reverse();
        }
        idx
    }

    /// Reorders a local-frame table into display orientation.
    fn orient<T: Clone>(&self, local: Vec<Vec<T>>) -> Vec<Vec<T>> {
        let mut rows = local;
        if self.corner.flips_rows() {
            rows.reverse();
        }
        if self.corner.flips_cols() {
            for r in &mut rows {
                r.reverse();
            }
        }
        rows
    }

    /// Standalone window: the window cells plus the static `INF` row and
    /// column, padded with `INF` to the minimum torus side.
    pub fn standalone_grid(&self) -> TorusGrid {
        let (rows, cols) = self.local_dims();
        let (tr, tc) = ((rows + 1).max(3), (cols + 1).max(3));
        TorusGrid::from_fn(tr, tc, self.grid.palette(), |(i, j)| {
            if i < rows && j < cols {
                self.local((i, j))
            } else {
                Color::Inf
            }
        })
        .expect("window cells come from a valid grid")
    }
}

/// The four windows covering the outer rows of a row/column construction:
/// `NW(c-1, d)`, `NE(c-1, d-1)`, `SW(c+1, d)`, `SE(c+1, d-1)` with
/// `c = ceil(m/2)`, `d = ceil(n/2)`.
pub fn decomposition_windows(g: &TorusGrid) -> Result<[CornerWindow<'_>; 4]> {
    let c = g.rows().div_ceil(2);
    let d = g.cols().div_ceil(2);
    Ok([
        CornerWindow::new(g, Corner::Nw, c - 1, d)?,
        CornerWindow::new(g, Corner::Ne, c - 1, d - 1)?,
        CornerWindow::new(g, Corner::Sw, c + 1, d)?,
        CornerWindow::new(g, Corner::Se, c + 1, d - 1)?,
    ])
}

/// A violated window hypothesis, located by torus position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowCondition {
    /// A window cell is `INF`.
    Finite(Pos),
    /// A cell of the `k` border row or column is not `k`.
    Border(Pos),
    /// Row colors must not increase moving away from the `k` column.
    RowChain(Pos),
    /// Column colors must not increase moving away from the `k` row.
    ColumnChain(Pos),
    /// Along an anti-diagonal the cell nearer the `k` row must be strictly
    /// above its neighbor nearer the `k` column.
    AntiDiagonal(Pos),
}

impl fmt::Display for WindowCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, (i, j)) = match *self {
            WindowCondition::Finite(p) => ("finite", p),
            WindowCondition::Border(p) => ("border", p),
            WindowCondition::RowChain(p) => ("row-chain", p),
            WindowCondition::ColumnChain(p) => ("column-chain", p),
            WindowCondition::AntiDiagonal(p) => ("anti-diagonal", p),
        };
        write!(f, "{name}({i},{j})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HypothesisCheck {
    pub failures: Vec<WindowCondition>,
}

impl HypothesisCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates the window hypotheses in the north-west frame.
///
/// The anti-diagonal inequalities `r(i, j) > r(i+1, j-1)` are required for
/// `2 <= i + j - 1 < i* + j* - 3`; the `i + j - 1 = 2` comparison is the one
/// that lets cell `(1, 1)` move first.
pub fn check_window_hypotheses(w: &CornerWindow<'_>) -> HypothesisCheck {
    let (rows, cols) = w.local_dims();
    let k = w.grid.palette().top();
    let mut failures = Vec::new();
    let at = |i: usize, j: usize| w.local((i, j));

    for i in 0..rows {
        for j in 0..cols {
            if !at(i, j).is_finite() {
                failures.push(WindowCondition::Finite(w.to_torus((i, j))));
            } else if (i == 0 || j == 0) && at(i, j) != k {
                failures.push(WindowCondition::Border(w.to_torus((i, j))));
            }
        }
    }
    for i in 1..rows {
        for j in 1..cols.saturating_sub(1) {
            if at(i, j) < at(i, j + 1) {
                failures.push(WindowCondition::RowChain(w.to_torus((i, j + 1))));
            }
        }
    }
    for j in 1..cols {
        for i in 1..rows.saturating_sub(1) {
            if at(i, j) < at(i + 1, j) {
                failures.push(WindowCondition::ColumnChain(w.to_torus((i + 1, j))));
            }
        }
    }
    let upper = (rows + cols).saturating_sub(3);
    for i in 1..rows.saturating_sub(1) {
        for j in 2..cols {
            let l = i + j - 1;
            if (2..upper).contains(&l) && at(i, j) <= at(i + 1, j - 1) {
                failures.push(WindowCondition::AntiDiagonal(w.to_torus((i, j))));
            }
        }
    }
    HypothesisCheck { failures }
}

/// Predicted (or simulated) rounds at which window cells first hold `k`,
/// laid out as the cells sit on the torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MTable<T = u32> {
    pub corner: Corner,
    /// Torus row of each table row.
    pub row_index: Vec<usize>,
    /// Torus column of each table column.
    pub col_index: Vec<usize>,
    pub values: Vec<Vec<T>>,
}

impl<T: Copy> MTable<T> {
    pub fn get(&self, p: Pos) -> Option<T> {
        let r = self.row_index.iter().position(|&i| i == p.0)?;
        let c = self.col_index.iter().position(|&j| j == p.1)?;
        Some(self.values[r][c])
    }
}

impl<T: fmt::Display> MTable<T> {
    /// Matrix in the grid file layout.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.values {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Arrival rounds from the recurrence. Fails when the hypotheses do not hold.
pub fn m_table(w: &CornerWindow<'_>) -> Result<MTable> {
    let check = check_window_hypotheses(w);
    if !check.ok() {
        return Err(Error::Hypotheses(
            check.failures.iter().map(ToString::to_string).collect(),
        ));
    }
    let (rows, cols) = w.local_dims();
    let k = u32::from(w.grid.k());
    let mut local = vec![vec![0u32; cols]; rows];
    for i in 1..rows {
        for j in 1..cols {
            let r = u32::from(w.local((i, j)).value().expect("checked finite"));
            local[i][j] = local[i][j - 1].max(local[i - 1][j]) + k - r;
        }
    }
    Ok(MTable {
        corner: w.corner,
        row_index: w.row_index(),
        col_index: w.col_index(),
        values: w.orient(local),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowPrediction {
    pub matches: bool,
    pub predicted: MTable,
    /// First round each cell holds `k` when the standalone window is
    /// simulated; `None` if it never does.
    pub simulated: MTable<Option<u32>>,
}

/// Simulates the standalone window under the stubborn rule and compares
/// each cell's first arrival at `k` with [`m_table`].
pub fn verify_window_prediction(w: &CornerWindow<'_>) -> Result<WindowPrediction> {
    let predicted = m_table(w)?;
    let standalone = w.standalone_grid();
    let budget = default_budget(&standalone);
    let trace = run(&standalone, Rule::StubSm, budget)?;
    if trace.exhausted() {
        return Err(Error::BudgetExhausted(budget));
    }
    let (rows, cols) = w.local_dims();
    let top = w.grid.palette().top();
    let mut local = vec![vec![None; cols]; rows];
    for (t, g) in trace.rounds().iter().enumerate() {
        for (i, row) in local.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                if slot.is_none() && g.get((i, j)) == top {
                    *slot = Some(t as u32);
                }
            }
        }
    }
    let simulated = MTable {
        corner: w.corner,
        row_index: w.row_index(),
        col_index: w.col_index(),
        values: w.orient(local),
    };
    let matches = predicted
        .values
        .iter()
        .zip(&simulated.values)
        .all(|(p, s)| p.iter().zip(s).all(|(&p, &s)| s == Some(p)));
    Ok(WindowPrediction {
        matches,
        predicted,
        simulated,
    })
}
