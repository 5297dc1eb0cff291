//! Blocking structures: h-blocks, non-k-blocks, the 2x2 window constraint
//! and the projection onto the bi-colored setting.
//!
//! Maximal blocks are found by threshold peeling (a degree-core
//! computation restricted to the candidate cells) followed by splitting the
//! survivors into connected components. Peeling is confluent: the survivor
//! set is the unique largest subset in which every cell keeps at least
//! `threshold` neighbors, whatever the removal order. Frames and windows
//! are ordinary h-blocks and need no special handling.

use std::collections::VecDeque;
use std::fmt;

use crate::color::{Color, Palette};
use crate::error::{Error, Result};
use crate::grid::{CellSet, Pos, Rect, TorusGrid};

/// Minimum same-color neighbors inside an h-block.
pub const H_BLOCK_DEGREE: usize = 2;
/// Minimum non-k neighbors inside a non-k-block.
pub const NON_K_BLOCK_DEGREE: usize = 3;

/// Survivors of repeatedly deleting member cells with fewer than
/// `threshold` member neighbors.
pub fn peel(g: &TorusGrid, member: impl Fn(Color) -> bool, threshold: usize) -> Vec<bool> {
    let cells = g.cells();
    let mut alive: Vec<bool> = cells.iter().map(|&c| member(c)).collect();
    let mut degree: Vec<usize> = (0..cells.len())
        .map(|idx| {
            g.neighbor_indices(idx)
                .iter()
                .filter(|&&q| alive[q])
                .count()
        })
        .collect();
    let mut queue: VecDeque<usize> = (0..cells.len())
        .filter(|&idx| alive[idx] && degree[idx] < threshold)
        .collect();
    while let Some(idx) = queue.pop_front() {
        if !alive[idx] {
            continue;
        }
        alive[idx] = false;
        for q in g.neighbor_indices(idx) {
            if alive[q] {
                degree[q] -= 1;
                if degree[q] < threshold {
                    queue.push_back(q);
                }
            }
        }
    }
    alive
}

/// Connected components of a cell mask, ordered by their first cell in
/// row-major order.
pub fn components(g: &TorusGrid, mask: &[bool]) -> Vec<CellSet> {
    let mut seen = vec![false; mask.len()];
    let mut out = Vec::new();
    for start in 0..mask.len() {
        if !mask[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut members: Vec<Pos> = Vec::new();
        while let Some(idx) = queue.pop_front() {
            members.push(g.pos(idx));
            for q in g.neighbor_indices(idx) {
                if mask[q] && !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
        out.push(CellSet::from_iter_unchecked(g.rows(), g.cols(), members));
    }
    out
}

/// Maximal h-blocks: connected sets of color `h` in which every cell has at
/// least two neighbors in the set. Such cells never recolor.
pub fn find_h_blocks(g: &TorusGrid, h: u16) -> Result<Vec<CellSet>> {
    if !(1..=g.k()).contains(&h) {
        return Err(Error::ColorOutOfRange {
            value: u64::from(h),
            k: g.k(),
            row: 0,
            col: 0,
        });
    }
    let color = Color::Finite(h);
    let alive = peel(g, |c| c == color, H_BLOCK_DEGREE);
    Ok(components(g, &alive))
}

/// Maximal non-k-blocks: connected sets of finite non-`k` cells in which
/// every cell has at least three neighbors in the set. Such cells never
/// reach `k`.
pub fn find_non_k_blocks(g: &TorusGrid) -> Vec<CellSet> {
    let top = g.palette().top();
    let alive = peel(g, |c| c.is_finite() && c != top, NON_K_BLOCK_DEGREE);
    components(g, &alive)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HBlock {
    pub color: u16,
    pub cells: CellSet,
    pub rect: Rect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonKBlock {
    pub cells: CellSet,
    pub rect: Rect,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockReport {
    pub h_blocks: Vec<HBlock>,
    pub non_k_blocks: Vec<NonKBlock>,
}

impl BlockReport {
    /// h-blocks for each color in `colors`, plus all non-k-blocks.
    pub fn scan(g: &TorusGrid, colors: impl IntoIterator<Item = u16>) -> Result<Self> {
        let mut h_blocks = Vec::new();
        for h in colors {
            for cells in find_h_blocks(g, h)? {
                let rect = cells.bounding_rect();
                h_blocks.push(HBlock {
                    color: h,
                    cells,
                    rect,
                });
            }
        }
        let non_k_blocks = find_non_k_blocks(g)
            .into_iter()
            .map(|cells| NonKBlock {
                rect: cells.bounding_rect(),
                cells,
            })
            .collect();
        Ok(BlockReport {
            h_blocks,
            non_k_blocks,
        })
    }

    /// Blocks of every color below `k`, plus non-k-blocks.
    pub fn blocking(g: &TorusGrid) -> Result<Self> {
        Self::scan(g, 1..g.k())
    }

    pub fn is_empty(&self) -> bool {
        self.h_blocks.is_empty() && self.non_k_blocks.is_empty()
    }

    /// One line per block:
    /// `h=<color> size=<s> rect=<r>x<c> cells=(i,j);...`, with `h=nonk` for
    /// non-k-blocks.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.h_blocks {
            out.push_str(&block_line(&b.color.to_string(), &b.cells, b.rect));
        }
        for b in &self.non_k_blocks {
            out.push_str(&block_line("nonk", &b.cells, b.rect));
        }
        out
    }
}

fn block_line(tag: &str, cells: &CellSet, rect: Rect) -> String {
    format!(
        "h={tag} size={} rect={rect} cells={}\n",
        cells.len(),
        cells.to_text()
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockReason {
    HBlock { color: u16, size: usize },
    NonKBlock { size: usize },
}

impl fmt::Display for BlockReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockReason::HBlock { color, size } => write!(f, "{color}-block of size {size}"),
            BlockReason::NonKBlock { size } => write!(f, "non-k-block of size {size}"),
        }
    }
}

/// Result of the necessary dynamo condition. `Ok` is inconclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NecessaryCondition {
    Ok,
    Blocked(BlockReason),
}

impl NecessaryCondition {
    pub fn is_blocked(&self) -> bool {
        matches!(self, NecessaryCondition::Blocked(_))
    }
}

/// A grid containing an h-block with `h < k` or a non-k-block cannot be a
/// dynamo.
pub fn necessary_condition(g: &TorusGrid) -> NecessaryCondition {
    for h in 1..g.k() {
        let color = Color::Finite(h);
        let alive = peel(g, |c| c == color, H_BLOCK_DEGREE);
        let size = alive.iter().filter(|&&a| a).count();
        if size > 0 {
            let first = components(g, &alive).swap_remove(0);
            return NecessaryCondition::Blocked(BlockReason::HBlock {
                color: h,
                size: first.len(),
            });
        }
    }
    if let Some(first) = find_non_k_blocks(g).into_iter().next() {
        return NecessaryCondition::Blocked(BlockReason::NonKBlock { size: first.len() });
    }
    NecessaryCondition::Ok
}

/// Top-left corners of 2x2 wraparound windows whose main diagonal or
/// anti-diagonal holds two equal colors other than `k`.
pub fn window_constraint_violations(g: &TorusGrid) -> Vec<Pos> {
    let (m, n) = (g.rows(), g.cols());
    let top = g.palette().top();
    let clash = |a: Color, b: Color| a.matches(b) && a != top;
    g.positions()
        .filter(|&(i, j)| {
            let (i1, j1) = ((i + 1) % m, (j + 1) % n);
            clash(g.get((i, j)), g.get((i1, j1))) || clash(g.get((i, j1)), g.get((i1, j)))
        })
        .collect()
}

/// Projection onto two colors: `k` becomes 2 (black), everything else 1.
pub fn phi(g: &TorusGrid) -> Result<TorusGrid> {
    if g.has_inf() {
        return Err(Error::InfPresent);
    }
    let top = g.palette().top();
    g.map(Palette::bicolor(), |_, c| {
        if c == top {
            Color::Finite(2)
        } else {
            Color::Finite(1)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn positions(s: &CellSet) -> Vec<Pos> {
        s.iter().collect()
    }

    #[test]
    fn full_row_is_an_h_block() {
        let g = TorusGrid::from_rows(3, &[[2, 2, 2, 2], [1, 3, 1, 3], [3, 1, 3, 1]]).unwrap();
        let blocks = find_h_blocks(&g, 2).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(positions(&blocks[0]), vec![(0, 0), (0, 1), (0, 2), (0, 3)]);
        assert_eq!(blocks[0].bounding_rect(), Rect::new(1, 4));
    }

    #[test]
    fn missing_color_gives_no_blocks() {
        let g = TorusGrid::from_rows(3, &[[1, 2, 1], [2, 1, 2], [1, 2, 1]]).unwrap();
        assert!(find_h_blocks(&g, 3).unwrap().is_empty());
        assert!(find_h_blocks(&g, 4).is_err());
        assert!(find_h_blocks(&g, 0).is_err());
    }

    #[test]
    fn two_white_rows_form_a_non_k_block() {
        let g = TorusGrid::from_rows(
            2,
            &[
                [2, 2, 2, 2, 2],
                [1, 1, 1, 1, 1],
                [1, 1, 1, 1, 1],
                [2, 2, 2, 2, 2],
            ],
        )
        .unwrap();
        let blocks = find_non_k_blocks(&g);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].len(), 10);
        assert_eq!(blocks[0].bounding_rect(), Rect::new(2, 5));
    }

    #[test]
    fn all_top_has_no_non_k_block() {
        let g = TorusGrid::from_rows(3, &[[3; 4]; 4]).unwrap();
        assert!(find_non_k_blocks(&g).is_empty());
        assert_eq!(necessary_condition(&g), NecessaryCondition::Ok);
        assert!(window_constraint_violations(&g).is_empty());
    }

    #[test]
    fn small_window_blocks() {
        let g = TorusGrid::from_rows(3, &[[1, 1, 3, 2], [1, 1, 2, 3], [3, 2, 3, 2], [2, 3, 2, 3]])
            .unwrap();
        assert_eq!(
            necessary_condition(&g),
            NecessaryCondition::Blocked(BlockReason::HBlock { color: 1, size: 4 })
        );
    }

    #[test]
    fn diagonal_clash_is_reported() {
        let mut rows = [[1u16, 2, 4, 5, 2], [4, 1, 5, 2, 4], [5, 4, 2, 1, 5]];
        rows[0][0] = 3;
        rows[1][1] = 3;
        let g = TorusGrid::from_rows(5, &rows).unwrap();
        assert!(window_constraint_violations(&g).contains(&(0, 0)));
    }

    #[test]
    fn phi_projects_top_to_black() {
        let g = TorusGrid::parse("6 4 2 4\n4 3 5 1\n6 5 2 6\n1 4 4 3", 6).unwrap();
        let b = phi(&g).unwrap();
        assert_eq!(b.k(), 2);
        assert_eq!(
            positions(&b.cells_of(Color::Finite(2))),
            vec![(0, 0), (2, 0), (2, 3)]
        );
        let inf = TorusGrid::parse("1 2 INF\n1 1 1\n2 2 2", 2).unwrap();
        assert_eq!(phi(&inf), Err(Error::InfPresent));
    }

    #[test]
    fn report_lines() {
        let g = TorusGrid::from_rows(3, &[[2, 2, 2, 2], [1, 3, 1, 3], [3, 1, 3, 1]]).unwrap();
        let report = BlockReport::scan(&g, [2]).unwrap();
        assert_eq!(
            report.to_text(),
            "h=2 size=4 rect=1x4 cells=(0,0);(0,1);(0,2);(0,3)\n"
        );
    }
}
