//! Torus geometry, the grid file format and cell-set utilities.

use std::collections::BTreeSet;
use std::fmt;

use crate::color::{Color, Palette};
use crate::error::{Error, Result};

/// `(row, col)`.
pub type Pos = (usize, usize);

/// Smallest grid side for which the four torus neighbors are distinct cells.
pub const MIN_SIDE: usize = 3;

/// An `m x n` toroidal mesh of colors with wraparound 4-neighborhoods.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusGrid {
    rows: usize,
    cols: usize,
    palette: Palette,
    cells: Vec<Color>,
}

impl TorusGrid {
    /// Builds a grid from row-major cells.
    pub fn new(rows: usize, cols: usize, palette: Palette, cells: Vec<Color>) -> Result<Self> {
        if rows < MIN_SIDE || cols < MIN_SIDE {
            return Err(Error::TooSmall { rows, cols });
        }
        if cells.len() != rows * cols {
            return Err(Error::CellCount {
                rows,
                cols,
                found: cells.len(),
            });
        }
        for (idx, &c) in cells.iter().enumerate() {
            if let Color::Finite(v) = c {
                if !palette.admits(c) {
                    return Err(Error::ColorOutOfRange {
                        value: u64::from(v),
                        k: palette.k(),
                        row: idx / cols,
                        col: idx % cols,
                    });
                }
            }
        }
        Ok(TorusGrid {
            rows,
            cols,
            palette,
            cells,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        palette: Palette,
        mut f: impl FnMut(Pos) -> Color,
    ) -> Result<Self> {
        let cells = (0..rows * cols)
            .map(|idx| f((idx / cols, idx % cols)))
            .collect();
        Self::new(rows, cols, palette, cells)
    }

    pub fn uniform(rows: usize, cols: usize, palette: Palette, color: Color) -> Result<Self> {
        Self::new(rows, cols, palette, vec![color; rows * cols])
    }

    /// Convenience constructor from finite color rows.
    pub fn from_rows<R: AsRef<[u16]>>(k: u16, rows: &[R]) -> Result<Self> {
        let palette = Palette::new(k)?;
        let m = rows.len();
        if m == 0 {
            return Err(Error::EmptyGrid);
        }
        let n = rows[0].as_ref().len();
        let mut cells = Vec::with_capacity(m * n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::Ragged {
                    row: i,
                    expected: n,
                    found: r.len(),
                });
            }
            cells.extend(r.iter().map(|&v| Color::Finite(v)));
        }
        Self::new(m, n, palette, cells)
    }

    /// Parses the whitespace-separated grid format. An optional first line
    /// starting with `#` is a comment; blank lines are ignored.
    pub fn parse(text: &str, k: u16) -> Result<Self> {
        let palette = Palette::new(k)?;
        let mut lines = text.lines().map(str::trim).peekable();
        while lines.peek().is_some_and(|l| l.is_empty()) {
            lines.next();
        }
        if lines.peek().is_some_and(|l| l.starts_with('#')) {
            lines.next();
        }

        let mut cols = None;
        let mut rows = 0;
        let mut cells = Vec::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let before = cells.len();
            for (j, tok) in line.split_whitespace().enumerate() {
                cells.push(parse_token(tok, palette, rows, j)?);
            }
            let found = cells.len() - before;
            match cols {
                None => cols = Some(found),
                Some(expected) if expected != found => {
                    return Err(Error::Ragged {
                        row: rows,
                        expected,
                        found,
                    })
                }
                _ => {}
            }
            rows += 1;
        }
        let cols = cols.ok_or(Error::EmptyGrid)?;
        Self::new(rows, cols, palette, cells)
    }

    /// Inverse of [`TorusGrid::parse`]: one line per row, single spaces,
    /// trailing newline.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn palette(&self) -> Palette {
        self.palette
    }

    #[inline]
    pub fn k(&self) -> u16 {
        self.palette.k()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn cells(&self) -> &[Color] {
        &self.cells
    }

    #[inline]
    pub fn index(&self, (i, j): Pos) -> usize {
        i * self.cols + j
    }

    #[inline]
    pub fn pos(&self, idx: usize) -> Pos {
        (idx / self.cols, idx % self.cols)
    }

    pub fn contains(&self, (i, j): Pos) -> bool {
        i < self.rows && j < self.cols
    }

    /// Panics on out-of-range positions; see [`TorusGrid::try_get`].
    #[inline]
    pub fn get(&self, p: Pos) -> Color {
        assert!(self.contains(p), "position {p:?} out of range");
        self.cells[self.index(p)]
    }

    pub fn try_get(&self, p: Pos) -> Result<Color> {
        self.check(p)?;
        Ok(self.cells[self.index(p)])
    }

    /// Returns a copy with one cell replaced.
    pub fn with_cell(&self, p: Pos, c: Color) -> Result<Self> {
        self.check(p)?;
        let mut cells = self.cells.clone();
        cells[self.index(p)] = c;
        Self::new(self.rows, self.cols, self.palette, cells)
    }

    /// Applies `f` to every cell, possibly under a different palette.
    pub fn map(&self, palette: Palette, mut f: impl FnMut(Pos, Color) -> Color) -> Result<Self> {
        let cells = self
            .cells
            .iter()
            .enumerate()
            .map(|(idx, &c)| f(self.pos(idx), c))
            .collect();
        Self::new(self.rows, self.cols, palette, cells)
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        (0..self.cells.len()).map(|idx| self.pos(idx))
    }

    /// Up, down, left, right, with wraparound.
    pub fn neighbors(&self, p: Pos) -> Result<[Pos; 4]> {
        self.check(p)?;
        Ok(self.neighbors_unchecked(p))
    }

    #[inline]
    pub(crate) fn neighbors_unchecked(&self, (i, j): Pos) -> [Pos; 4] {
        let (m, n) = (self.rows, self.cols);
        [
            ((i + m - 1) % m, j),
            ((i + 1) % m, j),
            (i, (j + n - 1) % n),
            (i, (j + 1) % n),
        ]
    }

    #[inline]
    pub(crate) fn neighbor_indices(&self, idx: usize) -> [usize; 4] {
        let p = self.neighbors_unchecked(self.pos(idx));
        [
            self.index(p[0]),
            self.index(p[1]),
            self.index(p[2]),
            self.index(p[3]),
        ]
    }

    /// Colors of the four neighbors, in [`TorusGrid::neighbors`] order.
    #[inline]
    pub fn neighbor_colors(&self, p: Pos) -> [Color; 4] {
        self.neighbor_indices(self.index(p)).map(|q| self.cells[q])
    }

    pub fn cells_of(&self, c: Color) -> CellSet {
        CellSet::from_iter_unchecked(
            self.rows,
            self.cols,
            self.positions().filter(|&p| self.get(p) == c),
        )
    }

    /// `S^k`: the cells holding the top color.
    pub fn k_set(&self) -> CellSet {
        self.cells_of(self.palette.top())
    }

    pub fn count(&self, c: Color) -> usize {
        self.cells.iter().filter(|&&x| x == c).count()
    }

    pub fn is_uniform(&self, c: Color) -> bool {
        self.cells.iter().all(|&x| x == c)
    }

    pub fn has_inf(&self) -> bool {
        self.cells.contains(&Color::Inf)
    }

    fn check(&self, p: Pos) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                pos: p,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

fn parse_token(tok: &str, palette: Palette, row: usize, col: usize) -> Result<Color> {
    if tok == Color::INF_TOKEN {
        return Ok(Color::Inf);
    }
    let value: u64 = tok.parse().map_err(|_| Error::BadToken {
        token: tok.to_string(),
        row,
        col,
    })?;
    if value == 0 || value > u64::from(palette.k()) {
        return Err(Error::ColorOutOfRange {
            value,
            k: palette.k(),
            row,
            col,
        });
    }
    Ok(Color::Finite(value as u16))
}

impl fmt::Display for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.cols) {
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// A set of in-range positions of an `m x n` grid, kept in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellSet {
    rows: usize,
    cols: usize,
    positions: BTreeSet<Pos>,
}

impl CellSet {
    pub fn new(rows: usize, cols: usize) -> Self {
        CellSet {
            rows,
            cols,
            positions: BTreeSet::new(),
        }
    }

    pub fn from_positions(
        rows: usize,
        cols: usize,
        positions: impl IntoIterator<Item = Pos>,
    ) -> Result<Self> {
        let mut set = CellSet::new(rows, cols);
        for p in positions {
            set.insert(p)?;
        }
        Ok(set)
    }

    pub(crate) fn from_iter_unchecked(
        rows: usize,
        cols: usize,
        positions: impl IntoIterator<Item = Pos>,
    ) -> Self {
        CellSet {
            rows,
            cols,
            positions: positions.into_iter().collect(),
        }
    }

    /// Returns whether the position was newly added.
    pub fn insert(&mut self, p: Pos) -> Result<bool> {
        if p.0 >= self.rows || p.1 >= self.cols {
            return Err(Error::OutOfRange {
                pos: p,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.positions.insert(p))
    }

    pub fn contains(&self, p: Pos) -> bool {
        self.positions.contains(&p)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Pos> + '_ {
        self.positions.iter().copied()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.positions.is_subset(&other.positions)
    }

    /// Smallest cyclic bounding rectangle.
    pub fn bounding_rect(&self) -> Rect {
        Rect {
            rows: cyclic_span(self.positions.iter().map(|p| p.0), self.rows),
            cols: cyclic_span(self.positions.iter().map(|p| p.1), self.cols),
        }
    }

    /// `(i,j);(i,j);...` in row-major order.
    pub fn to_text(&self) -> String {
        self.positions
            .iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl<'a> IntoIterator for &'a CellSet {
    type Item = &'a Pos;
    type IntoIter = std::collections::btree_set::Iter<'a, Pos>;

    fn into_iter(self) -> Self::IntoIter {
        self.positions.iter()
    }
}

/// Dimensions `m_F x n_F` of the smallest cyclic rectangle containing a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rect {
    pub rows: usize,
    pub cols: usize,
}

impl Rect {
    pub fn new(rows: usize, cols: usize) -> Self {
        Rect { rows, cols }
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

/// Bounding rectangle of `s` on the torus of `g`.
pub fn bounding_rect(g: &TorusGrid, s: &CellSet) -> Rect {
    debug_assert_eq!(s.dims(), (g.rows(), g.cols()));
    s.bounding_rect()
}

/// Length of the shortest cyclic interval of `0..len` covering `coords`:
/// `len` minus the largest run of uncovered indices.
fn cyclic_span(coords: impl Iterator<Item = usize>, len: usize) -> usize {
    let mut used = vec![false; len];
    for c in coords {
        used[c] = true;
    }
    let Some(first) = used.iter().position(|&u| u) else {
        return 0;
    };
    let mut largest_gap = 0;
    let mut gap = 0;
    // Walk once around the cycle starting from an occupied index.
    for step in 1..=len {
        if used[(first + step) % len] {
            largest_gap = largest_gap.max(gap);
            gap = 0;
        } else {
            gap += 1;
        }
    }
    len - largest_gap
}
