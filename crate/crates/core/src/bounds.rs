//! Size bounds for dynamos and constructive dynamo families.

use std::fmt;

use rand::Rng;

use crate::color::{Color, Palette};
use crate::engine::stub_condition;
use crate::error::{Error, Result};
use crate::grid::TorusGrid;

/// Lower bound on the size of a dynamo: `m + n - 2`.
pub fn lower_bound_size(m: usize, n: usize) -> usize {
    (m + n).saturating_sub(2)
}

/// Size of the strong-irreversible tiling construction: `ceil(m/3) * (n+1)`.
pub fn upper_bound_size(m: usize, n: usize) -> usize {
    m.div_ceil(3) * (n + 1)
}

/// `ceil(m*n/3)`, the size guaranteed by the two-top-neighbors hypothesis.
pub fn propnew_bound(m: usize, n: usize) -> usize {
    (m * n).div_ceil(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropnewCheck {
    pub applies: bool,
    pub bound: usize,
}

/// True when the neighbors of `x` split into a pair of `k`-colored cells
/// and a remaining pair that differs or is equal and above `x`.
fn has_top_pair(own: Color, nbr: [Color; 4], top: Color) -> bool {
    // The guard with `a = b = k` is the stubborn guard restricted to the top
    // color; masking every other equal pair keeps only those splits.
    let tops = nbr.iter().filter(|&&c| c == top).count();
    if tops < 2 {
        return false;
    }
    if tops >= 3 {
        return true;
    }
    let rest: Vec<Color> = nbr.iter().copied().filter(|&c| c != top).collect();
    !rest[0].matches(rest[1]) || rest[0] > own
}

/// Checks whether every non-`k` cell has a pair of `k`-colored neighbors
/// whose complementary pair differs or is equal and above the cell. Cells
/// colored `k` are unconstrained.
pub fn propnew_check(g: &TorusGrid) -> PropnewCheck {
    let top = g.palette().top();
    let applies = g.positions().all(|p| {
        let own = g.get(p);
        own == top || (own.is_finite() && has_top_pair(own, g.neighbor_colors(p), top))
    });
    PropnewCheck {
        applies,
        bound: propnew_bound(g.rows(), g.cols()),
    }
}

/// Random grid satisfying the two-top-neighbors hypothesis.
///
/// Cells start as `k` with probability `density`, the rest get uniform
/// colors from `1..k`. Failing cells are then promoted to `k` until none
/// is left; a promotion never breaks a neighbor's hypothesis, so the loop
/// terminates.
pub fn propnew_grid<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    k: u16,
    density: f64,
    rng: &mut R,
) -> Result<TorusGrid> {
    let palette = Palette::new(k)?;
    let top = palette.top();
    let mut g = TorusGrid::from_fn(m, n, palette, |_| {
        if rng.gen_bool(density.clamp(0.0, 1.0)) {
            top
        } else {
            Color::Finite(rng.gen_range(1..k))
        }
    })?;
    loop {
        let failing: Vec<_> = g
            .positions()
            .filter(|&p| g.get(p) != top && !has_top_pair(g.get(p), g.neighbor_colors(p), top))
            .collect();
        if failing.is_empty() {
            debug_assert!(g
                .positions()
                .all(|p| g.get(p) == top || stub_condition(g.get(p), g.neighbor_colors(p))));
            return Ok(g);
        }
        g = g.map(palette, |p, c| if failing.contains(&p) { top } else { c })?;
    }
}

/// The 6x8 bi-colored monotone dynamo of size `m + n - 2`: three 2x2 black
/// squares on a staircase.
pub fn staircase_dynamo() -> TorusGrid {
    const ROWS: [[u16; 8]; 6] = [
        [2, 2, 1, 1, 1, 1, 1, 1],
        [2, 2, 1, 1, 1, 1, 1, 1],
        [1, 1, 2, 2, 1, 1, 1, 1],
        [1, 1, 2, 2, 1, 2, 2, 1],
        [1, 1, 1, 1, 1, 2, 2, 1],
        [1, 1, 1, 1, 1, 1, 1, 1],
    ];
    TorusGrid::from_rows(2, &ROWS).expect("static grid is valid")
}

/// Strong-irreversible dynamo of size `ceil(m/3) * (n+1)`: the three-row
/// motif (black at column 0 / black at odd columns / black at even
/// columns) stacked `m/3` times. Needs `m % 3 == 0` and even `n`.
pub fn strong_tiling(m: usize, n: usize) -> Result<TorusGrid> {
    if m < 3 || !m.is_multiple_of(3) {
        return Err(Error::Dimensions(format!(
            "tiling needs a positive multiple of 3 rows, got m={m}"
        )));
    }
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Dimensions(format!(
            "tiling needs an even column count >= 4, got n={n}"
        )));
    }
    TorusGrid::from_fn(m, n, Palette::bicolor(), |(i, j)| {
        let black = match i % 3 {
            0 => j == 0,
            1 => j % 2 == 1,
            _ => j % 2 == 0,
        };
        Color::Finite(if black { 2 } else { 1 })
    })
}

/// Colors of rows `1..m` of a row/column construction; row 0 and column 0
/// hold `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowProfile {
    k: u16,
    rows: Vec<u16>,
}

impl RowProfile {
    pub fn new(k: u16, rows: Vec<u16>) -> Result<Self> {
        Palette::new(k)?;
        if rows.len() < 2 {
            return Err(Error::Profile(format!(
                "need at least 2 row colors (m >= 3), got {}",
                rows.len()
            )));
        }
        if let Some((i, &r)) = rows.iter().enumerate().find(|(_, &r)| r == 0 || r >= k) {
            return Err(Error::Profile(format!(
                "row {} has color {r}, expected 1..{k}",
                i + 1
            )));
        }
        Ok(RowProfile { k, rows })
    }

    pub fn k(&self) -> u16 {
        self.k
    }

    /// Row count of the torus, `rows + 1`.
    pub fn m(&self) -> usize {
        self.rows.len() + 1
    }

    /// `r_i` for `i` in `0..m`; `r_0 = k`.
    pub fn r(&self, i: usize) -> u16 {
        if i == 0 {
            self.k
        } else {
            self.rows[i - 1]
        }
    }

    pub fn rows(&self) -> &[u16] {
        &self.rows
    }
}

/// Row 0 and column 0 colored `k`, row `i` constant `r_i` elsewhere.
pub fn row_column_grid(profile: &RowProfile, n: usize) -> Result<TorusGrid> {
    let palette = Palette::new(profile.k())?;
    TorusGrid::from_fn(profile.m(), n, palette, |(i, j)| {
        if j == 0 {
            palette.top()
        } else {
            Color::Finite(profile.r(i))
        }
    })
}

/// A named inequality of the row/column dynamo theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileCondition {
    /// `r_i = r_{m-i}`
    Symmetric(usize),
    /// `r_i > r_{i+1}`
    Descending(usize),
    /// `r_{m-i} > r_{m-i-1}`
    Ascending(usize),
    /// Even `m`: `r_{m/2-1} > r_{m/2}` and `r_{m/2-1} > r_{m/2+1}`.
    Even1,
    /// Even `m`: `r_{m/2+1} > r_{m/2}`.
    Even2,
    /// Even `m`: `r_{m/2-1} + r_{m/2} < 2 r_{m/2+1}`.
    Even3,
    /// Odd `m`, `c = ceil(m/2)`: `r_{c-1} > r_c`.
    Odd1,
    /// Odd `m`: `k + r_c < 2 r_{c-1}`.
    Odd2,
    /// `k - r_{c-1} >= c - 1`.
    Depth,
}

impl fmt::Display for ProfileCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileCondition::Symmetric(i) => write!(f, "symmetric({i})"),
            ProfileCondition::Descending(i) => write!(f, "descending({i})"),
            ProfileCondition::Ascending(i) => write!(f, "ascending({i})"),
            ProfileCondition::Even1 => f.write_str("even-1"),
            ProfileCondition::Even2 => f.write_str("even-2"),
            ProfileCondition::Even3 => f.write_str("even-3"),
            ProfileCondition::Odd1 => f.write_str("odd-1"),
            ProfileCondition::Odd2 => f.write_str("odd-2"),
            ProfileCondition::Depth => f.write_str("depth"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConditionCheck {
    pub failures: Vec<ProfileCondition>,
}

impl ConditionCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates every inequality of the row/column dynamo theorem for the
/// profile's parity.
pub fn check_theorem_conditions(profile: &RowProfile) -> ConditionCheck {
    let m = profile.m();
    let k = u32::from(profile.k());
    let r = |i: usize| u32::from(profile.r(i));
    let c = m.div_ceil(2);
    let mut failures = Vec::new();

    for i in 1..c.saturating_sub(1) {
        if r(i) != r(m - i) {
            failures.push(ProfileCondition::Symmetric(i));
        }
        if r(i) <= r(i + 1) {
            failures.push(ProfileCondition::Descending(i));
        }
        if r(m - i) <= r(m - i - 1) {
            failures.push(ProfileCondition::Ascending(i));
        }
    }
    if m.is_multiple_of(2) {
        let h = m / 2;
        if !(r(h - 1) > r(h) && r(h - 1) > r(h + 1)) {
            failures.push(ProfileCondition::Even1);
        }
        if r(h + 1) <= r(h) {
            failures.push(ProfileCondition::Even2);
        }
        if r(h - 1) + r(h) >= 2 * r(h + 1) {
            failures.push(ProfileCondition::Even3);
        }
    } else {
        if r(c - 1) <= r(c) {
            failures.push(ProfileCondition::Odd1);
        }
        if k + r(c) >= 2 * r(c - 1) {
            failures.push(ProfileCondition::Odd2);
        }
    }
    if (k as usize) < r(c - 1) as usize + c - 1 {
        failures.push(ProfileCondition::Depth);
    }
    ConditionCheck { failures }
}
