//! Exhaustive enumeration of colorings of small tori.
//!
//! Colorings are indexed `0..k^(m*n)` in lexicographic cell order (cell
//! `(0,0)` most significant, colors `1..=k`). Work is split over disjoint
//! index ranges and merged by taking the lowest index among the smallest
//! dynamos, so results do not depend on the thread count.

use rayon::prelude::*;

use crate::blocks::necessary_condition;
use crate::bounds::lower_bound_size;
use crate::color::{Color, Palette};
use crate::engine::{reaches_top, Rule};
use crate::error::{Error, Result};
use crate::grid::{Rect, TorusGrid, MIN_SIDE};

pub const DEFAULT_MAX_STATES: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchFilter {
    /// Skip colorings already ruled out by an initial block.
    NecessaryCondition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    m: usize,
    n: usize,
    palette: Palette,
    total: u64,
    filter: Option<SearchFilter>,
}

impl SearchSpec {
    pub fn new(m: usize, n: usize, k: u16, max_states: u64) -> Result<Self> {
        let palette = Palette::new(k)?;
        if m < MIN_SIDE || n < MIN_SIDE {
            return Err(Error::TooSmall { rows: m, cols: n });
        }
        let total = u32::try_from(m * n)
            .ok()
            .and_then(|cells| u64::from(k).checked_pow(cells))
            .filter(|&t| t <= max_states)
            .ok_or_else(|| Error::SearchBudget {
                states: format!("{k}^{}", m * n),
                budget: max_states,
            })?;
        Ok(SearchSpec {
            m,
            n,
            palette,
            total,
            filter: None,
        })
    }

    pub fn with_filter(mut self, filter: SearchFilter) -> Self {
        self.filter = Some(filter);
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u16 {
        self.palette.k()
    }

    pub fn filter(&self) -> Option<SearchFilter> {
        self.filter
    }

    /// Number of colorings, `k^(m*n)`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// The coloring with lexicographic index `idx`.
    pub fn coloring(&self, mut idx: u64) -> TorusGrid {
        let k = u64::from(self.palette.k());
        let len = self.m * self.n;
        let mut cells = vec![Color::Finite(1); len];
        for cell in cells.iter_mut().rev() {
            *cell = Color::Finite((idx % k) as u16 + 1);
            idx /= k;
        }
        TorusGrid::new(self.m, self.n, self.palette, cells).expect("enumerated colors are valid")
    }

    fn admits(&self, g: &TorusGrid) -> bool {
        match self.filter {
            None => true,
            Some(SearchFilter::NecessaryCondition) => !necessary_condition(g).is_blocked(),
        }
    }
}

/// Every coloring of the spec's torus exactly once, in lexicographic order.
pub fn enumerate(spec: &SearchSpec) -> impl Iterator<Item = TorusGrid> + '_ {
    (0..spec.total).map(move |idx| spec.coloring(idx))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub min_size: usize,
    /// Lowest-index dynamo of minimum size.
    pub witness: TorusGrid,
    /// Colorings enumerated.
    pub total: u64,
    /// Colorings that passed the filter and were simulated.
    pub examined: u64,
    pub dynamos: u64,
}

impl SearchResult {
    /// Summary line `m= n= k= total= dynamos= min_size=` followed by the
    /// witness grid.
    pub fn to_report(&self) -> String {
        format!(
            "m={} n={} k={} total={} dynamos={} min_size={}\n{}",
            self.witness.rows(),
            self.witness.cols(),
            self.witness.k(),
            self.total,
            self.dynamos,
            self.min_size,
            self.witness.to_text()
        )
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    examined: u64,
    dynamos: u64,
    best: Option<(usize, u64)>,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        let best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Tally {
            examined: self.examined + other.examined,
            dynamos: self.dynamos + other.dynamos,
            best,
        }
    }
}

/// Smallest `|S^k|` over all dynamos of the spec's torus.
pub fn min_dynamo(spec: &SearchSpec) -> Result<SearchResult> {
    let top = spec.palette.top();
    let tally = (0..spec.total)
        .into_par_iter()
        .fold(Tally::default, |mut acc, idx| {
            let g = spec.coloring(idx);
            if spec.admits(&g) {
                acc.examined += 1;
                if reaches_top(&g, Rule::StubSm) {
                    acc.dynamos += 1;
                    let size = g.count(top);
                    acc = acc.merge(Tally {
                        best: Some((size, idx)),
                        ..Tally::default()
                    });
                }
            }
            acc
        })
        .reduce(Tally::default, Tally::merge);
    // The all-k coloring is always a dynamo, so this only trips on a filter
    // that rejects it.
    let (min_size, idx) = tally
        .best
        .ok_or_else(|| Error::Dimensions("no dynamo among the examined colorings".into()))?;
    Ok(SearchResult {
        min_size,
        witness: spec.coloring(idx),
        total: spec.total,
        examined: tally.examined,
        dynamos: tally.dynamos,
    })
}

/// A dynamo smaller than `m + n - 2` or with a bounding rectangle smaller
/// than `(m-1) x (n-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub grid: TorusGrid,
    pub size: usize,
    pub rect: Rect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub dynamos: u64,
    /// Dynamos violating the size bound.
    pub size_violations: u64,
    /// Dynamos violating the bounding-rectangle bound.
    pub rect_violations: u64,
    /// Every counterexample, in lexicographic order.
    pub counterexamples: Vec<Counterexample>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks every dynamo of the spec's torus against the lower bounds on
/// size and bounding rectangle.
pub fn bound_consistency(spec: &SearchSpec) -> Result<ConsistencyReport> {
    let (m, n) = (spec.m, spec.n);
    let min_size = lower_bound_size(m, n);
    let mut found: Vec<(u64, Counterexample, bool, bool)> = (0..spec.total)
        .into_par_iter()
        .filter_map(|idx| {
            let g = spec.coloring(idx);
            if !spec.admits(&g) || !reaches_top(&g, Rule::StubSm) {
                return None;
            }
            let set = g.k_set();
            let size = set.len();
            let rect = set.bounding_rect();
            let small = size < min_size;
            let narrow = rect.rows < m - 1 || rect.cols < n - 1;
            Some((
                idx,
                Counterexample {
                    grid: g,
                    size,
                    rect,
                },
                small,
                narrow,
            ))
        })
        .collect();
    found.sort_by_key(|(idx, ..)| *idx);
    let dynamos = found.len() as u64;
    let size_violations = found.iter().filter(|f| f.2).count() as u64;
    let rect_violations = found.iter().filter(|f| f.3).count() as u64;
    let counterexamples = found
        .into_iter()
        .filter(|f| f.2 || f.3)
        .map(|f| f.1)
        .collect();
    Ok(ConsistencyReport {
        dynamos,
        size_violations,
        rect_violations,
        counterexamples,
    })
}
