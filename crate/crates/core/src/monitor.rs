//! Runtime checks of the per-cell convergence lemmas on stubborn-rule traces.
//!
//! Each monitor scans every cell `x`, every start round `s` and every
//! assignment of the four neighbors to roles `a, b, c, d`. When a lemma's
//! hypotheses hold at `s` and along the horizon it talks about, the
//! observed color of `x` at the end of the horizon is compared with the
//! lemma's conclusion. Hypotheses that need rounds past the end of an
//! exhausted trace are skipped.

use std::collections::BTreeSet;
use std::fmt;

use crate::color::Color;
use crate::engine::{Rule, Trace};
use crate::error::{Error, Result};
use crate::grid::Pos;

/// All 24 orderings of the four neighbor slots as `(a, b, c, d)`.
const ROLES: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lemma {
    /// Equal higher pair, differing remaining pair: `x` climbs to the pair's color.
    EqualPairClimb,
    /// Equal higher pair over an equal middle pair: `x` climbs to the top pair.
    StackedPairs,
    /// Two top-colored neighbors: `x` reaches `k` in `k - r(x)` rounds.
    TopPair,
    /// Two rising neighbors that never meet: `x` waits `k - r(b)` rounds.
    DelayedStart,
}

impl Lemma {
    pub const ALL: [Lemma; 4] = [
        Lemma::EqualPairClimb,
        Lemma::StackedPairs,
        Lemma::TopPair,
        Lemma::DelayedStart,
    ];

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Lemma::EqualPairClimb => "equal-pair-climb",
            Lemma::StackedPairs => "stacked-pairs",
            Lemma::TopPair => "top-pair",
            Lemma::DelayedStart => "delayed-start",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub lemma: Lemma,
    pub cell: Pos,
    /// Round at which the hypotheses were taken.
    pub round: usize,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} cell=({},{}) round={} {}",
            self.lemma, self.cell.0, self.cell.1, self.round, self.detail
        )
    }
}

/// Violations plus how often each lemma's hypotheses fired.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MonitorReport {
    pub violations: Vec<Violation>,
    pub fired: [usize; 4],
}

impl MonitorReport {
    pub fn fired(&self, lemma: Lemma) -> usize {
        self.fired[lemma.slot()]
    }
}

/// Violations of any lemma on a stubborn-rule trace; empty when the engine
/// and the lemmas agree.
pub fn monitor_lemmas(trace: &Trace) -> Result<Vec<Violation>> {
    Ok(monitor_report(trace)?.violations)
}

pub fn monitor_report(trace: &Trace) -> Result<MonitorReport> {
    if trace.rule() != Rule::StubSm {
        return Err(Error::IncompatibleRule {
            rule: trace.rule().tag(),
            reason: "lemma monitors apply to STUB_SM traces".into(),
        });
    }
    let grid = trace.initial();
    let k = grid.k();
    let mut seen = BTreeSet::new();
    let mut report = MonitorReport::default();

    for s in 0..trace.rounds().len() {
        let g = &trace.rounds()[s];
        for x in g.positions() {
            let Color::Finite(xv) = g.get(x) else {
                continue;
            };
            if xv >= k {
                continue;
            }
            let nbr_pos = g.neighbors_unchecked(x);
            let mut fired_here = [false; 4];
            for roles in ROLES {
                let [a, b, c, d] = roles.map(|r| nbr_pos[r]);
                let view = View {
                    trace,
                    s,
                    x,
                    a,
                    b,
                    c,
                    d,
                    k,
                };
                for lemma in Lemma::ALL {
                    let Some(outcome) = view.check(lemma) else {
                        continue;
                    };
                    fired_here[lemma.slot()] = true;
                    if let Err(detail) = outcome {
                        if seen.insert((lemma, x, s)) {
                            report.violations.push(Violation {
                                lemma,
                                cell: x,
                                round: s,
                                detail,
                            });
                        }
                    }
                }
            }
            for (slot, fired) in fired_here.iter().enumerate() {
                report.fired[slot] += usize::from(*fired);
            }
        }
    }
    report.violations.sort();
    Ok(report)
}

struct View<'a> {
    trace: &'a Trace,
    s: usize,
    x: Pos,
    a: Pos,
    b: Pos,
    c: Pos,
    d: Pos,
    k: u16,
}

/// `None`: hypotheses do not hold (or cannot be decided). `Some(Ok)`: the
/// conclusion was observed. `Some(Err)`: a counterexample.
type Check = Option<std::result::Result<(), String>>;

impl View<'_> {
    fn at(&self, t: usize, p: Pos) -> Option<Color> {
        self.trace.color_at(self.s + t, p)
    }

    fn v(&self, t: usize, p: Pos) -> Option<u16> {
        self.at(t, p)?.value()
    }

    fn check(&self, lemma: Lemma) -> Check {
        match lemma {
            Lemma::EqualPairClimb => self.equal_pair_climb(),
            Lemma::StackedPairs => self.stacked_pairs(),
            Lemma::TopPair => self.top_pair(),
            Lemma::DelayedStart => self.delayed_start(),
        }
    }

    /// `r(x) < r(a) = r(b) > r(c) != r(d)`; if `a, b` hold their color and
    /// `c, d` differ at every round before `x` gets there, then after
    /// `r(a) - r(x)` rounds `x` has color `r(a)`.
    fn equal_pair_climb(&self) -> Check {
        let x0 = self.v(0, self.x)?;
        let top = self.v(0, self.a)?;
        if self.v(0, self.b)? != top || top <= x0 {
            return None;
        }
        let c0 = self.at(0, self.c)?;
        if !(c0 < Color::Finite(top) && !c0.matches(self.at(0, self.d)?)) {
            return None;
        }
        let horizon = usize::from(top - x0);
        for t in 0..horizon {
            if self.v(t, self.a)? != top || self.v(t, self.b)? != top {
                return None;
            }
            if self.at(t, self.c)?.matches(self.at(t, self.d)?) {
                return None;
            }
        }
        self.expect(horizon, top)
    }

    /// `r(x) < r(c) = r(d) < r(a) = r(b) <= k`; if `a, b` hold their color and
    /// `c, d` stay above `x` at every round before `x` gets there, then after
    /// `r(a) - r(x)` rounds `x` has color `r(a)`.
    fn stacked_pairs(&self) -> Check {
        let x0 = self.v(0, self.x)?;
        let top = self.v(0, self.a)?;
        let mid = self.v(0, self.c)?;
        if self.v(0, self.b)? != top || self.v(0, self.d)? != mid {
            return None;
        }
        if !(top > mid && mid > x0) {
            return None;
        }
        let horizon = usize::from(top - x0);
        for t in 0..horizon {
            if self.v(t, self.a)? != top || self.v(t, self.b)? != top {
                return None;
            }
            let xt = self.at(t, self.x)?;
            if self.at(t, self.c)? <= xt || self.at(t, self.d)? <= xt {
                return None;
            }
        }
        self.expect(horizon, top)
    }

    /// `r(a) = r(b) = k`, `r(c) > r(d)`; if `r(c) - r(d) >= k - r(x)` or
    /// `c, d` do not recolor, then after `k - r(x)` rounds `x` has color `k`.
    fn top_pair(&self) -> Check {
        let x0 = self.v(0, self.x)?;
        if self.v(0, self.a)? != self.k || self.v(0, self.b)? != self.k {
            return None;
        }
        let (c0, d0) = (self.at(0, self.c)?, self.at(0, self.d)?);
        if c0 <= d0 {
            return None;
        }
        let horizon = usize::from(self.k - x0);
        let wide_gap = match (c0, d0) {
            (Color::Finite(cv), Color::Finite(dv)) => usize::from(cv - dv) >= horizon,
            _ => false,
        };
        let frozen = || -> Option<bool> {
            for t in 1..horizon {
                if self.at(t, self.c)? != c0 || self.at(t, self.d)? != d0 {
                    return Some(false);
                }
            }
            Some(true)
        };
        if !wide_gap && !frozen()? {
            return None;
        }
        self.expect(horizon, self.k)
    }

    /// `k >= r(a) > r(b) > r(c) > r(d)` or `k >= r(a) > r(b) = r(x) = r(c) > r(d)`;
    /// if `b` rises every round, `a` rises every round until it reaches `k`,
    /// and `c, d` stay put, then `x` keeps its color for the first
    /// `k - r(b)` rounds.
    fn delayed_start(&self) -> Check {
        let x0 = self.v(0, self.x)?;
        let (a0, b0) = (self.v(0, self.a)?, self.v(0, self.b)?);
        let (c0, d0) = (self.v(0, self.c)?, self.v(0, self.d)?);
        let strict_chain = a0 > b0 && b0 > c0 && c0 > d0;
        let tied_chain = a0 > b0 && b0 == x0 && x0 == c0 && c0 > d0;
        if !(strict_chain || tied_chain) {
            return None;
        }
        let horizon = usize::from(self.k - b0);
        for t in 0..horizon {
            if self.v(t + 1, self.b)? != self.v(t, self.b)? + 1 {
                return None;
            }
            let at = self.v(t, self.a)?;
            if self.v(t + 1, self.a)? != (at + 1).min(self.k) {
                return None;
            }
            if self.v(t, self.c)? != c0 || self.v(t, self.d)? != d0 {
                return None;
            }
        }
        for t in 1..=horizon {
            let xt = self.v(t, self.x)?;
            if xt != x0 {
                return Some(Err(format!(
                    "recolored to {xt} after {t} rounds, expected to hold {x0} for {horizon}"
                )));
            }
        }
        Some(Ok(()))
    }

    fn expect(&self, horizon: usize, target: u16) -> Check {
        let observed = self.at(horizon, self.x)?;
        if observed == Color::Finite(target) {
            Some(Ok(()))
        } else {
            Some(Err(format!(
                "expected {target} after {horizon} rounds, observed {observed}"
            )))
        }
    }
}
