//! Synchronous recoloring: the stubborn multicolor rule and the two
//! bi-color majority rules, fixed-point detection and dynamo verdicts.

use std::fmt;
use std::str::FromStr;

use crate::color::Color;
use crate::error::{Error, Result};
use crate::grid::{CellSet, Pos, TorusGrid};

const WHITE: Color = Color::Finite(1);
const BLACK: Color = Color::Finite(2);

/// The three ways of splitting four neighbors into two pairs.
const PAIRINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Irreversible stubborn simple majority on `k` colors.
    StubSm,
    /// Bi-color: white turns black with >= 2 black neighbors, black turns
    /// white with >= 3 white neighbors.
    SimpleReversible,
    /// Bi-color: white turns black with >= 3 black neighbors, black is final.
    StrongIrreversible,
}

impl Rule {
    pub const ALL: [Rule; 3] = [
        Rule::StubSm,
        Rule::SimpleReversible,
        Rule::StrongIrreversible,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Rule::StubSm => "STUB_SM",
            Rule::SimpleReversible => "SIMPLE_REVERSIBLE",
            Rule::StrongIrreversible => "STRONG_IRREVERSIBLE",
        }
    }

    pub fn is_bicolor(self) -> bool {
        !matches!(self, Rule::StubSm)
    }

    fn check(self, g: &TorusGrid) -> Result<()> {
        if !self.is_bicolor() {
            return Ok(());
        }
        if g.k() != 2 {
            return Err(Error::IncompatibleRule {
                rule: self.tag(),
                reason: format!("needs k=2, grid has k={}", g.k()),
            });
        }
        if g.has_inf() {
            return Err(Error::IncompatibleRule {
                rule: self.tag(),
                reason: "grid contains INF cells".into(),
            });
        }
        Ok(())
    }

    #[inline]
    fn next(self, own: Color, nbr: [Color; 4]) -> Color {
        match self {
            Rule::StubSm => match own {
                Color::Finite(v) if stub_condition(own, nbr) => Color::Finite(v + 1),
                _ => own,
            },
            Rule::SimpleReversible => {
                let black = nbr.iter().filter(|&&c| c == BLACK).count();
                match own {
                    WHITE if black >= 2 => BLACK,
                    BLACK if 4 - black >= 3 => WHITE,
                    _ => own,
                }
            }
            Rule::StrongIrreversible => {
                let black = nbr.iter().filter(|&&c| c == BLACK).count();
                if own == WHITE && black >= 3 {
                    BLACK
                } else {
                    own
                }
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.tag() == s)
            .ok_or_else(|| Error::TraceFormat(format!("unknown rule tag {s:?}")))
    }
}

/// Guard of the stubborn rule for a cell of color `own`.
///
/// True iff the neighbors split into pairs `{a,b}`, `{c,d}` with
/// `a = b > own` and either `c != d` or `c = d > own`. `INF` never forms an
/// equal pair, and an `INF` cell never recolors.
pub fn stub_condition(own: Color, nbr: [Color; 4]) -> bool {
    if !own.is_finite() {
        return false;
    }
    let guard = |a: Color, b: Color, c: Color, d: Color| {
        a.matches(b) && a > own && (!c.matches(d) || c > own)
    };
    PAIRINGS.iter().any(|&[p, q, r, s]| {
        let (a, b, c, d) = (nbr[p], nbr[q], nbr[r], nbr[s]);
        guard(a, b, c, d) || guard(c, d, a, b)
    })
}

/// One synchronous round: every new color depends on the old grid only.
pub fn step(g: &TorusGrid, rule: Rule) -> Result<(TorusGrid, CellSet)> {
    rule.check(g)?;
    let (next, changed) = step_unchecked(g, rule);
    let changed = CellSet::from_positions(g.rows(), g.cols(), changed)?;
    Ok((next, changed))
}

pub(crate) fn step_unchecked(g: &TorusGrid, rule: Rule) -> (TorusGrid, Vec<Pos>) {
    let cells = g.cells();
    let mut next = Vec::with_capacity(cells.len());
    let mut changed = Vec::new();
    for (idx, &own) in cells.iter().enumerate() {
        let nbr = g.neighbor_indices(idx).map(|q| cells[q]);
        let c = rule.next(own, nbr);
        if c != own {
            changed.push(g.pos(idx));
        }
        next.push(c);
    }
    let next = TorusGrid::new(g.rows(), g.cols(), g.palette(), next)
        .expect("a rule step preserves grid validity");
    (next, changed)
}

/// Round budget under which the stubborn rule always reaches a fixed point:
/// every non-final round increments some cell, and there are at most
/// `m*n*(k-1)` increments.
pub fn default_budget(g: &TorusGrid) -> usize {
    g.len() * (usize::from(g.k()) - 1) + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Dynamo,
    NonMonochromaticFixpoint,
    BudgetExhausted,
}

impl Outcome {
    pub fn tag(self) -> &'static str {
        match self {
            Outcome::Dynamo => "DYNAMO",
            Outcome::NonMonochromaticFixpoint => "NON_MONOCHROMATIC_FIXPOINT",
            Outcome::BudgetExhausted => "BUDGET_EXHAUSTED",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Outcome::Dynamo,
            Outcome::NonMonochromaticFixpoint,
            Outcome::BudgetExhausted,
        ]
        .into_iter()
        .find(|o| o.tag() == s)
        .ok_or_else(|| Error::TraceFormat(format!("unknown outcome {s:?}")))
    }
}

/// Round-by-round record of a run. `rounds[0]` is the input; `changed[t]`
/// lists the cells that differ between rounds `t-1` and `t` (`changed[0]`
/// is empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    rule: Rule,
    rounds: Vec<TorusGrid>,
    changed: Vec<Vec<Pos>>,
    exhausted: bool,
}

impl Trace {
    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn rounds(&self) -> &[TorusGrid] {
        &self.rounds
    }

    pub fn changed(&self) -> &[Vec<Pos>] {
        &self.changed
    }

    pub fn initial(&self) -> &TorusGrid {
        &self.rounds[0]
    }

    pub fn final_grid(&self) -> &TorusGrid {
        self.rounds.last().expect("trace holds at least round 0")
    }

    /// Number of rounds after the input.
    pub fn len_rounds(&self) -> usize {
        self.rounds.len() - 1
    }

    /// Set when the budget ran out before a fixed point was confirmed.
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    /// First round whose grid is a fixed point.
    pub fn rounds_to_fixpoint(&self) -> Option<usize> {
        (!self.exhausted).then(|| self.len_rounds())
    }

    pub fn changed_total(&self) -> usize {
        self.changed.iter().map(Vec::len).sum()
    }

    /// Color of `p` after `t` rounds. Beyond the recorded rounds of a
    /// converged trace the fixed point persists; for an exhausted trace the
    /// future is unknown and `None` is returned.
    pub fn color_at(&self, t: usize, p: Pos) -> Option<Color> {
        match self.rounds.get(t) {
            Some(g) => Some(g.get(p)),
            None if !self.exhausted => Some(self.final_grid().get(p)),
            None => None,
        }
    }

    pub fn outcome(&self) -> Outcome {
        if self.exhausted {
            Outcome::BudgetExhausted
        } else if self
            .final_grid()
            .is_uniform(self.final_grid().palette().top())
        {
            Outcome::Dynamo
        } else {
            Outcome::NonMonochromaticFixpoint
        }
    }

    pub fn verdict(&self) -> Verdict {
        Verdict {
            outcome: self.outcome(),
            rounds_to_fixpoint: self.len_rounds(),
            final_grid: self.final_grid().clone(),
        }
    }

    /// Trace file text: header, each round's grid separated by blank lines,
    /// footer.
    pub fn to_text(&self) -> String {
        let g = self.initial();
        let mut out = format!(
            "rounds={} rule={} m={} n={} k={}\n",
            self.len_rounds(),
            self.rule,
            g.rows(),
            g.cols(),
            g.k()
        );
        for (t, grid) in self.rounds.iter().enumerate() {
            if t > 0 {
                out.push('\n');
            }
            out.push_str(&grid.to_text());
        }
        out.push_str(&format!(
            "outcome={} changed_total={}\n",
            self.outcome(),
            self.changed_total()
        ));
        out
    }

    /// Parses [`Trace::to_text`] output. Change lists are recomputed from
    /// consecutive grids and checked against the footer.
    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::TraceFormat(msg.to_string());
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let fields = key_values(header)?;
        let get = |key: &str| {
            fields
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::TraceFormat(format!("header lacks {key}")))
        };
        let num = |key: &str| -> Result<usize> {
            get(key)?
                .parse()
                .map_err(|_| Error::TraceFormat(format!("bad {key} in header")))
        };
        let declared = num("rounds")?;
        let rule: Rule = get("rule")?.parse()?;
        let (m, n) = (num("m")?, num("n")?);
        let k = u16::try_from(num("k")?).map_err(|_| bad("k too large"))?;

        let body: Vec<&str> = lines.collect();
        let footer_at = body
            .iter()
            .rposition(|l| l.starts_with("outcome="))
            .ok_or_else(|| bad("missing footer"))?;
        let footer = key_values(body[footer_at])?;

        let mut rounds = Vec::new();
        for block in body[..footer_at].split(|l| l.trim().is_empty()) {
            if block.is_empty() {
                continue;
            }
            let g = TorusGrid::parse(&block.join("\n"), k)?;
            if (g.rows(), g.cols()) != (m, n) {
                return Err(bad("round grid dimensions differ from header"));
            }
            rounds.push(g);
        }
        if rounds.len() != declared + 1 {
            return Err(Error::TraceFormat(format!(
                "header declares {declared} rounds, body has {}",
                rounds.len().saturating_sub(1)
            )));
        }
        let mut changed = vec![Vec::new()];
        for w in rounds.windows(2) {
            changed.push(
                w[0].positions()
                    .filter(|&p| w[0].get(p) != w[1].get(p))
                    .collect(),
            );
        }
        let outcome: Outcome = footer
            .iter()
            .find(|(k, _)| *k == "outcome")
            .ok_or_else(|| bad("footer lacks outcome"))?
            .1
            .parse()?;
        let trace = Trace {
            rule,
            rounds,
            changed,
            exhausted: outcome == Outcome::BudgetExhausted,
        };
        if trace.outcome() != outcome {
            return Err(bad("footer outcome disagrees with final grid"));
        }
        if let Some((_, total)) = footer.iter().find(|(k, _)| *k == "changed_total") {
            if total.parse::<usize>().ok() != Some(trace.changed_total()) {
                return Err(bad("footer changed_total disagrees with rounds"));
            }
        }
        Ok(trace)
    }
}

fn key_values(line: &str) -> Result<Vec<(&str, &str)>> {
    line.split_whitespace()
        .map(|kv| {
            kv.split_once('=')
                .ok_or_else(|| Error::TraceFormat(format!("expected key=value, got {kv:?}")))
        })
        .collect()
}

/// Iterates `step` until no cell changes, evaluating at most `max_rounds`
/// steps.
pub fn run(g: &TorusGrid, rule: Rule, max_rounds: usize) -> Result<Trace> {
    if max_rounds == 0 {
        return Err(Error::ZeroBudget);
    }
    rule.check(g)?;
    let mut rounds = vec![g.clone()];
    let mut changed = vec![Vec::new()];
    for _ in 0..max_rounds {
        let (next, diff) = step_unchecked(rounds.last().unwrap(), rule);
        if diff.is_empty() {
            return Ok(Trace {
                rule,
                rounds,
                changed,
                exhausted: false,
            });
        }
        rounds.push(next);
        changed.push(diff);
    }
    Ok(Trace {
        rule,
        rounds,
        changed,
        exhausted: true,
    })
}

/// Outcome of a run from an initial coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// First round whose grid is a fixed point (rounds executed, when the
    /// budget ran out).
    pub rounds_to_fixpoint: usize,
    pub final_grid: TorusGrid,
}

impl Verdict {
    pub fn is_dynamo(&self) -> bool {
        self.outcome == Outcome::Dynamo
    }
}

/// Runs with the default budget and classifies the result.
pub fn verdict(g: &TorusGrid, rule: Rule) -> Result<Verdict> {
    Ok(run(g, rule, default_budget(g))?.verdict())
}

/// Dynamo outcome only, without keeping the intermediate rounds.
pub(crate) fn reaches_top(g: &TorusGrid, rule: Rule) -> bool {
    let top = g.palette().top();
    let mut cur = g.clone();
    for _ in 0..default_budget(g) {
        let (next, diff) = step_unchecked(&cur, rule);
        if diff.is_empty() {
            break;
        }
        cur = next;
    }
    cur.is_uniform(top)
}

/// A dynamo whose black set never shrinks along the run. Bi-color grids only.
pub fn is_monotone_dynamo(g: &TorusGrid, rule: Rule) -> Result<bool> {
    if g.k() != 2 || g.has_inf() {
        return Err(Error::IncompatibleRule {
            rule: rule.tag(),
            reason: "monotonicity is defined on bi-colored grids".into(),
        });
    }
    let trace = run(g, rule, default_budget(g))?;
    if trace.outcome() != Outcome::Dynamo {
        return Ok(false);
    }
    let grows = trace.rounds().windows(2).all(|w| {
        w[0].cells()
            .iter()
            .zip(w[1].cells())
            .all(|(&before, &after)| before != BLACK || after == BLACK)
    });
    Ok(grows)
}
