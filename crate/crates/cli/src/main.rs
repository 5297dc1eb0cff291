use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mcdynamo_core::{
    check_theorem_conditions, check_window_hypotheses, default_budget, lower_bound_size, m_table,
    min_dynamo, necessary_condition, propnew_bound, row_column_grid, run, staircase_dynamo,
    strong_tiling, upper_bound_size, verdict, verify_window_prediction, BlockReport, Color, Corner,
    CornerWindow, Error, NecessaryCondition, Palette, RowProfile, Rule, SearchFilter, SearchSpec,
    TorusGrid, DEFAULT_MAX_STATES,
};

/// Output is buffered and written once, so a closed pipe is not an error.
macro_rules! out {
    ($buf:expr, $($arg:tt)*) => {
        $buf.push_str(&format!($($arg)*))
    };
}

macro_rules! outln {
    ($buf:expr, $($arg:tt)*) => {
        {
            $buf.push_str(&format!($($arg)*));
            $buf.push('\n');
        }
    };
}

#[derive(Parser)]
#[command(
    name = "mcdynamo",
    version,
    about = "Stubborn majority dynamics on colored tori"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a grid until it stops changing or the round budget runs out.
    Run {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        k: u16,
        #[arg(long, value_enum, default_value_t = RuleArg::Stub)]
        rule: RuleArg,
        /// Defaults to m*n*(k-1)+1.
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Write the full trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Report whether a grid is a dynamo.
    Verify {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        k: u16,
        /// Exit 1 unless the grid is a dynamo.
        #[arg(long)]
        expect_dynamo: bool,
    },
    /// List h-blocks and non-k-blocks.
    Blocks {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        k: u16,
        /// Only report blocks of this color.
        #[arg(long)]
        h: Option<u16>,
    },
    /// Evaluate the size bounds for an m x n torus.
    Bounds {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<u16>,
    },
    /// Print a known dynamo construction.
    Generate {
        #[arg(long, value_enum)]
        pattern: Pattern,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<u16>,
        /// Row colors r1,...,r(m-1) for the row/column construction.
        #[arg(long, value_delimiter = ',')]
        profile: Option<Vec<u16>>,
        #[arg(long)]
        check_conditions: bool,
    },
    /// Arrival-round table of a corner window.
    Mtable {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        k: u16,
        #[arg(long, value_parser = parse_corner)]
        corner: Corner,
        #[arg(long)]
        istar: usize,
        #[arg(long)]
        jstar: usize,
        /// Compare the table with a simulation of the window.
        #[arg(long)]
        verify: bool,
    },
    /// Exhaustively search small tori for the smallest dynamo.
    Search {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u16,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        budget: u64,
        #[arg(long, value_enum)]
        filter: Option<FilterArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Stub,
    SimpleRev,
    StrongIrr,
}

impl From<RuleArg> for Rule {
    fn from(r: RuleArg) -> Rule {
        match r {
            RuleArg::Stub => Rule::StubSm,
            RuleArg::SimpleRev => Rule::SimpleReversible,
            RuleArg::StrongIrr => Rule::StrongIrreversible,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Pattern {
    Fig6,
    Fig7,
    Rowcol,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    Necessary,
}

fn parse_corner(s: &str) -> Result<Corner, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure with its exit code: 1 for a domain outcome, 2 for bad input.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Hypotheses(_) | Error::BudgetExhausted(_) => Failure::domain(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn load_grid(path: &Path, k: u16) -> Result<TorusGrid, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    TorusGrid::parse(&text, k).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn cmd_run(
    out: &mut String,
    grid: &Path,
    k: u16,
    rule: Rule,
    max_rounds: Option<usize>,
    trace_path: Option<&Path>,
) -> Outcome {
    let g = load_grid(grid, k)?;
    let budget = max_rounds.unwrap_or_else(|| default_budget(&g));
    let trace = run(&g, rule, budget)?;
    if let Some(path) = trace_path {
        fs::write(path, trace.to_text())
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    let rounds = trace
        .rounds_to_fixpoint()
        .map_or_else(|| "none".to_string(), |r| r.to_string());
    outln!(
        out,
        "outcome={} rule={} rounds={} changed_total={}",
        trace.outcome().tag(),
        rule.tag(),
        rounds,
        trace.changed_total()
    );
    out!(out, "{}", trace.final_grid().to_text());
    Ok(())
}

fn cmd_verify(out: &mut String, grid: &Path, k: u16, expect_dynamo: bool) -> Outcome {
    let g = load_grid(grid, k)?;
    let v = verdict(&g, Rule::StubSm)?;
    outln!(out, "{} rounds={}", v.outcome.tag(), v.rounds_to_fixpoint);
    if expect_dynamo && !v.is_dynamo() {
        return Err(Failure::domain("not a dynamo"));
    }
    Ok(())
}

fn cmd_blocks(out: &mut String, grid: &Path, k: u16, h: Option<u16>) -> Outcome {
    let g = load_grid(grid, k)?;
    let report = match h {
        Some(h) => BlockReport {
            h_blocks: BlockReport::scan(&g, [h])?.h_blocks,
            non_k_blocks: Vec::new(),
        },
        None => BlockReport::blocking(&g)?,
    };
    outln!(
        out,
        "blocks={}",
        report.h_blocks.len() + report.non_k_blocks.len()
    );
    out!(out, "{}", report.to_text());
    if h.is_none() {
        match necessary_condition(&g) {
            NecessaryCondition::Ok => outln!(out, "necessary=OK"),
            NecessaryCondition::Blocked(_) => outln!(out, "necessary=BLOCKED"),
        }
    }
    Ok(())
}

fn cmd_bounds(out: &mut String, m: usize, n: usize, k: Option<u16>) -> Outcome {
    if let Some(k) = k {
        Palette::new(k)?;
    }
    if m < 3 || n < 3 {
        return Err(Error::TooSmall { rows: m, cols: n }.into());
    }
    outln!(
        out,
        "lower={} upper={} propnew={}",
        lower_bound_size(m, n),
        upper_bound_size(m, n),
        propnew_bound(m, n)
    );
    Ok(())
}

/// Bi-colored grid with black lifted to `k` and white kept at 1.
fn lift(g: &TorusGrid, k: Option<u16>) -> Result<TorusGrid, Failure> {
    let Some(k) = k else { return Ok(g.clone()) };
    let palette = Palette::new(k)?;
    Ok(g.map(palette, |_, c| {
        if c == Color::Finite(2) {
            Color::Finite(k)
        } else {
            Color::Finite(1)
        }
    })?)
}

fn cmd_generate(
    out: &mut String,
    pattern: Pattern,
    m: Option<usize>,
    n: Option<usize>,
    k: Option<u16>,
    profile: Option<Vec<u16>>,
    check_conditions: bool,
) -> Outcome {
    if check_conditions && !matches!(pattern, Pattern::Rowcol) {
        return Err(Failure::usage(
            "--check-conditions applies to --pattern rowcol",
        ));
    }
    let g = match pattern {
        Pattern::Fig6 => {
            let g = staircase_dynamo();
            if m.is_some_and(|m| m != g.rows()) || n.is_some_and(|n| n != g.cols()) {
                return Err(Failure::usage("fig6 is the fixed 6x8 grid"));
            }
            lift(&g, k)?
        }
        Pattern::Fig7 => {
            let (Some(m), Some(n)) = (m, n) else {
                return Err(Failure::usage("fig7 needs --m and --n"));
            };
            lift(&strong_tiling(m, n)?, k)?
        }
        Pattern::Rowcol => {
            let (Some(n), Some(k), Some(rows)) = (n, k, profile) else {
                return Err(Failure::usage("rowcol needs --n, --k and --profile"));
            };
            let profile = RowProfile::new(k, rows)?;
            if m.is_some_and(|m| m != profile.m()) {
                return Err(Failure::usage(format!(
                    "--m {} does not match a profile of {} rows",
                    m.unwrap_or_default(),
                    profile.m()
                )));
            }
            let g = row_column_grid(&profile, n)?;
            if check_conditions {
                let check = check_theorem_conditions(&profile);
                if check.ok() {
                    outln!(out, "# conditions=ok");
                } else {
                    let names: Vec<String> = check.failures.iter().map(|f| f.to_string()).collect();
                    outln!(out, "# conditions=fail failed={}", names.join(","));
                    out!(out, "{}", g.to_text());
                    return Err(Failure::domain("theorem conditions fail"));
                }
            }
            g
        }
    };
    out!(out, "{}", g.to_text());
    Ok(())
}

fn cmd_mtable(
    out: &mut String,
    grid: &Path,
    k: u16,
    corner: Corner,
    istar: usize,
    jstar: usize,
    verify: bool,
) -> Outcome {
    let g = load_grid(grid, k)?;
    let w = CornerWindow::new(&g, corner, istar, jstar)?;
    let check = check_window_hypotheses(&w);
    if !check.ok() {
        let names: Vec<String> = check.failures.iter().map(|f| f.to_string()).collect();
        outln!(out, "hypotheses=fail failed={}", names.join(","));
        return Err(Failure::domain("window hypotheses fail"));
    }
    let table = m_table(&w)?;
    let join = |v: &[usize]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    outln!(
        out,
        "# corner={corner} istar={istar} jstar={jstar} rows={} cols={}",
        join(&table.row_index),
        join(&table.col_index)
    );
    out!(out, "{}", table.to_text());
    if verify {
        let pred = verify_window_prediction(&w)?;
        outln!(out, "match={}", pred.matches);
        if !pred.matches {
            return Err(Failure::domain("simulation disagrees with the table"));
        }
    }
    Ok(())
}

fn cmd_search(
    out: &mut String,
    m: usize,
    n: usize,
    k: u16,
    budget: u64,
    filter: Option<FilterArg>,
) -> Outcome {
    let mut spec = SearchSpec::new(m, n, k, budget)?;
    if let Some(FilterArg::Necessary) = filter {
        spec = spec.with_filter(SearchFilter::NecessaryCondition);
    }
    let result = min_dynamo(&spec)?;
    out!(out, "{}", result.to_report());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let outcome = match cli.command {
        Command::Run {
            grid,
            k,
            rule,
            max_rounds,
            trace,
        } => cmd_run(
            &mut out,
            &grid,
            k,
            rule.into(),
            max_rounds,
            trace.as_deref(),
        ),
        Command::Verify {
            grid,
            k,
            expect_dynamo,
        } => cmd_verify(&mut out, &grid, k, expect_dynamo),
        Command::Blocks { grid, k, h } => cmd_blocks(&mut out, &grid, k, h),
        Command::Bounds { m, n, k } => cmd_bounds(&mut out, m, n, k),
        Command::Generate {
            pattern,
            m,
            n,
            k,
            profile,
            check_conditions,
        } => cmd_generate(&mut out, pattern, m, n, k, profile, check_conditions),
        Command::Mtable {
            grid,
            k,
            corner,
            istar,
            jstar,
            verify,
        } => cmd_mtable(&mut out, &grid, k, corner, istar, jstar, verify),
        Command::Search {
            m,
            n,
            k,
            budget,
            filter,
        } => cmd_search(&mut out, m, n, k, budget, filter),
    };
    let _ = io::stdout().lock().write_all(out.as_bytes());
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn error_exit_codes() {
        assert_eq!(Failure::from(Error::Hypotheses(vec![])).code, 1);
        assert_eq!(Failure::from(Error::BudgetExhausted(3)).code, 1);
        assert_eq!(Failure::from(Error::EmptyGrid).code, 2);
        assert_eq!(Failure::from(Error::Palette(1)).code, 2);
    }

    #[test]
    fn lift_maps_black_to_top() {
        let g = TorusGrid::parse("2 1 1\n1 2 1\n1 1 2", 2).unwrap();
        let h = lift(&g, Some(5)).unwrap();
        assert_eq!(h.k(), 5);
        assert_eq!(h.k_set(), g.k_set());
        assert_eq!(lift(&g, None).unwrap(), g);
    }

    #[test]
    fn profile_flag_splits_on_commas() {
        let cli = Cli::try_parse_from([
            "mcdynamo",
            "generate",
            "--pattern",
            "rowcol",
            "--n",
            "5",
            "--k",
            "6",
            "--profile",
            "5,4,1",
        ])
        .unwrap();
        match cli.command {
            Command::Generate { profile, .. } => assert_eq!(profile, Some(vec![5, 4, 1])),
            _ => panic!("wrong subcommand"),
        }
    }
}
