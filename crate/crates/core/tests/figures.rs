mod common;

use common::{load, set};
use mcdynamo_core::*;

fn c(v: u16) -> Color {
    Color::Finite(v)
}

#[test]
fn mixed_grid_first_round() {
    let g = load("mixed_4x4.txt", 6);
    let (next, changed) = step(&g, Rule::StubSm).unwrap();
    let expected = set(
        &g,
        &[(0, 2), (1, 0), (1, 1), (1, 3), (2, 2), (3, 0), (3, 3)],
    );
    assert_eq!(changed, expected);
    for (p, v) in [
        ((0, 2), 3),
        ((1, 0), 5),
        ((1, 1), 4),
        ((1, 3), 2),
        ((2, 2), 3),
        ((3, 0), 2),
        ((3, 3), 4),
    ] {
        assert_eq!(next.get(p), c(v), "cell {p:?}");
    }
}

#[test]
fn mixed_grid_fixed_point() {
    let g = load("mixed_4x4.txt", 6);
    let trace = run(&g, Rule::StubSm, default_budget(&g)).unwrap();
    let fixed = TorusGrid::parse("6 4 4 4\n6 5 5 6\n6 5 5 6\n4 4 4 4", 6).unwrap();
    assert_eq!(trace.final_grid(), &fixed);
    assert_eq!(trace.rounds_to_fixpoint(), Some(5));
    assert_eq!(trace.outcome(), Outcome::NonMonochromaticFixpoint);
    assert!(monitor_lemmas(&trace).unwrap().is_empty());
}

#[test]
fn mixed_grid_k_set_and_projection() {
    let g = load("mixed_4x4.txt", 6);
    assert_eq!(g.k_set(), set(&g, &[(0, 0), (2, 0), (2, 3)]));
    let b = phi(&g).unwrap();
    assert_eq!(b.k_set(), set(&g, &[(0, 0), (2, 0), (2, 3)]));
    assert!(!propnew_check(&g).applies);
}

#[test]
fn mixed_grid_is_blocked_by_non_top_columns() {
    // Columns 1 and 2 hold no 6, so they form a non-k-block from the start.
    let g = load("mixed_4x4.txt", 6);
    let blocks = find_non_k_blocks(&g);
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0].len(), 8);
    assert!((0..4).all(|i| blocks[0].contains((i, 1)) && blocks[0].contains((i, 2))));
    assert!(necessary_condition(&g).is_blocked());
}

#[test]
fn layered_grid_reaches_top() {
    let g = load("layered_6x6.txt", 3);
    let trace = run(&g, Rule::StubSm, default_budget(&g)).unwrap();
    assert_eq!(trace.outcome(), Outcome::Dynamo);
    assert_eq!(trace.rounds_to_fixpoint(), Some(2));
    let report = monitor_report(&trace).unwrap();
    assert!(report.violations.is_empty());
    assert!(report.fired(Lemma::StackedPairs) > 0);
    // A 1-cell with two 3-neighbors and two 2-neighbors.
    assert_eq!(g.get((0, 2)), c(1));
    let mut nbrs = g.neighbor_colors((0, 2));
    nbrs.sort();
    assert_eq!(nbrs, [c(2), c(2), c(3), c(3)]);
    assert_eq!(trace.color_at(2, (0, 2)), Some(c(3)));
}

#[test]
fn emerging_block() {
    let g = load("fig5_left.txt", 8);
    assert!(window_constraint_violations(&g).is_empty());
    assert!(!necessary_condition(&g).is_blocked());
    let trace = run(&g, Rule::StubSm, default_budget(&g)).unwrap();
    let after5 = &trace.rounds()[5];
    let blocks = find_h_blocks(after5, 4).unwrap();
    assert_eq!(blocks, vec![set(&g, &[(2, 2), (2, 3), (3, 2), (3, 3)])]);
    assert_eq!(trace.outcome(), Outcome::NonMonochromaticFixpoint);
    for p in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        assert_eq!(trace.final_grid().get(p), c(4));
    }
}

#[test]
fn emerging_block_matches_printed_grid_where_it_matters() {
    let g = load("fig5_left.txt", 8);
    let printed = load("fig5_after5.txt", 8);
    let trace = run(&g, Rule::StubSm, 5).unwrap();
    let sim = &trace.rounds()[5];
    let diff: Vec<_> = sim
        .positions()
        .filter(|&p| sim.get(p) != printed.get(p))
        .collect();
    assert_eq!(diff, vec![(3, 4), (4, 4)]);
    assert_eq!(
        find_h_blocks(&printed, 4).unwrap(),
        find_h_blocks(sim, 4).unwrap()
    );
}

#[test]
fn emerging_block_window_arithmetic() {
    // Window {(2,2),(2,3),(3,2),(3,3)} sorted by color: a=(3,3)=3, d=(2,2)=4.
    let g = load("fig5_left.txt", 8);
    let trace = run(&g, Rule::StubSm, 5).unwrap();
    let count = |p: Pos| trace.changed().iter().filter(|ch| ch.contains(&p)).count();
    let (a, d) = ((3, 3), (2, 2));
    let (ra, rd) = (g.get(a).value().unwrap(), g.get(d).value().unwrap());
    assert_eq!((ra, rd), (3, 4));
    assert_eq!(count(a), 1);
    assert_eq!(count(d), 0);
    assert_eq!(count(a) - count(d), usize::from(rd - ra));
    assert_eq!(g.get((2, 3)), c(3));
    assert_eq!(trace.color_at(4, (2, 3)), Some(c(4)));
}

#[test]
fn staircase_matches_file_and_is_monotone() {
    let g = staircase_dynamo();
    assert_eq!(g, load("fig6.txt", 2));
    assert_eq!(g.count(c(2)), lower_bound_size(6, 8));
    assert_eq!(g.k_set().bounding_rect(), Rect::new(5, 7));
    assert!(is_monotone_dynamo(&g, Rule::SimpleReversible).unwrap());
    assert!(find_non_k_blocks(&g).is_empty());
}

#[test]
fn tiling_matches_file() {
    let g = strong_tiling(9, 8).unwrap();
    assert_eq!(g, load("fig7.txt", 2));
    assert_eq!(g.count(c(2)), upper_bound_size(9, 8));
    let v = verdict(&g, Rule::StrongIrreversible).unwrap();
    assert!(v.is_dynamo());
    assert!(is_monotone_dynamo(&g, Rule::StrongIrreversible).unwrap());
}

#[test]
fn row_column_dynamos() {
    for (file, rows, n) in [
        ("fig8_left.txt", vec![5, 4, 1, 3, 5], 5),
        ("fig8_right.txt", vec![5, 4, 1, 5], 5),
    ] {
        let profile = RowProfile::new(6, rows).unwrap();
        let g = row_column_grid(&profile, n).unwrap();
        assert_eq!(g, load(file, 6));
        assert!(check_theorem_conditions(&profile).ok());
        assert!(verdict(&g, Rule::StubSm).unwrap().is_dynamo());
        assert_eq!(g.k_set().len(), g.rows() + g.cols() - 1);
        assert!(!necessary_condition(&g).is_blocked());
        let b = phi(&g).unwrap();
        assert_eq!(b.count(c(2)), g.rows() + g.cols() - 1);
        for w in decomposition_windows(&g).unwrap() {
            let pred = verify_window_prediction(&w).unwrap();
            assert!(pred.matches, "{} window of {file}", w.corner());
        }
    }
}

#[test]
fn right_grid_north_west_table() {
    let g = load("fig8_right.txt", 6);
    let w = CornerWindow::new(&g, Corner::Nw, 2, 3).unwrap();
    assert_eq!(
        m_table(&w).unwrap().values,
        vec![vec![0, 0, 0], vec![0, 1, 2]]
    );
}

#[test]
fn mutated_profile_fails_third_even_condition() {
    let p = RowProfile::new(6, vec![5, 4, 2, 3, 5]).unwrap();
    assert_eq!(
        check_theorem_conditions(&p).failures,
        vec![ProfileCondition::Even3]
    );
}
