use mcdynamo_core::blocks::{components, peel};
use mcdynamo_core::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(v: u16) -> Color {
    Color::Finite(v)
}

fn build(m: usize, n: usize, k: u16, v: &[u16]) -> TorusGrid {
    TorusGrid::from_fn(m, n, Palette::new(k).unwrap(), |(i, j)| c(v[i * n + j])).unwrap()
}

/// Uniform colors, or colors skewed towards `k` so that dynamos show up.
fn grid() -> impl Strategy<Value = TorusGrid> {
    (3usize..=6, 3usize..=6, 2u16..=6, any::<bool>()).prop_flat_map(|(m, n, k, skew)| {
        let cell = if skew {
            prop_oneof![2 => Just(k), 1 => 1..=k].boxed()
        } else {
            (1..=k).boxed()
        };
        proptest::collection::vec(cell, m * n).prop_map(move |v| build(m, n, k, &v))
    })
}

fn shifted(g: &TorusGrid, di: usize, dj: usize) -> TorusGrid {
    let (m, n) = (g.rows(), g.cols());
    TorusGrid::from_fn(m, n, g.palette(), |(i, j)| {
        g.get(((i + di) % m, (j + dj) % n))
    })
    .unwrap()
}

fn transposed(g: &TorusGrid) -> TorusGrid {
    TorusGrid::from_fn(g.cols(), g.rows(), g.palette(), |(i, j)| g.get((j, i))).unwrap()
}

fn mask_set(g: &TorusGrid, mask: &[bool]) -> CellSet {
    CellSet::from_positions(
        g.rows(),
        g.cols(),
        mask.iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(idx, _)| g.pos(idx)),
    )
    .unwrap()
}

fn union(g: &TorusGrid, sets: &[CellSet]) -> CellSet {
    CellSet::from_positions(g.rows(), g.cols(), sets.iter().flat_map(|s| s.iter())).unwrap()
}

proptest! {
    #[test]
    fn step_applies_the_guard_simultaneously(g in grid()) {
        let (next, changed) = step(&g, Rule::StubSm).unwrap();
        for p in g.positions() {
            let moves = stub_condition(g.get(p), g.neighbor_colors(p));
            prop_assert_eq!(changed.contains(p), moves);
            let want = match (moves, g.get(p)) {
                (true, Color::Finite(v)) => c(v + 1),
                (_, x) => x,
            };
            prop_assert_eq!(next.get(p), want);
        }
    }

    #[test]
    fn guard_ignores_neighbor_order(own in 1u16..=6, nbr in proptest::array::uniform4(1u16..=6)) {
        let base = nbr.map(c);
        let expected = stub_condition(c(own), base);
        for a in 0..4 {
            for b in (0..4).filter(|&b| b != a) {
                for d in (0..4).filter(|&d| d != a && d != b) {
                    let e = 6 - a - b - d;
                    let perm = [base[a], base[b], base[d], base[e]];
                    prop_assert_eq!(stub_condition(c(own), perm), expected);
                }
            }
        }
    }

    #[test]
    fn step_commutes_with_torus_symmetries(g in grid(), di in 0usize..6, dj in 0usize..6) {
        let (next, _) = step(&g, Rule::StubSm).unwrap();
        let s = shifted(&g, di % g.rows(), dj % g.cols());
        prop_assert_eq!(step(&s, Rule::StubSm).unwrap().0, shifted(&next, di % g.rows(), dj % g.cols()));
        let t = transposed(&g);
        prop_assert_eq!(step(&t, Rule::StubSm).unwrap().0, transposed(&next));
    }

    #[test]
    fn colors_climb_by_one_and_stop_within_budget(g in grid()) {
        let budget = default_budget(&g);
        let trace = run(&g, Rule::StubSm, budget).unwrap();
        prop_assert!(!trace.exhausted());
        prop_assert!(trace.rounds_to_fixpoint().unwrap() <= budget);
        for w in trace.rounds().windows(2) {
            for p in g.positions() {
                let (a, b) = (w[0].get(p).value().unwrap(), w[1].get(p).value().unwrap());
                prop_assert!(b == a || b == a + 1);
            }
        }
    }

    #[test]
    fn monitors_find_no_violations(g in grid()) {
        let trace = run(&g, Rule::StubSm, default_budget(&g)).unwrap();
        prop_assert_eq!(monitor_lemmas(&trace).unwrap(), vec![]);
    }

    #[test]
    fn blocks_are_frozen(g in grid()) {
        let trace = run(&g, Rule::StubSm, default_budget(&g)).unwrap();
        let top = g.palette().top();
        for h in 1..=g.k() {
            for block in find_h_blocks(&g, h).unwrap() {
                for p in block.iter() {
                    prop_assert!(trace.rounds().iter().all(|r| r.get(p) == c(h)));
                }
            }
        }
        for block in find_non_k_blocks(&g) {
            for p in block.iter() {
                prop_assert!(trace.rounds().iter().all(|r| r.get(p) != top));
            }
        }
    }

    #[test]
    fn reported_blocks_satisfy_their_definitions(g in grid()) {
        let report = BlockReport::blocking(&g).unwrap();
        for b in &report.h_blocks {
            for p in b.cells.iter() {
                prop_assert_eq!(g.get(p), c(b.color));
                let inside = g.neighbors(p).unwrap().iter().filter(|&&q| b.cells.contains(q)).count();
                prop_assert!(inside >= 2);
            }
        }
        for b in &report.non_k_blocks {
            for p in b.cells.iter() {
                prop_assert!(g.get(p) != g.palette().top());
                let inside = g.neighbors(p).unwrap().iter().filter(|&&q| b.cells.contains(q)).count();
                prop_assert!(inside >= 3);
            }
        }
    }

    #[test]
    fn blocked_grids_are_not_dynamos(g in grid()) {
        if necessary_condition(&g).is_blocked() {
            prop_assert!(!verdict(&g, Rule::StubSm).unwrap().is_dynamo());
        }
    }

    #[test]
    fn peeling_is_order_independent(g in grid(), seed in any::<u64>(), h in 1u16..=6) {
        let h = c(h.min(g.k()));
        let fast = peel(&g, |x| x == h, 2);
        // Naive peel: delete one random under-threshold cell at a time.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut alive: Vec<bool> = g.cells().iter().map(|&x| x == h).collect();
        loop {
            let mut weak: Vec<usize> = (0..alive.len())
                .filter(|&idx| {
                    alive[idx]
                        && g.neighbors(g.pos(idx)).unwrap().iter().filter(|&&q| alive[g.index(q)]).count() < 2
                })
                .collect();
            if weak.is_empty() {
                break;
            }
            weak.shuffle(&mut rng);
            alive[weak[0]] = false;
        }
        prop_assert_eq!(fast, alive);
    }

    #[test]
    fn projection_preserves_blocking_structure(g in grid()) {
        let b = phi(&g).unwrap();
        prop_assert_eq!(b.k_set(), g.k_set());
        // Non-k-blocks are exactly the white blocks of the simple rule.
        prop_assert_eq!(find_non_k_blocks(&b), find_non_k_blocks(&g));
        // Every h-block sits inside a white block of the strong rule.
        let white = union(&b, &find_h_blocks(&b, 1).unwrap());
        for h in 1..g.k() {
            for block in find_h_blocks(&g, h).unwrap() {
                prop_assert!(block.is_subset(&white));
            }
        }
    }

    #[test]
    fn text_round_trip(m in 3usize..=6, n in 3usize..=6, k in 2u16..=9,
                       v in proptest::collection::vec(0u16..=9, 36)) {
        let g = TorusGrid::from_fn(m, n, Palette::new(k).unwrap(), |(i, j)| {
            match v[i * n + j] {
                0 => Color::Inf,
                x => c(1 + (x - 1) % k),
            }
        }).unwrap();
        prop_assert_eq!(TorusGrid::parse(&g.to_text(), k).unwrap(), g);
    }

    #[test]
    fn neighbors_are_distinct(m in 3usize..=9, n in 3usize..=9, i in 0usize..9, j in 0usize..9) {
        let g = TorusGrid::uniform(m, n, Palette::bicolor(), c(1)).unwrap();
        let p = (i % m, j % n);
        let nb = g.neighbors(p).unwrap();
        for a in 0..4 {
            prop_assert!(nb[a] != p);
            for b in a + 1..4 {
                prop_assert!(nb[a] != nb[b]);
            }
        }
    }

    #[test]
    fn bounding_rect_is_shift_invariant(g in grid(), di in 0usize..6, dj in 0usize..6) {
        let s = shifted(&g, di % g.rows(), dj % g.cols());
        prop_assert_eq!(g.k_set().bounding_rect(), s.k_set().bounding_rect());
        let t = transposed(&g);
        let r = g.k_set().bounding_rect();
        prop_assert_eq!(t.k_set().bounding_rect(), Rect::new(r.cols, r.rows));
    }

    #[test]
    fn uniform_grids_are_fixed(m in 3usize..=6, n in 3usize..=6, k in 2u16..=6, x in 1u16..=6) {
        let x = c(x.min(k));
        let g = TorusGrid::uniform(m, n, Palette::new(k).unwrap(), x).unwrap();
        let (next, changed) = step(&g, Rule::StubSm).unwrap();
        prop_assert_eq!(&next, &g);
        prop_assert!(changed.is_empty());
        let v = verdict(&g, Rule::StubSm).unwrap();
        prop_assert_eq!(v.rounds_to_fixpoint, 0);
        prop_assert_eq!(v.is_dynamo(), x == g.palette().top());
    }

    #[test]
    fn tiling_with_any_lower_colors_is_a_dynamo(
        rows in 1usize..=3, half in 2usize..=4, k in 3u16..=6,
        v in proptest::collection::vec(1u16..=5, 9 * 8),
    ) {
        let tile = strong_tiling(3 * rows, 2 * half).unwrap();
        let g = tile.map(Palette::new(k).unwrap(), |(i, j), x| {
            if x == c(2) { c(k) } else { c(1 + (v[i * 8 + j] - 1) % (k - 1)) }
        }).unwrap();
        prop_assert!(verdict(&g, Rule::StubSm).unwrap().is_dynamo());
    }
}

/// Window cells in the north-west frame: `k` border, interior pulled down
/// so the row and column chains hold. The anti-diagonal condition is left
/// to chance.
fn random_window(rng: &mut ChaCha8Rng) -> (TorusGrid, Corner, usize, usize) {
    let (m, n) = (rng.gen_range(3..=7), rng.gen_range(3..=7));
    let k = rng.gen_range(3..=7u16);
    let corner = Corner::ALL[rng.gen_range(0..4)];
    let (i_star, j_star) = (rng.gen_range(1..m), rng.gen_range(1..n));
    let base =
        TorusGrid::from_fn(m, n, Palette::new(k).unwrap(), |_| c(rng.gen_range(1..=k))).unwrap();
    let w = CornerWindow::new(&base, corner, i_star, j_star).unwrap();
    let (rows, cols) = w.local_dims();
    let mut local = vec![vec![k; cols]; rows];
    for i in 1..rows {
        for j in 1..cols {
            let cap = if i == 1 && j == 1 {
                k - 1
            } else {
                local[i - 1][j].min(local[i][j - 1])
            };
            let cap = if i == 1 || j == 1 {
                cap.min(k - 1)
            } else {
                cap
            };
            local[i][j] = rng.gen_range(1..=cap);
        }
    }
    let mut cells = base.cells().to_vec();
    for (i, row) in local.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            cells[base.index(w.to_torus((i, j)))] = c(v);
        }
    }
    (
        TorusGrid::new(m, n, base.palette(), cells).unwrap(),
        corner,
        i_star,
        j_star,
    )
}

#[test]
fn recurrence_matches_simulation_whenever_hypotheses_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..4000 {
        let (g, corner, i_star, j_star) = random_window(&mut rng);
        let w = CornerWindow::new(&g, corner, i_star, j_star).unwrap();
        if !check_window_hypotheses(&w).ok() {
            continue;
        }
        let pred = verify_window_prediction(&w).unwrap();
        assert!(pred.matches, "{corner}({i_star},{j_star}) on\n{g}");
        checked += 1;
    }
    assert!(
        checked > 500,
        "only {checked} windows passed the hypotheses"
    );
}

#[test]
fn accepted_profiles_give_dynamos() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut accepted = 0;
    for _ in 0..20000 {
        let k = rng.gen_range(3..=9u16);
        let m = rng.gen_range(3..=8usize);
        let rows: Vec<u16> = (1..m).map(|_| rng.gen_range(1..k)).collect();
        let profile = RowProfile::new(k, rows).unwrap();
        if !check_theorem_conditions(&profile).ok() {
            continue;
        }
        accepted += 1;
        for n in 3..=8 {
            let g = row_column_grid(&profile, n).unwrap();
            assert!(
                verdict(&g, Rule::StubSm).unwrap().is_dynamo(),
                "{profile:?} n={n}"
            );
        }
    }
    assert!(accepted > 50, "only {accepted} profiles accepted");
}

#[test]
fn monitors_fire_on_random_traces() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut fired = [0usize; 4];
    for _ in 0..400 {
        let (m, n, k) = (
            rng.gen_range(3..=6),
            rng.gen_range(3..=6),
            rng.gen_range(2..=6u16),
        );
        let g = TorusGrid::from_fn(m, n, Palette::new(k).unwrap(), |_| {
            if rng.gen_bool(0.4) {
                c(k)
            } else {
                c(rng.gen_range(1..=k))
            }
        })
        .unwrap();
        let report = monitor_report(&run(&g, Rule::StubSm, default_budget(&g)).unwrap()).unwrap();
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        for (acc, f) in fired.iter_mut().zip(report.fired) {
            *acc += f;
        }
    }
    for lemma in Lemma::ALL {
        assert!(fired[lemma as usize] > 0, "{lemma} never fired");
    }
}

#[test]
fn propnew_grids_meet_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let (m, n, k) = (
            rng.gen_range(3..=8),
            rng.gen_range(3..=8),
            rng.gen_range(2..=5u16),
        );
        let density = rng.gen_range(0.0..0.6);
        let g = propnew_grid(m, n, k, density, &mut rng).unwrap();
        let check = propnew_check(&g);
        assert!(check.applies);
        assert!(verdict(&g, Rule::StubSm).unwrap().is_dynamo());
        assert!(g.k_set().len() >= check.bound);
    }
}

#[test]
fn block_components_cover_the_peeled_mask() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..300 {
        let k = rng.gen_range(2..=4u16);
        let g = TorusGrid::from_fn(5, 6, Palette::new(k).unwrap(), |_| c(rng.gen_range(1..=k)))
            .unwrap();
        let mask = peel(&g, |x| x != g.palette().top(), 3);
        assert_eq!(union(&g, &components(&g, &mask)), mask_set(&g, &mask));
    }
}

#[test]
fn search_is_deterministic_and_filter_is_sound() {
    for (m, n, k) in [(3, 3, 2), (3, 3, 3)] {
        let spec = SearchSpec::new(m, n, k, DEFAULT_MAX_STATES).unwrap();
        let a = min_dynamo(&spec).unwrap();
        let b = min_dynamo(&spec).unwrap();
        assert_eq!(a, b);
        let filtered =
            min_dynamo(&spec.clone().with_filter(SearchFilter::NecessaryCondition)).unwrap();
        assert_eq!(filtered.min_size, a.min_size);
        assert_eq!(filtered.witness, a.witness);
        assert_eq!(filtered.dynamos, a.dynamos);
        assert!(filtered.examined < a.examined);
        assert!(verdict(&a.witness, Rule::StubSm).unwrap().is_dynamo());
        assert_eq!(a.witness.k_set().len(), a.min_size);
        assert!(a.min_size <= upper_bound_size(m, n));
        // Exhaustive: a blocked coloring is never a dynamo.
        for g in enumerate(&spec) {
            if necessary_condition(&g).is_blocked() {
                assert!(!verdict(&g, Rule::StubSm).unwrap().is_dynamo(), "{g}");
            }
        }
    }
}

#[test]
fn search_regression_values() {
    let r = min_dynamo(&SearchSpec::new(3, 3, 2, DEFAULT_MAX_STATES).unwrap()).unwrap();
    assert_eq!((r.min_size, r.dynamos), (4, 241));
    let r = min_dynamo(&SearchSpec::new(3, 4, 2, DEFAULT_MAX_STATES).unwrap()).unwrap();
    assert_eq!((r.min_size, r.dynamos), (5, 1729));
    let r = min_dynamo(&SearchSpec::new(3, 3, 3, DEFAULT_MAX_STATES).unwrap()).unwrap();
    assert_eq!((r.min_size, r.dynamos), (2, 5944));
    assert_eq!(
        r.witness,
        TorusGrid::parse("1 1 2\n1 2 3\n3 1 1", 3).unwrap()
    );
}
