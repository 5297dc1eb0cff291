//! Seeded grid fixtures for the benchmarks.

use mcdynamo_core::{Color, Palette, TorusGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random `m x n` coloring where each cell is `k` with probability
/// `p_top` and otherwise uniform over `1..=k`.
pub fn random_grid(m: usize, n: usize, k: u16, p_top: f64, seed: u64) -> TorusGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let palette = Palette::new(k).expect("k >= 2");
    TorusGrid::from_fn(m, n, palette, |_| {
        if rng.gen_bool(p_top) {
            palette.top()
        } else {
            Color::Finite(rng.gen_range(1..=k))
        }
    })
    .expect("valid dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_seeded() {
        assert_eq!(random_grid(8, 8, 5, 0.3, 1), random_grid(8, 8, 5, 0.3, 1));
        assert_ne!(random_grid(8, 8, 5, 0.3, 1), random_grid(8, 8, 5, 0.3, 2));
        assert!(random_grid(4, 4, 3, 1.0, 0).is_uniform(Color::Finite(3)));
    }
}
