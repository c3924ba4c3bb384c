//! One-off runner that measures the matrix-lemma constants for the fixtures.

use hslab_core::higgs::sampling::{gap_ratio_oracle, projection_oracle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    for r in [2usize, 3] {
        for seed in [1u64, 2, 3] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = gap_ratio_oracle(&mut rng, r, 1_000_000);
            println!(
                "rank {r} seed {seed}: min_ratio {:.9} sentinel_skips {} max|λ|/|A| {:.12} eig_violations {}",
                g.min_ratio, g.sentinel_skips, g.max_eig_over_norm, g.eig_bound_violations
            );
        }
        for seed in [1u64, 2, 3] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
            let p = projection_oracle(&mut rng, r, 100_000);
            println!(
                "rank {r} seed {seed}: max_chi {:.6} min_comm_ratio {:.6} skipped {}",
                p.max_chi, p.min_commutator_ratio, p.skipped_degenerate
            );
        }
    }
}
