//! Small random instances for exhaustive cross-checks against the oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::ScpInstance;

/// A random instance with `1..=max_rows` rows, `1..=max_cols` columns and
/// integer costs in `1..=max_cost`. Row densities vary between instances so
/// both sparse and dense matrices show up.
pub fn random_tiny(seed: u64, max_rows: usize, max_cols: usize, max_cost: u32) -> ScpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=max_rows);
    let n = rng.gen_range(1..=max_cols);
    let density = rng.gen_range(0.15..0.65);
    let rows = (0..m)
        .map(|_| {
            let mut row: Vec<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
            if row.is_empty() {
                row.push(rng.gen_range(0..n));
            }
            row
        })
        .collect();
    let costs = (0..n).map(|_| f64::from(rng.gen_range(1..=max_cost))).collect();
    ScpInstance::new(costs, rows).expect("generated rows are non-empty and in range")
}
