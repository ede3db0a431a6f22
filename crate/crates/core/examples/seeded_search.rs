//! Pre-fills the fixed space of A with x^3 on F_8 before searching, for a
//! class whose self-equivalence fixes a 3-dimensional subspace.
//!
//!     cargo run --release --example seeded_search -- 600

use std::time::Duration;

use apn_search::classify::enumerate_classes;
use apn_search::search::{
    parallel_search, seed_fixed_points, RunOptions, SearchConfig, SearchContext,
};
use apn_search::vbf::{monomial_lut, FiniteField};

fn main() -> apn_search::Result<()> {
    let secs: u64 = std::env::args().nth(1).map_or(30, |s| s.parse().expect("seconds"));
    let t = enumerate_classes(6)
        .into_iter()
        .find(|t| t.paper_class == Some(14))
        .expect("class 14");
    let g3 = monomial_lut(&FiniteField::with_default_modulus(3)?, 3);
    let seed = seed_fixed_points(&t, &g3)?;
    println!("{}: {} entries fixed in advance", t.describe(), seed.defined_count());
    let cfg = SearchConfig {
        seed_fixed_points: true,
        time_budget: Some(Duration::from_secs(secs)),
        ..SearchConfig::default()
    };
    let ctx = SearchContext::new(&t, &cfg)?;
    println!("{} canonical-check pairs preserve the seed", ctx.pair_count());
    let r = parallel_search(&ctx, &cfg, &RunOptions::default())?;
    println!(
        "{:?}: {} solutions, {} nodes in {:.1?}, exhausted = {}",
        r.stop,
        r.solutions.len(),
        r.nodes_visited,
        r.elapsed,
        r.exhausted
    );
    Ok(())
}
