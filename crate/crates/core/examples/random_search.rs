//! Randomized search (shuffled candidate orders, no canonical check) on a
//! class too large for exhaustive search.
//!
//!     cargo run --release --example random_search -- 7 1 60 [seed]

use std::time::Duration;

use apn_search::classify::enumerate_classes;
use apn_search::dedup::{group, known_fixtures};
use apn_search::search::{random_search, SearchConfig};

fn main() -> apn_search::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, d: u64| args.get(i).map_or(d, |s| s.parse().expect("number"));
    let (n, class, secs, seed) = (arg(0, 7) as usize, arg(1, 1) as usize, arg(2, 30), arg(3, 0));
    let t = enumerate_classes(n)
        .into_iter()
        .find(|t| t.class_id == class)
        .expect("class id");
    let cfg = SearchConfig {
        max_solutions: Some(1),
        ..SearchConfig::randomized(Duration::from_secs(secs), seed)
    };
    println!("random search on {} for {secs}s (seed {seed})", t.describe());
    let report = random_search(&t, &cfg)?;
    println!("{:?} after {} nodes", report.stop, report.nodes_visited);
    for g in group(&report.solutions, known_fixtures(n))? {
        println!("found: {}", g.known_match.as_deref().unwrap_or("inequivalent to all known"));
    }
    Ok(())
}
