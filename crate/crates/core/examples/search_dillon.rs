//! Exhaustive search of the n = 6 class with an order-7 self-equivalence.
//! Every solution shares its fingerprint with Dillon's permutation.

use apn_search::classify::enumerate_classes;
use apn_search::dedup::{group, known_fixtures};
use apn_search::search::{parallel_search, RunOptions, SearchConfig, SearchContext};

fn main() -> apn_search::Result<()> {
    let t = enumerate_classes(6)
        .into_iter()
        .find(|t| t.paper_class == Some(5))
        .expect("class 5");
    println!("searching {}", t.describe());
    let cfg = SearchConfig::default();
    let ctx = SearchContext::new(&t, &cfg)?;
    println!("canonical check uses {} commutant pairs", ctx.pair_count());
    let report = parallel_search(&ctx, &cfg, &RunOptions::default())?;
    println!(
        "{} solutions, {} nodes, {:.1?}, exhausted = {}",
        report.solutions.len(),
        report.nodes_visited,
        report.elapsed,
        report.exhausted
    );
    for g in group(&report.solutions, known_fixtures(6))? {
        println!(
            "{:>4} member(s)  {}  {:?}",
            g.members.len(),
            &g.fingerprint.digest()[..16],
            g.known_match
        );
    }
    if let Some(s) = report.solutions.first() {
        println!("first solution: {}", s.to_hex_line());
    }
    Ok(())
}
