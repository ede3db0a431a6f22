//! Runs a search in short node-budgeted slices, resuming from a checkpoint
//! file each time, and checks the result against an uninterrupted run.

use apn_search::classify::enumerate_classes;
use apn_search::search::{parallel_search, Checkpoint, RunOptions, SearchConfig, SearchContext};

fn main() -> apn_search::Result<()> {
    let t = enumerate_classes(5)
        .into_iter()
        .find(|t| t.class_id == 4)
        .expect("class 4");
    let cfg = SearchConfig::default();
    let ctx = SearchContext::new(&t, &cfg)?;
    let full = parallel_search(&ctx, &cfg, &RunOptions::default())?;

    let dir = std::env::temp_dir().join(format!("apn-ckpt-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("n5-class4.ckpt");
    let opts = RunOptions {
        threads: 1,
        checkpoint: Some(path.clone()),
        cancel: None,
    };
    let slice = SearchConfig {
        node_budget: Some(20_000),
        ..cfg.clone()
    };
    let mut slices = 0;
    let report = loop {
        slices += 1;
        let r = parallel_search(&ctx, &slice, &opts)?;
        if let Some(ck) = Checkpoint::load(&path)? {
            let done = ck.jobs.iter().filter(|j| j.status == apn_search::search::JobStatus::Done).count();
            println!("slice {slices}: {:?}, {} nodes, {done}/{} jobs done", r.stop, r.nodes_visited, ck.jobs.len());
        }
        if r.exhausted {
            break r;
        }
    };
    println!(
        "resumed run: {} nodes, {} solutions; uninterrupted: {} nodes, {} solutions",
        report.nodes_visited,
        report.solutions.len(),
        full.nodes_visited,
        full.solutions.len()
    );
    assert_eq!(report.solutions, full.solutions);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
