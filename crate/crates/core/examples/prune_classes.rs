//! Applies the two pruning filters and compares with the published verdicts.
//!
//!     cargo run --example prune_classes -- 8

use apn_search::classify::enumerate_classes;
use apn_search::prune::{admissibility, render_table1, table1_rows, verify_witness, VerdictKind};

fn main() -> apn_search::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(Ok(7), |s| s.parse()).expect("n");
    let classes = enumerate_classes(n);
    if (6..=8).contains(&n) {
        let rows = table1_rows(n, &classes)?;
        print!("{}", render_table1(n, &rows));
        return Ok(());
    }
    for t in &classes {
        let v = admissibility(t);
        let checked = if v.kind == VerdictKind::Undecided { "" } else if verify_witness(t, &v) { " (witness ok)" } else { " (BAD WITNESS)" };
        println!("{:>3}  {:?}{checked}", t.class_id, v.kind);
    }
    Ok(())
}
