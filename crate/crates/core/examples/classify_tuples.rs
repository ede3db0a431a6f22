//! Lists the classes of self-equivalence tuples (B, A) of prime order.
//!
//!     cargo run --example classify_tuples -- 6

use apn_search::classify::enumerate_classes;
use apn_search::gf2::fixed_space;

fn main() -> apn_search::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(Ok(6), |s| s.parse()).expect("n");
    let classes = enumerate_classes(n);
    println!("{} classes for n = {n}", classes.len());
    for t in &classes {
        let published = t.paper_class.map_or("-".to_string(), |c| c.to_string());
        println!(
            "{:>3} (published {published:>2})  p={:<4} dim Fix = {}  {}",
            t.class_id,
            t.p,
            fixed_space(&t.a, 1).dim,
            t.describe()
        );
    }
    Ok(())
}
