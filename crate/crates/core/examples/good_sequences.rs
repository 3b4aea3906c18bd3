//! Good degree sequences (chains `i_1 < ... < i_{l+1}`), their symmetric
//! stretches, and the pigeonhole bound on how many there must be.
//!
//! ```text
//! cargo run --example good_sequences -- 5
//! ```

use itertools::Itertools;
use utstar::grading::{check_shelf_bound, good_sequences, symmetric_subsequences};
use utstar::Result;

fn main() -> Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4);
    for l in 0..n {
        let seqs = good_sequences(n, l);
        println!("l = {l}: {} good sequences", seqs.len());
        for gs in seqs {
            let sym = symmetric_subsequences(n, &gs.degrees.0)?;
            let shelf = match check_shelf_bound(n, &gs.degrees.0) {
                Ok(r) => format!("  {} >= {}", r.count, r.bound),
                Err(_) => String::new(),
            };
            println!(
                "  chain {:?}  [{}]  symmetric {:?}{shelf}",
                gs.chain,
                gs.degrees.0.iter().join(", "),
                sym
            );
        }
    }
    Ok(())
}
