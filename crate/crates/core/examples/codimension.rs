//! The codimension sequence `c_m`, its per-`l` breakdown, and how it
//! compares to the predicted asymptotic.
//!
//! ```text
//! cargo run --release --example codimension -- 3 16
//! ```

use utstar::codim::{codimension, exponent_estimate, Method};
use utstar::scalar::decimal_half_even;
use utstar::{InvolutionKind, Result};

fn main() -> Result<()> {
    let arg = |k: usize, d: usize| {
        std::env::args()
            .nth(k)
            .and_then(|a| a.parse().ok())
            .unwrap_or(d)
    };
    let (n, max_m) = (arg(1, 3), arg(2, 12));
    let kind = InvolutionKind::Orthogonal;

    println!("{:>3} {:>24} {:>10}  omegas", "m", "c_m", "ratio");
    for m in 1..=max_m {
        let r = codimension(n, m, kind, Method::Enumerate)?;
        let ratio = r
            .ratio
            .as_ref()
            .map(|x| decimal_half_even(x, 4))
            .unwrap_or_else(|| "-".into());
        let omegas: Vec<String> = r
            .omegas
            .iter()
            .map(|e| format!("{}<={}", e.value, e.bound))
            .collect();
        println!(
            "{m:>3} {:>24} {ratio:>10}  {}",
            r.c_m.to_string(),
            omegas.join(" ")
        );
    }

    if n > 1 {
        for m in [max_m, 2 * max_m, 4 * max_m] {
            let e = exponent_estimate(n, m, kind, 24)?;
            println!("c_{m}^(1/{m}) ~ {}", decimal_half_even(&e.lo, 6));
        }
        println!("(tends to {n})");
    }
    Ok(())
}
