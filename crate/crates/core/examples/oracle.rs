//! The brute-force oracle: generic evaluation into `UT_n` over a
//! polynomial ring, exact ranks, and `omega` recomputed from scratch.
//!
//! ```text
//! cargo run --release --example oracle
//! ```

use utstar::codim::{self, Method};
use utstar::freestar::StarMonomial;
use utstar::oracle::{eval_vector, generic_eval, omega_oracle, omega_oracle_cost};
use utstar::{Field, InvolutionKind, Result};

fn main() -> Result<()> {
    let (n, kind) = (3, InvolutionKind::Orthogonal);
    let m = StarMonomial::parse("x1' x2[a1] x3", n - 1, Field::Rationals)?;
    println!("generic image of {m}:\n{}", generic_eval(n, kind, &m)?);
    println!("as a sparse vector: {}", eval_vector(n, kind, &m)?);

    println!("\n l  m   enumerate   oracle   evaluations");
    for (l, m) in [(0, 3), (1, 3), (2, 3), (1, 4), (2, 5)] {
        let e = codim::omega(n, l, m, kind, Field::Rationals, Method::Enumerate)?;
        let o = omega_oracle(n, kind, l, m)?;
        println!(
            "{l:>2} {m:>2} {e:>11} {o:>8} {:>13}",
            omega_oracle_cost(n, l, m)
        );
        assert_eq!(e, o);
    }
    Ok(())
}
