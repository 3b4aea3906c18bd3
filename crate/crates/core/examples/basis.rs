//! Normal monomials that span (and are independent in) the relatively
//! free algebra, multilinear or general, over `Q` or `F_p`.
//!
//! ```text
//! cargo run --example basis -- 3 2 3
//! ```

use utstar::normal::{count_basis, enumerate_basis};
use utstar::{Field, InvolutionKind, Result};

fn main() -> Result<()> {
    let arg = |k: usize, d: usize| {
        std::env::args()
            .nth(k)
            .and_then(|a| a.parse().ok())
            .unwrap_or(d)
    };
    let (n, l, m) = (arg(1, 3), arg(2, 2), arg(3, 3));
    let kind = InvolutionKind::Orthogonal;

    let basis = enumerate_basis(n, kind, Field::Rationals, l, m, true)?;
    println!(
        "UT_{n}, {kind}, l = {l}, m = {m}: {} multilinear normal monomials",
        basis.len()
    );
    for b in &basis {
        println!("  {b}   chain {:?}", b.chain());
    }

    // over a small field exponents are reduced by x^q = x
    let field: Field = "fp:3".parse()?;
    let d = m + 2;
    let multi = count_basis(n, kind, field, l, d, true)?;
    let general = count_basis(n, kind, field, l, d, false)?;
    println!("over {field}, degree {d}: {multi} multilinear, {general} in total");
    Ok(())
}
