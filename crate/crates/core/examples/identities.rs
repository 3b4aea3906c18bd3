//! Instantiating the generators of the ideal of graded *-identities and
//! checking each one against generic (char 0) or exhaustive (`F_p`)
//! evaluation.
//!
//! ```text
//! cargo run --example identities
//! ```

use utstar::freestar::{StarMonomial, StarPoly};
use utstar::oracle::{identity_witness, verify_theorem_identities, DEFAULT_BUDGET};
use utstar::{Field, InvolutionKind, Result};

fn main() -> Result<()> {
    for (n, kind, field) in [
        (3, InvolutionKind::Orthogonal, Field::Rationals),
        (4, InvolutionKind::Symplectic, Field::Rationals),
        (2, InvolutionKind::Orthogonal, Field::Prime(3)),
    ] {
        let report = verify_theorem_identities(n, kind, field, DEFAULT_BUDGET)?;
        println!(
            "UT_{n} {kind} over {field}: {} generators, items {:?}, all vanish: {}",
            report.checks.len(),
            report.items(),
            report.all_passed()
        );
        for c in report.checks.iter().take(3) {
            println!("    ({}) {}", c.item, c.identity);
        }
    }

    // x - x* vanishes on the unit e12 of UT_2 exactly when it is fixed
    let field = Field::Rationals;
    let p = StarPoly::from_monomial(StarMonomial::parse("x1[a1]", 1, field)?);
    let q = p.sub(&p.star());
    for kind in InvolutionKind::applicable(2) {
        match identity_witness(2, kind, field, &q, DEFAULT_BUDGET)? {
            None => println!("{kind}: {q} vanishes"),
            Some(w) => println!("{kind}: {q} does not vanish: {w}"),
        }
    }
    Ok(())
}
