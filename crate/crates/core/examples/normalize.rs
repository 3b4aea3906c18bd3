//! Rewriting graded *-monomials to normal form, with the rule trace.
//!
//! ```text
//! cargo run --example normalize -- 4 "x1[a2] x2'"
//! ```

use utstar::freestar::{StarMonomial, StarPoly};
use utstar::normal::{normalize, normalize_traced};
use utstar::oracle::generic_eval_poly;
use utstar::{Field, InvolutionKind, Result};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let inputs: Vec<String> = args.collect();
    let inputs = if inputs.is_empty() {
        vec![
            "x1' x2[a1] x3[a2]".to_string(),
            "x2[a1] x1' x3[a2]".to_string(),
            "x2[a1.a2]' x1".to_string(),
            "x2[a2]' x3 x1[a1]'".to_string(),
            "x1[a2] x2[a1]".to_string(),
            "x1 x2' x1'".to_string(),
        ]
    } else {
        inputs
    };
    let field = Field::Rationals;
    for kind in InvolutionKind::applicable(n) {
        println!("== UT_{n}, {kind}");
        for text in &inputs {
            let m = StarMonomial::parse(text, n - 1, field)?;
            println!("{}", normalize_traced(n, kind, field, &m)?);
            // the rewrite never changes the generic evaluation
            let p = StarPoly::from_monomial(m);
            let q = normalize(n, kind, field, &p)?;
            assert_eq!(
                generic_eval_poly(n, kind, &p)?,
                generic_eval_poly(n, kind, &q)?
            );
        }
    }
    Ok(())
}
