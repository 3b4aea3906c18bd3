//! Reduced words in the free group that grades `UT_n`, and the reversing
//! star `a_i -> a_{n-i}`.
//!
//! ```text
//! cargo run --example free_group
//! ```

use utstar::grading::{deg_unit, support_lookup};
use utstar::{GroupWord, Result};

fn main() -> Result<()> {
    let n = 4;
    let rank = n - 1;

    let u = GroupWord::parse("a1.a2", rank)?;
    let v = GroupWord::parse("a2^-1.a3", rank)?;
    println!("u = {u}, v = {v}");
    println!("u v = {}   (free reduction)", u.mul(&v)?);
    println!("u^-1 = {}", u.inverse());
    println!("u* = {}, (u v)* = {} = v* u*", u.star(), u.mul(&v)?.star());

    println!("\ndegrees of the matrix units of UT_{n}:");
    println!("  diagonal: {}", GroupWord::identity(rank));
    for i in 1..n {
        for j in i + 1..=n {
            print!("  e{i}{j}: {:<10}", deg_unit(n, i, j)?.to_string());
        }
        println!();
    }

    // only consecutive products of generators are supported by a unit
    for text in ["a2.a3", "a3.a2", "a1.a1"] {
        let g = GroupWord::parse(text, rank)?;
        match support_lookup(n, &g) {
            Some((i, j)) => println!("{g} is the degree of e{i}{j}"),
            None => println!("{g} is outside the support"),
        }
    }
    Ok(())
}
