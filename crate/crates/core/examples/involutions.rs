//! The two homogeneous involutions on `UT_n`: the flip along the
//! anti-diagonal, and its signed symplectic twin for even `n`.
//!
//! ```text
//! cargo run --example involutions
//! ```

use utstar::poly::MPoly;
use utstar::utmatrix::{involution_on_unit, is_homogeneous_involution};
use utstar::{Field, InvolutionKind, Result, Scalar, UtMatrix};

fn main() -> Result<()> {
    let n = 4;
    for kind in InvolutionKind::applicable(n) {
        println!("{kind} (epsilon = {:+}):", kind.epsilon());
        for (i, j) in [(1, 1), (1, 2), (1, 4), (2, 3)] {
            let (sign, (p, q)) = involution_on_unit(n, kind, i, j);
            println!("  e{i}{j} -> {sign:+} e{p}{q}");
        }
        println!("  homogeneous: {}", is_homogeneous_involution(n, kind));
    }

    // (ab)* = b* a* on concrete matrices
    let mut a = UtMatrix::identity(n, Field::Rationals);
    a.try_set(1, 2, MPoly::constant(Scalar::rational(2, 1)))?;
    a.try_set(2, 4, MPoly::constant(Scalar::rational(-1, 3)))?;
    let b = UtMatrix::unit(n, 3, 4, Field::Rationals)?;
    let kind = InvolutionKind::Symplectic;
    let lhs = a.mul(&b)?.apply_involution(kind)?;
    let rhs = b.apply_involution(kind)?.mul(&a.apply_involution(kind)?)?;
    println!("\n(ab)* =\n{lhs}");
    assert_eq!(lhs, rhs);
    println!("b* a* agrees");
    Ok(())
}
