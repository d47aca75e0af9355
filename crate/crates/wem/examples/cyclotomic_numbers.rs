//! Exact arithmetic with roots of unity: numbers live in a fixed
//! cyclotomic field as rational coordinate vectors, so character sums
//! cancel exactly — no floating point, no epsilon.

use wem::cyclotomic::{multiplicative_order, Cyc};
use wem::rational::Rational;

fn main() -> wem::error::Result<()> {
    // A primitive sixth root of unity.
    let zeta = Cyc::root_of_unity(&Rational::new(1, 6));
    println!("zeta      = {}", zeta.to_complex());
    println!("order     = {}", multiplicative_order(&zeta)?);

    // zeta^6 = 1 exactly, and 1 + zeta^2 + zeta^4 = 0 exactly.
    let sixth = zeta.pow(6)?;
    println!("zeta^6    = {} (is_one: {})", sixth.to_complex(), sixth.is_one());
    let sum = Cyc::one().add(&zeta.pow(2)?).add(&zeta.pow(4)?);
    println!("1 + zeta^2 + zeta^4 is zero: {}", sum.is_zero());

    // Arithmetic stays exact through division and mixed denominators.
    let a = zeta.scale(&Rational::new(3, 7));
    let b = Cyc::root_of_unity(&Rational::new(1, 4)).scale(&Rational::new(2, 5));
    let quotient = a.div(&b)?.mul(&b);
    println!("(a / b) * b == a: {}", quotient.sub(&a).is_zero());

    // Numbers with no twist collapse to plain rationals.
    let plain = a.mul(&zeta.pow(-1)?);
    println!(
        "a * zeta^-1 = {:?} (rational part of a cyclotomic number)",
        plain.rational_part()
    );
    Ok(())
}
