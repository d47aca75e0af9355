//! The symbolic layer: weighted boundary operators as truncated power
//! series with cyclotomic coefficients, their periodized remainder
//! kernels, and the symmetry that swaps q with 1 - q while reversing
//! the series variable.

use wem::cyclotomic::Cyc;
use wem::kernels::{chi_series, OperatorPolynomial, PeriodizedKernel};
use wem::rational::Rational;

fn main() -> wem::error::Result<()> {
    let q = Rational::new(1, 3);

    // Untwisted operator: q + (Bernoulli-style corrections) S + ...
    let op = OperatorPolynomial::untwisted(&q, 6);
    println!("untwisted operator coefficients at q = {q}:");
    for i in 0..=6 {
        println!("  S^{i}: {}", op.coefficient(i).to_complex());
    }

    // Twisted by lambda = -1: coefficients live in a cyclotomic field.
    let lambda = Cyc::root_of_unity(&Rational::new(1, 2));
    let twisted = OperatorPolynomial::twisted(&q, &lambda, 4)?;
    println!("twisted by lambda = -1:");
    for i in 0..=4 {
        println!("  S^{i}: {}", twisted.coefficient(i).to_complex());
    }

    // Swapping q for 1 - q mirrors the series: chi_{1-q}(-S) = chi_q(S).
    let bound = 8;
    let left = chi_series(&q, bound);
    let right = chi_series(&(Rational::one() - &q), bound).flip_sign();
    let mirrored = (0..=bound).all(|m| left.coeff(m).sub(&right.coeff(m)).is_zero());
    println!("mirror symmetry across q <-> 1 - q: {mirrored}");
    assert!(mirrored);

    // Remainder kernels: periodized Bernoulli-style piecewise polynomials.
    // They vanish at integers and have mean zero over a period.
    let kernel = PeriodizedKernel::periodized_bernoulli(3);
    println!("degree-3 kernel samples:");
    for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("  K({x:.2}) = {:+.6}", kernel.eval_f64(x).re);
    }
    println!("mean over one period = {}", kernel.mean_over_period()?.to_complex());
    Ok(())
}
