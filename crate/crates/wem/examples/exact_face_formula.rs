//! The exact summation formula: a weighted polynomial sum over lattice
//! points equals a finite sum of contributions, one per pair of a face
//! and a character that is flat on that face. Each contribution is a
//! cyclotomic number; the total is rational and matches brute force.

use wem::emnd::EmContext;
use wem::multipoly::MultiPolynomial;
use wem::polytope::samples;
use wem::rational::Rational;

fn main() -> wem::error::Result<()> {
    let ctx = EmContext::new(samples::parallelogram())?;
    let p = ctx.polytope();
    let q = Rational::new(1, 3);

    // f(x, y) = x^2 + y, summed with weight q^(facets through the point).
    let f = MultiPolynomial::monomial(vec![2, 0], Rational::one())
        .add(&MultiPolynomial::monomial(vec![0, 1], Rational::one()));
    let k = f.total_degree() as usize + p.dimension() + 1;

    println!("face contributions at order {k}:");
    let mut total = wem::cyclotomic::Cyc::zero();
    for c in ctx.face_contributions(&q, &f, k)? {
        let face = &p.faces()[c.face];
        println!(
            "  face {:>2} (facets {:?}), character {}: {}",
            c.face,
            face.facets,
            c.element,
            c.value.to_complex()
        );
        total = total.add(&c.value);
    }

    let formula = total
        .rational_part()
        .expect("character contributions sum to a rational number");
    let direct = p.weighted_polynomial_sum(&q, &f)?;
    println!("formula total  = {formula}");
    println!("direct sum     = {direct}");
    assert_eq!(formula, direct);
    Ok(())
}
