//! For regular polytopes (every vertex cone generated by a lattice
//! basis) the face formula collapses to a single product of boundary
//! operators — no characters, no face enumeration. The collapsed path
//! refuses singular input with a witness vertex.

use wem::emnd::EmContext;
use wem::error::Error;
use wem::multipoly::MultiPolynomial;
use wem::polytope::samples;
use wem::rational::Rational;

fn main() -> wem::error::Result<()> {
    let ctx = EmContext::new(samples::rectangle(3, 2))?;
    let f = MultiPolynomial::monomial(vec![1, 1], Rational::one());

    for q in [Rational::new(1, 2), Rational::one(), Rational::from_int(2)] {
        let collapsed = ctx.regular_main_term(&q, &f)?;
        let generic = ctx.exact_polynomial_sum(&q, &f)?;
        println!("q = {q:>3}: collapsed = {collapsed:>6}, generic = {generic:>6}");
        assert_eq!(collapsed, generic);
    }

    // The parallelogram spanned by (2,1) and (1,2) has vertex cones of
    // index 3, so the collapsed path must refuse it.
    let singular = EmContext::new(samples::parallelogram())?;
    match singular.regular_main_term(&Rational::one(), &MultiPolynomial::one(2)) {
        Err(Error::NotRegular { vertex, index }) => {
            println!("refused: vertex {vertex:?} has cone index {index}");
        }
        other => panic!("expected a regularity refusal, got {other:?}"),
    }
    Ok(())
}
