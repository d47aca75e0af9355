//! Weighted lattice counts: every lattice point of a polytope contributes
//! q^(number of facets it lies on), so q interpolates between the interior
//! count (q = 0), the full count (q = 1), and reflexive-style weightings.

use wem::multipoly::MultiPolynomial;
use wem::polytope::samples;
use wem::rational::Rational;

fn main() -> wem::error::Result<()> {
    let shapes = [
        ("unit square", samples::unit_square()),
        ("triangle 2x + y <= 2", samples::slanted_triangle(1)),
        ("parallelogram", samples::parallelogram()),
        ("unit cube", samples::unit_cube()),
    ];
    let weights = [
        Rational::zero(),
        Rational::new(1, 2),
        Rational::one(),
        Rational::from_int(2),
    ];

    for (name, p) in shapes {
        let one = MultiPolynomial::one(p.dimension());
        println!("{name}: {} lattice points", p.lattice_points().len());
        for q in &weights {
            let count = p.weighted_polynomial_sum(q, &one)?;
            println!("  q = {q:>4}  weighted count = {count}");
        }
        println!();
    }

    // The weight records boundary depth: a vertex of the square sits on
    // two facets, an edge point on one, an interior point on none.
    let square = samples::rectangle(2, 2);
    for point in square.lattice_points() {
        let depth = square.active_facets(&point).len();
        println!("point {point:?} lies on {depth} facet(s)");
    }
    Ok(())
}
