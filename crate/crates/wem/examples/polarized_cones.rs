//! Polarized cone decomposition: a generic direction turns the polytope
//! sum into a signed sum of simple vertex-cone sums. Cones whose edges
//! point against the direction are flipped; each flip negates the sign
//! and swaps the apex weight q for 1 - q.

use wem::emnd::EmContext;
use wem::polytope::samples;
use wem::rational::Rational;

fn main() -> wem::error::Result<()> {
    let ctx = EmContext::new(samples::slanted_triangle(2))?;
    let p = ctx.polytope();
    let xi = vec![1, 1];

    let pol = p.polarize(&xi)?;
    println!("direction {xi:?}:");
    for (v_idx, v) in p.vertices().iter().enumerate() {
        let flips = pol.flip_count(v_idx);
        let sign = if flips % 2 == 0 { '+' } else { '-' };
        let edges: Vec<Vec<Rational>> = (0..p.dimension())
            .map(|k| pol.edge(p, v_idx, k))
            .collect();
        println!("  vertex {:?}: {flips} flip(s), sign {sign}, edges {edges:?}", v.point);
    }

    // The signed cone sums reproduce the direct sum for any lattice
    // function supported in a declared box.
    let support: Vec<(i64, i64)> = p
        .bounding_box()
        .iter()
        .map(|&(lo, hi)| (lo - 1, hi + 1))
        .collect();
    let boxed = support.clone();
    let f = move |x: &[i64]| -> Rational {
        if x.iter().zip(&boxed).any(|(&c, &(lo, hi))| c < lo || c > hi) {
            return Rational::zero();
        }
        Rational::from_int((x[0] + 2) * (x[1] + 3))
    };

    let q = Rational::new(2, 5);
    let direct = p.weighted_sum_exact(&q, &f);
    for xi in [vec![1, 1], vec![-3, 1], vec![5, -7]] {
        let decomposed = ctx.polarized_sum_exact(&q, &xi, &support, &f)?;
        println!("xi = {xi:?}: decomposed = {decomposed} (direct = {direct})");
        assert_eq!(decomposed, direct);
    }
    Ok(())
}
