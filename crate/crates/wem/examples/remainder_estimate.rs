//! Sizing the remainder: the leftover after the order-k main term is
//! controlled by L1 norms of high derivatives of the summand. The ratio
//! of the two stays in a narrow band across a family of bumps — the
//! constant depends on the polytope and the order, not on the function.

use wem::emnd::EmContext;
use wem::polytope::samples;
use wem::rational::Rational;
use wem::smooth::{Bump1d, SeparableNd, SmoothFunction1d};

fn main() -> wem::error::Result<()> {
    let ctx = EmContext::new(samples::slanted_triangle(1))?;
    let q = Rational::new(1, 3);
    let xi = vec![1, 1];

    for k in [2, 3] {
        println!("order {k}:");
        for radius in [1.4, 1.5, 1.6] {
            let f = SeparableNd::new(vec![
                Box::new(Bump1d::new(0.9, radius)) as Box<dyn SmoothFunction1d + Send>,
                Box::new(Bump1d::new(0.4, radius)),
            ]);
            // The kernel-integral cross-check is skipped: only the size
            // of the sum-minus-main remainder matters here.
            let s = ctx.smooth_sum_without_remainder_formula(&f, &q, &xi, k, 1e-8)?;
            let est = EmContext::remainder_estimate(
                f.factors(),
                s.remainder_difference,
                k,
            )?;
            println!(
                "  radius {radius:.1}: |remainder| = {:.3e}, derivative bound = {:.3e}, ratio = {:.3e}",
                est.remainder.abs(),
                est.derivative_bound,
                est.ratio
            );
        }
    }
    Ok(())
}
