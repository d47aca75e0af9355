//! One-dimensional formulas: the classical interval formula with weight
//! q at both endpoints, and its twisted counterpart where the summand
//! carries a root-of-unity character lambda^n. Both report the remainder
//! two ways — as sum minus main term, and as an explicit kernel integral
//! — and the two must agree.

use wem::cyclotomic::Cyc;
use wem::em1d::{em_interval, em_twisted_ray};
use wem::rational::Rational;
use wem::smooth::{Bump1d, CutoffPolynomial1d};

fn main() -> wem::error::Result<()> {
    let q = Rational::new(1, 3);

    // Weighted sum of a bump over the lattice points of [0, 6].
    let bump = Bump1d::new(2.5, 2.2);
    println!("interval [0, 6], weight q = {q}:");
    for m in [1, 2, 4, 6] {
        let r = em_interval(&bump, 0, 6, &q, m, 1e-10)?;
        println!(
            "  order {m}: sum = {:.12}, main = {:.12}, remainder routes agree to {:.1e}",
            r.sum, r.main_term, r.agreement()
        );
    }

    // Twisted ray: q f(0) + sum_{n >= 1} lambda^n f(n) for lambda = i.
    // The main term uses twisted boundary operators; no integral term
    // survives because the character has mean zero.
    let f = CutoffPolynomial1d::new(vec![1.0, 0.4, -0.05], 4.0, 1.5);
    let lambda = Cyc::root_of_unity(&Rational::new(1, 4));
    println!("ray with character lambda = i:");
    for k in [2, 3, 5] {
        let r = em_twisted_ray(&f, &q, &lambda, k, 1e-10)?;
        println!(
            "  order {k}: sum = {:.12}, main = {:.12}, agreement {:.1e}",
            r.sum, r.main_term, r.agreement()
        );
    }
    Ok(())
}
