//! One-dimensional weighted summation formulas.
//!
//! Three regimes share one shape: a boundary-weighted lattice sum equals
//! an integral-plus-boundary-derivatives main term plus a kernel-weighted
//! remainder integral. Intervals carry the untwisted operator at both
//! endpoints; rays carry it at their single endpoint; twisted rays sum
//! against powers of a root of unity and use the twisted operator, whose
//! vanishing constant term removes the integral term entirely.
//!
//! Reports carry the direct sum, the main term, and the remainder computed
//! both ways (kernel integral, and sum minus main term); agreement of the
//! two remainder routes is the correctness check.

use num::complex::Complex64;

use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};
use crate::kernels::{multiplicative_order, OperatorPolynomial, PeriodizedKernel};
use crate::quad::integrate_with_breakpoints;
use crate::rational::Rational;
use crate::smooth::{SmoothFunction1d, Support};

/// Quadrature cut points for summand integrals over [a, b]: every
/// integer in range (periodized kernels have corners there) plus the
/// support edges of `f`, so that panel ends sit on the edges where a
/// compactly supported factor concentrates its boundary layers. A panel
/// straddling an edge can otherwise sample only zeros and report a
/// confident zero.
fn summand_cuts(a: f64, b: f64, support: &Support) -> Vec<f64> {
    let mut cuts: Vec<f64> = ((a.floor() as i64)..=(b.ceil() as i64))
        .map(|n| n as f64)
        .collect();
    cuts.extend(support.lower);
    cuts.extend(support.upper);
    cuts
}

/// A smooth function precomposed with a translation: y -> f(y + shift).
struct Shifted<'a> {
    inner: &'a dyn SmoothFunction1d,
    shift: f64,
}

impl SmoothFunction1d for Shifted<'_> {
    fn jet(&self, x: f64, order: usize) -> crate::jet::Jet {
        self.inner.jet(x + self.shift, order)
    }

    fn support(&self) -> Support {
        let s = self.inner.support();
        Support {
            lower: s.lower.map(|v| v - self.shift),
            upper: s.upper.map(|v| v - self.shift),
        }
    }
}

/// Result of a one-dimensional summation formula. Untwisted runs keep
/// every imaginary part exactly zero.
#[derive(Clone, Copy, Debug)]
pub struct Em1dReport {
    /// The weighted lattice sum, evaluated directly.
    pub sum: Complex64,
    /// Integral term plus boundary-derivative terms.
    pub main_term: Complex64,
    /// Remainder from the kernel-integral formula.
    pub remainder_formula: Complex64,
    /// Remainder as sum minus main term.
    pub remainder_difference: Complex64,
    /// Accumulated quadrature error estimate.
    pub quad_error: f64,
}

impl Em1dReport {
    /// Discrepancy between the two remainder routes.
    pub fn agreement(&self) -> f64 {
        (self.remainder_formula - self.remainder_difference).norm()
    }
}

/// q f(a) + f(a+1) + ... + f(b-1) + q f(b).
pub fn weighted_interval_sum(f: &dyn SmoothFunction1d, a: i64, b: i64, q: &Rational) -> f64 {
    assert!(a <= b);
    let qf = q.to_f64();
    if a == b {
        return qf * f.value(a as f64);
    }
    let mut total = qf * (f.value(a as f64) + f.value(b as f64));
    for n in a + 1..b {
        total += f.value(n as f64);
    }
    total
}

/// q f(a) + sum_{n > a} f(n), for f vanishing beyond its support bound.
pub fn weighted_ray_sum(f: &dyn SmoothFunction1d, a: i64, q: &Rational) -> Result<f64> {
    let upper = f.support().upper.ok_or(Error::UnboundedSupport)?;
    let hi = upper.ceil() as i64;
    let mut total = q.to_f64() * f.value(a as f64);
    for n in a + 1..=hi {
        total += f.value(n as f64);
    }
    Ok(total)
}

/// q f(0) + sum_{n >= 1} lambda^n f(n).
pub fn twisted_ray_sum(
    f: &dyn SmoothFunction1d,
    q: &Rational,
    lambda: Complex64,
) -> Result<Complex64> {
    let upper = f.support().upper.ok_or(Error::UnboundedSupport)?;
    let hi = upper.ceil() as i64;
    let mut total = Complex64::new(q.to_f64() * f.value(0.0), 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for n in 1..=hi {
        power *= lambda;
        total += power * f.value(n as f64);
    }
    Ok(total)
}

/// Interval formula of order m: both endpoints carry weight q and the
/// untwisted boundary operator; the remainder kernel is the periodized
/// Bernoulli kernel of degree m.
pub fn em_interval(
    f: &dyn SmoothFunction1d,
    a: i64,
    b: i64,
    q: &Rational,
    m: usize,
    tol: f64,
) -> Result<Em1dReport> {
    assert!(m >= 1);
    assert!(a < b);
    let op = OperatorPolynomial::untwisted(q, m);
    let coeffs: Vec<f64> = (0..=m)
        .map(|i| {
            op.coefficient(i)
                .rational_part()
                .expect("untwisted coefficients are rational")
                .to_f64()
        })
        .collect();

    let cuts = summand_cuts(a as f64, b as f64, &f.support());
    let integral = integrate_with_breakpoints(|x| f.value(x), a as f64, b as f64, &cuts, tol);
    let jet_a = f.jet(a as f64, m.saturating_sub(1));
    let jet_b = f.jet(b as f64, m.saturating_sub(1));
    let mut main = integral.value;
    for i in 1..=m {
        let sign = if (i - 1) % 2 == 0 { 1.0 } else { -1.0 };
        main += coeffs[i] * (sign * jet_a.derivative(i - 1) + jet_b.derivative(i - 1));
    }

    let kernel = PeriodizedKernel::periodized_bernoulli(m);
    let integrand = |x: f64| kernel.eval_f64(x).re * f.jet(x, m).derivative(m);
    let rem = integrate_with_breakpoints(integrand, a as f64, b as f64, &cuts, tol);
    let sign = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let remainder_formula = sign * rem.value;

    let sum = weighted_interval_sum(f, a, b, q);
    Ok(Em1dReport {
        sum: Complex64::new(sum, 0.0),
        main_term: Complex64::new(main, 0.0),
        remainder_formula: Complex64::new(remainder_formula, 0.0),
        remainder_difference: Complex64::new(sum - main, 0.0),
        quad_error: integral.error + rem.error,
    })
}

/// Ray formula of order m from an integer base point.
pub fn em_ray(
    f: &dyn SmoothFunction1d,
    a: i64,
    q: &Rational,
    m: usize,
    tol: f64,
) -> Result<Em1dReport> {
    let shifted = Shifted {
        inner: f,
        shift: a as f64,
    };
    let mut report = em_twisted_ray(&shifted, q, &Cyc::one(), m, tol)?;
    // The direct sum is cheap to restate against the unshifted function.
    let direct = weighted_ray_sum(f, a, q)?;
    report.sum = Complex64::new(direct, 0.0);
    report.remainder_difference = report.sum - report.main_term;
    Ok(report)
}

/// Twisted ray formula of order k for a root of unity lambda: the sum
/// q f(0) + sum_{n>=1} lambda^n f(n) equals boundary-derivative terms at 0
/// (plus the plain integral term when lambda = 1) plus a kernel integral.
pub fn em_twisted_ray(
    f: &dyn SmoothFunction1d,
    q: &Rational,
    lambda: &Cyc,
    k: usize,
    tol: f64,
) -> Result<Em1dReport> {
    assert!(k >= 1);
    let upper = f.support().upper.ok_or(Error::UnboundedSupport)?;
    multiplicative_order(lambda)?;
    let op = OperatorPolynomial::twisted(q, lambda, k)?;
    let kernel = PeriodizedKernel::twisted(k, lambda)?;

    let jet0 = f.jet(0.0, k.saturating_sub(1));
    let mut main = Complex64::new(0.0, 0.0);
    let c0 = op.coefficient(0);
    let mut quad_error = 0.0;
    let cuts = summand_cuts(0.0, upper.max(0.0), &f.support());
    if !c0.is_zero() {
        let integral =
            integrate_with_breakpoints(|x| f.value(x), 0.0, upper.max(0.0), &cuts, tol);
        main += c0.to_complex() * integral.value;
        quad_error += integral.error;
    }
    for i in 1..=k {
        let sign = if (i - 1) % 2 == 0 { 1.0 } else { -1.0 };
        main += op.coefficient(i).to_complex() * (sign * jet0.derivative(i - 1));
    }

    let integrand = |x: f64| kernel.eval_f64(x) * f.jet(x, k).derivative(k);
    let rem = integrate_with_breakpoints(integrand, 0.0, upper.max(0.0), &cuts, tol);
    quad_error += rem.error;
    let sign = if (k - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let remainder_formula = rem.value * sign;

    let lambda_c = lambda.to_complex();
    let sum = twisted_ray_sum(f, q, lambda_c)?;
    // Untwisted data is purely real; pin the imaginary parts to zero so
    // downstream comparisons are exact.
    let realize = |z: Complex64| {
        if lambda.is_one() {
            Complex64::new(z.re, 0.0)
        } else {
            z
        }
    };
    let sum = realize(sum);
    let main = realize(main);
    let remainder_formula = realize(remainder_formula);
    Ok(Em1dReport {
        sum,
        main_term: main,
        remainder_formula,
        remainder_difference: sum - main,
        quad_error,
    })
}
