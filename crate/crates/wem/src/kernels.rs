//! Bernoulli data, Todd-type series, and periodized kernels.
//!
//! The piecewise construction is the authority for kernel values: the
//! degree-0 kernel is the weighted delta comb -sum_n lambda^n delta(x - n),
//! each next kernel is the antiderivative normalized to mean zero over one
//! period, and operator coefficients are read off at x = 0. Generating
//! functions and Fourier partial sums appear only in tests as independent
//! oracles.

use num::complex::Complex64;

use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::TruncatedSeries;

/// Bernoulli number b_n with the convention b_1 = -1/2, so that
/// S/(1 - e^{-S}) = 1 - b_1 S + sum b_{2n} S^{2n}/(2n)!.
pub fn bernoulli_number(n: usize) -> Rational {
    // sum_{j=0}^{m} C(m+1, j) b_j = [m = 0], solved upward.
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += &(Rational::binomial(m + 1, j) * bj);
        }
        let denom = Rational::from_int((m + 1) as i64);
        b.push(-acc.checked_div(&denom).unwrap());
    }
    b.pop().unwrap()
}

/// Coefficients of the Bernoulli polynomial B_m(x), ascending in x.
pub fn bernoulli_polynomial(m: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); m + 1];
    for j in 0..=m {
        // coefficient of x^{m-j} is C(m, j) b_j
        let c = Rational::binomial(m, j) * bernoulli_number(j);
        out[m - j] = c;
    }
    out
}

/// Todd series S/(1 - e^{-S}) truncated at the given bound, computed by
/// series division (the norm factor (1 - e^{-S})/S is inverted directly).
pub fn todd_series(bound: usize) -> TruncatedSeries {
    let coeffs: Vec<Rational> = (0..=bound)
        .map(|j| {
            let c = Rational::factorial(j + 1).recip().unwrap();
            if j % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    let base = TruncatedSeries::from_rational_coeffs(bound, &coeffs);
    base.invert().expect("series has unit constant term")
}

/// L(S) = (S/2)/tanh(S/2) truncated, via cosh(S/2) / (sinh(S/2)/(S/2)).
pub fn l_series(bound: usize) -> TruncatedSeries {
    let mut cosh = vec![Rational::zero(); bound + 1];
    let mut sinh_over = vec![Rational::zero(); bound + 1];
    let half = Rational::new(1, 2);
    for j in (0..=bound).step_by(2) {
        let scale = half.pow(j as u32);
        cosh[j] = scale.checked_div(&Rational::factorial(j)).unwrap();
        sinh_over[j] = scale.checked_div(&Rational::factorial(j + 1)).unwrap();
    }
    let num = TruncatedSeries::from_rational_coeffs(bound, &cosh);
    let den = TruncatedSeries::from_rational_coeffs(bound, &sinh_over);
    num.div(&den).expect("sinh(S/2)/(S/2) has unit constant term")
}

/// chi_q(S) = q Todd(S) + (1 - q) Todd(-S), truncated at `bound`.
pub fn chi_series(q: &Rational, bound: usize) -> TruncatedSeries {
    let todd = todd_series(bound);
    let qs = todd.scale_rational(q);
    let rest = todd.flip_sign().scale_rational(&(Rational::one() - q));
    qs.add(&rest)
}

// ---- Periodized kernels ----

/// Piecewise-polynomial kernel of one period-N family: piece j is a dense
/// polynomial in the global coordinate, valid on the open interval
/// (j, j+1), extended N-periodically to all of R.
#[derive(Clone, Debug)]
pub struct PeriodizedKernel {
    degree: usize,
    lambda: Cyc,
    period: u64,
    pieces: Vec<Vec<Cyc>>,
    pieces_f64: Vec<Vec<Complex64>>,
}

fn poly_eval_cyc(coeffs: &[Cyc], x: &Rational) -> Cyc {
    let mut acc = Cyc::zero();
    for c in coeffs.iter().rev() {
        acc = acc.scale(x).add(c);
    }
    acc
}

fn poly_eval_complex(coeffs: &[Complex64], x: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Antiderivative with zero added constant.
fn poly_antiderivative(coeffs: &[Cyc]) -> Vec<Cyc> {
    let mut out = vec![Cyc::zero(); coeffs.len() + 1];
    for (i, c) in coeffs.iter().enumerate() {
        out[i + 1] = c.scale(&Rational::new(1, (i + 1) as i64));
    }
    out
}

impl PeriodizedKernel {
    /// P_m: period 1, single piece B_m({x})/m!.
    pub fn periodized_bernoulli(m: usize) -> Self {
        let scale = Rational::factorial(m).recip().unwrap();
        let piece: Vec<Cyc> = bernoulli_polynomial(m)
            .into_iter()
            .map(|c| Cyc::from_rational(c * &scale))
            .collect();
        Self::assemble(m, Cyc::one(), 1, vec![piece])
    }

    /// Q_{m, lambda} for a root of unity lambda; lambda = 1 degenerates to
    /// the periodized Bernoulli kernel.
    pub fn twisted(m: usize, lambda: &Cyc) -> Result<Self> {
        let period = multiplicative_order(lambda)?;
        if period == 1 {
            return Ok(Self::periodized_bernoulli(m));
        }
        assert!(m >= 1, "twisted kernels start at degree 1");
        // Degree 1: piecewise constants with jump -lambda^j at integer j,
        // one free global constant fixed by mean zero over the period.
        let n = period as usize;
        let mut pieces: Vec<Vec<Cyc>> = Vec::with_capacity(n);
        let mut level = Cyc::zero();
        for j in 0..n {
            if j > 0 {
                level = level.sub(&lambda.pow(j as i64)?);
            }
            pieces.push(vec![level.clone()]);
        }
        let mut kernel = Self::assemble(1, lambda.clone(), period, pieces);
        kernel.normalize_mean_zero();
        for degree in 2..=m {
            kernel = kernel.antidifferentiate(degree);
        }
        Ok(kernel)
    }

    fn assemble(degree: usize, lambda: Cyc, period: u64, pieces: Vec<Vec<Cyc>>) -> Self {
        let pieces_f64 = pieces
            .iter()
            .map(|p| p.iter().map(|c| c.to_complex()).collect())
            .collect();
        PeriodizedKernel {
            degree,
            lambda,
            period,
            pieces,
            pieces_f64,
        }
    }

    /// Continuous antiderivative with mean zero over the period.
    fn antidifferentiate(&self, degree: usize) -> Self {
        let n = self.period as usize;
        let mut pieces: Vec<Vec<Cyc>> = Vec::with_capacity(n);
        let mut level = Cyc::zero();
        for j in 0..n {
            let raw = poly_antiderivative(&self.pieces[j]);
            let at_left = poly_eval_cyc(&raw, &Rational::from_int(j as i64));
            // Constant chosen so piece_j(j) continues the previous piece.
            let mut piece = raw.clone();
            piece[0] = piece[0].add(&level.sub(&at_left));
            let at_right = poly_eval_cyc(&piece, &Rational::from_int((j + 1) as i64));
            level = at_right;
            pieces.push(piece);
        }
        let mut out = Self::assemble(degree, self.lambda.clone(), self.period, pieces);
        out.normalize_mean_zero();
        out
    }

    fn normalize_mean_zero(&mut self) {
        let mean = self
            .mean_over_period()
            .expect("period is nonzero");
        for piece in self.pieces.iter_mut() {
            piece[0] = piece[0].sub(&mean);
        }
        self.pieces_f64 = self
            .pieces
            .iter()
            .map(|p| p.iter().map(|c| c.to_complex()).collect())
            .collect();
    }

    pub fn mean_over_period(&self) -> Result<Cyc> {
        let mut total = Cyc::zero();
        for (j, piece) in self.pieces.iter().enumerate() {
            let anti = poly_antiderivative(piece);
            let hi = poly_eval_cyc(&anti, &Rational::from_int((j + 1) as i64));
            let lo = poly_eval_cyc(&anti, &Rational::from_int(j as i64));
            total = total.add(&hi.sub(&lo));
        }
        Ok(total.scale(&Rational::new(1, self.period as i64).clone()))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn lambda(&self) -> &Cyc {
        &self.lambda
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn pieces(&self) -> &[Vec<Cyc>] {
        &self.pieces
    }

    fn wrap(&self, x: &Rational) -> (usize, Rational) {
        let n = Rational::from_int(self.period as i64);
        let shift = x.checked_div(&n).unwrap().floor();
        let xm = x - &(Rational::from_bigint(shift) * &n);
        let j = xm.floor();
        let j: i64 = (&j).try_into().expect("piece index fits i64");
        (j as usize % self.period as usize, xm)
    }

    /// Exact value; at integer points of a discontinuous kernel (degree 1)
    /// this reports the midpoint of the one-sided limits.
    pub fn eval_exact(&self, x: &Rational) -> Cyc {
        let (j, xm) = self.wrap(x);
        if xm.is_integer() && self.degree == 1 {
            let n = self.pieces.len();
            let right = poly_eval_cyc(&self.pieces[j], &xm);
            let prev = (j + n - 1) % n;
            // Left limit comes from the previous piece evaluated at its
            // right end, shifted by one period if we wrapped past 0.
            let left_x = if j == 0 {
                Rational::from_int(self.period as i64)
            } else {
                xm.clone()
            };
            let left = poly_eval_cyc(&self.pieces[prev], &left_x);
            return right.add(&left).scale(&Rational::new(1, 2));
        }
        poly_eval_cyc(&self.pieces[j], &xm)
    }

    pub fn eval_f64(&self, x: f64) -> Complex64 {
        let n = self.period as f64;
        let mut xm = x - n * (x / n).floor();
        if xm >= n {
            xm -= n;
        }
        let mut j = xm.floor() as usize;
        if j >= self.pieces.len() {
            j = self.pieces.len() - 1;
        }
        poly_eval_complex(&self.pieces_f64[j], xm)
    }
}

/// Multiplicative order of a root of unity; errors if the element is not
/// a root of unity at all.
pub fn multiplicative_order(lambda: &Cyc) -> Result<u64> {
    let ambient = lambda.order();
    let mut divisors: Vec<u64> = (1..=ambient).filter(|d| ambient % d == 0).collect();
    divisors.sort_unstable();
    for d in divisors {
        if lambda.pow(d as i64)?.is_one() {
            return Ok(d);
        }
    }
    Err(Error::InvalidInput(format!(
        "element {lambda} is not a root of unity"
    )))
}

/// Kernel value at 0: the continuous value for degree >= 2, the midpoint
/// of the one-sided limits for degree 1.
pub fn kernel_at_zero(m: usize, lambda: &Cyc) -> Result<Cyc> {
    let kernel = PeriodizedKernel::twisted(m, lambda)?;
    Ok(kernel.eval_exact(&Rational::zero()))
}

// ---- Operator polynomials ----

/// N_q^{k, lambda}(S): zero constant term; linear coefficient
/// q + lambda/(1 - lambda) for lambda != 1; higher coefficients are kernel
/// values at zero. For lambda = 1 the operator collapses to
/// chi_q^{2 floor(k/2)} (including its unit constant term).
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPolynomial {
    q: Rational,
    lambda: Cyc,
    k: usize,
    series: TruncatedSeries,
}

impl OperatorPolynomial {
    pub fn twisted(q: &Rational, lambda: &Cyc, k: usize) -> Result<Self> {
        assert!(k >= 1, "operator order must be at least 1");
        if lambda.is_one() {
            let even = 2 * (k / 2);
            let chi = chi_series(q, even);
            return Ok(OperatorPolynomial {
                q: q.clone(),
                lambda: Cyc::one(),
                k,
                series: chi.truncate(k),
            });
        }
        let mut series = TruncatedSeries::zero(k);
        let linear = Cyc::from_rational(q.clone())
            .add(&lambda.div(&Cyc::one().sub(lambda))?);
        series.set_coeff(1, linear);
        if k >= 2 {
            let kernel = PeriodizedKernel::twisted(k, lambda)?;
            // Walk back down: kernel pieces of each lower degree are the
            // derivatives of the current pieces, but values at zero are
            // cheaper to collect by rebuilding each degree once.
            for m in 2..=k {
                let value = if m == k {
                    kernel.eval_exact(&Rational::zero())
                } else {
                    kernel_at_zero(m, lambda)?
                };
                series.set_coeff(m, value);
            }
        }
        Ok(OperatorPolynomial {
            q: q.clone(),
            lambda: lambda.clone(),
            k,
            series,
        })
    }

    pub fn untwisted(q: &Rational, k: usize) -> Self {
        Self::twisted(q, &Cyc::one(), k).expect("lambda = 1 never fails")
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn lambda(&self) -> &Cyc {
        &self.lambda
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn coefficient(&self, i: usize) -> Cyc {
        self.series.coeff(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn bernoulli_values_match_tables() {
        let expect = [
            r(1, 1),
            r(-1, 2),
            r(1, 6),
            r(0, 1),
            r(-1, 30),
            r(0, 1),
            r(1, 42),
            r(0, 1),
            r(-1, 30),
        ];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(&bernoulli_number(n), e, "b_{n}");
        }
    }

    #[test]
    fn todd_expansion_matches_bernoulli_recurrence() {
        // Series division and the recurrence are independent routes.
        let todd = todd_series(8);
        assert!(todd.coeff(0).is_one());
        assert_eq!(todd.coeff(1).rational_part().unwrap(), r(1, 2));
        for n in 1..=4 {
            let expect = bernoulli_number(2 * n)
                .checked_div(&Rational::factorial(2 * n))
                .unwrap();
            assert_eq!(todd.coeff(2 * n).rational_part().unwrap(), expect);
            if 2 * n + 1 <= 8 {
                assert!(todd.coeff(2 * n + 1).is_zero(), "odd coefficient {}", 2 * n + 1);
            }
        }
        // Frozen values: 1 + S/2 + S^2/12 - S^4/720.
        assert_eq!(todd.coeff(2).rational_part().unwrap(), r(1, 12));
        assert_eq!(todd.coeff(4).rational_part().unwrap(), r(-1, 720));
    }

    #[test]
    fn l_series_is_even_part_of_todd() {
        let l = l_series(8);
        let todd = todd_series(8);
        let even = todd.add(&todd.flip_sign()).scale_rational(&r(1, 2));
        assert_eq!(l, even);
        assert_eq!(l.coeff(2).rational_part().unwrap(), r(1, 12));
        assert!(l.coeff(1).is_zero());
    }

    #[test]
    fn chi_decompositions_agree() {
        // chi_q = (q - 1/2) S + L(S) = (q - 1) S + Todd(S).
        for q in [r(0, 1), r(1, 3), r(2, 5), r(1, 1), r(2, 1)] {
            let chi = chi_series(&q, 6);
            let mut alt = l_series(6);
            alt.set_coeff(1, Cyc::from_rational(&q - &r(1, 2)));
            assert_eq!(chi, alt);
            let mut alt2 = todd_series(6);
            alt2.set_coeff(
                1,
                alt2.coeff(1).add(&Cyc::from_rational(&q - &Rational::one())),
            );
            assert_eq!(chi, alt2);
        }
    }

    #[test]
    fn periodized_bernoulli_frozen_values() {
        let p1 = PeriodizedKernel::periodized_bernoulli(1);
        // B_1({x}) at 1/4 is -1/4.
        assert_eq!(
            p1.eval_exact(&r(1, 4)).rational_part().unwrap(),
            r(-1, 4)
        );
        let p2 = PeriodizedKernel::periodized_bernoulli(2);
        assert_eq!(p2.eval_exact(&Rational::zero()).rational_part().unwrap(), r(1, 12));
        assert_eq!(p2.eval_exact(&r(1, 2)).rational_part().unwrap(), r(-1, 24));
        // Periodicity.
        assert_eq!(p2.eval_exact(&r(7, 2)), p2.eval_exact(&r(1, 2)));
        assert_eq!(p2.eval_exact(&r(-1, 2)), p2.eval_exact(&r(1, 2)));
    }

    #[test]
    fn bernoulli_kernel_mean_is_zero() {
        for m in 1..=6 {
            let p = PeriodizedKernel::periodized_bernoulli(m);
            assert!(p.mean_over_period().unwrap().is_zero(), "degree {m}");
        }
    }

    #[test]
    fn twisted_kernel_minus_one_frozen_values() {
        let lam = Cyc::root_of_unity(&r(1, 2));
        let q1 = PeriodizedKernel::twisted(1, &lam).unwrap();
        assert_eq!(q1.period(), 2);
        // Pieces -1/2 on (0,1) and 1/2 on (1,2).
        assert_eq!(q1.eval_exact(&r(1, 2)).rational_part().unwrap(), r(-1, 2));
        assert_eq!(q1.eval_exact(&r(3, 2)).rational_part().unwrap(), r(1, 2));
        // Midpoint convention at the jump.
        assert!(q1.eval_exact(&Rational::zero()).is_zero());
        let q2 = PeriodizedKernel::twisted(2, &lam).unwrap();
        assert_eq!(q2.eval_exact(&Rational::zero()).rational_part().unwrap(), r(1, 4));
        assert_eq!(kernel_at_zero(3, &lam).unwrap().rational_part().unwrap(), r(0, 1));
        assert_eq!(kernel_at_zero(4, &lam).unwrap().rational_part().unwrap(), r(-1, 48));
    }

    #[test]
    fn twisted_kernel_quasi_periodicity() {
        // Q(x + 1) = lambda Q(x), exactly, at rational sample points.
        for (a, n) in [(1i64, 2i64), (1, 3), (1, 4), (2, 5)] {
            let lam = Cyc::root_of_unity(&r(a, n));
            for m in 1..=4 {
                let kernel = PeriodizedKernel::twisted(m, &lam).unwrap();
                for x in [r(1, 3), r(2, 5), r(9, 7)] {
                    let shifted = kernel.eval_exact(&(&x + &Rational::one()));
                    assert_eq!(shifted, lam.mul(&kernel.eval_exact(&x)), "m={m} n={n}");
                }
                assert!(kernel.mean_over_period().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn kernel_derivative_chain() {
        // d/dx Q_m = Q_{m-1} piecewise.
        let lam = Cyc::root_of_unity(&r(1, 4));
        let q3 = PeriodizedKernel::twisted(3, &lam).unwrap();
        let q2 = PeriodizedKernel::twisted(2, &lam).unwrap();
        for (p3, p2) in q3.pieces().iter().zip(q2.pieces()) {
            for (i, c) in p2.iter().enumerate() {
                let from_deriv = p3[i + 1].scale(&Rational::from_int((i + 1) as i64));
                assert_eq!(&from_deriv, c);
            }
        }
    }

    #[test]
    fn twisted_operator_minus_one_frozen() {
        let lam = Cyc::root_of_unity(&r(1, 2));
        let op = OperatorPolynomial::twisted(&r(1, 3), &lam, 4).unwrap();
        assert!(op.coefficient(0).is_zero());
        assert_eq!(op.coefficient(1).rational_part().unwrap(), r(1, 3) - r(1, 2));
        assert_eq!(op.coefficient(2).rational_part().unwrap(), r(1, 4));
        assert!(op.coefficient(3).is_zero());
        assert_eq!(op.coefficient(4).rational_part().unwrap(), r(-1, 48));
    }

    #[test]
    fn untwisted_operator_collapses_to_chi() {
        let q = r(1, 3);
        let op = OperatorPolynomial::untwisted(&q, 5);
        let chi = chi_series(&q, 4);
        for i in 0..=5 {
            assert_eq!(op.coefficient(i), chi.coeff(i), "coefficient {i}");
        }
        assert!(op.coefficient(5).is_zero());
    }

    #[test]
    fn fourier_partial_sum_cross_check() {
        // P_2 at 1/2 via 1e4 Fourier terms vs the exact -1/24.
        let mut sum = 0.0f64;
        let x = 0.5;
        for n in 1..=10_000 {
            let nf = n as f64;
            sum += 2.0 * (2.0 * std::f64::consts::PI * nf * x).cos()
                / (2.0 * std::f64::consts::PI * nf).powi(2);
        }
        assert!((sum - (-1.0 / 24.0)).abs() < 1e-6);
    }

    #[test]
    fn twisted_fourier_partial_sum_cross_check() {
        // Q_{2,lambda}(x) = -sum_j e^{2 pi i (a/N + j) x} / (2 pi i (a/N + j))^2.
        let lam = Cyc::root_of_unity(&r(1, 4));
        let kernel = PeriodizedKernel::twisted(2, &lam).unwrap();
        for x in [0.3, 1.7, 2.25] {
            let mut sum = Complex64::new(0.0, 0.0);
            for j in -20_000i64..=20_000 {
                let freq = 0.25 + j as f64;
                let tau = 2.0 * std::f64::consts::PI * freq;
                let phase = Complex64::new(0.0, tau * x).exp();
                let denom = Complex64::new(0.0, tau).powi(2);
                sum -= phase / denom;
            }
            let direct = kernel.eval_f64(x);
            assert!((sum - direct).norm() < 1e-6, "x = {x}");
        }
    }
}
