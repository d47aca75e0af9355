//! Truncated Taylor arithmetic for evaluating high-order derivatives of
//! smooth test functions at a point.
//!
//! A `Jet` holds the Taylor coefficients f(x0), f'(x0)/1!, f''(x0)/2!, ...
//! up to a fixed order. Arithmetic propagates them exactly by the usual
//! convolution recurrences, so derivative evaluation never touches finite
//! differences. Compositions that underflow to zero (the sharp edges of
//! bump functions) stay exactly zero because every recurrence multiplies
//! by the value coefficient.

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// The identity function seeded at `value`.
    pub fn variable(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Jet { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty());
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    /// f^{(j)}(x0) = j! * coeffs[j].
    pub fn derivative(&self, j: usize) -> f64 {
        let mut factorial = 1.0f64;
        for i in 2..=j {
            factorial *= i as f64;
        }
        factorial * self.coeff(j)
    }

    fn zip_len(&self, other: &Jet) -> usize {
        assert_eq!(
            self.coeffs.len(),
            other.coeffs.len(),
            "jet orders must match"
        );
        self.coeffs.len()
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let n = self.zip_len(other);
        Jet {
            coeffs: (0..n).map(|i| self.coeffs[i] + other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        let n = self.zip_len(other);
        Jet {
            coeffs: (0..n).map(|i| self.coeffs[i] - other.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| factor * c).collect(),
        }
    }

    pub fn shift(&self, constant: f64) -> Jet {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += constant;
        Jet { coeffs }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let n = self.zip_len(other);
        let mut coeffs = vec![0.0; n];
        for i in 0..n {
            for j in 0..=i {
                coeffs[i] += self.coeffs[j] * other.coeffs[i - j];
            }
        }
        Jet { coeffs }
    }

    /// 1/f, requiring a nonzero value coefficient.
    pub fn recip(&self) -> Jet {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        out[0] = 1.0 / self.coeffs[0];
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j];
            }
            out[k] = -acc / self.coeffs[0];
        }
        Jet { coeffs: out }
    }

    pub fn div(&self, other: &Jet) -> Jet {
        self.mul(&other.recip())
    }

    pub fn exp(&self) -> Jet {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        out[0] = self.coeffs[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (j as f64) * self.coeffs[j] * out[k - j];
            }
            out[k] = acc / k as f64;
        }
        Jet { coeffs: out }
    }

    pub fn sin_cos(&self) -> (Jet, Jet) {
        let n = self.coeffs.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..n {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                ds += (j as f64) * self.coeffs[j] * c[k - j];
                dc += (j as f64) * self.coeffs[j] * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = -dc / k as f64;
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn powi(&self, mut e: u32) -> Jet {
        let mut base = self.clone();
        let mut acc = Jet::constant(1.0, self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_variable() {
        let x = Jet::variable(3.0, 4);
        let sq = x.mul(&x);
        assert_eq!(sq.coeff(0), 9.0);
        assert_eq!(sq.coeff(1), 6.0);
        assert_eq!(sq.coeff(2), 1.0);
        assert_eq!(sq.coeff(3), 0.0);
        assert_eq!(sq.derivative(2), 2.0);
    }

    #[test]
    fn exponential_matches_analytic_derivatives() {
        let x = Jet::variable(0.3, 8);
        let e = x.exp();
        let value = (0.3f64).exp();
        for j in 0..=8 {
            assert!((e.derivative(j) - value).abs() < 1e-12 * value.max(1.0));
        }
    }

    #[test]
    fn sine_derivatives_cycle() {
        let x = Jet::variable(0.7, 6);
        let s = x.sin();
        let expect = [
            (0.7f64).sin(),
            (0.7f64).cos(),
            -(0.7f64).sin(),
            -(0.7f64).cos(),
            (0.7f64).sin(),
            (0.7f64).cos(),
            -(0.7f64).sin(),
        ];
        for (j, e) in expect.iter().enumerate() {
            assert!((s.derivative(j) - e).abs() < 1e-12);
        }
    }

    #[test]
    fn reciprocal_multiplies_back_to_one() {
        let x = Jet::variable(2.0, 7);
        let f = x.mul(&x).shift(1.0); // 1 + x^2
        let product = f.mul(&f.recip());
        assert!((product.coeff(0) - 1.0).abs() < 1e-14);
        for j in 1..=7 {
            assert!(product.coeff(j).abs() < 1e-13, "coefficient {j}");
        }
    }

    #[test]
    fn division_matches_geometric_series() {
        // 1/(1 - x) at x0 = 0 has all Taylor coefficients 1.
        let one = Jet::constant(1.0, 6);
        let x = Jet::variable(0.0, 6);
        let g = one.div(&one.sub(&x));
        for j in 0..=6 {
            assert!((g.coeff(j) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn underflow_propagates_exact_zero() {
        // exp of a hugely negative argument is exactly 0.0 and every
        // higher coefficient must stay exactly zero, not NaN.
        let x = Jet::variable(1.0 - 1e-14, 5);
        let one = Jet::constant(1.0, 5);
        let u = one.sub(&x.mul(&x)); // 1 - x^2, tiny positive
        let inner = one.div(&u).neg(); // -1/(1 - x^2), huge negative
        let bump = inner.exp();
        assert_eq!(bump.coeff(0), 0.0);
        for j in 1..=5 {
            assert_eq!(bump.coeff(j), 0.0, "coefficient {j}");
        }
    }
}
