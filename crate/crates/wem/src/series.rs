//! Truncated power series in one formal variable S over the cyclotomic ring.
//!
//! A series carries its truncation bound; every operation discards degrees
//! above the bound of its operands. Binary operations require equal bounds
//! so mixed-precision arithmetic is always an explicit choice via
//! `truncate`. Rational series embed through order-1 cyclotomic scalars.

use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    bound: usize,
    /// Coefficients of S^0 .. S^bound.
    coeffs: Vec<Cyc>,
}

impl TruncatedSeries {
    pub fn zero(bound: usize) -> Self {
        TruncatedSeries {
            bound,
            coeffs: vec![Cyc::zero(); bound + 1],
        }
    }

    pub fn constant(bound: usize, c: Cyc) -> Self {
        let mut s = Self::zero(bound);
        s.coeffs[0] = c;
        s
    }

    pub fn one(bound: usize) -> Self {
        Self::constant(bound, Cyc::one())
    }

    /// The variable S itself.
    pub fn s(bound: usize) -> Self {
        let mut out = Self::zero(bound);
        if bound >= 1 {
            out.coeffs[1] = Cyc::one();
        }
        out
    }

    pub fn from_coeffs(bound: usize, mut coeffs: Vec<Cyc>) -> Self {
        coeffs.truncate(bound + 1);
        coeffs.resize(bound + 1, Cyc::zero());
        TruncatedSeries { bound, coeffs }
    }

    pub fn from_rational_coeffs(bound: usize, coeffs: &[Rational]) -> Self {
        Self::from_coeffs(
            bound,
            coeffs.iter().map(|r| Cyc::from_rational(r.clone())).collect(),
        )
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Coefficient of S^i; zero above the bound.
    pub fn coeff(&self, i: usize) -> Cyc {
        self.coeffs.get(i).cloned().unwrap_or_else(Cyc::zero)
    }

    pub fn coeffs(&self) -> &[Cyc] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, c: Cyc) {
        assert!(i <= self.bound);
        self.coeffs[i] = c;
    }

    pub fn truncate(&self, bound: usize) -> Self {
        Self::from_coeffs(bound, self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_bound(&self, rhs: &Self) {
        assert_eq!(self.bound, rhs.bound, "series bounds differ");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_bound(rhs);
        Self::from_coeffs(
            self.bound,
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.check_bound(rhs);
        Self::from_coeffs(
            self.bound,
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.bound, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn scale(&self, s: &Cyc) -> Self {
        Self::from_coeffs(self.bound, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn scale_rational(&self, s: &Rational) -> Self {
        self.scale(&Cyc::from_rational(s.clone()))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_bound(rhs);
        let mut out = vec![Cyc::zero(); self.bound + 1];
        for i in 0..=self.bound {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(self.bound - i) {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&self.coeffs[i].mul(&rhs.coeffs[j]));
            }
        }
        Self::from_coeffs(self.bound, out)
    }

    /// S -> -S.
    pub fn flip_sign(&self) -> Self {
        Self::from_coeffs(
            self.bound,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { c.neg() } else { c.clone() })
                .collect(),
        )
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn invert(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NonInvertibleSeries);
        }
        let c0_inv = self.coeffs[0].inverse()?;
        let mut out = vec![Cyc::zero(); self.bound + 1];
        out[0] = c0_inv.clone();
        for k in 1..=self.bound {
            let mut acc = Cyc::zero();
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].mul(&out[k - i]));
            }
            out[k] = acc.neg().mul(&c0_inv);
        }
        Ok(Self::from_coeffs(self.bound, out))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.invert()?))
    }

    /// outer(inner); the inner series must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_bound(inner);
        if !inner.coeffs[0].is_zero() {
            return Err(Error::CompositionConstantTerm);
        }
        // Horner from the top coefficient down.
        let mut acc = Self::constant(self.bound, self.coeffs[self.bound].clone());
        for i in (0..self.bound).rev() {
            acc = acc.mul(inner);
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[i]);
        }
        Ok(acc)
    }

    /// exp(S) truncated: coefficients 1/j!.
    pub fn exponential(bound: usize) -> Self {
        let coeffs: Vec<Rational> = (0..=bound)
            .map(|j| Rational::factorial(j).recip().unwrap())
            .collect();
        Self::from_rational_coeffs(bound, &coeffs)
    }

    /// Some(vec) iff every coefficient is rational.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.rational_part()).collect()
    }
}
