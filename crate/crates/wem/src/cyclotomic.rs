//! Exact arithmetic in cyclotomic fields Q[z]/(Phi_M(z)).
//!
//! An element carries the order M of its ambient ring and its coefficient
//! vector in the power basis 1, z, ..., z^(deg Phi_M - 1), always reduced
//! mod Phi_M so representations are canonical. Binary operations lift both
//! sides into the ring of order lcm(M1, M2) via z_N -> z_L^(L/N); all roots
//! of unity appearing in one computation therefore end up in a single
//! ambient ring and equality testing is uniform.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multipoly::MultiPolynomial;
use crate::rational::Rational;

// ---- Dense univariate helpers (coefficients ascending, no trailing zeros) ----

fn poly_trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += &(ca * cb);
        }
    }
    poly_trim(&mut out);
    out
}

/// Quotient and remainder by a nonzero divisor.
fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!den.is_empty(), "division by zero polynomial");
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    let dd = den.len() - 1;
    let lead = den.last().unwrap();
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quo = vec![Rational::zero(); rem.len() - dd];
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let c = &rem[rem.len() - 1] / lead;
        quo[k] = c.clone();
        for (i, dc) in den.iter().enumerate() {
            let t = &c * dc;
            rem[k + i] -= &t;
        }
        poly_trim(&mut rem);
        if rem.len() <= dd {
            break;
        }
    }
    poly_trim(&mut quo);
    (quo, rem)
}

/// Bezout data (g, s, t) with s*a + t*b = g, g monic gcd.
fn poly_extended_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut s0 = vec![Rational::one()];
    let mut s1: Vec<Rational> = Vec::new();
    let mut t0: Vec<Rational> = Vec::new();
    let mut t1 = vec![Rational::one()];
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1);
        let next_s = poly_sub(&s0, &poly_mul(&q, &s1));
        let next_t = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, next_s);
        t0 = std::mem::replace(&mut t1, next_t);
    }
    // Normalize to a monic gcd.
    if let Some(lead) = r0.last().cloned() {
        let inv = lead.recip().unwrap();
        for c in r0.iter_mut().chain(s0.iter_mut()).chain(t0.iter_mut()) {
            *c *= &inv;
        }
    }
    (r0, s0, t0)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), Rational::zero());
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(&mut out);
    out
}

// ---- Cyclotomic modulus cache ----

struct Modulus {
    degree: usize,
    /// Phi_M, monic, ascending coefficients.
    poly: Vec<Rational>,
}

fn modulus(order: u64) -> Arc<Modulus> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Modulus>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().unwrap().get(&order) {
        return m.clone();
    }
    let poly = phi_dense(order);
    let m = Arc::new(Modulus {
        degree: poly.len() - 1,
        poly,
    });
    cache.lock().unwrap().insert(order, m.clone());
    m
}

/// Phi_M as (z^M - 1) / prod of Phi_d over proper divisors d of M.
fn phi_dense(order: u64) -> Vec<Rational> {
    assert!(order >= 1, "cyclotomic order must be positive");
    if order == 1 {
        return vec![Rational::from_int(-1), Rational::one()];
    }
    let mut num = vec![Rational::zero(); order as usize + 1];
    num[0] = Rational::from_int(-1);
    num[order as usize] = Rational::one();
    for d in 1..order {
        if order % d == 0 {
            let (q, r) = poly_divmod(&num, &modulus(d).poly);
            assert!(r.is_empty(), "cyclotomic division left a remainder");
            num = q;
        }
    }
    num
}

/// Phi_M as a univariate polynomial record (integer coefficients).
pub fn cyclotomic_polynomial(order: u64) -> MultiPolynomial {
    let m = modulus(order);
    let mut out = MultiPolynomial::zero(1);
    for (i, c) in m.poly.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&MultiPolynomial::monomial(vec![i as u32], c.clone()));
        }
    }
    out
}

// ---- Elements ----

#[derive(Clone, Serialize, Deserialize)]
pub struct Cyc {
    order: u64,
    /// Power-basis coefficients, length deg Phi_order, reduced mod Phi.
    coefficients: Vec<Rational>,
}

impl Cyc {
    pub fn zero() -> Self {
        Cyc::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Cyc::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyc {
            order: 1,
            coefficients: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Cyc::from_rational(Rational::from_int(n))
    }

    /// e^(2 pi i a/N) for rotation number a/N (reduced mod 1).
    pub fn root_of_unity(rotation: &Rational) -> Self {
        let rot = rotation.mod_one();
        let order: u64 = rot
            .denom()
            .try_into()
            .expect("rotation denominator exceeds u64");
        let a: u64 = rot
            .numer()
            .try_into()
            .expect("reduced rotation numerator is nonnegative");
        let mut raw = vec![Rational::zero(); a as usize + 1];
        raw[a as usize] = Rational::one();
        Cyc::reduce(order, raw)
    }

    /// Same root expressed in the ring of order `ambient`; errors unless the
    /// rotation's denominator divides `ambient`.
    pub fn root_of_unity_in(ambient: u64, rotation: &Rational) -> Result<Self> {
        let rot = rotation.mod_one();
        let order: u64 = rot
            .denom()
            .try_into()
            .map_err(|_| Error::InvalidInput("rotation denominator exceeds u64".into()))?;
        if ambient % order != 0 {
            return Err(Error::OrderMismatch {
                required: order,
                ambient,
            });
        }
        Ok(Cyc::root_of_unity(&rot).lift(ambient))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    fn reduce(order: u64, mut raw: Vec<Rational>) -> Self {
        let m = modulus(order);
        if raw.len() > m.degree {
            let (_, rem) = poly_divmod(&raw, &m.poly);
            raw = rem;
        }
        raw.resize(m.degree, Rational::zero());
        Cyc {
            order,
            coefficients: raw,
        }
    }

    /// Re-express in the ring of order `target` (a multiple of the current
    /// order) via z_N -> z_target^(target/N).
    pub fn lift(&self, target: u64) -> Self {
        if target == self.order {
            return self.clone();
        }
        assert_eq!(target % self.order, 0, "lift target must be a multiple");
        let step = (target / self.order) as usize;
        let mut raw = vec![Rational::zero(); self.coefficients.len() * step + 1];
        for (i, c) in self.coefficients.iter().enumerate() {
            if !c.is_zero() {
                raw[i * step] = c.clone();
            }
        }
        Cyc::reduce(target, raw)
    }

    fn common(&self, rhs: &Self) -> (Cyc, Cyc) {
        let l = self.order.lcm(&rhs.order);
        (self.lift(l), rhs.lift(l))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coefficients.iter_mut().zip(&b.coefficients) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coefficients.iter_mut() {
            let n = -&*c;
            *c = n;
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = self.common(rhs);
        let raw = poly_mul(&a.coefficients, &b.coefficients);
        Cyc::reduce(a.order, raw)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = self.clone();
        for c in out.coefficients.iter_mut() {
            *c *= s;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero())
    }

    /// Multiplicative inverse; Phi is irreducible so the quotient is a field.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = modulus(self.order);
        let mut a = self.coefficients.clone();
        poly_trim(&mut a);
        let (g, s, _) = poly_extended_gcd(&a, &m.poly);
        if g.len() != 1 {
            return Err(Error::Inconsistent(
                "cyclotomic modulus shares a factor with a nonzero element".into(),
            ));
        }
        let ginv = g[0].recip()?;
        let s: Vec<Rational> = s.iter().map(|c| c * &ginv).collect();
        Ok(Cyc::reduce(self.order, s))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inverse()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Cyc::one();
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        Ok(acc)
    }

    /// Some(value) iff the element lies in Q, i.e. all non-constant
    /// power-basis coefficients vanish after reduction.
    pub fn rational_part(&self) -> Option<Rational> {
        if self.coefficients[1..].iter().all(|c| c.is_zero()) {
            Some(self.coefficients[0].clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.rational_part().is_some_and(|r| r == Rational::one())
    }

    /// Numerical value with z = e^(2 pi i / order).
    pub fn to_complex(&self) -> num::complex::Complex64 {
        use num::complex::Complex64;
        let theta = 2.0 * std::f64::consts::PI / self.order as f64;
        let z = Complex64::new(theta.cos(), theta.sin());
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coefficients.iter().rev() {
            acc = acc * z + Complex64::new(c.to_f64(), 0.0);
        }
        acc
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coefficients == b.coefficients
    }
}

impl Eq for Cyc {}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.rational_part() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else if i == 1 {
                write!(f, "{c}*z")?;
            } else {
                write!(f, "{c}*z^{i}")?;
            }
        }
        write!(f, " (order {})", self.order)
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot(a: i64, n: i64) -> Rational {
        Rational::new(a, n)
    }

    #[test]
    fn cyclotomic_polynomials_match_tables() {
        let cases: Vec<(u64, Vec<i64>)> = vec![
            (1, vec![-1, 1]),
            (2, vec![1, 1]),
            (3, vec![1, 1, 1]),
            (4, vec![1, 0, 1]),
            (5, vec![1, 1, 1, 1, 1]),
            (6, vec![1, -1, 1]),
            (8, vec![1, 0, 0, 0, 1]),
            (12, vec![1, 0, -1, 0, 1]),
        ];
        for (order, coeffs) in cases {
            let p = cyclotomic_polynomial(order);
            for (i, c) in coeffs.iter().enumerate() {
                assert_eq!(
                    p.coefficient(&[i as u32]),
                    Rational::from_int(*c),
                    "Phi_{order} coefficient {i}"
                );
            }
            assert_eq!(p.total_degree() as usize, coeffs.len() - 1);
        }
    }

    #[test]
    fn products_over_divisors_recover_power_minus_one() {
        // prod over d | M of Phi_d = z^M - 1.
        for order in [4u64, 6, 12] {
            let mut acc = MultiPolynomial::one(1);
            for d in 1..=order {
                if order % d == 0 {
                    acc = acc.mul(&cyclotomic_polynomial(d));
                }
            }
            let mut expect = MultiPolynomial::monomial(vec![order as u32], Rational::one());
            expect = expect.sub(&MultiPolynomial::one(1));
            assert_eq!(acc, expect, "order {order}");
        }
    }

    #[test]
    fn half_rotation_reduces_to_minus_one() {
        let z = Cyc::root_of_unity(&rot(1, 2));
        assert_eq!(z.rational_part(), Some(Rational::from_int(-1)));
    }

    #[test]
    fn cube_of_third_root_is_one() {
        let z = Cyc::root_of_unity(&rot(1, 3));
        assert!(z.pow(3).unwrap().is_one());
        assert!(!z.is_one());
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        // 1 + z + z^2 = 0 in the ring of order 3.
        let z = Cyc::root_of_unity(&rot(1, 3));
        let s = Cyc::one().add(&z).add(&z.pow(2).unwrap());
        assert!(s.is_zero());
        assert_eq!(s.rational_part(), Some(Rational::zero()));
    }

    #[test]
    fn mixed_order_arithmetic_lifts() {
        // i * i = -1 across order-4 and order-2 representations.
        let i = Cyc::root_of_unity(&rot(1, 4));
        let m1 = Cyc::root_of_unity(&rot(1, 2));
        assert_eq!(i.mul(&i), m1);
        // z_6^3 = -1 as well.
        let z6 = Cyc::root_of_unity(&rot(1, 6));
        assert_eq!(z6.pow(3).unwrap(), m1);
    }

    #[test]
    fn inverse_times_self_is_one() {
        let z = Cyc::root_of_unity(&rot(1, 5));
        let x = z.add(&Cyc::from_int(2)); // 2 + z
        let inv = x.inverse().unwrap();
        assert!(x.mul(&inv).is_one());
        // lambda / (1 - lambda) for lambda = -1 is -1/2.
        let lam = Cyc::root_of_unity(&rot(1, 2));
        let r = lam.div(&Cyc::one().sub(&lam)).unwrap();
        assert_eq!(r.rational_part(), Some(Rational::new(-1, 2)));
    }

    #[test]
    fn ambient_embedding_checks_divisibility() {
        assert!(Cyc::root_of_unity_in(12, &rot(1, 4)).is_ok());
        let err = Cyc::root_of_unity_in(4, &rot(1, 3)).unwrap_err();
        assert!(matches!(err, Error::OrderMismatch { required: 3, ambient: 4 }));
    }

    #[test]
    fn rationality_detection_requires_reduction() {
        // 1 + z + z^2 at order 3 is 0, so it is rational.
        let z = Cyc::root_of_unity(&rot(1, 3));
        let s = Cyc::one().add(&z).add(&z.mul(&z));
        assert_eq!(s.rational_part(), Some(Rational::zero()));
        // 1 + z at order 3 is not rational.
        let t = Cyc::one().add(&z);
        assert_eq!(t.rational_part(), None);
    }

    #[test]
    fn numerical_embedding_agrees() {
        let z = Cyc::root_of_unity(&rot(1, 8));
        let c = z.to_complex();
        let expect = (2.0f64.sqrt() / 2.0, 2.0f64.sqrt() / 2.0);
        assert!((c.re - expect.0).abs() < 1e-12);
        assert!((c.im - expect.1).abs() < 1e-12);
    }

    #[test]
    fn negative_powers_invert() {
        let z = Cyc::root_of_unity(&rot(1, 6));
        assert!(z.pow(-1).unwrap().mul(&z).is_one());
        assert_eq!(z.pow(-2).unwrap(), z.pow(4).unwrap());
    }
}
