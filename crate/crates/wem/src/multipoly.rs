//! Sparse multivariate polynomials with rational coefficients.
//!
//! Terms are keyed by exponent vector in a BTreeMap, so iteration order is
//! lexicographic and deterministic. Zero coefficients are never stored; the
//! zero polynomial is the empty map. The wire format is a list of
//! `{exponents, coefficient}` records.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPolynomial {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    exponents: Vec<u32>,
    coefficient: Rational,
}

impl MultiPolynomial {
    pub fn zero(vars: usize) -> Self {
        MultiPolynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The monomial c * prod x_i^{e_i}.
    pub fn monomial(exponents: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exponents.len());
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    /// Single variable x_i as a polynomial in `vars` variables.
    pub fn variable(vars: usize, i: usize) -> Self {
        assert!(i < vars);
        let mut e = vec![0; vars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn variable_count(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent of variable i over all terms.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    fn insert_add(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                *old += &c;
                if old.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.vars, rhs.vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            let n = -&*c;
            *c = n;
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.vars);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.vars, rhs.vars);
        let mut out = Self::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_add(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.vars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.vars);
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.insert_add(e2, c * &Rational::from_int(e[i] as i64));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                t *= &point[i].pow(exp);
            }
            acc += &t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.vars);
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = c.to_f64();
            for (i, &exp) in e.iter().enumerate() {
                t *= point[i].powi(exp as i32);
            }
            acc += t;
        }
        acc
    }

    /// Substitute each variable by the given image polynomial (all images in
    /// a common variable set).
    pub fn substitute(&self, images: &[MultiPolynomial]) -> Result<Self> {
        if images.len() != self.vars {
            return Err(Error::VariableMismatch {
                expected: self.vars,
                found: images.len(),
            });
        }
        let out_vars = match images.first() {
            Some(p) => p.vars,
            None => return Ok(Self::constant(0, self.coefficient(&[]))),
        };
        // Cache powers of each image up to its needed degree.
        let mut powers: Vec<Vec<MultiPolynomial>> = Vec::with_capacity(self.vars);
        for (i, img) in images.iter().enumerate() {
            if img.vars != out_vars {
                return Err(Error::VariableMismatch {
                    expected: out_vars,
                    found: img.vars,
                });
            }
            let top = self.degree_in(i);
            let mut ps = vec![MultiPolynomial::one(out_vars)];
            for _ in 0..top {
                let next = ps.last().unwrap().mul(img);
                ps.push(next);
            }
            powers.push(ps);
        }
        let mut out = Self::zero(out_vars);
        for (e, c) in &self.terms {
            let mut t = MultiPolynomial::constant(out_vars, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    t = t.mul(&powers[i][exp as usize]);
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Keep only the last `keep` variables; every term must have zero
    /// exponents elsewhere.
    pub fn project_tail(&self, keep: usize) -> Result<Self> {
        assert!(keep <= self.vars);
        let cut = self.vars - keep;
        let mut out = Self::zero(keep);
        for (e, c) in &self.terms {
            if e[..cut].iter().any(|&x| x != 0) {
                return Err(Error::Inconsistent(
                    "projection dropped a variable with nonzero exponent".into(),
                ));
            }
            out.insert_add(e[cut..].to_vec(), c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &exp) in e.iter().enumerate() {
                if exp == 1 {
                    write!(f, "*x{i}")?;
                } else if exp > 1 {
                    write!(f, "*x{i}^{exp}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for MultiPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|(e, c)| TermRecord {
                exponents: e.clone(),
                coefficient: c.clone(),
            })
            .collect();
        records.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(d)?;
        let vars = records
            .first()
            .map(|r| r.exponents.len())
            .ok_or_else(|| serde::de::Error::custom("empty polynomial record list"))?;
        let mut p = MultiPolynomial::zero(vars);
        for r in records {
            if r.exponents.len() != vars {
                return Err(serde::de::Error::custom("inconsistent exponent lengths"));
            }
            p.insert_add(r.exponents, r.coefficient);
        }
        Ok(p)
    }
}
