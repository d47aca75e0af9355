//! Smooth test functions with exact derivative evaluators.
//!
//! Every function here exposes its truncated Taylor expansion at a point
//! (see [`crate::jet`]), so boundary-derivative main terms and remainder
//! integrands are computed without finite differences. Multivariate test
//! functions are products of one-dimensional factors; their derivatives
//! along arbitrary lattice directions come from the generalized Leibniz
//! rule applied to the factor jets, which is exact in structure.

use crate::jet::Jet;

/// Support bounds of a one-dimensional function; `None` means unbounded
/// on that side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Support {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Support {
    pub fn all() -> Self {
        Support {
            lower: None,
            upper: None,
        }
    }

    pub fn interval(lower: f64, upper: f64) -> Self {
        Support {
            lower: Some(lower),
            upper: Some(upper),
        }
    }
}

pub trait SmoothFunction1d: Sync {
    /// Taylor coefficients at `x` through the given order.
    fn jet(&self, x: f64, order: usize) -> Jet;

    /// A closed region outside which the function vanishes identically.
    fn support(&self) -> Support;

    fn value(&self, x: f64) -> f64 {
        self.jet(x, 0).value()
    }

    fn derivative(&self, x: f64, j: usize) -> f64 {
        self.jet(x, j).derivative(j)
    }
}

fn eval_poly_jet(coeffs: &[f64], x: &Jet) -> Jet {
    let mut acc = Jet::constant(0.0, x.order());
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).shift(*c);
    }
    acc
}

/// The standard bump exp(-1/(1 - t^2)) on |t| < 1, rescaled to an
/// arbitrary center and radius, and zero elsewhere.
#[derive(Clone, Debug)]
pub struct Bump1d {
    center: f64,
    radius: f64,
}

impl Bump1d {
    pub fn new(center: f64, radius: f64) -> Self {
        assert!(radius > 0.0);
        Bump1d { center, radius }
    }
}

impl SmoothFunction1d for Bump1d {
    fn jet(&self, x: f64, order: usize) -> Jet {
        let t0 = (x - self.center) / self.radius;
        if t0 * t0 >= 1.0 {
            return Jet::constant(0.0, order);
        }
        let mut t_coeffs = vec![0.0; order + 1];
        t_coeffs[0] = t0;
        if order >= 1 {
            t_coeffs[1] = 1.0 / self.radius;
        }
        let t = Jet::from_coeffs(t_coeffs);
        let one = Jet::constant(1.0, order);
        let u = one.sub(&t.mul(&t));
        one.div(&u).neg().exp()
    }

    fn support(&self) -> Support {
        Support::interval(self.center - self.radius, self.center + self.radius)
    }
}

/// sin(frequency * x + phase) times a bump.
#[derive(Clone, Debug)]
pub struct SinBump1d {
    bump: Bump1d,
    frequency: f64,
    phase: f64,
}

impl SinBump1d {
    pub fn new(center: f64, radius: f64, frequency: f64, phase: f64) -> Self {
        SinBump1d {
            bump: Bump1d::new(center, radius),
            frequency,
            phase,
        }
    }
}

impl SmoothFunction1d for SinBump1d {
    fn jet(&self, x: f64, order: usize) -> Jet {
        let mut arg = vec![0.0; order + 1];
        arg[0] = self.frequency * x + self.phase;
        if order >= 1 {
            arg[1] = self.frequency;
        }
        Jet::from_coeffs(arg).sin().mul(&self.bump.jet(x, order))
    }

    fn support(&self) -> Support {
        self.bump.support()
    }
}

/// A plain polynomial (ascending coefficients) with unbounded support.
/// Useful on intervals, where no compactness is needed; ray formulas
/// reject it.
#[derive(Clone, Debug)]
pub struct Polynomial1d {
    coefficients: Vec<f64>,
}

impl Polynomial1d {
    pub fn new(coefficients: Vec<f64>) -> Self {
        Polynomial1d { coefficients }
    }
}

impl SmoothFunction1d for Polynomial1d {
    fn jet(&self, x: f64, order: usize) -> Jet {
        eval_poly_jet(&self.coefficients, &Jet::variable(x, order))
    }

    fn support(&self) -> Support {
        Support::all()
    }
}

/// A polynomial (ascending coefficients) times a bump.
#[derive(Clone, Debug)]
pub struct PolyBump1d {
    coefficients: Vec<f64>,
    bump: Bump1d,
}

impl PolyBump1d {
    pub fn new(coefficients: Vec<f64>, center: f64, radius: f64) -> Self {
        PolyBump1d {
            coefficients,
            bump: Bump1d::new(center, radius),
        }
    }
}

impl SmoothFunction1d for PolyBump1d {
    fn jet(&self, x: f64, order: usize) -> Jet {
        let p = eval_poly_jet(&self.coefficients, &Jet::variable(x, order));
        p.mul(&self.bump.jet(x, order))
    }

    fn support(&self) -> Support {
        self.bump.support()
    }
}

/// Smooth transition that is exactly 1 on (-inf, plateau_end] and exactly
/// 0 on [plateau_end + margin, inf), built from the one-sided kernel
/// phi(s) = exp(-1/s) through s -> phi(s)/(phi(s) + phi(1-s)).
#[derive(Clone, Debug)]
pub struct SmoothCutoff1d {
    plateau_end: f64,
    margin: f64,
}

fn one_sided_exp(s: &Jet) -> Jet {
    // exp(-1/s) for s > 0; caller guarantees positivity.
    s.recip().neg().exp()
}

impl SmoothCutoff1d {
    pub fn new(plateau_end: f64, margin: f64) -> Self {
        assert!(margin > 0.0);
        SmoothCutoff1d {
            plateau_end,
            margin,
        }
    }
}

impl SmoothFunction1d for SmoothCutoff1d {
    fn jet(&self, x: f64, order: usize) -> Jet {
        if x <= self.plateau_end {
            return Jet::constant(1.0, order);
        }
        if x >= self.plateau_end + self.margin {
            return Jet::constant(0.0, order);
        }
        // s descends from 1 to 0 across the transition window.
        let s0 = (self.plateau_end + self.margin - x) / self.margin;
        let mut s_coeffs = vec![0.0; order + 1];
        s_coeffs[0] = s0;
        if order >= 1 {
            s_coeffs[1] = -1.0 / self.margin;
        }
        let s = Jet::from_coeffs(s_coeffs);
        let mirrored = s.neg().shift(1.0);
        let num = one_sided_exp(&s);
        let den = num.add(&one_sided_exp(&mirrored));
        num.div(&den)
    }

    fn support(&self) -> Support {
        Support {
            lower: None,
            upper: Some(self.plateau_end + self.margin),
        }
    }
}

/// A polynomial damped by a smooth cutoff: equals the polynomial on the
/// plateau and vanishes beyond the transition window. Integrable on rays.
#[derive(Clone, Debug)]
pub struct CutoffPolynomial1d {
    coefficients: Vec<f64>,
    cutoff: SmoothCutoff1d,
}

impl CutoffPolynomial1d {
    pub fn new(coefficients: Vec<f64>, plateau_end: f64, margin: f64) -> Self {
        CutoffPolynomial1d {
            coefficients,
            cutoff: SmoothCutoff1d::new(plateau_end, margin),
        }
    }
}

impl SmoothFunction1d for CutoffPolynomial1d {
    fn jet(&self, x: f64, order: usize) -> Jet {
        let p = eval_poly_jet(&self.coefficients, &Jet::variable(x, order));
        p.mul(&self.cutoff.jet(x, order))
    }

    fn support(&self) -> Support {
        self.cutoff.support()
    }
}

// ---- Multivariate test functions ----

pub trait SmoothFunctionNd: Sync {
    fn dimension(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// Derivative of the pullback g(t) = f(base + sum_j t_j dir_j), of
    /// order `orders[j]` in t_j, evaluated at the parameter point `t`.
    fn pullback_derivative(
        &self,
        base: &[f64],
        directions: &[Vec<f64>],
        orders: &[usize],
        t: &[f64],
    ) -> f64;

    /// Axis-aligned box containing the support, when compact.
    fn support_box(&self) -> Option<Vec<(f64, f64)>>;
}

/// Product of one-dimensional factors, one per coordinate.
pub struct SeparableNd {
    factors: Vec<Box<dyn SmoothFunction1d + Send>>,
}

impl SeparableNd {
    pub fn new(factors: Vec<Box<dyn SmoothFunction1d + Send>>) -> Self {
        assert!(!factors.is_empty());
        SeparableNd { factors }
    }

    pub fn factors(&self) -> &[Box<dyn SmoothFunction1d + Send>] {
        &self.factors
    }
}

fn multinomial(total: usize, parts: &[usize]) -> f64 {
    debug_assert_eq!(parts.iter().sum::<usize>(), total);
    let mut value = 1.0f64;
    let mut used = 0usize;
    for &p in parts {
        for i in 1..=p {
            used += 1;
            value *= used as f64 / i as f64;
        }
    }
    value
}

/// Enumerate all ways to split `total` into `parts` nonnegative summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

impl SmoothFunctionNd for SeparableNd {
    fn dimension(&self) -> usize {
        self.factors.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.factors.len());
        self.factors
            .iter()
            .zip(x)
            .map(|(f, &xi)| f.value(xi))
            .product()
    }

    fn pullback_derivative(
        &self,
        base: &[f64],
        directions: &[Vec<f64>],
        orders: &[usize],
        t: &[f64],
    ) -> f64 {
        let n = self.factors.len();
        let s = directions.len();
        assert_eq!(orders.len(), s);
        assert_eq!(t.len(), s);
        let total: usize = orders.iter().sum();

        // Evaluation point and all factor derivatives through `total`.
        let mut derivs: Vec<Vec<f64>> = Vec::with_capacity(n);
        for (i, factor) in self.factors.iter().enumerate() {
            let xi = base[i]
                + directions
                    .iter()
                    .zip(t)
                    .map(|(d, &tj)| d[i] * tj)
                    .sum::<f64>();
            let jet = factor.jet(xi, total);
            derivs.push((0..=total).map(|r| jet.derivative(r)).collect());
        }

        // For each t-variable, distribute its derivative order among the
        // factors; each split contributes a multinomial coefficient and
        // the matching powers of the direction components.
        let per_variable: Vec<Vec<(Vec<usize>, f64)>> = (0..s)
            .map(|j| {
                compositions(orders[j], n)
                    .into_iter()
                    .map(|split| {
                        let mut weight = multinomial(orders[j], &split);
                        for (i, &b) in split.iter().enumerate() {
                            weight *= directions[j][i].powi(b as i32);
                        }
                        (split, weight)
                    })
                    .collect()
            })
            .collect();

        fn rec(
            j: usize,
            per_variable: &[Vec<(Vec<usize>, f64)>],
            factor_order: &mut Vec<usize>,
            weight: f64,
            derivs: &[Vec<f64>],
            acc: &mut f64,
        ) {
            if j == per_variable.len() {
                let mut term = weight;
                for (i, orders) in factor_order.iter().enumerate() {
                    term *= derivs[i][*orders];
                }
                *acc += term;
                return;
            }
            for (split, w) in &per_variable[j] {
                if *w == 0.0 {
                    continue;
                }
                for (i, &b) in split.iter().enumerate() {
                    factor_order[i] += b;
                }
                rec(j + 1, per_variable, factor_order, weight * w, derivs, acc);
                for (i, &b) in split.iter().enumerate() {
                    factor_order[i] -= b;
                }
            }
        }

        let mut acc = 0.0;
        rec(
            0,
            &per_variable,
            &mut vec![0usize; n],
            1.0,
            &derivs,
            &mut acc,
        );
        acc
    }

    fn support_box(&self) -> Option<Vec<(f64, f64)>> {
        self.factors
            .iter()
            .map(|f| {
                let s = f.support();
                match (s.lower, s.upper) {
                    (Some(lo), Some(hi)) => Some((lo, hi)),
                    _ => None,
                }
            })
            .collect()
    }
}
