//! Weighted lattice-sum engine for simple integral polytopes.
//!
//! Three routes to the weighted sum `sum q^(codim of smallest face
//! containing x) f(x)` over the lattice points of a polytope:
//!
//! * **Exact polynomial route**: a face-by-face operator formula. Each
//!   face contributes, for every flat element of its lattice group, a
//!   product of one-dimensional operator polynomials — twisted by the
//!   element's characters on the face's facets, untwisted elsewhere —
//!   applied to the shift-polynomial of the integral of `f` over the
//!   dilated body. Exact in rationals (the cyclotomic parts cancel; a
//!   residue check enforces it).
//! * **Regular collapse**: when every vertex cone is unimodular the face
//!   formula collapses to a single product of untwisted operators.
//! * **Smooth route**: for compactly supported smooth functions the sum
//!   is split over polarized vertex cones, each cone sum expanded by
//!   characters into twisted one-dimensional summations along its edge
//!   frame, and each of those replaced by its order-`k` summation
//!   formula (endpoint derivatives, plain integrals, and periodized-
//!   kernel remainder integrals).

use std::cell::RefCell;

use num::complex::Complex64;
use num::Zero;
use rayon::prelude::*;

use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};
use crate::groups::{rotation_of, GroupSystem};
use crate::kernels::{OperatorPolynomial, PeriodizedKernel};
use crate::multipoly::MultiPolynomial;
use crate::polytope::{Polarization, Polytope};
use crate::quad::{integrate_between_integers, Quadrature};
use crate::rational::Rational;
use crate::smooth::{SmoothFunction1d, SmoothFunctionNd};
use crate::volume;

/// Number of worker threads, overridable with the `WEM_THREADS`
/// environment variable.
fn with_thread_pool<R: Send>(job: impl FnOnce() -> R + Send) -> R {
    match std::env::var("WEM_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(threads) if threads > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool construction")
            .install(job),
        _ => job(),
    }
}

/// A polytope together with its face groups, ready to run summation
/// formulas.
pub struct EmContext {
    polytope: Polytope,
    groups: GroupSystem,
}

/// Result of the smooth route at one order.
#[derive(Clone, Debug)]
pub struct SmoothSummary {
    /// The weighted lattice sum, enumerated directly (the ground truth).
    pub direct_sum: f64,
    /// Main term of the order-`k` formula: all choices without a kernel
    /// factor.
    pub main_term: f64,
    /// `direct_sum - main_term`; what the remainder integrals must equal.
    pub remainder_difference: f64,
    /// Remainder assembled from the kernel integrals (dimensions 1 and 2;
    /// `None` when the dimension is higher and only the difference route
    /// is run).
    pub remainder_formula: Option<f64>,
    /// Leftover imaginary part after summing all character-twisted
    /// contributions; must be at the numerical noise level.
    pub imaginary_residual: f64,
    /// Accumulated quadrature error estimate.
    pub quadrature_error: f64,
    /// Formula order.
    pub order: usize,
    /// Polarizing covector used to split the boundary.
    pub xi: Vec<i64>,
}

/// One face/group-element term of the exact main-term expansion.
#[derive(Clone, Debug)]
pub struct FaceContribution {
    /// Face index in the polytope's face list.
    pub face: usize,
    /// Facets whose intersection is the face.
    pub facets: Vec<usize>,
    /// Index of the group element within the face group's element list.
    pub element: usize,
    /// The term's value in the cyclotomic ring.
    pub value: Cyc,
}

/// Size of the remainder against the derivative norms that control it.
#[derive(Clone, Debug)]
pub struct RemainderEstimate {
    pub remainder: f64,
    /// Largest product over axes of L1 norms of factor derivatives, over
    /// all derivative multi-orders with every entry at most `k` and total
    /// between `k` and `n * k`.
    pub derivative_bound: f64,
    /// `|remainder| / derivative_bound`.
    pub ratio: f64,
}

enum AxisAction {
    /// Plain integral over the axis (untwisted only; unit coefficient).
    Integral { coeff: Complex64 },
    /// Coefficient times a derivative at the cone apex.
    Endpoint { coeff: Complex64, order: usize },
    /// Kernel-weighted integral of the order-`k` derivative.
    Kernel {
        coeff: Complex64,
        kernel: PeriodizedKernel,
        order: usize,
    },
}

struct AxisPlan {
    upper: f64,
    /// Range of the chart coordinate over the support box (corner
    /// extremes); integration clips to it so panel ends sit on the
    /// support edges, where bump derivatives concentrate.
    projection: (f64, f64),
    actions: Vec<AxisAction>,
}

/// Exact support interval of the axis slice through the current point:
/// the set of tau with base + sum_k t_k d_k + tau d_axis inside the
/// support box. `None` when the slice misses the box entirely.
fn slice_support_interval(
    base: &[f64],
    directions: &[Vec<f64>],
    support: &[(f64, f64)],
    t: &[f64],
    axis: usize,
) -> Option<(f64, f64)> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (c, &(s_lo, s_hi)) in support.iter().enumerate() {
        let mut anchor = base[c];
        for (k, tk) in t.iter().enumerate() {
            if k != axis {
                anchor += tk * directions[k][c];
            }
        }
        let d = directions[axis][c];
        if d == 0.0 {
            if anchor < s_lo || anchor > s_hi {
                return None;
            }
            continue;
        }
        let (a, b) = ((s_lo - anchor) / d, (s_hi - anchor) / d);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        lo = lo.max(a);
        hi = hi.min(b);
    }
    (lo < hi).then_some((lo, hi))
}

impl EmContext {
    pub fn new(polytope: Polytope) -> Result<EmContext> {
        let groups = GroupSystem::new(&polytope)?;
        Ok(EmContext { polytope, groups })
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn groups(&self) -> &GroupSystem {
        &self.groups
    }

    // ---- exact polynomial route ----

    /// The order-`k` main term for a polynomial integrand: the sum over
    /// faces and their flat group elements of twisted operator products
    /// applied to the dilated integral of `f`. Exact; errors if the
    /// cyclotomic parts fail to cancel.
    pub fn face_main_term(
        &self,
        q: &Rational,
        f: &MultiPolynomial,
        k: usize,
    ) -> Result<Rational> {
        let contributions = self.face_contributions(q, f, k)?;
        let total = contributions
            .iter()
            .fold(Cyc::zero(), |acc, c| acc.add(&c.value));
        total.rational_part().ok_or_else(|| Error::NonRationalTotal {
            residual: total
                .coefficients()
                .iter()
                .map(|c| c.to_string())
                .collect(),
        })
    }

    /// Per-(face, group element) contributions to the order-`k` main
    /// term. The values live in a cyclotomic ring; their sum is rational
    /// whenever the formula applies.
    pub fn face_contributions(
        &self,
        q: &Rational,
        f: &MultiPolynomial,
        k: usize,
    ) -> Result<Vec<FaceContribution>> {
        let v_poly = volume::dilated_integral(&self.polytope, f)?;
        let untwisted = OperatorPolynomial::untwisted(q, k);
        let un: Vec<Rational> = (0..=k)
            .map(|i| {
                untwisted
                    .coefficient(i)
                    .rational_part()
                    .expect("untwisted coefficients are rational")
            })
            .collect();
        let terms: Vec<(Vec<u32>, Rational)> = v_poly
            .terms()
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();

        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (face_i, group) in self.groups.groups().iter().enumerate() {
            for &flat in &group.flats {
                pairs.push((face_i, flat));
            }
        }

        let contributions: Result<Vec<FaceContribution>> = with_thread_pool(|| {
            pairs
                .par_iter()
                .map(|&(face_i, flat)| -> Result<FaceContribution> {
                    let facets = &self.polytope.faces()[face_i].facets;
                    let elem = &self.groups.group(face_i).elements[flat];
                    let twisted: Vec<Vec<Cyc>> = elem
                        .rotations
                        .iter()
                        .map(|r| -> Result<Vec<Cyc>> {
                            let op = OperatorPolynomial::twisted(
                                q,
                                &Cyc::root_of_unity(r),
                                k,
                            )?;
                            Ok((0..=k).map(|i| op.coefficient(i)).collect())
                        })
                        .collect::<Result<_>>()?;
                    let mut sum = Cyc::zero();
                    'term: for (e, c) in &terms {
                        let mut rational_factor = c.clone();
                        let mut cyc_factor = Cyc::one();
                        for (j, &ej) in e.iter().enumerate() {
                            let ej = ej as usize;
                            if ej > k {
                                continue 'term;
                            }
                            rational_factor =
                                rational_factor * Rational::factorial(ej);
                            match facets.iter().position(|&x| x == j) {
                                Some(pos) => {
                                    let coeff = &twisted[pos][ej];
                                    if coeff.is_zero() {
                                        continue 'term;
                                    }
                                    cyc_factor = cyc_factor.mul(coeff);
                                }
                                None => {
                                    if un[ej].is_zero() {
                                        continue 'term;
                                    }
                                    rational_factor = rational_factor * &un[ej];
                                }
                            }
                        }
                        sum = sum.add(&cyc_factor.scale(&rational_factor));
                    }
                    Ok(FaceContribution {
                        face: face_i,
                        facets: facets.clone(),
                        element: flat,
                        value: sum,
                    })
                })
                .collect()
        });
        contributions
    }

    /// The weighted polynomial sum, exactly: at order
    /// `deg f + dim + 1` the formula has no remainder.
    pub fn exact_polynomial_sum(&self, q: &Rational, f: &MultiPolynomial) -> Result<Rational> {
        let k = f.total_degree() as usize + self.polytope.dimension() + 1;
        self.face_main_term(q, f, k)
    }

    /// The collapsed formula for regular polytopes (every vertex cone
    /// unimodular): a single product of untwisted operators. Errors with
    /// a witness vertex otherwise.
    pub fn regular_main_term(&self, q: &Rational, f: &MultiPolynomial) -> Result<Rational> {
        for (v_idx, v) in self.polytope.vertices().iter().enumerate() {
            let order = self.groups.vertex_group(&self.polytope, v_idx).order();
            if order != 1 {
                return Err(Error::NotRegular {
                    vertex: v.point.iter().map(|c| c.to_string()).collect(),
                    index: order,
                });
            }
        }
        let k = f.total_degree() as usize + self.polytope.dimension() + 1;
        let v_poly = volume::dilated_integral(&self.polytope, f)?;
        let untwisted = OperatorPolynomial::untwisted(q, k);
        let un: Vec<Rational> = (0..=k)
            .map(|i| {
                untwisted
                    .coefficient(i)
                    .rational_part()
                    .expect("untwisted coefficients are rational")
            })
            .collect();
        let mut total = Rational::zero();
        'term: for (e, c) in v_poly.terms() {
            let mut factor = c.clone();
            for &ej in e {
                let ej = ej as usize;
                if ej > k || un[ej].is_zero() {
                    continue 'term;
                }
                factor = factor * Rational::factorial(ej) * &un[ej];
            }
            total += &factor;
        }
        Ok(total)
    }

    // ---- exact polarized decomposition ----

    /// The weighted sum of a finitely supported function rebuilt from
    /// polarized vertex cones: each vertex contributes its cone sum with
    /// sign `(-1)^(number of flipped edges)`, apex weights `q` on
    /// unflipped facets and `1 - q` on flipped ones. `support` must
    /// contain every point where `f` is nonzero.
    pub fn polarized_sum_exact(
        &self,
        q: &Rational,
        xi: &[i64],
        support: &[(i64, i64)],
        f: &(dyn Fn(&[i64]) -> Rational + Sync),
    ) -> Result<Rational> {
        let p = &self.polytope;
        let n = p.dimension();
        if support.len() != n {
            return Err(Error::VariableMismatch {
                expected: n,
                found: support.len(),
            });
        }
        let pol = p.polarize(xi)?;
        let corners = box_corners(support);
        let mut total = Rational::zero();
        for (v_idx, v) in p.vertices().iter().enumerate() {
            // Slack along each polarized edge gives the chart
            // coordinate; bounds come from the support corners.
            let flips: Vec<bool> = (0..n).map(|kk| pol.flipped(v_idx, kk)).collect();
            let upper: Vec<i64> = (0..n)
                .map(|kk| {
                    corners
                        .iter()
                        .map(|x| {
                            let s = p.slack(v.facets[kk], x);
                            if flips[kk] {
                                -s
                            } else {
                                s
                            }
                        })
                        .max()
                        .unwrap()
                })
                .collect();
            if upper.iter().any(|&u| u < 0) {
                continue;
            }
            let sign_negative = pol.flip_count(v_idx) % 2 == 1;
            let mut t = vec![0i64; n];
            loop {
                // Reconstruct the chart point exactly and keep it only
                // when integral.
                let mut point = vec![Rational::zero(); n];
                let mut integral = true;
                for axis in 0..n {
                    let mut coord = Rational::from_bigint(v.point[axis].clone());
                    for kk in 0..n {
                        let beta = pol.edge(p, v_idx, kk);
                        coord += &(Rational::from_int(t[kk]) * &beta[axis]);
                    }
                    if !coord.is_integer() {
                        integral = false;
                        break;
                    }
                    point[axis] = coord;
                }
                if integral {
                    let x: Vec<i64> = point
                        .iter()
                        .map(|c| c.to_i64().expect("point fits in i64"))
                        .collect();
                    let value = f(&x);
                    if !value.is_zero() {
                        let mut weight = value;
                        for kk in 0..n {
                            if t[kk] == 0 {
                                let w = if flips[kk] {
                                    Rational::one() - q
                                } else {
                                    q.clone()
                                };
                                weight = weight * w;
                            }
                        }
                        if sign_negative {
                            total -= &weight;
                        } else {
                            total += &weight;
                        }
                    }
                }
                let mut axis = 0;
                loop {
                    if axis == n {
                        break;
                    }
                    t[axis] += 1;
                    if t[axis] <= upper[axis] {
                        break;
                    }
                    t[axis] = 0;
                    axis += 1;
                }
                if axis == n {
                    break;
                }
            }
        }
        Ok(total)
    }

    // ---- smooth route ----

    /// Run the order-`k` summation formula on a compactly supported
    /// smooth function, splitting the sum over polarized vertex cones
    /// and expanding each by characters into per-axis one-dimensional
    /// formulas.
    pub fn smooth_sum(
        &self,
        f: &dyn SmoothFunctionNd,
        q: &Rational,
        xi: &[i64],
        k: usize,
        quad_tol: f64,
    ) -> Result<SmoothSummary> {
        // Kernel remainder integrals are assembled in low dimensions;
        // beyond that the difference route is authoritative.
        let include_kernels = self.polytope.dimension() <= 2;
        self.smooth_sum_inner(f, q, xi, k, quad_tol, include_kernels)
    }

    /// Like [`smooth_sum`](Self::smooth_sum), but never evaluates the
    /// remainder as an explicit kernel integral (`remainder_formula` is
    /// `None`). The nested kernel quadrature dominates the cost of the
    /// full report, so use this when only the main term and the
    /// sum-minus-main remainder are needed.
    pub fn smooth_sum_without_remainder_formula(
        &self,
        f: &dyn SmoothFunctionNd,
        q: &Rational,
        xi: &[i64],
        k: usize,
        quad_tol: f64,
    ) -> Result<SmoothSummary> {
        self.smooth_sum_inner(f, q, xi, k, quad_tol, false)
    }

    fn smooth_sum_inner(
        &self,
        f: &dyn SmoothFunctionNd,
        q: &Rational,
        xi: &[i64],
        k: usize,
        quad_tol: f64,
        include_kernels: bool,
    ) -> Result<SmoothSummary> {
        let p = &self.polytope;
        let n = p.dimension();
        if f.dimension() != n {
            return Err(Error::VariableMismatch {
                expected: n,
                found: f.dimension(),
            });
        }
        assert!(k >= 1, "formula order must be at least 1");
        let support = f.support_box().ok_or(Error::UnboundedSupport)?;
        let pol = p.polarize(xi)?;
        let q_f64 = q.to_f64();

        let direct_sum: f64 = p
            .lattice_points()
            .iter()
            .map(|x| {
                let c = p.active_facets(x).len();
                let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
                q_f64.powi(c as i32) * f.value(&xf)
            })
            .sum();

        let mut main = Complex64::zero();
        let mut remainder = Complex64::zero();
        let mut quad_error = 0.0f64;
        for v_idx in 0..p.vertices().len() {
            let (m, r, e) = self.vertex_cone_terms(
                f,
                q,
                &pol,
                v_idx,
                k,
                &support,
                include_kernels,
                quad_tol,
            )?;
            main += m;
            remainder += r;
            quad_error += e;
        }

        Ok(SmoothSummary {
            direct_sum,
            main_term: main.re,
            remainder_difference: direct_sum - main.re,
            remainder_formula: include_kernels.then_some(remainder.re),
            imaginary_residual: main.im.abs() + remainder.im.abs(),
            quadrature_error: quad_error,
            order: k,
            xi: xi.to_vec(),
        })
    }

    /// Main-term and kernel-term totals for one polarized vertex cone.
    #[allow(clippy::too_many_arguments)]
    fn vertex_cone_terms(
        &self,
        f: &dyn SmoothFunctionNd,
        q: &Rational,
        pol: &Polarization,
        v_idx: usize,
        k: usize,
        support: &[(f64, f64)],
        include_kernels: bool,
        quad_tol: f64,
    ) -> Result<(Complex64, Complex64, f64)> {
        let p = &self.polytope;
        let n = p.dimension();
        let v = &p.vertices()[v_idx];
        let base: Vec<f64> = v
            .point
            .iter()
            .map(|c| i64::try_from(c).expect("vertex fits in i64") as f64)
            .collect();
        let group = self.groups.vertex_group(p, v_idx);
        let edges: Vec<Vec<Rational>> = (0..n).map(|kk| pol.edge(p, v_idx, kk)).collect();
        let directions: Vec<Vec<f64>> = edges
            .iter()
            .map(|beta| beta.iter().map(|c| c.to_f64()).collect())
            .collect();
        // Chart coordinate of a point along axis kk is the slack of the
        // matching facet divided by the normal-edge pairing (whose sign
        // absorbs the flip); corner extremes bound the chart coordinate
        // over the whole support box because it is affine.
        let projections: Vec<(f64, f64)> = (0..n)
            .map(|kk| {
                let h = &p.halfspaces()[v.facets[kk]];
                let pairing: f64 = h
                    .normal
                    .iter()
                    .zip(&edges[kk])
                    .map(|(&u, b)| u as f64 * b.to_f64())
                    .sum();
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for corner in box_corners_f64(support) {
                    let slack: f64 = h
                        .normal
                        .iter()
                        .zip(&corner)
                        .map(|(&u, x)| u as f64 * x)
                        .sum::<f64>()
                        + h.offset as f64;
                    lo = lo.min(slack / pairing);
                    hi = hi.max(slack / pairing);
                }
                (lo, hi)
            })
            .collect();
        let uppers: Vec<f64> = projections
            .iter()
            .map(|&(_, hi)| hi.ceil().max(0.0))
            .collect();

        let cone_sign = if pol.flip_count(v_idx) % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        let scale = cone_sign / group.order() as f64;

        let mut main = Complex64::zero();
        let mut remainder = Complex64::zero();
        let mut quad_error = 0.0f64;

        for elem in &group.elements {
            // Per-axis action lists from the element's characters on the
            // polarized frame.
            let mut plans: Vec<AxisPlan> = Vec::with_capacity(n);
            for kk in 0..n {
                let rotation = rotation_of(&elem.lift, &edges[kk]);
                let lambda = Cyc::root_of_unity(&rotation);
                let weight = if pol.flipped(v_idx, kk) {
                    Rational::one() - q
                } else {
                    q.clone()
                };
                let op = OperatorPolynomial::twisted(&weight, &lambda, k)?;
                let mut actions = Vec::new();
                let c0 = op.coefficient(0).to_complex();
                if c0.norm() > 0.0 {
                    actions.push(AxisAction::Integral { coeff: c0 });
                }
                for i in 1..=k {
                    let ci = op.coefficient(i).to_complex();
                    if ci.norm() == 0.0 {
                        continue;
                    }
                    let sign = if (i - 1) % 2 == 1 { -1.0 } else { 1.0 };
                    actions.push(AxisAction::Endpoint {
                        coeff: sign * ci,
                        order: i - 1,
                    });
                }
                if include_kernels {
                    let sign = if (k - 1) % 2 == 1 { -1.0 } else { 1.0 };
                    actions.push(AxisAction::Kernel {
                        coeff: Complex64::new(sign, 0.0),
                        kernel: PeriodizedKernel::twisted(k, &lambda)?,
                        order: k,
                    });
                }
                plans.push(AxisPlan {
                    upper: uppers[kk],
                    projection: projections[kk],
                    actions,
                });
            }

            // Walk the cartesian product of per-axis actions.
            let mut choice = vec![0usize; n];
            loop {
                let mut coeff = Complex64::new(scale, 0.0);
                let mut orders = vec![0usize; n];
                let mut kernel_axes: Vec<(usize, Option<&PeriodizedKernel>)> = Vec::new();
                let mut has_kernel = false;
                for (axis, plan) in plans.iter().enumerate() {
                    match &plan.actions[choice[axis]] {
                        AxisAction::Integral { coeff: c } => {
                            coeff *= c;
                            kernel_axes.push((axis, None));
                        }
                        AxisAction::Endpoint { coeff: c, order } => {
                            coeff *= c;
                            orders[axis] = *order;
                        }
                        AxisAction::Kernel {
                            coeff: c,
                            kernel,
                            order,
                        } => {
                            coeff *= c;
                            orders[axis] = *order;
                            kernel_axes.push((axis, Some(kernel)));
                            has_kernel = true;
                        }
                    }
                }
                if coeff.norm() > 1e-280 {
                    let (value, err) = nested_cone_integral(
                        f,
                        &base,
                        &directions,
                        &orders,
                        &plans,
                        &kernel_axes,
                        support,
                        quad_tol,
                    );
                    let term = coeff * value;
                    if has_kernel {
                        remainder += term;
                    } else {
                        main += term;
                    }
                    quad_error += coeff.norm() * err;
                }
                // Next choice.
                let mut axis = 0;
                loop {
                    if axis == n {
                        break;
                    }
                    choice[axis] += 1;
                    if choice[axis] < plans[axis].actions.len() {
                        break;
                    }
                    choice[axis] = 0;
                    axis += 1;
                }
                if axis == n {
                    break;
                }
            }
        }
        Ok((main, remainder, quad_error))
    }

    /// Remainder size relative to the derivative norms that control it:
    /// the largest product over coordinate axes of L1 norms of factor
    /// derivatives, with per-axis order at most `k` and total order
    /// between `k` and `n * k`.
    pub fn remainder_estimate(
        factors: &[Box<dyn SmoothFunction1d + Send>],
        remainder: f64,
        k: usize,
    ) -> Result<RemainderEstimate> {
        let n = factors.len();
        let norms: Vec<Vec<f64>> = factors
            .iter()
            .map(|f| derivative_l1_norms(f.as_ref(), n * k))
            .collect::<Result<_>>()?;
        let mut best = 0.0f64;
        let mut orders = vec![0usize; n];
        loop {
            let total: usize = orders.iter().sum();
            if total >= k && total <= n * k {
                let product: f64 = orders
                    .iter()
                    .enumerate()
                    .map(|(i, &o)| norms[i][o])
                    .product();
                best = best.max(product);
            }
            let mut axis = 0;
            loop {
                if axis == n {
                    break;
                }
                orders[axis] += 1;
                if orders[axis] <= k {
                    break;
                }
                orders[axis] = 0;
                axis += 1;
            }
            if axis == n {
                break;
            }
        }
        if best == 0.0 {
            return Err(Error::Inconsistent(
                "derivative bound vanished; the estimate is undefined".into(),
            ));
        }
        Ok(RemainderEstimate {
            remainder,
            derivative_bound: best,
            ratio: remainder.abs() / best,
        })
    }
}

/// L1 norms of derivatives 0..=max_order of a compactly supported
/// factor.
pub fn derivative_l1_norms(
    f: &dyn SmoothFunction1d,
    max_order: usize,
) -> Result<Vec<f64>> {
    let support = f.support();
    let (lo, hi) = match (support.lower, support.upper) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(Error::UnboundedSupport),
    };
    Ok((0..=max_order)
        .map(|j| {
            // High derivatives of bumps reach enormous magnitudes, so an
            // absolute tolerance must follow the scale of the integrand.
            let steps = 1024;
            let sup = (0..=steps)
                .map(|i| {
                    let x = lo + (hi - lo) * i as f64 / steps as f64;
                    f.derivative(x, j).abs()
                })
                .fold(0.0f64, f64::max);
            let tol = 1e-9 * (1.0 + sup * (hi - lo));
            integrate_between_integers(|x| f.derivative(x, j).abs(), lo, hi, tol).value
        })
        .collect())
}

fn box_corners(bounds: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut corners = vec![Vec::new()];
    for &(lo, hi) in bounds {
        corners = corners
            .into_iter()
            .flat_map(|c| {
                [lo, hi].into_iter().map(move |x| {
                    let mut c = c.clone();
                    c.push(x);
                    c
                })
            })
            .collect();
    }
    corners
}

fn box_corners_f64(bounds: &[(f64, f64)]) -> Vec<Vec<f64>> {
    let mut corners = vec![Vec::new()];
    for &(lo, hi) in bounds {
        corners = corners
            .into_iter()
            .flat_map(|c| {
                [lo, hi].into_iter().map(move |x| {
                    let mut c = c.clone();
                    c.push(x);
                    c
                })
            })
            .collect();
    }
    corners
}

/// Iterated integral over the integration axes (`kernel_axes`, in
/// order), each over the part of `[0, upper]` where the slice can meet
/// the support of `f`, of the pullback derivative of `f` times any
/// kernel factors; non-integration axes sit at the apex `t = 0`.
fn nested_cone_integral(
    f: &dyn SmoothFunctionNd,
    base: &[f64],
    directions: &[Vec<f64>],
    orders: &[usize],
    plans: &[AxisPlan],
    kernel_axes: &[(usize, Option<&PeriodizedKernel>)],
    support: &[(f64, f64)],
    quad_tol: f64,
) -> (Complex64, f64) {
    let t = RefCell::new(vec![0.0f64; orders.len()]);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn SmoothFunctionNd,
        base: &[f64],
        directions: &[Vec<f64>],
        orders: &[usize],
        plans: &[AxisPlan],
        kernel_axes: &[(usize, Option<&PeriodizedKernel>)],
        support: &[(f64, f64)],
        t: &RefCell<Vec<f64>>,
        tol: f64,
    ) -> Quadrature<Complex64> {
        let zero = Quadrature {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
        };
        let Some(&(axis, kernel)) = kernel_axes.first() else {
            let point = t.borrow();
            let value = f.pullback_derivative(base, directions, orders, &point);
            return Quadrature {
                value: Complex64::new(value, 0.0),
                error: 0.0,
            };
        };
        let rest = &kernel_axes[1..];
        // Clip the axis range to where the integrand can be nonzero and
        // make the panel ends sit on the support edges: the integrand's
        // mass can concentrate in a narrow layer just inside an edge,
        // and a panel straddling the edge may sample only zeros.  The
        // innermost axis sees the exact support slice (all other
        // coordinates are fixed); outer axes use the chart coordinate's
        // range over the support box.
        let range = if rest.is_empty() {
            let point = t.borrow();
            slice_support_interval(base, directions, support, &point, axis)
        } else {
            Some(plans[axis].projection)
        };
        let Some((range_lo, range_hi)) = range else {
            return zero;
        };
        let lo = range_lo.max(0.0);
        let hi = range_hi.min(plans[axis].upper);
        if hi <= lo {
            return zero;
        }
        let inner_err = RefCell::new(0.0f64);
        let outer = integrate_between_integers(
            |x| {
                t.borrow_mut()[axis] = x;
                let inner = rec(
                    f, base, directions, orders, plans, rest, support, t, tol,
                );
                let e = inner.error;
                let mut worst = inner_err.borrow_mut();
                if e > *worst {
                    *worst = e;
                }
                match kernel {
                    Some(kern) => kern.eval_f64(x) * inner.value,
                    None => inner.value,
                }
            },
            lo,
            hi,
            tol,
        );
        t.borrow_mut()[axis] = 0.0;
        let worst_inner = *inner_err.borrow();
        Quadrature {
            value: outer.value,
            error: outer.error + worst_inner * (hi - lo),
        }
    }
    let q = rec(
        f,
        base,
        directions,
        orders,
        plans,
        kernel_axes,
        support,
        &t,
        quad_tol,
    );
    (q.value, q.error)
}
