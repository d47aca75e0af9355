//! Adaptive numerical integration.
//!
//! One-dimensional integrals use adaptive Simpson with Richardson
//! extrapolation, generic over real and complex values. Piecewise-smooth
//! integrands (periodized kernels have corners at integers) are split at
//! caller-supplied breakpoints first. Multi-dimensional integrals over
//! boxes nest the one-dimensional rule; integrals over simplices map the
//! simplex onto a box through the Duffy substitution, whose Jacobian is
//! polynomial, so smooth integrands stay smooth.

use num::complex::Complex64;

/// Values that can be accumulated by the quadrature rules.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, factor: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
}

/// Integral together with an accumulated error estimate.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: f64,
}

const MAX_DEPTH: usize = 40;

fn simpson<T: QuadValue>(width: f64, fa: T, fm: T, fb: T) -> T {
    fa.add(fm.scale(4.0)).add(fb).scale(width / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_rec<T: QuadValue>(
    f: &dyn Fn(f64) -> T,
    a: f64,
    b: f64,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: f64,
    depth: usize,
) -> Quadrature<T> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(m - a, fa, flm, fm);
    let right = simpson(b - m, fm, frm, fb);
    let refined = left.add(right);
    let delta = refined.sub(whole);
    // Each sample carries rounding noise proportional to the integrand's
    // internal magnitude, so once the Richardson delta is at rounding
    // level relative to the panel's own |f| mass, further splitting only
    // chases noise (the per-level tolerance and the noise both halve with
    // the width, so without this floor the recursion can stall at the
    // depth cap across whole regions).
    let panel_mass = (fa.norm() + flm.norm() + 4.0 * fm.norm() + frm.norm() + fb.norm())
        * (b - a)
        / 6.0;
    let noise_floor = 256.0 * f64::EPSILON * panel_mass;
    if depth == 0 || delta.norm() <= 15.0 * tol || delta.norm() <= noise_floor {
        return Quadrature {
            value: refined.add(delta.scale(1.0 / 15.0)),
            error: delta.norm() / 15.0,
        };
    }
    let l = adaptive_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    let r = adaptive_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    Quadrature {
        value: l.value.add(r.value),
        error: l.error + r.error,
    }
}

/// Adaptive Simpson integral of `f` over [a, b].
pub fn integrate<T: QuadValue>(f: impl Fn(f64) -> T, a: f64, b: f64, tol: f64) -> Quadrature<T> {
    if a == b {
        return Quadrature {
            value: T::zero(),
            error: 0.0,
        };
    }
    let fa = f(a);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(b - a, fa, fm, fb);
    adaptive_rec(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

/// Integrate after splitting [a, b] at the given interior breakpoints
/// (points outside the interval are ignored).
pub fn integrate_with_breakpoints<T: QuadValue>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Quadrature<T> {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut points = vec![a];
    points.extend(cuts);
    points.push(b);
    let piece_tol = tol / points.len().max(1) as f64;
    let mut total = Quadrature {
        value: T::zero(),
        error: 0.0,
    };
    for window in points.windows(2) {
        let piece = integrate(&f, window[0], window[1], piece_tol);
        total.value = total.value.add(piece.value);
        total.error += piece.error;
    }
    total
}

/// Integrate at unit spacing breakpoints: pieces of [a, b] cut at every
/// integer, for integrands with corners or jumps on the integer lattice.
pub fn integrate_between_integers<T: QuadValue>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    tol: f64,
) -> Quadrature<T> {
    let lo = a.floor() as i64;
    let hi = b.ceil() as i64;
    let cuts: Vec<f64> = (lo..=hi).map(|n| n as f64).collect();
    integrate_with_breakpoints(f, a, b, &cuts, tol)
}

/// Nested integration of a scalar function over an axis-aligned box.
pub fn integrate_box(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    bounds: &[(f64, f64)],
    tol: f64,
) -> Quadrature<f64> {
    fn rec(
        f: &(dyn Fn(&[f64]) -> f64 + Sync),
        bounds: &[(f64, f64)],
        prefix: &mut Vec<f64>,
        tol: f64,
    ) -> Quadrature<f64> {
        let axis = prefix.len();
        if axis == bounds.len() {
            return Quadrature {
                value: f(prefix),
                error: 0.0,
            };
        }
        let (lo, hi) = bounds[axis];
        let width = (hi - lo).abs().max(1.0);
        let inner_tol = tol / (2.0 * width);
        let inner_error;
        let result = {
            let inner_error_cell = std::cell::Cell::new(0.0f64);
            let prefix_cell = std::cell::RefCell::new(std::mem::take(prefix));
            let value = integrate(
                |x| {
                    let mut p = prefix_cell.borrow_mut();
                    p.push(x);
                    let inner = rec(f, bounds, &mut p, inner_tol);
                    p.pop();
                    inner_error_cell.set(inner_error_cell.get().max(inner.error));
                    inner.value
                },
                lo,
                hi,
                tol / 2.0,
            );
            *prefix = prefix_cell.into_inner();
            inner_error = inner_error_cell.get();
            value
        };
        Quadrature {
            value: result.value,
            error: result.error + inner_error * (hi - lo).abs(),
        }
    }
    rec(f, bounds, &mut Vec::new(), tol)
}

/// Integral of a smooth function over the simplex with the given vertex
/// list (n+1 vertices in dimension n), via the Duffy map
/// x(u) = v0 + sum_i (u_1 ... u_i)(v_i - v_{i-1}) on the unit box, whose
/// Jacobian is |det| * prod u_i^{n-i}.
pub fn integrate_simplex(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    vertices: &[Vec<f64>],
    tol: f64,
) -> Quadrature<f64> {
    let n = vertices.len() - 1;
    assert!(vertices.iter().all(|v| v.len() == n));
    if n == 0 {
        return Quadrature {
            value: f(&vertices[0]),
            error: 0.0,
        };
    }
    // det of the edge matrix [v_1 - v_0, ..., v_n - v_0].
    let mut m: Vec<Vec<f64>> = (1..=n)
        .map(|i| {
            (0..n)
                .map(|c| vertices[i][c] - vertices[0][c])
                .collect()
        })
        .collect();
    let mut det = 1.0f64;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col] == 0.0 {
            return Quadrature {
                value: 0.0,
                error: 0.0,
            };
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for c in col..n {
                m[row][c] -= factor * m[col][c];
            }
        }
    }
    let jac = det.abs();
    if jac == 0.0 {
        return Quadrature {
            value: 0.0,
            error: 0.0,
        };
    }

    let bounds = vec![(0.0, 1.0); n];
    let g = move |u: &[f64]| {
        let mut x: Vec<f64> = vertices[0].clone();
        let mut scale = 1.0f64;
        let mut weight = 1.0f64;
        for i in 1..=n {
            scale *= u[i - 1];
            for c in 0..n {
                x[c] += scale * (vertices[i][c] - vertices[i - 1][c]);
            }
            if i < n {
                weight *= u[i - 1].powi((n - i) as i32);
            }
        }
        jac * weight * f(&x)
    };
    integrate_box(&g, &bounds, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_integral_is_exact() {
        let q = integrate(|x| x * x, 0.0, 1.0, 1e-12);
        assert!((q.value - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn sine_over_full_period_vanishes() {
        let q = integrate(|x| x.sin(), 0.0, 2.0 * std::f64::consts::PI, 1e-11);
        assert!(q.value.abs() < 1e-10);
    }

    #[test]
    fn complex_exponential_matches_closed_form() {
        let q = integrate(
            |x| Complex64::new(0.0, x).exp(),
            0.0,
            1.0,
            1e-12,
        );
        let expect = Complex64::new((1.0f64).sin(), 1.0 - (1.0f64).cos());
        assert!((q.value - expect).norm() < 1e-11);
    }

    #[test]
    fn breakpoints_handle_corners() {
        // |x - 1| over [0, 3] = 1/2 + 2 = 5/2, with a corner at 1.
        let q = integrate_between_integers(|x: f64| (x - 1.0).abs(), 0.0, 3.0, 1e-11);
        assert!((q.value - 2.5).abs() < 1e-10);
    }

    #[test]
    fn box_integral_of_product() {
        let f = |x: &[f64]| x[0] * x[0] * x[1];
        let q = integrate_box(&f, &[(0.0, 1.0), (0.0, 2.0)], 1e-10);
        assert!((q.value - 2.0 / 3.0).abs() < 1e-8, "{}", q.value);
    }

    #[test]
    fn simplex_volume_and_moments() {
        // Unit triangle (0,0), (1,0), (0,1): area 1/2, int x = 1/6.
        let verts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let one = integrate_simplex(&|_: &[f64]| 1.0, &verts, 1e-10);
        assert!((one.value - 0.5).abs() < 1e-9);
        let moment = integrate_simplex(&|x: &[f64]| x[0], &verts, 1e-10);
        assert!((moment.value - 1.0 / 6.0).abs() < 1e-9);

        // Skewed triangle (1,1), (3,2), (2,4): area 5/2.
        let skew = vec![vec![1.0, 1.0], vec![3.0, 2.0], vec![2.0, 4.0]];
        let area = integrate_simplex(&|_: &[f64]| 1.0, &skew, 1e-10);
        assert!((area.value - 2.5).abs() < 1e-9);
    }

    #[test]
    fn tetrahedron_volume() {
        let verts = vec![
            vec![0.0, 0.0, 0.0],
            vec![2.0, 0.0, 0.0],
            vec![0.0, 3.0, 0.0],
            vec![0.0, 0.0, 4.0],
        ];
        let q = integrate_simplex(&|_: &[f64]| 1.0, &verts, 1e-9);
        assert!((q.value - 4.0).abs() < 1e-7, "{}", q.value);
    }

    #[test]
    fn bump_integral_is_stable() {
        use crate::smooth::{Bump1d, SmoothFunction1d};
        let bump = Bump1d::new(0.0, 1.0);
        let q = integrate(|x| bump.value(x), -1.0, 1.0, 1e-12);
        // Frozen reference computed independently at high resolution.
        assert!((q.value - 0.443993816168).abs() < 1e-9, "{}", q.value);
    }
}
