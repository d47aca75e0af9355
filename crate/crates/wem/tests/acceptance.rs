//! Acceptance gate: one test per advertised guarantee, each printing a
//! single PASS line (run with `--nocapture` to see them; the per-test
//! ok/FAILED line carries the same verdict). Exact claims use zero
//! tolerance; floating-point claims pin their tolerances below.

use wem::cyclotomic::Cyc;
use wem::em1d::{em_interval, em_twisted_ray};
use wem::emnd::EmContext;
use wem::kernels::{chi_series, todd_series, OperatorPolynomial};
use wem::multipoly::MultiPolynomial;
use wem::polytope::{samples, Polytope};
use wem::rational::Rational;
use wem::series::TruncatedSeries;
use wem::smooth::{Bump1d, CutoffPolynomial1d, SeparableNd, SmoothFunction1d};
use wem::groups::GroupSystem;

/// Remainder routes (kernel integral vs. sum minus main term) must agree
/// to this absolute tolerance on one-dimensional formulas.
const REMAINDER_AGREEMENT: f64 = 1e-8;
/// Smooth main term and remainder must drift less than this across
/// polarizing vectors.
const POLARIZATION_DRIFT: f64 = 1e-9;
/// Remainder-to-derivative-norm ratios across a bump family must stay
/// within this multiplicative band at each order.
const RATIO_SPREAD: f64 = 10.0;
/// Quadrature tolerance for one-dimensional acceptance runs.
const QUAD_1D: f64 = 1e-10;
/// Quadrature tolerance for the polarization-invariance runs.
const QUAD_INVARIANCE: f64 = 1e-9;
/// Quadrature tolerance for the remainder-ratio experiment (ratios are
/// order-of-magnitude statements, so looser quadrature suffices).
const QUAD_RATIO: f64 = 1e-7;

fn q_values() -> Vec<Rational> {
    vec![
        Rational::zero(),
        Rational::new(1, 3),
        Rational::new(1, 2),
        Rational::one(),
        Rational::from_int(2),
    ]
}

/// Exponent vectors of all monomials in `n` variables of total degree at
/// most `max_deg`.
fn monomials(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(axis: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if axis == current.len() {
            out.push(current.clone());
            return;
        }
        for e in 0..=left {
            current[axis] = e;
            rec(axis + 1, left - e, current, out);
        }
        current[axis] = 0;
    }
    rec(0, max_deg, &mut current, &mut out);
    out
}

#[test]
fn acceptance_1_exact_polynomial_identity() {
    for (name, p) in samples::suite() {
        let n = p.dimension();
        let ctx = EmContext::new(p).unwrap();
        for exponents in monomials(n, 3) {
            let f = MultiPolynomial::monomial(exponents.clone(), Rational::one());
            for q in q_values() {
                let direct = ctx.polytope().weighted_polynomial_sum(&q, &f).unwrap();
                let formula = ctx.exact_polynomial_sum(&q, &f).unwrap();
                assert_eq!(
                    formula, direct,
                    "{name}: monomial {exponents:?}, q = {q}"
                );
            }
        }
    }
    println!("PASS 1/9: exact polynomial sums equal brute force on the full suite (zero tolerance)");
}

#[test]
fn acceptance_2_regular_collapse() {
    let one2 = MultiPolynomial::one(2);
    for p in [samples::unit_square(), samples::rectangle(3, 2)] {
        let ctx = EmContext::new(p).unwrap();
        for q in q_values() {
            let generic = ctx.exact_polynomial_sum(&q, &one2).unwrap();
            let collapsed = ctx.regular_main_term(&q, &one2).unwrap();
            assert_eq!(generic, collapsed, "q = {q}");
        }
    }
    // On the unit square the weighted count is 4 q^2 (four corners, each
    // on two facets).
    let square = EmContext::new(samples::unit_square()).unwrap();
    for q in q_values() {
        let expect = Rational::from_int(4) * &q * &q;
        assert_eq!(
            square.regular_main_term(&q, &one2).unwrap(),
            expect,
            "q = {q}"
        );
    }
    println!("PASS 2/9: regular collapse matches the generic path and reproduces 4q^2 (zero tolerance)");
}

#[test]
fn acceptance_3_polarized_decomposition() {
    let cases: Vec<(Polytope, Vec<Vec<i64>>)> = vec![
        (
            samples::unit_square(),
            vec![vec![1, 2], vec![-3, 1], vec![5, -7]],
        ),
        (
            samples::slanted_triangle(1),
            vec![vec![1, 1], vec![-3, 1], vec![5, -7]],
        ),
    ];
    for (p, xis) in cases {
        let ctx = EmContext::new(p).unwrap();
        let p = ctx.polytope();
        let support: Vec<(i64, i64)> = p
            .bounding_box()
            .iter()
            .map(|&(lo, hi)| (lo - 1, hi + 1))
            .collect();
        let boxed = support.clone();
        // A lattice-sampled integrand with genuine variation, compactly
        // supported on the inflated bounding box.
        let f = move |x: &[i64]| -> Rational {
            if x.iter()
                .zip(&boxed)
                .any(|(&c, &(lo, hi))| c < lo || c > hi)
            {
                return Rational::zero();
            }
            let mut value = Rational::one();
            for (i, &c) in x.iter().enumerate() {
                value = value * Rational::from_int(c.abs() + 1 + i as i64);
            }
            value
        };
        for q in [Rational::new(1, 3), Rational::from_int(2)] {
            let direct = p.weighted_sum_exact(&q, &f);
            for xi in &xis {
                let decomposed = ctx.polarized_sum_exact(&q, xi, &support, &f).unwrap();
                assert_eq!(decomposed, direct, "xi = {xi:?}, q = {q}");
            }
        }
    }
    println!("PASS 3/9: polarized cone decomposition equals the polytope sum (zero tolerance)");
}

#[test]
fn acceptance_4_interval_formula() {
    // Main term of f(x) = x on [0, b]: exact rational path.
    let x = MultiPolynomial::monomial(vec![1], Rational::one());
    for b in 1..=5i64 {
        let ctx = EmContext::new(samples::interval(0, b)).unwrap();
        for q in q_values() {
            let expect =
                Rational::new(b * (b - 1), 2) + q.clone() * Rational::from_int(b);
            assert_eq!(
                ctx.exact_polynomial_sum(&q, &x).unwrap(),
                expect,
                "b = {b}, q = {q}"
            );
        }
    }
    // Smooth bumps: the two remainder routes agree.
    let f = Bump1d::new(2.5, 2.2);
    for q in [
        Rational::zero(),
        Rational::new(1, 3),
        Rational::new(1, 2),
        Rational::one(),
    ] {
        for m in 2..=6 {
            let report = em_interval(&f, 0, 6, &q, m, QUAD_1D).unwrap();
            assert!(
                report.agreement() < REMAINDER_AGREEMENT,
                "q = {q}, m = {m}: {}",
                report.agreement()
            );
        }
    }
    println!("PASS 4/9: interval main terms exact; bump remainder routes agree to 1e-8");
}

#[test]
fn acceptance_5_twisted_ray() {
    // Identity sum = main + remainder for genuine roots of unity.
    let f = CutoffPolynomial1d::new(vec![1.0, 0.4, -0.05], 4.0, 1.5);
    let q = Rational::new(1, 3);
    for rotation in [Rational::new(1, 2), Rational::new(1, 4), Rational::new(1, 3)] {
        let lambda = Cyc::root_of_unity(&rotation);
        for k in 2..=5 {
            let report = em_twisted_ray(&f, &q, &lambda, k, QUAD_1D).unwrap();
            assert!(
                report.agreement() < REMAINDER_AGREEMENT,
                "rotation {rotation}, k = {k}: {}",
                report.agreement()
            );
        }
    }

    // Operator coefficients equal the generating function
    // S (q + lambda / (e^S - lambda)), coefficient by coefficient.
    let bound = 6;
    let oracle = |q: &Rational, lambda: &Cyc| -> TruncatedSeries {
        let s = TruncatedSeries::s(bound);
        if lambda.is_one() {
            // The pole cancels: S (q + 1/(e^S - 1)) = qS + S/(e^S - 1).
            return s.scale_rational(q).add(&todd_series(bound).flip_sign());
        }
        let denom = TruncatedSeries::exponential(bound)
            .sub(&TruncatedSeries::constant(bound, lambda.clone()));
        let frac = TruncatedSeries::constant(bound, lambda.clone())
            .div(&denom)
            .unwrap();
        s.mul(&TruncatedSeries::constant(bound, Cyc::from_rational(q.clone())).add(&frac))
    };
    for q in [Rational::new(1, 3), Rational::new(2, 5)] {
        for order in 1..=6u64 {
            for a in 1..=order {
                if num::integer::gcd(a, order) != 1 {
                    continue;
                }
                let rotation = Rational::new(a as i64, order as i64);
                let lambda = Cyc::root_of_unity(&rotation);
                let op = OperatorPolynomial::twisted(&q, &lambda, bound).unwrap();
                let series = oracle(&q, &lambda);
                for m in 0..=bound {
                    assert!(
                        op.coefficient(m).sub(&series.coeff(m)).is_zero(),
                        "q = {q}, rotation {rotation}, coefficient {m}"
                    );
                }
            }
        }
    }
    println!("PASS 5/9: twisted ray identities to 1e-8; operator coefficients equal the generating function exactly");
}

#[test]
fn acceptance_6_group_suite() {
    for (name, p) in samples::suite() {
        let gs = GroupSystem::new(&p).unwrap();
        let n = p.dimension();
        for v_idx in 0..p.vertices().len() {
            let v = &p.vertices()[v_idx];
            let group = gs.vertex_group(&p, v_idx);

            // Group order is the index of the edge lattice.
            assert_eq!(
                num::BigInt::from(group.order()),
                p.vertex_cone_index(v_idx),
                "{name}: vertex {v_idx}"
            );

            // The vertex group is partitioned by the flat elements of the
            // faces containing the vertex.
            let vertex_face = p.vertex_face(v_idx);
            let mut faces = vec![vertex_face];
            faces.extend(p.faces_strictly_containing(vertex_face));
            let flat_total: usize =
                faces.iter().map(|&f| gs.group(f).flats.len()).sum();
            assert_eq!(
                flat_total as u64,
                group.order(),
                "{name}: vertex {v_idx} partition"
            );

            // Frobenius indicator: the character average detects exactly
            // the integer points of the edge lattice.
            let patterns: Vec<Vec<i64>> = monomials(n, 4)
                .into_iter()
                .map(|e| e.into_iter().map(|x| x as i64 - 1).collect())
                .collect();
            for c in patterns {
                let average = gs.membership_average(&p, v_idx, &c).unwrap();
                let integral = (0..n).all(|coord| {
                    let mut x = Rational::from_bigint(v.point[coord].clone());
                    for (j, &cj) in c.iter().enumerate() {
                        x += &(Rational::from_int(cj) * &v.edges[j][coord]);
                    }
                    x.is_integer()
                });
                assert_eq!(
                    average == Rational::one(),
                    integral,
                    "{name}: vertex {v_idx}, coefficients {c:?}"
                );
            }

            // Character filtering reproduces the direct cone sum.
            let q = Rational::new(1, 3);
            let f = |t: &[i64]| -> Rational {
                t.iter().fold(Rational::one(), |acc, &x| {
                    acc * Rational::from_int(x + 1)
                })
            };
            let direct = GroupSystem::cone_sum_direct(&p, v_idx, &q, 2, f);
            let filtered = gs
                .cone_sum_via_characters(&p, v_idx, &q, 2, f)
                .unwrap();
            assert_eq!(direct, filtered, "{name}: vertex {v_idx} cone sum");
        }
    }
    println!("PASS 6/9: group orders, partitions, membership indicators, and character sums all exact");
}

#[test]
fn acceptance_7_symmetry_identities() {
    // chi_q(S) = chi_{1-q}(-S), coefficientwise through degree 12.
    let bound = 12;
    for q in q_values() {
        let left = chi_series(&q, bound);
        let right = chi_series(&(Rational::one() - &q), bound).flip_sign();
        for m in 0..=bound {
            assert!(
                left.coeff(m).sub(&right.coeff(m)).is_zero(),
                "chi symmetry: q = {q}, coefficient {m}"
            );
        }
    }

    // N_{1-q}^{k, 1/lambda}(S) = N_q^{k, lambda}(-S), exactly.
    for q in [Rational::new(1, 3), Rational::new(2, 7)] {
        let q_conj = Rational::one() - &q;
        for order in 1..=8u64 {
            for a in 1..=order {
                if num::integer::gcd(a, order) != 1 {
                    continue;
                }
                let lambda =
                    Cyc::root_of_unity(&Rational::new(a as i64, order as i64));
                let inverse = lambda.pow(-1).unwrap();
                for k in 1..=6 {
                    let left =
                        OperatorPolynomial::twisted(&q_conj, &inverse, k).unwrap();
                    let right = OperatorPolynomial::twisted(&q, &lambda, k)
                        .unwrap()
                        .series()
                        .flip_sign();
                    for m in 0..=k {
                        assert!(
                            left.coefficient(m).sub(&right.coeff(m)).is_zero(),
                            "q = {q}, order {order}, a = {a}, k = {k}, coefficient {m}"
                        );
                    }
                }
            }
        }
    }
    println!("PASS 7/9: weight and twist symmetry identities hold coefficientwise (zero tolerance)");
}

#[test]
fn acceptance_8_polarization_invariance() {
    let ctx = EmContext::new(samples::slanted_triangle(1)).unwrap();
    let xis: Vec<Vec<i64>> = vec![vec![1, 2], vec![-3, 1]];

    // Exact path: identical rationals for every polarization.
    let support: Vec<(i64, i64)> = ctx
        .polytope()
        .bounding_box()
        .iter()
        .map(|&(lo, hi)| (lo - 1, hi + 1))
        .collect();
    let boxed = support.clone();
    let f_exact = move |x: &[i64]| -> Rational {
        if x.iter()
            .zip(&boxed)
            .any(|(&c, &(lo, hi))| c < lo || c > hi)
        {
            return Rational::zero();
        }
        Rational::from_int(x.iter().map(|&c| c.abs() + 1).product::<i64>())
    };
    let q = Rational::new(1, 3);
    let exact: Vec<Rational> = xis
        .iter()
        .map(|xi| ctx.polarized_sum_exact(&q, xi, &support, &f_exact).unwrap())
        .collect();
    for other in &exact[1..] {
        assert_eq!(&exact[0], other);
    }

    // Smooth path: main term and remainder drift below 1e-9.
    let f = SeparableNd::new(vec![
        Box::new(Bump1d::new(0.4, 1.2)) as Box<dyn SmoothFunction1d + Send>,
        Box::new(Bump1d::new(0.5, 1.6)),
    ]);
    let summaries: Vec<_> = xis
        .iter()
        .map(|xi| {
            ctx.smooth_sum_without_remainder_formula(&f, &q, xi, 3, QUAD_INVARIANCE)
                .unwrap()
        })
        .collect();
    for s in &summaries[1..] {
        assert!(
            (s.main_term - summaries[0].main_term).abs() < POLARIZATION_DRIFT,
            "main terms {} vs {}",
            s.main_term,
            summaries[0].main_term
        );
        assert!(
            (s.remainder_difference - summaries[0].remainder_difference).abs()
                < POLARIZATION_DRIFT,
            "remainders {} vs {}",
            s.remainder_difference,
            summaries[0].remainder_difference
        );
    }
    println!("PASS 8/9: polarization invariance — exact path identical, smooth path within 1e-9");
}

#[test]
fn acceptance_9_remainder_estimate() {
    let ctx = EmContext::new(samples::slanted_triangle(1)).unwrap();
    let q = Rational::new(1, 3);
    let xi = vec![1, 1];
    let radii = [1.1, 1.2, 1.3];
    for k in 2..=4usize {
        let mut ratios = Vec::new();
        for &r in &radii {
            let f = SeparableNd::new(vec![
                Box::new(Bump1d::new(0.9, r)) as Box<dyn SmoothFunction1d + Send>,
                Box::new(Bump1d::new(0.4, r)),
            ]);
            let summary = ctx
                .smooth_sum_without_remainder_formula(&f, &q, &xi, k, QUAD_RATIO)
                .unwrap();
            let estimate = EmContext::remainder_estimate(
                f.factors(),
                summary.remainder_difference,
                k,
            )
            .unwrap();
            assert!(
                estimate.ratio.is_finite(),
                "k = {k}, radius {r}: ratio {}",
                estimate.ratio
            );
            ratios.push(estimate.ratio.max(1e-18));
        }
        let spread = ratios.iter().cloned().fold(0.0f64, f64::max)
            / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(
            spread < RATIO_SPREAD,
            "k = {k}: ratios {ratios:?} spread {spread}"
        );
    }
    println!("PASS 9/9: remainder-to-derivative-norm ratios finite and stable (spread < 10x)");
}

/// The smooth runs above are real-valued problems; guard that the
/// character sums actually cancel their imaginary parts.
#[test]
fn acceptance_smoke_imaginary_parts_cancel() {
    let ctx = EmContext::new(samples::slanted_triangle(2)).unwrap();
    let f = SeparableNd::new(vec![
        Box::new(Bump1d::new(2.0, 1.4)) as Box<dyn SmoothFunction1d + Send>,
        Box::new(Bump1d::new(0.5, 1.2)),
    ]);
    let s = ctx
        .smooth_sum(&f, &Rational::new(1, 2), &[1, 1], 2, 1e-8)
        .unwrap();
    assert!(s.imaginary_residual < 1e-8, "{}", s.imaginary_residual);
}
