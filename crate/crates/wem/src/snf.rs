//! Smith normal form over the integers.
//!
//! Used to read off the structure of finite quotient lattices: the
//! diagonal entries are the invariant factors, and the tracked unimodular
//! transforms convert between standard coordinates and the aligned basis
//! in which the sublattice is diagonal.

use num::bigint::BigInt;
use num::Integer;
use num::{One, Signed, Zero};

/// D = left * M * right with D diagonal, d_1 | d_2 | ..., all d_i >= 0,
/// and left/right unimodular. `right_inv` is the inverse of `right`; its
/// first `rank` rows form a basis of the saturation of the row span of M.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub rows: usize,
    pub cols: usize,
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
    pub right_inv: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn smith(m: &[Vec<BigInt>]) -> SmithDecomposition {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let mut right_inv = identity(cols);

    // Row operations act on `a` and `left` together; column operations on
    // `a`, `right`, and (inversely) `right_inv`.
    fn swap_rows(a: &mut [Vec<BigInt>], left: &mut [Vec<BigInt>], i: usize, j: usize) {
        a.swap(i, j);
        left.swap(i, j);
    }
    fn negate_row(a: &mut [Vec<BigInt>], left: &mut [Vec<BigInt>], i: usize) {
        for x in a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        for x in left[i].iter_mut() {
            *x = -std::mem::take(x);
        }
    }
    fn add_row(a: &mut [Vec<BigInt>], left: &mut [Vec<BigInt>], src: usize, dst: usize, k: &BigInt) {
        for c in 0..a[src].len() {
            let delta = k * &a[src][c];
            a[dst][c] += delta;
        }
        for c in 0..left[src].len() {
            let delta = k * &left[src][c];
            left[dst][c] += delta;
        }
    }
    fn swap_cols(
        a: &mut [Vec<BigInt>],
        right: &mut [Vec<BigInt>],
        right_inv: &mut [Vec<BigInt>],
        i: usize,
        j: usize,
    ) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in right.iter_mut() {
            row.swap(i, j);
        }
        right_inv.swap(i, j);
    }
    // col_dst += k * col_src; inverse on right_inv: row_src -= k * row_dst.
    fn add_col(
        a: &mut [Vec<BigInt>],
        right: &mut [Vec<BigInt>],
        right_inv: &mut [Vec<BigInt>],
        src: usize,
        dst: usize,
        k: &BigInt,
    ) {
        for row in a.iter_mut() {
            let delta = k * &row[src];
            row[dst] += delta;
        }
        for row in right.iter_mut() {
            let delta = k * &row[src];
            row[dst] += delta;
        }
        for c in 0..right_inv[dst].len() {
            let delta = k * &right_inv[dst][c];
            right_inv[src][c] -= delta;
        }
    }

    let bound = rows.min(cols);
    let mut t = 0;
    while t < bound {
        // Locate the smallest in magnitude nonzero entry in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, &mut left, t, pi);
        if pj != t {
            swap_cols(&mut a, &mut right, &mut right_inv, t, pj);
        }
        if a[t][t].is_negative() {
            negate_row(&mut a, &mut left, t);
        }

        // Reduce the rest of column t and row t modulo the pivot.
        let mut dirty = false;
        for i in t + 1..rows {
            if !a[i][t].is_zero() {
                let (q, r) = a[i][t].div_mod_floor(&a[t][t]);
                add_row(&mut a, &mut left, t, i, &(-q));
                if !r.is_zero() {
                    dirty = true;
                }
            }
        }
        for j in t + 1..cols {
            if !a[t][j].is_zero() {
                let (q, r) = a[t][j].div_mod_floor(&a[t][t]);
                add_col(&mut a, &mut right, &mut right_inv, t, j, &(-q));
                if !r.is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue; // smaller remainders became new pivot candidates
        }

        // Enforce the divisibility chain: any entry of the trailing block
        // not divisible by the pivot gets its row folded into row t.
        let d = a[t][t].clone();
        let mut fixed = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &d).is_zero() {
                    add_row(&mut a, &mut left, i, t, &BigInt::one());
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }

    let mut diag = Vec::with_capacity(bound);
    let mut rank = 0;
    for i in 0..bound {
        let d = a[i][i].abs();
        if !d.is_zero() {
            rank += 1;
        }
        diag.push(d);
    }
    SmithDecomposition {
        rows,
        cols,
        diag,
        rank,
        left,
        right,
        right_inv,
    }
}

impl SmithDecomposition {
    /// Coordinates of a covector in the aligned basis: t = ell * right.
    pub fn aligned_coordinates(&self, ell: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(ell.len(), self.cols);
        (0..self.cols)
            .map(|j| {
                (0..self.cols)
                    .map(|i| &ell[i] * &self.right[i][j])
                    .sum::<BigInt>()
            })
            .collect()
    }

    /// Whether the target lies in the integer row span of the original
    /// matrix: aligned coordinates must be divisible by the invariant
    /// factors and vanish beyond the rank.
    pub fn contains_in_row_span(&self, ell: &[BigInt]) -> bool {
        let t = self.aligned_coordinates(ell);
        for (j, tj) in t.iter().enumerate() {
            if j < self.rank {
                if !(tj % &self.diag[j]).is_zero() {
                    return false;
                }
            } else if !tj.is_zero() {
                return false;
            }
        }
        true
    }

    /// Rows of right_inv spanning the saturation of the row span.
    pub fn saturation_basis(&self) -> Vec<Vec<BigInt>> {
        self.right_inv[..self.rank].to_vec()
    }
}

/// Convenience: does `target` lie in the integer span of `rows`?
pub fn in_integer_row_span(rows: &[Vec<BigInt>], target: &[BigInt]) -> bool {
    smith(rows).contains_in_row_span(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = a.len();
        let k = b.len();
        let m = b[0].len();
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum::<BigInt>())
                    .collect()
            })
            .collect()
    }

    fn check_invariants(m: &[Vec<BigInt>]) {
        let s = smith(m);
        let product = mat_mul(&mat_mul(&s.left, m), &s.right);
        for i in 0..s.rows {
            for j in 0..s.cols {
                let expect = if i == j && i < s.diag.len() {
                    s.diag[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(product[i][j], expect, "entry ({i},{j})");
            }
        }
        for w in s.diag.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "chain {} | {}", w[0], w[1]);
            }
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            }
        }
        let vv = mat_mul(&s.right, &s.right_inv);
        for i in 0..s.cols {
            for j in 0..s.cols {
                let expect = if i == j { BigInt::one() } else { BigInt::zero() };
                assert_eq!(vv[i][j], expect, "right * right_inv at ({i},{j})");
            }
        }
    }

    #[test]
    fn vertex_cone_of_slanted_triangle() {
        // Normals at the slanted vertex: quotient group of order 2.
        let m = big(&[&[0, 1], &[-2, -1]]);
        let s = smith(&m);
        assert_eq!(s.diag, vec![BigInt::one(), BigInt::from(2)]);
        assert_eq!(s.rank, 2);
        check_invariants(&m);
    }

    #[test]
    fn diagonal_matrix_gets_chained() {
        let m = big(&[&[2, 0], &[0, 3]]);
        let s = smith(&m);
        assert_eq!(s.diag, vec![BigInt::one(), BigInt::from(6)]);
        check_invariants(&m);
    }

    #[test]
    fn rank_deficient_rows() {
        let m = big(&[&[1, 2, 3], &[2, 4, 6]]);
        let s = smith(&m);
        assert_eq!(s.rank, 1);
        assert_eq!(s.diag[0], BigInt::one());
        assert!(s.diag[1].is_zero());
        check_invariants(&m);
    }

    #[test]
    fn row_span_membership() {
        let rows = big(&[&[2, 0], &[0, 3]]);
        let inside = |x: i64, y: i64| {
            in_integer_row_span(&rows, &[BigInt::from(x), BigInt::from(y)])
        };
        assert!(inside(2, 0));
        assert!(inside(2, 3));
        assert!(inside(-4, 9));
        assert!(!inside(1, 0));
        assert!(!inside(0, 1));
        assert!(!inside(2, 2));
    }

    #[test]
    fn saturation_of_skewed_plane() {
        // Rows (1,1,2) and (1,-1,0) span index 2 inside their saturation:
        // (1,0,1) is in the saturation but not the span.
        let rows = big(&[&[1, 1, 2], &[1, -1, 0]]);
        let s = smith(&rows);
        assert_eq!(s.rank, 2);
        let order: BigInt = s.diag[..s.rank].iter().product();
        assert_eq!(order, BigInt::from(2));
        let target = vec![BigInt::one(), BigInt::zero(), BigInt::one()];
        assert!(!s.contains_in_row_span(&target));
        let sat = s.saturation_basis();
        assert!(in_integer_row_span(&sat, &target));
    }

    proptest! {
        #[test]
        fn random_matrices_satisfy_invariants(
            entries in proptest::collection::vec(-6i64..=6, 12)
        ) {
            let m: Vec<Vec<BigInt>> = entries
                .chunks(4)
                .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            check_invariants(&m);
        }

        #[test]
        fn integer_combinations_stay_in_span(
            entries in proptest::collection::vec(-5i64..=5, 9),
            coeffs in proptest::collection::vec(-4i64..=4, 3)
        ) {
            let m: Vec<Vec<BigInt>> = entries
                .chunks(3)
                .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let combo: Vec<BigInt> = (0..3)
                .map(|j| {
                    (0..3)
                        .map(|i| BigInt::from(coeffs[i]) * &m[i][j])
                        .sum()
                })
                .collect();
            prop_assert!(in_integer_row_span(&m, &combo));
        }
    }
}
