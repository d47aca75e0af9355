//! Integrals of polynomials over dilated polytopes, as exact polynomials
//! in the facet shift parameters.
//!
//! Moving facet `i` of a simple polytope outward by `h_i` keeps the
//! combinatorics fixed for small `h` and moves each vertex polynomially
//! (along its edge frame). Pulling triangulation splits the polytope
//! into simplices whose dilated vertices inherit that motion, so the
//! integral of a polynomial over the dilated body is itself a polynomial
//! in `h`: per simplex, a sign-corrected Jacobian determinant times
//! monomial integrals over the standard simplex.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multipoly::MultiPolynomial;
use crate::polytope::Polytope;
use crate::rational::Rational;

/// Simplices (as vertex index lists, `dim + 1` each) covering the
/// polytope: each face is coned from its lowest-index vertex over the
/// cells of its subfaces that miss the pivot.
pub fn pulling_triangulation(p: &Polytope) -> Vec<Vec<usize>> {
    let whole = p
        .face_by_facets(&[])
        .expect("the improper face is always present");
    let mut memo: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    face_cells(p, whole, &mut memo);
    memo.remove(&whole).unwrap()
}

fn face_cells(p: &Polytope, face: usize, memo: &mut BTreeMap<usize, Vec<Vec<usize>>>) {
    if memo.contains_key(&face) {
        return;
    }
    let vertices = &p.faces()[face].vertices;
    if vertices.len() == 1 {
        memo.insert(face, vec![vertices.clone()]);
        return;
    }
    let pivot = *vertices.iter().min().unwrap();
    let mut cells = Vec::new();
    for sub in p.facets_of_face(face) {
        if p.faces()[sub].vertices.contains(&pivot) {
            continue;
        }
        face_cells(p, sub, memo);
        for cell in &memo[&sub] {
            let mut extended = vec![pivot];
            extended.extend(cell.iter().copied());
            cells.push(extended);
        }
    }
    memo.insert(face, cells);
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
fn poly_det(mat: &[Vec<MultiPolynomial>]) -> MultiPolynomial {
    let n = mat.len();
    let vars = mat[0][0].variable_count();
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut det = MultiPolynomial::zero(vars);
    for (row, entry) in mat.iter().enumerate() {
        if entry[0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPolynomial>> = mat
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != row)
            .map(|(_, r)| r[1..].to_vec())
            .collect();
        let cofactor = entry[0].mul(&poly_det(&minor));
        if row % 2 == 0 {
            det = det.add(&cofactor);
        } else {
            det = det.sub(&cofactor);
        }
    }
    det
}

/// Re-index a polynomial in the shift variables into a wider ring with
/// `prefix` extra variables in front.
fn embed_after(poly: &MultiPolynomial, prefix: usize) -> MultiPolynomial {
    let total = prefix + poly.variable_count();
    let mut out = MultiPolynomial::zero(total);
    for (e, c) in poly.terms() {
        let mut exp = vec![0u32; prefix];
        exp.extend(e.iter().copied());
        out = out.add(&MultiPolynomial::monomial(exp, c.clone()));
    }
    out
}

/// Exact integral of `f` (a polynomial in the space coordinates) over
/// the dilated polytope, as a polynomial in one shift variable per
/// halfspace. Valid for shifts small enough to preserve the
/// combinatorics; the undilated integral is its constant term.
pub fn dilated_integral(p: &Polytope, f: &MultiPolynomial) -> Result<MultiPolynomial> {
    let n = p.dimension();
    let m = p.halfspaces().len();
    if f.variable_count() != n {
        return Err(Error::VariableMismatch {
            expected: n,
            found: f.variable_count(),
        });
    }
    let zero_h = vec![Rational::zero(); m];
    let mut total = MultiPolynomial::zero(m);
    for cell in pulling_triangulation(p) {
        let corners: Vec<Vec<MultiPolynomial>> =
            cell.iter().map(|&w| p.dilated_vertex(w)).collect();
        // Jacobian columns: corner_i - corner_0, polynomials in h.
        let columns: Vec<Vec<MultiPolynomial>> = (1..=n)
            .map(|i| {
                (0..n)
                    .map(|c| corners[i][c].sub(&corners[0][c]))
                    .collect()
            })
            .collect();
        let mat: Vec<Vec<MultiPolynomial>> = (0..n)
            .map(|r| (0..n).map(|c| columns[c][r].clone()).collect())
            .collect();
        let mut det = poly_det(&mat);
        let at_zero = det.eval(&zero_h);
        if at_zero.is_zero() {
            return Err(Error::DegenerateSimplex);
        }
        if at_zero.is_negative() {
            det = det.scale(&Rational::from_int(-1));
        }
        // Parametrize the simplex: x(t, h) = corner_0(h) + sum t_i col_i(h)
        // over the standard simplex in t, in a mixed ring (t's, then h's).
        let images: Vec<MultiPolynomial> = (0..n)
            .map(|c| {
                let mut x = embed_after(&corners[0][c], n);
                for (i, col) in columns.iter().enumerate() {
                    let t = MultiPolynomial::variable(n + m, i);
                    x = x.add(&t.mul(&embed_after(&col[c], n)));
                }
                x
            })
            .collect();
        let substituted = f.substitute(&images)?;
        // Integrate out the t block monomial by monomial:
        // integral of prod t_i^{a_i} over the standard simplex is
        // prod a_i! / (n + sum a_i)!.
        let mut integrated = MultiPolynomial::zero(m);
        for (e, c) in substituted.terms() {
            let (t_exp, h_exp) = e.split_at(n);
            let mut weight = c.clone();
            let mut degree_sum = 0usize;
            for &a in t_exp {
                weight = weight * Rational::factorial(a as usize);
                degree_sum += a as usize;
            }
            weight = &weight / &Rational::factorial(n + degree_sum);
            integrated = integrated.add(&MultiPolynomial::monomial(
                h_exp.to_vec(),
                weight,
            ));
        }
        total = total.add(&integrated.mul(&det));
    }
    Ok(total)
}

/// The volume of the dilated polytope as a polynomial in the shifts.
pub fn volume_polynomial(p: &Polytope) -> Result<MultiPolynomial> {
    dilated_integral(p, &MultiPolynomial::one(p.dimension()))
}
