//! Simple integral polytopes presented by halfspaces, with full input
//! validation, the face lattice, vertex frames, and weighted lattice sums.
//!
//! A polytope is the solution set of `<normal_i, x> + offset_i >= 0` with
//! primitive integer normals. Validation rejects (with witnesses) anything
//! unbounded, empty, lower-dimensional, non-simple, non-integral, or
//! carrying redundant halfspaces. Every vertex of a simple polytope lies
//! on exactly `dim` facets, whose normals form the rows of an invertible
//! matrix; the columns of its inverse are the edge vectors used by the
//! dilation and summation machinery.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;
use num::{Integer, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multipoly::MultiPolynomial;
use crate::rational::Rational;

/// One halfspace `<normal, x> + offset >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

/// Wire format for a polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeSpec {
    pub dimension: usize,
    pub halfspaces: Vec<Halfspace>,
}

/// A vertex together with its facet set and edge frame.
#[derive(Clone, Debug)]
pub struct Vertex {
    /// Integral coordinates.
    pub point: Vec<BigInt>,
    /// Facet indices active at this vertex, ascending; exactly `dim` many.
    pub facets: Vec<usize>,
    /// Edge vector for each active facet (aligned with `facets`): the
    /// dual basis to the facet normals, so `<normal_j, edge_k> = [j = k]`.
    pub edges: Vec<Vec<Rational>>,
}

/// A face, identified by the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// All facet indices containing the face (its closure), ascending.
    pub facets: Vec<usize>,
    /// Vertex indices lying on the face, ascending.
    pub vertices: Vec<usize>,
    /// Codimension; equals `facets.len()` for simple polytopes.
    pub codim: usize,
}

#[derive(Clone, Debug)]
pub struct Polytope {
    dimension: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Vertex>,
    faces: Vec<Face>,
}

// ---- exact linear algebra helpers ----

fn rational_rows(halfspaces: &[Halfspace], picks: &[usize]) -> Vec<Vec<Rational>> {
    picks
        .iter()
        .map(|&i| {
            halfspaces[i]
                .normal
                .iter()
                .map(|&x| Rational::from_int(x))
                .collect()
        })
        .collect()
}

fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = m[r][c].recip().expect("pivot nonzero");
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = &m[i][c] * &inv;
                for j in c..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] = &m[i][j] - &delta;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Solve M x = rhs for square M; None if singular.
fn solve_square(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, pivot);
        let inv = a[c][c].recip().ok()?;
        for j in c..=n {
            a[c][j] = &a[c][j] * &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in c..=n {
                    let delta = &factor * &a[c][j];
                    a[i][j] = &a[i][j] - &delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(pivot) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if pivot != c {
            a.swap(c, pivot);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].recip().expect("pivot nonzero");
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let factor = &a[i][c] * &inv;
                for j in c..n {
                    let delta = &factor * &a[c][j];
                    a[i][j] = &a[i][j] - &delta;
                }
            }
        }
    }
    det
}

/// A nonzero primitive integer vector in the kernel of the rows, if any.
fn integer_kernel_direction(rows: &[Vec<Rational>], cols: usize) -> Option<Vec<BigInt>> {
    let mut m = rows.to_vec();
    let mut pivot_col: Vec<Option<usize>> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let pivot = (r..m.len()).find(|&i| !m[i][c].is_zero());
        let Some(pivot) = pivot else {
            pivot_col.push(None);
            continue;
        };
        m.swap(r, pivot);
        let inv = m[r][c].recip().expect("pivot nonzero");
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = &m[i][c] * &inv;
                for j in 0..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] = &m[i][j] - &delta;
                }
            }
        }
        pivot_col.push(Some(r));
        r += 1;
    }
    // Find a free column and back-substitute a kernel vector.
    let free = (0..cols).find(|&c| pivot_col[c].is_none())?;
    let mut x = vec![Rational::zero(); cols];
    x[free] = Rational::one();
    for c in 0..cols {
        if let Some(row) = pivot_col[c] {
            let coeff = &m[row][free];
            if !coeff.is_zero() {
                let scale = m[row][c].recip().expect("pivot nonzero");
                x[c] = -(coeff * &scale);
            }
        }
    }
    Some(primitive_integer_vector(&x))
}

/// Scale a rational vector to a primitive integer vector.
fn primitive_integer_vector(x: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::from(1);
    for xi in x {
        lcm = lcm.lcm(xi.denom());
    }
    let mut ints: Vec<BigInt> = x
        .iter()
        .map(|xi| xi.numer() * (&lcm / xi.denom()))
        .collect();
    let mut gcd = BigInt::zero();
    for v in &ints {
        gcd = gcd.gcd(v);
    }
    if !gcd.is_zero() && gcd != BigInt::from(1) {
        for v in ints.iter_mut() {
            *v = &*v / &gcd;
        }
    }
    ints
}

fn display_point(p: &[Rational]) -> Vec<String> {
    p.iter().map(|x| x.to_string()).collect()
}

fn big_to_i64(v: &BigInt) -> i64 {
    i64::try_from(v).expect("coordinate fits in i64")
}

/// All k-subsets of 0..n in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let needed = k - current.len();
        for i in start..=n.saturating_sub(needed) {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

impl Polytope {
    pub fn from_spec(spec: &PolytopeSpec) -> Result<Polytope> {
        let n = spec.dimension;
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        let hs = &spec.halfspaces;
        if hs.len() < n + 1 {
            return Err(Error::TooFewHalfspaces {
                dim: n,
                count: hs.len(),
            });
        }
        for (i, h) in hs.iter().enumerate() {
            if h.normal.len() != n {
                return Err(Error::InvalidInput(format!(
                    "halfspace {i} has a normal of length {} in dimension {n}",
                    h.normal.len()
                )));
            }
            if h.normal.iter().all(|&x| x == 0) {
                return Err(Error::ZeroNormal { index: i });
            }
            let mut gcd_acc: u64 = 0;
            for &x in &h.normal {
                gcd_acc = gcd_u64(gcd_acc, x.unsigned_abs());
            }
            if gcd_acc != 1 {
                return Err(Error::NonPrimitiveNormal {
                    index: i,
                    normal: h.normal.clone(),
                });
            }
        }
        for i in 0..hs.len() {
            for j in 0..i {
                if hs[i] == hs[j] {
                    return Err(Error::RedundantFacet { index: i });
                }
            }
        }

        // Boundedness: normals must span, and the recession cone must be
        // trivial. Any nonzero recession direction is extreme along the
        // kernel of some (n-1)-subset of normals, so scanning those
        // kernels (both signs) either finds a witness or proves none.
        let all_rows = rational_rows(hs, &(0..hs.len()).collect::<Vec<_>>());
        if rank(&all_rows) < n {
            let dir = integer_kernel_direction(&all_rows, n)
                .expect("rank-deficient normals have a kernel");
            return Err(Error::Unbounded {
                direction: dir.iter().map(big_to_i64).collect(),
            });
        }
        if n == 1 {
            // Recession directions are just signs.
            for sign in [1i64, -1] {
                if hs.iter().all(|h| h.normal[0] * sign >= 0) {
                    return Err(Error::Unbounded {
                        direction: vec![sign],
                    });
                }
            }
        } else {
            for subset in subsets(hs.len(), n - 1) {
                let rows = rational_rows(hs, &subset);
                if rank(&rows) < n - 1 {
                    continue;
                }
                let Some(d) = integer_kernel_direction(&rows, n) else {
                    continue;
                };
                for sign in [1i64, -1] {
                    let ok = hs.iter().all(|h| {
                        let dot: BigInt = h
                            .normal
                            .iter()
                            .zip(&d)
                            .map(|(&u, di)| BigInt::from(u * sign) * di)
                            .sum();
                        !dot.is_negative()
                    });
                    if ok {
                        return Err(Error::Unbounded {
                            direction: d.iter().map(|x| big_to_i64(x) * sign).collect(),
                        });
                    }
                }
            }
        }

        // Vertex enumeration by n-subsets of facets.
        let mut seen: BTreeMap<Vec<Rational>, Vec<usize>> = BTreeMap::new();
        for subset in subsets(hs.len(), n) {
            let rows = rational_rows(hs, &subset);
            let rhs: Vec<Rational> = subset
                .iter()
                .map(|&i| Rational::from_int(-hs[i].offset))
                .collect();
            let Some(x) = solve_square(&rows, &rhs) else {
                continue;
            };
            let feasible = hs.iter().all(|h| {
                let mut acc = Rational::from_int(h.offset);
                for (c, &u) in h.normal.iter().enumerate() {
                    acc += &(Rational::from_int(u) * &x[c]);
                }
                !acc.is_negative()
            });
            if !feasible {
                continue;
            }
            let active: Vec<usize> = hs
                .iter()
                .enumerate()
                .filter(|(_, h)| {
                    let mut acc = Rational::from_int(h.offset);
                    for (c, &u) in h.normal.iter().enumerate() {
                        acc += &(Rational::from_int(u) * &x[c]);
                    }
                    acc.is_zero()
                })
                .map(|(i, _)| i)
                .collect();
            seen.entry(x).or_insert(active);
        }
        if seen.is_empty() {
            return Err(Error::EmptyPolytope);
        }

        let points: Vec<Vec<Rational>> = seen.keys().cloned().collect();
        let hull_rows: Vec<Vec<Rational>> = points[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&points[0])
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>()
            })
            .collect();
        let hull_dim = rank(&hull_rows);
        if hull_dim < n {
            return Err(Error::NotFullDimensional { hull_dim, dim: n });
        }

        for (point, active) in &seen {
            if active.len() != n {
                return Err(Error::NonSimpleVertex {
                    location: display_point(point),
                    facets: active.clone(),
                    count: active.len(),
                    dim: n,
                });
            }
        }
        for point in seen.keys() {
            if point.iter().any(|c| !c.is_integer()) {
                return Err(Error::NonIntegralVertex {
                    location: display_point(point),
                });
            }
        }
        let mut used: BTreeSet<usize> = BTreeSet::new();
        for active in seen.values() {
            used.extend(active.iter().copied());
        }
        for i in 0..hs.len() {
            if !used.contains(&i) {
                return Err(Error::RedundantFacet { index: i });
            }
        }

        // Vertex frames: dual basis to the active normals.
        let mut vertices: Vec<Vertex> = Vec::with_capacity(seen.len());
        for (point, active) in &seen {
            let rows = rational_rows(hs, active);
            let mut edges = Vec::with_capacity(n);
            for k in 0..n {
                let rhs: Vec<Rational> = (0..n)
                    .map(|i| {
                        if i == k {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                let alpha = solve_square(&rows, &rhs)
                    .ok_or(Error::DegenerateCone)?;
                edges.push(alpha);
            }
            vertices.push(Vertex {
                point: point.iter().map(|c| c.floor()).collect(),
                facets: active.clone(),
                edges,
            });
        }

        // Face lattice: every face is the closure of some subset of some
        // vertex's facet set.
        let mut face_map: BTreeMap<Vec<usize>, BTreeSet<usize>> = BTreeMap::new();
        for v in &vertices {
            for size in 0..=n {
                for pick in subsets(n, size) {
                    let s: BTreeSet<usize> = pick.iter().map(|&k| v.facets[k]).collect();
                    let members: Vec<usize> = vertices
                        .iter()
                        .enumerate()
                        .filter(|(_, w)| s.iter().all(|f| w.facets.contains(f)))
                        .map(|(i, _)| i)
                        .collect();
                    let mut closure: BTreeSet<usize> =
                        vertices[members[0]].facets.iter().copied().collect();
                    for &m in &members[1..] {
                        let mf: BTreeSet<usize> = vertices[m].facets.iter().copied().collect();
                        closure = closure.intersection(&mf).copied().collect();
                    }
                    face_map
                        .entry(closure.into_iter().collect())
                        .or_insert_with(|| members.into_iter().collect());
                }
            }
        }
        let mut faces: Vec<Face> = face_map
            .into_iter()
            .map(|(facets, members)| Face {
                codim: facets.len(),
                facets,
                vertices: members.into_iter().collect(),
            })
            .collect();
        faces.sort_by(|a, b| (a.codim, &a.facets).cmp(&(b.codim, &b.facets)));

        Ok(Polytope {
            dimension: n,
            halfspaces: hs.clone(),
            vertices,
            faces,
        })
    }

    pub fn from_json(text: &str) -> Result<Polytope> {
        let spec: PolytopeSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("polytope JSON: {e}")))?;
        Polytope::from_spec(&spec)
    }

    pub fn spec(&self) -> PolytopeSpec {
        PolytopeSpec {
            dimension: self.dimension,
            halfspaces: self.halfspaces.clone(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_by_facets(&self, facets: &[usize]) -> Option<usize> {
        self.faces.iter().position(|f| f.facets == facets)
    }

    /// The face whose closure is exactly the facet set of this vertex.
    pub fn vertex_face(&self, vertex: usize) -> usize {
        self.face_by_facets(&self.vertices[vertex].facets)
            .expect("vertex face exists")
    }

    /// Faces strictly containing the given face (closures strictly
    /// smaller), including the whole polytope.
    pub fn faces_strictly_containing(&self, face: usize) -> Vec<usize> {
        let target: BTreeSet<usize> = self.faces[face].facets.iter().copied().collect();
        self.faces
            .iter()
            .enumerate()
            .filter(|(i, f)| {
                *i != face && f.facets.iter().all(|x| target.contains(x))
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Facet-faces of a face: codimension one higher, closure one larger.
    pub fn facets_of_face(&self, face: usize) -> Vec<usize> {
        let base: BTreeSet<usize> = self.faces[face].facets.iter().copied().collect();
        let codim = self.faces[face].codim;
        self.faces
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                f.codim == codim + 1 && base.iter().all(|x| f.facets.contains(x))
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Evaluate `<normal_i, x> + offset_i` at an integer point.
    pub fn slack(&self, facet: usize, x: &[i64]) -> i64 {
        let h = &self.halfspaces[facet];
        let mut acc: i128 = h.offset as i128;
        for (c, &u) in h.normal.iter().enumerate() {
            acc += u as i128 * x[c] as i128;
        }
        i64::try_from(acc).expect("slack fits in i64")
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        (0..self.halfspaces.len()).all(|i| self.slack(i, x) >= 0)
    }

    /// Indices of facets passing through the point.
    pub fn active_facets(&self, x: &[i64]) -> Vec<usize> {
        (0..self.halfspaces.len())
            .filter(|&i| self.slack(i, x) == 0)
            .collect()
    }

    /// Codimension of the smallest face containing the point: for simple
    /// polytopes this is the number of active facets.
    pub fn depth_exponent(&self, x: &[i64]) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        Some(self.active_facets(x).len())
    }

    pub fn bounding_box(&self) -> Vec<(i64, i64)> {
        (0..self.dimension)
            .map(|c| {
                let lo = self
                    .vertices
                    .iter()
                    .map(|v| big_to_i64(&v.point[c]))
                    .min()
                    .unwrap();
                let hi = self
                    .vertices
                    .iter()
                    .map(|v| big_to_i64(&v.point[c]))
                    .max()
                    .unwrap();
                (lo, hi)
            })
            .collect()
    }

    /// All lattice points of the polytope.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        let bounds = self.bounding_box();
        let mut out = Vec::new();
        let mut current = vec![0i64; self.dimension];
        fn rec(
            p: &Polytope,
            bounds: &[(i64, i64)],
            axis: usize,
            current: &mut Vec<i64>,
            out: &mut Vec<Vec<i64>>,
        ) {
            if axis == bounds.len() {
                if p.contains(current) {
                    out.push(current.clone());
                }
                return;
            }
            for x in bounds[axis].0..=bounds[axis].1 {
                current[axis] = x;
                rec(p, bounds, axis + 1, current, out);
            }
        }
        rec(self, &bounds, 0, &mut current, &mut out);
        out
    }

    /// Weighted lattice sum of an exact function: interior points carry
    /// weight 1, points on a face of codimension c carry weight q^c.
    pub fn weighted_sum_exact(
        &self,
        q: &Rational,
        mut f: impl FnMut(&[i64]) -> Rational,
    ) -> Rational {
        let mut total = Rational::zero();
        for x in self.lattice_points() {
            let c = self.active_facets(&x).len();
            total += &(q.pow(c as u32) * &f(&x));
        }
        total
    }

    /// Weighted lattice sum of a polynomial, exactly.
    pub fn weighted_polynomial_sum(&self, q: &Rational, f: &MultiPolynomial) -> Result<Rational> {
        if f.variable_count() != self.dimension {
            return Err(Error::VariableMismatch {
                expected: self.dimension,
                found: f.variable_count(),
            });
        }
        Ok(self.weighted_sum_exact(q, |x| {
            let point: Vec<Rational> = x.iter().map(|&c| Rational::from_int(c)).collect();
            f.eval(&point)
        }))
    }

    /// Weighted lattice sum of a floating-point function.
    pub fn weighted_sum_f64(&self, q: f64, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let mut total = 0.0;
        for x in self.lattice_points() {
            let c = self.active_facets(&x).len();
            let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
            total += q.powi(c as i32) * f(&xf);
        }
        total
    }

    /// Coordinates of the dilated vertex as polynomials in the dilation
    /// parameters h_0..h_{m-1} (one per halfspace): moving every facet i
    /// outward by h_i moves each vertex along its edge frame.
    pub fn dilated_vertex(&self, vertex: usize) -> Vec<MultiPolynomial> {
        let m = self.halfspaces.len();
        let v = &self.vertices[vertex];
        (0..self.dimension)
            .map(|c| {
                let mut poly = MultiPolynomial::constant(
                    m,
                    Rational::from_bigint(v.point[c].clone()),
                );
                for (k, &facet) in v.facets.iter().enumerate() {
                    let h = MultiPolynomial::variable(m, facet);
                    poly = poly.sub(&h.scale(&v.edges[k][c]));
                }
                poly
            })
            .collect()
    }

    /// |det| of the active normal matrix at a vertex: the order of its
    /// quotient group; 1 exactly when the vertex cone is unimodular.
    pub fn vertex_cone_index(&self, vertex: usize) -> BigInt {
        let rows = rational_rows(&self.halfspaces, &self.vertices[vertex].facets);
        let det = determinant(&rows);
        debug_assert!(det.is_integer());
        det.floor().abs()
    }

    /// Rows (as BigInt) of the normals whose indices are given.
    pub fn normal_rows(&self, facet_indices: &[usize]) -> Vec<Vec<BigInt>> {
        facet_indices
            .iter()
            .map(|&i| {
                self.halfspaces[i]
                    .normal
                    .iter()
                    .map(|&x| BigInt::from(x))
                    .collect()
            })
            .collect()
    }

    // ---- polarization ----

    /// Check a polarizing covector and record which edges it flips: after
    /// flipping, every edge pairs strictly negatively with xi.
    pub fn polarize(&self, xi: &[i64]) -> Result<Polarization> {
        if xi.len() != self.dimension {
            return Err(Error::VariableMismatch {
                expected: self.dimension,
                found: xi.len(),
            });
        }
        let mut flips = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let mut vertex_flips = Vec::with_capacity(v.facets.len());
            for (k, alpha) in v.edges.iter().enumerate() {
                let mut pairing = Rational::zero();
                for (c, &x) in xi.iter().enumerate() {
                    pairing += &(Rational::from_int(x) * &alpha[c]);
                }
                if pairing.is_zero() {
                    return Err(Error::NotPolarizing {
                        xi: xi.iter().map(|x| x.to_string()).collect(),
                        vertex: v.point.iter().map(|c| c.to_string()).collect(),
                        facet: v.facets[k],
                    });
                }
                vertex_flips.push(!pairing.is_negative());
            }
            flips.push(vertex_flips);
        }
        Ok(Polarization {
            xi: xi.to_vec(),
            flips,
        })
    }

    /// The first moment-curve covector (1, t, t^2, ...) that polarizes:
    /// each edge pairing is a nonzero polynomial in t of degree < dim, so
    /// small t values quickly avoid all roots.
    pub fn default_polarization(&self) -> Vec<i64> {
        let mut t: i64 = 1;
        loop {
            let xi: Vec<i64> = (0..self.dimension as u32).map(|c| t.pow(c)).collect();
            if self.polarize(&xi).is_ok() {
                return xi;
            }
            t += 1;
        }
    }
}

/// Result of polarizing: per vertex, which edges of its frame were
/// negated so that all point strictly away from the covector.
#[derive(Clone, Debug)]
pub struct Polarization {
    pub xi: Vec<i64>,
    flips: Vec<Vec<bool>>,
}

impl Polarization {
    pub fn flipped(&self, vertex: usize, k: usize) -> bool {
        self.flips[vertex][k]
    }

    /// The polarized edge vector (sign applied).
    pub fn edge(&self, p: &Polytope, vertex: usize, k: usize) -> Vec<Rational> {
        let alpha = &p.vertices()[vertex].edges[k];
        if self.flips[vertex][k] {
            alpha.iter().map(|c| -c.clone()).collect()
        } else {
            alpha.clone()
        }
    }

    /// Number of flipped edges at a vertex.
    pub fn flip_count(&self, vertex: usize) -> usize {
        self.flips[vertex].iter().filter(|&&b| b).count()
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Ready-made polytopes used across examples and tests.
pub mod samples {
    use super::{Halfspace, Polytope, PolytopeSpec};

    fn build(dimension: usize, data: &[(&[i64], i64)]) -> Polytope {
        let spec = PolytopeSpec {
            dimension,
            halfspaces: data
                .iter()
                .map(|(n, o)| Halfspace {
                    normal: n.to_vec(),
                    offset: *o,
                })
                .collect(),
        };
        Polytope::from_spec(&spec).expect("sample polytope is valid")
    }

    /// [a, b] on the line.
    pub fn interval(a: i64, b: i64) -> Polytope {
        build(1, &[(&[1], -a), (&[-1], b)])
    }

    /// [0, w] x [0, h].
    pub fn rectangle(w: i64, h: i64) -> Polytope {
        build(
            2,
            &[(&[1, 0], 0), (&[0, 1], 0), (&[-1, 0], w), (&[0, -1], h)],
        )
    }

    pub fn unit_square() -> Polytope {
        rectangle(1, 1)
    }

    /// k times the triangle with vertices (0,0), (k,0), (0,2k): the slant
    /// edge has normal (-2,-1), giving order-2 vertex groups.
    pub fn slanted_triangle(k: i64) -> Polytope {
        build(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[-2, -1], 2 * k)])
    }

    /// Parallelogram spanned by (2,1) and (1,2): every vertex group has
    /// order 3; no edge or interior lattice points beyond the corners.
    pub fn parallelogram() -> Polytope {
        build(
            2,
            &[
                (&[-1, 2], 0),
                (&[2, -1], 0),
                (&[-2, 1], 3),
                (&[1, -2], 3),
            ],
        )
    }

    /// [0,1]^3.
    pub fn unit_cube() -> Polytope {
        build(
            3,
            &[
                (&[1, 0, 0], 0),
                (&[0, 1, 0], 0),
                (&[0, 0, 1], 0),
                (&[-1, 0, 0], 1),
                (&[0, -1, 0], 1),
                (&[0, 0, -1], 1),
            ],
        )
    }

    /// Simplex {x, y, z >= 0, 2x + y + z <= 2}: one vertex of index 2.
    pub fn squashed_simplex() -> Polytope {
        build(
            3,
            &[
                (&[1, 0, 0], 0),
                (&[0, 1, 0], 0),
                (&[0, 0, 1], 0),
                (&[-2, -1, -1], 2),
            ],
        )
    }

    /// Tetrahedron with vertices (0,0,0), (1,1,-1), (2,0,-1), (1,1,5):
    /// vertex groups of orders up to 24 and an edge group of order 2
    /// (the facet normals (1,1,2) and (1,-1,0) span index 2 in their
    /// saturation).
    pub fn skew_tetrahedron() -> Polytope {
        build(
            3,
            &[
                (&[1, 1, 2], 0),
                (&[1, -1, 0], 0),
                (&[-1, 11, -2], 0),
                (&[-1, -1, 0], 2),
            ],
        )
    }

    /// All two-dimensional samples.
    pub fn plane_suite() -> Vec<(&'static str, Polytope)> {
        vec![
            ("unit-square", unit_square()),
            ("rectangle-3x2", rectangle(3, 2)),
            ("slanted-triangle", slanted_triangle(1)),
            ("slanted-triangle-2", slanted_triangle(2)),
            ("parallelogram", parallelogram()),
        ]
    }

    /// The full cross-checking suite.
    pub fn suite() -> Vec<(&'static str, Polytope)> {
        let mut all = vec![("interval-0-4", interval(0, 4))];
        all.extend(plane_suite());
        all.push(("unit-cube", unit_cube()));
        all.push(("squashed-simplex", squashed_simplex()));
        all.push(("skew-tetrahedron", skew_tetrahedron()));
        all
    }
}
