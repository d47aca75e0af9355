//! Finite abelian groups attached to faces: at each vertex, the quotient
//! of the lattice by the edge frame; at larger faces, the subgroup of
//! characters that are flat along the face. Characters filter cone sums
//! and detect lattice membership by a Frobenius-style average.

use wem::groups::GroupSystem;
use wem::polytope::samples;
use wem::rational::Rational;

fn main() -> wem::error::Result<()> {
    let p = samples::parallelogram();
    let gs = GroupSystem::new(&p)?;

    for g in gs.groups() {
        let face = &p.faces()[g.face];
        println!(
            "face {:?}: group order {}, invariant factors {:?}, {} flat character(s)",
            face.facets,
            g.order(),
            g.invariant_factors,
            g.flats.len()
        );
    }

    // Each vertex group's order is the index of its edge lattice.
    for v_idx in 0..p.vertices().len() {
        let order = gs.vertex_group(&p, v_idx).order();
        println!(
            "vertex {:?}: group order {order}, cone index {}",
            p.vertices()[v_idx].point,
            p.vertex_cone_index(v_idx)
        );
    }

    // Averaging all characters of a vertex group over a cone coordinate
    // gives 1 exactly on lattice points of the ambient lattice, 0 on the
    // rest — a membership test without any rounding.
    let v = 0;
    for c in [[0, 0], [1, 0], [1, 1], [2, 1], [3, 3]] {
        let avg = gs.membership_average(&p, v, &c)?;
        println!("edge coordinates {c:?} -> membership average {avg}");
    }

    // Characters also compute truncated cone sums without enumeration
    // tricks: both routes agree exactly.
    let q = Rational::new(1, 2);
    let f = |t: &[i64]| Rational::from_int(t.iter().sum::<i64>() + 1);
    let direct = GroupSystem::cone_sum_direct(&p, 0, &q, 3, f);
    let filtered = gs.cone_sum_via_characters(&p, 0, &q, 3, f)?;
    println!("cone sum direct = {direct}, via characters = {filtered}");
    assert_eq!(direct, filtered);
    Ok(())
}
