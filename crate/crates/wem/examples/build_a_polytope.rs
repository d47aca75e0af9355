//! Defining polytopes from half-space data: primitive integer normals
//! with integer offsets, validated for boundedness, simplicity, and
//! irredundancy. The same JSON layout drives the command-line tool.

use wem::polytope::Polytope;

fn main() -> wem::error::Result<()> {
    // {(x, y) : x >= 0, y >= 0, x + 2y <= 2} — a triangle with vertices
    // (0,0), (2,0), (0,1), one of which has a non-unimodular cone.
    let spec = r#"{
        "dimension": 2,
        "halfspaces": [
            { "normal": [1, 0],   "offset": 0 },
            { "normal": [0, 1],   "offset": 0 },
            { "normal": [-1, -2], "offset": 2 }
        ]
    }"#;
    let p = Polytope::from_json(spec)?;

    println!("dimension {}", p.dimension());
    for v in p.vertices() {
        println!(
            "vertex {:?} on facets {:?}, cone edges {:?}",
            v.point, v.facets, v.edges
        );
    }
    for (i, face) in p.faces().iter().enumerate() {
        println!("face {i}: active facets {:?}", face.facets);
    }
    println!("bounding box {:?}", p.bounding_box());
    println!("lattice points: {:?}", p.lattice_points());

    // Validation names the offender: a redundant half-space is refused.
    let redundant = r#"{
        "dimension": 1,
        "halfspaces": [
            { "normal": [1],  "offset": 0 },
            { "normal": [-1], "offset": 5 },
            { "normal": [-1], "offset": 9 }
        ]
    }"#;
    match Polytope::from_json(redundant) {
        Err(e) => println!("refused as expected: {e}"),
        Ok(_) => panic!("redundant input must be refused"),
    }
    Ok(())
}
