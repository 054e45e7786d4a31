//! Convex position and co-sphericity of vector families.
//!
//! The hull report asks, for each point, whether it is a vertex of the
//! convex hull of the family; membership the other way is certified by
//! exact rational weights.  The co-sphericity probe looks for a common
//! center first under the flat metric and then under any trace-one
//! positive quadric.  Run with `cargo run --example hull_and_cosphere`.

use flagvec::algebra::{rat, FormalVector, Word};
use flagvec::experiments::{
    cosphere_probe, hull_vertex_report, ObjectClass, VectorKind,
};
use flagvec::spaces::LinkSpaces;

fn axis(name: &str, coords: &[(&str, i64)]) -> flagvec::Result<(String, FormalVector)> {
    let mut v = FormalVector::zero();
    for &(word, c) in coords {
        v.add_term(Word::parse(word)?, rat(c));
    }
    Ok((name.to_string(), v))
}

fn main() -> flagvec::Result<()> {
    let spaces = LinkSpaces::in_memory();

    // Flag vectors of the 1-graphs on three vertices, labeled g0..g3.
    // Small families in general position tend to be all-vertex hulls.
    let class = ObjectClass::igraphs(1, 3);
    let mut points = Vec::new();
    for (index, member) in class.members()?.into_iter().enumerate() {
        points.push((
            format!("g{index}"),
            member.vector(VectorKind::Flag, &spaces)?,
        ));
    }
    println!("{}", hull_vertex_report(&points)?.to_text());

    // Synthetic points make the geometry visible: the unit square lies
    // on the circle around (1/2, 1/2), and the probe certifies the
    // center and squared radius exactly.
    let square = vec![
        axis("origin", &[])?,
        axis("right", &[("x", 1)])?,
        axis("up", &[("y", 1)])?,
        axis("corner", &[("x", 1), ("y", 1)])?,
    ];
    println!("{}", cosphere_probe(&square)?.to_text());

    // Three collinear points cannot share a circle; the probe reports
    // the refutation for the flat metric and keeps looking for a
    // witness metric before giving up.
    let line = vec![
        axis("p0", &[])?,
        axis("p1", &[("x", 1)])?,
        axis("p2", &[("x", 2)])?,
    ];
    println!("{}", cosphere_probe(&line)?.to_text());
    Ok(())
}
