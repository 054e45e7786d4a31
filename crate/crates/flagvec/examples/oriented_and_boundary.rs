//! Decorated cells: orientation signs and boundary markings.
//!
//! Oriented graphs carry a sign on each cell that transports by parity
//! under relabeling; graphs with boundary mark a subset of each cell and
//! remember, bit by bit, whether past removals touched it.  Both feed
//! the same shelling machinery, just with a richer atom alphabet.  Run
//! with `cargo run --example oriented_and_boundary`.

use flagvec::decorated::{BoundaryGraph, OrientedGraph};
use flagvec::shelling::{shelling_vector, Method, ShellObject};

fn main() -> flagvec::Result<()> {
    // Listing a cell's vertices out of order is fine; the constructor
    // sorts the support and folds the sorting parity into the sign, so
    // (1 0)+ is stored as (0 1)-.
    let swapped = OrientedGraph::new(2, 2, vec![(vec![1, 0], 1)])?;
    print!("{}", swapped.render());

    // Relabeling transports signs the same way.  Swapping the endpoints
    // of a positive edge makes it negative.
    let edge = OrientedGraph::new(2, 3, vec![(vec![0, 1], 1), (vec![0, 2], 1)])?;
    let relabeled = edge.relabel(&[1, 0, 2])?;
    print!("{}", relabeled.render());

    // The atoms now come in signed pairs: a link cell contributes b+ or
    // b- depending on the sign it carries when its last vertex leaves.
    let vector = shelling_vector(&edge, Method::SubsetDp)?;
    println!("{}", vector.to_text());

    // Flipping every sign permutes the b+/b- alphabet, which moves the
    // vector unless the graph was sign-symmetric.
    let flipped = shelling_vector(&edge.flip_signs(), Method::SubsetDp)?;
    println!(
        "global sign flip {} the vector",
        if flipped == vector { "fixes" } else { "moves" }
    );

    // A boundary graph marks some vertices of each cell as boundary.
    // Taking a link appends one bit to the surviving cells: did the
    // removed vertex lie on their boundary?
    let sheet = BoundaryGraph::at_depth_zero(
        2,
        3,
        vec![(vec![0, 1], vec![1]), (vec![1, 2], vec![])],
    )?;
    print!("{}", sheet.render());
    let link = sheet.link_at(1)?;
    for (support, decoration) in link.cells() {
        let bits: String = decoration
            .label
            .iter()
            .map(|&bit| if bit { '1' } else { '0' })
            .collect();
        println!(
            "after removing vertex 1: cell {{{}}} carries label {bits}",
            support
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
    }

    // Those labels surface as bw:<bits> atoms in the shelling vector,
    // so the history of boundary contacts is part of the invariant.
    let vector = shelling_vector(&sheet, Method::SubsetDp)?;
    println!("{}", vector.to_text());
    Ok(())
}
