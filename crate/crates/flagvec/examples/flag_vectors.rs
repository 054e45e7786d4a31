//! Flag vectors: shelling vectors with every link pushed through its
//! quotient space.
//!
//! Raw shelling vectors blow up because each slot remembers an entire
//! link vector.  The flag vector projects each link onto the few residue
//! coordinates that survive the disjoint-change relations, which keeps
//! the result small without losing the invariant.  Run with
//! `cargo run --example flag_vectors`.

use flagvec::graphs::IGraph;
use flagvec::shelling::{flag_vector, shelling_vector, Method};
use flagvec::spaces::LinkSpaces;

fn main() -> flagvec::Result<()> {
    let spaces = LinkSpaces::in_memory();

    let square = IGraph::new(2, 4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]])?;
    println!("{}", square.render());

    let shelling = shelling_vector(&square, Method::SubsetDp)?;
    let flag = flag_vector(&square, &spaces, Method::SubsetDp)?;
    println!(
        "shelling vector: {} terms; flag vector: {} terms",
        shelling.term_count(),
        flag.term_count()
    );
    println!("{}", flag.to_text());

    // The projection happens slot by slot: the first removal of the
    // square sees a 1-graph on three vertices, and that link only enters
    // through its residue a + (cells) b.
    let naive = flag_vector(&square, &spaces, Method::Naive)?;
    assert_eq!(naive, flag, "the literal sum over orderings agrees");

    // Two inequivalent graphs can still be told apart here; compare a
    // square with a triangle plus an isolated vertex.
    let triangle_plus_point =
        IGraph::new(2, 4, vec![vec![0, 1], vec![0, 2], vec![1, 2]])?;
    let other = flag_vector(&triangle_plus_point, &spaces, Method::SubsetDp)?;
    println!(
        "square and triangle-plus-point flags {}",
        if flag == other { "collide" } else { "differ" }
    );
    Ok(())
}
