//! Shelling vectors from first principles.
//!
//! A shelling removes vertices one at a time; each removal records what
//! the departing vertex saw (its link) and the whole order contributes
//! one word of atoms.  Summing over every order gives the shelling
//! vector.  Run with `cargo run --example shelling_vectors`.

use flagvec::graphs::IGraph;
use flagvec::shelling::{igraph_ordering_count, shelling_vector, Method};

fn main() -> flagvec::Result<()> {
    // A 1-graph on two vertices whose only cell is {0}: removing vertex
    // 0 first leaves the atom b (it was a cell), removing 1 first leaves
    // a (it was not).
    let path = IGraph::new(1, 2, vec![vec![0]])?;
    println!("{}", path.render());
    let vector = shelling_vector(&path, Method::SubsetDp)?;
    println!("{}", vector.to_text());

    // The full triangle as a 2-graph.  Links are 1-graphs now, so each
    // slot of a word is itself a word of a, b atoms.
    let triangle = IGraph::new(2, 3, vec![vec![0, 1], vec![0, 2], vec![1, 2]])?;
    println!("{}", triangle.render());
    let naive = shelling_vector(&triangle, Method::Naive)?;
    let subset = shelling_vector(&triangle, Method::SubsetDp)?;
    assert_eq!(naive, subset, "the two engines are interchangeable");
    println!("{}", subset.to_text());

    // Substituting 1 for every atom counts the shellings themselves,
    // no matter which cells the graph has.
    println!(
        "coefficient sum {} = ordering count {}",
        subset.coefficient_sum(),
        igraph_ordering_count(2, 3)
    );
    Ok(())
}
