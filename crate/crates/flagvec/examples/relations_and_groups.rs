//! n-ary relations, placeholder links, and finite groups.
//!
//! An n-ary relation shells like a graph, except that a removed vertex
//! does not vanish from the tuples that mention it: each occurrence is
//! replaced by a placeholder stamped with the removal depth.  A finite
//! group is just its Cayley table read as a ternary relation, so group
//! relabelings become relation relabelings.  Run with
//! `cargo run --example relations_and_groups`.

use flagvec::relations::{
    admissible_base_tuples, chain_valid_tuples, cyclic_group, klein_group, render_tuple,
    Entry, NaryRelation,
};
use flagvec::shelling::{
    flag_vector, relation_ordering_count, shelling_vector, Method, ShellObject,
};
use flagvec::spaces::LinkSpaces;

fn main() -> flagvec::Result<()> {
    // A ternary relation holding (0, 1, 1) on three vertices.  Removing
    // vertex 1 turns both occurrences into the depth-1 placeholder *1.
    let relation = NaryRelation::depth_zero(3, 3, vec![vec![0, 1, 1]])?;
    print!("{}", relation.render());
    let link = relation.link_at(1)?;
    for tuple in link.tuples() {
        println!("after removing vertex 1: tuple {}", render_tuple(tuple));
    }

    // Tuples that never gained a placeholder when their vertex left are
    // dropped, which is why (0, 2, 2) disappears from the same link.
    let wider = NaryRelation::depth_zero(3, 3, vec![vec![0, 1, 1], vec![0, 2, 2]])?;
    println!(
        "link of a 2-tuple relation keeps {} tuple(s)",
        wider.link_at(1)?.tuple_count()
    );

    // After n removals every entry is a placeholder.  Not every pattern
    // is reachable: placeholder depths along a tuple must have been
    // introduced consistently, which leaves 16 admissible base triples
    // out of the 27 raw ones.
    let base = admissible_base_tuples(3);
    println!("admissible all-placeholder triples: {}", base.len());
    let raw = 3usize.pow(3);
    println!("raw triples over three placeholder depths: {raw}");
    let rejected = vec![
        Entry::Placeholder(1),
        Entry::Placeholder(3),
        Entry::Placeholder(3),
    ];
    println!(
        "({}) admissible: {}",
        render_tuple(&rejected),
        base.contains(&rejected)
    );
    assert_eq!(chain_valid_tuples(3, 3, 0).len(), 16);

    // Shelling a relation substitutes those terminal tuple-sets for the
    // a/b alphabet; the coefficient sum still counts the orderings.
    let vector = shelling_vector(&relation, Method::SubsetDp)?;
    println!(
        "coefficient sum {} = ordering count {}",
        vector.coefficient_sum(),
        relation_ordering_count(3, 0, 3)
    );

    // Finite groups enter through their Cayley tables.  The two groups
    // of order four are distinguished by their flag vectors.
    let spaces = LinkSpaces::in_memory();
    let z4 = flag_vector(&cyclic_group(4)?.relation(), &spaces, Method::SubsetDp)?;
    let v4 = flag_vector(&klein_group().relation(), &spaces, Method::SubsetDp)?;
    println!(
        "Z4 and V4 flag vectors {}",
        if z4 == v4 { "collide" } else { "differ" }
    );

    // Renaming the elements of a group changes nothing: the relabeled
    // relation is a permutation of the same tuples.
    let z2 = cyclic_group(2)?.relation();
    let renamed = z2.relabel(&[1, 0])?;
    let original = flag_vector(&z2, &spaces, Method::SubsetDp)?;
    let relabeled = flag_vector(&renamed, &spaces, Method::SubsetDp)?;
    assert_eq!(original, relabeled, "flag vectors ignore element names");
    println!("Z2 under the swap relabeling: identical");
    Ok(())
}
