//! Randomized self-checks of the whole pipeline.
//!
//! Each trial draws a random object from a class and checks four facts
//! that must hold if the engine is sound: relabeling invariance of both
//! vectors, agreement of the two computation methods, the closed-form
//! coefficient sum, and that disjoint-change combinations of the
//! object's links project to zero.  A failure would print the offending
//! object and the seed to replay it.  Run with
//! `cargo run --example invariance_suite`.

use flagvec::experiments::{invariance_suite, ObjectClass};
use flagvec::spaces::LinkSpaces;

fn main() -> flagvec::Result<()> {
    let spaces = LinkSpaces::in_memory();

    // One class per object kind, with sizes small enough to keep the
    // whole run under a few seconds.
    let classes = [
        ObjectClass::igraphs_up_to(2, 5),
        ObjectClass::oriented(2, 4),
        ObjectClass::boundary(2, 0, 4),
        ObjectClass::relations(3, 3),
        ObjectClass::groups(4),
    ];
    for class in &classes {
        let report = invariance_suite(class, 25, 7, &spaces)?;
        println!("{}", report.to_text());
    }
    Ok(())
}
