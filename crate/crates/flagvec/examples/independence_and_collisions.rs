//! Two experiment reports: linear independence and collision scanning.
//!
//! The independence report row-reduces the flag vectors of a whole
//! object class over the rationals and certifies every kernel relation
//! it finds; the collision scan looks for inequivalent objects whose
//! vectors agree exactly.  Both print as versioned text reports.  Run
//! with `cargo run --example independence_and_collisions`.

use flagvec::experiments::{collision_scan, independence_report, ObjectClass, VectorKind};
use flagvec::spaces::LinkSpaces;

fn main() -> flagvec::Result<()> {
    let spaces = LinkSpaces::in_memory();

    // All 2-graphs on four vertices, one representative per relabeling
    // class.  The report states the rank and, for each member outside
    // the independent set, an exact rational combination reproducing it.
    let class = ObjectClass::igraphs(2, 4);
    let report = independence_report(&class, VectorKind::Flag, &spaces)?;
    println!("{}", report.to_text());

    // The same class scanned for collisions: pairs of inequivalent
    // objects with byte-identical flag vectors.  Shared vectors among
    // equivalent objects are expected and not reported.
    let report = collision_scan(&class, &spaces)?;
    println!("{}", report.to_text());
    Ok(())
}
