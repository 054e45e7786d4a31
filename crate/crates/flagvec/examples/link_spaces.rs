//! Link quotient spaces: where flag-vector coordinates come from.
//!
//! For every shape of link there is one quotient space, generated by the
//! disjoint-change combinations f(both) - f(first) - f(second) + f(none).
//! Projecting a link's vector onto the quotient keeps exactly what no
//! legal change can move.  Spaces can live in memory or in a write-once
//! disk cache shared between runs.  Run with
//! `cargo run --example link_spaces`.

use flagvec::experiments::{ObjectClass, VectorKind};
use flagvec::shelling::LinkSpaceKey;
use flagvec::spaces::LinkSpaces;

fn main() -> flagvec::Result<()> {
    let spaces = LinkSpaces::in_memory();

    // 1-graphs on m vertices always reduce to two dimensions, and the
    // residue of an n-celled graph is a + n b: only the cell count
    // survives.
    for m in 1..=5 {
        let key = LinkSpaceKey::IGraph { i: 1, m };
        let space = spaces.space(&key)?;
        println!("{key}: dimension {}", space.dimension());
    }
    let key = LinkSpaceKey::IGraph { i: 1, m: 4 };
    let space = spaces.space(&key)?;
    for member in ObjectClass::igraphs(1, 4).members()? {
        let residue = space.project(&member.vector(VectorKind::Flag, &spaces)?)?;
        println!("residue {}: {}", member.describe(), residue.render_inline());
    }

    // 2-graph spaces grow, but stay far below the raw word count.
    for m in 2..=4 {
        let key = LinkSpaceKey::IGraph { i: 2, m };
        let space = spaces.space(&key)?;
        println!("{key}: dimension {}", space.dimension());
    }

    // The same spaces can be kept on disk; a second provider pointed at
    // the directory reuses them instead of rebuilding.
    let dir = std::env::temp_dir().join("flagvec-example-cache");
    let cached = LinkSpaces::with_disk_cache(&dir);
    cached.space(&key)?;
    let reader = LinkSpaces::with_disk_cache(&dir);
    let reloaded = reader.space(&key)?;
    println!(
        "cached {} with dimension {} at {}",
        key,
        reloaded.dimension(),
        cached
            .cache_file(&key)
            .expect("disk-backed providers name their files")
            .display()
    );
    Ok(())
}
