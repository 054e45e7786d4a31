//! End-to-end acceptance checks, one per criterion, each ending in a
//! single PASS line.  Everything runs at desk scale with exact
//! arithmetic; the two timed criteria assert their own budgets.

use std::collections::BTreeMap;
use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flagvec::algebra::atom::{atom_a, atom_b, Atom, Word};
use flagvec::algebra::vector::{rat, ratio, FormalVector, Rational};
use flagvec::decorated::{BoundaryGraph, OrientedGraph};
use flagvec::error::Result;
use flagvec::experiments::{
    class_vectors, collision_scan, cosphere_probe, hull_vertex_report, independence_report,
    invariance_suite, ObjectClass, VectorKind,
};
use flagvec::graphs::IGraph;
use flagvec::relations::{chain_valid_tuples, groups_of_order, Entry, NaryRelation};
use flagvec::shelling::{flag_vector, igraph_ordering_count, shelling_vector, LinkSpaceKey, Method, ShellObject};
use flagvec::spaces::LinkSpaces;

fn pass(n: usize, what: &str) {
    println!("PASS criterion {n}: {what}");
}

#[test]
fn criterion_01_one_graph_flag_vectors_are_independent() {
    let start = Instant::now();
    let spaces = LinkSpaces::in_memory();
    let report =
        independence_report(&ObjectClass::igraphs(1, 4), VectorKind::Flag, &spaces).unwrap();
    assert_eq!(report.fact("objects"), Some("5"));
    assert_eq!(report.fact("rank"), Some("5"));
    assert_eq!(report.fact("independent"), Some("yes"));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, budget 5 s");
    pass(1, "the 5 one-graph classes on 4 vertices have flag rank 5");
}

#[test]
fn criterion_02_one_graph_link_spaces_reduce_to_a_plus_nb() {
    let spaces = LinkSpaces::in_memory();
    let zero_vertices = spaces.space(&LinkSpaceKey::IGraph { i: 1, m: 0 }).unwrap();
    assert_eq!(zero_vertices.dimension(), 1);
    for m in 1..=5usize {
        let space = spaces.space(&LinkSpaceKey::IGraph { i: 1, m }).unwrap();
        assert_eq!(space.dimension(), 2, "dimension at m = {m}");
        for n in 0..=m {
            let g = IGraph::new(1, m, (0..n).map(|v| vec![v])).unwrap();
            let flag = flag_vector(&g, &spaces, Method::SubsetDp).unwrap();
            let residue = space.project(&flag).unwrap();
            let mut expected = FormalVector::zero();
            expected.add_term(Word::atom(atom_a()), rat(1));
            if n > 0 {
                expected.add_term(Word::atom(atom_b()), rat(n as i64));
            }
            assert_eq!(residue, expected, "residue of the {n}-cell graph on {m} vertices");
        }
    }
    pass(2, "one-graph link spaces have dimension 2 and residues a + n b");
}

#[test]
fn criterion_03_every_disjoint_change_square_projects_to_zero() {
    let start = Instant::now();
    let spaces = LinkSpaces::in_memory();
    let mut squares = 0usize;
    for m in 0..=4usize {
        let space = spaces.space(&LinkSpaceKey::IGraph { i: 2, m }).unwrap();
        let mut flags: BTreeMap<IGraph, FormalVector> = BTreeMap::new();
        for g in IGraph::enumerate_all(2, m).unwrap() {
            let f = flag_vector(&g, &spaces, Method::SubsetDp).unwrap();
            flags.insert(g, f);
        }
        let supports: Vec<Vec<usize>> = (0..m).combinations(2).collect();
        let disjoint_pairs: Vec<(&Vec<usize>, &Vec<usize>)> = supports
            .iter()
            .tuple_combinations()
            .filter(|(c1, c2)| c1.iter().all(|v| !c2.contains(v)))
            .collect();
        for base in flags.keys() {
            for (c1, c2) in &disjoint_pairs {
                let mut stripped = base.clone();
                for c in [c1, c2] {
                    if stripped.has_cell(c) {
                        stripped = stripped.without_cell(c).unwrap();
                    }
                }
                let with_first = stripped.with_cell((*c1).clone()).unwrap();
                let with_second = stripped.with_cell((*c2).clone()).unwrap();
                let with_both = with_first.with_cell((*c2).clone()).unwrap();
                let mut combination = &flags[&with_both] - &flags[&with_first];
                combination.add_scaled(&flags[&with_second], &-Rational::from(rat(1)));
                combination.add_scaled(&flags[&stripped], &rat(1));
                let projected = space.project(&combination).unwrap();
                assert!(
                    projected.is_zero(),
                    "square {:?} x {:?} over {} survives projection",
                    c1,
                    c2,
                    base.render().replace('\n', "; ")
                );
                squares += 1;
            }
        }
    }
    assert_eq!(squares, 64 * 3, "expected every 2-graph on 4 vertices times 3 pairs");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60 s");
    pass(3, "all 192 disjoint change squares on 2-graphs project to zero");
}

#[test]
fn criterion_04_naive_and_subset_engines_agree() {
    let spaces = LinkSpaces::in_memory();
    for g in IGraph::enumerate_all(2, 4).unwrap() {
        let naive = flag_vector(&g, &spaces, Method::Naive).unwrap();
        let subset = flag_vector(&g, &spaces, Method::SubsetDp).unwrap();
        assert_eq!(naive, subset, "engines disagree on {}", g.render());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let r = rng.gen_range(5..=6);
        let g = IGraph::random(2, r, &mut rng);
        let naive = flag_vector(&g, &spaces, Method::Naive).unwrap();
        let subset = flag_vector(&g, &spaces, Method::SubsetDp).unwrap();
        assert_eq!(naive, subset, "engines disagree on {}", g.render());
    }
    pass(4, "naive and subset engines agree on 64 exhaustive and 50 random graphs");
}

#[test]
fn criterion_05_coefficient_sums_count_orderings() {
    assert_eq!(igraph_ordering_count(2, 3), 12u32.into());
    for i in 0..=2usize {
        for r in 0..=5usize {
            let expected: Rational = igraph_ordering_count(i, r).into();
            let graphs = match IGraph::enumerate_all(i, r) {
                Ok(graphs) => graphs,
                Err(_) => IGraph::equivalence_classes(i, r).unwrap(),
            };
            for g in graphs {
                let shelling = shelling_vector(&g, Method::SubsetDp).unwrap();
                assert_eq!(
                    shelling.coefficient_sum(),
                    expected,
                    "sum differs on {}",
                    g.render()
                );
            }
        }
    }
    pass(5, "shelling coefficient sums equal the ordering count, including S(2,3) = 12");
}

#[test]
fn criterion_06_relabeling_leaves_vectors_unchanged() {
    let spaces = LinkSpaces::in_memory();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let trials = 100usize;

    fn both<O: ShellObject>(g: &O, spaces: &LinkSpaces) -> (FormalVector, FormalVector) {
        (
            shelling_vector(g, Method::SubsetDp).unwrap(),
            flag_vector(g, spaces, Method::SubsetDp).unwrap(),
        )
    }
    fn permutation(r: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..r).collect();
        perm.shuffle(rng);
        perm
    }

    for trial in 0..trials {
        let i = rng.gen_range(1..=3);
        let r = rng.gen_range(0..=5);
        let g = IGraph::random(i, r, &mut rng);
        let h = g.relabel(&permutation(r, &mut rng)).unwrap();
        assert_eq!(both(&g, &spaces), both(&h, &spaces), "i-graph trial {trial}");
    }
    for trial in 0..trials {
        let i = rng.gen_range(1..=3);
        let r = rng.gen_range(0..=4);
        let g = OrientedGraph::random(i, r, &mut rng);
        let h = g.relabel(&permutation(r, &mut rng)).unwrap();
        assert_eq!(both(&g, &spaces), both(&h, &spaces), "oriented trial {trial}");
    }
    for trial in 0..trials {
        let i = rng.gen_range(1..=2);
        let r = rng.gen_range(0..=4);
        let g = BoundaryGraph::random(i, r, &mut rng);
        let h = g.relabel(&permutation(r, &mut rng)).unwrap();
        assert_eq!(both(&g, &spaces), both(&h, &spaces), "boundary trial {trial}");
    }
    for trial in 0..trials {
        let m = rng.gen_range(0..=3);
        let tuples: Vec<_> = chain_valid_tuples(3, 0, m)
            .into_iter()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let g = NaryRelation::new(3, 0, m, tuples).unwrap();
        let h = g.relabel(&permutation(m, &mut rng)).unwrap();
        assert_eq!(both(&g, &spaces), both(&h, &spaces), "relation trial {trial}");
    }
    for trial in 0..trials {
        let order = rng.gen_range(1..=4);
        let catalogue = groups_of_order(order).unwrap();
        let (_, table) = &catalogue[rng.gen_range(0..catalogue.len())];
        let g = table.relation();
        let h = g.relabel(&permutation(order, &mut rng)).unwrap();
        assert_eq!(both(&g, &spaces), both(&h, &spaces), "group trial {trial}");
    }
    pass(6, "500 random relabelings across five object classes preserve both vectors");
}

#[test]
fn criterion_07_sixteen_base_triples_are_admissible() {
    let closed_form: Vec<Vec<Entry>> = chain_valid_tuples(3, 3, 0);
    assert_eq!(closed_form.len(), 16);
    let forbidden = vec![
        Entry::Placeholder(1),
        Entry::Placeholder(3),
        Entry::Placeholder(3),
    ];
    assert!(!closed_form.contains(&forbidden));

    // Brute-force oracle: a placeholder triple is admissible exactly
    // when some vertex triple and removal order produce it by repeated
    // links.  Vertices renumber downward after each removal.
    let mut reachable: Vec<Vec<Entry>> = Vec::new();
    for entries in (0..3usize).cartesian_product(0..3).cartesian_product(0..3) {
        let tuple = vec![entries.0 .0, entries.0 .1, entries.1];
        let relation = NaryRelation::depth_zero(3, 3, vec![tuple]).unwrap();
        for order in (0..3usize).permutations(3) {
            let mut current = relation.clone();
            let mut removed: Vec<usize> = Vec::new();
            for &v in &order {
                let shifted = v - removed.iter().filter(|&&u| u < v).count();
                current = current.link_at(shifted).unwrap();
                removed.push(v);
            }
            for tuple in current.tuples() {
                if !reachable.contains(tuple) {
                    reachable.push(tuple.clone());
                }
            }
        }
    }
    reachable.sort();
    let mut expected = closed_form.clone();
    expected.sort();
    assert_eq!(reachable, expected);
    pass(7, "16 of 27 all-placeholder triples are admissible and match the removal oracle");
}

#[test]
fn criterion_08_placeholder_links_follow_the_removal_story() {
    // Vertices 0 and 1 play a and b; removing b from (a, b, b) leaves
    // (a, *1, *1).
    let relation = NaryRelation::depth_zero(3, 2, vec![vec![0, 1, 1]]).unwrap();
    let linked = relation.link_at(1).unwrap();
    assert_eq!(linked.depth(), 1);
    assert_eq!(linked.vertices(), 1);
    let survivors: Vec<Vec<Entry>> = linked.tuples().cloned().collect();
    assert_eq!(
        survivors,
        vec![vec![
            Entry::Vertex(0),
            Entry::Placeholder(1),
            Entry::Placeholder(1),
        ]]
    );
    // The all-*1 triple stays admissible at depth 2 under occurrence
    // counting.
    let retained = vec![
        Entry::Placeholder(1),
        Entry::Placeholder(1),
        Entry::Placeholder(1),
    ];
    assert!(chain_valid_tuples(3, 2, 0).contains(&retained));
    assert!(NaryRelation::new(3, 2, 0, vec![retained]).is_ok());
    pass(8, "removing b from (a, b, b) yields (a, *1, *1) and depth-2 retention holds");
}

#[test]
fn criterion_09_one_graph_flags_span_a_simplex() {
    let spaces = LinkSpaces::in_memory();
    let mut points = class_vectors(&ObjectClass::igraphs(1, 4), VectorKind::Flag, &spaces).unwrap();
    let report = hull_vertex_report(&points).unwrap();
    assert_eq!(report.fact("vertices"), Some("5"));
    assert_eq!(report.fact("non-vertices"), Some("0"));

    let mut centroid = FormalVector::zero();
    for (_, v) in &points[..3] {
        centroid.add_scaled(v, &ratio(1, 3));
    }
    points.push(("g5".to_string(), centroid));
    let appended = hull_vertex_report(&points).unwrap();
    assert_eq!(appended.facts_named("non-vertex"), vec!["g5"]);
    let mut expected = FormalVector::zero();
    for label in ["g0", "g1", "g2"] {
        expected.add_term(Word::atom(Atom::new(label).unwrap()), ratio(1, 3));
    }
    assert_eq!(appended.certificate("weights g5"), Some(&expected));
    pass(9, "all 5 flag vectors are hull vertices; the centroid gets weights 1/3, 1/3, 1/3");
}

#[test]
fn criterion_10_reports_are_reproducible_byte_for_byte() {
    fn run_all(spaces: &LinkSpaces) -> Result<String> {
        let mut out = String::new();
        out += &independence_report(&ObjectClass::igraphs(1, 4), VectorKind::Flag, spaces)?
            .to_text();
        out += &collision_scan(&ObjectClass::igraphs(2, 4), spaces)?.to_text();
        let points = class_vectors(&ObjectClass::igraphs(1, 3), VectorKind::Flag, spaces)?;
        out += &hull_vertex_report(&points)?.to_text();
        out += &cosphere_probe(&points)?.to_text();
        let class = ObjectClass::IGraphs { i: 2, r_min: 1, r_max: 4 };
        out += &invariance_suite(&class, 10, 1, spaces)?.to_text();
        Ok(out)
    }
    let first = run_all(&LinkSpaces::in_memory()).unwrap();
    let second = run_all(&LinkSpaces::in_memory()).unwrap();
    assert_eq!(first, second, "fresh in-memory providers disagree");
    let dir = tempfile::tempdir().unwrap();
    let cold = run_all(&LinkSpaces::with_disk_cache(dir.path())).unwrap();
    let warm = run_all(&LinkSpaces::with_disk_cache(dir.path())).unwrap();
    assert_eq!(first, cold, "disk-cached provider disagrees with in-memory");
    assert_eq!(cold, warm, "warm cache changes a report");
    pass(10, "five experiment reports are byte-identical across reruns and cache states");
}

#[test]
fn criterion_11_problem_scale_reports_complete_with_certificates() {
    let spaces = LinkSpaces::in_memory();
    let class = ObjectClass::igraphs(2, 4);

    let independence =
        independence_report(&class, VectorKind::Shelling, &spaces).unwrap();
    assert_eq!(independence.fact("objects"), Some("11"));
    let rank: usize = independence.fact("rank").unwrap().parse().unwrap();
    let kernel: usize = independence.fact("kernel-dimension").unwrap().parse().unwrap();
    assert_eq!(rank + kernel, 11);
    assert_eq!(independence.certificates.len(), kernel);

    let collisions = collision_scan(&class, &spaces).unwrap();
    assert_eq!(collisions.fact("objects"), Some("11"));
    let reported: usize = collisions.fact("collisions").unwrap().parse().unwrap();
    assert_eq!(collisions.facts_named("collision").len(), reported);
    assert_eq!(
        collisions
            .certificates
            .iter()
            .filter(|c| c.title.starts_with("shared-vector"))
            .count(),
        reported
    );
    let distinct: usize = collisions.fact("distinct-vectors").unwrap().parse().unwrap();
    assert!(distinct <= 11);
    pass(
        11,
        &format!(
            "2-graph reports recorded shelling rank {rank} and {reported} flag collisions among 11 classes"
        ),
    );
}
