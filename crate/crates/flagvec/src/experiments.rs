//! Batch experiments over families of objects: linear rank of shelling
//! and flag vectors, flag-vector collisions between inequivalent objects,
//! convex hull vertex status, a two-stage co-sphericity probe, and a
//! seeded invariance suite.
//!
//! Reports are plain text with a versioned header, one `key: value` fact
//! per line, and certificate blocks in the vector serialization format.
//! Every numeric claim is backed by an exact rational certificate that is
//! re-verified by substitution before the report is assembled, and every
//! report is a deterministic function of its inputs: classes enumerate in
//! a fixed order, vectors are computed in parallel over objects, and
//! assembly is an ordered reduction over the enumeration order, so thread
//! scheduling never changes a byte of output.
//!
//! Rank, collision, and hull findings hold at the explored scale only;
//! the scale is stated in the `class` fact and reports never extrapolate
//! beyond it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::atom::{Atom, Word};
use crate::algebra::psd::{psd_probe, quadratic_value, solve_linear, PsdOutcome};
use crate::algebra::quotient::SPACE_HEADER;
use crate::algebra::rref::TrackedRref;
use crate::algebra::simplex::{convex_membership, HullOutcome};
use crate::algebra::vector::{rat, render_rational, FormalVector, Rational, VECTOR_HEADER};
use crate::decorated::{BoundaryGraph, OrientedGraph};
use crate::error::{Error, Result};
use crate::graphs::{IGraph, FAMILY_GUARD, RELABEL_GUARD};
use crate::relations::{chain_valid_tuples, groups_of_order, NaryRelation};
use crate::shelling::{
    flag_vector, igraph_ordering_count, relation_ordering_count, shelling_vector,
    IdentityProvider, Method, ShellObject, SpaceProvider,
};
use crate::spaces::{legal_change_pair, LinkSpaces};

/// First line of every report file.
pub const REPORT_HEADER: &str = "flagvec-report v1";

/// Which vector of each object an experiment examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorKind {
    Shelling,
    Flag,
}

impl VectorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VectorKind::Shelling => "shelling",
            VectorKind::Flag => "flag",
        }
    }
}

impl fmt::Display for VectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A finite family of objects, enumerable in a fixed order.  Graph and
/// relation classes enumerate pairwise inequivalent representatives over
/// an inclusive range of vertex counts; the group class walks the
/// catalogue of groups by ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjectClass {
    IGraphs { i: usize, r_min: usize, r_max: usize },
    OrientedGraphs { i: usize, r_min: usize, r_max: usize },
    BoundaryGraphs { i: usize, depth: usize, r_min: usize, r_max: usize },
    Relations { n: usize, r_min: usize, r_max: usize },
    Groups { max_order: usize },
}

impl ObjectClass {
    pub fn igraphs(i: usize, r: usize) -> ObjectClass {
        ObjectClass::IGraphs { i, r_min: r, r_max: r }
    }

    pub fn igraphs_up_to(i: usize, r_max: usize) -> ObjectClass {
        ObjectClass::IGraphs { i, r_min: 0, r_max }
    }

    pub fn oriented(i: usize, r: usize) -> ObjectClass {
        ObjectClass::OrientedGraphs { i, r_min: r, r_max: r }
    }

    pub fn boundary(i: usize, depth: usize, r: usize) -> ObjectClass {
        ObjectClass::BoundaryGraphs { i, depth, r_min: r, r_max: r }
    }

    pub fn relations(n: usize, r: usize) -> ObjectClass {
        ObjectClass::Relations { n, r_min: r, r_max: r }
    }

    pub fn groups(max_order: usize) -> ObjectClass {
        ObjectClass::Groups { max_order }
    }

    pub fn describe(&self) -> String {
        fn span(lo: usize, hi: usize) -> String {
            if lo == hi {
                format!("{lo} vertices")
            } else {
                format!("{lo} to {hi} vertices")
            }
        }
        match self {
            ObjectClass::IGraphs { i, r_min, r_max } => {
                format!("{i}-graphs on {} up to equivalence", span(*r_min, *r_max))
            }
            ObjectClass::OrientedGraphs { i, r_min, r_max } => {
                format!("oriented {i}-graphs on {} up to equivalence", span(*r_min, *r_max))
            }
            ObjectClass::BoundaryGraphs { i, depth, r_min, r_max } => format!(
                "boundary {i}-graphs with {depth}-letter labels on {} up to equivalence",
                span(*r_min, *r_max)
            ),
            ObjectClass::Relations { n, r_min, r_max } => {
                format!("{n}-ary relations on {} up to equivalence", span(*r_min, *r_max))
            }
            ObjectClass::Groups { max_order } => {
                format!("groups of order at most {max_order}")
            }
        }
    }

    /// Pairwise inequivalent representatives in enumeration order.  The
    /// order is part of the report contract: labels `g0`, `g1`, ... refer
    /// to positions in this list.
    pub fn members(&self) -> Result<Vec<ClassObject>> {
        match self {
            ObjectClass::IGraphs { i, r_min, r_max } => {
                let mut out = Vec::new();
                for r in vertex_range(*r_min, *r_max)? {
                    let classes = IGraph::equivalence_classes(*i, r)?;
                    out.extend(classes.into_iter().map(ClassObject::Plain));
                }
                Ok(out)
            }
            ObjectClass::OrientedGraphs { i, r_min, r_max } => {
                let mut out = Vec::new();
                for r in vertex_range(*r_min, *r_max)? {
                    let mut classes = BTreeSet::new();
                    for g in OrientedGraph::enumerate_all(*i, r)? {
                        classes.insert(canonical_oriented(&g)?);
                    }
                    out.extend(classes.into_iter().map(ClassObject::Oriented));
                }
                Ok(out)
            }
            ObjectClass::BoundaryGraphs { i, depth, r_min, r_max } => {
                let mut out = Vec::new();
                for r in vertex_range(*r_min, *r_max)? {
                    let mut classes = BTreeSet::new();
                    for g in BoundaryGraph::enumerate_all(*i, *depth, r)? {
                        classes.insert(canonical_boundary(&g)?);
                    }
                    out.extend(classes.into_iter().map(ClassObject::Boundary));
                }
                Ok(out)
            }
            ObjectClass::Relations { n, r_min, r_max } => {
                let mut out = Vec::new();
                for m in vertex_range(*r_min, *r_max)? {
                    let universe = chain_valid_tuples(*n, 0, m);
                    if universe.len() >= 64 || (1u64 << universe.len()) > FAMILY_GUARD {
                        return Err(Error::resource(format!(
                            "enumerating 2^{} relations exceeds the family guard of {FAMILY_GUARD}",
                            universe.len()
                        )));
                    }
                    let mut classes = BTreeSet::new();
                    for mask in 0u64..(1u64 << universe.len()) {
                        let tuples = universe
                            .iter()
                            .enumerate()
                            .filter(|(t, _)| mask & (1 << t) != 0)
                            .map(|(_, tuple)| tuple.clone());
                        let relation = NaryRelation::new(*n, 0, m, tuples)?;
                        classes.insert(canonical_relation(&relation)?);
                    }
                    out.extend(classes.into_iter().map(|relation| ClassObject::Relation {
                        tag: "relation".to_string(),
                        relation,
                    }));
                }
                Ok(out)
            }
            ObjectClass::Groups { max_order } => {
                let mut out = Vec::new();
                for order in 1..=*max_order {
                    for (name, table) in groups_of_order(order)? {
                        out.push(ClassObject::Relation {
                            tag: name,
                            relation: table.relation(),
                        });
                    }
                }
                Ok(out)
            }
        }
    }
}

fn vertex_range(lo: usize, hi: usize) -> Result<std::ops::RangeInclusive<usize>> {
    if lo > hi {
        return Err(Error::input(format!("empty vertex range {lo}..={hi}")));
    }
    Ok(lo..=hi)
}

/// One member of a class.  Group members remember the catalogue name
/// they came from; it appears in object descriptions only.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassObject {
    Plain(IGraph),
    Oriented(OrientedGraph),
    Boundary(BoundaryGraph),
    Relation { tag: String, relation: NaryRelation },
}

impl ClassObject {
    pub fn vector(&self, kind: VectorKind, spaces: &LinkSpaces) -> Result<FormalVector> {
        self.vector_with(kind, Method::SubsetDp, spaces)
    }

    /// Vector with an explicit engine and link-space provider; `vector`
    /// is the memoized default.
    pub fn vector_with<P: SpaceProvider>(
        &self,
        kind: VectorKind,
        method: Method,
        provider: &P,
    ) -> Result<FormalVector> {
        fn pick<O: ShellObject, P: SpaceProvider>(
            g: &O,
            kind: VectorKind,
            method: Method,
            provider: &P,
        ) -> Result<FormalVector> {
            match kind {
                VectorKind::Shelling => shelling_vector(g, method),
                VectorKind::Flag => flag_vector(g, provider, method),
            }
        }
        match self {
            ClassObject::Plain(g) => pick(g, kind, method, provider),
            ClassObject::Oriented(g) => pick(g, kind, method, provider),
            ClassObject::Boundary(g) => pick(g, kind, method, provider),
            ClassObject::Relation { relation, .. } => pick(relation, kind, method, provider),
        }
    }

    fn shelling(&self) -> Result<FormalVector> {
        self.vector_with(VectorKind::Shelling, Method::SubsetDp, &IdentityProvider)
    }

    /// Multi-line canonical serialization, used verbatim in replay
    /// witnesses.
    pub fn render(&self) -> String {
        match self {
            ClassObject::Plain(g) => g.render(),
            ClassObject::Oriented(g) => g.render(),
            ClassObject::Boundary(g) => g.render(),
            ClassObject::Relation { relation, .. } => relation.render(),
        }
    }

    /// One-line form for `object gK` report facts.
    pub fn describe(&self) -> String {
        let one_line = self.render().trim_end().replace('\n', "; ");
        match self {
            ClassObject::Relation { tag, .. } => format!("{tag}; {one_line}"),
            _ => one_line,
        }
    }

    fn vertex_count(&self) -> usize {
        match self {
            ClassObject::Plain(g) => g.vertex_count(),
            ClassObject::Oriented(g) => g.vertex_count(),
            ClassObject::Boundary(g) => g.vertex_count(),
            ClassObject::Relation { relation, .. } => relation.vertex_count(),
        }
    }

    fn is_terminal(&self) -> bool {
        match self {
            ClassObject::Plain(g) => g.terminal_atom().is_some(),
            ClassObject::Oriented(g) => g.terminal_atom().is_some(),
            ClassObject::Boundary(g) => g.terminal_atom().is_some(),
            ClassObject::Relation { relation, .. } => relation.terminal_atom().is_some(),
        }
    }

    fn link_at(&self, v: usize) -> Result<ClassObject> {
        Ok(match self {
            ClassObject::Plain(g) => ClassObject::Plain(g.link_at(v)?),
            ClassObject::Oriented(g) => ClassObject::Oriented(g.link_at(v)?),
            ClassObject::Boundary(g) => ClassObject::Boundary(g.link_at(v)?),
            ClassObject::Relation { tag, relation } => ClassObject::Relation {
                tag: tag.clone(),
                relation: relation.link_at(v)?,
            },
        })
    }

    fn space_key(&self) -> crate::shelling::LinkSpaceKey {
        match self {
            ClassObject::Plain(g) => g.space_key(),
            ClassObject::Oriented(g) => g.space_key(),
            ClassObject::Boundary(g) => g.space_key(),
            ClassObject::Relation { relation, .. } => relation.space_key(),
        }
    }

    fn relabel(&self, perm: &[usize]) -> Result<ClassObject> {
        Ok(match self {
            ClassObject::Plain(g) => ClassObject::Plain(g.relabel(perm)?),
            ClassObject::Oriented(g) => ClassObject::Oriented(g.relabel(perm)?),
            ClassObject::Boundary(g) => ClassObject::Boundary(g.relabel(perm)?),
            ClassObject::Relation { tag, relation } => ClassObject::Relation {
                tag: tag.clone(),
                relation: relation.relabel(perm)?,
            },
        })
    }

    /// Brute-force equivalence: same shape and equal canonical forms.
    fn equivalent(&self, other: &ClassObject) -> Result<bool> {
        Ok(match (self, other) {
            (ClassObject::Plain(a), ClassObject::Plain(b)) => a.is_equivalent_to(b)?,
            (ClassObject::Oriented(a), ClassObject::Oriented(b)) => {
                a.dimension() == b.dimension()
                    && a.vertices() == b.vertices()
                    && canonical_oriented(a)? == canonical_oriented(b)?
            }
            (ClassObject::Boundary(a), ClassObject::Boundary(b)) => {
                a.dimension() == b.dimension()
                    && a.depth() == b.depth()
                    && a.vertices() == b.vertices()
                    && canonical_boundary(a)? == canonical_boundary(b)?
            }
            (
                ClassObject::Relation { relation: a, .. },
                ClassObject::Relation { relation: b, .. },
            ) => {
                a.arity() == b.arity()
                    && a.depth() == b.depth()
                    && a.vertices() == b.vertices()
                    && canonical_relation(a)? == canonical_relation(b)?
            }
            _ => false,
        })
    }
}

fn relabel_guard(r: usize, what: &str) -> Result<()> {
    if r > RELABEL_GUARD {
        return Err(Error::resource(format!(
            "canonicalizing {what} scans r! relabelings and is limited to r <= {RELABEL_GUARD}, got r = {r}"
        )));
    }
    Ok(())
}

fn canonical_oriented(g: &OrientedGraph) -> Result<OrientedGraph> {
    relabel_guard(g.vertices(), "an oriented graph")?;
    let mut best: Option<OrientedGraph> = None;
    for perm in (0..g.vertices()).permutations(g.vertices()) {
        let candidate = g.relabel(&perm)?;
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("the identity relabeling always exists"))
}

fn canonical_boundary(g: &BoundaryGraph) -> Result<BoundaryGraph> {
    relabel_guard(g.vertices(), "a boundary graph")?;
    let mut best: Option<BoundaryGraph> = None;
    for perm in (0..g.vertices()).permutations(g.vertices()) {
        let candidate = g.relabel(&perm)?;
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("the identity relabeling always exists"))
}

fn canonical_relation(relation: &NaryRelation) -> Result<NaryRelation> {
    relabel_guard(relation.vertices(), "a relation")?;
    let mut best: Option<NaryRelation> = None;
    for perm in (0..relation.vertices()).permutations(relation.vertices()) {
        let candidate = relation.relabel(&perm)?;
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("the identity relabeling always exists"))
}

/// One exact certificate attached to a report, rendered as a vector
/// block under its title.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub title: String,
    pub vector: FormalVector,
}

/// A finished experiment: an ordered list of `key: value` facts plus the
/// certificates backing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub facts: Vec<(String, String)>,
    pub certificates: Vec<Certificate>,
}

impl ExperimentReport {
    fn new(experiment: &str) -> ExperimentReport {
        ExperimentReport {
            experiment: experiment.to_string(),
            facts: Vec::new(),
            certificates: Vec::new(),
        }
    }

    fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.facts.push((key.into(), value.to_string()));
    }

    fn certify(&mut self, title: impl Into<String>, vector: FormalVector) {
        self.certificates.push(Certificate {
            title: title.into(),
            vector,
        });
    }

    /// First value recorded under `key`.
    pub fn fact(&self, key: &str) -> Option<&str> {
        self.facts
            .iter()
            .find(|(k, _)| k.as_str() == key)
            .map(|(_, v)| v.as_str())
    }

    /// Every value recorded under `key`, in report order.
    pub fn facts_named(&self, key: &str) -> Vec<&str> {
        self.facts
            .iter()
            .filter(|(k, _)| k.as_str() == key)
            .map(|(_, v)| v.as_str())
            .collect()
    }

    pub fn certificate(&self, title: &str) -> Option<&FormalVector> {
        self.certificates
            .iter()
            .find(|c| c.title == title)
            .map(|c| &c.vector)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{REPORT_HEADER}");
        let _ = writeln!(out, "experiment: {}", self.experiment);
        for (key, value) in &self.facts {
            let _ = writeln!(out, "{key}: {value}");
        }
        for certificate in &self.certificates {
            let _ = writeln!(out);
            let _ = writeln!(out, "certificate: {}", certificate.title);
            out.push_str(&certificate.vector.to_text());
        }
        out
    }
}

/// Objects are labeled `g0`, `g1`, ... in enumeration order.  The labels
/// are valid atom names, so kernel and weight certificates are ordinary
/// vectors over them.
fn object_labels(count: usize) -> Vec<String> {
    (0..count).map(|k| format!("g{k}")).collect()
}

fn label_atom(label: &str) -> Result<Atom> {
    Atom::new(label).map_err(|_| {
        Error::input(format!(
            "label {label:?} is not usable as a certificate coordinate name"
        ))
    })
}

fn distinct_label_atoms(items: &[(String, FormalVector)]) -> Result<Vec<Atom>> {
    let mut seen = BTreeSet::new();
    let mut atoms = Vec::with_capacity(items.len());
    for (label, _) in items {
        if !seen.insert(label.as_str()) {
            return Err(Error::input(format!("label {label:?} appears twice")));
        }
        atoms.push(label_atom(label)?);
    }
    Ok(atoms)
}

/// Applies `f` to every item on a small thread pool and reassembles the
/// outputs in input order, so parallelism never changes a result.
/// Errors surface in input order too.
fn ordered_parallel_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync,
{
    let threads = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(items.len());
    if threads <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<U>>>> =
        Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= items.len() {
                    break;
                }
                let out = f(&items[idx]);
                slots.lock().expect("workers do not panic holding the lock")[idx] = Some(out);
            });
        }
    });
    let mut out = Vec::with_capacity(items.len());
    for slot in slots.into_inner().expect("workers finished") {
        out.push(slot.expect("every index was claimed exactly once")?);
    }
    Ok(out)
}

fn labeled_vectors(
    members: &[ClassObject],
    kind: VectorKind,
    spaces: &LinkSpaces,
) -> Result<Vec<(String, FormalVector)>> {
    let vectors = ordered_parallel_map(members, |member| member.vector(kind, spaces))?;
    Ok(object_labels(members.len()).into_iter().zip(vectors).collect())
}

/// Flag or shelling vectors of every member of a class, labeled in
/// enumeration order.
pub fn class_vectors(
    class: &ObjectClass,
    kind: VectorKind,
    spaces: &LinkSpaces,
) -> Result<Vec<(String, FormalVector)>> {
    labeled_vectors(&class.members()?, kind, spaces)
}

fn push_object_lines(report: &mut ExperimentReport, members: &[ClassObject]) {
    for (label, member) in object_labels(members.len()).iter().zip(members) {
        report.push(format!("object {label}"), member.describe());
    }
}

fn push_metadata(report: &mut ExperimentReport, kind: VectorKind, spaces: &LinkSpaces) {
    report.push("vector-format", VECTOR_HEADER);
    if kind == VectorKind::Flag {
        report.push("space-format", SPACE_HEADER);
        let budget = spaces.budget();
        report.push(
            "relation-budget",
            format!(
                "max-relations {} rank-window {}",
                budget.max_relations, budget.rank_window
            ),
        );
    }
}

/// A class too large for its guards still yields a report; it carries a
/// truncation notice instead of claims.
fn truncated_report(
    experiment: &str,
    class: &ObjectClass,
    kind: Option<VectorKind>,
    msg: &str,
) -> ExperimentReport {
    let mut report = ExperimentReport::new(experiment);
    report.push("class", class.describe());
    if let Some(kind) = kind {
        report.push("vector", kind.as_str());
    }
    report.push("objects", "not enumerated");
    report.push(
        "truncated",
        format!("enumeration stopped by a resource guard; no claims at this scale ({msg})"),
    );
    report
}

/// Rank of the vectors of a class, with one kernel certificate for every
/// linear relation found.
pub fn independence_report(
    class: &ObjectClass,
    kind: VectorKind,
    spaces: &LinkSpaces,
) -> Result<ExperimentReport> {
    let members = match class.members() {
        Err(Error::Resource(msg)) => {
            return Ok(truncated_report("independence", class, Some(kind), &msg))
        }
        other => other?,
    };
    let labeled = labeled_vectors(&members, kind, spaces)?;
    let mut report = independence_core(&class.describe(), kind.as_str(), &labeled)?;
    push_object_lines(&mut report, &members);
    push_metadata(&mut report, kind, spaces);
    Ok(report)
}

/// Rank and kernel of explicit labeled vectors.  Labels must be distinct
/// valid atom names; kernel certificates are vectors over them, one per
/// dependent input, each re-verified by substitution.
pub fn independence_of_vectors(
    description: &str,
    kind_label: &str,
    vectors: &[(String, FormalVector)],
) -> Result<ExperimentReport> {
    let mut report = independence_core(description, kind_label, vectors)?;
    report.push("vector-format", VECTOR_HEADER);
    Ok(report)
}

fn independence_core(
    description: &str,
    kind_label: &str,
    vectors: &[(String, FormalVector)],
) -> Result<ExperimentReport> {
    let atoms = distinct_label_atoms(vectors)?;
    let mut report = ExperimentReport::new("independence");
    report.push("class", description);
    report.push("vector", kind_label);
    report.push("objects", vectors.len());
    let ambient: BTreeSet<&Word> = vectors.iter().flat_map(|(_, v)| v.words()).collect();
    report.push("ambient-dimension", ambient.len());
    let mut tracked = TrackedRref::new();
    for (_, v) in vectors {
        tracked.insert(v);
    }
    report.push("rank", tracked.rank());
    report.push("kernel-dimension", tracked.kernel().len());
    report.push("independent", if tracked.kernel().is_empty() { "yes" } else { "no" });
    let independent = tracked
        .independent_inputs()
        .iter()
        .map(|&j| vectors[j].0.as_str())
        .join(" ");
    report.push(
        "independent-objects",
        if independent.is_empty() { "none".to_string() } else { independent },
    );
    for combo in tracked.kernel() {
        let dependent = combo.len() - 1;
        let mut relation = FormalVector::zero();
        let mut substituted = FormalVector::zero();
        for (j, coeff) in combo.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            relation.add_term(Word::atom(atoms[j].clone()), coeff.clone());
            substituted.add_scaled(&vectors[j].1, coeff);
        }
        if !substituted.is_zero() {
            return Err(Error::internal(format!(
                "kernel certificate for {} fails substitution",
                vectors[dependent].0
            )));
        }
        report.certify(format!("kernel {}", vectors[dependent].0), relation);
    }
    Ok(report)
}

/// Buckets class members by exact flag vector and verifies every
/// same-bucket pair for equivalence; only inequivalent pairs are
/// reported as collisions.
pub fn collision_scan(class: &ObjectClass, spaces: &LinkSpaces) -> Result<ExperimentReport> {
    let members = match class.members() {
        Err(Error::Resource(msg)) => {
            return Ok(truncated_report(
                "collisions",
                class,
                Some(VectorKind::Flag),
                &msg,
            ))
        }
        other => other?,
    };
    collision_scan_objects(&class.describe(), &members, spaces)
}

/// The same scan over an explicit object list, which may contain
/// equivalent objects; those pairs are listed separately and are never
/// collisions.
pub fn collision_scan_objects(
    description: &str,
    objects: &[ClassObject],
    spaces: &LinkSpaces,
) -> Result<ExperimentReport> {
    let labeled = labeled_vectors(objects, VectorKind::Flag, spaces)?;
    let mut report = ExperimentReport::new("collisions");
    report.push("class", description);
    report.push("vector", VectorKind::Flag.as_str());
    report.push("objects", objects.len());
    let mut buckets: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (idx, (_, v)) in labeled.iter().enumerate() {
        buckets.entry(v.to_text()).or_default().push(idx);
    }
    report.push("distinct-vectors", buckets.len());
    let mut collisions: Vec<(usize, usize)> = Vec::new();
    let mut coincidences: Vec<(usize, usize)> = Vec::new();
    for indices in buckets.values() {
        for (&x, &y) in indices.iter().tuple_combinations() {
            if objects[x].equivalent(&objects[y])? {
                coincidences.push((x, y));
            } else {
                collisions.push((x, y));
            }
        }
    }
    collisions.sort_unstable();
    coincidences.sort_unstable();
    report.push("collisions", collisions.len());
    for &(x, y) in &collisions {
        report.push("collision", format!("{} {}", labeled[x].0, labeled[y].0));
        report.certify(
            format!("shared-vector {} {}", labeled[x].0, labeled[y].0),
            labeled[x].1.clone(),
        );
    }
    for &(x, y) in &coincidences {
        report.push("equivalent-pair", format!("{} {}", labeled[x].0, labeled[y].0));
    }
    push_object_lines(&mut report, objects);
    push_metadata(&mut report, VectorKind::Flag, spaces);
    Ok(report)
}

/// Vertex status of each labeled point relative to the hull of the
/// others.  Exact duplicates are flagged and excluded from the claims.
/// Both possible membership certificates are verified by substitution
/// inside the hull solver before they reach the report.
pub fn hull_vertex_report(points: &[(String, FormalVector)]) -> Result<ExperimentReport> {
    if points.len() < 2 {
        return Err(Error::input(format!(
            "hull analysis needs at least two points, got {}",
            points.len()
        )));
    }
    let atoms = distinct_label_atoms(points)?;
    let mut report = ExperimentReport::new("hull");
    report.push("points", points.len());
    let mut first_of: BTreeMap<String, usize> = BTreeMap::new();
    let mut unique: Vec<usize> = Vec::new();
    let mut duplicates: Vec<(usize, usize)> = Vec::new();
    for (idx, (_, v)) in points.iter().enumerate() {
        let text = v.to_text();
        if let Some(&original) = first_of.get(&text) {
            duplicates.push((idx, original));
        } else {
            first_of.insert(text, idx);
            unique.push(idx);
        }
    }
    report.push("unique-points", unique.len());
    enum Status {
        Vertex { offset: Rational, normal: FormalVector },
        NonVertex { weights: FormalVector },
    }
    let mut statuses: Vec<(usize, Status)> = Vec::new();
    for &idx in &unique {
        let mut others = Vec::new();
        let mut other_atoms = Vec::new();
        for &j in &unique {
            if j != idx {
                others.push(points[j].1.clone());
                other_atoms.push(atoms[j].clone());
            }
        }
        let status = match convex_membership(&others, &points[idx].1)? {
            HullOutcome::Inside { weights } => {
                let mut w = FormalVector::zero();
                for (coeff, atom) in weights.iter().zip(&other_atoms) {
                    w.add_term(Word::atom(atom.clone()), coeff.clone());
                }
                Status::NonVertex { weights: w }
            }
            HullOutcome::Outside { normal, offset } => Status::Vertex { offset, normal },
        };
        statuses.push((idx, status));
    }
    let vertices = statuses
        .iter()
        .filter(|(_, s)| matches!(s, Status::Vertex { .. }))
        .count();
    report.push("vertices", vertices);
    report.push("non-vertices", statuses.len() - vertices);
    for (idx, original) in &duplicates {
        report.push("duplicate", format!("{} {}", points[*idx].0, points[*original].0));
    }
    for (idx, status) in statuses {
        let label = &points[idx].0;
        match status {
            Status::Vertex { offset, normal } => {
                report.push("vertex", label);
                report.push(format!("separation-offset {label}"), render_rational(&offset));
                report.certify(format!("separation {label}"), normal);
            }
            Status::NonVertex { weights } => {
                report.push("non-vertex", label);
                report.certify(format!("weights {label}"), weights);
            }
        }
    }
    for (label, v) in points {
        report.push(format!("point {label}"), v.render_inline());
    }
    report.push("vector-format", VECTOR_HEADER);
    Ok(report)
}

/// Two-stage co-sphericity probe.  Stage 1 solves for a center and
/// offset under the standard inner product and is exact in both
/// directions.  Stage 2 fits a symmetric matrix jointly with a center
/// and offset, normalized to trace equal to the ambient dimension so the
/// zero quadric is excluded, and asks whether the deterministic
/// particular solution is positive semidefinite.  A negative stage-2
/// outcome is inconclusive by design: some other solution of the
/// underdetermined system could still be definite.
pub fn cosphere_probe(points: &[(String, FormalVector)]) -> Result<ExperimentReport> {
    if points.len() < 2 {
        return Err(Error::input(format!(
            "the co-sphericity probe needs at least two points, got {}",
            points.len()
        )));
    }
    let mut report = ExperimentReport::new("cosphere");
    report.push("points", points.len());
    let words: Vec<Word> = points
        .iter()
        .flat_map(|(_, v)| v.words().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let d = words.len();
    report.push("ambient-dimension", d);
    let dense: Vec<Vec<Rational>> = points
        .iter()
        .map(|(_, p)| words.iter().map(|w| p.coeff(w)).collect())
        .collect();

    // Stage 1: p.p - 2 c.p + k = 0 for every point, unknowns (c, k).
    let mut rows = Vec::with_capacity(points.len());
    let mut rhs = Vec::with_capacity(points.len());
    for p in &dense {
        let mut row: Vec<Rational> = p.iter().map(|c| -(c.clone() + c.clone())).collect();
        row.push(Rational::one());
        rows.push(row);
        rhs.push(-dot(p, p));
    }
    let mut stage1_center: Option<FormalVector> = None;
    match solve_linear(&rows, &rhs) {
        Some(solution) => {
            let center = &solution[..d];
            let offset = solution[d].clone();
            for p in &dense {
                let residual =
                    dot(p, p) - (dot(center, p) + dot(center, p)) + offset.clone();
                if !residual.is_zero() {
                    return Err(Error::internal(
                        "stage-1 center fails substitution".to_string(),
                    ));
                }
            }
            report.push("stage1", "co-spherical");
            report.push("stage1-offset", render_rational(&offset));
            report.push(
                "stage1-radius-squared",
                render_rational(&(dot(center, center) - offset)),
            );
            stage1_center = Some(sparse(&words, center));
        }
        None => {
            report.push(
                "stage1",
                "not co-spherical; the linear system for a center and offset is inconsistent",
            );
        }
    }

    // Stage 2: x^T M x - 2 c.x + k = 0 with symmetric M of trace d.
    report.push(
        "stage2-method",
        "heuristic; a negative outcome is inconclusive, never a refutation",
    );
    let pairs = d * (d + 1) / 2;
    let cols = pairs + d + 1;
    let pair_index = |u: usize, v: usize| u * d - u * (u + 1) / 2 + v;
    let mut rows2 = Vec::with_capacity(points.len() + 1);
    let mut rhs2 = Vec::with_capacity(points.len() + 1);
    for p in &dense {
        let mut row = vec![Rational::zero(); cols];
        for u in 0..d {
            for v in u..d {
                let q = p[u].clone() * p[v].clone();
                row[pair_index(u, v)] = if u == v { q } else { q.clone() + q };
            }
        }
        for (u, c) in p.iter().enumerate() {
            row[pairs + u] = -(c.clone() + c.clone());
        }
        row[cols - 1] = Rational::one();
        rows2.push(row);
        rhs2.push(Rational::zero());
    }
    let mut trace_row = vec![Rational::zero(); cols];
    for u in 0..d {
        trace_row[pair_index(u, u)] = Rational::one();
    }
    rows2.push(trace_row);
    rhs2.push(rat(d as i64));
    match solve_linear(&rows2, &rhs2) {
        None => {
            report.push(
                "stage2",
                "inconclusive; no trace-normalized quadric fits the points",
            );
        }
        Some(solution) => {
            let matrix: Vec<Vec<Rational>> = (0..d)
                .map(|u| {
                    (0..d)
                        .map(|v| solution[pair_index(u.min(v), u.max(v))].clone())
                        .collect()
                })
                .collect();
            let center = &solution[pairs..pairs + d];
            let offset = solution[cols - 1].clone();
            for p in &dense {
                let residual = quadratic_value(&matrix, p)
                    - (dot(center, p) + dot(center, p))
                    + offset.clone();
                if !residual.is_zero() {
                    return Err(Error::internal(
                        "stage-2 quadric fails substitution".to_string(),
                    ));
                }
            }
            let probe = psd_probe(&matrix)?;
            match &probe {
                PsdOutcome::Yes { .. } => {
                    report.push(
                        "stage2",
                        "candidate found; the trace-normalized quadric is positive semidefinite",
                    );
                }
                PsdOutcome::No { value, .. } => {
                    report.push(
                        "stage2",
                        "probe inconclusive; the trace-normalized quadric is not positive semidefinite",
                    );
                    report.push("stage2-witness-value", render_rational(value));
                }
            }
            report.push("stage2-offset", render_rational(&offset));
            report.certify("stage2-center", sparse(&words, center));
            for (u, row) in matrix.iter().enumerate() {
                report.certify(
                    format!("stage2-metric-row {}", words[u].render()),
                    sparse(&words, row),
                );
            }
            match probe {
                PsdOutcome::Yes { diag, lower } => {
                    report.certify("stage2-cholesky-diagonal", sparse(&words, &diag));
                    for (u, row) in lower.iter().enumerate() {
                        report.certify(
                            format!("stage2-cholesky-row {}", words[u].render()),
                            sparse(&words, row),
                        );
                    }
                }
                PsdOutcome::No { witness, .. } => {
                    report.certify("stage2-witness", sparse(&words, &witness));
                }
            }
        }
    }
    if let Some(center) = stage1_center {
        report.certify("stage1-center", center);
    }
    for (label, v) in points {
        report.push(format!("point {label}"), v.render_inline());
    }
    report.push("vector-format", VECTOR_HEADER);
    Ok(report)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut out = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        out += x.clone() * y.clone();
    }
    out
}

fn sparse(words: &[Word], coords: &[Rational]) -> FormalVector {
    let mut v = FormalVector::zero();
    for (w, c) in words.iter().zip(coords) {
        v.add_term(w.clone(), c.clone());
    }
    v
}

/// Seeded property suite: relabeling invariance, agreement of the naive
/// and memoized engines, the coefficient-sum law, and quotient soundness,
/// each on pseudo-random instances drawn from the class.  Deterministic
/// given the seed; any failure aborts with the offending instance
/// serialized in the error for replay.
pub fn invariance_suite(
    class: &ObjectClass,
    trials: usize,
    seed: u64,
    spaces: &LinkSpaces,
) -> Result<ExperimentReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut relabelings = 0usize;
    let mut agreements = 0usize;
    let mut sums = 0usize;
    let mut soundness = 0usize;
    for trial in 0..trials {
        let object = random_member(class, &mut rng)?;
        let stamp = |e: Error| match e {
            Error::Internal(msg) => Error::internal(format!("seed {seed} trial {trial}: {msg}")),
            other => other,
        };
        let perm = random_permutation(object.vertex_count(), &mut rng);
        let relabeled = object.relabel(&perm)?;
        relabeling_check(&object, &relabeled, spaces).map_err(stamp)?;
        relabelings += 1;
        method_agreement_check(&object, spaces).map_err(stamp)?;
        agreements += 1;
        coefficient_sum_check(&object).map_err(stamp)?;
        sums += 1;
        if quotient_soundness_check(&object, &mut rng, spaces, spaces).map_err(stamp)? {
            soundness += 1;
        }
    }
    let mut report = ExperimentReport::new("invariance");
    report.push("class", class.describe());
    report.push("seed", seed);
    report.push("trials", trials);
    report.push("relabeling-checks", relabelings);
    report.push("method-agreement-checks", agreements);
    report.push("coefficient-sum-checks", sums);
    report.push("quotient-soundness-checks", soundness);
    report.push("result", "pass");
    push_metadata(&mut report, VectorKind::Flag, spaces);
    Ok(report)
}

fn random_member(class: &ObjectClass, rng: &mut ChaCha8Rng) -> Result<ClassObject> {
    match class {
        ObjectClass::IGraphs { i, r_min, r_max } => {
            let r = random_vertex_count(*r_min, *r_max, rng)?;
            Ok(ClassObject::Plain(IGraph::random(*i, r, rng)))
        }
        ObjectClass::OrientedGraphs { i, r_min, r_max } => {
            let r = random_vertex_count(*r_min, *r_max, rng)?;
            Ok(ClassObject::Oriented(OrientedGraph::random(*i, r, rng)))
        }
        ObjectClass::BoundaryGraphs { i, depth, r_min, r_max } => {
            let r = random_vertex_count(*r_min, *r_max, rng)?;
            Ok(ClassObject::Boundary(random_boundary(*i, *depth, r, rng)?))
        }
        ObjectClass::Relations { n, r_min, r_max } => {
            let m = random_vertex_count(*r_min, *r_max, rng)?;
            let tuples: Vec<_> = chain_valid_tuples(*n, 0, m)
                .into_iter()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            Ok(ClassObject::Relation {
                tag: "relation".to_string(),
                relation: NaryRelation::new(*n, 0, m, tuples)?,
            })
        }
        ObjectClass::Groups { max_order } => {
            if *max_order == 0 {
                return Err(Error::input("a group has at least one element".to_string()));
            }
            let order = rng.gen_range(1..=*max_order);
            let catalogue = groups_of_order(order)?;
            let (name, table) = &catalogue[rng.gen_range(0..catalogue.len())];
            let perm = random_permutation(order, rng);
            Ok(ClassObject::Relation {
                tag: name.clone(),
                relation: table.relation().relabel(&perm)?,
            })
        }
    }
}

fn random_vertex_count(lo: usize, hi: usize, rng: &mut ChaCha8Rng) -> Result<usize> {
    if lo > hi {
        return Err(Error::input(format!("empty vertex range {lo}..={hi}")));
    }
    Ok(rng.gen_range(lo..=hi))
}

fn random_permutation(m: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    perm
}

/// Uniform cell choice at any removal depth; [`BoundaryGraph::random`]
/// only covers depth 0.
fn random_boundary(
    i: usize,
    depth: usize,
    r: usize,
    rng: &mut ChaCha8Rng,
) -> Result<BoundaryGraph> {
    let mut cells = Vec::new();
    for support in (0..r).combinations(i) {
        if rng.gen_bool(0.5) {
            continue;
        }
        let boundary: Vec<usize> = support
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let label: Vec<bool> = (0..depth).map(|_| rng.gen_bool(0.5)).collect();
        cells.push((support, boundary, label));
    }
    BoundaryGraph::new(i, r, depth, cells)
}

fn invariance_failure(check: &str, object: &ClassObject, detail: &str) -> Error {
    Error::internal(format!(
        "{check} failed: {detail}; replay instance:\n{}",
        object.render().trim_end()
    ))
}

fn expect_equal(
    check: &str,
    object: &ClassObject,
    left: &FormalVector,
    right: &FormalVector,
) -> Result<()> {
    if left == right {
        return Ok(());
    }
    Err(invariance_failure(
        check,
        object,
        &format!("{} differs from {}", left.render_inline(), right.render_inline()),
    ))
}

/// Two presentations of the same object must have identical vectors.
fn relabeling_check<P: SpaceProvider>(
    object: &ClassObject,
    relabeled: &ClassObject,
    provider: &P,
) -> Result<()> {
    for kind in [VectorKind::Shelling, VectorKind::Flag] {
        expect_equal(
            &format!("relabeling invariance of the {kind} vector"),
            object,
            &object.vector_with(kind, Method::SubsetDp, provider)?,
            &relabeled.vector_with(kind, Method::SubsetDp, provider)?,
        )?;
    }
    Ok(())
}

/// The literal sum over orderings and the memoized engine share no code
/// path, so their agreement cross-checks both.
fn method_agreement_check<P: SpaceProvider>(object: &ClassObject, provider: &P) -> Result<()> {
    for kind in [VectorKind::Shelling, VectorKind::Flag] {
        expect_equal(
            &format!("engine agreement on the {kind} vector"),
            object,
            &object.vector_with(kind, Method::Naive, provider)?,
            &object.vector_with(kind, Method::SubsetDp, provider)?,
        )?;
    }
    Ok(())
}

/// The all-atoms-at-one evaluation of a shelling vector counts vertex
/// orderings and is independent of the cell or tuple set.
fn coefficient_sum_check(object: &ClassObject) -> Result<()> {
    let expected: Rational = match object {
        ClassObject::Plain(g) => igraph_ordering_count(g.dimension(), g.vertices()).into(),
        ClassObject::Oriented(g) => igraph_ordering_count(g.dimension(), g.vertices()).into(),
        ClassObject::Boundary(g) => igraph_ordering_count(g.dimension(), g.vertices()).into(),
        ClassObject::Relation { relation, .. } => {
            relation_ordering_count(relation.arity(), relation.depth(), relation.vertices())
                .into()
        }
    };
    let actual = object.shelling()?.coefficient_sum();
    if actual != expected {
        return Err(invariance_failure(
            "coefficient-sum law",
            object,
            &format!(
                "sum {} differs from the ordering count {}",
                render_rational(&actual),
                render_rational(&expected)
            ),
        ));
    }
    Ok(())
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| !b.contains(v))
}

fn random_disjoint_supports(
    i: usize,
    r: usize,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let supports: Vec<Vec<usize>> = (0..r).combinations(i).collect();
    let pairs: Vec<(usize, usize)> = (0..supports.len())
        .tuple_combinations()
        .filter(|&(x, y)| disjoint(&supports[x], &supports[y]))
        .collect();
    if pairs.is_empty() {
        return None;
    }
    let (x, y) = pairs[rng.gen_range(0..pairs.len())];
    Some((supports[x].clone(), supports[y].clone()))
}

/// Four corners of one random legal change pair on the object's shape:
/// base, each single change, and both together.  Graph corners strip the
/// chosen cells down to a base and add them back; relation corners are
/// anchored at the empty relation, whose pairs every budgeted generator
/// family contains.
fn change_corners(
    object: &ClassObject,
    rng: &mut ChaCha8Rng,
) -> Result<Option<[ClassObject; 4]>> {
    match object {
        ClassObject::Plain(g) => {
            let Some((c1, c2)) = random_disjoint_supports(g.dimension(), g.vertices(), rng)
            else {
                return Ok(None);
            };
            let mut base = g.clone();
            for c in [&c1, &c2] {
                if base.has_cell(c) {
                    base = base.without_cell(c)?;
                }
            }
            Ok(Some([
                ClassObject::Plain(base.clone()),
                ClassObject::Plain(base.with_cell(c1.clone())?),
                ClassObject::Plain(base.with_cell(c2.clone())?),
                ClassObject::Plain(base.with_cell(c1)?.with_cell(c2)?),
            ]))
        }
        ClassObject::Oriented(g) => {
            let Some((c1, c2)) = random_disjoint_supports(g.dimension(), g.vertices(), rng)
            else {
                return Ok(None);
            };
            let s1: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let s2: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let base = g.without_cell(&c1).without_cell(&c2);
            Ok(Some([
                ClassObject::Oriented(base.clone()),
                ClassObject::Oriented(base.with_cell(c1.clone(), s1)),
                ClassObject::Oriented(base.with_cell(c2.clone(), s2)),
                ClassObject::Oriented(base.with_cell(c1, s1).with_cell(c2, s2)),
            ]))
        }
        ClassObject::Boundary(g) => {
            let Some((c1, c2)) = random_disjoint_supports(g.dimension(), g.vertices(), rng)
            else {
                return Ok(None);
            };
            let options1 = BoundaryGraph::decorations(g.dimension(), g.depth(), &c1);
            let options2 = BoundaryGraph::decorations(g.dimension(), g.depth(), &c2);
            let d1 = options1[rng.gen_range(0..options1.len())].clone();
            let d2 = options2[rng.gen_range(0..options2.len())].clone();
            let base = g.without_cell(&c1).without_cell(&c2);
            Ok(Some([
                ClassObject::Boundary(base.clone()),
                ClassObject::Boundary(base.with_cell(c1.clone(), d1.clone())),
                ClassObject::Boundary(base.with_cell(c2.clone(), d2.clone())),
                ClassObject::Boundary(base.with_cell(c1, d1).with_cell(c2, d2)),
            ]))
        }
        ClassObject::Relation { tag, relation } => {
            let universe =
                chain_valid_tuples(relation.arity(), relation.depth(), relation.vertices());
            let pairs: Vec<(usize, usize)> = (0..universe.len())
                .tuple_combinations()
                .filter(|&(x, y)| legal_change_pair(&universe[x], &universe[y]))
                .collect();
            if pairs.is_empty() {
                return Ok(None);
            }
            let (x, y) = pairs[rng.gen_range(0..pairs.len())];
            let base = NaryRelation::empty(
                relation.arity(),
                relation.depth(),
                relation.vertices(),
            );
            let t1 = universe[x].clone();
            let t2 = universe[y].clone();
            let wrap = |relation: NaryRelation| ClassObject::Relation {
                tag: tag.clone(),
                relation,
            };
            Ok(Some([
                wrap(base.clone()),
                wrap(base.with_tuple(t1.clone())?),
                wrap(base.with_tuple(t2.clone())?),
                wrap(base.with_tuple(t1)?.with_tuple(t2)?),
            ]))
        }
    }
}

/// Projects one random legal change combination of the object's link
/// shape through that shape's quotient space; the image must vanish.
/// Flag corners come from `provider` so tests can wire in corrupted
/// engines; the projection always uses the real spaces.  Returns false
/// when the link shape admits no legal pair.
fn quotient_soundness_check<P: SpaceProvider>(
    object: &ClassObject,
    rng: &mut ChaCha8Rng,
    provider: &P,
    spaces: &LinkSpaces,
) -> Result<bool> {
    if object.is_terminal() || object.vertex_count() == 0 {
        return Ok(false);
    }
    let v = rng.gen_range(0..object.vertex_count());
    let link = object.link_at(v)?;
    let Some(corners) = change_corners(&link, rng)? else {
        return Ok(false);
    };
    let flags = corners
        .iter()
        .map(|corner| corner.vector_with(VectorKind::Flag, Method::SubsetDp, provider))
        .collect::<Result<Vec<_>>>()?;
    // (f11 - f10) - (f01 - f00) with corners ordered base, +c1, +c2, +both.
    let mut combination = &flags[3] - &flags[1];
    combination.add_scaled(&flags[2], &-Rational::one());
    combination.add_scaled(&flags[0], &Rational::one());
    let projected = spaces.space(&link.space_key())?.project(&combination)?;
    if !projected.is_zero() {
        return Err(invariance_failure(
            "quotient soundness",
            &link,
            &format!(
                "a legal change combination projects to {}",
                projected.render_inline()
            ),
        ));
    }
    Ok(true)
}
