//! Construction and caching of the quotient spaces link residues live in.
//!
//! A flag vector projects every link contribution through the quotient of
//! the link's flag space by removal-pair generators: whenever an object G
//! carries two cells c1, c2 whose supports are distinct and disjoint, the
//! alternating sum
//!
//! ```text
//! f(G) - f(G - c1) - f(G - c2) + f(G - c1 - c2)
//! ```
//!
//! is declared zero.  [`LinkSpaces`] builds one [`QuotientSpace`] per
//! [`LinkSpaceKey`], memoizes it behind a mutex, and optionally persists
//! it to a write-once on-disk cache (temp file plus atomic rename, so a
//! cache file is never observed half-written).
//!
//! Graph kinds (plain, oriented, labelled boundary) build exhaustively:
//! every graph on the key's vertex count is enumerated under the family
//! guard, the span of their flag vectors is the ambient, and the quotient
//! carries a named basis.  Level-zero spaces are the identity on their
//! terminal atoms.  Level-one quotients are expressed in the pretty basis
//! `a` (the class of the empty graph's flag) plus one cell-state name
//! each (`b`, `b+`/`b-`, or `bw:<label>`); the removal-pair generators
//! force these classes to satisfy "residue = a + (cell count per state)",
//! and the builder fails with an internal error if the computed rank ever
//! disagrees.  Levels two and above fall back to generic `q:` names in
//! echelon order.
//!
//! Relation kinds have families far too large to exhaust, so their spaces
//! are budgeted: base relations are enumerated in a fixed deterministic
//! order (tuple count ascending, then the canonical order of the sorted
//! tuple list) and every legal unordered pair of tuple additions to each
//! base contributes one generator, until either a configured number of
//! bases has been processed or the generator rank has not grown for a
//! configured window of bases.  Pairs of removals or mixed change pairs
//! produce the same four-corner sums anchored at their bottom corner, so
//! enumerating additions loses nothing.  The truncation state is reported
//! in the space metadata and the budget parameters are versioned into the
//! cache file name, so a cached space is always reproducible from its
//! name alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process;
use std::sync::{Arc, Mutex, MutexGuard, PoisonError};

use itertools::Itertools;

use crate::algebra::atom::{atom_a, atom_b, atom_b_labelled, atom_b_signed, Atom, Word};
use crate::algebra::quotient::{BudgetMeta, Mat, QuotientSpace, SpaceMeta, SpaceModel};
use crate::algebra::rref::Rref;
use crate::algebra::vector::FormalVector;
use crate::decorated::{BoundaryGraph, OrientedGraph};
use crate::error::{Error, Result};
use crate::graphs::IGraph;
use crate::relations::{chain_valid_tuples, tuple_support, Entry, NaryRelation};
use crate::shelling::{flag_vector, LinkSpaceKey, Method, ShellObject, SpaceProvider};

/// Truncation policy for relation-space generator enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationBudget {
    /// Base relations examined, counting from the empty relation upward.
    pub max_relations: usize,
    /// Stop after this many consecutive bases whose generators add no
    /// rank; 0 disables the early stop.
    pub rank_window: usize,
}

impl Default for RelationBudget {
    fn default() -> RelationBudget {
        RelationBudget {
            max_relations: 64,
            rank_window: 8,
        }
    }
}

/// Whether two simple changes at these tuples may form a generator pair:
/// their supports must be distinct and disjoint.  Two empty supports are
/// disjoint but not distinct, so an empty-support change pairs only with
/// a nonempty-support one.
pub fn legal_change_pair(t1: &[Entry], t2: &[Entry]) -> bool {
    let s1 = tuple_support(t1);
    let s2 = tuple_support(t2);
    if s1.is_empty() && s2.is_empty() {
        return false;
    }
    s1.is_disjoint(&s2)
}

/// Memoizing provider of link-space quotients, optionally disk-backed.
///
/// Building the space for one key computes flag vectors of a whole object
/// family, which in turn project their own links through strictly smaller
/// keys; the provider therefore recurses into itself and fills its memo
/// bottom-up.  The mutex is never held while building.
pub struct LinkSpaces {
    cache: Mutex<BTreeMap<LinkSpaceKey, Arc<QuotientSpace>>>,
    disk: Option<PathBuf>,
    budget: RelationBudget,
}

impl LinkSpaces {
    pub fn in_memory() -> LinkSpaces {
        LinkSpaces {
            cache: Mutex::new(BTreeMap::new()),
            disk: None,
            budget: RelationBudget::default(),
        }
    }

    /// Spaces additionally persisted under `dir`, one text file per key,
    /// written once and reused by later runs.
    pub fn with_disk_cache(dir: impl Into<PathBuf>) -> LinkSpaces {
        LinkSpaces {
            cache: Mutex::new(BTreeMap::new()),
            disk: Some(dir.into()),
            budget: RelationBudget::default(),
        }
    }

    pub fn with_budget(mut self, budget: RelationBudget) -> LinkSpaces {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> RelationBudget {
        self.budget
    }

    /// File the space for `key` is (or would be) persisted at, if this
    /// provider has a disk cache at all.
    pub fn cache_file(&self, key: &LinkSpaceKey) -> Option<PathBuf> {
        self.disk.as_ref().map(|dir| dir.join(self.file_name(key)))
    }

    /// Cache file name: the key stem, a format version, and for budgeted
    /// kinds the budget parameters, so different budgets never collide.
    fn file_name(&self, key: &LinkSpaceKey) -> String {
        match key {
            LinkSpaceKey::Relation { .. } => format!(
                "{}.v1.b{}-w{}.space",
                key.file_stem(),
                self.budget.max_relations,
                self.budget.rank_window
            ),
            _ => format!("{}.v1.space", key.file_stem()),
        }
    }

    /// The quotient space for `key`, building (and persisting) on first
    /// use.
    pub fn space(&self, key: &LinkSpaceKey) -> Result<Arc<QuotientSpace>> {
        if let Some(hit) = self.shared().get(key).cloned() {
            return Ok(hit);
        }
        let space = match self.load(key)? {
            Some(space) => space,
            None => {
                let built = self.build(key)?;
                self.store(key, &built)?;
                built
            }
        };
        let mut cache = self.shared();
        Ok(cache
            .entry(key.clone())
            .or_insert_with(|| Arc::new(space))
            .clone())
    }

    fn shared(&self) -> MutexGuard<'_, BTreeMap<LinkSpaceKey, Arc<QuotientSpace>>> {
        self.cache.lock().unwrap_or_else(PoisonError::into_inner)
    }

    fn load(&self, key: &LinkSpaceKey) -> Result<Option<QuotientSpace>> {
        let Some(path) = self.cache_file(key) else {
            return Ok(None);
        };
        let text = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(cache_io_error("read", &path, &e)),
        };
        let space = QuotientSpace::from_text(&text).map_err(|e| {
            Error::input(format!(
                "cache file {} does not hold a valid space: {e}",
                path.display()
            ))
        })?;
        if space.key_label != key.file_stem() {
            return Err(Error::input(format!(
                "cache file {} holds the space for {} but {} was requested",
                path.display(),
                space.key_label,
                key.file_stem()
            )));
        }
        Ok(Some(space))
    }

    fn store(&self, key: &LinkSpaceKey, space: &QuotientSpace) -> Result<()> {
        let Some(path) = self.cache_file(key) else {
            return Ok(());
        };
        if path.exists() {
            return Ok(());
        }
        let dir = match path.parent() {
            Some(dir) if !dir.as_os_str().is_empty() => dir.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir).map_err(|e| cache_io_error("create directory for", &path, &e))?;
        let tmp = dir.join(format!(".{}.tmp.{}", self.file_name(key), process::id()));
        fs::write(&tmp, space.to_text()).map_err(|e| cache_io_error("write", &tmp, &e))?;
        fs::rename(&tmp, &path).map_err(|e| {
            let _ = fs::remove_file(&tmp);
            cache_io_error("publish", &path, &e)
        })?;
        Ok(())
    }

    fn build(&self, key: &LinkSpaceKey) -> Result<QuotientSpace> {
        match *key {
            LinkSpaceKey::IGraph { i, m } => {
                let family = exhaustive_family(IGraph::enumerate_all(i, m))?;
                self.span_space(key, family, igraph_naming(i, m)?)
            }
            LinkSpaceKey::Oriented { i, m } => {
                let family = exhaustive_family(OrientedGraph::enumerate_all(i, m))?;
                self.span_space(key, family, oriented_naming(i, m)?)
            }
            LinkSpaceKey::Boundary { i, depth, m } => {
                let family = exhaustive_family(BoundaryGraph::enumerate_all(i, depth, m))?;
                self.span_space(key, family, boundary_naming(i, depth, m))
            }
            LinkSpaceKey::Relation { n, depth, m } => self.relation_space(key, n, depth, m),
        }
    }

    /// Exhaustive span quotient for a graph kind: ambient is the span of
    /// every family member's flag vector, generators come from every
    /// removal pair, and the basis is named per the plan.
    fn span_space<O: SpanObject>(
        &self,
        key: &LinkSpaceKey,
        family: Vec<O>,
        naming: NamingPlan<O>,
    ) -> Result<QuotientSpace> {
        let mut flags: BTreeMap<O, FormalVector> = BTreeMap::new();
        for g in &family {
            let f = flag_vector(g, self, Method::SubsetDp)?;
            flags.insert(g.clone(), f);
        }
        let mut realizable = Rref::new();
        let mut ambient: BTreeSet<Word> = BTreeSet::new();
        for f in flags.values() {
            realizable.insert(f);
            ambient.extend(f.words().cloned());
        }
        let mut generators = Rref::new();
        for (g, f11) in &flags {
            let supports = g.cell_supports();
            for (s1, s2) in supports.iter().tuple_combinations() {
                if !disjoint_supports(s1, s2) {
                    continue;
                }
                let f10 = corner(&flags, &g.drop_cell(s2), key)?;
                let f01 = corner(&flags, &g.drop_cell(s1), key)?;
                let f00 = corner(&flags, &g.drop_cell(s1).drop_cell(s2), key)?;
                let gen = &(f11 - f10) - &(f01 - f00);
                generators.insert(&gen);
            }
        }
        let mut image = Rref::new();
        for f in flags.values() {
            image.insert(&generators.reduce(f));
        }
        let (names, pretty_inverse) = match naming {
            NamingPlan::Atoms => {
                let mut names = Vec::new();
                for (_, row) in image.rows() {
                    names.push(row_single_atom(row, key)?);
                }
                (names, None)
            }
            NamingPlan::Pretty { base, singles } => {
                let base_residue = generators.reduce(corner(&flags, &base, key)?);
                let mut columns = vec![image.coordinates(&base_residue)?];
                let mut names = vec![atom_a()];
                for (g, name) in singles {
                    let residue = generators.reduce(corner(&flags, &g, key)?);
                    columns.push(image.coordinates(&(&residue - &base_residue))?);
                    names.push(name);
                }
                if columns.len() != image.rank() {
                    return Err(Error::internal(format!(
                        "level-one quotient for {key} has rank {} but {} pretty basis vectors",
                        image.rank(),
                        columns.len()
                    )));
                }
                let pretty = Mat::from_columns(&columns);
                let inverse = pretty.inverse().ok_or_else(|| {
                    Error::internal(format!("pretty basis for {key} is singular"))
                })?;
                (names, Some(inverse))
            }
            NamingPlan::Generic { prefix } => {
                let names = (0..image.rank())
                    .map(|k| Atom::expect(&format!("{prefix}:{k}")))
                    .collect();
                (names, None)
            }
        };
        Ok(QuotientSpace {
            key_label: key.file_stem(),
            generators,
            model: SpaceModel::Span {
                image,
                names,
                pretty_inverse,
            },
            meta: SpaceMeta {
                policy: "exhaustive".to_string(),
                family_size: family.len(),
                ambient_words: ambient.len(),
                realizable_rank: Some(realizable.rank()),
                budget: None,
            },
        })
    }

    /// Budgeted word-model quotient for a relation key.  Bases are
    /// enumerated deterministically; each legal pair of tuple additions
    /// absent from the base contributes the four-corner generator.
    fn relation_space(
        &self,
        key: &LinkSpaceKey,
        n: usize,
        depth: usize,
        m: usize,
    ) -> Result<QuotientSpace> {
        let universe = chain_valid_tuples(n, depth, m);
        let legal: Vec<(usize, usize)> = (0..universe.len())
            .tuple_combinations()
            .filter(|&(t1, t2)| legal_change_pair(&universe[t1], &universe[t2]))
            .collect();
        let budget = self.budget;
        let mut flags: BTreeMap<NaryRelation, FormalVector> = BTreeMap::new();
        let mut ambient: BTreeSet<Word> = BTreeSet::new();
        let mut generators = Rref::new();
        let mut enumerated = 0;
        let mut stalled = 0;
        let mut exhausted = true;
        'bases: for count in 0..=universe.len() {
            for combo in (0..universe.len()).combinations(count) {
                if enumerated == budget.max_relations
                    || (budget.rank_window > 0 && stalled >= budget.rank_window)
                {
                    exhausted = false;
                    break 'bases;
                }
                let base =
                    NaryRelation::new(n, depth, m, combo.iter().map(|&t| universe[t].clone()))?;
                let f00 = self.cached_flag(&mut flags, &base)?;
                ambient.extend(f00.words().cloned());
                let mut grew = false;
                for &(t1, t2) in &legal {
                    if combo.binary_search(&t1).is_ok() || combo.binary_search(&t2).is_ok() {
                        continue;
                    }
                    let r10 = base.with_tuple(universe[t1].clone())?;
                    let r01 = base.with_tuple(universe[t2].clone())?;
                    let r11 = r10.with_tuple(universe[t2].clone())?;
                    let f10 = self.cached_flag(&mut flags, &r10)?;
                    let f01 = self.cached_flag(&mut flags, &r01)?;
                    let f11 = self.cached_flag(&mut flags, &r11)?;
                    for f in [&f10, &f01, &f11] {
                        ambient.extend(f.words().cloned());
                    }
                    let gen = &(&f11 - &f10) - &(&f01 - &f00);
                    if generators.insert(&gen) {
                        grew = true;
                    }
                }
                enumerated += 1;
                if grew {
                    stalled = 0;
                } else {
                    stalled += 1;
                }
            }
        }
        let nonpivot: Vec<Word> = ambient
            .iter()
            .filter(|w| !generators.is_pivot(w))
            .cloned()
            .collect();
        Ok(QuotientSpace {
            key_label: key.file_stem(),
            generators,
            model: SpaceModel::Word {
                nonpivot,
                declared: None,
                prefix: format!("q:{}", key.file_stem()),
            },
            meta: SpaceMeta {
                policy: "budgeted".to_string(),
                family_size: enumerated,
                ambient_words: ambient.len(),
                realizable_rank: None,
                budget: Some(BudgetMeta {
                    max_relations: budget.max_relations,
                    rank_window: budget.rank_window,
                    enumerated,
                    exhausted,
                }),
            },
        })
    }

    fn cached_flag(
        &self,
        flags: &mut BTreeMap<NaryRelation, FormalVector>,
        rel: &NaryRelation,
    ) -> Result<FormalVector> {
        if let Some(f) = flags.get(rel) {
            return Ok(f.clone());
        }
        let f = flag_vector(rel, self, Method::SubsetDp)?;
        flags.insert(rel.clone(), f.clone());
        Ok(f)
    }
}

impl SpaceProvider for LinkSpaces {
    fn project(&self, key: &LinkSpaceKey, v: &FormalVector) -> Result<FormalVector> {
        self.space(key)?.project(v)
    }
}

fn cache_io_error(action: &str, path: &Path, e: &io::Error) -> Error {
    Error::input(format!(
        "cannot {action} link-space cache file {}: {e}",
        path.display()
    ))
}

/// Tightens resource errors from family enumeration with the way out.
fn exhaustive_family<T>(family: Result<Vec<T>>) -> Result<Vec<T>> {
    family.map_err(|e| match e {
        Error::Resource(msg) => Error::Resource(format!(
            "{msg}; an exhaustive link space is infeasible at this size and would need a budgeted generator family as used for relation spaces"
        )),
        other => other,
    })
}

/// What a kind must offer so the generic span builder can form removal
/// pairs over it.
trait SpanObject: ShellObject {
    fn cell_supports(&self) -> Vec<Vec<usize>>;
    fn drop_cell(&self, support: &[usize]) -> Self;
}

impl SpanObject for IGraph {
    fn cell_supports(&self) -> Vec<Vec<usize>> {
        self.cells().cloned().collect()
    }

    fn drop_cell(&self, support: &[usize]) -> IGraph {
        self.without_cell(support)
            .expect("dropping a cell listed by the graph itself")
    }
}

impl SpanObject for OrientedGraph {
    fn cell_supports(&self) -> Vec<Vec<usize>> {
        self.cells().map(|(s, _)| s.clone()).collect()
    }

    fn drop_cell(&self, support: &[usize]) -> OrientedGraph {
        self.without_cell(support)
    }
}

impl SpanObject for BoundaryGraph {
    fn cell_supports(&self) -> Vec<Vec<usize>> {
        self.cells().map(|(s, _)| s.clone()).collect()
    }

    fn drop_cell(&self, support: &[usize]) -> BoundaryGraph {
        self.without_cell(support)
    }
}

fn disjoint_supports(s1: &[usize], s2: &[usize]) -> bool {
    s1.iter().all(|v| !s2.contains(v))
}

fn corner<'a, O: SpanObject>(
    flags: &'a BTreeMap<O, FormalVector>,
    g: &O,
    key: &LinkSpaceKey,
) -> Result<&'a FormalVector> {
    flags.get(g).ok_or_else(|| {
        Error::internal(format!(
            "a removal-pair corner is missing from the enumerated family for {key}"
        ))
    })
}

/// How the quotient basis of one space gets its coordinate names.
enum NamingPlan<O> {
    /// Rows are unit atoms already (level zero); name them by themselves.
    Atoms,
    /// Level one: express residues over the class of `base` (named `a`)
    /// and the listed single-cell classes, each minus the base class.
    Pretty { base: O, singles: Vec<(O, Atom)> },
    /// Echelon coordinates under generated names (level two and beyond).
    Generic { prefix: String },
}

fn igraph_naming(i: usize, m: usize) -> Result<NamingPlan<IGraph>> {
    Ok(match i {
        0 => NamingPlan::Atoms,
        1 => {
            let singles = if m == 0 {
                Vec::new()
            } else {
                vec![(IGraph::new(1, m, vec![vec![0]])?, atom_b())]
            };
            NamingPlan::Pretty {
                base: IGraph::empty(1, m),
                singles,
            }
        }
        _ => NamingPlan::Generic {
            prefix: format!("q:igraph:{i}:{m}"),
        },
    })
}

fn oriented_naming(i: usize, m: usize) -> Result<NamingPlan<OrientedGraph>> {
    Ok(match i {
        0 => NamingPlan::Atoms,
        1 => {
            let singles = if m == 0 {
                Vec::new()
            } else {
                vec![
                    (
                        OrientedGraph::new(1, m, vec![(vec![0], 1)])?,
                        atom_b_signed(true),
                    ),
                    (
                        OrientedGraph::new(1, m, vec![(vec![0], -1)])?,
                        atom_b_signed(false),
                    ),
                ]
            };
            NamingPlan::Pretty {
                base: OrientedGraph::empty(1, m),
                singles,
            }
        }
        _ => NamingPlan::Generic {
            prefix: format!("q:origraph:{i}:{m}"),
        },
    })
}

fn boundary_naming(i: usize, depth: usize, m: usize) -> NamingPlan<BoundaryGraph> {
    match i {
        0 => NamingPlan::Atoms,
        1 => {
            let singles = if m == 0 {
                Vec::new()
            } else {
                BoundaryGraph::decorations(1, depth, &[0])
                    .into_iter()
                    .map(|decoration| {
                        let mut label = decoration.label.clone();
                        label.push(decoration.boundary.contains(&0));
                        let graph =
                            BoundaryGraph::empty(1, m, depth).with_cell(vec![0], decoration);
                        (graph, atom_b_labelled(&label))
                    })
                    .collect()
            };
            NamingPlan::Pretty {
                base: BoundaryGraph::empty(1, m, depth),
                singles,
            }
        }
        _ => NamingPlan::Generic {
            prefix: format!("q:bgraph:{i}:{depth}:{m}"),
        },
    }
}

fn row_single_atom(row: &FormalVector, key: &LinkSpaceKey) -> Result<Atom> {
    let mut terms = row.terms();
    if let Some((word, coeff)) = terms.next() {
        if terms.next().is_none() && coeff == &crate::algebra::vector::rat(1) {
            if let Some(atom) = word.as_single_atom() {
                return Ok(atom.clone());
            }
        }
    }
    Err(Error::internal(format!(
        "a level-zero basis row for {key} is not a unit atom"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::vector::rat;
    use crate::decorated::BoundaryDecoration;
    use crate::relations::{groups_of_order, Entry::Placeholder as P, Entry::Vertex as V};

    fn va() -> FormalVector {
        FormalVector::atom(atom_a())
    }

    fn vb() -> FormalVector {
        FormalVector::atom(atom_b())
    }

    fn flag<O: ShellObject>(g: &O, spaces: &LinkSpaces) -> FormalVector {
        flag_vector(g, spaces, Method::SubsetDp).unwrap()
    }

    fn residue<O: ShellObject>(g: &O, spaces: &LinkSpaces) -> FormalVector {
        let f = flag(g, spaces);
        spaces.project(&g.space_key(), &f).unwrap()
    }

    fn count(n: usize, v: FormalVector) -> FormalVector {
        &va() + &v.scale(&rat(n as i64))
    }

    fn factorial(k: usize) -> i64 {
        (1..=k as i64).product()
    }

    #[test]
    fn level_zero_spaces_pass_atoms_through() {
        let spaces = LinkSpaces::in_memory();
        let key = LinkSpaceKey::IGraph { i: 0, m: 5 };
        let space = spaces.space(&key).unwrap();
        assert_eq!(space.dimension(), 2);
        assert_eq!(space.basis_names(), vec![atom_a(), atom_b()]);
        let mix = &va() + &vb().scale(&rat(3));
        assert_eq!(spaces.project(&key, &mix).unwrap(), mix);

        let oriented = LinkSpaceKey::Oriented { i: 0, m: 2 };
        let space = spaces.space(&oriented).unwrap();
        assert_eq!(
            space.basis_names(),
            vec![atom_a(), atom_b_signed(true), atom_b_signed(false)]
        );

        let boundary = LinkSpaceKey::Boundary { i: 0, depth: 1, m: 2 };
        let space = spaces.space(&boundary).unwrap();
        assert_eq!(
            space.basis_names(),
            vec![
                atom_a(),
                atom_b_labelled(&[false]),
                atom_b_labelled(&[true])
            ]
        );
    }

    #[test]
    fn one_graph_residues_count_cells() {
        let spaces = LinkSpaces::in_memory();
        for m in 0..=5 {
            let key = LinkSpaceKey::IGraph { i: 1, m };
            let space = spaces.space(&key).unwrap();
            assert_eq!(space.dimension(), if m == 0 { 1 } else { 2 }, "m = {m}");
            for n in 0..=m {
                let g = IGraph::new(1, m, (0..n).map(|v| vec![v])).unwrap();
                assert_eq!(residue(&g, &spaces), count(n, vb()), "m = {m} n = {n}");
            }
        }
    }

    #[test]
    fn empty_and_full_two_graph_flags_match_hand_expansions() {
        let spaces = LinkSpaces::in_memory();
        let empty = IGraph::empty(2, 3);
        let aaa = va().tensor(&va()).tensor(&va()).scale(&rat(6));
        assert_eq!(flag(&empty, &spaces), aaa);

        let triangle = IGraph::new(2, 3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        let expected = count(2, vb())
            .tensor(&count(1, vb()))
            .tensor(&va())
            .scale(&rat(6));
        assert_eq!(flag(&triangle, &spaces), expected);
    }

    #[test]
    fn flag_evaluation_counts_orderings() {
        let spaces = LinkSpaces::in_memory();
        let ones: BTreeMap<Atom, _> = [(atom_a(), rat(1)), (atom_b(), rat(0))].into();
        for r in 0..=4 {
            for g in IGraph::enumerate_all(2, r).unwrap() {
                let value = flag(&g, &spaces).evaluate(&ones).unwrap();
                assert_eq!(value, rat(factorial(r)), "graph {g:?}");
            }
        }
    }

    #[test]
    fn one_graph_flags_have_the_closed_form() {
        let spaces = LinkSpaces::in_memory();
        for r in 0..=4 {
            let mut classes = Rref::new();
            for n in 0..=r {
                let g = IGraph::new(1, r, (0..n).map(|v| vec![v])).unwrap();
                let f = flag(&g, &spaces);
                let mut expected = FormalVector::zero();
                for positions in (0..r).combinations(n) {
                    let mut word = FormalVector::one();
                    for j in 0..r {
                        let letter = if positions.contains(&j) { vb() } else { va() };
                        word = word.tensor(&letter);
                    }
                    expected = &expected + &word;
                }
                let scale = rat(factorial(n) * factorial(r - n));
                assert_eq!(f, expected.scale(&scale), "r = {r} n = {n}");
                classes.insert(&f);
            }
            assert_eq!(classes.rank(), r + 1, "r = {r}");
        }
    }

    #[test]
    fn removal_pair_generators_project_to_zero() {
        let spaces = LinkSpaces::in_memory();
        let key = LinkSpaceKey::IGraph { i: 2, m: 4 };
        let mut checked = 0;
        for g in IGraph::enumerate_all(2, 4).unwrap() {
            let supports: Vec<Vec<usize>> = g.cells().cloned().collect();
            for (c1, c2) in supports.iter().tuple_combinations() {
                if !disjoint_supports(c1, c2) {
                    continue;
                }
                let f11 = flag(&g, &spaces);
                let f10 = flag(&g.without_cell(c2).unwrap(), &spaces);
                let f01 = flag(&g.without_cell(c1).unwrap(), &spaces);
                let f00 = flag(&g.without_cell(c1).unwrap().without_cell(c2).unwrap(), &spaces);
                let generator = &(&f11 - &f10) - &(&f01 - &f00);
                assert!(spaces.project(&key, &generator).unwrap().is_zero());
                checked += 1;
            }
        }
        assert_eq!(checked, 48);
    }

    #[test]
    fn oriented_level_one_residues_count_signed_cells() {
        let spaces = LinkSpaces::in_memory();
        for m in 0..=3 {
            let key = LinkSpaceKey::Oriented { i: 1, m };
            let space = spaces.space(&key).unwrap();
            assert_eq!(space.dimension(), if m == 0 { 1 } else { 3 }, "m = {m}");
            for g in OrientedGraph::enumerate_all(1, m).unwrap() {
                let plus = g.cells().filter(|&(_, s)| s > 0).count() as i64;
                let minus = g.cell_count() as i64 - plus;
                let expected = &(&va()
                    + &FormalVector::atom(atom_b_signed(true)).scale(&rat(plus)))
                    + &FormalVector::atom(atom_b_signed(false)).scale(&rat(minus));
                assert_eq!(residue(&g, &spaces), expected, "m = {m} graph {g:?}");
            }
        }
    }

    #[test]
    fn boundary_level_one_residues_follow_labels() {
        let spaces = LinkSpaces::in_memory();
        for m in 0..=3 {
            let key = LinkSpaceKey::Boundary { i: 1, depth: 0, m };
            let space = spaces.space(&key).unwrap();
            assert_eq!(space.dimension(), if m == 0 { 1 } else { 3 }, "m = {m}");
            for g in BoundaryGraph::enumerate_all(1, 0, m).unwrap() {
                let mut expected = va();
                for (support, decoration) in g.cells() {
                    let bit = decoration.boundary.contains(&support[0]);
                    expected = &expected + &FormalVector::atom(atom_b_labelled(&[bit]));
                }
                assert_eq!(residue(&g, &spaces), expected, "m = {m} graph {g:?}");
            }
        }

        let deep = LinkSpaceKey::Boundary { i: 1, depth: 1, m: 1 };
        assert_eq!(spaces.space(&deep).unwrap().dimension(), 5);
        for history in [false, true] {
            for on_boundary in [false, true] {
                let decoration = BoundaryDecoration {
                    boundary: if on_boundary { [0].into() } else { Default::default() },
                    label: vec![history],
                };
                let g = BoundaryGraph::empty(1, 1, 1).with_cell(vec![0], decoration);
                let expected =
                    &va() + &FormalVector::atom(atom_b_labelled(&[history, on_boundary]));
                assert_eq!(residue(&g, &spaces), expected);
            }
        }
    }

    #[test]
    fn empty_boundary_residues_shadow_plain_graphs() {
        let spaces = LinkSpaces::in_memory();
        let to_plain = |atom: &Atom| {
            match atom.name().strip_prefix("bw:") {
                Some(rest) if rest.chars().all(|c| c == '0') => atom_b(),
                _ => atom.clone(),
            }
        };
        for i in 1..=2 {
            for r in 0..=3 {
                for plain in IGraph::enumerate_all(i, r).unwrap() {
                    let shadow = BoundaryGraph::at_depth_zero(
                        i,
                        r,
                        plain.cells().map(|c| (c.clone(), Vec::new())),
                    )
                    .unwrap();
                    assert_eq!(
                        flag(&shadow, &spaces).map_atoms(to_plain),
                        flag(&plain, &spaces),
                        "i = {i} r = {r}"
                    );
                }
            }
        }
    }

    #[test]
    fn same_support_changes_add_no_rank() {
        let spaces = LinkSpaces::in_memory();
        for m in 1..=4 {
            let key = LinkSpaceKey::Boundary { i: 1, depth: 0, m };
            let space = spaces.space(&key).unwrap();
            let family = BoundaryGraph::enumerate_all(1, 0, m).unwrap();
            let flags: BTreeMap<BoundaryGraph, FormalVector> = family
                .iter()
                .map(|g| (g.clone(), flag(g, &spaces)))
                .collect();
            let mut extended = space.generators.clone();
            let before = extended.rank();
            for (g, f11) in &flags {
                let cells: Vec<(Vec<usize>, BoundaryDecoration)> = g
                    .cells()
                    .map(|(s, d)| (s.clone(), d.clone()))
                    .collect();
                for (s1, d1) in &cells {
                    for flipped in BoundaryGraph::decorations(1, 0, s1) {
                        if flipped == *d1 {
                            continue;
                        }
                        let g_f = g.without_cell(s1).with_cell(s1.clone(), flipped);
                        for (s2, _) in &cells {
                            if s2 == s1 {
                                continue;
                            }
                            let gen = &(f11 - &flags[&g_f])
                                - &(&flags[&g.without_cell(s2)] - &flags[&g_f.without_cell(s2)]);
                            extended.insert(&gen);
                        }
                        for (s2, d2) in &cells {
                            if s2 <= s1 {
                                continue;
                            }
                            for flipped2 in BoundaryGraph::decorations(1, 0, s2) {
                                if flipped2 == *d2 {
                                    continue;
                                }
                                let g_2 =
                                    g.without_cell(s2).with_cell(s2.clone(), flipped2.clone());
                                let g_both = g_f.without_cell(s2).with_cell(s2.clone(), flipped2);
                                let gen =
                                    &(f11 - &flags[&g_f]) - &(&flags[&g_2] - &flags[&g_both]);
                                extended.insert(&gen);
                            }
                        }
                    }
                }
            }
            assert_eq!(extended.rank(), before, "m = {m}");
        }
    }

    #[test]
    fn legal_change_pairs_require_distinct_disjoint_supports() {
        let all_placeholder = vec![P(1), P(1), P(1)];
        let support_zero = vec![P(1), V(0), V(0)];
        let other_placeholder = vec![P(1), P(2), P(2)];
        let overlapping = vec![V(0), V(0), P(1)];
        assert!(legal_change_pair(&all_placeholder, &support_zero));
        assert!(!legal_change_pair(&all_placeholder, &other_placeholder));
        assert!(!legal_change_pair(&support_zero, &overlapping));
        assert!(legal_change_pair(&support_zero, &[V(1), V(1), P(1)]));
    }

    #[test]
    fn first_base_pairs_are_kernel_members() {
        let spaces = LinkSpaces::in_memory();
        let key = LinkSpaceKey::Relation { n: 3, depth: 1, m: 2 };
        let empty = NaryRelation::empty(3, 1, 2);
        let r10 = empty.with_tuple(vec![V(0), P(1), P(1)]).unwrap();
        let r01 = empty.with_tuple(vec![V(1), P(1), P(1)]).unwrap();
        let r11 = r10.with_tuple(vec![V(1), P(1), P(1)]).unwrap();
        let generator = &(&flag(&r11, &spaces) - &flag(&r10, &spaces))
            - &(&flag(&r01, &spaces) - &flag(&empty, &spaces));
        assert!(spaces.project(&key, &generator).unwrap().is_zero());
    }

    #[test]
    fn empty_relation_flags_scale_by_orderings() {
        let spaces = LinkSpaces::in_memory();
        let unit = FormalVector::atom(Atom::expect("rel:{}"));
        for (n, top) in [(1, 4), (3, 2)] {
            // A relation with no vertices left is already terminal, so its
            // flag is the one-slot atom rather than the empty tensor.
            assert_eq!(flag(&NaryRelation::empty(n, 0, 0), &spaces), unit);
            for m in 1..=top {
                let mut expected = unit.clone();
                for _ in 1..m {
                    expected = expected.tensor(&unit);
                }
                let empty = NaryRelation::empty(n, 0, m);
                assert_eq!(
                    flag(&empty, &spaces),
                    expected.scale(&rat(factorial(m))),
                    "n = {n} m = {m}"
                );
            }
        }
    }

    #[test]
    fn small_group_flags_behave() {
        let spaces = LinkSpaces::in_memory();
        let z1 = &groups_of_order(1).unwrap()[0].1;
        assert_eq!(
            flag(&z1.relation(), &spaces),
            FormalVector::atom(Atom::expect("rel:{(*1,*1,*1)}"))
        );
        let z2 = &groups_of_order(2).unwrap()[0].1;
        let swapped = z2.relation().relabel(&[1, 0]).unwrap();
        assert_eq!(flag(&z2.relation(), &spaces), flag(&swapped, &spaces));
    }

    #[test]
    fn relation_space_budgets_are_reported() {
        let tight = LinkSpaces::in_memory().with_budget(RelationBudget {
            max_relations: 4,
            rank_window: 2,
        });
        let key = LinkSpaceKey::Relation { n: 3, depth: 1, m: 1 };
        let space = tight.space(&key).unwrap();
        let budget = space.meta.budget.clone().unwrap();
        assert_eq!(budget.max_relations, 4);
        assert_eq!(budget.rank_window, 2);
        assert!(budget.enumerated <= 4);
        assert!(!budget.exhausted);
        assert_eq!(space.meta.policy, "budgeted");

        let spaces = LinkSpaces::in_memory();
        let tiny = LinkSpaceKey::Relation { n: 3, depth: 1, m: 0 };
        let space = spaces.space(&tiny).unwrap();
        let budget = space.meta.budget.clone().unwrap();
        assert_eq!(budget.enumerated, 2);
        assert!(budget.exhausted);

        let again = LinkSpaces::in_memory();
        assert_eq!(
            spaces.space(&key).unwrap().to_text(),
            again.space(&key).unwrap().to_text()
        );
    }

    #[test]
    fn level_two_spaces_use_generic_names() {
        let spaces = LinkSpaces::in_memory();
        let key = LinkSpaceKey::IGraph { i: 2, m: 2 };
        let space = spaces.space(&key).unwrap();
        assert_eq!(space.dimension(), 2);
        assert_eq!(
            space.basis_names(),
            vec![
                Atom::expect("q:igraph:2:2:0"),
                Atom::expect("q:igraph:2:2:1")
            ]
        );
        let g = IGraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        let projected = residue(&g, &spaces);
        let expected = &FormalVector::atom(Atom::expect("q:igraph:2:2:0")).scale(&rat(2))
            + &FormalVector::atom(Atom::expect("q:igraph:2:2:1")).scale(&rat(2));
        assert_eq!(projected, expected);
    }

    #[test]
    fn disk_cache_round_trips_and_validates() {
        let dir = tempfile::tempdir().unwrap();
        let spaces = LinkSpaces::with_disk_cache(dir.path());
        let key = LinkSpaceKey::IGraph { i: 1, m: 2 };
        let first = spaces.space(&key).unwrap();
        let path = spaces.cache_file(&key).unwrap();
        assert!(path.ends_with("igraph-1-2.v1.space"));
        assert!(path.exists());
        assert!(Arc::ptr_eq(&first, &spaces.space(&key).unwrap()));

        let reloaded = LinkSpaces::with_disk_cache(dir.path());
        assert_eq!(first.to_text(), reloaded.space(&key).unwrap().to_text());

        let relation = LinkSpaceKey::Relation { n: 3, depth: 1, m: 0 };
        let expected = dir.path().join("relation-3-1-0.v1.b64-w8.space");
        assert_eq!(spaces.cache_file(&relation).unwrap(), expected);
        spaces.space(&relation).unwrap();
        assert!(expected.exists());

        let corrupt_key = LinkSpaceKey::IGraph { i: 1, m: 3 };
        let corrupt = spaces.cache_file(&corrupt_key).unwrap();
        fs::write(&corrupt, "not a space\n").unwrap();
        let fresh = LinkSpaces::with_disk_cache(dir.path());
        let err = fresh.space(&corrupt_key).unwrap_err();
        assert!(err.to_string().contains("igraph-1-3.v1.space"));
    }
}
