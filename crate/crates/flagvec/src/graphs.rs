//! Finite i-graphs: vertex sets carrying distinct i-element cells.
//!
//! A 0-graph is an atom (symbol `a` without the empty cell, `b` with it)
//! whatever its vertex count; links of an i-graph are (i-1)-graphs on the
//! remaining vertices.  Everything here is small and explicit: cells are
//! sorted vertex lists, equivalence is brute-force relabeling under a
//! factorial guard, and enumeration walks all cell subsets under a global
//! family-size guard.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use itertools::Itertools;
use rand::Rng;

use crate::algebra::atom::{atom_a, atom_b, Atom};
use crate::error::{Error, Result};
use crate::shelling::{LinkSpaceKey, ShellObject};

/// Largest vertex count for the factorial relabeling scan.
pub const RELABEL_GUARD: usize = 10;
/// Largest family size for exhaustive enumeration of cell subsets.
pub const FAMILY_GUARD: u64 = 65536;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IGraph {
    i: usize,
    r: usize,
    /// Each cell is a strictly increasing vertex list of length `i`.
    cells: BTreeSet<Vec<usize>>,
}

impl IGraph {
    pub fn new(
        i: usize,
        r: usize,
        cells: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<IGraph> {
        let mut set = BTreeSet::new();
        for mut cell in cells {
            cell.sort_unstable();
            let before = cell.len();
            cell.dedup();
            if cell.len() != before || cell.len() != i {
                return Err(Error::input(format!(
                    "cell {{{}}} does not have {} distinct elements",
                    cell.iter().join(" "),
                    i
                )));
            }
            if let Some(&v) = cell.iter().find(|&&v| v >= r) {
                return Err(Error::input(format!(
                    "cell vertex {v} is out of range for {r} vertices"
                )));
            }
            if !set.insert(cell.clone()) {
                return Err(Error::input(format!(
                    "duplicate cell {{{}}}",
                    cell.iter().join(" ")
                )));
            }
        }
        Ok(IGraph { i, r, cells: set })
    }

    pub fn empty(i: usize, r: usize) -> IGraph {
        IGraph {
            i,
            r,
            cells: BTreeSet::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.i
    }

    pub fn vertices(&self) -> usize {
        self.r
    }

    pub fn cells(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.cells.iter()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn has_cell(&self, cell: &[usize]) -> bool {
        self.cells.contains(cell)
    }

    /// The same graph with one cell removed.
    pub fn without_cell(&self, cell: &[usize]) -> Result<IGraph> {
        if !self.cells.contains(cell) {
            return Err(Error::input(format!(
                "graph has no cell {{{}}} to remove",
                cell.iter().map(|v| v.to_string()).join(",")
            )));
        }
        let mut cells = self.cells.clone();
        cells.remove(cell);
        Ok(IGraph {
            i: self.i,
            r: self.r,
            cells,
        })
    }

    pub fn with_cell(&self, cell: Vec<usize>) -> Result<IGraph> {
        if self.cells.contains(&cell) {
            return Err(Error::input(format!(
                "graph already has cell {{{}}}",
                cell.iter().map(|v| v.to_string()).join(",")
            )));
        }
        let mut cells: Vec<Vec<usize>> = self.cells.iter().cloned().collect();
        cells.push(cell);
        IGraph::new(self.i, self.r, cells)
    }

    /// The same graph with vertex v renamed to perm[v].
    pub fn relabel(&self, perm: &[usize]) -> Result<IGraph> {
        validate_permutation(perm, self.r)?;
        let cells = self
            .cells
            .iter()
            .map(|cell| {
                let mut c: Vec<usize> = cell.iter().map(|&v| perm[v]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        Ok(IGraph {
            i: self.i,
            r: self.r,
            cells,
        })
    }

    /// Lexicographically least cell set over all vertex relabelings.
    pub fn canonical(&self) -> Result<IGraph> {
        if self.r > RELABEL_GUARD {
            return Err(Error::resource(format!(
                "canonical form scans r! relabelings and is limited to r <= {RELABEL_GUARD}, got r = {}",
                self.r
            )));
        }
        let mut best: Option<BTreeSet<Vec<usize>>> = None;
        for perm in (0..self.r).permutations(self.r) {
            let candidate = self.relabel(&perm)?.cells;
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
        Ok(IGraph {
            i: self.i,
            r: self.r,
            cells: best.unwrap_or_default(),
        })
    }

    pub fn is_equivalent_to(&self, other: &IGraph) -> Result<bool> {
        if self.i != other.i || self.r != other.r {
            return Ok(false);
        }
        Ok(self.canonical()?.cells == other.canonical()?.cells)
    }

    /// Every i-graph on r vertices, one per cell subset, in subset-mask
    /// order over the sorted cell universe.
    pub fn enumerate_all(i: usize, r: usize) -> Result<Vec<IGraph>> {
        let universe: Vec<Vec<usize>> = (0..r).combinations(i).collect();
        if universe.len() >= 64 || (1u64 << universe.len()) > FAMILY_GUARD {
            return Err(Error::resource(format!(
                "enumerating 2^{} i-graphs exceeds the family guard of {FAMILY_GUARD}",
                universe.len()
            )));
        }
        let mut out = Vec::with_capacity(1 << universe.len());
        for mask in 0u64..(1 << universe.len()) {
            let cells: BTreeSet<Vec<usize>> = universe
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, c)| c.clone())
                .collect();
            out.push(IGraph { i, r, cells });
        }
        Ok(out)
    }

    /// One canonical representative per equivalence class, sorted.
    pub fn equivalence_classes(i: usize, r: usize) -> Result<Vec<IGraph>> {
        let mut reps = BTreeSet::new();
        for g in IGraph::enumerate_all(i, r)? {
            reps.insert(g.canonical()?);
        }
        Ok(reps.into_iter().collect())
    }

    /// Uniformly random cell subset: each possible cell kept with
    /// probability 1/2.
    pub fn random(i: usize, r: usize, rng: &mut impl Rng) -> IGraph {
        let cells = (0..r)
            .combinations(i)
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        IGraph { i, r, cells }
    }

    /// Canonical text form, one line per cell.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "igraph i={} r={}", self.i, self.r);
        for cell in &self.cells {
            let _ = writeln!(out, "cell {}", cell.iter().join(" "));
        }
        out
    }
}

pub(crate) fn validate_permutation(perm: &[usize], r: usize) -> Result<()> {
    if perm.len() != r || !(0..r).all(|v| perm.contains(&v)) {
        return Err(Error::input(format!(
            "relabeling {{{}}} is not a permutation of 0..{r}",
            perm.iter().join(" ")
        )));
    }
    Ok(())
}

/// Drops `v` from an index set and closes the gap, for re-indexing
/// structures that live on the remaining vertices.
pub(crate) fn shift_past(w: usize, v: usize) -> usize {
    if w > v {
        w - 1
    } else {
        w
    }
}

impl ShellObject for IGraph {
    fn vertex_count(&self) -> usize {
        self.r
    }

    fn terminal_atom(&self) -> Option<Atom> {
        if self.i == 0 {
            Some(if self.cells.is_empty() {
                atom_a()
            } else {
                atom_b()
            })
        } else {
            None
        }
    }

    fn link_at(&self, v: usize) -> Result<Self> {
        if self.i == 0 {
            return Err(Error::input("a 0-graph has no links".to_string()));
        }
        if v >= self.r {
            return Err(Error::input(format!(
                "link vertex {v} out of range for {} vertices",
                self.r
            )));
        }
        let cells = self
            .cells
            .iter()
            .filter(|cell| cell.contains(&v))
            .map(|cell| {
                cell.iter()
                    .filter(|&&w| w != v)
                    .map(|&w| shift_past(w, v))
                    .collect()
            })
            .collect();
        Ok(IGraph {
            i: self.i - 1,
            r: self.r - 1,
            cells,
        })
    }

    fn without(&self, v: usize) -> Result<Self> {
        if v >= self.r {
            return Err(Error::input(format!(
                "vertex {v} out of range for {} vertices",
                self.r
            )));
        }
        let cells = self
            .cells
            .iter()
            .filter(|cell| !cell.contains(&v))
            .map(|cell| cell.iter().map(|&w| shift_past(w, v)).collect())
            .collect();
        Ok(IGraph {
            i: self.i,
            r: self.r - 1,
            cells,
        })
    }

    fn space_key(&self) -> LinkSpaceKey {
        LinkSpaceKey::IGraph {
            i: self.i,
            m: self.r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::atom::Word;
    use crate::algebra::vector::{rat, FormalVector};
    use crate::shelling::{
        flag_vector, igraph_ordering_count, shelling_vector, IdentityProvider, Method,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(i: usize, r: usize, cells: &[&[usize]]) -> IGraph {
        IGraph::new(i, r, cells.iter().map(|c| c.to_vec())).unwrap()
    }

    #[test]
    fn validation_rejects_bad_cells() {
        assert!(IGraph::new(2, 3, vec![vec![0, 0]]).is_err());
        assert!(IGraph::new(2, 3, vec![vec![0]]).is_err());
        assert!(IGraph::new(2, 3, vec![vec![0, 3]]).is_err());
        assert!(IGraph::new(2, 3, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(IGraph::new(0, 2, vec![vec![], vec![]]).is_err());
        assert!(IGraph::new(0, 2, vec![vec![]]).is_ok());
    }

    #[test]
    fn links_of_the_one_cell_pair() {
        let pair = g(1, 2, &[&[0]]);
        let link0 = pair.link_at(0).unwrap();
        assert_eq!(link0.terminal_atom(), Some(atom_b()));
        assert_eq!(link0.vertices(), 1);
        let link1 = pair.link_at(1).unwrap();
        assert_eq!(link1.terminal_atom(), Some(atom_a()));
    }

    #[test]
    fn link_of_the_triangle_keeps_both_singletons() {
        let triangle = g(2, 3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let link = triangle.link_at(0).unwrap();
        assert_eq!(link, g(1, 2, &[&[0], &[1]]));
    }

    #[test]
    fn zero_graph_links_are_an_input_error() {
        let zero = g(0, 2, &[]);
        assert!(matches!(zero.link_at(0), Err(Error::Input(_))));
    }

    #[test]
    fn shelling_examples_from_first_principles() {
        let v = shelling_vector(&g(1, 2, &[]), Method::SubsetDp).unwrap();
        assert_eq!(v, FormalVector::monomial(Word::parse("a|a").unwrap(), rat(2)));
        let v = shelling_vector(&g(1, 2, &[&[0]]), Method::SubsetDp).unwrap();
        let mut expected = FormalVector::monomial(Word::parse("a|b").unwrap(), rat(1));
        expected.add_term(Word::parse("b|a").unwrap(), rat(1));
        assert_eq!(v, expected);
    }

    #[test]
    fn two_graph_coefficient_sums_on_three_vertices() {
        for graph in IGraph::enumerate_all(2, 3).unwrap() {
            let v = shelling_vector(&graph, Method::SubsetDp).unwrap();
            assert_eq!(v.coefficient_sum(), igraph_ordering_count(2, 3).into());
            assert_eq!(v.coefficient_sum(), rat(12));
        }
    }

    #[test]
    fn coefficient_sum_law_holds_through_dimension_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..=2 {
            for r in 0..=5 {
                let graph = IGraph::random(i, r, &mut rng);
                let v = shelling_vector(&graph, Method::SubsetDp).unwrap();
                assert_eq!(v.coefficient_sum(), igraph_ordering_count(i, r).into());
            }
        }
    }

    #[test]
    fn relabeling_examples_are_equivalent() {
        assert!(g(1, 2, &[&[0]]).is_equivalent_to(&g(1, 2, &[&[1]])).unwrap());
        let path = g(2, 3, &[&[0, 1], &[1, 2]]);
        let cherry = g(2, 3, &[&[0, 1], &[0, 2]]);
        assert!(path.is_equivalent_to(&cherry).unwrap());
        let triangle = g(2, 3, &[&[0, 1], &[0, 2], &[1, 2]]);
        assert!(!path.is_equivalent_to(&triangle).unwrap());
    }

    #[test]
    fn class_counts_at_small_sizes() {
        assert_eq!(IGraph::equivalence_classes(2, 4).unwrap().len(), 11);
        for r in 0..=5 {
            assert_eq!(IGraph::equivalence_classes(1, r).unwrap().len(), r + 1);
        }
    }

    #[test]
    fn vectors_are_relabeling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let graph = IGraph::random(2, 4, &mut rng);
        let perm = vec![2, 0, 3, 1];
        let relabeled = graph.relabel(&perm).unwrap();
        assert_eq!(
            shelling_vector(&graph, Method::SubsetDp).unwrap(),
            shelling_vector(&relabeled, Method::SubsetDp).unwrap()
        );
        assert_eq!(
            flag_vector(&graph, &IdentityProvider, Method::SubsetDp).unwrap(),
            flag_vector(&relabeled, &IdentityProvider, Method::SubsetDp).unwrap()
        );
    }

    #[test]
    fn guards_give_resource_errors() {
        let big = IGraph::empty(1, 11);
        assert!(matches!(big.canonical(), Err(Error::Resource(_))));
        assert!(matches!(
            IGraph::enumerate_all(3, 7),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn render_is_canonical() {
        let graph = g(2, 3, &[&[1, 2], &[0, 1]]);
        assert_eq!(graph.render(), "igraph i=2 r=3\ncell 0 1\ncell 1 2\n");
    }
}
