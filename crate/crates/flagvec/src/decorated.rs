//! Oriented i-graphs and i-graphs with boundary.
//!
//! Both decorations ride on top of plain i-graphs.  An oriented cell
//! stores one reference sign on the increasing ordering of its support;
//! removing the vertex at 1-based position k multiplies the sign by
//! (-1)^(k-1), so the induced sign function alternates under
//! transpositions.  A boundary cell stores a subset of its support plus a
//! 0/1 label word that grows by one letter per removal, recording whether
//! the removed vertex was a boundary vertex; the first removal writes the
//! first letter.  Supports are pairwise distinct in both classes, which
//! keeps every 0-graph down the recursion at a single cell and founds the
//! atoms b+, b- and b_w.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use itertools::Itertools;
use rand::Rng;

use crate::algebra::atom::{atom_a, atom_b_labelled, atom_b_signed, Atom};
use crate::error::{Error, Result};
use crate::graphs::{shift_past, validate_permutation, FAMILY_GUARD};
use crate::shelling::{LinkSpaceKey, ShellObject};

/// Sign of the permutation that sorts `items`, or `None` on duplicates.
fn sorting_sign(items: &[usize]) -> Option<i8> {
    let mut inversions = 0usize;
    for (k, a) in items.iter().enumerate() {
        for b in &items[k + 1..] {
            if a == b {
                return None;
            }
            if a > b {
                inversions += 1;
            }
        }
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrientedGraph {
    i: usize,
    r: usize,
    /// Sorted support -> sign of the increasing ordering.
    cells: BTreeMap<Vec<usize>, i8>,
}

impl OrientedGraph {
    /// Cells are given as (vertex list, sign of that listed ordering);
    /// storage normalizes to the increasing ordering, adjusting the sign
    /// by the parity of the sort.
    pub fn new(
        i: usize,
        r: usize,
        cells: impl IntoIterator<Item = (Vec<usize>, i8)>,
    ) -> Result<OrientedGraph> {
        let mut map = BTreeMap::new();
        for (listed, sign) in cells {
            if !matches!(sign, 1 | -1) {
                return Err(Error::input(format!("cell sign must be +1 or -1, got {sign}")));
            }
            if listed.len() != i {
                return Err(Error::input(format!(
                    "cell ({}) does not have {} vertices",
                    listed.iter().join(" "),
                    i
                )));
            }
            if let Some(&v) = listed.iter().find(|&&v| v >= r) {
                return Err(Error::input(format!(
                    "cell vertex {v} is out of range for {r} vertices"
                )));
            }
            let parity = sorting_sign(&listed).ok_or_else(|| {
                Error::input(format!(
                    "cell ({}) repeats a vertex",
                    listed.iter().join(" ")
                ))
            })?;
            let mut support = listed;
            support.sort_unstable();
            if map.insert(support.clone(), sign * parity).is_some() {
                return Err(Error::input(format!(
                    "two cells share the support {{{}}}",
                    support.iter().join(" ")
                )));
            }
        }
        Ok(OrientedGraph { i, r, cells: map })
    }

    pub fn empty(i: usize, r: usize) -> OrientedGraph {
        OrientedGraph {
            i,
            r,
            cells: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.i
    }

    pub fn vertices(&self) -> usize {
        self.r
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Vec<usize>, i8)> {
        self.cells.iter().map(|(s, &sign)| (s, sign))
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn without_cell(&self, support: &[usize]) -> OrientedGraph {
        let mut out = self.clone();
        out.cells.remove(support);
        out
    }

    pub fn with_cell(&self, support: Vec<usize>, sign: i8) -> OrientedGraph {
        let mut out = self.clone();
        out.cells.insert(support, sign);
        out
    }

    /// The alphabet involution at the object level: every stored sign
    /// flipped.
    pub fn flip_signs(&self) -> OrientedGraph {
        OrientedGraph {
            i: self.i,
            r: self.r,
            cells: self.cells.iter().map(|(s, &g)| (s.clone(), -g)).collect(),
        }
    }

    /// Vertex v renamed to perm[v]; the stored sign transports by the
    /// parity of re-sorting the renamed support.
    pub fn relabel(&self, perm: &[usize]) -> Result<OrientedGraph> {
        validate_permutation(perm, self.r)?;
        let mut cells = BTreeMap::new();
        for (support, &sign) in &self.cells {
            let renamed: Vec<usize> = support.iter().map(|&v| perm[v]).collect();
            let parity = sorting_sign(&renamed).expect("bijection keeps vertices distinct");
            let mut sorted = renamed;
            sorted.sort_unstable();
            cells.insert(sorted, sign * parity);
        }
        Ok(OrientedGraph {
            i: self.i,
            r: self.r,
            cells,
        })
    }

    /// Every sign assignment over every support subset, in deterministic
    /// order (each support absent, positive, or negative).
    pub fn enumerate_all(i: usize, r: usize) -> Result<Vec<OrientedGraph>> {
        let universe: Vec<Vec<usize>> = (0..r).combinations(i).collect();
        let mut count: u64 = 1;
        for _ in &universe {
            count = count.saturating_mul(3);
            if count > FAMILY_GUARD {
                return Err(Error::resource(format!(
                    "enumerating 3^{} oriented graphs exceeds the family guard of {FAMILY_GUARD}",
                    universe.len()
                )));
            }
        }
        let mut out = Vec::with_capacity(count as usize);
        for mut code in 0u64..count {
            let mut cells = BTreeMap::new();
            for support in &universe {
                let trit = code % 3;
                code /= 3;
                match trit {
                    0 => {}
                    1 => {
                        cells.insert(support.clone(), 1);
                    }
                    _ => {
                        cells.insert(support.clone(), -1);
                    }
                }
            }
            out.push(OrientedGraph { i, r, cells });
        }
        Ok(out)
    }

    /// Each support absent, positive, or negative with equal probability.
    pub fn random(i: usize, r: usize, rng: &mut impl Rng) -> OrientedGraph {
        let mut cells = BTreeMap::new();
        for support in (0..r).combinations(i) {
            match rng.gen_range(0..3) {
                0 => {}
                1 => {
                    cells.insert(support, 1);
                }
                _ => {
                    cells.insert(support, -1);
                }
            }
        }
        OrientedGraph { i, r, cells }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "origraph i={} r={}", self.i, self.r);
        for (support, sign) in &self.cells {
            let _ = writeln!(
                out,
                "cell {} {}",
                if *sign > 0 { "+" } else { "-" },
                support.iter().join(" ")
            );
        }
        out
    }
}

impl ShellObject for OrientedGraph {
    fn vertex_count(&self) -> usize {
        self.r
    }

    fn terminal_atom(&self) -> Option<Atom> {
        if self.i != 0 {
            return None;
        }
        Some(match self.cells.values().next() {
            None => atom_a(),
            Some(&sign) => atom_b_signed(sign > 0),
        })
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
        let mut cells = BTreeMap::new();
        for (support, &sign) in &self.cells {
            let Some(k) = support.iter().position(|&w| w == v) else {
                continue;
            };
            let reduced: Vec<usize> = support
                .iter()
                .filter(|&&w| w != v)
                .map(|&w| shift_past(w, v))
                .collect();
            let factor: i8 = if k % 2 == 0 { 1 } else { -1 };
            cells.insert(reduced, sign * factor);
        }
        Ok(OrientedGraph {
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
            .filter(|(support, _)| !support.contains(&v))
            .map(|(support, &sign)| {
                (
                    support.iter().map(|&w| shift_past(w, v)).collect(),
                    sign,
                )
            })
            .collect();
        Ok(OrientedGraph {
            i: self.i,
            r: self.r - 1,
            cells,
        })
    }

    fn space_key(&self) -> LinkSpaceKey {
        LinkSpaceKey::Oriented {
            i: self.i,
            m: self.r,
        }
    }
}

/// Decoration of one boundary cell: the boundary subset and the label
/// accumulated so far.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoundaryDecoration {
    pub boundary: BTreeSet<usize>,
    pub label: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoundaryGraph {
    i: usize,
    r: usize,
    /// Number of removals applied so far; every label has this length.
    depth: usize,
    cells: BTreeMap<Vec<usize>, BoundaryDecoration>,
}

impl BoundaryGraph {
    pub fn new(
        i: usize,
        r: usize,
        depth: usize,
        cells: impl IntoIterator<Item = (Vec<usize>, Vec<usize>, Vec<bool>)>,
    ) -> Result<BoundaryGraph> {
        let mut map = BTreeMap::new();
        for (mut support, boundary, label) in cells {
            support.sort_unstable();
            support.dedup();
            if support.len() != i {
                return Err(Error::input(format!(
                    "cell {{{}}} does not have {} distinct vertices",
                    support.iter().join(" "),
                    i
                )));
            }
            if let Some(&v) = support.iter().find(|&&v| v >= r) {
                return Err(Error::input(format!(
                    "cell vertex {v} is out of range for {r} vertices"
                )));
            }
            let boundary: BTreeSet<usize> = boundary.into_iter().collect();
            if let Some(&u) = boundary.iter().find(|u| !support.contains(u)) {
                return Err(Error::input(format!(
                    "boundary vertex {u} is not in the cell support"
                )));
            }
            if label.len() != depth {
                return Err(Error::input(format!(
                    "cell label has length {}, expected the removal depth {depth}",
                    label.len()
                )));
            }
            if map
                .insert(support.clone(), BoundaryDecoration { boundary, label })
                .is_some()
            {
                return Err(Error::input(format!(
                    "two cells share the support {{{}}}",
                    support.iter().join(" ")
                )));
            }
        }
        Ok(BoundaryGraph {
            i,
            r,
            depth,
            cells: map,
        })
    }

    /// Fresh graph before any removals: empty labels.
    pub fn at_depth_zero(
        i: usize,
        r: usize,
        cells: impl IntoIterator<Item = (Vec<usize>, Vec<usize>)>,
    ) -> Result<BoundaryGraph> {
        BoundaryGraph::new(
            i,
            r,
            0,
            cells.into_iter().map(|(s, b)| (s, b, Vec::new())),
        )
    }

    pub fn empty(i: usize, r: usize, depth: usize) -> BoundaryGraph {
        BoundaryGraph {
            i,
            r,
            depth,
            cells: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.i
    }

    pub fn vertices(&self) -> usize {
        self.r
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Vec<usize>, &BoundaryDecoration)> {
        self.cells.iter()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn without_cell(&self, support: &[usize]) -> BoundaryGraph {
        let mut out = self.clone();
        out.cells.remove(support);
        out
    }

    pub fn with_cell(
        &self,
        support: Vec<usize>,
        decoration: BoundaryDecoration,
    ) -> BoundaryGraph {
        let mut out = self.clone();
        out.cells.insert(support, decoration);
        out
    }

    pub fn relabel(&self, perm: &[usize]) -> Result<BoundaryGraph> {
        validate_permutation(perm, self.r)?;
        let mut cells = BTreeMap::new();
        for (support, decoration) in &self.cells {
            let mut renamed: Vec<usize> = support.iter().map(|&v| perm[v]).collect();
            renamed.sort_unstable();
            cells.insert(
                renamed,
                BoundaryDecoration {
                    boundary: decoration.boundary.iter().map(|&v| perm[v]).collect(),
                    label: decoration.label.clone(),
                },
            );
        }
        Ok(BoundaryGraph {
            i: self.i,
            r: self.r,
            depth: self.depth,
            cells,
        })
    }

    /// All decorations a cell can carry at this arity and depth, in
    /// deterministic order.
    pub fn decorations(i: usize, depth: usize, support: &[usize]) -> Vec<BoundaryDecoration> {
        let mut out = Vec::new();
        for b in 0..=i {
            for boundary in support.iter().copied().combinations(b) {
                for bits in 0..(1u64 << depth) {
                    out.push(BoundaryDecoration {
                        boundary: boundary.iter().copied().collect(),
                        label: (0..depth).map(|k| bits & (1 << k) != 0).collect(),
                    });
                }
            }
        }
        out.sort();
        out
    }

    /// Every distinct-support graph over every decoration choice.
    pub fn enumerate_all(i: usize, depth: usize, r: usize) -> Result<Vec<BoundaryGraph>> {
        let universe: Vec<Vec<usize>> = (0..r).combinations(i).collect();
        let per_support: Vec<Vec<BoundaryDecoration>> = universe
            .iter()
            .map(|s| BoundaryGraph::decorations(i, depth, s))
            .collect();
        let mut count: u64 = 1;
        for d in &per_support {
            count = count.saturating_mul(1 + d.len() as u64);
            if count > FAMILY_GUARD {
                return Err(Error::resource(format!(
                    "enumerating labelled boundary graphs exceeds the family guard of {FAMILY_GUARD}"
                )));
            }
        }
        let mut out = Vec::with_capacity(count as usize);
        for mut code in 0u64..count {
            let mut cells = BTreeMap::new();
            for (support, options) in universe.iter().zip(&per_support) {
                let radix = 1 + options.len() as u64;
                let choice = (code % radix) as usize;
                code /= radix;
                if choice > 0 {
                    cells.insert(support.clone(), options[choice - 1].clone());
                }
            }
            out.push(BoundaryGraph {
                i,
                r,
                depth,
                cells,
            });
        }
        Ok(out)
    }

    /// Random depth-0 graph: each support kept with probability 1/2, with
    /// a uniform boundary subset.
    pub fn random(i: usize, r: usize, rng: &mut impl Rng) -> BoundaryGraph {
        let mut cells = BTreeMap::new();
        for support in (0..r).combinations(i) {
            if rng.gen_bool(0.5) {
                let boundary = support.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                cells.insert(
                    support,
                    BoundaryDecoration {
                        boundary,
                        label: Vec::new(),
                    },
                );
            }
        }
        BoundaryGraph {
            i,
            r,
            depth: 0,
            cells,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "bgraph i={} r={}", self.i, self.r);
        for (support, decoration) in &self.cells {
            let _ = writeln!(
                out,
                "cell {} ; boundary{}",
                support.iter().join(" "),
                decoration
                    .boundary
                    .iter()
                    .map(|v| format!(" {v}"))
                    .collect::<String>()
            );
        }
        out
    }
}

impl ShellObject for BoundaryGraph {
    fn vertex_count(&self) -> usize {
        self.r
    }

    fn terminal_atom(&self) -> Option<Atom> {
        if self.i != 0 {
            return None;
        }
        Some(match self.cells.values().next() {
            None => atom_a(),
            Some(decoration) => atom_b_labelled(&decoration.label),
        })
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
        let mut cells = BTreeMap::new();
        for (support, decoration) in &self.cells {
            if !support.contains(&v) {
                continue;
            }
            let reduced: Vec<usize> = support
                .iter()
                .filter(|&&w| w != v)
                .map(|&w| shift_past(w, v))
                .collect();
            let mut label = decoration.label.clone();
            label.push(decoration.boundary.contains(&v));
            let boundary = decoration
                .boundary
                .iter()
                .filter(|&&w| w != v)
                .map(|&w| shift_past(w, v))
                .collect();
            cells.insert(reduced, BoundaryDecoration { boundary, label });
        }
        Ok(BoundaryGraph {
            i: self.i - 1,
            r: self.r - 1,
            depth: self.depth + 1,
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
            .filter(|(support, _)| !support.contains(&v))
            .map(|(support, decoration)| {
                (
                    support.iter().map(|&w| shift_past(w, v)).collect(),
                    BoundaryDecoration {
                        boundary: decoration.boundary.iter().map(|&w| shift_past(w, v)).collect(),
                        label: decoration.label.clone(),
                    },
                )
            })
            .collect();
        Ok(BoundaryGraph {
            i: self.i,
            r: self.r - 1,
            depth: self.depth,
            cells,
        })
    }

    fn space_key(&self) -> LinkSpaceKey {
        LinkSpaceKey::Boundary {
            i: self.i,
            depth: self.depth,
            m: self.r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::atom::Word;
    use crate::algebra::vector::{rat, FormalVector};
    use crate::shelling::{shelling_vector, Method};

    #[test]
    fn listed_order_normalizes_the_sign() {
        let forward = OrientedGraph::new(2, 2, vec![(vec![0, 1], 1)]).unwrap();
        let reversed = OrientedGraph::new(2, 2, vec![(vec![1, 0], -1)]).unwrap();
        assert_eq!(forward, reversed);
        assert!(OrientedGraph::new(2, 2, vec![(vec![0, 0], 1)]).is_err());
        assert!(OrientedGraph::new(2, 2, vec![(vec![0, 1], 1), (vec![1, 0], 1)]).is_err());
        assert!(OrientedGraph::new(2, 2, vec![(vec![0, 1], 2)]).is_err());
    }

    #[test]
    fn removal_sign_follows_the_position_parity() {
        let cell = OrientedGraph::new(2, 2, vec![(vec![0, 1], 1)]).unwrap();
        let at0 = cell.link_at(0).unwrap();
        assert_eq!(at0.cells().next(), Some((&vec![0usize], 1)));
        let at1 = cell.link_at(1).unwrap();
        assert_eq!(at1.cells().next(), Some((&vec![0usize], -1)));
    }

    #[test]
    fn one_cell_one_vertex_graphs_found_the_signed_atoms() {
        let plus = OrientedGraph::new(1, 1, vec![(vec![0], 1)]).unwrap();
        let v = shelling_vector(&plus, Method::SubsetDp).unwrap();
        assert_eq!(v, FormalVector::monomial(Word::parse("b+").unwrap(), rat(1)));
        let minus = OrientedGraph::new(1, 1, vec![(vec![0], -1)]).unwrap();
        let v = shelling_vector(&minus, Method::SubsetDp).unwrap();
        assert_eq!(v, FormalVector::monomial(Word::parse("b-").unwrap(), rat(1)));
    }

    #[test]
    fn double_removal_from_a_2_cell_alternates() {
        // Removing 0 then 1 versus 1 then 0 from the one-cell 2-graph
        // lands on opposite signed atoms.
        let cell = OrientedGraph::new(2, 2, vec![(vec![0, 1], 1)]).unwrap();
        let first = cell.link_at(0).unwrap().link_at(0).unwrap();
        let second = cell.link_at(1).unwrap().link_at(0).unwrap();
        assert_eq!(first.terminal_atom(), Some(atom_b_signed(true)));
        assert_eq!(second.terminal_atom(), Some(atom_b_signed(false)));
    }

    #[test]
    fn flipping_signs_acts_as_the_alphabet_involution_on_shellings() {
        let flip = |atom: &Atom| -> Atom {
            match atom.name() {
                "b+" => atom_b_signed(false),
                "b-" => atom_b_signed(true),
                _ => atom.clone(),
            }
        };
        for i in 1..=2 {
            for r in 0..=3 {
                for g in OrientedGraph::enumerate_all(i, r).unwrap() {
                    let v = shelling_vector(&g, Method::SubsetDp).unwrap();
                    let flipped =
                        shelling_vector(&g.flip_signs(), Method::SubsetDp).unwrap();
                    assert_eq!(flipped, v.map_atoms(flip));
                }
            }
        }
    }

    #[test]
    fn oriented_relabeling_transports_signs() {
        let g = OrientedGraph::new(
            2,
            3,
            vec![(vec![0, 1], 1), (vec![1, 2], -1)],
        )
        .unwrap();
        let h = g.relabel(&[2, 1, 0]).unwrap();
        // {0,1} -> {2,1}: odd re-sort, sign flips; {1,2} -> {1,0}: odd.
        assert_eq!(h.cells().collect::<Vec<_>>(), vec![(&vec![0, 1], 1), (&vec![1, 2], -1)]);
        assert_eq!(
            shelling_vector(&g, Method::SubsetDp).unwrap(),
            shelling_vector(&h, Method::SubsetDp).unwrap()
        );
    }

    #[test]
    fn boundary_link_examples() {
        let g = BoundaryGraph::at_depth_zero(2, 2, vec![(vec![0, 1], vec![0])]).unwrap();
        let at0 = g.link_at(0).unwrap();
        let (support, decoration) = at0.cells().next().unwrap();
        assert_eq!(support, &vec![0]);
        assert!(decoration.boundary.is_empty());
        assert_eq!(decoration.label, vec![true]);
        let at1 = g.link_at(1).unwrap();
        let (support, decoration) = at1.cells().next().unwrap();
        assert_eq!(support, &vec![0]);
        assert_eq!(decoration.boundary.iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(decoration.label, vec![false]);
    }

    #[test]
    fn two_step_removal_founds_the_labelled_atom() {
        let g = BoundaryGraph::at_depth_zero(2, 2, vec![(vec![0, 1], vec![0])]).unwrap();
        let atom = g.link_at(0).unwrap().link_at(0).unwrap().terminal_atom();
        assert_eq!(atom, Some(atom_b_labelled(&[true, false])));
    }

    #[test]
    fn one_vertex_boundary_graphs_found_b0_and_b1() {
        let empty_boundary =
            BoundaryGraph::at_depth_zero(1, 1, vec![(vec![0], vec![])]).unwrap();
        let v = shelling_vector(&empty_boundary, Method::SubsetDp).unwrap();
        assert_eq!(
            v,
            FormalVector::monomial(Word::parse("bw:0").unwrap(), rat(1))
        );
        let full = BoundaryGraph::at_depth_zero(1, 1, vec![(vec![0], vec![0])]).unwrap();
        let v = shelling_vector(&full, Method::SubsetDp).unwrap();
        assert_eq!(
            v,
            FormalVector::monomial(Word::parse("bw:1").unwrap(), rat(1))
        );
    }

    #[test]
    fn label_length_equals_depth_everywhere() {
        let g = BoundaryGraph::at_depth_zero(
            2,
            4,
            vec![(vec![0, 1], vec![1]), (vec![1, 2], vec![1, 2]), (vec![2, 3], vec![])],
        )
        .unwrap();
        let link = g.link_at(1).unwrap();
        assert_eq!(link.depth(), 1);
        for (_, decoration) in link.cells() {
            assert_eq!(decoration.label.len(), 1);
        }
        let deeper = link.link_at(0).unwrap();
        assert_eq!(deeper.depth(), 2);
        for (_, decoration) in deeper.cells() {
            assert_eq!(decoration.label.len(), 2);
        }
    }

    #[test]
    fn empty_boundary_shellings_reproduce_plain_graphs() {
        use crate::graphs::IGraph;
        let rename = |atom: &Atom| -> Atom {
            if atom.name() == "bw:00" || atom.name() == "bw:0" {
                crate::algebra::atom::atom_b()
            } else {
                atom.clone()
            }
        };
        for r in 0..=4 {
            for mask in 0u64..(1 << r.min(3)) {
                let supports: Vec<Vec<usize>> =
                    (0..r.min(3)).filter(|&v| mask & (1 << v) != 0).map(|v| vec![v]).collect();
                let plain = IGraph::new(1, r, supports.clone()).unwrap();
                let boundary = BoundaryGraph::at_depth_zero(
                    1,
                    r,
                    supports.into_iter().map(|s| (s, vec![])),
                )
                .unwrap();
                let vb = shelling_vector(&boundary, Method::SubsetDp).unwrap();
                let vp = shelling_vector(&plain, Method::SubsetDp).unwrap();
                assert_eq!(vb.map_atoms(rename), vp);
            }
        }
    }

    #[test]
    fn boundary_validation_errors() {
        assert!(BoundaryGraph::at_depth_zero(1, 2, vec![(vec![0], vec![1])]).is_err());
        assert!(BoundaryGraph::at_depth_zero(
            1,
            2,
            vec![(vec![0], vec![]), (vec![0], vec![0])]
        )
        .is_err());
        assert!(BoundaryGraph::new(1, 2, 1, vec![(vec![0], vec![], vec![])]).is_err());
    }

    #[test]
    fn decoration_and_family_counts() {
        assert_eq!(BoundaryGraph::decorations(1, 0, &[0]).len(), 2);
        assert_eq!(BoundaryGraph::decorations(1, 1, &[0]).len(), 4);
        assert_eq!(BoundaryGraph::enumerate_all(1, 1, 2).unwrap().len(), 25);
        assert_eq!(OrientedGraph::enumerate_all(1, 2).unwrap().len(), 9);
        assert_eq!(OrientedGraph::enumerate_all(0, 3).unwrap().len(), 3);
    }

    #[test]
    fn boundary_relabeling_is_invariant() {
        let g = BoundaryGraph::at_depth_zero(
            2,
            4,
            vec![(vec![0, 1], vec![0]), (vec![2, 3], vec![2, 3])],
        )
        .unwrap();
        let h = g.relabel(&[3, 1, 0, 2]).unwrap();
        assert_eq!(
            shelling_vector(&g, Method::SubsetDp).unwrap(),
            shelling_vector(&h, Method::SubsetDp).unwrap()
        );
    }
}
