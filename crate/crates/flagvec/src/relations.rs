//! n-ary relations with placeholder links, and finite groups as ternary
//! relations.
//!
//! Removing a vertex from a relation substitutes the next placeholder
//! `*k` for it everywhere and keeps exactly the tuples that now carry at
//! least k placeholder occurrences, so the depth of a relation counts the
//! removals applied so far.  Unlike graphs, links raise the depth instead
//! of lowering a dimension; the recursion bottoms out at depth n, where
//! every entry is a placeholder, or when the vertices run out.  In both
//! cases the relation collapses to the atomic symbol `rel:<digest>` of
//! its tuple set.
//!
//! Tuples obey a prefix-count law: undoing the last removal must land on
//! a tuple that is again legal one depth down, so for every k the number
//! of placeholder occurrences with index at most k is at least k.  The
//! law is validated on every construction and is preserved by links,
//! which is what keeps the depth-n symbols inside the admissible
//! all-placeholder alphabet.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use itertools::Itertools;

use crate::algebra::atom::Atom;
use crate::error::{Error, Result};
use crate::graphs::{shift_past, validate_permutation};
use crate::shelling::{LinkSpaceKey, ShellObject};

/// Largest supported arity.
pub const ARITY_GUARD: usize = 4;

/// One coordinate of a tuple: a live vertex or the placeholder left by
/// the k-th removal.  Vertices order before placeholders, which fixes the
/// canonical digest order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Entry {
    Vertex(usize),
    Placeholder(usize),
}

impl Entry {
    pub fn render(&self) -> String {
        match self {
            Entry::Vertex(v) => v.to_string(),
            Entry::Placeholder(k) => format!("*{k}"),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn render_tuple(tuple: &[Entry]) -> String {
    format!("({})", tuple.iter().map(Entry::render).join(","))
}

/// The real vertices a tuple mentions; placeholders do not count.
pub fn tuple_support(tuple: &[Entry]) -> BTreeSet<usize> {
    tuple
        .iter()
        .filter_map(|e| match e {
            Entry::Vertex(v) => Some(*v),
            Entry::Placeholder(_) => None,
        })
        .collect()
}

/// Tuple legality at a given shape, including the prefix-count law.
fn validate_tuple(tuple: &[Entry], n: usize, depth: usize, m: usize) -> Result<()> {
    if tuple.len() != n {
        return Err(Error::input(format!(
            "tuple {} has {} entries, expected the arity {n}",
            render_tuple(tuple),
            tuple.len()
        )));
    }
    for entry in tuple {
        match entry {
            Entry::Vertex(v) if *v >= m => {
                return Err(Error::input(format!(
                    "tuple {} mentions vertex {v}, out of range for {m} vertices",
                    render_tuple(tuple)
                )));
            }
            Entry::Placeholder(k) if *k == 0 || *k > depth => {
                return Err(Error::input(format!(
                    "tuple {} uses placeholder *{k}, which depth {depth} does not admit",
                    render_tuple(tuple)
                )));
            }
            _ => {}
        }
    }
    for k in 1..=depth {
        let count = tuple
            .iter()
            .filter(|e| matches!(e, Entry::Placeholder(j) if *j <= k))
            .count();
        if count < k {
            return Err(Error::input(format!(
                "tuple {} has {count} placeholder occurrences of index at most {k}, fewer than {k}",
                render_tuple(tuple)
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NaryRelation {
    n: usize,
    depth: usize,
    m: usize,
    tuples: BTreeSet<Vec<Entry>>,
}

impl NaryRelation {
    pub fn new(
        n: usize,
        depth: usize,
        m: usize,
        tuples: impl IntoIterator<Item = Vec<Entry>>,
    ) -> Result<NaryRelation> {
        if n == 0 {
            return Err(Error::input("relation arity must be at least 1".to_string()));
        }
        if n > ARITY_GUARD {
            return Err(Error::resource(format!(
                "relation arity {n} exceeds the supported bound {ARITY_GUARD}"
            )));
        }
        if depth > n {
            return Err(Error::input(format!(
                "depth {depth} exceeds the arity {n}"
            )));
        }
        let mut set = BTreeSet::new();
        for tuple in tuples {
            validate_tuple(&tuple, n, depth, m)?;
            if !set.insert(tuple.clone()) {
                return Err(Error::input(format!(
                    "tuple {} is listed twice",
                    render_tuple(&tuple)
                )));
            }
        }
        Ok(NaryRelation {
            n,
            depth,
            m,
            tuples: set,
        })
    }

    /// A fresh relation before any removals; tuples are plain vertex
    /// tuples.
    pub fn depth_zero(
        n: usize,
        m: usize,
        tuples: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<NaryRelation> {
        NaryRelation::new(
            n,
            0,
            m,
            tuples
                .into_iter()
                .map(|t| t.into_iter().map(Entry::Vertex).collect()),
        )
    }

    pub fn empty(n: usize, depth: usize, m: usize) -> NaryRelation {
        NaryRelation {
            n,
            depth,
            m,
            tuples: BTreeSet::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertices(&self) -> usize {
        self.m
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Vec<Entry>> {
        self.tuples.iter()
    }

    pub fn tuple_count(&self) -> usize {
        self.tuples.len()
    }

    pub fn has_tuple(&self, tuple: &[Entry]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn with_tuple(&self, tuple: Vec<Entry>) -> Result<NaryRelation> {
        validate_tuple(&tuple, self.n, self.depth, self.m)?;
        if self.tuples.contains(&tuple) {
            return Err(Error::input(format!(
                "tuple {} is already present",
                render_tuple(&tuple)
            )));
        }
        let mut out = self.clone();
        out.tuples.insert(tuple);
        Ok(out)
    }

    pub fn without_tuple(&self, tuple: &[Entry]) -> Result<NaryRelation> {
        if !self.tuples.contains(tuple) {
            return Err(Error::input(format!(
                "tuple {} is not present",
                render_tuple(tuple)
            )));
        }
        let mut out = self.clone();
        out.tuples.remove(tuple);
        Ok(out)
    }

    pub fn relabel(&self, perm: &[usize]) -> Result<NaryRelation> {
        validate_permutation(perm, self.m)?;
        let tuples = self
            .tuples
            .iter()
            .map(|t| {
                t.iter()
                    .map(|e| match e {
                        Entry::Vertex(v) => Entry::Vertex(perm[*v]),
                        keep => *keep,
                    })
                    .collect()
            })
            .collect();
        Ok(NaryRelation {
            n: self.n,
            depth: self.depth,
            m: self.m,
            tuples,
        })
    }

    /// Canonical human-readable form of the tuple set, used in terminal
    /// atom names.
    pub fn digest(&self) -> String {
        let mut out = String::from("{");
        let _ = write!(out, "{}", self.tuples.iter().map(|t| render_tuple(t)).join(";"));
        out.push('}');
        out
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "relation n={} r={}", self.n, self.m);
        for tuple in &self.tuples {
            let _ = writeln!(out, "tuple {}", tuple.iter().map(Entry::render).join(" "));
        }
        out
    }

    fn assert_valid(self) -> Result<NaryRelation> {
        for tuple in &self.tuples {
            validate_tuple(tuple, self.n, self.depth, self.m)
                .map_err(|e| Error::internal(format!("link produced an invalid tuple: {e}")))?;
        }
        Ok(self)
    }
}

impl fmt::Display for NaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl ShellObject for NaryRelation {
    fn vertex_count(&self) -> usize {
        self.m
    }

    fn terminal_atom(&self) -> Option<Atom> {
        if self.depth == self.n || self.m == 0 {
            Some(Atom::expect(&format!("rel:{}", self.digest())))
        } else {
            None
        }
    }

    fn link_at(&self, v: usize) -> Result<Self> {
        if self.depth == self.n {
            return Err(Error::input(format!(
                "the relation is already at depth {}; links stop at the arity",
                self.n
            )));
        }
        if v >= self.m {
            return Err(Error::input(format!(
                "link vertex {v} out of range for {} vertices",
                self.m
            )));
        }
        let next = self.depth + 1;
        let mut tuples = BTreeSet::new();
        for tuple in &self.tuples {
            let image: Vec<Entry> = tuple
                .iter()
                .map(|e| match e {
                    Entry::Vertex(w) if *w == v => Entry::Placeholder(next),
                    Entry::Vertex(w) => Entry::Vertex(shift_past(*w, v)),
                    keep => *keep,
                })
                .collect();
            let occurrences = image
                .iter()
                .filter(|e| matches!(e, Entry::Placeholder(_)))
                .count();
            if occurrences >= next {
                tuples.insert(image);
            }
        }
        NaryRelation {
            n: self.n,
            depth: next,
            m: self.m - 1,
            tuples,
        }
        .assert_valid()
    }

    fn without(&self, v: usize) -> Result<Self> {
        if v >= self.m {
            return Err(Error::input(format!(
                "vertex {v} out of range for {} vertices",
                self.m
            )));
        }
        let tuples = self
            .tuples
            .iter()
            .filter(|t| !tuple_support(t).contains(&v))
            .map(|t| {
                t.iter()
                    .map(|e| match e {
                        Entry::Vertex(w) => Entry::Vertex(shift_past(*w, v)),
                        keep => *keep,
                    })
                    .collect()
            })
            .collect();
        Ok(NaryRelation {
            n: self.n,
            depth: self.depth,
            m: self.m - 1,
            tuples,
        })
    }

    fn space_key(&self) -> LinkSpaceKey {
        LinkSpaceKey::Relation {
            n: self.n,
            depth: self.depth,
            m: self.m,
        }
    }
}

/// A single addition or removal of one tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChangeDirection {
    Add,
    Remove,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SimpleChange {
    pub direction: ChangeDirection,
    pub tuple: Vec<Entry>,
}

impl SimpleChange {
    pub fn apply(&self, relation: &NaryRelation) -> Result<NaryRelation> {
        match self.direction {
            ChangeDirection::Add => relation.with_tuple(self.tuple.clone()),
            ChangeDirection::Remove => relation.without_tuple(&self.tuple),
        }
    }
}

/// Every tuple legal at shape (n, depth, m), in canonical order.
pub fn chain_valid_tuples(n: usize, depth: usize, m: usize) -> Vec<Vec<Entry>> {
    let mut alphabet: Vec<Entry> = (0..m).map(Entry::Vertex).collect();
    alphabet.extend((1..=depth).map(Entry::Placeholder));
    (0..n)
        .map(|_| alphabet.iter().copied())
        .multi_cartesian_product()
        .filter(|t| validate_tuple(t, n, depth, m).is_ok())
        .collect()
}

/// The all-placeholder tuples the depth-n symbols are founded on.
pub fn admissible_base_tuples(n: usize) -> Vec<Vec<Entry>> {
    chain_valid_tuples(n, n, 0)
}

/// A finite group given by its Cayley table; validated on construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupTable {
    order: usize,
    identity: usize,
    table: Vec<Vec<usize>>,
}

impl GroupTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<GroupTable> {
        let m = table.len();
        if m == 0 {
            return Err(Error::input("a group table needs at least one element".to_string()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != m {
                return Err(Error::input(format!(
                    "row {i} has {} entries, expected {m}",
                    row.len()
                )));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= m) {
                return Err(Error::input(format!(
                    "row {i} contains {x}, outside 0..{m}"
                )));
            }
        }
        for (i, row) in table.iter().enumerate() {
            let mut seen = vec![false; m];
            for &x in row {
                if seen[x] {
                    return Err(Error::input(format!("row {i} repeats element {x}")));
                }
                seen[x] = true;
            }
        }
        for c in 0..m {
            let mut seen = vec![false; m];
            for row in &table {
                let x = row[c];
                if seen[x] {
                    return Err(Error::input(format!("column {c} repeats element {x}")));
                }
                seen[x] = true;
            }
        }
        let identity = (0..m)
            .find(|&e| (0..m).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::input("no identity element".to_string()))?;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let left = table[table[a][b]][c];
                    let right = table[a][table[b][c]];
                    if left != right {
                        return Err(Error::input(format!(
                            "associativity fails at ({a},{b},{c}): ({a}*{b})*{c} = {left} but {a}*({b}*{c}) = {right}"
                        )));
                    }
                }
            }
        }
        Ok(GroupTable {
            order: m,
            identity,
            table,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// The ternary relation whose tuples (a, b, c) solve a*b = c.
    pub fn relation(&self) -> NaryRelation {
        let tuples = (0..self.order)
            .cartesian_product(0..self.order)
            .map(|(a, b)| vec![a, b, self.table[a][b]]);
        NaryRelation::depth_zero(3, self.order, tuples)
            .expect("a validated group table yields a valid relation")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "group r={}", self.order);
        for row in &self.table {
            let _ = writeln!(out, "row {}", row.iter().join(" "));
        }
        out
    }
}

pub fn cyclic_group(m: usize) -> Result<GroupTable> {
    if m == 0 {
        return Err(Error::input("a group has at least one element".to_string()));
    }
    let table = (0..m)
        .map(|a| (0..m).map(|b| (a + b) % m).collect())
        .collect();
    Ok(GroupTable::new(table).expect("cyclic tables are groups"))
}

pub fn klein_group() -> GroupTable {
    let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    GroupTable::new(table).expect("the xor table is a group")
}

/// The group catalogue at desk scale, with conventional names.
pub fn groups_of_order(m: usize) -> Result<Vec<(String, GroupTable)>> {
    match m {
        0 => Err(Error::input("a group has at least one element".to_string())),
        1..=3 => Ok(vec![(format!("Z{m}"), cyclic_group(m)?)]),
        4 => Ok(vec![
            ("Z4".to_string(), cyclic_group(4)?),
            ("V4".to_string(), klein_group()),
        ]),
        _ => Err(Error::resource(format!(
            "the group catalogue covers orders 1 through 4, not {m}"
        ))),
    }
}
