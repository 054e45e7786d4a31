//! Shelling and flag vector engines over abstract vertex-and-cell objects.
//!
//! Both vectors are sums over all orderings of the vertex set.  Removing
//! the vertices in order peels off one link per step; the shelling vector
//! tensors the links' own shelling vectors together, while the flag
//! vector first projects each link's flag vector into the quotient space
//! for links of that shape.  The engines are generic over
//! [`ShellObject`], so graphs, decorated graphs and relations share one
//! implementation and one pair of methods:
//!
//! * `SubsetDp` memoizes over restrictions.  Restrictions re-index their
//!   vertices, so equal restrictions collapse and the r! ordering sum
//!   becomes a subset recursion.
//! * `Naive` enumerates the orderings literally and recurses naively into
//!   every link.  It shares no code path with the memoized engine beyond
//!   the object trait, which is what makes it a useful oracle.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::atom::Atom;
use crate::algebra::vector::FormalVector;
use crate::error::Result;

/// Identifies the quotient space that link contributions of one shape of
/// object project into.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LinkSpaceKey {
    IGraph { i: usize, m: usize },
    Oriented { i: usize, m: usize },
    /// Boundary labels grow by one letter per link step, so spaces of
    /// labelled graphs are keyed by label length as well.
    Boundary { i: usize, depth: usize, m: usize },
    Relation { n: usize, depth: usize, m: usize },
}

impl LinkSpaceKey {
    /// File stem used by the on-disk cache.
    pub fn file_stem(&self) -> String {
        match self {
            LinkSpaceKey::IGraph { i, m } => format!("igraph-{i}-{m}"),
            LinkSpaceKey::Oriented { i, m } => format!("origraph-{i}-{m}"),
            LinkSpaceKey::Boundary { i, depth, m } => format!("bgraph-{i}-{depth}-{m}"),
            LinkSpaceKey::Relation { n, depth, m } => format!("relation-{n}-{depth}-{m}"),
        }
    }
}

impl fmt::Display for LinkSpaceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkSpaceKey::IGraph { i, m } => write!(f, "igraph i={i} m={m}"),
            LinkSpaceKey::Oriented { i, m } => write!(f, "origraph i={i} m={m}"),
            LinkSpaceKey::Boundary { i, depth, m } => {
                write!(f, "bgraph i={i} d={depth} m={m}")
            }
            LinkSpaceKey::Relation { n, depth, m } => {
                write!(f, "relation n={n} d={depth} m={m}")
            }
        }
    }
}

/// A finite object the ordering recursion applies to.
///
/// Restrictions and links re-index their vertices as `0..m` by increasing
/// original label, so values of this type compare structurally and equal
/// restrictions reached along different orderings coincide.
pub trait ShellObject: Clone + Ord + Sized {
    /// Number of live vertices.
    fn vertex_count(&self) -> usize;
    /// The atomic symbol of a terminal object.  Terminal objects never
    /// recurse; their flag and shelling vectors are the one-slot word of
    /// this atom.
    fn terminal_atom(&self) -> Option<Atom>;
    /// The link of vertex `v`: an object one level down living on the
    /// remaining vertices.
    fn link_at(&self, v: usize) -> Result<Self>;
    /// The restriction dropping vertex `v`.
    fn without(&self, v: usize) -> Result<Self>;
    /// Key of the quotient space this object's flag vector projects into
    /// when the object appears as a link.
    fn space_key(&self) -> LinkSpaceKey;
}

/// Source of quotient projections, resolved by key.
pub trait SpaceProvider {
    fn project(&self, key: &LinkSpaceKey, v: &FormalVector) -> Result<FormalVector>;
}

/// Projects every vector to itself.  Flag vectors computed against it
/// coincide with shelling vectors, which several tests exploit.
pub struct IdentityProvider;

impl SpaceProvider for IdentityProvider {
    fn project(&self, _key: &LinkSpaceKey, v: &FormalVector) -> Result<FormalVector> {
        Ok(v.clone())
    }
}

/// Evaluation strategy; both return identical vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Literal sum over all vertex orderings, recursing naively.
    Naive,
    /// Memoized subset recursion over restrictions.
    SubsetDp,
}

/// The shelling vector: links contribute their own shelling vectors.
pub fn shelling_vector<O: ShellObject>(g: &O, method: Method) -> Result<FormalVector> {
    match method {
        Method::SubsetDp => ShellEngine { chain: BTreeMap::new() }.public(g),
        Method::Naive => naive_vector(g, &RawLinks),
    }
}

/// The flag vector: links contribute the residues of their flag vectors
/// in the quotient spaces named by their keys.
pub fn flag_vector<O, P>(g: &O, spaces: &P, method: Method) -> Result<FormalVector>
where
    O: ShellObject,
    P: SpaceProvider + ?Sized,
{
    match method {
        Method::SubsetDp => FlagEngine {
            spaces,
            chain: BTreeMap::new(),
            residues: BTreeMap::new(),
        }
        .public(g),
        Method::Naive => naive_vector(g, &ProjectedLinks { spaces }),
    }
}

struct ShellEngine<O: ShellObject> {
    chain: BTreeMap<O, FormalVector>,
}

impl<O: ShellObject> ShellEngine<O> {
    fn public(&mut self, g: &O) -> Result<FormalVector> {
        if let Some(atom) = g.terminal_atom() {
            return Ok(FormalVector::atom(atom));
        }
        self.chain(g)
    }

    /// Value of `g` as a tail of the removal chain: the chain ends with
    /// the empty tensor, even for objects whose standalone vector is an
    /// atom.
    fn chain(&mut self, g: &O) -> Result<FormalVector> {
        if g.vertex_count() == 0 {
            return Ok(FormalVector::one());
        }
        if let Some(v) = self.chain.get(g) {
            return Ok(v.clone());
        }
        let mut total = FormalVector::zero();
        for v in 0..g.vertex_count() {
            let link = self.public(&g.link_at(v)?)?;
            let rest = self.chain(&g.without(v)?)?;
            total = &total + &link.tensor(&rest);
        }
        self.chain.insert(g.clone(), total.clone());
        Ok(total)
    }
}

struct FlagEngine<'a, O: ShellObject, P: SpaceProvider + ?Sized> {
    spaces: &'a P,
    chain: BTreeMap<O, FormalVector>,
    residues: BTreeMap<O, FormalVector>,
}

impl<O: ShellObject, P: SpaceProvider + ?Sized> FlagEngine<'_, O, P> {
    fn public(&mut self, g: &O) -> Result<FormalVector> {
        if let Some(atom) = g.terminal_atom() {
            return Ok(FormalVector::atom(atom));
        }
        self.chain(g)
    }

    fn residue(&mut self, link: &O) -> Result<FormalVector> {
        if let Some(v) = self.residues.get(link) {
            return Ok(v.clone());
        }
        let flag = self.public(link)?;
        let residue = self.spaces.project(&link.space_key(), &flag)?;
        self.residues.insert(link.clone(), residue.clone());
        Ok(residue)
    }

    fn chain(&mut self, g: &O) -> Result<FormalVector> {
        if g.vertex_count() == 0 {
            return Ok(FormalVector::one());
        }
        if let Some(v) = self.chain.get(g) {
            return Ok(v.clone());
        }
        let mut total = FormalVector::zero();
        for v in 0..g.vertex_count() {
            let contribution = self.residue(&g.link_at(v)?)?;
            let rest = self.chain(&g.without(v)?)?;
            total = &total + &contribution.tensor(&rest);
        }
        self.chain.insert(g.clone(), total.clone());
        Ok(total)
    }
}

/// How the naive engine turns a link into its slot contribution.
trait LinkContribution<O: ShellObject> {
    fn contribute(&self, link: &O) -> Result<FormalVector>;
}

struct RawLinks;

impl<O: ShellObject> LinkContribution<O> for RawLinks {
    fn contribute(&self, link: &O) -> Result<FormalVector> {
        naive_vector(link, self)
    }
}

struct ProjectedLinks<'a, P: SpaceProvider + ?Sized> {
    spaces: &'a P,
}

impl<O: ShellObject, P: SpaceProvider + ?Sized> LinkContribution<O> for ProjectedLinks<'_, P> {
    fn contribute(&self, link: &O) -> Result<FormalVector> {
        let flag = naive_vector(link, self)?;
        self.spaces.project(&link.space_key(), &flag)
    }
}

/// Literal ordering sum.  Orderings are permutations of the original
/// labels; because restrictions re-index, the current index of an
/// original label drops by one for each earlier-removed smaller label.
fn naive_vector<O, C>(g: &O, links: &C) -> Result<FormalVector>
where
    O: ShellObject,
    C: LinkContribution<O> + ?Sized,
{
    if let Some(atom) = g.terminal_atom() {
        return Ok(FormalVector::atom(atom));
    }
    let r = g.vertex_count();
    if r == 0 {
        return Ok(FormalVector::one());
    }
    let mut total = FormalVector::zero();
    for perm in (0..r).permutations(r) {
        let mut term = FormalVector::one();
        let mut obj = g.clone();
        for (step, &orig) in perm.iter().enumerate() {
            let cur = orig - perm[..step].iter().filter(|&&e| e < orig).count();
            let link = obj.link_at(cur)?;
            term = term.tensor(&links.contribute(&link)?);
            obj = obj.without(cur)?;
        }
        total = &total + &term;
    }
    Ok(total)
}

fn factorial(k: usize) -> BigInt {
    let mut out = BigInt::one();
    for j in 2..=k {
        out *= BigInt::from(j);
    }
    out
}

/// Coefficient sum of the shelling vector of any i-graph on r vertices:
/// S(0, m) = 1 and S(i, r) = r! * prod over j of S(i-1, r-j), independent
/// of the cell set because link vertex counts depend only on the step.
pub fn igraph_ordering_count(i: usize, r: usize) -> BigInt {
    if i == 0 {
        return BigInt::one();
    }
    let mut total = factorial(r);
    for j in 1..=r {
        total *= igraph_ordering_count(i - 1, r - j);
    }
    total
}

/// The relation analogue: links raise the depth instead of lowering a
/// dimension, and the recursion terminates at depth n or at no vertices.
pub fn relation_ordering_count(n: usize, depth: usize, m: usize) -> BigInt {
    if depth >= n || m == 0 {
        return BigInt::one();
    }
    let mut total = factorial(m);
    for j in 1..=m {
        total *= relation_ordering_count(n, depth + 1, m - j);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use std::sync::Mutex;

    use crate::algebra::atom::{atom_a, atom_b, Word};
    use crate::algebra::vector::rat;
    use crate::error::Error;

    /// Minimal 1-graph tower for exercising the engines without the full
    /// graph module: cells are single vertices, links are 0-graphs.
    #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
    enum Toy {
        Zero { full: bool, r: usize },
        One { r: usize, cells: BTreeSet<usize> },
    }

    impl ShellObject for Toy {
        fn vertex_count(&self) -> usize {
            match self {
                Toy::Zero { r, .. } | Toy::One { r, .. } => *r,
            }
        }

        fn terminal_atom(&self) -> Option<Atom> {
            match self {
                Toy::Zero { full: false, .. } => Some(atom_a()),
                Toy::Zero { full: true, .. } => Some(atom_b()),
                Toy::One { .. } => None,
            }
        }

        fn link_at(&self, v: usize) -> Result<Self> {
            match self {
                Toy::Zero { .. } => Err(Error::input("0-graphs have no links".to_string())),
                Toy::One { r, cells } => Ok(Toy::Zero {
                    full: cells.contains(&v),
                    r: r - 1,
                }),
            }
        }

        fn without(&self, v: usize) -> Result<Self> {
            match self {
                Toy::Zero { .. } => Err(Error::internal("restricting a 0-graph".to_string())),
                Toy::One { r, cells } => Ok(Toy::One {
                    r: r - 1,
                    cells: cells
                        .iter()
                        .filter(|&&c| c != v)
                        .map(|&c| if c > v { c - 1 } else { c })
                        .collect(),
                }),
            }
        }

        fn space_key(&self) -> LinkSpaceKey {
            match self {
                Toy::Zero { r, .. } => LinkSpaceKey::IGraph { i: 0, m: *r },
                Toy::One { r, .. } => LinkSpaceKey::IGraph { i: 1, m: *r },
            }
        }
    }

    fn one_graph(r: usize, cells: &[usize]) -> Toy {
        Toy::One {
            r,
            cells: cells.iter().copied().collect(),
        }
    }

    fn word(names: &str) -> Word {
        Word::parse(names).unwrap()
    }

    #[test]
    fn cell_free_pair_gives_twice_aa() {
        for method in [Method::Naive, Method::SubsetDp] {
            let v = shelling_vector(&one_graph(2, &[]), method).unwrap();
            assert_eq!(v, FormalVector::monomial(word("a|a"), rat(2)));
        }
    }

    #[test]
    fn one_cell_pair_gives_ab_plus_ba() {
        for method in [Method::Naive, Method::SubsetDp] {
            let v = shelling_vector(&one_graph(2, &[0]), method).unwrap();
            let mut expected = FormalVector::monomial(word("a|b"), rat(1));
            expected.add_term(word("b|a"), rat(1));
            assert_eq!(v, expected);
        }
    }

    #[test]
    fn empty_object_yields_the_scalar() {
        let v = shelling_vector(&one_graph(0, &[]), Method::SubsetDp).unwrap();
        assert_eq!(v, FormalVector::one());
        assert_eq!(v.to_text(), "flagvec-vector v1\nterm 1/1 -\n");
    }

    #[test]
    fn methods_agree_on_all_three_vertex_cell_sets() {
        for mask in 0u32..8 {
            let cells: Vec<usize> = (0..3).filter(|&c| mask & (1 << c) != 0).collect();
            let g = one_graph(3, &cells);
            let naive = shelling_vector(&g, Method::Naive).unwrap();
            let dp = shelling_vector(&g, Method::SubsetDp).unwrap();
            assert_eq!(naive, dp);
            let fn_ = flag_vector(&g, &IdentityProvider, Method::Naive).unwrap();
            let fd = flag_vector(&g, &IdentityProvider, Method::SubsetDp).unwrap();
            assert_eq!(fn_, fd);
            // one-vertex cells make links 0-graphs, so identity-projected
            // flags equal shellings
            assert_eq!(fn_, naive);
        }
    }

    #[test]
    fn flag_requests_the_link_keys_of_each_step() {
        struct Recording {
            seen: Mutex<BTreeSet<LinkSpaceKey>>,
        }
        impl SpaceProvider for Recording {
            fn project(&self, key: &LinkSpaceKey, v: &FormalVector) -> Result<FormalVector> {
                self.seen.lock().unwrap().insert(key.clone());
                Ok(v.clone())
            }
        }
        let provider = Recording {
            seen: Mutex::new(BTreeSet::new()),
        };
        flag_vector(&one_graph(3, &[1]), &provider, Method::SubsetDp).unwrap();
        let seen = provider.seen.into_inner().unwrap();
        let expected: BTreeSet<LinkSpaceKey> = (0..3)
            .map(|m| LinkSpaceKey::IGraph { i: 0, m })
            .collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn ordering_counts_match_hand_values() {
        assert_eq!(igraph_ordering_count(0, 7), BigInt::from(1));
        for r in 0..6 {
            assert_eq!(igraph_ordering_count(1, r), factorial(r));
        }
        assert_eq!(igraph_ordering_count(2, 3), BigInt::from(12));
        assert_eq!(relation_ordering_count(3, 3, 5), BigInt::from(1));
        assert_eq!(relation_ordering_count(3, 0, 1), BigInt::from(1));
        assert_eq!(relation_ordering_count(3, 0, 2), BigInt::from(2));
    }

    #[test]
    fn shelling_coefficient_sum_is_cell_independent() {
        for mask in 0u32..16 {
            let cells: Vec<usize> = (0..4).filter(|&c| mask & (1 << c) != 0).collect();
            let v = shelling_vector(&one_graph(4, &cells), Method::SubsetDp).unwrap();
            assert_eq!(
                v.coefficient_sum(),
                igraph_ordering_count(1, 4).into()
            );
        }
    }
}
