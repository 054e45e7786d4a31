//! Exact row reduction over basis words.
//!
//! [`Rref`] keeps a set of vectors in reduced row echelon form with
//! deterministic pivots: the pivot of each row is its lexicographically
//! least word, rows are stored by increasing pivot, every pivot coefficient
//! is 1 and no row touches another row's pivot.  Insertion order does not
//! affect the final row set, which is what makes quotient constructions
//! and cache contents reproducible.
//!
//! [`row_reduce`] is the flat interface over an explicit ambient word
//! list; [`TrackedRref`] additionally records how each echelon row was
//! combined from the input vectors, which yields exact kernel
//! certificates for the independence experiments.

use num_traits::{One, Zero};

use crate::algebra::atom::Word;
use crate::algebra::vector::{FormalVector, Rational};
use crate::error::{Error, Result};

/// Reduced row echelon form over sparse word-indexed vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rref {
    /// Rows sorted by pivot word; each row's coefficient at its pivot is 1.
    rows: Vec<(Word, FormalVector)>,
}

impl Rref {
    pub fn new() -> Rref {
        Rref::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Word, &FormalVector)> {
        self.rows.iter().map(|(p, v)| (p, v))
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Word> {
        self.rows.iter().map(|(p, _)| p)
    }

    pub fn is_pivot(&self, word: &Word) -> bool {
        self.rows.binary_search_by(|(p, _)| p.cmp(word)).is_ok()
    }

    /// Reduce `v` against the rows: the canonical coset representative of
    /// `v` modulo the row span.  Zero exactly when `v` lies in the span.
    pub fn reduce(&self, v: &FormalVector) -> FormalVector {
        let mut out = v.clone();
        for (pivot, row) in &self.rows {
            let c = out.coeff(pivot);
            if !c.is_zero() {
                out.add_scaled(row, &-c);
            }
        }
        out
    }

    /// Insert a vector, returning true when it enlarged the span.
    pub fn insert(&mut self, v: &FormalVector) -> bool {
        let mut v = self.reduce(v);
        if v.is_zero() {
            return false;
        }
        let pivot = v
            .words()
            .next()
            .expect("nonzero vector has a least word")
            .clone();
        let lead = v.coeff(&pivot);
        v = v.scale(&(Rational::one() / lead));
        // Back-substitute into existing rows so the form stays fully reduced.
        for (_, row) in self.rows.iter_mut() {
            let c = row.coeff(&pivot);
            if !c.is_zero() {
                row.add_scaled(&v, &-c);
            }
        }
        let at = self
            .rows
            .binary_search_by(|(p, _)| p.cmp(&pivot))
            .expect_err("pivot cannot already be present after reduction");
        self.rows.insert(at, (pivot, v));
        true
    }

    /// Coordinates of `v` over the echelon rows.  Errors when `v` is not in
    /// the row span; use [`Rref::reduce`] first if a remainder is expected.
    pub fn coordinates(&self, v: &FormalVector) -> Result<Vec<Rational>> {
        let mut rest = v.clone();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (pivot, row) in &self.rows {
            let c = rest.coeff(pivot);
            if !c.is_zero() {
                rest.add_scaled(row, &-c.clone());
            }
            coords.push(c);
        }
        if !rest.is_zero() {
            return Err(Error::internal(format!(
                "vector lies outside the span; remainder begins at word {}",
                rest.words().next().expect("nonzero").render()
            )));
        }
        Ok(coords)
    }

    /// Rebuild the vector with the given row coordinates.
    pub fn combine(&self, coords: &[Rational]) -> FormalVector {
        let mut out = FormalVector::zero();
        for ((_, row), c) in self.rows.iter().zip(coords) {
            out.add_scaled(row, c);
        }
        out
    }
}

/// Result of [`row_reduce`]: rank, pivot positions in the ambient list, and
/// the echelon rows themselves.
#[derive(Debug, Clone)]
pub struct RowReduction {
    pub rank: usize,
    /// Indices into the ambient list, one per echelon row, increasing.
    pub pivot_columns: Vec<usize>,
    pub rows: Vec<FormalVector>,
}

/// Row reduce `vectors` against an explicit ordered ambient.  The pivot
/// order is the ambient order, and any word outside the ambient is an
/// input error naming the word.
pub fn row_reduce(vectors: &[FormalVector], ambient: &[Word]) -> Result<RowReduction> {
    let index_of = |w: &Word| -> Result<usize> {
        ambient
            .iter()
            .position(|aw| aw == w)
            .ok_or_else(|| Error::input(format!("word {} is not in the ambient", w.render())))
    };
    // Dense echelon over ambient indices so the pivot order follows the
    // caller's ambient exactly, independent of word lexicography.
    let width = ambient.len();
    let mut dense_rows: Vec<(usize, Vec<Rational>)> = Vec::new();
    for v in vectors {
        let mut dense = vec![Rational::zero(); width];
        for (w, c) in v.terms() {
            dense[index_of(w)?] = c.clone();
        }
        for (pivot, row) in &dense_rows {
            let c = dense[*pivot].clone();
            if !c.is_zero() {
                for (d, r) in dense.iter_mut().zip(row) {
                    *d -= c.clone() * r;
                }
            }
        }
        if let Some(pivot) = dense.iter().position(|c| !c.is_zero()) {
            let lead = dense[pivot].clone();
            for d in dense.iter_mut() {
                *d /= lead.clone();
            }
            for (_, row) in dense_rows.iter_mut() {
                let c = row[pivot].clone();
                if !c.is_zero() {
                    for (r, d) in row.iter_mut().zip(&dense) {
                        *r -= c.clone() * d;
                    }
                }
            }
            dense_rows.push((pivot, dense));
            dense_rows.sort_by_key(|(p, _)| *p);
        }
    }
    let pivot_columns: Vec<usize> = dense_rows.iter().map(|(p, _)| *p).collect();
    let rows = dense_rows
        .iter()
        .map(|(_, dense)| {
            let mut v = FormalVector::zero();
            for (w, c) in ambient.iter().zip(dense) {
                v.add_term(w.clone(), c.clone());
            }
            v
        })
        .collect();
    Ok(RowReduction {
        rank: pivot_columns.len(),
        pivot_columns,
        rows,
    })
}

/// Echelon form that remembers, for every row, the exact combination of
/// input vectors it came from, and collects a kernel basis: for every
/// input that reduced to zero, the combination proving the dependency.
#[derive(Debug, Default)]
pub struct TrackedRref {
    rref: Rref,
    /// Combination coefficients over the inputs, parallel to `rref` rows.
    combos: Vec<Vec<Rational>>,
    inputs_seen: usize,
    /// Inputs that enlarged the span, in insertion order.
    creators: Vec<usize>,
    /// For each dependent input: coefficients over all inputs seen so far
    /// summing to the zero vector (the dependent input has coefficient 1).
    kernel: Vec<Vec<Rational>>,
}

impl TrackedRref {
    pub fn new() -> TrackedRref {
        TrackedRref::default()
    }

    pub fn rank(&self) -> usize {
        self.rref.rank()
    }

    pub fn kernel(&self) -> &[Vec<Rational>] {
        &self.kernel
    }

    /// Indices of inputs that formed new rows, i.e. one maximal
    /// independent subset of the inputs.
    pub fn independent_inputs(&self) -> Vec<usize> {
        self.creators.clone()
    }

    pub fn insert(&mut self, v: &FormalVector) -> bool {
        let idx = self.inputs_seen;
        self.inputs_seen += 1;
        let mut rest = v.clone();
        let mut combo = vec![Rational::zero(); idx + 1];
        combo[idx] = Rational::one();
        for ((pivot, row), row_combo) in self.rref.rows().zip(&self.combos) {
            let c = rest.coeff(pivot);
            if !c.is_zero() {
                rest.add_scaled(row, &-c.clone());
                for (slot, rc) in combo.iter_mut().zip(row_combo) {
                    *slot -= c.clone() * rc;
                }
            }
        }
        if rest.is_zero() {
            self.kernel.push(combo);
            return false;
        }
        self.creators.push(idx);
        let pivot = rest.words().next().expect("nonzero").clone();
        let lead = rest.coeff(&pivot);
        let inv = Rational::one() / lead;
        let row = rest.scale(&inv);
        let combo: Vec<Rational> = combo.into_iter().map(|c| c * inv.clone()).collect();
        // Keep full reduction so stored combos stay exact.
        let mut insert_at = self.rref.rows.len();
        for (i, (p, _)) in self.rref.rows.iter().enumerate() {
            if *p > pivot {
                insert_at = i;
                break;
            }
        }
        for ((_, existing), existing_combo) in
            self.rref.rows.iter_mut().zip(self.combos.iter_mut())
        {
            let c = existing.coeff(&pivot);
            if !c.is_zero() {
                existing.add_scaled(&row, &-c.clone());
                existing_combo.resize(idx + 1, Rational::zero());
                for (slot, rc) in existing_combo.iter_mut().zip(&combo) {
                    *slot -= c.clone() * rc;
                }
            }
        }
        self.rref.rows.insert(insert_at, (pivot, row));
        self.combos.insert(insert_at, combo);
        true
    }
}
