//! Deterministic quotient spaces with named coordinates.
//!
//! A [`QuotientSpace`] answers one question: given a vector in some
//! ambient of basis words, what is its residue modulo a span of generator
//! vectors, expressed over named coordinate atoms?  Residues are what the
//! flag-vector recursion tensors together, so the coordinates must be
//! atoms and the whole construction must be reproducible.
//!
//! Two coordinate models are used:
//!
//! * **Span**: the quotient of the span of a known family of realizable
//!   vectors by the generator span.  Coordinates come from the row
//!   echelon form of the residues of the family span, optionally followed
//!   by a change of basis that yields the pretty `a`, `b`-style names.
//!   Projection rejects vectors outside the family span (that would be an
//!   internal error: exhaustive families cover every link that can occur).
//! * **Word**: the quotient of the full word space by the generator span.
//!   Every non-pivot word is its own coordinate; words never seen during
//!   construction pass through untouched.  This is the model for budgeted
//!   generator families, where the quotient is an upper approximation of
//!   the true space (fewer relations, larger quotient).

use std::fmt::Write as _;

use num_traits::{One, Zero};
use sha2::{Digest, Sha256};

use crate::algebra::atom::{Atom, Word};
use crate::algebra::rref::Rref;
use crate::algebra::vector::{parse_rational, render_rational, FormalVector, Rational};
use crate::error::{Error, Result};

pub const SPACE_HEADER: &str = "flagvec-space v1";

/// Small dense square matrix over the rationals; just enough for the
/// pretty-basis change of coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub n: usize,
    /// Row-major entries.
    pub rows: Vec<Vec<Rational>>,
}

impl Mat {
    pub fn from_columns(columns: &[Vec<Rational>]) -> Mat {
        let n = columns.len();
        let rows = (0..n)
            .map(|i| columns.iter().map(|col| col[i].clone()).collect())
            .collect();
        Mat { n, rows }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| {
                let mut sum = Rational::zero();
                for (a, b) in row.iter().zip(v) {
                    sum += a.clone() * b;
                }
                sum
            })
            .collect()
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        let n = self.n;
        let mut work: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut extended = row.clone();
                extended.extend((0..n).map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }));
                extended
            })
            .collect();
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !work[r][col].is_zero())?;
            work.swap(col, pivot_row);
            let lead = work[col][col].clone();
            for entry in work[col].iter_mut() {
                *entry /= lead.clone();
            }
            for r in 0..n {
                if r != col {
                    let factor = work[r][col].clone();
                    if !factor.is_zero() {
                        for c in 0..2 * n {
                            let sub = factor.clone() * work[col][c].clone();
                            work[r][c] -= sub;
                        }
                    }
                }
            }
        }
        let rows = work.into_iter().map(|row| row[n..].to_vec()).collect();
        Some(Mat { n, rows })
    }
}

/// How coordinates of the quotient are derived; see the module docs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceModel {
    Span {
        /// Echelon basis of the residues of the realizable span.
        image: Rref,
        /// Coordinate names, parallel to the quotient basis.
        names: Vec<Atom>,
        /// When present, applied to image coordinates to express residues
        /// in the pretty basis the names refer to.
        pretty_inverse: Option<Mat>,
    },
    Word {
        /// Materialized ambient words that are not generator pivots, sorted.
        nonpivot: Vec<Word>,
        /// When present, projection rejects input words outside this set.
        declared: Option<Vec<Word>>,
        /// Name prefix for coordinates that are not single atoms.
        prefix: String,
    },
}

/// Budget bookkeeping for spaces built from a truncated generator family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetMeta {
    pub max_relations: usize,
    pub rank_window: usize,
    pub enumerated: usize,
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMeta {
    /// `exhaustive` or `budgeted`.
    pub policy: String,
    /// Objects enumerated while collecting generators.
    pub family_size: usize,
    /// Distinct basis words materialized during construction.
    pub ambient_words: usize,
    /// Rank of the realizable span (span model only).
    pub realizable_rank: Option<usize>,
    pub budget: Option<BudgetMeta>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    /// Human-readable key this space was built for; cache file stem.
    pub key_label: String,
    /// Generator span in reduced row echelon form.
    pub generators: Rref,
    pub model: SpaceModel,
    pub meta: SpaceMeta,
}

fn word_digest(word: &Word) -> String {
    let hash = Sha256::digest(word.render().as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

impl QuotientSpace {
    /// Number of quotient coordinates (for the word model: materialized so
    /// far; unseen words would each add one more).
    pub fn dimension(&self) -> usize {
        match &self.model {
            SpaceModel::Span { names, .. } => names.len(),
            SpaceModel::Word { nonpivot, .. } => nonpivot.len(),
        }
    }

    /// Coordinate names in basis order.
    pub fn basis_names(&self) -> Vec<Atom> {
        match &self.model {
            SpaceModel::Span { names, .. } => names.clone(),
            SpaceModel::Word { nonpivot, prefix, .. } => nonpivot
                .iter()
                .map(|w| name_for_word(w, nonpivot, prefix))
                .collect(),
        }
    }

    /// Residue of `v` expressed over named coordinate atoms.
    pub fn project(&self, v: &FormalVector) -> Result<FormalVector> {
        match &self.model {
            SpaceModel::Span {
                image,
                names,
                pretty_inverse,
            } => {
                let residue = self.generators.reduce(v);
                let coords = image.coordinates(&residue).map_err(|_| {
                    Error::internal(format!(
                        "projection into {} of a vector outside the realizable span",
                        self.key_label
                    ))
                })?;
                let coords = match pretty_inverse {
                    Some(m) => m.mul_vec(&coords),
                    None => coords,
                };
                let mut out = FormalVector::zero();
                for (name, c) in names.iter().zip(coords) {
                    out.add_term(Word::atom(name.clone()), c);
                }
                Ok(out)
            }
            SpaceModel::Word {
                nonpivot,
                declared,
                prefix,
            } => {
                if let Some(declared) = declared {
                    for w in v.words() {
                        if declared.binary_search(w).is_err() {
                            return Err(Error::input(format!(
                                "word {} is not in the ambient of {}",
                                w.render(),
                                self.key_label
                            )));
                        }
                    }
                }
                let residue = self.generators.reduce(v);
                let mut out = FormalVector::zero();
                for (w, c) in residue.terms() {
                    let name = name_for_word(w, nonpivot, prefix);
                    out.add_term(Word::atom(name), c.clone());
                }
                Ok(out)
            }
        }
    }

    /// Text payload for the on-disk cache; exact round trip.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{SPACE_HEADER}");
        let _ = writeln!(out, "key {}", self.key_label);
        let _ = writeln!(out, "policy {}", self.meta.policy);
        let _ = writeln!(out, "family {}", self.meta.family_size);
        let _ = writeln!(out, "ambient-words {}", self.meta.ambient_words);
        if let Some(rank) = self.meta.realizable_rank {
            let _ = writeln!(out, "realizable-rank {rank}");
        }
        if let Some(b) = &self.meta.budget {
            let _ = writeln!(
                out,
                "budget {} {} {} {}",
                b.max_relations, b.rank_window, b.enumerated, b.exhausted
            );
        }
        let _ = writeln!(out, "generators {}", self.generators.rank());
        for (_, row) in self.generators.rows() {
            let _ = writeln!(out, "gen {}", render_row(row));
        }
        match &self.model {
            SpaceModel::Span {
                image,
                names,
                pretty_inverse,
            } => {
                let _ = writeln!(out, "model span");
                let _ = writeln!(out, "image {}", image.rank());
                for (_, row) in image.rows() {
                    let _ = writeln!(out, "img {}", render_row(row));
                }
                for name in names {
                    let _ = writeln!(out, "name {name}");
                }
                if let Some(m) = pretty_inverse {
                    let _ = writeln!(out, "pretty {}", m.n);
                    for row in &m.rows {
                        let entries: Vec<String> = row.iter().map(render_rational).collect();
                        let _ = writeln!(out, "prow {}", entries.join(" "));
                    }
                }
            }
            SpaceModel::Word {
                nonpivot,
                declared,
                prefix,
            } => {
                let _ = writeln!(out, "model word");
                let _ = writeln!(out, "prefix {prefix}");
                for w in nonpivot {
                    let _ = writeln!(out, "nonpivot {}", w.render());
                }
                if let Some(declared) = declared {
                    for w in declared {
                        let _ = writeln!(out, "declared {}", w.render());
                    }
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<QuotientSpace> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(SPACE_HEADER) {
            return Err(Error::input(format!("expected header {SPACE_HEADER:?}")));
        }
        let mut key_label = String::new();
        let mut policy = String::new();
        let mut family_size = 0usize;
        let mut ambient_words = 0usize;
        let mut realizable_rank = None;
        let mut budget = None;
        let mut generators = Rref::new();
        let mut model_tag = String::new();
        let mut image = Rref::new();
        let mut names = Vec::new();
        let mut pretty: Option<Vec<Vec<Rational>>> = None;
        let mut prefix = String::new();
        let mut nonpivot = Vec::new();
        let mut declared: Option<Vec<Word>> = None;
        for line in lines {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let (tag, rest) = line
                .split_once(' ')
                .ok_or_else(|| Error::input(format!("malformed space line {line:?}")))?;
            match tag {
                "key" => key_label = rest.to_string(),
                "policy" => policy = rest.to_string(),
                "family" => family_size = parse_usize(rest)?,
                "ambient-words" => ambient_words = parse_usize(rest)?,
                "realizable-rank" => realizable_rank = Some(parse_usize(rest)?),
                "budget" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() != 4 {
                        return Err(Error::input(format!("malformed budget line {line:?}")));
                    }
                    budget = Some(BudgetMeta {
                        max_relations: parse_usize(parts[0])?,
                        rank_window: parse_usize(parts[1])?,
                        enumerated: parse_usize(parts[2])?,
                        exhausted: parts[3] == "true",
                    });
                }
                "generators" | "image" => {}
                "gen" => {
                    generators.insert(&parse_row(rest)?);
                }
                "model" => model_tag = rest.to_string(),
                "img" => {
                    image.insert(&parse_row(rest)?);
                }
                "name" => names.push(Atom::new(rest)?),
                "pretty" => pretty = Some(Vec::new()),
                "prow" => {
                    let row: Result<Vec<Rational>> =
                        rest.split_whitespace().map(parse_rational).collect();
                    pretty
                        .as_mut()
                        .ok_or_else(|| Error::input("prow before pretty".to_string()))?
                        .push(row?);
                }
                "prefix" => prefix = rest.to_string(),
                "nonpivot" => nonpivot.push(Word::parse(rest)?),
                "declared" => declared.get_or_insert_with(Vec::new).push(Word::parse(rest)?),
                _ => return Err(Error::input(format!("unknown space line tag {tag:?}"))),
            }
        }
        let model = match model_tag.as_str() {
            "span" => SpaceModel::Span {
                image,
                names,
                pretty_inverse: pretty.map(|rows| Mat { n: rows.len(), rows }),
            },
            "word" => SpaceModel::Word {
                nonpivot,
                declared,
                prefix,
            },
            other => return Err(Error::input(format!("unknown space model {other:?}"))),
        };
        Ok(QuotientSpace {
            key_label,
            generators,
            model,
            meta: SpaceMeta {
                policy,
                family_size,
                ambient_words,
                realizable_rank,
                budget,
            },
        })
    }
}

fn parse_usize(text: &str) -> Result<usize> {
    text.parse()
        .map_err(|_| Error::input(format!("invalid count {text:?}")))
}

fn render_row(v: &FormalVector) -> String {
    v.terms()
        .map(|(w, c)| format!("{} {}", render_rational(c), w.render()))
        .collect::<Vec<_>>()
        .join(" ; ")
}

fn parse_row(text: &str) -> Result<FormalVector> {
    let mut v = FormalVector::zero();
    for part in text.split(" ; ") {
        let (coeff, word) = part
            .split_once(' ')
            .ok_or_else(|| Error::input(format!("malformed row term {part:?}")))?;
        v.add_term(Word::parse(word)?, parse_rational(coeff)?);
    }
    Ok(v)
}

/// Name of the coordinate carried by a non-pivot word: a single atom keeps
/// its own name, a word in the materialized ambient gets an indexed name,
/// anything else is named by a content digest so the choice never depends
/// on evaluation order.
fn name_for_word(word: &Word, nonpivot: &[Word], prefix: &str) -> Atom {
    if let Some(atom) = word.as_single_atom() {
        return atom.clone();
    }
    if let Ok(k) = nonpivot.binary_search(word) {
        return Atom::expect(&format!("{prefix}:{k}"));
    }
    Atom::expect(&format!("{prefix}:w:{}", word_digest(word)))
}

/// Quotient of the span of an explicit ambient word list by the span of
/// `generators`.  Generators must live inside the ambient.  The empty
/// generator list yields the identity quotient.
pub fn build_quotient(ambient: &[Word], generators: &[FormalVector]) -> Result<QuotientSpace> {
    let mut declared: Vec<Word> = ambient.to_vec();
    declared.sort();
    declared.dedup();
    if declared.len() != ambient.len() {
        return Err(Error::input("ambient contains duplicate words".to_string()));
    }
    let mut gen_rref = Rref::new();
    for g in generators {
        for w in g.words() {
            if declared.binary_search(w).is_err() {
                return Err(Error::input(format!(
                    "generator word {} is not in the ambient",
                    w.render()
                )));
            }
        }
        gen_rref.insert(g);
    }
    let nonpivot: Vec<Word> = declared
        .iter()
        .filter(|w| !gen_rref.is_pivot(w))
        .cloned()
        .collect();
    let generator_rank = gen_rref.rank();
    Ok(QuotientSpace {
        key_label: "ambient".to_string(),
        generators: gen_rref,
        model: SpaceModel::Word {
            nonpivot,
            declared: Some(declared.clone()),
            prefix: "q:ambient".to_string(),
        },
        meta: SpaceMeta {
            policy: "exhaustive".to_string(),
            family_size: 0,
            ambient_words: declared.len(),
            realizable_rank: Some(declared.len() - generator_rank),
            budget: None,
        },
    })
}
