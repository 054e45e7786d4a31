//! Atomic symbols and the tensor words built from them.
//!
//! An [`Atom`] is an opaque symbol name: `a`, `b`, `b+`, `b-`, `bw:011`,
//! `rel:{...}` for terminal relation tuple-sets, or `q:...` for quotient
//! coordinates.  A [`Word`] is an ordered sequence of slots, each slot an
//! ordered sequence of atoms.  Tensor products concatenate slot lists, so
//! in practice every slot produced by this crate holds exactly one atom;
//! the serialization still round-trips the general shape.
//!
//! Text form: atoms within a slot are joined with `.`, slots with `|`,
//! and the empty word (the scalar basis element) is written `-`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Interned symbol name.  Ordering and equality follow the name string,
/// so vectors serialize in a stable order regardless of creation order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

/// Characters that would collide with the word serialization syntax.
fn valid_atom_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || c == '.' || c == '|')
        && name != "-"
}

impl Atom {
    /// Build an atom, rejecting names that could not be parsed back.
    pub fn new(name: &str) -> Result<Atom> {
        if !valid_atom_name(name) {
            return Err(Error::input(format!("invalid atom name {name:?}")));
        }
        Ok(Atom(Arc::from(name)))
    }

    /// Like [`Atom::new`] but for names assembled by the crate itself.
    pub(crate) fn expect(name: &str) -> Atom {
        Atom::new(name).expect("crate-generated atom name must be valid")
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Atom({})", self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The empty-cell atom of plain 0-graphs.
pub fn atom_a() -> Atom {
    Atom::expect("a")
}

/// The full-cell atom of plain 0-graphs.
pub fn atom_b() -> Atom {
    Atom::expect("b")
}

/// Signed 0-cell atoms of oriented graphs.
pub fn atom_b_signed(positive: bool) -> Atom {
    Atom::expect(if positive { "b+" } else { "b-" })
}

/// Labelled 0-cell atom `bw:<bits>` of graphs with boundary.
pub fn atom_b_labelled(label: &[bool]) -> Atom {
    let mut name = String::from("bw:");
    for &bit in label {
        name.push(if bit { '1' } else { '0' });
    }
    Atom::expect(&name)
}

/// One basis word of a tensor product: a list of slots, each a list of atoms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Vec<Atom>>);

impl Word {
    /// The empty word: identity of the tensor product, written `-`.
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// A one-slot word holding a single atom.
    pub fn atom(a: Atom) -> Word {
        Word(vec![vec![a]])
    }

    pub fn from_slots(slots: Vec<Vec<Atom>>) -> Word {
        Word(slots)
    }

    /// Concatenation of slot lists; the word-level tensor product.
    pub fn concat(&self, other: &Word) -> Word {
        let mut slots = self.0.clone();
        slots.extend(other.0.iter().cloned());
        Word(slots)
    }

    pub fn slots(&self) -> &[Vec<Atom>] {
        &self.0
    }

    pub fn slot_count(&self) -> usize {
        self.0.len()
    }

    pub fn atom_count(&self) -> usize {
        self.0.iter().map(|s| s.len()).sum()
    }

    /// Iterate over every atom in slot order.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter().flatten()
    }

    /// The atom of a one-slot, one-atom word, if the word has that shape.
    pub fn as_single_atom(&self) -> Option<&Atom> {
        match self.0.as_slice() {
            [slot] if slot.len() == 1 => Some(&slot[0]),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "-".to_string();
        }
        self.0
            .iter()
            .map(|slot| {
                slot.iter()
                    .map(Atom::name)
                    .collect::<Vec<_>>()
                    .join(".")
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn parse(text: &str) -> Result<Word> {
        if text == "-" {
            return Ok(Word::empty());
        }
        let mut slots = Vec::new();
        for slot_text in text.split('|') {
            let mut slot = Vec::new();
            for atom_text in slot_text.split('.') {
                slot.push(Atom::new(atom_text)?);
            }
            if slot.is_empty() {
                return Err(Error::input(format!("empty slot in word {text:?}")));
            }
            slots.push(slot);
        }
        Ok(Word(slots))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.render())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_names_reject_separator_characters() {
        assert!(Atom::new("a").is_ok());
        assert!(Atom::new("bw:011").is_ok());
        assert!(Atom::new("rel:{*1,*1,*1}").is_ok());
        assert!(Atom::new("a b").is_err());
        assert!(Atom::new("a.b").is_err());
        assert!(Atom::new("a|b").is_err());
        assert!(Atom::new("").is_err());
        assert!(Atom::new("-").is_err());
    }

    #[test]
    fn word_round_trip() {
        let w = Word::atom(atom_a()).concat(&Word::atom(atom_b()));
        assert_eq!(w.render(), "a|b");
        assert_eq!(Word::parse("a|b").unwrap(), w);
        assert_eq!(Word::parse("-").unwrap(), Word::empty());
        assert_eq!(Word::empty().render(), "-");
        let multi = Word::from_slots(vec![vec![atom_a(), atom_b()], vec![atom_a()]]);
        assert_eq!(multi.render(), "a.b|a");
        assert_eq!(Word::parse("a.b|a").unwrap(), multi);
    }

    #[test]
    fn words_order_by_atom_names() {
        let ab = Word::parse("a|b").unwrap();
        let ba = Word::parse("b|a").unwrap();
        let a = Word::parse("a").unwrap();
        assert!(ab < ba);
        assert!(a < ab);
        assert!(Word::empty() < a);
    }
}
