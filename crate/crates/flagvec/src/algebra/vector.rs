//! Sparse formal linear combinations of basis words over the exact
//! rationals, with the bilinear tensor product and the line-based text
//! serialization used by every tool in the crate.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::atom::{Atom, Word};
use crate::error::{Error, Result};

/// Exact arbitrary-precision rational scalar.  Always stored reduced with
/// a positive denominator; `num_rational` maintains both invariants.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Render as `<num>/<den>`, the form used in vector files and reports.
pub fn render_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `<num>/<den>` or a bare integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::input(format!("invalid numerator {num:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::input(format!("invalid denominator {den:?}")))?;
    if den.is_zero() {
        return Err(Error::input(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

pub const VECTOR_HEADER: &str = "flagvec-vector v1";

/// Finite formal sum of [`Word`]s with nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FormalVector {
    terms: BTreeMap<Word, Rational>,
}

impl FormalVector {
    pub fn zero() -> FormalVector {
        FormalVector::default()
    }

    /// The scalar 1: the empty word with coefficient one.  Identity of the
    /// tensor product and the value of every empty shelling sum.
    pub fn one() -> FormalVector {
        FormalVector::monomial(Word::empty(), Rational::one())
    }

    /// A single atom with coefficient one.
    pub fn atom(a: Atom) -> FormalVector {
        FormalVector::monomial(Word::atom(a), Rational::one())
    }

    pub fn monomial(word: Word, coeff: Rational) -> FormalVector {
        let mut v = FormalVector::zero();
        v.add_term(word, coeff);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, word: &Word) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    /// Add `coeff * word`, dropping the term if it cancels to zero.
    pub fn add_term(&mut self, word: Word, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &FormalVector, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone() * scale);
        }
    }

    pub fn scale(&self, scale: &Rational) -> FormalVector {
        let mut out = FormalVector::zero();
        out.add_scaled(self, scale);
        out
    }

    /// Bilinear tensor product; words multiply by slot concatenation, so
    /// the factors must use disjoint slot ranges (which concatenation
    /// guarantees by construction).
    pub fn tensor(&self, other: &FormalVector) -> FormalVector {
        let mut out = FormalVector::zero();
        for (wl, cl) in &self.terms {
            for (wr, cr) in &other.terms {
                out.add_term(wl.concat(wr), cl.clone() * cr.clone());
            }
        }
        out
    }

    /// Rename every atom in place, keeping slot structure and coefficients.
    pub fn map_atoms(&self, rename: impl Fn(&Atom) -> Atom) -> FormalVector {
        let mut out = FormalVector::zero();
        for (word, coeff) in &self.terms {
            let slots: Vec<Vec<Atom>> = word
                .slots()
                .iter()
                .map(|slot| slot.iter().map(&rename).collect())
                .collect();
            out.add_term(Word::from_slots(slots), coeff.clone());
        }
        out
    }

    /// Sum of all coefficients; equals evaluation at every atom mapped to 1.
    pub fn coefficient_sum(&self) -> Rational {
        let mut sum = Rational::zero();
        for c in self.terms.values() {
            sum += c.clone();
        }
        sum
    }

    /// Evaluate by substituting a scalar for every atom and multiplying
    /// along each word.  Atoms missing from the assignment are an error.
    pub fn evaluate(&self, assignment: &BTreeMap<Atom, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (word, coeff) in &self.terms {
            let mut product = coeff.clone();
            for atom in word.atoms() {
                let value = assignment.get(atom).ok_or_else(|| {
                    Error::input(format!("no value assigned to atom {atom}"))
                })?;
                product *= value.clone();
            }
            total += product;
        }
        Ok(total)
    }

    /// Largest absolute numerator/denominator digit count, a cheap size probe.
    pub fn max_scalar_digits(&self) -> usize {
        self.terms
            .values()
            .map(|c| c.numer().abs().to_string().len().max(c.denom().to_string().len()))
            .max()
            .unwrap_or(0)
    }

    /// Multi-line text form with the versioned header; terms sorted by word.
    pub fn to_text(&self) -> String {
        let mut out = String::from(VECTOR_HEADER);
        out.push('\n');
        for (word, coeff) in &self.terms {
            out.push_str(&format!("term {} {}\n", render_rational(coeff), word.render()));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<FormalVector> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, line)) if line.trim() == VECTOR_HEADER => {}
            other => {
                return Err(Error::input(format!(
                    "expected header {VECTOR_HEADER:?}, found {:?}",
                    other.map(|(_, l)| l).unwrap_or("")
                )))
            }
        }
        let mut v = FormalVector::zero();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let rest = line.strip_prefix("term ").ok_or_else(|| {
                Error::input(format!("line {}: expected `term ...`, found {line:?}", idx + 1))
            })?;
            let (coeff_text, word_text) = rest.split_once(' ').ok_or_else(|| {
                Error::input(format!("line {}: malformed term {rest:?}", idx + 1))
            })?;
            let coeff = parse_rational(coeff_text)?;
            let word = Word::parse(word_text.trim())?;
            v.add_term(word, coeff);
        }
        Ok(v)
    }

    /// Single-line rendering for reports: `1/1 a + 2/1 b`, `0` when empty.
    pub fn render_inline(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("{} {}", render_rational(c), w.render()))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for FormalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalVector({})", self.render_inline())
    }
}

impl Add for &FormalVector {
    type Output = FormalVector;
    fn add(self, rhs: &FormalVector) -> FormalVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &FormalVector {
    type Output = FormalVector;
    fn sub(self, rhs: &FormalVector) -> FormalVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &FormalVector {
    type Output = FormalVector;
    fn neg(self) -> FormalVector {
        self.scale(&-Rational::one())
    }
}

impl Mul<&FormalVector> for &Rational {
    type Output = FormalVector;
    fn mul(self, rhs: &FormalVector) -> FormalVector {
        rhs.scale(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::atom::{atom_a, atom_b};

    fn a() -> FormalVector {
        FormalVector::atom(atom_a())
    }

    fn b() -> FormalVector {
        FormalVector::atom(atom_b())
    }

    #[test]
    fn tensor_of_atoms_concatenates() {
        let ab = a().tensor(&b());
        assert_eq!(ab.render_inline(), "1/1 a|b");
        // (a + b) (x) (a) = a|a + b|a
        let sum = &a() + &b();
        let t = sum.tensor(&a());
        assert_eq!(t.render_inline(), "1/1 a|a + 1/1 b|a");
    }

    #[test]
    fn tensor_with_scalar_one_is_identity() {
        let v = &(&a() + &b().scale(&rat(3))) - &FormalVector::one();
        assert_eq!(FormalVector::one().tensor(&v), v);
        assert_eq!(v.tensor(&FormalVector::one()), v);
    }

    #[test]
    fn tensor_is_bilinear() {
        let u = &a() + &b().scale(&rat(2));
        let v = &b() - &a();
        let w = a().tensor(&b());
        let left = (&u + &v).tensor(&w);
        let right = &u.tensor(&w) + &v.tensor(&w);
        assert_eq!(left, right);
    }

    #[test]
    fn cancellation_drops_terms() {
        let z = &a() - &a();
        assert!(z.is_zero());
        assert_eq!(z.term_count(), 0);
    }

    #[test]
    fn text_round_trip_is_byte_identical() {
        let mut v = FormalVector::zero();
        v.add_term(Word::parse("a|b").unwrap(), rat(1));
        v.add_term(Word::parse("b|a").unwrap(), ratio(-3, 2));
        let text = v.to_text();
        assert_eq!(text, "flagvec-vector v1\nterm 1/1 a|b\nterm -3/2 b|a\n");
        let back = FormalVector::from_text(&text).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn empty_word_serializes_as_dash() {
        let one = FormalVector::one();
        assert_eq!(one.to_text(), "flagvec-vector v1\nterm 1/1 -\n");
        assert_eq!(FormalVector::from_text(&one.to_text()).unwrap(), one);
    }

    #[test]
    fn evaluation_multiplies_along_words() {
        let v = &a().tensor(&a()) + &a().tensor(&b()).scale(&rat(5));
        let mut assign = BTreeMap::new();
        assign.insert(atom_a(), rat(1));
        assign.insert(atom_b(), rat(0));
        assert_eq!(v.evaluate(&assign).unwrap(), rat(1));
        let mut assign2 = BTreeMap::new();
        assign2.insert(atom_a(), rat(2));
        assign2.insert(atom_b(), rat(3));
        // 2*2 + 5*2*3 = 34
        assert_eq!(v.evaluate(&assign2).unwrap(), rat(34));
    }
}
