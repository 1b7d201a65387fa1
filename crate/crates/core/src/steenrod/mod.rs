//! The mod-p Steenrod algebra in the admissible basis.
//!
//! Words are arbitrary composites of generators; the rightmost letter acts
//! first. At odd `p` the generators are `β` and `P^k`, with
//! `|β| = 1` and `|P^k| = 2k(p-1)`. At `p = 2` the generators are `Sq^a`
//! with `|Sq^a| = a`; `P^i`/`β` notation is translated at the input
//! boundary through `P^i = Sq^{2i}`, `β = Sq^1`.
//!
//! Normal forms are [`SteenrodElement`]s: homogeneous `F_p`-combinations of
//! [`AdmissibleMonomial`]s, produced by [`adem_reduce`].

mod adem;
pub(crate) mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{FpScalar, Prime};
use crate::error::Error;

pub use adem::{adem_reduce, adem_reduce_uncached, element_compose, left_multiply};
pub use parse::{parse_element, parse_expression, parse_word, parse_word_with, Expression};

/// A single generator of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Bockstein,
    Power(u32),
    Sq(u32),
}

impl Letter {
    pub fn degree(self, p: Prime) -> u64 {
        match self {
            Letter::Bockstein => 1,
            Letter::Power(k) => 2 * k as u64 * (p.get() as u64 - 1),
            Letter::Sq(a) => a as u64,
        }
    }

    fn allowed_at(self, p: Prime) -> bool {
        match self {
            Letter::Sq(_) => p.is_two(),
            _ => !p.is_two(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Bockstein => write!(f, "b"),
            Letter::Power(k) => write!(f, "P^{k}"),
            Letter::Sq(a) => write!(f, "Sq^{a}"),
        }
    }
}

/// `P^i` in the alphabet of `p` (`Sq^{2i}` at `p = 2`).
pub fn power(p: Prime, i: u32) -> Letter {
    if p.is_two() {
        Letter::Sq(2 * i)
    } else {
        Letter::Power(i)
    }
}

/// `β` in the alphabet of `p` (`Sq^1` at `p = 2`).
pub fn bockstein(p: Prime) -> Letter {
    if p.is_two() {
        Letter::Sq(1)
    } else {
        Letter::Bockstein
    }
}

/// A composite of generators, prior to normalization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SteenrodWord {
    prime: Prime,
    letters: Vec<Letter>,
}

impl SteenrodWord {
    pub fn new(prime: Prime, letters: Vec<Letter>) -> Result<Self, Error> {
        if let Some(bad) = letters.iter().find(|l| !l.allowed_at(prime)) {
            return Err(Error::WrongAlphabet { letter: bad.to_string(), prime: prime.get() });
        }
        Ok(SteenrodWord { prime, letters })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn degree(&self) -> u64 {
        self.letters.iter().map(|l| l.degree(self.prime)).sum()
    }
}

impl fmt::Display for SteenrodWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "{}", power(self.prime, 0));
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// An admissible monomial, stored as its index sequence.
///
/// At odd `p` the sequence is `(ε_0, s_1, ε_1, ..., s_k, ε_k)` standing for
/// `β^{ε_0} P^{s_1} β^{ε_1} ... P^{s_k} β^{ε_k}`; the identity is `(0)`.
/// At `p = 2` it is `(a_1, ..., a_k)` for `Sq^{a_1} ... Sq^{a_k}`; the
/// identity is `()`.
///
/// Monomials order by descending lexicographic index sequence, which is the
/// canonical print order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdmissibleMonomial {
    prime: Prime,
    seq: Vec<u32>,
}

impl AdmissibleMonomial {
    pub fn identity(prime: Prime) -> Self {
        let seq = if prime.is_two() { vec![] } else { vec![0] };
        AdmissibleMonomial { prime, seq }
    }

    /// Builds a monomial from its index sequence, checking admissibility.
    pub fn from_sequence(prime: Prime, seq: Vec<u32>) -> Option<Self> {
        let m = AdmissibleMonomial { prime, seq };
        m.is_admissible().then_some(m)
    }

    pub(crate) fn from_sequence_unchecked(prime: Prime, seq: Vec<u32>) -> Self {
        debug_assert!(AdmissibleMonomial { prime, seq: seq.clone() }.is_admissible());
        AdmissibleMonomial { prime, seq }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn sequence(&self) -> &[u32] {
        &self.seq
    }

    /// Structural admissibility check on the stored sequence.
    pub fn is_admissible(&self) -> bool {
        let p = self.prime.get();
        if self.prime.is_two() {
            self.seq.iter().all(|&a| a >= 1)
                && self.seq.windows(2).all(|w| w[0] >= 2 * w[1])
        } else {
            if self.seq.len() % 2 == 0 {
                return false;
            }
            let eps_ok = self.seq.iter().step_by(2).all(|&e| e <= 1);
            let s: Vec<u32> = self.seq.iter().skip(1).step_by(2).copied().collect();
            let pos_ok = s.iter().all(|&x| x >= 1);
            let adm = (0..s.len().saturating_sub(1))
                .all(|i| s[i] >= p * s[i + 1] + self.seq[2 * i + 2]);
            eps_ok && pos_ok && adm
        }
    }

    /// Number of power operations (`P^s` or `Sq^a`) in the monomial.
    pub fn length(&self) -> usize {
        if self.prime.is_two() {
            self.seq.len()
        } else {
            self.seq.len() / 2
        }
    }

    pub fn is_identity(&self) -> bool {
        self.length() == 0 && (self.prime.is_two() || self.seq[0] == 0)
    }

    pub fn degree(&self) -> u64 {
        self.letters().iter().map(|l| l.degree(self.prime)).sum()
    }

    pub fn letters(&self) -> Vec<Letter> {
        if self.prime.is_two() {
            return self.seq.iter().map(|&a| Letter::Sq(a)).collect();
        }
        let mut out = Vec::with_capacity(self.seq.len());
        for (i, &x) in self.seq.iter().enumerate() {
            if i % 2 == 0 {
                if x == 1 {
                    out.push(Letter::Bockstein);
                }
            } else {
                out.push(Letter::Power(x));
            }
        }
        out
    }

    pub fn to_word(&self) -> SteenrodWord {
        SteenrodWord { prime: self.prime, letters: self.letters() }
    }

    /// Excess: `2s_1 + ε_0 - Σ_{i≥2} 2s_i(p-1) - Σ_{i≥1} ε_i` at odd `p`,
    /// `a_1 - (a_2 + ... + a_k)` at `p = 2`. The identity has excess 0.
    pub fn excess(&self) -> i64 {
        if self.prime.is_two() {
            return match self.seq.split_first() {
                None => 0,
                Some((a1, rest)) => *a1 as i64 - rest.iter().map(|&a| a as i64).sum::<i64>(),
            };
        }
        let e0 = self.seq[0] as i64;
        if self.seq.len() == 1 {
            return e0;
        }
        let s1 = self.seq[1] as i64;
        let tail = AdmissibleMonomial { prime: self.prime, seq: self.seq[2..].to_vec() };
        2 * s1 + e0 - tail.degree() as i64
    }
}

impl PartialOrd for AdmissibleMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AdmissibleMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.seq.cmp(&self.seq).then(self.prime.cmp(&other.prime))
    }
}

impl fmt::Display for AdmissibleMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_word().fmt(f)
    }
}

/// A homogeneous `F_p`-linear combination of admissible monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteenrodElement {
    prime: Prime,
    terms: BTreeMap<AdmissibleMonomial, FpScalar>,
}

impl SteenrodElement {
    pub fn zero(prime: Prime) -> Self {
        SteenrodElement { prime, terms: BTreeMap::new() }
    }

    pub fn identity(prime: Prime) -> Self {
        Self::from_monomial(AdmissibleMonomial::identity(prime))
    }

    pub fn from_monomial(m: AdmissibleMonomial) -> Self {
        let prime = m.prime;
        let mut terms = BTreeMap::new();
        terms.insert(m, FpScalar::one(prime));
        SteenrodElement { prime, terms }
    }

    /// Sums the given terms, dropping zeros. Fails on mixed degrees.
    pub fn from_terms<I>(prime: Prime, iter: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (AdmissibleMonomial, FpScalar)>,
    {
        let mut el = SteenrodElement::zero(prime);
        for (m, c) in iter {
            if m.prime != prime {
                return Err(Error::PrimeMismatch(prime.get(), m.prime.get()));
            }
            el.add_term(m, c)?;
        }
        Ok(el)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of the (nonzero) element.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next().map(AdmissibleMonomial::degree)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AdmissibleMonomial, FpScalar)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &AdmissibleMonomial) -> FpScalar {
        self.terms.get(m).copied().unwrap_or_else(|| FpScalar::zero(self.prime))
    }

    pub fn add_term(&mut self, m: AdmissibleMonomial, c: FpScalar) -> Result<(), Error> {
        if c.is_zero() {
            return Ok(());
        }
        if let Some(d) = self.degree() {
            if d != m.degree() {
                return Err(Error::Inhomogeneous(d, m.degree()));
            }
        }
        let slot = self.terms.entry(m).or_insert_with(|| FpScalar::zero(c.modulus()));
        *slot = *slot + c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn try_add(&self, other: &SteenrodElement) -> Result<SteenrodElement, Error> {
        self.check_prime(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c)?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &SteenrodElement) -> Result<SteenrodElement, Error> {
        self.try_add(&other.scale(-FpScalar::one(self.prime)))
    }

    pub fn scale(&self, c: FpScalar) -> SteenrodElement {
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), *v * c))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        SteenrodElement { prime: self.prime, terms }
    }

    pub(crate) fn check_prime(&self, other: &SteenrodElement) -> Result<(), Error> {
        if self.prime != other.prime {
            Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.value() != 1 {
                write!(f, "{}*", c.value())?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// A finite sequence of operations, possibly of different degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationVector {
    pub entries: Vec<SteenrodElement>,
}

impl OperationVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for OperationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Anything that can be expanded into a weighted sum of words, so the
/// module actions accept both raw words and normal forms.
pub trait Operation {
    fn prime(&self) -> Prime;
    fn word_terms(&self) -> Vec<(FpScalar, Vec<Letter>)>;
}

impl Operation for SteenrodWord {
    fn prime(&self) -> Prime {
        self.prime
    }

    fn word_terms(&self) -> Vec<(FpScalar, Vec<Letter>)> {
        vec![(FpScalar::one(self.prime), self.letters.clone())]
    }
}

impl Operation for SteenrodElement {
    fn prime(&self) -> Prime {
        self.prime
    }

    fn word_terms(&self) -> Vec<(FpScalar, Vec<Letter>)> {
        self.terms.iter().map(|(m, c)| (*c, m.letters())).collect()
    }
}

impl Operation for AdmissibleMonomial {
    fn prime(&self) -> Prime {
        self.prime
    }

    fn word_terms(&self) -> Vec<(FpScalar, Vec<Letter>)> {
        vec![(FpScalar::one(self.prime), self.letters())]
    }
}

/// True iff every monomial of `el` annihilates every class of degree
/// `target_degree` in any unstable module, decided by `excess > degree`.
/// Negative degrees are vacuous (the group is zero).
pub fn unstable_vanishes(el: &SteenrodElement, target_degree: i64) -> bool {
    if target_degree < 0 {
        return true;
    }
    el.terms.keys().all(|m| m.excess() > target_degree)
}

/// Excess of an admissible monomial.
pub fn excess(m: &AdmissibleMonomial) -> i64 {
    m.excess()
}
