//! Text syntax for words and elements.
//!
//! ```text
//! element := ['-'] term (('+' | '-') term)*  |  '0'
//! term    := [nat '*'] word
//! word    := letter+
//! letter  := 'b' | 'P^' nat | 'Sq^' nat
//! ```
//!
//! Columns in error messages are 1-based.

use super::{adem_reduce, Letter, SteenrodElement, SteenrodWord};
use crate::arith::Prime;
use crate::error::Error;

/// A formal sum of words with integer coefficients, before reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expression {
    pub prime: Prime,
    pub terms: Vec<(i64, SteenrodWord)>,
}

impl Expression {
    /// Reduces every word and sums the results.
    pub fn reduce(&self) -> Result<SteenrodElement, Error> {
        let mut out = SteenrodElement::zero(self.prime);
        for (c, w) in &self.terms {
            let el = adem_reduce(w).scale(self.prime.scalar(*c));
            out = out.try_add(&el)?;
        }
        Ok(out)
    }
}

pub(crate) struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Cursor { src: text.as_bytes(), pos: 0 }
    }

    pub(crate) fn column(&self) -> usize {
        self.pos + 1
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    pub(crate) fn eat(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn nat(&mut self) -> Result<u64, Error> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start + 1, "expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start + 1, "number out of range"))
    }

    pub(crate) fn unexpected(&self) -> Error {
        match self.peek() {
            Some(c) => Error::parse(self.column(), format!("unexpected `{}`", c as char)),
            None => Error::parse(self.column(), "unexpected end of input"),
        }
    }
}

fn small(n: u64, col: usize) -> Result<u32, Error> {
    u32::try_from(n).map_err(|_| Error::parse(col, "index out of range"))
}

fn letter(cur: &mut Cursor, p: Prime, dictionary: bool) -> Result<Option<Vec<Letter>>, Error> {
    cur.skip_ws();
    let col = cur.column();
    if cur.eat("Sq^") {
        let a = small(cur.nat()?, col)?;
        if !p.is_two() {
            return Err(Error::parse(col, format!("Sq used at odd p = {p}")));
        }
        return Ok(Some(vec![Letter::Sq(a)]));
    }
    if cur.eat("P^") {
        let k = small(cur.nat()?, col)?;
        if p.is_two() {
            if !dictionary {
                return Err(Error::parse(col, "P used at p = 2 without dictionary flag"));
            }
            let a = k.checked_mul(2).ok_or_else(|| Error::parse(col, "index out of range"))?;
            return Ok(Some(vec![Letter::Sq(a)]));
        }
        return Ok(Some(vec![Letter::Power(k)]));
    }
    if cur.peek() == Some(b'b') {
        cur.pos += 1;
        if p.is_two() {
            if !dictionary {
                return Err(Error::parse(col, "b used at p = 2 without dictionary flag"));
            }
            return Ok(Some(vec![Letter::Sq(1)]));
        }
        return Ok(Some(vec![Letter::Bockstein]));
    }
    Ok(None)
}

fn word_letters(cur: &mut Cursor, p: Prime, dictionary: bool) -> Result<Vec<Letter>, Error> {
    let mut letters = Vec::new();
    while let Some(ls) = letter(cur, p, dictionary)? {
        letters.extend(ls);
    }
    if letters.is_empty() {
        return Err(cur.unexpected());
    }
    Ok(letters)
}

/// Parses a single word (no coefficients or sums).
pub fn parse_word(text: &str, p: Prime) -> Result<SteenrodWord, Error> {
    parse_word_with(text, p, false)
}

/// Like [`parse_word`]; with `dictionary` set, `P^i` and `b` are accepted
/// at `p = 2` and read as `Sq^{2i}` and `Sq^1`.
pub fn parse_word_with(text: &str, p: Prime, dictionary: bool) -> Result<SteenrodWord, Error> {
    let mut cur = Cursor::new(text);
    let letters = word_letters(&mut cur, p, dictionary)?;
    if !cur.at_end() {
        return Err(cur.unexpected());
    }
    SteenrodWord::new(p, letters)
}

/// Parses a formal sum of words.
pub fn parse_expression(text: &str, p: Prime, dictionary: bool) -> Result<Expression, Error> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let mut terms = Vec::new();
    if cur.peek() == Some(b'0') {
        let save = cur.pos;
        cur.pos += 1;
        if cur.at_end() {
            return Ok(Expression { prime: p, terms });
        }
        cur.pos = save;
    }
    let mut sign = if cur.eat("-") { -1 } else { 1 };
    loop {
        cur.skip_ws();
        let mut coeff = 1i64;
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let col = cur.column();
            let n = cur.nat()?;
            coeff = i64::try_from(n).map_err(|_| Error::parse(col, "coefficient out of range"))?;
            cur.skip_ws();
            if !cur.eat("*") {
                return Err(cur.unexpected());
            }
        }
        let letters = word_letters(&mut cur, p, dictionary)?;
        terms.push((sign * coeff, SteenrodWord::new(p, letters)?));
        if cur.at_end() {
            break;
        }
        sign = if cur.eat("+") {
            1
        } else if cur.eat("-") {
            -1
        } else {
            return Err(cur.unexpected());
        };
    }
    Ok(Expression { prime: p, terms })
}

/// Parses and reduces an element expression.
pub fn parse_element(text: &str, p: Prime, dictionary: bool) -> Result<SteenrodElement, Error> {
    parse_expression(text, p, dictionary)?.reduce()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn words() {
        let w = parse_word("P^2 P^1", pr(3)).unwrap();
        assert_eq!(w.letters(), &[Letter::Power(2), Letter::Power(1)]);
        let w = parse_word("b P^3", pr(5)).unwrap();
        assert_eq!(w.letters(), &[Letter::Bockstein, Letter::Power(3)]);
        let w = parse_word("Sq^4 Sq^1", pr(2)).unwrap();
        assert_eq!(w.letters(), &[Letter::Sq(4), Letter::Sq(1)]);
        assert_eq!(w.to_string(), "Sq^4 Sq^1");
        assert_eq!(parse_word("  bP^3  ", pr(5)).unwrap().to_string(), "b P^3");
    }

    #[test]
    fn alphabet_errors() {
        assert!(matches!(parse_word("Sq^1", pr(3)), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_word("Sq^2 P^1", pr(2)), Err(Error::Parse { pos: 6, .. })));
        assert!(parse_word("b", pr(2)).is_err());
        let w = parse_word_with("b P^2", pr(2), true).unwrap();
        assert_eq!(w.letters(), &[Letter::Sq(1), Letter::Sq(4)]);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_word("Q^1", pr(3)) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("{other:?}"),
        }
        match parse_word("P^1 P^", pr(3)) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_word("", pr(3)).is_err());
        assert!(parse_expression("P^1 +", pr(3), false).is_err());
        assert!(parse_expression("2 P^1", pr(3), false).is_err());
    }

    #[test]
    fn expressions() {
        let e = parse_expression("Sq^4 Sq^1 + Sq^2 Sq^3", pr(2), false).unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.reduce().unwrap().to_string(), "Sq^5");
        let e = parse_expression("-2*P^2 - P^1 P^1", pr(5), false).unwrap();
        assert_eq!(e.terms[0].0, -2);
        assert_eq!(e.terms[1].0, -1);
        assert_eq!(e.reduce().unwrap().to_string(), "P^2");
        assert!(parse_element("0", pr(3), false).unwrap().is_zero());
        assert!(matches!(parse_element("Sq^2 + Sq^3", pr(2), false), Err(Error::Inhomogeneous(2, 3))));
    }
}
