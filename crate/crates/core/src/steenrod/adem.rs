//! Adem rewriting.
//!
//! A word is reduced right to left: each letter is multiplied onto an
//! already-admissible element. Multiplying a letter `L` onto an admissible
//! monomial `M` either yields an admissible monomial directly or the first
//! pair (`P^a P^b`, `P^a β P^b`, or `Sq^a Sq^b`) is inadmissible and is
//! replaced by its Adem relation, recursing on the pieces. The products
//! `L · M` are memoized per prime.
//!
//! Relations (a < pb, resp. a ≤ pb, resp. a < 2b):
//!
//! ```text
//! P^a P^b   = Σ_i (-1)^{a+i} C((p-1)(b-i)-1, a-pi) P^{a+b-i} P^i
//! P^a β P^b = Σ_i (-1)^{a+i} C((p-1)(b-i), a-pi) β P^{a+b-i} P^i
//!           + Σ_i (-1)^{a+i-1} C((p-1)(b-i)-1, a-pi-1) P^{a+b-i} β P^i
//! Sq^a Sq^b = Σ_c C(b-c-1, a-2c) Sq^{a+b-c} Sq^c
//! ```

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::{AdmissibleMonomial, Letter, SteenrodElement, SteenrodWord};
use crate::arith::{adem_binom, Prime};
use crate::error::Error;

type Seq = Vec<u32>;
type Terms = Vec<(Seq, u32)>;

struct Accumulator {
    p: u32,
    map: HashMap<Seq, u32>,
}

impl Accumulator {
    fn new(p: Prime) -> Self {
        Accumulator { p: p.get(), map: HashMap::new() }
    }

    fn add(&mut self, seq: Seq, c: u32) {
        if c == 0 {
            return;
        }
        let p = self.p;
        let slot = self.map.entry(seq).or_insert(0);
        *slot = (*slot + c) % p;
    }

    fn add_scaled(&mut self, terms: &Terms, c: u32) {
        let p = self.p as u64;
        for (seq, v) in terms {
            self.add(seq.clone(), ((*v as u64 * c as u64) % p) as u32);
        }
    }

    fn finish(self) -> Terms {
        let mut out: Terms = self.map.into_iter().filter(|(_, c)| *c != 0).collect();
        out.sort_unstable();
        out
    }
}

struct Reducer {
    p: Prime,
    memo: Option<HashMap<(Letter, Seq), Rc<Terms>>>,
}

impl Reducer {
    fn new(p: Prime, memoize: bool) -> Self {
        Reducer { p, memo: memoize.then(HashMap::new) }
    }

    fn identity(&self) -> Seq {
        if self.p.is_two() {
            vec![]
        } else {
            vec![0]
        }
    }

    fn left_mul(&mut self, l: Letter, m: &[u32]) -> Rc<Terms> {
        if let Some(memo) = &self.memo {
            if let Some(hit) = memo.get(&(l, m.to_vec())) {
                return Rc::clone(hit);
            }
        }
        let out = Rc::new(if self.p.is_two() {
            self.left_mul_sq(l, m)
        } else {
            self.left_mul_odd(l, m)
        });
        if let Some(memo) = &mut self.memo {
            memo.insert((l, m.to_vec()), Rc::clone(&out));
        }
        out
    }

    fn left_mul_terms(&mut self, l: Letter, terms: &Terms) -> Terms {
        let mut acc = Accumulator::new(self.p);
        for (seq, c) in terms {
            let prod = self.left_mul(l, seq);
            acc.add_scaled(&prod, *c);
        }
        acc.finish()
    }

    fn coeff(&self, sign_exp: i64, n: i64, k: i64) -> u32 {
        let b = adem_binom(n, k, self.p);
        if sign_exp.rem_euclid(2) == 1 {
            (-b).value()
        } else {
            b.value()
        }
    }

    fn left_mul_sq(&mut self, l: Letter, m: &[u32]) -> Terms {
        let a = match l {
            Letter::Sq(a) => a,
            other => unreachable!("{other} at p = 2"),
        };
        if a == 0 {
            return vec![(m.to_vec(), 1)];
        }
        let b = match m.first() {
            None => return vec![(vec![a], 1)],
            Some(&b) if a >= 2 * b => {
                let mut seq = Vec::with_capacity(m.len() + 1);
                seq.push(a);
                seq.extend_from_slice(m);
                return vec![(seq, 1)];
            }
            Some(&b) => b,
        };
        let rest = &m[1..];
        let mut acc = Accumulator::new(self.p);
        for c in 0..=a / 2 {
            let k = self.coeff(0, b as i64 - c as i64 - 1, a as i64 - 2 * c as i64);
            if k == 0 {
                continue;
            }
            let inner = self.left_mul(Letter::Sq(c), rest);
            let outer = self.left_mul_terms(Letter::Sq(a + b - c), &inner);
            acc.add_scaled(&outer, k);
        }
        acc.finish()
    }

    fn left_mul_odd(&mut self, l: Letter, m: &[u32]) -> Terms {
        let p = self.p.get();
        match l {
            Letter::Bockstein => {
                if m[0] == 1 {
                    vec![]
                } else {
                    let mut seq = m.to_vec();
                    seq[0] = 1;
                    vec![(seq, 1)]
                }
            }
            Letter::Power(0) => vec![(m.to_vec(), 1)],
            Letter::Power(a) => {
                let eps = m[0];
                if m.len() == 1 || a >= p * m[1] + eps {
                    let mut seq = Vec::with_capacity(m.len() + 2);
                    seq.extend_from_slice(&[0, a]);
                    seq.extend_from_slice(m);
                    return vec![(seq, 1)];
                }
                let b = m[1];
                let rest = &m[2..];
                let (ai, bi, pi) = (a as i64, b as i64, p as i64);
                let mut acc = Accumulator::new(self.p);
                if eps == 0 {
                    for i in 0..=a / p {
                        let ii = i as i64;
                        let k = self.coeff(ai + ii, (pi - 1) * (bi - ii) - 1, ai - pi * ii);
                        if k == 0 {
                            continue;
                        }
                        let inner = self.left_mul(Letter::Power(i), rest);
                        let outer = self.left_mul_terms(Letter::Power(a + b - i), &inner);
                        acc.add_scaled(&outer, k);
                    }
                } else {
                    for i in 0..=a / p {
                        let ii = i as i64;
                        let k = self.coeff(ai + ii, (pi - 1) * (bi - ii), ai - pi * ii);
                        if k == 0 {
                            continue;
                        }
                        let inner = self.left_mul(Letter::Power(i), rest);
                        let mid = self.left_mul_terms(Letter::Power(a + b - i), &inner);
                        let outer = self.left_mul_terms(Letter::Bockstein, &mid);
                        acc.add_scaled(&outer, k);
                    }
                    for i in 0..=(a - 1) / p {
                        let ii = i as i64;
                        let k = self.coeff(ai + ii - 1, (pi - 1) * (bi - ii) - 1, ai - pi * ii - 1);
                        if k == 0 {
                            continue;
                        }
                        let inner = self.left_mul(Letter::Power(i), rest);
                        let mid = self.left_mul_terms(Letter::Bockstein, &inner);
                        let outer = self.left_mul_terms(Letter::Power(a + b - i), &mid);
                        acc.add_scaled(&outer, k);
                    }
                }
                acc.finish()
            }
            Letter::Sq(_) => unreachable!("Sq at odd p"),
        }
    }

    fn reduce_letters(&mut self, letters: &[Letter], start: Terms) -> Terms {
        letters.iter().rev().fold(start, |acc, &l| self.left_mul_terms(l, &acc))
    }
}

thread_local! {
    static REDUCERS: RefCell<HashMap<u32, Reducer>> = RefCell::new(HashMap::new());
}

fn with_reducer<T>(p: Prime, f: impl FnOnce(&mut Reducer) -> T) -> T {
    REDUCERS.with(|cell| {
        let mut map = cell.borrow_mut();
        let r = map.entry(p.get()).or_insert_with(|| Reducer::new(p, true));
        f(r)
    })
}

fn to_element(p: Prime, terms: Terms) -> SteenrodElement {
    let iter = terms.into_iter().map(|(seq, c)| {
        (AdmissibleMonomial::from_sequence_unchecked(p, seq), p.scalar(c as i64))
    });
    SteenrodElement::from_terms(p, iter).expect("Adem rewriting preserves degree")
}

/// The admissible normal form of `w`.
pub fn adem_reduce(w: &SteenrodWord) -> SteenrodElement {
    let p = w.prime();
    let terms = with_reducer(p, |r| {
        let id = r.identity();
        r.reduce_letters(w.letters(), vec![(id, 1)])
    });
    to_element(p, terms)
}

/// Same result as [`adem_reduce`] with no memo table.
pub fn adem_reduce_uncached(w: &SteenrodWord) -> SteenrodElement {
    let p = w.prime();
    let mut r = Reducer::new(p, false);
    let id = r.identity();
    let terms = r.reduce_letters(w.letters(), vec![(id, 1)]);
    to_element(p, terms)
}

/// `letter ∘ x`, renormalized.
pub fn left_multiply(letter: Letter, x: &SteenrodElement) -> Result<SteenrodElement, Error> {
    let p = x.prime();
    let w = SteenrodWord::new(p, vec![letter])?;
    let terms: Terms = x.terms().map(|(m, c)| (m.sequence().to_vec(), c.value())).collect();
    let out = with_reducer(p, |r| r.left_mul_terms(w.letters()[0], &terms));
    Ok(to_element(p, out))
}

/// `a ∘ b` (b acts first), renormalized.
pub fn element_compose(a: &SteenrodElement, b: &SteenrodElement) -> Result<SteenrodElement, Error> {
    a.check_prime(b)?;
    let p = a.prime();
    let b_terms: Terms = b.terms().map(|(m, c)| (m.sequence().to_vec(), c.value())).collect();
    let out = with_reducer(p, |r| {
        let mut acc = Accumulator::new(p);
        for (m, c) in a.terms() {
            let prod = r.reduce_letters(&m.letters(), b_terms.clone());
            acc.add_scaled(&prod, c.value());
        }
        acc.finish()
    });
    Ok(to_element(p, out))
}

impl SteenrodElement {
    /// Shorthand for [`element_compose`].
    pub fn compose(&self, other: &SteenrodElement) -> Result<SteenrodElement, Error> {
        element_compose(self, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steenrod::parse_word;

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn red(text: &str, p: u32) -> String {
        adem_reduce(&parse_word(text, pr(p)).unwrap()).to_string()
    }

    #[test]
    fn classical_mod_two_relations() {
        assert_eq!(red("Sq^1 Sq^1", 2), "0");
        assert_eq!(red("Sq^2 Sq^2", 2), "Sq^3 Sq^1");
        assert_eq!(red("Sq^1 Sq^2", 2), "Sq^3");
        assert_eq!(red("Sq^2 Sq^3", 2), "Sq^5 + Sq^4 Sq^1");
        assert_eq!(red("Sq^3 Sq^2", 2), "0");
        assert_eq!(red("Sq^1 Sq^4", 2), "Sq^5");
        assert_eq!(red("Sq^4 Sq^1", 2), "Sq^4 Sq^1");
        assert_eq!(red("Sq^0 Sq^3 Sq^0", 2), "Sq^3");
    }

    #[test]
    fn odd_primary_relations() {
        assert_eq!(red("P^1 P^1", 3), "2*P^2");
        assert_eq!(red("b b", 3), "0");
        assert_eq!(red("b b", 5), "0");
        assert_eq!(red("P^1 b", 3), "P^1 b");
        assert_eq!(red("P^0", 7), "P^0");
        // P^1 P^1 = 2 P^2 at every odd prime
        assert_eq!(red("P^1 P^1", 5), "2*P^2");
        // p-th power of P^1 vanishes
        assert_eq!(red("P^1 P^1 P^1", 3), "0");
    }

    #[test]
    fn memo_is_transparent() {
        for (text, p) in [("P^2 b P^3 P^1", 3), ("Sq^5 Sq^7 Sq^3", 2), ("P^4 b P^2 b P^1", 5)] {
            let w = parse_word(text, pr(p)).unwrap();
            assert_eq!(adem_reduce(&w), adem_reduce_uncached(&w));
        }
    }

    #[test]
    fn compose_examples() {
        let p = pr(2);
        let sq2 = adem_reduce(&parse_word("Sq^2", p).unwrap());
        assert_eq!(sq2.compose(&sq2).unwrap().to_string(), "Sq^3 Sq^1");
        assert!(sq2.compose(&SteenrodElement::zero(p)).unwrap().is_zero());
        let p3 = pr(3);
        let p1 = adem_reduce(&parse_word("P^1", p3).unwrap());
        let b = adem_reduce(&parse_word("b", p3).unwrap());
        assert_eq!(p1.compose(&b).unwrap().to_string(), "P^1 b");
        assert!(matches!(p1.compose(&sq2), Err(Error::PrimeMismatch(3, 2))));
    }
}
