//! The Steenrod action on `H^*((BZ/p)^n; F_p)`, used as an independent check
//! on Adem rewriting.
//!
//! At odd `p` the ring is `Λ(a_1..a_n) ⊗ F_p[b_1..b_n]` with `|a_i| = 1`,
//! `|b_i| = 2`, `β a_i = b_i`. At `p = 2` it is `F_2[x_1..x_n]` with
//! `|x_i| = 1`. Operations are applied letter by letter straight from the
//! axioms (Cartan formula, `P^1 b = b^p`, `Sq^1 x = x^2`, `β` a signed
//! derivation); nothing here consults the Adem relations.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{binom_mod_p, FpScalar, Prime};
use crate::error::Error;
use crate::steenrod::parse::Cursor;
use crate::steenrod::{Letter, Operation};

pub const MAX_GENERATORS: usize = 16;

/// `a_S · b^E` (odd `p`) or `x^E` (`p = 2`); `ext` is a bitmask over
/// generator indices, always 0 at `p = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OracleMonomial {
    pub ext: u16,
    pub exps: Vec<u32>,
}

impl OracleMonomial {
    fn degree(&self, p: Prime) -> u64 {
        let poly: u64 = self.exps.iter().map(|&e| e as u64).sum();
        if p.is_two() {
            poly
        } else {
            self.ext.count_ones() as u64 + 2 * poly
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleElement {
    prime: Prime,
    generators: usize,
    terms: BTreeMap<OracleMonomial, FpScalar>,
}

fn check_generators(n: usize) -> Result<(), Error> {
    if n > MAX_GENERATORS {
        Err(Error::GeneratorOverflow { requested: n, max: MAX_GENERATORS })
    } else {
        Ok(())
    }
}

impl OracleElement {
    pub fn zero(prime: Prime, generators: usize) -> Result<Self, Error> {
        check_generators(generators)?;
        Ok(OracleElement { prime, generators, terms: BTreeMap::new() })
    }

    pub fn one(prime: Prime, generators: usize) -> Result<Self, Error> {
        let mut z = Self::zero(prime, generators)?;
        z.add(OracleMonomial { ext: 0, exps: vec![0; generators] }, FpScalar::one(prime));
        Ok(z)
    }

    /// `a_i` (odd `p`), 1-based.
    pub fn exterior(prime: Prime, generators: usize, i: usize) -> Result<Self, Error> {
        let mut z = Self::zero(prime, generators)?;
        assert!(!prime.is_two() && (1..=generators).contains(&i));
        z.add(OracleMonomial { ext: 1 << (i - 1), exps: vec![0; generators] }, FpScalar::one(prime));
        Ok(z)
    }

    /// `b_i` at odd `p`, `x_i` at `p = 2`, 1-based.
    pub fn polynomial(prime: Prime, generators: usize, i: usize) -> Result<Self, Error> {
        let mut z = Self::zero(prime, generators)?;
        assert!((1..=generators).contains(&i));
        let mut exps = vec![0; generators];
        exps[i - 1] = 1;
        z.add(OracleMonomial { ext: 0, exps }, FpScalar::one(prime));
        Ok(z)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OracleMonomial, FpScalar)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    /// Degrees of the monomials present, smallest first.
    pub fn degrees(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self.terms.keys().map(|m| m.degree(self.prime)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    fn add(&mut self, m: OracleMonomial, c: FpScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(|| FpScalar::zero(c.modulus()));
        *slot = *slot + c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check(&self, other: &OracleElement) -> Result<(), Error> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        if self.generators != other.generators {
            return Err(Error::GeneratorOverflow {
                requested: self.generators.max(other.generators),
                max: self.generators.min(other.generators),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &OracleElement) -> Result<OracleElement, Error> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add(m.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: FpScalar) -> OracleElement {
        let mut out = OracleElement { terms: BTreeMap::new(), ..self.clone() };
        for (m, v) in self.terms() {
            out.add(m.clone(), v * c);
        }
        out
    }

    /// Graded-commutative product.
    pub fn try_mul(&self, other: &OracleElement) -> Result<OracleElement, Error> {
        self.check(other)?;
        let mut out = OracleElement { terms: BTreeMap::new(), ..self.clone() };
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                if m1.ext & m2.ext != 0 {
                    continue;
                }
                // a_S a_T = (-1)^{#{(s,t): s > t}} a_{S ∪ T}
                let mut inversions = 0u32;
                for t in 0..self.generators {
                    if m2.ext & (1 << t) != 0 {
                        inversions += (m1.ext >> (t + 1)).count_ones();
                    }
                }
                let exps = m1.exps.iter().zip(&m2.exps).map(|(a, b)| a + b).collect();
                let mut c = c1 * c2;
                if inversions % 2 == 1 {
                    c = -c;
                }
                out.add(OracleMonomial { ext: m1.ext | m2.ext, exps }, c);
            }
        }
        Ok(out)
    }

    fn apply_letter(&self, l: Letter) -> OracleElement {
        let mut out = OracleElement { terms: BTreeMap::new(), ..self.clone() };
        for (m, c) in self.terms() {
            match l {
                Letter::Bockstein => self.bockstein_monomial(m, c, &mut out),
                Letter::Power(k) => self.power_monomial(m, c, k, self.prime.get() - 1, &mut out),
                Letter::Sq(k) => self.power_monomial(m, c, k, 1, &mut out),
            }
        }
        out
    }

    fn bockstein_monomial(&self, m: &OracleMonomial, c: FpScalar, out: &mut OracleElement) {
        let mut position = 0;
        for i in 0..self.generators {
            if m.ext & (1 << i) == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] += 1;
            let sign = if position % 2 == 1 { -c } else { c };
            out.add(OracleMonomial { ext: m.ext & !(1 << i), exps }, sign);
            position += 1;
        }
    }

    // Cartan on the polynomial part; exterior classes are killed by every
    // positive power. Each polynomial generator g has total power g + g^{1+step}.
    fn power_monomial(&self, m: &OracleMonomial, c: FpScalar, k: u32, step: u32, out: &mut OracleElement) {
        fn go(
            p: Prime,
            exps: &[u32],
            i: usize,
            left: u32,
            step: u32,
            acc: FpScalar,
            cur: &mut Vec<u32>,
            emit: &mut dyn FnMut(&[u32], FpScalar),
        ) {
            if i == exps.len() {
                if left == 0 {
                    emit(cur, acc);
                }
                return;
            }
            let remaining: u32 = exps[i..].iter().sum();
            if remaining < left {
                return;
            }
            for ki in 0..=left.min(exps[i]) {
                let coeff = binom_mod_p(exps[i] as u64, ki as u64, p);
                if coeff.is_zero() {
                    continue;
                }
                cur.push(exps[i] + ki * step);
                go(p, exps, i + 1, left - ki, step, acc * coeff, cur, emit);
                cur.pop();
            }
        }
        let ext = m.ext;
        let mut emit = |e: &[u32], v: FpScalar| {
            out.add(OracleMonomial { ext, exps: e.to_vec() }, v);
        };
        go(self.prime, &m.exps, 0, k, step, c, &mut Vec::new(), &mut emit);
    }

    fn write_monomial(&self, f: &mut fmt::Formatter<'_>, m: &OracleMonomial) -> fmt::Result {
        let mut parts = Vec::new();
        for i in 0..self.generators {
            if m.ext & (1 << i) != 0 {
                parts.push(format!("a{}", i + 1));
            }
        }
        let var = if self.prime.is_two() { "x" } else { "b" };
        for (i, &e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("{var}{}", i + 1)),
                _ => parts.push(format!("{var}{}^{e}", i + 1)),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

impl fmt::Display for OracleElement {
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
            self.write_monomial(f, m)?;
        }
        Ok(())
    }
}

/// Applies `op` to `x`, rightmost letter first.
pub fn oracle_act<O: Operation + ?Sized>(op: &O, x: &OracleElement) -> Result<OracleElement, Error> {
    if op.prime() != x.prime {
        return Err(Error::PrimeMismatch(op.prime().get(), x.prime.get()));
    }
    let mut out = OracleElement { terms: BTreeMap::new(), ..x.clone() };
    for (c, letters) in op.word_terms() {
        let mut y = x.clone();
        for &l in letters.iter().rev() {
            if y.is_zero() {
                break;
            }
            y = y.apply_letter(l);
        }
        out = out.try_add(&y.scale(c))?;
    }
    Ok(out)
}

fn basis(p: Prime, n: usize, d: u64) -> Vec<OracleMonomial> {
    fn compositions(n: usize, total: u64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=total {
            cur.push(e as u32);
            compositions(n, total - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let masks: Vec<u16> = if p.is_two() { vec![0] } else { (0..(1u32 << n)).map(|m| m as u16).collect() };
    for ext in masks {
        let k = ext.count_ones() as u64;
        let poly_deg = if p.is_two() { d } else {
            if k > d || (d - k) % 2 == 1 {
                continue;
            }
            (d - k) / 2
        };
        let mut exps = Vec::new();
        compositions(n, poly_deg, &mut Vec::new(), &mut exps);
        out.extend(exps.into_iter().map(|exps| OracleMonomial { ext, exps }));
    }
    out
}

/// At most this many basis monomials are drawn for a random element.
const RANDOM_TERMS: usize = 8;

/// Deterministic pseudo-random homogeneous element of degree `d`. Small
/// bases get a random coefficient on every monomial; larger ones a random
/// combination of `RANDOM_TERMS` monomials.
pub fn random_oracle_element(p: Prime, n: usize, d: u64, seed: u64) -> Result<OracleElement, Error> {
    check_generators(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = basis(p, n, d);
    let mut out = OracleElement::zero(p, n)?;
    if basis.is_empty() {
        return Ok(out);
    }
    let pv = p.get();
    if basis.len() <= RANDOM_TERMS {
        for m in basis {
            let c = rng.gen_range(0..pv);
            out.add(m, p.scalar(c as i64));
        }
    } else {
        for _ in 0..RANDOM_TERMS {
            let m = basis[rng.gen_range(0..basis.len())].clone();
            let c = rng.gen_range(1..pv);
            out.add(m, p.scalar(c as i64));
        }
    }
    Ok(out)
}

type RawTerm = (i64, u16, Vec<(usize, u32)>);

/// Parses `2*a1 b2^3 - b1 + 1` (odd `p`) or `x1^2 x2 + x3` (`p = 2`).
/// The generator count is the largest index used, or `generators` if given.
pub fn parse_oracle_element(text: &str, p: Prime, generators: Option<usize>) -> Result<OracleElement, Error> {
    let mut cur = Cursor::new(text);
    // (coefficient, exterior mask, polynomial factors)
    let mut raw: Vec<RawTerm> = Vec::new();
    let mut max_index = 0usize;
    cur.skip_ws();
    let mut sign = if cur.eat("-") { -1 } else { 1 };
    loop {
        cur.skip_ws();
        let mut coeff = 1i64;
        let mut ext = 0u16;
        let mut pows = Vec::new();
        let mut have_factor = false;
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let col = cur.column();
            coeff = i64::try_from(cur.nat()?).map_err(|_| Error::parse(col, "coefficient out of range"))?;
            cur.skip_ws();
            if !cur.eat("*") {
                have_factor = true;
            }
        }
        loop {
            cur.skip_ws();
            let col = cur.column();
            let kind = match cur.peek() {
                Some(c @ (b'a' | b'b' | b'x')) => c,
                _ => break,
            };
            cur.eat(&(kind as char).to_string());
            let idx = cur.nat()? as usize;
            if idx == 0 {
                return Err(Error::parse(col, "generator indices start at 1"));
            }
            if idx > MAX_GENERATORS {
                return Err(Error::GeneratorOverflow { requested: idx, max: MAX_GENERATORS });
            }
            max_index = max_index.max(idx);
            match (kind, p.is_two()) {
                (b'a', false) => {
                    if ext & (1 << (idx - 1)) != 0 {
                        coeff = 0;
                    }
                    if ext >> idx != 0 {
                        // moving a_idx left past each larger index
                        if (ext >> idx).count_ones() % 2 == 1 {
                            coeff = -coeff;
                        }
                    }
                    ext |= 1 << (idx - 1);
                }
                (b'b', false) | (b'x', true) => {
                    let e = if cur.eat("^") { cur.nat()? as u32 } else { 1 };
                    pows.push((idx, e));
                }
                _ => return Err(Error::parse(col, format!("`{}` is not a generator at p = {p}", kind as char))),
            }
            have_factor = true;
        }
        if !have_factor {
            return Err(cur.unexpected());
        }
        raw.push((sign * coeff, ext, pows));
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
    let n = generators.unwrap_or(max_index).max(1);
    if n < max_index {
        return Err(Error::GeneratorOverflow { requested: max_index, max: n });
    }
    let mut out = OracleElement::zero(p, n)?;
    for (c, ext, pows) in raw {
        let mut exps = vec![0u32; n];
        for (i, e) in pows {
            exps[i - 1] += e;
        }
        out.add(OracleMonomial { ext, exps }, p.scalar(c));
    }
    Ok(out)
}
