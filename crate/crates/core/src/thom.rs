//! The rank-one module `F_p[e] · λ` modelling the cohomology of the Thom
//! space of the complement bundle over the oriented 2-plane Grassmannian,
//! in the stable range.
//!
//! Degrees are relative to `λ`, so `e^k λ` sits in degree `2k` and the
//! ambient dimension never appears. `β` acts as zero on the whole module
//! (the Grassmannian has no odd cohomology in the stable range), and at
//! `p = 2` an odd square `Sq^{2i+1} = Sq^1 Sq^{2i}` acts as zero for the
//! same reason; `Sq^{2i}` acts as `P^i`.
//!
//! The action of `P^k` on `e^m λ` is computed by one of two registered
//! [`ThomStrategy`] implementations:
//!
//! * `closed`: `P^a(e^m) = C(m, a) e^{m + a(p-1)}` and
//!   `P^b(λ) = (-1)^b e^{b(p-1)} λ`, combined by the Cartan formula.
//! * `cartan`: expands the total power `P(e)^m = (e + e^p)^m` by polynomial
//!   multiplication and reads `P(λ)` off the power series
//!   `(1 + e^{p-1})^{-1}`, truncated at a chosen degree.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{binom_mod_p, FpScalar, Prime};
use crate::error::Error;
use crate::steenrod::parse::Cursor;
use crate::steenrod::{Letter, Operation};

/// `Σ c_k e^k · λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThomElement {
    prime: Prime,
    poly: BTreeMap<u64, FpScalar>,
}

impl ThomElement {
    pub fn zero(prime: Prime) -> Self {
        ThomElement { prime, poly: BTreeMap::new() }
    }

    /// The Thom class `λ`.
    pub fn lambda(prime: Prime) -> Self {
        Self::monomial(prime, 0, FpScalar::one(prime))
    }

    /// `c · e^k λ`.
    pub fn monomial(prime: Prime, k: u64, c: FpScalar) -> Self {
        let mut out = Self::zero(prime);
        out.add(k, c);
        out
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty()
    }

    pub fn coefficient(&self, k: u64) -> FpScalar {
        self.poly.get(&k).copied().unwrap_or_else(|| FpScalar::zero(self.prime))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, FpScalar)> + '_ {
        self.poly.iter().map(|(k, c)| (*k, *c))
    }

    /// `Some((k, c))` when the element is exactly `c · e^k λ`.
    pub fn as_monomial(&self) -> Option<(u64, FpScalar)> {
        if self.poly.len() == 1 {
            self.poly.iter().next().map(|(k, c)| (*k, *c))
        } else {
            None
        }
    }

    fn add(&mut self, k: u64, c: FpScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.poly.entry(k).or_insert_with(|| FpScalar::zero(c.modulus()));
        *slot = *slot + c;
        if slot.is_zero() {
            self.poly.remove(&k);
        }
    }

    fn add_scaled(&mut self, other: &ThomElement, c: FpScalar) {
        for (k, v) in other.terms() {
            self.add(k, v * c);
        }
    }
}

impl fmt::Display for ThomElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.poly.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.value() != 1 {
                write!(f, "{}*", c.value())?;
            }
            match k {
                0 => f.write_str("L")?,
                1 => f.write_str("e L")?,
                _ => write!(f, "e^{k} L")?,
            }
        }
        Ok(())
    }
}

/// Parses `2*e^3 L - e L + L`, or `0`.
pub fn parse_thom_element(text: &str, p: Prime) -> Result<ThomElement, Error> {
    let mut out = ThomElement::zero(p);
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    if cur.eat("0") {
        if cur.at_end() {
            return Ok(out);
        }
        return Err(cur.unexpected());
    }
    let mut sign = if cur.eat("-") { -1i64 } else { 1 };
    loop {
        cur.skip_ws();
        let mut coeff = 1i64;
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let col = cur.column();
            coeff = i64::try_from(cur.nat()?).map_err(|_| Error::parse(col, "coefficient out of range"))?;
            cur.skip_ws();
            if !cur.eat("*") {
                return Err(cur.unexpected());
            }
            cur.skip_ws();
        }
        let mut k = 0u64;
        if cur.eat("e") {
            k = if cur.eat("^") { cur.nat()? } else { 1 };
            cur.skip_ws();
        }
        if !cur.eat("L") {
            return Err(cur.unexpected());
        }
        out.add(k, p.scalar(sign * coeff));
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
    Ok(out)
}

/// A polynomial in `e` known only up to (and including) `e^D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    prime: Prime,
    coeffs: Vec<FpScalar>,
}

impl TruncatedSeries {
    /// Keeps the coefficients of `e^0 ..= e^truncation`.
    pub fn new(prime: Prime, coeffs: &[i64], truncation: u64) -> Self {
        let mut v: Vec<FpScalar> = coeffs.iter().map(|&c| prime.scalar(c)).collect();
        v.resize(truncation as usize + 1, FpScalar::zero(prime));
        TruncatedSeries { prime, coeffs: v }
    }

    /// `1 + e^k`, truncated at `e^truncation`.
    pub fn one_plus_power(prime: Prime, k: u64, truncation: u64) -> Self {
        let mut s = Self::new(prime, &[1], truncation);
        if k <= truncation {
            s.coeffs[k as usize] = s.coeffs[k as usize] + FpScalar::one(prime);
        }
        s
    }

    pub fn truncation(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn coefficient(&self, k: u64) -> Option<FpScalar> {
        self.coeffs.get(k as usize).copied()
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let d = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![FpScalar::zero(self.prime); d];
        for (i, a) in self.coeffs.iter().enumerate().take(d) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(d - i) {
                out[i + j] = out[i + j] + *a * *b;
            }
        }
        TruncatedSeries { prime: self.prime, coeffs: out }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.signed();
            let mag = s.unsigned_abs();
            match (first, s < 0) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            match (k, mag) {
                (0, _) => write!(f, "{mag}")?,
                (_, 1) => {}
                _ => write!(f, "{mag}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("e")?,
                _ => write!(f, "e^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(e^{})", self.truncation() + 1)
    }
}

/// Multiplicative inverse up to the truncation degree.
pub fn series_invert(f: &TruncatedSeries) -> Result<TruncatedSeries, Error> {
    let c0_inv = f.coeffs[0].inverse().ok_or(Error::NonUnitConstant)?;
    let n = f.coeffs.len();
    let mut g = vec![FpScalar::zero(f.prime); n];
    g[0] = c0_inv;
    for k in 1..n {
        let mut acc = FpScalar::zero(f.prime);
        for j in 1..=k {
            acc = acc + f.coeffs[j] * g[k - j];
        }
        g[k] = -(acc * c0_inv);
    }
    Ok(TruncatedSeries { prime: f.prime, coeffs: g })
}

/// `P^k(e^m) = C(m, k) e^{m + k(p-1)}`, returned as (coefficient, exponent).
pub fn euler_power(k: u64, m: u64, p: Prime) -> (FpScalar, u64) {
    (binom_mod_p(m, k, p), m + k * (p.get() as u64 - 1))
}

/// A way of computing `P^k(e^m λ)`.
pub trait ThomStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn power(&self, p: Prime, k: u64, m: u64) -> Result<ThomElement, Error>;
}

/// Closed-form action.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForm;

impl ThomStrategy for ClosedForm {
    fn name(&self) -> &'static str {
        "closed"
    }

    fn power(&self, p: Prime, k: u64, m: u64) -> Result<ThomElement, Error> {
        let q = p.get() as u64 - 1;
        let mut out = ThomElement::zero(p);
        for a in 0..=k {
            let b = k - a;
            let (c, exp) = euler_power(a, m, p);
            let sign = if b % 2 == 1 { -FpScalar::one(p) } else { FpScalar::one(p) };
            out.add(exp + b * q, c * sign);
        }
        Ok(out)
    }
}

/// Cartan-formula action through the inverted total power of `λ_U`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CartanSeries {
    /// Highest power of `e` kept in the series; `None` picks
    /// `2n + 2(p-1)` for a required exponent `n`.
    pub truncation: Option<u64>,
}

impl CartanSeries {
    pub fn with_truncation(truncation: u64) -> Self {
        CartanSeries { truncation: Some(truncation) }
    }

    fn lambda_series(&self, p: Prime, needed: u64) -> Result<TruncatedSeries, Error> {
        let q = p.get() as u64 - 1;
        let d = self.truncation.unwrap_or(2 * needed + 2 * q);
        if d < needed {
            return Err(Error::TruncationTooSmall { needed, available: d });
        }
        // P(λ_U) = (1 + e^{p-1}) λ_U and P(λ_U λ) = λ_U λ force P(λ) = (1 + e^{p-1})^{-1} λ
        series_invert(&TruncatedSeries::one_plus_power(p, q, d))
    }

    // (1 + e^{p-1})^m up to e^limit, so that (e + e^p)^m = e^m · this
    fn euler_total_power(p: Prime, m: u64, limit: u64) -> TruncatedSeries {
        let q = p.get() as u64 - 1;
        let factor = TruncatedSeries::one_plus_power(p, q, limit);
        let mut acc = TruncatedSeries::new(p, &[1], limit);
        for _ in 0..m {
            acc = acc.mul(&factor);
        }
        acc
    }
}

impl ThomStrategy for CartanSeries {
    fn name(&self) -> &'static str {
        "cartan"
    }

    fn power(&self, p: Prime, k: u64, m: u64) -> Result<ThomElement, Error> {
        let q = p.get() as u64 - 1;
        let lam = self.lambda_series(p, k * q)?;
        let euler = Self::euler_total_power(p, m, k * q);
        let mut out = ThomElement::zero(p);
        for a in 0..=k {
            let b = k - a;
            let pa = euler.coefficient(a * q).expect("within limit");
            let pb = lam.coefficient(b * q).expect("checked against truncation");
            out.add(m + k * q, pa * pb);
        }
        Ok(out)
    }
}

/// Registered strategies, by name.
pub fn strategies() -> Vec<Box<dyn ThomStrategy>> {
    vec![Box::new(ClosedForm), Box::new(CartanSeries::default())]
}

pub fn strategy_by_name(name: &str, truncation: Option<u64>) -> Result<Box<dyn ThomStrategy>, Error> {
    match name {
        "closed" => Ok(Box::new(ClosedForm)),
        "cartan" => Ok(Box::new(CartanSeries { truncation })),
        other => Err(Error::UnknownStrategy(other.to_string())),
    }
}

fn act_letter(strategy: &dyn ThomStrategy, l: Letter, x: &ThomElement) -> Result<ThomElement, Error> {
    let p = x.prime;
    let k = match l {
        Letter::Bockstein => return Ok(ThomElement::zero(p)),
        Letter::Sq(a) if a % 2 == 1 => return Ok(ThomElement::zero(p)),
        Letter::Sq(a) => a as u64 / 2,
        Letter::Power(k) => k as u64,
    };
    if k == 0 {
        return Ok(x.clone());
    }
    let mut out = ThomElement::zero(p);
    for (m, c) in x.terms() {
        out.add_scaled(&strategy.power(p, k, m)?, c);
    }
    Ok(out)
}

/// Applies `op` to `x` with the given strategy, rightmost letter first.
pub fn thom_act<O: Operation + ?Sized>(
    strategy: &dyn ThomStrategy,
    op: &O,
    x: &ThomElement,
) -> Result<ThomElement, Error> {
    if op.prime() != x.prime {
        return Err(Error::PrimeMismatch(op.prime().get(), x.prime.get()));
    }
    let mut out = ThomElement::zero(x.prime);
    for (c, letters) in op.word_terms() {
        let mut y = x.clone();
        for &l in letters.iter().rev() {
            if y.is_zero() {
                break;
            }
            y = act_letter(strategy, l, &y)?;
        }
        out.add_scaled(&y, c);
    }
    Ok(out)
}

pub fn thom_act_closed<O: Operation + ?Sized>(op: &O, x: &ThomElement) -> Result<ThomElement, Error> {
    thom_act(&ClosedForm, op, x)
}

pub fn thom_act_cartan<O: Operation + ?Sized>(
    op: &O,
    x: &ThomElement,
    truncation: Option<u64>,
) -> Result<ThomElement, Error> {
    thom_act(&CartanSeries { truncation }, op, x)
}
