//! Exact arithmetic in `F_p`: primes, canonical scalars, and binomial
//! coefficients reduced mod `p` (Lucas' theorem, plus the falling-factorial
//! extension to negative upper arguments).

use std::fmt;

use crate::error::Error;

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self, Error> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.0 == 2
    }

    /// Reduce an arbitrary signed integer to its canonical representative.
    #[inline]
    pub fn reduce(self, n: i64) -> u32 {
        n.rem_euclid(self.0 as i64) as u32
    }

    pub fn scalar(self, n: i64) -> FpScalar {
        FpScalar { value: self.reduce(n), modulus: self }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `F_p`, stored as its representative in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    modulus: Prime,
}

impl FpScalar {
    pub fn zero(p: Prime) -> Self {
        FpScalar { value: 0, modulus: p }
    }

    pub fn one(p: Prime) -> Self {
        FpScalar { value: 1 % p.get(), modulus: p }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// The representative in `(-p/2, p/2]`, used for printing signs.
    pub fn signed(self) -> i64 {
        let p = self.modulus.get() as i64;
        let v = self.value as i64;
        if 2 * v > p {
            v - p
        } else {
            v
        }
    }

    pub fn inverse(self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Fermat: a^(p-2)
        Some(self.pow(self.modulus.get() as u64 - 2))
    }

    pub fn pow(self, mut e: u64) -> Self {
        let p = self.modulus.get() as u64;
        let mut base = self.value as u64;
        let mut acc = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        FpScalar { value: acc as u32, modulus: self.modulus }
    }
}

impl std::ops::Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.get();
        FpScalar { value: (self.value + rhs.value) % p, modulus: self.modulus }
    }
}

impl std::ops::Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.get();
        FpScalar { value: (self.value + p - rhs.value) % p, modulus: self.modulus }
    }
}

impl std::ops::Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.get() as u64;
        let v = (self.value as u64 * rhs.value as u64) % p;
        FpScalar { value: v as u32, modulus: self.modulus }
    }
}

impl std::ops::Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> Self {
        let p = self.modulus.get();
        FpScalar { value: (p - self.value) % p, modulus: self.modulus }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `C(n, k) mod p` for `n, k < p`, straight from the product formula.
fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    // den is a product of nonzero residues since k < p
    let den_inv = FpScalar { value: den as u32, modulus: Prime(p as u32) }
        .inverse()
        .expect("nonzero denominator")
        .value() as u64;
    num * den_inv % p
}

/// `C(n, k) mod p` by Lucas' theorem. Zero when `k > n`.
pub fn binom_mod_p(n: u64, k: u64, p: Prime) -> FpScalar {
    if k > n {
        return FpScalar::zero(p);
    }
    let q = p.get() as u64;
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % q, k % q);
        if kd > nd {
            return FpScalar::zero(p);
        }
        acc = acc * small_binom(nd, kd, q) % q;
        n /= q;
        k /= q;
    }
    FpScalar { value: acc as u32, modulus: p }
}

/// Generalized binomial `m(m-1)...(m-k+1)/k!` reduced mod `p`, for any
/// integer `m`. For negative `m` this is `(-1)^k C(k - m - 1, k)`.
pub fn gen_binom_mod_p(m: i64, k: u64, p: Prime) -> FpScalar {
    if m >= 0 {
        return binom_mod_p(m as u64, k, p);
    }
    let upper = (k as i64 - m - 1) as u64;
    let b = binom_mod_p(upper, k, p);
    if k % 2 == 1 {
        -b
    } else {
        b
    }
}

/// `C(n, k) mod p` with the convention used inside the Adem relations:
/// zero whenever `n < 0`, `k < 0` or `k > n`.
pub(crate) fn adem_binom(n: i64, k: i64, p: Prime) -> FpScalar {
    if n < 0 || k < 0 || k > n {
        FpScalar::zero(p)
    } else {
        binom_mod_p(n as u64, k as u64, p)
    }
}
