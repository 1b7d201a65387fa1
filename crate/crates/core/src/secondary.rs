//! The operations `θ_s`, the vectors `v_s`, `w_s`, the identities they
//! satisfy, and the κ-class divisibility table those identities feed.
//!
//! ```text
//! θ_s = Σ_{j=0}^{s} (-1)^j C((p-1)(s-j), j) P^{ps-j} P^j
//! w_s = (P^0, ..., P^s)
//! v_s = (..., (-1)^j C((p-1)(s-j)-1, j) P^{ps-j}, ...)      j = 0..s
//! ```
//!
//! At `p = 2`, `P^i` means `Sq^{2i}` and `β` means `Sq^1`. The `j = s`
//! entry of `v_s` uses the generalized binomial `C(-1, s) = (-1)^s`.
//!
//! κ-classes are formal symbols `κ_n` of degree `2n`; no base space is
//! modelled. Secondary composition (Toda bracket) data is carried only as
//! degree and indeterminacy bookkeeping in [`BracketDescriptor`].

use std::fmt;

use serde::Serialize;

use crate::arith::{binom_mod_p, gen_binom_mod_p, FpScalar, Prime};
use crate::error::Error;
use crate::steenrod::{
    adem_reduce, bockstein, element_compose, left_multiply, power, unstable_vanishes,
    AdmissibleMonomial, OperationVector, SteenrodElement, SteenrodWord,
};
use crate::thom::{thom_act_cartan, thom_act_closed, ThomElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Conjectural,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Conjectural => "conjectural",
        })
    }
}

/// One record of a verification sweep or the divisibility table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub prime: u32,
    pub s_or_i: u32,
    pub check: String,
    pub status: Status,
    pub details: String,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} p={} {}={} {}: {}", self.check, self.prime, self.index_label(), self.s_or_i, self.status, self.details)
    }
}

impl Report {
    fn index_label(&self) -> &'static str {
        if self.check == "divisibility" {
            "i"
        } else {
            "s"
        }
    }
}

fn p_power_element(p: Prime, i: u32) -> SteenrodElement {
    let w = SteenrodWord::new(p, vec![power(p, i)]).expect("alphabet of p");
    adem_reduce(&w)
}

fn sign(p: Prime, j: u64) -> FpScalar {
    if j % 2 == 1 {
        -FpScalar::one(p)
    } else {
        FpScalar::one(p)
    }
}

/// `θ_s` in admissible normal form.
pub fn theta(s: u32, p: Prime) -> SteenrodElement {
    let q = p.get() as u64 - 1;
    let mut out = SteenrodElement::zero(p);
    for j in 0..=s {
        let c = sign(p, j as u64) * binom_mod_p(q * (s - j) as u64, j as u64, p);
        if c.is_zero() {
            continue;
        }
        let w = SteenrodWord::new(p, vec![power(p, p.get() * s - j), power(p, j)]).expect("alphabet of p");
        out = out.try_add(&adem_reduce(&w).scale(c)).expect("θ_s is homogeneous");
    }
    out
}

/// `(v_s, w_s)`.
pub fn vw_vectors(s: u32, p: Prime) -> (OperationVector, OperationVector) {
    let q = p.get() as i64 - 1;
    let w = (0..=s).map(|j| p_power_element(p, j)).collect();
    let v = (0..=s)
        .map(|j| {
            let c = sign(p, j as u64) * gen_binom_mod_p(q * (s - j) as i64 - 1, j as u64, p);
            p_power_element(p, p.get() * s - j).scale(c)
        })
        .collect();
    (OperationVector { entries: v }, OperationVector { entries: w })
}

/// `θ_s` together with its factorization vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaFamily {
    pub prime: Prime,
    pub s: u32,
    pub theta: SteenrodElement,
    pub v: OperationVector,
    pub w: OperationVector,
}

impl ThetaFamily {
    pub fn new(s: u32, p: Prime) -> Self {
        let (v, w) = vw_vectors(s, p);
        ThetaFamily { prime: p, s, theta: theta(s, p), v, w }
    }

    /// The admissible monomial `P^{ps}`.
    pub fn leading_monomial(&self) -> AdmissibleMonomial {
        let p = self.prime;
        let seq = if p.is_two() {
            vec![2 * p.get() * self.s]
        } else {
            vec![0, p.get() * self.s, 0]
        };
        if self.s == 0 {
            return AdmissibleMonomial::identity(p);
        }
        AdmissibleMonomial::from_sequence(p, seq).expect("single power is admissible")
    }

    /// The normal form of `θ_s` minus its leading monomial.
    pub fn tail(&self) -> SteenrodElement {
        let lead = SteenrodElement::from_monomial(self.leading_monomial());
        self.theta.try_sub(&lead).expect("same degree")
    }
}

/// Both sides of `Σ_j v_s[j] β w_s[j] = β θ_s`, in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdemIdentityReport {
    pub prime: Prime,
    pub s: u32,
    pub lhs: SteenrodElement,
    pub rhs: SteenrodElement,
}

impl AdemIdentityReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn to_report(&self) -> Report {
        let status = if self.holds() { Status::Pass } else { Status::Fail };
        let rel = if self.holds() { "=" } else { "!=" };
        Report {
            prime: self.prime.get(),
            s_or_i: self.s,
            check: "adem-identity".into(),
            status,
            details: format!("v^T b w = {} {rel} b theta = {}", self.lhs, self.rhs),
        }
    }
}

pub fn verify_adem_identity(s: u32, p: Prime) -> AdemIdentityReport {
    let fam = ThetaFamily::new(s, p);
    let beta = bockstein(p);
    let mut lhs = SteenrodElement::zero(p);
    for (vj, wj) in fam.v.entries.iter().zip(&fam.w.entries) {
        let bw = left_multiply(beta, wj).expect("alphabet of p");
        let term = element_compose(vj, &bw).expect("same prime");
        lhs = lhs.try_add(&term).expect("all terms have degree 2ps(p-1)+1");
    }
    let rhs = left_multiply(beta, &fam.theta).expect("alphabet of p");
    AdemIdentityReport { prime: p, s, lhs, rhs }
}

/// The image of one length-2 admissible summand of `θ_s` on `λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandImage {
    pub monomial: AdmissibleMonomial,
    pub coefficient: FpScalar,
    pub closed: ThomElement,
    pub cartan: ThomElement,
}

/// `θ_s λ` by both Thom-module computations.
///
/// The reference value is `(-1)^{ps} e^{ps(p-1)} λ`: the leading term
/// `P^{ps}` acts by `(-1)^{ps} e^{ps(p-1)}` and every admissible summand of
/// length 2 annihilates `λ`. At odd `p` this differs from `+e^{ps(p-1)} λ`
/// by `(-1)^s`; `matches_unsigned` records which one the engine produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaThomReport {
    pub prime: Prime,
    pub s: u32,
    pub theta: SteenrodElement,
    pub closed: Result<ThomElement, Error>,
    pub cartan: Result<ThomElement, Error>,
    pub expected: ThomElement,
    pub leading_coefficient: FpScalar,
    pub tail_lengths_ok: bool,
    pub summands: Vec<SummandImage>,
}

impl ThetaThomReport {
    pub fn paths_agree(&self) -> bool {
        matches!((&self.closed, &self.cartan), (Ok(a), Ok(b)) if a == b)
    }

    pub fn summands_trivial(&self) -> bool {
        self.summands.iter().all(|s| s.closed.is_zero() && s.cartan.is_zero())
    }

    /// Whether the computed image is `+e^{ps(p-1)} λ`.
    pub fn matches_unsigned(&self) -> bool {
        let q = self.prime.get() as u64 - 1;
        let plus = ThomElement::monomial(self.prime, self.prime.get() as u64 * self.s as u64 * q, FpScalar::one(self.prime));
        self.closed.as_ref().is_ok_and(|c| *c == plus)
    }

    pub fn holds(&self) -> bool {
        self.paths_agree()
            && self.closed.as_ref().is_ok_and(|c| *c == self.expected)
            && self.leading_coefficient.value() == 1
            && self.tail_lengths_ok
            && self.summands_trivial()
    }

    pub fn to_report(&self) -> Report {
        let show = |r: &Result<ThomElement, Error>| match r {
            Ok(x) => x.to_string(),
            Err(e) => format!("error({e})"),
        };
        let unsigned = if self.matches_unsigned() {
            "equals +e^n L".to_string()
        } else {
            format!("differs from +e^n L by (-1)^s = {}", if self.s % 2 == 1 { -1 } else { 1 })
        };
        Report {
            prime: self.prime.get(),
            s_or_i: self.s,
            check: "theta-thom".into(),
            status: if self.holds() { Status::Pass } else { Status::Fail },
            details: format!(
                "theta = {}; closed: {}; cartan: {}; expected: {}; {} length-2 summands {}; {}",
                self.theta,
                show(&self.closed),
                show(&self.cartan),
                self.expected,
                self.summands.len(),
                if self.summands_trivial() { "act trivially" } else { "act NONtrivially" },
                unsigned,
            ),
        }
    }
}

pub fn verify_theta_thom(s: u32, p: Prime) -> ThetaThomReport {
    let fam = ThetaFamily::new(s, p);
    let lam = ThomElement::lambda(p);
    let q = p.get() as u64 - 1;
    let n = p.get() as u64 * s as u64;
    let expected = ThomElement::monomial(p, n * q, sign(p, n));
    let lead = fam.leading_monomial();
    let leading_coefficient = fam.theta.coefficient(&lead);
    let tail = fam.tail();
    let tail_lengths_ok = tail.terms().all(|(m, _)| m.length() == 2);
    let summands = tail
        .terms()
        .map(|(m, c)| SummandImage {
            monomial: m.clone(),
            coefficient: c,
            closed: thom_act_closed(m, &lam).expect("same prime"),
            cartan: thom_act_cartan(m, &lam, None).expect("default truncation suffices"),
        })
        .collect();
    ThetaThomReport {
        prime: p,
        s,
        closed: thom_act_closed(&fam.theta, &lam),
        cartan: thom_act_cartan(&fam.theta, &lam, None),
        theta: fam.theta,
        expected,
        leading_coefficient,
        tail_lengths_ok,
        summands,
    }
}

/// One component of the instability argument for `v_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingComponent {
    pub j: u32,
    pub operation: SteenrodElement,
    pub target_degree: i64,
    /// `2(ps - j) > 2j(p-1) - 2`
    pub inequality: bool,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingReport {
    pub prime: Prime,
    pub s: u32,
    pub components: Vec<VanishingComponent>,
}

impl VanishingReport {
    pub fn holds(&self) -> bool {
        self.components.iter().all(|c| c.vanishes && c.inequality)
    }

    pub fn to_report(&self) -> Report {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                let verdict = if c.vanishes { "vanishes" } else { "SURVIVES" };
                format!("j={}: {} on degree {} {}", c.j, c.operation, c.target_degree, verdict)
            })
            .collect();
        Report {
            prime: self.prime.get(),
            s_or_i: self.s,
            check: "vanishing".into(),
            status: if self.holds() { Status::Pass } else { Status::Fail },
            details: parts.join("; "),
        }
    }
}

/// Checks that `v_s[j]` kills every class of degree `2j(p-1) - 2` in any
/// unstable module, for each `j`.
pub fn vanishing_check(s: u32, p: Prime) -> VanishingReport {
    let (v, _) = vw_vectors(s, p);
    let q = p.get() as i64 - 1;
    let components = v
        .entries
        .into_iter()
        .enumerate()
        .map(|(j, operation)| {
            let j = j as u32;
            let target_degree = 2 * j as i64 * q - 2;
            let inequality = 2 * (p.get() as i64 * s as i64 - j as i64) > target_degree;
            let vanishes = unstable_vanishes(&operation, target_degree);
            VanishingComponent { j, operation, target_degree, inequality, vanishes }
        })
        .collect();
    VanishingReport { prime: p, s, components }
}

/// Degree and indeterminacy data of the secondary composition defining the
/// class in degree `2i(p-1) - 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BracketDescriptor {
    pub prime: u32,
    pub i: u32,
    pub ambient_degree: i64,
    /// `n` such that the integral indeterminacy is `Z·κ_n`.
    pub kappa_index: i64,
    pub integral_indeterminacy: String,
    pub mod_p_indeterminacy_zero: bool,
}

pub fn bracket_indeterminacy(i: u32, p: Prime) -> BracketDescriptor {
    let q = p.get() as i64 - 1;
    let kappa_index = i as i64 * q - 1;
    BracketDescriptor {
        prime: p.get(),
        i,
        ambient_degree: 2 * i as i64 * q - 2,
        kappa_index,
        integral_indeterminacy: format!("Z*kappa_{kappa_index}"),
        mod_p_indeterminacy_zero: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimStatus {
    Proved,
    Conjectural,
}

/// Where a divisibility claim comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// mod `p`, from the secondary class `λ_i` with `pλ_i = κ_{i(p-1)-1}`.
    LambdaClass,
    /// mod `p²` when `p | i`, from the `θ_s` variant and instability.
    ThetaVariant,
    /// mod `p^{v+1}` for `i = p^v s`, conjectured.
    ConjecturedTower,
    /// non-vanishing mod `p^{v+2}` when `s ≢ 0 (mod p)`.
    Sharpness,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::LambdaClass => "lambda-class",
            Provenance::ThetaVariant => "theta-variant",
            Provenance::ConjecturedTower => "conjectured-tower",
            Provenance::Sharpness => "sharpness",
        })
    }
}

/// One row: `κ_{i(p-1)-1} ≡ 0 mod p^exponent`, with `i = p^v · s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisibilityEntry {
    pub prime: u32,
    pub i: u32,
    pub kappa_index: i64,
    pub v: u32,
    pub s: u32,
    pub exponent: u32,
    pub modulus: u64,
    pub status: ClaimStatus,
    pub provenance: Provenance,
    /// The modulus cannot be raised to `p^{exponent+1}`.
    pub sharp: bool,
    pub sharpness_provenance: Option<Provenance>,
    pub ambient_degree: i64,
    pub degenerate_degree: bool,
}

impl DivisibilityEntry {
    fn new(p: Prime, i: u32, v: u32, provenance: Provenance, status: ClaimStatus) -> Self {
        let pv = p.get();
        let s = i / pv.pow(v);
        let nu = p_adic_valuation(i, pv);
        let sharp = v == nu;
        let desc = bracket_indeterminacy(i, p);
        DivisibilityEntry {
            prime: pv,
            i,
            kappa_index: desc.kappa_index,
            v,
            s,
            exponent: v + 1,
            modulus: (pv as u64).pow(v + 1),
            status,
            provenance,
            sharp,
            sharpness_provenance: sharp.then_some(Provenance::Sharpness),
            ambient_degree: desc.ambient_degree,
            degenerate_degree: desc.ambient_degree <= 0,
        }
    }

    pub fn to_report(&self) -> Report {
        let mut details = format!(
            "kappa_{} = 0 mod {}^{} = {} ({}, {}; i = {}^{}*{})",
            self.kappa_index,
            self.prime,
            self.exponent,
            self.modulus,
            match self.status {
                ClaimStatus::Proved => "proved",
                ClaimStatus::Conjectural => "conjectural",
            },
            self.provenance,
            self.prime,
            self.v,
            self.s
        );
        if self.sharp {
            details.push_str(&format!(
                "; sharp: kappa_{} != 0 mod {}",
                self.kappa_index,
                self.modulus * self.prime as u64
            ));
        }
        if self.degenerate_degree {
            details.push_str(&format!("; degenerate degree {}", self.ambient_degree));
        }
        Report {
            prime: self.prime,
            s_or_i: self.i,
            check: "divisibility".into(),
            status: match self.status {
                ClaimStatus::Proved => Status::Pass,
                ClaimStatus::Conjectural => Status::Conjectural,
            },
            details,
        }
    }
}

fn p_adic_valuation(mut n: u32, p: u32) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// The κ-divisibility table for `1 ≤ i ≤ max_i`, conjectural rows up to
/// `v ≤ max_v`.
pub fn divisibility_report(p: Prime, max_i: u32, max_v: u32) -> Vec<DivisibilityEntry> {
    let mut out = Vec::new();
    for i in 1..=max_i {
        out.push(DivisibilityEntry::new(p, i, 0, Provenance::LambdaClass, ClaimStatus::Proved));
        let nu = p_adic_valuation(i, p.get());
        if nu >= 1 {
            out.push(DivisibilityEntry::new(p, i, 1, Provenance::ThetaVariant, ClaimStatus::Proved));
        }
        for v in 2..=nu.min(max_v) {
            out.push(DivisibilityEntry::new(p, i, v, Provenance::ConjecturedTower, ClaimStatus::Conjectural));
        }
    }
    out
}
