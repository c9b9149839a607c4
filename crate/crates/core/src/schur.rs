//! Local and global Schur indices for the algebras produced by
//! [`crate::wedderburn`], and the exceptional-component classification.
//!
//! For a cyclic cyclotomic algebra `A = (K(zeta_N)/K, sigma, zeta)` over an
//! abelian center the local index at an odd prime `p` coprime to the twist
//! order is
//!
//! ```text
//! m_p(A) = min { l >= 1 | zeta^l lies in <zeta_{p^f - 1}^e> }
//!        = min { l >= 1 | (p^f - 1)/gcd(p^f - 1, e) = 0  mod  ord(zeta^l) }
//! ```
//!
//! with `e = e_p(K(zeta_N)/K)` and `f = f_p(K/Q)`. Both closed forms are
//! evaluated independently (`p^f - 1` in arbitrary precision) and must agree.
//! At the infinite place the index is 2 exactly for a totally real center,
//! non-trivial extension and twist -1. Finite primes where the extension
//! `K(zeta_N)/K` is unramified carry index 1 (unit twist, unramified local
//! algebra); the one case none of this covers - index at 2 of a 2-ramified
//! algebra - is reported as unsupported rather than guessed.

use crate::abfield::{FieldError, Place};
use crate::wedderburn::{
    AlgebraKind, CyclicCyclotomicAlgebra, QuaternionForm, SimpleComponent,
    WedderburnError,
};
use crate::zarith::{gcd, is_prime, lcm};
use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchurError {
    Field(FieldError),
    Wedderburn(WedderburnError),
    Unsupported(String),
    Internal(String),
}

impl fmt::Display for SchurError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchurError::Field(e) => write!(f, "{e}"),
            SchurError::Wedderburn(e) => write!(f, "{e}"),
            SchurError::Unsupported(s) => write!(f, "unsupported: {s}"),
            SchurError::Internal(s) => write!(f, "internal invariant violated: {s}"),
        }
    }
}

impl std::error::Error for SchurError {}

impl From<FieldError> for SchurError {
    fn from(e: FieldError) -> Self {
        SchurError::Field(e)
    }
}

impl From<WedderburnError> for SchurError {
    fn from(e: WedderburnError) -> Self {
        SchurError::Wedderburn(e)
    }
}

/// Local indices at the rational places; places with index 1 are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalIndexProfile {
    entries: Vec<(Place, u64)>,
}

impl LocalIndexProfile {
    fn new(mut entries: Vec<(Place, u64)>) -> Self {
        entries.retain(|&(_, v)| v > 1);
        entries.sort();
        LocalIndexProfile { entries }
    }

    pub fn entries(&self) -> &[(Place, u64)] {
        &self.entries
    }

    pub fn index_at(&self, place: Place) -> u64 {
        self.entries.iter().find(|&&(p, _)| p == place).map_or(1, |&(_, v)| v)
    }

    /// Global Schur index: the lcm of all local indices.
    pub fn global_index(&self) -> u64 {
        self.entries.iter().fold(1, |acc, &(_, v)| lcm(acc, v))
    }

    /// The table notation `[p, s]`; multiple entries are comma-joined.
    pub fn notation(&self) -> String {
        if self.entries.is_empty() {
            return "[]".to_string();
        }
        self.entries
            .iter()
            .map(|(p, v)| format!("[{p}, {v}]"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for LocalIndexProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.notation())
    }
}

/// Index at the infinite places: 2 iff the center is totally real, the
/// extension is non-trivial and the twist evaluates to -1.
pub fn local_index_infinite(a: &CyclicCyclotomicAlgebra) -> u64 {
    if a.degree() >= 2 && a.center().is_totally_real() && a.twist_is_minus_one() {
        2
    } else {
        1
    }
}

/// Index at an odd prime, by the two closed forms evaluated independently.
/// Requires the twist order to be coprime to `p`; when it is not, the value
/// is only computed in the unramified case (where it is 1).
pub fn local_index_odd_prime(a: &CyclicCyclotomicAlgebra, p: u64) -> Result<u64, SchurError> {
    if !is_prime(p) || p == 2 {
        return Err(SchurError::Unsupported(format!("p = {p} must be an odd prime")));
    }
    if a.degree() == 1 {
        return Ok(1);
    }
    let center = a.center();
    let top = a.top_field()?;
    let e_top = top.e_p(p)?;
    let e_center = center.e_p(p)?;
    debug_assert_eq!(e_top % e_center, 0);
    let e = e_top / e_center;
    let t0 = a.twist_root_order();
    if gcd(p, t0) != 1 {
        if e == 1 {
            // unramified cyclic algebra with unit twist: split locally
            return Ok(1);
        }
        return Err(SchurError::Unsupported(format!(
            "local index at p = {p} with p dividing the twist order {t0}"
        )));
    }
    let f = center.f_p(p)?;
    // M = (p^f - 1) / gcd(p^f - 1, e): the order of zeta_{p^f-1}^e
    let pf_minus_1 = BigUint::from(p).pow(f as u32) - 1u32;
    let m_big = &pf_minus_1 / gcd_biguint_u64(&pf_minus_1, e);
    let (t, c) = a.twist();

    // Form 1: zeta_t^{c l} lies in <zeta_{p^f-1}^e> = (1/M) Z / Z, i.e.
    // t divides M * c * l.
    let form1 = (1..=t)
        .find(|&l| (&m_big * BigUint::from(c * l) % BigUint::from(t)).is_zero())
        .ok_or_else(|| SchurError::Internal("membership never holds up to l = t".into()))?;

    // Form 2: (p^f - 1)/gcd(p^f - 1, e) = 0 mod t/gcd(t, c l).
    let form2 = (1..=t)
        .find(|&l| {
            // order of zeta_t^{c l}; gcd(t, 0) = t handles c l = 0 mod t
            let ord = t / gcd(t, (c * l) % t);
            (&m_big % BigUint::from(ord)).is_zero()
        })
        .ok_or_else(|| SchurError::Internal("congruence never holds up to l = t".into()))?;

    if form1 != form2 {
        return Err(SchurError::Internal(format!(
            "the two closed forms disagree at p = {p}: {form1} vs {form2} for {}",
            a.describe()
        )));
    }
    Ok(form1)
}

fn gcd_biguint_u64(a: &BigUint, b: u64) -> BigUint {
    if b == 0 {
        return a.clone();
    }
    // gcd(a, b) = gcd(b, a mod b) with b machine-width
    let r: BigUint = a % BigUint::from(b);
    let r_u64 = r.to_u64_digits().first().copied().unwrap_or(0);
    BigUint::from(gcd(b, r_u64))
}

/// Full local index profile of an algebra.
///
/// Cyclic cyclotomic algebras: the support is restricted to the infinite
/// place and the finite primes dividing `lcm(N, twist order)`; odd primes go
/// through the closed forms, relatively unramified primes carry index 1, and
/// an index request at 2 for a 2-ramified algebra is rejected.
///
/// Quaternion symbols: the rational root symbol has a known profile
/// ((-1,-1): {2, oo}, (-1,-3): {3, oo}, (-2,-5): {5, oo}; the zeta form is
/// computed from its cyclic cyclotomic presentation) and scalar extension
/// keeps a finite index 2 iff both e_p and f_p of the extension are odd,
/// while the infinite index survives iff the base stays totally real.
pub fn local_profile(alg: &AlgebraKind) -> Result<LocalIndexProfile, SchurError> {
    match alg {
        AlgebraKind::Field(_) => Ok(LocalIndexProfile::new(vec![])),
        AlgebraKind::Cyclic(a) => {
            if a.degree() == 1 {
                return Ok(LocalIndexProfile::new(vec![]));
            }
            let mut entries = vec![(Place::Infinite, local_index_infinite(a))];
            let support = lcm(a.top_conductor(), a.twist_root_order());
            let center = a.center();
            let top = a.top_field()?;
            for (q, _) in crate::zarith::factorize(support) {
                if q == 2 {
                    let e_rel = top.e_p(2)? / center.e_p(2)?;
                    if e_rel != 1 {
                        return Err(SchurError::Unsupported(format!(
                            "index at 2 of the 2-ramified algebra {}",
                            a.describe()
                        )));
                    }
                    continue;
                }
                entries.push((Place::Finite(q), local_index_odd_prime(a, q)?));
            }
            let profile = LocalIndexProfile::new(entries);
            check_index_divides_degree(&profile, a.degree(), &a.describe())?;
            Ok(profile)
        }
        AlgebraKind::Quaternion(sym) => {
            let root_base = sym.root_base()?;
            if !root_base.is_subfield_of(&sym.base)? {
                return Err(SchurError::Internal(format!(
                    "quaternion base {} does not contain {}",
                    sym.base.notation(),
                    root_base.notation()
                )));
            }
            let root_profile: Vec<(Place, u64)> = match &sym.form {
                QuaternionForm::MinusOneMinusOne => {
                    vec![(Place::Finite(2), 2), (Place::Infinite, 2)]
                }
                QuaternionForm::MinusOneMinusThree => {
                    vec![(Place::Finite(3), 2), (Place::Infinite, 2)]
                }
                QuaternionForm::MinusTwoMinusFive => {
                    vec![(Place::Finite(5), 2), (Place::Infinite, 2)]
                }
                QuaternionForm::Zeta(d) => {
                    let root = CyclicCyclotomicAlgebra::new(root_base.clone(), *d, d - 1, 2, 1)?;
                    local_profile(&AlgebraKind::Cyclic(root))?.entries().to_vec()
                }
            };
            let mut entries = Vec::new();
            for (place, idx) in root_profile {
                debug_assert_eq!(idx, 2);
                match place {
                    Place::Infinite => {
                        if sym.base.is_totally_real() {
                            entries.push((Place::Infinite, 2));
                        }
                    }
                    Place::Finite(q) => {
                        let (e_rel, f_rel) = root_base.relative_e_f(&sym.base, q)?;
                        if e_rel % 2 == 1 && f_rel % 2 == 1 {
                            entries.push((Place::Finite(q), 2));
                        }
                    }
                }
            }
            Ok(LocalIndexProfile::new(entries))
        }
    }
}

fn check_index_divides_degree(
    profile: &LocalIndexProfile,
    degree: u64,
    what: &str,
) -> Result<(), SchurError> {
    let ind = profile.global_index();
    if degree % ind != 0 {
        return Err(SchurError::Internal(format!(
            "index {ind} does not divide the degree {degree} of {what}"
        )));
    }
    Ok(())
}

/// Global Schur index: lcm of the local indices.
pub fn schur_index(alg: &AlgebraKind) -> Result<u64, SchurError> {
    Ok(local_profile(alg)?.global_index())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExceptionalKind {
    NotExceptional,
    Type1,
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExceptionalReason {
    TotallyDefiniteQuaternion,
    CommutativeDivision,
    MatrixTooLarge,
    Type2List,
    Type1Division,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalVerdict {
    pub kind: ExceptionalKind,
    pub reason: ExceptionalReason,
}

/// Classify a simple component: type 1 is a non-commutative division algebra
/// other than a totally definite quaternion algebra; type 2 is a 2x2 matrix
/// ring over Q, an imaginary quadratic field, or a totally definite
/// quaternion algebra over Q.
pub fn classify_exceptional(c: &SimpleComponent) -> Result<ExceptionalVerdict, SchurError> {
    let profile = local_profile(&c.algebra)?;
    let ind = profile.global_index();
    let degree = c.algebra.degree();
    if degree % ind != 0 {
        return Err(SchurError::Internal(format!(
            "index {ind} does not divide degree {degree}"
        )));
    }
    // as a matrix ring over a division algebra: M_total(D), deg(D) = ind
    let total = c.matrix_size * (degree / ind);
    let center = c.center();
    let totally_definite =
        ind == 2 && center.is_totally_real() && profile.index_at(Place::Infinite) == 2;
    let verdict = if total == 1 {
        if ind == 1 {
            ExceptionalVerdict {
                kind: ExceptionalKind::NotExceptional,
                reason: ExceptionalReason::CommutativeDivision,
            }
        } else if totally_definite {
            ExceptionalVerdict {
                kind: ExceptionalKind::NotExceptional,
                reason: ExceptionalReason::TotallyDefiniteQuaternion,
            }
        } else {
            ExceptionalVerdict {
                kind: ExceptionalKind::Type1,
                reason: ExceptionalReason::Type1Division,
            }
        }
    } else if total == 2 {
        let over_q_field = ind == 1 && center.is_rational();
        let over_imag_quad = ind == 1 && center.degree() == 2 && center.is_totally_imaginary();
        let over_tdq_q = totally_definite && center.is_rational();
        if over_q_field || over_imag_quad || over_tdq_q {
            ExceptionalVerdict { kind: ExceptionalKind::Type2, reason: ExceptionalReason::Type2List }
        } else {
            ExceptionalVerdict {
                kind: ExceptionalKind::NotExceptional,
                reason: ExceptionalReason::MatrixTooLarge,
            }
        }
    } else {
        ExceptionalVerdict {
            kind: ExceptionalKind::NotExceptional,
            reason: ExceptionalReason::MatrixTooLarge,
        }
    };
    Ok(verdict)
}
