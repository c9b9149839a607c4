//! `F`-critical groups: groups whose group algebra over `F` has an
//! exceptional division-algebra component (type 1) while no proper quotient
//! does. The decision procedures below treat the classification case by
//! case; every predicate reports the first violated condition in the order
//! the conditions are stated, so failures are deterministic and diffable.

use crate::abfield::{AbelianNumberField, FieldError};
use crate::groupzoo::{GroupError, GroupSpec};
use crate::schur::{classify_exceptional, local_profile, ExceptionalKind, LocalIndexProfile, SchurError};
use crate::wedderburn::{
    AlgebraKind, CyclicCyclotomicAlgebra, QuaternionForm, QuaternionSymbol, SimpleComponent,
    WedderburnError,
};
use crate::zarith::{
    crt2, divisors, factorize, gcd, inv_mod, is_prime, mult_order, valuation_unchecked,
};
use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriticalError {
    Field(FieldError),
    Group(GroupError),
    Wedderburn(WedderburnError),
    Schur(SchurError),
}

impl fmt::Display for CriticalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalError::Field(e) => write!(f, "{e}"),
            CriticalError::Group(e) => write!(f, "{e}"),
            CriticalError::Wedderburn(e) => write!(f, "{e}"),
            CriticalError::Schur(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CriticalError {}

impl From<FieldError> for CriticalError {
    fn from(e: FieldError) -> Self {
        CriticalError::Field(e)
    }
}
impl From<GroupError> for CriticalError {
    fn from(e: GroupError) -> Self {
        CriticalError::Group(e)
    }
}
impl From<WedderburnError> for CriticalError {
    fn from(e: WedderburnError) -> Self {
        CriticalError::Wedderburn(e)
    }
}
impl From<SchurError> for CriticalError {
    fn from(e: SchurError) -> Self {
        CriticalError::Schur(e)
    }
}

/// Outcome of a criticality decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalReport {
    pub group: GroupSpec,
    pub field: AbelianNumberField,
    pub verdict: bool,
    /// the exceptional type-1 component, for positive verdicts
    pub witness: Option<SimpleComponent>,
    pub schur_index: Option<u64>,
    pub local_indices: Option<LocalIndexProfile>,
    /// first violated condition, for negative verdicts
    pub failed_condition: Option<String>,
    /// review notes (divisors not covered by any quantifier of case (iii))
    pub diagnostics: Vec<String>,
}

impl CriticalReport {
    fn no(group: &GroupSpec, field: &AbelianNumberField, why: impl Into<String>) -> Self {
        CriticalReport {
            group: group.clone(),
            field: field.clone(),
            verdict: false,
            witness: None,
            schur_index: None,
            local_indices: None,
            failed_condition: Some(why.into()),
            diagnostics: Vec::new(),
        }
    }

    fn yes(
        group: &GroupSpec,
        field: &AbelianNumberField,
        witness: SimpleComponent,
        diagnostics: Vec<String>,
    ) -> Result<Self, CriticalError> {
        let profile = local_profile(&witness.algebra)?;
        let verdict = classify_exceptional(&witness)?;
        if verdict.kind != ExceptionalKind::Type1 {
            return Err(CriticalError::Schur(SchurError::Internal(format!(
                "witness {} for {} over {} is not a type-1 exceptional component ({verdict:?})",
                witness.describe(),
                group.structure(),
                field.notation()
            ))));
        }
        Ok(CriticalReport {
            group: group.clone(),
            field: field.clone(),
            verdict: true,
            schur_index: Some(profile.global_index()),
            local_indices: Some(profile),
            witness: Some(witness),
            failed_condition: None,
            diagnostics,
        })
    }

    /// SmallGroup id from the bundled annotation table, when known.
    pub fn small_group_id(&self) -> Option<u64> {
        small_group_id(self.group.order(), &self.group.structure())
    }
}

/// SmallGroup ids for the rational table, used only to decorate reports.
const SMALL_GROUP_IDS: &[(u64, &str, u64)] = &[
    (40, "C5 : C8 (k=4)", 1),
    (48, "C3 : C16 (k=8)", 1),
    (56, "C7 x Q8", 10),
    (63, "C7 : C9 (k=3)", 1),
    (80, "C5 : C16 (k=4)", 3),
    (84, "C3 x (C7 : C4 (k=2))", 4),
    (104, "C13 : C8 (k=4)", 1),
    (117, "C13 : C9 (k=3)", 1),
    (132, "C11 x (C3 : C4 (k=2))", 1),
    (156, "C13 x (C3 : C4 (k=2))", 3),
    (168, "C7 x SL(2,3)", 22),
    (176, "C11 : C16 (k=8)", 1),
    (184, "C23 x Q8", 10),
];

pub fn small_group_id(order: u64, structure: &str) -> Option<u64> {
    SMALL_GROUP_IDS
        .iter()
        .find(|&&(o, s, _)| o == order && s == structure)
        .map(|&(_, _, id)| id)
}

fn is_odd(x: u64) -> bool {
    x % 2 == 1
}

fn v2(x: u64) -> u32 {
    valuation_unchecked(2, x)
}

/// `SL(2,3)` and `Q_8`: critical iff `F` is totally imaginary and both
/// `e_2(F/Q)` and `f_2(F/Q)` are odd; witness `(-1,-1/F)`.
fn critical_quaternionic_core(
    group: &GroupSpec,
    field: &AbelianNumberField,
) -> Result<CriticalReport, CriticalError> {
    if field.is_totally_real() {
        return Ok(CriticalReport::no(group, field, "F is not totally imaginary"));
    }
    let s = field.splitting_data(2)?;
    if !is_odd(s.e) {
        return Ok(CriticalReport::no(group, field, "e_2(F/Q) is even"));
    }
    if !is_odd(s.f) {
        return Ok(CriticalReport::no(group, field, "f_2(F/Q) is even"));
    }
    let witness = SimpleComponent {
        matrix_size: 1,
        algebra: AlgebraKind::Quaternion(QuaternionSymbol {
            base: field.clone(),
            form: QuaternionForm::MinusOneMinusOne,
        }),
        multiplicity: 1,
    };
    CriticalReport::yes(group, field, witness, vec![])
}

pub fn critical_sl23(field: &AbelianNumberField) -> Result<CriticalReport, CriticalError> {
    critical_quaternionic_core(&GroupSpec::Sl23, field)
}

pub fn critical_q8(field: &AbelianNumberField) -> Result<CriticalReport, CriticalError> {
    critical_quaternionic_core(&GroupSpec::QuaternionGen { k: 2 }, field)
}

/// `SL(2,3) x C_p` and `Q_8 x C_p`: critical iff `o_p(2)` is odd (membership
/// in the classification), `F` is totally real and both `e_2(F(zeta_p)/Q)`
/// and `f_2(F(zeta_p)/Q)` are odd; witness `(-1,-1/F(zeta_p))`.
pub fn critical_with_cyclic(
    base: &GroupSpec,
    p: u64,
    field: &AbelianNumberField,
) -> Result<CriticalReport, CriticalError> {
    let group = GroupSpec::product(base.clone(), p)?;
    if !is_prime(p) || p == 2 {
        return Ok(CriticalReport::no(&group, field, "p must be an odd prime"));
    }
    if !is_odd(mult_order(2, p).map_err(FieldError::Zarith)?) {
        return Ok(CriticalReport::no(
            &group,
            field,
            "o_p(2) is even: the group is not a finite subgroup of a division ring",
        ));
    }
    if !field.is_totally_real() {
        return Ok(CriticalReport::no(&group, field, "F is not totally real"));
    }
    let fp = field.adjoin_root_of_unity(p)?;
    let s = fp.splitting_data(2)?;
    if !is_odd(s.e) {
        return Ok(CriticalReport::no(&group, field, "e_2(F(zeta_p)/Q) is even"));
    }
    if !is_odd(s.f) {
        return Ok(CriticalReport::no(&group, field, "f_2(F(zeta_p)/Q) is even"));
    }
    let witness = SimpleComponent {
        matrix_size: 1,
        algebra: AlgebraKind::Quaternion(QuaternionSymbol {
            base: fp,
            form: QuaternionForm::MinusOneMinusOne,
        }),
        multiplicity: 1,
    };
    CriticalReport::yes(&group, field, witness, vec![])
}

/// `C_p x|_2 C_4`: critical iff `p = -1 mod 4`, `F` totally imaginary,
/// `Q(zeta_p) n F` real-cyclotomic-contained and `e_p(F/Q)`, `f_p(F/Q)` odd;
/// witness `(-1, (zeta_p - zeta_p^{-1})^2 / F(zeta_p + zeta_p^{-1}))`.
pub fn critical_zb(
    p: u64,
    field: &AbelianNumberField,
) -> Result<CriticalReport, CriticalError> {
    assert!(is_prime(p) && p % 2 == 1);
    let group = GroupSpec::metacyclic(p, 4, 2, p - 1)?;
    if p % 4 != 3 {
        return Ok(CriticalReport::no(&group, field, "p = 1 mod 4"));
    }
    if field.is_totally_real() {
        return Ok(CriticalReport::no(&group, field, "F is not totally imaginary"));
    }
    let cyclo = AbelianNumberField::cyclotomic(p)?;
    let real = AbelianNumberField::real_cyclotomic(p)?;
    if !cyclo.intersect(field)?.is_subfield_of(&real)? {
        return Ok(CriticalReport::no(
            &group,
            field,
            "Q(zeta_p) n F is not contained in Q(zeta_p + zeta_p^-1)",
        ));
    }
    let s = field.splitting_data(p)?;
    if !is_odd(s.e) {
        return Ok(CriticalReport::no(&group, field, "e_p(F/Q) is even"));
    }
    if !is_odd(s.f) {
        return Ok(CriticalReport::no(&group, field, "f_p(F/Q) is even"));
    }
    let witness = SimpleComponent {
        matrix_size: 1,
        algebra: AlgebraKind::Quaternion(QuaternionSymbol {
            base: field.compositum(&real)?,
            form: QuaternionForm::Zeta(p),
        }),
        multiplicity: 1,
    };
    CriticalReport::yes(&group, field, witness, vec![])
}

/// `C_q x (C_p x|_2 C_4)`: critical iff `o_q(p)` odd, `p = -1 mod 4`, `F`
/// totally real and `e_p(F(zeta_q)/Q)`, `f_p(F(zeta_q)/Q)` odd; witness
/// `(-1, (zeta_p - zeta_p^{-1})^2 / F(zeta_q, zeta_p + zeta_p^{-1}))`.
pub fn critical_zc_product(
    q: u64,
    p: u64,
    field: &AbelianNumberField,
) -> Result<CriticalReport, CriticalError> {
    assert!(is_prime(p) && is_prime(q) && p != q && p % 2 == 1 && q % 2 == 1);
    let group = GroupSpec::product(GroupSpec::metacyclic(p, 4, 2, p - 1)?, q)?;
    if !is_odd(mult_order(p, q).map_err(FieldError::Zarith)?) {
        return Ok(CriticalReport::no(&group, field, "o_q(p) is even"));
    }
    if p % 4 != 3 {
        return Ok(CriticalReport::no(&group, field, "p = 1 mod 4"));
    }
    if !field.is_totally_real() {
        return Ok(CriticalReport::no(&group, field, "F is not totally real"));
    }
    let fq = field.adjoin_root_of_unity(q)?;
    let s = fq.splitting_data(p)?;
    if !is_odd(s.e) {
        return Ok(CriticalReport::no(&group, field, "e_p(F(zeta_q)/Q) is even"));
    }
    if !is_odd(s.f) {
        return Ok(CriticalReport::no(&group, field, "f_p(F(zeta_q)/Q) is even"));
    }
    let real = AbelianNumberField::real_cyclotomic(p)?;
    let witness = SimpleComponent {
        matrix_size: 1,
        algebra: AlgebraKind::Quaternion(QuaternionSymbol {
            base: fq.compositum(&real)?,
            form: QuaternionForm::Zeta(p),
        }),
        multiplicity: 1,
    };
    CriticalReport::yes(&group, field, witness, vec![])
}

/// Index data of the faithful component of `C_p x|_k C_n` over `F` and of
/// its central quotient at a divisor `h | k`, exactly as in the minimal
/// formulas: `m_p = min { l | (p^f - 1)/gcd(p^f - 1, e) = 0 mod k/gcd(k,l) }`
/// with `K = F(zeta_k, zeta_p + zeta_p^r + ...)`, `e = e_p(F(zeta_pk)/K)`,
/// `f = f_p(K/Q)`; for the quotient, `K_h = K n F(zeta_ph)`,
/// `e_h = e_p(F(zeta_ph)/K_h)`, `f_h = f_p(K_h/Q)` and the modulus is `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZcIndexData {
    pub k_field: AbelianNumberField,
    pub k_h_field: AbelianNumberField,
    pub e: u64,
    pub f: u64,
    pub e_h: u64,
    pub f_h: u64,
    pub m_p: u64,
    pub m_p_h: u64,
}

fn min_index(p: u64, f: u64, e: u64, modulus: u64) -> u64 {
    let pf_minus_1 = BigUint::from(p).pow(f as u32) - 1u32;
    let g = {
        let r: BigUint = &pf_minus_1 % BigUint::from(e);
        let r64 = r.to_u64_digits().first().copied().unwrap_or(0);
        gcd(e, r64)
    };
    let m1 = &pf_minus_1 / BigUint::from(g.max(1));
    (1..=modulus)
        .find(|&l| (&m1 % BigUint::from(modulus / gcd(modulus, l))).is_zero())
        .expect("l = modulus always satisfies the congruence")
}

/// The trace field `Fix(sigma)` of the faithful component: the fixed field
/// of `zeta_pk -> zeta_pk^{r'}` composited with `F`, where `r' = r mod p`,
/// `r' = 1 mod k`.
fn zc_center(
    p: u64,
    k: u64,
    r: u64,
    field: &AbelianNumberField,
) -> Result<AbelianNumberField, CriticalError> {
    let rp = crt2(r % p, p, 1 % k, k).map_err(FieldError::Zarith)?;
    let fix = AbelianNumberField::new(p * k, &[rp])?;
    Ok(field.compositum(&fix)?)
}

fn zc_base_data(
    p: u64,
    n: u64,
    k: u64,
    r: u64,
    field: &AbelianNumberField,
) -> Result<(AbelianNumberField, u64, u64, u64), CriticalError> {
    let _ = n;
    let center = zc_center(p, k, r, field)?;
    let top = field.compositum(&AbelianNumberField::cyclotomic(p * k)?)?;
    let e = top.e_p(p)? / center.e_p(p)?;
    let f = center.f_p(p)?;
    let m_p = min_index(p, f, e, k);
    Ok((center, e, f, m_p))
}

fn zc_quotient_data(
    p: u64,
    h: u64,
    center: &AbelianNumberField,
    field: &AbelianNumberField,
) -> Result<(AbelianNumberField, u64, u64, u64), CriticalError> {
    let f_ph = field.compositum(&AbelianNumberField::cyclotomic(p * h)?)?;
    let k_h = center.intersect(&f_ph)?;
    let e_h = f_ph.e_p(p)? / k_h.e_p(p)?;
    let f_h = k_h.f_p(p)?;
    let m_p_h = min_index(p, f_h, e_h, h);
    Ok((k_h, e_h, f_h, m_p_h))
}

/// Full index data `(K, K_h, e, f, e_h, f_h, m_p, m_{p,h})` for `h | k`.
pub fn zc_index_data(
    p: u64,
    n: u64,
    k: u64,
    r: u64,
    h: u64,
    field: &AbelianNumberField,
) -> Result<ZcIndexData, CriticalError> {
    assert!(h >= 1 && k % h == 0);
    let (center, e, f, m_p) = zc_base_data(p, n, k, r, field)?;
    let (k_h, e_h, f_h, m_p_h) = zc_quotient_data(p, h, &center, field)?;
    Ok(ZcIndexData { k_field: center, k_h_field: k_h, e, f, e_h, f_h, m_p, m_p_h })
}

/// The witness component `(K(zeta_p)/K, sigma, zeta_k)` of the (Z)(c) cases.
fn zc_witness(
    p: u64,
    k: u64,
    r: u64,
    center: AbelianNumberField,
) -> Result<SimpleComponent, CriticalError> {
    let rp = crt2(r % p, p, 1 % k, k).map_err(FieldError::Zarith)?;
    let twist_exp = inv_mod(p % k, k).expect("p is a unit mod k");
    let algebra = CyclicCyclotomicAlgebra::new(center, p * k, rp, k, twist_exp)?;
    Ok(SimpleComponent { matrix_size: 1, algebra: AlgebraKind::Cyclic(algebra), multiplicity: 1 })
}

/// The `n >= 8` case of the Z-group classification, conditions checked in
/// the stated order. `p` must be an odd prime not dividing `n`.
pub fn critical_zc_general(
    p: u64,
    n: u64,
    k: u64,
    r: u64,
    field: &AbelianNumberField,
) -> Result<CriticalReport, CriticalError> {
    let group = GroupSpec::metacyclic(p, n, k, r)?;
    assert!(is_prime(p) && p % 2 == 1 && n >= 8);

    for (q, _) in factorize(n) {
        if k % q != 0 || (n / k) % q != 0 {
            return Ok(CriticalReport::no(
                &group,
                field,
                format!("prime {q} divides n but not both k and n/k"),
            ));
        }
    }

    // E_F(G, <a b^{n/k}>) = G: Q(zeta_p) n F inside the trace field
    let trace_field = AbelianNumberField::new(p, &[r % p])?;
    let meet = AbelianNumberField::cyclotomic(p)?.intersect(field)?;
    if !meet.is_subfield_of(&trace_field)? {
        return Ok(CriticalReport::no(
            &group,
            field,
            "Q(zeta_p) n F is not contained in the trace field Fix(sigma)",
        ));
    }

    let (center, _e, _f, m_p) = zc_base_data(p, n, k, r, field)?;
    if m_p != n / k {
        return Ok(CriticalReport::no(
            &group,
            field,
            format!("m_p = {m_p} differs from n/k = {}", n / k),
        ));
    }

    let odd_primes_of_n: Vec<u64> =
        factorize(n).into_iter().map(|(q, _)| q).filter(|&q| q != 2).collect();
    let all_primes_of_n: Vec<u64> = factorize(n).into_iter().map(|(q, _)| q).collect();
    let vq = |q: u64, x: u64| valuation_unchecked(q, x);

    let check_quotient = |h: u64| -> Result<Option<String>, CriticalError> {
        let (_, _, _, m_p_h) = zc_quotient_data(p, h, &center, field)?;
        if m_p_h >= n / k {
            return Ok(Some(format!(
                "the quotient C{p} x|_{h} C{} still has m_p,{h} = {m_p_h} = n/k",
                h * n / k
            )));
        }
        Ok(None)
    };
    let check_quotient_is_split = |h: u64| -> Result<Option<String>, CriticalError> {
        let (_, _, _, m_p_h) = zc_quotient_data(p, h, &center, field)?;
        if m_p_h != 1 {
            return Ok(Some(format!(
                "n = 2k and F is totally imaginary but m_p,2 = {m_p_h} != 1"
            )));
        }
        Ok(None)
    };

    let mut diagnostics = Vec::new();

    if p % 4 == 1 || n % 2 == 1 {
        // case (i)
        for &q in &all_primes_of_n {
            if vq(q, p - 1) > vq(q, k) {
                return Ok(CriticalReport::no(
                    &group,
                    field,
                    format!("(i): v_{q}(p-1) > v_{q}(k)"),
                ));
            }
        }
        for h in divisors(k) {
            if h == k {
                continue;
            }
            if all_primes_of_n.iter().all(|&q| vq(q, p - 1) <= vq(q, h)) {
                if let Some(why) = check_quotient(h)? {
                    return Ok(CriticalReport::no(&group, field, format!("(i): {why}")));
                }
            }
        }
        if n == 2 * k && field.is_totally_imaginary() {
            if let Some(why) = check_quotient_is_split(2)? {
                return Ok(CriticalReport::no(&group, field, format!("(i): {why}")));
            }
        }
    } else if p % 4 == 3 && v2(k) == 1 && v2(n) == 2 {
        // case (ii)
        for &q in &odd_primes_of_n {
            if vq(q, p - 1) > vq(q, k) {
                return Ok(CriticalReport::no(
                    &group,
                    field,
                    format!("(ii): v_{q}(p-1) > v_{q}(k)"),
                ));
            }
        }
        for h in divisors(k) {
            if h == k || v2(h) != 1 {
                continue;
            }
            if odd_primes_of_n.iter().all(|&q| vq(q, p - 1) <= vq(q, h)) {
                if let Some(why) = check_quotient(h)? {
                    return Ok(CriticalReport::no(&group, field, format!("(ii): {why}")));
                }
            }
        }
    } else if p % 4 == 3 && v2(p + 1) + 1 <= v2(k) && v2(n) == v2(k) + 1 {
        // case (iii)
        for &q in &odd_primes_of_n {
            if vq(q, p - 1) > vq(q, k) {
                return Ok(CriticalReport::no(
                    &group,
                    field,
                    format!("(iii): v_{q}(p-1) > v_{q}(k)"),
                ));
            }
        }
        // (1): divisors with large 2-part
        for h in divisors(k) {
            if h == k || v2(p + 1) + 1 > v2(h) {
                continue;
            }
            if odd_primes_of_n.iter().all(|&q| vq(q, p - 1) <= vq(q, k)) {
                if let Some(why) = check_quotient(h)? {
                    return Ok(CriticalReport::no(&group, field, format!("(iii)(1): {why}")));
                }
            }
        }
        // (2): divisors with 2-part exactly 2
        for h in divisors(k) {
            if h == 2 || h == k || v2(h) != 1 {
                continue;
            }
            if odd_primes_of_n.iter().all(|&q| vq(q, p - 1) <= vq(q, h)) {
                if let Some(why) = check_quotient(h)? {
                    return Ok(CriticalReport::no(&group, field, format!("(iii)(2): {why}")));
                }
            }
        }
        if n == 2 * k && field.is_totally_imaginary() {
            if let Some(why) = check_quotient_is_split(2)? {
                return Ok(CriticalReport::no(&group, field, format!("(iii)(2): {why}")));
            }
        }
        // divisors covered by neither quantifier of case (iii); recorded for
        // review, never silently decided
        for h in divisors(k) {
            if h != 2 && h != k && v2(h) >= 2 && v2(h) <= v2(p + 1) {
                diagnostics.push(format!(
                    "divisor h = {h} of k is checked by neither quantifier of case (iii)"
                ));
            }
        }
    } else {
        return Ok(CriticalReport::no(
            &group,
            field,
            "no subcase applies: the 2-adic shape of (p, n, k) fits none of (i)-(iii)",
        ));
    }

    let witness = zc_witness(p, k, r, center)?;
    CriticalReport::yes(&group, field, witness, diagnostics)
}

/// Neither the binary octahedral group nor `SL(2,5)` is ever `F`-critical.
pub fn never_critical(
    group: &GroupSpec,
    field: &AbelianNumberField,
) -> Result<CriticalReport, CriticalError> {
    Ok(CriticalReport::no(
        group,
        field,
        "never F-critical: the only division candidate is totally definite",
    ))
}

/// Decide `F`-criticality for any supported group.
pub fn is_critical(
    group: &GroupSpec,
    field: &AbelianNumberField,
) -> Result<CriticalReport, CriticalError> {
    let canon = group.canonicalize();
    let report = match &canon {
        GroupSpec::Cyclic(_) => CriticalReport::no(group, field, "the group is abelian"),
        GroupSpec::Sl25 | GroupSpec::BinaryOctahedral => never_critical(group, field)?,
        GroupSpec::Sl23 => reattach(critical_sl23(field)?, group),
        GroupSpec::QuaternionGen { k } => {
            if *k == 2 {
                reattach(critical_q8(field)?, group)
            } else {
                CriticalReport::no(group, field, "Q_{4k} with k even is F-critical only for k = 2")
            }
        }
        GroupSpec::ProductWithCyclic { base, p } => match base.as_ref() {
            GroupSpec::Sl23 => reattach(critical_with_cyclic(&GroupSpec::Sl23, *p, field)?, group),
            GroupSpec::QuaternionGen { k: 2 } => reattach(
                critical_with_cyclic(&GroupSpec::QuaternionGen { k: 2 }, *p, field)?,
                group,
            ),
            _ => CriticalReport::no(
                group,
                field,
                "not in the classification of finite subgroups of division rings",
            ),
        },
        GroupSpec::MetacyclicSplit { m, n, k, r } => {
            critical_metacyclic(group, *m, *n, *k, *r, field)?
        }
    };
    Ok(report)
}

fn reattach(mut report: CriticalReport, group: &GroupSpec) -> CriticalReport {
    report.group = group.clone();
    report
}

fn critical_metacyclic(
    group: &GroupSpec,
    m: u64,
    n: u64,
    k: u64,
    r: u64,
    field: &AbelianNumberField,
) -> Result<CriticalReport, CriticalError> {
    debug_assert!(n / k >= 2, "canonicalize folds trivial actions");
    // split the trivially-acted part of C_m off as a direct cyclic factor
    let mut moved = 1u64;
    let mut fixed = 1u64;
    for (q, e) in factorize(m) {
        let qe = q.pow(e);
        if mult_order(r % qe, qe).map_err(FieldError::Zarith)? == 1 {
            fixed *= qe;
        } else {
            moved *= qe;
        }
    }
    if fixed > 1 {
        if is_prime(fixed) && is_prime(moved) && n == 4 && k == 2 {
            return Ok(reattach(critical_zc_product(fixed, moved, field)?, group));
        }
        return Ok(CriticalReport::no(
            group,
            field,
            "direct product outside the critical family C_q x (C_p x|_2 C_4)",
        ));
    }
    if !is_prime(moved) {
        return Ok(CriticalReport::no(
            group,
            field,
            "m is not prime: the quotient modulo <a^p> already carries a division component",
        ));
    }
    let p = moved;
    if p == 2 {
        // a 2-group C_2 x|... cannot act non-trivially with coprime n
        return Ok(CriticalReport::no(group, field, "no non-trivial coprime action on C_2"));
    }
    if n == 4 && k == 2 {
        return Ok(reattach(critical_zb(p, field)?, group));
    }
    if n >= 8 {
        return Ok(reattach(critical_zc_general(p, n, k, r, field)?, group));
    }
    if k == 1 {
        return Ok(CriticalReport::no(
            group,
            field,
            "k = 1: a faithful action kernel is impossible in a division ring",
        ));
    }
    for (q, _) in factorize(n) {
        if k % q != 0 || (n / k) % q != 0 {
            return Ok(CriticalReport::no(
                group,
                field,
                format!("prime {q} divides n but not both k and n/k"),
            ));
        }
    }
    Ok(CriticalReport::no(group, field, "n < 8 and (n, k) != (4, 2): no case applies"))
}

/// Every parameterization that can possibly be `F`-critical for some `F`,
/// up to the order bound: `Q8`, `SL(2,3)`, their products with a `C_p`, the
/// `C_p x|_2 C_4` family, `C_q x (C_p x|_2 C_4)`, and `C_p x|_k C_n` with
/// `n >= 8` whose primes divide both `k` and `n/k`. One canonical `r` per
/// admissible action subgroup, so each isomorphism class appears once.
pub fn family_candidates(max_order: u64) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    if max_order >= 8 {
        out.push(GroupSpec::QuaternionGen { k: 2 });
    }
    if max_order >= 24 {
        out.push(GroupSpec::Sl23);
    }
    for p in odd_primes_up_to(max_order / 8) {
        out.push(GroupSpec::ProductWithCyclic {
            base: Box::new(GroupSpec::QuaternionGen { k: 2 }),
            p,
        });
    }
    for p in odd_primes_up_to(max_order / 24) {
        if p != 3 {
            out.push(GroupSpec::ProductWithCyclic { base: Box::new(GroupSpec::Sl23), p });
        }
    }
    for p in odd_primes_up_to(max_order / 4) {
        out.push(GroupSpec::MetacyclicSplit { m: p, n: 4, k: 2, r: p - 1 });
    }
    for p in odd_primes_up_to(max_order / 4) {
        for q in odd_primes_up_to(max_order / (4 * p)) {
            if q != p {
                out.push(GroupSpec::ProductWithCyclic {
                    base: Box::new(GroupSpec::MetacyclicSplit { m: p, n: 4, k: 2, r: p - 1 }),
                    p: q,
                });
            }
        }
    }
    let mut n = 8u64;
    while 3 * n <= max_order {
        for k in divisors(n) {
            if k == 1 || k == n {
                continue;
            }
            if factorize(n).iter().any(|&(q, _)| k % q != 0 || (n / k) % q != 0) {
                continue;
            }
            for p in odd_primes_up_to(max_order / n) {
                if n % p == 0 || (p - 1) % (n / k) != 0 {
                    continue;
                }
                let r = crate::groupzoo::canonical_action_generator(p, n / k)
                    .expect("the unit group mod p is cyclic of order p-1");
                out.push(GroupSpec::MetacyclicSplit { m: p, n, k, r });
            }
        }
        n += 1;
    }
    out
}

/// All `F`-critical groups of order at most `max_order`, sorted by order and
/// structure string.
pub fn enumerate_critical(
    field: &AbelianNumberField,
    max_order: u64,
) -> Result<Vec<CriticalReport>, CriticalError> {
    let mut reports = Vec::new();
    for g in family_candidates(max_order) {
        let report = is_critical(&g, field)?;
        if report.verdict {
            reports.push(report);
        }
    }
    reports.sort_by_key(|r| (r.group.order(), r.group.structure()));
    Ok(reports)
}

fn odd_primes_up_to(bound: u64) -> Vec<u64> {
    (3..=bound).filter(|&p| p % 2 == 1 && is_prime(p)).collect()
}

/// The cyclotomic specialization `F = Q(zeta_m)`, `m >= 3`: the criticality
/// conditions collapse to order and valuation checks.
pub fn cyclotomic_specialization(
    group: &GroupSpec,
    m: u64,
) -> Result<CriticalReport, CriticalError> {
    assert!(m >= 3, "the specialization covers Q(zeta_m) with m >= 3");
    let field = AbelianNumberField::cyclotomic(m)?;
    let s = valuation_unchecked(2, m);
    let m_odd = m >> s;
    let canon = group.canonicalize();
    match &canon {
        GroupSpec::Sl23 | GroupSpec::QuaternionGen { k: 2 } => {
            if s > 1 {
                return Ok(CriticalReport::no(group, &field, "v_2(m) > 1"));
            }
            if !is_odd(mult_order(2, m_odd).map_err(FieldError::Zarith)?) {
                return Ok(CriticalReport::no(group, &field, "o_m'(2) is even"));
            }
            let witness = SimpleComponent {
                matrix_size: 1,
                algebra: AlgebraKind::Quaternion(QuaternionSymbol {
                    base: field.clone(),
                    form: QuaternionForm::MinusOneMinusOne,
                }),
                multiplicity: 1,
            };
            Ok(reattach(CriticalReport::yes(&canon, &field, witness, vec![])?, group))
        }
        GroupSpec::MetacyclicSplit { m: p, n: 4, k: 2, .. } if is_prime(*p) => {
            let p = *p;
            if p % 4 != 3 {
                return Ok(CriticalReport::no(group, &field, "p = 1 mod 4"));
            }
            if gcd(p, m) != 1 {
                return Ok(CriticalReport::no(group, &field, "p divides m"));
            }
            if !is_odd(mult_order(p, m).map_err(FieldError::Zarith)?) {
                return Ok(CriticalReport::no(group, &field, "o_m(p) is even"));
            }
            let real = AbelianNumberField::real_cyclotomic(p)?;
            let witness = SimpleComponent {
                matrix_size: 1,
                algebra: AlgebraKind::Quaternion(QuaternionSymbol {
                    base: field.compositum(&real)?,
                    form: QuaternionForm::Zeta(p),
                }),
                multiplicity: 1,
            };
            Ok(reattach(CriticalReport::yes(&canon, &field, witness, vec![])?, group))
        }
        GroupSpec::MetacyclicSplit { m: p, n, k, r } if is_prime(*p) && *n >= 8 => {
            cyclotomic_zc_case(group, *p, *n, *k, *r, m, &field)
        }
        _ => Ok(CriticalReport::no(
            group,
            &field,
            "not covered by the cyclotomic cases: products with C_p need a totally real \
             field and the remaining groups are outside the classification",
        )),
    }
}

/// Case (c) of the cyclotomic specialization: `m_p` evaluated with the
/// closed-form `e = n/k` and `f = o_{mk}(p)`; the quotient checks reuse the
/// general index data over `Q(zeta_m)`.
fn cyclotomic_zc_case(
    group: &GroupSpec,
    p: u64,
    n: u64,
    k: u64,
    r: u64,
    m: u64,
    field: &AbelianNumberField,
) -> Result<CriticalReport, CriticalError> {
    if gcd(p, m) != 1 {
        return Ok(CriticalReport::no(group, field, "p divides m"));
    }
    for (q, _) in factorize(n) {
        if k % q != 0 || (n / k) % q != 0 {
            return Ok(CriticalReport::no(
                group,
                field,
                format!("prime {q} divides n but not both k and n/k"),
            ));
        }
    }
    let f = mult_order(p, crate::zarith::lcm(m, k)).map_err(FieldError::Zarith)?;
    let m_p = min_index(p, f, n / k, k);
    // cross-check the closed forms e = n/k, f = o_{mk}(p) against the
    // general ramification data; a mismatch is a bug, not a verdict
    let (_, e_general, f_general, m_p_general) = zc_base_data(p, n, k, r, field)?;
    if (e_general, f_general, m_p_general) != (n / k, f, m_p) {
        return Err(CriticalError::Schur(SchurError::Internal(format!(
            "cyclotomic closed forms (e, f, m_p) = ({}, {f}, {m_p}) disagree with the \
             general data ({e_general}, {f_general}, {m_p_general}) for {} over CF({m})",
            n / k,
            group.structure()
        ))));
    }
    if m_p != n / k {
        return Ok(CriticalReport::no(
            group,
            field,
            format!("m_p = {m_p} differs from n/k = {}", n / k),
        ));
    }
    // the subcase quantifiers agree with the general theorem at F = Q(zeta_m);
    // run them through the general engine
    let general = critical_zc_general(p, n, k, r, field)?;
    Ok(reattach(general, group))
}
