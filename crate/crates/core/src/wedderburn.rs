//! Simple components of group algebras `FG` for the supported families.
//!
//! Split-coprime metacyclic groups are decomposed through their strong Shoda
//! pairs. For `C_m x|_k C_n` those pairs are parameterized by triples
//! `(d, alpha, beta)`: `alpha | m` with `o_alpha(r) = d` picks the kernel
//! intersection with `<a>`, `beta | n/d` picks the `<b^d>`-part, and the pair
//! is `(G_d, <a^alpha, b^{d beta}>)` with cyclic quotient of order
//! `kappa = alpha * beta`. The resulting component is
//! `M_e(F(zeta_kappa) *_sigma E/H)`, a cyclic cyclotomic algebra.
//!
//! `SL(2,3)`, `SL(2,5)`, the binary octahedral group and the even `Q_{4k}`
//! are not covered by that machinery (they are not split metacyclic); their
//! rational decompositions are carried as fixed data and base-changed.

use crate::abfield::{AbelianNumberField, FieldError};
use crate::groupzoo::{GroupError, GroupSpec};
use crate::zarith::{
    crt2, divisors, euler_phi, factorize, inv_mod, mul_mod, mult_order, pow_mod, ZarithError,
};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WedderburnError {
    Field(FieldError),
    Group(GroupError),
    Unsupported(String),
    Internal(String),
}

impl fmt::Display for WedderburnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WedderburnError::Field(e) => write!(f, "{e}"),
            WedderburnError::Group(e) => write!(f, "{e}"),
            WedderburnError::Unsupported(s) => write!(f, "unsupported: {s}"),
            WedderburnError::Internal(s) => write!(f, "internal invariant violated: {s}"),
        }
    }
}

impl std::error::Error for WedderburnError {}

impl From<FieldError> for WedderburnError {
    fn from(e: FieldError) -> Self {
        WedderburnError::Field(e)
    }
}

impl From<GroupError> for WedderburnError {
    fn from(e: GroupError) -> Self {
        WedderburnError::Group(e)
    }
}

impl From<ZarithError> for WedderburnError {
    fn from(e: ZarithError) -> Self {
        WedderburnError::Field(FieldError::Zarith(e))
    }
}

/// Cyclic cyclotomic algebra `(K(zeta_N)/K, sigma, zeta_t^c)`: the Galois
/// group of `K(zeta_N)/K` is cyclic generated by `sigma: zeta_N -> zeta_N^s`
/// and the crossed-product generator satisfies `u^deg = zeta_t^c`, a root of
/// unity lying in the center `K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicCyclotomicAlgebra {
    center: AbelianNumberField,
    top_conductor: u64,
    sigma_residue: u64,
    twist_order: u64,
    twist_exp: u64,
    degree: u64,
}

impl CyclicCyclotomicAlgebra {
    pub fn new(
        center: AbelianNumberField,
        top_conductor: u64,
        sigma_residue: u64,
        twist_order: u64,
        twist_exp: u64,
    ) -> Result<Self, WedderburnError> {
        assert!(top_conductor > 0 && twist_order > 0);
        let top = center.compositum(&AbelianNumberField::cyclotomic(top_conductor)?)?;
        let degree = top.degree() / center.degree();
        let sigma = crate::zarith::normalize(sigma_residue, top_conductor);
        let image = center.galois_image_mod(top_conductor)?;
        if !image.contains(sigma) {
            return Err(WedderburnError::Internal(format!(
                "sigma = {sigma} mod {top_conductor} does not fix the center {center}"
            )));
        }
        let sigma_order = mult_order(sigma, top_conductor)?;
        if sigma_order != degree {
            return Err(WedderburnError::Internal(format!(
                "sigma has order {sigma_order} but [K(zeta_{top_conductor}):K] = {degree}"
            )));
        }
        let t0 = twist_order / crate::zarith::gcd(twist_order, twist_exp % twist_order);
        if !center.contains_root_of_unity(t0)? {
            return Err(WedderburnError::Internal(format!(
                "twist of order {t0} does not lie in the center {center}"
            )));
        }
        Ok(CyclicCyclotomicAlgebra {
            center,
            top_conductor,
            sigma_residue: sigma,
            twist_order,
            twist_exp: twist_exp % twist_order,
            degree,
        })
    }

    pub fn center(&self) -> &AbelianNumberField {
        &self.center
    }

    pub fn top_conductor(&self) -> u64 {
        self.top_conductor
    }

    pub fn sigma_residue(&self) -> u64 {
        self.sigma_residue
    }

    pub fn twist(&self) -> (u64, u64) {
        (self.twist_order, self.twist_exp)
    }

    /// Order of the twist as a root of unity.
    pub fn twist_root_order(&self) -> u64 {
        if self.twist_order == 1 {
            return 1;
        }
        self.twist_order / crate::zarith::gcd(self.twist_order, self.twist_exp)
    }

    pub fn twist_is_minus_one(&self) -> bool {
        self.twist_root_order() == 2
    }

    /// `[K(zeta_N) : K]`, the degree of the algebra over its center.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn top_field(&self) -> Result<AbelianNumberField, WedderburnError> {
        Ok(self.center.compositum(&AbelianNumberField::cyclotomic(self.top_conductor)?)?)
    }

    /// Quaternion presentation for degree-2 algebras with twist -1 whose
    /// sigma inverts an odd part of the top roots of unity:
    /// `(K(zeta)/K, sigma, -1) = (-1, (zeta_d - zeta_d^{-1})^2 / K)`.
    pub fn quaternion_form(&self) -> Option<QuaternionSymbol> {
        if self.degree != 2 || !self.twist_is_minus_one() {
            return None;
        }
        let mut moved = 1u64;
        for (q, e) in factorize(self.top_conductor) {
            let qe = q.pow(e);
            if self.sigma_residue % qe != 1 {
                moved *= qe;
            }
        }
        if moved < 3 || moved % 2 == 0 || self.sigma_residue % moved != moved - 1 {
            return None;
        }
        Some(QuaternionSymbol { base: self.center.clone(), form: QuaternionForm::Zeta(moved) })
    }

    pub fn describe(&self) -> String {
        let twist = match self.twist_root_order() {
            1 => "1".to_string(),
            2 => "-1".to_string(),
            t0 => {
                let c0 = self.twist_exp / (self.twist_order / t0);
                if c0 == 1 {
                    format!("z{t0}")
                } else {
                    format!("z{t0}^{c0}")
                }
            }
        };
        format!(
            "({}(z{})/{}, s:z->z^{}, {})",
            self.center.notation(),
            self.top_conductor,
            self.center.notation(),
            self.sigma_residue,
            twist
        )
    }
}

/// The quaternion symbols produced by the supported families.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QuaternionForm {
    /// (-1, -1)
    MinusOneMinusOne,
    /// (-1, -3)
    MinusOneMinusThree,
    /// (-2, -5)
    MinusTwoMinusFive,
    /// (-1, (zeta_d - zeta_d^{-1})^2) for an odd d >= 3
    Zeta(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuaternionSymbol {
    pub base: AbelianNumberField,
    pub form: QuaternionForm,
}

impl QuaternionSymbol {
    /// The field the symbol's entries naturally live over; the symbol over a
    /// larger base is the scalar extension of this rational-root symbol.
    pub fn root_base(&self) -> Result<AbelianNumberField, WedderburnError> {
        match self.form {
            QuaternionForm::MinusOneMinusOne
            | QuaternionForm::MinusOneMinusThree
            | QuaternionForm::MinusTwoMinusFive => Ok(AbelianNumberField::rationals()),
            QuaternionForm::Zeta(d) => Ok(AbelianNumberField::real_cyclotomic(d)?),
        }
    }

    pub fn describe(&self) -> String {
        let params = match self.form {
            QuaternionForm::MinusOneMinusOne => "-1,-1".to_string(),
            QuaternionForm::MinusOneMinusThree => "-1,-3".to_string(),
            QuaternionForm::MinusTwoMinusFive => "-2,-5".to_string(),
            QuaternionForm::Zeta(3) => "-1,-3".to_string(),
            QuaternionForm::Zeta(d) => format!("-1,(z{d}-z{d}^-1)^2"),
        };
        format!("({params} / {})", self.base.notation())
    }
}

/// What a simple component is made of.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Field(AbelianNumberField),
    Cyclic(CyclicCyclotomicAlgebra),
    Quaternion(QuaternionSymbol),
}

impl AlgebraKind {
    pub fn center(&self) -> &AbelianNumberField {
        match self {
            AlgebraKind::Field(f) => f,
            AlgebraKind::Cyclic(a) => a.center(),
            AlgebraKind::Quaternion(q) => &q.base,
        }
    }

    /// Degree over the center (square root of the center-dimension).
    pub fn degree(&self) -> u64 {
        match self {
            AlgebraKind::Field(_) => 1,
            AlgebraKind::Cyclic(a) => a.degree(),
            AlgebraKind::Quaternion(_) => 2,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AlgebraKind::Field(f) => f.notation(),
            AlgebraKind::Cyclic(a) => match a.quaternion_form() {
                Some(q) => q.describe(),
                None => a.describe(),
            },
            AlgebraKind::Quaternion(q) => q.describe(),
        }
    }
}

/// `multiplicity` copies of `M_{matrix_size}(algebra)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleComponent {
    pub matrix_size: u64,
    pub algebra: AlgebraKind,
    pub multiplicity: u64,
}

impl SimpleComponent {
    pub fn center(&self) -> &AbelianNumberField {
        self.algebra.center()
    }

    /// `F`-dimension of one copy: `s^2 * deg^2 * [center : F]`.
    pub fn dimension_over(&self, base: &AbelianNumberField) -> Result<u64, WedderburnError> {
        let center = self.center();
        if !base.is_subfield_of(center)? {
            return Err(WedderburnError::Internal(format!(
                "component center {} does not contain the base field {}",
                center.notation(),
                base.notation()
            )));
        }
        let rel = center.degree() / base.degree();
        Ok(self.matrix_size * self.matrix_size * self.algebra.degree() * self.algebra.degree()
            * rel)
    }

    pub fn describe(&self) -> String {
        let inner = self.algebra.describe();
        let body = if self.matrix_size == 1 {
            inner
        } else {
            format!("M{}({})", self.matrix_size, inner)
        };
        if self.multiplicity == 1 {
            body
        } else {
            format!("{} x{}", body, self.multiplicity)
        }
    }
}


// JSON emission: {"size", "center", "algebra": {"kind", ...}, "multiplicity"}
impl Serialize for SimpleComponent {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SimpleComponent", 4)?;
        st.serialize_field("size", &self.matrix_size)?;
        st.serialize_field("center", &self.center().notation())?;
        st.serialize_field("algebra", &self.algebra)?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.end()
    }
}

impl Serialize for AlgebraKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        match self {
            AlgebraKind::Field(f) => {
                map.serialize_entry("kind", "field")?;
                map.serialize_entry("field", &f.notation())?;
            }
            AlgebraKind::Cyclic(a) => {
                map.serialize_entry("kind", "cyclic_cyclotomic")?;
                map.serialize_entry("center", &a.center().notation())?;
                map.serialize_entry("top_conductor", &a.top_conductor())?;
                map.serialize_entry("sigma", &a.sigma_residue())?;
                map.serialize_entry("twist_order", &a.twist().0)?;
                map.serialize_entry("twist_exp", &a.twist().1)?;
            }
            AlgebraKind::Quaternion(q) => {
                map.serialize_entry("kind", "quaternion")?;
                map.serialize_entry("base", &q.base.notation())?;
                let form = match q.form {
                    QuaternionForm::MinusOneMinusOne => "(-1,-1)".to_string(),
                    QuaternionForm::MinusOneMinusThree => "(-1,-3)".to_string(),
                    QuaternionForm::MinusTwoMinusFive => "(-2,-5)".to_string(),
                    QuaternionForm::Zeta(d) => format!("(-1,(z{d}-z{d}^-1)^2)"),
                };
                map.serialize_entry("form", &form)?;
            }
        }
        map.end()
    }
}

/// A strong Shoda pair of `C_m x|_k C_n` in the triple parameterization
/// `(G_d, <a^alpha, b^{d beta}>)`; `kappa = alpha * beta` is the order of the
/// cyclic quotient `H/K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShodaPair {
    pub d: u64,
    pub alpha: u64,
    pub beta: u64,
}

impl ShodaPair {
    pub fn quotient_order(&self) -> u64 {
        self.alpha * self.beta
    }
}

/// All strong Shoda pairs of `C_m x|_k C_n` (one per primitive central
/// idempotent of `QG`), ordered by `(d, alpha, beta)`.
pub fn enumerate_shoda_pairs(m: u64, n: u64, _k: u64, r: u64) -> Vec<ShodaPair> {
    let mut pairs = Vec::new();
    for alpha in divisors(m) {
        let d = mult_order(r % alpha, alpha).expect("r is a unit mod alpha | m");
        for beta in divisors(n / d) {
            pairs.push(ShodaPair { d, alpha, beta });
        }
    }
    pairs.sort_by_key(|p| (p.d, p.alpha, p.beta));
    pairs
}

/// The simple component of `FG` attached to one Shoda pair, with its
/// multiplicity (= number of distinct primitive central idempotents of `FG`
/// sharing this isomorphism type: Galois orbits of faithful characters of
/// `H/K` fused by the conjugation action).
pub fn component_of_pair(
    m: u64,
    n: u64,
    k: u64,
    r: u64,
    pair: &ShodaPair,
    base: &AbelianNumberField,
) -> Result<SimpleComponent, WedderburnError> {
    let _ = (n, k);
    let ShodaPair { d, alpha, beta } = *pair;
    let kappa = alpha * beta;
    // conjugation action of b on H/K as a residue mod kappa
    let x = crt2(r % alpha, alpha, 1 % beta, beta)?;
    let image = base.galois_image_mod(kappa)?;

    // e = min j >= 1 with x^j in I_kappa(F); divides d since the admissible
    // exponents form a subgroup of Z/d
    let mut e = 1u64;
    let mut xp = crate::zarith::normalize(x, kappa);
    while !image.contains(xp) {
        xp = if kappa == 1 { 0 } else { mul_mod(xp, x, kappa) };
        e += 1;
        if e > d {
            return Err(WedderburnError::Internal(format!(
                "action exponent never entered I_{kappa}(F) (m={m}, r={r}, pair {pair:?})"
            )));
        }
    }
    if d % e != 0 {
        return Err(WedderburnError::Internal(format!("e = {e} does not divide d = {d}")));
    }
    let deg = d / e;

    let cyclotomic = AbelianNumberField::cyclotomic(kappa)?;
    let top = base.compositum(&cyclotomic)?;

    // multiplicity: [U(Z/kappa) : I_kappa(F) <x>]
    let fused = image.extend_cyclic(x)?;
    let mult = euler_phi(kappa) / fused.order();

    let algebra = if deg == 1 {
        AlgebraKind::Field(top.clone())
    } else {
        // center = Fix(sigma) inside F(zeta_kappa), where sigma acts as
        // x^e on zeta_kappa and fixes F
        let big = crate::zarith::lcm(base.conductor(), kappa);
        let lifted_base = base.lifted_fixer(big)?;
        let xe = pow_mod(x, e, kappa);
        let tau = lifted_base
            .elements()
            .iter()
            .copied()
            .find(|&s| crate::zarith::normalize(s, kappa) == xe)
            .ok_or_else(|| {
                WedderburnError::Internal(format!(
                    "no Galois lift of x^e = {xe} mod {kappa} fixing {}",
                    base.notation()
                ))
            })?;
        let mut gens: Vec<u64> = top.lifted_fixer(big)?.elements().to_vec();
        gens.push(tau);
        let center = AbelianNumberField::new(big, &gens)?;
        if center.degree() * deg != top.degree() {
            return Err(WedderburnError::Internal(format!(
                "center degree {} inconsistent with [F(zeta_{kappa}):F] = {} and degree {deg}",
                center.degree(),
                top.degree()
            )));
        }
        let twist_exp = inv_mod(alpha % beta.max(1), beta).unwrap_or(0);
        AlgebraKind::Cyclic(CyclicCyclotomicAlgebra::new(center, kappa, xe, beta, twist_exp)?)
    };

    Ok(SimpleComponent { matrix_size: e, algebra, multiplicity: mult })
}

/// Whether `E_F(G, <a b^{n/k}>) = G`: the faithful minimal component stays a
/// crossed product over the whole group iff `Q(zeta_m) n F` is contained in
/// the fixed field of `zeta_m -> zeta_m^r`.
pub fn e_f_is_whole_group(
    m: u64,
    r: u64,
    base: &AbelianNumberField,
) -> Result<bool, WedderburnError> {
    let cyclo = AbelianNumberField::cyclotomic(m)?;
    let meet = cyclo.intersect(base)?;
    let fixed = AbelianNumberField::new(m, &[r])?;
    Ok(meet.is_subfield_of(&fixed)?)
}

fn decompose_metacyclic(
    m: u64,
    n: u64,
    k: u64,
    r: u64,
    base: &AbelianNumberField,
) -> Result<Vec<SimpleComponent>, WedderburnError> {
    enumerate_shoda_pairs(m, n, k, r)
        .iter()
        .map(|pair| component_of_pair(m, n, k, r, pair, base))
        .collect()
}

/// Rational Wedderburn decomposition of `SL(2,3)`:
/// `Q + Q(zeta_3) + M_3(Q) + (-1,-1/Q) + M_2(Q(zeta_3))`.
fn sl23_over_q() -> Result<Vec<SimpleComponent>, WedderburnError> {
    let q = AbelianNumberField::rationals();
    let zeta3 = AbelianNumberField::cyclotomic(3)?;
    Ok(vec![
        field_comp(1, q.clone(), 1),
        field_comp(1, zeta3.clone(), 1),
        field_comp(3, q.clone(), 1),
        quat_comp(1, q, QuaternionForm::MinusOneMinusOne, 1),
        field_comp(2, zeta3, 1),
    ])
}

/// Rational Wedderburn decomposition of `SL(2,5)`:
/// `Q + M_4(Q) + (-1,-1/Q(sqrt 5)) + M_2(-1,-3/Q) + M_5(Q) + M_3(-1,-1/Q) + M_3(Q(sqrt 5))`.
fn sl25_over_q() -> Result<Vec<SimpleComponent>, WedderburnError> {
    let q = AbelianNumberField::rationals();
    let sqrt5 = AbelianNumberField::real_cyclotomic(5)?;
    Ok(vec![
        field_comp(1, q.clone(), 1),
        field_comp(4, q.clone(), 1),
        quat_comp(1, sqrt5.clone(), QuaternionForm::MinusOneMinusOne, 1),
        quat_comp(2, q.clone(), QuaternionForm::MinusOneMinusThree, 1),
        field_comp(5, q.clone(), 1),
        quat_comp(3, q, QuaternionForm::MinusOneMinusOne, 1),
        field_comp(3, sqrt5, 1),
    ])
}

/// Rational Wedderburn decomposition of the binary octahedral group:
/// `2 Q + M_2(Q) + 2 M_3(Q) + (-1,-1/Q(sqrt 2)) + M_2(-1,-3/Q)`.
///
/// The two-dimensional faithful characters pair into the totally definite
/// quaternion algebra over `Q(sqrt 2)`; the four-dimensional faithful one is
/// quaternionic (Frobenius-Schur indicator -1) and ramifies at 3 and the
/// infinite place. The dimension audit pins the rest.
fn binary_octahedral_over_q() -> Result<Vec<SimpleComponent>, WedderburnError> {
    let q = AbelianNumberField::rationals();
    let sqrt2 = AbelianNumberField::new(8, &[7])?;
    Ok(vec![
        field_comp(1, q.clone(), 2),
        field_comp(2, q.clone(), 1),
        field_comp(3, q.clone(), 2),
        quat_comp(1, sqrt2, QuaternionForm::MinusOneMinusOne, 1),
        quat_comp(2, q, QuaternionForm::MinusOneMinusThree, 1),
    ])
}

fn field_comp(size: u64, f: AbelianNumberField, mult: u64) -> SimpleComponent {
    SimpleComponent { matrix_size: size, algebra: AlgebraKind::Field(f), multiplicity: mult }
}

fn quat_comp(size: u64, base: AbelianNumberField, form: QuaternionForm, mult: u64) -> SimpleComponent {
    SimpleComponent {
        matrix_size: size,
        algebra: AlgebraKind::Quaternion(QuaternionSymbol { base, form }),
        multiplicity: mult,
    }
}

/// Base change of a rational decomposition to `F`, component by component:
/// `F (x) M_s(A/K) = M_s(A/FK)^{[F n K : Q]}`.
fn base_change_rational(
    comps: &[SimpleComponent],
    base: &AbelianNumberField,
) -> Result<Vec<SimpleComponent>, WedderburnError> {
    let mut out = Vec::new();
    for c in comps {
        let center = c.center();
        let copies = base.intersect(center)?.degree();
        let new_center = base.compositum(center)?;
        let algebra = match &c.algebra {
            AlgebraKind::Field(_) => AlgebraKind::Field(new_center),
            AlgebraKind::Quaternion(qs) => AlgebraKind::Quaternion(QuaternionSymbol {
                base: new_center,
                form: qs.form.clone(),
            }),
            AlgebraKind::Cyclic(_) => {
                return Err(WedderburnError::Internal(
                    "static tables contain no cyclic records".into(),
                ))
            }
        };
        out.push(SimpleComponent {
            matrix_size: c.matrix_size,
            algebra,
            multiplicity: c.multiplicity * copies,
        });
    }
    Ok(out)
}

/// `F[G x C_p] = F[G] (x)_F F[C_p]` for a prime `p` coprime to `|G|`:
/// tensor every component of `F[G]` with `F` and with the `F(zeta_p)`-part.
fn tensor_with_cyclic_prime(
    comps: &[SimpleComponent],
    base: &AbelianNumberField,
    p: u64,
) -> Result<Vec<SimpleComponent>, WedderburnError> {
    let fp = base.adjoin_root_of_unity(p)?;
    let rel_fp = fp.degree() / base.degree();
    let mult_p = euler_phi(p) / rel_fp;
    let mut out: Vec<SimpleComponent> = comps.to_vec();
    for c in comps {
        let center = c.center();
        let center_p = center.compositum(&fp)?;
        // Z (x)_F F(zeta_p) = Z(zeta_p)^t
        let rel_z = center.degree() / base.degree();
        let rel_zp = center_p.degree() / base.degree();
        let t = rel_z * rel_fp / rel_zp;
        let algebra = match &c.algebra {
            AlgebraKind::Field(_) => AlgebraKind::Field(center_p),
            AlgebraKind::Quaternion(qs) => AlgebraKind::Quaternion(QuaternionSymbol {
                base: center_p,
                form: qs.form.clone(),
            }),
            AlgebraKind::Cyclic(a) => {
                let lifted = CyclicCyclotomicAlgebra::new(
                    center_p,
                    a.top_conductor(),
                    a.sigma_residue(),
                    a.twist().0,
                    a.twist().1,
                )?;
                if lifted.degree() != a.degree() {
                    return Err(WedderburnError::Unsupported(format!(
                        "degree drops under (x) F(zeta_{p}) for {}",
                        a.describe()
                    )));
                }
                AlgebraKind::Cyclic(lifted)
            }
        };
        out.push(SimpleComponent {
            matrix_size: c.matrix_size,
            algebra,
            multiplicity: c.multiplicity * mult_p * t,
        });
    }
    Ok(out)
}

/// Closed-form decomposition of the (non-split) generalized quaternion group
/// `Q_{4k}` with `k` even. Components come from the pairs
/// `(<a>, <a^d>)`, `d | 2k`, `d != 1, 2`: a 2x2 matrix ring over the real
/// cyclotomic field for `d | k`, and for `d` exactly divisible by
/// `2 v_2(k)+1` the quaternion algebra `(-1,-1)` over it.
fn decompose_quaternion_even(
    k: u64,
    base: &AbelianNumberField,
) -> Result<Vec<SimpleComponent>, WedderburnError> {
    assert!(k >= 2 && k % 2 == 0);
    let mut out = vec![field_comp(1, base.clone(), 4)];
    for d in divisors(2 * k) {
        if d <= 2 {
            continue;
        }
        let real = AbelianNumberField::real_cyclotomic(d)?;
        let copies = base.intersect(&real)?.degree();
        let center = base.compositum(&real)?;
        if k % d == 0 {
            out.push(field_comp(2, center, copies));
        } else {
            // d | 2k, d not | k, k even => 4 | d and the symbol is (-1,-1)
            out.push(quat_comp(1, center, QuaternionForm::MinusOneMinusOne, copies));
        }
    }
    Ok(out)
}

/// Full Wedderburn decomposition of `FG`.
pub fn decompose(
    group: &GroupSpec,
    base: &AbelianNumberField,
) -> Result<Vec<SimpleComponent>, WedderburnError> {
    let comps = match group.canonicalize() {
        GroupSpec::Cyclic(c) => decompose_metacyclic(c, 1, 1, 1 % c.max(1), base)?,
        GroupSpec::MetacyclicSplit { m, n, k, r } => decompose_metacyclic(m, n, k, r, base)?,
        GroupSpec::QuaternionGen { k } => decompose_quaternion_even(k, base)?,
        GroupSpec::Sl23 => base_change_rational(&sl23_over_q()?, base)?,
        GroupSpec::Sl25 => base_change_rational(&sl25_over_q()?, base)?,
        GroupSpec::BinaryOctahedral => base_change_rational(&binary_octahedral_over_q()?, base)?,
        GroupSpec::ProductWithCyclic { base: inner, p } => {
            let inner_comps = decompose(&inner, base)?;
            tensor_with_cyclic_prime(&inner_comps, base, p)?
        }
    };
    audit_dimension(group, base, &comps)?;
    Ok(comps)
}

/// Exact dimension audit: the `F`-dimensions of all components must add up
/// to `|G|`.
pub fn audit_dimension(
    group: &GroupSpec,
    base: &AbelianNumberField,
    comps: &[SimpleComponent],
) -> Result<(), WedderburnError> {
    let mut total: u64 = 0;
    for c in comps {
        total += c.multiplicity * c.dimension_over(base)?;
    }
    if total != group.order() {
        return Err(WedderburnError::Internal(format!(
            "dimension audit failed for {} over {}: got {total}, expected {}",
            group.structure(),
            base.notation(),
            group.order()
        )));
    }
    Ok(())
}

/// Test support: tensor a rational decomposition up to `F` using the cyclic
/// algebra base-change rule `(L/K,s,a) (x)_K K' = M_c((LK'/K', s^c, a))`,
/// `c = [L:K]/[LK':K']`. This is the independent route checked against
/// `decompose(G, F)` in the test suite.
pub fn tensor_rational_decomposition(
    comps: &[SimpleComponent],
    base: &AbelianNumberField,
) -> Result<Vec<SimpleComponent>, WedderburnError> {
    let mut out = Vec::new();
    for c in comps {
        let center = c.center();
        let copies = base.intersect(center)?.degree();
        let new_center = base.compositum(center)?;
        let (size, algebra) = match &c.algebra {
            AlgebraKind::Field(_) => (c.matrix_size, AlgebraKind::Field(new_center)),
            AlgebraKind::Quaternion(qs) => (
                c.matrix_size,
                AlgebraKind::Quaternion(QuaternionSymbol {
                    base: new_center,
                    form: qs.form.clone(),
                }),
            ),
            AlgebraKind::Cyclic(a) => {
                let top = new_center
                    .compositum(&AbelianNumberField::cyclotomic(a.top_conductor())?)?;
                let new_degree = top.degree() / new_center.degree();
                let c_factor = a.degree() / new_degree;
                let sigma = pow_mod(a.sigma_residue(), c_factor, a.top_conductor());
                if new_degree == 1 {
                    (c.matrix_size * c_factor, AlgebraKind::Field(top))
                } else {
                    (
                        c.matrix_size * c_factor,
                        AlgebraKind::Cyclic(CyclicCyclotomicAlgebra::new(
                            new_center,
                            a.top_conductor(),
                            sigma,
                            a.twist().0,
                            a.twist().1,
                        )?),
                    )
                }
            }
        };
        out.push(SimpleComponent {
            matrix_size: size,
            algebra,
            multiplicity: c.multiplicity * copies,
        });
    }
    Ok(out)
}
