//! Abelian number fields through the Galois correspondence.
//!
//! A field `F` is stored as the pair (conductor `m`, fixer), where the fixer
//! is the subgroup of `(Z/mZ)^* = Gal(Q(zeta_m)/Q)` whose fixed field is `F`.
//! The conductor is always minimized, so structural equality is equality of
//! fields. Ramification indices and residue degrees of rational primes come
//! out of inertia/decomposition subgroups computed inside `(Z/mZ)^*`.

use crate::zarith::{
    crt2, euler_phi, gcd, is_prime, lcm, mult_order, normalize, valuation_unchecked, CrtSplit,
    ResidueSubgroup, ZarithError,
};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    Zarith(ZarithError),
    NotPrime(u64),
    Parse(String),
    NotSubfield,
    ConductorTooLarge(u64),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::Zarith(e) => write!(f, "{e}"),
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::Parse(s) => write!(f, "cannot parse field notation: {s}"),
            FieldError::NotSubfield => write!(f, "field containment violated"),
            FieldError::ConductorTooLarge(m) => {
                write!(f, "conductor {m} exceeds the supported range")
            }
        }
    }
}

impl std::error::Error for FieldError {}

impl From<ZarithError> for FieldError {
    fn from(e: ZarithError) -> Self {
        FieldError::Zarith(e)
    }
}

/// A rational place: a finite prime or the infinite one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "oo"),
        }
    }
}

/// Splitting data of a rational prime in an abelian number field:
/// `e * f * g = [F:Q]` for finite primes; for the infinite place `e = 2`
/// encodes "totally imaginary" and `f = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSplitting {
    pub place: Place,
    pub e: u64,
    pub f: u64,
    pub g: u64,
}

/// An abelian number field in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianNumberField {
    conductor: u64,
    fixer: ResidueSubgroup,
}

// serialized as { "conductor": m, "fixer": [sorted subgroup] }
impl Serialize for AbelianNumberField {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("AbelianNumberField", 2)?;
        st.serialize_field("conductor", &self.conductor)?;
        st.serialize_field("fixer", &self.fixer.elements())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for AbelianNumberField {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            conductor: u64,
            fixer: Vec<u64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        AbelianNumberField::new(raw.conductor, &raw.fixer).map_err(serde::de::Error::custom)
    }
}

impl AbelianNumberField {
    /// The rational field Q.
    pub fn rationals() -> Self {
        AbelianNumberField { conductor: 1, fixer: ResidueSubgroup::trivial(1) }
    }

    /// The cyclotomic field Q(zeta_m).
    pub fn cyclotomic(m: u64) -> Result<Self, FieldError> {
        Self::new(m, &[1])
    }

    /// The maximal real subfield Q(zeta_m + zeta_m^{-1}).
    pub fn real_cyclotomic(m: u64) -> Result<Self, FieldError> {
        if m == 0 {
            return Err(ZarithError::ZeroModulus.into());
        }
        Self::new(m, &[m - 1])
    }

    /// Field fixed by the subgroup generated by `fixer_generators` inside
    /// `(Z/mZ)^*`, brought to canonical (minimal conductor) form.
    pub fn new(m: u64, fixer_generators: &[u64]) -> Result<Self, FieldError> {
        if m == 0 {
            return Err(ZarithError::ZeroModulus.into());
        }
        if m > crate::zarith::MAX_MODULUS {
            return Err(FieldError::ConductorTooLarge(m));
        }
        let fixer = ResidueSubgroup::closure(m, fixer_generators)?;
        Ok(Self::canonicalize(m, fixer))
    }

    fn canonicalize(mut m: u64, mut fixer: ResidueSubgroup) -> Self {
        // Strip one prime at a time: F lies in Q(zeta_{m/q}) exactly when the
        // kernel of (Z/m)^* -> (Z/(m/q))^* fixes F. This also eats the
        // m = 2 mod 4 redundancy since that kernel is trivial.
        'outer: loop {
            if m == 1 {
                break;
            }
            for (q, _) in crate::zarith::factorize(m) {
                let small = m / q;
                let kernel_in_fixer = (0..q)
                    .map(|t| (1 + t * small) % m)
                    .filter(|&x| crate::zarith::gcd(x, m) == 1)
                    .all(|x| fixer.contains(x));
                if kernel_in_fixer {
                    m = small;
                    fixer = fixer.reduce(small);
                    continue 'outer;
                }
            }
            break;
        }
        AbelianNumberField { conductor: m, fixer }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn fixer(&self) -> &ResidueSubgroup {
        &self.fixer
    }

    /// `[F:Q] = phi(m) / |fixer|`.
    pub fn degree(&self) -> u64 {
        euler_phi(self.conductor) / self.fixer.order()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    /// Complex conjugation is the class of -1; it acts trivially exactly on
    /// the totally real fields.
    pub fn is_totally_real(&self) -> bool {
        if self.conductor <= 2 {
            return true;
        }
        self.fixer.contains(self.conductor - 1)
    }

    pub fn is_totally_imaginary(&self) -> bool {
        !self.is_totally_real()
    }

    /// Fixer lifted to `(Z/LZ)^*` for a multiple `L` of the conductor.
    pub fn lifted_fixer(&self, big_modulus: u64) -> Result<ResidueSubgroup, FieldError> {
        Ok(self.fixer.lift(big_modulus)?)
    }

    /// Whether `zeta_k` lies in the field: lift to `lcm(conductor, k)` and
    /// check that every fixer element is congruent to 1 mod k.
    pub fn contains_root_of_unity(&self, k: u64) -> Result<bool, FieldError> {
        assert!(k > 0);
        if k <= 2 {
            return Ok(true);
        }
        let big = lcm(self.conductor, k);
        if big > crate::zarith::MAX_MODULUS {
            return Err(FieldError::ConductorTooLarge(big));
        }
        let lifted = self.lifted_fixer(big)?;
        Ok(lifted.elements().iter().all(|&x| x % k == 1))
    }

    /// Compositum: intersect the lifted fixers.
    pub fn compositum(&self, other: &AbelianNumberField) -> Result<Self, FieldError> {
        let big = lcm(self.conductor, other.conductor);
        if big > crate::zarith::MAX_MODULUS {
            return Err(FieldError::ConductorTooLarge(big));
        }
        let a = self.lifted_fixer(big)?;
        let b = other.lifted_fixer(big)?;
        Ok(Self::canonicalize(big, a.intersection(&b)))
    }

    /// Intersection: subgroup generated by the lifted fixers.
    pub fn intersect(&self, other: &AbelianNumberField) -> Result<Self, FieldError> {
        let big = lcm(self.conductor, other.conductor);
        if big > crate::zarith::MAX_MODULUS {
            return Err(FieldError::ConductorTooLarge(big));
        }
        let a = self.lifted_fixer(big)?;
        let b = other.lifted_fixer(big)?;
        Ok(Self::canonicalize(big, a.product(&b)))
    }

    /// `self` is a subfield of `other` iff `other`'s lifted fixer is
    /// contained in `self`'s.
    pub fn is_subfield_of(&self, other: &AbelianNumberField) -> Result<bool, FieldError> {
        let big = lcm(self.conductor, other.conductor);
        if big > crate::zarith::MAX_MODULUS {
            return Err(FieldError::ConductorTooLarge(big));
        }
        let a = self.lifted_fixer(big)?;
        let b = other.lifted_fixer(big)?;
        Ok(b.is_subgroup_of(&a))
    }

    /// Adjoin `zeta_k`.
    pub fn adjoin_root_of_unity(&self, k: u64) -> Result<Self, FieldError> {
        self.compositum(&Self::cyclotomic(k)?)
    }

    /// Splitting of the rational prime `p` in `F`, via the inertia subgroup
    /// `I` (units congruent to 1 mod the prime-to-p part) and the Frobenius
    /// class (1 mod p^a, p mod m').
    pub fn splitting_data(&self, p: u64) -> Result<PrimeSplitting, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let m = self.conductor;
        if m == 1 {
            return Ok(PrimeSplitting { place: Place::Finite(p), e: 1, f: 1, g: 1 });
        }
        let a = valuation_unchecked(p, m);
        let pa = p.pow(a);
        let mprime = m / pa;
        // inertia: classes congruent to 1 mod m'
        let inertia = ResidueSubgroup::congruence_kernel(m, mprime)?;
        let frobenius = crt2(1 % pa, pa, p % mprime, mprime)?;
        // [I S : S] = |I| / |I n S| in an abelian group, likewise for D
        let e = inertia.order() / inertia.intersection(&self.fixer).order();
        let decomposition = inertia.extend_cyclic(frobenius)?;
        let ef = decomposition.order() / decomposition.intersection(&self.fixer).order();
        let deg = self.degree();
        Ok(PrimeSplitting { place: Place::Finite(p), e, f: ef / e, g: deg / ef })
    }

    /// Splitting at the infinite place: `e = 2` iff totally imaginary.
    pub fn infinite_splitting(&self) -> PrimeSplitting {
        let e = if self.is_totally_imaginary() { 2 } else { 1 };
        PrimeSplitting { place: Place::Infinite, e, f: 1, g: self.degree() / e }
    }

    /// Absolute ramification index `e_p(F/Q)`.
    pub fn e_p(&self, p: u64) -> Result<u64, FieldError> {
        Ok(self.splitting_data(p)?.e)
    }

    /// Absolute residue degree `f_p(F/Q)`.
    pub fn f_p(&self, p: u64) -> Result<u64, FieldError> {
        Ok(self.splitting_data(p)?.f)
    }

    /// Relative invariants `(e_p(L/F), f_p(L/F))` for `F = self` contained in
    /// `L = sup`, computed as quotients of absolute ones (tower rule).
    pub fn relative_e_f(&self, sup: &AbelianNumberField, p: u64) -> Result<(u64, u64), FieldError> {
        if !self.is_subfield_of(sup)? {
            return Err(FieldError::NotSubfield);
        }
        let below = self.splitting_data(p)?;
        let above = sup.splitting_data(p)?;
        Ok((above.e / below.e, above.f / below.f))
    }

    /// Same relative invariants computed directly from subgroup indices in a
    /// common cyclotomic frame; used to cross-check `relative_e_f`.
    pub fn relative_e_f_subgroups(
        &self,
        sup: &AbelianNumberField,
        p: u64,
    ) -> Result<(u64, u64), FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if !self.is_subfield_of(sup)? {
            return Err(FieldError::NotSubfield);
        }
        let big = lcm(self.conductor, sup.conductor);
        let s_low = self.lifted_fixer(big)?;
        let s_high = sup.lifted_fixer(big)?;
        let a = valuation_unchecked(p, big);
        let pa = p.pow(a);
        let mprime = big / pa;
        let inertia = ResidueSubgroup::congruence_kernel(big, mprime)?;
        let frobenius = crt2(1 % pa, pa, p % mprime, mprime)?;
        let decomposition = inertia.extend_cyclic(frobenius)?;
        // relative inertia is (I n S_F)/(I n S_L), likewise for decomposition
        let e = inertia.intersection(&s_low).order() / inertia.intersection(&s_high).order();
        let ef = decomposition.intersection(&s_low).order()
            / decomposition.intersection(&s_high).order();
        Ok((e, ef / e))
    }

    /// `NF(m,[...])` / `CF(m)` notation used by the report tables.
    pub fn notation(&self) -> String {
        if self.is_rational() {
            return "Q".to_string();
        }
        if self.conductor == 4 && self.fixer.order() == 1 {
            return "GaussianRationals".to_string();
        }
        if self.fixer.order() == 1 {
            return format!("CF({})", self.conductor);
        }
        let list =
            self.fixer.elements().iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        format!("NF({},[ {} ])", self.conductor, list)
    }

    /// Parse `Q`, `CF(m)`, `NF(m,[a1,...,ar])` or `GaussianRationals`.
    /// The `NF` list must be the full fixer subgroup.
    pub fn parse(input: &str) -> Result<Self, FieldError> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "Q" || s == "Rationals" {
            return Ok(Self::rationals());
        }
        if s == "GaussianRationals" {
            return Self::cyclotomic(4);
        }
        if let Some(rest) = s.strip_prefix("CF(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| FieldError::Parse(s.clone()))?;
            let m: u64 = inner.parse().map_err(|_| FieldError::Parse(s.clone()))?;
            return Self::cyclotomic(m);
        }
        if let Some(rest) = s.strip_prefix("NF(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| FieldError::Parse(s.clone()))?;
            let (m_str, list) =
                inner.split_once(",[").ok_or_else(|| FieldError::Parse(s.clone()))?;
            let list = list.strip_suffix(']').ok_or_else(|| FieldError::Parse(s.clone()))?;
            let m: u64 = m_str.parse().map_err(|_| FieldError::Parse(s.clone()))?;
            let mut elems = Vec::new();
            for piece in list.split(',').filter(|p| !p.is_empty()) {
                elems.push(piece.parse::<u64>().map_err(|_| FieldError::Parse(s.clone()))?);
            }
            // the printed list must itself be a subgroup
            let closed = ResidueSubgroup::closure(m, &elems)?;
            let mut sorted = elems.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let closed_elems: Vec<u64> =
                closed.elements().iter().map(|&x| normalize(x, m)).collect();
            if sorted != closed_elems {
                return Err(FieldError::Parse(format!(
                    "{input}: element list is not a full subgroup of (Z/{m}Z)^*"
                )));
            }
            return Self::new(m, &elems);
        }
        Err(FieldError::Parse(input.to_string()))
    }

    /// Residue classes `I_k(F)`: image of `Gal(F(zeta_k)/F)` in `(Z/kZ)^*`.
    pub fn galois_image_mod(&self, k: u64) -> Result<ResidueSubgroup, FieldError> {
        assert!(k > 0);
        let big = lcm(self.conductor, k);
        if big > crate::zarith::MAX_MODULUS {
            return Err(FieldError::ConductorTooLarge(big));
        }
        let lifted = self.lifted_fixer(big)?;
        Ok(lifted.reduce(k))
    }
}

impl fmt::Display for AbelianNumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.notation())
    }
}

/// Residue degree of `p` in `Q(zeta_m)` for `p` not dividing `m` is the
/// multiplicative order of `p` mod `m`; exposed for cross-checks.
pub fn cyclotomic_residue_degree(p: u64, m: u64) -> Result<u64, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if gcd(p, m) != 1 {
        return Err(FieldError::Zarith(ZarithError::NotCoprime { value: p, modulus: m }));
    }
    Ok(mult_order(p, m)?)
}

/// Convenience: the unit-group CRT split along the prime powers of `m`.
pub fn prime_power_split(m: u64) -> Result<CrtSplit, FieldError> {
    let factors: Vec<u64> =
        crate::zarith::factorize(m).into_iter().map(|(p, e)| p.pow(e)).collect();
    if factors.is_empty() {
        return CrtSplit::new(1, &[1]).map_err(FieldError::from);
    }
    Ok(CrtSplit::new(m, &factors)?)
}
