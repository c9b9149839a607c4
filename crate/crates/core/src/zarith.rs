//! Exact integer and residue-class primitives.
//!
//! Everything here works on machine-width integers with `u128` intermediates;
//! moduli are expected to stay at desk scale (at most a few million). The only
//! place arbitrary precision enters the crate is `p^f - 1` in the local index
//! formulas, which lives in [`crate::schur`] on top of `num_bigint`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Errors raised by the arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZarithError {
    NotPrime(u64),
    NotCoprime { value: u64, modulus: u64 },
    ZeroModulus,
    FactorsNotCoprime(u64, u64),
    BadFactorization { product: u64, modulus: u64 },
    TooLarge(u64),
}

impl fmt::Display for ZarithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZarithError::NotPrime(p) => write!(f, "{p} is not prime"),
            ZarithError::NotCoprime { value, modulus } => {
                write!(f, "{value} is not a unit modulo {modulus}")
            }
            ZarithError::ZeroModulus => write!(f, "modulus must be positive"),
            ZarithError::FactorsNotCoprime(a, b) => {
                write!(f, "factors {a} and {b} are not coprime")
            }
            ZarithError::BadFactorization { product, modulus } => {
                write!(f, "factors multiply to {product}, expected {modulus}")
            }
            ZarithError::TooLarge(m) => write!(f, "modulus {m} exceeds the supported range"),
        }
    }
}

impl std::error::Error for ZarithError {}

/// Largest modulus the residue machinery accepts. Trial division and unit
/// group enumeration are linear in the modulus, so this is a sanity bound,
/// not a hard algorithmic limit.
pub const MAX_MODULUS: u64 = 10_000_000;

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse, `None` when `gcd(a, m) != 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Deterministic primality by trial division; adequate at desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization `n = prod p_i^{e_i}` with ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize: n must be positive");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0);
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n > 0);
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// `v_p(m)`: the exponent of the prime `p` in `m`.
pub fn valuation(p: u64, m: u64) -> Result<u32, ZarithError> {
    if !is_prime(p) {
        return Err(ZarithError::NotPrime(p));
    }
    if m == 0 {
        return Err(ZarithError::ZeroModulus);
    }
    Ok(valuation_unchecked(p, m))
}

/// `v_p(m)` where `p` is already known to be prime.
pub fn valuation_unchecked(p: u64, mut m: u64) -> u32 {
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// Multiplicative order of `r` modulo `m`. Requires `gcd(r, m) = 1`.
pub fn mult_order(r: u64, m: u64) -> Result<u64, ZarithError> {
    if m == 0 {
        return Err(ZarithError::ZeroModulus);
    }
    if m == 1 {
        return Ok(1);
    }
    let r = r % m;
    if gcd(r, m) != 1 {
        return Err(ZarithError::NotCoprime { value: r, modulus: m });
    }
    // The order divides phi(m); scan its divisors in increasing order.
    let phi = euler_phi(m);
    for d in divisors(phi) {
        if pow_mod(r, d, m) == 1 {
            return Ok(d);
        }
    }
    unreachable!("order of a unit divides phi(m)")
}

/// Canonical residue representative in `[0, m)`.
pub fn normalize(x: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    x % m
}

/// Two-modulus Chinese remainder combination for coprime moduli.
pub fn crt2(r1: u64, m1: u64, r2: u64, m2: u64) -> Result<u64, ZarithError> {
    if m1 == 0 || m2 == 0 {
        return Err(ZarithError::ZeroModulus);
    }
    if gcd(m1, m2) != 1 {
        return Err(ZarithError::FactorsNotCoprime(m1, m2));
    }
    let m = m1 * m2;
    // x = r1 + m1 * t with t = (r2 - r1) / m1 mod m2
    let inv = inv_mod(m1 % m2, m2).expect("coprime moduli");
    let diff = ((r2 % m2) + m2 - (r1 % m2)) % m2;
    let t = mul_mod(diff, inv, m2);
    Ok((r1 % m + mul_mod(m1, t, m)) % m)
}

/// Unit residues modulo `m`, ascending. For `m = 1` the group is trivial and
/// is represented by the single residue `0` (the class of 1 mod 1).
pub fn units(m: u64) -> Vec<u64> {
    assert!(m > 0);
    if m == 1 {
        return vec![0];
    }
    (1..m).filter(|&x| gcd(x, m) == 1).collect()
}

/// A subgroup of `(Z/mZ)^*`, stored as its full sorted element list.
///
/// Groups at desk scale are small, so the flat representation keeps equality,
/// membership and serialization canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueSubgroup {
    modulus: u64,
    elements: Vec<u64>,
}

impl ResidueSubgroup {
    /// Smallest multiplicatively closed subset of `(Z/mZ)^*` containing 1 and
    /// the generators. Closure under inverses is automatic in a finite group.
    pub fn closure(modulus: u64, generators: &[u64]) -> Result<Self, ZarithError> {
        if modulus == 0 {
            return Err(ZarithError::ZeroModulus);
        }
        if modulus > MAX_MODULUS {
            return Err(ZarithError::TooLarge(modulus));
        }
        let one = normalize(1, modulus);
        let mut gens = Vec::with_capacity(generators.len());
        for &g in generators {
            let g = normalize(g, modulus);
            if modulus > 1 && gcd(g, modulus) != 1 {
                return Err(ZarithError::NotCoprime { value: g, modulus });
            }
            gens.push(g);
        }
        let mut set: BTreeSet<u64> = BTreeSet::new();
        set.insert(one);
        let mut stack: Vec<u64> = gens;
        while let Some(x) = stack.pop() {
            if set.insert(x) {
                let snapshot: Vec<u64> = set.iter().copied().collect();
                for y in snapshot {
                    let xy = if modulus == 1 { 0 } else { mul_mod(x, y, modulus) };
                    if !set.contains(&xy) {
                        stack.push(xy);
                    }
                }
            }
        }
        Ok(ResidueSubgroup { modulus, elements: set.into_iter().collect() })
    }

    pub fn trivial(modulus: u64) -> Self {
        Self::closure(modulus, &[]).expect("trivial subgroup")
    }

    /// The congruence kernel `{x in (Z/mZ)^* : x = 1 mod d}` for `d | m`,
    /// built directly (it is a subgroup, no closure needed).
    pub fn congruence_kernel(modulus: u64, d: u64) -> Result<Self, ZarithError> {
        assert!(d > 0 && modulus % d == 0);
        if modulus == 0 {
            return Err(ZarithError::ZeroModulus);
        }
        if modulus > MAX_MODULUS {
            return Err(ZarithError::TooLarge(modulus));
        }
        if modulus == 1 {
            return Ok(Self::trivial(1));
        }
        let elements: Vec<u64> = (0..modulus / d)
            .map(|t| (1 + t * d) % modulus)
            .filter(|&x| gcd(x, modulus) == 1)
            .collect();
        let mut elements = elements;
        elements.sort_unstable();
        Ok(ResidueSubgroup { modulus, elements })
    }

    /// Subgroup generated by this one and a single extra unit, as the union
    /// of the cosets `g^j * self`; linear in the output size.
    pub fn extend_cyclic(&self, g: u64) -> Result<Self, ZarithError> {
        let m = self.modulus;
        let g = normalize(g, m);
        if m > 1 && gcd(g, m) != 1 {
            return Err(ZarithError::NotCoprime { value: g, modulus: m });
        }
        if m == 1 || self.contains(g) {
            return Ok(self.clone());
        }
        let mut set: BTreeSet<u64> = self.elements.iter().copied().collect();
        let mut power = g;
        while !self.contains(power) {
            for &x in &self.elements {
                set.insert(mul_mod(power, x, m));
            }
            power = mul_mod(power, g, m);
        }
        Ok(ResidueSubgroup { modulus: m, elements: set.into_iter().collect() })
    }

    pub fn full(modulus: u64) -> Self {
        assert!(modulus > 0 && modulus <= MAX_MODULUS);
        ResidueSubgroup { modulus, elements: units(modulus) }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&normalize(x, self.modulus)).is_ok()
    }

    pub fn is_full(&self) -> bool {
        self.order() == euler_phi(self.modulus)
    }

    pub fn is_subgroup_of(&self, other: &ResidueSubgroup) -> bool {
        self.modulus == other.modulus && self.elements.iter().all(|&x| other.contains(x))
    }

    /// Subgroup generated by this one together with `extra` elements.
    pub fn extended(&self, extra: &[u64]) -> Result<Self, ZarithError> {
        let mut gens = self.elements.clone();
        gens.extend_from_slice(extra);
        Self::closure(self.modulus, &gens)
    }

    /// Product subgroup `self * other` (same modulus; subgroups of an abelian
    /// group, so the product set is again a subgroup).
    pub fn product(&self, other: &ResidueSubgroup) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let m = self.modulus;
        let mut set = BTreeSet::new();
        for &x in &self.elements {
            for &y in &other.elements {
                set.insert(if m == 1 { 0 } else { mul_mod(x, y, m) });
            }
        }
        ResidueSubgroup { modulus: m, elements: set.into_iter().collect() }
    }

    pub fn intersection(&self, other: &ResidueSubgroup) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let elements: Vec<u64> =
            self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        ResidueSubgroup { modulus: self.modulus, elements }
    }

    /// Preimage under the reduction `(Z/LZ)^* -> (Z/mZ)^*`; requires `m | L`.
    pub fn lift(&self, big_modulus: u64) -> Result<Self, ZarithError> {
        assert!(big_modulus % self.modulus == 0, "lift target must be a multiple");
        if big_modulus > MAX_MODULUS {
            return Err(ZarithError::TooLarge(big_modulus));
        }
        if big_modulus == self.modulus {
            return Ok(self.clone());
        }
        if self.modulus == 1 {
            return Ok(Self::full(big_modulus));
        }
        let elements: Vec<u64> =
            units(big_modulus).into_iter().filter(|&x| self.contains(x % self.modulus)).collect();
        Ok(ResidueSubgroup { modulus: big_modulus, elements })
    }

    /// Image under the reduction map to `(Z/dZ)^*`; requires `d | modulus`.
    pub fn reduce(&self, small_modulus: u64) -> Self {
        assert!(small_modulus > 0 && self.modulus % small_modulus == 0);
        let mut set = BTreeSet::new();
        for &x in &self.elements {
            set.insert(normalize(x, small_modulus));
        }
        ResidueSubgroup { modulus: small_modulus, elements: set.into_iter().collect() }
    }
}

/// Chinese-remainder decomposition of `(Z/mZ)^*` along a coprime factorization.
#[derive(Debug, Clone)]
pub struct CrtSplit {
    modulus: u64,
    factors: Vec<u64>,
}

impl CrtSplit {
    pub fn new(modulus: u64, factors: &[u64]) -> Result<Self, ZarithError> {
        if modulus == 0 {
            return Err(ZarithError::ZeroModulus);
        }
        let mut product = 1u64;
        for (i, &a) in factors.iter().enumerate() {
            if a == 0 {
                return Err(ZarithError::ZeroModulus);
            }
            for &b in &factors[i + 1..] {
                if gcd(a, b) != 1 {
                    return Err(ZarithError::FactorsNotCoprime(a, b));
                }
            }
            product = product.checked_mul(a).ok_or(ZarithError::TooLarge(modulus))?;
        }
        if product != modulus {
            return Err(ZarithError::BadFactorization { product, modulus });
        }
        Ok(CrtSplit { modulus, factors: factors.to_vec() })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Component residues of a unit `x` modulo each factor.
    pub fn split(&self, x: u64) -> Result<Vec<u64>, ZarithError> {
        let x = normalize(x, self.modulus);
        if self.modulus > 1 && gcd(x, self.modulus) != 1 {
            return Err(ZarithError::NotCoprime { value: x, modulus: self.modulus });
        }
        Ok(self.factors.iter().map(|&f| normalize(x, f)).collect())
    }

    /// Reassemble a unit from its component residues.
    pub fn combine(&self, parts: &[u64]) -> Result<u64, ZarithError> {
        assert_eq!(parts.len(), self.factors.len());
        let mut r = 0u64;
        let mut m = 1u64;
        for (&part, &f) in parts.iter().zip(&self.factors) {
            if f > 1 && gcd(part % f, f) != 1 {
                return Err(ZarithError::NotCoprime { value: part, modulus: f });
            }
            r = crt2(r, m, part % f, f)?;
            m *= f;
        }
        Ok(normalize(r, self.modulus))
    }
}
