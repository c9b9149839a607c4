//! Descriptors for the supported group families and the classification
//! predicates for finite subgroups of division rings restricted to them.
//!
//! `MetacyclicSplit { m, n, k, r }` is the split extension `C_m x| C_n` with
//! `b^{-1} a b = a^r` and action kernel of order `k`, i.e. `o_m(r) = n/k`.
//! Everything order-coprime: `gcd(m, n) = 1` throughout.

use crate::zarith::{
    crt2, divisors, factorize, gcd, is_prime, mult_order, pow_mod, valuation_unchecked,
};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    InvalidParameters(String),
    Parse(String),
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::InvalidParameters(s) => write!(f, "invalid group parameters: {s}"),
            GroupError::Parse(s) => write!(f, "cannot parse group: {s}"),
        }
    }
}

impl std::error::Error for GroupError {}

/// A supported finite group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupSpec {
    /// Cyclic group of order `m`.
    Cyclic(u64),
    /// `<a>_m x|_k <b>_n`, `b^{-1} a b = a^r`, `o_m(r) = n/k`, `gcd(m,n) = 1`.
    MetacyclicSplit { m: u64, n: u64, k: u64, r: u64 },
    /// Generalized quaternion / dicyclic group `Q_{4k}` of order `4k`,
    /// presentation `<a, b | a^{2k} = 1, a^k = b^2, b^{-1} a b = a^{-1}>`.
    QuaternionGen { k: u64 },
    Sl23,
    Sl25,
    BinaryOctahedral,
    /// Direct product with a cyclic group of prime order coprime to the base.
    ProductWithCyclic { base: Box<GroupSpec>, p: u64 },
}

impl GroupSpec {
    pub fn metacyclic(m: u64, n: u64, k: u64, r: u64) -> Result<Self, GroupError> {
        if m == 0 || n == 0 || k == 0 {
            return Err(GroupError::InvalidParameters("m, n, k must be positive".into()));
        }
        if gcd(m, n) != 1 {
            return Err(GroupError::InvalidParameters(format!("gcd({m}, {n}) != 1")));
        }
        if n % k != 0 {
            return Err(GroupError::InvalidParameters(format!("k = {k} must divide n = {n}")));
        }
        let r = r % m;
        if m > 1 && gcd(r, m) != 1 {
            return Err(GroupError::InvalidParameters(format!("gcd(r = {r}, m = {m}) != 1")));
        }
        let order = mult_order(r, m)
            .map_err(|e| GroupError::InvalidParameters(format!("bad r: {e}")))?;
        if order != n / k {
            return Err(GroupError::InvalidParameters(format!(
                "o_{m}({r}) = {order}, expected n/k = {}",
                n / k
            )));
        }
        Ok(GroupSpec::MetacyclicSplit { m, n, k, r })
    }

    pub fn quaternion(order_4k: u64) -> Result<Self, GroupError> {
        if order_4k % 4 != 0 || order_4k < 4 {
            return Err(GroupError::InvalidParameters(format!(
                "Q_{order_4k}: order must be a positive multiple of 4"
            )));
        }
        Ok(GroupSpec::QuaternionGen { k: order_4k / 4 })
    }

    pub fn product(base: GroupSpec, p: u64) -> Result<Self, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::InvalidParameters(format!("{p} is not prime")));
        }
        if base.order() % p == 0 {
            return Err(GroupError::InvalidParameters(format!(
                "p = {p} must be coprime to |base| = {}",
                base.order()
            )));
        }
        Ok(GroupSpec::ProductWithCyclic { base: Box::new(base), p })
    }

    pub fn order(&self) -> u64 {
        match self {
            GroupSpec::Cyclic(m) => *m,
            GroupSpec::MetacyclicSplit { m, n, .. } => m * n,
            GroupSpec::QuaternionGen { k } => 4 * k,
            GroupSpec::Sl23 => 24,
            GroupSpec::Sl25 => 120,
            GroupSpec::BinaryOctahedral => 48,
            GroupSpec::ProductWithCyclic { base, p } => base.order() * p,
        }
    }

    /// Fold products with cyclic factors into the metacyclic/cyclic shape
    /// where possible and rewrite odd dicyclic groups as `C_k x|_2 C_4`.
    /// The result is isomorphic to the input.
    pub fn canonicalize(&self) -> GroupSpec {
        match self {
            GroupSpec::QuaternionGen { k } if *k == 1 => GroupSpec::Cyclic(4),
            GroupSpec::QuaternionGen { k } if *k % 2 == 1 => {
                // odd dicyclic groups are split: Q_{4k} = C_k x|_2 C_4
                GroupSpec::MetacyclicSplit { m: *k, n: 4, k: 2, r: (*k - 1) % *k }
            }
            GroupSpec::MetacyclicSplit { m, n, k, r } if m * n == 0 => {
                unreachable!("validated: {m} {n} {k} {r}")
            }
            GroupSpec::MetacyclicSplit { m: 1, n, .. } => GroupSpec::Cyclic(*n),
            GroupSpec::MetacyclicSplit { m, n: 1, .. } => GroupSpec::Cyclic(*m),
            GroupSpec::MetacyclicSplit { m, n, k, .. } if *k == *n => GroupSpec::Cyclic(m * n),
            GroupSpec::ProductWithCyclic { base, p } => match base.canonicalize() {
                GroupSpec::Cyclic(c) => GroupSpec::Cyclic(c * p),
                GroupSpec::MetacyclicSplit { m, n, k, r } => {
                    let r2 = crt2(r, m, 1 % p, *p).expect("coprime moduli");
                    GroupSpec::MetacyclicSplit { m: m * p, n, k, r: r2 }
                }
                other => GroupSpec::ProductWithCyclic { base: Box::new(other), p: *p },
            },
            other => other.clone(),
        }
    }

    /// Structure string in the notation of the report tables.
    pub fn structure(&self) -> String {
        match self {
            GroupSpec::Cyclic(m) => format!("C{m}"),
            GroupSpec::MetacyclicSplit { m, n, k, r } => {
                let canonical = canonical_action_generator(*m, n / k);
                match canonical {
                    Some(c) if c == *r => format!("C{m} : C{n} (k={k})"),
                    _ => format!("C{m} : C{n} (k={k}, r={r})"),
                }
            }
            GroupSpec::QuaternionGen { k } => format!("Q{}", 4 * k),
            GroupSpec::Sl23 => "SL(2,3)".to_string(),
            GroupSpec::Sl25 => "SL(2,5)".to_string(),
            GroupSpec::BinaryOctahedral => "O*".to_string(),
            GroupSpec::ProductWithCyclic { base, p } => match **base {
                GroupSpec::MetacyclicSplit { .. } => format!("C{p} x ({})", base.structure()),
                _ => format!("C{p} x {}", base.structure()),
            },
        }
    }

    /// Parse the structure grammar: `Cn`, `Cm:Cn(k=K[,r=R])`, `Q4k`,
    /// `SL(2,3)`, `SL(2,5)`, `O*`, `Cp x <spec>`.
    pub fn parse(input: &str) -> Result<Self, GroupError> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        Self::parse_compact(&s).map_err(|_| GroupError::Parse(input.to_string()))
    }

    fn parse_compact(s: &str) -> Result<Self, GroupError> {
        let err = || GroupError::Parse(s.to_string());
        if s.is_empty() {
            return Err(err());
        }
        // product: split at a top-level 'x'
        if let Some(idx) = top_level_x(s) {
            let left = &s[..idx];
            let right = &s[idx + 1..];
            let p: u64 = left
                .strip_prefix('C')
                .and_then(|t| t.parse().ok())
                .ok_or_else(err)?;
            let right =
                right.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(right);
            let base = Self::parse_compact(right)?;
            return GroupSpec::product(base, p);
        }
        match s {
            "SL(2,3)" => return Ok(GroupSpec::Sl23),
            "SL(2,5)" => return Ok(GroupSpec::Sl25),
            "O*" => return Ok(GroupSpec::BinaryOctahedral),
            _ => {}
        }
        if let Some(t) = s.strip_prefix('Q') {
            let n: u64 = t.parse().map_err(|_| err())?;
            return GroupSpec::quaternion(n);
        }
        if let Some(t) = s.strip_prefix('C') {
            if let Some((m_str, rest)) = t.split_once(":C") {
                let m: u64 = m_str.parse().map_err(|_| err())?;
                let (n_str, params) = rest.split_once('(').ok_or_else(err)?;
                let n: u64 = n_str.parse().map_err(|_| err())?;
                let params = params.strip_suffix(')').ok_or_else(err)?;
                let mut k: Option<u64> = None;
                let mut r: Option<u64> = None;
                for piece in params.split(',') {
                    if let Some(v) = piece.strip_prefix("k=") {
                        k = Some(v.parse().map_err(|_| err())?);
                    } else if let Some(v) = piece.strip_prefix("r=") {
                        r = Some(v.parse().map_err(|_| err())?);
                    } else {
                        return Err(err());
                    }
                }
                let k = k.ok_or_else(err)?;
                let r = match r {
                    Some(r) => r,
                    None => {
                        if k == 0 || n % k != 0 {
                            return Err(err());
                        }
                        canonical_action_generator(m, n / k).ok_or_else(|| {
                            GroupError::InvalidParameters(format!(
                                "(Z/{m}Z)^* has no element of order {}",
                                n / k
                            ))
                        })?
                    }
                };
                return GroupSpec::metacyclic(m, n, k, r);
            }
            let m: u64 = t.parse().map_err(|_| err())?;
            if m == 0 {
                return Err(err());
            }
            return Ok(GroupSpec::Cyclic(m));
        }
        Err(err())
    }
}

/// Position of the product separator `x` at nesting depth zero, if any.
fn top_level_x(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            'x' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.structure())
    }
}

/// Smallest residue generating the unique subgroup of order `t` of
/// `(Z/mZ)^*` when that group is cyclic of ordered structure at `m` prime;
/// for general `m` this returns the smallest element of multiplicative order
/// exactly `t`, if one exists.
pub fn canonical_action_generator(m: u64, t: u64) -> Option<u64> {
    if m == 1 {
        return if t == 1 { Some(0) } else { None };
    }
    if t == 1 {
        return Some(1);
    }
    (2..m).find(|&r| gcd(r, m) == 1 && mult_order(r, m).unwrap() == t)
}

/// Per-prime data of the Amitsur (Z)(c) test for `C_m x|_k C_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylowActionData {
    /// prime `p | m` with the order of its Sylow subgroup of `C_m`
    pub p: u64,
    pub p_part: u64,
    /// primes `q | n` whose Sylow subgroup acts non-trivially on `P_p`
    pub moved_primes: Vec<u64>,
    /// `|R_p|`: order of the product of those Sylow subgroups
    pub r_p: u64,
    /// order of the kernel of the `R_p`-action on `P_p`
    pub k_p: u64,
}

/// Verdict of the Z-group membership test, with the first violated clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmitsurVerdict {
    pub holds: bool,
    pub first_violation: Option<String>,
    pub data: Vec<SylowActionData>,
}

/// Decide whether `C_m x|_k C_n` satisfies the (Z)(c) conditions of the
/// classification of Z-groups embeddable in division rings.
pub fn amitsur_z_c(m: u64, n: u64, k: u64, r: u64) -> Result<AmitsurVerdict, GroupError> {
    let GroupSpec::MetacyclicSplit { m, n, k, r } = GroupSpec::metacyclic(m, n, k, r)? else {
        unreachable!()
    };
    let fail = |why: String, data: Vec<SylowActionData>| AmitsurVerdict {
        holds: false,
        first_violation: Some(why),
        data,
    };
    if n / k == 1 {
        return Ok(fail("action is trivial: the group is cyclic, case (Z)(a)".into(), vec![]));
    }

    // Per-prime action data. t_p = order of r on the Sylow p-part of C_m;
    // X_p is the set of primes dividing t_p.
    let mut data = Vec::new();
    for (p, e) in factorize(m) {
        let p_part = p.pow(e);
        let t_p = mult_order(r % p_part, p_part).expect("unit");
        if t_p == 1 {
            continue;
        }
        let moved: Vec<u64> = factorize(t_p).into_iter().map(|(q, _)| q).collect();
        let r_p: u64 = moved.iter().map(|&q| q.pow(valuation_unchecked(q, n))).product();
        data.push(SylowActionData { p, p_part, moved_primes: moved, r_p, k_p: r_p / t_p });
    }

    // C_n must be the direct product of the R_p, i.e. the moved prime sets
    // partition the primes of n.
    let mut seen: Vec<u64> = Vec::new();
    for d in &data {
        for &q in &d.moved_primes {
            if seen.contains(&q) {
                return Ok(fail(
                    format!("prime {q} of n acts non-trivially on two Sylow subgroups of C_m"),
                    data.clone(),
                ));
            }
            seen.push(q);
        }
    }
    let covered: u64 = data.iter().map(|d| d.r_p).product();
    if covered != n {
        return Ok(fail(
            format!("C_n is not the product of the R_p: prod |R_p| = {covered} != {n}"),
            data,
        ));
    }

    for d in &data {
        let p = d.p;
        // modulus m n / (|P_p| |R_p|)
        let cofactor = (m / d.p_part) * (n / d.r_p);
        for &q in &d.moved_primes {
            let vq_k = valuation_unchecked(q, k);
            let qk = q.pow(vq_k);
            let o1 = mult_order(p % qk, qk).expect("unit");
            let o2 = mult_order(p % cofactor, cofactor).expect("unit");
            if o2 % (q * o1) == 0 {
                return Ok(fail(
                    format!(
                        "(a) fails at p = {p}, q = {q}: {q}*o_{{{}}}({p}) = {} divides o_{{{cofactor}}}({p}) = {o2}",
                        q.pow(vq_k),
                        q * o1
                    ),
                    data.clone(),
                ));
            }
            let vq_p1 = valuation_unchecked(q, p - 1);
            if q % 2 == 1 || p % 4 == 1 {
                if vq_p1 > vq_k {
                    return Ok(fail(
                        format!("(b) fails at p = {p}, q = {q}: v_{q}(p-1) = {vq_p1} > v_{q}(k) = {vq_k}"),
                        data.clone(),
                    ));
                }
            } else {
                // q = 2 and p = -1 mod 4
                let v2k = valuation_unchecked(2, k);
                let v2p1 = valuation_unchecked(2, p + 1);
                if !(v2k == 1 || v2k > v2p1) {
                    return Ok(fail(
                        format!(
                            "(c) fails at p = {p}: v_2(k) = {v2k} is neither 1 nor > v_2(p+1) = {v2p1}"
                        ),
                        data.clone(),
                    ));
                }
            }
        }
    }
    Ok(AmitsurVerdict { holds: true, first_violation: None, data })
}

/// The valuation chain implied by (Z)(c):
/// `1 <= v_q(|R_p|/k_p) <= v_q(p-1) <= v_q(k_p)` for every moved prime pair.
/// Holds for every group passing `amitsur_z_c`; a violation is a bug.
pub fn z_c_inequality_chain(m: u64, n: u64, k: u64, r: u64) -> Result<bool, GroupError> {
    let verdict = amitsur_z_c(m, n, k, r)?;
    if !verdict.holds {
        return Err(GroupError::InvalidParameters(
            "z_c_inequality_chain requires a group satisfying (Z)(c)".into(),
        ));
    }
    for d in &verdict.data {
        for &q in &d.moved_primes {
            let a = valuation_unchecked(q, d.r_p / d.k_p);
            let b = valuation_unchecked(q, d.p - 1);
            let c = valuation_unchecked(q, d.k_p);
            if !(1 <= a && a <= b && b <= c) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Central quotient of `C_m x|_k C_n` by `<b^{h n / k}>` for `h | k`:
/// the result is `C_m x|_h C_{h n / k}` with the same `r`.
pub fn central_quotient(g: &GroupSpec, h: u64) -> Result<GroupSpec, GroupError> {
    let GroupSpec::MetacyclicSplit { m, n, k, r } = g else {
        return Err(GroupError::InvalidParameters(
            "central_quotient applies to split metacyclic groups".into(),
        ));
    };
    if h == 0 || k % h != 0 {
        return Err(GroupError::InvalidParameters(format!("h = {h} must divide k = {k}")));
    }
    GroupSpec::metacyclic(*m, h * n / k, h, *r)
}

/// All divisors of `n`, re-exported for the criticality module.
pub fn divisors_of(n: u64) -> Vec<u64> {
    divisors(n)
}

/// `r^x mod m` helper used by the Shoda machinery.
pub fn power_mod(r: u64, x: u64, m: u64) -> u64 {
    pow_mod(r, x, m)
}
