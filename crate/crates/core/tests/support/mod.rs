//! Shared test support: a deterministic PRNG and an independent oracle for
//! rational group algebra decompositions of small split metacyclic groups.
//!
//! The oracle is classical character theory, exercised from scratch: build
//! the group from its multiplication rule, enumerate subgroups, induce all
//! linear characters (metacyclic groups are M-groups, so this reaches every
//! irreducible character), test irreducibility by the norm, and fold the
//! irreducible characters into Galois orbits. The number of orbits is the
//! number of simple components of `QG`, and each orbit contributes a
//! component of rational dimension `orbit_size * degree^2`. Nothing here
//! touches the Shoda-pair machinery under test.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// xorshift64*; deterministic across runs, good enough to spread test cases.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.max(1))
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        self.next() % bound
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// exact arithmetic in Q(zeta_level)
// ---------------------------------------------------------------------------

thread_local! {
    static PHI_CACHE: std::cell::RefCell<HashMap<usize, Vec<BigRational>>> =
        std::cell::RefCell::new(HashMap::new());
}

/// Coefficients of the cyclotomic polynomial `Phi_level` (rational, monic).
fn cyclotomic_poly(level: usize) -> Vec<BigRational> {
    if let Some(cached) = PHI_CACHE.with(|c| c.borrow().get(&level).cloned()) {
        return cached;
    }
    // x^level - 1 divided by Phi_d for all proper divisors d
    let mut num = vec![BigRational::zero(); level + 1];
    num[0] = -BigRational::one();
    num[level] = BigRational::one();
    for d in 1..level {
        if level % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    PHI_CACHE.with(|c| c.borrow_mut().insert(level, num.clone()));
    num
}

fn poly_div_exact(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut rem: Vec<BigRational> = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    assert!(!lead.is_zero());
    let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd)];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone() / lead.clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for j in 0..=dd {
            let t = rem[i - dd + j].clone() - c.clone() * den[j].clone();
            rem[i - dd + j] = t;
        }
    }
    assert!(rem.iter().all(BigRational::is_zero), "division must be exact");
    while quot.len() > 1 && quot.last().unwrap().is_zero() {
        quot.pop();
    }
    quot
}

/// An element of `Q(zeta_level)` in the canonical basis mod `Phi_level`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cyc {
    level: usize,
    coeffs: Vec<BigRational>,
}

impl Cyc {
    pub fn zero(level: usize) -> Self {
        Cyc { level, coeffs: vec![] }
    }

    /// `zeta_level^power`.
    pub fn root(level: usize, power: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); power % level + 1];
        coeffs[power % level] = BigRational::one();
        Cyc { level, coeffs }.reduced()
    }

    fn reduced(mut self) -> Self {
        let phi = cyclotomic_poly(self.level);
        let dd = phi.len() - 1;
        while self.coeffs.len() > dd {
            let i = self.coeffs.len() - 1;
            let c = self.coeffs[i].clone();
            if !c.is_zero() {
                for j in 0..=dd {
                    let t = self.coeffs[i - dd + j].clone() - c.clone() * phi[j].clone();
                    self.coeffs[i - dd + j] = t;
                }
            }
            self.coeffs.pop();
        }
        while self.coeffs.last().map_or(false, BigRational::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        assert_eq!(self.level, other.level);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c.clone();
        }
        Cyc { level: self.level, coeffs }.reduced()
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        assert_eq!(self.level, other.level);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Cyc::zero(self.level);
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = coeffs[i + j].clone() + a.clone() * b.clone();
                coeffs[i + j] = t;
            }
        }
        Cyc { level: self.level, coeffs }.reduced()
    }

    pub fn scale(&self, q: &BigRational) -> Cyc {
        Cyc {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
        .reduced()
    }

    /// Complex conjugation `zeta -> zeta^{-1}` (Galois, so exact).
    pub fn conj(&self) -> Cyc {
        self.galois(self.level - 1)
    }

    /// The Galois twist `zeta -> zeta^t` for `gcd(t, level) = 1`.
    pub fn galois(&self, t: usize) -> Cyc {
        let mut out = Cyc::zero(self.level);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&Cyc::root(self.level, (i * t) % self.level).scale(c));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// explicit split metacyclic groups
// ---------------------------------------------------------------------------

/// `C_m x| C_n` with `b a b^{-1} = a^r` on explicit elements `a^i b^j`; the
/// action subgroup `<r>` matches the abstract group under test, so the two
/// presentations are isomorphic.
pub struct SmallGroup {
    m: u64,
    n: u64,
    pub elems: Vec<(u64, u64)>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl SmallGroup {
    pub fn new(m: u64, n: u64, r: u64) -> Self {
        assert!(gcd(m, n) == 1);
        let r = r % m.max(1);
        let mut elems = Vec::new();
        for j in 0..n {
            for i in 0..m {
                elems.push((i, j));
            }
        }
        let index: HashMap<(u64, u64), usize> =
            elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        // powers of r mod m
        let mut r_pow = vec![1 % m.max(1); n as usize];
        for j in 1..n as usize {
            r_pow[j] = r_pow[j - 1] * r % m.max(1);
        }
        let order = elems.len();
        let mut table = vec![vec![0usize; order]; order];
        for x in 0..order {
            let (i1, j1) = elems[x];
            for y in 0..order {
                let (i2, j2) = elems[y];
                let i = if m == 1 { 0 } else { (i1 + i2 * r_pow[j1 as usize]) % m };
                let j = (j1 + j2) % n;
                table[x][y] = index[&(i, j)];
            }
        }
        let identity = index[&(0, 0)];
        let inverses = (0..order)
            .map(|x| (0..order).find(|&y| table[x][y] == identity).unwrap())
            .collect();
        SmallGroup { m, n, elems, table, inverses }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn power(&self, x: usize, t: u64) -> usize {
        let mut acc = self.identity();
        for _ in 0..t {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> u64 {
        let mut acc = x;
        let mut o = 1u64;
        while acc != self.identity() {
            acc = self.mul(acc, x);
            o += 1;
        }
        o
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order()).fold(1u64, |acc, x| {
            let o = self.element_order(x);
            acc / gcd(acc, o) * o
        })
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for x in 0..self.order() {
            if seen[x] {
                continue;
            }
            let mut class = BTreeSet::new();
            for g in 0..self.order() {
                class.insert(self.mul(self.mul(g, x), self.inverse(g)));
            }
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Classes fused under the power maps coprime to the group order.
    pub fn rational_class_count(&self) -> usize {
        let classes = self.conjugacy_classes();
        let class_of: HashMap<usize, usize> = classes
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |&x| (x, i)))
            .collect();
        let n = self.order() as u64;
        let mut fused: Vec<BTreeSet<usize>> = classes.iter().map(|_| BTreeSet::new()).collect();
        for (i, class) in classes.iter().enumerate() {
            let x = class[0];
            for t in 1..=n {
                if gcd(t, n) == 1 {
                    fused[i].insert(class_of[&self.power(x, t)]);
                }
            }
        }
        let mut groups: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for f in fused {
            groups.insert(f);
        }
        groups.len()
    }

    /// All subgroups, as sorted element lists. Subgroups of metacyclic
    /// groups are 2-generated, so closures of pairs reach all of them.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for g in 0..self.order() {
            for h in g..self.order() {
                out.insert(self.closure(&[g, h]));
            }
        }
        out.into_iter().collect()
    }

    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::new();
        set.insert(self.identity());
        let mut stack: Vec<usize> = gens.to_vec();
        while let Some(x) = stack.pop() {
            if set.insert(x) {
                let snapshot: Vec<usize> = set.iter().copied().collect();
                for y in snapshot {
                    for z in [self.mul(x, y), self.mul(y, x)] {
                        if !set.contains(&z) {
                            stack.push(z);
                        }
                    }
                }
            }
        }
        set.into_iter().collect()
    }
}

// ---------------------------------------------------------------------------
// linear characters, induction, Galois orbits
// ---------------------------------------------------------------------------

/// Linear characters of the subgroup `h` of `g`, as exponent maps
/// `element -> exponent of zeta_level`.
fn linear_characters(g: &SmallGroup, h: &[usize], level: usize) -> Vec<HashMap<usize, usize>> {
    // commutator subgroup of H
    let mut comms = Vec::new();
    for &x in h {
        for &y in h {
            let c = g.mul(
                g.mul(g.inverse(x), g.inverse(y)),
                g.mul(x, y),
            );
            comms.push(c);
        }
    }
    let derived: BTreeSet<usize> = g.closure(&comms).into_iter().collect();

    // cosets of H' in H
    let mut coset_of: HashMap<usize, usize> = HashMap::new();
    let mut coset_reps: Vec<usize> = Vec::new();
    for &x in h {
        if coset_of.contains_key(&x) {
            continue;
        }
        let id = coset_reps.len();
        coset_reps.push(x);
        for &d in &derived {
            coset_of.insert(g.mul(x, d), id);
        }
    }
    let q_order = coset_reps.len();
    // quotient multiplication on coset ids
    let qmul = |a: usize, b: usize| coset_of[&g.mul(coset_reps[a], coset_reps[b])];
    let q_identity = coset_of[&g.identity()];

    // coset orders
    let coset_order = |a: usize| {
        let mut acc = a;
        let mut o = 1usize;
        while acc != q_identity {
            acc = qmul(acc, a);
            o += 1;
        }
        o as u64
    };

    // generating pair for the abelian quotient (metacyclic, so 2 suffice)
    let mut gens: Vec<usize> = Vec::new();
    {
        let span = |gs: &[usize]| -> usize {
            let mut set = BTreeSet::new();
            set.insert(q_identity);
            let mut stack: Vec<usize> = gs.to_vec();
            while let Some(x) = stack.pop() {
                if set.insert(x) {
                    let snap: Vec<usize> = set.iter().copied().collect();
                    for y in snap {
                        let z = qmul(x, y);
                        if !set.contains(&z) {
                            stack.push(z);
                        }
                    }
                }
            }
            set.len()
        };
        let g1 = (0..q_order).max_by_key(|&a| coset_order(a)).unwrap();
        gens.push(g1);
        if span(&gens) < q_order {
            let g2 = (0..q_order)
                .find(|&a| span(&[g1, a]) == q_order)
                .expect("abelian quotients of metacyclic groups are 2-generated");
            gens.push(g2);
        }
    }

    // enumerate exponent assignments on the generators and keep consistent ones
    let mut chars: Vec<HashMap<usize, usize>> = Vec::new();
    let o1 = coset_order(gens[0]);
    let choices1: Vec<usize> = (0..o1).map(|a| (a as usize) * level / o1 as usize).collect();
    let (o2, choices2): (u64, Vec<usize>) = if gens.len() == 2 {
        let o2 = coset_order(gens[1]);
        (o2, (0..o2).map(|a| (a as usize) * level / o2 as usize).collect())
    } else {
        (1, vec![0])
    };
    let _ = o2;
    for &v1 in &choices1 {
        'next: for &v2 in &choices2 {
            // propagate values over the quotient by BFS
            let mut value: HashMap<usize, usize> = HashMap::new();
            value.insert(q_identity, 0);
            value.insert(gens[0], v1);
            if gens.len() == 2 {
                if let Some(&prev) = value.get(&gens[1]) {
                    if prev != v2 {
                        continue 'next;
                    }
                }
                value.insert(gens[1], v2);
            }
            let mut changed = true;
            while changed {
                changed = false;
                let known: Vec<(usize, usize)> = value.iter().map(|(&k, &v)| (k, v)).collect();
                for &(a, va) in &known {
                    for &(b, vb) in &known {
                        let ab = qmul(a, b);
                        let vab = (va + vb) % level;
                        match value.get(&ab) {
                            None => {
                                value.insert(ab, vab);
                                changed = true;
                            }
                            Some(&v) if v != vab => continue 'next,
                            _ => {}
                        }
                    }
                }
            }
            if value.len() != q_order {
                continue 'next;
            }
            // final consistency sweep
            for a in 0..q_order {
                for b in 0..q_order {
                    if (value[&a] + value[&b]) % level != value[&qmul(a, b)] {
                        continue 'next;
                    }
                }
            }
            let mut on_elements = HashMap::new();
            for &x in h {
                on_elements.insert(x, value[&coset_of[&x]]);
            }
            chars.push(on_elements);
        }
    }
    assert_eq!(chars.len(), q_order, "an abelian group has |A| characters");
    chars
}

/// The multiset of component dimensions of `QG` and the component count,
/// computed by inducing linear characters and folding Galois orbits.
pub fn rational_components_oracle(m: u64, n: u64, r: u64) -> (usize, Vec<u64>) {
    let g = SmallGroup::new(m, n, r);
    let level = g.exponent() as usize;
    let classes = g.conjugacy_classes();
    let class_of: HashMap<usize, usize> = classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |&x| (x, i)))
        .collect();

    // all induced-from-linear characters, as value vectors on the classes
    let mut irreducibles: Vec<Vec<Cyc>> = Vec::new();
    let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
    for h in g.subgroups() {
        for lambda in linear_characters(&g, &h, level) {
            let mut values: Vec<Cyc> = Vec::new();
            for class in &classes {
                let rep = class[0];
                // Ind(lambda)(rep) = (1/|H|) sum over x with x rep x^-1 in H
                let mut acc = Cyc::zero(level);
                for x in 0..g.order() {
                    let conj = g.mul(g.mul(x, rep), g.inverse(x));
                    if let Some(&e) = lambda.get(&conj) {
                        acc = acc.add(&Cyc::root(level, e));
                    }
                }
                let scale = BigRational::new(BigInt::from(1), BigInt::from(h.len() as i64));
                values.push(acc.scale(&scale));
            }
            // norm: (1/|G|) sum |class| chi(rep) conj(chi(rep))
            let mut norm = Cyc::zero(level);
            for (i, class) in classes.iter().enumerate() {
                let term = values[i].mul(&values[i].conj());
                let size = BigRational::new(BigInt::from(class.len() as i64), BigInt::one());
                norm = norm.add(&term.scale(&size));
            }
            let norm = norm
                .scale(&BigRational::new(BigInt::one(), BigInt::from(g.order() as i64)))
                .as_rational()
                .expect("the norm of a character is rational");
            if norm != BigRational::one() {
                continue;
            }
            let key: Vec<String> = values.iter().map(|v| format!("{:?}", v)).collect();
            if seen.insert(key) {
                irreducibles.push(values);
            }
        }
    }

    // completeness: metacyclic groups are M-groups
    let degree_of = |chi: &Vec<Cyc>| -> u64 {
        let identity_class = class_of[&g.identity()];
        let d = chi[identity_class].as_rational().expect("degree is rational");
        assert!(d.is_integer() && d.is_positive());
        d.to_integer().try_into().unwrap()
    };
    let sum_sq: u64 = irreducibles.iter().map(|chi| degree_of(chi) * degree_of(chi)).sum();
    assert_eq!(sum_sq, g.order() as u64, "induction from linears must reach every irreducible");

    // Galois orbits: chi^(t)(x) = chi(x^t)
    let powered_class: Vec<Vec<usize>> = (0..level as u64)
        .map(|t| classes.iter().map(|c| class_of[&g.power(c[0], t)]).collect())
        .collect();
    let mut orbit_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let value_key = |chi: &Vec<Cyc>| -> Vec<String> {
        chi.iter().map(|v| format!("{:?}", v)).collect()
    };
    let index_by_key: HashMap<Vec<String>, usize> = irreducibles
        .iter()
        .enumerate()
        .map(|(i, chi)| (value_key(chi), i))
        .collect();
    for i in 0..irreducibles.len() {
        if orbit_of.contains_key(&i) {
            continue;
        }
        let orbit_id = orbits.len();
        let mut members = BTreeSet::new();
        for t in 1..=level {
            if gcd(t as u64, level as u64) != 1 {
                continue;
            }
            let twisted: Vec<Cyc> = (0..classes.len())
                .map(|c| irreducibles[i][powered_class[t % level][c]].clone())
                .collect();
            let j = index_by_key[&value_key(&twisted)];
            members.insert(j);
        }
        for &j in &members {
            orbit_of.insert(j, orbit_id);
        }
        orbits.push(members.into_iter().collect());
    }

    let mut dims: Vec<u64> = orbits
        .iter()
        .map(|orbit| {
            let d = degree_of(&irreducibles[orbit[0]]);
            orbit.len() as u64 * d * d
        })
        .collect();
    dims.sort_unstable();

    // cross-check: number of components = number of rational classes
    assert_eq!(orbits.len(), g.rational_class_count());

    (orbits.len(), dims)
}
