//! Finite abelian p-groups `H_λ = ⊕ Z/p^{λ_i}` and brute-force counting oracles.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{MPoly, Rational};
use crate::error::{AlgebraError, Error, ResourceError};
use crate::partition::Partition;

/// Hard limits for brute-force enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupBounds {
    pub max_group_order: u64,
    pub max_subgroups: u64,
    pub max_tuples: u64,
}

impl Default for GroupBounds {
    fn default() -> Self {
        GroupBounds { max_group_order: 4096, max_subgroups: 1_000_000, max_tuples: 50_000_000 }
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// A concrete group of type `λ` at the prime `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PGroup {
    p: u64,
    lambda: Partition,
    moduli: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
    /// `e(g)`: least `k` with `p^k g = 0`.
    exponents: Vec<u8>,
}

/// An element as a residue tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GElem<'a> {
    group: &'a PGroup,
    residues: Vec<u64>,
}

impl<'a> GElem<'a> {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &GElem<'a>) -> GElem<'a> {
        let residues = self.residues.iter().zip(&other.residues).zip(&self.group.moduli).map(|((a, b), m)| (a + b) % m).collect();
        GElem { group: self.group, residues }
    }

    pub fn scale(&self, k: u64) -> GElem<'a> {
        let residues = self.residues.iter().zip(&self.group.moduli).map(|(a, m)| (a * (k % m)) % m).collect();
        GElem { group: self.group, residues }
    }

    /// Order of the element.
    pub fn order(&self) -> u64 {
        self.group.p.pow(self.group.exponents[self.group.index_of(&self.residues) as usize] as u32)
    }
}

impl PGroup {
    pub fn new(lambda: &Partition, p: u64) -> Result<PGroup, Error> {
        PGroup::with_bounds(lambda, p, &GroupBounds::default())
    }

    pub fn with_bounds(lambda: &Partition, p: u64, bounds: &GroupBounds) -> Result<PGroup, Error> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let order = checked_pow(p, lambda.size()).filter(|&o| o <= bounds.max_group_order);
        let Some(order) = order else {
            let needed = checked_pow(p, lambda.size()).unwrap_or(u64::MAX);
            return Err(ResourceError { bound: "max_group_order", limit: bounds.max_group_order, needed }.into());
        };
        let moduli: Vec<u64> = lambda.parts().iter().map(|&l| p.pow(l as u32)).collect();
        let mut strides = vec![1u64; moduli.len()];
        for i in 1..moduli.len() {
            strides[i] = strides[i - 1] * moduli[i - 1];
        }
        let mut g = PGroup { p, lambda: lambda.clone(), moduli, strides, order, exponents: Vec::new() };
        g.exponents = (0..order).map(|i| g.exponent_of(&g.residues_of(i))).collect();
        Ok(g)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn element(&self, residues: &[u64]) -> GElem<'_> {
        assert_eq!(residues.len(), self.moduli.len());
        GElem { group: self, residues: residues.iter().zip(&self.moduli).map(|(a, m)| a % m).collect() }
    }

    pub fn zero(&self) -> GElem<'_> {
        GElem { group: self, residues: vec![0; self.moduli.len()] }
    }

    pub fn elements(&self) -> impl Iterator<Item = GElem<'_>> {
        (0..self.order).map(|i| GElem { group: self, residues: self.residues_of(i) })
    }

    fn residues_of(&self, mut i: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|m| {
                let r = i % m;
                i /= m;
                r
            })
            .collect()
    }

    fn index_of(&self, residues: &[u64]) -> u64 {
        residues.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    fn exponent_of(&self, residues: &[u64]) -> u8 {
        residues
            .iter()
            .zip(&self.moduli)
            .map(|(&a, &m)| {
                let mut k = 0u8;
                let mut x = a;
                while x != 0 {
                    x = (x * self.p) % m;
                    k += 1;
                }
                k
            })
            .max()
            .unwrap_or(0)
    }

    fn add_idx(&self, a: u64, b: u64) -> u64 {
        let mut out = 0;
        for (i, m) in self.moduli.iter().enumerate() {
            let s = self.strides[i];
            let ra = (a / s) % m;
            let rb = (b / s) % m;
            out += ((ra + rb) % m) * s;
        }
        out
    }

    fn scale_idx(&self, a: u64, k: u64) -> u64 {
        let mut out = 0;
        for (i, m) in self.moduli.iter().enumerate() {
            let s = self.strides[i];
            out += (((a / s) % m) * (k % m) % m) * s;
        }
        out
    }

    fn cyclic(&self, g: u64) -> Vec<u64> {
        let mut out = vec![0];
        let mut x = g;
        while x != 0 {
            out.push(x);
            x = self.add_idx(x, g);
        }
        out
    }
}

fn checked_pow(p: u64, e: usize) -> Option<u64> {
    p.checked_pow(u32::try_from(e).ok()?)
}

/// `|H_λ[p^k]| = p^{λ'_1 + ⋯ + λ'_k}`.
pub fn torsion_order(h: &PGroup, k: usize) -> u64 {
    let c = h.lambda.conjugate();
    let e: usize = (1..=k).map(|i| c.part(i)).sum();
    h.p.pow(e as u32)
}

/// Number of elements killed by `p^k`, by scanning the group.
pub fn torsion_order_brute(h: &PGroup, k: usize) -> u64 {
    h.exponents.iter().filter(|&&e| (e as usize) <= k).count() as u64
}

fn rational_pow(p: u64, e: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// `(x; x)_m` at a rational `x`.
fn poch_rational(x: &Rational, m: usize) -> Rational {
    let mut acc = Rational::one();
    let mut xp = x.clone();
    for _ in 0..m {
        acc *= Rational::one() - &xp;
        xp *= x;
    }
    acc
}

/// `|Aut H_λ| = p^{Σλ'_i²} ∏_j (1/p;1/p)_{m_j}`.
pub fn aut_order(lambda: &Partition, p: u64) -> Rational {
    let c = lambda.conjugate();
    let e: usize = c.parts().iter().map(|&x| x * x).sum();
    let x = rational_pow(p, -1);
    let out = lambda.multiplicities().iter().fold(rational_pow(p, e as i64), |acc, &m| acc * poch_rational(&x, m));
    assert!(out.is_integer() && out > Rational::zero(), "|Aut H_{lambda}| must be a positive integer");
    out
}

/// `|Aut^s(H_λ × H_λ)| = p^{2Σλ'_i² + |λ|} ∏_j (1/p²;1/p²)_{m_j}`.
pub fn auts_order(lambda: &Partition, p: u64) -> Rational {
    let c = lambda.conjugate();
    let e: usize = 2 * c.parts().iter().map(|&x| x * x).sum::<usize>() + lambda.size();
    let x = rational_pow(p, -2);
    let out = lambda.multiplicities().iter().fold(rational_pow(p, e as i64), |acc, &m| acc * poch_rational(&x, m));
    assert!(out.is_integer() && out > Rational::zero(), "|Aut^s| for {lambda} must be a positive integer");
    out
}

type Bits = Vec<u64>;

fn bits_new(n: u64) -> Bits {
    vec![0; n.div_ceil(64) as usize]
}

fn bits_set(b: &mut Bits, i: u64) {
    b[(i / 64) as usize] |= 1 << (i % 64);
}

fn bits_get(b: &Bits, i: u64) -> bool {
    b[(i / 64) as usize] >> (i % 64) & 1 == 1
}

fn bits_members(b: &Bits) -> Vec<u64> {
    let mut out = Vec::new();
    for (w, &word) in b.iter().enumerate() {
        let mut x = word;
        while x != 0 {
            let t = x.trailing_zeros() as u64;
            out.push(w as u64 * 64 + t);
            x &= x - 1;
        }
    }
    out
}

/// Isomorphism type of a subgroup from the sizes of its `p^k`-torsion.
fn classify(h: &PGroup, members: &[u64]) -> Partition {
    let mut counts = vec![0u64; h.lambda.first() + 1];
    for &g in members {
        counts[h.exponents[g as usize] as usize] += 1;
    }
    let mut conj = Vec::new();
    let mut prev_log = 0u32;
    let mut killed = 0u64;
    for c in counts.iter() {
        killed += c;
        let log = ilog(h.p, killed);
        if log > prev_log {
            conj.push((log - prev_log) as usize);
        }
        prev_log = log;
    }
    // conj[k-1] = λ'_k of the subgroup, counting only the nonzero levels
    Partition::new(conj).conjugate()
}

fn ilog(p: u64, mut n: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        debug_assert!(n % p == 0);
        n /= p;
        k += 1;
    }
    k
}

/// `J + C` for subgroups given as member lists.
fn sum_set(h: &PGroup, a: &[u64], b: &[u64]) -> Bits {
    let mut out = bits_new(h.order);
    for &x in a {
        for &y in b {
            bits_set(&mut out, h.add_idx(x, y));
        }
    }
    out
}

fn resource(bound: &'static str, limit: u64, needed: u64) -> Error {
    ResourceError { bound, limit, needed }.into()
}

/// Every subgroup of `H`, as sorted member lists, found by closing the
/// trivial subgroup under joins with cyclic subgroups.
pub fn all_subgroups(h: &PGroup, bounds: &GroupBounds) -> Result<Vec<Vec<u64>>, Error> {
    let mut cyclic_seen: HashSet<Bits> = HashSet::new();
    let mut cyclics: Vec<Vec<u64>> = Vec::new();
    for g in 1..h.order {
        let c = h.cyclic(g);
        let mut b = bits_new(h.order);
        c.iter().for_each(|&x| bits_set(&mut b, x));
        if cyclic_seen.insert(b) {
            cyclics.push(c);
        }
    }
    let mut trivial = bits_new(h.order);
    bits_set(&mut trivial, 0);
    let mut seen: HashSet<Bits> = HashSet::from([trivial.clone()]);
    let mut queue = VecDeque::from([trivial]);
    let mut found = Vec::new();
    while let Some(s) = queue.pop_front() {
        let members = bits_members(&s);
        for c in &cyclics {
            if bits_get(&s, c[1]) {
                continue;
            }
            let joined = sum_set(h, &members, c);
            if !seen.contains(&joined) {
                if seen.len() as u64 >= bounds.max_subgroups {
                    return Err(resource("max_subgroups", bounds.max_subgroups, seen.len() as u64 + 1));
                }
                seen.insert(joined.clone());
                queue.push_back(joined);
            }
        }
        found.push(members);
    }
    Ok(found)
}

/// Subgroup counts by isomorphism type.
pub fn enumerate_subgroups(h: &PGroup) -> Result<BTreeMap<Partition, u64>, Error> {
    enumerate_subgroups_with(h, &GroupBounds::default())
}

pub fn enumerate_subgroups_with(h: &PGroup, bounds: &GroupBounds) -> Result<BTreeMap<Partition, u64>, Error> {
    let mut out = BTreeMap::new();
    for s in all_subgroups(h, bounds)? {
        *out.entry(classify(h, &s)).or_insert(0) += 1;
    }
    Ok(out)
}

/// Independent recount of all subgroups: starting from the trivial group,
/// adjoin one element at a time and close under addition element by element.
pub fn recount_subgroups(h: &PGroup, bounds: &GroupBounds) -> Result<u64, Error> {
    let close = |gens: &[u64]| -> Bits {
        let mut b = bits_new(h.order);
        bits_set(&mut b, 0);
        let mut stack: Vec<u64> = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = h.add_idx(x, g);
                if !bits_get(&b, y) {
                    bits_set(&mut b, y);
                    stack.push(y);
                }
            }
        }
        b
    };
    let mut all: HashSet<Bits> = HashSet::new();
    let mut layer: Vec<(Bits, Vec<u64>)> = vec![(close(&[]), Vec::new())];
    all.insert(layer[0].0.clone());
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (set, gens) in &layer {
            for g in 1..h.order {
                if bits_get(set, g) {
                    continue;
                }
                let mut ngens = gens.clone();
                ngens.push(g);
                let s = close(&ngens);
                if all.insert(s.clone()) {
                    if all.len() as u64 > bounds.max_subgroups {
                        return Err(resource("max_subgroups", bounds.max_subgroups, all.len() as u64));
                    }
                    next.push((s, ngens));
                }
            }
        }
        layer = next;
    }
    Ok(all.len() as u64)
}

/// Number of subgroups of `H` isomorphic to `H_μ`.
pub fn count_subgroups_of_type(h: &PGroup, mu: &Partition) -> Result<u64, Error> {
    if !h.lambda.contains(mu) {
        return Ok(0);
    }
    Ok(enumerate_subgroups(h)?.get(mu).copied().unwrap_or(0))
}

/// Injective homomorphisms `H_λ → H`, enumerating images of the canonical
/// generators. A prefix `f_1..f_{k-1}` generating `S` extends by `f` with
/// `p^{λ_k} f = 0` injectively iff `p^{λ_k - 1} f ∉ S`.
pub fn count_injective_homs(lambda: &Partition, h: &PGroup) -> Result<u64, Error> {
    count_injective_homs_with(lambda, h, &GroupBounds::default())
}

pub fn count_injective_homs_with(lambda: &Partition, h: &PGroup, bounds: &GroupBounds) -> Result<u64, Error> {
    if lambda.is_empty() {
        return Ok(1);
    }
    let parts = lambda.parts();
    let candidates: Vec<Vec<u64>> = parts
        .iter()
        .map(|&l| (0..h.order).filter(|&g| h.exponents[g as usize] as usize <= l).collect())
        .collect();
    let tuples = candidates.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64)).unwrap_or(u64::MAX);
    if tuples > bounds.max_tuples {
        return Err(resource("max_tuples", bounds.max_tuples, tuples));
    }
    let mut start = bits_new(h.order);
    bits_set(&mut start, 0);
    Ok(extend_injection(h, parts, &candidates, 0, &start))
}

fn extend_injection(h: &PGroup, parts: &[usize], candidates: &[Vec<u64>], level: usize, s: &Bits) -> u64 {
    let shift = h.p.pow(parts[level] as u32 - 1);
    let last = level + 1 == parts.len();
    let mut total = 0;
    let members = if last { Vec::new() } else { bits_members(s) };
    for &f in &candidates[level] {
        if bits_get(s, h.scale_idx(f, shift)) {
            continue;
        }
        if last {
            total += 1;
        } else {
            let joined = sum_set(h, &members, &h.cyclic(f));
            total += extend_injection(h, parts, candidates, level + 1, &joined);
        }
    }
    total
}

/// Fully naive injection count: every tuple of generator images whose
/// image subgroup has order `|H_λ|`. Only for tiny cases.
pub fn count_injective_homs_naive(lambda: &Partition, h: &PGroup, bounds: &GroupBounds) -> Result<u64, Error> {
    let parts = lambda.parts();
    let candidates: Vec<Vec<u64>> = parts
        .iter()
        .map(|&l| (0..h.order).filter(|&g| h.exponents[g as usize] as usize <= l).collect())
        .collect();
    let tuples = candidates.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64)).unwrap_or(u64::MAX);
    if tuples > bounds.max_tuples {
        return Err(resource("max_tuples", bounds.max_tuples, tuples));
    }
    let target = checked_pow(h.p, lambda.size()).unwrap_or(u64::MAX);
    let mut count = 0;
    let mut idx = vec![0usize; parts.len()];
    'outer: loop {
        let mut image = vec![0u64];
        for (k, &i) in idx.iter().enumerate() {
            let c = h.cyclic(candidates[k][i]);
            image = bits_members(&sum_set(h, &image, &c));
        }
        if image.len() as u64 == target {
            count += 1;
        }
        for k in 0..idx.len() {
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(count)
}

/// `T(H)`: substitutes `x_k = |H[p^k]|`. Coefficients must already be constants.
pub fn eval_on_group(t: &MPoly, h: &PGroup) -> Result<Rational, Error> {
    let values: Vec<Rational> =
        (1..=t.nvars()).map(|k| Rational::from_integer(BigInt::from(torsion_order(h, k)))).collect();
    let mut acc = Rational::zero();
    for (e, c) in t.terms() {
        let c = c.as_constant().ok_or_else(|| AlgebraError::NotConstant(c.render()))?;
        let mut term = c;
        for (v, &k) in values.iter().zip(e) {
            term *= num_traits::pow(v.clone(), k as usize);
        }
        acc += term;
    }
    Ok(acc)
}

/// Specializes the coefficient parameter of `T` to `p`, then evaluates on `H`.
pub fn eval_specialized(t: &MPoly, h: &PGroup) -> Result<Rational, Error> {
    let p = Rational::from_integer(BigInt::from(h.p));
    let spec = t.try_map_coeffs(|c| c.eval(&p).map(|r| crate::algebra::UniRat::from_rational(&r)))?;
    eval_on_group(&spec, h)
}
