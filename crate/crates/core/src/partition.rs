//! Integer partitions: parsing, statistics, containment and enumeration.
//!
//! A [`Partition`] stores its parts in weakly decreasing order with no
//! trailing zeros. Conjugates and multiplicities are derived on demand.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// A weakly decreasing finite sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition from parts that are already weakly decreasing.
    /// Zero parts are dropped.
    ///
    /// Panics if the parts are not weakly decreasing; use [`Partition::from_unsorted`]
    /// for arbitrary input.
    pub fn new(parts: impl Into<Vec<usize>>) -> Self {
        let mut parts = parts.into();
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "partition parts must be weakly decreasing: {parts:?}"
        );
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn from_unsorted(parts: impl Into<Vec<usize>>) -> Self {
        let mut parts = parts.into();
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// The partition `1^{m_1} 2^{m_2} ...` with `mults[i-1] = m_i`.
    pub fn from_multiplicities(mults: &[usize]) -> Self {
        let mut parts = Vec::new();
        for (i, &m) in mults.iter().enumerate().rev() {
            parts.extend(std::iter::repeat(i + 1).take(m));
        }
        Partition { parts }
    }

    /// The rectangle `(width^height)`.
    pub fn rectangle(width: usize, height: usize) -> Self {
        if width == 0 {
            return Partition::empty();
        }
        Partition { parts: vec![width; height] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `i` (1-based); zero past the length.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Largest part, 0 for the empty partition.
    pub fn first(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.first();
        let parts = (1..=width)
            .map(|i| self.parts.iter().take_while(|&&p| p >= i).count())
            .collect();
        Partition { parts }
    }

    /// `m_i(λ)`, the number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// `[m_1, ..., m_{λ_1}]`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.first()];
        for &p in &self.parts {
            m[p - 1] += 1;
        }
        m
    }

    /// `n(λ) = Σ (i-1) λ_i`. Debug builds also check it against `Σ C(λ'_i, 2)`.
    pub fn nstat(&self) -> usize {
        let by_rows: usize = self.parts.iter().enumerate().map(|(i, &p)| i * p).sum();
        debug_assert_eq!(by_rows, nstat_by_columns(self));
        by_rows
    }

    /// True iff `other ⊆ self`, i.e. `other_i ≤ self_i` for every `i`.
    pub fn contains(&self, other: &Partition) -> bool {
        let rows = other.len() <= self.len()
            && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b);
        debug_assert_eq!(rows, {
            let (sc, oc) = (self.conjugate(), other.conjugate());
            oc.len() <= sc.len() && oc.parts.iter().zip(&sc.parts).all(|(a, b)| a <= b)
        });
        rows
    }

    /// `Σ_i λ_i μ_i`.
    pub fn dot(&self, other: &Partition) -> usize {
        self.parts.iter().zip(&other.parts).map(|(a, b)| a * b).sum()
    }

    /// Renders in multiplicity form, e.g. `1^2 3^1`.
    pub fn to_multiplicity_string(&self) -> String {
        self.multiplicities()
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, m)| format!("{}^{}", i + 1, m))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn nstat_by_columns(p: &Partition) -> usize {
    p.conjugate().parts.iter().map(|&c| c * c.saturating_sub(1) / 2).sum()
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by size, then lexicographically on parts.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| self.parts.cmp(&other.parts))
    }
}

impl FromStr for Partition {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_partition(s)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_partition(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses either the comma form (`"3,1,1"`) or the multiplicity form
/// (`"1^2 3^1"`, where a bare `3` means `3^1`). Blank input is the empty partition.
///
/// Comma lists must already be weakly decreasing.
pub fn parse_partition(text: &str) -> Result<Partition, ParseError> {
    let text = text.trim();
    if text.is_empty() || text == "0" || text == "()" {
        return Ok(Partition::empty());
    }
    if text.contains('^') {
        return parse_multiplicity_form(text);
    }
    let inner = text.trim_start_matches('(').trim_end_matches(')');
    let mut parts = Vec::new();
    for token in inner.split(',') {
        let token = token.trim();
        let value: i64 = token.parse().map_err(|_| ParseError::BadToken(token.to_string()))?;
        if value <= 0 {
            return Err(ParseError::NonPositivePart(token.to_string()));
        }
        parts.push(value as usize);
    }
    if let Some(w) = parts.windows(2).find(|w| w[0] < w[1]) {
        return Err(ParseError::NotDecreasing(format!("{},{}", w[0], w[1])));
    }
    Ok(Partition { parts })
}

fn parse_multiplicity_form(text: &str) -> Result<Partition, ParseError> {
    let mut mults: Vec<usize> = Vec::new();
    for clause in text.split(|c: char| c.is_whitespace() || c == ',').filter(|c| !c.is_empty()) {
        let (part, mult) = clause.split_once('^').unwrap_or((clause, "1"));
        let part: i64 = part.trim().parse().map_err(|_| ParseError::BadMultiplicity(clause.to_string()))?;
        let mult: i64 = mult.trim().parse().map_err(|_| ParseError::BadMultiplicity(clause.to_string()))?;
        if part <= 0 {
            return Err(ParseError::NonPositivePart(clause.to_string()));
        }
        if mult < 0 {
            return Err(ParseError::BadMultiplicity(clause.to_string()));
        }
        let part = part as usize;
        if mults.len() < part {
            mults.resize(part, 0);
        }
        mults[part - 1] += mult as usize;
    }
    Ok(Partition::from_multiplicities(&mults))
}

/// Iterator over partitions of `n` in reverse-lexicographic order of parts.
pub struct PartitionsOf {
    next: Option<Vec<usize>>,
    max_part: usize,
    max_length: usize,
}

/// Streams every partition of `n` with parts `≤ max_part` and length
/// `≤ max_length`, each exactly once, in reverse-lexicographic order.
pub fn partitions_of(n: usize, max_part: Option<usize>, max_length: Option<usize>) -> PartitionsOf {
    let max_part = max_part.unwrap_or(n);
    let max_length = max_length.unwrap_or(n);
    let first = greedy_fill(n, max_part, max_length, Vec::new());
    PartitionsOf { next: first, max_part, max_length }
}

/// Appends parts bounded by `cap` to `prefix` greedily so that they sum to
/// `rest`, respecting the length bound.
fn greedy_fill(rest: usize, cap: usize, max_length: usize, mut prefix: Vec<usize>) -> Option<Vec<usize>> {
    let mut rest = rest;
    let mut cap = cap;
    while rest > 0 {
        if cap == 0 || prefix.len() >= max_length {
            return None;
        }
        let part = cap.min(rest);
        prefix.push(part);
        rest -= part;
        cap = part;
    }
    Some(prefix)
}

impl Iterator for PartitionsOf {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        // successor: drop trailing parts, decrement the rightmost part that can
        // absorb the remainder, refill greedily
        let mut prefix = current.clone();
        let mut rest = 0;
        while let Some(last) = prefix.pop() {
            rest += last;
            if last > 1 {
                let dec = last - 1;
                let mut candidate = prefix.clone();
                candidate.push(dec);
                if let Some(filled) = greedy_fill(rest - dec, dec, self.max_length, candidate) {
                    self.next = Some(filled);
                    break;
                }
            }
        }
        debug_assert!(current.iter().all(|&p| p <= self.max_part));
        Some(Partition { parts: current })
    }
}

/// All partitions of size at most `n` with the given bounds, by increasing size.
pub fn partitions_up_to(n: usize, max_part: Option<usize>, max_length: Option<usize>) -> Vec<Partition> {
    (0..=n).flat_map(|k| partitions_of(k, max_part, max_length)).collect()
}

/// Every `μ ⊆ λ`, each exactly once.
pub fn subpartitions(lambda: &Partition) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(lambda.len());
    fill_subpartitions(lambda.parts(), usize::MAX, &mut current, &mut out);
    out
}

fn fill_subpartitions(bounds: &[usize], cap: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    out.push(Partition::new(current.clone()));
    let Some((&first, rest)) = bounds.split_first() else {
        return;
    };
    for part in 1..=first.min(cap) {
        current.push(part);
        fill_subpartitions(rest, part, current, out);
        current.pop();
    }
}
