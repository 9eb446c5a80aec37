//! Registry of exact identity checks, driven by a versioned manifest.

mod hl_ids;
mod series_ids;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{MPoly, UniRat, ZSeries};
use crate::error::{Error, Result};
use crate::partition::{parse_partition, Partition};

pub const DEFAULT_MANIFEST: &str = include_str!("manifest.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IdentityId {
    Qbin,
    Euler,
    Genfun,
    Combinat,
    UmoyAbelian,
    UmoyTypeS,
    Delaunay,
    Qbinhl,
    WarnaarA2,
    Lascoux,
    FiniteQbinhl,
    Csq,
    MirrorSwap,
}

impl IdentityId {
    pub const ALL: [IdentityId; 13] = [
        IdentityId::Qbin,
        IdentityId::Euler,
        IdentityId::Genfun,
        IdentityId::Combinat,
        IdentityId::UmoyAbelian,
        IdentityId::UmoyTypeS,
        IdentityId::Delaunay,
        IdentityId::Qbinhl,
        IdentityId::WarnaarA2,
        IdentityId::Lascoux,
        IdentityId::FiniteQbinhl,
        IdentityId::Csq,
        IdentityId::MirrorSwap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Qbin => "QBIN",
            IdentityId::Euler => "EULER",
            IdentityId::Genfun => "GENFUN",
            IdentityId::Combinat => "COMBINAT",
            IdentityId::UmoyAbelian => "UMOY_ABELIAN",
            IdentityId::UmoyTypeS => "UMOY_TYPE_S",
            IdentityId::Delaunay => "DELAUNAY",
            IdentityId::Qbinhl => "QBINHL",
            IdentityId::WarnaarA2 => "WARNAAR_A2",
            IdentityId::Lascoux => "LASCOUX",
            IdentityId::FiniteQbinhl => "FINITE_QBINHL",
            IdentityId::Csq => "CSQ",
            IdentityId::MirrorSwap => "MIRROR_SWAP",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Strategy {
    SymbolicExact,
    TruncatedSeries,
    RandomPoint,
}

/// Per-case parameters; each identity reads the ones it needs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// Highest power of `z` compared.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<usize>,
    /// Highest total degree compared in the alphabet variables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Specialize `a = 0` where the identity has an `a`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_zero: Option<bool>,
}

impl CaseParams {
    const KEYS: [&'static str; 11] = ["n", "k", "lambda", "ell", "p", "trunc", "degree", "alphabet", "samples", "seed", "a_zero"];

    pub(crate) fn lambda(&self) -> Result<Partition> {
        match &self.lambda {
            Some(s) => Ok(parse_partition(s)?),
            None => Err(Error::Invalid("missing case parameter `lambda`".into())),
        }
    }

    pub(crate) fn req(&self, v: Option<usize>, name: &str) -> Result<usize> {
        v.ok_or_else(|| Error::Invalid(format!("missing case parameter `{name}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCase {
    pub id: IdentityId,
    pub strategy: Strategy,
    #[serde(flatten)]
    pub params: CaseParams,
    /// Negates one right-hand coefficient; the check must then fail.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub mutate: bool,
}

impl IdentityCase {
    pub fn new(id: IdentityId, strategy: Strategy, params: CaseParams) -> Self {
        IdentityCase { id, strategy, params, mutate: false }
    }
}

/// Size limits on what a single case may request.
pub const MAX_ALPHABET: usize = 4;
pub const MAX_TRUNC: usize = 12;
pub const MAX_FINITE_N: usize = 4;
pub const MAX_FINITE_K: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    /// Names of the exponent slots, e.g. `["x1", "x2", "a"]` or `["z"]`.
    pub variables: Vec<String>,
    pub exponents: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: IdentityCase,
    pub status: Status,
    pub pass: bool,
    pub coefficients_compared: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Name of the bound when the case was refused as too large.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resource_bound: Option<String>,
    pub elapsed_ms: u64,
}

/// Two coefficient tables keyed by exponent vectors; absent keys are zero.
pub(crate) struct Sides {
    pub variables: Vec<String>,
    pub lhs: BTreeMap<Vec<i64>, UniRat>,
    pub rhs: BTreeMap<Vec<i64>, UniRat>,
}

impl Sides {
    pub fn new(variables: &[&str]) -> Self {
        Sides { variables: variables.iter().map(|s| s.to_string()).collect(), lhs: BTreeMap::new(), rhs: BTreeMap::new() }
    }

    pub fn from_series(lhs: &ZSeries, rhs: &ZSeries) -> Self {
        let mut s = Sides::new(&["z"]);
        let n = lhs.trunc().min(rhs.trunc());
        for k in 0..=n {
            s.lhs.insert(vec![k as i64], lhs.coeffs()[k].clone());
            s.rhs.insert(vec![k as i64], rhs.coeffs()[k].clone());
        }
        s
    }

    pub fn from_polys(variables: &[&str], lhs: &MPoly, rhs: &MPoly) -> Self {
        let mut s = Sides::new(variables);
        let key = |e: &Vec<u32>| e.iter().map(|&x| x as i64).collect::<Vec<_>>();
        s.lhs = lhs.terms().iter().map(|(e, c)| (key(e), c.clone())).collect();
        s.rhs = rhs.terms().iter().map(|(e, c)| (key(e), c.clone())).collect();
        s
    }

    /// Appends another table, prefixing its keys with `tag`.
    pub fn extend_tagged(&mut self, tag: i64, other: Sides) {
        for (k, v) in other.lhs {
            let mut key = vec![tag];
            key.extend(k);
            self.lhs.insert(key, v);
        }
        for (k, v) in other.rhs {
            let mut key = vec![tag];
            key.extend(k);
            self.rhs.insert(key, v);
        }
    }

    fn mutate(&mut self) {
        if let Some((_, v)) = self.rhs.iter_mut().find(|(_, v)| !v.is_zero()) {
            *v = -v.clone();
        }
    }

    fn compare(&self) -> (usize, Option<Mismatch>) {
        let mut keys: Vec<&Vec<i64>> = self.lhs.keys().chain(self.rhs.keys()).collect();
        keys.sort();
        keys.dedup();
        let zero = UniRat::zero();
        for key in &keys {
            let l = self.lhs.get(*key).unwrap_or(&zero);
            let r = self.rhs.get(*key).unwrap_or(&zero);
            if l != r {
                return (
                    keys.len(),
                    Some(Mismatch { variables: self.variables.clone(), exponents: (*key).clone(), lhs: l.render(), rhs: r.render() }),
                );
            }
        }
        (keys.len(), None)
    }
}

fn check_bounds(case: &IdentityCase) -> Result<()> {
    let p = &case.params;
    let over = |bound: &'static str, v: usize, limit: usize| -> Result<()> {
        if v > limit {
            Err(crate::error::ResourceError { bound, limit: limit as u64, needed: v as u64 }.into())
        } else {
            Ok(())
        }
    };
    if let Some(a) = p.alphabet {
        over("alphabet", a, MAX_ALPHABET)?;
    }
    if let Some(t) = p.trunc {
        over("trunc", t, MAX_TRUNC)?;
    }
    if case.id == IdentityId::FiniteQbinhl || case.id == IdentityId::Csq {
        if let Some(n) = p.n {
            over("n", n, MAX_FINITE_N)?;
        }
        if let Some(k) = p.k {
            over("k", k, MAX_FINITE_K)?;
        }
    }
    Ok(())
}

fn build(case: &IdentityCase) -> Result<Sides> {
    check_bounds(case)?;
    let p = &case.params;
    match case.id {
        IdentityId::Qbin => series_ids::qbin(p),
        IdentityId::Euler => series_ids::euler(p),
        IdentityId::Genfun => series_ids::genfun(p),
        IdentityId::Combinat => series_ids::combinat(p),
        IdentityId::UmoyAbelian => series_ids::umoy_abelian(p),
        IdentityId::UmoyTypeS => series_ids::umoy_type_s(p),
        IdentityId::Delaunay => series_ids::delaunay(p),
        IdentityId::MirrorSwap => series_ids::mirror_swap(p),
        IdentityId::Qbinhl => hl_ids::qbinhl(p),
        IdentityId::WarnaarA2 => hl_ids::warnaar_a2(p),
        IdentityId::Lascoux => hl_ids::lascoux(p),
        IdentityId::FiniteQbinhl => match case.strategy {
            Strategy::RandomPoint => hl_ids::finite_qbinhl_sampled(p),
            _ => hl_ids::finite_qbinhl_symbolic(p),
        },
        IdentityId::Csq => hl_ids::csq(p),
    }
}

/// Runs one case and reports the first disagreeing coefficient, if any.
pub fn verify(case: &IdentityCase) -> VerificationReport {
    let start = Instant::now();
    let outcome = build(case);
    let mut resource_bound = None;
    let (status, compared, mismatch, error) = match outcome {
        Ok(mut sides) => {
            if case.mutate {
                sides.mutate();
            }
            let (n, m) = sides.compare();
            (if m.is_none() { Status::Pass } else { Status::Fail }, n, m, None)
        }
        Err(e) => {
            if let Error::Resource(r) = &e {
                resource_bound = Some(r.bound.to_string());
            }
            (Status::Error, 0, None, Some(e.to_string()))
        }
    };
    VerificationReport {
        case: case.clone(),
        pass: status == Status::Pass,
        status,
        coefficients_compared: compared,
        mismatch,
        error,
        resource_bound,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Flattened parameter tables accept anything; reject misspelled keys here.
fn check_keys(text: &str) -> Result<()> {
    let doc: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Manifest(e.to_string()))?;
    let allowed = |k: &str| ["id", "strategy", "mutate"].contains(&k) || CaseParams::KEYS.contains(&k);
    let mut tables: Vec<&toml::Table> = Vec::new();
    if let Some(toml::Value::Array(cases)) = doc.get("case") {
        tables.extend(cases.iter().filter_map(toml::Value::as_table));
    }
    if let Some(toml::Value::Table(t)) = doc.get("mutation_guard") {
        tables.push(t);
    }
    for t in tables {
        if let Some(k) = t.keys().find(|k| !allowed(k)) {
            return Err(Error::Manifest(format!("unknown case key `{k}`")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub seed: u64,
    #[serde(rename = "case")]
    pub cases: Vec<IdentityCase>,
    pub mutation_guard: IdentityCase,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest> {
        check_keys(text)?;
        let mut m: Manifest = toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        // random-point cases without their own seed use the manifest seed
        for c in &mut m.cases {
            if c.strategy == Strategy::RandomPoint && c.params.seed.is_none() {
                c.params.seed = Some(m.seed);
            }
        }
        m.mutation_guard.mutate = true;
        Ok(m)
    }

    pub fn builtin() -> Manifest {
        Manifest::parse(DEFAULT_MANIFEST).expect("embedded manifest parses")
    }

    /// Cases whose id is in `filter` (all cases when empty).
    pub fn select(&self, filter: &[IdentityId]) -> Vec<IdentityCase> {
        self.cases.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)).cloned().collect()
    }
}

/// Runs cases concurrently. Cases not started before `budget` elapses are
/// reported as skipped. Output is sorted by id, then manifest order.
pub fn run_suite(cases: &[IdentityCase], budget: Option<Duration>) -> Vec<VerificationReport> {
    let start = Instant::now();
    let mut reports: Vec<(usize, VerificationReport)> = cases
        .par_iter()
        .enumerate()
        .map(|(i, case)| {
            if budget.is_some_and(|b| start.elapsed() > b) {
                let r = VerificationReport {
                    case: case.clone(),
                    status: Status::Skipped,
                    pass: false,
                    coefficients_compared: 0,
                    mismatch: None,
                    error: Some("time budget exhausted".into()),
                    resource_bound: None,
                    elapsed_ms: 0,
                };
                return (i, r);
            }
            (i, verify(case))
        })
        .collect();
    reports.sort_by_key(|(i, r)| (r.case.id, *i));
    reports.into_iter().map(|(_, r)| r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_covers_every_identity_three_times() {
        let m = Manifest::builtin();
        for id in IdentityId::ALL {
            let count = m.cases.iter().filter(|c| c.id == id).count();
            assert!(count >= 3, "{id} has only {count} grid points");
        }
        assert!(m.mutation_guard.mutate);
        assert!(m.cases.iter().filter(|c| c.strategy == Strategy::RandomPoint).all(|c| c.params.seed.is_some()));
    }

    #[test]
    fn ids_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert!(matches!("NOPE".parse::<IdentityId>(), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn bounds_are_reported() {
        let params = CaseParams { alphabet: Some(6), degree: Some(2), ..Default::default() };
        let r = verify(&IdentityCase::new(IdentityId::Qbinhl, Strategy::TruncatedSeries, params));
        assert_eq!(r.status, Status::Error);
        assert_eq!(r.resource_bound.as_deref(), Some("alphabet"));
    }

    #[test]
    fn mutation_is_caught_and_localized() {
        let m = Manifest::builtin();
        let r = verify(&m.mutation_guard);
        assert_eq!(r.status, Status::Fail);
        let mm = r.mismatch.unwrap();
        assert!(!mm.exponents.is_empty());
        assert_ne!(mm.lhs, mm.rhs);
        let mut clean = m.mutation_guard.clone();
        clean.mutate = false;
        assert!(verify(&clean).pass);
    }

    #[test]
    fn manifest_errors_are_reported() {
        assert!(matches!(Manifest::parse("version = 1"), Err(Error::Manifest(_))));
        let bad = "version = 1\nseed = 1\n[[case]]\nid = \"QBIN\"\nstrategy = \"SYMBOLIC_EXACT\"\nbogus = 3\n[mutation_guard]\nid = \"QBIN\"\nstrategy = \"SYMBOLIC_EXACT\"\n";
        assert!(matches!(Manifest::parse(bad), Err(Error::Manifest(_))));
    }
}
