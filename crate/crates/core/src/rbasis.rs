//! The polynomials `R_λ(x;t)`, their monomial expansion and its inverse.
//!
//! Monomials are indexed by partitions: `x^μ = x_1^{m_1(μ)} ⋯ x_ℓ^{m_ℓ(μ)}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{LazyLock, Mutex};

use serde::{Deserialize, Serialize};

use crate::algebra::{qbinomial_in, MPoly, Param, UniRat};
use crate::error::AlgebraError;
use crate::partition::{subpartitions, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    /// `x^λ = Σ coeff(μ) R_μ`.
    MonomialToR,
    /// `R_λ = Σ coeff(μ) x^μ`.
    RToMonomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RExpansion {
    pub lambda: Partition,
    pub direction: Direction,
    pub coeffs: BTreeMap<Partition, UniRat>,
}

#[derive(Serialize, Deserialize)]
pub struct RTermJson {
    pub mu: String,
    pub coeff: Vec<serde_json::Value>,
}

impl RExpansion {
    pub fn coeff(&self, mu: &Partition) -> UniRat {
        self.coeffs.get(mu).cloned().unwrap_or_default()
    }

    /// Entries as `{mu, coeff}` with `coeff` the ascending coefficient list
    /// of a polynomial (all entries here are polynomials).
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<RTermJson> = self
            .coeffs
            .iter()
            .map(|(mu, c)| RTermJson { mu: mu.to_string(), coeff: c.to_json().num })
            .collect();
        serde_json::json!({
            "lambda": self.lambda.to_string(),
            "direction": self.direction,
            "terms": terms,
        })
    }

    /// Monomial expansion as a polynomial in `ℓ` variables.
    pub fn to_mpoly(&self, nvars: usize) -> Result<MPoly, AlgebraError> {
        if self.direction != Direction::RToMonomial {
            return Err(AlgebraError::Dimension("only monomial expansions convert to polynomials".into()));
        }
        let mut out = MPoly::zero(nvars);
        for (mu, c) in &self.coeffs {
            out.add_term(monomial_exponents(mu, nvars)?, c.clone());
        }
        Ok(out)
    }
}

/// Exponent vector of `x^μ` in `ℓ` variables.
pub fn monomial_exponents(mu: &Partition, nvars: usize) -> Result<Vec<u32>, AlgebraError> {
    if mu.first() > nvars {
        return Err(AlgebraError::Dimension(format!("x^{mu} needs {} variables, have {nvars}", mu.first())));
    }
    let mut e: Vec<u32> = mu.multiplicities().into_iter().map(|m| m as u32).collect();
    e.resize(nvars, 0);
    Ok(e)
}

fn conj_at(c: &Partition, i: usize) -> i64 {
    c.part(i) as i64
}

/// `R_λ(x;t)` in `x_1..x_ℓ`; `ℓ` defaults to `λ_1`.
///
/// Built from both the column product and the multiplicity product, which
/// must agree.
pub fn rlambda_poly(lambda: &Partition, ell: Option<usize>) -> Result<MPoly, AlgebraError> {
    let ell = ell.unwrap_or(lambda.first());
    if lambda.first() > ell {
        return Err(AlgebraError::Dimension(format!("R_{lambda} needs at least {} variables, got {ell}", lambda.first())));
    }
    let by_columns = rlambda_by_columns(lambda, ell);
    let by_mults = rlambda_by_multiplicities(lambda, ell);
    assert_eq!(by_columns, by_mults, "column and multiplicity products of R_{lambda} differ");
    Ok(by_columns)
}

/// `x_i - t^j x_{i-1}` with `x_0 = 1`.
fn linear_factor(ell: usize, i: usize, j: i64) -> MPoly {
    let tj = UniRat::power(Param::T, j);
    let prev = if i == 1 { MPoly::one(ell) } else { MPoly::var(ell, i - 2) };
    &MPoly::var(ell, i - 1) - &prev.scale(&tj)
}

fn rlambda_by_columns(lambda: &Partition, ell: usize) -> MPoly {
    let c = lambda.conjugate();
    let mut acc = MPoly::one(ell);
    for i in 1..=ell {
        for j in conj_at(&c, i + 1)..conj_at(&c, i) {
            acc = &acc * &linear_factor(ell, i, j);
        }
    }
    acc
}

fn rlambda_by_multiplicities(lambda: &Partition, ell: usize) -> MPoly {
    let mut m = lambda.multiplicities();
    m.resize(ell, 0);
    let mut acc = MPoly::one(ell);
    for i in 1..=ell {
        let tail: usize = m[i..].iter().sum();
        for j in 0..m[i - 1] {
            acc = &acc * &linear_factor(ell, i, (j + tail) as i64);
        }
    }
    acc
}

/// Closed-form monomial expansion of `R_λ(x;t)`.
pub fn rlambda_expand(lambda: &Partition) -> RExpansion {
    let lc = lambda.conjugate();
    let width = lambda.first();
    let mut coeffs = BTreeMap::new();
    for mu in subpartitions(lambda) {
        let mc = mu.conjugate();
        let mut sign_odd = false;
        let mut exp = 0i64;
        let mut c = UniRat::one();
        for i in 1..=width {
            let k = conj_at(&lc, i) - conj_at(&mc, i);
            let m = conj_at(&lc, i) - conj_at(&lc, i + 1);
            sign_odd ^= k % 2 == 1;
            exp += k * (k - 1) / 2 + conj_at(&lc, i + 1) * k;
            c = c * qbinomial_in(Param::T, m, k);
        }
        if c.is_zero() {
            continue;
        }
        c = c * UniRat::power(Param::T, exp);
        if sign_odd {
            c = -c;
        }
        coeffs.insert(mu, c);
    }
    let expansion = RExpansion { lambda: lambda.clone(), direction: Direction::RToMonomial, coeffs };
    debug_assert_eq!(
        expansion.to_mpoly(width).unwrap(),
        rlambda_poly(lambda, None).unwrap(),
        "closed-form expansion of R_{lambda} disagrees with the product"
    );
    expansion
}

static C_MEMO: LazyLock<Mutex<HashMap<(Partition, Partition), UniRat>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// Inversion coefficient `C_{λ,μ}(q)`; zero unless `μ ⊆ λ`.
pub fn c_coeff(lambda: &Partition, mu: &Partition) -> UniRat {
    if !lambda.contains(mu) {
        return UniRat::zero();
    }
    let key = (lambda.clone(), mu.clone());
    if let Some(c) = C_MEMO.lock().unwrap().get(&key) {
        return c.clone();
    }
    let lc = lambda.conjugate();
    let mc = mu.conjugate();
    let mut exp = 0i64;
    let mut c = UniRat::one();
    for i in 1..=lambda.first() {
        let (l, m, m_next) = (conj_at(&lc, i), conj_at(&mc, i), conj_at(&mc, i + 1));
        exp += m_next * (l - m);
        c = c * qbinomial_in(Param::Q, l - m_next, l - m);
    }
    let c = c * UniRat::power(Param::Q, exp);
    C_MEMO.lock().unwrap().insert(key, c.clone());
    c
}

/// `x^λ` in the `R` basis.
pub fn monomial_in_r_basis(lambda: &Partition) -> RExpansion {
    let coeffs = subpartitions(lambda)
        .into_iter()
        .map(|mu| {
            let c = c_coeff(lambda, &mu);
            (mu, c)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let expansion = RExpansion { lambda: lambda.clone(), direction: Direction::MonomialToR, coeffs };
    debug_assert!(inversion_round_trip(&expansion), "x^{lambda} does not round-trip through the R basis");
    expansion
}

/// Substitutes the monomial expansion of every `R_μ` into `Σ C_{λ,μ}(t) R_μ`
/// and checks the result is exactly `x^λ`.
pub fn inversion_round_trip(expansion: &RExpansion) -> bool {
    let mut total: BTreeMap<Partition, UniRat> = BTreeMap::new();
    for (mu, c) in &expansion.coeffs {
        let ct = c.with_param(Param::T);
        for (nu, d) in rlambda_expand(mu).coeffs {
            let entry = total.entry(nu).or_default();
            *entry = &*entry + &(&ct * &d);
        }
    }
    total.retain(|_, c| !c.is_zero());
    total.len() == 1 && total.get(&expansion.lambda).is_some_and(UniRat::is_one)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirrorPoly {
    pub lambda: Partition,
    /// Coefficient of `T^k` for `k = 0..=|λ|`.
    pub coeffs: Vec<UniRat>,
    pub palindromic: bool,
}

/// `Σ_{μ⊆λ} C_{λ,μ}(q) T^{|μ|}`, grouped by `|μ|`.
pub fn mirror_poly(lambda: &Partition) -> MirrorPoly {
    let n = lambda.size();
    let mut coeffs = vec![UniRat::zero(); n + 1];
    for mu in subpartitions(lambda) {
        let k = mu.size();
        coeffs[k] = &coeffs[k] + &c_coeff(lambda, &mu);
    }
    let palindromic = (0..=n).all(|k| coeffs[k] == coeffs[n - k]);
    MirrorPoly { lambda: lambda.clone(), coeffs, palindromic }
}

/// `(λ'|μ') = Σ λ'_i μ'_i`.
pub fn dot_product_conjugates(lambda: &Partition, mu: &Partition) -> usize {
    lambda.conjugate().dot(&mu.conjugate())
}

/// `Q'_{λ/μ}(1;q)`, zero unless `μ ⊆ λ`.
pub fn qprime_skew(lambda: &Partition, mu: &Partition) -> UniRat {
    if !lambda.contains(mu) {
        return UniRat::zero();
    }
    let lc = lambda.conjugate();
    let mc = mu.conjugate();
    let exp = (mu.size() + lambda.nstat() + mu.nstat()) as i64 - dot_product_conjugates(lambda, mu) as i64;
    let mut prod = UniRat::one();
    for i in 1..=lambda.first() {
        let (l, m, m_next) = (conj_at(&lc, i), conj_at(&mc, i), conj_at(&mc, i + 1));
        prod = prod * qbinomial_in(Param::Q, l - m_next, l - m);
    }
    let out = prod * UniRat::power(Param::Q, exp);
    debug_assert!(qprime_matches_c(lambda, mu, &out));
    out
}

/// `C_{λ,μ}(1/q) = q^{n(μ)-n(λ)} Q'_{λ/μ}(1;q)`.
pub fn qprime_matches_c(lambda: &Partition, mu: &Partition, qprime: &UniRat) -> bool {
    let lhs = c_coeff(lambda, mu).compose_power(-1);
    let rhs = UniRat::power(Param::Q, mu.nstat() as i64 - lambda.nstat() as i64) * qprime.clone();
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qbinomial;
    use crate::partition::partitions_up_to;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn t() -> UniRat {
        UniRat::var(Param::T)
    }

    fn q() -> UniRat {
        UniRat::var(Param::Q)
    }

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn rlambda_examples() {
        assert_eq!(rlambda_poly(&p(&[1]), None).unwrap(), &x(1, 0) - &MPoly::one(1));
        assert_eq!(rlambda_poly(&p(&[2]), Some(2)).unwrap(), &x(2, 1) - &x(2, 0));
        let expect = &(&x(2, 0) - &MPoly::constant(2, t())) * &(&x(2, 1) - &x(2, 0));
        assert_eq!(rlambda_poly(&p(&[2, 1]), Some(2)).unwrap(), expect);
        assert!(matches!(rlambda_poly(&p(&[3]), Some(2)), Err(AlgebraError::Dimension(_))));
        assert_eq!(rlambda_poly(&Partition::empty(), None).unwrap(), MPoly::one(0));
    }

    #[test]
    fn expansion_examples() {
        let e = rlambda_expand(&p(&[1, 1]));
        assert_eq!(e.coeff(&p(&[1, 1])), UniRat::one());
        assert_eq!(e.coeff(&p(&[1])), -(UniRat::one() + t()));
        assert_eq!(e.coeff(&Partition::empty()), t());
        assert_eq!(e.coeffs.len(), 3);
        let e = rlambda_expand(&Partition::empty());
        assert_eq!(e.coeffs.len(), 1);
        assert_eq!(e.coeff(&Partition::empty()), UniRat::one());
        let e = rlambda_expand(&p(&[2]));
        assert_eq!(e.coeff(&p(&[2])), UniRat::one());
        assert_eq!(e.coeff(&p(&[1])), UniRat::from_int(-1));
        assert_eq!(e.coeffs.len(), 2);
    }

    #[test]
    fn expansion_matches_product() {
        for lambda in partitions_up_to(7, None, None) {
            let e = rlambda_expand(&lambda);
            let ell = lambda.first();
            assert_eq!(e.to_mpoly(ell).unwrap(), rlambda_poly(&lambda, None).unwrap(), "{lambda}");
            assert_eq!(e.to_mpoly(ell + 1).unwrap(), rlambda_poly(&lambda, Some(ell + 1)).unwrap(), "{lambda}");
        }
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_coeff(&p(&[1, 1]), &p(&[1])), UniRat::one() + q());
        assert_eq!(c_coeff(&p(&[2, 1]), &p(&[2])), q());
        assert_eq!(c_coeff(&p(&[2, 2]), &p(&[2])), q() * (UniRat::one() + q()));
        assert_eq!(c_coeff(&p(&[1]), &p(&[2])), UniRat::zero());
        assert_eq!(c_coeff(&p(&[2, 1]), &p(&[1, 1, 1])), UniRat::zero());
    }

    #[test]
    fn monomial_examples() {
        let e = monomial_in_r_basis(&p(&[3]));
        for k in 0..=3 {
            let mu = if k == 0 { Partition::empty() } else { p(&[k]) };
            assert_eq!(e.coeff(&mu), UniRat::one());
        }
        assert_eq!(e.coeffs.len(), 4);
        let m = 4;
        let e = monomial_in_r_basis(&Partition::rectangle(1, m));
        for k in 0..=m {
            assert_eq!(e.coeff(&Partition::rectangle(1, k)), qbinomial(m as i64, k as i64));
        }
        let e = monomial_in_r_basis(&p(&[2, 2]));
        let one_q = UniRat::one() + q();
        let expect: BTreeMap<Partition, UniRat> = [
            (p(&[2, 2]), UniRat::one()),
            (p(&[2, 1]), one_q.clone()),
            (p(&[2]), q() * one_q.clone()),
            (p(&[1, 1]), UniRat::one()),
            (p(&[1]), one_q),
            (Partition::empty(), UniRat::one()),
        ]
        .into_iter()
        .collect();
        assert_eq!(e.coeffs, expect);
    }

    #[test]
    fn round_trip_small() {
        for lambda in partitions_up_to(6, Some(3), None) {
            assert!(inversion_round_trip(&monomial_in_r_basis(&lambda)), "{lambda}");
        }
    }

    #[test]
    fn round_trip_detects_corruption() {
        let mut e = monomial_in_r_basis(&p(&[2, 1]));
        let c = e.coeffs.get_mut(&p(&[1])).unwrap();
        *c = &*c + &UniRat::one();
        assert!(!inversion_round_trip(&e));
    }

    #[test]
    fn mirror_examples() {
        let m = mirror_poly(&p(&[1, 1]));
        assert_eq!(m.coeffs, vec![UniRat::one(), UniRat::one() + q(), UniRat::one()]);
        assert!(m.palindromic);
        assert_eq!(mirror_poly(&Partition::empty()).coeffs, vec![UniRat::one()]);
        let m = mirror_poly(&p(&[2, 1]));
        let one_q = UniRat::one() + q();
        assert_eq!(m.coeffs, vec![UniRat::one(), one_q.clone(), one_q, UniRat::one()]);
        assert!(m.palindromic);
    }

    #[test]
    fn qprime_examples() {
        assert_eq!(qprime_skew(&p(&[1, 1]), &p(&[1])), UniRat::one() + q());
        assert_eq!(qprime_skew(&p(&[1]), &p(&[1])), UniRat::one());
        for lambda in partitions_up_to(5, None, None) {
            assert_eq!(qprime_skew(&lambda, &Partition::empty()), UniRat::power(Param::Q, lambda.nstat() as i64));
        }
        assert_eq!(qprime_skew(&p(&[1]), &p(&[1, 1])), UniRat::zero());
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot_product_conjugates(&p(&[1, 1]), &p(&[1, 1])), 4);
        assert_eq!(dot_product_conjugates(&p(&[2, 1]), &p(&[1])), 2);
        assert_eq!(dot_product_conjugates(&p(&[2, 1]), &Partition::empty()), 0);
    }

    #[test]
    fn json_shape() {
        let j = monomial_in_r_basis(&p(&[1, 1])).to_json();
        assert_eq!(j["direction"], "MONOMIAL_TO_R");
        let terms = j["terms"].as_array().unwrap();
        assert_eq!(terms.len(), 3);
        assert!(terms.iter().any(|t| t["mu"] == "1" && t["coeff"] == serde_json::json!([1, 1])));
    }
}
