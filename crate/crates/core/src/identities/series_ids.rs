//! Identities between power series in one variable `z`.

use num_traits::{One, Zero};

use super::{CaseParams, Sides};
use crate::algebra::{euler_series, q_factorial, qbinomial_in, rational, Param, Rational, UniRat, ZSeries};
use crate::error::{Error, Result};
use crate::group::{aut_order, torsion_order_brute, PGroup};
use crate::hall_littlewood::b_lambda;
use crate::partition::{partitions_of, partitions_up_to, subpartitions, Partition};
use crate::rbasis::{c_coeff, dot_product_conjugates};

fn q() -> UniRat {
    UniRat::var(Param::Q)
}

fn qpow(k: i64) -> UniRat {
    UniRat::power(Param::Q, k)
}

fn trunc_of(p: &CaseParams) -> Result<usize> {
    p.req(p.trunc, "trunc")
}

/// Finite q-binomial theorem, both sides as polynomials in `z`.
pub(super) fn qbin(p: &CaseParams) -> Result<Sides> {
    let n = p.req(p.n, "n")?;
    let mut lhs = ZSeries::zero(n);
    for k in 0..=n {
        let sign = if k % 2 == 0 { UniRat::one() } else { -UniRat::one() };
        let c = sign * qpow((k * k.saturating_sub(1) / 2) as i64) * qbinomial_in(Param::Q, n as i64, k as i64);
        lhs = lhs.add(&ZSeries::monomial(n, c, k))?;
    }
    let mut rhs = ZSeries::one(n);
    for j in 0..n {
        let factor = ZSeries::from_coeffs(n, vec![UniRat::one(), -qpow(j as i64)]);
        rhs = rhs.mul(&factor)?;
    }
    Ok(Sides::from_series(&lhs, &rhs))
}

/// `Σ z^k q^k / (q)_k = 1/(zq)_∞`, the right side as the inverse of the
/// alternating Euler series. The functional equation `(1-zq)F(z) = F(zq)`
/// is compared as a second block.
pub(super) fn euler(p: &CaseParams) -> Result<Sides> {
    let n = trunc_of(p)?;
    let f = ZSeries::from_coeffs(n, (0..=n).map(|k| qpow(k as i64) / q_factorial(Param::Q, k)).collect());
    let alternating = ZSeries::from_coeffs(
        n,
        (0..=n)
            .map(|k| {
                let c = qpow((k * (k + 1) / 2) as i64) / q_factorial(Param::Q, k);
                if k % 2 == 1 { -c } else { c }
            })
            .collect(),
    );
    let mut sides = Sides::new(&["block", "z"]);
    sides.extend_tagged(0, Sides::from_series(&f, &alternating.inverse()?));
    let one_minus_zq = ZSeries::from_coeffs(n, vec![UniRat::one(), -q()]);
    let shifted = f.substitute_z_power(&q(), 1)?;
    sides.extend_tagged(1, Sides::from_series(&one_minus_zq.mul(&f)?, &shifted));
    Ok(sides)
}

/// `x^λ(H) = ∏_i |H[p^i]|^{m_i(λ)}`, counted on the group itself.
fn monomial_on_group(lambda: &Partition, h: &PGroup) -> Rational {
    let mut v = Rational::one();
    for (i, &m) in lambda.multiplicities().iter().enumerate() {
        if m > 0 {
            let t = torsion_order_brute(h, i + 1);
            v *= Rational::from_integer(t.into()).pow(m as i32);
        }
    }
    v
}

/// Group-side generating function against `1/(z/p;1/p)_∞ · Σ_ν C_{λ,ν}(p) z^{|ν|}`.
pub(super) fn genfun(p: &CaseParams) -> Result<Sides> {
    let n = trunc_of(p)?;
    let lambda = p.lambda()?;
    let prime = p.req(p.p.map(|x| x as usize), "p")? as u64;
    if !crate::group::is_prime(prime) {
        return Err(Error::NotPrime(prime));
    }
    let mut lhs = vec![UniRat::zero(); n + 1];
    for (k, slot) in lhs.iter_mut().enumerate() {
        let mut acc = Rational::zero();
        for mu in partitions_of(k, None, None) {
            let h = PGroup::new(&mu, prime)?;
            acc += monomial_on_group(&lambda, &h) / aut_order(&mu, prime);
        }
        *slot = UniRat::from_rational(&acc);
    }
    let lhs = ZSeries::from_coeffs(n, lhs);

    // 1/(z/p;1/p)_∞ = Σ z^k / (p^k (1/p;1/p)_k)
    let inv_p = rational(1, prime as i64);
    let mut euler = Vec::with_capacity(n + 1);
    let mut fact = Rational::one();
    let mut pk = Rational::one();
    for k in 0..=n {
        if k > 0 {
            pk *= &inv_p;
            fact *= Rational::one() - &pk;
        }
        euler.push(UniRat::from_rational(&(&pk / &fact)));
    }
    let at_p = Rational::from_integer((prime as i64).into());
    let mut poly = vec![UniRat::zero(); n + 1];
    for nu in subpartitions(&lambda) {
        if nu.size() <= n {
            let c = c_coeff(&lambda, &nu).eval(&at_p)?;
            poly[nu.size()] = &poly[nu.size()] + &UniRat::from_rational(&c);
        }
    }
    let rhs = ZSeries::from_coeffs(n, euler).mul(&ZSeries::from_coeffs(n, poly))?;
    Ok(Sides::from_series(&lhs, &rhs))
}

/// `Σ_{ν⊆λ} C_{λ,ν}(q^{-d}) c^{|ν|} z^{|ν|}`.
fn c_side(lambda: &Partition, n: usize, d: i64, c: &UniRat) -> ZSeries {
    let mut out = vec![UniRat::zero(); n + 1];
    for nu in subpartitions(lambda) {
        let k = nu.size();
        if k <= n {
            out[k] = &out[k] + &(c_coeff(lambda, &nu).compose_power(-d) * c.pow(k as u32));
        }
    }
    ZSeries::from_coeffs(n, out)
}

/// Group sum with `q = 1/p` and `μ` replaced by `μ'`, against
/// `1/(zq)_∞ · Σ_ν C_{λ,ν}(1/q) z^{|ν|}`.
pub(super) fn combinat(p: &CaseParams) -> Result<Sides> {
    let n = trunc_of(p)?;
    let lambda = p.lambda()?;
    let mults = lambda.multiplicities();
    let mut lhs = vec![UniRat::zero(); n + 1];
    for (k, slot) in lhs.iter_mut().enumerate() {
        for mu in partitions_of(k, None, None) {
            let squares: i64 = mu.parts().iter().map(|&x| (x * x) as i64).sum();
            let mut prefix = 0i64;
            let mut tor = 0i64;
            for (i, &m) in mults.iter().enumerate() {
                prefix += mu.part(i + 1) as i64;
                tor += m as i64 * prefix;
            }
            *slot = &*slot + &(qpow(squares - tor) / b_lambda(&mu.conjugate()));
        }
    }
    let lhs = ZSeries::from_coeffs(n, lhs);
    let euler = ZSeries::from_coeffs(n, (0..=n).map(|k| qpow(k as i64) / q_factorial(Param::Q, k)).collect());
    let rhs = euler.mul(&c_side(&lambda, n, 1, &UniRat::one()))?;
    Ok(Sides::from_series(&lhs, &rhs))
}

/// `Σ_{μ_1≤ℓ} z^{|μ|} q^{e(μ)} / b_μ(q) · (z q^{μ'_ℓ+1})_∞`, or its image under
/// `q → q², z → z²/q` when `type_s` (then the series variable is `z²`).
fn restricted_sum(ell: usize, n: usize, type_s: bool, exponent: impl Fn(&Partition) -> i64) -> Result<ZSeries> {
    let mut out = ZSeries::zero(n);
    let mut tails: Vec<Option<ZSeries>> = vec![None; n + 2];
    for mu in partitions_up_to(n, Some(ell), None) {
        let size = mu.size();
        let col = mu.conjugate().part(ell);
        let tail = match &tails[col] {
            Some(t) => t.clone(),
            None => {
                let t = if type_s {
                    euler_series(&qpow(2 * col as i64 + 1), 1, 2, n)?
                } else {
                    euler_series(&qpow(col as i64 + 1), 1, 1, n)?
                };
                tails[col] = Some(t.clone());
                t
            }
        };
        let coeff = if type_s {
            qpow(2 * exponent(&mu) - size as i64) / b_lambda(&mu).compose_power(2)
        } else {
            qpow(exponent(&mu)) / b_lambda(&mu)
        };
        out = out.add(&tail.shift(size).scale(&coeff)?)?;
    }
    Ok(out)
}

fn restricted_exponent(lambda: &Partition) -> impl Fn(&Partition) -> i64 + '_ {
    move |mu| (2 * mu.nstat() + mu.size()) as i64 - dot_product_conjugates(lambda, mu) as i64
}

fn ell_and_lambda(p: &CaseParams) -> Result<(usize, Partition)> {
    let lambda = p.lambda()?;
    let ell = p.ell.unwrap_or(lambda.first().max(1));
    if ell == 0 || lambda.first() > ell {
        return Err(Error::Invalid(format!("need 1 ≤ ℓ and λ_1 ≤ ℓ, got ℓ={ell}, λ={lambda}")));
    }
    Ok((ell, lambda))
}

pub(super) fn umoy_abelian(p: &CaseParams) -> Result<Sides> {
    let n = trunc_of(p)?;
    let (ell, lambda) = ell_and_lambda(p)?;
    let lhs = restricted_sum(ell, n, false, restricted_exponent(&lambda))?;
    let rhs = c_side(&lambda, n, 1, &UniRat::one());
    Ok(Sides::from_series(&lhs, &rhs))
}

/// Series in `w = z²`.
pub(super) fn umoy_type_s(p: &CaseParams) -> Result<Sides> {
    let n = trunc_of(p)?;
    let (ell, lambda) = ell_and_lambda(p)?;
    let lhs = restricted_sum(ell, n, true, restricted_exponent(&lambda))?;
    let rhs = c_side(&lambda, n, 2, &qpow(-1));
    let mut sides = Sides::from_series(&lhs, &rhs);
    sides.variables = vec!["z^2".into()];
    Ok(sides)
}

/// Row case: `Σ_{μ_1≤ℓ} z^{|μ|} q^{2n(μ)}/b_μ · (zq^{μ'_ℓ+1})_∞ = 1 + z + … + z^ℓ`.
pub(super) fn delaunay(p: &CaseParams) -> Result<Sides> {
    let n = trunc_of(p)?;
    let ell = p.req(p.ell, "ell")?;
    if ell == 0 {
        return Err(Error::Invalid("ℓ must be positive".into()));
    }
    let lhs = restricted_sum(ell, n, false, |mu| 2 * mu.nstat() as i64)?;
    let rhs = ZSeries::from_coeffs(n, vec![UniRat::one(); ell + 1]);
    Ok(Sides::from_series(&lhs, &rhs))
}

/// The restricted sum `L(z)` satisfies `L(q^{-u}) = q^{-|λ|u} L(q^u)` for every
/// integer `u`. With `L` a polynomial of degree `|λ|` this is `L(z) = z^{|λ|} L(1/z)`;
/// both sides are built from `L` alone, truncated above `|λ|`.
pub(super) fn mirror_swap(p: &CaseParams) -> Result<Sides> {
    let (ell, lambda) = ell_and_lambda(p)?;
    let size = lambda.size();
    let n = p.trunc.unwrap_or(size + 2).max(size);
    let l = restricted_sum(ell, n, false, restricted_exponent(&lambda))?;
    let mut swapped = vec![UniRat::zero(); n + 1];
    for k in 0..=size {
        swapped[size - k] = l.coeffs()[k].clone();
    }
    Ok(Sides::from_series(&l, &ZSeries::from_coeffs(n, swapped)))
}
