//! q-shifted factorials, Gaussian binomials and Euler's product expansions.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use num_traits::Signed;

use super::series::ZSeries;
use super::unirat::UniRat;
use super::upoly::UPoly;
use super::Param;
use crate::error::AlgebraError;

/// `(a; base)_k` for any integer `k`:
/// `∏_{j<k}(1 - a·base^j)` for `k ≥ 0`, `1/∏_{j=1}^{-k}(1 - a·base^{-j})` for `k < 0`.
pub fn qpoch_base(a: &UniRat, base: &UniRat, k: i64) -> Result<UniRat, AlgebraError> {
    let one = UniRat::one();
    if k >= 0 {
        let mut acc = UniRat::one();
        let mut step = a.clone();
        for _ in 0..k {
            acc = acc.checked_mul(&one.checked_sub(&step)?)?;
            step = step.checked_mul(base)?;
        }
        return Ok(acc);
    }
    let inv_base = base.inv()?;
    let mut acc = UniRat::one();
    let mut step = a.checked_mul(&inv_base)?;
    for _ in 0..(-k) {
        let factor = one.checked_sub(&step)?;
        if factor.is_zero() {
            return Err(AlgebraError::Singular);
        }
        acc = acc.checked_mul(&factor)?;
        step = step.checked_mul(&inv_base)?;
    }
    acc.inv()
}

/// `(a; q)_k` in base `param`.
pub fn qpoch(a: &UniRat, param: Param, k: i64) -> Result<UniRat, AlgebraError> {
    qpoch_base(a, &UniRat::var(param), k)
}

static FACTORIALS: LazyLock<Mutex<HashMap<(Param, usize), UPoly>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// `(q; q)_n` as an integer polynomial.
pub fn q_factorial_poly(param: Param, n: usize) -> UPoly {
    if let Some(p) = FACTORIALS.lock().unwrap().get(&(param, n)) {
        return p.clone();
    }
    let mut acc = UPoly::one();
    for j in 1..=n {
        acc = acc.mul(&UPoly::from_coeffs({
            let mut c = vec![num_bigint::BigInt::from(0); j + 1];
            c[0] = 1.into();
            c[j] = (-1).into();
            c
        }));
    }
    FACTORIALS.lock().unwrap().insert((param, n), acc.clone());
    acc
}

/// `(q; q)_n`.
pub fn q_factorial(param: Param, n: usize) -> UniRat {
    UniRat::poly(param, q_factorial_poly(param, n))
}

static BINOMIALS: LazyLock<Mutex<HashMap<(Param, usize, usize), UPoly>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// Gaussian binomial `[n, k]_q`; zero outside `0 ≤ k ≤ n`.
pub fn qbinomial(n: i64, k: i64) -> UniRat {
    qbinomial_in(Param::Q, n, k)
}

pub fn qbinomial_in(param: Param, n: i64, k: i64) -> UniRat {
    if k < 0 || n < 0 || k > n {
        return UniRat::zero().with_param(param);
    }
    let (n, k) = (n as usize, k as usize);
    let key = (param, n, k.min(n - k));
    if let Some(p) = BINOMIALS.lock().unwrap().get(&key) {
        return UniRat::poly(param, p.clone());
    }
    let num = q_factorial_poly(param, n);
    let den = q_factorial_poly(param, k).mul(&q_factorial_poly(param, n - k));
    let p = num.div_exact(&den).expect("q-binomial is a polynomial");
    debug_assert!(p.coeffs().iter().all(|c| !c.is_negative()));
    BINOMIALS.lock().unwrap().insert(key, p.clone());
    UniRat::poly(param, p)
}

/// Checks `[n, k]_{1/q} = q^{k(k-n)} [n, k]_q` as an exact identity.
pub fn qbinomial_inverse_identity(n: i64, k: i64) -> bool {
    let b = qbinomial(n, k);
    let lhs = b.compose_power(-1);
    let rhs = &UniRat::power(Param::Q, k * (k - n)) * &b;
    lhs == rhs
}

/// `(c·z^d; q^b)_∞` as a series in `z` through `z^trunc`, via
/// `Σ_k (-c z^d)^k q^{b·k(k-1)/2} / (q^b; q^b)_k`.
pub fn euler_series(c: &UniRat, zpow: usize, base_exp: i64, trunc: usize) -> Result<ZSeries, AlgebraError> {
    euler_expansion(c, zpow, base_exp, trunc, false)
}

/// `1/(c·z^d; q^b)_∞` through `z^trunc`, via `Σ_k (c z^d)^k / (q^b; q^b)_k`.
pub fn euler_inverse_series(c: &UniRat, zpow: usize, base_exp: i64, trunc: usize) -> Result<ZSeries, AlgebraError> {
    euler_expansion(c, zpow, base_exp, trunc, true)
}

fn euler_expansion(c: &UniRat, zpow: usize, base_exp: i64, trunc: usize, inverse: bool) -> Result<ZSeries, AlgebraError> {
    if zpow == 0 || base_exp == 0 {
        return Err(AlgebraError::NeedsTruncation);
    }
    let param = if c.is_constant() { Param::Q } else { c.param() };
    let base = UniRat::power(param, base_exp);
    let mut out = ZSeries::zero(trunc);
    let mut k = 0usize;
    let mut cpow = UniRat::one();
    // (base; base)_k
    let mut fact = UniRat::one();
    let mut base_pow = UniRat::one();
    while k * zpow <= trunc {
        let mut term = cpow.checked_div(&fact)?;
        if !inverse {
            // (-1)^k base^{k(k-1)/2}
            let tri = UniRat::power(param, base_exp * (k as i64) * (k as i64 - 1) / 2);
            term = term.checked_mul(&tri)?;
            if k % 2 == 1 {
                term = term.neg_ref();
            }
        }
        out = out.add(&ZSeries::monomial(trunc, term, k * zpow))?;
        k += 1;
        cpow = cpow.checked_mul(c)?;
        base_pow = base_pow.checked_mul(&base)?;
        fact = fact.checked_mul(&UniRat::one().checked_sub(&base_pow)?)?;
    }
    Ok(out)
}

/// Argument `coeff · q^{q_power} · z^{z_power}` of a q-shifted factorial.
#[derive(Clone, Debug)]
pub struct PochArg {
    pub coeff: UniRat,
    pub q_power: i64,
    pub z_power: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochOrder {
    Finite(i64),
    Infinite,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PochValue {
    Rat(UniRat),
    Series(ZSeries),
}

/// `(a; q)_k` for a monomial argument, finite or infinite order.
///
/// Infinite products are only produced as `z`-truncated series, so the
/// argument must carry a positive power of `z` and `trunc` must be given.
pub fn qpochhammer(arg: &PochArg, order: PochOrder, trunc: Option<usize>) -> Result<PochValue, AlgebraError> {
    let param = if arg.coeff.is_constant() { Param::Q } else { arg.coeff.param() };
    let a = arg.coeff.checked_mul(&UniRat::power(param, arg.q_power))?;
    match order {
        PochOrder::Infinite => {
            let trunc = trunc.ok_or(AlgebraError::NeedsTruncation)?;
            if arg.z_power == 0 {
                return Err(AlgebraError::NeedsTruncation);
            }
            Ok(PochValue::Series(euler_series(&a, arg.z_power, 1, trunc)?))
        }
        PochOrder::Finite(k) if arg.z_power == 0 => Ok(PochValue::Rat(qpoch(&a, param, k)?)),
        PochOrder::Finite(k) => {
            if k < 0 {
                // 1/∏(1 - a z^d q^{-j}) is an infinite series in z
                let trunc = trunc.ok_or(AlgebraError::NeedsTruncation)?;
                let mut acc = ZSeries::one(trunc);
                for j in 1..=(-k) {
                    let c = a.checked_mul(&UniRat::power(param, -j))?;
                    let factor = ZSeries::one(trunc).sub(&ZSeries::monomial(trunc, c, arg.z_power))?;
                    acc = acc.mul(&factor)?;
                }
                return Ok(PochValue::Series(acc.inverse()?));
            }
            let degree = arg.z_power * k as usize;
            let trunc = trunc.unwrap_or(degree);
            let mut acc = ZSeries::one(trunc);
            for j in 0..k {
                let c = a.checked_mul(&UniRat::power(param, j))?;
                let factor = ZSeries::one(trunc).sub(&ZSeries::monomial(trunc, c, arg.z_power))?;
                acc = acc.mul(&factor)?;
            }
            Ok(PochValue::Series(acc))
        }
    }
}
