//! Power series in `z` truncated at a fixed order.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::unirat::UniRat;
use crate::error::AlgebraError;

/// `c_0 + c_1 z + … + c_N z^N + O(z^{N+1})` with exact coefficients.
///
/// Arithmetic never reads above the recorded order; binary operations
/// truncate to the smaller of the two orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZSeries {
    trunc: usize,
    coeffs: Vec<UniRat>,
}

impl ZSeries {
    pub fn zero(trunc: usize) -> Self {
        ZSeries { trunc, coeffs: vec![UniRat::zero(); trunc + 1] }
    }

    pub fn one(trunc: usize) -> Self {
        ZSeries::constant(trunc, UniRat::one())
    }

    pub fn constant(trunc: usize, c: UniRat) -> Self {
        let mut s = ZSeries::zero(trunc);
        s.coeffs[0] = c;
        s
    }

    /// `c·z^k`.
    pub fn monomial(trunc: usize, c: UniRat, k: usize) -> Self {
        let mut s = ZSeries::zero(trunc);
        if k <= trunc {
            s.coeffs[k] = c;
        }
        s
    }

    /// Truncates a coefficient list (index = power of `z`).
    pub fn from_coeffs(trunc: usize, mut coeffs: Vec<UniRat>) -> Self {
        coeffs.resize(trunc + 1, UniRat::zero());
        ZSeries { trunc, coeffs }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeffs(&self) -> &[UniRat] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; `None` above the truncation order.
    pub fn coeff_at(&self, n: usize) -> Option<&UniRat> {
        self.coeffs.get(n)
    }

    pub fn truncate(&self, trunc: usize) -> ZSeries {
        let trunc = trunc.min(self.trunc);
        ZSeries { trunc, coeffs: self.coeffs[..=trunc].to_vec() }
    }

    pub fn add(&self, other: &ZSeries) -> Result<ZSeries, AlgebraError> {
        let trunc = self.trunc.min(other.trunc);
        let coeffs = (0..=trunc)
            .map(|k| self.coeffs[k].checked_add(&other.coeffs[k]))
            .collect::<Result<_, _>>()?;
        Ok(ZSeries { trunc, coeffs })
    }

    pub fn sub(&self, other: &ZSeries) -> Result<ZSeries, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ZSeries {
        ZSeries { trunc: self.trunc, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &ZSeries) -> Result<ZSeries, AlgebraError> {
        let trunc = self.trunc.min(other.trunc);
        let mut coeffs = vec![UniRat::zero(); trunc + 1];
        for i in 0..=trunc {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(trunc - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = self.coeffs[i].checked_mul(&other.coeffs[j])?;
                coeffs[i + j] = coeffs[i + j].checked_add(&prod)?;
            }
        }
        Ok(ZSeries { trunc, coeffs })
    }

    pub fn scale(&self, c: &UniRat) -> Result<ZSeries, AlgebraError> {
        let coeffs = self.coeffs.iter().map(|a| a.checked_mul(c)).collect::<Result<_, _>>()?;
        Ok(ZSeries { trunc: self.trunc, coeffs })
    }

    /// Multiplies by `z^k`, dropping what falls above the order.
    pub fn shift(&self, k: usize) -> ZSeries {
        let mut coeffs = vec![UniRat::zero(); self.trunc + 1];
        for n in 0..=self.trunc {
            if n + k <= self.trunc {
                coeffs[n + k] = self.coeffs[n].clone();
            }
        }
        ZSeries { trunc: self.trunc, coeffs }
    }

    /// Substitutes `z ↦ c·z^d` with `d ≥ 1`.
    pub fn substitute_z_power(&self, c: &UniRat, d: usize) -> Result<ZSeries, AlgebraError> {
        if d == 0 {
            return Err(AlgebraError::Dimension("substitution z -> c needs a positive power of z".into()));
        }
        let mut out = ZSeries::zero(self.trunc);
        let mut cpow = UniRat::one();
        for n in 0..=self.trunc {
            if n * d > self.trunc {
                break;
            }
            out.coeffs[n * d] = self.coeffs[n].checked_mul(&cpow)?;
            cpow = cpow.checked_mul(c)?;
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn inverse(&self) -> Result<ZSeries, AlgebraError> {
        let c0 = self.coeffs[0].inv()?;
        let mut inv = vec![UniRat::zero(); self.trunc + 1];
        inv[0] = c0.clone();
        for n in 1..=self.trunc {
            let mut acc = UniRat::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                acc = acc.checked_add(&self.coeffs[k].checked_mul(&inv[n - k])?)?;
            }
            inv[n] = acc.checked_mul(&c0)?.neg_ref();
        }
        Ok(ZSeries { trunc: self.trunc, coeffs: inv })
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&UniRat) -> UniRat) -> ZSeries {
        ZSeries { trunc: self.trunc, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "trunc": self.trunc,
            "coeffs": self.coeffs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for ZSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let zk = match k {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{k}"),
            };
            parts.push(if zk.is_empty() { format!("({c})") } else { format!("({c}){zk}") });
        }
        parts.push(format!("O(z^{})", self.trunc + 1));
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Param;

    #[test]
    fn product_truncates() {
        let one_plus = ZSeries::from_coeffs(2, vec![UniRat::one(), UniRat::one()]);
        let one_minus = ZSeries::from_coeffs(2, vec![UniRat::one(), UniRat::from_int(-1)]);
        let p = one_plus.mul(&one_minus).unwrap();
        assert_eq!(p, ZSeries::from_coeffs(2, vec![UniRat::one(), UniRat::zero(), UniRat::from_int(-1)]));
        let short = ZSeries::one(1);
        assert_eq!(p.mul(&short).unwrap().trunc(), 1);
    }

    #[test]
    fn constant_term_of_unit_inverse() {
        let q = UniRat::var(Param::Q);
        let s = ZSeries::from_coeffs(4, vec![UniRat::one(), -q.clone()]);
        let inv = s.inverse().unwrap();
        assert_eq!(inv.coeff_at(0), Some(&UniRat::one()));
        assert_eq!(inv.coeff_at(3), Some(&q.pow(3)));
        assert_eq!(inv.mul(&s).unwrap(), ZSeries::one(4));
    }

    #[test]
    fn substitute_scales_by_q_powers() {
        let q = UniRat::var(Param::Q);
        let geo = ZSeries::from_coeffs(3, vec![UniRat::one(); 4]);
        let s = geo.substitute_z_power(&q, 1).unwrap();
        for n in 0..=3 {
            assert_eq!(s.coeff_at(n).unwrap(), &q.pow(n as u32));
        }
        let s2 = geo.substitute_z_power(&UniRat::one(), 2).unwrap();
        assert_eq!(s2.coeff_at(1).unwrap(), &UniRat::zero());
        assert_eq!(s2.coeff_at(2).unwrap(), &UniRat::one());
    }

    #[test]
    fn mismatched_parameters_error() {
        let a = ZSeries::constant(2, UniRat::var(Param::Q));
        let b = ZSeries::constant(2, UniRat::var(Param::T));
        assert!(matches!(a.add(&b), Err(AlgebraError::ParamMismatch(_, _))));
        assert!(matches!(a.mul(&b), Err(AlgebraError::ParamMismatch(_, _))));
    }
}
