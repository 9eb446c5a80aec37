//! Exact scalar, polynomial and truncated-series arithmetic.

mod mpoly;
mod qseries;
mod series;
mod unirat;
mod upoly;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use mpoly::{MPoly, Monomial};
pub use qseries::{
    euler_inverse_series, euler_series, q_factorial, q_factorial_poly, qbinomial, qbinomial_in,
    qbinomial_inverse_identity, qpoch, qpoch_base, qpochhammer, PochArg, PochOrder, PochValue,
};
pub use series::ZSeries;
pub use unirat::{UniRat, UniRatJson};
pub use upoly::UPoly;

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;

/// Name of the formal parameter a [`UniRat`] lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Q,
    T,
    A,
    Z,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Q => "q",
            Param::T => "t",
            Param::A => "a",
            Param::Z => "z",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        match s {
            "q" => Some(Param::Q),
            "t" => Some(Param::T),
            "a" => Some(Param::A),
            "z" => Some(Param::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `a/b` fraction string, or just `a` for integers.
pub fn render_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, crate::error::ParseError> {
    let bad = || crate::error::ParseError::BadRational(s.to_string());
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.trim_start().starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" { BigInt::from(0) } else { whole.parse().map_err(|_| bad())? };
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = Rational::new(f, scale);
        let w = Rational::from_integer(w);
        return Ok(if neg { w - frac_part } else { w + frac_part });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Serde adapter writing rationals as `a/b` strings.
pub mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_rational, render_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Float approximation of an exact rational.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("-2").unwrap(), rational_int(-2));
        assert_eq!(parse_rational("0.25").unwrap(), rational(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rational(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(render_rational(&rational(4, 3)), "4/3");
        assert_eq!(render_rational(&rational(4, 2)), "2");
    }
}
