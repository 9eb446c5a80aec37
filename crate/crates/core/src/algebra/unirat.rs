//! Exact rational functions in one formal parameter.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::upoly::UPoly;
use super::{Param, Rational};
use crate::error::AlgebraError;

/// `num/den` in lowest terms over `Z[param]`, with a positive leading
/// coefficient in the denominator.
///
/// Constants are compatible with every parameter; two non-constant values
/// with different parameters never combine.
#[derive(Clone, Debug)]
pub struct UniRat {
    param: Param,
    num: UPoly,
    den: UPoly,
}

impl PartialEq for UniRat {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num
            && self.den == other.den
            && (self.param == other.param || self.is_constant())
    }
}

impl Eq for UniRat {}

impl UniRat {
    pub fn zero() -> Self {
        UniRat { param: Param::Q, num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> Self {
        UniRat::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        UniRat::from_bigint(BigInt::from(c))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        UniRat { param: Param::Q, num: UPoly::constant(c), den: UPoly::one() }
    }

    pub fn from_rational(r: &Rational) -> Self {
        UniRat::from_parts(Param::Q, UPoly::constant(r.numer().clone()), UPoly::constant(r.denom().clone()))
            .expect("rational has nonzero denominator")
    }

    /// The parameter itself.
    pub fn var(param: Param) -> Self {
        UniRat { param, num: UPoly::monomial(BigInt::one(), 1), den: UPoly::one() }
    }

    /// `param^k`, `k` of either sign.
    pub fn power(param: Param, k: i64) -> Self {
        let mono = UPoly::monomial(BigInt::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            UniRat { param, num: mono, den: UPoly::one() }
        } else {
            UniRat { param, num: UPoly::one(), den: mono }
        }
    }

    /// `c·param^k`.
    pub fn monomial(param: Param, c: i64, k: i64) -> Self {
        UniRat::power(param, k).scale_int(&BigInt::from(c))
    }

    pub fn poly(param: Param, num: UPoly) -> Self {
        UniRat { param, num, den: UPoly::one() }
    }

    pub fn from_i64_coeffs(param: Param, coeffs: &[i64]) -> Self {
        UniRat::poly(param, UPoly::from_i64(coeffs))
    }

    /// Builds and reduces `num/den`.
    pub fn from_parts(param: Param, num: UPoly, den: UPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(UniRat::reduce(param, num, den))
    }

    fn reduce(param: Param, num: UPoly, den: UPoly) -> Self {
        if num.is_zero() {
            return UniRat { param, num, den: UPoly::one() };
        }
        if den.is_one() {
            return UniRat { param, num, den };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        if den.leading().unwrap().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        UniRat { param, num, den }
    }

    pub fn param(&self) -> Param {
        self.param
    }

    /// Relabels the parameter (e.g. `t` to `q`) without changing coefficients.
    pub fn with_param(&self, param: Param) -> Self {
        UniRat { param, ..self.clone() }
    }

    pub fn numer(&self) -> &UPoly {
        &self.num
    }

    pub fn denom(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Constant value, if this does not depend on the parameter.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant()
            .then(|| Rational::new(self.num.coeff(0), self.den.coeff(0)))
    }

    /// Coefficients if this is a polynomial with integer coefficients.
    pub fn as_polynomial(&self) -> Option<&UPoly> {
        self.den.is_one().then_some(&self.num)
    }

    fn join_param(&self, other: &UniRat) -> Result<Param, AlgebraError> {
        if self.param == other.param || other.is_constant() {
            Ok(self.param)
        } else if self.is_constant() {
            Ok(other.param)
        } else {
            Err(AlgebraError::ParamMismatch(self.param, other.param))
        }
    }

    pub fn checked_add(&self, other: &UniRat) -> Result<UniRat, AlgebraError> {
        let param = self.join_param(other)?;
        if self.is_zero() {
            return Ok(other.with_param(param));
        }
        if other.is_zero() {
            return Ok(self.with_param(param));
        }
        if self.den.is_one() && other.den.is_one() {
            return Ok(UniRat { param, num: self.num.add(&other.num), den: UPoly::one() });
        }
        if self.den.is_one() {
            // gcd(a·d + c, d) = gcd(c, d) = 1
            let num = self.num.mul(&other.den).add(&other.num);
            return Ok(UniRat::reduce_sign(param, num, other.den.clone()));
        }
        if other.den.is_one() {
            let num = other.num.mul(&self.den).add(&self.num);
            return Ok(UniRat::reduce_sign(param, num, self.den.clone()));
        }
        if self.den == other.den {
            return Ok(UniRat::reduce(param, self.num.add(&other.num), self.den.clone()));
        }
        let g = self.den.gcd(&other.den);
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        let den = b1.mul(&other.den);
        Ok(UniRat::reduce(param, num, den))
    }

    fn reduce_sign(param: Param, num: UPoly, den: UPoly) -> Self {
        if num.is_zero() {
            return UniRat { param, num, den: UPoly::one() };
        }
        UniRat { param, num, den }
    }

    pub fn checked_sub(&self, other: &UniRat) -> Result<UniRat, AlgebraError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &UniRat) -> Result<UniRat, AlgebraError> {
        let param = self.join_param(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(UniRat::zero().with_param(param));
        }
        if self.is_one() {
            return Ok(other.with_param(param));
        }
        if other.is_one() {
            return Ok(self.with_param(param));
        }
        if self.den.is_one() && other.den.is_one() {
            return Ok(UniRat { param, num: self.num.mul(&other.num), den: UPoly::one() });
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let a = self.num.div_exact(&g1).unwrap();
        let d = other.den.div_exact(&g1).unwrap();
        let c = other.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        let mut num = a.mul(&c);
        let mut den = b.mul(&d);
        if den.leading().unwrap().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(UniRat { param, num, den })
    }

    pub fn checked_div(&self, other: &UniRat) -> Result<UniRat, AlgebraError> {
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<UniRat, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.leading().unwrap().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(UniRat { param: self.param, num, den })
    }

    pub fn neg_ref(&self) -> UniRat {
        UniRat { param: self.param, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale_int(&self, c: &BigInt) -> UniRat {
        if c.is_zero() {
            return UniRat::zero().with_param(self.param);
        }
        UniRat::reduce(self.param, self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> UniRat {
        let mut acc = UniRat::one().with_param(self.param);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power of either sign.
    pub fn powi(&self, e: i64) -> Result<UniRat, AlgebraError> {
        let p = self.pow(e.unsigned_abs() as u32);
        if e >= 0 { Ok(p) } else { p.inv() }
    }

    /// Value at `param = x`.
    pub fn eval(&self, x: &Rational) -> Result<Rational, AlgebraError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    /// `param ↦ param^k` for nonzero `k` (negative `k` inverts the parameter).
    pub fn compose_power(&self, k: i64) -> UniRat {
        assert!(k != 0, "compose_power(0) is a specialisation, use eval");
        let m = k.unsigned_abs() as usize;
        let (num, den) = (self.num.stretch(m), self.den.stretch(m));
        if k > 0 {
            return UniRat { param: self.param, num, den };
        }
        // P(1/q)/Q(1/q) = q^{dQ-dP} rev(P)/rev(Q)
        let dn = num.degree().unwrap_or(0) as i64;
        let dd = den.degree().unwrap_or(0) as i64;
        let (rn, rd) = (num.reversed(), den.reversed());
        let shift = dd - dn;
        let (n2, d2) = if shift >= 0 { (rn.shift(shift as usize), rd) } else { (rn, rd.shift((-shift) as usize)) };
        UniRat::reduce(self.param, n2, d2)
    }

    /// Exponent `e` with `self = c·param^e` for a constant `c`, if it is a monomial.
    pub fn monomial_exponent(&self) -> Option<i64> {
        if !(self.num.is_monomial() && self.den.is_monomial()) {
            return None;
        }
        Some(self.num.low_order()? as i64 - self.den.low_order()? as i64)
    }

    /// Renders as `num` or `(num)/(den)`.
    pub fn render(&self) -> String {
        let var = self.param.name();
        if self.den.is_one() {
            return self.num.render(var);
        }
        let wrap = |p: &UPoly| {
            let s = p.render(var);
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 { format!("({s})") } else { s }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }

    pub fn to_json(&self) -> UniRatJson {
        UniRatJson {
            param: self.param.name().to_string(),
            num: self.num.coeffs().iter().map(json_int).collect(),
            den: self.den.coeffs().iter().map(json_int).collect(),
        }
    }

    pub fn from_json(j: &UniRatJson) -> Result<UniRat, AlgebraError> {
        let param = Param::from_name(&j.param).ok_or_else(|| AlgebraError::Dimension(format!("unknown parameter {}", j.param)))?;
        let parse = |v: &[serde_json::Value]| -> Result<UPoly, AlgebraError> {
            v.iter()
                .map(|c| match c {
                    serde_json::Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|_| AlgebraError::NotConstant(n.to_string())),
                    serde_json::Value::String(s) => s.parse::<BigInt>().map_err(|_| AlgebraError::NotConstant(s.clone())),
                    other => Err(AlgebraError::NotConstant(other.to_string())),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(UPoly::from_coeffs)
        };
        UniRat::from_parts(param, parse(&j.num)?, parse(&j.den)?)
    }
}

fn json_int(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(c.to_string()),
    }
}

/// Wire form: ascending numerator and denominator coefficient lists.
/// Coefficients are JSON integers, or decimal strings when they exceed 64 bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniRatJson {
    pub param: String,
    pub num: Vec<serde_json::Value>,
    pub den: Vec<serde_json::Value>,
}

impl fmt::Display for UniRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for UniRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniRat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = UniRatJson::deserialize(d)?;
        UniRat::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl Default for UniRat {
    fn default() -> Self {
        UniRat::zero()
    }
}

impl From<i64> for UniRat {
    fn from(c: i64) -> Self {
        UniRat::from_int(c)
    }
}

impl Zero for UniRat {
    fn zero() -> Self {
        UniRat::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for UniRat {
    fn one() -> Self {
        UniRat::one()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&UniRat> for &UniRat {
            type Output = UniRat;
            fn $method(self, rhs: &UniRat) -> UniRat {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}: {e}", stringify!($method)))
            }
        }
        impl $trait<UniRat> for UniRat {
            type Output = UniRat;
            fn $method(self, rhs: UniRat) -> UniRat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&UniRat> for UniRat {
            type Output = UniRat;
            fn $method(self, rhs: &UniRat) -> UniRat {
                (&self).$method(rhs)
            }
        }
        impl $trait<UniRat> for &UniRat {
            type Output = UniRat;
            fn $method(self, rhs: UniRat) -> UniRat {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for UniRat {
    type Output = UniRat;
    fn neg(self) -> UniRat {
        self.neg_ref()
    }
}

impl Neg for &UniRat {
    type Output = UniRat;
    fn neg(self) -> UniRat {
        self.neg_ref()
    }
}

impl std::iter::Sum for UniRat {
    fn sum<I: Iterator<Item = UniRat>>(iter: I) -> UniRat {
        iter.fold(UniRat::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for UniRat {
    fn product<I: Iterator<Item = UniRat>>(iter: I) -> UniRat {
        iter.fold(UniRat::one(), |a, b| a * b)
    }
}
