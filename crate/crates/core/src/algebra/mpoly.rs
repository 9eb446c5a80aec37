//! Sparse multivariate polynomials with [`UniRat`] coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::unirat::UniRat;
use super::Rational;
use crate::error::AlgebraError;

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

/// `Σ c_e x^e` over a fixed number of variables; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, UniRat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: UniRat) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, UniRat::one())
    }

    /// The variable `x_i` (0-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::term(e, UniRat::one())
    }

    pub fn term(exps: Monomial, c: UniRat) -> Self {
        let mut p = MPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, UniRat> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, UniRat> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> UniRat {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exps: Monomial, c: UniRat) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn scale(&self, c: &UniRat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&UniRat) -> UniRat) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs(&self, f: impl Fn(&UniRat) -> Result<UniRat, AlgebraError>) -> Result<MPoly, AlgebraError> {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Multiplies by the monomial `x^exps`.
    pub fn shift(&self, exps: &[u32]) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Keeps only terms of total degree `≤ max_deg`.
    pub fn truncate_degree(&self, max_deg: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product truncated at total degree `max_deg`.
    pub fn mul_truncated(&self, other: &MPoly, max_deg: u32) -> MPoly {
        let mut acc: BTreeMap<Monomial, UniRat> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            let d1: u32 = e1.iter().sum();
            if d1 > max_deg {
                continue;
            }
            for (e2, c2) in &other.terms {
                let d2: u32 = e2.iter().sum();
                if d1 + d2 > max_deg {
                    continue;
                }
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                let slot = acc.entry(e).or_default();
                *slot = &*slot + &c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { nvars: self.nvars, terms: acc }
    }

    /// Applies a permutation of variables: `x_i ↦ x_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; self.nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[perm[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Embeds into a ring with more variables; `positions[i]` is the new index of `x_i`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> MPoly {
        let mut out = MPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[positions[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Substitutes `x_i ↦ images[i]`, each image living in a common ring.
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::one(p.nvars), p.clone()]).collect();
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Evaluates at `x_i = values[i]`.
    pub fn eval(&self, values: &[UniRat]) -> UniRat {
        assert_eq!(values.len(), self.nvars);
        let mut powers: Vec<Vec<UniRat>> = values.iter().map(|v| vec![UniRat::one(), v.clone()]).collect();
        let mut acc = UniRat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &values[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Evaluates coefficients and variables at rationals.
    pub fn eval_rational(&self, param: &Rational, values: &[Rational]) -> Result<Rational, AlgebraError> {
        let mut acc = Rational::default();
        for (e, c) in &self.terms {
            let mut t = c.eval(param)?;
            for (v, &k) in values.iter().zip(e) {
                t *= num_traits::pow(v.clone(), k as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact division by `lead·x_var + rest`, where `lead` is a nonzero
    /// scalar and `rest` does not involve `x_var`.
    pub fn div_linear(&self, var: usize, lead: &UniRat, rest: &MPoly) -> Result<MPoly, AlgebraError> {
        if lead.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        debug_assert!(rest.degree_in(var).unwrap_or(0) == 0);
        let inv_lead = lead.inv()?;
        // group by the power of x_var
        let mut slices: Vec<MPoly> = Vec::new();
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            if slices.len() <= k {
                slices.resize(k + 1, MPoly::zero(self.nvars));
            }
            let mut e2 = e.clone();
            e2[var] = 0;
            slices[k].add_term(e2, c.clone());
        }
        if slices.is_empty() {
            return Ok(MPoly::zero(self.nvars));
        }
        let d = slices.len() - 1;
        // synthetic division from the top
        let mut quot: Vec<MPoly> = vec![MPoly::zero(self.nvars); d.max(1)];
        let mut carry = MPoly::zero(self.nvars);
        for k in (1..=d).rev() {
            let top = &slices[k] - &carry;
            let qk = top.scale(&inv_lead);
            carry = rest * &qk;
            quot[k - 1] = qk;
        }
        let remainder = &slices[0] - &carry;
        if !remainder.is_zero() {
            return Err(AlgebraError::InexactDivision);
        }
        let mut out = MPoly::zero(self.nvars);
        for (k, slice) in quot.into_iter().enumerate() {
            for (mut e, c) in slice.terms {
                e[var] += k as u32;
                out.add_term(e, c);
            }
        }
        Ok(out)
    }

    /// Exact division by `x_a - x_b`.
    pub fn div_difference(&self, a: usize, b: usize) -> Result<MPoly, AlgebraError> {
        let rest = -MPoly::var(self.nvars, b);
        self.div_linear(a, &UniRat::one(), &rest)
    }

    pub fn render(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{}", names[i], k) })
                .collect();
            let cs = c.render();
            if mono.is_empty() {
                parts.push(cs);
            } else if c.is_one() {
                parts.push(mono.join("*"));
            } else {
                parts.push(format!("({cs})*{}", mono.join("*")));
            }
        }
        parts.join(" + ")
    }

    pub fn to_json(&self) -> MPolyJson {
        MPolyJson {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| MPolyTermJson { exps: e.clone(), coeff: c.clone() }).collect(),
        }
    }
}

/// Wire form of an [`MPoly`]: a list of exponent vectors with coefficients.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MPolyJson {
    pub nvars: usize,
    pub terms: Vec<MPolyTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MPolyTermJson {
    pub exps: Vec<u32>,
    pub coeff: UniRat,
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        f.write_str(&self.render(&refs))
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: BTreeMap<Monomial, UniRat> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                let slot = acc.entry(e).or_default();
                *slot = &*slot + &c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { nvars: self.nvars, terms: acc }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -(self.clone())
    }
}

macro_rules! owned_ops {
    ($trait:ident, $method:ident) => {
        impl $trait<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                (&self).$method(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Param;

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn division_by_difference() {
        let n = 3;
        // (x1 - x2)(x1 + q x3) / (x1 - x2)
        let q = UniRat::var(Param::Q);
        let f = &x(n, 0) + &x(n, 2).scale(&q);
        let prod = &(&x(n, 0) - &x(n, 1)) * &f;
        assert_eq!(prod.div_difference(0, 1).unwrap(), f);
        assert_eq!(prod.div_difference(1, 0).unwrap(), -f.clone());
        assert_eq!(f.div_difference(0, 1), Err(AlgebraError::InexactDivision));
    }

    #[test]
    fn division_by_linear_with_scalar_lead() {
        // (1 - q x1) * (x1^2 + 3 x2) / (1 - q x1)
        let n = 2;
        let q = UniRat::var(Param::Q);
        let lin = &MPoly::one(n) - &x(n, 0).scale(&q);
        let g = &x(n, 0).pow(2) + &x(n, 1).scale(&UniRat::from_int(3));
        let prod = &lin * &g;
        assert_eq!(prod.div_linear(0, &(-q), &MPoly::one(n)).unwrap(), g);
    }

    #[test]
    fn substitute_and_eval() {
        let n = 2;
        let f = &x(n, 0).pow(2) - &x(n, 1);
        // x1 -> x1 + x2, x2 -> x1 x2
        let img = vec![&x(n, 0) + &x(n, 1), &x(n, 0) * &x(n, 1)];
        let g = f.substitute(&img);
        let expect = &(&x(n, 0).pow(2) + &x(n, 1).pow(2)) + &(&x(n, 0) * &x(n, 1));
        assert_eq!(g, expect);
        let v = g.eval(&[UniRat::from_int(2), UniRat::from_int(3)]);
        assert_eq!(v, UniRat::from_int(19));
    }

    #[test]
    fn permute_swaps_variables() {
        let n = 3;
        let f = &x(n, 0).pow(2) * &x(n, 2);
        assert_eq!(f.permute(&[2, 1, 0]), &x(n, 2).pow(2) * &x(n, 0));
    }
}
