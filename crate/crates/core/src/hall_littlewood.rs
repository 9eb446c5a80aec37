//! Hall-Littlewood polynomials `P_λ(x;q)` on small alphabets.

use std::collections::{BTreeSet, HashMap};
use std::sync::{LazyLock, Mutex};

use crate::algebra::{q_factorial, MPoly, Param, UniRat};
use crate::error::{Error, ResourceError};
use crate::partition::Partition;

pub const MAX_ALPHABET: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HLValue {
    pub lambda: Partition,
    pub n: usize,
    pub poly: MPoly,
}

static CACHE: LazyLock<Mutex<HashMap<(Partition, usize), MPoly>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// All permutations of `0..n` with their signs.
pub(crate) fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            (p, inversions % 2 == 1)
        })
        .collect()
}

/// Divides by the Vandermonde product `∏_{i<j}(x_i - x_j)`.
pub(crate) fn divide_by_vandermonde(mut f: MPoly, n: usize) -> Result<MPoly, Error> {
    for i in 0..n {
        for j in i + 1..n {
            f = f.div_difference(i, j)?;
        }
    }
    Ok(f)
}

/// `P_λ(x_1..x_n; q)` by symmetrizing over the cosets `S_n / S_n^λ`.
///
/// The sum is multiplied through by the Vandermonde product, which turns it
/// into an alternant, and then divided back out exactly.
pub fn hl_p(lambda: &Partition, n: usize) -> Result<HLValue, Error> {
    if n > MAX_ALPHABET {
        return Err(ResourceError { bound: "hl_alphabet", limit: MAX_ALPHABET as u64, needed: n as u64 }.into());
    }
    if lambda.len() > n {
        return Ok(HLValue { lambda: lambda.clone(), n, poly: MPoly::zero(n) });
    }
    let key = (lambda.clone(), n);
    if let Some(poly) = CACHE.lock().unwrap().get(&key) {
        return Ok(HLValue { lambda: lambda.clone(), n, poly: poly.clone() });
    }

    let mut parts = lambda.parts().to_vec();
    parts.resize(n, 0);
    let q = UniRat::var(Param::Q);
    let mut g = MPoly::term(parts.iter().map(|&p| p as u32).collect(), UniRat::one());
    for i in 0..n {
        for j in i + 1..n {
            let xi = MPoly::var(n, i);
            let xj = MPoly::var(n, j);
            let factor = if parts[i] > parts[j] { &xi - &xj.scale(&q) } else { &xi - &xj };
            g = &g * &factor;
        }
    }

    let mut seen = BTreeSet::new();
    let mut alternant = MPoly::zero(n);
    for (perm, odd) in permutations(n) {
        let mut image = vec![0; n];
        for i in 0..n {
            image[perm[i]] = parts[i];
        }
        if !seen.insert(image) {
            continue;
        }
        let term = g.permute(&perm);
        alternant = if odd { &alternant - &term } else { &alternant + &term };
    }
    let poly = divide_by_vandermonde(alternant, n)?;

    debug_assert!(is_symmetric(&poly, n), "P_{lambda} is not symmetric");
    debug_assert_eq!(poly.coeff(&parts.iter().map(|&p| p as u32).collect::<Vec<_>>()), UniRat::one());
    CACHE.lock().unwrap().insert(key, poly.clone());
    Ok(HLValue { lambda: lambda.clone(), n, poly })
}

/// Invariance under every adjacent transposition.
pub fn is_symmetric(f: &MPoly, n: usize) -> bool {
    (0..n.saturating_sub(1)).all(|i| {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        f.permute(&perm) == *f
    })
}

/// `b_λ(q) = ∏_i (q;q)_{m_i(λ)}`.
pub fn b_lambda(lambda: &Partition) -> UniRat {
    lambda.multiplicities().iter().map(|&m| q_factorial(Param::Q, m)).product()
}

/// `P_λ(z, zq, …, zq^{n-1}; q) = coeff · z^{|λ|}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalSpec {
    pub z_degree: usize,
    pub coeff: UniRat,
}

/// Closed form of the principal specialization; `n = None` is the limit of
/// infinitely many variables.
pub fn principal_spec(lambda: &Partition, n: Option<usize>) -> PrincipalSpec {
    let z_degree = lambda.size();
    let base = UniRat::power(Param::Q, lambda.nstat() as i64) / b_lambda(lambda);
    let coeff = match n {
        None => base,
        Some(n) if lambda.len() > n => UniRat::zero(),
        Some(n) => {
            // (q)_n / (q)_{n-ℓ} = ∏_{j=n-ℓ+1}^{n} (1 - q^j)
            let ratio: UniRat = (n - lambda.len() + 1..=n).map(|j| UniRat::one() - UniRat::power(Param::Q, j as i64)).product();
            let out = base * ratio;
            if cfg!(debug_assertions) && n <= 4 && lambda.size() <= 6 {
                assert_eq!(specialize_hl(lambda, n), out, "principal specialization of P_{lambda} in {n} variables");
            }
            out
        }
    };
    PrincipalSpec { z_degree, coeff }
}

/// `P_λ(1, q, …, q^{n-1}; q)` computed from the polynomial itself.
pub fn specialize_hl(lambda: &Partition, n: usize) -> UniRat {
    let p = hl_p(lambda, n).expect("alphabet within bound");
    let values: Vec<UniRat> = (0..n).map(|i| UniRat::power(Param::Q, i as i64)).collect();
    p.poly.eval(&values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational_int;
    use crate::partition::partitions_up_to;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn q() -> UniRat {
        UniRat::var(Param::Q)
    }

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    /// Schur polynomial as the bialternant `a_{λ+δ} / a_δ`.
    fn schur(lambda: &Partition, n: usize) -> MPoly {
        let mut parts = lambda.parts().to_vec();
        parts.resize(n, 0);
        let mut a = MPoly::zero(n);
        for (perm, odd) in permutations(n) {
            let mut e = vec![0u32; n];
            for i in 0..n {
                e[perm[i]] = (parts[i] + n - 1 - i) as u32;
            }
            let t = MPoly::term(e, if odd { UniRat::from_int(-1) } else { UniRat::one() });
            a = &a + &t;
        }
        divide_by_vandermonde(a, n).unwrap()
    }

    /// Monomial symmetric polynomial `m_λ`.
    fn monomial_symmetric(lambda: &Partition, n: usize) -> MPoly {
        let mut parts = lambda.parts().to_vec();
        parts.resize(n, 0);
        let mut seen = BTreeSet::new();
        let mut out = MPoly::zero(n);
        for (perm, _) in permutations(n) {
            let mut e = vec![0u32; n];
            for i in 0..n {
                e[perm[i]] = parts[i] as u32;
            }
            if seen.insert(e.clone()) {
                out.add_term(e, UniRat::one());
            }
        }
        out
    }

    #[test]
    fn small_examples() {
        for n in 1..=4 {
            let e1 = (0..n).fold(MPoly::zero(n), |acc, i| &acc + &x(n, i));
            assert_eq!(hl_p(&p(&[1]), n).unwrap().poly, e1);
        }
        assert_eq!(hl_p(&p(&[1, 1]), 2).unwrap().poly, &x(2, 0) * &x(2, 1));
        let expect = &(&x(2, 0).pow(2) + &x(2, 1).pow(2)) + &(&x(2, 0) * &x(2, 1)).scale(&(UniRat::one() - q()));
        assert_eq!(hl_p(&p(&[2]), 2).unwrap().poly, expect);
        assert!(hl_p(&p(&[1, 1, 1]), 2).unwrap().poly.is_zero());
        assert!(matches!(hl_p(&p(&[1]), 6), Err(Error::Resource(_))));
        assert_eq!(hl_p(&Partition::empty(), 3).unwrap().poly, MPoly::one(3));
    }

    #[test]
    fn symmetric_and_homogeneous() {
        for n in 1..=4 {
            for lambda in partitions_up_to(5, None, Some(n)) {
                let v = hl_p(&lambda, n).unwrap();
                assert!(is_symmetric(&v.poly, n), "{lambda} n={n}");
                assert!(v.poly.is_homogeneous());
                assert_eq!(v.poly.total_degree().unwrap(), lambda.size() as u32);
            }
        }
    }

    #[test]
    fn q_zero_gives_schur_and_q_one_gives_monomial() {
        for n in 1..=3 {
            for lambda in partitions_up_to(4, None, Some(n)) {
                let hl = hl_p(&lambda, n).unwrap().poly;
                let at = |v: i64| hl.map_coeffs(|c| UniRat::from_rational(&c.eval(&rational_int(v)).unwrap()));
                assert_eq!(at(0), schur(&lambda, n), "q=0, {lambda}, n={n}");
                assert_eq!(at(1), monomial_symmetric(&lambda, n), "q=1, {lambda}, n={n}");
            }
        }
    }

    #[test]
    fn b_lambda_examples() {
        let one_minus_q = UniRat::one() - q();
        assert_eq!(b_lambda(&p(&[2, 1])), one_minus_q.pow(2));
        assert_eq!(b_lambda(&p(&[1, 1])), one_minus_q * (UniRat::one() - q().pow(2)));
        assert_eq!(b_lambda(&Partition::empty()), UniRat::one());
    }

    #[test]
    fn principal_examples() {
        let s = principal_spec(&p(&[2, 1]), Some(2));
        assert_eq!(s.z_degree, 3);
        assert_eq!(s.coeff, q() * (UniRat::one() + q()));
        assert_eq!(principal_spec(&p(&[1]), Some(1)).coeff, UniRat::one());
        assert_eq!(principal_spec(&p(&[1, 1]), Some(1)).coeff, UniRat::zero());
        assert_eq!(principal_spec(&p(&[1, 1]), None).coeff, q() / b_lambda(&p(&[1, 1])));
    }

    #[test]
    fn principal_matches_polynomial() {
        for n in 1..=4 {
            for lambda in partitions_up_to(5, None, Some(n)) {
                assert_eq!(specialize_hl(&lambda, n), principal_spec(&lambda, Some(n)).coeff, "{lambda} n={n}");
            }
        }
    }
}
