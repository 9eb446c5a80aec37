//! Identities between (truncated) polynomials in finite alphabets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CaseParams, Sides};
use crate::algebra::{q_factorial, MPoly, Param, UniRat};
use crate::error::{Error, Result};
use crate::hall_littlewood::{b_lambda, hl_p};
use crate::partition::{partitions_up_to, Partition};
use crate::rbasis::{dot_product_conjugates, mirror_poly, qprime_skew};

fn qpow(k: i64) -> UniRat {
    UniRat::power(Param::Q, k)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// `(a;q^{-1})_ℓ = ∏_{j<ℓ} (1 - a q^{-j})` with `a` the variable `a_var`.
fn poch_a(nvars: usize, a_var: Option<usize>, ell: usize) -> MPoly {
    let Some(a) = a_var else {
        return MPoly::one(nvars);
    };
    let mut out = MPoly::one(nvars);
    for j in 0..ell {
        out = &out * &(MPoly::one(nvars) - MPoly::var(nvars, a).scale(&qpow(-(j as i64))));
    }
    out
}

/// `Σ_{k≤max} (c·x^e)^k`.
fn geometric(nvars: usize, exps: &[u32], c: &UniRat, max: usize) -> MPoly {
    let mut out = MPoly::zero(nvars);
    for k in 0..=max {
        out.add_term(exps.iter().map(|&e| e * k as u32).collect(), c.pow(k as u32));
    }
    out
}

/// Drops terms whose degree in the first `nx` variables exceeds `max`.
fn truncate_x(f: &MPoly, nx: usize, max: usize) -> MPoly {
    let mut out = MPoly::zero(f.nvars());
    for (e, c) in f.terms() {
        if e[..nx].iter().sum::<u32>() as usize <= max {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}

fn unit(nvars: usize, i: usize, k: u32) -> Vec<u32> {
    let mut e = vec![0; nvars];
    e[i] = k;
    e
}

fn alphabet_and_degree(p: &CaseParams) -> Result<(usize, usize)> {
    let n = p.req(p.alphabet, "alphabet")?;
    if n == 0 {
        return Err(Error::Invalid("alphabet must be nonempty".into()));
    }
    Ok((n, p.req(p.degree, "degree")?))
}

fn embedded(lambda: &Partition, n: usize, nvars: usize, offset: usize) -> Result<MPoly> {
    let positions: Vec<usize> = (offset..offset + n).collect();
    Ok(hl_p(lambda, n)?.poly.embed(nvars, &positions))
}

/// `Σ_λ q^{n(λ)} (a;q^{-1})_{ℓ(λ)} P_λ(x) = ∏ (1 - a x_i)/(1 - x_i)` through
/// degree `d` in `x`.
pub(super) fn qbinhl(p: &CaseParams) -> Result<Sides> {
    let (n, d) = alphabet_and_degree(p)?;
    let a_zero = p.a_zero.unwrap_or(false);
    let nv = n + 1;
    let a_var = if a_zero { None } else { Some(n) };
    let mut lhs = MPoly::zero(nv);
    for lambda in partitions_up_to(d, None, Some(n)) {
        let term = embedded(&lambda, n, nv, 0)?.scale(&qpow(lambda.nstat() as i64));
        lhs = &lhs + &(&term * &poch_a(nv, a_var, lambda.len()));
    }
    let mut rhs = MPoly::one(nv);
    for i in 0..n {
        let mut factor = geometric(nv, &unit(nv, i, 1), &UniRat::one(), d);
        if let Some(a) = a_var {
            let mut e = unit(nv, i, 1);
            e[a] = 1;
            factor = &factor * &(MPoly::one(nv) - MPoly::term(e, UniRat::one()));
        }
        rhs = truncate_x(&(&rhs * &factor), n, d);
    }
    let mut vars = names("x", n);
    vars.push("a".into());
    let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok(Sides::from_polys(&vars, &lhs, &rhs))
}

/// Pairs `(λ, μ)` of partitions of length `≤ n` with `|λ| + |μ| ≤ d`.
fn pairs(n: usize, d: usize) -> Vec<(Partition, Partition)> {
    let mut out = Vec::new();
    for lambda in partitions_up_to(d, None, Some(n)) {
        for mu in partitions_up_to(d - lambda.size(), None, Some(n)) {
            out.push((lambda.clone(), mu));
        }
    }
    out
}

/// `∏_i ∏_j f(x_i y_j)` times `∏_i` of the one-alphabet factors, truncated.
fn two_alphabet_product(n: usize, d: usize, x_factor: impl Fn(usize) -> MPoly, pair_factor: impl Fn(&[u32]) -> MPoly) -> MPoly {
    let nv = 2 * n;
    let mut out = MPoly::one(nv);
    for i in 0..n {
        out = out.mul_truncated(&x_factor(i), d as u32);
        for j in 0..n {
            let mut e = unit(nv, i, 1);
            e[n + j] = 1;
            out = out.mul_truncated(&pair_factor(&e), d as u32);
        }
    }
    out
}

fn xy_names(n: usize) -> Vec<String> {
    let mut v = names("x", n);
    v.extend(names("y", n));
    v
}

/// `Σ_{λ,μ} q^{n(λ)+n(μ)-(λ'|μ')} P_λ(x) P_μ(y)` against
/// `∏ 1/((1-x_i)(1-y_i)) ∏_{i,j} (1 - x_i y_j)/(1 - x_i y_j/q)`.
pub(super) fn warnaar_a2(p: &CaseParams) -> Result<Sides> {
    let (n, d) = alphabet_and_degree(p)?;
    let nv = 2 * n;
    let mut lhs = MPoly::zero(nv);
    for (lambda, mu) in pairs(n, d) {
        let e = (lambda.nstat() + mu.nstat()) as i64 - dot_product_conjugates(&lambda, &mu) as i64;
        let term = &embedded(&lambda, n, nv, 0)? * &embedded(&mu, n, nv, n)?;
        lhs = &lhs + &term.scale(&qpow(e));
    }
    let rhs = two_alphabet_product(
        n,
        d,
        |i| geometric(nv, &unit(nv, i, 1), &UniRat::one(), d).mul_truncated(&geometric(nv, &unit(nv, n + i, 1), &UniRat::one(), d), d as u32),
        |e| (MPoly::one(nv) - MPoly::term(e.to_vec(), UniRat::one())).mul_truncated(&geometric(nv, e, &qpow(-1), d / 2), d as u32),
    );
    let vars = xy_names(n);
    let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok(Sides::from_polys(&vars, &lhs, &rhs))
}

/// Block 0: `Σ_{μ⊆λ} P_λ(x) P_μ(y) b_μ(q) Q'_{λ/μ}(1;q)` against
/// `∏ 1/(1-x_i) ∏_{i,j} (1 - q x_i y_j)/(1 - x_i y_j)`.
///
/// Block 1: the same with `y = {z, zq, zq², …}`, where the left side
/// collapses to `Σ_λ q^{n(λ)} P_λ(x) · M_λ(1/q; z)` with `M_λ` the mirror
/// polynomial, and the right side to `∏ 1/((1-x_i)(1-z x_i))`.
pub(super) fn lascoux(p: &CaseParams) -> Result<Sides> {
    let (n, d) = alphabet_and_degree(p)?;
    let nv = 2 * n;
    let mut lhs = MPoly::zero(nv);
    for (lambda, mu) in pairs(n, d) {
        if !lambda.contains(&mu) {
            continue;
        }
        let c = b_lambda(&mu) * qprime_skew(&lambda, &mu);
        let term = &embedded(&lambda, n, nv, 0)? * &embedded(&mu, n, nv, n)?;
        lhs = &lhs + &term.scale(&c);
    }
    let rhs = two_alphabet_product(
        n,
        d,
        |i| geometric(nv, &unit(nv, i, 1), &UniRat::one(), d),
        |e| (MPoly::one(nv) - MPoly::term(e.to_vec(), UniRat::var(Param::Q))).mul_truncated(&geometric(nv, e, &UniRat::one(), d / 2), d as u32),
    );
    let vars = xy_names(n);
    let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
    let mut sides = Sides::new(&[]);
    sides.variables = std::iter::once("block".to_string()).chain(vars.iter().map(|s| s.to_string())).collect();
    sides.extend_tagged(0, Sides::from_polys(&vars, &lhs, &rhs));

    // principal specialization of y; variables x_1..x_n, z, padded to 2n slots
    let z = n;
    let mut lhs = MPoly::zero(nv);
    for lambda in partitions_up_to(d, None, Some(n)) {
        let mirror = mirror_poly(&lambda);
        let mut zpoly = MPoly::zero(nv);
        for (k, c) in mirror.coeffs.iter().enumerate() {
            zpoly.add_term(unit(nv, z, k as u32), c.compose_power(-1));
        }
        let term = embedded(&lambda, n, nv, 0)?.scale(&qpow(lambda.nstat() as i64));
        lhs = &lhs + &(&term * &zpoly);
    }
    let mut rhs = MPoly::one(nv);
    for i in 0..n {
        let mut xz = unit(nv, i, 1);
        xz[z] = 1;
        let f = &geometric(nv, &unit(nv, i, 1), &UniRat::one(), d) * &geometric(nv, &xz, &UniRat::one(), d);
        rhs = truncate_x(&(&rhs * &f), n, d);
    }
    sides.extend_tagged(1, Sides::from_polys(&vars, &lhs, &rhs));
    Ok(sides)
}

fn finite_params(p: &CaseParams) -> Result<(usize, usize)> {
    let n = p.req(p.n, "n")?;
    let k = p.req(p.k, "k")?;
    if n == 0 || k == 0 {
        return Err(Error::Invalid("n and k must be positive".into()));
    }
    Ok((n, k))
}

/// Partitions inside the `n × k` box (at most `n` parts, each at most `k`).
fn box_partitions(n: usize, k: usize) -> Vec<Partition> {
    partitions_up_to(n * k, Some(k), Some(n))
}

/// Left side of the finite form: `Σ_{λ⊆(k^n)} q^{n(λ)} (a;q^{-1})_{ℓ(λ)} (a;q^{-1})_{n-m_k(λ)} P_λ(x)`,
/// in variables `x_1..x_n, a`.
fn finite_lhs(n: usize, k: usize) -> Result<MPoly> {
    let nv = n + 1;
    let mut lhs = MPoly::zero(nv);
    for lambda in box_partitions(n, k) {
        let weight = &poch_a(nv, Some(n), lambda.len()) * &poch_a(nv, Some(n), n - lambda.multiplicity(k));
        let term = embedded(&lambda, n, nv, 0)?.scale(&qpow(lambda.nstat() as i64));
        lhs = &lhs + &(&term * &weight);
    }
    Ok(lhs)
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << n).map(move |mask| (0..n).map(|i| mask >> i & 1 == 1).collect())
}

fn binom2(s: usize) -> i64 {
    (s * s.saturating_sub(1) / 2) as i64
}

/// Fully symbolic check: the right side is brought over the common
/// denominator `∏_{i<j}(x_i - x_j) ∏_i ∏_{m<n} (1 - x_i q^m)` and divided out exactly.
pub(super) fn finite_qbinhl_symbolic(p: &CaseParams) -> Result<Sides> {
    let (n, k) = finite_params(p)?;
    let nv = n + 1;
    let a = n;
    let one = MPoly::one(nv);
    let x = |i: usize| MPoly::var(nv, i);
    let lin = |i: usize, m: usize| &one - &x(i).scale(&qpow(m as i64));

    let mut numer = MPoly::zero(nv);
    for inside in subsets(n) {
        let s = inside.iter().filter(|&&b| b).count();
        let mut t = (&poch_a(nv, Some(a), s) * &poch_a(nv, Some(a), n - s)).scale(&qpow(k as i64 * binom2(s)));
        for i in 0..n {
            if inside[i] {
                // x_i^k (x_i - a q^{1-n}) / (x_i - q^{1-s}), the pole rewritten as -q^{s-1}/(1 - x_i q^{s-1})
                let f = &x(i).pow(k as u32) * &(&x(i) - &MPoly::var(nv, a).scale(&qpow(1 - n as i64)));
                t = (&t * &f).scale(&-qpow(s as i64 - 1));
                for m in (0..n).filter(|&m| m + 1 != s) {
                    t = &t * &lin(i, m);
                }
            } else {
                let mut e = unit(nv, i, 1);
                e[a] = 1;
                t = &t * &(&one - &MPoly::term(e, UniRat::one()));
                for m in (0..n).filter(|&m| m != s) {
                    t = &t * &lin(i, m);
                }
            }
        }
        let mut sign_flip = false;
        for i in 0..n {
            for j in i + 1..n {
                match (inside[i], inside[j]) {
                    (true, false) => t = &t * &(&x(i) - &x(j).scale(&UniRat::var(Param::Q))),
                    (false, true) => {
                        t = &t * &(&x(j) - &x(i).scale(&UniRat::var(Param::Q)));
                        sign_flip = !sign_flip;
                    }
                    _ => t = &t * &(&x(i) - &x(j)),
                }
            }
        }
        numer = if sign_flip { &numer - &t } else { &numer + &t };
    }
    let mut rhs = numer;
    for i in 0..n {
        for m in 0..n {
            rhs = rhs.div_linear(i, &-qpow(m as i64), &one)?;
        }
        for j in i + 1..n {
            rhs = rhs.div_difference(i, j)?;
        }
    }
    let lhs = finite_lhs(n, k)?;
    let mut vars = names("x", n);
    vars.push("a".into());
    let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok(Sides::from_polys(&vars, &lhs, &rhs))
}

/// Distinct random rationals avoiding 0 and 1, so no right-hand pole is hit.
fn sample_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<UniRat> {
    let mut pts: Vec<crate::algebra::Rational> = Vec::with_capacity(n);
    while pts.len() < n {
        let num: i64 = rng.gen_range(-12..=12);
        let den: i64 = rng.gen_range(1..=9);
        let r = crate::algebra::rational(num, den);
        let bad = r == crate::algebra::rational_int(0) || r == crate::algebra::rational_int(1) || pts.contains(&r);
        if !bad {
            pts.push(r);
        }
    }
    pts.iter().map(UniRat::from_rational).collect()
}

/// Evaluates the `x` variables, leaving a polynomial in the last variable `a`.
fn eval_x(f: &MPoly, xs: &[UniRat]) -> MPoly {
    let n = xs.len();
    let mut powers: Vec<Vec<UniRat>> = xs.iter().map(|v| vec![UniRat::one(), v.clone()]).collect();
    let mut out = MPoly::zero(1);
    for (e, c) in f.terms() {
        let mut t = c.clone();
        for i in 0..n {
            let k = e[i] as usize;
            while powers[i].len() <= k {
                let next = powers[i].last().unwrap() * &xs[i];
                powers[i].push(next);
            }
            if k > 0 {
                t = t * &powers[i][k];
            }
        }
        out.add_term(vec![e[n]], t);
    }
    out
}

/// Exact comparison at random rational `x`, with `a` and `q` symbolic.
/// Keys are `(sample, power of a)`.
pub(super) fn finite_qbinhl_sampled(p: &CaseParams) -> Result<Sides> {
    let (n, k) = finite_params(p)?;
    let samples = p.samples.unwrap_or(20);
    let seed = p.seed.ok_or_else(|| Error::Manifest("random-point case without a seed".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lhs_poly = finite_lhs(n, k)?;
    let mut sides = Sides::new(&["sample", "a"]);
    for sample in 0..samples {
        let xs = sample_points(&mut rng, n);
        let lhs = eval_x(&lhs_poly, &xs);

        let one = MPoly::one(1);
        let a = MPoly::var(1, 0);
        let poch = |ell: usize| poch_a(1, Some(0), ell);
        let mut rhs = MPoly::zero(1);
        for inside in subsets(n) {
            let s = inside.iter().filter(|&&b| b).count();
            let mut scalar = qpow(k as i64 * binom2(s));
            let mut t = &poch(s) * &poch(n - s);
            for i in 0..n {
                if inside[i] {
                    scalar = scalar * xs[i].pow(k as u32) / (&xs[i] - &qpow(1 - s as i64));
                    t = &t * &(&MPoly::constant(1, xs[i].clone()) - &a.scale(&qpow(1 - n as i64)));
                } else {
                    scalar = scalar / (UniRat::one() - &xs[i] * &qpow(s as i64));
                    t = &t * &(&one - &a.scale(&xs[i]));
                }
            }
            for i in 0..n {
                for j in 0..n {
                    if inside[i] && !inside[j] {
                        scalar = scalar * (&xs[i] - &(&xs[j] * &UniRat::var(Param::Q))) / (&xs[i] - &xs[j]);
                    }
                }
            }
            rhs = &rhs + &t.scale(&scalar);
        }
        sides.extend_tagged(sample as i64, Sides::from_polys(&["a"], &lhs, &rhs));
    }
    Ok(sides)
}

/// Principal specialization of the finite form, symbolic in `z`, `a`, `q`.
/// The right side is cleared of `∏_{m=-1}^{2n-1} (1 - z q^m)` and divided back.
pub(super) fn csq(p: &CaseParams) -> Result<Sides> {
    let (n, k) = finite_params(p)?;
    let (z, a, nv) = (0, 1, 2);
    let one = MPoly::one(nv);
    let zv = MPoly::var(nv, z);
    let av = MPoly::var(nv, a);
    let poch = |ell: usize| poch_a(nv, Some(a), ell);
    let lin = |m: i64| &one - &zv.scale(&qpow(m));

    let mut lhs = MPoly::zero(nv);
    for lambda in box_partitions(n, k) {
        let ell = lambda.len();
        let c = qpow(2 * lambda.nstat() as i64) * q_factorial(Param::Q, n) / (q_factorial(Param::Q, n - ell) * b_lambda(&lambda));
        let w = &poch(ell) * &poch(n - lambda.multiplicity(k));
        lhs = &lhs + &(&w * &MPoly::term(unit(nv, z, lambda.size() as u32), c));
    }

    let mut numer = MPoly::zero(nv);
    for r in 0..=n {
        let ri = r as i64;
        let mut scalar = qpow((2 * k as i64 + 3) * binom2(r)) / q_factorial(Param::Q, r);
        if r % 2 == 1 {
            scalar = -scalar;
        }
        for j in 0..r {
            scalar = scalar * (UniRat::one() - qpow((n - r + 1 + j) as i64));
        }
        let mut t = MPoly::term(unit(nv, z, (k * r) as u32), scalar);
        t = &t * &lin(2 * ri - 1);
        for j in 0..n - r {
            let e = vec![1, 1];
            t = &t * &(&one - &MPoly::term(e, qpow(ri + j as i64)));
        }
        t = &t * &(&poch(r) * &poch(n - r));
        // z^r (a q^{1-n}/z; q^{-1})_r = ∏_j (z - a q^{1-n-j})
        for j in 0..r {
            t = &t * &(&zv - &av.scale(&qpow(1 - n as i64 - j as i64)));
        }
        for m in -1..=(2 * n as i64 - 1) {
            if m < ri - 1 || m > ri + n as i64 - 1 {
                t = &t * &lin(m);
            }
        }
        numer = &numer + &t;
    }
    let mut rhs = numer;
    for m in -1..=(2 * n as i64 - 1) {
        rhs = rhs.div_linear(z, &-qpow(m), &one)?;
    }
    Ok(Sides::from_polys(&["z", "a"], &lhs, &rhs))
}
