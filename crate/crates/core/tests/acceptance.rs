//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p hlmoments --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use hlmoments::algebra::{rational, rational_int, Rational, UniRat};
use hlmoments::group::{aut_order, count_injective_homs, count_subgroups_of_type, eval_specialized, PGroup};
use hlmoments::identities::{verify, CaseParams, IdentityCase, IdentityId, Manifest, Strategy};
use hlmoments::moments::{coherence_check, m_u, m_u_s, selmer_product_sum, rank_profile_mass, Flavor};
use hlmoments::partition::{partitions_up_to, subpartitions, Partition};
use hlmoments::rbasis::{c_coeff, inversion_round_trip, mirror_poly, monomial_in_r_basis, rlambda_poly};

type Check = Result<String, String>;

fn int(n: i64) -> Rational {
    rational_int(n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn run_case(id: IdentityId, strategy: Strategy, params: CaseParams) -> Result<(), String> {
    let r = verify(&IdentityCase::new(id, strategy, params.clone()));
    ensure(r.pass, || format!("{id} {params:?}: {:?} {:?} {:?}", r.status, r.mismatch, r.error))
}

fn subgroup_oracle() -> Check {
    let mut n = 0;
    for p in [2u64, 3] {
        for lambda in partitions_up_to(4, None, None) {
            let h = PGroup::new(&lambda, p).map_err(|e| e.to_string())?;
            for mu in subpartitions(&lambda) {
                let count = count_subgroups_of_type(&h, &mu).map_err(|e| e.to_string())?;
                let formula = c_coeff(&lambda, &mu).eval(&int(p as i64)).unwrap();
                ensure(int(count as i64) == formula, || format!("λ={lambda} μ={mu} p={p}: {count} vs {formula}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} (λ, μ, p) triples"))
}

fn injection_oracle() -> Check {
    let mut n = 0;
    for p in [2u64, 3] {
        for lambda in partitions_up_to(3, None, None) {
            let r = rlambda_poly(&lambda, None).map_err(|e| e.to_string())?;
            for mu in partitions_up_to(4, None, None) {
                let h = PGroup::new(&mu, p).map_err(|e| e.to_string())?;
                let brute = count_injective_homs(&lambda, &h).map_err(|e| e.to_string())?;
                let formula = eval_specialized(&r, &h).map_err(|e| e.to_string())?;
                ensure(int(brute as i64) == formula, || format!("λ={lambda} H_{mu} p={p}: {brute} vs {formula}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} (λ, μ, p) triples"))
}

fn inversion() -> Check {
    let all = partitions_up_to(6, Some(3), None);
    for lambda in &all {
        ensure(inversion_round_trip(&monomial_in_r_basis(lambda)), || format!("λ={lambda}"))?;
    }
    Ok(format!("{} partitions", all.len()))
}

fn mirror_and_coherence() -> Check {
    let all = partitions_up_to(8, None, None);
    for lambda in &all {
        ensure(mirror_poly(lambda).palindromic, || format!("mirror polynomial of {lambda} not palindromic"))?;
    }
    let mut n = 0;
    for p in [2u64, 3, 5] {
        for lambda in partitions_up_to(5, None, None) {
            let rep = coherence_check(&lambda, p).map_err(|e| e.to_string())?;
            ensure(rep.pass, || format!("coherence λ={lambda} p={p}: {} vs {}", rep.lhs, rep.rhs))?;
            n += 1;
        }
    }
    Ok(format!("{} mirror polynomials, {n} coherence checks", all.len()))
}

fn class_group_first_moments() -> Check {
    let x1 = Partition::new(vec![1]);
    let m0 = m_u(&x1, 3, 0).map_err(|e| e.to_string())?;
    let m1 = m_u(&x1, 3, 1).map_err(|e| e.to_string())?;
    ensure(m0 == int(2) && m1 == rational(4, 3), || format!("M_0={m0} M_1={m1}"))?;
    Ok("M_0 = 2, M_1 = 4/3".into())
}

fn type_s_first_moments() -> Check {
    let x1 = Partition::new(vec![1]);
    for p in [2i64, 3, 5] {
        let m0 = m_u_s(&x1, p as u64, 0).map_err(|e| e.to_string())?;
        let m1 = m_u_s(&x1, p as u64, 1).map_err(|e| e.to_string())?;
        ensure(m0 == int(1 + p), || format!("p={p}: M_0^S={m0}"))?;
        ensure(m1 == int(1) + rational(1, p), || format!("p={p}: M_1^S={m1}"))?;
    }
    Ok("p ∈ {2,3,5}".into())
}

fn selmer_product() -> Check {
    for p in [2u64, 3, 5] {
        for m in 0..=6usize {
            let product = (1..=m as u32).map(|j| int(1) + int(p.pow(j) as i64)).fold(int(1), |a, b| a * b);
            let s = selmer_product_sum(m, p);
            ensure(s == product, || format!("m={m} p={p}: {s} vs {product}"))?;
        }
    }
    Ok("m ≤ 6, p ∈ {2,3,5}".into())
}

fn generating_functions() -> Check {
    let lambdas = partitions_up_to(4, None, None);
    for lambda in &lambdas {
        for p in [2u64, 3] {
            let params = CaseParams { lambda: Some(lambda.to_string()), p: Some(p), trunc: Some(6), ..Default::default() };
            run_case(IdentityId::Genfun, Strategy::TruncatedSeries, params)?;
        }
        let params = CaseParams { lambda: Some(lambda.to_string()), trunc: Some(6), ..Default::default() };
        run_case(IdentityId::Combinat, Strategy::TruncatedSeries, params)?;
    }
    Ok(format!("{} partitions through z^6", lambdas.len()))
}

fn restricted_sums() -> Check {
    let mut n = 0;
    for ell in 1..=3usize {
        for lambda in partitions_up_to(4, Some(ell), None) {
            for id in [IdentityId::UmoyAbelian, IdentityId::UmoyTypeS] {
                let params = CaseParams { lambda: Some(lambda.to_string()), ell: Some(ell), trunc: Some(8), ..Default::default() };
                run_case(id, Strategy::TruncatedSeries, params)?;
                n += 1;
            }
        }
        let params = CaseParams { ell: Some(ell), trunc: Some(8), ..Default::default() };
        run_case(IdentityId::Delaunay, Strategy::TruncatedSeries, params)?;
        // the row case of the general right side is 1 + z + … + z^ℓ
        let row = Partition::new(vec![ell]);
        let mp = mirror_poly(&row);
        ensure(mp.coeffs.iter().all(|c| *c == UniRat::one()), || format!("ℓ={ell}: C-side of (ℓ) is {:?}", mp.coeffs))?;
    }
    Ok(format!("{n} (ℓ, λ, flavor) cases through z^8, rows for ℓ ≤ 3"))
}

fn finite_forms() -> Check {
    for n in 1..=3usize {
        for k in 1..=3usize {
            let params = CaseParams { n: Some(n), k: Some(k), ..Default::default() };
            run_case(IdentityId::FiniteQbinhl, Strategy::SymbolicExact, params)?;
        }
    }
    let seed = Manifest::builtin().seed;
    for k in 1..=3usize {
        let params = CaseParams { n: Some(4), k: Some(k), samples: Some(20), seed: Some(seed), ..Default::default() };
        run_case(IdentityId::FiniteQbinhl, Strategy::RandomPoint, params)?;
    }
    for n in 1..=4usize {
        for k in 1..=3usize {
            let params = CaseParams { n: Some(n), k: Some(k), ..Default::default() };
            run_case(IdentityId::Csq, Strategy::SymbolicExact, params)?;
        }
    }
    Ok(format!("finite form n ≤ 3 symbolic, n = 4 at 20 points (seed {seed}); specialization n ≤ 4, k ≤ 3"))
}

fn truncated_hl() -> Check {
    for id in [IdentityId::Qbinhl, IdentityId::WarnaarA2, IdentityId::Lascoux] {
        let params = CaseParams { alphabet: Some(3), degree: Some(5), ..Default::default() };
        run_case(id, Strategy::TruncatedSeries, params)?;
    }
    let params = CaseParams { alphabet: Some(3), degree: Some(5), a_zero: Some(true), ..Default::default() };
    run_case(IdentityId::Qbinhl, Strategy::TruncatedSeries, params)?;
    Ok("alphabets of size 3, degree ≤ 5".into())
}

fn qbin_and_euler() -> Check {
    for n in 0..=8usize {
        run_case(IdentityId::Qbin, Strategy::SymbolicExact, CaseParams { n: Some(n), ..Default::default() })?;
    }
    run_case(IdentityId::Euler, Strategy::TruncatedSeries, CaseParams { trunc: Some(10), ..Default::default() })?;
    Ok("n ≤ 8; Euler through z^10".into())
}

fn automorphisms() -> Check {
    let mut n = 0;
    for p in [2u64, 3] {
        for lambda in partitions_up_to(4, None, None) {
            let h = PGroup::new(&lambda, p).map_err(|e| e.to_string())?;
            let brute = count_injective_homs(&lambda, &h).map_err(|e| e.to_string())?;
            let formula = aut_order(&lambda, p);
            ensure(int(brute as i64) == formula, || format!("λ={lambda} p={p}: {brute} vs {formula}"))?;
            n += 1;
        }
    }
    let spot = aut_order(&Partition::new(vec![1, 1]), 2);
    ensure(spot == int(6), || format!("|Aut H_(1,1)| at p=2 is {spot}"))?;
    Ok(format!("{n} groups; |Aut(H_(1,1))| = 6 at p = 2"))
}

fn rank_profiles() -> Check {
    let mut worst: f64 = 0.0;
    for p in [2u64, 3] {
        for u in [0i64, 1] {
            for flavor in [Flavor::Abelian, Flavor::TypeS] {
                if flavor == Flavor::TypeS && u == 0 {
                    continue;
                }
                for ell in 1..=2usize {
                    let mass = rank_profile_mass(p, u, ell, 6, flavor, 60).map_err(|e| e.to_string())?;
                    let dev = (mass.lo - 1.0).abs().max((mass.hi - 1.0).abs());
                    worst = worst.max(dev);
                    ensure(dev <= 1e-6, || format!("p={p} u={u} {flavor:?} ℓ={ell}: [{}, {}]", mass.lo, mass.hi))?;
                }
            }
        }
    }
    Ok(format!("worst deviation {worst:.2e}"))
}

fn mutation_guard() -> Check {
    let guard = Manifest::builtin().mutation_guard;
    let r = verify(&guard);
    let m = r.mismatch.ok_or("mutated identity passed")?;
    ensure(!r.pass && m.lhs != m.rhs, || "mismatch not localized".into())?;
    Ok(format!("{} fails at {:?}={:?}: {} vs {}", guard.id, m.variables, m.exponents, m.lhs, m.rhs))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 15] = [
        ("subgroup oracle equals C_{λ,μ}(p)", subgroup_oracle),
        ("injection oracle equals R_λ on H_μ", injection_oracle),
        ("inversion round trip through the R basis", inversion),
        ("mirror symmetry and type-S coherence", mirror_and_coherence),
        ("class-group first moments at p = 3", class_group_first_moments),
        ("type-S first moments", type_s_first_moments),
        ("Selmer product formula", selmer_product),
        ("group generating function and its q-form", generating_functions),
        ("restricted sums, type-S variant and row case", restricted_sums),
        ("finite q-binomial form and its specialization", finite_forms),
        ("degree-truncated Hall-Littlewood summations", truncated_hl),
        ("q-binomial theorem and Euler's identity", qbin_and_euler),
        ("automorphism orders", automorphisms),
        ("rank-profile normalization", rank_profiles),
        ("mutation guard", mutation_guard),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2}. {name} ({detail}; {ms} ms)", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2}. {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of 15 criteria passed in {:.1} s", 15 - failures, start.elapsed().as_secs_f64());
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
