//! One test per acceptance criterion; each prints a single PASS/FAIL line.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use harmonic2v::coeff::{int, rat};
use harmonic2v::hypergeom::{verify_g_grid, verify_hypergeometric_identities};
use harmonic2v::pizzetti::{
    c_power_one, c_power_one_iterated, gegenbauer, sphere_integrate, stiefel_monte_carlo_batch, stiefel_value,
    MonteCarloOptions, SphereValue,
};
use harmonic2v::random::{random_bihomogeneous, random_double_harmonic};
use harmonic2v::simplicial::decompose::{decompose_full, verify_component_orthogonality, Strategy};
use harmonic2v::simplicial::oracle::{verify_ladder, verify_master_projection};
use harmonic2v::simplicial::projection::verify_projection_self_adjoint;
use harmonic2v::special::{factorial, rising};
use harmonic2v::transvector::verify_quadratic_relations;
use harmonic2v::{Dim, GaussianRational, Monomial, Polynomial, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(n: u32, name: &str, passed: bool, detail: String) {
    println!("criterion {n:>2} {name}: {} ({detail})", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "criterion {n} failed: {detail}");
}

fn d(m: usize) -> Dim {
    Dim::new(m).unwrap()
}

#[test]
fn criterion_01_worked_example_normalizers() {
    let start = Instant::now();
    let dim = d(6);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = random_bihomogeneous(dim, 3, 2, 12, &mut rng);
    let result = decompose_full(&p, Strategy::Direct).unwrap();
    let found: BTreeMap<(u32, u32), Rational> = result
        .components
        .iter()
        .filter(|c| (c.a, c.b) == (0, 0))
        .map(|c| ((c.component.index.k, c.component.index.l), c.component.normalizer.clone()))
        .collect();
    let m = int(6);
    let expected = [
        ((5, 0), rat(1, 40)),
        ((3, 0), rat(5, 84)),
        ((4, 1), rat(1, 3)),
        ((1, 0), rat(1, 100)),
        ((2, 1), rat(4, 35)),
    ];
    let closed = [
        ((3, 0), &m * (&m + int(4)) / (int(3) * (&m - int(2)) * (&m + int(1)) * (&m + int(6)))),
        ((1, 0), int(1) / (int(2) * (&m - int(1)) * (&m + int(4)))),
        ((2, 1), (&m + int(2)) / ((&m + int(1)) * (&m + int(4)))),
    ];
    let mut ok = expected.iter().all(|(kl, v)| found.get(kl) == Some(v));
    ok &= closed.iter().all(|(kl, v)| found.get(kl) == Some(v));
    ok &= result.reconstruct() == p;
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(10);
    let shown: Vec<String> = found.iter().map(|((k, l), v)| format!("({k},{l})={v}")).collect();
    report(1, "worked example normalizers", ok, format!("{}, {elapsed:.2?}", shown.join(" ")));
}

#[test]
fn criterion_02_round_trip() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut total, mut failures) = (0, Vec::new());
    for m in [5, 6, 7] {
        for p in 0..=4 {
            for q in 0..=4 {
                for _ in 0..50 {
                    let poly = random_bihomogeneous(d(m), p, q, 4, &mut rng);
                    total += 1;
                    if decompose_full(&poly, Strategy::Direct).unwrap().reconstruct() != poly {
                        failures.push((m, p, q));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(300);
    report(2, "round-trip reconstruction", ok, format!("{total} inputs, failures {failures:?}, {elapsed:.2?}"));
}

#[test]
fn criterion_03_quadratic_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut summary = Vec::new();
    let mut ok = true;
    for m in [5, 6, 7] {
        let samples: Vec<Polynomial> = (0..20)
            .map(|t| {
                let (k, l) = [(1, 1), (2, 1), (2, 2), (3, 1), (1, 2), (3, 2), (2, 3)][t % 7];
                random_double_harmonic(d(m), k, l, &mut rng)
            })
            .collect();
        let reports = verify_quadratic_relations(&samples).unwrap();
        ok &= reports.len() == 6 && reports.iter().all(|r| r.ok() && r.passed == 20);
        summary.push((m, reports.iter().map(|r| r.passed).sum::<usize>()));
    }
    report(3, "quadratic relations", ok, format!("passes per m {summary:?}"));
}

#[test]
fn criterion_04_ladder_oracle() {
    let mut count = 0;
    let mut failed = Vec::new();
    for m in [5, 6] {
        for c in verify_ladder(d(m), (3, 2), 2).unwrap() {
            count += 1;
            if !c.passed {
                failed.push(c);
            }
        }
    }
    report(4, "ladder coefficients vs operator chains", failed.is_empty() && count > 0, format!("{count} checks, failed {failed:?}"));
}

#[test]
fn criterion_05_master_projection() {
    let mut count = 0;
    let mut failed = Vec::new();
    for m in [5, 6] {
        for c in verify_master_projection(d(m), (4, 2), 3).unwrap() {
            count += 1;
            if !c.passed {
                failed.push(c);
            }
        }
    }
    report(5, "master projection", failed.is_empty() && count > 0, format!("{count} checks, failed {failed:?}"));
}

#[test]
fn criterion_06_orthogonality() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut pairs, mut bad) = (0, Vec::new());
    for m in [5, 6] {
        for k in 0..=3 {
            for l in 0..=3 {
                let p = random_bihomogeneous(d(m), k, l, 6, &mut rng);
                let result = decompose_full(&p, Strategy::Direct).unwrap();
                let r = verify_component_orthogonality(&result).unwrap();
                pairs += r.pairs_checked;
                if !r.ok() {
                    bad.push((m, k, l, r.nonzero));
                }
            }
        }
    }
    report(6, "orthogonality of components", bad.is_empty() && pairs > 0, format!("{pairs} pairs, nonzero {bad:?}"));
}

#[test]
fn criterion_07_projection_self_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut checked, mut failures) = (0, 0);
    for k in 0..=3 {
        for l in 0..=k {
            let samples: Vec<Polynomial> = (0..20).map(|_| random_double_harmonic(d(5), k, l, &mut rng)).collect();
            let pairs: Vec<Polynomial> = samples.chunks(2).flat_map(|c| c.to_vec()).collect();
            for pair in pairs.chunks(2) {
                let r = verify_projection_self_adjoint(pair).unwrap();
                checked += r.checked;
                failures += r.failures.len();
            }
        }
    }
    report(7, "projection self-adjointness", failures == 0 && checked > 0, format!("{checked} ordered pairs, {failures} failures"));
}

#[test]
fn criterion_08_hypergeometric() {
    let mut g_checks = 0;
    let mut ok = true;
    for m in [5, 6, 7] {
        let checks = verify_g_grid(d(m), (4, 3), 3).unwrap();
        g_checks += checks.len();
        ok &= checks.iter().all(|c| c.passed);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let identities = verify_hypergeometric_identities(&mut rng, 10).unwrap();
    let mut per: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &identities {
        ok &= c.passed;
        *per.entry(c.identity).or_default() += 1;
    }
    ok &= per.values().all(|&n| n >= 10) && per.len() == 4;
    report(8, "hypergeometric certification", ok, format!("G grid {g_checks} tuples, identity draws {per:?}"));
}

#[test]
fn criterion_09_gegenbauer_embedding() {
    let mut ok = true;
    for m in [5, 6] {
        let dim = d(m);
        let lambda = dim.half() - int(1);
        for beta in 0..=6 {
            let closed = c_power_one(beta, dim).unwrap();
            ok &= closed == c_power_one_iterated(beta, dim).unwrap();
            // value at (x, u) = (e₁, e₂): the t⁰ term
            let frame: Vec<u16> = (0..m).map(|j| if j == 0 { beta as u16 } else { 0 }).collect();
            let uframe: Vec<u16> = (0..m).map(|j| if j == 1 { beta as u16 } else { 0 }).collect();
            let at_frame = closed.coeff(&Monomial::new(&frame, &uframe));
            let t0 = factorial(beta) / (int(2).pow(beta as i32) * rising(&lambda, beta)) * &gegenbauer(beta, &lambda)[0];
            ok &= at_frame == GaussianRational::from_rational(t0.clone());
            if beta % 2 == 1 {
                ok &= t0 == int(0);
            }
        }
    }
    report(9, "Gegenbauer embedding", ok, "beta <= 6, m in {5, 6}".into());
}

fn monomials(m: usize, max_degree: u32) -> Vec<Vec<u16>> {
    let mut out = vec![vec![]];
    for _ in 0..2 * m {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().map(|&v| v as u32).sum();
            for v in 0..=(max_degree - used) {
                let mut f = e.clone();
                f.push(v as u16);
                next.push(f);
            }
        }
        out = next;
    }
    out
}

/// Signed coordinate permutations and the swap `x ↔ u` identify monomials
/// with equal integrals; the canonical key is the sorted exponent pairs.
fn orbit_key(e: &[u16], m: usize) -> Vec<(u16, u16)> {
    let mut a: Vec<(u16, u16)> = (0..m).map(|j| (e[j], e[m + j])).filter(|p| *p != (0, 0)).collect();
    let mut b: Vec<(u16, u16)> = a.iter().map(|&(x, y)| (y, x)).collect();
    a.sort();
    b.sort();
    a.min(b)
}

#[test]
fn criterion_10_pizzetti_vs_monte_carlo() {
    let start = Instant::now();
    let dim = d(5);
    let mut classes: BTreeMap<Vec<(u16, u16)>, Vec<Polynomial>> = BTreeMap::new();
    let all = monomials(5, 6);
    for e in &all {
        let p = Polynomial::from_terms(dim, [(Monomial::new(&e[..5], &e[5..]), GaussianRational::from_integer(1))]);
        classes.entry(orbit_key(e, 5)).or_default().push(p);
    }
    let reps: Vec<Polynomial> = classes.values().map(|v| v[0].clone()).collect();
    let opts = MonteCarloOptions { samples: 1_000_000, seed: 10, symmetrize: true, parallel: true };
    let estimates = stiefel_monte_carlo_batch(&reps, &opts).unwrap();
    let mut worst: f64 = 0.0;
    let mut violations = Vec::new();
    for ((key, members), est) in classes.iter().zip(&estimates) {
        for p in members {
            let exact = stiefel_value(p).unwrap();
            let (re, im) = exact.to_f64_pair();
            let bound = 3.0 * est.stderr + 1e-12;
            let dev = (re - est.estimate).abs();
            worst = worst.max(dev / bound);
            if dev > bound || im != 0.0 {
                violations.push((key.clone(), re, est.estimate, est.stderr));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut identities_ok = true;
    for t in 0..20 {
        let (k, l) = [(0, 0), (1, 1), (2, 0), (2, 2), (3, 1), (4, 2), (1, 3), (4, 4)][t % 8];
        let p = random_bihomogeneous(dim, k, l, 5, &mut rng);
        let v = stiefel_value(&p).unwrap();
        identities_ok &= stiefel_value(&(&Polynomial::norm_sq_x(dim) * &p)).unwrap() == v;
        identities_ok &= stiefel_value(&(&Polynomial::norm_sq_u(dim) * &p)).unwrap() == v;
        identities_ok &= stiefel_value(&(&Polynomial::inner_ux(dim) * &p)).unwrap() == GaussianRational::default();
    }
    let one = stiefel_value(&Polynomial::one(dim)).unwrap() == GaussianRational::from_integer(1);
    let elapsed = start.elapsed();
    let ok = violations.is_empty() && identities_ok && one && elapsed < Duration::from_secs(120);
    report(
        10,
        "Pizzetti vs Monte Carlo",
        ok,
        format!(
            "{} monomials in {} classes, worst |dev|/bound {worst:.3}, violations {violations:?}, identities {identities_ok}, I2(1)=1 {one}, {elapsed:.2?}",
            all.len(),
            classes.len()
        ),
    );
}

#[test]
fn criterion_11_sphere_pizzetti() {
    let v = sphere_integrate(&Polynomial::one(Dim::classical(4).unwrap())).unwrap();
    let ok = v == SphereValue { coeff: GaussianRational::from_integer(2), pi_power: 2 } && v.to_string() == "2 * pi^2";
    report(11, "classical sphere Pizzetti", ok, format!("I1(1) at m=4 = {v}"));
}
