//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qwalk::analysis::{crw_variance_series, fit_power_law, trace_distance_series, variance_series};
use qwalk::expsim::{expected_counts, experimental_entropy, reconstruct_density};
use qwalk::observables::{entropy_of_walk, fidelity, reduced_coin_density, trace_distance, CoinDensity};
use qwalk::verify::{oracle_discrepancy, random_coin_map, random_coin_state, run_suite, Engine};
use qwalk::{CoinBasis, CoinMap, Complex64, WalkState};

struct Outcome {
    passed: bool,
    detail: String,
}

fn criterion(id: u32, name: &str, budget: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let passed = out.passed && in_time;
    println!(
        "[{}] criterion {id}: {name}: {} ({:.2?} of {:.0?} budget{})",
        if passed { "PASS" } else { "FAIL" },
        out.detail,
        elapsed,
        budget,
        if in_time { "" } else { ", over budget" }
    );
    passed
}

fn table_iqw() -> Outcome {
    // step -> (expected, tolerance)
    let expected = [
        (1, 1.0, 1e-6),
        (2, 0.81128, 1e-5),
        (3, 1.0, 1e-6),
        (4, 0.99967, 1e-5),
        (5, 1.0, 1e-6),
        (6, 0.99967, 1e-5),
        (7, 1.0, 1e-6),
        (8, 0.99999, 1e-5),
        (9, 1.0, 1e-6),
        (10, 0.99999, 1e-5),
        (11, 1.0, 1e-6),
    ];
    let mut bad = Vec::new();
    for (t, e, tol) in expected {
        let got = entropy_of_walk(FRAC_PI_2, FRAC_PI_4, t);
        if (got - e).abs() > tol {
            bad.push(format!("t={t}: {got:.7} vs {e}"));
        }
    }
    Outcome { passed: bad.is_empty(), detail: if bad.is_empty() { "t=1..11 within tolerance".into() } else { bad.join("; ") } }
}

fn table_hqw() -> Outcome {
    let expected = [0.811, 0.811, 0.896, 0.896, 0.857, 0.857, 0.882, 0.882, 0.865, 0.865];
    let mut worst: f64 = 0.0;
    for (t, e) in (2..=11).zip(expected) {
        worst = worst.max((entropy_of_walk(FRAC_PI_2, 0.0, t) - e).abs());
    }
    Outcome { passed: worst <= 1e-3, detail: format!("max |E - table| = {worst:.2e} (tol 1e-3)") }
}

fn odd_maximality() -> Outcome {
    let coins = CoinMap::inhomogeneous(FRAC_PI_4);
    let mut s = WalkState::balanced(FRAC_PI_2);
    let mut min_odd = f64::INFINITY;
    for t in 1..=99 {
        s = s.step(&coins);
        if t % 2 == 1 {
            min_odd = min_odd.min(reduced_coin_density(&s).entropy());
        }
    }
    Outcome { passed: min_odd >= 1.0 - 1e-6, detail: format!("min E over odd t <= 99 = {min_odd:.12}") }
}

fn trace_distance_scaling() -> Outcome {
    let series = trace_distance_series(1000, FRAC_PI_2, FRAC_PI_4);
    match fit_power_law(&series, 10, 1000) {
        Ok(fit) => Outcome {
            passed: (fit.exponent + 1.90).abs() <= 0.05 && fit.r_squared >= 0.98,
            detail: format!(
                "exponent {:.4} (want -1.90 +- 0.05), r^2 {:.5} (want >= 0.98)",
                fit.exponent, fit.r_squared
            ),
        },
        Err(e) => Outcome { passed: false, detail: e.to_string() },
    }
}

fn ballistic_vs_diffusive() -> Outcome {
    let iqw = variance_series(1000, FRAC_PI_2, FRAC_PI_4);
    let hqw = variance_series(1000, FRAC_PI_2, 0.0);
    let crw = crw_variance_series(1000);
    let fits = [&iqw, &hqw, &crw].map(|s| fit_power_law(s, 100, 1000).map(|f| f.exponent));
    let [Ok(ei), Ok(eh), Ok(ec)] = fits else {
        return Outcome { passed: false, detail: format!("fit failed: {fits:?}") };
    };
    let (vi, vh) = (iqw.at(11).unwrap(), hqw.at(11).unwrap());
    let passed = (ei - 2.0).abs() <= 0.02 && (eh - 2.0).abs() <= 0.02 && (ec - 1.0).abs() <= 1e-10 && vi > vh;
    Outcome {
        passed,
        detail: format!("exponents IQW {ei:.4}, HQW {eh:.4}, CRW {ec:.12}; nu(11) IQW {vi:.4} > HQW {vh:.4}"),
    }
}

fn oracle_equivalence() -> Outcome {
    let worst = oracle_discrepancy(&Engine, 200, 20240611);
    Outcome { passed: worst < 1e-12, detail: format!("max |engine - oracle| = {worst:.3e} over 200 instances") }
}

fn tomography() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut min_f = f64::INFINITY;
    for _ in 0..50 {
        let coins = random_coin_map(&mut rng, 10);
        let (a0, b0) = random_coin_state(&mut rng);
        let t = rng.gen_range(0..=10);
        let s = WalkState::localized(a0, b0).unwrap().evolve(&coins, t);
        let rho = reconstruct_density(&expected_counts(&s, 1e15, 0.0).unwrap()).unwrap();
        min_f = min_f.min(fidelity(&rho, &reduced_coin_density(&s)));
    }
    let close = (0..100u64)
        .filter(|&seed| {
            experimental_entropy(FRAC_PI_2, FRAC_PI_4, 9, 1e6, 0.0, seed).is_ok_and(|e| (e - 1.0).abs() <= 0.01)
        })
        .count();
    Outcome {
        passed: min_f >= 1.0 - 1e-10 && close >= 95,
        detail: format!("noiseless min fidelity {min_f:.13}; {close}/100 seeds within 0.01 of E=1"),
    }
}

fn invariants() -> Outcome {
    let mut failures = Vec::new();
    let report = run_suite(&Engine);
    failures.extend(report.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)));

    let mut runner = TestRunner::new(Config { cases: 128, failure_persistence: None, ..Config::default() });
    let walk = (0.0..TAU, 0.0..TAU, 0usize..200);
    let r = runner.run(&walk, |(theta, phi, t)| {
        let s = WalkState::balanced(theta).evolve(&CoinMap::inhomogeneous(phi), t);
        prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-9);
        for x in s.positions().filter(|x| (x + t as i64).rem_euclid(2) == 1) {
            prop_assert_eq!(s.amplitude(x, CoinBasis::Zero), Complex64::new(0.0, 0.0));
            prop_assert_eq!(s.amplitude(x, CoinBasis::One), Complex64::new(0.0, 0.0));
        }
        let rho = reduced_coin_density(&s);
        let (hi, lo) = rho.eigenvalues();
        prop_assert!((0.0..=1.0).contains(&rho.entropy()));
        prop_assert!((hi + lo - 1.0).abs() <= 1e-10 && (hi * lo - rho.determinant()).abs() <= 1e-10);
        let alpha = theta * 0.37 + phi;
        let rotated = s.clone().with_global_phase(alpha);
        prop_assert!(trace_distance(&reduced_coin_density(&rotated), &rho) <= 1e-12);
        Ok(())
    });
    if let Err(e) = r {
        failures.push(format!("walk properties: {e}"));
    }

    let bloch = || (-0.577..0.577f64, -0.577..0.577f64, -0.577..0.577f64).prop_map(|(x, y, z)| CoinDensity::from_bloch(x, y, z));
    let r = runner.run(&(bloch(), bloch(), bloch()), |(a, b, c)| {
        prop_assert_eq!(trace_distance(&a, &b), trace_distance(&b, &a));
        prop_assert!(trace_distance(&a, &a) <= 1e-12);
        prop_assert!(trace_distance(&a, &c) <= trace_distance(&a, &b) + trace_distance(&b, &c) + 1e-10);
        Ok(())
    });
    if let Err(e) = r {
        failures.push(format!("trace distance axioms: {e}"));
    }

    Outcome {
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{} self-checks and 256 randomized property cases", report.checks.len())
        } else {
            failures.join("; ")
        },
    }
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "IQW entropy column", s(1), table_iqw),
        criterion(2, "HQW entropy column", s(1), table_hqw),
        criterion(3, "odd-step maximality to t=99", s(10), odd_maximality),
        criterion(4, "trace-distance power law", s(60), trace_distance_scaling),
        criterion(5, "ballistic vs diffusive variance", s(60), ballistic_vs_diffusive),
        criterion(6, "recursion vs dense oracle", s(30), oracle_equivalence),
        criterion(7, "tomography round trip", s(60), tomography),
        criterion(8, "invariant suite", s(60), invariants),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
