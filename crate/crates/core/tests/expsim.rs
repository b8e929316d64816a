use approx::assert_abs_diff_eq;
use qwalk::expsim::{
    expected_counts, experimental_entropy, measured_density, projection_probability, reconstruct_density,
    simulate_counts, surviving_mean, BasisFrequencies,
};
use qwalk::observables::reduced_coin_density;
use qwalk::walk::evolve_balanced;
use qwalk::Error;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

#[test]
fn counts_track_probabilities_at_high_flux() {
    let state = evolve_balanced(FRAC_PI_2, FRAC_PI_4, 6);
    let n0 = 1e7;
    let counts = simulate_counts(&state, n0, 0.0, 17).unwrap();
    let mut outside = 0;
    for row in &counts.rows {
        let lambda = n0 * projection_probability(&state, row.position, row.basis);
        let sigma = lambda.sqrt().max(1.0);
        if (row.count as f64 - lambda).abs() > 3.0 * sigma {
            outside += 1;
        }
    }
    // 3 sigma holds for ~99.7% of cells; allow one stray
    assert!(outside <= 1, "{outside} of {} cells outside 3 sigma", counts.rows.len());

    // H and V are the two outcomes of one setting
    let totals = counts.totals();
    let hv = (totals.h + totals.v) as f64;
    assert!((hv - n0).abs() < 3.0 * n0.sqrt(), "{hv}");
}

#[test]
fn counts_are_seed_deterministic() {
    let state = evolve_balanced(FRAC_PI_2, 0.0, 5);
    let a = simulate_counts(&state, 1e4, 3.6, 5).unwrap();
    let b = simulate_counts(&state, 1e4, 3.6, 5).unwrap();
    let c = simulate_counts(&state, 1e4, 3.6, 6).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn expected_counts_decay_per_step() {
    let factor = 10f64.powf(-0.36);
    let mut previous = None;
    for t in 0..=11 {
        let state = evolve_balanced(FRAC_PI_2, FRAC_PI_4, t);
        let totals = expected_counts(&state, 1e15, 3.6).unwrap().totals();
        let total = (totals.h + totals.v) as f64;
        assert_abs_diff_eq!(total / surviving_mean(1e15, 3.6, t), 1.0, epsilon = 1e-9);
        if let Some(prev) = previous {
            assert_abs_diff_eq!(total / prev, factor, epsilon = 1e-9);
        }
        previous = Some(total);
    }
}

#[test]
fn inversion_recovers_exact_density() {
    for t in [0, 1, 2, 5, 10] {
        for (theta, phi) in [(FRAC_PI_2, FRAC_PI_4), (FRAC_PI_2, 0.0), (0.3, 2.1), (4.0, 5.5)] {
            let rho = reduced_coin_density(&evolve_balanced(theta, phi, t));
            let back = BasisFrequencies::of_density(&rho).invert();
            let (m, n) = (rho.matrix(), back.matrix());
            for r in 0..2 {
                for c in 0..2 {
                    assert!((m[r][c] - n[r][c]).norm() < 1e-10, "t={t} theta={theta} phi={phi}");
                }
            }
        }
    }
}

#[test]
fn noiseless_counts_reconstruct_state() {
    let state = evolve_balanced(FRAC_PI_2, FRAC_PI_4, 7);
    let rho = reconstruct_density(&expected_counts(&state, 1e15, 0.0).unwrap()).unwrap();
    let theory = reduced_coin_density(&state);
    assert_abs_diff_eq!(rho.pop0, theory.pop0, epsilon = 1e-10);
    assert!((rho.coherence - theory.coherence).norm() < 1e-10);
}

#[test]
fn hadamard_step_two_measured_entropy() {
    for seed in 0..5 {
        let e = experimental_entropy(FRAC_PI_2, 0.0, 2, 1e6, 0.0, seed).unwrap();
        assert!((e - 0.81).abs() < 0.01, "seed {seed}: {e}");
    }
}

#[test]
fn reconstruction_errors_grow_with_steps() {
    let seeds = 0..400u64;
    // total variance of the reconstructed Bloch vector over non-empty runs
    let spread = |t: usize| {
        let vectors: Vec<[f64; 3]> = seeds
            .clone()
            .filter_map(|s| match measured_density(FRAC_PI_2, FRAC_PI_4, t, 1e2, 3.6, s) {
                Ok(rho) => Some(rho.bloch()),
                Err(Error::EmptyCounts) => None,
                Err(e) => panic!("{e}"),
            })
            .collect();
        assert!(vectors.len() >= 2, "t={t}: only {} non-empty runs", vectors.len());
        let n = vectors.len() as f64;
        (0..3)
            .map(|k| {
                let mean = vectors.iter().map(|v| v[k]).sum::<f64>() / n;
                vectors.iter().map(|v| (v[k] - mean).powi(2)).sum::<f64>() / (n - 1.0)
            })
            .sum::<f64>()
    };
    let (early, late) = (spread(1), spread(11));
    assert!(late > early, "t=1 spread {early}, t=11 spread {late}");
}

#[test]
fn empty_counts_are_rejected() {
    let state = evolve_balanced(FRAC_PI_2, FRAC_PI_4, 11);
    let counts = simulate_counts(&state, 1e-3, 3.6, 0).unwrap();
    assert_eq!(counts.total(), 0);
    assert!(matches!(reconstruct_density(&counts), Err(Error::EmptyCounts)));
}

#[test]
fn source_parameters_are_validated() {
    let state = evolve_balanced(FRAC_PI_2, FRAC_PI_4, 1);
    for (n0, loss) in [(0.0, 0.0), (-1.0, 0.0), (f64::NAN, 0.0), (1e3, -0.1), (1e3, f64::INFINITY)] {
        assert!(matches!(simulate_counts(&state, n0, loss, 0), Err(Error::InvalidParameter { .. })));
    }
}
