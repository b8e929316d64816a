//! Self-check suite behind `qwalk verify`.
//!
//! Every check runs against a [`Stepper`], so a deliberately broken engine
//! can be plugged in to confirm the suite notices.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coin::{CoinMap, CoinOperator};
use crate::expsim::{reconstruct_density, expected_counts};
use crate::observables::{fidelity, reduced_coin_density, trace_distance, CoinDensity};
use crate::oracle::{build_step_unitary, oracle_evolve, DenseVector};
use crate::walk::{CoinBasis, WalkState};

/// One application of the walk operator.
pub trait Stepper {
    fn step(&self, state: &WalkState, coins: &CoinMap) -> WalkState;

    fn evolve(&self, state: &WalkState, coins: &CoinMap, steps: usize) -> WalkState {
        (0..steps).fold(state.clone(), |s, _| self.step(&s, coins))
    }
}

/// The library's own recursion.
#[derive(Debug, Clone, Copy, Default)]
pub struct Engine;

impl Stepper for Engine {
    fn step(&self, state: &WalkState, coins: &CoinMap) -> WalkState {
        state.step(coins)
    }
}

impl<F: Fn(&WalkState, &CoinMap) -> WalkState> Stepper for F {
    fn step(&self, state: &WalkState, coins: &CoinMap) -> WalkState {
        self(state, coins)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(CheckResult { name, passed, detail });
    }
}

/// Random U(2) coin from Euler angles drawn uniformly.
pub fn random_coin<R: Rng>(rng: &mut R) -> CoinOperator {
    CoinOperator::from_euler(rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))
}

/// Random default coin plus an independent random override at every site with `|x| <= radius`.
pub fn random_coin_map<R: Rng>(rng: &mut R, radius: i64) -> CoinMap {
    let mut map = CoinMap::homogeneous(random_coin(rng));
    for x in -radius..=radius {
        map = map.with_override(x, random_coin(rng));
    }
    map
}

/// Random normalized coin state.
pub fn random_coin_state<R: Rng>(rng: &mut R) -> (Complex64, Complex64) {
    let (s, c) = rng.gen_range(0.0..FRAC_PI_2).sin_cos();
    (Complex64::from_polar(c, rng.gen_range(0.0..TAU)), Complex64::from_polar(s, rng.gen_range(0.0..TAU)))
}

/// Max amplitude discrepancy between `stepper` and the dense oracle over
/// `instances` random coin maps, initial states and `t <= 12`.
pub fn oracle_discrepancy<S: Stepper>(stepper: &S, instances: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let t = rng.gen_range(1..=12usize);
        let t_max = t + 1;
        let coins = random_coin_map(&mut rng, t_max as i64);
        let (a0, b0) = if rng.gen_bool(0.5) {
            let s = WalkState::balanced(rng.gen_range(0.0..TAU));
            (s.amplitude(0, CoinBasis::Zero), s.amplitude(0, CoinBasis::One))
        } else {
            random_coin_state(&mut rng)
        };
        let start = WalkState::localized(a0, b0).expect("random coin state is normalized");
        let unitary = build_step_unitary(t_max, &coins).expect("t_max >= 2");
        let dense = oracle_evolve(&DenseVector::localized(t_max, a0, b0), &unitary, t).expect("support stays inside");
        worst = worst.max(dense.max_abs_diff(&stepper.evolve(&start, &coins, t)));
    }
    worst
}

fn entropy_with<S: Stepper>(stepper: &S, theta: f64, phi: f64, t: usize) -> f64 {
    reduced_coin_density(&stepper.evolve(&WalkState::balanced(theta), &CoinMap::inhomogeneous(phi), t)).entropy()
}

fn density_ok(rho: &CoinDensity) -> bool {
    (rho.trace() - 1.0).abs() <= 1e-10 && rho.determinant() >= -1e-10
}

/// Runs the full suite. Deterministic.
pub fn run_suite<S: Stepper>(stepper: &S) -> VerifyReport {
    let mut report = VerifyReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let worst = oracle_discrepancy(stepper, 200, 1);
    report.push("oracle_equivalence", worst < 1e-12, format!("max |engine - oracle| = {worst:.3e} over 200 instances"));

    let iqw = CoinMap::inhomogeneous(FRAC_PI_4);
    let long = stepper.evolve(&WalkState::balanced(FRAC_PI_2), &iqw, 1000);
    let drift = (long.norm_sqr() - 1.0).abs();
    report.push("normalization_t1000", drift < 1e-9, format!("|norm - 1| = {drift:.3e} after 1000 steps"));

    let mut parity_ok = true;
    let mut support_ok = true;
    for _ in 0..20 {
        let t = rng.gen_range(0..40usize);
        let s = stepper.evolve(&WalkState::balanced(rng.gen_range(0.0..TAU)), &CoinMap::inhomogeneous(rng.gen_range(0.0..TAU)), t);
        for x in -(t as i64) - 3..=t as i64 + 3 {
            let zero = s.amplitude(x, CoinBasis::Zero) == Complex64::new(0.0, 0.0)
                && s.amplitude(x, CoinBasis::One) == Complex64::new(0.0, 0.0);
            if (x + t as i64).rem_euclid(2) == 1 && !zero {
                parity_ok = false;
            }
            if x.unsigned_abs() as usize > t && !zero {
                support_ok = false;
            }
        }
    }
    report.push("parity_support", parity_ok && support_ok, format!("parity {parity_ok}, |x| <= t {support_ok}"));

    let (p, q) = (rng.gen_range(0..30usize), rng.gen_range(0..30usize));
    let coins = random_coin_map(&mut rng, 10);
    let start = WalkState::balanced(rng.gen_range(0.0..TAU));
    let split = stepper.evolve(&stepper.evolve(&start, &coins, p), &coins, q);
    let joint = stepper.evolve(&start, &coins, p + q);
    let diff = split.max_abs_diff(&joint);
    report.push("composition", diff < 1e-12, format!("evolve({p}+{q}) vs evolve({p}) then {q}: {diff:.3e}"));

    let alpha = rng.gen_range(0.0..TAU);
    let (a0, b0) = random_coin_state(&mut rng);
    let plain = WalkState::localized(a0, b0).expect("normalized");
    let rotated = plain.clone().with_global_phase(alpha);
    let coins = random_coin_map(&mut rng, 6);
    let out_plain = stepper.evolve(&plain, &coins, 9);
    let out_rotated = stepper.evolve(&rotated, &coins, 9);
    let phase_diff = out_plain.with_global_phase(alpha).max_abs_diff(&out_rotated);
    let rho_diff = trace_distance(&reduced_coin_density(&out_rotated), &reduced_coin_density(&stepper.evolve(&plain, &coins, 9)));
    report.push(
        "global_phase",
        phase_diff < 1e-12 && rho_diff < 1e-12,
        format!("amplitudes {phase_diff:.3e}, coin state {rho_diff:.3e}"),
    );

    let expected = [(2, 0.81128, 1e-5), (4, 0.99967, 1e-5), (8, 0.99999, 1e-5), (9, 1.0, 1e-6)];
    let worst = expected
        .iter()
        .map(|&(t, e, tol)| (entropy_with(stepper, FRAC_PI_2, FRAC_PI_4, t) - e).abs() / tol)
        .fold(0.0, f64::max);
    report.push("entropy_reference_values", worst <= 1.0, format!("worst error / tolerance = {worst:.3}"));

    let mut bounds_ok = true;
    for _ in 0..50 {
        let coins = random_coin_map(&mut rng, 8);
        let (a0, b0) = random_coin_state(&mut rng);
        let s = stepper.evolve(&WalkState::localized(a0, b0).expect("normalized"), &coins, rng.gen_range(0..15));
        let rho = reduced_coin_density(&s);
        let e = rho.entropy();
        let (hi, lo) = rho.eigenvalues();
        bounds_ok &= density_ok(&rho)
            && (0.0..=1.0).contains(&e)
            && (hi + lo - 1.0).abs() < 1e-10
            && (hi * lo - rho.determinant()).abs() < 1e-10;
    }
    report.push("density_and_entropy_bounds", bounds_ok, "50 random walks".into());

    let s = stepper.evolve(&WalkState::balanced(FRAC_PI_2), &iqw, 9);
    let round_trip = expected_counts(&s, 1e15, 0.0)
        .and_then(|c| reconstruct_density(&c))
        .map(|rho| fidelity(&rho, &reduced_coin_density(&s)));
    match round_trip {
        Ok(f) => report.push("tomography_round_trip", f >= 1.0 - 1e-10, format!("fidelity {f:.12}")),
        Err(e) => report.push("tomography_round_trip", false, e.to_string()),
    }

    report
}
