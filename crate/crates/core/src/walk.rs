//! Exact amplitude-level evolution of the coined walk on the integer line.
//!
//! A state after `t` steps is stored densely over `x in [-t, t]`, so index
//! `i` holds position `offset + i` with `offset = -t`. Slots with the wrong
//! parity are kept and stay exactly zero.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;

use crate::coin::CoinMap;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tolerance on |a0|^2 + |b0|^2 for user-supplied initial coin states.
pub const INITIAL_NORM_TOL: f64 = 1e-9;

/// Computational basis state of the coin. `Zero` moves left, `One` moves right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoinBasis {
    Zero,
    One,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    t: usize,
    offset: i64,
    amp0: Vec<Complex64>,
    amp1: Vec<Complex64>,
}

impl WalkState {
    /// `(|0> + e^{i theta}|1>)/sqrt 2` at the origin. `theta` is reduced mod 2 pi.
    pub fn balanced(theta: f64) -> Self {
        let theta = theta.rem_euclid(TAU);
        WalkState::localized_unchecked(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::from_polar(FRAC_1_SQRT_2, theta),
        )
    }

    /// Coin state `a0|0> + b0|1>` at the origin.
    pub fn localized(a0: Complex64, b0: Complex64) -> Result<Self> {
        let norm = a0.norm_sqr() + b0.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > INITIAL_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(WalkState::localized_unchecked(a0, b0))
    }

    /// Rebuilds a state at step `t` from dense arrays over `x in [-t, t]`.
    /// Checks array lengths, finiteness, the parity pattern and normalization
    /// (to [`INITIAL_NORM_TOL`]).
    pub fn from_amplitudes(t: usize, amp0: Vec<Complex64>, amp1: Vec<Complex64>) -> Result<Self> {
        let len = 2 * t + 1;
        if amp0.len() != len || amp1.len() != len {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: format!("expected {len} entries per coin component at t = {t}"),
            });
        }
        if amp0.iter().chain(&amp1).any(|z| !z.is_finite()) {
            return Err(Error::InvalidParameter { name: "amplitudes", reason: "non-finite entry".into() });
        }
        // index i holds x = i - t, so wrong-parity slots are the odd indices
        if (0..len).filter(|i| i % 2 == 1).any(|i| amp0[i] != ZERO || amp1[i] != ZERO) {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: "non-zero amplitude at a position of the wrong parity".into(),
            });
        }
        let state = WalkState { t, offset: -(t as i64), amp0, amp1 };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > INITIAL_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    /// Consumes the state, returning `(t, amp0, amp1)`.
    pub fn into_amplitudes(self) -> (usize, Vec<Complex64>, Vec<Complex64>) {
        (self.t, self.amp0, self.amp1)
    }

    fn localized_unchecked(a0: Complex64, b0: Complex64) -> Self {
        WalkState { t: 0, offset: 0, amp0: vec![a0], amp1: vec![b0] }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Position stored at index 0 of the amplitude arrays.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn amp0(&self) -> &[Complex64] {
        &self.amp0
    }

    pub fn amp1(&self) -> &[Complex64] {
        &self.amp1
    }

    pub fn len(&self) -> usize {
        self.amp0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amp0.is_empty()
    }

    /// All stored positions, including the structurally-zero wrong-parity ones.
    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.len() as i64).map(move |i| self.offset + i)
    }

    /// Positions that can carry amplitude at this step: `x = -t, -t+2, ..., t`.
    pub fn occupied_positions(&self) -> impl Iterator<Item = i64> {
        let t = self.t as i64;
        (-t..=t).step_by(2)
    }

    /// Stored amplitude, or exact zero outside the stored window.
    pub fn amplitude(&self, x: i64, coin: CoinBasis) -> Complex64 {
        let i = x - self.offset;
        if i < 0 || i >= self.len() as i64 {
            return ZERO;
        }
        match coin {
            CoinBasis::Zero => self.amp0[i as usize],
            CoinBasis::One => self.amp1[i as usize],
        }
    }

    /// `sum_x |a|^2 + |b|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.amp0
            .iter()
            .zip(&self.amp1)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum()
    }

    /// One application of the walk operator: coin at each site, then the
    /// conditional shift `|0,x> -> |0,x-1>`, `|1,x> -> |1,x+1>`.
    pub fn step(&self, coins: &CoinMap) -> WalkState {
        let n = self.len();
        let mut amp0 = vec![ZERO; n + 2];
        let mut amp1 = vec![ZERO; n + 2];
        for (i, (&a, &b)) in self.amp0.iter().zip(&self.amp1).enumerate() {
            if a == ZERO && b == ZERO {
                continue;
            }
            let x = self.offset + i as i64;
            let (left, right) = coins.coin_at(x).apply(a, b);
            // new offset is offset - 1, so x - 1 lands on index i and x + 1 on i + 2
            amp0[i] = left;
            amp1[i + 2] = right;
        }
        WalkState { t: self.t + 1, offset: self.offset - 1, amp0, amp1 }
    }

    /// `steps` repeated applications of [`WalkState::step`].
    pub fn evolve(self, coins: &CoinMap, steps: usize) -> WalkState {
        (0..steps).fold(self, |s, _| s.step(coins))
    }

    /// Multiplies every amplitude by `e^{i alpha}`.
    pub fn with_global_phase(mut self, alpha: f64) -> WalkState {
        let z = Complex64::from_polar(1.0, alpha);
        for v in self.amp0.iter_mut().chain(self.amp1.iter_mut()) {
            *v *= z;
        }
        self
    }

    /// Largest |difference| over both coin components and the union of the
    /// stored windows.
    pub fn max_abs_diff(&self, other: &WalkState) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.len() as i64).max(other.offset + other.len() as i64);
        (lo..hi)
            .flat_map(|x| [CoinBasis::Zero, CoinBasis::One].map(|c| (x, c)))
            .map(|(x, c)| (self.amplitude(x, c) - other.amplitude(x, c)).norm())
            .fold(0.0, f64::max)
    }
}

/// Evolves the balanced state `theta` under the inhomogeneous coin map `phi` for `t` steps.
pub fn evolve_balanced(theta: f64, phi: f64, t: usize) -> WalkState {
    WalkState::balanced(theta).evolve(&CoinMap::inhomogeneous(phi), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::CoinOperator;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn balanced_special_angles() {
        let s = WalkState::balanced(0.0);
        assert_eq!(s.amplitude(0, CoinBasis::Zero), c(FRAC_1_SQRT_2, 0.0));
        assert_eq!(s.amplitude(0, CoinBasis::One), c(FRAC_1_SQRT_2, 0.0));

        let s = WalkState::balanced(FRAC_PI_2);
        assert!((s.amplitude(0, CoinBasis::One) - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-16);

        let s = WalkState::balanced(PI);
        assert!((s.amplitude(0, CoinBasis::One) - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-16);

        let wrapped = WalkState::balanced(FRAC_PI_2 + 2.0 * TAU);
        assert!(wrapped.max_abs_diff(&WalkState::balanced(FRAC_PI_2)) < 1e-15);
    }

    #[test]
    fn localized_validation() {
        let s = WalkState::localized(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(s.amplitude(0, CoinBasis::Zero), c(1.0, 0.0));
        assert!(WalkState::localized(c(0.6, 0.0), c(0.0, 0.8)).is_ok());
        let same = WalkState::localized(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap();
        assert!(same.max_abs_diff(&WalkState::balanced(FRAC_PI_2)) < 1e-16);
        assert!(matches!(
            WalkState::localized(c(1.0, 0.0), c(0.1, 0.0)),
            Err(Error::NotNormalized { .. })
        ));
        assert!(WalkState::localized(c(f64::NAN, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn first_inhomogeneous_step() {
        let s = WalkState::balanced(FRAC_PI_2).step(&CoinMap::inhomogeneous(FRAC_PI_4));
        assert_eq!(s.t(), 1);
        // e^{i pi/4} (1 + i)/2 = i/sqrt 2 ; e^{i pi/4} (1 - i)/2 = 1/sqrt 2
        assert!((s.amplitude(-1, CoinBasis::Zero) - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.amplitude(1, CoinBasis::One) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert_eq!(s.amplitude(-1, CoinBasis::One), ZERO);
        assert_eq!(s.amplitude(1, CoinBasis::Zero), ZERO);
        assert_eq!(s.amplitude(0, CoinBasis::Zero), ZERO);
    }

    #[test]
    fn identity_coin_routes_zero_left() {
        let s = WalkState::localized(c(1.0, 0.0), c(0.0, 0.0))
            .unwrap()
            .step(&CoinMap::homogeneous(CoinOperator::identity()));
        assert_eq!(s.amplitude(-1, CoinBasis::Zero), c(1.0, 0.0));
        for x in -1..=1 {
            assert_eq!(s.amplitude(x, CoinBasis::One), ZERO);
        }
        assert_eq!(s.norm_sqr(), 1.0);
    }

    #[test]
    fn outside_support_is_zero() {
        let s = evolve_balanced(FRAC_PI_2, FRAC_PI_4, 4);
        assert_eq!(s.amplitude(7, CoinBasis::Zero), ZERO);
        assert_eq!(s.amplitude(-100, CoinBasis::One), ZERO);
    }

    #[test]
    fn amplitude_round_trip() {
        let s = evolve_balanced(0.3, 1.2, 6);
        let (t, a, b) = s.clone().into_amplitudes();
        assert_eq!(WalkState::from_amplitudes(t, a.clone(), b.clone()).unwrap(), s);
        assert!(WalkState::from_amplitudes(t + 1, a.clone(), b.clone()).is_err());
        let mut bad = a.clone();
        bad[1] = c(1e-3, 0.0);
        assert!(WalkState::from_amplitudes(t, bad, b.clone()).is_err());
        let scaled: Vec<_> = a.iter().map(|z| z * 2.0).collect();
        assert!(matches!(WalkState::from_amplitudes(t, scaled, b), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn zero_steps_is_identity() {
        let s = WalkState::balanced(1.234);
        assert_eq!(s.clone().evolve(&CoinMap::inhomogeneous(0.3), 0), s);
    }

    #[test]
    fn eleven_steps_parity_and_norm() {
        let s = evolve_balanced(FRAC_PI_2, FRAC_PI_4, 11);
        assert_eq!(s.t(), 11);
        assert_eq!(s.len(), 23);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        for x in s.positions().filter(|x| (x + 11).rem_euclid(2) == 1) {
            assert_eq!(s.amplitude(x, CoinBasis::Zero), ZERO);
            assert_eq!(s.amplitude(x, CoinBasis::One), ZERO);
        }
        assert_eq!(s.occupied_positions().count(), 12);
    }

    #[test]
    fn long_run_stays_normalized() {
        let s = evolve_balanced(FRAC_PI_2, FRAC_PI_4, 1000);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
    }
}
