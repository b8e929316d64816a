//! Brute-force reference path: the walk operator as an explicit dense matrix
//! on the truncated lattice `[-t_max, t_max]`, and the classical random walk
//! baseline.
//!
//! Nothing here shares code with [`crate::walk`] beyond reading coin matrix
//! entries, so agreement between the two is a meaningful check.

use num_complex::Complex64;

use crate::coin::CoinMap;
use crate::error::{Error, Result};
use crate::observables::{CoinDensity, ProbVector};
use crate::walk::{CoinBasis, WalkState};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Flattened joint state indexed by `coin * (2 t_max + 1) + (x + t_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    t_max: usize,
    entries: Vec<Complex64>,
}

fn sites(t_max: usize) -> usize {
    2 * t_max + 1
}

impl DenseVector {
    fn zeros(t_max: usize) -> Self {
        DenseVector { t_max, entries: vec![ZERO; 2 * sites(t_max)] }
    }

    /// `a0|0> + b0|1>` at the origin.
    pub fn localized(t_max: usize, a0: Complex64, b0: Complex64) -> Self {
        let mut v = DenseVector::zeros(t_max);
        v.set(0, CoinBasis::Zero, a0);
        v.set(0, CoinBasis::One, b0);
        v
    }

    /// Copies a walk state into the dense layout. Panics if the state does not
    /// fit into `[-t_max, t_max]`.
    pub fn from_walk_state(state: &WalkState, t_max: usize) -> Self {
        let mut v = DenseVector::zeros(t_max);
        for x in state.positions() {
            for coin in [CoinBasis::Zero, CoinBasis::One] {
                let amp = state.amplitude(x, coin);
                if amp != ZERO {
                    v.set(x, coin, amp);
                }
            }
        }
        v
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    fn index(&self, x: i64, coin: CoinBasis) -> Option<usize> {
        let t = self.t_max as i64;
        if x < -t || x > t {
            return None;
        }
        let c = match coin {
            CoinBasis::Zero => 0,
            CoinBasis::One => 1,
        };
        Some(c * sites(self.t_max) + (x + t) as usize)
    }

    fn set(&mut self, x: i64, coin: CoinBasis, value: Complex64) {
        let i = self
            .index(x, coin)
            .unwrap_or_else(|| panic!("position {x} outside lattice of half-width {}", self.t_max));
        self.entries[i] = value;
    }

    pub fn amplitude(&self, x: i64, coin: CoinBasis) -> Complex64 {
        self.index(x, coin).map_or(ZERO, |i| self.entries[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest |x| carrying non-zero amplitude.
    pub fn support_radius(&self) -> usize {
        let t = self.t_max as i64;
        (-t..=t)
            .filter(|&x| {
                self.amplitude(x, CoinBasis::Zero) != ZERO || self.amplitude(x, CoinBasis::One) != ZERO
            })
            .map(|x| x.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Partial trace over position, summed independently of the walk engine.
    pub fn coin_density(&self) -> CoinDensity {
        let n = sites(self.t_max);
        let (zero, one) = self.entries.split_at(n);
        let pop0 = zero.iter().map(|z| z.norm_sqr()).sum();
        let pop1 = one.iter().map(|z| z.norm_sqr()).sum();
        let coherence = zero.iter().zip(one).map(|(a, b)| a * b.conj()).sum();
        CoinDensity::new(pop0, pop1, coherence)
    }

    /// Max |difference| against a walk state over the whole lattice.
    pub fn max_abs_diff(&self, state: &WalkState) -> f64 {
        let t = self.t_max as i64;
        let mut worst: f64 = 0.0;
        for x in -t..=t {
            for coin in [CoinBasis::Zero, CoinBasis::One] {
                worst = worst.max((self.amplitude(x, coin) - state.amplitude(x, coin)).norm());
            }
        }
        // amplitude the walk state holds outside the lattice counts as a mismatch
        for x in state.positions().filter(|x| x.abs() > t) {
            for coin in [CoinBasis::Zero, CoinBasis::One] {
                worst = worst.max(state.amplitude(x, coin).norm());
            }
        }
        worst
    }
}

/// Row-major dense matrix of the one-step walk operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    t_max: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseUnitary {
    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn apply(&self, v: &DenseVector) -> DenseVector {
        assert_eq!(v.dim(), self.dim, "dimension mismatch");
        let entries = self
            .data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(&v.entries).map(|(u, x)| u * x).sum())
            .collect();
        DenseVector { t_max: self.t_max, entries }
    }

    /// Max entrywise deviation of `U^dagger U` from the identity, restricted to
    /// columns for sites with `|x| < t_max` (the edge columns lose amplitude
    /// off the lattice).
    pub fn interior_unitarity_deviation(&self) -> f64 {
        let n = sites(self.t_max);
        let interior: Vec<usize> = (0..self.dim)
            .filter(|&col| {
                let site = col % n;
                site != 0 && site != n - 1
            })
            .collect();
        let mut worst: f64 = 0.0;
        for &j in &interior {
            for &k in &interior {
                let mut acc: Complex64 = (0..self.dim).map(|r| self.get(r, j).conj() * self.get(r, k)).sum();
                if j == k {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

/// Builds the matrix of coin-then-shift on `x in [-t_max, t_max]`. Shifts that
/// would leave the lattice are dropped.
pub fn build_step_unitary(t_max: usize, coins: &CoinMap) -> Result<DenseUnitary> {
    if t_max < 1 {
        return Err(Error::InvalidParameter { name: "t_max", reason: "must be at least 1".into() });
    }
    let n = sites(t_max);
    let dim = 2 * n;
    let t = t_max as i64;
    let mut data = vec![ZERO; dim * dim];
    for site in 0..n {
        let x = site as i64 - t;
        let coin = coins.coin_at(x);
        for c_in in 0..2 {
            let col = c_in * n + site;
            // coin component 0 moves to x - 1, component 1 to x + 1
            if x > -t {
                data[(site - 1) * dim + col] = coin.entry(0, c_in);
            }
            if x < t {
                data[(n + site + 1) * dim + col] = coin.entry(1, c_in);
            }
        }
    }
    Ok(DenseUnitary { t_max, dim, data })
}

/// `U^steps |initial>` by repeated matrix-vector products.
pub fn oracle_evolve(initial: &DenseVector, unitary: &DenseUnitary, steps: usize) -> Result<DenseVector> {
    let radius = initial.support_radius();
    if steps + radius > unitary.t_max() {
        return Err(Error::TruncationViolation { steps, radius, t_max: unitary.t_max() });
    }
    Ok((0..steps).fold(initial.clone(), |v, _| unitary.apply(&v)))
}

/// Symmetric binomial distribution of the unbiased classical walk after `t` steps.
pub fn crw_distribution(t: usize) -> ProbVector {
    let positions: Vec<i64> = (0..=t).map(|k| 2 * k as i64 - t as i64).collect();
    let probs = if t <= 1000 {
        // P(k + 1) = P(k) (t - k) / (k + 1), starting from 2^-t
        let mut p = 0.5f64.powi(t as i32);
        let mut probs = Vec::with_capacity(t + 1);
        for k in 0..=t {
            probs.push(p);
            p *= (t - k) as f64 / (k + 1) as f64;
        }
        probs
    } else {
        // 2^-t underflows; accumulate in log space instead
        let mut log_p = -(t as f64) * std::f64::consts::LN_2;
        let mut probs = Vec::with_capacity(t + 1);
        for k in 0..=t {
            probs.push(log_p.exp());
            log_p += ((t - k) as f64).ln() - ((k + 1) as f64).ln();
        }
        probs
    };
    ProbVector::new(positions, probs)
}
