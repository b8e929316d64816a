//! Single-qubit coin operators and their assignment to lattice sites.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used when a coin is checked for unitarity at construction.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A 2x2 unitary acting on the coin register, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOperator {
    m: [[Complex64; 2]; 2],
}

impl CoinOperator {
    /// Builds a coin from its matrix entries, rejecting non-unitary input.
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let coin = CoinOperator { m };
        if m.iter().flatten().any(|z| !z.is_finite()) {
            return Err(Error::NotUnitary { deviation: f64::NAN });
        }
        let deviation = coin.unitarity_deviation();
        if deviation <= UNITARITY_TOL {
            Ok(coin)
        } else {
            Err(Error::NotUnitary { deviation })
        }
    }

    /// Builds a coin without the unitarity check. Walks driven by such a coin
    /// do not preserve normalization; used to exercise the self-checks.
    pub fn new_unchecked(m: [[Complex64; 2]; 2]) -> Self {
        CoinOperator { m }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        CoinOperator { m: [[one, zero], [zero, one]] }
    }

    /// (1/sqrt 2) [[1, 1], [1, -1]]
    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        CoinOperator { m: [[h, h], [h, -h]] }
    }

    /// Hadamard times the global phase e^{i phi}.
    pub fn phase_defect(phi: f64) -> Self {
        Self::hadamard().scaled(Complex64::from_polar(1.0, phi))
    }

    /// General U(2) element e^{i alpha} Rz(beta) Ry(gamma) Rz(delta).
    pub fn from_euler(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        let (s, c) = (gamma / 2.0).sin_cos();
        let e = |angle: f64| Complex64::from_polar(1.0, angle);
        CoinOperator {
            m: [
                [e(alpha - beta / 2.0 - delta / 2.0) * c, -e(alpha - beta / 2.0 + delta / 2.0) * s],
                [e(alpha + beta / 2.0 - delta / 2.0) * s, e(alpha + beta / 2.0 + delta / 2.0) * c],
            ],
        }
    }

    fn scaled(self, z: Complex64) -> Self {
        let mut m = self.m;
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v *= z;
            }
        }
        CoinOperator { m }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    /// Applies the coin to the column vector (a, b).
    #[inline]
    pub fn apply(&self, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        (
            self.m[0][0] * a + self.m[0][1] * b,
            self.m[1][0] * a + self.m[1][1] * b,
        )
    }

    /// Max entrywise |(U^dagger U - I)_{jk}|.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..2 {
                    acc += self.m[r][j].conj() * self.m[r][k];
                }
                if j == k {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

/// Assignment of a coin operator to every site of the integer lattice.
///
/// Sites without an override use `default_coin`. Every stored operator has
/// passed the unitarity check in [`CoinOperator::new`] or is one of the
/// built-in constructors.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinMap {
    default_coin: CoinOperator,
    overrides: BTreeMap<i64, CoinOperator>,
}

impl CoinMap {
    pub fn homogeneous(coin: CoinOperator) -> Self {
        CoinMap { default_coin: coin, overrides: BTreeMap::new() }
    }

    /// Hadamard everywhere.
    pub fn hadamard() -> Self {
        Self::homogeneous(CoinOperator::hadamard())
    }

    /// Hadamard everywhere except `e^{i phi} H` at the origin.
    pub fn inhomogeneous(phi: f64) -> Self {
        Self::hadamard().with_override(0, CoinOperator::phase_defect(phi))
    }

    pub fn with_override(mut self, x: i64, coin: CoinOperator) -> Self {
        self.overrides.insert(x, coin);
        self
    }

    pub fn default_coin(&self) -> &CoinOperator {
        &self.default_coin
    }

    pub fn overrides(&self) -> impl Iterator<Item = (i64, &CoinOperator)> {
        self.overrides.iter().map(|(x, c)| (*x, c))
    }

    #[inline]
    pub fn coin_at(&self, x: i64) -> &CoinOperator {
        self.overrides.get(&x).unwrap_or(&self.default_coin)
    }
}
