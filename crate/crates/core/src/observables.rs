//! Quantities derived from a walk state: the reduced coin density matrix and
//! its entropy, distances between coin states, and position statistics.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::walk::{evolve_balanced, WalkState};

/// Reduced coin state `[[pop0, coherence], [conj(coherence), pop1]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinDensity {
    pub pop0: f64,
    pub pop1: f64,
    pub coherence: Complex64,
}

impl CoinDensity {
    pub fn new(pop0: f64, pop1: f64, coherence: Complex64) -> Self {
        CoinDensity { pop0, pop1, coherence }
    }

    /// Pure state `a|0> + b|1>`.
    pub fn pure(a: Complex64, b: Complex64) -> Self {
        CoinDensity::new(a.norm_sqr(), b.norm_sqr(), a * b.conj())
    }

    pub fn maximally_mixed() -> Self {
        CoinDensity::new(0.5, 0.5, Complex64::new(0.0, 0.0))
    }

    /// `rho = (I + x X + y Y + z Z) / 2`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Self {
        CoinDensity::new((1.0 + z) / 2.0, (1.0 - z) / 2.0, Complex64::new(x, -y) / 2.0)
    }

    /// Bloch vector `(x, y, z)`.
    pub fn bloch(&self) -> [f64; 3] {
        [2.0 * self.coherence.re, -2.0 * self.coherence.im, self.pop0 - self.pop1]
    }

    pub fn trace(&self) -> f64 {
        self.pop0 + self.pop1
    }

    pub fn determinant(&self) -> f64 {
        self.pop0 * self.pop1 - self.coherence.norm_sqr()
    }

    /// Eigenvalues `(lambda_plus, lambda_minus)` of a trace-one state,
    /// `(1 +- sqrt(1 + 4(|C|^2 - AB)))/2`, clamped to `[0, 1]`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let disc = (1.0 + 4.0 * (self.coherence.norm_sqr() - self.pop0 * self.pop1)).max(0.0);
        let root = disc.sqrt();
        let hi = ((1.0 + root) / 2.0).clamp(0.0, 1.0);
        let lo = ((1.0 - root) / 2.0).clamp(0.0, 1.0);
        (hi, lo)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        let (hi, lo) = self.eigenvalues();
        (h2(hi) + h2(lo)).clamp(0.0, 1.0)
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.pop0, 0.0), self.coherence],
            [self.coherence.conj(), Complex64::new(self.pop1, 0.0)],
        ]
    }
}

fn h2(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Partial trace of the joint pure state over position.
pub fn reduced_coin_density(state: &WalkState) -> CoinDensity {
    let mut pop0 = 0.0;
    let mut pop1 = 0.0;
    let mut coherence = Complex64::new(0.0, 0.0);
    for (a, b) in state.amp0().iter().zip(state.amp1()) {
        pop0 += a.norm_sqr();
        pop1 += b.norm_sqr();
        coherence += a * b.conj();
    }
    CoinDensity { pop0, pop1, coherence }
}

pub fn von_neumann_entropy(rho: &CoinDensity) -> f64 {
    rho.entropy()
}

/// Coin-walker entanglement after `t` steps of the inhomogeneous walk from the
/// balanced state `theta`.
pub fn entropy_of_walk(theta: f64, phi: f64, t: usize) -> f64 {
    reduced_coin_density(&evolve_balanced(theta, phi, t)).entropy()
}

/// `Tr|rho1 - rho2| / 2`. The difference of two trace-one qubit states is
/// traceless, so both eigenvalues have magnitude `sqrt(d^2 + |c|^2)`.
pub fn trace_distance(rho1: &CoinDensity, rho2: &CoinDensity) -> f64 {
    let d = ((rho1.pop0 - rho2.pop0) - (rho1.pop1 - rho2.pop1)) / 2.0;
    let c = rho1.coherence - rho2.coherence;
    (d * d + c.norm_sqr()).sqrt().clamp(0.0, 1.0)
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2`. For qubits the
/// eigenvalues of `sqrt(rho1) rho2 sqrt(rho1)` have sum `Tr(rho1 rho2)` and
/// product `det rho1 det rho2`.
pub fn fidelity(rho1: &CoinDensity, rho2: &CoinDensity) -> f64 {
    let overlap = rho1.pop0 * rho2.pop0
        + rho1.pop1 * rho2.pop1
        + 2.0 * (rho1.coherence * rho2.coherence.conj()).re;
    let dets = rho1.determinant().max(0.0) * rho2.determinant().max(0.0);
    (overlap + 2.0 * dets.sqrt()).clamp(0.0, 1.0)
}

/// Position distribution over parity-valid sites.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    pub positions: Vec<i64>,
    pub probs: Vec<f64>,
}

impl ProbVector {
    pub fn new(positions: Vec<i64>, probs: Vec<f64>) -> Self {
        assert_eq!(positions.len(), probs.len(), "positions and probabilities differ in length");
        ProbVector { positions, probs }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.positions.iter().copied().zip(self.probs.iter().copied())
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn get(&self, x: i64) -> f64 {
        self.iter().find(|(p, _)| *p == x).map_or(0.0, |(_, v)| v)
    }

    /// `(mu, nu)`: mean position and central second moment.
    pub fn mean_variance(&self) -> (f64, f64) {
        let mu: f64 = self.iter().map(|(x, p)| p * x as f64).sum();
        let nu = self.iter().map(|(x, p)| p * (x as f64 - mu).powi(2)).sum();
        (mu, nu)
    }
}

pub fn position_distribution(state: &WalkState) -> ProbVector {
    let (positions, probs) = state
        .occupied_positions()
        .map(|x| {
            let i = (x - state.offset()) as usize;
            (x, state.amp0()[i].norm_sqr() + state.amp1()[i].norm_sqr())
        })
        .unzip();
    ProbVector { positions, probs }
}

pub fn position_mean_variance(p: &ProbVector) -> (f64, f64) {
    p.mean_variance()
}

/// `sum_x sqrt(P_a(x) P_b(x))` over the union of both supports.
pub fn similarity(p_a: &ProbVector, p_b: &ProbVector) -> f64 {
    let mut joint: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    for (x, p) in p_a.iter() {
        joint.entry(x).or_default().0 += p;
    }
    for (x, p) in p_b.iter() {
        joint.entry(x).or_default().1 += p;
    }
    joint.values().map(|(a, b)| (a.max(0.0) * b.max(0.0)).sqrt()).sum()
}

/// `(theta, phi)` at which the inhomogeneous walk maximizes entanglement.
pub const OPERATING_POINT: (f64, f64) = (FRAC_PI_2, FRAC_PI_4);
