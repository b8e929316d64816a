//! Photon-counting measurement model and single-qubit tomography of the
//! reduced coin state.
//!
//! Each (position, basis) cell is an independent Poisson draw whose mean is
//! `n0 * 10^(-loss_db * t / 10) * |<basis|psi(x)>|^2`. Tomography sums the
//! cells over positions and inverts the four basis frequencies to a Bloch
//! vector.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Poisson};

use crate::coin::CoinMap;
use crate::error::{Error, Result};
use crate::observables::{fidelity, reduced_coin_density, CoinDensity};
use crate::walk::{CoinBasis, WalkState};

/// Projective measurement settings on the coin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasBasis {
    /// |0>
    H,
    /// |1>
    V,
    /// (|0> + |1>)/sqrt 2
    D,
    /// (|0> - i|1>)/sqrt 2
    L,
}

impl MeasBasis {
    pub const ALL: [MeasBasis; 4] = [MeasBasis::H, MeasBasis::V, MeasBasis::D, MeasBasis::L];

    /// Ket `(c0, c1)` projected onto.
    pub fn projector_state(self) -> (Complex64, Complex64) {
        let r = FRAC_1_SQRT_2;
        match self {
            MeasBasis::H => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            MeasBasis::V => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            MeasBasis::D => (Complex64::new(r, 0.0), Complex64::new(r, 0.0)),
            MeasBasis::L => (Complex64::new(r, 0.0), Complex64::new(0.0, -r)),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MeasBasis::H => "H",
            MeasBasis::V => "V",
            MeasBasis::D => "D",
            MeasBasis::L => "L",
        }
    }
}

impl fmt::Display for MeasBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MeasBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" => Ok(MeasBasis::H),
            "V" => Ok(MeasBasis::V),
            "D" => Ok(MeasBasis::D),
            "L" => Ok(MeasBasis::L),
            other => Err(Error::InvalidParameter { name: "basis", reason: format!("unknown basis `{other}`") }),
        }
    }
}

/// `|c0* a(x) + c1* b(x)|^2`.
pub fn projection_probability(state: &WalkState, x: i64, basis: MeasBasis) -> f64 {
    let (c0, c1) = basis.projector_state();
    (c0.conj() * state.amplitude(x, CoinBasis::Zero) + c1.conj() * state.amplitude(x, CoinBasis::One)).norm_sqr()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountRow {
    pub position: i64,
    pub basis: MeasBasis,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountsTable {
    pub t: usize,
    pub n0: f64,
    pub loss_db_per_step: f64,
    pub rows: Vec<CountRow>,
}

/// Counts summed over positions, per basis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BasisTotals {
    pub h: u64,
    pub v: u64,
    pub d: u64,
    pub l: u64,
}

impl CountsTable {
    pub fn totals(&self) -> BasisTotals {
        let mut totals = BasisTotals::default();
        for row in &self.rows {
            let slot = match row.basis {
                MeasBasis::H => &mut totals.h,
                MeasBasis::V => &mut totals.v,
                MeasBasis::D => &mut totals.d,
                MeasBasis::L => &mut totals.l,
            };
            *slot = slot.saturating_add(row.count);
        }
        totals
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.count).fold(0u64, u64::saturating_add)
    }
}

/// Mean photon number per basis setting that survives `t` passes at `loss_db` per pass.
pub fn surviving_mean(n0: f64, loss_db_per_step: f64, t: usize) -> f64 {
    n0 * 10f64.powf(-loss_db_per_step * t as f64 / 10.0)
}

fn check_source(n0: f64, loss_db_per_step: f64) -> Result<()> {
    if !(n0.is_finite() && n0 > 0.0) {
        return Err(Error::InvalidParameter { name: "n0", reason: format!("must be positive and finite, got {n0}") });
    }
    if !(loss_db_per_step.is_finite() && loss_db_per_step >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "loss_db",
            reason: format!("must be non-negative and finite, got {loss_db_per_step}"),
        });
    }
    Ok(())
}

fn cells(state: &WalkState) -> impl Iterator<Item = (i64, MeasBasis)> + '_ {
    state.occupied_positions().flat_map(|x| MeasBasis::ALL.map(|b| (x, b)))
}

/// Poisson-sampled counts for every parity-valid position and every basis.
/// Deterministic in `seed`.
pub fn simulate_counts(state: &WalkState, n0: f64, loss_db_per_step: f64, seed: u64) -> Result<CountsTable> {
    check_source(n0, loss_db_per_step)?;
    let mean = surviving_mean(n0, loss_db_per_step, state.t());
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let rows = cells(state)
        .map(|(position, basis)| {
            let lambda = mean * projection_probability(state, position, basis);
            let count = match Poisson::new(lambda) {
                Ok(dist) => dist.sample(&mut rng) as u64,
                // lambda == 0 or underflowed
                Err(_) => 0,
            };
            CountRow { position, basis, count }
        })
        .collect();
    Ok(CountsTable { t: state.t(), n0, loss_db_per_step, rows })
}

/// Noise-free counts: each cell is its expected value rounded to an integer.
pub fn expected_counts(state: &WalkState, n0: f64, loss_db_per_step: f64) -> Result<CountsTable> {
    check_source(n0, loss_db_per_step)?;
    let mean = surviving_mean(n0, loss_db_per_step, state.t());
    let rows = cells(state)
        .map(|(position, basis)| CountRow {
            position,
            basis,
            count: (mean * projection_probability(state, position, basis)).round() as u64,
        })
        .collect();
    Ok(CountsTable { t: state.t(), n0, loss_db_per_step, rows })
}

/// Relative frequencies of the four bases, each normalized by the H+V total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFrequencies {
    pub h: f64,
    pub v: f64,
    pub d: f64,
    pub l: f64,
}

impl BasisFrequencies {
    /// Exact outcome probabilities of a coin state in each basis.
    pub fn of_density(rho: &CoinDensity) -> Self {
        let [x, y, z] = rho.bloch();
        BasisFrequencies { h: (1.0 + z) / 2.0, v: (1.0 - z) / 2.0, d: (1.0 + x) / 2.0, l: (1.0 - y) / 2.0 }
    }

    /// Linear inversion to a density matrix, followed by eigenvalue clipping
    /// when the estimate falls outside the Bloch ball. For a qubit, clipping
    /// the negative eigenvalue and renormalizing maps the Bloch vector `r` to
    /// `r / |r|`.
    pub fn invert(&self) -> CoinDensity {
        let z = self.h - self.v;
        let x = 2.0 * self.d - 1.0;
        let y = 1.0 - 2.0 * self.l;
        let r = (x * x + y * y + z * z).sqrt();
        if r > 1.0 {
            CoinDensity::from_bloch(x / r, y / r, z / r)
        } else {
            CoinDensity::from_bloch(x, y, z)
        }
    }
}

/// Reconstructs the reduced coin state from counts summed over all positions.
pub fn reconstruct_density(counts: &CountsTable) -> Result<CoinDensity> {
    let totals = counts.totals();
    let hv = totals.h as f64 + totals.v as f64;
    if hv <= 0.0 {
        return Err(Error::EmptyCounts);
    }
    let freqs = BasisFrequencies {
        h: totals.h as f64 / hv,
        v: totals.v as f64 / hv,
        d: totals.d as f64 / hv,
        l: totals.l as f64 / hv,
    };
    Ok(freqs.invert())
}

/// Evolve, count, reconstruct: the entropy an experiment would report.
pub fn experimental_entropy(theta: f64, phi: f64, t: usize, n0: f64, loss_db_per_step: f64, seed: u64) -> Result<f64> {
    Ok(measured_density(theta, phi, t, n0, loss_db_per_step, seed)?.entropy())
}

/// Reconstructed coin density for one simulated run.
pub fn measured_density(theta: f64, phi: f64, t: usize, n0: f64, loss_db_per_step: f64, seed: u64) -> Result<CoinDensity> {
    let state = WalkState::balanced(theta).evolve(&CoinMap::inhomogeneous(phi), t);
    reconstruct_density(&simulate_counts(&state, n0, loss_db_per_step, seed)?)
}

/// Per-seed outcome of a simulated tomography run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomographyOutcome {
    pub seed: u64,
    pub entropy: f64,
    pub fidelity: f64,
}

/// Runs the counting pipeline once per seed against a single evolved state.
/// Seeds whose counts contain no H/V events are reported as errors.
pub fn tomography_runs(
    state: &WalkState,
    n0: f64,
    loss_db_per_step: f64,
    seeds: impl IntoIterator<Item = u64>,
) -> Result<Vec<TomographyOutcome>> {
    let theory = reduced_coin_density(state);
    seeds
        .into_iter()
        .map(|seed| {
            let rho = reconstruct_density(&simulate_counts(state, n0, loss_db_per_step, seed)?)?;
            Ok(TomographyOutcome { seed, entropy: rho.entropy(), fidelity: fidelity(&rho, &theory) })
        })
        .collect()
}

/// Column header of the counts CSV format.
pub const COUNTS_CSV_HEADER: &str = "t,n0,loss_db,position,basis,count";

impl CountsTable {
    /// One row per (position, basis) cell under [`COUNTS_CSV_HEADER`].
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.rows.len() + 1));
        out.push_str(COUNTS_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.t, self.n0, self.loss_db_per_step, row.position, row.basis, row.count
            ));
        }
        out
    }

    /// Parses the format written by [`CountsTable::to_csv`]. `t`, `n0` and
    /// `loss_db` must agree on every row; positions must satisfy
    /// `|x| <= t` with the parity of `t`. Blank lines and lines starting with
    /// `#` are skipped.
    pub fn from_csv(text: &str) -> Result<CountsTable> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let malformed = |line: usize, reason: String| Error::MalformedCounts { line, reason };
        match lines.next() {
            Some((_, header)) if header == COUNTS_CSV_HEADER => {}
            Some((line, header)) => return Err(malformed(line, format!("expected header `{COUNTS_CSV_HEADER}`, got `{header}`"))),
            None => return Err(malformed(0, "empty input".into())),
        }
        let mut meta: Option<(usize, f64, f64)> = None;
        let mut rows = Vec::new();
        for (line, text) in lines {
            let fields: Vec<&str> = text.split(',').map(str::trim).collect();
            let [t, n0, loss, position, basis, count] = fields[..] else {
                return Err(malformed(line, format!("expected 6 fields, got {}", fields.len())));
            };
            let t: usize = t.parse().map_err(|e| malformed(line, format!("t: {e}")))?;
            let n0: f64 = n0.parse().map_err(|e| malformed(line, format!("n0: {e}")))?;
            let loss: f64 = loss.parse().map_err(|e| malformed(line, format!("loss_db: {e}")))?;
            let position: i64 = position.parse().map_err(|e| malformed(line, format!("position: {e}")))?;
            let basis: MeasBasis = basis.parse().map_err(|_| malformed(line, format!("unknown basis `{basis}`")))?;
            let count: u64 = count.parse().map_err(|e| malformed(line, format!("count: {e}")))?;
            check_source(n0, loss).map_err(|e| malformed(line, e.to_string()))?;
            match meta {
                None => meta = Some((t, n0, loss)),
                Some(m) if m == (t, n0, loss) => {}
                Some(_) => return Err(malformed(line, "t, n0 and loss_db must be the same on every row".into())),
            }
            let reach = position.unsigned_abs();
            if reach > t as u64 || (reach + t as u64) % 2 == 1 {
                return Err(malformed(line, format!("position {position} is not reachable at t = {t}")));
            }
            rows.push(CountRow { position, basis, count });
        }
        let (t, n0, loss_db_per_step) = meta.ok_or_else(|| malformed(0, "no data rows".into()))?;
        Ok(CountsTable { t, n0, loss_db_per_step, rows })
    }
}
