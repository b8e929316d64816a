//! Batch experiments on top of the walk engine: entropy over a parameter
//! grid, step-indexed series, and log-log power-law fits.

use std::f64::consts::TAU;
use std::iter;

use rayon::prelude::*;

use crate::coin::CoinMap;
use crate::error::{Error, Result};
use crate::observables::{position_distribution, reduced_coin_density, trace_distance, CoinDensity};
use crate::oracle::crw_distribution;
use crate::walk::WalkState;

/// Entropy over a `(theta, phi)` grid at a fixed step; `entropy[i][j]` belongs
/// to `(theta_values[i], phi_values[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub theta_values: Vec<f64>,
    pub phi_values: Vec<f64>,
    pub t: usize,
    pub entropy: Vec<Vec<f64>>,
}

impl SweepGrid {
    /// Grid point with the largest entropy as `(theta, phi, entropy)`. The first
    /// maximum in row-major order wins ties.
    pub fn argmax(&self) -> (f64, f64, f64) {
        let mut best = (self.theta_values[0], self.phi_values[0], f64::NEG_INFINITY);
        for (i, row) in self.entropy.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e > best.2 {
                    best = (self.theta_values[i], self.phi_values[j], e);
                }
            }
        }
        best
    }

    /// Long-format rows `(theta, phi, entropy)`.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.theta_values.iter().zip(&self.entropy).flat_map(move |(&theta, row)| {
            self.phi_values.iter().zip(row).map(move |(&phi, &e)| (theta, phi, e))
        })
    }
}

/// Step-indexed scalar data.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub t_values: Vec<usize>,
    pub y_values: Vec<f64>,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Series {
    pub fn new(label: impl Into<String>, points: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let (t_values, y_values) = points.into_iter().unzip();
        Series { t_values, y_values, label: label.into() }
    }

    pub fn len(&self) -> usize {
        self.t_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_values.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.t_values.iter().copied().zip(self.y_values.iter().copied())
    }

    /// Value at step `t`, if present.
    pub fn at(&self, t: usize) -> Option<f64> {
        self.t_values.binary_search(&t).ok().map(|i| self.y_values[i])
    }

    /// Keeps only steps of the given parity.
    pub fn with_parity(&self, parity: Parity) -> Series {
        let want = match parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        Series::new(self.label.clone(), self.points().filter(|(t, _)| t % 2 == want))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    pub fit_range: (usize, usize),
    pub points: usize,
}

impl PowerLawFit {
    pub fn predict(&self, t: f64) -> f64 {
        self.amplitude * t.powf(self.exponent)
    }
}

/// Minimum number of points [`fit_power_law`] accepts.
pub const MIN_FIT_POINTS: usize = 10;

/// `n` uniformly spaced angles covering `[0, 2 pi)`.
pub fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

/// States `t = 0, 1, 2, ...` of the inhomogeneous walk from the balanced state.
pub fn trajectory(theta: f64, phi: f64) -> impl Iterator<Item = WalkState> {
    let coins = CoinMap::inhomogeneous(phi);
    iter::successors(Some(WalkState::balanced(theta)), move |s| Some(s.step(&coins)))
}

fn coin_densities(theta: f64, phi: f64, t_max: usize) -> Vec<CoinDensity> {
    trajectory(theta, phi).take(t_max + 1).map(|s| reduced_coin_density(&s)).collect()
}

pub fn entropy_sweep(t: usize, theta_grid: &[f64], phi_grid: &[f64]) -> Result<SweepGrid> {
    if t < 1 {
        return Err(Error::InvalidParameter { name: "t", reason: "sweep needs at least one step".into() });
    }
    if theta_grid.is_empty() || phi_grid.is_empty() {
        return Err(Error::InvalidParameter { name: "grid", reason: "grid must be non-empty".into() });
    }
    let entropy = theta_grid
        .par_iter()
        .map(|&theta| {
            phi_grid
                .iter()
                .map(|&phi| crate::observables::entropy_of_walk(theta, phi, t))
                .collect()
        })
        .collect();
    Ok(SweepGrid { theta_values: theta_grid.to_vec(), phi_values: phi_grid.to_vec(), t, entropy })
}

/// Entropy at `t = 1..=t_max`, from one evolving state.
pub fn entropy_curve(t_max: usize, theta: f64, phi: f64) -> Series {
    let rhos = coin_densities(theta, phi, t_max);
    Series::new("entropy", rhos.iter().enumerate().skip(1).map(|(t, rho)| (t, rho.entropy())))
}

/// `D(t) = trace_distance(rho(t), rho(t - 1))` for `t = 2..=t_max`.
pub fn trace_distance_series(t_max: usize, theta: f64, phi: f64) -> Series {
    distances_from(coin_densities(theta, phi, t_max))
}

/// [`trace_distance_series`] for an arbitrary initial state and coin map.
pub fn trace_distance_series_with(initial: WalkState, coins: &CoinMap, t_max: usize) -> Series {
    let rhos = iter::successors(Some(initial), |s| Some(s.step(coins)))
        .take(t_max + 1)
        .map(|s| reduced_coin_density(&s))
        .collect();
    distances_from(rhos)
}

fn distances_from(rhos: Vec<CoinDensity>) -> Series {
    Series::new(
        "trace_distance",
        rhos.windows(2).enumerate().skip(1).map(|(i, w)| (i + 1, trace_distance(&w[1], &w[0]))),
    )
}

/// Position variance at `t = 1..=t_max`.
pub fn variance_series(t_max: usize, theta: f64, phi: f64) -> Series {
    let label = if phi == 0.0 { "HQW" } else { "IQW" };
    Series::new(
        label,
        trajectory(theta, phi)
            .take(t_max + 1)
            .enumerate()
            .skip(1)
            .map(|(t, s)| (t, position_distribution(&s).mean_variance().1)),
    )
}

/// Variance of the unbiased classical walk at `t = 1..=t_max`.
pub fn crw_variance_series(t_max: usize) -> Series {
    Series::new("CRW", (1..=t_max).map(|t| (t, crw_distribution(t).mean_variance().1)))
}

/// Least-squares line through `(ln t, ln y)` for points with `t_min <= t <= t_max`.
pub fn fit_power_law(series: &Series, t_min: usize, t_max: usize) -> Result<PowerLawFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (t, y) in series.points().filter(|(t, _)| (t_min..=t_max).contains(t)) {
        if y.is_nan() || y <= 0.0 || t == 0 {
            return Err(Error::NonPositiveData { t, value: y });
        }
        xs.push((t as f64).ln());
        ys.push(y.ln());
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints { needed: MIN_FIT_POINTS, found: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    // a constant series is fitted exactly by slope 0
    let r_squared = if ss_tot <= f64::EPSILON * f64::EPSILON * n * (1.0 + my * my) { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(PowerLawFit { exponent: slope, amplitude: intercept.exp(), r_squared, fit_range: (t_min, t_max), points: xs.len() })
}
