//! Subcommand implementations. [`execute`] computes results in memory;
//! [`write_artifacts`] puts them on disk or stdout.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use qwalk::analysis::{
    crw_variance_series, entropy_curve, entropy_sweep, fit_power_law, trace_distance_series, trajectory,
    uniform_angles, variance_series, PowerLawFit, Series,
};
use qwalk::expsim::{reconstruct_density, simulate_counts, tomography_runs, CountsTable};
use qwalk::observables::{fidelity, reduced_coin_density};
use qwalk::verify::{run_suite, Engine};
use qwalk::walk::evolve_balanced;
use qwalk::CoinBasis;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::config::{Command, Format, ParityFilter, RunConfig};
use crate::output::{Cell, Table};
use crate::plot::{heatmap, line_chart, Line, Scale};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Model(#[from] qwalk::Error),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> RunError + '_ {
    move |source| RunError::Io { path: path.to_path_buf(), source }
}

/// Everything a subcommand produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub table: Table,
    /// JSON document written next to the main output (`trace-distance` fit).
    pub sidecar: Option<String>,
    pub plot: Option<String>,
    /// Human-readable summary lines for stderr.
    pub notes: Vec<String>,
    /// `false` when `verify` found a failing check.
    pub success: bool,
}

impl Artifacts {
    fn new(table: Table) -> Self {
        Artifacts { table, sidecar: None, plot: None, notes: Vec::new(), success: true }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Artifacts, RunError> {
    let mut art = match cfg.command() {
        Command::Evolve => evolve(cfg),
        Command::EntropyTable => entropy_table(cfg),
        Command::Sweep => sweep(cfg)?,
        Command::TraceDistance => trace_distance(cfg),
        Command::Variance => variance(cfg),
        Command::Tomography => tomography(cfg)?,
        Command::Verify => verify(),
    };
    if !cfg.plot {
        art.plot = None;
    }
    Ok(art)
}

fn series_line(s: &Series, label: &str) -> Line {
    Line { label: label.to_string(), points: s.points().map(|(t, y)| (t as f64, y)).collect() }
}

fn evolve(cfg: &RunConfig) -> Artifacts {
    let state = evolve_balanced(cfg.theta, cfg.phi, cfg.steps());
    let t = state.t() as i64;
    let mut table = Table::new(&["x", "prob", "re_a", "im_a", "re_b", "im_b"]);
    let mut points = Vec::new();
    for x in -t..=t {
        let a = state.amplitude(x, CoinBasis::Zero);
        let b = state.amplitude(x, CoinBasis::One);
        let p = a.norm_sqr() + b.norm_sqr();
        points.push((x as f64, p));
        table.push(vec![x.into(), p.into(), a.re.into(), a.im.into(), b.re.into(), b.im.into()]);
    }
    let mut art = Artifacts::new(table);
    art.plot = Some(line_chart(
        &format!("Position distribution at t = {t}"),
        "x",
        "P(x)",
        &[Line { label: "P(x)".into(), points }],
        Scale::Linear,
        Scale::Linear,
    ));
    art
}

fn entropy_table(cfg: &RunConfig) -> Artifacts {
    let curve = entropy_curve(cfg.steps(), cfg.theta, cfg.phi);
    let mut table = Table::new(&["t", "entropy"]);
    for (t, e) in curve.points() {
        table.push(vec![t.into(), e.into()]);
    }
    let mut art = Artifacts::new(table);
    art.plot = Some(line_chart(
        "Coin-walker entanglement entropy",
        "t",
        "E (bits)",
        &[series_line(&curve, "E(t)")],
        Scale::Linear,
        Scale::Linear,
    ));
    art
}

fn sweep(cfg: &RunConfig) -> Result<Artifacts, RunError> {
    let grid = entropy_sweep(cfg.steps(), &uniform_angles(cfg.grid_theta), &uniform_angles(cfg.grid_phi))?;
    let mut table = Table::new(&["theta", "phi", "entropy"]);
    for (theta, phi, e) in grid.rows() {
        table.push(vec![theta.into(), phi.into(), e.into()]);
    }
    let (theta, phi, e) = grid.argmax();
    let mut art = Artifacts::new(table);
    art.notes.push(format!("maximum E = {e:.9} at theta = {theta:.6}, phi = {phi:.6}"));
    art.plot = Some(heatmap(&format!("Entropy at t = {}", grid.t), &grid));
    Ok(art)
}

fn fit_json(fit: &Result<PowerLawFit, qwalk::Error>, parity: ParityFilter, range: (usize, usize)) -> serde_json::Value {
    let parity = match parity {
        ParityFilter::All => "all",
        ParityFilter::Only(qwalk::analysis::Parity::Even) => "even",
        ParityFilter::Only(qwalk::analysis::Parity::Odd) => "odd",
    };
    match fit {
        Ok(f) => json!({
            "exponent": f.exponent,
            "amplitude": f.amplitude,
            "r_squared": f.r_squared,
            "fit_range": [f.fit_range.0, f.fit_range.1],
            "points": f.points,
            "parity": parity,
        }),
        Err(e) => json!({ "error": e.to_string(), "fit_range": [range.0, range.1], "parity": parity }),
    }
}

fn trace_distance(cfg: &RunConfig) -> Artifacts {
    let series = trace_distance_series(cfg.steps(), cfg.theta, cfg.phi);
    let mut table = Table::new(&["t", "D"]);
    for (t, d) in series.points() {
        table.push(vec![t.into(), d.into()]);
    }
    let (lo, hi) = cfg.fit_range();
    let fit_input = match cfg.parity {
        ParityFilter::All => series.clone(),
        ParityFilter::Only(p) => series.with_parity(p),
    };
    let fit = fit_power_law(&fit_input, lo, hi);
    let mut art = Artifacts::new(table);
    let mut lines = vec![series_line(&series, "D(t)")];
    match &fit {
        Ok(f) => {
            art.notes.push(format!(
                "D(t) ~ {:.4} t^{:.4} over [{lo}, {hi}], r^2 = {:.5} ({} points)",
                f.amplitude, f.exponent, f.r_squared, f.points
            ));
            lines.push(Line {
                label: format!("fit t^{:.3}", f.exponent),
                points: fit_input.points().filter(|(t, _)| (lo..=hi).contains(t)).map(|(t, _)| (t as f64, f.predict(t as f64))).collect(),
            });
        }
        Err(e) => art.notes.push(format!("no fit: {e}")),
    }
    let mut sidecar = serde_json::to_string_pretty(&fit_json(&fit, cfg.parity, (lo, hi))).expect("fit serializes");
    sidecar.push('\n');
    art.sidecar = Some(sidecar);
    art.plot = Some(line_chart("Trace distance between neighbouring coin states", "t", "D(t)", &lines, Scale::Log, Scale::Log));
    art
}

fn variance(cfg: &RunConfig) -> Artifacts {
    let steps = cfg.steps();
    let walks = [
        ("IQW", variance_series(steps, cfg.theta, cfg.phi)),
        ("HQW", variance_series(steps, cfg.theta, 0.0)),
        ("CRW", crw_variance_series(steps)),
    ];
    let mut table = Table::new(&["t", "variance", "walk_type"]);
    let (lo, hi) = cfg.fit_range();
    let mut art = Artifacts::new(Table::new(&[]));
    for (label, series) in &walks {
        for (t, v) in series.points() {
            table.push(vec![t.into(), v.into(), Cell::from(*label)]);
        }
        match fit_power_law(series, lo, hi) {
            Ok(f) => art.notes.push(format!("{label}: variance ~ t^{:.4} over [{lo}, {hi}], r^2 = {:.6}", f.exponent, f.r_squared)),
            Err(e) => art.notes.push(format!("{label}: no fit: {e}")),
        }
    }
    art.table = table;
    let lines: Vec<Line> = walks.iter().map(|(label, s)| series_line(s, label)).collect();
    art.plot = Some(line_chart("Position variance", "t", "variance", &lines, Scale::Log, Scale::Log));
    art
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

fn tomography(cfg: &RunConfig) -> Result<Artifacts, RunError> {
    let mut table = Table::new(&["t", "entropy_mean", "entropy_std", "fidelity_mean"]);
    let mut art = Artifacts::new(Table::new(&[]));

    if let Some(path) = &cfg.counts {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let counts = CountsTable::from_csv(&text)?;
        let rho = reconstruct_density(&counts)?;
        let theory = reduced_coin_density(&evolve_balanced(cfg.theta, cfg.phi, counts.t));
        table.push(vec![counts.t.into(), rho.entropy().into(), 0.0.into(), fidelity(&rho, &theory).into()]);
        art.notes.push(format!("reconstructed from {} ({} counts)", path.display(), counts.total()));
        art.table = table;
        return Ok(art);
    }

    let seeds: Vec<u64> = (0..cfg.seeds as u64).map(|k| cfg.seed.wrapping_add(k)).collect();
    let states: Vec<_> = trajectory(cfg.theta, cfg.phi).take(cfg.steps() + 1).collect();
    let per_step: Vec<(usize, Vec<f64>, Vec<f64>, usize)> = states[1..]
        .par_iter()
        .map(|state| {
            let mut entropies = Vec::new();
            let mut fidelities = Vec::new();
            let mut empty = 0;
            for &seed in &seeds {
                match tomography_runs(state, cfg.n0, cfg.loss_db, [seed]) {
                    Ok(runs) => {
                        entropies.push(runs[0].entropy);
                        fidelities.push(runs[0].fidelity);
                    }
                    Err(qwalk::Error::EmptyCounts) => empty += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok((state.t(), entropies, fidelities, empty))
        })
        .collect::<Result<_, qwalk::Error>>()?;

    let mut points = Vec::new();
    for (t, entropies, fidelities, empty) in per_step {
        let (e_mean, e_std) = mean_std(&entropies);
        let (f_mean, _) = mean_std(&fidelities);
        if empty > 0 {
            art.notes.push(format!("t = {t}: {empty} of {} seeds recorded no H/V counts and were skipped", seeds.len()));
        }
        points.push((t as f64, e_mean));
        table.push(vec![t.into(), e_mean.into(), e_std.into(), f_mean.into()]);
    }
    art.table = table;

    if let Some(path) = &cfg.write_counts {
        let last = states.last().expect("at least one state");
        let counts = simulate_counts(last, cfg.n0, cfg.loss_db, cfg.seed)?;
        fs::write(path, counts.to_csv()).map_err(io_err(path))?;
        art.notes.push(format!("wrote t = {} counts for seed {} to {}", last.t(), cfg.seed, path.display()));
    }
    art.plot = Some(line_chart(
        "Reconstructed coin entropy (mean over seeds)",
        "t",
        "E (bits)",
        &[Line { label: "E".into(), points }],
        Scale::Linear,
        Scale::Linear,
    ));
    Ok(art)
}

fn verify() -> Artifacts {
    let report = run_suite(&Engine);
    let mut table = Table::new(&["check", "passed", "detail"]);
    for c in &report.checks {
        table.push(vec![c.name.into(), c.passed.into(), c.detail.as_str().into()]);
    }
    let mut art = Artifacts::new(table);
    art.success = report.passed();
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    art.notes.push(format!("{} checks, {failed} failed", report.checks.len()));
    art
}

/// Output payload, preceded for CSV by a `#` metadata line unless disabled.
pub fn render(cfg: &RunConfig, art: &Artifacts) -> String {
    match cfg.format {
        Format::Json => art.table.to_json(cfg.command().name()),
        Format::Csv => {
            let mut out = String::new();
            if cfg.header {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                out.push_str(&format!(
                    "# qwalk {} {} generated_unix={secs}\n",
                    env!("CARGO_PKG_VERSION"),
                    cfg.command().name()
                ));
            }
            out.push_str(&art.table.to_csv());
            out
        }
    }
}

fn sibling(path: &Path, extension: &str) -> PathBuf {
    path.with_extension(extension)
}

/// Writes the payload, sidecar and plot; notes go to stderr.
pub fn write_artifacts(cfg: &RunConfig, art: &Artifacts) -> Result<(), RunError> {
    let payload = render(cfg, art);
    match &cfg.output {
        Some(path) => fs::write(path, payload).map_err(io_err(path))?,
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(payload.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
        }
    }
    if let Some(sidecar) = &art.sidecar {
        match &cfg.output {
            Some(path) => {
                let p = sibling(path, "fit.json");
                fs::write(&p, sidecar).map_err(io_err(&p))?;
            }
            None => eprint!("{sidecar}"),
        }
    }
    if let Some(svg) = &art.plot {
        let p = match &cfg.output {
            Some(path) => sibling(path, "svg"),
            None => PathBuf::from(format!("qwalk-{}.svg", cfg.command().name())),
        };
        fs::write(&p, svg).map_err(io_err(&p))?;
    }
    for note in &art.notes {
        eprintln!("{note}");
    }
    Ok(())
}
