//! Figure runners producing CSV tables.
//!
//! | figure | columns |
//! |--------|---------|
//! | fig1   | `tau_c, integral_optimal, integral_random_max` |
//! | fig2   | `tau_c, theta, N_analytic, N_numeric, theta1, theta2` |
//! | fig3a, fig3b | `theta, N, F1, F2, ...` (one `F` column per resource) |
//! | fig4   | `t_c, integral_optimal, integral_random_max` |
//! | fig5   | `ratio, N, F1, F2, ...` |
//!
//! Randomness comes only from per-pair seed streams and rows are emitted
//! in grid order, so the output bytes do not depend on the thread count.

mod config;
mod csv;

use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::{
    ConfigOverrides, DephasingOverrides, DephasingSettings, ExperimentConfig, Figure, LorentzOverrides,
    LorentzSettings, Sweep, SweepOverrides, SweepSettings, DEFAULT_DELTA_OMEGA, DEFAULT_GAMMA0, DEFAULT_GRID,
    DEFAULT_PAIRS, DEFAULT_RATIO, DEFAULT_RESOURCES, DEFAULT_SEED, DEFAULT_SIGMA,
};
pub use csv::CsvTable;

use crate::channels::{apply_amplitude_damping, apply_dephasing, ChannelFamily};
use crate::decoherence::{analytic_blp_dephasing, chi, kappa_complex, transition_thetas};
use crate::error::{Error, Result};
use crate::measures::{blp_search_checkpoints, SearchOptions};
use crate::rsp::{bell_diagonal, correlation_matrix, rsp_fidelity};

fn search_options(config: &ExperimentConfig, n_pairs: usize) -> SearchOptions {
    SearchOptions { n_pairs, grid_size: config.grid_size, seed: config.seed, ..SearchOptions::default() }
}

fn require_pairs(config: &ExperimentConfig) -> Result<()> {
    if config.n_pairs == 0 {
        return Err(Error::Config(format!("{} needs at least one random pair", config.figure)));
    }
    Ok(())
}

fn fidelity_header(first: &str, n: usize) -> Vec<String> {
    let mut header = vec![first.to_string(), "N".to_string()];
    header.extend((1..=n).map(|k| format!("F{k}")));
    header
}

/// Optimal-pair and best-random-pair backflow against the dephasing
/// control time at fixed `theta`.
pub fn run_fig1(config: &ExperimentConfig) -> Result<CsvTable> {
    require_pairs(config)?;
    let family = ChannelFamily::Dephasing(config.dephasing_spec(config.dephasing.theta)?);
    let control_times = config.sweep.tau_c.values();
    let result = blp_search_checkpoints(&family, &control_times, &search_options(config, config.n_pairs))?;
    let mut table = CsvTable::new(["tau_c", "integral_optimal", "integral_random_max"]);
    for (k, &tc) in control_times.iter().enumerate() {
        table.push_row(vec![tc, result.optimal[k], result.random_max[k]])?;
    }
    Ok(table)
}

/// Closed-form and optimal-pair numeric non-Markovianity over
/// `(tau_c, theta)`, with the transition angles of each `tau_c`.
pub fn run_fig2(config: &ExperimentConfig) -> Result<CsvTable> {
    let control_times = config.sweep.tau_c.values();
    let thetas = config.sweep.theta.values();
    let opts = search_options(config, 0);
    let mut numeric = Vec::with_capacity(thetas.len());
    for &theta in &thetas {
        let family = ChannelFamily::Dephasing(config.dephasing_spec(theta)?);
        numeric.push(blp_search_checkpoints(&family, &control_times, &opts)?.optimal);
    }
    let (dw, sigma) = (config.dephasing.delta_omega, config.dephasing.sigma);
    let mut table = CsvTable::new(["tau_c", "theta", "N_analytic", "N_numeric", "theta1", "theta2"]);
    for (i, &tc) in control_times.iter().enumerate() {
        let (theta1, theta2) = transition_thetas(dw, sigma, tc)?;
        for (j, &theta) in thetas.iter().enumerate() {
            let analytic = analytic_blp_dephasing(&config.dephasing_spec(theta)?, tc)?;
            table.push_row(vec![tc, theta, analytic, numeric[j][i], theta1, theta2])?;
        }
    }
    Ok(table)
}

/// Closed-form non-Markovianity and RSP fidelity of each Bell-diagonal
/// resource after dephasing up to the control time, against `theta`.
pub fn run_fig3(config: &ExperimentConfig) -> Result<CsvTable> {
    let tc = config.dephasing.control_time;
    let resources: Vec<_> = config.resource_params().iter().map(bell_diagonal).collect();
    let mut table = CsvTable::new(fidelity_header("theta", resources.len()));
    for theta in config.sweep.theta.values() {
        let spec = config.dephasing_spec(theta)?;
        let kappa = kappa_complex(&spec, tc);
        let mut row = vec![theta, analytic_blp_dephasing(&spec, tc)?];
        for rho in &resources {
            row.push(rsp_fidelity(&correlation_matrix(&apply_dephasing(rho, kappa)?)));
        }
        table.push_row(row)?;
    }
    Ok(table)
}

/// Optimal-pair and best-random-pair backflow against the Lorentzian
/// control time, given in units of `2 pi / epsilon`.
pub fn run_fig4(config: &ExperimentConfig) -> Result<CsvTable> {
    require_pairs(config)?;
    let spec = config.lorentz_spec(config.lorentz.ratio)?;
    let unit = spec.control_time()?;
    let control_times: Vec<f64> = config.sweep.t_c.values().iter().map(|m| m * unit).collect();
    let family = ChannelFamily::AmplitudeDamping(spec);
    let result = blp_search_checkpoints(&family, &control_times, &search_options(config, config.n_pairs))?;
    let mut table = CsvTable::new(["t_c", "integral_optimal", "integral_random_max"]);
    for (k, &tc) in control_times.iter().enumerate() {
        table.push_row(vec![tc, result.optimal[k], result.random_max[k]])?;
    }
    Ok(table)
}

/// Closed-form Lorentzian non-Markovianity at `t_c = 2 pi / epsilon` and
/// the RSP fidelity of each resource damped up to `t_c`, against
/// `Gamma / gamma0`.
pub fn run_fig5(config: &ExperimentConfig) -> Result<CsvTable> {
    let resources: Vec<_> = config.resource_params().iter().map(bell_diagonal).collect();
    let mut table = CsvTable::new(fidelity_header("ratio", resources.len()));
    for ratio in config.sweep.ratio.values() {
        let spec = config.lorentz_spec(ratio)?;
        let amplitude = chi(&spec, spec.control_time()?);
        let mut row = vec![ratio, spec.revival_amplitude()?];
        for rho in &resources {
            row.push(rsp_fidelity(&correlation_matrix(&apply_amplitude_damping(rho, amplitude)?)));
        }
        table.push_row(row)?;
    }
    Ok(table)
}

/// Runs the configured figure on `config.threads` workers (`0` keeps the
/// global pool).
pub fn run(config: &ExperimentConfig) -> Result<CsvTable> {
    config.validate()?;
    let dispatch = || match config.figure {
        Figure::Fig1 => run_fig1(config),
        Figure::Fig2 => run_fig2(config),
        Figure::Fig3a | Figure::Fig3b => run_fig3(config),
        Figure::Fig4 => run_fig4(config),
        Figure::Fig5 => run_fig5(config),
    };
    if config.threads == 0 {
        return dispatch();
    }
    rayon::ThreadPoolBuilder::new().num_threads(config.threads).build()?.install(dispatch)
}

/// `<csv path>.meta.toml`.
pub fn metadata_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.as_os_str().to_os_string();
    name.push(".meta.toml");
    PathBuf::from(name)
}

#[derive(Serialize)]
struct Metadata<'a> {
    library_version: &'static str,
    seed: u64,
    columns: &'a [String],
    rows: usize,
    config: &'a ExperimentConfig,
}

/// Writes the CSV to `path` and the metadata (library version, seed,
/// resolved config) next to it.
pub fn write_outputs(config: &ExperimentConfig, table: &CsvTable, path: &Path) -> Result<PathBuf> {
    table.write(path)?;
    let meta = Metadata {
        library_version: crate::VERSION,
        seed: config.seed,
        columns: table.header(),
        rows: table.rows().len(),
        config,
    };
    let text = toml::to_string(&meta).map_err(|e| Error::Config(e.to_string()))?;
    let meta_path = metadata_path(path);
    std::fs::write(&meta_path, text)?;
    Ok(meta_path)
}
