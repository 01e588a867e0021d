use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decoherence::{transition_thetas, DephasingSpec, LorentzSpec};
use crate::error::{Error, Result};
use crate::measures::uniform_grid;
use crate::rsp::BellDiagonalParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3a,
    Fig3b,
    Fig4,
    Fig5,
}

impl Figure {
    pub const ALL: [Figure; 6] = [Figure::Fig1, Figure::Fig2, Figure::Fig3a, Figure::Fig3b, Figure::Fig4, Figure::Fig5];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }

    pub fn is_lorentzian(&self) -> bool {
        matches!(self, Figure::Fig4 | Figure::Fig5)
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|fig| fig.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown figure '{s}'")))
    }
}

/// `points` evenly spaced values from `start` to `end` inclusive; a single
/// point is `start`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Sweep {
    pub fn new(start: f64, end: f64, points: usize) -> Self {
        Self { start, end, points }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.start],
            n => uniform_grid(self.start, self.end, n),
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.points == 0 {
            return Err(Error::Config(format!("sweep '{name}' needs at least one point")));
        }
        if !(self.start.is_finite() && self.end.is_finite()) {
            return Err(Error::Config(format!("sweep '{name}' has non-finite bounds")));
        }
        if self.points > 1 && self.end <= self.start {
            return Err(Error::Config(format!("sweep '{name}' must have end > start")));
        }
        Ok(())
    }

    fn check_within(&self, name: &str, lower: f64, upper: f64) -> Result<()> {
        let slack = 1e-12 * upper.abs().max(1.0);
        if self.start < lower - slack || self.end.max(self.start) > upper + slack {
            return Err(Error::Config(format!(
                "sweep '{name}' [{}, {}] leaves its validity window [{lower}, {upper}]",
                self.start, self.end
            )));
        }
        Ok(())
    }
}

/// Partial configuration as read from a TOML file or assembled from
/// command-line flags. Missing fields take figure-specific defaults in
/// [`ExperimentConfig::resolve`].
///
/// ```toml
/// figure = "fig2"
/// seed = 42
/// n_pairs = 10000
/// grid_size = 4001
/// output = "fig2.csv"
/// threads = 4
/// resources = [[1.0, -1.0, 1.0], [-0.5, 0.4, 0.8]]
///
/// [dephasing]
/// theta = 0.7853981633974483
/// delta_omega = 10.0
/// sigma = 1.0
/// control_time = 0.6283185307179586
///
/// [lorentz]
/// gamma0 = 1.0
/// ratio = 0.1
///
/// [sweep]
/// tau_c = { start = 0.3456, end = 0.6283, points = 10 }
/// theta = { start = 0.0, end = 1.5708, points = 31 }
/// ratio = { start = 0.001, end = 1.999, points = 20 }
/// t_c = { start = 0.5, end = 2.0, points = 25 }
/// ```
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub figure: Option<Figure>,
    pub seed: Option<u64>,
    pub n_pairs: Option<usize>,
    pub grid_size: Option<usize>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub resources: Option<Vec<[f64; 3]>>,
    #[serde(default)]
    pub dephasing: DephasingOverrides,
    #[serde(default)]
    pub lorentz: LorentzOverrides,
    #[serde(default)]
    pub sweep: SweepOverrides,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DephasingOverrides {
    pub theta: Option<f64>,
    pub delta_omega: Option<f64>,
    pub sigma: Option<f64>,
    /// Control time of the RSP figures (fig3a, fig3b).
    pub control_time: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LorentzOverrides {
    pub gamma0: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOverrides {
    pub tau_c: Option<Sweep>,
    pub theta: Option<Sweep>,
    pub ratio: Option<Sweep>,
    /// Control times in units of `2 pi / epsilon`.
    pub t_c: Option<Sweep>,
}

impl ConfigOverrides {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().trim().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_PAIRS: usize = 10_000;
pub const DEFAULT_GRID: usize = 4001;
pub const DEFAULT_DELTA_OMEGA: f64 = 10.0;
pub const DEFAULT_SIGMA: f64 = 1.0;
pub const DEFAULT_GAMMA0: f64 = 1.0;
pub const DEFAULT_RATIO: f64 = 0.1;
pub const DEFAULT_RESOURCES: [[f64; 3]; 2] = [[1.0, -1.0, 1.0], [-0.5, 0.4, 0.8]];

/// Fully resolved experiment description; this is what the metadata file
/// records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub figure: Figure,
    pub seed: u64,
    pub n_pairs: usize,
    pub grid_size: usize,
    /// Worker threads; `0` lets the pool pick.
    pub threads: usize,
    pub output: Option<PathBuf>,
    pub resources: Vec<[f64; 3]>,
    pub dephasing: DephasingSettings,
    pub lorentz: LorentzSettings,
    pub sweep: SweepSettings,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DephasingSettings {
    pub theta: f64,
    pub delta_omega: f64,
    pub sigma: f64,
    pub control_time: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzSettings {
    pub gamma0: f64,
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub tau_c: Sweep,
    pub theta: Sweep,
    pub ratio: Sweep,
    pub t_c: Sweep,
}

impl ExperimentConfig {
    /// Default configuration of `figure`.
    pub fn preset(figure: Figure) -> Result<Self> {
        Self::resolve(ConfigOverrides { figure: Some(figure), ..Default::default() })
    }

    /// Fills every missing field with the figure default and validates.
    pub fn resolve(o: ConfigOverrides) -> Result<Self> {
        let figure = o.figure.ok_or_else(|| Error::Config("no figure selected".into()))?;
        let dw = o.dephasing.delta_omega.unwrap_or(DEFAULT_DELTA_OMEGA);
        let sigma = o.dephasing.sigma.unwrap_or(DEFAULT_SIGMA);
        if !(dw > 0.0 && dw.is_finite() && sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Config("delta_omega and sigma must be positive".into()));
        }
        let control_time = o.dephasing.control_time.unwrap_or(match figure {
            Figure::Fig3a => 1.5 * PI / dw,
            _ => 2.0 * PI / dw,
        });
        let theta_default = match figure {
            Figure::Fig2 => Sweep::new(0.0, FRAC_PI_2, 31),
            Figure::Fig3a | Figure::Fig3b => {
                let (lo, hi) = transition_thetas(dw, sigma, control_time)
                    .map_err(|e| Error::Config(format!("control_time {control_time}: {e}")))?;
                Sweep::new(lo, hi, 25)
            }
            _ => Sweep::new(FRAC_PI_4, FRAC_PI_4, 1),
        };
        let tau_c_default = match figure {
            Figure::Fig1 => Sweep::new(1.1 * PI / dw, 2.0 * PI / dw, 25),
            _ => Sweep::new(1.1 * PI / dw, 2.0 * PI / dw, 10),
        };
        let config = Self {
            figure,
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            n_pairs: o.n_pairs.unwrap_or(DEFAULT_PAIRS),
            grid_size: o.grid_size.unwrap_or(DEFAULT_GRID),
            threads: o.threads.unwrap_or(0),
            output: o.output,
            resources: o.resources.unwrap_or_else(|| DEFAULT_RESOURCES.to_vec()),
            dephasing: DephasingSettings {
                theta: o.dephasing.theta.unwrap_or(FRAC_PI_4),
                delta_omega: dw,
                sigma,
                control_time,
            },
            lorentz: LorentzSettings {
                gamma0: o.lorentz.gamma0.unwrap_or(DEFAULT_GAMMA0),
                ratio: o.lorentz.ratio.unwrap_or(DEFAULT_RATIO),
            },
            sweep: SweepSettings {
                tau_c: o.sweep.tau_c.unwrap_or(tau_c_default),
                theta: o.sweep.theta.unwrap_or(theta_default),
                ratio: o.sweep.ratio.unwrap_or(Sweep::new(1e-3, 2.0 - 1e-3, 20)),
                t_c: o.sweep.t_c.unwrap_or(Sweep::new(0.5, 2.0, 25)),
            },
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_size < 2 {
            return Err(Error::Config(format!("grid_size {} must be at least 2", self.grid_size)));
        }
        let s = &self.sweep;
        for (name, sweep) in [("tau_c", s.tau_c), ("theta", s.theta), ("ratio", s.ratio), ("t_c", s.t_c)] {
            sweep.validate(name)?;
        }
        self.dephasing_spec(self.dephasing.theta).map_err(|e| Error::Config(e.to_string()))?;
        self.lorentz_spec(self.lorentz.ratio).map_err(|e| Error::Config(e.to_string()))?;
        for c in &self.resources {
            BellDiagonalParams::new(c[0], c[1], c[2]).map_err(|e| Error::Config(e.to_string()))?;
        }
        let dw = self.dephasing.delta_omega;
        match self.figure {
            Figure::Fig1 => {
                if s.tau_c.start <= 0.0 {
                    return Err(Error::Config("fig1 control times must be positive".into()));
                }
            }
            Figure::Fig2 => {
                s.tau_c.check_within("tau_c", PI / dw, 2.0 * PI / dw)?;
                if s.tau_c.start <= PI / dw {
                    return Err(Error::Config("fig2 tau_c must start after pi/delta_omega".into()));
                }
                s.theta.check_within("theta", 0.0, FRAC_PI_2)?;
            }
            Figure::Fig3a | Figure::Fig3b => {
                s.theta.check_within("theta", 0.0, FRAC_PI_2)?;
                let tc = self.dephasing.control_time;
                if !(tc > PI / dw && tc <= 2.0 * PI / dw * (1.0 + 1e-12)) {
                    return Err(Error::Config(format!("control_time {tc} outside (pi/dw, 2pi/dw]")));
                }
                if self.resources.is_empty() {
                    return Err(Error::Config("at least one resource is required".into()));
                }
            }
            Figure::Fig4 => {
                self.lorentz_spec(self.lorentz.ratio)?
                    .control_time()
                    .map_err(|e| Error::Config(e.to_string()))?;
                if s.t_c.start <= 0.0 {
                    return Err(Error::Config("fig4 control times must be positive".into()));
                }
            }
            Figure::Fig5 => {
                if s.ratio.start <= 0.0 || s.ratio.end.max(s.ratio.start) >= 2.0 {
                    return Err(Error::Config("fig5 ratios must lie in the open interval (0, 2)".into()));
                }
                if self.resources.is_empty() {
                    return Err(Error::Config("at least one resource is required".into()));
                }
            }
        }
        Ok(())
    }

    pub fn dephasing_spec(&self, theta: f64) -> Result<DephasingSpec> {
        DephasingSpec::with_separation(theta, self.dephasing.delta_omega, self.dephasing.sigma)
    }

    pub fn lorentz_spec(&self, ratio: f64) -> Result<LorentzSpec> {
        LorentzSpec::new(self.lorentz.gamma0, ratio * self.lorentz.gamma0)
    }

    pub fn resource_params(&self) -> Vec<BellDiagonalParams> {
        self.resources
            .iter()
            .map(|c| BellDiagonalParams::new(c[0], c[1], c[2]).expect("validated"))
            .collect()
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}
