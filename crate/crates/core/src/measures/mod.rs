//! Non-Markovianity measures.
//!
//! Every measure is a sum of positive increments of a sampled scalar
//! series (trace distance, log-decoherence, negativity, mutual
//! information). Series are sampled on a uniform grid with bracketed local
//! extrema refined (see [`Trajectory::sample_refined`]).

mod correlations;
mod trajectory;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channels::ChannelFamily;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_symmetrized, trace_distance, ComplexMatrix, DensityMatrix, PureState};
pub use crate::sampling::{sample_random_pair, SeedStream};

pub use correlations::{
    divisibility_choi_integral, divisibility_measure, entanglement_measure, mutual_info_measure,
    mutual_information, ChoiDivisibility,
};
pub use trajectory::{backflow_intervals, blp_integral, TimeWindow, Trajectory};

pub(crate) use trajectory::uniform_grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    Blp,
    Divisibility,
    Entanglement,
    MutualInformation,
}

impl MeasureKind {
    pub fn name(&self) -> &'static str {
        match self {
            MeasureKind::Blp => "blp",
            MeasureKind::Divisibility => "divisibility",
            MeasureKind::Entanglement => "entanglement",
            MeasureKind::MutualInformation => "mutual-info",
        }
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blp" => Ok(MeasureKind::Blp),
            "divisibility" => Ok(MeasureKind::Divisibility),
            "entanglement" => Ok(MeasureKind::Entanglement),
            "mutual-info" | "mutual-information" => Ok(MeasureKind::MutualInformation),
            other => Err(Error::InvalidParameter(format!("unknown measure kind {other:?}"))),
        }
    }
}

/// Result of one measure evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureReport {
    pub kind: MeasureKind,
    /// Non-negative; `f64::INFINITY` for a divergent divisibility measure.
    pub value: f64,
    pub grid_size: usize,
    /// Best state pair of a BLP search.
    pub witness: Option<StatePair>,
    /// Time of the decoherence zero that makes the divisibility measure diverge.
    pub divergence_at: Option<f64>,
}

/// Pair of initial two-qubit states.
#[derive(Clone, Debug, PartialEq)]
pub struct StatePair {
    pub rho1: DensityMatrix,
    pub rho2: DensityMatrix,
}

impl StatePair {
    pub fn new(rho1: DensityMatrix, rho2: DensityMatrix) -> Result<Self> {
        for rho in [&rho1, &rho2] {
            if rho.dim() != 4 {
                return Err(Error::DimensionMismatch { left: rho.dim(), right: 4 });
            }
        }
        Ok(Self { rho1, rho2 })
    }

    pub fn difference(&self) -> ComplexMatrix {
        self.rho1.matrix() - self.rho2.matrix()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairVariant {
    /// `|zeta^+-> = sqrt(alpha) |phi^+-> + sqrt(1 - alpha) |psi^+->`
    Zeta,
    /// `|eta^+-> = sqrt(alpha) |phi^+-> + sqrt(1 - alpha) |psi^-+>`
    Eta,
}

/// The pair `(|x^+><x^+|, |x^-><x^-|)` for `x` = zeta or eta, built from
/// `|phi^+-> = (|00> +- e^{i phase}|11>)/sqrt 2` and
/// `|psi^+-> = (|01> +- e^{i phase}|10>)/sqrt 2`.
pub fn optimal_pairs(alpha: f64, phase: f64, variant: PairVariant) -> Result<StatePair> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, 1]")));
    }
    if !(0.0..=2.0 * PI).contains(&phase) {
        return Err(Error::InvalidParameter(format!("phase = {phase} outside [0, 2 pi]")));
    }
    let e = Complex64::from_polar(1.0, phase);
    let a = Complex64::new(alpha.sqrt() * FRAC_1_SQRT_2, 0.0);
    let b = Complex64::new((1.0 - alpha).sqrt() * FRAC_1_SQRT_2, 0.0);
    let state = |phi_sign: f64, psi_sign: f64| {
        PureState::normalized(vec![a, b, b * e * psi_sign, a * e * phi_sign]).map(|p| p.projector())
    };
    let (plus, minus) = match variant {
        PairVariant::Zeta => (state(1.0, 1.0)?, state(-1.0, -1.0)?),
        PairVariant::Eta => (state(1.0, -1.0)?, state(-1.0, 1.0)?),
    };
    StatePair::new(plus, minus)
}

/// Both variants on an `alpha_points x phase_points` grid, `alpha` uniform
/// on `[0, 1]` and `phase = 2 pi k / phase_points`.
pub fn optimal_pair_grid(alpha_points: usize, phase_points: usize) -> Result<Vec<StatePair>> {
    let alphas: Vec<f64> = if alpha_points <= 1 {
        vec![0.5]
    } else {
        uniform_grid(0.0, 1.0, alpha_points)
    };
    let mut pairs = Vec::with_capacity(2 * alphas.len() * phase_points.max(1));
    for variant in [PairVariant::Zeta, PairVariant::Eta] {
        for &alpha in &alphas {
            for k in 0..phase_points.max(1) {
                let phase = 2.0 * PI * k as f64 / phase_points.max(1) as f64;
                pairs.push(optimal_pairs(alpha, phase, variant)?);
            }
        }
    }
    Ok(pairs)
}

/// `D(Lambda_t rho1, Lambda_t rho2)`, computed from the evolved difference
/// `Lambda_t(rho1 - rho2)` (the channel is linear).
pub fn pair_distance(family: &ChannelFamily, difference: &ComplexMatrix, t: f64) -> f64 {
    let evolved = family.qubit_map(t).apply_on_first(difference);
    let norm: f64 = eigenvalues_symmetrized(&evolved).iter().map(|v| v.abs()).sum();
    (0.5 * norm).clamp(0.0, 1.0)
}

/// Trace distance of the evolved pair on `grid` (with refined extrema).
pub fn trace_distance_trajectory(family: &ChannelFamily, pair: &StatePair, grid: &[f64]) -> Result<Trajectory> {
    let diff = pair.difference();
    Trajectory::sample_refined(|t| pair_distance(family, &diff, t), grid)
}

/// Trace distance on `grid` exactly, without refinement, evaluated through
/// the full state evolution of both members.
pub fn trace_distance_samples(family: &ChannelFamily, pair: &StatePair, grid: &[f64]) -> Result<Trajectory> {
    let values = grid
        .iter()
        .map(|&t| trace_distance(&family.evolve(&pair.rho1, t)?, &family.evolve(&pair.rho2, t)?))
        .collect::<Result<Vec<f64>>>()?;
    Trajectory::new(grid.to_vec(), values)
}

/// Parameters of a BLP maximization over state pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    /// Random Haar-pure pairs in addition to the built-in optimal pairs.
    pub n_pairs: usize,
    pub grid_size: usize,
    pub seed: u64,
    pub alpha_points: usize,
    pub phase_points: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { n_pairs: 10_000, grid_size: 4001, seed: 42, alpha_points: 11, phase_points: 16 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlpSearchReport {
    /// Maximum over all candidates, with the winning pair as witness.
    pub report: MeasureReport,
    /// Maximum over the built-in optimal pairs.
    pub optimal_value: f64,
    /// Maximum over the random pairs, `None` when none were drawn.
    pub random_max: Option<f64>,
    /// Candidate index of the witness: optimal pairs first, then random
    /// pair `i` at `optimal_count + i`.
    pub best_index: usize,
}

fn candidate(optimal: &[StatePair], seed: u64, index: usize) -> StatePair {
    if index < optimal.len() {
        optimal[index].clone()
    } else {
        sample_random_pair(&SeedStream::new(seed, (index - optimal.len()) as u64))
    }
}

/// Maximum of [`blp_integral`] over the optimal-pair grid and `n_pairs`
/// random pairs on `window`.
///
/// Candidates are evaluated in parallel; the reduction keeps the lowest
/// index among equal maxima, so the report does not depend on scheduling.
pub fn blp_search(family: &ChannelFamily, window: TimeWindow, opts: &SearchOptions) -> Result<BlpSearchReport> {
    let grid = window.grid(opts.grid_size)?;
    let optimal = optimal_pair_grid(opts.alpha_points, opts.phase_points)?;
    let total = optimal.len() + opts.n_pairs;
    let values = (0..total)
        .into_par_iter()
        .map(|i| {
            let pair = candidate(&optimal, opts.seed, i);
            trace_distance_trajectory(family, &pair, &grid).map(|t| blp_integral(&t))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut best_index = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best_index] {
            best_index = i;
        }
    }
    let optimal_value = values[..optimal.len()].iter().copied().fold(0.0, f64::max);
    let random_max = values[optimal.len()..].iter().copied().reduce(f64::max);
    Ok(BlpSearchReport {
        report: MeasureReport {
            kind: MeasureKind::Blp,
            value: values[best_index],
            grid_size: opts.grid_size,
            witness: Some(candidate(&optimal, opts.seed, best_index)),
            divergence_at: None,
        },
        optimal_value,
        random_max,
        best_index,
    })
}

/// Backflow at several control times from one evolution per candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckpointBackflow {
    pub control_times: Vec<f64>,
    /// Row-wise maximum over the optimal pairs.
    pub optimal: Vec<f64>,
    /// Row-wise maximum over the random pairs (empty when none were drawn).
    pub random_max: Vec<f64>,
}

/// BLP integrals over `[0, t_c]` for every `t_c` in `control_times`.
///
/// Each candidate is evolved once on a master grid of `grid_size` uniform
/// points over `[0, max t_c]` merged with the control times; the integral
/// for `t_c` is the cumulative backflow up to that sample.
pub fn blp_search_checkpoints(
    family: &ChannelFamily,
    control_times: &[f64],
    opts: &SearchOptions,
) -> Result<CheckpointBackflow> {
    if control_times.is_empty() {
        return Err(Error::InvalidParameter("no control times".into()));
    }
    let mut checkpoints = control_times.to_vec();
    if checkpoints.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::InvalidParameter("control times must be positive".into()));
    }
    checkpoints.sort_by(f64::total_cmp);
    checkpoints.dedup();
    let end = *checkpoints.last().expect("non-empty");
    let mut grid = TimeWindow::new(0.0, end)?.grid(opts.grid_size)?;
    grid.extend_from_slice(&checkpoints);
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let optimal = optimal_pair_grid(opts.alpha_points, opts.phase_points)?;
    let total = optimal.len() + opts.n_pairs;
    let rows = (0..total)
        .into_par_iter()
        .map(|i| {
            let pair = candidate(&optimal, opts.seed, i);
            trace_distance_trajectory(family, &pair, &grid)?.backflow_at(&checkpoints)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;

    let row_max = |rows: &[Vec<f64>]| -> Vec<f64> {
        let mut out = vec![f64::NEG_INFINITY; checkpoints.len()];
        for row in rows {
            for (o, &v) in out.iter_mut().zip(row) {
                *o = o.max(v);
            }
        }
        out
    };
    let optimal_sorted = row_max(&rows[..optimal.len()]);
    let random_sorted = if opts.n_pairs > 0 { row_max(&rows[optimal.len()..]) } else { Vec::new() };
    let lookup = |sorted: &[f64], t: f64| sorted[checkpoints.iter().position(|&c| c == t).expect("checkpoint")];
    Ok(CheckpointBackflow {
        control_times: control_times.to_vec(),
        optimal: control_times.iter().map(|&t| lookup(&optimal_sorted, t)).collect(),
        random_max: if random_sorted.is_empty() {
            Vec::new()
        } else {
            control_times.iter().map(|&t| lookup(&random_sorted, t)).collect()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoherence::{kappa_abs, DephasingSpec};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn optimal_pair_limits() {
        let pair = optimal_pairs(1.0, 0.0, PairVariant::Zeta).unwrap();
        let s = FRAC_1_SQRT_2;
        let phi_plus = ComplexMatrix::outer(
            &[s, 0.0, 0.0, s].map(|x| Complex64::new(x, 0.0)),
            &[s, 0.0, 0.0, s].map(|x| Complex64::new(x, 0.0)),
        );
        assert!(pair.rho1.matrix().max_abs_diff(&phi_plus) < 1e-15);
        assert!((trace_distance(&pair.rho1, &pair.rho2).unwrap() - 1.0).abs() < 1e-14);

        let pair = optimal_pairs(0.0, 0.0, PairVariant::Zeta).unwrap();
        let psi_minus = ComplexMatrix::outer(
            &[0.0, s, -s, 0.0].map(|x| Complex64::new(x, 0.0)),
            &[0.0, s, -s, 0.0].map(|x| Complex64::new(x, 0.0)),
        );
        assert!(pair.rho2.matrix().max_abs_diff(&psi_minus) < 1e-15);
        assert!(optimal_pairs(1.5, 0.0, PairVariant::Eta).is_err());
        assert!(optimal_pairs(0.5, 7.0, PairVariant::Eta).is_err());
    }

    #[test]
    fn eta_pair_tracks_kappa() {
        let spec = DephasingSpec::with_separation(FRAC_PI_4, 10.0, 1.0).unwrap();
        let family = ChannelFamily::Dephasing(spec);
        let pair = optimal_pairs(0.3, 1.1, PairVariant::Eta).unwrap();
        let grid = uniform_grid(0.0, 2.0 * PI / 10.0, 101);
        let traj = trace_distance_samples(&family, &pair, &grid).unwrap();
        for (&t, &d) in traj.times().iter().zip(traj.values()) {
            assert!((d - kappa_abs(&spec, t)).abs() < 1e-9);
        }
    }

    #[test]
    fn identical_pair_has_zero_trajectory() {
        let spec = DephasingSpec::with_separation(0.4, 10.0, 1.0).unwrap();
        let family = ChannelFamily::Dephasing(spec);
        let rho = optimal_pairs(0.2, 0.5, PairVariant::Zeta).unwrap().rho1;
        let pair = StatePair::new(rho.clone(), rho).unwrap();
        let traj = trace_distance_trajectory(&family, &pair, &uniform_grid(0.0, 1.0, 50)).unwrap();
        assert!(traj.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn optimal_grid_size() {
        assert_eq!(optimal_pair_grid(11, 16).unwrap().len(), 352);
    }

    #[test]
    fn measure_kind_parsing() {
        for kind in [MeasureKind::Blp, MeasureKind::Divisibility, MeasureKind::Entanglement, MeasureKind::MutualInformation] {
            assert_eq!(kind.name().parse::<MeasureKind>().unwrap(), kind);
        }
        assert!("nope".parse::<MeasureKind>().is_err());
    }
}
