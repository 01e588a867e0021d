//! Divisibility, negativity and mutual-information measures built on Choi
//! states.

use crate::channels::{choi_state, intermediate_choi, ChannelFamily, ChoiState};
use crate::error::Result;
use crate::linalg::{
    negativity, partial_trace, trace_norm_unchecked, von_neumann_entropy, Bipartition, Subsystem,
};

use super::trajectory::cells_to_intervals;
use super::{blp_integral, MeasureKind, MeasureReport, TimeWindow, Trajectory};

/// Decoherence moduli at or below this are treated as exact zeros.
const ZERO_TOL: f64 = 1e-14;
/// Trace-norm excess of an intermediate Choi matrix counted as positive.
const EXCESS_TOL: f64 = 1e-12;

/// Negativity-based and mutual-information-based measures use the Choi
/// state of the two-qubit register `ab`.
const REGISTER_DIM: usize = 4;

/// Start of the first increase run whose minimum is a zero of the
/// decoherence modulus.
fn divergence_point(traj: &Trajectory) -> Option<f64> {
    let v = traj.values();
    (0..v.len() - 1)
        .find(|&k| v[k + 1] > v[k] && (k == 0 || v[k] <= v[k - 1]) && v[k] <= ZERO_TOL)
        .map(|k| traj.times()[k])
}

/// Divisibility measure `int h(t) dt` on `window`.
///
/// For dephasing `h = d/dt ln|kappa|` wherever `|kappa|` grows, so the value
/// is the sum of `ln(v[k+1]/v[k])` over increasing cells of the refined
/// `|kappa|` series. Other families use [`divisibility_choi_integral`]. A
/// zero of the decoherence function at the foot of a growth interval makes
/// the measure infinite; the report then carries the zero's time.
pub fn divisibility_measure(family: &ChannelFamily, window: TimeWindow, grid_size: usize) -> Result<MeasureReport> {
    let grid = window.grid(grid_size)?;
    let modulus = Trajectory::sample_refined(|t| family.decoherence_abs(t), &grid)?;
    let mut report = MeasureReport {
        kind: MeasureKind::Divisibility,
        value: f64::INFINITY,
        grid_size,
        witness: None,
        divergence_at: divergence_point(&modulus),
    };
    if report.divergence_at.is_some() {
        return Ok(report);
    }
    report.value = match family {
        ChannelFamily::Dephasing(_) => modulus
            .values()
            .windows(2)
            .map(|w| if w[1] > w[0] { (w[1] / w[0]).ln() } else { 0.0 })
            .sum(),
        ChannelFamily::AmplitudeDamping(_) => divisibility_choi_integral(family, window, grid_size)?.value,
    };
    Ok(report)
}

/// Finite-difference divisibility integral.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiDivisibility {
    /// `sum_k (||C(t_k, dt)||_1 - 1)` over cells with positive excess.
    pub value: f64,
    /// Merged grid cells where the intermediate map is not completely positive.
    pub intervals: Vec<(f64, f64)>,
}

/// `sum_k h(t_k) dt` with the forward-difference rate
/// `h(t_k) = (||intermediate_choi(t_k, dt)||_1 - 1) / dt` on a uniform grid.
///
/// Fails with [`crate::Error::SingularIntermediateMap`] when the decoherence
/// function vanishes on a grid point.
pub fn divisibility_choi_integral(family: &ChannelFamily, window: TimeWindow, grid_size: usize) -> Result<ChoiDivisibility> {
    let grid = window.grid(grid_size)?;
    let mut value = 0.0;
    let mut flags = Vec::with_capacity(grid.len() - 1);
    for w in grid.windows(2) {
        let choi = intermediate_choi(family, w[0], w[1] - w[0])?;
        let excess = trace_norm_unchecked(&choi) - 1.0;
        let positive = excess > EXCESS_TOL;
        if positive {
            value += excess;
        }
        flags.push(positive);
    }
    Ok(ChoiDivisibility { value, intervals: cells_to_intervals(&grid, &flags) })
}

fn register_choi(family: &ChannelFamily, t: f64) -> ChoiState {
    choi_state(family, t.max(0.0), REGISTER_DIM).expect("register Choi state at valid time")
}

/// Negativity of the register Choi state across system : ancilla.
pub fn choi_negativity(family: &ChannelFamily, t: f64) -> f64 {
    let choi = register_choi(family, t);
    negativity(&choi.state, Bipartition::new(REGISTER_DIM, REGISTER_DIM)).expect("square split")
}

/// `S(rho_s) + S(rho_s') - S(rho_ss')` in bits.
pub fn mutual_information(choi: &ChoiState) -> f64 {
    let d = choi.system_dim;
    let split = Bipartition::new(d, d);
    let system = partial_trace(&choi.state, Subsystem::First, split).expect("square split");
    let ancilla = partial_trace(&choi.state, Subsystem::Second, split).expect("square split");
    von_neumann_entropy(&system) + von_neumann_entropy(&ancilla) - von_neumann_entropy(&choi.state)
}

/// Sum of positive increments of the Choi-state negativity.
pub fn entanglement_measure(family: &ChannelFamily, window: TimeWindow, grid_size: usize) -> Result<MeasureReport> {
    let grid = window.grid(grid_size)?;
    let traj = Trajectory::sample_refined(|t| choi_negativity(family, t), &grid)?;
    Ok(MeasureReport {
        kind: MeasureKind::Entanglement,
        value: blp_integral(&traj),
        grid_size,
        witness: None,
        divergence_at: None,
    })
}

/// Sum of positive increments of the Choi-state mutual information.
pub fn mutual_info_measure(family: &ChannelFamily, window: TimeWindow, grid_size: usize) -> Result<MeasureReport> {
    let grid = window.grid(grid_size)?;
    let traj = Trajectory::sample_refined(|t| mutual_information(&register_choi(family, t)), &grid)?;
    Ok(MeasureReport {
        kind: MeasureKind::MutualInformation,
        value: blp_integral(&traj),
        grid_size,
        witness: None,
        divergence_at: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoherence::{kappa_abs, DephasingSpec, LorentzSpec};
    use crate::linalg::binary_entropy;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn dephasing(theta: f64) -> ChannelFamily {
        ChannelFamily::Dephasing(DephasingSpec::with_separation(theta, 10.0, 1.0).unwrap())
    }

    #[test]
    fn mutual_information_endpoints() {
        let family = dephasing(FRAC_PI_4);
        let at_zero = mutual_information(&register_choi(&family, 0.0));
        assert!((at_zero - 4.0).abs() < 1e-12);
        let at_node = mutual_information(&register_choi(&family, PI / 10.0));
        assert!((at_node - 3.0).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_along_the_evolution() {
        let spec = DephasingSpec::with_separation(0.6, 10.0, 1.0).unwrap();
        let family = ChannelFamily::Dephasing(spec);
        for k in 0..20 {
            let t = 0.05 * k as f64;
            let kap = kappa_abs(&spec, t);
            assert!((choi_negativity(&family, t) - (kap + 0.5)).abs() < 1e-9);
            let i = mutual_information(&register_choi(&family, t));
            assert!((i - (4.0 - binary_entropy((1.0 - kap) / 2.0))).abs() < 1e-9);
        }
    }

    #[test]
    fn monotone_windows_give_zero() {
        let window = TimeWindow::new(0.0, PI / 10.0).unwrap();
        for theta in [0.0, FRAC_PI_4] {
            let family = dephasing(theta);
            assert!(divisibility_measure(&family, window, 401).unwrap().value < 1e-12);
            assert!(entanglement_measure(&family, window, 401).unwrap().value < 1e-12);
            assert!(mutual_info_measure(&family, window, 401).unwrap().value < 1e-12);
        }
    }

    #[test]
    fn exact_zero_diverges() {
        let window = TimeWindow::new(0.0, 2.0 * PI / 10.0).unwrap();
        let report = divisibility_measure(&dephasing(FRAC_PI_4), window, 401).unwrap();
        assert!(report.value.is_infinite());
        assert!((report.divergence_at.unwrap() - PI / 10.0).abs() < 1e-12);
    }

    #[test]
    fn lorentzian_zero_crossing_diverges() {
        let family = ChannelFamily::AmplitudeDamping(LorentzSpec::new(1.0, 0.1).unwrap());
        let window = TimeWindow::new(0.0, 15.0).unwrap();
        let report = divisibility_measure(&family, window, 1001).unwrap();
        assert!(report.value.is_infinite());
        let t0 = report.divergence_at.unwrap();
        let chi = crate::decoherence::chi(&LorentzSpec::new(1.0, 0.1).unwrap(), t0);
        assert!(chi.abs() < 1e-14);
    }

    #[test]
    fn lorentzian_markovian_regime_is_divisible() {
        let family = ChannelFamily::AmplitudeDamping(LorentzSpec::new(1.0, 3.0).unwrap());
        let window = TimeWindow::new(0.0, 10.0).unwrap();
        assert_eq!(divisibility_measure(&family, window, 501).unwrap().value, 0.0);
        let choi = divisibility_choi_integral(&family, window, 501).unwrap();
        assert_eq!(choi.value, 0.0);
        assert!(choi.intervals.is_empty());
    }
}
