//! Noise channels on qubit `a` of a two-qubit register and their Choi
//! states.
//!
//! Every map is specified pointwise by its decoherence value (`kappa` or
//! `chi`); [`ChannelFamily`] turns a time into that value.

use num_complex::Complex64;

use crate::decoherence::{chi, kappa_complex, DephasingSpec, LorentzSpec};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};

const CONTRACTION_TOL: f64 = 1e-12;
const SINGULAR_TOL: f64 = 1e-14;

/// Single-qubit map fixed by one decoherence value.
///
/// The action on the operator basis `|i><j|` is
///
/// * dephasing `kappa`: `|0><1| -> kappa |0><1|`, `|1><0| -> conj(kappa) |1><0|`,
///   populations unchanged;
/// * amplitude damping `chi` (Kraus pair `diag(1, chi)` and
///   `sqrt(1 - chi^2) |0><1|`): coherences scale by `chi`,
///   `|1><1| -> chi^2 |1><1| + (1 - chi^2) |0><0|`.
///
/// Values outside the unit disc give the (non-positive) intermediate maps
/// used by the divisibility measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QubitMap {
    Dephasing(Complex64),
    AmplitudeDamping(f64),
}

impl QubitMap {
    pub fn identity() -> Self {
        QubitMap::Dephasing(Complex64::new(1.0, 0.0))
    }

    /// Image of `|i><j|` as a row-major 2x2 array.
    fn image(&self, i: usize, j: usize) -> [[Complex64; 2]; 2] {
        let z = Complex64::new(0.0, 0.0);
        let mut out = [[z; 2]; 2];
        match (*self, i, j) {
            (_, 0, 0) => out[0][0] = Complex64::new(1.0, 0.0),
            (QubitMap::Dephasing(k), 0, 1) => out[0][1] = k,
            (QubitMap::Dephasing(k), 1, 0) => out[1][0] = k.conj(),
            (QubitMap::Dephasing(_), 1, 1) => out[1][1] = Complex64::new(1.0, 0.0),
            (QubitMap::AmplitudeDamping(c), 0, 1) => out[0][1] = Complex64::new(c, 0.0),
            (QubitMap::AmplitudeDamping(c), 1, 0) => out[1][0] = Complex64::new(c, 0.0),
            (QubitMap::AmplitudeDamping(c), 1, 1) => {
                out[0][0] = Complex64::new(1.0 - c * c, 0.0);
                out[1][1] = Complex64::new(c * c, 0.0);
            }
            _ => unreachable!("qubit basis index out of range"),
        }
        out
    }

    /// Modulus of the decoherence value.
    pub fn modulus(&self) -> f64 {
        match *self {
            QubitMap::Dephasing(k) => k.norm(),
            QubitMap::AmplitudeDamping(c) => c.abs(),
        }
    }

    /// Applies the map to the first (slowest) qubit factor of `m`, leaving
    /// the remaining `dim/2`-dimensional factor untouched.
    pub fn apply_on_first(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let rest = m.dim() / 2;
        assert_eq!(rest * 2, m.dim(), "first factor must be a qubit");
        let mut out = ComplexMatrix::zeros(m.dim());
        for i in 0..2 {
            for j in 0..2 {
                let img = self.image(i, j);
                for (k, row) in img.iter().enumerate() {
                    for (l, &w) in row.iter().enumerate() {
                        if w == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for r in 0..rest {
                            for s in 0..rest {
                                out[(k * rest + r, l * rest + s)] += w * m[(i * rest + r, j * rest + s)];
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Map `L` with `L . self = later`, built from the ratio of decoherence values.
    pub fn intermediate(&self, later: &QubitMap) -> Result<QubitMap> {
        match (*self, *later) {
            (QubitMap::Dephasing(a), QubitMap::Dephasing(b)) => {
                if a.norm() < SINGULAR_TOL {
                    return Err(Error::SingularIntermediateMap { t: f64::NAN });
                }
                Ok(QubitMap::Dephasing(b / a))
            }
            (QubitMap::AmplitudeDamping(a), QubitMap::AmplitudeDamping(b)) => {
                if a.abs() < SINGULAR_TOL {
                    return Err(Error::SingularIntermediateMap { t: f64::NAN });
                }
                Ok(QubitMap::AmplitudeDamping(b / a))
            }
            _ => Err(Error::InvalidParameter("maps of different families".into())),
        }
    }

    /// Choi matrix `(1/2) sum_ij L(|i><j|) (x) |i><j|`, system first.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        self.apply_on_first(&maximally_entangled(2))
    }
}

/// `|Psi><Psi|` with `|Psi> = d^{-1/2} sum_j |j>|j>`.
pub fn maximally_entangled(d: usize) -> ComplexMatrix {
    let w = Complex64::new(1.0 / d as f64, 0.0);
    ComplexMatrix::from_fn(d * d, |row, col| {
        if row % (d + 1) == 0 && col % (d + 1) == 0 {
            w
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: 4 });
    }
    Ok(())
}

/// Multiplies the `a`-coherence blocks of a two-qubit state by `kappa`
/// (upper right) and `conj(kappa)` (lower left).
pub fn apply_dephasing(rho: &DensityMatrix, kappa: Complex64) -> Result<DensityMatrix> {
    check_two_qubit(rho)?;
    if kappa.norm() > 1.0 + CONTRACTION_TOL {
        return Err(Error::NotContraction { modulus: kappa.norm() });
    }
    Ok(DensityMatrix::new_unchecked(QubitMap::Dephasing(kappa).apply_on_first(rho.matrix())))
}

/// Amplitude damping of qubit `a` with amplitude `chi`.
pub fn apply_amplitude_damping(rho: &DensityMatrix, chi: f64) -> Result<DensityMatrix> {
    check_two_qubit(rho)?;
    if chi.abs() > 1.0 + CONTRACTION_TOL {
        return Err(Error::NotContraction { modulus: chi.abs() });
    }
    Ok(DensityMatrix::new_unchecked(QubitMap::AmplitudeDamping(chi).apply_on_first(rho.matrix())))
}

/// Time-parameterized channel family `{Lambda_t}` acting on qubit `a`.
///
/// Dephasing families take reduced time `tau`; Lorentzian families take
/// physical time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelFamily {
    Dephasing(DephasingSpec),
    AmplitudeDamping(LorentzSpec),
}

impl ChannelFamily {
    /// `kappa(tau)` or `chi(t) + 0i`.
    pub fn decoherence(&self, t: f64) -> Complex64 {
        match self {
            ChannelFamily::Dephasing(spec) => kappa_complex(spec, t),
            ChannelFamily::AmplitudeDamping(spec) => Complex64::new(chi(spec, t), 0.0),
        }
    }

    /// `|kappa(tau)|` (closed form) or `|chi(t)|`.
    pub fn decoherence_abs(&self, t: f64) -> f64 {
        match self {
            ChannelFamily::Dephasing(spec) => crate::decoherence::kappa_abs(spec, t),
            ChannelFamily::AmplitudeDamping(spec) => chi(spec, t).abs(),
        }
    }

    pub fn qubit_map(&self, t: f64) -> QubitMap {
        match self {
            ChannelFamily::Dephasing(spec) => QubitMap::Dephasing(kappa_complex(spec, t)),
            ChannelFamily::AmplitudeDamping(spec) => QubitMap::AmplitudeDamping(chi(spec, t)),
        }
    }

    /// `Lambda_t rho` for a two-qubit state.
    pub fn evolve(&self, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        check_two_qubit(rho)?;
        Ok(DensityMatrix::new_unchecked(self.qubit_map(t).apply_on_first(rho.matrix())))
    }
}

/// `(Lambda_t (x) I)|Psi><Psi|` together with the system dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiState {
    pub state: DensityMatrix,
    pub system_dim: usize,
}

/// Choi state of `Lambda_t` on a `system_dim`-dimensional system: `2` is
/// qubit `a` alone, `4` is the register `ab` with `b` noiseless.
pub fn choi_state(family: &ChannelFamily, t: f64, system_dim: usize) -> Result<ChoiState> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time {t} must be non-negative")));
    }
    if system_dim != 2 && system_dim != 4 {
        return Err(Error::InvalidParameter(format!("system dimension {system_dim} not in {{2, 4}}")));
    }
    let psi = maximally_entangled(system_dim);
    let state = DensityMatrix::new_unchecked(family.qubit_map(t).apply_on_first(&psi));
    Ok(ChoiState { state, system_dim })
}

/// Choi matrix (qubit `a`, `d = 2`) of the map `Lambda_{t+eps,t}` with
/// `Lambda_{t+eps} = Lambda_{t+eps,t} Lambda_t`. It has unit trace but is
/// not positive when the family is non-divisible at `t`.
pub fn intermediate_choi(family: &ChannelFamily, t: f64, eps: f64) -> Result<ComplexMatrix> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("time increment {eps} must be positive")));
    }
    let now = family.qubit_map(t);
    let later = family.qubit_map(t + eps);
    let step = now.intermediate(&later).map_err(|e| match e {
        Error::SingularIntermediateMap { .. } => Error::SingularIntermediateMap { t },
        other => other,
    })?;
    Ok(step.choi_matrix())
}
