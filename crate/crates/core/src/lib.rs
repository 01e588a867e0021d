//! Controllable non-Markovian two-qubit open systems.
//!
//! Two channel families act on qubit `a` of a two-qubit register `ab`
//! (qubit `b` is noiseless):
//!
//! * pure dephasing driven by a two-peak Gaussian frequency spectrum,
//!   parameterized by the complex decoherence function `kappa(tau)` of the
//!   reduced time `tau = (n_V - n_H) t`;
//! * amplitude damping driven by a resonant Lorentzian reservoir,
//!   parameterized by the real decoherence function `chi(t)`.
//!
//! On top of these the crate computes four non-Markovianity measures
//! (trace-distance backflow, divisibility, negativity backflow and
//! mutual-information backflow), the remote state preparation fidelity of
//! Bell-diagonal resources, and deterministic CSV data sets for the figure
//! runners in [`experiment`].
//!
//! # Conventions
//!
//! * Tensor products put the first factor on the slow (outer) index, so for
//!   `ab` the basis order is `|00>, |01>, |10>, |11>` with `a` first. Choi
//!   states are ordered `(system, ancilla)`.
//! * `|0> = |H>` is the ground state, `|1> = |V>` the excited state.
//! * Pauli matrices are ordered `(sigma_x, sigma_y, sigma_z)`.

pub mod channels;
pub mod decoherence;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod measures;
pub mod quadrature;
pub mod rsp;
pub mod sampling;

pub use channels::{ChannelFamily, ChoiState, QubitMap};
pub use decoherence::{DephasingSpec, LorentzSpec};
pub use error::{Error, Result};
pub use linalg::{Bipartition, ComplexMatrix, DensityMatrix, PureState, Subsystem};
pub use measures::{MeasureKind, MeasureReport, StatePair, TimeWindow, Trajectory};
pub use rsp::{BellDiagonalParams, CorrelationMatrix};

/// Library version recorded in experiment metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
