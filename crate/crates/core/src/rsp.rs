//! Bell-diagonal resources, Pauli correlation matrices and the remote state
//! preparation fidelity.

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pauli, tensor_product, ComplexMatrix, DensityMatrix};

const PSD_SLACK: f64 = 4e-12;

/// Coefficients `(c1, c2, c3)` of `(1/4)(I + sum_j c_j sigma_j (x) sigma_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BellDiagonalParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let params = Self { c1, c2, c3 };
        params.validate()?;
        Ok(params)
    }

    /// Four times the Bell-basis eigenvalues, labelled by their eigenvector.
    pub fn scaled_eigenvalues(&self) -> [(f64, &'static str); 4] {
        let Self { c1, c2, c3 } = *self;
        [
            (1.0 - c1 - c2 - c3, "1 - c1 - c2 - c3"),
            (1.0 - c1 + c2 + c3, "1 - c1 + c2 + c3"),
            (1.0 + c1 - c2 + c3, "1 + c1 - c2 + c3"),
            (1.0 + c1 + c2 - c3, "1 + c1 + c2 - c3"),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for c in [self.c1, self.c2, self.c3] {
            if !c.is_finite() || c.abs() > 1.0 + 1e-12 {
                return Err(Error::InvalidParameter(format!("Bell-diagonal coefficient {c} outside [-1, 1]")));
            }
        }
        for (value, combination) in self.scaled_eigenvalues() {
            if value < -PSD_SLACK {
                return Err(Error::NotPositive { eigenvalue: value / 4.0, combination });
            }
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }
}

/// `(1/4)(I (x) I + sum_j c_j sigma_j (x) sigma_j)`.
pub fn bell_diagonal(params: &BellDiagonalParams) -> DensityMatrix {
    let mut m = ComplexMatrix::identity(4);
    for (axis, &c) in params.as_array().iter().enumerate() {
        let term = tensor_product(&pauli(axis), &pauli(axis)).scale(Complex64::new(c, 0.0));
        m = &m + &term;
    }
    DensityMatrix::new_unchecked(m.scale(Complex64::new(0.25, 0.0)))
}

/// Real 3x3 table `c_{jk} = tr[rho sigma_j (x) sigma_k]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationMatrix([[f64; 3]; 3]);

impl CorrelationMatrix {
    pub fn new(entries: [[f64; 3]; 3]) -> Result<Self> {
        for row in &entries {
            for &v in row {
                if !v.is_finite() || v.abs() > 1.0 + 1e-12 {
                    return Err(Error::InvalidParameter(format!("correlation entry {v} outside [-1, 1]")));
                }
            }
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.0
    }

    fn as_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.0[i][j])
    }

    /// Eigenvalues of `C^T C`, ascending.
    pub fn gram_eigenvalues(&self) -> [f64; 3] {
        let c = self.as_matrix();
        let mut ev: Vec<f64> = (c.transpose() * c).symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2]]
    }
}

pub fn correlation_matrix(rho: &DensityMatrix) -> CorrelationMatrix {
    let paulis: Vec<ComplexMatrix> = (0..3).map(pauli).collect();
    let mut entries = [[0.0; 3]; 3];
    for (j, sj) in paulis.iter().enumerate() {
        for (k, sk) in paulis.iter().enumerate() {
            let op = tensor_product(sj, sk);
            entries[j][k] = (rho.matrix() * &op).trace().re;
        }
    }
    CorrelationMatrix(entries)
}

/// Mean of the two smallest eigenvalues of `C^T C`.
pub fn rsp_fidelity(c: &CorrelationMatrix) -> f64 {
    let ev = c.gram_eigenvalues();
    (0.5 * (ev[0] + ev[1])).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::apply_dephasing;

    #[test]
    fn bell_diagonal_cases() {
        let zero = bell_diagonal(&BellDiagonalParams::new(0.0, 0.0, 0.0).unwrap());
        assert!(zero.matrix().max_abs_diff(DensityMatrix::maximally_mixed(4).matrix()) < 1e-16);

        let bell = bell_diagonal(&BellDiagonalParams::new(1.0, -1.0, 1.0).unwrap());
        let ev = DensityMatrix::new(bell.into_matrix()).unwrap().eigenvalues();
        assert!(ev[..3].iter().all(|v| v.abs() < 1e-15));
        assert!((ev[3] - 1.0).abs() < 1e-15);

        match BellDiagonalParams::new(1.0, 1.0, 1.0) {
            Err(Error::NotPositive { eigenvalue, .. }) => assert!((eigenvalue + 0.5).abs() < 1e-15),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn correlation_round_trip() {
        let params = BellDiagonalParams::new(-0.5, 0.4, 0.8).unwrap();
        let c = correlation_matrix(&bell_diagonal(&params));
        let expected = [[-0.5, 0.0, 0.0], [0.0, 0.4, 0.0], [0.0, 0.0, 0.8]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((c.entries()[i][j] - expected[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn dephased_correlation_table() {
        let (c1, c2, c3) = (-0.5, 0.4, 0.8);
        let params = BellDiagonalParams::new(c1, c2, c3).unwrap();
        let (x, y) = (0.3, -0.55);
        let out = apply_dephasing(&bell_diagonal(&params), Complex64::new(x, y)).unwrap();
        let c = correlation_matrix(&out);
        let expected = [[c1 * x, c2 * y, 0.0], [-c1 * y, c2 * x, 0.0], [0.0, 0.0, c3]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((c.entries()[i][j] - expected[i][j]).abs() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn fidelity_values() {
        let bell = BellDiagonalParams::new(1.0, -1.0, 1.0).unwrap();
        let c = correlation_matrix(&bell_diagonal(&bell));
        assert!((rsp_fidelity(&c) - 1.0).abs() < 1e-12);

        let half = correlation_matrix(&apply_dephasing(&bell_diagonal(&bell), Complex64::new(0.5, 0.0)).unwrap());
        let ev = half.gram_eigenvalues();
        assert!((ev[0] - 0.25).abs() < 1e-12 && (ev[1] - 0.25).abs() < 1e-12 && (ev[2] - 1.0).abs() < 1e-12);
        assert!((rsp_fidelity(&half) - 0.25).abs() < 1e-12);

        let mixed = BellDiagonalParams::new(-0.5, 0.4, 0.8).unwrap();
        for &k in &[0.0, 0.3, 0.9, 1.0] {
            let out = apply_dephasing(&bell_diagonal(&mixed), Complex64::new(k, 0.0)).unwrap();
            assert!((rsp_fidelity(&correlation_matrix(&out)) - 0.205 * k * k).abs() < 1e-12);
        }
    }

    #[test]
    fn correlation_matrix_validation() {
        assert!(CorrelationMatrix::new([[1.5, 0.0, 0.0], [0.0; 3], [0.0; 3]]).is_err());
        assert!(CorrelationMatrix::new([[0.5, 0.0, 0.0], [0.0; 3], [0.0; 3]]).is_ok());
    }
}
