//! Spin-chain models and their dense Hamiltonians.
//!
//! All operators live in the computational (sigma^z product) basis: basis
//! state index `b` assigns spin `i` the sigma^z eigenvalue `+1` when bit `i`
//! of `b` is 0, and `-1` when it is 1. This makes `M_z` diagonal with entries
//! `N - 2*popcount(b)`. Energies are dimensionless (units of the spin-spin
//! coupling J).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Default cap on the number of sites for dense construction (4096 x 4096).
pub const DEFAULT_DENSE_CAP: usize = 12;

/// Hermiticity tolerance for caller-supplied matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// A family of Hamiltonians H(lambda) = H_ss - lambda * B.
#[derive(Debug, Clone)]
pub enum ModelKind {
    /// Transverse-field Ising ring: H_ss = -sum sigma^x_i sigma^x_{i+1},
    /// B = M_z, periodic boundary (site N+1 = site 1).
    TfimPeriodic,
    /// Commuting benchmark: H_ss = -sum sigma^z_i sigma^z_{i+1}, B = M_z,
    /// periodic boundary. Everything is diagonal, so [H_ss, M_z] = 0.
    ClassicalIsingLongitudinal,
    /// Caller-supplied Hermitian H_ss and quench operator B of equal
    /// dimension. `n_sites` is ignored; the dimension comes from the
    /// matrices themselves.
    CustomDense { h_ss: CMatrix, quench_op: CMatrix },
}

impl ModelKind {
    /// Check the model invariants for a chain of `n_sites` spins.
    pub fn validate(&self, n_sites: usize) -> Result<()> {
        match self {
            ModelKind::TfimPeriodic | ModelKind::ClassicalIsingLongitudinal => {
                if n_sites < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "spin-chain models need at least 2 sites, got {n_sites}"
                    )));
                }
            }
            ModelKind::CustomDense { h_ss, quench_op } => {
                if h_ss.nrows() != quench_op.nrows() {
                    return Err(Error::DimensionMismatch {
                        left: h_ss.nrows(),
                        right: quench_op.nrows(),
                    });
                }
                check_hermitian(h_ss, HERMITICITY_TOL)?;
                check_hermitian(quench_op, HERMITICITY_TOL)?;
            }
        }
        Ok(())
    }
}

/// A complete sudden-quench experiment definition.
#[derive(Debug, Clone)]
pub struct QuenchSpec {
    pub model: ModelKind,
    pub n_sites: usize,
    /// Inverse temperature in units of 1/J.
    pub beta: f64,
    pub lambda0: f64,
    pub lambda_tau: f64,
}

impl QuenchSpec {
    pub fn new(
        model: ModelKind,
        n_sites: usize,
        beta: f64,
        lambda0: f64,
        lambda_tau: f64,
    ) -> Result<Self> {
        model.validate(n_sites)?;
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be a finite positive number, got {beta}"
            )));
        }
        if !lambda0.is_finite() || !lambda_tau.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "fields must be finite, got lambda0 = {lambda0}, lambda_tau = {lambda_tau}"
            )));
        }
        Ok(Self {
            model,
            n_sites,
            beta,
            lambda0,
            lambda_tau,
        })
    }

    /// Quench amplitude (lambda_tau - lambda0). Zero is a valid identity quench.
    pub fn delta_lambda(&self) -> f64 {
        self.lambda_tau - self.lambda0
    }
}

fn check_cap(n_sites: usize, cap: usize) -> Result<usize> {
    if n_sites > cap {
        return Err(Error::CapExceeded {
            n_sites,
            dim: 1usize.checked_shl(n_sites as u32).unwrap_or(usize::MAX),
            cap,
        });
    }
    Ok(1usize << n_sites)
}

fn check_hermitian(a: &CMatrix, tol: f64) -> Result<()> {
    let mut dev = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    if dev > tol {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// Max-entry deviation from Hermiticity, exposed for tests and validators.
pub fn hermiticity_deviation(a: &CMatrix) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Build H(lambda) = H_ss - lambda * B for the given model, respecting `cap`.
pub fn build_hamiltonian_capped(
    model: &ModelKind,
    n_sites: usize,
    lambda: f64,
    cap: usize,
) -> Result<CMatrix> {
    model.validate(n_sites)?;
    match model {
        ModelKind::TfimPeriodic => {
            let dim = check_cap(n_sites, cap)?;
            let mut h = CMatrix::zeros(dim, dim);
            for b in 0..dim {
                // field term: -lambda * (N - 2 popcount)
                let mz = n_sites as f64 - 2.0 * (b.count_ones() as f64);
                h[(b, b)] -= Complex64::new(lambda * mz, 0.0);
                // sigma^x sigma^x bonds flip adjacent bit pairs
                for i in 0..n_sites {
                    let j = (i + 1) % n_sites;
                    let flipped = b ^ ((1 << i) | (1 << j));
                    h[(flipped, b)] -= Complex64::new(1.0, 0.0);
                }
            }
            Ok(h)
        }
        ModelKind::ClassicalIsingLongitudinal => {
            let dim = check_cap(n_sites, cap)?;
            let mut h = CMatrix::zeros(dim, dim);
            for b in 0..dim {
                let z = |i: usize| 1.0 - 2.0 * ((b >> i) & 1) as f64;
                let mut e = 0.0;
                for i in 0..n_sites {
                    e -= z(i) * z((i + 1) % n_sites);
                    e -= lambda * z(i);
                }
                h[(b, b)] = Complex64::new(e, 0.0);
            }
            Ok(h)
        }
        ModelKind::CustomDense { h_ss, quench_op } => {
            let dim = h_ss.nrows();
            if dim > (1usize << cap) {
                return Err(Error::CapExceeded {
                    n_sites,
                    dim,
                    cap,
                });
            }
            Ok(h_ss - quench_op.scale(lambda))
        }
    }
}

/// Build H(lambda) with the default dense cap.
pub fn build_hamiltonian(model: &ModelKind, n_sites: usize, lambda: f64) -> Result<CMatrix> {
    build_hamiltonian_capped(model, n_sites, lambda, DEFAULT_DENSE_CAP)
}

/// The quench operator B of the model (M_z for the built-in chains).
pub fn quench_operator(model: &ModelKind, n_sites: usize) -> Result<CMatrix> {
    match model {
        ModelKind::TfimPeriodic | ModelKind::ClassicalIsingLongitudinal => {
            magnetization_operator(n_sites)
        }
        ModelKind::CustomDense { quench_op, .. } => Ok(quench_op.clone()),
    }
}

/// M_z = sum_i sigma^z_i, diagonal in the computational basis.
pub fn magnetization_operator_capped(n_sites: usize, cap: usize) -> Result<CMatrix> {
    let dim = check_cap(n_sites, cap)?;
    let mut m = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        let mz = n_sites as f64 - 2.0 * (b.count_ones() as f64);
        m[(b, b)] = Complex64::new(mz, 0.0);
    }
    Ok(m)
}

/// M_z with the default dense cap.
pub fn magnetization_operator(n_sites: usize) -> Result<CMatrix> {
    magnetization_operator_capped(n_sites, DEFAULT_DENSE_CAP)
}

/// Max-entry norm of the commutator [A, B].
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    let c = a * b - b * a;
    c.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spectrum(h: &CMatrix) -> Vec<f64> {
        let mut ev: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// Independent 4x4 oracle for the two-site ring: the sigma^x sigma^x term
    /// couples {|00>,|11>} and {|01>,|10>} into separate 2x2 blocks.
    fn tfim_n2_spectrum(lambda: f64) -> Vec<f64> {
        let even = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(-2.0 * lambda, 0.0),
                Complex64::new(-2.0, 0.0),
                Complex64::new(-2.0, 0.0),
                Complex64::new(2.0 * lambda, 0.0),
            ],
        );
        let odd = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(-2.0, 0.0),
                Complex64::new(-2.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let mut ev: Vec<f64> = spectrum(&even).into_iter().chain(spectrum(&odd)).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    #[test]
    fn tfim_two_sites_matches_block_oracle() {
        for &lambda in &[0.0, 0.5, 1.0, 2.3] {
            let h = build_hamiltonian(&ModelKind::TfimPeriodic, 2, lambda).unwrap();
            let got = spectrum(&h);
            let want = tfim_n2_spectrum(lambda);
            let r = (lambda * lambda + 1.0).sqrt();
            let closed = [-2.0 * r, -2.0, 2.0, 2.0 * r];
            for i in 0..4 {
                assert_relative_eq!(got[i], want[i], epsilon = 1e-12);
                assert_relative_eq!(got[i], closed[i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn tfim_two_sites_zero_field_ground_is_doubly_degenerate() {
        let h = build_hamiltonian(&ModelKind::TfimPeriodic, 2, 0.0).unwrap();
        let ev = spectrum(&h);
        assert_relative_eq!(ev[0], -2.0, epsilon = 1e-12);
        assert_relative_eq!(ev[1], -2.0, epsilon = 1e-12);
    }

    #[test]
    fn classical_model_is_diagonal_at_any_field() {
        let h = build_hamiltonian(&ModelKind::ClassicalIsingLongitudinal, 4, 0.7).unwrap();
        for i in 0..h.nrows() {
            for j in 0..h.ncols() {
                if i != j {
                    assert_eq!(h[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn magnetization_diagonal_and_traceless() {
        let m1 = magnetization_operator(1).unwrap();
        assert_eq!(m1[(0, 0)].re, 1.0);
        assert_eq!(m1[(1, 1)].re, -1.0);

        let m2 = magnetization_operator(2).unwrap();
        let want = [2.0, 0.0, 0.0, -2.0];
        for (i, &w) in want.iter().enumerate() {
            assert_eq!(m2[(i, i)].re, w);
        }

        for n in 1..=6 {
            let m = magnetization_operator(n).unwrap();
            let tr: Complex64 = m.trace();
            assert_relative_eq!(tr.re, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn commutator_distinguishes_models() {
        let n = 4;
        let m = magnetization_operator(n).unwrap();
        let h_comm = build_hamiltonian(&ModelKind::ClassicalIsingLongitudinal, n, 0.3).unwrap();
        assert_eq!(commutator_norm(&h_comm, &m), 0.0);
        let h_tfim = build_hamiltonian(&ModelKind::TfimPeriodic, n, 0.3).unwrap();
        assert!(commutator_norm(&h_tfim, &m) > 0.1);
    }

    #[test]
    fn hamiltonian_is_affine_in_lambda() {
        for model in [ModelKind::TfimPeriodic, ModelKind::ClassicalIsingLongitudinal] {
            let n = 3;
            let lambda = 0.83;
            let h = build_hamiltonian(&model, n, lambda).unwrap();
            let h0 = build_hamiltonian(&model, n, 0.0).unwrap();
            let b = quench_operator(&model, n).unwrap();
            let diff = &h - (&h0 - b.scale(lambda));
            assert!(diff.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-14);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = build_hamiltonian_capped(&ModelKind::TfimPeriodic, 13, 1.0, 12).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
        let err = magnetization_operator_capped(13, 12).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn custom_dense_rejects_non_hermitian() {
        let h_ss = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.2, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        let model = ModelKind::CustomDense {
            h_ss,
            quench_op: DMatrix::identity(2, 2),
        };
        assert!(matches!(
            model.validate(1),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn quench_spec_validates_parameters() {
        assert!(QuenchSpec::new(ModelKind::TfimPeriodic, 2, 1.0, 0.5, 0.5).is_ok());
        assert!(QuenchSpec::new(ModelKind::TfimPeriodic, 2, 0.0, 0.5, 1.0).is_err());
        assert!(QuenchSpec::new(ModelKind::TfimPeriodic, 2, f64::INFINITY, 0.5, 1.0).is_err());
        assert!(QuenchSpec::new(ModelKind::TfimPeriodic, 1, 1.0, 0.5, 1.0).is_err());
        assert!(QuenchSpec::new(ModelKind::TfimPeriodic, 2, 1.0, 0.5, f64::NAN).is_err());
    }
}
