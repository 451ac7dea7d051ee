//! Validity bound on the switching time of a nominally sudden quench.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::model::CMatrix;
use crate::spectral::SpectralData;

/// Matrix elements below this are treated as exactly zero.
pub const ELEMENT_TOL: f64 = 1e-14;

/// Outcome of the perturbative sudden-quench criterion for a linear ramp.
#[derive(Debug, Clone)]
pub struct SuddenQuenchBound {
    /// Upper bound on the ramp time, `None` when no transition channel exists
    /// (all relevant matrix elements vanish or lambda_tau = 0).
    pub tau_max: Option<f64>,
    /// max_n of the per-level transition elements.
    pub max_element: f64,
    /// |P_n B |i>| per post-quench level, for callers that want the full vector.
    pub per_level: Vec<f64>,
}

/// tau << 2 / (|lambda_tau| max_n |<n(lambda_tau)|B|i>|) for an initial
/// eigenstate |i> of the pre-quench Hamiltonian.
///
/// The component of B|i> along |i> itself produces no state change and is
/// removed before the per-level amplitudes are taken; degenerate levels
/// contribute through the norm of the projected vector.
pub fn sudden_quench_bound(
    spec_tau: &SpectralData,
    b: &CMatrix,
    initial: &DVector<Complex64>,
    lambda_tau: f64,
) -> SuddenQuenchBound {
    let bi = b * initial;
    let diag = (initial.adjoint() * &bi)[(0, 0)];
    let bi = bi - initial * diag;

    let v = spec_tau.basis();
    let amps = v.adjoint() * &bi;
    let mut per_level = Vec::with_capacity(spec_tau.num_levels());
    for n in 0..spec_tau.num_levels() {
        let norm_sq: f64 = spec_tau.group(n).map(|c| amps[c].norm_sqr()).sum();
        per_level.push(norm_sq.sqrt());
    }
    let max_element = per_level.iter().copied().fold(0.0, f64::max);
    let denom = lambda_tau.abs() * max_element;
    let tau_max = if max_element < ELEMENT_TOL || denom < ELEMENT_TOL {
        None
    } else {
        Some(2.0 / denom)
    };
    SuddenQuenchBound {
        tau_max,
        max_element,
        per_level,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_hamiltonian, magnetization_operator, ModelKind};
    use crate::spectral::eigendecompose_auto;
    use crate::work::ground_state_vector;

    #[test]
    fn commuting_model_from_an_eigenstate_is_unbounded() {
        // B = M_z commutes with H(lambda_tau) and the initial state is a
        // computational basis state, hence an eigenstate of B: no channel.
        let n = 3;
        let h_tau = build_hamiltonian(&ModelKind::ClassicalIsingLongitudinal, n, 1.5).unwrap();
        let spec_tau = eigendecompose_auto(&h_tau).unwrap();
        let h0 = build_hamiltonian(&ModelKind::ClassicalIsingLongitudinal, n, 0.5).unwrap();
        let spec0 = eigendecompose_auto(&h0).unwrap();
        let psi = ground_state_vector(&spec0);
        let b = magnetization_operator(n).unwrap();
        let bound = sudden_quench_bound(&spec_tau, &b, &psi, 1.5);
        assert!(bound.tau_max.is_none(), "bound = {:?}", bound.tau_max);
        assert!(bound.max_element < 1e-10);
    }

    #[test]
    fn zero_final_field_is_unbounded() {
        let n = 4;
        let h_tau = build_hamiltonian(&ModelKind::TfimPeriodic, n, 0.0).unwrap();
        let spec_tau = eigendecompose_auto(&h_tau).unwrap();
        let h0 = build_hamiltonian(&ModelKind::TfimPeriodic, n, 0.5).unwrap();
        let spec0 = eigendecompose_auto(&h0).unwrap();
        let psi = ground_state_vector(&spec0);
        let b = magnetization_operator(n).unwrap();
        let bound = sudden_quench_bound(&spec_tau, &b, &psi, 0.0);
        assert!(bound.tau_max.is_none());
    }

    #[test]
    fn tfim_ground_state_gives_finite_bound() {
        let n = 4;
        let h_tau = build_hamiltonian(&ModelKind::TfimPeriodic, n, 1.5).unwrap();
        let spec_tau = eigendecompose_auto(&h_tau).unwrap();
        let h0 = build_hamiltonian(&ModelKind::TfimPeriodic, n, 0.5).unwrap();
        let spec0 = eigendecompose_auto(&h0).unwrap();
        let psi = ground_state_vector(&spec0);
        let b = magnetization_operator(n).unwrap();
        let bound = sudden_quench_bound(&spec_tau, &b, &psi, 1.5);
        let tau = bound.tau_max.expect("transition channel exists");
        assert!(tau.is_finite() && tau > 0.0);
        assert_eq!(bound.per_level.len(), spec_tau.num_levels());
        // the max is attained by one of the reported levels
        let max = bound.per_level.iter().copied().fold(0.0f64, f64::max);
        assert!((max - bound.max_element).abs() < 1e-15);
    }
}
