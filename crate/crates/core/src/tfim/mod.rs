//! Free-fermion engine for the periodic transverse-field Ising chain.
//!
//! The chain is worked in the even-parity (antiperiodic) sector with
//! pseudomomenta k = pi(2n-1)/N; each positive-k mode pairs with -k and the
//! quench acts inside the pair through the Bogoliubov angle difference.
//! All thermodynamics here refers to the fermionic even-sector Hamiltonian;
//! at finite N it differs from the full spin model, and the cross-validation
//! oracle represents the same fermionic Hamiltonian.

mod chi;
mod cumulant;
mod grid;

pub use chi::{chi_product, log_chi, log_partition_function};
pub use cumulant::{
    chi_tilde_curve, cumulants_analytic, magnetization_from_work, skewness_curve, variance_curve,
    SkewnessPoint,
};
pub use grid::{
    chi_grid, level_set, level_set_derivative, scaling_conjecture_report, ChiGrid, ScalingReport,
};

use crate::error::{Error, Result};

/// Positive-half momenta of the even-parity sector.
#[derive(Debug, Clone)]
pub struct ModeSet {
    n_sites: usize,
    momenta: Vec<f64>,
}

impl ModeSet {
    /// k = pi(2n-1)/N for n = 1..N/2; requires even N >= 2.
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites < 2 || n_sites % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "mode set needs an even number of sites >= 2, got {n_sites}"
            )));
        }
        let momenta = (1..=n_sites / 2)
            .map(|n| std::f64::consts::PI * (2 * n - 1) as f64 / n_sites as f64)
            .collect();
        Ok(Self { n_sites, momenta })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Positive momenta, ascending; the -k partners are implicit.
    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }
}

/// eps_k(lambda) = 2 sqrt(sin^2 k + (lambda - cos k)^2).
pub fn dispersion(k: f64, lambda: f64) -> f64 {
    let s = k.sin();
    let d = lambda - k.cos();
    2.0 * (s * s + d * d).sqrt()
}

/// Bogoliubov angle phi_k with cos = (lambda - cos k)/..., sin = sin k/...
pub fn bogoliubov_angle(k: f64, lambda: f64) -> f64 {
    k.sin().atan2(lambda - k.cos())
}

/// Delta_k = phi_k(lambda_tau) - phi_k(lambda0).
pub fn delta_angle(k: f64, lambda0: f64, lambda_tau: f64) -> f64 {
    bogoliubov_angle(k, lambda_tau) - bogoliubov_angle(k, lambda0)
}

/// Pre/post-quench single-mode data.
#[derive(Debug, Clone, Copy)]
pub struct ModeData {
    pub k: f64,
    pub eps0: f64,
    pub eps_tau: f64,
    pub delta: f64,
}

pub fn mode_data(k: f64, lambda0: f64, lambda_tau: f64) -> Result<ModeData> {
    let eps0 = dispersion(k, lambda0);
    let eps_tau = dispersion(k, lambda_tau);
    if eps0 < 1e-14 {
        return Err(Error::GaplessMode {
            k,
            lambda: lambda0,
            epsilon: eps0,
        });
    }
    if eps_tau < 1e-14 {
        return Err(Error::GaplessMode {
            k,
            lambda: lambda_tau,
            epsilon: eps_tau,
        });
    }
    Ok(ModeData {
        k,
        eps0,
        eps_tau,
        delta: delta_angle(k, lambda0, lambda_tau),
    })
}

/// The five (log-weight, work) atoms of one (k, -k) pair.
///
/// The mode factor of the characteristic-function product expands into five
/// exponentials: pair de-excitation/excitation from the doubly-empty and
/// doubly-occupied states (weights e^{+-beta eps0} cos^2, sin^2) plus the two
/// quench-invariant single-occupancy states (weight 2, zero work).
#[derive(Debug, Clone)]
pub struct ModeWorkAtoms {
    log_weights: Vec<f64>,
    works: Vec<f64>,
    log_zk: f64,
}

impl ModeWorkAtoms {
    pub fn new(mode: &ModeData, beta: f64) -> Self {
        let half = 0.5 * mode.delta;
        let c2 = half.cos().powi(2);
        let s2 = half.sin().powi(2);
        let (e0, et) = (mode.eps0, mode.eps_tau);
        let mut log_weights = Vec::with_capacity(5);
        let mut works = Vec::with_capacity(5);
        let mut push = |lw: f64, w: f64| {
            if lw.is_finite() {
                log_weights.push(lw);
                works.push(w);
            }
        };
        push(beta * e0 + c2.ln(), e0 - et);
        push(beta * e0 + s2.ln(), e0 + et);
        push(-beta * e0 + c2.ln(), -e0 + et);
        push(-beta * e0 + s2.ln(), -e0 - et);
        push(2.0f64.ln(), 0.0);
        // Z_k = e^{beta eps0} + e^{-beta eps0} + 2 = (2 cosh(beta eps0 / 2))^2
        let log_zk = 2.0 * crate::numerics::ln_2cosh(0.5 * beta * e0);
        Self {
            log_weights,
            works,
            log_zk,
        }
    }

    pub fn log_zk(&self) -> f64 {
        self.log_zk
    }

    /// Normalized (probability, work) pairs.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        self.log_weights
            .iter()
            .zip(&self.works)
            .map(|(&lw, &w)| ((lw - self.log_zk).exp(), w))
            .collect()
    }

    pub(crate) fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub(crate) fn works(&self) -> &[f64] {
        &self.works
    }
}
