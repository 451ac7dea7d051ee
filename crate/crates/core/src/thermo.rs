//! Free-energy differences, fluctuation-theorem residuals, cumulant series
//! for Delta F and the non-equilibrium lag, and the relative entropy.

use num_complex::Complex64;

use crate::cumulants::CumulantSet;
use crate::error::{Error, Result};
use crate::spectral::DensityState;
use crate::work::WorkStatistics;

/// Delta F = -(log Z_tau - log Z_0) / beta.
pub fn free_energy_diff(log_z0: f64, log_z_tau: f64, beta: f64) -> f64 {
    -(log_z_tau - log_z0) / beta
}

/// Jarzynski residual for a Gibbs-initial transition table.
#[derive(Debug, Clone, Copy)]
pub struct JarzynskiReport {
    pub delta_f: f64,
    /// log chi(i beta); real because every phase vanishes on the imaginary axis.
    pub log_chi_ibeta: f64,
    /// |chi(i beta) e^{beta Delta F} - 1|, formed in the log domain so
    /// beta = 100 does not overflow.
    pub residual: f64,
}

pub fn jarzynski_check(
    ws: &WorkStatistics,
    log_z0: f64,
    log_z_tau: f64,
    beta: f64,
) -> JarzynskiReport {
    let delta_f = free_energy_diff(log_z0, log_z_tau, beta);
    let log_chi = ws.log_chi(Complex64::new(0.0, beta));
    let residual = ((log_chi.re + beta * delta_f).exp() - 1.0).abs();
    JarzynskiReport {
        delta_f,
        log_chi_ibeta: log_chi.re,
        residual,
    }
}

/// Partial sums of the cumulant expansions of Delta F and L_irr next to the
/// directly computed targets.
#[derive(Debug, Clone)]
pub struct CumulantSeriesSums {
    /// S_m = sum_{n=1}^m (-beta)^{n-1}/n! K_n
    pub delta_f_partials: Vec<f64>,
    /// S_m = sum_{n=2}^m (-beta)^n/n! K_n  (S_1 = 0)
    pub lag_partials: Vec<f64>,
    pub delta_f_exact: f64,
    pub lag_exact: f64,
}

/// Evaluate both series through the available cumulant order.
///
/// `delta_f_exact` comes from the partition functions and `mean_work` from
/// the first moment; the exact lag is beta (<W> - Delta F).
pub fn cumulant_series_sums(
    k: &CumulantSet,
    beta: f64,
    delta_f_exact: f64,
    mean_work: f64,
) -> CumulantSeriesSums {
    let n_max = k.max_order();
    let mut delta_f_partials = Vec::with_capacity(n_max);
    let mut lag_partials = Vec::with_capacity(n_max);
    let mut acc_f = 0.0;
    let mut acc_l = 0.0;
    // (-beta)^{n-1}/n! built up incrementally
    let mut coef = 1.0; // n = 1: (-beta)^0 / 1!
    for n in 1..=n_max {
        acc_f += coef * k.get(n);
        if n >= 2 {
            acc_l += coef * (-beta) * k.get(n);
        }
        delta_f_partials.push(acc_f);
        lag_partials.push(acc_l);
        coef *= -beta / (n + 1) as f64;
    }
    CumulantSeriesSums {
        delta_f_partials,
        lag_partials,
        delta_f_exact,
        lag_exact: beta * (mean_work - delta_f_exact),
    }
}

/// Relative entropy Tr[rho log rho - rho log sigma] via eigendecompositions.
///
/// States carrying exact log-domain eigendata (Gibbs states) are consumed in
/// that form; otherwise the dense matrices are diagonalized, which limits
/// the usable range to eigenvalues representable above ~1e-300 and accurate
/// to the solver floor. Weight of `rho` on near-null eigenvectors of `sigma`
/// raises `SupportViolation`.
pub fn relative_entropy(rho: &DensityState, sigma: &DensityState) -> Result<f64> {
    if rho.dimension() != sigma.dimension() {
        return Err(Error::DimensionMismatch {
            left: rho.dimension(),
            right: sigma.dimension(),
        });
    }
    const EIG_FLOOR: f64 = 1e-300;
    const SUPPORT_TOL: f64 = 1e-12;

    // Tr[rho log rho]
    let s_rho = match rho.spectrum() {
        Some(sp) => sp
            .log_weights
            .iter()
            .map(|&lw| lw.exp() * lw)
            .filter(|t| t.is_finite())
            .sum(),
        None => {
            let eig = rho
                .matrix()
                .clone()
                .try_symmetric_eigen(f64::EPSILON, 0)
                .ok_or(Error::ConvergenceFailure)?;
            let mut acc = 0.0;
            for &p in eig.eigenvalues.iter() {
                if p > EIG_FLOOR {
                    acc += p * p.ln();
                }
            }
            acc
        }
    };

    // Tr[rho log sigma] = sum_a q_a log s_a with q_a = <s_a|rho|s_a>
    let mut s_cross = 0.0;
    match sigma.spectrum() {
        Some(sp) => {
            for (a, &lw) in sp.log_weights.iter().enumerate() {
                let va = sp.basis.column(a);
                let q = (va.adjoint() * rho.matrix() * va)[(0, 0)].re.max(0.0);
                if lw.is_finite() {
                    s_cross += q * lw;
                } else if q > SUPPORT_TOL {
                    return Err(Error::SupportViolation { weight: q });
                }
            }
        }
        None => {
            let eig = sigma
                .matrix()
                .clone()
                .try_symmetric_eigen(f64::EPSILON, 0)
                .ok_or(Error::ConvergenceFailure)?;
            for (a, &s) in eig.eigenvalues.iter().enumerate() {
                let va = eig.eigenvectors.column(a);
                let q = (va.adjoint() * rho.matrix() * va)[(0, 0)].re.max(0.0);
                if s > EIG_FLOOR {
                    s_cross += q * s.ln();
                } else if q > SUPPORT_TOL {
                    return Err(Error::SupportViolation { weight: q });
                }
            }
        }
    }
    Ok(s_rho - s_cross)
}
