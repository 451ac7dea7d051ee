//! Magnetic susceptibilities of thermal states and the non-commutativity
//! correction to the fluctuation-dissipation relation.
//!
//! chi_M = d<M_z>/d lambda0 splits as beta Var(M_z) + chi~_M; the correction
//! is computed two independent ways (finite difference minus variance, and
//! the commutator power series) so each can serve as the other's oracle.

use crate::error::{Error, Result};
use crate::model::{build_hamiltonian_capped, quench_operator, CMatrix, ModelKind};
use crate::numerics::{finite_diff, FdEstimate};
use crate::spectral::{eigendecompose_auto, gibbs_state};
use crate::work::observable_mean_var;

/// Default finite-difference steps per derivative order (j = 1, 2, 3).
pub const DEFAULT_FD_STEPS: [f64; 3] = [1e-3, 1e-2, 1e-2];

/// <M_z> in the Gibbs state of H(lambda).
pub fn mean_magnetization_gibbs(
    model: &ModelKind,
    n_sites: usize,
    lambda: f64,
    beta: f64,
    cap: usize,
) -> Result<f64> {
    let h = build_hamiltonian_capped(model, n_sites, lambda, cap)?;
    let spec = eigendecompose_auto(&h)?;
    let rho = gibbs_state(&spec, beta)?.state;
    let m = quench_operator(model, n_sites)?;
    Ok(observable_mean_var(&rho, &m)?.0)
}

/// (<M_z>, Var M_z) in the Gibbs state of H(lambda).
pub fn magnetization_mean_var_gibbs(
    model: &ModelKind,
    n_sites: usize,
    lambda: f64,
    beta: f64,
    cap: usize,
) -> Result<(f64, f64)> {
    let h = build_hamiltonian_capped(model, n_sites, lambda, cap)?;
    let spec = eigendecompose_auto(&h)?;
    let rho = gibbs_state(&spec, beta)?.state;
    let m = quench_operator(model, n_sites)?;
    observable_mean_var(&rho, &m)
}

/// j-th order susceptibility chi_M^{(j)} = (1/j!) d^j <M_z>/d lambda^j by
/// Richardson-extrapolated central differences (j in {1, 2, 3}).
pub fn susceptibility_order_j(
    model: &ModelKind,
    n_sites: usize,
    lambda0: f64,
    beta: f64,
    j: usize,
    h: f64,
    cap: usize,
) -> Result<FdEstimate> {
    if !(1..=3).contains(&j) {
        return Err(Error::InvalidParameter(format!(
            "susceptibility order must be 1, 2 or 3, got {j}"
        )));
    }
    let mut failure: Option<Error> = None;
    let fd = finite_diff(
        |l| match mean_magnetization_gibbs(model, n_sites, l, beta, cap) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        },
        lambda0,
        j,
        h,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let mut fd = fd?;
    let factorial: f64 = (1..=j).map(|i| i as f64).product();
    fd.value /= factorial;
    fd.error_estimate /= factorial;
    Ok(fd)
}

/// chi~_M = chi_M(finite difference) - beta Var(M_z).
pub fn chi_tilde_difference(
    model: &ModelKind,
    n_sites: usize,
    lambda0: f64,
    beta: f64,
    h: f64,
    cap: usize,
) -> Result<f64> {
    let chi_m = susceptibility_order_j(model, n_sites, lambda0, beta, 1, h, cap)?.value;
    let (_, var) = magnetization_mean_var_gibbs(model, n_sites, lambda0, beta, cap)?;
    Ok(chi_m - beta * var)
}

/// Options for the commutator power series.
#[derive(Debug, Clone, Copy)]
pub struct SeriesOptions {
    /// Hard cap on the summation order.
    pub n_cut: usize,
    /// Stop once the last term falls below this fraction of the partial sum.
    pub rel_tol: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            n_cut: 200,
            rel_tol: 1e-8,
        }
    }
}

/// Result of the truncated commutator series.
#[derive(Debug, Clone, Copy)]
pub struct SeriesResult {
    pub value: f64,
    pub n_terms: usize,
    /// |last term| / |partial sum|.
    pub remainder_estimate: f64,
}

/// chi~_M from the double commutator series
/// (1/Z) Tr sum_{n>=1} sum_{k=0}^{n-1} ((-beta)^n/n!) [H^k, M] M H^{n-1-k},
/// with H = H(lambda0).
///
/// Each term is evaluated exactly in the eigenbasis of H, where
/// Tr[[H^k, M] M H^{n-1-k}] = sum_{ab} |M_ab|^2 (n E_a^{n-1} - g_n(a,b))
/// with g_n the geometric sum over split powers. The spectrum is centered
/// first; the limit is invariant under the shift while the intermediate
/// terms stay ~e^{beta rho} instead of e^{2 beta rho}.
pub fn chi_tilde_series(
    model: &ModelKind,
    n_sites: usize,
    lambda0: f64,
    beta: f64,
    opts: SeriesOptions,
    cap: usize,
) -> Result<SeriesResult> {
    let h = build_hamiltonian_capped(model, n_sites, lambda0, cap)?;
    let m = quench_operator(model, n_sites)?;
    chi_tilde_series_dense(&h, &m, beta, opts)
}

/// Series form for explicit H(lambda0) and M matrices.
pub fn chi_tilde_series_dense(
    h: &CMatrix,
    m: &CMatrix,
    beta: f64,
    opts: SeriesOptions,
) -> Result<SeriesResult> {
    let spec = eigendecompose_auto(h)?;
    let dim = spec.dimension();
    // energies per eigenvector column, centered
    let mut energy = vec![0.0f64; dim];
    for n in 0..spec.num_levels() {
        for c in spec.group(n) {
            energy[c] = spec.levels()[n];
        }
    }
    let (e_min, e_max) = energy
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
            (lo.min(e), hi.max(e))
        });
    let center = 0.5 * (e_min + e_max);
    for e in energy.iter_mut() {
        *e -= center;
    }
    let radius = energy.iter().fold(0.0f64, |a, &e| a.max(e.abs()));
    if beta * radius > 250.0 {
        // the alternating terms would exceed f64 range before they decay
        return Err(Error::TruncationNotConverged {
            n_cut: 0,
            remainder: f64::INFINITY,
        });
    }

    let v = spec.basis();
    let m_eig = v.adjoint() * m * v;
    // |M_ab|^2 for all ordered pairs, plus (M^2)_aa = sum_b |M_ab|^2
    let mut pair_w = vec![0.0f64; dim * dim];
    let mut m2_diag = vec![0.0f64; dim];
    for a in 0..dim {
        for b in 0..dim {
            let w = m_eig[(a, b)].norm_sqr();
            pair_w[a * dim + b] = w;
            m2_diag[a] += w;
        }
    }

    // running E_a^{n-1} and the per-pair geometric sums g_n(a,b)
    let mut pow_a = vec![1.0f64; dim];
    let mut geom = vec![1.0f64; dim * dim];
    let mut coef = 1.0f64; // (-beta)^n / n!
    let mut sum = 0.0f64;
    let mut last_terms = [f64::INFINITY; 3];
    let mut n_terms = 0usize;

    for n in 1..=opts.n_cut {
        coef *= -beta / n as f64;
        let mut t = 0.0f64;
        for a in 0..dim {
            t += n as f64 * m2_diag[a] * pow_a[a];
        }
        for a in 0..dim {
            let row = a * dim;
            let mut acc = 0.0f64;
            for b in 0..dim {
                acc += pair_w[row + b] * geom[row + b];
            }
            t -= acc;
        }
        let term = coef * t;
        sum += term;
        n_terms = n;
        last_terms.rotate_left(1);
        last_terms[2] = term.abs();

        if !sum.is_finite() {
            return Err(Error::TruncationNotConverged {
                n_cut: n,
                remainder: f64::INFINITY,
            });
        }
        let scale = sum.abs().max(1e-300);
        if n >= 4 && last_terms.iter().all(|&t| t <= opts.rel_tol * scale) {
            break;
        }

        // advance to n+1: pow_a -> E_a^n, geom -> E_b*geom + E_a^n
        for a in 0..dim {
            pow_a[a] *= energy[a];
        }
        for a in 0..dim {
            let row = a * dim;
            for b in 0..dim {
                geom[row + b] = energy[b] * geom[row + b] + pow_a[a];
            }
        }
    }

    // Z over the shifted spectrum (the shift cancels between numerator and Z)
    let z: f64 = energy.iter().map(|&e| (-beta * e).exp()).sum();
    let value = sum / z;
    let remainder_estimate = last_terms[2] / sum.abs().max(1e-300);
    if remainder_estimate > opts.rel_tol.max(1e-12) * 10.0 && n_terms == opts.n_cut {
        return Err(Error::TruncationNotConverged {
            n_cut: n_terms,
            remainder: remainder_estimate,
        });
    }
    Ok(SeriesResult {
        value,
        n_terms,
        remainder_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_DENSE_CAP;
    use crate::work::mag_cumulants;
    use approx::assert_relative_eq;

    const CAP: usize = DEFAULT_DENSE_CAP;

    #[test]
    fn first_susceptibility_is_beta_variance_in_commuting_model() {
        let model = ModelKind::ClassicalIsingLongitudinal;
        let (n, l0, beta) = (5, 0.4, 1.2);
        let chi = susceptibility_order_j(&model, n, l0, beta, 1, 1e-3, CAP).unwrap();
        let (_, var) = magnetization_mean_var_gibbs(&model, n, l0, beta, CAP).unwrap();
        assert_relative_eq!(chi.value, beta * var, max_relative = 1e-7);
    }

    #[test]
    fn higher_susceptibilities_match_cumulant_theorem() {
        // commuting benchmark: j! chi^{(j)} = beta^j C_{j+1}
        let model = ModelKind::ClassicalIsingLongitudinal;
        let (n, l0, beta) = (5usize, 0.35, 0.8);
        let h = build_hamiltonian_capped(&model, n, l0, CAP).unwrap();
        let spec = eigendecompose_auto(&h).unwrap();
        let rho = gibbs_state(&spec, beta).unwrap().state;
        let m = quench_operator(&model, n).unwrap();
        let c = mag_cumulants(&rho, &m, 4).unwrap();
        for j in 1..=3usize {
            let step = DEFAULT_FD_STEPS[j - 1];
            let chi = susceptibility_order_j(&model, n, l0, beta, j, step, CAP).unwrap();
            let factorial: f64 = (1..=j).map(|i| i as f64).product();
            let want = beta.powi(j as i32) * c.get(j + 1) / factorial;
            assert_relative_eq!(chi.value, want, max_relative = 1e-4);
        }
    }

    #[test]
    fn susceptibility_flattens_at_infinite_temperature() {
        let model = ModelKind::TfimPeriodic;
        let chi = susceptibility_order_j(&model, 4, 0.8, 1e-6, 1, 1e-3, CAP).unwrap();
        assert!(chi.value.abs() < 1e-5, "chi = {}", chi.value);
    }

    #[test]
    fn chi_tilde_vanishes_for_commuting_model() {
        let model = ModelKind::ClassicalIsingLongitudinal;
        let (n, l0, beta) = (6, 0.7, 1.0);
        let diff = chi_tilde_difference(&model, n, l0, beta, 1e-3, CAP).unwrap();
        assert!(diff.abs() < 1e-10, "difference form gave {diff}");
        let series = chi_tilde_series(&model, n, l0, beta, SeriesOptions::default(), CAP).unwrap();
        assert!(series.value.abs() < 1e-12, "series form gave {}", series.value);
    }

    #[test]
    fn chi_tilde_series_and_difference_agree_for_tfim() {
        let model = ModelKind::TfimPeriodic;
        for &(n, beta) in &[(4usize, 1.0), (6, 2.0)] {
            for &l0 in &[0.3, 0.9, 1.5] {
                let diff = chi_tilde_difference(&model, n, l0, beta, 1e-3, CAP).unwrap();
                let series =
                    chi_tilde_series(&model, n, l0, beta, SeriesOptions::default(), CAP).unwrap();
                assert_relative_eq!(series.value, diff, max_relative = 1e-3);
                assert!(series.value <= 0.0, "chi~ must be nonpositive");
            }
        }
    }

    #[test]
    fn series_reports_truncation_failure_on_tiny_cap() {
        let model = ModelKind::TfimPeriodic;
        let opts = SeriesOptions {
            n_cut: 3,
            rel_tol: 1e-8,
        };
        let err = chi_tilde_series(&model, 4, 0.9, 2.0, opts, CAP);
        assert!(matches!(err, Err(Error::TruncationNotConverged { .. })));
    }
}
