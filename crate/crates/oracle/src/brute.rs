//! Literal double-loop enumeration of the two-measurement work distribution.
//!
//! This path deliberately shares no code with the engine: it runs its own
//! eigensolves, groups degenerate eigenvalues itself, and forms the joint
//! probabilities through explicit dense projector products
//! Tr[P_m P_n rho P_n] exactly as written.

use nalgebra::DMatrix;
use num_complex::Complex64;
use workstats_core::error::{Error, Result};
use workstats_core::spectral::DensityState;
use workstats_core::work::WorkDistribution;

type CMatrix = DMatrix<Complex64>;

struct Levels {
    values: Vec<f64>,
    projectors: Vec<CMatrix>,
}

fn decompose(h: &CMatrix, group_tol: f64) -> Result<Levels> {
    let dim = h.nrows();
    let eig = h
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::ConvergenceFailure)?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

    let mut values = Vec::new();
    let mut projectors = Vec::new();
    let mut members: Vec<usize> = Vec::new();
    let flush = |members: &mut Vec<usize>, values: &mut Vec<f64>, projectors: &mut Vec<CMatrix>| {
        if members.is_empty() {
            return;
        }
        let mean =
            members.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / members.len() as f64;
        let mut p = CMatrix::zeros(dim, dim);
        for &i in members.iter() {
            let v = eig.eigenvectors.column(i);
            p += &v * v.adjoint();
        }
        values.push(mean);
        projectors.push(p);
        members.clear();
    };
    let mut prev = f64::NEG_INFINITY;
    for &i in &order {
        let e = eig.eigenvalues[i];
        if !members.is_empty() && (e - prev) > group_tol {
            flush(&mut members, &mut values, &mut projectors);
        }
        members.push(i);
        prev = e;
    }
    flush(&mut members, &mut values, &mut projectors);
    Ok(Levels { values, projectors })
}

/// P(W) by direct enumeration of every (n, m) pair with the degenerate-safe
/// conditional probability, for a sudden quench (no propagator).
pub fn brute_force_work(
    h0: &CMatrix,
    h_tau: &CMatrix,
    rho0: &DensityState,
    group_tol: f64,
    merge_tol: f64,
) -> Result<WorkDistribution> {
    if h0.nrows() != h_tau.nrows() || h0.nrows() != rho0.dimension() {
        return Err(Error::DimensionMismatch {
            left: h0.nrows(),
            right: h_tau.nrows().max(rho0.dimension()),
        });
    }
    let pre = decompose(h0, group_tol)?;
    let post = decompose(h_tau, group_tol)?;

    let mut raw: Vec<(f64, f64)> = Vec::new();
    for (n, pn) in pre.projectors.iter().enumerate() {
        // P_n rho P_n once per n
        let pinched = pn * rho0.matrix() * pn;
        for (m, pm) in post.projectors.iter().enumerate() {
            let mut p = Complex64::new(0.0, 0.0);
            for i in 0..pm.nrows() {
                for j in 0..pm.ncols() {
                    p += pm[(i, j)] * pinched[(j, i)];
                }
            }
            let w = post.values[m] - pre.values[n];
            raw.push((w, p.re.max(0.0)));
        }
    }
    Ok(WorkDistribution::from_raw_atoms(raw, merge_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use workstats_core::model::{build_hamiltonian, ModelKind};
    use workstats_core::spectral::{eigendecompose_auto, gibbs_state};

    /// Two-site ring quenched from lambda0 = 0 to 1 at inverse temperature
    /// beta: the even block rotates by the angle with cos^2(pi/8) overlap,
    /// the odd block is field-independent. Atoms recorded from the hand
    /// enumeration of the two 2x2 blocks.
    #[test]
    fn two_site_hand_enumeration() {
        let beta = 1.0;
        let h0 = build_hamiltonian(&ModelKind::TfimPeriodic, 2, 0.0).unwrap();
        let ht = build_hamiltonian(&ModelKind::TfimPeriodic, 2, 1.0).unwrap();
        let spec0 = eigendecompose_auto(&h0).unwrap();
        let rho = gibbs_state(&spec0, beta).unwrap().state;
        let d = brute_force_work(&h0, &ht, &rho, 1e-8, 1e-9).unwrap();

        let r2 = 2.0f64.sqrt();
        let z0 = 2.0 * (2.0f64 * beta).exp() + 2.0 * (-2.0f64 * beta).exp();
        let p_lo = 2.0 * (2.0f64 * beta).exp() / z0; // E = -2, rank 2
        let p_hi = 2.0 * (-2.0f64 * beta).exp() / z0; // E = +2, rank 2
        let c2 = (std::f64::consts::PI / 8.0).cos().powi(2);
        let s2 = 1.0 - c2;
        // (work, probability) from the two blocks
        let mut want = vec![
            (-2.0 * r2 - 2.0, p_hi * s2 / 2.0),
            (2.0 - 2.0 * r2, p_lo * c2 / 2.0),
            (0.0, p_lo / 2.0 + p_hi / 2.0),
            (2.0 * r2 - 2.0, p_hi * c2 / 2.0),
            (2.0 * r2 + 2.0, p_lo * s2 / 2.0),
        ];
        want.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert_eq!(d.atoms().len(), want.len());
        for ((gw, gp), (ww, wp)) in d.atoms().iter().zip(&want) {
            assert_relative_eq!(gw, ww, epsilon = 1e-10);
            assert_relative_eq!(gp, wp, epsilon = 1e-10);
        }
        assert_relative_eq!(d.total_mass(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn identity_quench_point_mass() {
        let h = build_hamiltonian(&ModelKind::TfimPeriodic, 3, 0.7).unwrap();
        let spec = eigendecompose_auto(&h).unwrap();
        let rho = gibbs_state(&spec, 2.0).unwrap().state;
        let d = brute_force_work(&h, &h, &rho, 1e-8, 1e-9).unwrap();
        assert_eq!(d.atoms().len(), 1);
        assert_relative_eq!(d.atoms()[0].0, 0.0, epsilon = 1e-12);
        assert_relative_eq!(d.atoms()[0].1, 1.0, epsilon = 1e-10);
    }
}
