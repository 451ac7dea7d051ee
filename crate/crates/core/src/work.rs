//! Two-projective-measurement work statistics for a sudden quench.
//!
//! The statistics are assembled as a table of (log-weight, work) atoms over
//! all pairs of pre- and post-quench eigensubspaces. Keeping weights in the
//! log domain lets the characteristic function be evaluated at imaginary
//! arguments (u = i*beta) without overflow even at beta = 100, where the
//! Gibbs populations themselves underflow f64.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::cumulants::{
    binomial, cumulants_from_atoms, raw_moments_from_atoms, CumulantSet, EngineTag,
};
use crate::error::{Error, Result};
use crate::model::CMatrix;
use crate::numerics::log_sum_exp_complex;
use crate::spectral::{DensityState, SpectralData};

/// Weight below which a work atom is dropped from a `WorkDistribution`.
pub const ATOM_DROP_TOL: f64 = 1e-14;

/// Initial condition for the first energy measurement.
#[derive(Debug, Clone, Copy)]
pub enum InitialCondition<'a> {
    /// Thermal state of the pre-quench Hamiltonian; weights are formed in
    /// the log domain directly from the eigenvalues.
    Gibbs { beta: f64 },
    /// An explicit density matrix. Only its diagonal blocks in the
    /// pre-quench eigenbasis contribute, so passing an unprojected state is
    /// equivalent to projecting it first.
    State(&'a DensityState),
}

#[derive(Debug, Clone, Copy)]
struct Atom {
    log_weight: f64,
    work: f64,
}

/// The full (n, m) transition table of a sudden quench.
#[derive(Debug, Clone)]
pub struct WorkStatistics {
    atoms: Vec<Atom>,
}

/// Discrete two-measurement work distribution: atoms (W, p) ascending in W.
#[derive(Debug, Clone)]
pub struct WorkDistribution {
    atoms: Vec<(f64, f64)>,
    total_mass: f64,
}

impl WorkDistribution {
    /// Assemble from unsorted (work, probability) pairs: drops weights below
    /// 1e-14, sorts, and merges atoms closer than `merge_tol` in W.
    pub fn from_raw_atoms(mut raw: Vec<(f64, f64)>, merge_tol: f64) -> Self {
        raw.retain(|&(_, p)| p > ATOM_DROP_TOL);
        raw.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (w, p) in raw {
            match atoms.last_mut() {
                Some(last) if (w - last.0).abs() <= merge_tol => {
                    // mass-weighted position keeps colliding atoms centered
                    let mass = last.1 + p;
                    last.0 = (last.0 * last.1 + w * p) / mass;
                    last.1 = mass;
                }
                _ => atoms.push((w, p)),
            }
        }
        let total_mass = atoms.iter().map(|a| a.1).sum();
        Self { atoms, total_mass }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// <W^n> by direct summation.
    pub fn moment(&self, n: usize) -> f64 {
        self.atoms.iter().map(|&(w, p)| p * w.powi(n as i32)).sum()
    }

    /// sum_i p_i exp(i u W_i) for real u.
    pub fn chi_real(&self, u: f64) -> Complex64 {
        self.atoms
            .iter()
            .map(|&(w, p)| Complex64::from_polar(p, u * w))
            .sum()
    }

    /// Total-variation distance to another distribution on a merged support.
    pub fn total_variation_distance(&self, other: &WorkDistribution, tol: f64) -> f64 {
        let mut events: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .map(|&(w, p)| (w, p))
            .chain(other.atoms.iter().map(|&(w, p)| (w, -p)))
            .collect();
        events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut tv = 0.0;
        let mut i = 0;
        while i < events.len() {
            let mut j = i + 1;
            let mut net = events[i].1;
            while j < events.len() && (events[j].0 - events[i].0).abs() <= tol {
                net += events[j].1;
                j += 1;
            }
            tv += net.abs();
            i = j;
        }
        tv / 2.0
    }
}

/// Build the transition table for a sudden quench H(lambda0) -> H(lambda_tau).
pub fn work_statistics(
    spec0: &SpectralData,
    spec_tau: &SpectralData,
    init: InitialCondition,
) -> Result<WorkStatistics> {
    if spec0.dimension() != spec_tau.dimension() {
        return Err(Error::DimensionMismatch {
            left: spec0.dimension(),
            right: spec_tau.dimension(),
        });
    }
    let overlap = spec_tau.basis().adjoint() * spec0.basis();
    let mut atoms = Vec::new();

    match init {
        InitialCondition::Gibbs { beta } => {
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "beta must be finite and positive, got {beta}"
                )));
            }
            let e_min = spec0.min_level();
            let mut z_shifted = 0.0f64;
            for (n, &e) in spec0.levels().iter().enumerate() {
                z_shifted += spec0.rank(n) as f64 * (-beta * (e - e_min)).exp();
            }
            let log_z_shifted = z_shifted.ln();
            for (n, &e_n) in spec0.levels().iter().enumerate() {
                let log_pop = -beta * (e_n - e_min) - log_z_shifted;
                let g_n = spec0.group(n);
                for (m, &e_m) in spec_tau.levels().iter().enumerate() {
                    let g_m = spec_tau.group(m);
                    let mut s = 0.0f64;
                    for j in g_n.clone() {
                        for i in g_m.clone() {
                            s += overlap[(i, j)].norm_sqr();
                        }
                    }
                    if s <= 0.0 {
                        continue;
                    }
                    atoms.push(Atom {
                        log_weight: log_pop + s.ln(),
                        work: e_m - e_n,
                    });
                }
            }
        }
        InitialCondition::State(rho) => {
            if rho.dimension() != spec0.dimension() {
                return Err(Error::DimensionMismatch {
                    left: rho.dimension(),
                    right: spec0.dimension(),
                });
            }
            let v0 = spec0.basis();
            let rho_eig = v0.adjoint() * rho.matrix() * v0;
            for (n, &e_n) in spec0.levels().iter().enumerate() {
                let g_n = spec0.group(n);
                let r_n = g_n.len();
                let block = rho_eig.view((g_n.start, g_n.start), (r_n, r_n)).into_owned();
                let b_n = overlap.columns(g_n.start, r_n);
                // row i of (B_n block B_n^+) gives P_m-resolved weights
                let y = &b_n * block;
                for (m, &e_m) in spec_tau.levels().iter().enumerate() {
                    let mut s = 0.0f64;
                    for i in spec_tau.group(m) {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for c in 0..r_n {
                            acc += y[(i, c)] * b_n[(i, c)].conj();
                        }
                        s += acc.re;
                    }
                    if s <= 1e-300 {
                        continue;
                    }
                    atoms.push(Atom {
                        log_weight: s.ln(),
                        work: e_m - e_n,
                    });
                }
            }
        }
    }
    Ok(WorkStatistics { atoms })
}

impl WorkStatistics {
    /// Collapse the table into a distribution, merging works within
    /// `merge_tol` and dropping weights below 1e-14.
    pub fn distribution(&self, merge_tol: f64) -> WorkDistribution {
        let raw = self
            .atoms
            .iter()
            .map(|a| (a.work, a.log_weight.exp()))
            .collect();
        WorkDistribution::from_raw_atoms(raw, merge_tol)
    }

    /// chi(u) = sum_j p_j exp(i u W_j) for complex u, evaluated through the
    /// combined exponent so Gibbs weights and exp(-Im u * W) never overflow
    /// separately.
    pub fn log_chi(&self, u: Complex64) -> Complex64 {
        let terms: Vec<Complex64> = self
            .atoms
            .iter()
            .map(|a| Complex64::new(a.log_weight - u.im * a.work, u.re * a.work))
            .collect();
        log_sum_exp_complex(&terms)
    }

    pub fn chi(&self, u: Complex64) -> Complex64 {
        self.log_chi(u).exp()
    }

    /// <W^n>, n = 1..n_max, straight from the atoms.
    pub fn moments(&self, n_max: usize) -> Vec<f64> {
        let atoms: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .map(|a| (a.log_weight.exp(), a.work))
            .collect();
        raw_moments_from_atoms(&atoms, n_max)
    }

    pub fn mean_work(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.log_weight.exp() * a.work)
            .sum()
    }

    /// Cumulants K_1..K_n computed about the mean.
    pub fn cumulants(&self, n_max: usize) -> Result<CumulantSet> {
        let atoms: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .map(|a| (a.log_weight.exp(), a.work))
            .collect();
        cumulants_from_atoms(&atoms, n_max, EngineTag::Exact)
    }
}

/// P(W) of the sudden quench for an explicit (projected) initial state.
pub fn work_distribution(
    spec0: &SpectralData,
    spec_tau: &SpectralData,
    rho0p: &DensityState,
    merge_tol: f64,
) -> Result<WorkDistribution> {
    Ok(work_statistics(spec0, spec_tau, InitialCondition::State(rho0p))?.distribution(merge_tol))
}

/// chi(u) = Tr[exp(iuH_tau) exp(-iuH_0) rho0'] for complex u.
pub fn characteristic_function(
    spec0: &SpectralData,
    spec_tau: &SpectralData,
    rho0p: &DensityState,
    u: Complex64,
) -> Result<Complex64> {
    Ok(work_statistics(spec0, spec_tau, InitialCondition::State(rho0p))?.chi(u))
}

/// <W^n> via the binomial operator formula
/// sum_k (-1)^k C(n,k) H_tau^{n-k} H_0^k acting on rho0'.
pub fn moments_direct(
    h0: &CMatrix,
    h_tau: &CMatrix,
    rho0p: &DensityState,
    n_max: usize,
) -> Result<Vec<f64>> {
    if h0.nrows() != h_tau.nrows() || h0.nrows() != rho0p.dimension() {
        return Err(Error::DimensionMismatch {
            left: h0.nrows(),
            right: h_tau.nrows().max(rho0p.dimension()),
        });
    }
    let dim = h0.nrows();
    // powers of H_tau, and H_0^k rho
    let mut tau_pows: Vec<CMatrix> = Vec::with_capacity(n_max + 1);
    tau_pows.push(CMatrix::identity(dim, dim));
    for _ in 0..n_max {
        let next = tau_pows.last().unwrap() * h_tau;
        tau_pows.push(next);
    }
    let mut h0k_rho: Vec<CMatrix> = Vec::with_capacity(n_max + 1);
    h0k_rho.push(rho0p.matrix().clone());
    for _ in 0..n_max {
        let next = h0 * h0k_rho.last().unwrap();
        h0k_rho.push(next);
    }
    let trace_prod = |a: &CMatrix, b: &CMatrix| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                acc += a[(i, j)] * b[(j, i)];
            }
        }
        acc.re
    };
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = 0.0;
        for k in 0..=n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binomial(n, k) * trace_prod(&tau_pows[n - k], &h0k_rho[k]);
        }
        out.push(acc);
    }
    Ok(out)
}

/// <(H_tau - H_0)^n> over rho0'; equals <W^n> only for n = 1, 2 when the
/// Hamiltonians do not commute.
pub fn difference_operator_moment(
    h0: &CMatrix,
    h_tau: &CMatrix,
    rho0p: &DensityState,
    n: usize,
) -> f64 {
    let d = h_tau - h0;
    let mut acc = CMatrix::identity(d.nrows(), d.ncols());
    for _ in 0..n {
        acc = &acc * &d;
    }
    (acc * rho0p.matrix()).trace().re
}

/// Single-measurement statistics of a Hermitian observable in a state:
/// (probability, eigenvalue) atoms grouped by degenerate eigenvalue.
pub fn observable_atoms(rho: &DensityState, observable: &CMatrix) -> Result<Vec<(f64, f64)>> {
    if rho.dimension() != observable.nrows() {
        return Err(Error::DimensionMismatch {
            left: rho.dimension(),
            right: observable.nrows(),
        });
    }
    let dim = observable.nrows();
    let off_diag: f64 = (0..dim)
        .flat_map(|i| (0..dim).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .map(|(i, j)| observable[(i, j)].norm())
        .fold(0.0, f64::max);
    if off_diag < 1e-15 {
        // diagonal fast path (true for M_z in the computational basis)
        return Ok((0..dim)
            .map(|i| (rho.matrix()[(i, i)].re.max(0.0), observable[(i, i)].re))
            .collect());
    }
    let spec = crate::spectral::eigendecompose_auto(observable)?;
    let v = spec.basis();
    let rho_eig = v.adjoint() * rho.matrix() * v;
    let mut atoms = Vec::with_capacity(spec.num_levels());
    for (n, &val) in spec.levels().iter().enumerate() {
        let p: f64 = spec.group(n).map(|i| rho_eig[(i, i)].re).sum();
        atoms.push((p.max(0.0), val));
    }
    Ok(atoms)
}

/// G(v) = Tr[exp(ivM) rho0'], the generating function of a single projective
/// measurement of `m`.
pub fn magnetization_genfun(rho0p: &DensityState, m: &CMatrix, v: f64) -> Result<Complex64> {
    let atoms = observable_atoms(rho0p, m)?;
    Ok(atoms
        .iter()
        .map(|&(p, x)| Complex64::from_polar(p, v * x))
        .sum())
}

/// Raw moments <M^n>, n = 1..n_max.
pub fn magnetization_moments(
    rho0p: &DensityState,
    m: &CMatrix,
    n_max: usize,
) -> Result<Vec<f64>> {
    Ok(raw_moments_from_atoms(&observable_atoms(rho0p, m)?, n_max))
}

/// Cumulants C_1..C_n of the observable distribution.
pub fn mag_cumulants(rho0p: &DensityState, m: &CMatrix, n_max: usize) -> Result<CumulantSet> {
    cumulants_from_atoms(&observable_atoms(rho0p, m)?, n_max, EngineTag::Exact)
}

/// Mean and variance of an observable in a state.
pub fn observable_mean_var(rho: &DensityState, m: &CMatrix) -> Result<(f64, f64)> {
    let atoms = observable_atoms(rho, m)?;
    let mass: f64 = atoms.iter().map(|a| a.0).sum();
    let mean: f64 = atoms.iter().map(|&(p, x)| p * x).sum::<f64>() / mass;
    let var: f64 = atoms
        .iter()
        .map(|&(p, x)| p * (x - mean) * (x - mean))
        .sum::<f64>()
        / mass;
    Ok((mean, var))
}

/// Ground-state vector (any one in a degenerate ground manifold).
pub fn ground_state_vector(spec: &SpectralData) -> DVector<Complex64> {
    spec.basis().column(spec.group(0).start).into_owned()
}
