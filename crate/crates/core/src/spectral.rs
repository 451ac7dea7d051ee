//! Hermitian eigendecomposition with degeneracy grouping, Gibbs states and
//! eigenbasis projection.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{hermiticity_deviation, CMatrix};

/// Relative degeneracy grouping tolerance (scaled by the spectral radius).
pub const DEFAULT_DEGENERACY_REL_TOL: f64 = 1e-8;

/// Eigenvalues of one Hamiltonian grouped into degenerate subspaces.
///
/// Columns of `basis` are orthonormal eigenvectors ordered by ascending
/// eigenvalue; `groups[n]` is the column range spanning the n-th degenerate
/// subspace. The projector P_n is `V_n V_n^+` over those columns.
#[derive(Debug, Clone)]
pub struct SpectralData {
    levels: Vec<f64>,
    basis: CMatrix,
    groups: Vec<std::ops::Range<usize>>,
    dim: usize,
}

impl SpectralData {
    /// Distinct eigenvalues, ascending.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn rank(&self, n: usize) -> usize {
        self.groups[n].len()
    }

    /// Orthonormal eigenvectors as columns, group-ordered.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn group(&self, n: usize) -> std::ops::Range<usize> {
        self.groups[n].clone()
    }

    /// Eigenvalue attached to basis column `col`.
    pub fn level_of_column(&self, col: usize) -> f64 {
        let n = self
            .groups
            .iter()
            .position(|g| g.contains(&col))
            .expect("column within dimension");
        self.levels[n]
    }

    /// Dense projector onto the n-th degenerate subspace.
    pub fn projector(&self, n: usize) -> CMatrix {
        let cols = self.basis.columns(self.groups[n].start, self.groups[n].len());
        &cols * cols.adjoint()
    }

    /// Sum of E_n P_n; equals the decomposed matrix up to solver accuracy.
    pub fn reconstruct(&self) -> CMatrix {
        let mut h = CMatrix::zeros(self.dim, self.dim);
        for (n, g) in self.groups.iter().enumerate() {
            let cols = self.basis.columns(g.start, g.len());
            h += (&cols * cols.adjoint()).scale(self.levels[n]);
        }
        h
    }

    /// Spectral radius max|E_n|.
    pub fn spectral_radius(&self) -> f64 {
        self.levels.iter().fold(0.0f64, |a, &e| a.max(e.abs()))
    }

    pub fn min_level(&self) -> f64 {
        self.levels[0]
    }
}

/// Eigendecompose a Hermitian matrix, merging eigenvalues closer than
/// `degeneracy_tol` into a single subspace.
pub fn eigendecompose(h: &CMatrix, degeneracy_tol: f64) -> Result<SpectralData> {
    let dev = hermiticity_deviation(h);
    if dev > 1e-10 {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let dim = h.nrows();
    let eig = h
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::ConvergenceFailure)?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

    let mut basis = CMatrix::zeros(dim, dim);
    for (col, &src) in order.iter().enumerate() {
        basis.set_column(col, &eig.eigenvectors.column(src));
    }
    let sorted: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();

    let mut levels = Vec::new();
    let mut groups = Vec::new();
    let mut start = 0usize;
    for i in 1..=dim {
        let split = i == dim || (sorted[i] - sorted[i - 1]) > degeneracy_tol;
        if split {
            let group = start..i;
            let mean = sorted[group.clone()].iter().sum::<f64>() / group.len() as f64;
            levels.push(mean);
            groups.push(group);
            start = i;
        }
    }

    Ok(SpectralData {
        levels,
        basis,
        groups,
        dim,
    })
}

/// Eigendecompose with the default tolerance 1e-8 * ||H||, using the
/// inf-norm as a tight bound on the spectral radius.
pub fn eigendecompose_auto(h: &CMatrix) -> Result<SpectralData> {
    let scale = (0..h.nrows())
        .map(|i| (0..h.ncols()).map(|j| h[(i, j)].norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    eigendecompose(h, DEFAULT_DEGENERACY_REL_TOL * scale.max(1.0))
}

/// How a density matrix was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateLabel {
    Gibbs { beta: f64 },
    ProjectedGibbs,
    CustomInitial,
    CustomProjected,
}

/// Log-domain eigendata of a state: orthonormal eigenvectors as columns of
/// `basis` with eigenvalue exp(log_weights[i]) on column i.
///
/// States assembled from a known spectrum (Gibbs states in particular) keep
/// this alongside the dense matrix; log-sensitive quantities such as the
/// relative entropy then avoid re-diagonalizing the assembled matrix, whose
/// smallest eigenvalues are only accurate to ~1e-18 absolute.
#[derive(Debug, Clone)]
pub struct StateSpectrum {
    pub basis: CMatrix,
    pub log_weights: Vec<f64>,
}

/// A unit-trace Hermitian positive semidefinite state.
#[derive(Debug, Clone)]
pub struct DensityState {
    matrix: CMatrix,
    label: StateLabel,
    spectrum: Option<StateSpectrum>,
}

impl DensityState {
    pub fn from_matrix(matrix: CMatrix, label: StateLabel) -> Result<Self> {
        let dev = hermiticity_deviation(&matrix);
        if dev > 1e-10 {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "density matrix trace = {tr}, expected 1"
            )));
        }
        Ok(Self {
            matrix,
            label,
            spectrum: None,
        })
    }

    fn with_spectrum(matrix: CMatrix, label: StateLabel, spectrum: StateSpectrum) -> Self {
        Self {
            matrix,
            label,
            spectrum: Some(spectrum),
        }
    }

    /// Exact log-domain eigendata, when the state was built from a spectrum.
    pub fn spectrum(&self) -> Option<&StateSpectrum> {
        self.spectrum.as_ref()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn label(&self) -> StateLabel {
        self.label
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// Smallest eigenvalue; the PSD invariant allows -1e-12 of noise.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eig = self
            .matrix
            .clone()
            .try_symmetric_eigen(f64::EPSILON, 0)
            .ok_or(Error::ConvergenceFailure)?;
        Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
    }

    /// Pure state |psi><psi| from a normalized vector.
    pub fn pure(psi: &DVector<Complex64>, label: StateLabel) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "state vector norm = {norm}, expected 1"
            )));
        }
        Self::from_matrix(psi * psi.adjoint(), label)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = CMatrix::identity(dim, dim).scale(1.0 / dim as f64);
        Self {
            matrix: m,
            label: StateLabel::CustomInitial,
            spectrum: None,
        }
    }
}

/// Gibbs state of a decomposed Hamiltonian together with log Z.
#[derive(Debug, Clone)]
pub struct GibbsData {
    pub state: DensityState,
    pub log_z: f64,
}

/// log Z = log sum_n rank_n exp(-beta E_n), max-shifted for overflow safety.
pub fn log_partition(spec: &SpectralData, beta: f64) -> f64 {
    let e_min = spec.min_level();
    let mut s = 0.0;
    for (n, &e) in spec.levels().iter().enumerate() {
        s += spec.rank(n) as f64 * (-beta * (e - e_min)).exp();
    }
    s.ln() - beta * e_min
}

/// exp(-beta H)/Z built in the eigenbasis with a max-eigenvalue shift.
pub fn gibbs_state(spec: &SpectralData, beta: f64) -> Result<GibbsData> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "beta must be finite and positive, got {beta}"
        )));
    }
    let e_min = spec.min_level();
    let mut z_shifted = 0.0;
    for (n, &e) in spec.levels().iter().enumerate() {
        z_shifted += spec.rank(n) as f64 * (-beta * (e - e_min)).exp();
    }
    let log_z = z_shifted.ln() - beta * e_min;

    let dim = spec.dimension();
    let mut rho = CMatrix::zeros(dim, dim);
    let mut log_weights = vec![0.0f64; dim];
    for (n, &e) in spec.levels().iter().enumerate() {
        let w = (-beta * (e - e_min)).exp() / z_shifted;
        let lw = -beta * (e - e_min) - z_shifted.ln();
        for c in spec.group(n) {
            log_weights[c] = lw;
        }
        if w == 0.0 {
            continue;
        }
        let g = spec.group(n);
        let cols = spec.basis().columns(g.start, g.len());
        rho += (&cols * cols.adjoint()).scale(w);
    }
    // validate the assembled matrix, then attach the exact eigendata
    let checked = DensityState::from_matrix(rho, StateLabel::Gibbs { beta })?;
    let state = DensityState::with_spectrum(
        checked.matrix,
        StateLabel::Gibbs { beta },
        StateSpectrum {
            basis: spec.basis().clone(),
            log_weights,
        },
    );
    Ok(GibbsData { state, log_z })
}

/// Project a state onto the eigenbasis of the decomposed Hamiltonian:
/// rho' = sum_n P_n rho P_n.
pub fn project_state(rho0: &DensityState, spec0: &SpectralData) -> Result<DensityState> {
    if rho0.dimension() != spec0.dimension() {
        return Err(Error::DimensionMismatch {
            left: rho0.dimension(),
            right: spec0.dimension(),
        });
    }
    // Work in the eigenbasis: keep only the diagonal blocks.
    let v = spec0.basis();
    let rho_eig = v.adjoint() * rho0.matrix() * v;
    let dim = spec0.dimension();
    let mut blocks = CMatrix::zeros(dim, dim);
    for n in 0..spec0.num_levels() {
        let g = spec0.group(n);
        for i in g.clone() {
            for j in g.clone() {
                blocks[(i, j)] = rho_eig[(i, j)];
            }
        }
    }
    let projected = v * blocks * v.adjoint();
    let label = match rho0.label() {
        StateLabel::Gibbs { .. } | StateLabel::ProjectedGibbs => StateLabel::ProjectedGibbs,
        _ => StateLabel::CustomProjected,
    };
    DensityState::from_matrix(projected, label)
}

/// Max-entry norm of [rho, H] reconstructed from the spectral data.
pub fn commutation_norm_with(spec: &SpectralData, rho: &DensityState) -> f64 {
    let h = spec.reconstruct();
    let c = &h * rho.matrix() - rho.matrix() * &h;
    c.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
