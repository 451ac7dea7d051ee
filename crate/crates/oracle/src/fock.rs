//! Dense Fock-space realization of the quadratic fermion Hamiltonians.
//!
//! An abstract register of N momentum modes is built with Jordan-Wigner
//! string signs over a fixed mode order; the pre-quench Hamiltonian is
//! diagonal in this register and the post-quench one is assembled from the
//! Bogoliubov-rotated operators. Everything here is independent of the
//! engine's mode-product algebra: the only shared inputs are the dispersion
//! and angle formulas, re-derived locally.

use nalgebra::DMatrix;
use num_complex::Complex64;
use workstats_core::error::{Error, Result};

type CMatrix = DMatrix<Complex64>;

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

fn eye(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

// local copies of the free-fermion formulas (kept independent of the engine)
fn dispersion(k: f64, lambda: f64) -> f64 {
    let s = k.sin();
    let d = lambda - k.cos();
    2.0 * (s * s + d * d).sqrt()
}

fn bogoliubov_angle(k: f64, lambda: f64) -> f64 {
    k.sin().atan2(lambda - k.cos())
}

/// Annihilation operators for N fermion modes with a recorded mode order.
#[derive(Debug, Clone)]
pub struct FockOperatorSet {
    /// Signed momenta in register order: ascending |k|, +k before -k.
    pub mode_order: Vec<f64>,
    ops: Vec<CMatrix>,
    dim: usize,
}

impl FockOperatorSet {
    /// Register for the even-parity momenta of an N-site chain (N even).
    pub fn new(n_sites: usize, cap: usize) -> Result<Self> {
        if n_sites < 2 || n_sites % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "fermion register needs an even number of sites >= 2, got {n_sites}"
            )));
        }
        if n_sites > cap {
            return Err(Error::CapExceeded {
                n_sites,
                dim: 1usize << n_sites.min(63),
                cap,
            });
        }
        let mut mode_order = Vec::with_capacity(n_sites);
        for n in 1..=n_sites / 2 {
            let k = std::f64::consts::PI * (2 * n - 1) as f64 / n_sites as f64;
            mode_order.push(k);
            mode_order.push(-k);
        }
        let dim = 1usize << n_sites;
        // mode m: Z x ... x Z x a x I x ... x I  (string over earlier modes)
        let z = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ]));
        let a_local = {
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 1)] = Complex64::new(1.0, 0.0); // |1> -> |0>
            m
        };
        let mut ops = Vec::with_capacity(n_sites);
        for m in 0..n_sites {
            let mut op = eye(1);
            for _ in 0..m {
                op = kron(&op, &z);
            }
            op = kron(&op, &a_local);
            for _ in m + 1..n_sites {
                op = kron(&op, &eye(2));
            }
            ops.push(op);
        }
        Ok(Self {
            mode_order,
            ops,
            dim,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn annihilator(&self, mode: usize) -> &CMatrix {
        &self.ops[mode]
    }

    pub fn creator(&self, mode: usize) -> CMatrix {
        self.ops[mode].adjoint()
    }

    fn index_of(&self, k: f64) -> usize {
        self.mode_order
            .iter()
            .position(|&q| (q - k).abs() < 1e-12)
            .expect("momentum in register")
    }

    /// Max deviation from the canonical anticommutation relations.
    pub fn anticommutation_deviation(&self) -> f64 {
        let n = self.ops.len();
        let mut dev = 0.0f64;
        let max_entry =
            |m: &CMatrix| -> f64 { m.iter().map(|z| z.norm()).fold(0.0, f64::max) };
        for p in 0..n {
            for q in 0..n {
                let cp = &self.ops[p];
                let cq = &self.ops[q];
                // {c_p, c_q} = 0
                dev = dev.max(max_entry(&(cp * cq + cq * cp)));
                // {c_p, c_q^+} = delta_pq
                let mut anti = cp * cq.adjoint() + cq.adjoint() * cp;
                if p == q {
                    anti -= eye(self.dim);
                }
                dev = dev.max(max_entry(&anti));
            }
        }
        dev
    }
}

/// Fock-space oracle for one quench family: the register is tied to the
/// pre-quench field, where the Hamiltonian is diagonal.
#[derive(Debug)]
pub struct FermionOracle {
    pub n_sites: usize,
    pub lambda_ref: f64,
    fock: FockOperatorSet,
}

impl FermionOracle {
    pub fn new(n_sites: usize, lambda_ref: f64, cap: usize) -> Result<Self> {
        Ok(Self {
            n_sites,
            lambda_ref,
            fock: FockOperatorSet::new(n_sites, cap)?,
        })
    }

    pub fn fock(&self) -> &FockOperatorSet {
        &self.fock
    }

    /// H(lambda) = sum_k eps_k(lambda) (g'_k^+ g'_k - 1/2) with the rotated
    /// operators g'_k = g_k cos(D_k/2) + g_{-k}^+ sin(D_k/2) expressed in the
    /// reference register. At lambda = lambda_ref this is diagonal.
    pub fn hamiltonian(&self, lambda: f64) -> CMatrix {
        let dim = self.fock.dimension();
        let mut h = CMatrix::zeros(dim, dim);
        for n in 1..=self.n_sites / 2 {
            let k = std::f64::consts::PI * (2 * n - 1) as f64 / self.n_sites as f64;
            let eps = dispersion(k, lambda);
            let delta = bogoliubov_angle(k, lambda) - bogoliubov_angle(k, self.lambda_ref);
            let (c, s) = ((0.5 * delta).cos(), (0.5 * delta).sin());
            let g_k = self.fock.annihilator(self.fock.index_of(k));
            let g_mk = self.fock.annihilator(self.fock.index_of(-k));
            // g'_k = c g_k + s g_{-k}^+ ;  g'_{-k} = c g_{-k} - s g_k^+
            let gp_k = g_k.scale(c) + g_mk.adjoint().scale(s);
            let gp_mk = g_mk.scale(c) - g_k.adjoint().scale(s);
            for gp in [gp_k, gp_mk] {
                h += (gp.adjoint() * &gp - eye(dim).scale(0.5)).scale(eps);
            }
        }
        h
    }

    /// Even-sector magnetization from the affinity of the quench family:
    /// M = -(H(lambda_ref + 1) - H(lambda_ref)).
    pub fn magnetization(&self) -> CMatrix {
        self.hamiltonian(self.lambda_ref) - self.hamiltonian(self.lambda_ref + 1.0)
    }

    /// log Z(lambda) over the full register by direct eigenvalue summation.
    pub fn log_z(&self, lambda: f64, beta: f64) -> Result<f64> {
        let h = self.hamiltonian(lambda);
        let eig = h
            .try_symmetric_eigen(f64::EPSILON, 0)
            .ok_or(Error::ConvergenceFailure)?;
        let e_min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let s: f64 = eig
            .eigenvalues
            .iter()
            .map(|&e| (-beta * (e - e_min)).exp())
            .sum();
        Ok(s.ln() - beta * e_min)
    }

    /// Precompute the Gibbs-weighted transition table of one quench; the
    /// characteristic function is then a plain sum over its entries.
    pub fn work_table(&self, lambda_tau: f64, beta: f64) -> Result<FockWorkTable> {
        let h0 = self.hamiltonian(self.lambda_ref);
        let ht = self.hamiltonian(lambda_tau);
        let dim = self.fock.dimension();

        // H(lambda_ref) is diagonal in the register
        let e0: Vec<f64> = (0..dim).map(|i| h0[(i, i)].re).collect();
        let eig_t = ht
            .try_symmetric_eigen(f64::EPSILON, 0)
            .ok_or(Error::ConvergenceFailure)?;

        let e_min = e0.iter().copied().fold(f64::INFINITY, f64::min);
        let z_shifted: f64 = e0.iter().map(|&e| (-beta * (e - e_min)).exp()).sum();

        let mut entries = Vec::new();
        for b in 0..dim {
            let g_b = (-beta * (e0[b] - e_min)).exp() / z_shifted;
            if g_b == 0.0 {
                continue;
            }
            for a in 0..dim {
                let w = g_b * eig_t.eigenvectors[(b, a)].norm_sqr();
                if w == 0.0 {
                    continue;
                }
                entries.push((w, eig_t.eigenvalues[a] - e0[b]));
            }
        }
        Ok(FockWorkTable { entries })
    }

    /// chi(u) = Tr[e^{iuH(lambda_tau)} e^{-iuH(lambda_ref)} rho_G] as a full
    /// 2^N trace; the ground truth for the engine's mode product. Callers
    /// sweeping many u values should hold a [`FockWorkTable`] instead.
    pub fn chi(&self, lambda_tau: f64, beta: f64, u: Complex64) -> Result<Complex64> {
        Ok(self.work_table(lambda_tau, beta)?.chi(u))
    }
}

/// Gibbs-weighted (probability, work) entries of the full 2^N trace.
#[derive(Debug, Clone)]
pub struct FockWorkTable {
    entries: Vec<(f64, f64)>,
}

impl FockWorkTable {
    pub fn chi(&self, u: Complex64) -> Complex64 {
        let iu = Complex64::new(0.0, 1.0) * u;
        self.entries
            .iter()
            .map(|&(w, work)| Complex64::new(w, 0.0) * (iu * work).exp())
            .sum()
    }
}
