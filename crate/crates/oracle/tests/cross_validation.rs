//! Engine-vs-oracle comparisons: the mode-product characteristic function
//! against the full Fock-space trace, and the grouped-projector work
//! distribution against the literal brute-force enumeration.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use workstats_core::model::{build_hamiltonian, ModelKind};
use workstats_core::numerics::linspace;
use workstats_core::spectral::{eigendecompose, eigendecompose_auto, gibbs_state};
use workstats_core::tfim::{chi_product, ModeSet};
use workstats_core::work::work_distribution;
use workstats_oracle::{brute_force_work, FermionOracle};

#[test]
fn chi_product_matches_fock_trace_at_n4() {
    let modes = ModeSet::new(4).unwrap();
    let (l0, lt, beta) = (0.5, 1.0, 1.0);
    let oracle = FermionOracle::new(4, l0, 12).unwrap();
    for &u in &[0.3, 1.7, -2.2] {
        let engine = chi_product(&modes, l0, lt, beta, Complex64::new(u, 0.0)).unwrap();
        let truth = oracle.chi(lt, beta, Complex64::new(u, 0.0)).unwrap();
        assert!(
            (engine - truth).norm() < 1e-10,
            "u = {u}: engine {engine}, oracle {truth}"
        );
    }
}

#[test]
fn chi_product_matches_fock_trace_across_sizes_and_parameters() {
    let triples = [(0.5, 1.0, 1.0), (1.2, 0.3, 0.5), (0.9, 1.1, 2.0)];
    for n in [4usize, 6] {
        let modes = ModeSet::new(n).unwrap();
        for &(l0, lt, beta) in &triples {
            let oracle = FermionOracle::new(n, l0, 12).unwrap();
            let mut max_dev = 0.0f64;
            for u in linspace(-5.0, 5.0, 41) {
                let engine = chi_product(&modes, l0, lt, beta, Complex64::new(u, 0.0)).unwrap();
                let truth = oracle.chi(lt, beta, Complex64::new(u, 0.0)).unwrap();
                max_dev = max_dev.max((engine - truth).norm());
            }
            assert!(
                max_dev < 1e-9,
                "N = {n}, ({l0}, {lt}, {beta}): max deviation {max_dev}"
            );
        }
    }
}

#[test]
fn fock_chi_is_the_fourier_transform_of_the_fermionic_work_distribution() {
    // internal oracle consistency: the trace form against sum p e^{iuW} from
    // the brute-force enumerator run on the same fermionic Hamiltonians
    let (n, l0, lt, beta) = (4usize, 0.6, 1.3, 0.8);
    let oracle = FermionOracle::new(n, l0, 12).unwrap();
    let h0 = oracle.hamiltonian(l0);
    let ht = oracle.hamiltonian(lt);
    let spec0 = eigendecompose_auto(&h0).unwrap();
    let rho = gibbs_state(&spec0, beta).unwrap().state;
    let dist = brute_force_work(&h0, &ht, &rho, 1e-8, 1e-10).unwrap();
    for &u in &[-3.0, -0.7, 0.4, 2.9] {
        let from_atoms: Complex64 = dist
            .atoms()
            .iter()
            .map(|&(w, p)| Complex64::from_polar(p, u * w))
            .sum();
        let from_trace = oracle.chi(lt, beta, Complex64::new(u, 0.0)).unwrap();
        assert!(
            (from_atoms - from_trace).norm() < 1e-10,
            "u = {u}: atoms {from_atoms}, trace {from_trace}"
        );
    }
}

#[test]
fn tfim_magnetization_matches_exact_engine_on_the_fermionic_hamiltonian() {
    // <M_z> and Var M_z recovered from the first two work cumulants agree
    // with a direct Gibbs average over the dense even-sector Hamiltonian
    let (n, l0, beta) = (8usize, 0.9, 2.0);
    let modes = ModeSet::new(n).unwrap();
    let (mean_tfim, var_tfim) =
        workstats_core::tfim::magnetization_from_work(&modes, l0, beta, 0.01).unwrap();

    let oracle = FermionOracle::new(n, l0, 12).unwrap();
    let h0 = oracle.hamiltonian(l0);
    let m = oracle.magnetization();
    let spec = eigendecompose_auto(&h0).unwrap();
    let rho = gibbs_state(&spec, beta).unwrap().state;
    let (mean_exact, var_exact) =
        workstats_core::work::observable_mean_var(&rho, &m).unwrap();

    assert!(
        (mean_tfim - mean_exact).abs() < 1e-9,
        "<M_z>: tfim {mean_tfim}, exact {mean_exact}"
    );
    assert!(
        (var_tfim - var_exact).abs() < 1e-8,
        "Var M_z: tfim {var_tfim}, exact {var_exact}"
    );
}

#[test]
fn tfim_chi_tilde_curve_matches_dense_difference_form() {
    // chi~_M from the analytic engine against the finite-difference form
    // evaluated on the dense fermionic Hamiltonian family, deep in the
    // low-temperature regime
    let (n, beta, h_fd) = (8usize, 100.0, 1e-3);
    let modes = ModeSet::new(n).unwrap();
    let lambda0 = [0.6, 1.0, 1.4];
    let curve = workstats_core::tfim::chi_tilde_curve(&modes, beta, &lambda0, h_fd).unwrap();

    for (&l0, &(_, tfim_value)) in lambda0.iter().zip(curve.iter()) {
        let oracle = FermionOracle::new(n, l0, 12).unwrap();
        let m = oracle.magnetization();
        let mean_at = |l: f64| -> f64 {
            let spec = eigendecompose_auto(&oracle.hamiltonian(l)).unwrap();
            let rho = gibbs_state(&spec, beta).unwrap().state;
            workstats_core::work::observable_mean_var(&rho, &m).unwrap().0
        };
        let chi_m = workstats_core::numerics::finite_diff(mean_at, l0, 1, h_fd)
            .unwrap()
            .value;
        let spec = eigendecompose_auto(&oracle.hamiltonian(l0)).unwrap();
        let rho = gibbs_state(&spec, beta).unwrap().state;
        let (_, var) = workstats_core::work::observable_mean_var(&rho, &m).unwrap();
        let dense_value = (chi_m - beta * var) / n as f64;
        let rel = (tfim_value - dense_value).abs() / dense_value.abs();
        assert!(
            rel < 1e-3,
            "lambda0 = {l0}: tfim {tfim_value}, dense {dense_value} (rel {rel:.2e})"
        );
    }
}

#[test]
fn engine_distribution_matches_brute_force_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for draw in 0..20 {
        let n = rng.random_range(2..=6usize);
        let beta = rng.random_range(0.05..3.0);
        let l0 = rng.random_range(-1.5..1.5);
        let dlam = rng.random_range(-1.0..1.0);
        let model = if rng.random_bool(0.5) {
            ModelKind::TfimPeriodic
        } else {
            ModelKind::ClassicalIsingLongitudinal
        };
        let h0 = build_hamiltonian(&model, n, l0).unwrap();
        let ht = build_hamiltonian(&model, n, l0 + dlam).unwrap();
        // identical grouping tolerance on both routes so the level
        // structures (and hence the work supports) are comparable
        let group_tol = 1e-8;
        let spec0 = eigendecompose(&h0, group_tol).unwrap();
        let spec_t = eigendecompose(&ht, group_tol).unwrap();
        let rho = gibbs_state(&spec0, beta).unwrap().state;

        let engine = work_distribution(&spec0, &spec_t, &rho, 1e-9).unwrap();
        let brute = brute_force_work(&h0, &ht, &rho, group_tol, 1e-9).unwrap();
        let tv = engine.total_variation_distance(&brute, 1e-7);
        assert!(
            tv < 1e-9,
            "draw {draw} (n={n}, beta={beta:.2}, l0={l0:.2}, dlam={dlam:.2}): TV = {tv:e}"
        );
    }
}
