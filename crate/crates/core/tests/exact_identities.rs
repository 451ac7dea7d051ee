//! Fluctuation-theorem identities that tie several modules together.

use num_complex::Complex64;
use workstats_core::model::{build_hamiltonian, ModelKind};
use workstats_core::numerics::{finite_diff, linspace};
use workstats_core::spectral::{eigendecompose_auto, gibbs_state};
use workstats_core::thermo::free_energy_diff;
use workstats_core::work::{moments_direct, work_statistics, InitialCondition, WorkStatistics};

fn setup(
    model: &ModelKind,
    n: usize,
    l0: f64,
    lt: f64,
    beta: f64,
) -> (WorkStatistics, f64, f64) {
    let h0 = build_hamiltonian(model, n, l0).unwrap();
    let ht = build_hamiltonian(model, n, lt).unwrap();
    let s0 = eigendecompose_auto(&h0).unwrap();
    let st = eigendecompose_auto(&ht).unwrap();
    let g0 = gibbs_state(&s0, beta).unwrap();
    let gt = gibbs_state(&st, beta).unwrap();
    let ws = work_statistics(&s0, &st, InitialCondition::Gibbs { beta }).unwrap();
    (ws, g0.log_z, gt.log_z)
}

#[test]
fn tasaki_crooks_ratio_on_a_real_grid() {
    let model = ModelKind::TfimPeriodic;
    let (n, l0, lt, beta) = (4usize, 0.6, 1.1, 1.0);
    let (fwd, lz0, lzt) = setup(&model, n, l0, lt, beta);
    let (bwd, _, _) = setup(&model, n, lt, l0, beta);
    let delta_f = free_energy_diff(lz0, lzt, beta);
    let want = (-beta * delta_f).exp();
    for u in linspace(-3.0, 3.0, 13) {
        let chi_f = fwd.chi(Complex64::new(u, 0.0));
        // backward process evaluated at i beta - u
        let chi_b = bwd.chi(Complex64::new(-u, beta));
        let ratio = chi_f / chi_b;
        assert!(
            (ratio - Complex64::new(want, 0.0)).norm() < 1e-8,
            "u = {u}: ratio {ratio}, want {want}"
        );
    }
}

#[test]
fn moments_three_ways_agree() {
    // binomial operator formula vs distribution sums vs derivatives of chi
    let model = ModelKind::TfimPeriodic;
    let (n, l0, lt, beta) = (4usize, 0.5, 1.2, 1.0);
    let h0 = build_hamiltonian(&model, n, l0).unwrap();
    let ht = build_hamiltonian(&model, n, lt).unwrap();
    let s0 = eigendecompose_auto(&h0).unwrap();
    let st = eigendecompose_auto(&ht).unwrap();
    let rho = gibbs_state(&s0, beta).unwrap().state;
    let ws = work_statistics(&s0, &st, InitialCondition::State(&rho)).unwrap();

    let direct = moments_direct(&h0, &ht, &rho, 4).unwrap();
    let from_atoms = ws.moments(4);

    // mu_n = (-i)^n d^n chi/du^n at 0: alternate real/imaginary parts.
    // |chi| is O(1), so the rounding term grows like eps/h^n and the higher
    // orders want larger steps.
    let re = |u: f64| ws.chi(Complex64::new(u, 0.0)).re;
    let im = |u: f64| ws.chi(Complex64::new(u, 0.0)).im;
    let from_chi = [
        finite_diff(im, 0.0, 1, 2e-3).unwrap().value,
        -finite_diff(re, 0.0, 2, 2e-3).unwrap().value,
        -finite_diff(im, 0.0, 3, 5e-3).unwrap().value,
        finite_diff(re, 0.0, 4, 8e-3).unwrap().value,
    ];
    for i in 0..4 {
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        assert!(
            rel(direct[i], from_atoms[i]) < 1e-8,
            "order {}: operator {} vs atoms {}",
            i + 1,
            direct[i],
            from_atoms[i]
        );
        assert!(
            rel(from_chi[i], from_atoms[i]) < 1e-6,
            "order {}: chi-derivative {} vs atoms {}",
            i + 1,
            from_chi[i],
            from_atoms[i]
        );
    }
}

#[test]
fn chi_bounded_and_even_for_exact_engine() {
    let model = ModelKind::TfimPeriodic;
    let (ws, _, _) = setup(&model, 4, 0.7, 1.3, 2.0);
    for u in linspace(0.1, 6.0, 25) {
        let plus = ws.chi(Complex64::new(u, 0.0));
        let minus = ws.chi(Complex64::new(-u, 0.0));
        assert!(plus.norm() <= 1.0 + 1e-12);
        assert!((plus.re - minus.re).abs() < 1e-12);
        assert!((plus.im + minus.im).abs() < 1e-12);
    }
}

#[test]
fn gibbs_chi_at_i_beta_recovers_partition_ratio_at_beta_100() {
    let model = ModelKind::TfimPeriodic;
    let (ws, lz0, lzt) = setup(&model, 6, 0.5, 1.5, 100.0);
    let log_chi = ws.log_chi(Complex64::new(0.0, 100.0));
    assert!(log_chi.im.abs() < 1e-10);
    let residual = ((log_chi.re - (lzt - lz0)).exp() - 1.0).abs();
    assert!(residual < 1e-10, "residual = {residual:e}");
}
