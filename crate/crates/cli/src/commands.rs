//! Implementations of the CLI commands. Sweep points fan out over a rayon
//! pool; output rows keep sweep order regardless of completion order.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use workstats_core::error::Error;
use workstats_core::model::{build_hamiltonian_capped, quench_operator, ModelKind};
use workstats_core::numerics::finite_diff;
use workstats_core::spectral::{eigendecompose, eigendecompose_auto, gibbs_state, SpectralData};
use workstats_core::suscept::{
    chi_tilde_difference, chi_tilde_series, magnetization_mean_var_gibbs, susceptibility_order_j,
    SeriesOptions,
};
use workstats_core::thermo::{free_energy_diff, jarzynski_check};
use workstats_core::tfim::{
    self, chi_grid, level_set, level_set_derivative, scaling_conjecture_report, ModeSet,
};
use workstats_core::work::{ground_state_vector, work_statistics, InitialCondition};

use crate::config::{EngineKind, RunConfig};
use crate::output::{col, fmt_float, write_grid, Column, CsvWriter};
use crate::CliError;

fn engine_err(e: Error) -> CliError {
    CliError::Engine(e.to_string())
}

fn base_name<'a>(cfg: &'a RunConfig, command: &'a str) -> &'a str {
    if cfg.output.name.is_empty() {
        command
    } else {
        &cfg.output.name
    }
}

fn decompose_cfg(
    h: &workstats_core::CMatrix,
    cfg: &RunConfig,
) -> Result<SpectralData, CliError> {
    if cfg.numerics.degeneracy_tol > 0.0 {
        eigendecompose(h, cfg.numerics.degeneracy_tol).map_err(engine_err)
    } else {
        eigendecompose_auto(h).map_err(engine_err)
    }
}

/// One row of the thermodynamic sweep, produced by either engine.
struct SweepRow {
    lambda0: f64,
    mean_mz_per_site: f64,
    var_mz_per_site: f64,
    chi_m_per_site: f64,
    chi_tilde_per_site: f64,
    mean_work: f64,
    delta_f: f64,
    lag: f64,
    jarzynski_residual: f64,
}

fn sweep_columns() -> Vec<Column> {
    vec![
        col("lambda0", "dimensionless"),
        col("mean_mz_per_site", "dimensionless"),
        col("var_mz_per_site", "dimensionless"),
        col("chi_m_per_site", "dimensionless"),
        col("chi_tilde_per_site", "dimensionless"),
        col("mean_work", "J"),
        col("delta_f", "J"),
        col("lag", "dimensionless"),
        col("jarzynski_residual", "dimensionless"),
    ]
}

fn sweep_row_tfim(
    cfg: &RunConfig,
    modes: &ModeSet,
    beta: f64,
    l0: f64,
) -> Result<SweepRow, CliError> {
    let dlam = cfg.quench.lambda_tau - cfg.quench.lambda0;
    let n = modes.n_sites() as f64;
    let (mean, var) = tfim::magnetization_from_work(modes, l0, beta, 1e-2).map_err(engine_err)?;
    let mut inner: Option<Error> = None;
    let fd = finite_diff(
        |l| match tfim::magnetization_from_work(modes, l, beta, 1e-2) {
            Ok((m, _)) => m,
            Err(e) => {
                inner = Some(e);
                f64::NAN
            }
        },
        l0,
        1,
        cfg.numerics.fd_step,
    );
    if let Some(e) = inner {
        return Err(engine_err(e));
    }
    let chi_m = fd.map_err(engine_err)?.value;
    let lz0 = tfim::log_partition_function(modes, l0, beta);
    let lzt = tfim::log_partition_function(modes, l0 + dlam, beta);
    let delta_f = free_energy_diff(lz0, lzt, beta);
    let k = tfim::cumulants_analytic(modes, l0, l0 + dlam, beta, 1).map_err(engine_err)?;
    let mean_work = k.get(1);
    let log_chi_ib =
        tfim::log_chi(modes, l0, l0 + dlam, beta, Complex64::new(0.0, beta)).map_err(engine_err)?;
    let jarzynski_residual = ((log_chi_ib.re + beta * delta_f).exp() - 1.0).abs();
    Ok(SweepRow {
        lambda0: l0,
        mean_mz_per_site: mean / n,
        var_mz_per_site: var / n,
        chi_m_per_site: chi_m / n,
        chi_tilde_per_site: (chi_m - beta * var) / n,
        mean_work,
        delta_f,
        lag: beta * (mean_work - delta_f),
        jarzynski_residual,
    })
}

fn sweep_row_exact(
    cfg: &RunConfig,
    model: &ModelKind,
    n_sites: usize,
    beta: f64,
    l0: f64,
) -> Result<SweepRow, CliError> {
    let dlam = cfg.quench.lambda_tau - cfg.quench.lambda0;
    let cap = cfg.numerics.dense_cap;
    let n = n_sites as f64;

    let h0 = build_hamiltonian_capped(model, n_sites, l0, cap).map_err(engine_err)?;
    let ht = build_hamiltonian_capped(model, n_sites, l0 + dlam, cap).map_err(engine_err)?;
    let s0 = decompose_cfg(&h0, cfg)?;
    let st = decompose_cfg(&ht, cfg)?;
    let g0 = gibbs_state(&s0, beta).map_err(engine_err)?;
    let gt = gibbs_state(&st, beta).map_err(engine_err)?;
    let (mean, var) =
        magnetization_mean_var_gibbs(model, n_sites, l0, beta, cap).map_err(engine_err)?;
    let chi_m = susceptibility_order_j(model, n_sites, l0, beta, 1, cfg.numerics.fd_step, cap)
        .map_err(engine_err)?
        .value;
    let chi_tilde = chi_tilde_difference(model, n_sites, l0, beta, cfg.numerics.fd_step, cap)
        .map_err(engine_err)?;
    let ws = work_statistics(&s0, &st, InitialCondition::Gibbs { beta }).map_err(engine_err)?;
    let rep = jarzynski_check(&ws, g0.log_z, gt.log_z, beta);
    let mean_work = ws.mean_work();
    Ok(SweepRow {
        lambda0: l0,
        mean_mz_per_site: mean / n,
        var_mz_per_site: var / n,
        chi_m_per_site: chi_m / n,
        chi_tilde_per_site: chi_tilde / n,
        mean_work,
        delta_f: rep.delta_f,
        lag: beta * (mean_work - rep.delta_f),
        jarzynski_residual: rep.residual,
    })
}

fn write_sweep_file(
    cfg: &RunConfig,
    out_dir: &Path,
    engine_label: &str,
    n_sites: usize,
    beta: f64,
    suffix: &str,
    rows: Vec<SweepRow>,
) -> Result<PathBuf, CliError> {
    let file = format!("{}{suffix}.{engine_label}.csv", base_name(cfg, "sweep"));
    let mut w = CsvWriter::create(
        out_dir,
        &file,
        "sweep",
        cfg,
        &sweep_columns(),
        &[
            ("engine".into(), engine_label.into()),
            ("axis.n_sites".into(), n_sites.to_string()),
            ("axis.beta".into(), beta.to_string()),
        ],
    )?;
    for r in rows {
        w.row_values(&[
            r.lambda0,
            r.mean_mz_per_site,
            r.var_mz_per_site,
            r.chi_m_per_site,
            r.chi_tilde_per_site,
            r.mean_work,
            r.delta_f,
            r.lag,
            r.jarzynski_residual,
        ])?;
    }
    w.finish()
}

pub fn run_sweep(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let grid = cfg.lambda0_grid();
    let mut files = Vec::new();
    for (n_sites, beta, suffix) in cfg.sweep_axes() {
        if matches!(cfg.engine.kind, EngineKind::Tfim | EngineKind::Both) {
            let modes = ModeSet::new(n_sites).map_err(engine_err)?;
            let rows: Result<Vec<SweepRow>, CliError> = grid
                .par_iter()
                .map(|&l0| sweep_row_tfim(cfg, &modes, beta, l0))
                .collect();
            files.push(write_sweep_file(
                cfg, out_dir, "tfim", n_sites, beta, &suffix, rows?,
            )?);
        }
        if matches!(cfg.engine.kind, EngineKind::Exact | EngineKind::Both) {
            let model = cfg.quench.model.to_model();
            let rows: Result<Vec<SweepRow>, CliError> = grid
                .par_iter()
                .map(|&l0| sweep_row_exact(cfg, &model, n_sites, beta, l0))
                .collect();
            files.push(write_sweep_file(
                cfg, out_dir, "exact", n_sites, beta, &suffix, rows?,
            )?);
        }
    }
    Ok(files)
}

fn cumulant_columns(n_max: usize) -> Vec<Column> {
    const UNITS: [&str; 10] = [
        "J", "J^2", "J^3", "J^4", "J^5", "J^6", "J^7", "J^8", "J^9", "J^10",
    ];
    const NAMES: [&str; 10] = ["K1", "K2", "K3", "K4", "K5", "K6", "K7", "K8", "K9", "K10"];
    let mut cols = vec![col("lambda0", "dimensionless")];
    for i in 0..n_max {
        cols.push(col(NAMES[i], UNITS[i]));
    }
    cols.push(col("variance_per_site", "J^2"));
    cols.push(col("skewness_gamma_sqrt_n", "dimensionless"));
    cols.push(col("skewness_mag_normalized", "dimensionless"));
    cols
}

pub fn run_cumulants(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let n_max = cfg.numerics.cumulant_max.clamp(3, 10);
    let grid = cfg.lambda0_grid();
    let dlam = cfg.quench.lambda_tau - cfg.quench.lambda0;
    let mut files = Vec::new();

    for (n_sites, beta, suffix) in cfg.sweep_axes() {
        let n = n_sites as f64;
        let emit = |rows: Vec<Vec<f64>>, label: &str| -> Result<PathBuf, CliError> {
            let file = format!("{}{suffix}.{label}.csv", base_name(cfg, "cumulants"));
            let mut w = CsvWriter::create(
                out_dir,
                &file,
                "cumulants",
                cfg,
                &cumulant_columns(n_max),
                &[
                    ("engine".into(), label.into()),
                    ("axis.n_sites".into(), n_sites.to_string()),
                    ("axis.beta".into(), beta.to_string()),
                ],
            )?;
            for r in rows {
                w.row_values(&r)?;
            }
            w.finish()
        };

        let assemble = |l0: f64, k: &workstats_core::CumulantSet| -> Vec<f64> {
            let mut row = vec![l0];
            for i in 1..=n_max {
                row.push(k.get(i));
            }
            let (k2, k3) = (k.get(2), k.get(3));
            row.push(k2 / n);
            row.push(k3 / k2.powf(1.5) * n.sqrt());
            row.push(k3 / (k2 / (dlam * dlam)).powf(1.5));
            row
        };

        if matches!(cfg.engine.kind, EngineKind::Tfim | EngineKind::Both) {
            let modes = ModeSet::new(n_sites).map_err(engine_err)?;
            let rows: Result<Vec<Vec<f64>>, CliError> = grid
                .par_iter()
                .map(|&l0| {
                    let k = tfim::cumulants_analytic(&modes, l0, l0 + dlam, beta, n_max)
                        .map_err(engine_err)?;
                    Ok(assemble(l0, &k))
                })
                .collect();
            files.push(emit(rows?, "tfim")?);
        }
        if matches!(cfg.engine.kind, EngineKind::Exact | EngineKind::Both) {
            let model = cfg.quench.model.to_model();
            let rows: Result<Vec<Vec<f64>>, CliError> = grid
                .par_iter()
                .map(|&l0| {
                    let h0 =
                        build_hamiltonian_capped(&model, n_sites, l0, cfg.numerics.dense_cap)
                            .map_err(engine_err)?;
                    let ht = build_hamiltonian_capped(
                        &model,
                        n_sites,
                        l0 + dlam,
                        cfg.numerics.dense_cap,
                    )
                    .map_err(engine_err)?;
                    let s0 = decompose_cfg(&h0, cfg)?;
                    let st = decompose_cfg(&ht, cfg)?;
                    let ws = work_statistics(&s0, &st, InitialCondition::Gibbs { beta })
                        .map_err(engine_err)?;
                    let k = ws.cumulants(n_max).map_err(engine_err)?;
                    Ok(assemble(l0, &k))
                })
                .collect();
            files.push(emit(rows?, "exact")?);
        }
    }
    Ok(files)
}

pub fn run_chi_grid(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if cfg.engine.kind == EngineKind::Exact {
        return Err(CliError::Config(
            "chi-grid runs on the tfim engine; set engine.kind = \"tfim\"".into(),
        ));
    }
    let modes = ModeSet::new(cfg.quench.n_sites).map_err(engine_err)?;
    let dlam = cfg.quench.lambda_tau - cfg.quench.lambda0;
    let grid = chi_grid(
        &modes,
        cfg.quench.beta,
        &cfg.lambda0_grid(),
        &cfg.u_grid(),
        dlam,
    )
    .map_err(engine_err)?;
    let file = format!("{}.grid.csv", base_name(cfg, "chi-grid"));
    Ok(vec![write_grid(out_dir, &file, "chi-grid", cfg, &grid, &[])?])
}

pub fn run_levelset(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if cfg.engine.kind == EngineKind::Exact {
        return Err(CliError::Config(
            "levelset runs on the tfim engine; set engine.kind = \"tfim\"".into(),
        ));
    }
    let modes = ModeSet::new(cfg.quench.n_sites).map_err(engine_err)?;
    let dlam = cfg.quench.lambda_tau - cfg.quench.lambda0;
    let lambda0 = cfg.lambda0_grid();
    let columns = vec![
        col("level_c", "dimensionless"),
        col("lambda0", "dimensionless"),
        col("u_c", "1/J"),
        col("du_c_dlambda0", "1/J"),
    ];
    let file = format!("{}.csv", base_name(cfg, "levelset"));
    let mut w = CsvWriter::create(out_dir, &file, "levelset", cfg, &columns, &[])?;
    for &c in &cfg.levels.values {
        let curve = level_set(
            &modes,
            cfg.quench.beta,
            &lambda0,
            cfg.sweep.u_max,
            cfg.sweep.u_steps,
            dlam,
            c,
        )
        .map_err(engine_err)?;
        let deriv = level_set_derivative(&curve, &lambda0);
        for (i, &l0) in lambda0.iter().enumerate() {
            w.row(&[Some(c), Some(l0), curve[i], deriv[i]])?;
        }
    }
    Ok(vec![w.finish()?])
}

pub fn run_scaling_report(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let s = &cfg.scaling;
    let rep = scaling_conjecture_report(
        s.n1,
        s.dlam1,
        s.n2,
        s.dlam2,
        cfg.quench.beta,
        &cfg.lambda0_grid(),
        &cfg.u_grid(),
    )
    .map_err(engine_err)?;
    let base = base_name(cfg, "scaling");
    let meta_a = [("grid".into(), format!("N={} dlam={}", s.n1, s.dlam1))];
    let meta_b = [("grid".into(), format!("N={} dlam={}", s.n2, s.dlam2))];
    let mut files = vec![
        write_grid(
            out_dir,
            &format!("{base}.a.grid.csv"),
            "scaling-report",
            cfg,
            &rep.grid_a,
            &meta_a,
        )?,
        write_grid(
            out_dir,
            &format!("{base}.b.grid.csv"),
            "scaling-report",
            cfg,
            &rep.grid_b,
            &meta_b,
        )?,
    ];
    let diff = workstats_core::tfim::ChiGrid {
        lambda0: rep.grid_a.lambda0.clone(),
        u: rep.grid_a.u.clone(),
        re_chi: rep
            .grid_a
            .re_chi
            .iter()
            .zip(&rep.grid_b.re_chi)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| a - b).collect())
            .collect(),
    };
    files.push(write_grid(
        out_dir,
        &format!("{base}.diff.grid.csv"),
        "scaling-report",
        cfg,
        &diff,
        &[("grid".into(), "pointwise difference a - b".into())],
    )?);

    let report_path = out_dir.join(format!("{base}.report.txt"));
    let body = format!(
        "scaling conjecture report\n\
         grid a: N = {}, dlam = {}\n\
         grid b: N = {}, dlam = {}\n\
         beta = {}\n\
         N*dlam = {}\n\
         sup-norm |Re chi_a - Re chi_b| = {}\n",
        s.n1,
        s.dlam1,
        s.n2,
        s.dlam2,
        cfg.quench.beta,
        fmt_float(s.n1 as f64 * s.dlam1),
        fmt_float(rep.sup_norm_diff),
    );
    std::fs::write(&report_path, body).map_err(|e| CliError::Io(e.to_string()))?;
    files.push(report_path);
    Ok(files)
}

pub fn run_sudden_bound(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let model = cfg.quench.model.to_model();
    let n_sites = cfg.quench.n_sites;
    let cap = cfg.numerics.dense_cap;
    if n_sites > cap {
        return Err(CliError::Config(format!(
            "sudden-bound builds dense operators and needs n_sites <= dense cap {cap} (got {n_sites})"
        )));
    }
    let h0 = build_hamiltonian_capped(&model, n_sites, cfg.quench.lambda0, cap)
        .map_err(engine_err)?;
    let ht = build_hamiltonian_capped(&model, n_sites, cfg.quench.lambda_tau, cap)
        .map_err(engine_err)?;
    let b = quench_operator(&model, n_sites).map_err(engine_err)?;
    let s0 = decompose_cfg(&h0, cfg)?;
    let st = decompose_cfg(&ht, cfg)?;
    let psi = ground_state_vector(&s0);
    let bound = workstats_core::sudden::sudden_quench_bound(&st, &b, &psi, cfg.quench.lambda_tau);

    let columns = vec![
        col("level_index", "index"),
        col("energy", "J"),
        col("transition_element", "dimensionless"),
    ];
    let tau_str = match bound.tau_max {
        Some(t) => fmt_float(t),
        None => "unbounded".into(),
    };
    let meta = [
        ("tau_max [1/J]".to_string(), tau_str),
        (
            "max_transition_element".to_string(),
            fmt_float(bound.max_element),
        ),
        (
            "initial_state".to_string(),
            "ground state of H(lambda0)".into(),
        ),
    ];
    let file = format!("{}.csv", base_name(cfg, "sudden-bound"));
    let mut w = CsvWriter::create(out_dir, &file, "sudden-bound", cfg, &columns, &meta)?;
    for (i, &a) in bound.per_level.iter().enumerate() {
        w.row_values(&[i as f64, st.levels()[i], a])?;
    }
    Ok(vec![w.finish()?])
}

/// Place the exact-engine chi-tilde series next to the difference form, for
/// small systems (used by `validate` and available through `sweep` data).
pub fn chi_tilde_both_forms(
    cfg: &RunConfig,
    model: &ModelKind,
    l0: f64,
) -> Result<(f64, f64), CliError> {
    let diff = chi_tilde_difference(
        model,
        cfg.quench.n_sites,
        l0,
        cfg.quench.beta,
        cfg.numerics.fd_step,
        cfg.numerics.dense_cap,
    )
    .map_err(engine_err)?;
    let series = chi_tilde_series(
        model,
        cfg.quench.n_sites,
        l0,
        cfg.quench.beta,
        SeriesOptions {
            n_cut: cfg.numerics.series_n_cut,
            rel_tol: cfg.numerics.series_rel_tol,
        },
        cfg.numerics.dense_cap,
    )
    .map_err(engine_err)?;
    Ok((diff, series.value))
}
