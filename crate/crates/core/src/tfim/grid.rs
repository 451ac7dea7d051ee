//! Re chi(u, lambda0) grids, equipotential (level-set) curves and the
//! scaling-conjecture comparison report.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::linspace;

use super::{chi_product, ModeSet};

/// Re chi on a (lambda0, u) grid; rows follow `lambda0`, columns follow `u`.
#[derive(Debug, Clone)]
pub struct ChiGrid {
    pub lambda0: Vec<f64>,
    pub u: Vec<f64>,
    pub re_chi: Vec<Vec<f64>>,
}

impl ChiGrid {
    pub fn sup_norm_diff(&self, other: &ChiGrid) -> f64 {
        self.re_chi
            .iter()
            .flatten()
            .zip(other.re_chi.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Evaluate Re chi(u, lambda0 + dlam quench) columnwise.
pub fn chi_grid(
    modes: &ModeSet,
    beta: f64,
    lambda0_grid: &[f64],
    u_grid: &[f64],
    dlam: f64,
) -> Result<ChiGrid> {
    let mut re_chi = Vec::with_capacity(lambda0_grid.len());
    for &l0 in lambda0_grid {
        let mut row = Vec::with_capacity(u_grid.len());
        for &u in u_grid {
            let chi = chi_product(modes, l0, l0 + dlam, beta, Complex64::new(u, 0.0))?;
            row.push(chi.re);
        }
        re_chi.push(row);
    }
    Ok(ChiGrid {
        lambda0: lambda0_grid.to_vec(),
        u: u_grid.to_vec(),
        re_chi,
    })
}

/// Smallest positive root u_c with Re chi(u_c) = c for one lambda0 column;
/// `None` when the level is never crossed on the scan range.
fn column_root(
    modes: &ModeSet,
    beta: f64,
    lambda0: f64,
    dlam: f64,
    c: f64,
    u_scan: &[f64],
) -> Result<Option<f64>> {
    let f = |u: f64| -> Result<f64> {
        Ok(chi_product(modes, lambda0, lambda0 + dlam, beta, Complex64::new(u, 0.0))?.re - c)
    };
    // chi(0) = 1: the c = 1 level sits exactly at u = 0
    let mut prev_u = 0.0;
    let mut prev_f = 1.0 - c;
    if prev_f.abs() < 1e-12 {
        return Ok(Some(0.0));
    }
    for &u in u_scan.iter().filter(|&&u| u > 0.0) {
        let fu = f(u)?;
        if fu == 0.0 {
            return Ok(Some(u));
        }
        if prev_f.signum() != fu.signum() {
            // bisect the bracket down to ~1e-12 in u
            let (mut lo, mut hi) = (prev_u, u);
            let mut flo = prev_f;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid)?;
                if fm == 0.0 || (hi - lo) < 1e-13 {
                    return Ok(Some(mid));
                }
                if flo.signum() != fm.signum() {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
        prev_u = u;
        prev_f = fu;
    }
    Ok(None)
}

/// Equipotential curve u_c(lambda0): smallest positive root per column,
/// `None` marking columns where the level is not crossed.
pub fn level_set(
    modes: &ModeSet,
    beta: f64,
    lambda0_grid: &[f64],
    u_max: f64,
    scan_steps: usize,
    dlam: f64,
    c: f64,
) -> Result<Vec<Option<f64>>> {
    if !(-1.0..=1.0).contains(&c) {
        return Err(Error::InvalidParameter(format!(
            "level must lie in [-1, 1], got {c}"
        )));
    }
    if scan_steps < 2 || u_max <= 0.0 {
        return Err(Error::RootBracketFailure { level: c });
    }
    let u_scan = linspace(0.0, u_max, scan_steps);
    lambda0_grid
        .iter()
        .map(|&l0| column_root(modes, beta, l0, dlam, c, &u_scan))
        .collect()
}

/// d u_c / d lambda0 along a level curve by central differences on the
/// sweep grid; one-sided at the ends and `None` next to gaps.
pub fn level_set_derivative(curve: &[Option<f64>], lambda0_grid: &[f64]) -> Vec<Option<f64>> {
    let n = curve.len();
    (0..n)
        .map(|i| {
            curve[i]?;
            let (il, ir) = (i.saturating_sub(1), (i + 1).min(n - 1));
            if il == ir {
                return None;
            }
            match (curve[il], curve[ir]) {
                (Some(a), Some(b)) => {
                    let dl = lambda0_grid[ir] - lambda0_grid[il];
                    Some((b - a) / dl)
                }
                _ => None,
            }
        })
        .collect()
}

/// Two grids related by dlam -> alpha dlam, N -> N/alpha plus their sup-norm
/// difference. This is an exploration report: the conjecture carries no
/// tolerance, so nothing here fails when the grids disagree.
#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub grid_a: ChiGrid,
    pub grid_b: ChiGrid,
    pub sup_norm_diff: f64,
}

pub fn scaling_conjecture_report(
    n1: usize,
    dlam1: f64,
    n2: usize,
    dlam2: f64,
    beta: f64,
    lambda0_grid: &[f64],
    u_grid: &[f64],
) -> Result<ScalingReport> {
    let prod1 = n1 as f64 * dlam1;
    let prod2 = n2 as f64 * dlam2;
    if (prod1 - prod2).abs() > 1e-9 * prod1.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "scaling report requires N1*dlam1 = N2*dlam2, got {prod1} vs {prod2}"
        )));
    }
    let grid_a = chi_grid(&ModeSet::new(n1)?, beta, lambda0_grid, u_grid, dlam1)?;
    let grid_b = chi_grid(&ModeSet::new(n2)?, beta, lambda0_grid, u_grid, dlam2)?;
    let sup_norm_diff = grid_a.sup_norm_diff(&grid_b);
    Ok(ScalingReport {
        grid_a,
        grid_b,
        sup_norm_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linspace;

    #[test]
    fn unit_level_sits_at_zero_for_every_column() {
        let modes = ModeSet::new(10).unwrap();
        let grid = linspace(0.1, 1.9, 8);
        let curve = level_set(&modes, 10.0, &grid, 3.0, 40, 0.1, 1.0).unwrap();
        for root in curve {
            assert_eq!(root, Some(0.0));
        }
    }

    #[test]
    fn grid_is_even_in_u() {
        let modes = ModeSet::new(10).unwrap();
        let l0 = linspace(0.5, 1.5, 5);
        let u = linspace(-4.0, 4.0, 17);
        let g = chi_grid(&modes, 20.0, &l0, &u, 0.1).unwrap();
        for row in &g.re_chi {
            for (i, v) in row.iter().enumerate() {
                let mirrored = row[row.len() - 1 - i];
                assert!((v - mirrored).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn level_roots_are_roots() {
        let modes = ModeSet::new(10).unwrap();
        let grid = linspace(0.3, 1.7, 6);
        let c = 0.5;
        let curve = level_set(&modes, 20.0, &grid, 6.0, 120, 0.1, c).unwrap();
        let mut found = 0;
        for (l0, root) in grid.iter().zip(&curve) {
            if let Some(u) = root {
                let chi =
                    chi_product(&modes, *l0, l0 + 0.1, 20.0, Complex64::new(*u, 0.0)).unwrap();
                assert!((chi.re - c).abs() < 1e-9, "Re chi = {} at u = {u}", chi.re);
                found += 1;
            }
        }
        assert!(found > 0, "level 0.5 never crossed on the sweep");
    }

    #[test]
    fn identical_parameters_give_identically_zero_difference() {
        let l0 = linspace(0.2, 1.8, 6);
        let u = linspace(0.0, 3.0, 11);
        let rep = scaling_conjecture_report(10, 0.1, 10, 0.1, 50.0, &l0, &u).unwrap();
        assert_eq!(rep.sup_norm_diff, 0.0);
    }

    #[test]
    fn mismatched_products_are_rejected() {
        let l0 = [0.5];
        let u = [0.0, 1.0];
        assert!(scaling_conjecture_report(10, 0.1, 20, 0.1, 50.0, &l0, &u).is_err());
    }

    #[test]
    fn level_curve_derivative_peaks_near_the_critical_point() {
        // the slope of an equipotential curve is an order of magnitude
        // larger around lambda0 = 1 than deep in the paramagnetic phase,
        // and sharper for the larger chain at matched N * dlam
        let grid = linspace(0.8, 1.9, 45);
        let windowed_max = |deriv: &[Option<f64>], lo: f64, hi: f64| -> f64 {
            grid.iter()
                .zip(deriv)
                .filter(|(l, _)| **l >= lo && **l <= hi)
                .filter_map(|(_, d)| d.map(f64::abs))
                .fold(0.0, f64::max)
        };
        let peak_for = |n: usize, dlam: f64| -> (f64, f64) {
            let modes = ModeSet::new(n).unwrap();
            let curve = level_set(&modes, 100.0, &grid, 8.0, 160, dlam, 0.5).unwrap();
            let deriv = level_set_derivative(&curve, &grid);
            (
                windowed_max(&deriv, 0.85, 1.15),
                windowed_max(&deriv, 1.5, 1.9),
            )
        };
        let (near_big, far_big) = peak_for(100, 0.01);
        let (near_small, far_small) = peak_for(10, 0.1);
        assert!(near_big > 5.0 * far_big, "{near_big} vs {far_big}");
        assert!(near_small > 5.0 * far_small, "{near_small} vs {far_small}");
        assert!(
            near_big > near_small,
            "larger chain should be sharper: {near_big} vs {near_small}"
        );
    }

    #[test]
    fn derivative_skips_gaps() {
        let curve = vec![Some(1.0), Some(1.2), None, Some(1.6)];
        let grid = vec![0.0, 0.1, 0.2, 0.3];
        let d = level_set_derivative(&curve, &grid);
        assert!(d[0].is_some());
        assert!(d[1].is_none()); // right neighbour is a gap
        assert!(d[2].is_none());
        assert!(d[3].is_none()); // left neighbour is a gap
    }
}
