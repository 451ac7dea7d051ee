//! Moment -> cumulant conversion and the `CumulantSet` container.
//!
//! The recursion K_n = mu_n - sum_{m=1}^{n-1} C(n-1, m-1) K_m mu_{n-m} is
//! applied to *central* moments (with the mean restored as K_1 afterwards),
//! which avoids the large cancellations the raw-moment form suffers when the
//! mean dominates the spread.

use crate::error::{Error, Result};

/// Which engine produced a set of cumulants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineTag {
    Exact,
    TfimAnalytic,
    Reference,
}

/// Cumulants K_1..K_max of a real distribution (K_n carries units J^n).
#[derive(Debug, Clone)]
pub struct CumulantSet {
    values: Vec<f64>,
    source: EngineTag,
}

impl CumulantSet {
    pub fn new(values: Vec<f64>, source: EngineTag) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientOrder { have: 0, need: 1 });
        }
        Ok(Self { values, source })
    }

    pub fn max_order(&self) -> usize {
        self.values.len()
    }

    /// K_n, 1-indexed.
    pub fn get(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source(&self) -> EngineTag {
        self.source
    }

    pub fn mean(&self) -> f64 {
        self.values[0]
    }

    pub fn variance(&self) -> Option<f64> {
        self.values.get(1).copied()
    }

    /// Dimensionless skewness K_3 / K_2^{3/2}.
    pub fn skewness(&self) -> Option<f64> {
        if self.values.len() < 3 {
            return None;
        }
        let k2 = self.values[1];
        if k2 <= 0.0 {
            return None;
        }
        Some(self.values[2] / k2.powf(1.5))
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Central moments mu'_2..mu'_max from raw moments mu_1..mu_max.
fn central_from_raw(raw: &[f64]) -> Vec<f64> {
    let mean = raw[0];
    let n_max = raw.len();
    // mu'_n = sum_{k=0}^n C(n,k) (-mean)^k mu_{n-k}, with mu_0 = 1.
    let mut central = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = 0.0;
        for k in 0..=n {
            let raw_nk = if n == k { 1.0 } else { raw[n - k - 1] };
            acc += binomial(n, k) * (-mean).powi(k as i32) * raw_nk;
        }
        central.push(acc);
    }
    central
}

/// Cumulants from central moments (central[0] = mu'_1 ~ 0 by construction).
fn cumulants_from_central(mean: f64, central: &[f64]) -> Vec<f64> {
    let n_max = central.len();
    let mut k = vec![0.0f64; n_max];
    k[0] = 0.0;
    for n in 2..=n_max {
        let mut acc = central[n - 1];
        for m in 1..n {
            acc -= binomial(n - 1, m - 1) * k[m - 1] * central[n - m - 1];
        }
        k[n - 1] = acc;
    }
    k[0] = mean;
    k
}

/// Cumulants K_1..K_max from raw moments <X>, <X^2>, ... <X^max>.
pub fn cumulants_from_moments(moments: &[f64], source: EngineTag) -> Result<CumulantSet> {
    if moments.is_empty() {
        return Err(Error::InsufficientOrder { have: 0, need: 1 });
    }
    let central = central_from_raw(moments);
    CumulantSet::new(cumulants_from_central(moments[0], &central), source)
}

/// Cumulants of a discrete distribution given as (weight, value) atoms.
///
/// Central moments are accumulated directly about the mean, so there is no
/// binomial-transform cancellation even for nearly degenerate distributions.
pub fn cumulants_from_atoms(atoms: &[(f64, f64)], n_max: usize, source: EngineTag) -> Result<CumulantSet> {
    if n_max == 0 {
        return Err(Error::InsufficientOrder { have: 0, need: 1 });
    }
    let mass: f64 = atoms.iter().map(|&(w, _)| w).sum();
    let mean: f64 = atoms.iter().map(|&(w, x)| w * x).sum::<f64>() / mass;
    let mut central = vec![0.0f64; n_max];
    for &(w, x) in atoms {
        let d = x - mean;
        let mut p = 1.0;
        for c in central.iter_mut() {
            p *= d;
            *c += w * p;
        }
    }
    for c in central.iter_mut() {
        *c /= mass;
    }
    CumulantSet::new(cumulants_from_central(mean, &central), source)
}

/// Raw moments <X^n>, n = 1..n_max, of a discrete (weight, value) distribution.
pub fn raw_moments_from_atoms(atoms: &[(f64, f64)], n_max: usize) -> Vec<f64> {
    let mass: f64 = atoms.iter().map(|&(w, _)| w).sum();
    let mut raw = vec![0.0f64; n_max];
    for &(w, x) in atoms {
        let mut p = 1.0;
        for r in raw.iter_mut() {
            p *= x;
            *r += w * p;
        }
    }
    for r in raw.iter_mut() {
        *r /= mass;
    }
    raw
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn point_mass_has_only_first_cumulant() {
        let w: f64 = 2.75;
        let moments: Vec<f64> = (1..=6).map(|n| w.powi(n)).collect();
        let k = cumulants_from_moments(&moments, EngineTag::Reference).unwrap();
        assert_relative_eq!(k.get(1), w, epsilon = 1e-12);
        for n in 2..=6 {
            assert_relative_eq!(k.get(n), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn symmetric_two_atom_distribution() {
        // atoms {+1, 1/2}, {-1, 1/2}: K1 = 0, K2 = 1, K3 = 0, K4 = -2
        // (hand evaluation of the recursion: mu = [0, 1, 0, 1]).
        let moments = vec![0.0, 1.0, 0.0, 1.0];
        let k = cumulants_from_moments(&moments, EngineTag::Reference).unwrap();
        assert_relative_eq!(k.get(1), 0.0, epsilon = 1e-14);
        assert_relative_eq!(k.get(2), 1.0, epsilon = 1e-14);
        assert_relative_eq!(k.get(3), 0.0, epsilon = 1e-14);
        assert_relative_eq!(k.get(4), -2.0, epsilon = 1e-14);

        let atoms = [(0.5, 1.0), (0.5, -1.0)];
        let k2 = cumulants_from_atoms(&atoms, 4, EngineTag::Reference).unwrap();
        for n in 1..=4 {
            assert_relative_eq!(k2.get(n), k.get(n), epsilon = 1e-14);
        }
    }

    #[test]
    fn empty_moments_rejected() {
        assert!(matches!(
            cumulants_from_moments(&[], EngineTag::Reference),
            Err(Error::InsufficientOrder { .. })
        ));
    }

    #[test]
    fn atoms_and_raw_moment_paths_agree() {
        let atoms = [(0.2, -1.3), (0.5, 0.4), (0.3, 2.2)];
        let raw = raw_moments_from_atoms(&atoms, 6);
        let a = cumulants_from_moments(&raw, EngineTag::Reference).unwrap();
        let b = cumulants_from_atoms(&atoms, 6, EngineTag::Reference).unwrap();
        for n in 1..=6 {
            assert_relative_eq!(a.get(n), b.get(n), epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    proptest! {
        /// K_1 shifts additively, K_{n>=2} are shift invariant.
        #[test]
        fn cumulants_shift_invariance(
            shift in -3.0f64..3.0,
            ws in proptest::collection::vec(0.05f64..1.0, 2..6),
            xs in proptest::collection::vec(-2.0f64..2.0, 6),
        ) {
            let atoms: Vec<(f64, f64)> =
                ws.iter().zip(&xs).map(|(&w, &x)| (w, x)).collect();
            let shifted: Vec<(f64, f64)> =
                atoms.iter().map(|&(w, x)| (w, x + shift)).collect();
            let a = cumulants_from_atoms(&atoms, 5, EngineTag::Reference).unwrap();
            let b = cumulants_from_atoms(&shifted, 5, EngineTag::Reference).unwrap();
            prop_assert!((b.get(1) - a.get(1) - shift).abs() < 1e-9);
            for n in 2..=5 {
                prop_assert!((b.get(n) - a.get(n)).abs() < 1e-8);
            }
        }

        /// K_n scales as a^n under X -> aX, and K_2 >= 0.
        #[test]
        fn cumulants_homogeneity(
            a in 0.1f64..2.0,
            ws in proptest::collection::vec(0.05f64..1.0, 3..6),
            xs in proptest::collection::vec(-2.0f64..2.0, 6),
        ) {
            let atoms: Vec<(f64, f64)> =
                ws.iter().zip(&xs).map(|(&w, &x)| (w, x)).collect();
            let scaled: Vec<(f64, f64)> =
                atoms.iter().map(|&(w, x)| (w, a * x)).collect();
            let ka = cumulants_from_atoms(&atoms, 4, EngineTag::Reference).unwrap();
            let kb = cumulants_from_atoms(&scaled, 4, EngineTag::Reference).unwrap();
            prop_assert!(ka.get(2) >= -1e-12);
            for n in 1..=4 {
                prop_assert!((kb.get(n) - a.powi(n as i32) * ka.get(n)).abs() < 1e-8);
            }
        }
    }
}
