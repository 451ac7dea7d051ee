//! Small numerical utilities: Richardson-extrapolated central differences
//! and log-domain summation helpers.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A finite-difference value together with an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct FdEstimate {
    pub value: f64,
    pub error_estimate: f64,
}

struct Stencil {
    offsets: &'static [i32],
    coeffs: &'static [f64],
}

// Central stencils with O(h^2) leading truncation error.
const STENCILS: [Stencil; 4] = [
    Stencil {
        offsets: &[-1, 1],
        coeffs: &[-0.5, 0.5],
    },
    Stencil {
        offsets: &[-1, 0, 1],
        coeffs: &[1.0, -2.0, 1.0],
    },
    Stencil {
        offsets: &[-2, -1, 1, 2],
        coeffs: &[-0.5, 1.0, -1.0, 0.5],
    },
    Stencil {
        offsets: &[-2, -1, 0, 1, 2],
        coeffs: &[1.0, -4.0, 6.0, -4.0, 1.0],
    },
];

fn apply_stencil(f: &mut impl FnMut(f64) -> f64, x: f64, order: usize, h: f64) -> (f64, f64) {
    let st = &STENCILS[order - 1];
    let mut acc = 0.0;
    let mut abs_acc = 0.0;
    for (&o, &c) in st.offsets.iter().zip(st.coeffs) {
        let v = f(x + o as f64 * h);
        acc += c * v;
        abs_acc += (c * v).abs();
    }
    let scale = h.powi(order as i32);
    (acc / scale, abs_acc / scale)
}

/// Central finite difference of `order` in {1..4} with one Richardson step
/// (steps h and h/2).
///
/// The error estimate combines the Richardson defect, an f64 cancellation
/// bound and, for first derivatives, a smoothness probe that compares the
/// one-sided slopes at the two step sizes.
pub fn finite_diff(
    mut f: impl FnMut(f64) -> f64,
    x: f64,
    order: usize,
    h: f64,
) -> Result<FdEstimate> {
    if !(1..=4).contains(&order) {
        return Err(Error::InvalidParameter(format!(
            "finite_diff supports orders 1..=4, got {order}"
        )));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "finite_diff step must be positive and finite, got {h}"
        )));
    }
    let (d_h, abs_h) = apply_stencil(&mut f, x, order, h);
    let (d_h2, abs_h2) = apply_stencil(&mut f, x, order, h / 2.0);
    // Both stencils have O(h^2) error; eliminate it.
    let value = (4.0 * d_h2 - d_h) / 3.0;
    let truncation = (d_h2 - d_h).abs() / 3.0;
    let roundoff = f64::EPSILON * abs_h.max(abs_h2);

    let mut estimate = truncation + roundoff;
    if order == 1 {
        // One-sided slope disagreement shrinks like h for smooth f; a
        // persistent gap signals a kink the symmetric stencil cannot see.
        let side = |hh: f64, f: &mut dyn FnMut(f64) -> f64| {
            ((f(x + hh) - f(x)) / hh - (f(x) - f(x - hh)) / hh).abs()
        };
        let d1 = side(h, &mut f);
        let d2 = side(h / 2.0, &mut f);
        estimate += (d2 - 0.6 * d1).max(0.0);
    }

    if roundoff > 0.5 * value.abs() && roundoff > 1e-13 {
        return Err(Error::StepTooSmall {
            value,
            estimate: roundoff,
        });
    }
    Ok(FdEstimate {
        value,
        error_estimate: estimate,
    })
}

/// Kahan-compensated accumulator; keeps long sums at O(eps) regardless of
/// the term count.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// log(sum_j exp(z_j)) for complex exponents, shifted by the largest real
/// part so the partial sums never overflow. Summation is compensated: the
/// work tables behind chi(u) can hold tens of thousands of atoms and their
/// plain-sum noise would dominate finite-difference derivatives of chi.
pub fn log_sum_exp_complex(terms: &[Complex64]) -> Complex64 {
    let m = terms
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Complex64::new(f64::NEG_INFINITY, 0.0);
    }
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for z in terms {
        let t = Complex64::from_polar((z.re - m).exp(), z.im);
        re.add(t.re);
        im.add(t.im);
    }
    let s = Complex64::new(re.value(), im.value());
    Complex64::new(m + s.norm().ln(), s.arg())
}

/// ln(2 cosh x) without overflow for large |x|.
pub fn ln_2cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// `n` evenly spaced points covering [a, b] inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + step * i as f64).collect()
}
