//! Fourier tools for smooth periodic samples: differentiation, trigonometric
//! interpolation, zero-padded upsampling and periodic antiderivatives.
//!
//! All routines take samples at the uniform nodes `u_j = j/N` of the unit
//! period. Even-length inputs treat the Nyquist mode as a pure cosine so the
//! interpolant stays real and passes through every node.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Normalized discrete Fourier coefficients `c_k = (1/N) sum_j x_j e^{-2 pi i jk/N}`.
pub fn fourier_coeffs(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

fn inverse_real(mut coeffs: Vec<Complex64>) -> Vec<f64> {
    let n = coeffs.len();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(&mut coeffs);
    coeffs.into_iter().map(|c| c.re).collect()
}

/// Signed wavenumber of FFT slot `k` for length `n`.
#[inline]
fn wavenumber(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Derivative of the trigonometric interpolant at the nodes, with respect to
/// a parameter whose full period is `period`.
pub fn derivative(samples: &[f64], period: f64) -> Vec<f64> {
    let n = samples.len();
    let mut c = fourier_coeffs(samples);
    let base = 2.0 * PI / period;
    for (k, ck) in c.iter_mut().enumerate() {
        if n.is_multiple_of(2) && k == n / 2 {
            *ck = Complex64::new(0.0, 0.0);
            continue;
        }
        let w = wavenumber(k, n) as f64 * base;
        *ck *= Complex64::new(0.0, w);
    }
    // undo the 1/N normalization applied by `fourier_coeffs`
    inverse_real(c)
}

/// Zero-padded Fourier upsampling to `m >= samples.len()` nodes.
pub fn upsample(samples: &[f64], m: usize) -> Vec<f64> {
    let n = samples.len();
    assert!(m >= n, "upsample target must not be smaller than the input");
    if m == n {
        return samples.to_vec();
    }
    let c = fourier_coeffs(samples);
    let mut padded = vec![Complex64::new(0.0, 0.0); m];
    let half = n / 2;
    for (k, &ck) in c.iter().enumerate() {
        let w = wavenumber(k, n);
        if n.is_multiple_of(2) && k == half {
            // split the Nyquist cosine between +N/2 and -N/2
            padded[half] += ck * 0.5;
            padded[m - half] += ck * 0.5;
            continue;
        }
        let slot = if w >= 0 {
            w as usize
        } else {
            (m as i64 + w) as usize
        };
        padded[slot] += ck;
    }
    inverse_real(padded)
}

/// Real trigonometric interpolant through uniform periodic samples.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    n: usize,
    mean: f64,
    // c_k for k = 1..=(n-1)/2
    modes: Vec<Complex64>,
    nyquist: f64,
}

impl TrigInterpolant {
    pub fn new(samples: &[f64]) -> Self {
        let n = samples.len();
        let c = fourier_coeffs(samples);
        let top = (n - 1) / 2;
        let nyquist = if n.is_multiple_of(2) {
            c[n / 2].re
        } else {
            0.0
        };
        TrigInterpolant {
            n,
            mean: c[0].re,
            modes: c[1..=top].to_vec(),
            nyquist,
        }
    }

    /// Value and derivative (with respect to `u`, period 1) at `u`.
    pub fn eval_with_derivative(&self, u: f64) -> (f64, f64) {
        let theta = 2.0 * PI * u;
        let step = Complex64::from_polar(1.0, theta);
        let mut phase = step;
        let mut value = self.mean;
        let mut deriv = 0.0;
        for (i, &ck) in self.modes.iter().enumerate() {
            let k = (i + 1) as f64;
            let z = ck * phase;
            value += 2.0 * z.re;
            deriv -= 2.0 * 2.0 * PI * k * z.im;
            phase *= step;
        }
        if self.n.is_multiple_of(2) {
            let arg = PI * self.n as f64 * u;
            value += self.nyquist * arg.cos();
            deriv -= self.nyquist * PI * self.n as f64 * arg.sin();
        }
        (value, deriv)
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.eval_with_derivative(u).0
    }
}

/// Cumulative integral `s(u_j) = int_0^{u_j} f du` of a smooth periodic
/// function sampled at `u_j = j/N`, plus the integral over the full period.
pub fn cumulative_integral(samples: &[f64]) -> (Vec<f64>, f64) {
    let n = samples.len();
    let c = fourier_coeffs(samples);
    let total = c[0].re;
    let mut anti = vec![Complex64::new(0.0, 0.0); n];
    for (k, &ck) in c.iter().enumerate().skip(1) {
        if n.is_multiple_of(2) && k == n / 2 {
            // the Nyquist cosine integrates to a sine that vanishes on the nodes
            continue;
        }
        let w = 2.0 * PI * wavenumber(k, n) as f64;
        anti[k] = ck / Complex64::new(0.0, w);
    }
    let periodic = inverse_real(anti);
    let offset = periodic[0];
    let cum = periodic
        .iter()
        .enumerate()
        .map(|(j, &p)| total * j as f64 / n as f64 + p - offset)
        .collect();
    (cum, total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(n: usize) -> Vec<f64> {
        (0..n).map(|j| j as f64 / n as f64).collect()
    }

    #[test]
    fn derivative_of_trig_polynomial_is_exact() {
        let n = 32;
        let f: Vec<f64> = nodes(n)
            .iter()
            .map(|&u| (2.0 * PI * 3.0 * u).sin() + 0.5)
            .collect();
        let d = derivative(&f, 1.0);
        for (j, u) in nodes(n).iter().enumerate() {
            let exact = 2.0 * PI * 3.0 * (2.0 * PI * 3.0 * u).cos();
            assert!((d[j] - exact).abs() < 1e-11);
        }
    }

    #[test]
    fn interpolant_reproduces_nodes_and_between() {
        let n = 16;
        let g = |u: f64| (2.0 * PI * u).cos() * 2.0 - (2.0 * PI * 5.0 * u).sin();
        let f: Vec<f64> = nodes(n).iter().map(|&u| g(u)).collect();
        let it = TrigInterpolant::new(&f);
        for &u in &[0.0, 0.013, 0.37, 0.9] {
            assert!((it.eval(u) - g(u)).abs() < 1e-12);
        }
    }

    #[test]
    fn upsample_is_exact_for_band_limited_input() {
        let g = |u: f64| (2.0 * PI * 2.0 * u).cos() + 0.25 * (2.0 * PI * 7.0 * u).sin();
        let f: Vec<f64> = nodes(20).iter().map(|&u| g(u)).collect();
        let up = upsample(&f, 64);
        for (j, u) in nodes(64).iter().enumerate() {
            assert!((up[j] - g(*u)).abs() < 1e-12);
        }
    }

    #[test]
    fn cumulative_integral_of_shifted_cosine() {
        let n = 64;
        let f: Vec<f64> = nodes(n)
            .iter()
            .map(|&u| 1.0 + (2.0 * PI * u).cos())
            .collect();
        let (cum, total) = cumulative_integral(&f);
        assert!((total - 1.0).abs() < 1e-14);
        for (j, u) in nodes(n).iter().enumerate() {
            let exact = u + (2.0 * PI * u).sin() / (2.0 * PI);
            assert!((cum[j] - exact).abs() < 1e-13);
        }
    }
}
