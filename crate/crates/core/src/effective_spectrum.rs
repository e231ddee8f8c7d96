//! Closed-form spectra of the effective operators on the link components and
//! an independent oracle for first-order operators with phase jumps.
//!
//! The effective spectrum of component k is the lattice
//! `{(2πn + φ₀)/ℓ_k : n ∈ ℤ}` with `φ₀ = π(1 − Wr_k) − Φ_k mod 2π`.
//!
//! The oracle operator is `i d/ds + V(s)` on a circle of length ℓ whose
//! functions satisfy `f(s_j⁺) = e^{i b_j} f(s_j⁻)`; its eigenvalues solve
//! `Σ b_j − λℓ + ∫V ≡ 0 (mod 2π)`.

use crate::error::{LinkError, Result};
use crate::invariants::{flux_through, MagneticLink};
use serde::Serialize;
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;

/// Canonical representative of a phase in `[0, 2π)`.
pub fn canonical_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TWO_PI);
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// The arithmetic progression `{(2πn + φ₀)/ℓ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumLattice {
    pub ell: f64,
    pub phi0: f64,
}

impl SpectrumLattice {
    pub fn new(ell: f64, phi: f64) -> Result<Self> {
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(LinkError::InvalidParams(format!(
                "length must be positive, got {ell}"
            )));
        }
        if !phi.is_finite() {
            return Err(LinkError::InvalidParams("non-finite phase".into()));
        }
        Ok(SpectrumLattice {
            ell,
            phi0: canonical_phase(phi),
        })
    }

    pub fn spacing(&self) -> f64 {
        TWO_PI / self.ell
    }

    pub fn eigenvalue(&self, n: i64) -> f64 {
        (TWO_PI * n as f64 + self.phi0) / self.ell
    }

    /// All `(n, λ_n)` with `λ_n ∈ [lo, hi]`.
    pub fn window(&self, lo: f64, hi: f64) -> Vec<(i64, f64)> {
        let first = ((lo * self.ell - self.phi0) / TWO_PI).ceil() as i64;
        let last = ((hi * self.ell - self.phi0) / TWO_PI).floor() as i64;
        (first..=last)
            .map(|n| (n, self.eigenvalue(n)))
            .filter(|(_, l)| *l >= lo && *l <= hi)
            .collect()
    }

    /// Whether 0 is in the lattice up to a phase tolerance.
    pub fn contains_zero(&self, tol: f64) -> bool {
        self.phi0.min(TWO_PI - self.phi0) <= tol
    }
}

/// `φ₀ = π(1 − Wr) − Φ mod 2π`.
pub fn effective_phase(writhe: f64, flux: f64) -> f64 {
    canonical_phase(PI * (1.0 - writhe) - flux)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveSpectrum {
    pub lattice: SpectrumLattice,
    pub eigenvalues: Vec<(i64, f64)>,
    pub writhe: f64,
    pub flux: f64,
}

/// Effective spectrum of component `k` in the window `[lo, hi]`.
pub fn effective_spectrum(
    link: &MagneticLink,
    k: usize,
    window: (f64, f64),
    extra_smooth_flux: f64,
) -> Result<EffectiveSpectrum> {
    if k >= link.len() {
        return Err(LinkError::InvalidParams(format!(
            "component {k} out of range"
        )));
    }
    let writhe = link.writhes()[k];
    let flux = flux_through(link, k, extra_smooth_flux);
    let lattice = SpectrumLattice::new(link.lengths()[k], effective_phase(writhe, flux))?;
    Ok(EffectiveSpectrum {
        lattice,
        eigenvalues: lattice.window(window.0, window.1),
        writhe,
        flux,
    })
}

/// A first-order operator `i d/ds + V` on `[0, ℓ)` with phase jumps.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpOperatorSpec {
    ell: f64,
    potential: Vec<f64>,
    jumps: Vec<(f64, f64)>,
}

impl JumpOperatorSpec {
    /// `potential[j]` is `V(jℓ/M)`; `jumps` are `(position, phase)` pairs.
    pub fn new(ell: f64, potential: Vec<f64>, jumps: Vec<(f64, f64)>) -> Result<Self> {
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(LinkError::InvalidParams(format!(
                "length must be positive, got {ell}"
            )));
        }
        if potential.len() < 64 {
            return Err(LinkError::InvalidParams(format!(
                "{} potential samples, need at least 64",
                potential.len()
            )));
        }
        if potential.iter().any(|v| !v.is_finite()) {
            return Err(LinkError::InvalidParams("non-finite potential".into()));
        }
        for (i, &(s, b)) in jumps.iter().enumerate() {
            if !(0.0..ell).contains(&s) || !b.is_finite() {
                return Err(LinkError::InvalidParams(format!(
                    "jump {i} at {s} outside [0, {ell})"
                )));
            }
            if i > 0 && s <= jumps[i - 1].0 {
                return Err(LinkError::InvalidParams(
                    "jump positions must increase strictly".into(),
                ));
            }
        }
        Ok(JumpOperatorSpec {
            ell,
            potential,
            jumps,
        })
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn samples(&self) -> usize {
        self.potential.len()
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    fn total_jump(&self) -> f64 {
        self.jumps.iter().map(|j| j.1).sum()
    }

    /// Cell-averaged potential `(V_j + V_{j+1})/2`.
    pub fn cell_potential(&self) -> Vec<f64> {
        let m = self.potential.len();
        (0..m)
            .map(|j| 0.5 * (self.potential[j] + self.potential[(j + 1) % m]))
            .collect()
    }

    /// Phase carried by each cell `(s_j, s_{j+1}]`.
    pub fn cell_phases(&self) -> Vec<f64> {
        let m = self.potential.len();
        let h = self.ell / m as f64;
        let mut out = vec![0.0; m];
        for &(s, b) in &self.jumps {
            // the cell whose right end is the first node at or after s
            let j = ((s / h).ceil() as usize + m - 1) % m;
            out[j] += b;
        }
        out
    }
}

/// Eigenvalues from the closed monodromy condition with a trapezoidal `∫V`.
pub fn monodromy_eigenvalues(spec: &JumpOperatorSpec, window: (f64, f64)) -> Vec<f64> {
    let h = spec.ell / spec.samples() as f64;
    let integral: f64 = spec.potential.iter().sum::<f64>() * h;
    let lattice = SpectrumLattice {
        ell: spec.ell,
        phi0: canonical_phase(spec.total_jump() + integral),
    };
    lattice
        .window(window.0, window.1)
        .into_iter()
        .map(|(_, l)| l)
        .collect()
}

/// Eigenvalues of the box-scheme discretization
/// `i(c_j f_{j+1} − f_j)/h + V_{j+½}(c_j f_{j+1} + f_j)/2 = λ(c_j f_{j+1} + f_j)/2`
/// with `c_j = e^{−i b}` in jump cells.
///
/// The scheme is the Hermitian matrix `(2i/h)(U−1)(U+1)⁻¹ + diag(V_{j+½})`,
/// `(Uf)_j = c_j f_{j+1}`. Its characteristic polynomial is the cyclic
/// bidiagonal determinant, so the eigenvalues are the roots of
/// `F(λ) = Σ b_j + 2 Σ_j atan((V_{j+½} − λ)h/2) ∈ 2πℤ`; `F` is strictly
/// decreasing and each root is bracketed and solved to machine precision.
pub fn finite_difference_eigenvalues(spec: &JumpOperatorSpec, window: (f64, f64)) -> Vec<f64> {
    let m = spec.samples();
    let h = spec.ell / m as f64;
    let vm = spec.cell_potential();
    let phase: f64 = spec.cell_phases().iter().sum();
    let f = |lam: f64| phase + 2.0 * vm.iter().map(|v| ((v - lam) * h / 2.0).atan()).sum::<f64>();
    let df = |lam: f64| {
        -vm.iter()
            .map(|v| h / (1.0 + ((v - lam) * h / 2.0).powi(2)))
            .sum::<f64>()
    };
    let (lo, hi) = window;
    let (f_lo, f_hi) = (f(lo), f(hi));
    let n_first = (f_hi / TWO_PI).ceil() as i64;
    let n_last = (f_lo / TWO_PI).floor() as i64;
    let mut out = Vec::new();
    for n in (n_first..=n_last).rev() {
        let target = TWO_PI * n as f64;
        let (mut a, mut b) = (lo, hi);
        let mut x = 0.5 * (a + b);
        for _ in 0..200 {
            let g = f(x) - target;
            if g.abs() < 1e-13 {
                break;
            }
            if g > 0.0 {
                a = x;
            } else {
                b = x;
            }
            let step = x - g / df(x);
            x = if step > a && step < b {
                step
            } else {
                0.5 * (a + b)
            };
            if (b - a) < 1e-14 * (1.0 + x.abs()) {
                break;
            }
        }
        out.push(x);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpectrum {
    pub monodromy: Vec<f64>,
    pub finite_difference: Vec<f64>,
    pub max_gap: f64,
}

/// Both sub-oracles in `window`, cross-checked against each other.
pub fn monodromy_spectrum_oracle(
    spec: &JumpOperatorSpec,
    window: (f64, f64),
) -> Result<OracleSpectrum> {
    let spacing = TWO_PI / spec.ell;
    let wide = (window.0 - spacing, window.1 + spacing);
    let mono_wide = monodromy_eigenvalues(spec, wide);
    let fd = finite_difference_eigenvalues(spec, window);
    let max_gap = fd
        .iter()
        .map(|x| {
            mono_wide
                .iter()
                .map(|y| (x - y).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let limit = 10.0 * TWO_PI / spec.samples() as f64;
    if max_gap > limit {
        return Err(LinkError::DiscretizationTooCoarse {
            gap: max_gap,
            limit,
        });
    }
    Ok(OracleSpectrum {
        monodromy: monodromy_eigenvalues(spec, window),
        finite_difference: fd,
        max_gap,
    })
}
