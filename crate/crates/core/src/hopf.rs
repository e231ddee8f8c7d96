//! Explicit spectral data of magnetic Hopf links: the `Z_k` eigenvalue
//! families, their multiplicities and the kernel dimension.
//!
//! For fluxes `α ∈ (0,1)^K` write `Σα = c + m` with `c ∈ (−1/2, 1/2]` and
//! `m ∈ ℤ`. Then `Z_k = {k + c − 1/2}` if `m > k`, `∅` if `m = k` and
//! `{−k − c − 1/2}` if `m < k`, each with multiplicity `|m − k|`.

use crate::error::{LinkError, Result};
use crate::invariants::MagneticLink;
use serde::Serialize;
use std::f64::consts::PI;

/// Default window of branch indices.
pub const DEFAULT_K_WINDOW: (i64, i64) = (-20, 20);

/// Snap radius for `Σα` near a half-integer.
const HALF_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfDecomposition {
    pub alphas: Vec<f64>,
    pub c: f64,
    pub m: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopfSpectrumBranch {
    pub k: i64,
    /// `None` when `Z_k` is empty.
    pub value: Option<f64>,
    pub multiplicity: u64,
    /// `sign(m − k)`.
    pub spin: i64,
}

fn check_open_cube(alphas: &[f64]) -> Result<()> {
    if alphas.is_empty() {
        return Err(LinkError::InvalidParams(
            "at least one flux is required".into(),
        ));
    }
    match alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        Some(a) => Err(LinkError::FluxOutOfRange(*a)),
        None => Ok(()),
    }
}

/// The unique `(c, m)` with `Σα = c + m`, `c ∈ (−1/2, 1/2]`.
pub fn hopf_decompose(alphas: &[f64]) -> Result<HopfDecomposition> {
    check_open_cube(alphas)?;
    let sum: f64 = alphas.iter().sum();
    let half = (sum - 0.5).round();
    let (c, m) = if (sum - 0.5 - half).abs() < HALF_SNAP {
        (0.5, half as i64)
    } else {
        let m = (sum - 0.5).ceil();
        (sum - m, m as i64)
    };
    Ok(HopfDecomposition {
        alphas: alphas.to_vec(),
        c,
        m,
    })
}

/// The branch `Z_k` of a decomposition.
pub fn branch(d: &HopfDecomposition, k: i64) -> HopfSpectrumBranch {
    let multiplicity = (d.m - k).unsigned_abs();
    let spin = (d.m - k).signum();
    let value = match spin {
        1 => Some(k as f64 + d.c - 0.5),
        -1 => Some(-(k as f64) - d.c - 0.5),
        _ => None,
    };
    HopfSpectrumBranch {
        k,
        value,
        multiplicity,
        spin,
    }
}

/// All branches `Z_k` for `k` in the inclusive window.
pub fn hopf_z_spectrum(alphas: &[f64], k_window: (i64, i64)) -> Result<Vec<HopfSpectrumBranch>> {
    if k_window.0 > k_window.1 {
        return Err(LinkError::InvalidParams(format!(
            "empty k window {k_window:?}"
        )));
    }
    let d = hopf_decompose(alphas)?;
    Ok((k_window.0..=k_window.1).map(|k| branch(&d, k)).collect())
}

/// `dim ker D_A`: `m` on `Σα = m + 1/2`, otherwise the multiplicity-weighted
/// number of branch values equal to zero.
pub fn hopf_kernel_dim(alphas: &[f64]) -> Result<u64> {
    let d = hopf_decompose(alphas)?;
    let sum: f64 = alphas.iter().sum();
    let m = (sum - 0.5).round();
    if (sum - 0.5 - m).abs() < 1e-9 && m >= 0.0 {
        return Ok(m as u64);
    }
    // away from the half-integer planes no branch value vanishes; kept as a count
    Ok((-(d.m.abs() + 2)..=(d.m.abs() + 2))
        .map(|k| branch(&d, k))
        .filter(|b| b.value.is_some_and(|v| v.abs() < 1e-12))
        .map(|b| b.multiplicity)
        .sum())
}

/// `±√(λ² + (k + c)²) − 1/2` for `λ` in the positive spectrum of the sphere operator.
pub fn continuous_branch(lambda: f64, k: i64, c: f64) -> (f64, f64) {
    let r = lambda.hypot(k as f64 + c);
    (r - 0.5, -r - 0.5)
}

/// One signed zero crossing found by [`hopf_branch_flow`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchCrossing {
    pub step: usize,
    /// Index `j = m − k` of the positive-spin family `Σα − j − 1/2`.
    pub family: i64,
    pub multiplicity: u64,
    pub sign: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchFlow {
    pub total: i64,
    pub crossings: Vec<BranchCrossing>,
}

/// Signed, multiplicity-weighted zero crossings of the `Z_k` branches along
/// the polygonal path through `path` (in order, not closed automatically).
///
/// Branch values are tracked by the label `j = m − k`, which is continuous
/// in `α`: the family `j ≥ 1` has value `Σα − j − 1/2` and multiplicity `j`.
pub fn hopf_branch_flow(path: &[Vec<f64>], k_window: (i64, i64)) -> Result<BranchFlow> {
    if path.len() < 2 {
        return Err(LinkError::InvalidParams(
            "a path needs at least two vertices".into(),
        ));
    }
    let dim = path[0].len();
    if path.iter().any(|p| p.len() != dim) {
        return Err(LinkError::InvalidParams(
            "path vertices of different dimension".into(),
        ));
    }
    for (i, p) in path.iter().enumerate() {
        check_open_cube(p)?;
        let s: f64 = p.iter().sum();
        if (s - 0.5 - (s - 0.5).round()).abs() < 1e-9 {
            return Err(LinkError::PathHitsKernel(i));
        }
    }
    // value of family j read from the Z_k table at a vertex
    let family_values = |p: &[f64]| -> Result<Vec<(i64, f64, u64)>> {
        let d = hopf_decompose(p)?;
        Ok(hopf_z_spectrum(p, k_window)?
            .into_iter()
            .filter(|b| b.spin > 0)
            .map(|b| (d.m - b.k, b.value.unwrap_or(f64::NAN), b.multiplicity))
            .collect())
    };
    let mut crossings = Vec::new();
    for step in 0..path.len() - 1 {
        let before = family_values(&path[step])?;
        let after = family_values(&path[step + 1])?;
        // Σα is affine along the segment, so every family value is too
        for &(j, v0, mult) in &before {
            if let Some(&(_, v1, _)) = after.iter().find(|f| f.0 == j) {
                if (v0 < 0.0) != (v1 < 0.0) {
                    let sign = if v1 > v0 { 1 } else { -1 };
                    crossings.push(BranchCrossing {
                        step,
                        family: j,
                        multiplicity: mult,
                        sign,
                    });
                }
            }
        }
    }
    let total = crossings
        .iter()
        .map(|c| c.sign * c.multiplicity as i64)
        .sum();
    Ok(BranchFlow { total, crossings })
}

/// The magnetic Hopf K-link given by its invariants: round fibers of length
/// 2π, writhe 0, all pairwise linking numbers 1, every component an unknot.
pub fn hopf_invariant_link(k: usize, fluxes: Vec<f64>) -> Result<MagneticLink> {
    if k == 0 {
        return Err(LinkError::InvalidParams(
            "a link needs at least one component".into(),
        ));
    }
    let linking = (0..k)
        .map(|i| (0..k).map(|j| i64::from(i != j)).collect())
        .collect();
    MagneticLink::from_invariants(vec![0.0; k], linking, vec![2.0 * PI; k], fluxes)?
        .with_unknot_flags(vec![true; k])
}
