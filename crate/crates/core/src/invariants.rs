//! Quadratures for the Gauss linking integral, writhe and twist, the
//! Călugăreanu identity, and the flux of a magnetic link through a component.

use crate::curves::{self, Ambient, FramedLoop, SampledLoop};
use crate::error::{LinkError, Result};
use crate::spectral;
use crate::vec3::{self, V3, V4};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Residual above which a linking integral is not accepted as an integer.
pub const LINKING_ROUND_TOL: f64 = 0.1;
/// Largest sample count the linking quadrature refines to.
pub const MAX_REFINED_SAMPLES: usize = 16384;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Linking {
    pub raw: f64,
    pub rounded: i64,
    pub residual: f64,
}

/// Reduce a flux to its representative in `[0, 1)`.
pub fn canonical_flux(a: f64) -> f64 {
    let r = a.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

fn min_distance(a: &[V3], b: &[V3]) -> f64 {
    a.par_iter()
        .map(|p| {
            b.iter()
                .map(|q| vec3::norm(vec3::sub(*p, *q)))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

fn r3_pair(a: &SampledLoop, b: &SampledLoop) -> Result<(SampledLoop, SampledLoop)> {
    match (a.ambient(), b.ambient()) {
        (Ambient::R3, Ambient::R3) => Ok((a.clone(), b.clone())),
        (Ambient::S3, Ambient::S3) => {
            let pair = [a.clone(), b.clone()];
            let pole = curves::choose_pole(&pair)?;
            Ok((
                curves::stereographic_project(a, pole, curves::DEFAULT_POLE_CLEARANCE)?,
                curves::stereographic_project(b, pole, curves::DEFAULT_POLE_CLEARANCE)?,
            ))
        }
        _ => Err(LinkError::InvalidParams(
            "loops live in different ambients".into(),
        )),
    }
}

/// Raw Gauss linking integral by the trapezoidal product rule on arclength
/// grids. Both loops are refined by Fourier zero-padding until their sample
/// spacing is at most a quarter of their mutual distance.
pub fn gauss_linking_raw(a: &SampledLoop, b: &SampledLoop) -> Result<f64> {
    let (a, b) = r3_pair(a, b)?;
    let mut a = curves::arclength_resample(&a, a.len())?;
    let mut b = curves::arclength_resample(&b, b.len())?;
    let scale = a.chord_length().max(b.chord_length());
    for _ in 0..4 {
        let d = min_distance(&a.points3(), &b.points3());
        if d <= 1e-9 * scale {
            return Err(LinkError::CurvesTooClose { distance: d });
        }
        let h = a.max_spacing().max(b.max_spacing());
        if d >= 3.0 * h {
            break;
        }
        let grow = |l: &SampledLoop| -> Result<SampledLoop> {
            let m = ((l.len() as f64) * 4.0 * l.max_spacing() / d).ceil() as usize;
            let m = m.max(l.len() + 1);
            if m > MAX_REFINED_SAMPLES {
                return Err(LinkError::CurvesTooClose { distance: d });
            }
            Ok(l.upsampled(m))
        };
        a = grow(&a)?;
        b = grow(&b)?;
    }
    let (pa, pb) = (a.points3(), b.points3());
    let da: Vec<V3> = a.derivatives().iter().map(|v| [v[0], v[1], v[2]]).collect();
    let db: Vec<V3> = b.derivatives().iter().map(|v| [v[0], v[1], v[2]]).collect();
    let rows: Vec<f64> = (0..pa.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for j in 0..pb.len() {
                let r = vec3::sub(pa[i], pb[j]);
                let d2 = vec3::dot(r, r);
                acc += vec3::dot(vec3::cross(da[i], db[j]), r) / (d2 * d2.sqrt());
            }
            acc
        })
        .collect();
    let sum: f64 = rows.iter().sum();
    Ok(sum / (4.0 * PI * pa.len() as f64 * pb.len() as f64))
}

/// Linking number with integer certification.
pub fn gauss_linking(a: &SampledLoop, b: &SampledLoop) -> Result<Linking> {
    let raw = gauss_linking_raw(a, b)?;
    let rounded = raw.round();
    let residual = (raw - rounded).abs();
    if residual > LINKING_ROUND_TOL {
        return Err(LinkError::NonIntegerResult { raw, residual });
    }
    Ok(Linking {
        raw,
        rounded: rounded as i64,
        residual,
    })
}

/// Writhe value with its Richardson error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WritheEstimate {
    /// Richardson-extrapolated value.
    pub value: f64,
    /// Plain quadrature on the full grid.
    pub fine: f64,
    /// Plain quadrature on every other sample.
    pub coarse: f64,
    pub error: f64,
}

fn writhe_sum(p: &[V3], d: &[V3], stride: usize) -> f64 {
    let n = p.len() / stride;
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            // symmetric integrand: sum j > i + 1 and double, skipping the cyclic band
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (i * stride, j * stride);
                let r = vec3::sub(p[a], p[b]);
                let d2 = vec3::dot(r, r);
                acc += vec3::dot(vec3::cross(d[a], d[b]), r) / (d2 * d2.sqrt());
            }
            acc
        })
        .collect();
    2.0 * rows.iter().sum::<f64>() / (4.0 * PI * (n * n) as f64)
}

/// Writhe of an R³ loop, or of an S³ loop projected from [`curves::choose_pole`].
pub fn writhe(l: &SampledLoop) -> Result<WritheEstimate> {
    match l.ambient() {
        Ambient::R3 => writhe_r3(l),
        Ambient::S3 => {
            let pole = curves::choose_pole(std::slice::from_ref(l))?;
            writhe_with_pole(l, pole)
        }
    }
}

/// Writhe of an S³ loop through the stereographic projection from `pole`.
pub fn writhe_with_pole(l: &SampledLoop, pole: V4) -> Result<WritheEstimate> {
    let p = curves::stereographic_project(l, pole, curves::DEFAULT_POLE_CLEARANCE)?;
    writhe_r3(&p)
}

fn writhe_r3(l: &SampledLoop) -> Result<WritheEstimate> {
    let n = l.len() + l.len() % 2;
    let l = curves::arclength_resample(l, n)?;
    let p = l.points3();
    let d: Vec<V3> = l.derivatives().iter().map(|v| [v[0], v[1], v[2]]).collect();
    if d.iter().any(|v| vec3::norm(*v) < 1e-9) {
        return Err(LinkError::DegenerateCurve("vanishing derivative".into()));
    }
    let fine = writhe_sum(&p, &d, 1);
    let coarse = writhe_sum(&p, &d, 2);
    let correction = (fine - coarse) / 3.0;
    Ok(WritheEstimate {
        value: fine + correction,
        fine,
        coarse,
        error: correction.abs(),
    })
}

/// `Tw(n) = (1/2π) ∮ ⟨dn/ds, t × n⟩ ds`.
pub fn twist(f: &FramedLoop) -> Result<f64> {
    let t = curves::tangents(f.base())?;
    let nrm = f.normals();
    let worst = t
        .iter()
        .zip(nrm)
        .map(|(a, b)| vec3::dot(*a, *b).abs())
        .fold(0.0, f64::max);
    if worst >= 1e-8 {
        return Err(LinkError::FrameNotOrthogonal(worst));
    }
    let dn: Vec<Vec<f64>> = (0..3)
        .map(|c| spectral::derivative(&nrm.iter().map(|v| v[c]).collect::<Vec<_>>(), 1.0))
        .collect();
    let sum: f64 = (0..t.len())
        .map(|i| vec3::dot([dn[0][i], dn[1][i], dn[2][i]], vec3::cross(t[i], nrm[i])))
        .sum();
    Ok(sum / (2.0 * PI * t.len() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calugareanu {
    pub linking: f64,
    pub twist: f64,
    pub writhe: f64,
    pub residual: f64,
}

/// `Lk(γ + εn, γ) − Tw(n) − Wr(γ)`.
pub fn calugareanu_residual(f: &FramedLoop, epsilon: f64) -> Result<Calugareanu> {
    let pushed = curves::offset_curve(f, epsilon)?;
    let linking = gauss_linking_raw(&pushed, f.base())?;
    let tw = twist(f)?;
    let wr = writhe(f.base())?.value;
    Ok(Calugareanu {
        linking,
        twist: tw,
        writhe: wr,
        residual: linking - tw - wr,
    })
}

/// `I_τ = −2π·Wr`.
pub fn integrated_relative_torsion(l: &SampledLoop) -> Result<f64> {
    Ok(-2.0 * PI * writhe(l)?.value)
}

/// Numerical knobs of [`MagneticLink::with_options`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkOptions {
    /// Candidate poles for projecting S³ links.
    pub pole_grid: usize,
    /// Largest accepted distance of a linking integral from ℤ.
    pub tol_round: f64,
}

impl Default for LinkOptions {
    fn default() -> Self {
        LinkOptions {
            pole_grid: curves::DEFAULT_POLE_GRID,
            tol_round: LINKING_ROUND_TOL,
        }
    }
}

/// K disjoint loops carrying normalized fluxes, with cached invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct MagneticLink {
    components: Vec<SampledLoop>,
    fluxes: Vec<f64>,
    linking: Vec<Vec<i64>>,
    linking_residuals: Vec<Vec<f64>>,
    writhes: Vec<f64>,
    writhe_errors: Vec<f64>,
    lengths: Vec<f64>,
    unknots: Vec<bool>,
    pole: Option<V4>,
}

impl MagneticLink {
    /// Compute writhes, lengths and the certified linking matrix of the
    /// components. S³ links are projected from one common pole.
    pub fn new(components: Vec<SampledLoop>, fluxes: Vec<f64>) -> Result<Self> {
        MagneticLink::with_options(components, fluxes, &LinkOptions::default())
    }

    pub fn with_options(
        components: Vec<SampledLoop>,
        fluxes: Vec<f64>,
        opts: &LinkOptions,
    ) -> Result<Self> {
        let k = components.len();
        if k == 0 {
            return Err(LinkError::InvalidParams(
                "a link needs at least one component".into(),
            ));
        }
        if fluxes.len() != k {
            return Err(LinkError::InvalidParams(format!(
                "{} fluxes for {k} components",
                fluxes.len()
            )));
        }
        let ambient = components[0].ambient();
        if components.iter().any(|c| c.ambient() != ambient) {
            return Err(LinkError::InvalidParams(
                "components live in different ambients".into(),
            ));
        }
        let lengths = components.iter().map(|c| c.length()).collect();
        let (projected, pole) = match ambient {
            Ambient::R3 => (components.clone(), None),
            Ambient::S3 => {
                let pole = curves::choose_pole_from_grid(&components, opts.pole_grid)?;
                let p = components
                    .iter()
                    .map(|c| curves::stereographic_project(c, pole, curves::DEFAULT_POLE_CLEARANCE))
                    .collect::<Result<Vec<_>>>()?;
                (p, Some(pole))
            }
        };
        let mut writhes = Vec::with_capacity(k);
        let mut writhe_errors = Vec::with_capacity(k);
        for c in &projected {
            let w = writhe_r3(c)?;
            writhes.push(w.value);
            writhe_errors.push(w.error);
        }
        let mut linking = vec![vec![0i64; k]; k];
        let mut linking_residuals = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in (i + 1)..k {
                let raw = gauss_linking_raw(&projected[i], &projected[j])?;
                let residual = (raw - raw.round()).abs();
                if residual > opts.tol_round {
                    return Err(LinkError::NonIntegerResult { raw, residual });
                }
                linking[i][j] = raw.round() as i64;
                linking[j][i] = raw.round() as i64;
                linking_residuals[i][j] = residual;
                linking_residuals[j][i] = residual;
            }
        }
        Ok(MagneticLink {
            components,
            fluxes: fluxes.into_iter().map(canonical_flux).collect(),
            linking,
            linking_residuals,
            writhes,
            writhe_errors,
            lengths,
            unknots: vec![false; k],
            pole,
        })
    }

    /// A link known only through its invariants (no sampled curves).
    pub fn from_invariants(
        writhes: Vec<f64>,
        linking: Vec<Vec<i64>>,
        lengths: Vec<f64>,
        fluxes: Vec<f64>,
    ) -> Result<Self> {
        let k = writhes.len();
        if k == 0 || linking.len() != k || lengths.len() != k || fluxes.len() != k {
            return Err(LinkError::InvalidParams(
                "inconsistent invariant sizes".into(),
            ));
        }
        for i in 0..k {
            if linking[i].len() != k {
                return Err(LinkError::InvalidParams(
                    "linking matrix is not square".into(),
                ));
            }
            if (0..k).any(|j| linking[i][j] != linking[j][i]) {
                return Err(LinkError::InvalidParams(
                    "linking matrix is not symmetric".into(),
                ));
            }
            if !(lengths[i] > 0.0) || !writhes[i].is_finite() {
                return Err(LinkError::InvalidParams(format!(
                    "invalid length or writhe for component {i}"
                )));
            }
        }
        let mut linking = linking;
        for (i, row) in linking.iter_mut().enumerate() {
            row[i] = 0;
        }
        Ok(MagneticLink {
            components: Vec::new(),
            fluxes: fluxes.into_iter().map(canonical_flux).collect(),
            linking,
            linking_residuals: vec![vec![0.0; k]; k],
            writhe_errors: vec![0.0; k],
            writhes,
            lengths,
            unknots: vec![false; k],
            pole: None,
        })
    }

    /// Magnetic Hopf link: K fibers over equally spaced points of the equator
    /// of S². The fibers are round great circles, so after the quadrature
    /// certifies `|Wr| < 1e-3` and unit pairwise linking the exact values are
    /// stored.
    pub fn hopf(k: usize, fluxes: Vec<f64>, samples: usize) -> Result<Self> {
        if k == 0 {
            return Err(LinkError::InvalidParams(
                "a link needs at least one component".into(),
            ));
        }
        let fibers = (0..k)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / k as f64;
                curves::gen_hopf_fiber([a.cos(), a.sin(), 0.0], samples)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut link = MagneticLink::new(fibers, fluxes)?;
        for (i, w) in link.writhes.iter_mut().enumerate() {
            if w.abs() >= 1e-3 {
                return Err(LinkError::QuadratureFailure(format!(
                    "Hopf fiber {i} has writhe {w}"
                )));
            }
            *w = 0.0;
        }
        for i in 0..k {
            for j in 0..k {
                if i != j && link.linking[i][j] != 1 {
                    return Err(LinkError::QuadratureFailure(format!(
                        "Hopf fibers {i},{j} link {} times",
                        link.linking[i][j]
                    )));
                }
            }
        }
        link.unknots = vec![true; k];
        Ok(link)
    }

    pub fn with_fluxes(&self, fluxes: Vec<f64>) -> Result<Self> {
        if fluxes.len() != self.len() {
            return Err(LinkError::InvalidParams(format!(
                "{} fluxes for {} components",
                fluxes.len(),
                self.len()
            )));
        }
        let mut out = self.clone();
        out.fluxes = fluxes.into_iter().map(canonical_flux).collect();
        Ok(out)
    }

    pub fn with_unknot_flags(&self, flags: Vec<bool>) -> Result<Self> {
        if flags.len() != self.len() {
            return Err(LinkError::InvalidParams(format!(
                "{} flags for {} components",
                flags.len(),
                self.len()
            )));
        }
        let mut out = self.clone();
        out.unknots = flags;
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.writhes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.writhes.is_empty()
    }

    pub fn components(&self) -> &[SampledLoop] {
        &self.components
    }

    pub fn fluxes(&self) -> &[f64] {
        &self.fluxes
    }

    pub fn linking_matrix(&self) -> &[Vec<i64>] {
        &self.linking
    }

    pub fn linking_residuals(&self) -> &[Vec<f64>] {
        &self.linking_residuals
    }

    pub fn writhes(&self) -> &[f64] {
        &self.writhes
    }

    pub fn writhe_errors(&self) -> &[f64] {
        &self.writhe_errors
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn unknots(&self) -> &[bool] {
        &self.unknots
    }

    pub fn pole(&self) -> Option<V4> {
        self.pole
    }

    /// All invariants in report form.
    pub fn report(&self, extra_smooth_flux: f64) -> InvariantReport {
        let k = self.len();
        InvariantReport {
            writhe: self.writhes.clone(),
            i_tau: self.writhes.iter().map(|w| -2.0 * PI * w).collect(),
            linking_matrix: self.linking.clone(),
            fluxes: (0..k)
                .map(|i| flux_through(self, i, extra_smooth_flux))
                .collect(),
            lengths: self.lengths.clone(),
            residuals: Residuals {
                writhe_richardson: self.writhe_errors.clone(),
                linking_rounding: self.linking_residuals.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residuals {
    pub writhe_richardson: Vec<f64>,
    pub linking_rounding: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    pub writhe: Vec<f64>,
    pub i_tau: Vec<f64>,
    pub linking_matrix: Vec<Vec<i64>>,
    pub fluxes: Vec<f64>,
    pub lengths: Vec<f64>,
    pub residuals: Residuals,
}

/// `Φ_k = extra + 2π Σ_{j≠k} α_j link(k, j)`.
pub fn flux_through(link: &MagneticLink, k: usize, extra_smooth_flux: f64) -> f64 {
    let s: f64 = (0..link.len())
        .filter(|&j| j != k)
        .map(|j| link.fluxes[j] * link.linking[k][j] as f64)
        .sum();
    extra_smooth_flux + 2.0 * PI * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{
        gen_circle, gen_hopf_fiber, gen_torus_knot, radial_framing, rotate_framing,
    };

    fn circle(r: f64, n: usize) -> SampledLoop {
        gen_circle(r, [0.0; 3], [0.0, 0.0, 1.0], n).unwrap()
    }

    #[test]
    fn coplanar_circles_do_not_link() {
        let l = gauss_linking(&circle(1.0, 128), &circle(3.0, 128)).unwrap();
        assert_eq!(l.rounded, 0);
        assert!(l.raw.abs() < 1e-10);
    }

    #[test]
    fn ring_and_axis_circle_link_once() {
        // a unit circle and a circle through its center in the xz-plane
        let a = circle(1.0, 128);
        let b = gen_circle(1.0, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 128).unwrap();
        let l = gauss_linking(&a, &b).unwrap();
        assert_eq!(l.rounded.abs(), 1);
        assert!(l.residual < 1e-8);
        let r = gauss_linking(&a.reversed(), &b).unwrap();
        assert_eq!(r.rounded, -l.rounded);
        let s = gauss_linking(&b, &a).unwrap();
        assert!((s.raw - l.raw).abs() < 1e-12);
    }

    #[test]
    fn hopf_fibers_link_positively() {
        let f = gen_hopf_fiber([1.0, 0.0, 0.0], 256).unwrap();
        let g = gen_hopf_fiber([-1.0, 0.0, 0.0], 256).unwrap();
        let l = gauss_linking(&f, &g).unwrap();
        assert_eq!(l.rounded, 1);
        assert!(l.residual < 1e-6);
    }

    #[test]
    fn radial_offset_stays_unlinked() {
        let c = circle(1.0, 256);
        let f = radial_framing(&c).unwrap();
        let o = curves::offset_curve(&f, 0.01).unwrap();
        let l = gauss_linking(&o, &c).unwrap();
        assert_eq!(l.rounded, 0);
        assert!(l.raw.abs() < 1e-8);
    }

    #[test]
    fn touching_curves_are_rejected() {
        let a = circle(1.0, 64);
        let b = gen_circle(1.0, [2.0, 0.0, 0.0], [0.0, 0.0, 1.0], 64).unwrap();
        assert!(matches!(
            gauss_linking(&a, &b),
            Err(LinkError::CurvesTooClose { .. })
        ));
    }

    #[test]
    fn planar_circle_has_no_writhe() {
        let w = writhe(&circle(1.0, 256)).unwrap();
        assert!(w.value.abs() < 1e-6);
    }

    #[test]
    fn hopf_fiber_writhe_vanishes() {
        for v in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8]] {
            let f = gen_hopf_fiber(v, 256).unwrap();
            assert!(writhe(&f).unwrap().value.abs() < 1e-4);
            assert!(integrated_relative_torsion(&f).unwrap().abs() < 2.0 * PI * 1e-4);
        }
    }

    #[test]
    fn reflection_negates_writhe_and_reversal_keeps_it() {
        let k = gen_torus_knot(2, 3, 2.0, 0.5, 256).unwrap();
        let w = writhe(&k).unwrap().value;
        let m = writhe(&k.scaled_axes([1.0, 1.0, -1.0, 1.0]).unwrap())
            .unwrap()
            .value;
        assert!((w + m).abs() < 1e-6, "{w} {m}");
        let r = writhe(&k.reversed()).unwrap().value;
        assert!((w - r).abs() < 1e-6);
        let s = writhe(&k.scaled_axes([3.5, 3.5, 3.5, 1.0]).unwrap())
            .unwrap()
            .value;
        assert!((w - s).abs() < 1e-10);
        assert!(w.abs() > 1.0);
    }

    #[test]
    fn radial_framing_has_no_twist() {
        let f = radial_framing(&circle(1.0, 128)).unwrap();
        assert!(twist(&f).unwrap().abs() < 1e-8);
    }

    #[test]
    fn rotated_framing_twists_by_turn_count() {
        let f = radial_framing(&circle(1.0, 128)).unwrap();
        for m in [-2i64, 1, 3] {
            let g = rotate_framing(&f, m).unwrap();
            assert!((twist(&g).unwrap() - m as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn parallel_transport_twist_is_holonomy() {
        let mut gaps = Vec::new();
        for n in [256, 512] {
            let k =
                curves::arclength_resample(&gen_torus_knot(2, 3, 2.0, 0.5, n).unwrap(), n).unwrap();
            let (f, hol) = curves::parallel_framing(&k).unwrap();
            gaps.push((twist(&f).unwrap() + hol / (2.0 * PI)).abs());
        }
        assert!(gaps[0] < 1e-3 && gaps[1] < gaps[0] / 3.0, "{gaps:?}");
    }

    #[test]
    fn holonomy_matches_minus_relative_torsion() {
        let k =
            curves::arclength_resample(&gen_torus_knot(2, 3, 2.0, 0.5, 512).unwrap(), 512).unwrap();
        let (_, hol) = curves::parallel_framing(&k).unwrap();
        let i_tau = integrated_relative_torsion(&k).unwrap();
        let d = (hol + i_tau).rem_euclid(2.0 * PI);
        assert!(d.min(2.0 * PI - d) < 1e-3, "{hol} {i_tau}");
    }

    #[test]
    fn flux_sums() {
        let single =
            MagneticLink::from_invariants(vec![0.0], vec![vec![0]], vec![2.0 * PI], vec![0.3])
                .unwrap();
        assert_eq!(flux_through(&single, 0, 0.25), 0.25);
        let l2 = MagneticLink::from_invariants(
            vec![0.0; 2],
            vec![vec![0, 1], vec![1, 0]],
            vec![2.0 * PI; 2],
            vec![0.1, 0.5],
        )
        .unwrap();
        assert!((flux_through(&l2, 0, 0.0) - PI).abs() < 1e-15);
        let ones = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        let l3 = MagneticLink::from_invariants(
            vec![0.0; 3],
            ones,
            vec![2.0 * PI; 3],
            vec![0.2, 0.3, 0.4],
        )
        .unwrap();
        assert!((flux_through(&l3, 0, 0.0) - 2.0 * PI * 0.7).abs() < 1e-14);
    }

    #[test]
    fn canonical_flux_range() {
        assert_eq!(canonical_flux(1.0), 0.0);
        assert_eq!(canonical_flux(-1e-20), 0.0);
        assert!((canonical_flux(-0.25) - 0.75).abs() < 1e-15);
        assert!((canonical_flux(2.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hopf_link_constructor() {
        let l = MagneticLink::hopf(3, vec![0.2, 0.3, 0.4], 128).unwrap();
        assert_eq!(
            l.linking_matrix(),
            &[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
        );
        assert!(l.writhes().iter().all(|&w| w == 0.0));
        for len in l.lengths() {
            assert!((len - 2.0 * PI).abs() < 1e-8);
        }
    }
}
