//! Closed curves sampled at N periodic points in R³ or on the unit sphere
//! S³ ⊂ R⁴, their spectral derivatives, generators, stereographic projection,
//! framings and the twisted deformation family of a framed knot.

use crate::error::{LinkError, Result};
use crate::spectral::{self, TrigInterpolant};
use crate::vec3::{self, V3, V4};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Smallest accepted number of samples.
pub const MIN_SAMPLES: usize = 16;
/// Default minimum distance between a projection pole and the curve.
pub const DEFAULT_POLE_CLEARANCE: f64 = 1e-3;
/// Size of the fixed pole grid used by [`choose_pole`].
pub const DEFAULT_POLE_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ambient {
    R3,
    S3,
}

impl Ambient {
    pub fn dim(self) -> usize {
        match self {
            Ambient::R3 => 3,
            Ambient::S3 => 4,
        }
    }
}

/// A closed curve given by N cyclically ordered samples.
///
/// R³ points are stored with a zero fourth coordinate so both ambients share
/// one representation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledLoop {
    ambient: Ambient,
    coords: Vec<V4>,
}

impl SampledLoop {
    /// Validated R³ loop.
    pub fn r3(points: Vec<V3>) -> Result<Self> {
        let coords = points
            .into_iter()
            .map(|p| [p[0], p[1], p[2], 0.0])
            .collect();
        let l = SampledLoop {
            ambient: Ambient::R3,
            coords,
        };
        l.validate()?;
        Ok(l)
    }

    /// Validated loop on the unit sphere S³.
    pub fn s3(points: Vec<V4>) -> Result<Self> {
        let l = SampledLoop {
            ambient: Ambient::S3,
            coords: points,
        };
        l.validate()?;
        Ok(l)
    }

    /// Validated loop from rows of length 3 (R³) or 4 (S³).
    pub fn from_rows(ambient: Ambient, rows: &[Vec<f64>]) -> Result<Self> {
        let d = ambient.dim();
        let mut coords = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(LinkError::InvalidParams(format!(
                    "point {i} has {} coordinates, expected {d}",
                    r.len()
                )));
            }
            let mut p = [0.0; 4];
            p[..d].copy_from_slice(r);
            coords.push(p);
        }
        let l = SampledLoop { ambient, coords };
        l.validate()?;
        Ok(l)
    }

    fn validate(&self) -> Result<()> {
        let n = self.coords.len();
        if n < MIN_SAMPLES {
            return Err(LinkError::InvalidParams(format!(
                "{n} samples, need at least {MIN_SAMPLES}"
            )));
        }
        if self.coords.iter().flatten().any(|x| !x.is_finite()) {
            return Err(LinkError::InvalidParams("non-finite coordinate".into()));
        }
        if self.ambient == Ambient::S3 {
            for (i, p) in self.coords.iter().enumerate() {
                let r = vec3::norm4(*p);
                if (r - 1.0).abs() > 1e-12 {
                    return Err(LinkError::InvalidParams(format!(
                        "point {i} has norm {r}, not on S3"
                    )));
                }
            }
        }
        let scale = self
            .coords
            .iter()
            .map(|p| vec3::norm4(*p))
            .fold(0.0, f64::max)
            .max(1.0);
        for i in 0..n {
            let d = vec3::dist(&self.coords[i], &self.coords[(i + 1) % n]);
            if d <= 1e-14 * scale {
                return Err(LinkError::DegenerateCurve(format!(
                    "samples {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        for i in 0..n {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if vec3::dist(&self.coords[i], &self.coords[j]) <= 1e-12 * scale {
                    return Err(LinkError::SelfIntersection(format!(
                        "samples {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Raw samples; R³ loops carry a zero fourth coordinate.
    pub fn coords(&self) -> &[V4] {
        &self.coords
    }

    /// R³ positions. For S³ loops this drops the fourth coordinate, so callers
    /// project first.
    pub fn points3(&self) -> Vec<V3> {
        self.coords.iter().map(|p| [p[0], p[1], p[2]]).collect()
    }

    /// Samples as rows of length `ambient.dim()`.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        let d = self.ambient.dim();
        self.coords.iter().map(|p| p[..d].to_vec()).collect()
    }

    fn column(&self, c: usize) -> Vec<f64> {
        self.coords.iter().map(|p| p[c]).collect()
    }

    /// Derivatives with respect to the sample parameter `u ∈ [0,1)`.
    pub fn derivatives(&self) -> Vec<V4> {
        let d = self.ambient.dim();
        let mut out = vec![[0.0; 4]; self.len()];
        for c in 0..d {
            let dc = spectral::derivative(&self.column(c), 1.0);
            for (o, v) in out.iter_mut().zip(dc) {
                o[c] = v;
            }
        }
        out
    }

    /// Length of the trigonometric interpolant of the samples.
    pub fn length(&self) -> f64 {
        let q = 4 * self.len();
        let speed = fine_speed(self, q);
        speed.iter().sum::<f64>() / q as f64
    }

    /// Sum of chord lengths.
    pub fn chord_length(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| vec3::dist(&self.coords[i], &self.coords[(i + 1) % n]))
            .sum()
    }

    /// Largest distance between consecutive samples.
    pub fn max_spacing(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| vec3::dist(&self.coords[i], &self.coords[(i + 1) % n]))
            .fold(0.0, f64::max)
    }

    /// Same curve traversed backwards (sample 0 kept first).
    pub fn reversed(&self) -> SampledLoop {
        let mut coords = vec![self.coords[0]];
        coords.extend(self.coords[1..].iter().rev());
        SampledLoop {
            ambient: self.ambient,
            coords,
        }
    }

    /// Image under the linear map `p ↦ (s0 p0, s1 p1, s2 p2, s3 p3)`; used for
    /// reflections and scalings of R³ loops.
    pub fn scaled_axes(&self, s: V4) -> Result<SampledLoop> {
        let coords = self
            .coords
            .iter()
            .map(|p| [p[0] * s[0], p[1] * s[1], p[2] * s[2], p[3] * s[3]])
            .collect();
        let l = SampledLoop {
            ambient: self.ambient,
            coords,
        };
        l.validate()?;
        Ok(l)
    }

    /// Fourier zero-padding to `m ≥ len` samples (same parametrization).
    pub fn upsampled(&self, m: usize) -> SampledLoop {
        let d = self.ambient.dim();
        let mut coords = vec![[0.0; 4]; m];
        for c in 0..d {
            for (o, v) in coords
                .iter_mut()
                .zip(spectral::upsample(&self.column(c), m))
            {
                o[c] = v;
            }
        }
        if self.ambient == Ambient::S3 {
            for p in coords.iter_mut() {
                let r = vec3::norm4(*p);
                p.iter_mut().for_each(|x| *x /= r);
            }
        }
        SampledLoop {
            ambient: self.ambient,
            coords,
        }
    }
}

fn fine_speed(l: &SampledLoop, q: usize) -> Vec<f64> {
    let d = l.ambient.dim();
    let mut sq = vec![0.0; q];
    for c in 0..d {
        let up = spectral::upsample(&l.column(c), q);
        for (s, v) in sq.iter_mut().zip(spectral::derivative(&up, 1.0)) {
            *s += v * v;
        }
    }
    sq.into_iter().map(f64::sqrt).collect()
}

/// Resample to `m` points equispaced in arclength.
///
/// The speed of the trigonometric interpolant is taken on a fine grid, its
/// periodic antiderivative is inverted by cubic Hermite interpolation, and
/// positions are evaluated on the interpolant.
pub fn arclength_resample(l: &SampledLoop, m: usize) -> Result<SampledLoop> {
    if m < MIN_SAMPLES {
        return Err(LinkError::InvalidParams(format!(
            "{m} samples, need at least {MIN_SAMPLES}"
        )));
    }
    let n = l.len();
    let q = 4 * n.max(m);
    let speed = fine_speed(l, q);
    let (cum, total) = spectral::cumulative_integral(&speed);
    if total < 1e-9 {
        return Err(LinkError::DegenerateCurve(format!(
            "total length {total:.3e}"
        )));
    }
    if speed.iter().any(|&s| s <= 0.0) {
        return Err(LinkError::DegenerateCurve(
            "curve stalls (zero speed)".into(),
        ));
    }
    let hq = 1.0 / q as f64;
    let mut params = Vec::with_capacity(m);
    let mut j = 0usize;
    for k in 0..m {
        let target = total * k as f64 / m as f64;
        while j + 1 < q && cum[j + 1] <= target {
            j += 1;
        }
        let (s0, s1) = (cum[j], if j + 1 < q { cum[j + 1] } else { total });
        let (d0, d1) = (speed[j] * hq, speed[(j + 1) % q] * hq);
        params.push((j as f64 + invert_hermite(s0, s1, d0, d1, target)) * hq);
    }
    let d = l.ambient.dim();
    let interps: Vec<TrigInterpolant> =
        (0..d).map(|c| TrigInterpolant::new(&l.column(c))).collect();
    let mut coords: Vec<V4> = params
        .iter()
        .map(|&u| {
            let mut p = [0.0; 4];
            for (c, it) in interps.iter().enumerate() {
                p[c] = it.eval(u);
            }
            p
        })
        .collect();
    if l.ambient == Ambient::S3 {
        for p in coords.iter_mut() {
            let r = vec3::norm4(*p);
            p.iter_mut().for_each(|x| *x /= r);
        }
    }
    Ok(SampledLoop {
        ambient: l.ambient,
        coords,
    })
}

/// Solve `H(x) = target` on `x ∈ [0,1]` for the cubic Hermite `H` with
/// endpoint values `s0, s1` and endpoint slopes `d0, d1` (per unit `x`).
fn invert_hermite(s0: f64, s1: f64, d0: f64, d1: f64, target: f64) -> f64 {
    let h = |x: f64| {
        let x2 = x * x;
        let x3 = x2 * x;
        (2.0 * x3 - 3.0 * x2 + 1.0) * s0
            + (x3 - 2.0 * x2 + x) * d0
            + (-2.0 * x3 + 3.0 * x2) * s1
            + (x3 - x2) * d1
    };
    let dh = |x: f64| {
        let x2 = x * x;
        (6.0 * x2 - 6.0 * x) * s0
            + (3.0 * x2 - 4.0 * x + 1.0) * d0
            + (-6.0 * x2 + 6.0 * x) * s1
            + (3.0 * x2 - 2.0 * x) * d1
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut x = if s1 > s0 {
        ((target - s0) / (s1 - s0)).clamp(0.0, 1.0)
    } else {
        0.0
    };
    for _ in 0..60 {
        let f = h(x) - target;
        if f.abs() <= 1e-15 * s1.abs().max(1e-300) {
            break;
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let df = dh(x);
        let newton = x - f / df;
        x = if df > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    x
}

/// Unit tangents of an R³ loop via spectral differentiation.
pub fn tangents(l: &SampledLoop) -> Result<Vec<V3>> {
    if l.ambient != Ambient::R3 {
        return Err(LinkError::InvalidParams(
            "tangents need an R3 loop; project first".into(),
        ));
    }
    l.derivatives()
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            let v = [d[0], d[1], d[2]];
            let r = vec3::norm(v);
            if r < 1e-9 {
                Err(LinkError::DegenerateCurve(format!(
                    "vanishing derivative at sample {i}"
                )))
            } else {
                Ok(vec3::scale(v, 1.0 / r))
            }
        })
        .collect()
}

/// Circle of `radius` about `center`, counterclockwise about `normal_axis`.
pub fn gen_circle(radius: f64, center: V3, normal_axis: V3, n: usize) -> Result<SampledLoop> {
    if !(radius > 0.0) {
        return Err(LinkError::DegenerateCurve(format!("radius {radius}")));
    }
    let axis_len = vec3::norm(normal_axis);
    if !(axis_len > 0.0) {
        return Err(LinkError::InvalidParams("zero normal axis".into()));
    }
    let z = vec3::scale(normal_axis, 1.0 / axis_len);
    let (e1, e2) = orthonormal_pair(z);
    let pts = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            let (s, c) = t.sin_cos();
            vec3::add(
                center,
                vec3::add(vec3::scale(e1, radius * c), vec3::scale(e2, radius * s)),
            )
        })
        .collect();
    SampledLoop::r3(pts)
}

/// Right-handed pair `(e1, e2)` with `e1 × e2 = z` for a unit vector `z`.
fn orthonormal_pair(z: V3) -> (V3, V3) {
    let k = (0..3)
        .min_by(|&a, &b| z[a].abs().total_cmp(&z[b].abs()))
        .unwrap_or(0);
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let e1 = vec3::normalize(vec3::sub(e, vec3::scale(z, vec3::dot(e, z))));
    let e2 = vec3::cross(z, e1);
    (e1, e2)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The (p,q) torus knot
/// `((R + r sin qt) cos pt, (R + r sin qt) sin pt, r cos qt)`, t ∈ [0, 2π).
pub fn gen_torus_knot(p: i64, q: i64, big_r: f64, r: f64, n: usize) -> Result<SampledLoop> {
    if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
        return Err(LinkError::InvalidParams(format!("gcd({p},{q}) != 1")));
    }
    if !(r > 0.0 && r < big_r) {
        return Err(LinkError::InvalidParams(format!(
            "need 0 < r < R, got r={r}, R={big_r}"
        )));
    }
    let pts = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            let rho = big_r + r * (q as f64 * t).sin();
            let a = p as f64 * t;
            [rho * a.cos(), rho * a.sin(), r * (q as f64 * t).cos()]
        })
        .collect();
    SampledLoop::r3(pts)
}

/// Point `(a, b) ∈ C² ≅ S³` over `v ∈ S²` under the Hopf map.
fn hopf_preimage(v: V3) -> ([f64; 2], [f64; 2]) {
    if v[0] >= 0.0 {
        let a = ((1.0 + v[0]) / 2.0).sqrt();
        ([a, 0.0], [v[1] / (2.0 * a), -v[2] / (2.0 * a)])
    } else {
        let b = ((1.0 - v[0]) / 2.0).sqrt();
        ([v[1] / (2.0 * b), v[2] / (2.0 * b)], [b, 0.0])
    }
}

/// Hopf map `(|z₀|²−|z₁|², Re 2z₀z̄₁, Im 2z₀z̄₁)` in coordinates
/// `(Re z₀, Im z₀, Re z₁, Im z₁)`.
pub fn hopf_map(x: V4) -> V3 {
    let (a, b) = ((x[0], x[1]), (x[2], x[3]));
    let re = a.0 * b.0 + a.1 * b.1;
    let im = a.1 * b.0 - a.0 * b.1;
    [
        a.0 * a.0 + a.1 * a.1 - b.0 * b.0 - b.1 * b.1,
        2.0 * re,
        2.0 * im,
    ]
}

/// The Hopf fiber `{e^{it}(a,b)}` over the unit vector `v`, oriented along `(iz₀, iz₁)`.
pub fn gen_hopf_fiber(v: V3, n: usize) -> Result<SampledLoop> {
    let r = vec3::norm(v);
    if (r - 1.0).abs() > 1e-8 {
        return Err(LinkError::InvalidParams(format!("|v| = {r}, expected 1")));
    }
    let v = vec3::scale(v, 1.0 / r);
    let (a, b) = hopf_preimage(v);
    let pts = (0..n)
        .map(|i| {
            let (s, c) = (2.0 * PI * i as f64 / n as f64).sin_cos();
            let p = [
                a[0] * c - a[1] * s,
                a[0] * s + a[1] * c,
                b[0] * c - b[1] * s,
                b[0] * s + b[1] * c,
            ];
            let r = vec3::norm4(p);
            [p[0] / r, p[1] / r, p[2] / r, p[3] / r]
        })
        .collect();
    SampledLoop::s3(pts)
}

/// Orthonormal basis `E1, E2, E3` of `P^⊥` with `det[E1, E2, E3, P] = +1`.
fn pole_basis(pole: V4) -> [V4; 3] {
    let residual = |i: usize| {
        let mut e = [0.0; 4];
        e[i] = 1.0;
        let d = pole[i];
        [
            e[0] - d * pole[0],
            e[1] - d * pole[1],
            e[2] - d * pole[2],
            e[3] - d * pole[3],
        ]
    };
    let drop = (0..4)
        .max_by(|&a, &b| pole[a].abs().total_cmp(&pole[b].abs()))
        .unwrap_or(3);
    let mut basis: Vec<V4> = Vec::with_capacity(3);
    for i in (0..4).filter(|&i| i != drop) {
        let mut v = residual(i);
        for b in &basis {
            let d = vec3::dot4(v, *b);
            for c in 0..4 {
                v[c] -= d * b[c];
            }
        }
        let r = vec3::norm4(v);
        basis.push([v[0] / r, v[1] / r, v[2] / r, v[3] / r]);
    }
    let mut e = [basis[0], basis[1], basis[2]];
    if vec3::det4([e[0], e[1], e[2], pole]) < 0.0 {
        e[2] = e[2].map(|x| -x);
    }
    e
}

fn unit_pole(pole: V4) -> Result<V4> {
    let r = vec3::norm4(pole);
    if !(r > 0.0) || !r.is_finite() {
        return Err(LinkError::InvalidParams(
            "pole must be a nonzero vector".into(),
        ));
    }
    if (r - 1.0).abs() > 1e-8 {
        return Err(LinkError::InvalidParams(format!(
            "pole has norm {r}, expected 1"
        )));
    }
    Ok(pole.map(|x| x / r))
}

/// Stereographic projection of an S³ loop from `pole` onto R³.
pub fn stereographic_project(l: &SampledLoop, pole: V4, min_clearance: f64) -> Result<SampledLoop> {
    if l.ambient != Ambient::S3 {
        return Err(LinkError::InvalidParams(
            "stereographic projection needs an S3 loop".into(),
        ));
    }
    let pole = unit_pole(pole)?;
    let clearance = l
        .coords
        .iter()
        .map(|x| vec3::dist(x, &pole))
        .fold(f64::INFINITY, f64::min);
    if clearance <= min_clearance {
        return Err(LinkError::PoleTooClose {
            distance: clearance,
            min: min_clearance,
        });
    }
    let e = pole_basis(pole);
    let pts = l
        .coords
        .iter()
        .map(|&x| {
            let w = 1.0 - vec3::dot4(x, pole);
            [
                vec3::dot4(x, e[0]) / w,
                vec3::dot4(x, e[1]) / w,
                vec3::dot4(x, e[2]) / w,
            ]
        })
        .collect();
    SampledLoop::r3(pts)
}

/// Inverse of [`stereographic_project`] for the same pole.
pub fn inverse_stereographic(l: &SampledLoop, pole: V4) -> Result<SampledLoop> {
    if l.ambient != Ambient::R3 {
        return Err(LinkError::InvalidParams(
            "inverse projection needs an R3 loop".into(),
        ));
    }
    let pole = unit_pole(pole)?;
    let e = pole_basis(pole);
    let pts = l
        .coords
        .iter()
        .map(|y| {
            let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
            let mut x = pole.map(|p| p * (r2 - 1.0) / (r2 + 1.0));
            for i in 0..3 {
                for c in 0..4 {
                    x[c] += 2.0 * y[i] * e[i][c] / (r2 + 1.0);
                }
            }
            let r = vec3::norm4(x);
            x.map(|v| v / r)
        })
        .collect();
    SampledLoop::s3(pts)
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut x = 0.0;
    while i > 0 {
        x += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    x
}

/// Fixed low-discrepancy grid of `size` points on S³ (Halton bases 2, 3, 5
/// mapped through Hopf coordinates).
pub fn pole_grid(size: usize) -> Vec<V4> {
    (1..=size)
        .map(|i| {
            let u1 = radical_inverse(i, 2);
            let u2 = radical_inverse(i, 3);
            let u3 = radical_inverse(i, 5);
            let (r0, r1) = (u1.sqrt(), (1.0 - u1).sqrt());
            let (s2, c2) = (2.0 * PI * u2).sin_cos();
            let (s3, c3) = (2.0 * PI * u3).sin_cos();
            [r0 * c2, r0 * s2, r1 * c3, r1 * s3]
        })
        .collect()
}

/// Minimum distance from `pole` to the samples of all loops.
pub fn pole_clearance(link: &[SampledLoop], pole: V4) -> f64 {
    link.iter()
        .flat_map(|l| l.coords.iter())
        .map(|x| vec3::dist(x, &pole))
        .fold(f64::INFINITY, f64::min)
}

/// Grid points ordered by decreasing clearance from the link (ties by index).
pub fn ranked_poles(link: &[SampledLoop], grid_size: usize) -> Result<Vec<(V4, f64)>> {
    if link.is_empty() {
        return Err(LinkError::InvalidParams("empty link".into()));
    }
    if link.iter().any(|l| l.ambient != Ambient::S3) {
        return Err(LinkError::InvalidParams(
            "pole selection needs S3 loops".into(),
        ));
    }
    let mut scored: Vec<(usize, V4, f64)> = pole_grid(grid_size)
        .into_iter()
        .enumerate()
        .map(|(i, p)| (i, p, pole_clearance(link, p)))
        .collect();
    scored.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
    Ok(scored.into_iter().map(|(_, p, d)| (p, d)).collect())
}

/// The grid pole farthest from every sample of the link.
pub fn choose_pole(link: &[SampledLoop]) -> Result<V4> {
    choose_pole_from_grid(link, DEFAULT_POLE_GRID)
}

pub fn choose_pole_from_grid(link: &[SampledLoop], grid_size: usize) -> Result<V4> {
    if link.is_empty() {
        return Err(LinkError::InvalidParams("empty link".into()));
    }
    if link.iter().any(|l| l.ambient != Ambient::S3) {
        return Err(LinkError::InvalidParams(
            "pole selection needs S3 loops".into(),
        ));
    }
    let mut best = (f64::NEG_INFINITY, [0.0, 0.0, 0.0, 1.0]);
    for p in pole_grid(grid_size) {
        let d = pole_clearance(link, p);
        if d > best.0 {
            best = (d, p);
        }
    }
    Ok(best.1)
}

/// An R³ loop with a unit normal vector field.
#[derive(Debug, Clone, PartialEq)]
pub struct FramedLoop {
    base: SampledLoop,
    normals: Vec<V3>,
}

impl FramedLoop {
    pub fn new(base: SampledLoop, normals: Vec<V3>) -> Result<Self> {
        if base.ambient != Ambient::R3 {
            return Err(LinkError::InvalidParams("framed loops live in R3".into()));
        }
        let n = base.len();
        if normals.len() != n {
            return Err(LinkError::InvalidParams(format!(
                "{} normals for {n} samples",
                normals.len()
            )));
        }
        for (i, v) in normals.iter().enumerate() {
            if (vec3::norm(*v) - 1.0).abs() > 1e-10 {
                return Err(LinkError::InvalidParams(format!(
                    "normal {i} is not a unit vector"
                )));
            }
        }
        let t = tangents(&base)?;
        let worst = t
            .iter()
            .zip(&normals)
            .map(|(a, b)| vec3::dot(*a, *b).abs())
            .fold(0.0, f64::max);
        if worst >= 1e-8 {
            return Err(LinkError::FrameNotOrthogonal(worst));
        }
        for i in 0..n {
            if vec3::dot(normals[i], normals[(i + 1) % n]) <= 0.0 {
                return Err(LinkError::InvalidParams(format!(
                    "normal field flips between samples {i} and {}",
                    (i + 1) % n
                )));
            }
        }
        Ok(FramedLoop { base, normals })
    }

    pub fn base(&self) -> &SampledLoop {
        &self.base
    }

    pub fn normals(&self) -> &[V3] {
        &self.normals
    }
}

/// Outward radial framing of a planar circle.
pub fn radial_framing(circle: &SampledLoop) -> Result<FramedLoop> {
    if circle.ambient != Ambient::R3 {
        return Err(LinkError::NotPlanar("not an R3 loop".into()));
    }
    let pts = circle.points3();
    let n = pts.len() as f64;
    let m = pts.len();
    let (a, b, c) = (pts[0], pts[m / 3], pts[2 * m / 3]);
    let (u, v) = (vec3::sub(b, a), vec3::sub(c, a));
    let w = vec3::cross(u, v);
    let w2 = vec3::dot(w, w);
    if !(w2 > 0.0) {
        return Err(LinkError::NotPlanar("collinear samples".into()));
    }
    let center = vec3::add(
        a,
        vec3::scale(
            vec3::add(
                vec3::scale(vec3::cross(v, w), vec3::dot(u, u)),
                vec3::scale(vec3::cross(w, u), vec3::dot(v, v)),
            ),
            0.5 / w2,
        ),
    );
    let radii: Vec<f64> = pts
        .iter()
        .map(|p| vec3::norm(vec3::sub(*p, center)))
        .collect();
    let mean_r = radii.iter().sum::<f64>() / n;
    let spread = radii.iter().map(|r| (r - mean_r).abs()).fold(0.0, f64::max);
    if spread > 1e-8 * mean_r {
        return Err(LinkError::NotPlanar(format!(
            "radius varies by {spread:.3e}"
        )));
    }
    let axis = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            vec3::cross(
                vec3::sub(*p, center),
                vec3::sub(pts[(i + 1) % pts.len()], center),
            )
        })
        .fold([0.0; 3], vec3::add);
    let axis = vec3::normalize(axis);
    let off = pts
        .iter()
        .map(|p| vec3::dot(vec3::sub(*p, center), axis).abs())
        .fold(0.0, f64::max);
    if off > 1e-8 * mean_r {
        return Err(LinkError::NotPlanar(format!(
            "points leave the plane by {off:.3e}"
        )));
    }
    let normals = pts
        .iter()
        .map(|p| vec3::normalize(vec3::sub(*p, center)))
        .collect();
    FramedLoop::new(circle.clone(), normals)
}

/// Discrete parallel transport of a normal around the loop.
///
/// Each step applies the minimal rotation between consecutive tangents and
/// then projects out the tangent and renormalizes.
///
/// Returns the closed framing together with the holonomy angle `θ ∈ (−π, π]`,
/// measured about the initial tangent from the initial normal to the
/// transported one. The open transported field is closed up by rotating
/// sample `i` by `−θ·i/N` about its tangent, so the framing has twist `−θ/2π`.
pub fn parallel_framing(l: &SampledLoop) -> Result<(FramedLoop, f64)> {
    let t = tangents(l)?;
    let n = t.len();
    let k = (0..3)
        .min_by(|&a, &b| t[0][a].abs().total_cmp(&t[0][b].abs()))
        .unwrap_or(0);
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let project = |v: V3, ti: V3| vec3::normalize(vec3::sub(v, vec3::scale(ti, vec3::dot(v, ti))));
    // rotate each normal by the minimal rotation carrying t_i to t_{i+1}
    let step = |v: V3, from: V3, to: V3| {
        let axis = vec3::cross(from, to);
        let s = vec3::norm(axis);
        let moved = if s > 1e-300 {
            vec3::rotate(v, vec3::scale(axis, 1.0 / s), s.atan2(vec3::dot(from, to)))
        } else {
            v
        };
        project(moved, to)
    };
    let mut normals = Vec::with_capacity(n);
    normals.push(project(e, t[0]));
    for i in 1..n {
        let prev = normals[i - 1];
        normals.push(step(prev, t[i - 1], t[i]));
    }
    let back = step(normals[n - 1], t[n - 1], t[0]);
    let n0 = normals[0];
    let theta = vec3::dot(t[0], vec3::cross(n0, back)).atan2(vec3::dot(n0, back));
    for (i, v) in normals.iter_mut().enumerate() {
        *v = vec3::normalize(vec3::rotate(*v, t[i], -theta * i as f64 / n as f64));
    }
    Ok((FramedLoop::new(l.clone(), normals)?, theta))
}

/// Rotate a framing by `turns` full turns about the tangent, uniformly in the
/// sample parameter.
pub fn rotate_framing(f: &FramedLoop, turns: i64) -> Result<FramedLoop> {
    let t = tangents(&f.base)?;
    let n = t.len();
    let normals = f
        .normals
        .iter()
        .zip(&t)
        .enumerate()
        .map(|(i, (v, ti))| {
            vec3::normalize(vec3::rotate(
                *v,
                *ti,
                2.0 * PI * turns as f64 * i as f64 / n as f64,
            ))
        })
        .collect();
    FramedLoop::new(f.base.clone(), normals)
}

/// The pushed-off copy `γ + ε n`.
pub fn offset_curve(f: &FramedLoop, epsilon: f64) -> Result<SampledLoop> {
    let pts = f
        .base
        .points3()
        .iter()
        .zip(&f.normals)
        .map(|(p, v)| vec3::add(*p, vec3::scale(*v, epsilon)))
        .collect();
    SampledLoop::r3(pts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistSign {
    Minus,
    Plus,
}

impl TwistSign {
    fn factor(self) -> f64 {
        match self {
            TwistSign::Minus => -1.0,
            TwistSign::Plus => 1.0,
        }
    }
}

/// Parameters of `γ + r(cos(js) S ∓ sin(js) t×S)` with `j = 2πn/ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistFamilyParams {
    pub r: f64,
    pub n: u32,
    pub sign: TwistSign,
}

impl TwistFamilyParams {
    /// Angular rate `j = 2πn/ℓ` for a base of length `ell`.
    pub fn j(&self, ell: f64) -> f64 {
        2.0 * PI * self.n as f64 / ell
    }

    /// Dimensionless amplitude `a = r·j`.
    pub fn a(&self, ell: f64) -> f64 {
        self.r * self.j(ell)
    }
}

/// Largest curvature of an R³ loop, from spectral derivatives.
pub fn max_curvature(l: &SampledLoop) -> Result<f64> {
    let d1 = l.derivatives();
    let t = tangents(l)?;
    let cols: Vec<Vec<f64>> = (0..3).map(|c| t.iter().map(|v| v[c]).collect()).collect();
    let dt: Vec<Vec<f64>> = cols.iter().map(|c| spectral::derivative(c, 1.0)).collect();
    Ok((0..l.len())
        .map(|i| {
            let speed = vec3::norm([d1[i][0], d1[i][1], d1[i][2]]);
            vec3::norm([dt[0][i], dt[1][i], dt[2][i]]) / speed
        })
        .fold(0.0, f64::max))
}

/// Reject curves whose samples come closer than `3×` the largest spacing
/// between points that are more than `4×` that spacing apart along the curve.
pub fn check_simple(l: &SampledLoop) -> Result<()> {
    let n = l.len();
    let c = &l.coords;
    let gaps: Vec<f64> = (0..n).map(|i| vec3::dist(&c[i], &c[(i + 1) % n])).collect();
    let h = gaps.iter().fold(0.0, |a: f64, &b| a.max(b));
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + gaps[i];
    }
    let total = prefix[n];
    for i in 0..n {
        for j in (i + 1)..n {
            let along = prefix[j] - prefix[i];
            let arc = along.min(total - along);
            if arc > 4.0 * h {
                let d = vec3::dist(&c[i], &c[j]);
                if d < 3.0 * h {
                    return Err(LinkError::SelfIntersection(format!(
                        "samples {i} and {j} are {d:.3e} apart (spacing {h:.3e})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Twisted deformation of a framed base loop, sampled at `n_out` points
/// uniformly in the base arclength. The base is assumed to be sampled
/// uniformly in arclength.
pub fn gen_twisted(
    base: &FramedLoop,
    params: TwistFamilyParams,
    n_out: usize,
) -> Result<SampledLoop> {
    if !(params.r >= 0.0) || !params.r.is_finite() {
        return Err(LinkError::InvalidParams(format!("radius {}", params.r)));
    }
    let ell = base.base.length();
    let kappa = max_curvature(&base.base)?;
    if params.r > 0.0 && params.r * kappa >= 1.0 - 1e-9 {
        return Err(LinkError::SelfIntersection(format!(
            "offset radius {} reaches the curvature radius {:.6}",
            params.r,
            1.0 / kappa
        )));
    }
    let n = base.base.len();
    let pts = base.base.points3();
    let (gamma, frame_s, tang): (Vec<V3>, Vec<V3>, Vec<V3>) = if n_out == n {
        (pts, base.normals.clone(), tangents(&base.base)?)
    } else {
        let col = |v: &[V3], c: usize| v.iter().map(|p| p[c]).collect::<Vec<f64>>();
        let gi: Vec<TrigInterpolant> = (0..3)
            .map(|c| TrigInterpolant::new(&col(&pts, c)))
            .collect();
        let si: Vec<TrigInterpolant> = (0..3)
            .map(|c| TrigInterpolant::new(&col(&base.normals, c)))
            .collect();
        let mut g = Vec::with_capacity(n_out);
        let mut s = Vec::with_capacity(n_out);
        let mut t = Vec::with_capacity(n_out);
        for m in 0..n_out {
            let u = m as f64 / n_out as f64;
            let (mut p, mut d) = ([0.0; 3], [0.0; 3]);
            for c in 0..3 {
                (p[c], d[c]) = gi[c].eval_with_derivative(u);
            }
            let tv = vec3::normalize(d);
            let sv = [si[0].eval(u), si[1].eval(u), si[2].eval(u)];
            g.push(p);
            s.push(vec3::normalize(vec3::sub(
                sv,
                vec3::scale(tv, vec3::dot(sv, tv)),
            )));
            t.push(tv);
        }
        (g, s, t)
    };
    let j = params.j(ell);
    let sgn = params.sign.factor();
    let out: Vec<V3> = (0..n_out)
        .map(|m| {
            let s_len = ell * m as f64 / n_out as f64;
            let (sn, cs) = (j * s_len).sin_cos();
            let txs = vec3::cross(tang[m], frame_s[m]);
            let off = vec3::add(vec3::scale(frame_s[m], cs), vec3::scale(txs, sgn * sn));
            vec3::add(gamma[m], vec3::scale(off, params.r))
        })
        .collect();
    let l = SampledLoop::r3(out)?;
    check_simple(&l)?;
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature;

    fn unit_circle(n: usize) -> SampledLoop {
        gen_circle(1.0, [0.0; 3], [0.0, 0.0, 1.0], n).unwrap()
    }

    #[test]
    fn rejects_short_and_degenerate_loops() {
        let pts: Vec<V3> = (0..8).map(|i| [i as f64, 0.0, 0.0]).collect();
        assert!(matches!(
            SampledLoop::r3(pts),
            Err(LinkError::InvalidParams(_))
        ));
        let mut pts: Vec<V3> = unit_circle(32).points3();
        pts[5] = pts[4];
        assert!(matches!(
            SampledLoop::r3(pts),
            Err(LinkError::DegenerateCurve(_))
        ));
        let mut pts: Vec<V3> = unit_circle(32).points3();
        pts[20] = pts[4];
        assert!(matches!(
            SampledLoop::r3(pts),
            Err(LinkError::SelfIntersection(_))
        ));
    }

    #[test]
    fn s3_loops_must_be_unit() {
        let pts: Vec<V4> = (0..32)
            .map(|i| [1.01 * (i as f64).cos(), 1.01 * (i as f64).sin(), 0.0, 0.0])
            .collect();
        assert!(matches!(
            SampledLoop::s3(pts),
            Err(LinkError::InvalidParams(_))
        ));
    }

    #[test]
    fn circle_generators() {
        let c = unit_circle(64);
        for (i, p) in c.points3().iter().enumerate() {
            let t = 2.0 * PI * i as f64 / 64.0;
            assert!(vec3::dist(p, &[t.cos(), t.sin(), 0.0]) < 1e-15);
        }
        let c = gen_circle(2.0, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0], 64).unwrap();
        for p in c.points3() {
            assert!(p[0].abs() < 1e-15);
            assert!((vec3::norm(vec3::sub(p, [0.0, 0.0, 1.0])) - 2.0).abs() < 1e-14);
        }
        assert!(matches!(
            gen_circle(0.0, [0.0; 3], [0.0, 0.0, 1.0], 64),
            Err(LinkError::DegenerateCurve(_))
        ));
    }

    #[test]
    fn circle_tangents() {
        let t = tangents(&unit_circle(128)).unwrap();
        for (i, v) in t.iter().enumerate() {
            let a = 2.0 * PI * i as f64 / 128.0;
            assert!(vec3::dist(v, &[-a.sin(), a.cos(), 0.0]) < 1e-10);
        }
    }

    fn torus_tangent(t: f64) -> V3 {
        let (p, q, big_r, r) = (2.0, 3.0, 2.0, 0.5);
        let rho = big_r + r * (q * t).sin();
        let drho = r * q * (q * t).cos();
        let d = [
            drho * (p * t).cos() - rho * p * (p * t).sin(),
            drho * (p * t).sin() + rho * p * (p * t).cos(),
            -r * q * (q * t).sin(),
        ];
        vec3::normalize(d)
    }

    #[test]
    fn torus_knot_tangents_match_analytic() {
        let k = gen_torus_knot(2, 3, 2.0, 0.5, 256).unwrap();
        let t = tangents(&k).unwrap();
        let worst = t
            .iter()
            .enumerate()
            .map(|(i, v)| vec3::dist(v, &torus_tangent(2.0 * PI * i as f64 / 256.0)))
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn torus_knot_parameters() {
        assert!(matches!(
            gen_torus_knot(2, 4, 2.0, 0.5, 64),
            Err(LinkError::InvalidParams(_))
        ));
        assert!(matches!(
            gen_torus_knot(2, 3, 1.0, 1.5, 64),
            Err(LinkError::InvalidParams(_))
        ));
        let c = gen_torus_knot(1, 0, 2.0, 0.5, 64).unwrap();
        for p in c.points3() {
            assert!(((p[0] * p[0] + p[1] * p[1]).sqrt() - 2.0).abs() < 1e-14);
        }
        let k = gen_torus_knot(2, 3, 2.0, 0.5, 512).unwrap();
        check_simple(&k).unwrap();
    }

    #[test]
    fn resample_warped_circle() {
        // smooth non-uniform parametrization of the unit circle
        let pts: Vec<V3> = (0..64)
            .map(|i| {
                let u = i as f64 / 64.0;
                let a = 2.0 * PI * u + 0.3 * (2.0 * PI * u).sin();
                [a.cos(), a.sin(), 0.0]
            })
            .collect();
        let l = SampledLoop::r3(pts).unwrap();
        let r = arclength_resample(&l, 128).unwrap();
        let p = r.points3();
        let arcs: Vec<f64> = (0..128)
            .map(|i| {
                let (a, b) = (p[i], p[(i + 1) % 128]);
                vec3::dot(a, b).clamp(-1.0, 1.0).acos()
            })
            .collect();
        let mean = arcs.iter().sum::<f64>() / 128.0;
        for a in arcs {
            assert!((a - mean).abs() < 1e-6 * mean);
        }
        assert!((r.length() - 2.0 * PI).abs() < 1e-6 * 2.0 * PI);
    }

    #[test]
    fn resample_is_identity_on_uniform_input() {
        let c = unit_circle(64);
        let r = arclength_resample(&c, 64).unwrap();
        for (a, b) in c.coords().iter().zip(r.coords()) {
            assert!(vec3::dist(a, b) < 1e-9);
        }
    }

    #[test]
    fn torus_knot_length_matches_quadrature() {
        let k = gen_torus_knot(2, 3, 2.0, 0.5, 256).unwrap();
        let r = arclength_resample(&k, 256).unwrap();
        let speed = |t: f64| {
            let (p, q, big_r, rr) = (2.0, 3.0, 2.0, 0.5);
            let rho = big_r + rr * (q * t).sin();
            let drho = rr * q * (q * t).cos();
            (drho * drho + rho * rho * p * p + (rr * q * (q * t).sin()).powi(2)).sqrt()
        };
        let exact = quadrature::integrate(speed, 0.0, 2.0 * PI, 1e-13, 1e-13)
            .unwrap()
            .value;
        assert!((r.length() - exact).abs() < 1e-6 * exact);
    }

    #[test]
    fn resampling_twice_changes_nothing() {
        let k = gen_torus_knot(2, 3, 2.0, 0.5, 256).unwrap();
        let once = arclength_resample(&k, 256).unwrap();
        let twice = arclength_resample(&once, 256).unwrap();
        let worst = once
            .coords()
            .iter()
            .zip(twice.coords())
            .map(|(a, b)| vec3::dist(a, b))
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn tangent_error_shrinks_with_resolution() {
        // warped, non-band-limited parametrization of a smooth space curve
        let curve = |u: f64| {
            let a = 2.0 * PI * u + 0.4 * (2.0 * PI * u).sin();
            let da = 2.0 * PI * (1.0 + 0.4 * (2.0 * PI * u).cos());
            let p = [a.cos(), a.sin(), 0.2 * (3.0 * a).cos()];
            let d = [-a.sin() * da, a.cos() * da, -0.6 * (3.0 * a).sin() * da];
            (p, vec3::normalize(d))
        };
        let err = |n: usize| {
            let l =
                SampledLoop::r3((0..n).map(|i| curve(i as f64 / n as f64).0).collect()).unwrap();
            tangents(&l)
                .unwrap()
                .iter()
                .enumerate()
                .map(|(i, v)| vec3::dist(v, &curve(i as f64 / n as f64).1))
                .fold(0.0, f64::max)
        };
        let mut prev = err(16);
        for n in [32, 64, 128] {
            let e = err(n);
            assert!(e <= (prev / 10.0).max(1e-10), "N={n}: {prev} -> {e}");
            prev = e;
        }
        assert!(prev < 1e-10);
    }

    #[test]
    fn hopf_fibers() {
        let f = gen_hopf_fiber([1.0, 0.0, 0.0], 32).unwrap();
        for (i, x) in f.coords().iter().enumerate() {
            let t = 2.0 * PI * i as f64 / 32.0;
            assert!(vec3::dist(x, &[t.cos(), t.sin(), 0.0, 0.0]) < 1e-15);
        }
        let f = gen_hopf_fiber([-1.0, 0.0, 0.0], 32).unwrap();
        for (i, x) in f.coords().iter().enumerate() {
            let t = 2.0 * PI * i as f64 / 32.0;
            assert!(vec3::dist(x, &[0.0, 0.0, t.cos(), t.sin()]) < 1e-15);
        }
        for v in [
            [0.6, 0.0, 0.8],
            [-0.36, 0.48, 0.8],
            [0.0, -1.0, 0.0],
            [-0.6, -0.64, 0.48],
        ] {
            let f = gen_hopf_fiber(v, 256).unwrap();
            for x in f.coords() {
                assert!(vec3::dist(&hopf_map(*x), &v) < 1e-10);
            }
            assert!((f.length() - 2.0 * PI).abs() < 1e-8);
            assert!((f.chord_length() - 2.0 * PI).abs() < 1e-3);
        }
        assert!(matches!(
            gen_hopf_fiber([1.0, 1.0, 0.0], 32),
            Err(LinkError::InvalidParams(_))
        ));
    }

    #[test]
    fn fiber_orientation_follows_i_z() {
        let f = gen_hopf_fiber([0.28, -0.96, 0.0], 512).unwrap();
        let d = f.derivatives();
        for (x, v) in f.coords().iter().zip(d) {
            let iz = [-x[1], x[0], -x[3], x[2]];
            assert!(vec3::dot4(iz, v) > 0.0);
        }
    }

    #[test]
    fn projection_of_a_fiber_is_a_circle() {
        let f = gen_hopf_fiber([1.0, 0.0, 0.0], 128).unwrap();
        let p = stereographic_project(&f, [0.0, 0.0, 0.0, 1.0], DEFAULT_POLE_CLEARANCE).unwrap();
        radial_framing(&p).unwrap();
        let g = gen_hopf_fiber([0.0, 0.6, 0.8], 128).unwrap();
        let pole = choose_pole(std::slice::from_ref(&g)).unwrap();
        let p = stereographic_project(&g, pole, DEFAULT_POLE_CLEARANCE).unwrap();
        radial_framing(&p).unwrap();
    }

    #[test]
    fn pole_on_curve_is_rejected() {
        let f = gen_hopf_fiber([-1.0, 0.0, 0.0], 64).unwrap();
        let r = stereographic_project(&f, [0.0, 0.0, 0.0, 1.0], DEFAULT_POLE_CLEARANCE);
        assert!(matches!(r, Err(LinkError::PoleTooClose { .. })));
    }

    #[test]
    fn pole_basis_is_oriented() {
        for p in pole_grid(50) {
            let e = pole_basis(p);
            assert!((vec3::det4([e[0], e[1], e[2], p]) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_roundtrip() {
        let k = gen_torus_knot(2, 3, 2.0, 0.5, 128).unwrap();
        let pole = vec3::normalize([1.0, 2.0, -1.0]);
        let pole = [pole[0] * 0.6, pole[1] * 0.6, pole[2] * 0.6, 0.8];
        let s = inverse_stereographic(&k, pole).unwrap();
        let back = stereographic_project(&s, pole, DEFAULT_POLE_CLEARANCE).unwrap();
        for (a, b) in k.coords().iter().zip(back.coords()) {
            assert!(vec3::dist(a, b) < 1e-10);
        }
        let f = gen_hopf_fiber([0.0, 0.0, 1.0], 64).unwrap();
        let pole = choose_pole(std::slice::from_ref(&f)).unwrap();
        let y = stereographic_project(&f, pole, DEFAULT_POLE_CLEARANCE).unwrap();
        let x = inverse_stereographic(&y, pole).unwrap();
        for (a, b) in f.coords().iter().zip(x.coords()) {
            assert!(vec3::dist(a, b) < 1e-10);
        }
    }

    #[test]
    fn chosen_pole_clears_fibers() {
        let f = gen_hopf_fiber([1.0, 0.0, 0.0], 128).unwrap();
        let p = choose_pole(std::slice::from_ref(&f)).unwrap();
        assert!(pole_clearance(std::slice::from_ref(&f), p) >= 0.5);
        let g = gen_hopf_fiber([-1.0, 0.0, 0.0], 128).unwrap();
        let link = [f, g];
        let p = choose_pole(&link).unwrap();
        let best = pole_grid(DEFAULT_POLE_GRID)
            .into_iter()
            .map(|q| pole_clearance(&link, q))
            .fold(0.0, f64::max);
        assert_eq!(pole_clearance(&link, p), best);
        assert!(matches!(choose_pole(&[]), Err(LinkError::InvalidParams(_))));
    }

    #[test]
    fn distinct_fibers_are_disjoint() {
        let vs = [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.6, 0.8],
        ];
        let fibers: Vec<SampledLoop> = vs
            .iter()
            .map(|v| gen_hopf_fiber(*v, 128).unwrap())
            .collect();
        for i in 0..fibers.len() {
            for j in (i + 1)..fibers.len() {
                let d = fibers[i]
                    .coords()
                    .iter()
                    .flat_map(|a| fibers[j].coords().iter().map(move |b| vec3::dist(a, b)))
                    .fold(f64::INFINITY, f64::min);
                assert!(d > 0.1);
            }
        }
    }

    #[test]
    fn radial_framing_of_circle() {
        let c = unit_circle(64);
        let f = radial_framing(&c).unwrap();
        for (p, v) in c.points3().iter().zip(f.normals()) {
            assert!(vec3::dist(p, v) < 1e-14);
        }
        let k = gen_torus_knot(2, 3, 2.0, 0.5, 64).unwrap();
        assert!(matches!(radial_framing(&k), Err(LinkError::NotPlanar(_))));
    }

    #[test]
    fn parallel_transport_on_planar_circle_has_no_holonomy() {
        for n in [128, 256] {
            let (_, hol) = parallel_framing(&unit_circle(n)).unwrap();
            assert!(hol.abs() < 1e-8, "{hol}");
        }
    }

    #[test]
    fn twisted_circle_matches_explicit_formula() {
        let base = radial_framing(&unit_circle(512)).unwrap();
        let p = TwistFamilyParams {
            r: 0.05,
            n: 10,
            sign: TwistSign::Minus,
        };
        let tw = gen_twisted(&base, p, 512).unwrap();
        for (i, x) in tw.points3().iter().enumerate() {
            let s = 2.0 * PI * i as f64 / 512.0;
            let rho = 1.0 + 0.05 * (10.0 * s).cos();
            let expect = [rho * s.cos(), rho * s.sin(), 0.05 * (10.0 * s).sin()];
            assert!(vec3::dist(x, &expect) < 1e-12);
        }
        let p0 = TwistFamilyParams {
            r: 0.0,
            n: 10,
            sign: TwistSign::Minus,
        };
        let same = gen_twisted(&base, p0, 512).unwrap();
        for (a, b) in same.coords().iter().zip(base.base().coords()) {
            assert!(vec3::dist(a, b) < 1e-15);
        }
        let too_big = TwistFamilyParams {
            r: 1.0,
            n: 3,
            sign: TwistSign::Plus,
        };
        assert!(matches!(
            gen_twisted(&base, too_big, 512),
            Err(LinkError::SelfIntersection(_))
        ));
    }

    #[test]
    fn twisted_family_interpolates_to_other_resolutions() {
        let base = radial_framing(&unit_circle(256)).unwrap();
        let p = TwistFamilyParams {
            r: 0.05,
            n: 10,
            sign: TwistSign::Minus,
        };
        let tw = gen_twisted(&base, p, 700).unwrap();
        for (i, x) in tw.points3().iter().enumerate() {
            let s = 2.0 * PI * i as f64 / 700.0;
            let rho = 1.0 + 0.05 * (10.0 * s).cos();
            let expect = [rho * s.cos(), rho * s.sin(), 0.05 * (10.0 * s).sin()];
            assert!(vec3::dist(x, &expect) < 1e-12);
        }
    }

    #[test]
    fn twisted_family_converges_linearly_in_r() {
        let base = radial_framing(&unit_circle(256)).unwrap();
        let sup = |r: f64| {
            let tw = gen_twisted(
                &base,
                TwistFamilyParams {
                    r,
                    n: 4,
                    sign: TwistSign::Plus,
                },
                256,
            )
            .unwrap();
            tw.coords()
                .iter()
                .zip(base.base().coords())
                .map(|(a, b)| vec3::dist(a, b))
                .fold(0.0, f64::max)
        };
        for r in [0.1, 0.01, 0.001] {
            assert!((sup(r) / r - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn frame_validation() {
        let c = unit_circle(64);
        let bad: Vec<V3> = c.points3().iter().map(|p| [-p[1], p[0], 0.0]).collect();
        assert!(matches!(
            FramedLoop::new(c.clone(), bad),
            Err(LinkError::FrameNotOrthogonal(_))
        ));
        let flip: Vec<V3> = c
            .points3()
            .iter()
            .enumerate()
            .map(|(i, p)| if i == 7 { vec3::scale(*p, -1.0) } else { *p })
            .collect();
        assert!(matches!(
            FramedLoop::new(c, flip),
            Err(LinkError::InvalidParams(_))
        ));
    }
}
