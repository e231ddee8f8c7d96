//! The K-torus of fluxes `[0,1)^K`: its critical set, piecewise-linear flux
//! loops, wall crossings and cut windings, and the kernel tilings of the
//! magnetic Hopf links.
//!
//! Component k is critical at α when `α_k ≡ 0` and
//! `x_k(α) = (1 − Wr_k)/2 − Σ_{j≠k} α_j L_kj` is an integer. The set
//! `{α_k ≡ 0, x_k = n}` is the cut of level n of component k.

use crate::error::{LinkError, Result};
use crate::hopf;
use crate::invariants::MagneticLink;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Tolerance of the exact affine membership test.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

fn canonical(a: f64) -> f64 {
    let r = a.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance from `a` to the nearest integer.
pub fn dist_to_integer(a: f64) -> f64 {
    (a - a.round()).abs()
}

/// Displacement representative in `(−1/2, 1/2]`.
fn displacement(from: f64, to: f64) -> f64 {
    let d = (to - from).rem_euclid(1.0);
    if d > 0.5 {
        d - 1.0
    } else {
        d
    }
}

/// A point of the flux torus with canonical coordinates in `[0,1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxPoint {
    alphas: Vec<f64>,
}

impl FluxPoint {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() || alphas.iter().any(|a| !a.is_finite()) {
            return Err(LinkError::InvalidParams(
                "flux point needs finite coordinates".into(),
            ));
        }
        Ok(FluxPoint {
            alphas: alphas.into_iter().map(canonical).collect(),
        })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }

    /// Flat Euclidean distance on the torus, the metric of [`CriticalSet::distance`].
    pub fn torus_distance(&self, other: &FluxPoint) -> f64 {
        self.alphas
            .iter()
            .zip(&other.alphas)
            .map(|(a, b)| displacement(*a, *b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Equality mod 1 within `tol`.
    pub fn approx_eq(&self, other: &FluxPoint, tol: f64) -> bool {
        self.dim() == other.dim() && self.torus_distance(other) <= tol
    }
}

/// The affine critical condition of one component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentCondition {
    pub component: usize,
    pub writhe: f64,
    /// Linking numbers with the other components; the diagonal entry is 0.
    pub linking_row: Vec<i64>,
}

impl ComponentCondition {
    /// `x_k` at α = 0.
    pub fn offset(&self) -> f64 {
        0.5 * (1.0 - self.writhe)
    }

    /// `x_k(α) = (1 − Wr)/2 − Σ_j α_j L_kj`.
    pub fn level(&self, alphas: &[f64]) -> f64 {
        self.offset()
            - self
                .linking_row
                .iter()
                .zip(alphas)
                .map(|(l, a)| *l as f64 * a)
                .sum::<f64>()
    }

    fn row_norm(&self) -> f64 {
        self.linking_row
            .iter()
            .map(|l| (l * l) as f64)
            .sum::<f64>()
            .sqrt()
    }

    /// Whether a zero linking row makes the whole wall `α_k = 0` critical.
    fn degenerate_wall_critical(&self) -> bool {
        dist_to_integer(self.offset()) <= MEMBERSHIP_TOL
    }

    /// Exact toroidal distance from `alphas` to the critical set of this component.
    pub fn distance(&self, alphas: &[f64]) -> f64 {
        let wall = dist_to_integer(alphas[self.component]);
        let norm = self.row_norm();
        if norm == 0.0 {
            return if self.degenerate_wall_critical() {
                wall
            } else {
                f64::INFINITY
            };
        }
        let h = dist_to_integer(self.level(alphas)) / norm;
        wall.hypot(h)
    }

    /// Minimum distance to this component's critical set along the lifted
    /// segment `a + t·d`, `t ∈ [0,1]`. Exact: the squared distance is a convex
    /// quadratic between the breakpoints where a coordinate passes a half-integer.
    pub fn segment_distance(&self, a: &[f64], d: &[f64]) -> f64 {
        let k = self.component;
        let norm = self.row_norm();
        if norm == 0.0 && !self.degenerate_wall_critical() {
            return f64::INFINITY;
        }
        let (u0, du) = (a[k], d[k]);
        let v0 = self.level(a);
        let dv = -self
            .linking_row
            .iter()
            .zip(d)
            .map(|(l, x)| *l as f64 * x)
            .sum::<f64>();
        let mut breaks = vec![0.0, 1.0];
        for (p0, dp) in [(u0, du), (v0, dv)] {
            if dp != 0.0 {
                let (lo, hi) = if dp > 0.0 {
                    (p0, p0 + dp)
                } else {
                    (p0 + dp, p0)
                };
                let mut h = (2.0 * lo).ceil();
                while h <= 2.0 * hi {
                    let t = (h / 2.0 - p0) / dp;
                    if t > 0.0 && t < 1.0 {
                        breaks.push(t);
                    }
                    h += 1.0;
                }
            }
        }
        breaks.sort_by(f64::total_cmp);
        let scale = if norm == 0.0 { 0.0 } else { 1.0 / norm };
        let mut best = f64::INFINITY;
        for w in breaks.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let tm = 0.5 * (t0 + t1);
            let nu = (u0 + tm * du).round();
            let nv = (v0 + tm * dv).round();
            // g(t) = (u0 − nu + t du)² + scale²(v0 − nv + t dv)²
            let (pu, pv) = (u0 - nu, (v0 - nv) * scale);
            let (qu, qv) = (du, dv * scale);
            let g = |t: f64| (pu + t * qu).powi(2) + (pv + t * qv).powi(2);
            let aa = qu * qu + qv * qv;
            let mut cand = g(t0).min(g(t1));
            if aa > 0.0 {
                let ts = (-(pu * qu + pv * qv) / aa).clamp(t0, t1);
                cand = cand.min(g(ts));
            }
            best = best.min(cand);
        }
        best.sqrt()
    }

    /// Integer levels `n` of the cuts of this component on the canonical wall.
    pub fn cut_levels(&self) -> Vec<i64> {
        if self.row_norm() == 0.0 {
            return Vec::new();
        }
        let c = self.offset();
        let pos: i64 = self.linking_row.iter().filter(|l| **l > 0).sum();
        let neg: i64 = self.linking_row.iter().filter(|l| **l < 0).sum();
        let lo = c - pos as f64;
        let hi = c - neg as f64;
        ((lo.ceil() as i64)..=(hi.floor() as i64)).collect()
    }
}

/// The critical set of a magnetic link, stored as affine conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalSet {
    conditions: Vec<ComponentCondition>,
}

/// One connected piece of the critical set, sampled for display.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPiece {
    pub component: usize,
    /// The integer branch `q` of the affine equation `Σ_j α_j L_kj = (1 − Wr)/2 − q`.
    pub level: i64,
    /// Sampled points; a single point for K = 2.
    pub points: Vec<Vec<f64>>,
}

/// The critical set of `link`.
pub fn critical_set(link: &MagneticLink) -> CriticalSet {
    let k = link.len();
    let conditions = (0..k)
        .map(|i| {
            let mut row = link.linking_matrix()[i].clone();
            row[i] = 0;
            ComponentCondition {
                component: i,
                writhe: link.writhes()[i],
                linking_row: row,
            }
        })
        .collect();
    CriticalSet { conditions }
}

impl CriticalSet {
    pub fn dim(&self) -> usize {
        self.conditions.len()
    }

    pub fn conditions(&self) -> &[ComponentCondition] {
        &self.conditions
    }

    pub fn is_empty(&self) -> bool {
        self.conditions
            .iter()
            .all(|c| c.row_norm() == 0.0 && !c.degenerate_wall_critical())
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(LinkError::InvalidParams(format!(
                "flux point of dimension {n} for a {}-component link",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Exact toroidal distance to the critical set; `+∞` when it is empty.
    pub fn distance(&self, p: &FluxPoint) -> Result<f64> {
        self.check_dim(p.dim())?;
        Ok(self
            .conditions
            .iter()
            .map(|c| c.distance(p.alphas()))
            .fold(f64::INFINITY, f64::min))
    }

    pub fn is_critical(&self, p: &FluxPoint, tol: f64) -> Result<bool> {
        Ok(self.distance(p)? <= tol)
    }

    /// Critical components whose condition holds at `p` within `tol`.
    pub fn critical_components(&self, p: &FluxPoint, tol: f64) -> Vec<usize> {
        self.conditions
            .iter()
            .filter(|c| c.distance(p.alphas()) <= tol)
            .map(|c| c.component)
            .collect()
    }

    /// Minimum distance from a flux loop to the critical set.
    pub fn loop_distance(&self, l: &FluxLoop) -> Result<f64> {
        self.check_dim(l.dim())?;
        let lift = l.lift();
        let mut best = f64::INFINITY;
        for s in 0..l.len() {
            let d: Vec<f64> = lift[s + 1]
                .iter()
                .zip(&lift[s])
                .map(|(b, a)| b - a)
                .collect();
            for c in &self.conditions {
                best = best.min(c.segment_distance(&lift[s], &d));
            }
        }
        Ok(best)
    }

    /// Sample the critical set for `K ≤ 3` at `resolution` points per unit length.
    pub fn enumerate(&self, resolution: usize) -> Result<Vec<CriticalPiece>> {
        let k = self.dim();
        if k > 3 {
            return Err(LinkError::InvalidParams(format!(
                "enumeration supports K <= 3, got {k}"
            )));
        }
        if resolution == 0 {
            return Err(LinkError::InvalidParams(
                "resolution must be positive".into(),
            ));
        }
        let grid: Vec<f64> = (0..=resolution)
            .map(|i| i as f64 / resolution as f64)
            .collect();
        let mut out = Vec::new();
        for cond in &self.conditions {
            let i = cond.component;
            let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();
            let c = cond.offset();
            let point = |vals: &[(usize, f64)]| {
                let mut p = vec![0.0; k];
                for &(j, v) in vals {
                    p[j] = v;
                }
                p
            };
            if cond.row_norm() == 0.0 {
                if cond.degenerate_wall_critical() {
                    let pts = match others.len() {
                        0 => vec![point(&[])],
                        1 => grid.iter().map(|&a| point(&[(others[0], a)])).collect(),
                        _ => grid
                            .iter()
                            .flat_map(|&a| grid.iter().map(move |&b| (a, b)))
                            .map(|(a, b)| point(&[(others[0], a), (others[1], b)]))
                            .collect(),
                    };
                    out.push(CriticalPiece {
                        component: i,
                        level: c.round() as i64,
                        points: pts,
                    });
                }
                continue;
            }
            match others.len() {
                1 => {
                    let j = others[0];
                    let l = cond.linking_row[j] as f64;
                    for n in cond.cut_levels() {
                        let a = (c - n as f64) / l;
                        if (0.0..1.0).contains(&a) {
                            out.push(CriticalPiece {
                                component: i,
                                level: n,
                                points: vec![point(&[(j, a)])],
                            });
                        }
                    }
                }
                2 => {
                    // L_a α_a + L_b α_b = c − q, with L_b ≠ 0 after swapping
                    let (mut a, mut b) = (others[0], others[1]);
                    if cond.linking_row[b] == 0 {
                        std::mem::swap(&mut a, &mut b);
                    }
                    let (la, lb) = (cond.linking_row[a] as f64, cond.linking_row[b] as f64);
                    for q in cond.cut_levels() {
                        let rhs = c - q as f64;
                        let pts: Vec<Vec<f64>> = grid
                            .iter()
                            .filter_map(|&x| {
                                let y = (rhs - la * x) / lb;
                                (-1e-12..=1.0 + 1e-12)
                                    .contains(&y)
                                    .then(|| point(&[(a, x), (b, y.clamp(0.0, 1.0))]))
                            })
                            .collect();
                        if !pts.is_empty() {
                            out.push(CriticalPiece {
                                component: i,
                                level: q,
                                points: pts,
                            });
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(out)
    }
}

/// Toroidal distance from `p` to the critical set of `link`.
pub fn distance_to_critical(p: &FluxPoint, link: &MagneticLink) -> Result<f64> {
    critical_set(link).distance(p)
}

/// A closed piecewise-linear loop on the flux torus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxLoop {
    vertices: Vec<Vec<f64>>,
}

impl FluxLoop {
    /// Vertices are taken mod 1; consecutive vertices (cyclically) must be less
    /// than 1/2 apart in every coordinate so that the lift is unique.
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(LinkError::InvalidParams(
                "a flux loop needs at least one vertex".into(),
            ));
        };
        let k = first.len();
        if k == 0 {
            return Err(LinkError::InvalidParams(
                "flux loop vertices need at least one coordinate".into(),
            ));
        }
        if vertices
            .iter()
            .any(|v| v.len() != k || v.iter().any(|a| !a.is_finite()))
        {
            return Err(LinkError::InvalidParams(
                "flux loop vertices must be finite and of equal dimension".into(),
            ));
        }
        let vertices: Vec<Vec<f64>> = vertices
            .into_iter()
            .map(|v| v.into_iter().map(canonical).collect())
            .collect();
        let n = vertices.len();
        for s in 0..n {
            let (a, b) = (&vertices[s], &vertices[(s + 1) % n]);
            if a.iter()
                .zip(b)
                .any(|(x, y)| displacement(*x, *y).abs() >= 0.5 - 1e-12)
            {
                return Err(LinkError::InvalidParams(format!(
                    "segment {s} is not shorter than 1/2"
                )));
            }
        }
        Ok(FluxLoop { vertices })
    }

    /// The edge loop `t ↦ (α_1, …, t, …, α_K)` through `frozen`.
    pub fn edge_loop(frozen: &[f64], k: usize, steps: usize) -> Result<Self> {
        if k >= frozen.len() || steps < 3 {
            return Err(LinkError::InvalidParams(
                "edge loop needs a valid component and at least 3 steps".into(),
            ));
        }
        let start = frozen[k];
        FluxLoop::new(
            (0..steps)
                .map(|i| {
                    let mut v = frozen.to_vec();
                    v[k] = start + i as f64 / steps as f64;
                    v
                })
                .collect(),
        )
    }

    /// Circle `center + r(cos 2πt e_i + sin 2πt e_j)`.
    pub fn circle(center: &[f64], i: usize, j: usize, r: f64, steps: usize) -> Result<Self> {
        if i >= center.len() || j >= center.len() || i == j || steps < 3 || !(r > 0.0) {
            return Err(LinkError::InvalidParams(
                "circle needs distinct axes, r > 0 and at least 3 steps".into(),
            ));
        }
        FluxLoop::new(
            (0..steps)
                .map(|s| {
                    let t = 2.0 * std::f64::consts::PI * s as f64 / steps as f64;
                    let mut v = center.to_vec();
                    v[i] += r * t.cos();
                    v[j] += r * t.sin();
                    v
                })
                .collect(),
        )
    }

    pub fn constant(p: &[f64]) -> Result<Self> {
        FluxLoop::new(vec![p.to_vec()])
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Number of segments (equal to the number of vertices).
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v[1..].reverse();
        FluxLoop { vertices: v }
    }

    /// `self` followed by `other`, joined by straight paths between the base
    /// points when these differ.
    pub fn concat(&self, other: &FluxLoop) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(LinkError::InvalidParams(
                "loops of different dimension".into(),
            ));
        }
        let (a0, b0) = (&self.vertices[0], &other.vertices[0]);
        let mut v = self.vertices.clone();
        v.push(a0.clone());
        let bridge = straight_path(a0, b0);
        v.extend(bridge.iter().skip(1).cloned());
        v.extend(other.vertices.iter().skip(1).cloned());
        v.push(b0.clone());
        v.extend(straight_path(b0, a0).into_iter().skip(1));
        v.pop();
        v.dedup_by(|x, y| x == y);
        if v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        FluxLoop::new(v)
    }

    /// Lift to the universal cover: `len() + 1` points, the last one over the first.
    pub fn lift(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut out = Vec::with_capacity(n + 1);
        out.push(self.vertices[0].clone());
        for s in 0..n {
            let prev = out[s].clone();
            let (a, b) = (&self.vertices[s], &self.vertices[(s + 1) % n]);
            out.push(
                prev.iter()
                    .zip(a.iter().zip(b))
                    .map(|(p, (x, y))| p + displacement(*x, *y))
                    .collect(),
            );
        }
        out
    }

    /// Net number of turns in each coordinate.
    pub fn degrees(&self) -> Vec<i64> {
        let lift = self.lift();
        let n = self.len();
        (0..self.dim())
            .map(|k| (lift[n][k] - lift[0][k]).round() as i64)
            .collect()
    }
}

/// Straight path with the minimal toroidal displacement, split into pieces shorter than 1/2.
fn straight_path(from: &[f64], to: &[f64]) -> Vec<Vec<f64>> {
    let d: Vec<f64> = from
        .iter()
        .zip(to)
        .map(|(a, b)| displacement(*a, *b))
        .collect();
    let pieces = if d.iter().any(|x| x.abs() >= 0.25) {
        3
    } else {
        1
    };
    (0..=pieces)
        .map(|i| {
            from.iter()
                .zip(&d)
                .map(|(a, x)| a + x * i as f64 / pieces as f64)
                .collect()
        })
        .collect()
}

/// A transversal crossing of the wall `α_k ≡ 0` by a flux loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WallCrossing {
    pub component: usize,
    pub segment: usize,
    pub t: f64,
    /// +1 when α_k increases through 0 ≡ 1.
    pub sign: i64,
    /// Canonical coordinates of the crossing point (with α_k = 0).
    pub alphas: Vec<f64>,
    /// `x_k` at the crossing point.
    pub level: f64,
}

/// All wall crossings of `l`. A vertex lying on a wall counts on the side `α_k ≥ 0`.
pub fn wall_crossings(l: &FluxLoop, set: &CriticalSet) -> Result<Vec<WallCrossing>> {
    set.check_dim(l.dim())?;
    let lift = l.lift();
    let mut out = Vec::new();
    for s in 0..l.len() {
        let (a, b) = (&lift[s], &lift[s + 1]);
        let mut seg = Vec::new();
        for cond in set.conditions() {
            let k = cond.component;
            let (fa, fb) = (a[k].floor(), b[k].floor());
            if fa == fb {
                continue;
            }
            let (sign, wall) = if fb > fa { (1, fb) } else { (-1, fa) };
            let t = (wall - a[k]) / (b[k] - a[k]);
            let mut alphas: Vec<f64> = a
                .iter()
                .zip(b)
                .map(|(x, y)| canonical(x + t * (y - x)))
                .collect();
            alphas[k] = 0.0;
            let level = cond.level(&alphas);
            seg.push(WallCrossing {
                component: k,
                segment: s,
                t,
                sign,
                alphas,
                level,
            });
        }
        seg.sort_by(|x, y| x.t.total_cmp(&y.t));
        out.extend(seg);
    }
    Ok(out)
}

/// Winding of a loop around one cut.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutWinding {
    pub component: usize,
    pub level: i64,
    /// The cut point itself when K = 2.
    pub point: Option<Vec<f64>>,
    /// Oriented so that a loop of winding +1 has spectral flow −1.
    pub winding: i64,
}

/// Homology decomposition of a flux loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopClass {
    /// Net number of wall crossings per component (the edge-loop multiplicities m_k).
    pub edge_multiplicities: Vec<i64>,
    /// `⌊x_k(0)⌋`, the floor level of the reference edge loop through the origin.
    pub reference_levels: Vec<i64>,
    pub cut_windings: Vec<CutWinding>,
    pub crossings: Vec<WallCrossing>,
}

impl LoopClass {
    /// `Σ_k m_k ⌊x_k(0)⌋ − Σ_cuts w`.
    pub fn flow(&self) -> i64 {
        let edges: i64 = self
            .edge_multiplicities
            .iter()
            .zip(&self.reference_levels)
            .map(|(m, r)| m * r)
            .sum();
        edges - self.cut_windings.iter().map(|c| c.winding).sum::<i64>()
    }

    /// Whether every cut winding vanishes.
    pub fn cuts_trivial(&self) -> bool {
        self.cut_windings.iter().all(|c| c.winding == 0)
    }
}

/// Edge multiplicities and cut windings of `l`, relative to the reference edge
/// loops through the origin.
pub fn winding_numbers(l: &FluxLoop, link: &MagneticLink, tol: f64) -> Result<LoopClass> {
    let set = critical_set(link);
    let distance = set.loop_distance(l)?;
    if distance <= tol {
        return Err(LinkError::LoopHitsCriticalSet { distance, tol });
    }
    let crossings = wall_crossings(l, &set)?;
    let k = set.dim();
    let mut edge = vec![0i64; k];
    for c in &crossings {
        edge[c.component] += c.sign;
    }
    let reference: Vec<i64> = set
        .conditions()
        .iter()
        .map(|c| c.offset().floor() as i64)
        .collect();
    let mut cuts = Vec::new();
    for cond in set.conditions() {
        let i = cond.component;
        let r = reference[i];
        for n in cond.cut_levels() {
            let winding: i64 = crossings
                .iter()
                .filter(|c| c.component == i)
                .map(|c| {
                    if n > r {
                        -c.sign * i64::from(c.level >= n as f64)
                    } else {
                        c.sign * i64::from(c.level < n as f64)
                    }
                })
                .sum();
            let point = (k == 2).then(|| {
                let j = 1 - i;
                let mut p = vec![0.0; 2];
                p[j] = canonical((cond.offset() - n as f64) / cond.linking_row[j] as f64);
                p
            });
            cuts.push(CutWinding {
                component: i,
                level: n,
                point,
                winding,
            });
        }
    }
    Ok(LoopClass {
        edge_multiplicities: edge,
        reference_levels: reference,
        cut_windings: cuts,
        crossings,
    })
}

/// One labelled cell of a tiling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TileCell {
    /// Cell center.
    pub alphas: Vec<f64>,
    /// Kernel dimension, or −1 for a cell centered on a critical wall.
    pub label: i64,
}

/// Kernel-dimension tiling of the flux torus of a magnetic Hopf link.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfTiling {
    pub k: usize,
    pub resolution: usize,
    pub cells: Vec<TileCell>,
    /// For K = 3: the section `α₁+α₂+α₃ ≡ 1/2` over the `(α₁, α₂)` square.
    pub section: Option<Vec<TileCell>>,
    pub critical: Vec<CriticalPiece>,
}

/// Planes that only touch a cell's boundary do not label it.
const TOUCH_EPS: f64 = 1e-12;

fn cell_label(lo: &[f64], hi: &[f64]) -> Result<i64> {
    let s_lo: f64 = lo.iter().sum();
    let s_hi: f64 = hi.iter().sum();
    let mut label = 0;
    // half-integers strictly inside the range of Σα over the cell
    let mut h = (s_lo - 0.5).floor() + 1.5;
    while h < s_hi - TOUCH_EPS {
        if h > s_lo + TOUCH_EPS {
            let t = (h - s_lo) / (s_hi - s_lo);
            let p: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| a + t * (b - a)).collect();
            label = label.max(hopf::hopf_kernel_dim(&p)? as i64);
        }
        h += 1.0;
    }
    if label == 0 {
        let center: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
        label = hopf::hopf_kernel_dim(&center)? as i64;
    }
    Ok(label)
}

/// Kernel-dimension tiling for the Hopf K-link, K ∈ {2, 3}, with `resolution`
/// cells per unit length. A cell carries the largest kernel dimension found on it.
pub fn hopf_tiling(k: usize, resolution: usize) -> Result<HopfTiling> {
    if !(k == 2 || k == 3) {
        return Err(LinkError::InvalidParams(format!(
            "tilings exist for K = 2 or 3, got {k}"
        )));
    }
    if !(2..=512).contains(&resolution) {
        return Err(LinkError::InvalidParams(format!(
            "resolution {resolution} outside [2, 512]"
        )));
    }
    let h = 1.0 / resolution as f64;
    let total = resolution.pow(k as u32);
    let cells = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut rest = idx;
            let mut index = vec![0usize; k];
            for slot in index.iter_mut().rev() {
                *slot = rest % resolution;
                rest /= resolution;
            }
            let lo: Vec<f64> = index.iter().map(|&i| i as f64 * h).collect();
            let hi: Vec<f64> = lo.iter().map(|a| a + h).collect();
            let label = cell_label(&lo, &hi)?;
            Ok(TileCell {
                alphas: lo.iter().map(|a| a + 0.5 * h).collect(),
                label,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let section = if k == 3 {
        let s = (0..resolution * resolution)
            .into_par_iter()
            .map(|idx| {
                let a1 = ((idx / resolution) as f64 + 0.5) * h;
                let a2 = ((idx % resolution) as f64 + 0.5) * h;
                let a3 = canonical(0.5 - a1 - a2);
                let p = vec![a1, a2, a3];
                let label = if a3 == 0.0 {
                    -1
                } else {
                    hopf::hopf_kernel_dim(&p)? as i64
                };
                Ok(TileCell { alphas: p, label })
            })
            .collect::<Result<Vec<_>>>()?;
        Some(s)
    } else {
        None
    };
    let link = hopf::hopf_invariant_link(k, vec![0.0; k])?;
    let critical = critical_set(&link).enumerate(resolution)?;
    Ok(HopfTiling {
        k,
        resolution,
        cells,
        section,
        critical,
    })
}

fn cells_csv(cells: &[TileCell], dim: usize) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=dim).map(|i| format!("alpha{i}")).collect();
    let _ = writeln!(out, "{},label", header.join(","));
    for c in cells {
        let coords: Vec<String> = c.alphas.iter().map(|a| format!("{a:.17e}")).collect();
        let _ = writeln!(out, "{},{}", coords.join(","), c.label);
    }
    out
}

const LABEL_COLORS: [&str; 4] = ["#f4f4f4", "#9ecae1", "#3182bd", "#08306b"];

impl HopfTiling {
    /// CSV of the main grid: `alpha1,…,alphaK,label`.
    pub fn to_csv(&self) -> String {
        cells_csv(&self.cells, self.k)
    }

    /// CSV of the K = 3 section.
    pub fn section_csv(&self) -> Option<String> {
        self.section.as_ref().map(|s| cells_csv(s, 3))
    }

    /// Standalone SVG of the `(α₁, α₂)` square: the grid for K = 2, the section
    /// for K = 3, with the critical set drawn on top.
    pub fn to_svg(&self) -> String {
        let size = 480.0;
        let margin = 40.0;
        let px = |a: f64| margin + a * size;
        let py = |a: f64| margin + (1.0 - a) * size;
        let cells = self.section.as_ref().unwrap_or(&self.cells);
        let h = size / self.resolution as f64;
        let mut s = String::new();
        let total = size + 2.0 * margin;
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
        );
        let _ = writeln!(
            s,
            r#"<rect x="0" y="0" width="{total}" height="{total}" fill="white"/>"#
        );
        let _ = writeln!(s, r#"<g id="cells" stroke="none">"#);
        for c in cells {
            let color = if c.label < 0 {
                "#d62728"
            } else {
                LABEL_COLORS[(c.label as usize).min(3)]
            };
            let x = px(c.alphas[0]) - h / 2.0;
            let y = py(c.alphas[1]) - h / 2.0;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.3}" y="{y:.3}" width="{h:.3}" height="{h:.3}" fill="{color}"><title>{}</title></rect>"#,
                c.label
            );
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(
            s,
            r##"<g id="critical" stroke="#d62728" fill="#d62728" stroke-width="2">"##
        );
        for piece in &self.critical {
            if piece.points.len() == 1 {
                let p = &piece.points[0];
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.3}" cy="{:.3}" r="5"/>"#,
                    px(p[0]),
                    py(p[1])
                );
            } else {
                let pts: Vec<String> = piece
                    .points
                    .iter()
                    .map(|p| format!("{:.3},{:.3}", px(p[0]), py(p[1])))
                    .collect();
                let _ = writeln!(s, r#"<polyline fill="none" points="{}"/>"#, pts.join(" "));
            }
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(
            s,
            r#"<g id="axes" stroke="black" fill="none" stroke-width="1">"#
        );
        let _ = writeln!(
            s,
            r#"<rect x="{margin}" y="{margin}" width="{size}" height="{size}"/>"#
        );
        let _ = writeln!(s, "</g>");
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle">alpha1</text>"#,
            margin + size / 2.0,
            total - 10.0
        );
        let _ = writeln!(
            s,
            r#"<text x="15" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 15 {:.1})">alpha2</text>"#,
            margin + size / 2.0,
            margin + size / 2.0
        );
        for (v, label) in [(0.0, "0"), (0.5, "1/2"), (1.0, "1")] {
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{label}</text>"#,
                px(v),
                total - 25.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{label}</text>"#,
                margin - 4.0,
                py(v) + 4.0
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::hopf_invariant_link;

    fn hopf2() -> MagneticLink {
        hopf_invariant_link(2, vec![0.0, 0.0]).unwrap()
    }

    fn single_circle() -> MagneticLink {
        MagneticLink::from_invariants(
            vec![0.0],
            vec![vec![0]],
            vec![2.0 * std::f64::consts::PI],
            vec![0.0],
        )
        .unwrap()
    }

    #[test]
    fn hopf2_critical_points() {
        let set = critical_set(&hopf2());
        let pieces = set.enumerate(16).unwrap();
        let mut pts: Vec<Vec<f64>> = pieces.iter().map(|p| p.points[0].clone()).collect();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert_eq!(pts, vec![vec![0.0, 0.5], vec![0.5, 0.0]]);
        assert!(set
            .is_critical(&FluxPoint::new(vec![0.5, 1.0]).unwrap(), 1e-12)
            .unwrap());
    }

    #[test]
    fn single_circle_has_empty_critical_set() {
        let set = critical_set(&single_circle());
        assert!(set.is_empty());
        assert!(set.enumerate(8).unwrap().is_empty());
        assert_eq!(
            set.distance(&FluxPoint::new(vec![0.0]).unwrap()).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn distance_matches_grid_scan() {
        let link = hopf2();
        let p = FluxPoint::new(vec![0.25, 0.5]).unwrap();
        let d = distance_to_critical(&p, &link).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
        let set = critical_set(&link);
        let pieces = set.enumerate(1000).unwrap();
        let brute = pieces
            .iter()
            .flat_map(|piece| piece.points.iter())
            .flat_map(|c| {
                let mut ds = Vec::new();
                for sx in [-1.0, 0.0, 1.0] {
                    for sy in [-1.0, 0.0, 1.0] {
                        ds.push((c[0] + sx - 0.25).hypot(c[1] + sy - 0.5));
                    }
                }
                ds
            })
            .fold(f64::INFINITY, f64::min);
        assert!((brute - d).abs() < 1e-3);
    }

    #[test]
    fn hopf3_critical_lines() {
        let link = hopf_invariant_link(3, vec![0.0; 3]).unwrap();
        let pieces = critical_set(&link).enumerate(20).unwrap();
        assert_eq!(pieces.len(), 6);
        for piece in &pieces {
            for p in &piece.points {
                let i = piece.component;
                assert_eq!(p[i], 0.0);
                let s: f64 = (0..3).filter(|&j| j != i).map(|j| p[j]).sum();
                assert!(dist_to_integer(s - 0.5) < 1e-12);
            }
        }
    }

    #[test]
    fn segment_distance_is_exact_minimum() {
        let set = critical_set(&hopf2());
        let l = FluxLoop::new(vec![vec![0.3, 0.1], vec![0.7, 0.1], vec![0.7, 0.3]]).unwrap();
        let exact = set.loop_distance(&l).unwrap();
        let lift = l.lift();
        let mut brute = f64::INFINITY;
        for s in 0..l.len() {
            for i in 0..=2000 {
                let t = i as f64 / 2000.0;
                let p: Vec<f64> = lift[s]
                    .iter()
                    .zip(&lift[s + 1])
                    .map(|(a, b)| a + t * (b - a))
                    .collect();
                brute = brute.min(set.distance(&FluxPoint::new(p).unwrap()).unwrap());
            }
        }
        assert!((exact - 0.1).abs() < 1e-14, "{exact}");
        assert!(brute >= exact - 1e-14 && brute - exact < 1e-3);
    }

    #[test]
    fn winding_around_p1() {
        let l = FluxLoop::circle(&[0.5, 0.0], 0, 1, 0.1, 32).unwrap();
        let class = winding_numbers(&l, &hopf2(), 1e-3).unwrap();
        assert_eq!(class.edge_multiplicities, vec![0, 0]);
        let w: Vec<(usize, i64)> = class
            .cut_windings
            .iter()
            .map(|c| (c.component, c.winding))
            .collect();
        assert_eq!(w, vec![(0, 0), (1, 1)]);
        assert_eq!(
            class.cut_windings[1].point.as_deref(),
            Some(&[0.5, 0.0][..])
        );
        assert_eq!(class.flow(), -1);
    }

    #[test]
    fn edge_loop_class() {
        let l = FluxLoop::edge_loop(&[0.0, 0.25], 0, 8).unwrap();
        let class = winding_numbers(&l, &hopf2(), 1e-3).unwrap();
        assert_eq!(class.edge_multiplicities, vec![1, 0]);
        assert!(class.cuts_trivial());
        let l = FluxLoop::constant(&[0.3, 0.3]).unwrap();
        let class = winding_numbers(&l, &hopf2(), 1e-3).unwrap();
        assert_eq!(class.edge_multiplicities, vec![0, 0]);
        assert!(class.cuts_trivial() && class.crossings.is_empty());
    }

    #[test]
    fn loop_through_critical_point_is_rejected() {
        let l = FluxLoop::edge_loop(&[0.0, 0.5], 0, 8).unwrap();
        assert!(matches!(
            winding_numbers(&l, &hopf2(), 1e-3),
            Err(LinkError::LoopHitsCriticalSet { .. })
        ));
    }

    #[test]
    fn long_segments_are_rejected() {
        assert!(FluxLoop::new(vec![vec![0.0, 0.0], vec![0.5, 0.0]]).is_err());
        assert!(FluxLoop::new(vec![vec![0.0], vec![1.0 / 3.0], vec![2.0 / 3.0]]).is_ok());
    }

    #[test]
    fn hopf2_tiling_marks_the_kernel_segment() {
        let t = hopf_tiling(2, 20).unwrap();
        for c in &t.cells {
            // cell (i, j) spans Σα ∈ [(i+j)/20, (i+j+2)/20]
            let i = (c.alphas[0] * 20.0).floor() as i64;
            let j = (c.alphas[1] * 20.0).floor() as i64;
            assert_eq!(c.label, i64::from(i + j == 29), "{:?}", c.alphas);
        }
        assert!(t.to_svg().starts_with("<svg"));
        assert_eq!(t.to_csv().lines().count(), 401);
    }

    #[test]
    fn hopf3_section_labels() {
        let t = hopf_tiling(3, 12).unwrap();
        let labels: std::collections::BTreeSet<i64> = t
            .section
            .as_ref()
            .unwrap()
            .iter()
            .map(|c| c.label)
            .collect();
        assert!(labels.contains(&0) && labels.contains(&1) && labels.contains(&2));
        assert!(t.cells.iter().any(|c| c.label == 2));
        assert!(t.to_svg().contains("polyline"));
    }
}
