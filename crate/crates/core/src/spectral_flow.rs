//! Spectral flow of flux loops on the torus of fluxes.
//!
//! An edge loop of an unknotted component k has spectral flow `⌊x_k⌋` with
//! `x_k = (1 − Wr_k)/2 − Φ_k/2π`; a small loop around a cut of component k0
//! driven by component k has flow `−sign link(k, k0)`. A general loop is
//! evaluated through its wall crossings, and an independent oracle counts
//! zero crossings of the tracked effective-spectrum branches.

use crate::curves::{self, TwistFamilyParams, TwistSign};
use crate::effective_spectrum::SpectrumLattice;
use crate::error::{LinkError, Result};
use crate::flux_torus::{critical_set, dist_to_integer, winding_numbers, FluxLoop, LoopClass};
use crate::invariants::{self, flux_through, MagneticLink};
use serde::Serialize;
use std::f64::consts::PI;

/// Default tolerance for distances to ℤ and to the critical set.
pub const DEFAULT_TOL: f64 = 1e-3;
/// Default step count of the crossing oracle.
pub const DEFAULT_ORACLE_STEPS: usize = 2048;
/// Largest step count the oracle refines to.
const MAX_ORACLE_STEPS: usize = 1 << 24;

/// `(1 − Wr)/2 − Φ/2π`.
pub fn floor_argument(writhe: f64, flux: f64) -> f64 {
    0.5 * (1.0 - writhe) - flux / (2.0 * PI)
}

fn checked_floor(x: f64, tol: f64, what: &str) -> Result<i64> {
    if !x.is_finite() {
        return Err(LinkError::UndefinedSpectralFlow(format!(
            "{what}: non-finite argument"
        )));
    }
    if dist_to_integer(x) <= tol {
        return Err(LinkError::UndefinedSpectralFlow(format!(
            "{what}: {x} is within {tol} of an integer"
        )));
    }
    Ok(x.floor() as i64)
}

fn check_component(link: &MagneticLink, k: usize) -> Result<()> {
    if k >= link.len() {
        return Err(LinkError::InvalidParams(format!(
            "component {k} out of range for a {}-component link",
            link.len()
        )));
    }
    Ok(())
}

/// Spectral flow of the edge loop of the unknotted component `k0` at the
/// link's current fluxes: `⌊(1 − Wr)/2 − Φ/2π⌋`.
pub fn sf_unknot_edge_loop(link: &MagneticLink, k0: usize, tol: f64) -> Result<i64> {
    check_component(link, k0)?;
    if !link.unknots()[k0] {
        return Err(LinkError::UnknotFlagMissing(k0));
    }
    let x = floor_argument(link.writhes()[k0], flux_through(link, k0, 0.0));
    checked_floor(x, tol, &format!("edge loop of component {k0}"))
}

/// Spectral flow of the small loop `α_drive = α*_drive + r cos 2πt`,
/// `α_k0 = r sin 2πt` around the critical point given by the link's fluxes.
pub fn sf_small_loop(
    link: &MagneticLink,
    k0: usize,
    k_drive: usize,
    r: f64,
    tol: f64,
) -> Result<i64> {
    check_component(link, k0)?;
    check_component(link, k_drive)?;
    if k0 == k_drive {
        return Err(LinkError::InvalidParams(
            "the driving component must differ from the encircled one".into(),
        ));
    }
    let set = critical_set(link);
    let center = link.fluxes();
    let cond = &set.conditions()[k0];
    let l = cond.linking_row[k_drive];
    if l == 0 {
        return Err(LinkError::NotCritical {
            component: k0,
            reason: format!("component {k_drive} does not link it"),
        });
    }
    let own = cond.distance(center);
    if own > tol {
        return Err(LinkError::NotCritical {
            component: k0,
            reason: format!("distance {own:.3e} to its critical set"),
        });
    }
    let norm = cond
        .linking_row
        .iter()
        .map(|x| (x * x) as f64)
        .sum::<f64>()
        .sqrt();
    let x = cond.level(center);
    let mut limit = (1.0 - dist_to_integer(x)) / norm;
    for other in set.conditions().iter().filter(|c| c.component != k0) {
        limit = limit.min(other.distance(center));
    }
    limit = limit.min(0.25);
    if r >= limit {
        return Err(LinkError::RadiusTooLarge { r, limit });
    }
    if r * (l.abs() as f64) / norm <= tol {
        return Err(LinkError::InvalidParams(format!(
            "radius {r} does not clear the tolerance {tol}"
        )));
    }
    Ok(-l.signum())
}

/// `⌊x_after⌋ − ⌊x_before⌋`.
pub fn sf_deformation_difference(
    wr_before: f64,
    phi_before: f64,
    wr_after: f64,
    phi_after: f64,
    tol: f64,
) -> Result<i64> {
    let before = checked_floor(
        floor_argument(wr_before, phi_before),
        tol,
        "before deformation",
    )?;
    let after = checked_floor(
        floor_argument(wr_after, phi_after),
        tol,
        "after deformation",
    )?;
    Ok(after - before)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SfMethod {
    UnknotFormula,
    SmallLoop,
    HomologyDecomposition,
    CrossingOracle,
}

/// One wall crossing as seen by the crossing oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCrossing {
    pub component: usize,
    pub sign: i64,
    pub alphas: Vec<f64>,
    /// Effective phase `π(1 − Wr) − Φ` at the crossing.
    pub phase: f64,
    /// Phase of the state the branches are tracked from.
    pub anchor_phase: f64,
    /// Signed zero crossings of the tracked branches from the anchor.
    pub zero_crossings: i64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SfCertificate {
    pub writhes: Vec<f64>,
    pub linking_matrix: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<LoopClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<OracleCrossing>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SfResult {
    pub value: i64,
    pub method: SfMethod,
    pub certificate: SfCertificate,
}

fn check_driven_components(link: &MagneticLink, multiplicities: &[i64]) -> Result<()> {
    for (k, m) in multiplicities.iter().enumerate() {
        if *m != 0 && !link.unknots()[k] {
            return Err(LinkError::UnsupportedKnotClass(format!(
                "component {k} is driven around its flux circle {m} times but is not flagged as an unknot"
            )));
        }
    }
    Ok(())
}

/// Spectral flow of a flux loop from its wall crossings and homology class.
pub fn sf_loop(link: &MagneticLink, l: &FluxLoop, tol: f64) -> Result<SfResult> {
    let class = winding_numbers(l, link, tol)?;
    check_driven_components(link, &class.edge_multiplicities)?;
    let mut direct = 0;
    for c in &class.crossings {
        direct +=
            c.sign * checked_floor(c.level, tol, &format!("crossing of wall {}", c.component))?;
    }
    let decomposed = class.flow();
    assert_eq!(
        direct, decomposed,
        "wall-crossing sum and homology decomposition disagree"
    );
    let nonzero_cuts: Vec<i64> = class
        .cut_windings
        .iter()
        .map(|c| c.winding)
        .filter(|w| *w != 0)
        .collect();
    let method = if class.crossings.len() == 1 {
        SfMethod::UnknotFormula
    } else if class.edge_multiplicities.iter().all(|m| *m == 0)
        && nonzero_cuts.len() == 1
        && nonzero_cuts[0].abs() == 1
    {
        SfMethod::SmallLoop
    } else {
        SfMethod::HomologyDecomposition
    };
    Ok(SfResult {
        value: direct,
        method,
        certificate: SfCertificate {
            writhes: link.writhes().to_vec(),
            linking_matrix: link.linking_matrix().to_vec(),
            class: Some(class),
            oracle: None,
        },
    })
}

/// Signed count of lattice points `(2πn + φ)/ℓ` crossing zero while `φ`
/// moves linearly from `from` to `to` in `steps` steps.
fn track_zero_crossings(ell: f64, from: f64, to: f64, steps: usize) -> Result<i64> {
    let spacing = 2.0 * PI / ell;
    let n_lo = (from.min(to) / (2.0 * PI)).floor() as i64 - 1;
    let n_hi = (from.max(to) / (2.0 * PI)).ceil() as i64 + 1;
    // only the branches that can reach zero: 2πn + φ = 0 for φ in the range
    let branches: Vec<i64> = (-n_hi..=-n_lo).collect();
    let phase = |i: usize| from + (to - from) * i as f64 / steps as f64;
    let mut count = 0;
    for i in 0..steps {
        let (p0, p1) = (phase(i), phase(i + 1));
        let moved = (p1 - p0).abs() / ell;
        if moved > spacing / 2.0 {
            return Err(LinkError::StepTooCoarse {
                moved,
                half_spacing: spacing / 2.0,
            });
        }
        for &n in &branches {
            let l0 = (2.0 * PI * n as f64 + p0) / ell;
            let l1 = (2.0 * PI * n as f64 + p1) / ell;
            if l0 < 0.0 && l1 >= 0.0 {
                count += 1;
            } else if l0 >= 0.0 && l1 < 0.0 {
                count -= 1;
            }
        }
    }
    Ok(count)
}

fn tracked_crossings(ell: f64, from: f64, to: f64, steps: usize) -> Result<(i64, usize)> {
    let mut s = steps.max(1);
    loop {
        match track_zero_crossings(ell, from, to, s) {
            Ok(c) => return Ok((c, s)),
            Err(e @ LinkError::StepTooCoarse { .. }) => {
                if s >= MAX_ORACLE_STEPS {
                    return Err(e);
                }
                s *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Independent evaluation of the spectral flow: march along the loop in
/// `steps` steps, and at every crossing of a wall `α_k ≡ 0` count the signed
/// zero crossings of the effective-spectrum branches of component k while its
/// phase is deformed from a reference state to the phase at the crossing.
/// Unknots are tracked from the round circle without flux (phase π, no zero
/// mode); other components from their first crossing.
pub fn sf_crossing_oracle(
    link: &MagneticLink,
    l: &FluxLoop,
    steps: usize,
    tol: f64,
) -> Result<SfResult> {
    if steps == 0 {
        return Err(LinkError::InvalidParams(
            "the oracle needs at least one step".into(),
        ));
    }
    let set = critical_set(link);
    let distance = set.loop_distance(l)?;
    if distance <= tol {
        return Err(LinkError::LoopHitsCriticalSet { distance, tol });
    }
    let k = link.len();
    let lift = l.lift();
    let sub = steps.div_ceil(l.len()).max(1);
    let mut raw = Vec::new();
    for s in 0..l.len() {
        let (a, b) = (&lift[s], &lift[s + 1]);
        for i in 0..sub {
            let t0 = i as f64 / sub as f64;
            let t1 = (i + 1) as f64 / sub as f64;
            let mut here = Vec::new();
            for c in 0..k {
                let u0 = a[c] + t0 * (b[c] - a[c]);
                let u1 = a[c] + t1 * (b[c] - a[c]);
                let (f0, f1) = (u0.floor(), u1.floor());
                if f0 == f1 {
                    continue;
                }
                let (sign, wall) = if f1 > f0 { (1, f1) } else { (-1, f0) };
                let t = (wall - a[c]) / (b[c] - a[c]);
                let mut alphas: Vec<f64> = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| (x + t * (y - x)).rem_euclid(1.0))
                    .collect();
                alphas[c] = 0.0;
                here.push((t, c, sign, alphas));
            }
            here.sort_by(|x, y| x.0.total_cmp(&y.0));
            raw.extend(
                here.into_iter()
                    .map(|(_, c, sign, alphas)| (c, sign, alphas)),
            );
        }
    }
    let mut multiplicities = vec![0i64; k];
    for (c, sign, _) in &raw {
        multiplicities[*c] += sign;
    }
    check_driven_components(link, &multiplicities)?;
    let mut anchors: Vec<Option<f64>> = (0..k).map(|c| link.unknots()[c].then_some(PI)).collect();
    let mut crossings = Vec::with_capacity(raw.len());
    let mut total = 0;
    for (c, sign, alphas) in raw {
        let flux = 2.0
            * PI
            * (0..k)
                .filter(|&j| j != c)
                .map(|j| alphas[j] * link.linking_matrix()[c][j] as f64)
                .sum::<f64>();
        let phase = PI * (1.0 - link.writhes()[c]) - flux;
        let ell = link.lengths()[c];
        if SpectrumLattice::new(ell, phase)?.contains_zero(2.0 * PI * tol) {
            return Err(LinkError::UndefinedSpectralFlow(format!(
                "zero is in the effective spectrum of component {c} at {alphas:?}"
            )));
        }
        let anchor = *anchors[c].get_or_insert(phase);
        let (zero_crossings, used) = tracked_crossings(ell, anchor, phase, steps)?;
        total += sign * zero_crossings;
        crossings.push(OracleCrossing {
            component: c,
            sign,
            alphas,
            phase,
            anchor_phase: anchor,
            zero_crossings,
            steps: used,
        });
    }
    Ok(SfResult {
        value: total,
        method: SfMethod::CrossingOracle,
        certificate: SfCertificate {
            writhes: link.writhes().to_vec(),
            linking_matrix: link.linking_matrix().to_vec(),
            class: None,
            oracle: Some(crossings),
        },
    })
}

/// Twisted unknot realizing a prescribed edge-loop spectral flow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroModeRecipe {
    pub m: i64,
    /// `None` for the round unit circle.
    pub params: Option<TwistFamilyParams>,
    pub a: f64,
    pub samples: usize,
    pub writhe: f64,
    pub writhe_error: f64,
    pub floor_argument: f64,
    /// Certified spectral flow of the edge loop; at least `|m|` zero modes occur along it.
    pub sf: i64,
}

const RECIPE_MAX_N: u32 = 400;

fn twisted_unit_circle(params: TwistFamilyParams, samples: usize) -> Result<curves::SampledLoop> {
    let base = curves::gen_circle(1.0, [0.0; 3], [0.0, 0.0, 1.0], samples)?;
    let framed = curves::radial_framing(&base)?;
    curves::gen_twisted(&framed, params, samples)
}

fn certify(
    m: i64,
    params: Option<TwistFamilyParams>,
    a: f64,
    l: &curves::SampledLoop,
    tol: f64,
) -> Result<Option<ZeroModeRecipe>> {
    let w = invariants::writhe(l)?;
    let x = floor_argument(w.value, 0.0);
    if x.floor() as i64 != m || dist_to_integer(x) <= tol + w.error.abs() {
        return Ok(None);
    }
    let link =
        MagneticLink::from_invariants(vec![w.value], vec![vec![0]], vec![l.length()], vec![0.0])?
            .with_unknot_flags(vec![true])?;
    let sf = sf_unknot_edge_loop(&link, 0, tol)?;
    Ok(Some(ZeroModeRecipe {
        m,
        params,
        a,
        samples: l.len(),
        writhe: w.value,
        writhe_error: w.error,
        floor_argument: x,
        sf,
    }))
}

/// Search the twisted family over the unit circle (minus sign for `m ≥ 1`,
/// plus for `m < 0`) for a member whose edge loop has spectral flow `m`,
/// scanning `n` at `a = 1` and then at nearby values of `a`.
pub fn zero_mode_lower_bound(m: i64, tol: f64) -> Result<ZeroModeRecipe> {
    if m == 0 {
        let circle = curves::gen_circle(1.0, [0.0; 3], [0.0, 0.0, 1.0], 512)?;
        return certify(0, None, 0.0, &circle, tol)?.ok_or_else(|| {
            LinkError::SearchFailed("the round circle does not certify m = 0".into())
        });
    }
    let sign = if m > 0 {
        TwistSign::Minus
    } else {
        TwistSign::Plus
    };
    for a in [1.0, 0.9, 1.1, 0.8, 1.25, 0.7, 1.5] {
        for n in 1..=RECIPE_MAX_N {
            // on the unit circle j = n, so r = a/n
            let r = a / n as f64;
            if r >= 0.9 {
                continue;
            }
            let samples = (64 * n as usize).max(512);
            let params = TwistFamilyParams { r, n, sign };
            let curve = match twisted_unit_circle(params, samples) {
                Ok(c) => c,
                Err(LinkError::SelfIntersection(_)) => continue,
                Err(e) => return Err(e),
            };
            if let Some(recipe) = certify(m, Some(params), a, &curve, tol)? {
                return Ok(recipe);
            }
            let w = invariants::writhe(&curve)?.value;
            let x = floor_argument(w, 0.0);
            // the writhe grows roughly linearly in n; stop once past the target
            if (m > 0 && x.floor() as i64 > m) || (m < 0 && (x.floor() as i64) < m) {
                break;
            }
        }
    }
    Err(LinkError::SearchFailed(format!(
        "no twisted unknot found with spectral flow {m}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::hopf_invariant_link;

    fn hopf2(a2: f64) -> MagneticLink {
        hopf_invariant_link(2, vec![0.0, a2]).unwrap()
    }

    #[test]
    fn circle_edge_loop_is_zero() {
        let link =
            MagneticLink::from_invariants(vec![0.0], vec![vec![0]], vec![2.0 * PI], vec![0.0])
                .unwrap()
                .with_unknot_flags(vec![true])
                .unwrap();
        assert_eq!(sf_unknot_edge_loop(&link, 0, DEFAULT_TOL).unwrap(), 0);
        let l = FluxLoop::edge_loop(&[0.0], 0, 4).unwrap();
        assert_eq!(sf_loop(&link, &l, DEFAULT_TOL).unwrap().value, 0);
        assert_eq!(
            sf_crossing_oracle(&link, &l, 64, DEFAULT_TOL)
                .unwrap()
                .value,
            0
        );
    }

    #[test]
    fn hopf2_edge_loop_values() {
        assert_eq!(
            sf_unknot_edge_loop(&hopf2(0.25), 0, DEFAULT_TOL).unwrap(),
            0
        );
        assert_eq!(
            sf_unknot_edge_loop(&hopf2(0.75), 0, DEFAULT_TOL).unwrap(),
            -1
        );
        assert!(matches!(
            sf_unknot_edge_loop(&hopf2(0.5), 0, DEFAULT_TOL),
            Err(LinkError::UndefinedSpectralFlow(_))
        ));
        let plain = hopf2(0.25).with_unknot_flags(vec![false, false]).unwrap();
        assert!(matches!(
            sf_unknot_edge_loop(&plain, 0, DEFAULT_TOL),
            Err(LinkError::UnknotFlagMissing(0))
        ));
    }

    #[test]
    fn small_loops_match_theorem() {
        // p1 = (1/2, 0): component 1 is critical, component 0 drives
        let link = hopf2(0.0).with_fluxes(vec![0.5, 0.0]).unwrap();
        assert_eq!(sf_small_loop(&link, 1, 0, 0.1, DEFAULT_TOL).unwrap(), -1);
        let theorem_loop = FluxLoop::circle(&[0.5, 0.0], 0, 1, 0.1, 32).unwrap();
        assert_eq!(
            sf_loop(&link, &theorem_loop, DEFAULT_TOL).unwrap().value,
            -1
        );
        assert_eq!(
            sf_loop(&link, &theorem_loop.reversed(), DEFAULT_TOL)
                .unwrap()
                .value,
            1
        );
        assert!(matches!(
            sf_small_loop(&link, 1, 0, 0.6, DEFAULT_TOL),
            Err(LinkError::RadiusTooLarge { .. })
        ));
        assert!(matches!(
            sf_small_loop(&link, 0, 1, 0.1, DEFAULT_TOL),
            Err(LinkError::NotCritical { .. })
        ));
    }

    #[test]
    fn concatenation_matches_shifted_edge_loop() {
        let link = hopf2(0.0);
        let l1 = FluxLoop::edge_loop(&[0.0, 0.1], 0, 8).unwrap();
        // theorem loop around p2 = (0, 1/2): α₂ drives the cosine, α₁ the sine
        let around_p2 = FluxLoop::circle(&[0.0, 0.5], 1, 0, 0.1, 32).unwrap();
        assert_eq!(sf_loop(&link, &around_p2, DEFAULT_TOL).unwrap().value, -1);
        let shifted = FluxLoop::edge_loop(&[0.0, 0.75], 0, 8).unwrap();
        let parts = sf_loop(&link, &l1, DEFAULT_TOL).unwrap().value
            + sf_loop(&link, &around_p2, DEFAULT_TOL).unwrap().value;
        assert_eq!(parts, -1);
        assert_eq!(sf_loop(&link, &shifted, DEFAULT_TOL).unwrap().value, -1);
        // the circle starts at (0, 0.6), on the edge loop through that point
        let edge = FluxLoop::edge_loop(&[0.0, 0.6], 0, 8).unwrap();
        let joined = around_p2.concat(&edge).unwrap();
        let r = sf_loop(&link, &joined, DEFAULT_TOL).unwrap();
        assert_eq!(r.value, -2);
        assert_eq!(r.method, SfMethod::HomologyDecomposition);
        assert_eq!(
            sf_crossing_oracle(&link, &joined, DEFAULT_ORACLE_STEPS, DEFAULT_TOL)
                .unwrap()
                .value,
            -2
        );
    }

    #[test]
    fn deformation_differences() {
        assert_eq!(
            sf_deformation_difference(0.3, 0.2, 0.3, 0.2, DEFAULT_TOL).unwrap(),
            0
        );
        assert_eq!(
            sf_deformation_difference(0.0, 0.0, -2.3, 0.0, DEFAULT_TOL).unwrap(),
            1
        );
        assert_eq!(
            sf_deformation_difference(0.0, 0.0, 0.0, 2.0 * PI * 0.75, DEFAULT_TOL).unwrap(),
            -1
        );
        assert!(sf_deformation_difference(0.0, 0.0, 0.0, PI, DEFAULT_TOL).is_err());
    }

    #[test]
    fn oracle_steps_refine() {
        assert!(matches!(
            track_zero_crossings(1.0, 0.0, 40.0, 4),
            Err(LinkError::StepTooCoarse { .. })
        ));
        assert_eq!(tracked_crossings(1.0, PI, PI + 40.0, 4).unwrap().0, 6);
        assert_eq!(
            tracked_crossings(2.0, PI, -3.0 * PI - 0.5, 4).unwrap().0,
            -2
        );
    }

    #[test]
    fn driven_knot_needs_unknot_flag() {
        let link =
            MagneticLink::from_invariants(vec![3.1], vec![vec![0]], vec![10.0], vec![0.0]).unwrap();
        let l = FluxLoop::edge_loop(&[0.0], 0, 4).unwrap();
        assert!(matches!(
            sf_loop(&link, &l, DEFAULT_TOL),
            Err(LinkError::UnsupportedKnotClass(_))
        ));
        assert!(matches!(
            sf_crossing_oracle(&link, &l, 64, DEFAULT_TOL),
            Err(LinkError::UnsupportedKnotClass(_))
        ));
    }

    #[test]
    fn knotted_component_with_zero_net_crossings() {
        // a loop that crosses the wall of a knotted, unflagged component and comes back
        let link = hopf2(0.0).with_unknot_flags(vec![false, true]).unwrap();
        let l = FluxLoop::circle(&[0.0, 0.5], 1, 0, 0.1, 32).unwrap();
        assert_eq!(sf_loop(&link, &l, DEFAULT_TOL).unwrap().value, -1);
        assert_eq!(
            sf_crossing_oracle(&link, &l, 256, DEFAULT_TOL)
                .unwrap()
                .value,
            -1
        );
    }

    #[test]
    fn zero_mode_recipes() {
        for m in [0, 1, 2, -1] {
            let r = zero_mode_lower_bound(m, DEFAULT_TOL).unwrap();
            assert_eq!(r.sf, m);
            assert_eq!(r.floor_argument.floor() as i64, m);
        }
        let r = zero_mode_lower_bound(1, DEFAULT_TOL).unwrap();
        assert_eq!(r.params.unwrap().sign, TwistSign::Minus);
    }
}
