//! Modified Bessel functions `K_ν` by their integral representation and the
//! singular-profile norm constants `C_ν = ∫₀^∞ K_ν(r)² r dr`.

use crate::error::{LinkError, Result};
use crate::quadrature::integrate;

/// Radius below which `K_ν(r)` is replaced by its leading power law.
const SMALL_R: f64 = 1e-30;
/// Upper cutoff of the radial integral; `K_ν(r)² r` is below 1e-33 beyond it.
const LARGE_R: f64 = 40.0;

/// `K_ν(x) = ∫₀^∞ e^{−x cosh t} cosh(νt) dt` for `x > 0`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(LinkError::InvalidParams(format!(
            "K_nu needs x > 0, got {x}"
        )));
    }
    let nu = nu.abs();
    // truncate where the integrand is 1e-18 below its value at t = 0
    let log_decay = |t: f64| x * (t.cosh() - 1.0) - nu * t;
    let mut t_max = 1.0;
    while log_decay(t_max) < 42.0 {
        t_max += 0.5;
    }
    let scaled = integrate(
        |t| (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh(),
        0.0,
        t_max,
        0.0,
        1e-13,
    )?;
    Ok(scaled.value * (-x).exp())
}

/// `K_α(ρ·√(1+j²))`.
pub fn singular_profile(alpha: f64, j: f64, rho: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(LinkError::FluxOutOfRange(alpha));
    }
    if !(rho > 0.0) {
        return Err(LinkError::InvalidParams(format!(
            "rho must be positive, got {rho}"
        )));
    }
    bessel_k(alpha, rho * (1.0 + j * j).sqrt())
}

/// `C_α = ∫₀^∞ K_α(r)² r dr`, split at `r = 1`. On `(0,1]` the substitution
/// `r = x^q` with `q = max(1, 1/(2−2α))` flattens the `r^{1−2α}` singularity.
pub fn bessel_norm_constant(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(LinkError::FluxOutOfRange(alpha));
    }
    let nu = alpha;
    let q = (1.0 / (2.0 - 2.0 * nu)).max(1.0);
    let power = q * (2.0 - 2.0 * nu) - 1.0;
    // K_ν(r) ≈ K_ν(r₀)(r₀/r)^ν for r ≤ r₀
    let k0 = bessel_k(nu, SMALL_R)?;
    let lead = k0 * k0 * SMALL_R.powf(2.0 * nu);
    let inner = |x: f64| -> f64 {
        let r = x.powf(q);
        if r < SMALL_R {
            return q * lead * x.powf(power);
        }
        match bessel_k(nu, r) {
            Ok(k) => q * k * k * r * r / x,
            Err(_) => f64::NAN,
        }
    };
    let near = integrate(inner, 0.0, 1.0, 1e-14, 1e-11)?;
    let outer = |r: f64| match bessel_k(nu, r) {
        Ok(k) => k * k * r,
        Err(_) => f64::NAN,
    };
    let far = integrate(outer, 1.0, LARGE_R, 1e-16, 1e-11)?;
    let total = near.value + far.value;
    if !total.is_finite() {
        return Err(LinkError::QuadratureFailure(format!(
            "C_alpha diverged at alpha = {alpha}"
        )));
    }
    Ok(total)
}

/// `C_α + C_{1−α}`.
pub fn bessel_norm_sum(alpha: f64) -> Result<f64> {
    Ok(bessel_norm_constant(alpha)? + bessel_norm_constant(1.0 - alpha)?)
}
