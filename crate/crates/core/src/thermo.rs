//! Bulk free energy, Catalan's constant and the residual entropy.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_half_line};

const TOL: f64 = 1e-12;

/// 1 − e^{−x}, accurate for small x.
fn one_minus_exp(x: f64) -> f64 {
    -libm::expm1(-x)
}

fn check_u(u: f64) -> Result<()> {
    if !(u > 0.0 && u < FRAC_PI_2) {
        return Err(Error::InvalidParameter("bulk free energy needs 0 < u < pi/2".into()));
    }
    Ok(())
}

/// −∫_ℝ sinh(ut) sinh((π/2−u)t) / (t sinh πt cosh(πt/2)) dt, in an overflow-free form.
pub fn free_energy_hyperbolic(u: f64) -> Result<f64> {
    check_u(u)?;
    let v = FRAC_PI_2 - u;
    let f = |t: f64| {
        if t == 0.0 {
            return u * v / PI;
        }
        libm::exp(-PI * t) * one_minus_exp(2.0 * u * t) * one_minus_exp(2.0 * v * t)
            / (t * one_minus_exp(2.0 * PI * t) * (1.0 + libm::exp(-PI * t)))
    };
    Ok(-2.0 * integrate_half_line(f, TOL)?)
}

/// ∫_0^{π/2} g(t) dt with t = s², taming integrable log singularities at 0.
fn integrate_log_singular<F: Fn(f64) -> f64>(g: F) -> Result<f64> {
    integrate(|s| if s == 0.0 { 0.0 } else { 2.0 * s * g(s * s) }, 0.0, libm::sqrt(FRAC_PI_2), TOL)
}

/// ½ log 2 − (1/π) ∫_0^{π/2} log(cosec t + sin 2u) dt.
pub fn free_energy_trigonometric(u: f64) -> Result<f64> {
    check_u(u)?;
    let s2u = libm::sin(2.0 * u);
    let i = integrate_log_singular(|t| libm::log(1.0 / libm::sin(t) + s2u))?;
    Ok(0.5 * LN_2 - i / PI)
}

/// Returns the trigonometric form after checking both forms agree to `1e-9`.
pub fn bulk_free_energy(u: f64) -> Result<f64> {
    let a = free_energy_hyperbolic(u)?;
    let b = free_energy_trigonometric(u)?;
    if libm::fabs(a - b) > 1e-9 {
        return Err(Error::Numerical(alloc::format!("free-energy forms disagree: {a} vs {b}")));
    }
    Ok(b)
}

/// G = ½ ∫_0^{π/2} log(1 + cosec t) dt.
pub fn catalan() -> Result<f64> {
    Ok(0.5 * integrate_log_singular(|t| libm::log(1.0 + 1.0 / libm::sin(t)))?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoResult {
    pub f_bulk: f64,
    pub molecular_freedom: f64,
    pub entropy: f64,
    pub catalan: f64,
}

pub fn residual_entropy() -> Result<ThermoResult> {
    let g = catalan()?;
    let s = 2.0 * g / PI;
    let f = bulk_free_energy(FRAC_PI_4)?;
    Ok(ThermoResult {
        f_bulk: f,
        molecular_freedom: libm::exp(s),
        entropy: s,
        catalan: g,
    })
}

/// √2·exp(−f_bulk(π/4)), the free-energy route to W.
pub fn molecular_freedom_from_free_energy() -> Result<f64> {
    Ok(SQRT_2 * libm::exp(-bulk_free_energy(FRAC_PI_4)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let t = residual_entropy().unwrap();
        assert!((t.catalan - 0.915_965_594).abs() < 1e-8);
        assert!((t.entropy - 0.583_121_808).abs() < 1e-8);
        assert!((t.molecular_freedom - 1.791_622_812).abs() < 1e-8);
        assert!((molecular_freedom_from_free_energy().unwrap() - 1.791_622_812).abs() < 1e-8);
    }

    #[test]
    fn forms_agree_and_vanish_at_zero() {
        let a = free_energy_hyperbolic(0.3).unwrap();
        let b = free_energy_trigonometric(0.3).unwrap();
        assert!((a - b).abs() < 1e-9);
        assert!(free_energy_trigonometric(1e-7).unwrap().abs() < 1e-6);
        assert!(bulk_free_energy(0.0).is_err());
    }
}
