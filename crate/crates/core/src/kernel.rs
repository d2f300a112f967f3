//! The Wiener-Hopf kernel of the strip, its regularized factor and the
//! dimensionless parametrisation used by sweeps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{coth, coth_c, xcothm1, xcothm1_c};

/// Physical description of the cracked strip (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripConfig {
    /// Shear modulus of the upper layer (Pa).
    pub mu1: f64,
    /// Shear modulus of the lower layer (Pa).
    pub mu2: f64,
    /// Upper thickness (m).
    pub h1: f64,
    /// Lower thickness (m).
    pub h2: f64,
    /// Interface compliance (m/Pa). Zero means a perfect bond.
    pub kappa: f64,
}

impl StripConfig {
    pub fn new(mu1: f64, mu2: f64, h1: f64, h2: f64, kappa: f64) -> Result<Self> {
        let cfg = Self {
            mu1,
            mu2,
            h1,
            h2,
            kappa,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Unit moduli and thicknesses.
    pub fn symmetric(kappa: f64) -> Self {
        Self {
            mu1: 1.0,
            mu2: 1.0,
            h1: 1.0,
            h2: 1.0,
            kappa,
        }
    }

    /// Checks the geometry and moduli, allowing `kappa = 0`.
    pub fn validate_geometry(&self) -> Result<()> {
        for (field, v) in [
            ("mu1", self.mu1),
            ("mu2", self.mu2),
            ("h1", self.h1),
            ("h2", self.h2),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(field, format!("must be finite and > 0, got {v}")));
            }
        }
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return Err(Error::invalid(
                "kappa",
                format!("must be finite and >= 0, got {}", self.kappa),
            ));
        }
        Ok(())
    }

    /// Full validation for the imperfect-interface path (`kappa > 0`).
    pub fn validate(&self) -> Result<()> {
        self.validate_geometry()?;
        if self.kappa == 0.0 {
            return Err(Error::invalid(
                "kappa",
                "kappa = 0 is the perfect interface; only the perfect-bond constants accept it",
            ));
        }
        Ok(())
    }

    pub fn h_total(&self) -> f64 {
        self.h1 + self.h2
    }

    pub fn params(&self) -> KernelParams {
        KernelParams::of(self)
    }
}

/// Scalars derived directly from a [`StripConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams {
    /// `1/(μ₁H₁) + 1/(μ₂H₂)`.
    pub eta: f64,
    /// Factorization scale; `λ² = η/κ`.
    pub lambda: f64,
    /// Coefficient of `1/t` in the large-`t` expansion of `Ξ*(t) - 1`.
    pub inf_coeff: f64,
}

impl KernelParams {
    pub fn of(cfg: &StripConfig) -> Self {
        let eta = 1.0 / (cfg.mu1 * cfg.h1) + 1.0 / (cfg.mu2 * cfg.h2);
        let lambda = ((cfg.mu1 * cfg.h1 + cfg.mu2 * cfg.h2)
            / (cfg.mu1 * cfg.mu2 * cfg.h1 * cfg.h2 * cfg.kappa))
            .sqrt();
        let inf_coeff = (cfg.mu1 + cfg.mu2) / (cfg.mu1 * cfg.mu2 * cfg.kappa);
        Self {
            eta,
            lambda,
            inf_coeff,
        }
    }
}

/// `Ξ(ξ) = (coth(ξH₁)/μ₁ + coth(ξH₂)/μ₂ + κξ)/ξ`.
pub fn eval_kernel(xi: Complex64, cfg: &StripConfig) -> Result<Complex64> {
    if xi == Complex64::new(0.0, 0.0) {
        return Err(Error::domain("eval_kernel", "double pole at xi = 0"));
    }
    let v = (coth_c(xi * cfg.h1) / cfg.mu1 + coth_c(xi * cfg.h2) / cfg.mu2 + cfg.kappa * xi) / xi;
    if !v.is_finite() || near_coth_pole(xi * cfg.h1) || near_coth_pole(xi * cfg.h2) {
        return Err(Error::domain("eval_kernel", format!("coth pole at xi = {xi}")));
    }
    Ok(v)
}

fn near_coth_pole(z: Complex64) -> bool {
    let k = (z.im / std::f64::consts::PI).round();
    k != 0.0 && (z - Complex64::new(0.0, k * std::f64::consts::PI)).norm() <= 1e-12 * z.norm()
}

/// `Ξ*(ξ) - 1`, evaluated without cancellation.
pub fn xi_star_minus_one(xi: Complex64, cfg: &StripConfig) -> Complex64 {
    let lambda2 = cfg.params().lambda.powi(2);
    let num = cfg.mu1 * xcothm1_c(xi * cfg.h2) / cfg.h2 + cfg.mu2 * xcothm1_c(xi * cfg.h1) / cfg.h1;
    num / (cfg.mu1 * cfg.mu2 * cfg.kappa * (lambda2 + xi * xi))
}

/// Real-axis specialisation of [`xi_star_minus_one`].
pub fn xi_star_minus_one_real(t: f64, cfg: &StripConfig) -> f64 {
    let lambda2 = (cfg.mu1 * cfg.h1 + cfg.mu2 * cfg.h2)
        / (cfg.mu1 * cfg.mu2 * cfg.h1 * cfg.h2 * cfg.kappa);
    let num = cfg.mu1 * xcothm1(t * cfg.h2) / cfg.h2 + cfg.mu2 * xcothm1(t * cfg.h1) / cfg.h1;
    num / (cfg.mu1 * cfg.mu2 * cfg.kappa * (lambda2 + t * t))
}

/// Regularized kernel `Ξ* = ξ²Ξ/(κ(λ² + ξ²))`, equal to 1 at the origin and at infinity.
pub fn eval_xi_star(xi: Complex64, cfg: &StripConfig) -> Result<Complex64> {
    let lambda = cfg.params().lambda;
    let gap = (xi * xi + lambda * lambda).norm();
    if gap <= 1e-14 * lambda * lambda {
        return Err(Error::domain("eval_xi_star", format!("pole at xi = {xi}")));
    }
    let v = 1.0 + xi_star_minus_one(xi, cfg);
    if !v.is_finite() || near_coth_pole(xi * cfg.h1) || near_coth_pole(xi * cfg.h2) {
        return Err(Error::domain("eval_xi_star", format!("coth pole at xi = {xi}")));
    }
    Ok(v)
}

/// `ln Ξ*(t)` on the real axis.
pub fn log_xi_star(t: f64, cfg: &StripConfig) -> f64 {
    xi_star_minus_one_real(t, cfg).ln_1p()
}

/// Limit of `ln Ξ*(t)/t²` as `t → 0`.
pub fn log_xi_star_curvature(cfg: &StripConfig) -> f64 {
    let (m1, m2, h1, h2) = (cfg.mu1, cfg.mu2, cfg.h1, cfg.h2);
    (m1 * h2 + m2 * h1) * h1 * h2 / (3.0 * (m1 * h1 + m2 * h2))
}

/// Strip data in contrast form: `H* = (H₁-H₂)/H`, `μ* = (μ₁-μ₂)/(μ₁+μ₂)`,
/// `κ* = κ(μ₁+μ₂)/H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub h_star: f64,
    pub mu_star: f64,
    pub kappa_star: f64,
    /// Total thickness `H = H₁ + H₂` (m).
    pub h_total: f64,
    /// `λH`.
    pub lambda_star: f64,
}

impl DimensionlessParams {
    pub fn new(mu_star: f64, h_star: f64, kappa_star: f64, h_total: f64) -> Result<Self> {
        check_contrast("mu_star", mu_star)?;
        check_contrast("h_star", h_star)?;
        if !(kappa_star.is_finite() && kappa_star > 0.0) {
            return Err(Error::invalid(
                "kappa_star",
                format!("must be finite and > 0, got {kappa_star}"),
            ));
        }
        if !(h_total.is_finite() && h_total > 0.0) {
            return Err(Error::invalid(
                "h_total",
                format!("must be finite and > 0, got {h_total}"),
            ));
        }
        Ok(Self {
            h_star,
            mu_star,
            kappa_star,
            h_total,
            lambda_star: lambda_star(mu_star, h_star, kappa_star),
        })
    }

    fn coefficients(&self) -> StarCoefficients {
        let (m, h, k) = (self.mu_star, self.h_star, self.kappa_star);
        StarCoefficients {
            c1: 2.0 / (k * (1.0 + m)),
            c2: 2.0 / (k * (1.0 - m)),
            h1: 0.5 * (1.0 + h),
            h2: 0.5 * (1.0 - h),
            lambda2: self.lambda_star * self.lambda_star,
        }
    }

    /// `a H`, the dimensionless large-`t` coefficient.
    pub fn inf_coeff(&self) -> f64 {
        4.0 / ((1.0 - self.mu_star * self.mu_star) * self.kappa_star)
    }
}

/// `λ*` from the contrast parameters.
pub fn lambda_star(mu_star: f64, h_star: f64, kappa_star: f64) -> f64 {
    (8.0 * (1.0 + mu_star * h_star)
        / (kappa_star * (1.0 - mu_star * mu_star) * (1.0 - h_star * h_star)))
        .sqrt()
}

pub(crate) fn check_contrast(field: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v.abs() < 1.0) {
        return Err(Error::invalid(
            field,
            format!("contrast must lie strictly inside (-1, 1), got {v}"),
        ));
    }
    Ok(())
}

struct StarCoefficients {
    c1: f64,
    c2: f64,
    h1: f64,
    h2: f64,
    lambda2: f64,
}

/// `Ξ**(t) = t(t + c₁coth(th₁) + c₂coth(th₂))/(λ*² + t²)`, the kernel in units of `H`.
pub fn eval_xi_star_star(t: f64, dp: &DimensionlessParams) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let s = dp.coefficients();
    if t.abs() < 1e-3 {
        return 1.0 + xi_star_star_minus_one(t, dp);
    }
    t * (t + s.c1 * coth(t * s.h1) + s.c2 * coth(t * s.h2)) / (s.lambda2 + t * t)
}

/// `Ξ**(t) - 1` without cancellation, using `λ*² = c₁/h₁ + c₂/h₂`.
pub fn xi_star_star_minus_one(t: f64, dp: &DimensionlessParams) -> f64 {
    let s = dp.coefficients();
    (s.c1 * xcothm1(t * s.h1) / s.h1 + s.c2 * xcothm1(t * s.h2) / s.h2) / (s.lambda2 + t * t)
}

pub fn log_xi_star_star(t: f64, dp: &DimensionlessParams) -> f64 {
    xi_star_star_minus_one(t, dp).ln_1p()
}

/// Limit of `ln Ξ**(t)/t²` as `t → 0`.
pub fn log_xi_star_star_curvature(dp: &DimensionlessParams) -> f64 {
    let (m, h) = (dp.mu_star, dp.h_star);
    (1.0 - m * h) * (1.0 - h * h) / (12.0 * (1.0 + m * h))
}

pub fn nondimensionalize(cfg: &StripConfig) -> Result<DimensionlessParams> {
    cfg.validate()?;
    let h = cfg.h_total();
    let dp = DimensionlessParams {
        h_star: (cfg.h1 - cfg.h2) / h,
        mu_star: (cfg.mu1 - cfg.mu2) / (cfg.mu1 + cfg.mu2),
        kappa_star: cfg.kappa * (cfg.mu1 + cfg.mu2) / h,
        h_total: h,
        lambda_star: cfg.params().lambda * h,
    };
    check_contrast("mu_star", dp.mu_star)?;
    check_contrast("h_star", dp.h_star)?;
    Ok(dp)
}

/// Inverse of [`nondimensionalize`] given `H = H₁+H₂` and `μ₁+μ₂`.
pub fn dimensionalize(dp: &DimensionlessParams, h_total: f64, mu_total: f64) -> Result<StripConfig> {
    check_contrast("mu_star", dp.mu_star)?;
    check_contrast("h_star", dp.h_star)?;
    if !(h_total.is_finite() && h_total > 0.0) {
        return Err(Error::invalid("h_total", format!("must be > 0, got {h_total}")));
    }
    if !(mu_total.is_finite() && mu_total > 0.0) {
        return Err(Error::invalid("mu_total", format!("must be > 0, got {mu_total}")));
    }
    StripConfig::new(
        0.5 * mu_total * (1.0 + dp.mu_star),
        0.5 * mu_total * (1.0 - dp.mu_star),
        0.5 * h_total * (1.0 + dp.h_star),
        0.5 * h_total * (1.0 - dp.h_star),
        dp.kappa_star * h_total / mu_total,
    )
}
