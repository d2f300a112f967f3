//! Multiplicative split `Ξ* = Ξ*⁺ Ξ*⁻` by Cauchy integration of `ln Ξ*`.
//!
//! `Θ(ξ) = ∫ ln Ξ*(t)/(t - ξ) dt` and `Ξ*⁺ = exp(Θ/(2πi))`. On the real line
//! the integral is folded onto `t > 0` with the value at `|Re ξ|` subtracted,
//! which gives the principal value plus half residue directly and stays
//! bounded for `ξ` close to the axis. A positive `beta` instead integrates
//! along `Im t = -beta` with the complex logarithm.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::gamma_plus;
use crate::error::{Error, Result};
use crate::kernel::{
    eval_xi_star, log_xi_star, log_xi_star_curvature, nondimensionalize, xi_star_minus_one,
    KernelParams, StripConfig,
};
use crate::quad::{integrate, partition, Segment, Tolerance};
use crate::special::log1p;

/// Numerical controls of the Cauchy integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationSettings {
    /// Offset of the integration line below the real axis (1/m).
    pub beta: f64,
    /// Truncation point of the integral in units of `1/H`.
    pub tail_cutoff: f64,
    pub quad_tol: f64,
    /// Integrate `[T, ∞)` exactly instead of truncating at `T`.
    pub tail_correction: bool,
}

impl FactorizationSettings {
    pub fn for_config(cfg: &StripConfig) -> Self {
        let lambda_star = cfg.params().lambda * cfg.h_total();
        Self {
            beta: 0.0,
            tail_cutoff: 200.0 * lambda_star.max(1.0),
            quad_tol: 1e-9,
            tail_correction: true,
        }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_tol(mut self, quad_tol: f64) -> Self {
        self.quad_tol = quad_tol;
        self
    }

    pub fn validate(&self, cfg: &StripConfig, half_width: f64) -> Result<()> {
        if !(self.beta.is_finite() && self.beta >= 0.0 && self.beta < half_width) {
            return Err(Error::invalid(
                "beta",
                format!("must lie in [0, {half_width:.6e}), got {}", self.beta),
            ));
        }
        let lambda_star = cfg.params().lambda * cfg.h_total();
        let min_cut = 10.0 * lambda_star.max(1.0);
        if !(self.tail_cutoff.is_finite() && self.tail_cutoff >= min_cut) {
            return Err(Error::invalid(
                "tail_cutoff",
                format!("must be >= {min_cut:.6e}, got {}", self.tail_cutoff),
            ));
        }
        if !(self.quad_tol > 0.0 && self.quad_tol < 1e-2) {
            return Err(Error::invalid(
                "quad_tol",
                format!("must lie in (0, 1e-2), got {}", self.quad_tol),
            ));
        }
        Ok(())
    }
}

/// Half-width of the strip about the real axis where `Ξ*` is analytic and
/// zero free: the nearest of the kernel zero `-iγ₊`, the pole `iλ` and the
/// first `coth` pole.
pub fn analyticity_half_width(cfg: &StripConfig) -> Result<f64> {
    cfg.validate()?;
    let gp = gamma_plus(cfg)?.value;
    let gm = PI / cfg.h1.max(cfg.h2);
    Ok(gp.min(cfg.params().lambda).min(gm))
}

/// The `+` factor of `Ξ*` on a fixed configuration.
#[derive(Debug)]
pub struct Factorization {
    cfg: StripConfig,
    params: KernelParams,
    settings: FactorizationSettings,
    half_width: f64,
    alpha_scale: f64,
    evaluations: AtomicUsize,
}

impl Clone for Factorization {
    fn clone(&self) -> Self {
        Self {
            cfg: self.cfg,
            params: self.params,
            settings: self.settings,
            half_width: self.half_width,
            alpha_scale: self.alpha_scale,
            evaluations: AtomicUsize::new(self.evaluations.load(Ordering::Relaxed)),
        }
    }
}

impl Factorization {
    pub fn new(cfg: &StripConfig, settings: FactorizationSettings) -> Result<Self> {
        let half_width = analyticity_half_width(cfg)?;
        settings.validate(cfg, half_width)?;
        let mut f = Self {
            cfg: *cfg,
            params: cfg.params(),
            settings,
            half_width,
            alpha_scale: 1.0,
            evaluations: AtomicUsize::new(0),
        };
        f.alpha_scale = f.alpha_estimate()?.max(f64::MIN_POSITIVE);
        Ok(f)
    }

    pub fn with_defaults(cfg: &StripConfig) -> Result<Self> {
        Self::new(cfg, FactorizationSettings::for_config(cfg))
    }

    pub fn config(&self) -> &StripConfig {
        &self.cfg
    }

    pub fn settings(&self) -> &FactorizationSettings {
        &self.settings
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    /// Strip half-width used to validate `beta`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Integrand evaluations spent so far.
    pub fn evaluations(&self) -> usize {
        self.evaluations.load(Ordering::Relaxed)
    }

    /// Same configuration, different controls.
    pub fn reconfigured(&self, settings: FactorizationSettings) -> Result<Self> {
        settings.validate(&self.cfg, self.half_width)?;
        let mut f = self.clone();
        f.settings = settings;
        f.evaluations = AtomicUsize::new(0);
        Ok(f)
    }

    fn cutoff(&self) -> f64 {
        self.settings.tail_cutoff / self.cfg.h_total()
    }

    fn breaks(&self, xi: Complex64) -> Vec<f64> {
        let mut b = vec![
            xi.re.abs(),
            xi.norm(),
            1.0 / self.cfg.h1,
            1.0 / self.cfg.h2,
            self.params.lambda,
            self.params.inf_coeff,
            self.cutoff(),
        ];
        b.retain(|v| *v > 0.0);
        b
    }

    fn segments(&self, xi: Complex64) -> (Vec<Segment>, Option<f64>) {
        let breaks = self.breaks(xi);
        if self.settings.tail_correction {
            (partition(0.0, &breaks, f64::INFINITY), None)
        } else {
            let t = self.cutoff();
            (partition(0.0, &breaks, t), Some(t))
        }
    }

    fn tolerance(&self, xi: Complex64) -> Tolerance {
        let scale = (xi.norm() * self.alpha_scale).min(1.0);
        Tolerance::new(self.settings.quad_tol, 1e-3 * self.settings.quad_tol * scale)
    }

    /// `Θ(ξ)` for `Im ξ >= 0` with its quadrature error estimate.
    pub fn theta_plus_with_error(&self, xi: Complex64) -> Result<(Complex64, f64)> {
        if !(xi.im >= 0.0) || !xi.is_finite() {
            return Err(Error::domain(
                "theta_plus",
                format!("requires Im xi >= 0, got {xi}"),
            ));
        }
        if xi == Complex64::new(0.0, 0.0) {
            return Ok((xi, 0.0));
        }
        if self.settings.beta > 0.0 {
            self.theta_shifted(xi)
        } else {
            self.theta_folded(xi)
        }
    }

    pub fn theta_plus(&self, xi: Complex64) -> Result<Complex64> {
        self.theta_plus_with_error(xi).map(|(v, _)| v)
    }

    fn theta_folded(&self, xi: Complex64) -> Result<(Complex64, f64)> {
        let cfg = &self.cfg;
        let l0 = log_xi_star(xi.re.abs(), cfg);
        let xi2 = xi * xi;
        let real_axis = xi.im == 0.0;
        let integrand = |t: f64| {
            let d = t * t - xi2;
            if real_axis && d.re == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            2.0 * xi * (log_xi_star(t, cfg) - l0) / d
        };
        let (segs, cut) = self.segments(xi);
        let est = integrate(integrand, &segs, self.tolerance(xi))?;
        self.evaluations.fetch_add(est.evaluations, Ordering::Relaxed);
        // 2ξ∫₀^∞ dt/(t² - ξ²) = iπ on the closed upper half-plane.
        let mut theta = est.value + Complex64::new(0.0, PI * l0);
        if let Some(t) = cut {
            theta += l0 * ((t - xi) / (t + xi)).ln();
        }
        Ok((theta, est.error))
    }

    fn theta_shifted(&self, xi: Complex64) -> Result<(Complex64, f64)> {
        let cfg = &self.cfg;
        let beta = self.settings.beta;
        let integrand = |s: f64| {
            let z = Complex64::new(s, -beta);
            let l = log1p(xi_star_minus_one(z, cfg));
            l / (z - xi) + l.conj() / (-z.conj() - xi)
        };
        let (segs, _) = self.segments(xi);
        let est = integrate(integrand, &segs, self.tolerance(xi))?;
        self.evaluations.fetch_add(est.evaluations, Ordering::Relaxed);
        Ok((est.value, est.error))
    }

    /// `Ξ*⁺(ξ)` on the closed upper half-plane.
    pub fn factor_plus(&self, xi: Complex64) -> Result<Complex64> {
        let theta = self.theta_plus(xi)?;
        Ok((theta / Complex64::new(0.0, 2.0 * PI)).exp())
    }

    /// `Ξ*⁻(ξ) = Ξ*⁺(-ξ)` on the closed lower half-plane.
    pub fn factor_minus(&self, xi: Complex64) -> Result<Complex64> {
        self.factor_plus(-xi)
    }

    /// `Ξ*⁺` anywhere in its half-plane of analyticity, continued below the
    /// real axis through `Ξ*⁺(ξ) = Ξ*(ξ)/Ξ*⁺(-ξ)`.
    pub fn factor_plus_continued(&self, xi: Complex64) -> Result<Complex64> {
        if xi.im >= 0.0 {
            self.factor_plus(xi)
        } else {
            Ok(eval_xi_star(xi, &self.cfg)? / self.factor_plus(-xi)?)
        }
    }

    /// `α = ∫₀^∞ ln Ξ*(t)/t² dt` with the same segment layout as `Θ`.
    pub fn alpha_estimate(&self) -> Result<f64> {
        let cfg = &self.cfg;
        let curv = log_xi_star_curvature(cfg);
        let tiny = 1e-7 / cfg.h1.max(cfg.h2);
        let integrand = |t: f64| {
            let v = if t < tiny {
                curv
            } else {
                log_xi_star(t, cfg) / (t * t)
            };
            Complex64::new(v, 0.0)
        };
        let breaks = self.breaks(Complex64::new(0.0, 0.0));
        let segs = partition(0.0, &breaks, f64::INFINITY);
        let est = integrate(integrand, &segs, Tolerance::new(1e-12, 0.0))?;
        self.evaluations.fetch_add(est.evaluations, Ordering::Relaxed);
        Ok(est.value.re)
    }
}

/// Measured expansion coefficients of `Ξ*⁺` at the origin and at infinity
/// next to their closed-form targets.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsReport {
    pub alpha: f64,
    pub zero_coeff: Complex64,
    pub zero_target: Complex64,
    pub zero_rel_dev: f64,
    pub inf_coeff: Complex64,
    pub inf_target: Complex64,
    pub inf_rel_dev: f64,
    /// Deviation from the negated infinity target.
    pub inf_rel_dev_negated: f64,
}

/// Everything the factorization exposes for one configuration.
#[derive(Debug, Clone, Serialize)]
pub struct FactorizationResult {
    #[serde(skip)]
    pub plus_factor: Factorization,
    pub alpha_estimate: f64,
    pub asym_zero_coeff: Complex64,
    pub asym_inf_coeff: Complex64,
    pub diagnostics: FactorizationDiagnostics,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationDiagnostics {
    /// Largest `| |Ξ*⁺(t)|² / Ξ*(t) - 1 |` over the sample points.
    pub identity_error: f64,
    pub quad_evaluations: usize,
    pub strip_half_width: f64,
}

/// Coefficient of `ξ` in `Ξ*⁺(ξ) = 1 + cξ + O(ξ²)`, by Richardson
/// extrapolation along the positive imaginary axis.
pub fn zero_coefficient(f: &Factorization) -> Result<Complex64> {
    let eps = 1e-3 / f.config().h_total();
    let g = |e: f64| -> Result<Complex64> {
        let xi = Complex64::new(0.0, e);
        Ok((f.factor_plus(xi)? - 1.0) / xi)
    };
    Ok(2.0 * g(0.5 * eps)? - g(eps)?)
}

/// Coefficient of `ln(-iξ)/ξ` in `Ξ*⁺` along `ξ = iY`, from the slope of
/// `ξ ln Ξ*⁺(ξ)` against `ln Y` around `Y H = yh`.
pub fn infinity_coefficient(f: &Factorization, yh: f64) -> Result<Complex64> {
    let y = yh / f.config().h_total();
    let delta = 0.5f64;
    let g = |y: f64| -> Result<Complex64> {
        let xi = Complex64::new(0.0, y);
        Ok(xi * f.theta_plus(xi)? / Complex64::new(0.0, 2.0 * PI))
    };
    Ok((g(y * delta.exp())? - g(y * (-delta).exp())?) / (2.0 * delta))
}

/// Compares both measured expansion coefficients with their targets. The
/// zero-point target uses the dimensionless `α` integral.
pub fn verify_asymptotics(
    cfg: &StripConfig,
    settings: FactorizationSettings,
) -> Result<AsymptoticsReport> {
    let f = Factorization::new(cfg, settings)?;
    let dp = nondimensionalize(cfg)?;
    let alpha = crate::constants::alpha_star(&dp)? * dp.h_total;
    let i_pi = Complex64::new(0.0, PI);
    let zero_target = alpha / i_pi;
    let zero_coeff = zero_coefficient(&f)?;
    let inf_target = f.params().inf_coeff / i_pi;
    let inf_coeff = infinity_coefficient(&f, 1e3)?;
    Ok(AsymptoticsReport {
        alpha,
        zero_coeff,
        zero_target,
        zero_rel_dev: (zero_coeff - zero_target).norm() / zero_target.norm(),
        inf_coeff,
        inf_target,
        inf_rel_dev: (inf_coeff - inf_target).norm() / inf_target.norm(),
        inf_rel_dev_negated: (inf_coeff + inf_target).norm() / inf_target.norm(),
    })
}

/// Builds the factorization and samples the identity `|Ξ*⁺(t)|² = Ξ*(t)` on
/// `probe` points along the real axis.
pub fn factorize(
    cfg: &StripConfig,
    settings: FactorizationSettings,
    probe: &[f64],
) -> Result<FactorizationResult> {
    let f = Factorization::new(cfg, settings)?;
    let mut identity_error: f64 = 0.0;
    for &t in probe {
        let xi = Complex64::new(t, 0.0);
        let p = f.factor_plus(xi)?;
        let target = eval_xi_star(xi, cfg)?.re;
        identity_error = identity_error.max(((p * p.conj()).re / target - 1.0).abs());
    }
    let alpha_estimate = f.alpha_estimate()?;
    let asym_zero_coeff = zero_coefficient(&f)?;
    let asym_inf_coeff = infinity_coefficient(&f, 1e3)?;
    let diagnostics = FactorizationDiagnostics {
        identity_error,
        quad_evaluations: f.evaluations(),
        strip_half_width: f.half_width(),
    };
    Ok(FactorizationResult {
        plus_factor: f,
        alpha_estimate,
        asym_zero_coeff,
        asym_inf_coeff,
        diagnostics,
    })
}
