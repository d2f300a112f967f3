//! Scalar constants of the weight function and the junction conditions built
//! from them.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorize::FactorizationSettings;
use crate::kernel::{
    check_contrast, log_xi_star, log_xi_star_curvature, log_xi_star_star,
    log_xi_star_star_curvature, nondimensionalize, DimensionlessParams, StripConfig,
};
use crate::quad::{integrate_real, partition, Tolerance};

/// How the `γ₊` root was bracketed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaRegime {
    /// Sign change found by the uniform 64-step walk.
    Walk,
    /// Root below the first walk step; bracketed by repeated halving.
    Halving,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaPlus {
    pub value: f64,
    pub regime: GammaRegime,
    pub residual: f64,
}

/// `cot(γH₁)/μ₁ + cot(γH₂)/μ₂ - κγ`, strictly decreasing on `(0, π/max H_j)`.
pub fn gamma_equation(gamma: f64, cfg: &StripConfig) -> f64 {
    1.0 / ((gamma * cfg.h1).tan() * cfg.mu1) + 1.0 / ((gamma * cfg.h2).tan() * cfg.mu2)
        - cfg.kappa * gamma
}

/// Decay rate of the weight function ahead of the tip: the smallest positive
/// root of [`gamma_equation`]. Accepts `kappa = 0`.
pub fn gamma_plus(cfg: &StripConfig) -> Result<GammaPlus> {
    cfg.validate_geometry()?;
    let f = |g: f64| gamma_equation(g, cfg);
    let upper = PI / cfg.h1.max(cfg.h2);
    let step = upper / 64.0;

    let mut regime = GammaRegime::Walk;
    let (mut lo, mut hi);
    if f(step) <= 0.0 {
        regime = GammaRegime::Halving;
        hi = step;
        lo = 0.5 * step;
        let mut halvings = 0;
        while f(lo) <= 0.0 {
            hi = lo;
            lo *= 0.5;
            halvings += 1;
            if halvings > 1000 {
                return Err(Error::Bracket {
                    op: "gamma_plus",
                    pattern: format!("no positive value down to gamma = {lo:e}"),
                });
            }
        }
    } else {
        lo = step;
        hi = upper;
        for k in 2..64 {
            let g = k as f64 * step;
            if f(g) <= 0.0 {
                hi = g;
                break;
            }
            lo = g;
        }
    }

    let mut f_lo = f(lo);
    let mut f_hi = if hi == upper { f64::NEG_INFINITY } else { f(hi) };
    if !(f_lo > 0.0 && f_hi <= 0.0) {
        return Err(Error::Bracket {
            op: "gamma_plus",
            pattern: format!("f({lo:e}) = {f_lo:e}, f({hi:e}) = {f_hi:e}"),
        });
    }
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm > 0.0 {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    // Secant polish inside the final bracket.
    let mut root = if f_hi.is_finite() && f_lo != f_hi {
        let s = lo - f_lo * (hi - lo) / (f_hi - f_lo);
        if s > lo && s < hi {
            s
        } else {
            0.5 * (lo + hi)
        }
    } else {
        0.5 * (lo + hi)
    };
    if f(root).abs() > f_lo.abs().min(f_hi.abs()) {
        root = if f_lo.abs() < f_hi.abs() { lo } else { hi };
    }
    Ok(GammaPlus {
        value: root,
        regime,
        residual: f(root),
    })
}

/// Large-`κ` estimate `γ₊² ≈ η/(κ + (H₁/μ₁ + H₂/μ₂)/3)`.
pub fn gamma_plus_estimate(cfg: &StripConfig) -> f64 {
    let eta = cfg.params().eta;
    (eta / (cfg.kappa + (cfg.h1 / cfg.mu1 + cfg.h2 / cfg.mu2) / 3.0)).sqrt()
}

/// `∫₀^∞ ℓ(t)/t² dt` where `ℓ(t) = ln((t² + a t)/(t² + λ²))` exactly for
/// `t >= tail`, so `[tail, ∞)` is added in closed form.
fn log_moment<F>(log_kernel: F, curvature: f64, breaks: &[f64], tail: f64, a: f64, lambda: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let tiny = 1e-7 * breaks.iter().copied().fold(f64::INFINITY, f64::min);
    let integrand = |t: f64| {
        if t < tiny {
            curvature
        } else {
            log_kernel(t) / (t * t)
        }
    };
    let segs = partition(0.0, breaks, tail);
    let (body, _) = integrate_real(integrand, &segs, Tolerance::new(1e-12, 0.0))?;
    let u = 1.0 / tail;
    let au = a * u;
    let lu = lambda * u;
    let growth = ((1.0 + au) * au.ln_1p() - au) / a;
    let pole = u * (lu * lu).ln_1p() - 2.0 * u + 2.0 * lu.atan() / lambda;
    Ok(body + growth - pole)
}

/// `α*` from the dimensionless kernel.
pub fn alpha_star(dp: &DimensionlessParams) -> Result<f64> {
    let h1 = 0.5 * (1.0 + dp.h_star);
    let h2 = 0.5 * (1.0 - dp.h_star);
    let cut = 200.0 * dp.lambda_star.max(1.0);
    let tail = cut.max(20.0 / h1.min(h2));
    let a = dp.inf_coeff();
    log_moment(
        |t| log_xi_star_star(t, dp),
        log_xi_star_star_curvature(dp),
        &[1.0, dp.lambda_star, 1.0 / h1, 1.0 / h2, a],
        tail,
        a,
        dp.lambda_star,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Alpha {
    /// `∫₀^∞ ln Ξ*(t)/t² dt` (m).
    pub alpha: f64,
    /// `α/H`.
    pub alpha_star: f64,
}

/// `α` in physical units.
pub fn alpha_integral(cfg: &StripConfig, settings: &FactorizationSettings) -> Result<Alpha> {
    cfg.validate()?;
    let p = cfg.params();
    let h = cfg.h_total();
    let tail = (settings.tail_cutoff / h).max(20.0 / cfg.h1.min(cfg.h2));
    let alpha = log_moment(
        |t| log_xi_star(t, cfg),
        log_xi_star_curvature(cfg),
        &[1.0 / h, p.lambda, 1.0 / cfg.h1, 1.0 / cfg.h2, p.inf_coeff],
        tail,
        p.inf_coeff,
        p.lambda,
    )?;
    Ok(Alpha {
        alpha,
        alpha_star: alpha / h,
    })
}

/// `α_I = -(α*/π + 1/λ*)`.
pub fn alpha_imperfect(dp: &DimensionlessParams) -> Result<f64> {
    Ok(-(alpha_star(dp)? / PI + 1.0 / dp.lambda_star))
}

const PERFECT_SERIES_RADIUS: f64 = 0.01;

/// Integrand of the perfect-bond constant,
/// `(H* - tanh(tH*)coth t)/((sinh t + μ* sinh(tH*)) t)`.
fn perfect_integrand(t: f64, mu: f64, h: f64) -> f64 {
    if t < PERFECT_SERIES_RADIUS {
        let (h2, u) = (h * h, t * t);
        let a = [
            1.0,
            -h2 / 3.0,
            2.0 * h2 * h2 / 15.0,
            -17.0 * h2 * h2 * h2 / 315.0,
            62.0 * h2.powi(4) / 2835.0,
        ];
        let b = [1.0, 1.0 / 3.0, -1.0 / 45.0, 2.0 / 945.0, -1.0 / 4725.0];
        let mut p = [0.0; 5];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate().take(5 - i) {
                p[i + j] += ai * bj;
            }
        }
        let num = -h * (p[1] + u * (p[2] + u * (p[3] + u * p[4])));
        let mut den = 0.0;
        let mut fact = 1.0;
        let mut upow = 1.0;
        for k in 0..5 {
            if k > 0 {
                fact *= ((2 * k) * (2 * k + 1)) as f64;
            }
            den += (1.0 + mu * h.powi(2 * k as i32 + 1)) * upow / fact;
            upow *= u;
        }
        num / den
    } else {
        (h - (t * h).tanh() / t.tanh()) / ((t.sinh() + mu * (t * h).sinh()) * t)
    }
}

/// Perfect-interface counterpart `α_P(μ*, H*)` of `α_I`.
pub fn alpha_perfect_at(mu_star: f64, h_star: f64) -> Result<f64> {
    check_contrast("mu_star", mu_star)?;
    check_contrast("h_star", h_star)?;
    let p = 0.5 * (1.0 + h_star);
    let q = 0.5 * (1.0 - h_star);
    let closed = (p * p.ln() + q * q.ln()) / PI;
    if mu_star == 0.0 || h_star == 0.0 {
        return Ok(closed);
    }
    let segs = partition(0.0, &[PERFECT_SERIES_RADIUS, 1.0, 5.0, 20.0], 60.0);
    let (integral, _) = integrate_real(
        |t| perfect_integrand(t, mu_star, h_star),
        &segs,
        Tolerance::new(1e-13, 1e-15),
    )?;
    Ok(closed - mu_star / PI * integral)
}

pub fn alpha_perfect(dp: &DimensionlessParams) -> Result<f64> {
    alpha_perfect_at(dp.mu_star, dp.h_star)
}

/// All scalar constants of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticConstants {
    pub eta: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub alpha_star: f64,
    /// Far-field slopes `(C₁, C₂)` behind the tip.
    pub c: (f64, f64),
    /// Far-field offsets `(D₁, D₂)`.
    pub d: (f64, f64),
    /// Near-tip flux amplitude.
    pub a0: f64,
    pub gamma_plus: f64,
    pub gamma_regime: GammaRegime,
    pub gamma_minus: f64,
    pub alpha_i: f64,
    pub alpha_p: f64,
}

impl AsymptoticConstants {
    pub fn compute(cfg: &StripConfig, settings: &FactorizationSettings) -> Result<Self> {
        cfg.validate()?;
        let dp = nondimensionalize(cfg)?;
        let p = cfg.params();
        let alpha = alpha_integral(cfg, settings)?;
        let gp = gamma_plus(cfg)?;
        let c = (1.0 / (cfg.mu1 * cfg.h1), -1.0 / (cfg.mu2 * cfg.h2));
        let base = Self {
            eta: p.eta,
            lambda: p.lambda,
            alpha: alpha.alpha,
            alpha_star: alpha.alpha_star,
            c,
            d: (0.0, 0.0),
            a0: p.lambda,
            gamma_plus: gp.value,
            gamma_regime: gp.regime,
            gamma_minus: PI / cfg.h1.max(cfg.h2),
            alpha_i: 0.0,
            alpha_p: alpha_perfect(&dp)?,
        };
        Ok(base.with_lambda(p.lambda, cfg.h_total()))
    }

    /// Recomputes every `λ`-dependent entry from the supplied `λ`.
    pub fn with_lambda(mut self, lambda: f64, h_total: f64) -> Self {
        self.lambda = lambda;
        self.a0 = lambda;
        let k = self.opening_to_jump();
        self.d = (-self.c.0 * k, -self.c.1 * k);
        self.alpha_i = -k / h_total;
        self
    }

    /// `α/π + 1/λ`.
    pub fn opening_to_jump(&self) -> f64 {
        self.alpha / PI + 1.0 / self.lambda
    }
}

/// Coupling constants of the first-order junction conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JunctionCoefficients {
    pub opening_to_jump: f64,
    pub weight2: f64,
    pub weight3: f64,
    pub tip_amplitude_factor: f64,
    /// `-(α/π + 1/λ)/H`, equal to `α_I`.
    pub alpha_i_normalized: f64,
}

impl JunctionCoefficients {
    pub fn new(cfg: &StripConfig, k: &AsymptoticConstants) -> Self {
        let (p, q) = (cfg.mu1 * cfg.h1, cfg.mu2 * cfg.h2);
        let ojump = k.opening_to_jump();
        Self {
            opening_to_jump: ojump,
            weight2: q / (p + q),
            weight3: p / (p + q),
            tip_amplitude_factor: 1.0 / (cfg.kappa * k.lambda),
            alpha_i_normalized: -ojump / cfg.h_total(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionMatrix {
    pub m: Matrix4<f64>,
    pub det: f64,
    /// `-μ₁²μ₂²H₁²H₂²(C₁ - C₂)²`.
    pub det_closed_form: f64,
}

pub fn junction_matrix(cfg: &StripConfig, k: &AsymptoticConstants) -> JunctionMatrix {
    let (p, q) = (cfg.mu1 * cfg.h1, cfg.mu2 * cfg.h2);
    let (c1, c2) = k.c;
    let (d1, d2) = k.d;
    #[rustfmt::skip]
    let m = Matrix4::new(
        p,      q,      0.0,     0.0,
        0.0,    0.0,    p,       q,
        p * d1, q * d2, -p * c1, -q * c2,
        p * c1, q * c2, 0.0,     0.0,
    );
    JunctionMatrix {
        m,
        det: m.determinant(),
        det_closed_form: -(p * q * (c1 - c2)).powi(2),
    }
}

/// First-order end values across a junction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JunctionUpdate {
    pub v2: f64,
    pub v3: f64,
    pub tip_amplitude: f64,
}

/// First-order junction values from the zero-order slope jump
/// `Δ = (v₂⁽⁰⁾)' - (v₃⁽⁰⁾)'` and the first-order value `v₄⁽¹⁾`.
pub fn junction_apply(
    delta_v_prime: f64,
    v4_first: f64,
    cfg: &StripConfig,
    k: &AsymptoticConstants,
) -> JunctionUpdate {
    let j = JunctionCoefficients::new(cfg, k);
    let shift = j.opening_to_jump * delta_v_prime;
    JunctionUpdate {
        v2: v4_first - j.weight2 * shift,
        v3: v4_first + j.weight3 * shift,
        tip_amplitude: delta_v_prime * j.tip_amplitude_factor,
    }
}

/// Zero-order end values and slopes on the three branches.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ZeroOrder {
    pub v2: f64,
    pub v3: f64,
    pub v4: f64,
    pub dv2: f64,
    pub dv3: f64,
    pub dv4: f64,
}

/// `[v₂ - v₄, v₃ - v₄, (μ₁H₁+μ₂H₂)v₄' - μ₁H₁v₂' - μ₂H₂v₃']`; all vanish for
/// admissible zero-order data.
pub fn zero_order_residuals(cfg: &StripConfig, z: &ZeroOrder) -> [f64; 3] {
    let (p, q) = (cfg.mu1 * cfg.h1, cfg.mu2 * cfg.h2);
    [z.v2 - z.v4, z.v3 - z.v4, (p + q) * z.dv4 - p * z.dv2 - q * z.dv3]
}

/// Right-hand side of the first-order system `M E⁽¹⁾ = r`; a boundary layer
/// that vanishes far from the tip requires `r = 0`.
pub fn first_order_rhs(
    cfg: &StripConfig,
    k: &AsymptoticConstants,
    z: &ZeroOrder,
    v4_first: f64,
    update: &JunctionUpdate,
) -> [f64; 4] {
    let (p, q) = (cfg.mu1 * cfg.h1, cfg.mu2 * cfg.h2);
    let (c1, c2) = k.c;
    let (d1, d2) = k.d;
    [
        (p + q) * z.dv4 - p * z.dv2 - q * z.dv3,
        (p + q) * v4_first - p * update.v2 - q * update.v3,
        p * c1 * update.v2 + q * c2 * update.v3 - p * d1 * z.dv2 - q * d2 * z.dv3,
        cfg.kappa * k.a0 * update.tip_amplitude - p * c1 * z.dv2 - q * c2 * z.dv3,
    ]
}

/// Leading behaviour of the tip jump and flux as `κ → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularLimits {
    /// `√(ηκ)`.
    pub jump_estimate: f64,
    /// `-√(η/κ)`.
    pub flux_estimate: f64,
    /// `κλ / √(ηκ)`.
    pub ratio: f64,
}

pub fn singular_limits(cfg: &StripConfig) -> Result<SingularLimits> {
    cfg.validate()?;
    let p = cfg.params();
    let jump = (p.eta * cfg.kappa).sqrt();
    Ok(SingularLimits {
        jump_estimate: jump,
        flux_estimate: -(p.eta / cfg.kappa).sqrt(),
        ratio: cfg.kappa * p.lambda / jump,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn settings(cfg: &StripConfig) -> FactorizationSettings {
        FactorizationSettings::for_config(cfg)
    }

    #[test]
    fn gamma_plus_perfect_symmetric() {
        let cfg = StripConfig::symmetric(0.0);
        let g = gamma_plus(&cfg).unwrap();
        assert!((g.value - PI / 2.0).abs() < 1e-12);
        assert_eq!(g.regime, GammaRegime::Walk);
    }

    #[test]
    fn gamma_plus_perfect_lies_between_layer_values() {
        let cfg = StripConfig {
            h1: 0.1,
            h2: 0.05,
            mu1: 26e9,
            mu2: 82e9,
            kappa: 0.0,
        };
        let g = gamma_plus(&cfg).unwrap().value;
        assert!(g > PI / (2.0 * 0.1) && g < PI / (2.0 * 0.05));
    }

    #[test]
    fn gamma_plus_stiff_spring_limit() {
        let dp = DimensionlessParams::new(0.0, 0.0, 1e4, 2.0).unwrap();
        let cfg = crate::kernel::dimensionalize(&dp, 2.0, 2.0).unwrap();
        let g = gamma_plus(&cfg).unwrap();
        assert_eq!(g.regime, GammaRegime::Halving);
        assert!((g.value / cfg.params().lambda - 1.0).abs() < 0.02);
        assert_relative_eq!(g.value, gamma_plus_estimate(&cfg), max_relative = 1e-4);
    }

    #[test]
    fn alpha_star_golden() {
        // Independent high-precision quadrature (60 digits, log1p form).
        let dp = DimensionlessParams::new(0.0, 0.0, 8.0, 1.0).unwrap();
        assert_relative_eq!(
            alpha_star(&dp).unwrap(),
            0.115_682_760_355_216_03,
            max_relative = 1e-9
        );
        let dp = DimensionlessParams::new(0.5, -0.25, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            alpha_star(&dp).unwrap(),
            0.321_592_956_382_988_49,
            max_relative = 1e-9
        );
    }

    #[test]
    fn alpha_imperfect_golden() {
        let dp = DimensionlessParams::new(0.2, -0.1, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            alpha_imperfect(&dp).unwrap(),
            -0.433_793_361_759_597_98,
            max_relative = 1e-9
        );
        let dp = DimensionlessParams::new(0.2, -0.1, 1e-6, 1.0).unwrap();
        assert_relative_eq!(
            alpha_imperfect(&dp).unwrap(),
            -0.223_493_477_712_648,
            max_relative = 1e-8
        );
    }

    #[test]
    fn alpha_scale_covariance() {
        let cfg = StripConfig::new(1.3, 0.6, 0.4, 0.9, 0.2).unwrap();
        let s = 3.0;
        let scaled = StripConfig {
            h1: s * cfg.h1,
            h2: s * cfg.h2,
            kappa: s * cfg.kappa,
            ..cfg
        };
        let a = alpha_integral(&cfg, &settings(&cfg)).unwrap();
        let b = alpha_integral(&scaled, &settings(&scaled)).unwrap();
        assert_relative_eq!(b.alpha, s * a.alpha, max_relative = 1e-10);
        assert_relative_eq!(b.alpha_star, a.alpha_star, max_relative = 1e-10);
    }

    #[test]
    fn alpha_perfect_values() {
        assert!((alpha_perfect_at(0.0, 0.0).unwrap() + 2f64.ln() / PI).abs() < 1e-12);
        // Gauss-Legendre at 50 digits.
        for (m, h, v) in [
            (0.4, 0.3, -0.185_975_941_688_962_39),
            (-0.4, -0.3, -0.185_975_941_688_962_39),
            (0.8, 0.8, -0.081_112_850_986_044_254),
            (-0.5, 0.9, -0.085_318_993_991_923_326),
            (0.5, 0.5, -0.150_836_199_877_746_95),
        ] {
            assert_relative_eq!(alpha_perfect_at(m, h).unwrap(), v, max_relative = 1e-10);
        }
        let h = 0.6;
        let p: f64 = 0.8;
        let q: f64 = 0.2;
        assert_relative_eq!(
            alpha_perfect_at(0.0, h).unwrap(),
            (p * p.ln() + q * q.ln()) / PI,
            max_relative = 1e-15
        );
    }

    #[test]
    fn perfect_series_meets_direct_form() {
        for (m, h) in [(0.4, 0.3), (-0.9, 0.95)] {
            let t = PERFECT_SERIES_RADIUS;
            let direct = (h - (t * h).tanh() / t.tanh()) / ((t.sinh() + m * (t * h).sinh()) * t);
            assert_relative_eq!(perfect_integrand(t * 0.999_999, m, h), direct, max_relative = 1e-7);
        }
    }

    #[test]
    fn symmetric_constants() {
        let cfg = StripConfig::symmetric(1.0);
        let k = AsymptoticConstants::compute(&cfg, &settings(&cfg)).unwrap();
        assert_eq!(k.c, (1.0, -1.0));
        let m = junction_matrix(&cfg, &k);
        assert_relative_eq!(m.det, -4.0, max_relative = 1e-12);
        assert_relative_eq!(m.det_closed_form, -4.0);
        assert_relative_eq!(k.gamma_minus, PI);
    }

    #[test]
    fn resin_cell_gamma_minus() {
        let cfg = StripConfig::new(26e9, 82e9, 0.1, 0.05, 0.01 / 2.5e9).unwrap();
        let k = AsymptoticConstants::compute(&cfg, &settings(&cfg)).unwrap();
        assert_relative_eq!(k.gamma_minus, 10.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn det_scales_quadratically_in_moduli() {
        let cfg = StripConfig::new(1.5, 0.7, 0.3, 0.8, 0.5).unwrap();
        let scaled = StripConfig {
            mu1: 2.0 * cfg.mu1,
            mu2: 2.0 * cfg.mu2,
            ..cfg
        };
        let a = junction_matrix(&cfg, &AsymptoticConstants::compute(&cfg, &settings(&cfg)).unwrap());
        let b = junction_matrix(
            &scaled,
            &AsymptoticConstants::compute(&scaled, &settings(&scaled)).unwrap(),
        );
        assert_relative_eq!(b.det, 4.0 * a.det, max_relative = 1e-10);
    }

    #[test]
    fn junction_zero_jump_and_linearity() {
        let cfg = StripConfig::new(1.5, 0.7, 0.3, 0.8, 0.5).unwrap();
        let k = AsymptoticConstants::compute(&cfg, &settings(&cfg)).unwrap();
        let u = junction_apply(0.0, 0.3, &cfg, &k);
        assert_eq!((u.v2, u.v3, u.tip_amplitude), (0.3, 0.3, 0.0));
        let a = junction_apply(0.2, 0.3, &cfg, &k);
        let b = junction_apply(0.4, 0.3, &cfg, &k);
        assert_relative_eq!(b.tip_amplitude, 2.0 * a.tip_amplitude, max_relative = 1e-15);
        let (p, q) = (cfg.mu1 * cfg.h1, cfg.mu2 * cfg.h2);
        assert_relative_eq!(p * a.v2 + q * a.v3, (p + q) * 0.3, max_relative = 1e-14);
    }

    #[test]
    fn junction_update_zeroes_first_order_rhs() {
        let cfg = StripConfig::new(1.5, 0.7, 0.3, 0.8, 0.5).unwrap();
        let k = AsymptoticConstants::compute(&cfg, &settings(&cfg)).unwrap();
        let (p, q) = (cfg.mu1 * cfg.h1, cfg.mu2 * cfg.h2);
        let z = ZeroOrder {
            v2: 1.0,
            v3: 1.0,
            v4: 1.0,
            dv2: 0.7,
            dv3: -0.2,
            dv4: (p * 0.7 - q * 0.2) / (p + q),
        };
        assert!(zero_order_residuals(&cfg, &z).iter().all(|r| r.abs() < 1e-15));
        let u = junction_apply(z.dv2 - z.dv3, -0.4, &cfg, &k);
        for r in first_order_rhs(&cfg, &k, &z, -0.4, &u) {
            assert!(r.abs() < 1e-13, "{r}");
        }
    }

    #[test]
    fn singular_limit_ratio_is_one() {
        // λ² = η/κ identically, so κλ = √(ηκ) for every configuration.
        let s = singular_limits(&StripConfig::symmetric(0.3)).unwrap();
        assert_relative_eq!(s.jump_estimate, (2.0f64 * 0.3).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(s.ratio, 1.0, max_relative = 1e-15);
        let cfg = StripConfig::new(26e9, 82e9, 0.1, 0.05, 4e-12).unwrap();
        let s = singular_limits(&cfg).unwrap();
        assert_relative_eq!(s.ratio, 1.0, max_relative = 1e-14);
        assert_relative_eq!(s.flux_estimate, -cfg.params().lambda, max_relative = 1e-14);
        assert!(singular_limits(&StripConfig::symmetric(0.0)).is_err());
    }

    fn config() -> impl Strategy<Value = StripConfig> {
        (0.2f64..5.0, 0.2f64..5.0, 0.2f64..3.0, 0.2f64..3.0, 1e-2f64..10.0)
            .prop_map(|(m1, m2, h1, h2, k)| StripConfig::new(m1, m2, h1, h2, k).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn constant_identities(cfg in config()) {
            let k = AsymptoticConstants::compute(&cfg, &settings(&cfg)).unwrap();
            let (p, q) = (cfg.mu1 * cfg.h1, cfg.mu2 * cfg.h2);
            // p·(1/p) rounds to within one ulp of 1.
            prop_assert!((p * k.c.0 + q * k.c.1).abs() <= 2.0 * f64::EPSILON);
            let ojump = k.alpha / PI + 1.0 / k.lambda;
            prop_assert!((k.d.0 / k.c.0 + ojump).abs() <= 1e-14 * ojump);
            prop_assert!((k.d.1 / k.c.1 + ojump).abs() <= 1e-14 * ojump);
            prop_assert_eq!(k.a0, k.lambda);
            let m = junction_matrix(&cfg, &k);
            prop_assert!(m.det < 0.0);
            prop_assert!((m.det - m.det_closed_form).abs() <= 1e-10 * m.det_closed_form.abs());
            let j = JunctionCoefficients::new(&cfg, &k);
            prop_assert!((j.weight2 + j.weight3 - 1.0).abs() < 1e-15);
            prop_assert_eq!(j.alpha_i_normalized, k.alpha_i);
        }

        #[test]
        fn alpha_two_routes_agree(cfg in config()) {
            let dp = nondimensionalize(&cfg).unwrap();
            let phys = alpha_integral(&cfg, &settings(&cfg)).unwrap();
            let dimless = alpha_star(&dp).unwrap();
            prop_assert!((phys.alpha_star - dimless).abs() <= 1e-10 * dimless.abs());
        }

        #[test]
        fn gamma_plus_is_first_root(cfg in config()) {
            let g = gamma_plus(&cfg).unwrap();
            prop_assert!(g.residual.abs() < 1e-9 * (1.0 / cfg.mu1 + 1.0 / cfg.mu2));
            for i in 1..200 {
                let x = g.value * i as f64 / 200.0;
                prop_assert!(gamma_equation(x, &cfg) > 0.0);
            }
        }

        #[test]
        fn swap_symmetry(m in -0.9f64..0.9, h in -0.9f64..0.9, ks in 1e-3f64..1e2) {
            let a = DimensionlessParams::new(m, h, ks, 1.0).unwrap();
            let b = DimensionlessParams::new(-m, -h, ks, 1.0).unwrap();
            let (ia, ib) = (alpha_imperfect(&a).unwrap(), alpha_imperfect(&b).unwrap());
            prop_assert!((ia - ib).abs() <= 1e-10 * ia.abs());
            let (pa, pb) = (alpha_perfect(&a).unwrap(), alpha_perfect(&b).unwrap());
            prop_assert!((pa - pb).abs() <= 1e-10 * pa.abs());
        }
    }
}
