//! Weight-function field from its Fourier transform.
//!
//! The inverse transform runs along `Im ξ = -β₀` for `|Re ξ| <= s₀` and then
//! along rays tilted into the half-plane where `e^{-iξX}` decays: downwards
//! for `X > 0` and upwards for `X < 0`. Every singularity of the transforms
//! sits on the imaginary axis, so the tilt never crosses one.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::gamma_plus;
use crate::error::{Error, Result};
use crate::factorize::Factorization;
use crate::kernel::{eval_kernel, StripConfig};
use crate::quad::{integrate, Segment, Tolerance};
use crate::special::{cosh_ratio, sinh_ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    /// `0 <= Y <= H₁`.
    Upper,
    /// `-H₂ <= Y <= 0`.
    Lower,
}

impl Layer {
    /// Upper for `y >= 0`, so `y = 0` means the trace from above.
    pub fn of(y: f64) -> Self {
        if y >= 0.0 {
            Layer::Upper
        } else {
            Layer::Lower
        }
    }
}

/// What to reconstruct at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `𝒴_j`.
    Value,
    /// `μ_j ∂𝒴_j/∂Y`.
    Flux,
}

/// Closed-form transforms of the weight function with normalisation `κλ`.
#[derive(Debug, Clone, Copy)]
pub struct TransformPair<'a> {
    fact: &'a Factorization,
    lambda: f64,
    gamma_plus: f64,
    gamma_minus: f64,
}

/// `Φ±` and the interface traces `𝒴̄₁(ξ, 0⁺)`, `𝒴̄₂(ξ, 0⁻)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transforms {
    pub phi_plus: Complex64,
    pub phi_minus: Complex64,
    pub ybar1: Complex64,
    pub ybar2: Complex64,
}

impl<'a> TransformPair<'a> {
    pub fn new(fact: &'a Factorization) -> Result<Self> {
        let cfg = fact.config();
        Ok(Self {
            fact,
            lambda: fact.params().lambda,
            gamma_plus: gamma_plus(cfg)?.value,
            gamma_minus: PI / cfg.h1.max(cfg.h2),
        })
    }

    pub fn config(&self) -> &StripConfig {
        self.fact.config()
    }

    pub fn gamma_plus(&self) -> f64 {
        self.gamma_plus
    }

    fn check_strip(&self, xi: Complex64) -> Result<()> {
        if xi == Complex64::new(0.0, 0.0) {
            return Err(Error::domain("transforms", "double pole at xi = 0"));
        }
        if !(xi.im > -self.gamma_plus && xi.im < self.gamma_minus) {
            return Err(Error::domain(
                "transforms",
                format!(
                    "xi = {xi} outside the strip {:.6e} < Im xi < {:.6e}",
                    -self.gamma_plus, self.gamma_minus
                ),
            ));
        }
        Ok(())
    }

    /// `Φ⁺` without the strip check; valid wherever it is analytic.
    fn phi_plus_unchecked(&self, xi: Complex64) -> Result<Complex64> {
        let lam = self.lambda;
        let i = Complex64::i();
        if xi.im >= 0.0 {
            Ok(-lam / ((lam - i * xi) * self.fact.factor_plus(xi)?))
        } else {
            let cfg = self.fact.config();
            let mirrored = self.fact.factor_plus(-xi)?;
            Ok(-cfg.kappa * lam * (lam + i * xi) * mirrored / (xi * xi * eval_kernel(xi, cfg)?))
        }
    }

    /// `Φ⁺`, analytic for `Im ξ > -γ₊`.
    pub fn phi_plus(&self, xi: Complex64) -> Result<Complex64> {
        if xi == Complex64::new(0.0, 0.0) || !(xi.im > -self.gamma_plus) {
            return Err(Error::domain(
                "phi_plus",
                format!("xi = {xi} is not in Im xi > {:.6e} minus the origin", -self.gamma_plus),
            ));
        }
        self.phi_plus_unchecked(xi)
    }

    pub fn phi_minus(&self, xi: Complex64) -> Result<Complex64> {
        self.check_strip(xi)?;
        let cfg = self.fact.config();
        let lam = self.lambda;
        let minus = if xi.im <= 0.0 {
            self.fact.factor_plus(-xi)?
        } else {
            self.fact.factor_plus_continued(-xi)?
        };
        Ok(cfg.kappa * lam * (lam + Complex64::i() * xi) * minus / (xi * xi))
    }

    fn shape(&self, xi: Complex64, y: f64, layer: Layer, qty: Quantity) -> Complex64 {
        let cfg = self.fact.config();
        match (layer, qty) {
            (Layer::Upper, Quantity::Value) => {
                -cosh_ratio(xi * cfg.h1, 1.0 - y / cfg.h1) / (cfg.mu1 * xi)
            }
            (Layer::Lower, Quantity::Value) => {
                cosh_ratio(xi * cfg.h2, 1.0 + y / cfg.h2) / (cfg.mu2 * xi)
            }
            (Layer::Upper, Quantity::Flux) => sinh_ratio(xi * cfg.h1, 1.0 - y / cfg.h1),
            (Layer::Lower, Quantity::Flux) => sinh_ratio(xi * cfg.h2, 1.0 + y / cfg.h2),
        }
    }

    fn check_depth(&self, y: f64, layer: Layer) -> Result<()> {
        let cfg = self.fact.config();
        let ok = match layer {
            Layer::Upper => (0.0..=cfg.h1).contains(&y),
            Layer::Lower => (-cfg.h2..=0.0).contains(&y),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("y", format!("{y} is outside the {layer:?} layer")))
        }
    }

    /// `𝒴̄_j(ξ, Y)`.
    pub fn ybar(&self, xi: Complex64, y: f64, layer: Layer) -> Result<Complex64> {
        self.check_depth(y, layer)?;
        Ok(self.phi_plus(xi)? * self.shape(xi, y, layer, Quantity::Value))
    }

    /// Transform of `μ_j ∂𝒴_j/∂Y`.
    pub fn flux_bar(&self, xi: Complex64, y: f64, layer: Layer) -> Result<Complex64> {
        self.check_depth(y, layer)?;
        Ok(self.phi_plus(xi)? * self.shape(xi, y, layer, Quantity::Flux))
    }

    /// Reconstructs one quantity at `(x, y)` by contour integration.
    pub fn invert(
        &self,
        x: f64,
        y: f64,
        layer: Layer,
        qty: Quantity,
        settings: &FieldSettings,
    ) -> Result<PointValue> {
        let beta = settings.beta.unwrap_or_else(|| self.default_beta(x, settings));
        self.invert_with_beta(x, y, layer, qty, beta, settings)
    }

    fn default_beta(&self, x: f64, settings: &FieldSettings) -> f64 {
        let b = settings.beta_fraction * self.gamma_plus;
        if x < 0.0 {
            b.min(1.0 / x.abs())
        } else {
            b
        }
    }

    pub fn invert_with_beta(
        &self,
        x: f64,
        y: f64,
        layer: Layer,
        qty: Quantity,
        beta: f64,
        settings: &FieldSettings,
    ) -> Result<PointValue> {
        self.check_depth(y, layer)?;
        if !(beta > 0.0 && beta < self.gamma_plus) {
            return Err(Error::invalid(
                "beta",
                format!("contour offset must lie in (0, {:.6e}), got {beta}", self.gamma_plus),
            ));
        }
        let cfg = self.fact.config();
        let tau = settings.tilt;
        let sigma = if x > 0.0 {
            -1.0
        } else if x < 0.0 {
            1.0
        } else {
            0.0
        };
        let decay = tau * x.abs() + y.abs();
        if decay == 0.0 {
            return Err(Error::domain("invert", "the crack tip itself is excluded"));
        }
        let s0 = 1.0 / cfg.h1.min(cfg.h2);
        let s_max = s0 + 38.0 / decay;
        let width = if x == 0.0 { f64::INFINITY } else { PI / x.abs() };

        let contour = |s: f64| -> (Complex64, Complex64) {
            let over = s.abs() - s0;
            if over > 0.0 {
                let lift = sigma * tau;
                (
                    Complex64::new(s, -beta + lift * over),
                    Complex64::new(1.0, lift * s.signum()),
                )
            } else {
                (Complex64::new(s, -beta), Complex64::new(1.0, 0.0))
            }
        };

        let mut failure = None;
        let integrand = |s: f64| {
            let (xi, dxi) = contour(s);
            match self.phi_plus_unchecked(xi) {
                Ok(phi) => {
                    let w = (-Complex64::i() * xi * x).exp();
                    w * phi * self.shape(xi, y, layer, qty) * dxi / (2.0 * PI)
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        };

        let segs = contour_segments(s0, s_max, width);
        let scale = match qty {
            Quantity::Value => (cfg.kappa * self.lambda)
                .max(cfg.h_total() / (cfg.mu1 * cfg.h1).min(cfg.mu2 * cfg.h2)),
            Quantity::Flux => self.lambda,
        };
        let tol = Tolerance::new(
            settings.quad_tol,
            1e-4 * settings.quad_tol * scale * (-beta * x).exp(),
        )
        .with_limit(20_000);
        let est = integrate(integrand, &segs, tol)?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(PointValue {
            value: est.value.re,
            imag: est.value.im,
            error: est.error,
            beta,
            truncation: s_max,
        })
    }
}

fn contour_segments(s0: f64, s_max: f64, width: f64) -> Vec<Segment> {
    let mut ray = vec![s0];
    let mut p = s0;
    while p < s_max {
        p = (p + width).min(2.0 * p).min(s_max);
        ray.push(p);
    }
    let mut flat = vec![0.0];
    let mut q = 0.0;
    while q < s0 {
        q = (q + width).min(s0);
        flat.push(q);
    }
    let mut segs = Vec::with_capacity(2 * (ray.len() + flat.len()));
    for w in ray.windows(2).rev() {
        segs.push(Segment::Linear { a: -w[1], b: -w[0] });
    }
    for w in flat.windows(2).rev() {
        segs.push(Segment::Linear { a: -w[1], b: -w[0] });
    }
    for w in flat.windows(2) {
        segs.push(Segment::Linear { a: w[0], b: w[1] });
    }
    for w in ray.windows(2) {
        segs.push(Segment::Linear { a: w[0], b: w[1] });
    }
    segs
}

/// `Φ±` and the interface traces of `𝒴̄_j`, for `-γ₊ < Im ξ < γ₋`.
pub fn eval_transforms(xi: Complex64, fact: &Factorization) -> Result<Transforms> {
    let pair = TransformPair::new(fact)?;
    pair.check_strip(xi)?;
    let phi_plus = pair.phi_plus(xi)?;
    Ok(Transforms {
        phi_plus,
        phi_minus: pair.phi_minus(xi)?,
        ybar1: phi_plus * pair.shape(xi, 0.0, Layer::Upper, Quantity::Value),
        ybar2: phi_plus * pair.shape(xi, 0.0, Layer::Lower, Quantity::Value),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSettings {
    pub quad_tol: f64,
    /// Contour offset as a fraction of `γ₊` when `beta` is unset.
    pub beta_fraction: f64,
    /// Fixed contour offset (1/m).
    pub beta: Option<f64>,
    /// Slope of the tilted rays.
    pub tilt: f64,
    /// Radius of the excluded disc around the tip (m).
    pub r_min: Option<f64>,
}

impl Default for FieldSettings {
    fn default() -> Self {
        Self {
            quad_tol: 1e-8,
            beta_fraction: 0.5,
            beta: None,
            tilt: 1.0,
            r_min: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointValue {
    pub value: f64,
    /// Imaginary part of the computed integral; zero up to quadrature error.
    pub imag: f64,
    pub error: f64,
    pub beta: f64,
    pub truncation: f64,
}

/// `𝒴_j` on a set of points with per-point contour metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSample {
    pub grid: Vec<(f64, f64)>,
    pub values: Vec<f64>,
    pub contour_offset: Vec<f64>,
    pub truncation: Vec<f64>,
    pub error_estimate: Vec<f64>,
}

/// Inverts the transform at every point. `Y = 0` is read as the trace from
/// the upper layer.
pub fn invert_field(
    points: &[(f64, f64)],
    fact: &Factorization,
    settings: &FieldSettings,
) -> Result<FieldSample> {
    let pair = TransformPair::new(fact)?;
    let cfg = fact.config();
    let r_min = settings.r_min.unwrap_or(1e-3 * cfg.h1.min(cfg.h2));
    let mut out = FieldSample {
        grid: Vec::with_capacity(points.len()),
        values: Vec::with_capacity(points.len()),
        contour_offset: Vec::with_capacity(points.len()),
        truncation: Vec::with_capacity(points.len()),
        error_estimate: Vec::with_capacity(points.len()),
    };
    for &(x, y) in points {
        if x.hypot(y) < r_min {
            return Err(Error::invalid(
                "points",
                format!("({x}, {y}) lies inside the tip exclusion radius {r_min:e}"),
            ));
        }
        let p = pair.invert(x, y, Layer::of(y), Quantity::Value, settings)?;
        out.grid.push((x, y));
        out.values.push(p.value);
        out.contour_offset.push(p.beta);
        out.truncation.push(p.truncation);
        out.error_estimate.push(p.error + p.imag.abs());
    }
    Ok(out)
}

fn fit_basis(xs: &[f64], ys: &[f64], basis: &[fn(f64) -> f64]) -> Result<Vec<f64>> {
    let n = xs.len();
    if n < basis.len() || ys.len() != n {
        return Err(Error::Extrapolation(format!(
            "need at least {} samples, got {n}",
            basis.len()
        )));
    }
    let a = DMatrix::from_fn(n, basis.len(), |i, j| basis[j](xs[i]));
    let b = DVector::from_column_slice(ys);
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Extrapolation(e.to_string()))?;
    if sol.iter().any(|c| !c.is_finite()) {
        return Err(Error::Extrapolation("non-finite fit coefficients".into()));
    }
    Ok(sol.iter().copied().collect())
}

const TIP_BASIS: [fn(f64) -> f64; 3] = [|_| 1.0, |x| x * x.abs().ln(), |x| x];

/// Least-squares fit of `f(x) = f₀ + b x ln|x| + c x`.
pub fn fit_tip_expansion(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let c = fit_basis(xs, ys, &TIP_BASIS)?;
    Ok((c[0], c[1], c[2]))
}

/// Least-squares line `y = slope·x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn rel(measured: f64, target: f64) -> f64 {
    ((measured - target) / target).abs()
}

/// Tip behaviour measured from the reconstructed field.
#[derive(Debug, Clone, Serialize)]
pub struct NearTipReport {
    pub flux_limit: f64,
    pub flux_target: f64,
    pub flux_rel_dev: f64,
    /// Jump `𝒴₁(X,0⁺) - 𝒴₂(X,0⁻)` extrapolated along the crack faces.
    pub jump_limit: f64,
    /// The same limit taken ahead of the tip.
    pub jump_limit_ahead: f64,
    pub jump_target: f64,
    pub jump_rel_dev: f64,
    /// Fitted `𝒴₁(0⁺, 0)`.
    pub tip_value: f64,
    /// `-κλμ₂/(μ₁+μ₂)` from the published near-tip expansion; compared, not
    /// asserted.
    pub tip_value_expected: f64,
    /// Fitted coefficient of `X ln X` in `𝒴₁(X, 0)`.
    pub log_coeff: f64,
    /// `λ/(πμ₁)` from the published near-tip expansion.
    pub log_coeff_expected: f64,
    /// Length scale of the logarithmic term, from the fitted `X` coefficient.
    pub b0: f64,
    pub sample_x: Vec<f64>,
}

/// Extrapolates tip flux, jump and near-tip value of `𝒴₁` from samples at
/// small `|X|`.
pub fn near_tip_check(fact: &Factorization, settings: &FieldSettings) -> Result<NearTipReport> {
    let pair = TransformPair::new(fact)?;
    let cfg = *fact.config();
    let p = fact.params();
    let ell = cfg.h1.min(cfg.h2).min(1.0 / p.lambda).min(1.0 / p.inf_coeff);
    let xs: Vec<f64> = (0..6).map(|k| ell * 1e-3 * 2f64.powi(k)).collect();

    let at = |x: f64, layer: Layer, qty: Quantity| -> Result<f64> {
        Ok(pair.invert(x, 0.0, layer, qty, settings)?.value)
    };
    let mut flux = Vec::with_capacity(xs.len());
    let mut upper = Vec::with_capacity(xs.len());
    let mut jump_ahead = Vec::with_capacity(xs.len());
    let mut jump_behind = Vec::with_capacity(xs.len());
    for &x in &xs {
        flux.push(at(x, Layer::Upper, Quantity::Flux)?);
        let y1 = at(x, Layer::Upper, Quantity::Value)?;
        upper.push(y1);
        jump_ahead.push(y1 - at(x, Layer::Lower, Quantity::Value)?);
        jump_behind.push(at(-x, Layer::Upper, Quantity::Value)? - at(-x, Layer::Lower, Quantity::Value)?);
    }
    let neg: Vec<f64> = xs.iter().map(|x| -x).collect();

    let (flux_limit, _, _) = fit_tip_expansion(&xs, &flux)?;
    let (jump_limit_ahead, _, _) = fit_tip_expansion(&xs, &jump_ahead)?;
    let (jump_limit, _, _) = fit_tip_expansion(&neg, &jump_behind)?;
    let (tip_value, log_coeff, lin) = fit_tip_expansion(&xs, &upper)?;

    let lam = p.lambda;
    let jump_target = -cfg.kappa * lam;
    // 𝒴₁(X,0) ≈ 𝒴₁(0⁺,0) + b(X ln X - (1 + ln b₀)X), with b the fitted
    // log coefficient.
    let b0 = (-lin / log_coeff - 1.0).exp();
    Ok(NearTipReport {
        flux_limit,
        flux_target: -lam,
        flux_rel_dev: rel(flux_limit, -lam),
        jump_limit,
        jump_limit_ahead,
        jump_target,
        jump_rel_dev: rel(jump_limit, jump_target),
        tip_value,
        tip_value_expected: jump_target * cfg.mu2 / (cfg.mu1 + cfg.mu2),
        log_coeff,
        log_coeff_expected: lam / (PI * cfg.mu1),
        b0,
        sample_x: xs,
    })
}

/// Far-field behaviour of `𝒴₁(X, H₁/2)` on both sides of the tip.
#[derive(Debug, Clone, Serialize)]
pub struct FarFieldReport {
    pub slope: f64,
    pub slope_target: f64,
    pub slope_rel_dev: f64,
    pub intercept: f64,
    pub intercept_target: f64,
    pub intercept_rel_dev: f64,
    pub decay_rate: f64,
    pub decay_target: f64,
    pub decay_rel_dev: f64,
}

/// Fits `C₁X + D₁` over `X ∈ [-30H, -20H]` and the decay rate of `|𝒴₁|` over
/// `X ∈ [10H, 20H]`.
pub fn far_field_check(
    fact: &Factorization,
    settings: &FieldSettings,
    c1: f64,
    d1: f64,
) -> Result<FarFieldReport> {
    let pair = TransformPair::new(fact)?;
    let cfg = fact.config();
    let h = cfg.h_total();
    let y = 0.5 * cfg.h1;

    let behind: Vec<f64> = (0..6).map(|k| -30.0 * h + 2.0 * h * k as f64).collect();
    let mut vals = Vec::with_capacity(behind.len());
    for &x in &behind {
        vals.push(pair.invert(x, y, Layer::Upper, Quantity::Value, settings)?.value);
    }
    let (slope, intercept) = fit_line(&behind, &vals);

    let decay_settings = FieldSettings {
        beta_fraction: 0.8,
        ..*settings
    };
    let ahead: Vec<f64> = (0..6).map(|k| 10.0 * h + 2.0 * h * k as f64).collect();
    let mut logs = Vec::with_capacity(ahead.len());
    for &x in &ahead {
        let v = pair.invert(x, y, Layer::Upper, Quantity::Value, &decay_settings)?;
        logs.push(v.value.abs().ln());
    }
    let (log_slope, _) = fit_line(&ahead, &logs);
    let gp = pair.gamma_plus();
    Ok(FarFieldReport {
        slope,
        slope_target: c1,
        slope_rel_dev: rel(slope, c1),
        intercept,
        intercept_target: d1,
        intercept_rel_dev: rel(intercept, d1),
        decay_rate: -log_slope,
        decay_target: gp,
        decay_rel_dev: rel(-log_slope, gp),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeLimitReport {
    pub limit: Complex64,
    /// `-i a₁`.
    pub expected: Complex64,
    pub rel_dev: f64,
    /// `f(x)` at the negative probe point.
    pub negative_value: Complex64,
    pub negative_x: f64,
    pub samples: Vec<(f64, Complex64)>,
}

/// Numerically inverts a `+` transform `Φ(t) = a₁/t + O(t^{-1-δ})` along the
/// real axis, `f(x) = (1/2π)∫ Φ(t) e^{-ixt} dt`, and extrapolates `f(0⁺)`.
///
/// `length` is the natural length of `Φ`; samples are taken at
/// `x ∈ length·[0.00625, 0.2]` and the negative probe at `x = -length`. The
/// leading term is removed through `a₁/(t + 2i/length)`, whose inverse is
/// `-i a₁ e^{-2x/length}` for `x > 0` and zero otherwise.
pub fn edge_limit_oracle<F>(a1: Complex64, transform: F, length: f64) -> Result<EdgeLimitReport>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let c = 2.0 / length;
    let shift = Complex64::new(0.0, c);
    let remainder = |t: f64| -> Result<Complex64> { Ok(transform(t)? - a1 / (t + shift)) };
    let leading = |x: f64| {
        if x > 0.0 {
            -Complex64::i() * a1 * (-c * x).exp()
        } else {
            Complex64::new(0.0, 0.0)
        }
    };

    let invert = |x: f64, span: f64| -> Result<Complex64> {
        let mut failure = None;
        let mut eval = |t: f64| match remainder(t) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        };
        let integrand = |t: f64| {
            let e = Complex64::new(0.0, -x * t).exp();
            eval(t) * e + eval(-t) * e.conj()
        };
        let width = PI / x.abs();
        let mut pts = vec![0.0];
        let mut p = 0.0f64;
        while p < span {
            p = (p + width).min(if p > 0.0 { 2.0 * p } else { length }).min(span);
            pts.push(p);
        }
        let segs: Vec<Segment> = pts
            .windows(2)
            .map(|w| Segment::Linear { a: w[0], b: w[1] })
            .collect();
        let est = integrate(
            integrand,
            &segs,
            Tolerance::new(1e-9, 1e-10 * a1.norm()).with_limit(50_000),
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(est.value / (2.0 * PI) + leading(x))
    };

    let xs: Vec<f64> = (0..6).map(|k| length * 0.00625 * 2f64.powi(k)).collect();
    let mut samples = Vec::with_capacity(xs.len());
    for &x in &xs {
        samples.push((x, invert(x, 1e4 * length)?));
    }
    let basis: [fn(f64) -> f64; 4] = [TIP_BASIS[0], TIP_BASIS[1], TIP_BASIS[2], |x| x * x];
    let re: Vec<f64> = samples.iter().map(|s| s.1.re).collect();
    let im: Vec<f64> = samples.iter().map(|s| s.1.im).collect();
    let limit = Complex64::new(fit_basis(&xs, &re, &basis)?[0], fit_basis(&xs, &im, &basis)?[0]);
    let expected = -Complex64::i() * a1;
    let negative_x = -length;
    let negative_value = invert(negative_x, 1e3 * length)?;
    Ok(EdgeLimitReport {
        limit,
        expected,
        rel_dev: (limit - expected).norm() / expected.norm(),
        negative_value,
        negative_x,
        samples,
    })
}

/// Edge-limit oracle applied to `Φ⁺` of a configuration; `a₁ = λ/i`.
pub fn edge_limit_for_config(fact: &Factorization) -> Result<EdgeLimitReport> {
    let pair = TransformPair::new(fact)?;
    let lam = fact.params().lambda;
    let a1 = Complex64::new(0.0, -lam);
    edge_limit_oracle(
        a1,
        |t| {
            if t == 0.0 {
                Ok(Complex64::new(-1.0, 0.0))
            } else {
                pair.phi_plus_unchecked(Complex64::new(t, 0.0))
            }
        },
        1.0 / lam,
    )
}
