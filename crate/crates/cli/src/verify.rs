//! Self-verification: every invariant suite of the library, run sequentially
//! on one configuration.

use std::f64::consts::PI;

use bistrip::constants::{alpha_star, gamma_equation, junction_matrix, AsymptoticConstants};
use bistrip::factorize::{analyticity_half_width, verify_asymptotics, Factorization};
use bistrip::field::{
    far_field_check, near_tip_check, edge_limit_for_config, edge_limit_oracle,
};
use bistrip::kernel::{eval_xi_star, nondimensionalize, StripConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub target: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    fn new(name: &'static str, measured: f64, target: f64, deviation: f64, tolerance: f64) -> Self {
        Self {
            name,
            measured,
            target,
            deviation,
            tolerance,
            passed: deviation.is_finite() && deviation <= tolerance,
            error: None,
        }
    }

    fn relative(name: &'static str, measured: f64, target: f64, tolerance: f64) -> Self {
        let dev = if target == 0.0 {
            measured.abs()
        } else {
            ((measured - target) / target).abs()
        };
        Self::new(name, measured, target, dev, tolerance)
    }

    fn failed(name: &'static str, err: impl ToString) -> Self {
        Self {
            name,
            measured: f64::NAN,
            target: f64::NAN,
            deviation: f64::NAN,
            tolerance: f64::NAN,
            passed: false,
            error: Some(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub version: &'static str,
    pub config_sha256: String,
    pub seed: u64,
    pub lambda_perturbation: f64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs the suite. `perturb_lambda` scales the `λ` fed into the constants
/// (0 for a clean run); every oracle keeps the true `λ`.
pub fn run_verify(run: &RunConfig, perturb_lambda: f64) -> Result<VerifyReport> {
    let cfg = run.strip.physical()?;
    cfg.validate()?;
    let settings = run.settings.factorization(&cfg);
    let field_settings = run.field.settings(&run.settings);
    let mut checks = Vec::new();

    let lam = cfg.params().lambda;
    let constants = AsymptoticConstants::compute(&cfg, &settings)
        .map(|k| k.with_lambda(lam * (1.0 + perturb_lambda), cfg.h_total()));

    absorb(&mut checks, "factorization_identity", identity_checks(&cfg, run.seed, run.settings.quad_tol));
    absorb(&mut checks, "zero_asymptote", {
        verify_asymptotics(&cfg, settings).map(|r| {
            vec![Check::new(
                "zero_asymptote",
                r.zero_coeff.norm(),
                r.zero_target.norm(),
                r.zero_rel_dev,
                1e-4,
            )]
        })
    });
    absorb(&mut checks, "gamma_plus_root", gamma_checks(&cfg));
    match &constants {
        Ok(k) => {
            checks.extend(constant_checks(&cfg, k));
            absorb(&mut checks, "far_field", {
                Factorization::new(&cfg, settings).and_then(|f| {
                    far_field_check(&f, &field_settings, k.c.0, k.d.0).map(|r| {
                        vec![
                            Check::new("far_field_slope", r.slope, r.slope_target, r.slope_rel_dev, 1e-2),
                            Check::new(
                                "far_field_intercept",
                                r.intercept,
                                r.intercept_target,
                                r.intercept_rel_dev,
                                2e-2,
                            ),
                            Check::new("decay_rate", r.decay_rate, r.decay_target, r.decay_rel_dev, 5e-2),
                        ]
                    })
                })
            });
        }
        Err(e) => checks.push(Check::failed("constants", e)),
    }
    absorb(&mut checks, "near_tip", {
        Factorization::new(&cfg, settings).and_then(|f| {
            near_tip_check(&f, &field_settings).map(|r| {
                vec![
                    Check::new("tip_flux", r.flux_limit, r.flux_target, r.flux_rel_dev, 2e-2),
                    Check::new("tip_jump", r.jump_limit, r.jump_target, r.jump_rel_dev, 2e-2),
                ]
            })
        })
    });
    absorb(&mut checks, "edge_limit", edge_limit_checks(&cfg, &settings));

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        version: crate::VERSION,
        config_sha256: run.hash(),
        seed: run.seed,
        lambda_perturbation: perturb_lambda,
        passed,
        checks,
    })
}

fn absorb(checks: &mut Vec<Check>, name: &'static str, r: bistrip::Result<Vec<Check>>) {
    match r {
        Ok(cs) => checks.extend(cs),
        Err(e) => checks.push(Check::failed(name, e)),
    }
}

/// `|Ξ*⁺|² = Ξ*` and `Ξ*⁻ = conj Ξ*⁺` on seeded real samples, with `Ξ*⁺`
/// taken through the shifted contour.
fn identity_checks(cfg: &StripConfig, seed: u64, tol: f64) -> bistrip::Result<Vec<Check>> {
    let half = analyticity_half_width(cfg)?;
    let base = bistrip::factorize::FactorizationSettings::for_config(cfg).with_tol(tol);
    let f = Factorization::new(cfg, base.with_beta(0.5 * half))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = cfg.h_total();
    let (mut worst_id, mut worst_sym) = (0.0f64, 0.0f64);
    for _ in 0..40 {
        let t = 10f64.powf(rng.gen_range(-3.0..3.0)) / h;
        let t = if rng.gen_bool(0.5) { t } else { -t };
        let xi = Complex64::new(t, 0.0);
        let p = f.factor_plus(xi)?;
        let m = f.factor_minus(xi)?;
        let target = eval_xi_star(xi, cfg)?.re;
        worst_id = worst_id.max(((p * p.conj()).re / target - 1.0).abs());
        worst_sym = worst_sym.max((m - p.conj()).norm() / p.norm());
    }
    Ok(vec![
        Check::new("factorization_identity", worst_id, 0.0, worst_id, 1e-6),
        Check::new("plemelj_symmetry", worst_sym, 0.0, worst_sym, 1e-6),
    ])
}

fn gamma_checks(cfg: &StripConfig) -> bistrip::Result<Vec<Check>> {
    let g = bistrip::constants::gamma_plus(cfg)?;
    let below = gamma_equation(g.value * (1.0 - 1e-10), cfg);
    let above = gamma_equation(g.value * (1.0 + 1e-10), cfg);
    let bracketed = below > 0.0 && above <= 0.0;
    let mut c = Check::new("gamma_plus_root", g.residual, 0.0, g.residual.abs(), f64::INFINITY);
    c.passed = bracketed && g.value > 0.0 && g.value < PI / cfg.h1.max(cfg.h2);
    Ok(vec![c])
}

fn constant_checks(cfg: &StripConfig, k: &AsymptoticConstants) -> Vec<Check> {
    let mut out = Vec::new();
    let lam = cfg.params().lambda;
    let (p, q) = (cfg.mu1 * cfg.h1, cfg.mu2 * cfg.h2);
    let balance = (p * k.c.0 + q * k.c.1).abs();
    out.push(Check::new("c_balance", balance, 0.0, balance, 2.0 * f64::EPSILON));

    match nondimensionalize(cfg).and_then(|dp| alpha_star(&dp).map(|a| (dp, a))) {
        Ok((dp, a_star)) => {
            // Dimensionless route: D_j = -C_j H (α*/π + 1/λ*).
            let k_ref = a_star / PI + 1.0 / dp.lambda_star;
            out.push(Check::relative("d1_identity", k.d.0, -k.c.0 * dp.h_total * k_ref, 1e-8));
            out.push(Check::relative("d2_identity", k.d.1, -k.c.1 * dp.h_total * k_ref, 1e-8));
        }
        Err(e) => out.push(Check::failed("d_identity", e)),
    }
    out.push(Check::relative("a0_equals_lambda", k.a0, lam, 1e-12));
    out.push(Check::relative(
        "gamma_minus",
        k.gamma_minus,
        PI * (1.0 / cfg.h1).min(1.0 / cfg.h2),
        1e-12,
    ));
    let m = junction_matrix(cfg, k);
    out.push(Check::relative("junction_det", m.det, m.det_closed_form, 1e-10));
    out
}

fn edge_limit_checks(
    cfg: &StripConfig,
    settings: &bistrip::factorize::FactorizationSettings,
) -> bistrip::Result<Vec<Check>> {
    let one = Complex64::new(1.0, 0.0);
    let synthetic = edge_limit_oracle(one, |t| Ok(one / (t + Complex64::i())), 1.0)?;
    let f = Factorization::new(cfg, *settings)?;
    let lam = f.params().lambda;
    let weight = edge_limit_for_config(&f)?;
    Ok(vec![
        Check::new(
            "edge_limit_synthetic",
            synthetic.limit.im,
            -1.0,
            (synthetic.limit + Complex64::i()).norm(),
            1e-3,
        ),
        Check::relative("edge_limit_weight", -weight.limit.re, lam, 2e-2),
        Check::new(
            "edge_limit_negative_side",
            weight.negative_value.norm(),
            0.0,
            weight.negative_value.norm() / lam,
            1e-4,
        ),
    ])
}

