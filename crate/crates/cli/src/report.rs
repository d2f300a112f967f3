//! Flat records for the `constants`, `factorize` and `field` subcommands.

use std::io::Write;

use bistrip::constants::{
    junction_matrix, singular_limits, AsymptoticConstants, GammaRegime, JunctionCoefficients,
};
use bistrip::factorize::{factorize, verify_asymptotics, Factorization, FactorizationResult};
use bistrip::field::{invert_field, FieldSample};
use bistrip::kernel::{eval_xi_star, nondimensionalize, StripConfig};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsRecord {
    pub mu1: f64,
    pub mu2: f64,
    pub h1: f64,
    pub h2: f64,
    pub kappa: f64,
    pub h_total: f64,
    pub mu_star: f64,
    pub h_star: f64,
    pub kappa_star: f64,
    pub lambda_star: f64,
    pub eta: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub alpha_star: f64,
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
    pub a0: f64,
    pub gamma_plus: f64,
    pub gamma_regime: GammaRegime,
    pub gamma_minus: f64,
    pub alpha_i: f64,
    pub alpha_p: f64,
    pub alpha_ratio: f64,
    pub opening_to_jump: f64,
    pub junction_weight2: f64,
    pub junction_weight3: f64,
    pub tip_amplitude_factor: f64,
    pub junction_det: f64,
    pub junction_det_closed_form: f64,
    pub jump_estimate: f64,
    pub flux_estimate: f64,
    pub singular_ratio: f64,
}

pub fn constants_record(run: &RunConfig) -> Result<ConstantsRecord> {
    let cfg = run.strip.physical()?;
    cfg.validate()?;
    let k = AsymptoticConstants::compute(&cfg, &run.settings.factorization(&cfg))?;
    Ok(record_from(&cfg, &k)?)
}

pub fn record_from(
    cfg: &StripConfig,
    k: &AsymptoticConstants,
) -> bistrip::Result<ConstantsRecord> {
    let dp = nondimensionalize(cfg)?;
    let j = JunctionCoefficients::new(cfg, k);
    let m = junction_matrix(cfg, k);
    let s = singular_limits(cfg)?;
    Ok(ConstantsRecord {
        mu1: cfg.mu1,
        mu2: cfg.mu2,
        h1: cfg.h1,
        h2: cfg.h2,
        kappa: cfg.kappa,
        h_total: dp.h_total,
        mu_star: dp.mu_star,
        h_star: dp.h_star,
        kappa_star: dp.kappa_star,
        lambda_star: dp.lambda_star,
        eta: k.eta,
        lambda: k.lambda,
        alpha: k.alpha,
        alpha_star: k.alpha_star,
        c1: k.c.0,
        c2: k.c.1,
        d1: k.d.0,
        d2: k.d.1,
        a0: k.a0,
        gamma_plus: k.gamma_plus,
        gamma_regime: k.gamma_regime,
        gamma_minus: k.gamma_minus,
        alpha_i: k.alpha_i,
        alpha_p: k.alpha_p,
        alpha_ratio: k.alpha_i / k.alpha_p,
        opening_to_jump: j.opening_to_jump,
        junction_weight2: j.weight2,
        junction_weight3: j.weight3,
        tip_amplitude_factor: j.tip_amplitude_factor,
        junction_det: m.det,
        junction_det_closed_form: m.det_closed_form,
        jump_estimate: s.jump_estimate,
        flux_estimate: s.flux_estimate,
        singular_ratio: s.ratio,
    })
}

/// One probe point of the factorization.
#[derive(Debug, Clone, Serialize)]
pub struct FactorSample {
    pub xi: f64,
    pub plus_re: f64,
    pub plus_im: f64,
    pub modulus_sq: f64,
    pub xi_star: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizeReport {
    pub samples: Vec<FactorSample>,
    #[serde(flatten)]
    pub result: FactorizationResult,
    pub asymptotics: bistrip::factorize::AsymptoticsReport,
}

pub fn factorize_report(run: &RunConfig) -> Result<FactorizeReport> {
    let cfg = run.strip.physical()?;
    cfg.validate()?;
    let settings = run.settings.factorization(&cfg);
    let probe = &run.factorize.probe;
    let result = factorize(&cfg, settings, probe)?;
    let f = &result.plus_factor;
    let mut samples = Vec::with_capacity(probe.len());
    for &t in probe {
        let xi = Complex64::new(t, 0.0);
        let p = f.factor_plus(xi)?;
        samples.push(FactorSample {
            xi: t,
            plus_re: p.re,
            plus_im: p.im,
            modulus_sq: p.norm_sqr(),
            xi_star: eval_xi_star(xi, &cfg)?.re,
        });
    }
    Ok(FactorizeReport {
        samples,
        result,
        asymptotics: verify_asymptotics(&cfg, settings)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldExport {
    pub sample: FieldSample,
    /// Grid points dropped for lying inside the tip exclusion disc.
    pub skipped: usize,
}

pub fn field_export(run: &RunConfig) -> Result<FieldExport> {
    let cfg = run.strip.physical()?;
    cfg.validate()?;
    let f = Factorization::new(&cfg, run.settings.factorization(&cfg))?;
    let settings = run.field.settings(&run.settings);
    let r_min = settings.r_min.unwrap_or(1e-3 * cfg.h1.min(cfg.h2));
    let mut points = Vec::new();
    let mut skipped = 0;
    for y in run.field.y.values() {
        for x in run.field.x.values() {
            if x.hypot(y) < r_min {
                skipped += 1;
            } else {
                points.push((x, y));
            }
        }
    }
    Ok(FieldExport {
        sample: invert_field(&points, &f, &settings)?,
        skipped,
    })
}

pub fn write_constants<W: Write>(rec: &ConstantsRecord, format: Format, out: W) -> Result<()> {
    match format {
        Format::Json => write_json(rec, out),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.serialize(rec)?;
            w.flush().map_err(|e| crate::CliError::io("writing csv", e))?;
            Ok(())
        }
    }
}

pub fn write_factorize<W: Write>(rep: &FactorizeReport, format: Format, out: W) -> Result<()> {
    match format {
        Format::Json => write_json(rep, out),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for s in &rep.samples {
                w.serialize(s)?;
            }
            w.flush().map_err(|e| crate::CliError::io("writing csv", e))?;
            Ok(())
        }
    }
}

pub fn write_field<W: Write>(exp: &FieldExport, format: Format, out: W) -> Result<()> {
    match format {
        Format::Json => write_json(exp, out),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["X", "Y", "value", "error"])?;
            let s = &exp.sample;
            for (i, (x, y)) in s.grid.iter().enumerate() {
                w.write_record(&[
                    x.to_string(),
                    y.to_string(),
                    s.values[i].to_string(),
                    s.error_estimate[i].to_string(),
                ])?;
            }
            w.flush().map_err(|e| crate::CliError::io("writing csv", e))?;
            Ok(())
        }
    }
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).map_err(|e| crate::CliError::io("writing json", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{DimensionlessStrip, Mode, StripSpec};

    #[test]
    fn resin_cell_record() {
        let mut run = RunConfig::new(Mode::Constants);
        run.strip = StripSpec::Physical(StripConfig::new(26e9, 82e9, 0.1, 0.05, 0.01 / 2.5e9).unwrap());
        let r = constants_record(&run).unwrap();
        assert!((r.kappa_star - 2.88).abs() < 1e-12);
        assert!((r.gamma_minus - 10.0 * std::f64::consts::PI).abs() < 1e-12);
        let mut buf = Vec::new();
        write_constants(&r, Format::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["kappa_star"], serde_json::json!(r.kappa_star));
    }

    #[test]
    fn symmetric_kappa_star_eight() {
        let mut run = RunConfig::new(Mode::Constants);
        run.strip = StripSpec::Dimensionless(DimensionlessStrip {
            mu_star: 0.0,
            h_star: 0.0,
            kappa_star: 8.0,
            h_total: 1.0,
            mu_total: 1.0,
        });
        let r = constants_record(&run).unwrap();
        assert!((r.lambda_star - 1.0).abs() < 1e-12);
        let mut buf = Vec::new();
        write_constants(&r, Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("mu1,mu2,h1,h2,kappa,"));
    }

    #[test]
    fn perfect_interface_rejected() {
        let mut run = RunConfig::new(Mode::Constants);
        run.strip = StripSpec::Physical(StripConfig::symmetric(0.0));
        let err = constants_record(&run).unwrap_err();
        assert_eq!(err.exit_code(), crate::ExitCode::Validation);
    }

    #[test]
    fn field_export_skips_tip() {
        let mut run = RunConfig::new(Mode::Field);
        run.field.x = crate::config::Axis {
            min: -1.0,
            max: 1.0,
            count: 3,
        };
        run.field.y = crate::config::Axis {
            min: 0.0,
            max: 0.5,
            count: 2,
        };
        let e = field_export(&run).unwrap();
        assert_eq!(e.skipped, 1);
        assert_eq!(e.sample.values.len(), 5);
        let mut buf = Vec::new();
        write_field(&e, Format::Csv, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("X,Y,value,error\n"));
    }
}
