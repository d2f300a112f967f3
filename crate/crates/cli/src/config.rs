//! Run configuration: one JSON file, SI units throughout.

use std::fs;
use std::path::{Path, PathBuf};

use bistrip::factorize::FactorizationSettings;
use bistrip::field::FieldSettings;
use bistrip::kernel::{dimensionalize, DimensionlessParams, StripConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Constants,
    Factorize,
    Sweep,
    Field,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Dimensionless strip description plus the scales needed to rebuild a
/// physical one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionlessStrip {
    pub mu_star: f64,
    pub h_star: f64,
    pub kappa_star: f64,
    /// `H₁ + H₂` (m).
    #[serde(default = "one")]
    pub h_total: f64,
    /// `μ₁ + μ₂` (Pa).
    #[serde(default = "one")]
    pub mu_total: f64,
}

fn one() -> f64 {
    1.0
}

/// Exactly one of the two forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StripSpec {
    Physical(StripConfig),
    Dimensionless(DimensionlessStrip),
}

impl StripSpec {
    pub fn physical(&self) -> Result<StripConfig> {
        match *self {
            StripSpec::Physical(cfg) => {
                cfg.validate_geometry()?;
                Ok(cfg)
            }
            StripSpec::Dimensionless(d) => {
                let dp = DimensionlessParams::new(d.mu_star, d.h_star, d.kappa_star, d.h_total)?;
                Ok(dimensionalize(&dp, d.h_total, d.mu_total)?)
            }
        }
    }
}

impl Default for StripSpec {
    fn default() -> Self {
        StripSpec::Physical(StripConfig::symmetric(1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericSettings {
    /// Relative tolerance of the Cauchy integrals.
    pub quad_tol: f64,
    /// Truncation of the Cauchy integral in `t·H` units; unset means the
    /// default `200·max(1, λ*)`.
    pub tail_cutoff: Option<f64>,
    /// Contour offset for the factorization (1/m); 0 uses principal values.
    pub beta: f64,
    /// Relative tolerance of the inverse transform.
    pub field_tol: f64,
}

impl Default for NumericSettings {
    fn default() -> Self {
        Self {
            quad_tol: 1e-9,
            tail_cutoff: None,
            beta: 0.0,
            field_tol: 1e-8,
        }
    }
}

impl NumericSettings {
    pub fn factorization(&self, cfg: &StripConfig) -> FactorizationSettings {
        let mut s = FactorizationSettings::for_config(cfg)
            .with_tol(self.quad_tol)
            .with_beta(self.beta);
        if let Some(t) = self.tail_cutoff {
            s.tail_cutoff = t;
        }
        s
    }
}

/// `count` evenly spaced values over `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.min],
            n => {
                let step = (self.max - self.min) / (n - 1) as f64;
                (0..n).map(|i| self.min + step * i as f64).collect()
            }
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max || self.count == 0
        {
            return Err(CliError::Config(format!(
                "{name}: need finite min <= max and count >= 1, got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub mu_star: Axis,
    pub h_star: Axis,
    pub kappa_star: Vec<f64>,
    /// Grid points must satisfy `|value| <= 1 - margin`.
    pub margin: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        let axis = Axis {
            min: -0.96,
            max: 0.96,
            count: 41,
        };
        Self {
            mu_star: axis,
            h_star: axis,
            kappa_star: vec![100.0, 1.0, 0.01],
            margin: 0.02,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.margin > 0.0 && self.margin < 1.0) {
            return Err(CliError::Config(format!(
                "sweep.margin must lie in (0, 1), got {}",
                self.margin
            )));
        }
        for (name, axis) in [("sweep.mu_star", &self.mu_star), ("sweep.h_star", &self.h_star)] {
            axis.validate(name)?;
            let limit = 1.0 - self.margin;
            if axis.min.abs() > limit || axis.max.abs() > limit {
                return Err(CliError::Config(format!(
                    "{name}: grid must stay within |value| <= {limit} (margin {})",
                    self.margin
                )));
            }
        }
        if self.kappa_star.is_empty() {
            return Err(CliError::Config("sweep.kappa_star is empty".into()));
        }
        if let Some(k) = self.kappa_star.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
            return Err(CliError::Config(format!(
                "sweep.kappa_star: every value must be finite and > 0, got {k}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldSpec {
    /// `X` grid (m).
    pub x: Axis,
    /// `Y` grid (m); must lie within `[-H₂, H₁]`.
    pub y: Axis,
    /// Tip exclusion radius (m); default `1e-3·min(H₁, H₂)`.
    pub r_min: Option<f64>,
    /// Contour offset as a fraction of `γ₊`.
    pub beta_fraction: f64,
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self {
            x: Axis {
                min: -4.0,
                max: 4.0,
                count: 33,
            },
            y: Axis {
                min: -1.0,
                max: 1.0,
                count: 9,
            },
            r_min: None,
            beta_fraction: 0.5,
        }
    }
}

impl FieldSpec {
    pub fn settings(&self, numeric: &NumericSettings) -> FieldSettings {
        FieldSettings {
            quad_tol: numeric.field_tol,
            beta_fraction: self.beta_fraction,
            r_min: self.r_min,
            ..FieldSettings::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FactorizeSpec {
    /// Real probe wavenumbers (1/m).
    pub probe: Vec<f64>,
}

impl Default for FactorizeSpec {
    fn default() -> Self {
        Self {
            probe: vec![-10.0, -1.0, -0.1, 0.1, 1.0, 10.0, 100.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(default)]
    pub strip: StripSpec,
    #[serde(default)]
    pub settings: NumericSettings,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default)]
    pub factorize: FactorizeSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            strip: StripSpec::default(),
            settings: NumericSettings::default(),
            sweep: SweepSpec::default(),
            field: FieldSpec::default(),
            factorize: FactorizeSpec::default(),
            output: OutputSpec::default(),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        Self::from_json(&text).map_err(|source| CliError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.settings;
        for (name, v) in [("settings.quad_tol", s.quad_tol), ("settings.field_tol", s.field_tol)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(CliError::Config(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if !(s.beta.is_finite() && s.beta >= 0.0) {
            return Err(CliError::Config(format!(
                "settings.beta must be finite and >= 0, got {}",
                s.beta
            )));
        }
        if let Some(t) = s.tail_cutoff {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Config(format!(
                    "settings.tail_cutoff must be finite and > 0, got {t}"
                )));
            }
        }
        match self.mode {
            Mode::Sweep => self.sweep.validate(),
            Mode::Field => {
                self.field.x.validate("field.x")?;
                self.field.y.validate("field.y")?;
                if !(self.field.beta_fraction > 0.0 && self.field.beta_fraction < 1.0) {
                    return Err(CliError::Config(format!(
                        "field.beta_fraction must lie in (0, 1), got {}",
                        self.field.beta_fraction
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// SHA-256 of the canonical JSON form with output options removed.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = OutputSpec::default();
        let bytes = serde_json::to_vec(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(bytes))
    }
}
