//! `α_I`, `α_P` and their ratio over a `(μ*, H*, κ*)` grid.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use bistrip::constants::{alpha_imperfect, alpha_perfect, alpha_star, gamma_plus};
use bistrip::kernel::{dimensionalize, DimensionlessParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, SweepSpec};
use crate::error::{CliError, Result};

/// `|α_P|` below this leaves the ratio blank.
pub const RATIO_FLOOR: f64 = 1e-8;

/// Rows computed in parallel between checkpoints.
const CHUNK: usize = 64;

pub const COLUMNS: [&str; 10] = [
    "mu_star",
    "h_star",
    "kappa_star",
    "alpha_star",
    "alpha_i",
    "alpha_p",
    "ratio",
    "lambda_star",
    "gamma_plus_h",
    "diagnostics",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub mu_star: f64,
    pub h_star: f64,
    pub kappa_star: f64,
    pub alpha_star: Option<f64>,
    pub alpha_i: Option<f64>,
    pub alpha_p: Option<f64>,
    pub ratio: Option<f64>,
    pub lambda_star: Option<f64>,
    pub gamma_plus_h: Option<f64>,
    pub diagnostics: String,
}

/// Grid points as `(κ*, H*, μ*)`, κ* outermost and μ* innermost.
pub fn grid(spec: &SweepSpec) -> Vec<(f64, f64, f64)> {
    let hs = spec.h_star.values();
    let ms = spec.mu_star.values();
    let mut out = Vec::with_capacity(spec.kappa_star.len() * hs.len() * ms.len());
    for &k in &spec.kappa_star {
        for &h in &hs {
            for &m in &ms {
                out.push((k, h, m));
            }
        }
    }
    out
}

/// One row; failures land in the diagnostics column.
pub fn compute_row(kappa_star: f64, h_star: f64, mu_star: f64) -> SweepRecord {
    let mut row = SweepRecord {
        mu_star,
        h_star,
        kappa_star,
        alpha_star: None,
        alpha_i: None,
        alpha_p: None,
        ratio: None,
        lambda_star: None,
        gamma_plus_h: None,
        diagnostics: String::new(),
    };
    let mut notes: Vec<String> = Vec::new();
    let dp = match DimensionlessParams::new(mu_star, h_star, kappa_star, 1.0) {
        Ok(dp) => dp,
        Err(e) => {
            row.diagnostics = e.to_string();
            return row;
        }
    };
    row.lambda_star = Some(dp.lambda_star);
    match alpha_star(&dp) {
        Ok(a) => {
            row.alpha_star = Some(a);
            row.alpha_i = alpha_imperfect(&dp).ok();
        }
        Err(e) => notes.push(format!("alpha_star: {e}")),
    }
    match alpha_perfect(&dp) {
        Ok(p) => row.alpha_p = Some(p),
        Err(e) => notes.push(format!("alpha_p: {e}")),
    }
    if let (Some(i), Some(p)) = (row.alpha_i, row.alpha_p) {
        if p.abs() < RATIO_FLOOR {
            notes.push(format!("alpha_p_near_zero ({p:e})"));
        } else {
            row.ratio = Some(i / p);
        }
    }
    match dimensionalize(&dp, 1.0, 1.0).and_then(|cfg| gamma_plus(&cfg)) {
        Ok(g) => row.gamma_plus_h = Some(g.value),
        Err(e) => notes.push(format!("gamma_plus: {e}")),
    }
    row.diagnostics = notes.join("; ");
    row
}

fn header(cfg: &RunConfig) -> String {
    format!(
        "# bistrip-sweep v{}\n# config_sha256: {}\n{}\n",
        crate::VERSION,
        cfg.hash(),
        COLUMNS.join(",")
    )
}

fn encode(rows: &[SweepRecord]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner()
        .map_err(|e| CliError::io("flushing csv buffer", e.into_error()))
}

/// Completed rows already in `path` when its header matches; the file is
/// truncated back to the last complete row.
fn resume_point(path: &Path, head: &str) -> Result<Option<usize>> {
    let Ok(file) = File::open(path) else {
        return Ok(None);
    };
    let mut reader = BufReader::new(file);
    let mut seen = String::new();
    for _ in 0..head.lines().count() {
        let mut line = String::new();
        if reader
            .read_line(&mut line)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?
            == 0
        {
            return Ok(None);
        }
        seen.push_str(&line);
    }
    if seen != head {
        return Ok(None);
    }
    let mut keep = head.len() as u64;
    let mut rows = 0;
    let mut line = String::new();
    loop {
        line.clear();
        let n = reader
            .read_line(&mut line)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        if n == 0 || !line.ends_with('\n') {
            break;
        }
        keep += n as u64;
        rows += 1;
    }
    let file = OpenOptions::new()
        .write(true)
        .open(path)
        .map_err(|e| CliError::io(format!("opening {}", path.display()), e))?;
    file.set_len(keep)
        .map_err(|e| CliError::io(format!("truncating {}", path.display()), e))?;
    Ok(Some(rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub rows: usize,
    pub resumed_from: usize,
    pub failed: usize,
}

/// Writes the sweep CSV to `path`, appending after each chunk so an
/// interrupted run resumes where it stopped.
pub fn run_sweep(cfg: &RunConfig, path: &Path, threads: Option<usize>) -> Result<SweepSummary> {
    cfg.sweep.validate()?;
    let points = grid(&cfg.sweep);
    let head = header(cfg);
    let start = match resume_point(path, &head)? {
        Some(done) if done <= points.len() => done,
        _ => {
            fs::write(path, &head)
                .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
            0
        }
    };
    let mut out = OpenOptions::new()
        .append(true)
        .open(path)
        .map_err(|e| CliError::io(format!("opening {}", path.display()), e))?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;

    let mut failed = 0;
    for chunk in points[start..].chunks(CHUNK) {
        let rows: Vec<SweepRecord> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&(k, h, m)| compute_row(k, h, m))
                .collect()
        });
        failed += rows.iter().filter(|r| r.ratio.is_none()).count();
        out.write_all(&encode(&rows)?)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::io(format!("appending to {}", path.display()), e))?;
    }
    Ok(SweepSummary {
        rows: points.len(),
        resumed_from: start,
        failed,
    })
}

/// Parses a sweep CSV written by [`run_sweep`].
pub fn read_records(path: &Path) -> Result<Vec<SweepRecord>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}
