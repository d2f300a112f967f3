use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process;

use bistrip_cli::config::{Format, Mode, RunConfig};
use bistrip_cli::error::{CliError, ExitCode, Result};
use bistrip_cli::{report, sweep, verify};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bistrip", version, about = "Weight-function constants for an imperfect interfacial crack in a bi-material strip")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Asymptotic constants and junction coefficients as one flat record.
    Constants(Common),
    /// Samples of the kernel factor and its asymptotic checks.
    Factorize(Common),
    /// α_I / α_P over a (μ*, H*, κ*) grid.
    Sweep(Common),
    /// Weight function on an (X, Y) grid.
    Field(Common),
    /// Runs every invariant check; exit code 3 on any failure.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Relative error injected into λ before the constants checks.
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_lambda: f64,
    },
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted (required for sweep).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads for sweeps.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn load(common: &Common, mode: Mode) -> Result<RunConfig> {
    let mut run = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::new(mode),
    };
    if run.mode != mode {
        return Err(CliError::Config(format!(
            "config mode {:?} does not match subcommand {:?}",
            run.mode, mode
        )));
    }
    if let Some(p) = &common.out {
        run.output.path = Some(p.clone());
    }
    if let Some(f) = common.format {
        run.output.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if let Some(s) = common.seed {
        run.seed = s;
    }
    if let Some(t) = common.tol {
        run.settings.quad_tol = t;
        run.settings.field_tol = t;
    }
    run.validate()?;
    Ok(run)
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::io(format!("creating {}", p.display()), e))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Constants(c) => {
            let run = load(&c, Mode::Constants)?;
            let rec = report::constants_record(&run)?;
            report::write_constants(&rec, run.output.format, sink(run.output.path.as_deref())?)
        }
        Command::Factorize(c) => {
            let run = load(&c, Mode::Factorize)?;
            let rep = report::factorize_report(&run)?;
            report::write_factorize(&rep, run.output.format, sink(run.output.path.as_deref())?)
        }
        Command::Field(c) => {
            let run = load(&c, Mode::Field)?;
            let exp = report::field_export(&run)?;
            if exp.skipped > 0 {
                eprintln!("skipped {} point(s) inside the tip exclusion disc", exp.skipped);
            }
            report::write_field(&exp, run.output.format, sink(run.output.path.as_deref())?)
        }
        Command::Sweep(c) => {
            let run = load(&c, Mode::Sweep)?;
            let path = run
                .output
                .path
                .clone()
                .ok_or_else(|| CliError::Config("sweep needs --out or output.path".into()))?;
            if run.output.format == Format::Json {
                return Err(CliError::Config("sweep output is CSV only".into()));
            }
            let s = sweep::run_sweep(&run, &path, c.threads)?;
            eprintln!(
                "{} rows written to {} (resumed after {}, {} without ratio)",
                s.rows,
                path.display(),
                s.resumed_from,
                s.failed
            );
            Ok(())
        }
        Command::Verify {
            common,
            perturb_lambda,
        } => {
            let run = load(&common, Mode::Verify)?;
            let rep = verify::run_verify(&run, perturb_lambda)?;
            report::write_json(&rep, sink(run.output.path.as_deref())?)?;
            for c in rep.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAIL {}: deviation {:e} > {:e}", c.name, c.deviation, c.tolerance);
            }
            if rep.passed {
                Ok(())
            } else {
                let failed = rep.checks.iter().filter(|c| !c.passed).count();
                Err(CliError::Verification(format!("{failed} check(s) failed")))
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        let code = e.exit_code();
        debug_assert_ne!(code, ExitCode::Success);
        process::exit(code as i32);
    }
}
