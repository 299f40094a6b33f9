//! Command-line frontend. [`run`] parses arguments, executes one command and
//! returns the process exit code: 0 success, 2 input error, 3 certification
//! failed, 4 numerical failure.

pub mod io;
mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matcore::{eigenvalues, CMatrix, LpExponent, NormSpec};
use crate::numspec::{certify_halfplane, numerical_bounds, region_for, support_sweep, GridSpec, SweepOptions};
use crate::renorm::hull_convergence_report;
use crate::semigroup::norm_curve;
use crate::zoo;

pub use io::{emit_matrix, parse_matrix, read_matrix, to_json_string, write_atomic, MatrixFile};

const CERT_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "numspec",
    version,
    about = "Numerical spectra of complex matrices under lp norms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep the support function and write the region as JSON.
    Region {
        #[arg(long)]
        matrix: PathBuf,
        /// Exponent: a number >= 1 or `inf`.
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 360)]
        angles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the numerical radius.
    Radius {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 360)]
        angles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the numerical bound in direction θ.
    Bounds {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the resolvent bound on the half plane Re(e^{-iθ}λ) > ω.
    Certify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        /// Distances x tangential offsets, e.g. `40x10`.
        #[arg(long, default_value = "40x10")]
        grid: String,
    },
    /// Write t, ‖exp(t e^{-iθ}A)‖ as CSV.
    Curve {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        theta: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Intersect renormed regions for a decreasing list of ω.
    Hildebrandt {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: String,
        /// Comma-separated, strictly decreasing.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        omegas: Vec<f64>,
        #[arg(long, default_value_t = 72)]
        angles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// List or emit built-in examples.
    Zoo {
        #[arg(long, conflicts_with_all = ["name", "out", "param"])]
        list: bool,
        #[arg(long, required_unless_present = "list", requires = "out")]
        name: Option<String>,
        /// Example parameter, e.g. `--param n=4` or `--param q=1+i,-1`.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        param: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs the command line and returns the exit code. Diagnostics go to
/// standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("NUMSPEC_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // A second call within one process fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn norm_arg(p: &str) -> Result<(LpExponent, NormSpec)> {
    let e = LpExponent::parse(p)?;
    Ok((e, NormSpec::P(e)))
}

fn load(path: &Path, p: &str) -> Result<(CMatrix, LpExponent, NormSpec)> {
    let (e, norm) = norm_arg(p)?;
    let a = read_matrix(path)?;
    Ok((a, e, norm))
}

fn sweep_options(angles: usize, seed: u64) -> SweepOptions {
    SweepOptions {
        angles,
        seed,
        ..SweepOptions::default()
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    write_atomic(path, text.as_bytes())
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Region {
            matrix,
            p,
            angles,
            seed,
            out,
            svg,
        } => {
            let (a, _, norm) = load(&matrix, &p)?;
            let region = region_for(&a, &norm, &sweep_options(angles, seed))?;
            let mut text = to_json_string(&region.to_json(&norm.label()));
            text.push('\n');
            write_text(&out, &text)?;
            if let Some(svg_path) = svg {
                let eigs = eigenvalues(&a)?;
                write_text(&svg_path, &svg::render(&region, &eigs))?;
            }
            Ok(0)
        }
        Command::Radius {
            matrix,
            p,
            angles,
            seed,
        } => {
            let (a, _, norm) = load(&matrix, &p)?;
            let region = region_for(&a, &norm, &sweep_options(angles, seed))?;
            println!("{:?}", region.radius);
            Ok(0)
        }
        Command::Bounds { matrix, p, theta, seed } => {
            let (a, _, norm) = load(&matrix, &p)?;
            // A three-angle grid starting at θ samples h(θ) directly.
            let samples = support_sweep(&a.rotated(theta), &norm, 3, seed)?;
            let h = numerical_bounds(&samples, 0.0)?;
            println!("{h:?}");
            Ok(0)
        }
        Command::Certify {
            matrix,
            p,
            theta,
            omega,
            grid,
        } => {
            let grid = GridSpec::parse(&grid)?;
            let (a, _, norm) = load(&matrix, &p)?;
            let c = certify_halfplane(&a, &norm, theta, omega, &grid)?;
            let verdict = if c.pass { "pass" } else { "fail" };
            println!(
                "{verdict}: worst ratio {:?} at λ = {:?}{:+?}i ({} of {} grid points exceed the bound)",
                c.worst_ratio,
                c.worst_lambda.re,
                c.worst_lambda.im,
                c.failures.len(),
                c.grid.len()
            );
            Ok(if c.pass { 0 } else { CERT_FAILED })
        }
        Command::Curve {
            matrix,
            p,
            theta,
            tmax,
            steps,
            out,
        } => {
            if !(tmax > 0.0 && tmax.is_finite()) || steps == 0 {
                return Err(Error::input("--tmax must be positive and --steps at least 1"));
            }
            let (a, _, norm) = load(&matrix, &p)?;
            let ts: Vec<f64> = (1..=steps).map(|k| tmax * k as f64 / steps as f64).collect();
            let curve = norm_curve(&a, &norm, theta, &ts)?;
            if curve.truncated {
                eprintln!(
                    "warning: the exponential overflowed; curve stops at t = {:?}",
                    curve.ts.last().unwrap_or(&0.0)
                );
            }
            let mut buf = Vec::new();
            curve.write_csv(&mut buf)?;
            write_atomic(&out, &buf)?;
            Ok(0)
        }
        Command::Hildebrandt {
            matrix,
            p,
            omegas,
            angles,
            seed,
            out,
        } => {
            let (a, e, _) = load(&matrix, &p)?;
            let report = hull_convergence_report(&a, e, &omegas, angles, seed)?;
            let steps: Vec<Value> = report
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "omega": s.omega,
                        "radius": s.radius,
                        "hausdorff_to_conv_spectrum": s.hausdorff_to_conv_spectrum,
                        "fan": report.fan,
                    })
                })
                .collect();
            let mut text = to_json_string(&steps);
            text.push('\n');
            write_text(&out, &text)?;
            Ok(0)
        }
        Command::Zoo { list, name, param, out } => {
            if list {
                for n in zoo::NAMES {
                    println!("{n}");
                }
                return Ok(0);
            }
            let name = name.ok_or_else(|| Error::input("--name is required"))?;
            let out = out.ok_or_else(|| Error::input("--out is required"))?;
            let mut params = zoo::Params::new();
            for kv in &param {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::input(format!("--param expects KEY=VALUE, got '{kv}'")))?;
                params.insert(k.trim().to_string(), v.to_string());
            }
            let ex = zoo::make_example(&name, &params)?;
            write_text(&out, &emit_matrix(&ex.matrix))?;
            Ok(0)
        }
    }
}
