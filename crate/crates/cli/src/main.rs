use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fracshape::harness::{
    emit_report, fit_sweep, isoperimetry_suite, lemma_table_csv, run_sweep, write_trace_csv, CorpusConfig,
    SweepConfig,
};
use fracshape::lemmas::lemma_suite;
use fracshape::nonlocal::{
    fractional_perimeter, fractional_perimeter_mc, interval_curvature, radial_curvature_all, QuadratureSpec,
};
use fracshape::parallel::configure_threads_from_env;
use fracshape::shapes::{load_shape, save_shape, Shape};
use fracshape::solver::{minimize, SolveConfig};
use serde_json::json;

#[derive(Parser)]
#[command(name = "fracshape", version, about = "Fractional perimeters and nonlocal liquid-drop minimizers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fractional perimeter of a shape file.
    Perimeter {
        #[arg(long)]
        shape: PathBuf,
        #[arg(long)]
        s: f64,
        /// Use the Monte Carlo estimator with this many samples.
        #[arg(long)]
        mc_samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fractional mean curvature on the boundary of a shape file.
    Curvature {
        #[arg(long)]
        shape: PathBuf,
        #[arg(long)]
        s: f64,
        /// Evaluate at every boundary sample.
        #[arg(long)]
        all_boundary: bool,
        /// Boundary point `x,y` (or `x` in one dimension).
        #[arg(long, value_delimiter = ',', num_args = 1..=2, conflicts_with = "all_boundary")]
        at: Option<Vec<f64>>,
    },
    /// Minimize at one volume.
    Minimize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Volume sweep with CSV and SVG report.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a verification suite and write its table.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        out: PathBuf,
        /// Corpus settings for the isoperimetry suite.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Lemmas,
    Isoperimetry,
}

/// Exit status: usage problems are distinguished from failed checks.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<fracshape::Error> for Failure {
    fn from(e: fracshape::Error) -> Self {
        use fracshape::Error as E;
        match e {
            E::InvalidParameter(_) | E::InvalidShape(_) | E::Json(_) | E::Io(_) | E::Incompatible(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Check(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Check(format!("{}: {e}", path.display())))
}

fn out_dir(path: &Path) -> Result<(), Failure> {
    fs::create_dir_all(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Shape, Failure> {
    load_shape(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn perimeter(shape: &Path, s: f64, mc_samples: Option<usize>, seed: u64) -> Outcome {
    let shape = load(shape)?;
    let mut q = QuadratureSpec::with_s(s);
    let (value, method) = match mc_samples {
        Some(n) => {
            q.mc_samples = n;
            (fractional_perimeter_mc(&shape, &q, seed)?, "monte_carlo")
        }
        None => (fractional_perimeter(&shape, &q)?, "deterministic"),
    };
    println!(
        "{}",
        json!({"s": s, "method": method, "value": value.value, "error_estimate": value.error_estimate})
    );
    Ok(true)
}

fn curvature(shape: &Path, s: f64, all_boundary: bool, at: Option<Vec<f64>>) -> Outcome {
    let shape = load(shape)?;
    let q = QuadratureSpec::with_s(s);
    q.validate()?;
    let rows: Vec<serde_json::Value> = match (&shape, all_boundary, at) {
        (_, false, Some(p)) => {
            let x = [p[0], p.get(1).copied().unwrap_or(0.0)];
            let v = fracshape::nonlocal::fractional_mean_curvature(&shape, x, &q)?;
            vec![json!({"x": x, "value": v.value, "error_estimate": v.error_estimate})]
        }
        (Shape::Radial(r), true, _) => radial_curvature_all(r, s)
            .into_iter()
            .zip(r.boundary_points())
            .map(|(h, p)| json!({"x": p, "value": h}))
            .collect(),
        (Shape::Intervals(u), true, _) => u
            .endpoints()
            .into_iter()
            .map(|e| Ok(json!({"x": [e, 0.0], "value": interval_curvature(u, e, s)?})))
            .collect::<Result<_, fracshape::Error>>()?,
        (Shape::Grid(_), true, _) => {
            return Err(Failure::Usage("curvature is not available for grid shapes".into()))
        }
        _ => return Err(Failure::Usage("pass --all-boundary or --at".into())),
    };
    println!("{}", serde_json::to_string_pretty(&rows).expect("json"));
    Ok(true)
}

fn run_minimize(config: &Path, out: &Path) -> Outcome {
    let cfg: SolveConfig = read_json(config)?;
    cfg.validate()?;
    out_dir(out)?;
    let res = minimize(&cfg)?;
    save_shape(&Shape::Radial(res.shape.clone()), out.join("shape.json"))?;
    save_shape(&Shape::Radial(res.descaled.clone()), out.join("descaled.json"))?;
    write_trace_csv(&out.join("trace.csv"), &res.trace)?;
    let metrics = json!({
        "converged": res.converged,
        "iterations": res.iterations,
        "energy": res.energy,
        "energy_descaled": res.energy_descaled,
        "ball_energy": res.ball_energy,
        "lambda_tilde_flow": res.lambda_tilde_flow,
        "lambda_tilde_identity": res.lambda_tilde_identity,
        "lambda_flow": res.lambda_flow,
        "lambda_identity": res.lambda_identity,
        "lambda_gap": res.lambda_gap,
        "residual": res.residual,
        "map": res.map,
        "starts": res.starts,
        "starts_disagree": res.starts_disagree,
    });
    write(&out.join("metrics.json"), &serde_json::to_string_pretty(&metrics).expect("json"))?;
    if res.starts_disagree {
        eprintln!("warning: starts converged to different shapes");
    }
    println!(
        "converged={} energy={:.12e} lambda={:.12e} gap={:.3e}",
        res.converged, res.energy_descaled, res.lambda_flow, res.lambda_gap
    );
    Ok(res.converged)
}

fn run_sweep_cmd(config: &Path, out: &Path) -> Outcome {
    let cfg: SweepConfig = read_json(config)?;
    out_dir(out)?;
    let records = run_sweep(cfg.s, &cfg.potential, &cfg.volumes.volumes(), &cfg.solver)?;
    let fits = fit_sweep(&records, cfg.s);
    let report = emit_report(&records, Some(&fits), out)?;
    write(&out.join("fits.json"), &serde_json::to_string_pretty(&fits).expect("json"))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for r in records.iter().filter(|r| r.error.is_some()) {
        eprintln!("m = {:e}: {}", r.m, r.error.as_deref().unwrap_or(""));
    }
    println!("{} rows written to {}", records.len(), out.join("sweep.csv").display());
    Ok(records.iter().all(|r| r.converged))
}

fn verify(suite: Suite, out: &Path, config: Option<&Path>) -> Outcome {
    out_dir(out)?;
    match suite {
        Suite::Lemmas => {
            let rows = lemma_suite()?;
            write(&out.join("lemmas.csv"), &lemma_table_csv(&rows))?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            println!("lemmas: {} probes, {failed} failed", rows.len());
            Ok(failed == 0)
        }
        Suite::Isoperimetry => {
            let cfg: CorpusConfig = match config {
                Some(p) => read_json(p)?,
                None => CorpusConfig::default(),
            };
            let res = isoperimetry_suite(&cfg)?;
            write(&out.join("isoperimetry.csv"), &res.to_csv())?;
            println!(
                "isoperimetry: C_fit = {:.6e} ± {:.2e}, {} rearrangement checks, pass = {}",
                res.quantitative.c_fit,
                res.quantitative.c_fit_error,
                res.rearrangement.len(),
                res.pass
            );
            Ok(res.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads_from_env();
    let outcome = match cli.command {
        Command::Perimeter { shape, s, mc_samples, seed } => perimeter(&shape, s, mc_samples, seed),
        Command::Curvature { shape, s, all_boundary, at } => curvature(&shape, s, all_boundary, at),
        Command::Minimize { config, out } => run_minimize(&config, &out),
        Command::Sweep { config, out } => run_sweep_cmd(&config, &out),
        Command::Verify { suite, out, config } => verify(suite, &out, config.as_deref()),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
