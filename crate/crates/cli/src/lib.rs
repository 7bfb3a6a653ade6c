//! Command-line front end for the `urriemann` solver.
// Negated comparisons below also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

pub use config::{Mode, Problem, ProblemConfig};
pub use error::CliError;

/// Exact relativistic Riemann solutions, wave curves and Godunov runs.
#[derive(Debug, Parser)]
#[command(name = "urriemann", version)]
pub struct Args {
    /// JSON problem file; missing fields take their defaults
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Squared sound speed, decimal or rational such as 1/3
    #[arg(long)]
    pub cs2: Option<String>,
    /// Left state as rho,vx,vt[,angle]
    #[arg(long, allow_hyphen_values = true)]
    pub left: Option<String>,
    /// Right state as rho,vx,vt[,angle]
    #[arg(long, allow_hyphen_values = true)]
    pub right: Option<String>,
    /// Snapshot time (also the default final time of scheme runs)
    #[arg(long)]
    pub t: Option<f64>,
    /// exact-snapshot | wave-curves | godunov | convergence
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Courant number of scheme runs
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Number of cells of a godunov run
    #[arg(long)]
    pub n_cells: Option<usize>,
    /// Number of sampling points of an exact snapshot
    #[arg(long)]
    pub n_points: Option<usize>,
    /// Output table; stdout when absent. Wave curves go to <stem>_<k>.<ext>
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// JSON summary destination; defaults to <output>.json, or stderr with stdout output
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Profile in snapshot CSV schema to difference against the exact solution
    #[arg(long)]
    pub overlay: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn write(path: &Path, data: &str) -> Result<(), CliError> {
    fs::write(path, data).map_err(|e| CliError::io(path.display().to_string(), e))
}

/// Loads the config file and applies flag overrides.
pub fn load(args: &Args) -> Result<ProblemConfig, CliError> {
    let mut cfg = match &args.config {
        Some(p) => ProblemConfig::from_json(&read(p)?).map_err(|e| {
            CliError::Config(format!(
                "{}: {}",
                p.display(),
                e.to_string().trim_start_matches("config error: ")
            ))
        })?,
        None => ProblemConfig::default(),
    };
    let flag = |name: &str, e: String| CliError::Config(format!("--{name}: {e}"));
    if let Some(c) = &args.cs2 {
        cfg.cs2 = config::Scalar::Number(config::parse_scalar(c).map_err(|e| flag("cs2", e))?);
    }
    if let Some(s) = &args.left {
        cfg.left = config::parse_state(s).map_err(|e| flag("left", e))?;
    }
    if let Some(s) = &args.right {
        cfg.right = config::parse_state(s).map_err(|e| flag("right", e))?;
    }
    if let Some(t) = args.t {
        cfg.t = t;
    }
    if let Some(m) = args.mode {
        cfg.mode = m;
    }
    if let Some(c) = args.cfl {
        cfg.scheme.cfl = c;
    }
    if let Some(n) = args.n_cells {
        cfg.scheme.n_cells = n;
    }
    if let Some(n) = args.n_points {
        cfg.grid.n_points = n;
    }
    Ok(cfg)
}

struct Outputs<'a> {
    table: Option<&'a Path>,
    summary: Option<PathBuf>,
}

impl Outputs<'_> {
    fn table(&self, data: &str) -> Result<(), CliError> {
        match self.table {
            Some(p) => write(p, data),
            None => std::io::stdout()
                .lock()
                .write_all(data.as_bytes())
                .map_err(|e| CliError::io("stdout", e)),
        }
    }

    fn summary(&self, data: &str) -> Result<(), CliError> {
        match &self.summary {
            Some(p) => write(p, data),
            None => std::io::stderr()
                .lock()
                .write_all(data.as_bytes())
                .map_err(|e| CliError::io("stderr", e)),
        }
    }
}

/// `dir/stem_k.ext` for the k-th curve file.
fn numbered(path: &Path, k: usize) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{k}"),
    };
    path.with_file_name(name)
}

pub fn run(args: &Args) -> Result<(), CliError> {
    let problem = load(args)?.validate()?;
    let out = Outputs {
        table: args.output.as_deref(),
        summary: args
            .summary
            .clone()
            .or_else(|| args.output.as_ref().map(|p| p.with_extension("json"))),
    };
    if let Some(path) = &args.overlay {
        if problem.mode != Mode::ExactSnapshot {
            return Err(CliError::Config(
                "--overlay requires mode exact-snapshot".into(),
            ));
        }
        let profile = report::read_profile(&read(path)?)?;
        let (table, summary) = report::overlay_difference(&problem, &profile)?;
        out.table(&table)?;
        return out.summary(&summary);
    }
    match problem.mode {
        Mode::ExactSnapshot => {
            let (table, summary) = report::exact_snapshot(&problem)?;
            out.table(&table)?;
            out.summary(&summary)
        }
        Mode::WaveCurves => {
            let tables = report::wave_curves(&problem);
            match out.table {
                Some(p) if tables.len() == 1 => write(p, &tables[0].csv),
                Some(p) => tables
                    .iter()
                    .enumerate()
                    .try_for_each(|(k, t)| write(&numbered(p, k), &t.csv)),
                None => {
                    let mut all = String::new();
                    for (k, t) in tables.iter().enumerate() {
                        all.push_str(&format!("# curve {k}: {}\n", t.label));
                        all.push_str(&t.csv);
                    }
                    out.table(&all)
                }
            }
        }
        Mode::Godunov => {
            let (table, summary) = report::godunov(&problem)?;
            out.table(&table)?;
            out.summary(&summary)
        }
        Mode::Convergence => out.table(&report::convergence(&problem)?),
    }
}
