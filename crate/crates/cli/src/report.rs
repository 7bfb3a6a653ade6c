//! Table and summary writers for every mode.
//!
//! Floats are written with `{:.16e}` (17 significant digits) so that tables
//! round-trip exactly and byte-compare across runs.

use std::fmt::Write as _;

use serde::Serialize;
use urriemann::{
    run_convergence, run_riemann, solve, Branch, PrimStateF64, RiemannSolutionF64, Wave, WaveCurve,
};

use crate::config::Problem;
use crate::error::CliError;

pub const SNAPSHOT_HEADER: &str = "x,xi,rho,p,vx,vt,W";

fn num(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").expect("write to String");
}

fn row(out: &mut String, values: &[f64]) {
    for (i, &v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        num(out, v);
    }
    out.push('\n');
}

/// `n` points from `a` to `b`; symmetric ranges give exactly negated points.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let m = (n - 1) as f64;
            (0..n)
                .map(|i| (a * (m - i as f64) + b * i as f64) / m)
                .collect()
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StarSummary {
    pub vx: f64,
    pub rho: f64,
    #[serde(rename = "vtL")]
    pub vt_left: f64,
    #[serde(rename = "vtR")]
    pub vt_right: f64,
}

#[derive(Debug, Serialize)]
pub struct WaveSummary {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub speeds: Vec<f64>,
}

impl From<&Wave<f64>> for WaveSummary {
    fn from(w: &Wave<f64>) -> Self {
        Self {
            kind: w.name(),
            speeds: w.speeds(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Waves {
    pub left: WaveSummary,
    pub right: WaveSummary,
}

#[derive(Debug, Serialize)]
pub struct SolutionSummary {
    pub pattern: String,
    pub star: StarSummary,
    pub waves: Waves,
}

impl From<&RiemannSolutionF64> for SolutionSummary {
    fn from(s: &RiemannSolutionF64) -> Self {
        Self {
            pattern: s.pattern(),
            star: StarSummary {
                vx: s.star_vx(),
                rho: s.star_rho(),
                vt_left: s.left_star().vt(),
                vt_right: s.right_star().vt(),
            },
            waves: Waves {
                left: s.left_wave().into(),
                right: s.right_wave().into(),
            },
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("summary serializes");
    s.push('\n');
    s
}

fn state_columns(p: &PrimStateF64, problem: &Problem) -> [f64; 5] {
    [
        p.rho(),
        p.pressure(&problem.eos),
        p.vx(),
        p.vt(),
        p.lorentz(),
    ]
}

/// Exact profile at time `t`: table and JSON summary.
pub fn exact_snapshot(problem: &Problem) -> Result<(String, String), CliError> {
    let sol = solve(problem.left, problem.right, problem.eos)?;
    let xs = linspace(
        problem.grid.x_min,
        problem.grid.x_max,
        problem.grid.n_points,
    );
    let states = sol.snapshot(problem.t, &xs)?;
    let mut out = String::with_capacity(xs.len() * 128);
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for (x, p) in xs.iter().zip(&states) {
        let [rho, pr, vx, vt, w] = state_columns(p, problem);
        row(&mut out, &[*x, x / problem.t, rho, pr, vx, vt, w]);
    }
    Ok((out, to_json(&SolutionSummary::from(&sol))))
}

/// One tabulated wave curve.
#[derive(Debug)]
pub struct CurveTable {
    pub label: String,
    pub csv: String,
}

/// `vx, rho, branch` rows for every configured curve. Points past the vacuum
/// limit of a rarefaction branch are written as `rho = 0`, branch `vacuum`.
pub fn wave_curves(problem: &Problem) -> Vec<CurveTable> {
    let (lo, hi, n) = problem.curve_grid;
    problem
        .curves
        .iter()
        .map(|spec| {
            let curve = WaveCurve::new(spec.ahead, spec.family, problem.eos);
            let grid = if n == 1 {
                vec![spec.ahead.vx()]
            } else {
                linspace(lo, hi, n)
            };
            let mut csv = String::from("vx,rho,branch\n");
            for vx in grid {
                let (rho, tag) = match curve.eval(vx) {
                    Ok(rho) => (
                        rho,
                        match curve.branch(vx) {
                            Branch::Shock => "shock",
                            Branch::Rarefaction => "rarefaction",
                        },
                    ),
                    Err(_) => (0.0, "vacuum"),
                };
                num(&mut csv, vx);
                csv.push(',');
                num(&mut csv, rho);
                csv.push(',');
                csv.push_str(tag);
                csv.push('\n');
            }
            let a = spec.ahead;
            let label = format!(
                "{} family, ahead rho={:e} vx={:e} vt={:e}",
                match spec.family {
                    urriemann::Family::Left => "left",
                    urriemann::Family::Right => "right",
                },
                a.rho(),
                a.vx(),
                a.vt()
            );
            CurveTable { label, csv }
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct GodunovSummary {
    n_cells: usize,
    steps: usize,
    t: f64,
    conservation_error: [f64; 4],
    l1: L1,
    exact: SolutionSummary,
}

#[derive(Debug, Serialize)]
struct L1 {
    rho: f64,
    vx: f64,
    vt: f64,
}

/// Final-time cell averages next to the exact solution.
pub fn godunov(problem: &Problem) -> Result<(String, String), CliError> {
    let run = run_riemann(
        problem.left,
        problem.right,
        problem.eos,
        problem.n_cells,
        problem.domain,
        &problem.scheme,
    )?;
    let num_states = run.grid.primitives(&problem.eos)?;
    let exact = run.exact_at_centers()?;
    let mut out = String::from("x,rho,vx,vt,rho_exact,vx_exact,vt_exact,err_rho,err_vx,err_vt\n");
    for ((x, a), b) in run.grid.centers().iter().zip(&num_states).zip(&exact) {
        row(
            &mut out,
            &[
                *x,
                a.rho(),
                a.vx(),
                a.vt(),
                b.rho(),
                b.vx(),
                b.vt(),
                a.rho() - b.rho(),
                a.vx() - b.vx(),
                a.vt() - b.vt(),
            ],
        );
    }
    let [rho, vx, vt] = urriemann::godunov::l1_errors(&run, &problem.eos)?;
    let summary = GodunovSummary {
        n_cells: problem.n_cells,
        steps: run.report.steps,
        t: run.grid.time(),
        conservation_error: run.report.conservation_error(&run.grid),
        l1: L1 { rho, vx, vt },
        exact: SolutionSummary::from(&run.exact),
    };
    Ok((out, to_json(&summary)))
}

/// `n, L1_rho, L1_vx, L1_vt, ratio`; the ratio of the first row is empty.
pub fn convergence(problem: &Problem) -> Result<String, CliError> {
    let rows = run_convergence(
        problem.left,
        problem.right,
        problem.eos,
        &problem.resolutions,
        problem.domain,
        &problem.scheme,
    )?;
    let mut out = String::from("n,L1_rho,L1_vx,L1_vt,ratio\n");
    for r in rows {
        write!(out, "{},", r.n).expect("write to String");
        for v in [r.l1_rho, r.l1_vx, r.l1_vt] {
            num(&mut out, v);
            out.push(',');
        }
        if let Some(q) = r.ratio {
            num(&mut out, q);
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct OverlaySummary {
    points: usize,
    max_abs: Columns,
    l1: Columns,
}

#[derive(Debug, Default, Serialize)]
#[allow(non_snake_case)]
struct Columns {
    rho: f64,
    p: f64,
    vx: f64,
    vt: f64,
    W: f64,
}

/// Reads a profile in the snapshot schema (column order free, `xi` optional).
pub fn read_profile(text: &str) -> Result<Vec<[f64; 6]>, CliError> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| CliError::Config("overlay: empty file".into()))?
        .split(',')
        .map(str::trim)
        .collect();
    let idx = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| CliError::Config(format!("overlay: missing column {name:?}")))
    };
    let cols = [
        idx("x")?,
        idx("rho")?,
        idx("p")?,
        idx("vx")?,
        idx("vt")?,
        idx("W")?,
    ];
    lines
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let mut v = [0.0; 6];
            for (k, &c) in cols.iter().enumerate() {
                let f = fields.get(c).ok_or_else(|| {
                    CliError::Config(format!("overlay line {}: too few fields", i + 2))
                })?;
                v[k] = f.parse().map_err(|_| {
                    CliError::Config(format!("overlay line {}: bad number {f:?}", i + 2))
                })?;
            }
            Ok(v)
        })
        .collect()
}

/// Pointwise `overlay - exact` at the overlay's positions, with norms.
pub fn overlay_difference(
    problem: &Problem,
    overlay: &[[f64; 6]],
) -> Result<(String, String), CliError> {
    let sol = solve(problem.left, problem.right, problem.eos)?;
    let xs: Vec<f64> = overlay.iter().map(|r| r[0]).collect();
    let exact = sol.snapshot(problem.t, &xs)?;
    let mut out = String::from("x,d_rho,d_p,d_vx,d_vt,d_W\n");
    let mut max_abs = [0.0f64; 5];
    let mut l1 = [0.0f64; 5];
    for (k, (r, e)) in overlay.iter().zip(&exact).enumerate() {
        let ex = state_columns(e, problem);
        let d: Vec<f64> = (0..5).map(|j| r[j + 1] - ex[j]).collect();
        let dx = if overlay.len() < 2 {
            0.0
        } else if k == 0 {
            (xs[1] - xs[0]) / 2.0
        } else if k + 1 == xs.len() {
            (xs[k] - xs[k - 1]) / 2.0
        } else {
            (xs[k + 1] - xs[k - 1]) / 2.0
        };
        for j in 0..5 {
            max_abs[j] = max_abs[j].max(d[j].abs());
            l1[j] += d[j].abs() * dx.abs();
        }
        let mut vals = vec![r[0]];
        vals.extend(d);
        row(&mut out, &vals);
    }
    let cols = |a: [f64; 5]| Columns {
        rho: a[0],
        p: a[1],
        vx: a[2],
        vt: a[3],
        W: a[4],
    };
    let summary = OverlaySummary {
        points: overlay.len(),
        max_abs: cols(max_abs),
        l1: cols(l1),
    };
    Ok((out, to_json(&summary)))
}
