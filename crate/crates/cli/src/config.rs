//! Problem configuration: JSON file plus command-line overrides.

use serde::Deserialize;
use urriemann::{EosParamsF64, PrimStateF64, SchemeConfig};

use crate::error::CliError;

/// A number given either as a JSON number or as a string (`"1/3"`, `"0.25"`).
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    pub fn value(&self, field: &str) -> Result<f64, CliError> {
        match self {
            Scalar::Number(x) => Ok(*x),
            Scalar::Text(s) => {
                parse_scalar(s).map_err(|e| CliError::Config(format!("{field}: {e}")))
            }
        }
    }
}

/// Parses a decimal or a rational `p/q`.
pub fn parse_scalar(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {s:?} as a number"))
    };
    let x = match t.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (num(p)?, num(q)?);
            if q == 0.0 {
                return Err(format!("zero denominator in {t:?}"));
            }
            p / q
        }
        None => num(t)?,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{t:?} is not finite"))
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    ExactSnapshot,
    WaveCurves,
    Godunov,
    Convergence,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact-snapshot" => Ok(Mode::ExactSnapshot),
            "wave-curves" => Ok(Mode::WaveCurves),
            "godunov" => Ok(Mode::Godunov),
            "convergence" => Ok(Mode::Convergence),
            _ => Err(format!(
                "unknown mode {s:?} (expected exact-snapshot, wave-curves, godunov or convergence)"
            )),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub rho: f64,
    pub vx: f64,
    #[serde(default)]
    pub vt: f64,
    /// Direction of the tangential velocity in the y-z plane, radians.
    #[serde(default)]
    pub angle: f64,
}

impl StateConfig {
    fn build(&self, field: &str) -> Result<PrimStateF64, CliError> {
        PrimStateF64::with_angle(self.rho, self.vx, self.vt, self.angle)
            .map_err(|e| CliError::Config(format!("{field}: {e}")))
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "minus_one")]
    pub x_min: f64,
    #[serde(default = "one")]
    pub x_max: f64,
    #[serde(default = "default_points")]
    pub n_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            x_min: -1.0,
            x_max: 1.0,
            n_points: default_points(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SchemeOptions {
    #[serde(default = "half")]
    pub cfl: f64,
    #[serde(default = "default_cells")]
    pub n_cells: usize,
    /// Final time; defaults to the snapshot time `t`.
    pub t_end: Option<f64>,
    #[serde(default = "default_resolutions")]
    pub resolutions: Vec<usize>,
    #[serde(default = "minus_one")]
    pub x_min: f64,
    #[serde(default = "one")]
    pub x_max: f64,
}

impl Default for SchemeOptions {
    fn default() -> Self {
        Self {
            cfl: 0.5,
            n_cells: default_cells(),
            t_end: None,
            resolutions: default_resolutions(),
            x_min: -1.0,
            x_max: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FamilyConfig {
    Left,
    Right,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub family: FamilyConfig,
    pub rho: f64,
    pub vx: f64,
    #[serde(default)]
    pub vt: f64,
    #[serde(default)]
    pub angle: f64,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CurvesOptions {
    #[serde(default = "curve_lo")]
    pub vx_min: f64,
    #[serde(default = "curve_hi")]
    pub vx_max: f64,
    #[serde(default = "default_curve_points")]
    pub n_points: usize,
    /// Curves to tabulate; defaults to the left curve of `left` and the right curve of `right`.
    #[serde(default)]
    pub states: Vec<CurveConfig>,
}

impl Default for CurvesOptions {
    fn default() -> Self {
        Self {
            vx_min: curve_lo(),
            vx_max: curve_hi(),
            n_points: default_curve_points(),
            states: Vec::new(),
        }
    }
}

/// Raw configuration as read from JSON.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default = "default_cs2")]
    pub cs2: Scalar,
    #[serde(default = "default_left")]
    pub left: StateConfig,
    #[serde(default = "default_right")]
    pub right: StateConfig,
    #[serde(default = "one")]
    pub t: f64,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub scheme: SchemeOptions,
    #[serde(default)]
    pub curves: CurvesOptions,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config uses defaults")
    }
}

fn default_cs2() -> Scalar {
    Scalar::Text("1/3".into())
}
fn default_left() -> StateConfig {
    StateConfig {
        rho: 1.0,
        vx: 0.5,
        vt: 1.0 / 3.0,
        angle: 0.0,
    }
}
fn default_right() -> StateConfig {
    StateConfig {
        rho: 20.0,
        vx: 0.5,
        vt: 0.5,
        angle: 0.0,
    }
}
fn one() -> f64 {
    1.0
}
fn minus_one() -> f64 {
    -1.0
}
fn half() -> f64 {
    0.5
}
fn default_points() -> usize {
    2001
}
fn default_cells() -> usize {
    400
}
fn default_resolutions() -> Vec<usize> {
    vec![100, 200, 400, 800]
}
fn curve_lo() -> f64 {
    -0.999
}
fn curve_hi() -> f64 {
    0.999
}
fn default_curve_points() -> usize {
    1999
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Parses `rho,vx,vt[,angle]`.
pub fn parse_state(text: &str) -> Result<StateConfig, String> {
    let parts = text
        .split(',')
        .map(parse_scalar)
        .collect::<Result<Vec<_>, _>>()?;
    match parts[..] {
        [rho, vx] => Ok(StateConfig {
            rho,
            vx,
            vt: 0.0,
            angle: 0.0,
        }),
        [rho, vx, vt] => Ok(StateConfig {
            rho,
            vx,
            vt,
            angle: 0.0,
        }),
        [rho, vx, vt, angle] => Ok(StateConfig { rho, vx, vt, angle }),
        _ => Err(format!("expected rho,vx[,vt[,angle]], got {text:?}")),
    }
}

/// A curve to tabulate in wave-curves mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSpec {
    pub family: urriemann::Family,
    pub ahead: PrimStateF64,
}

/// Validated problem, ready to run.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub mode: Mode,
    pub eos: EosParamsF64,
    pub left: PrimStateF64,
    pub right: PrimStateF64,
    pub t: f64,
    pub grid: GridConfig,
    pub scheme: SchemeConfig<f64>,
    pub n_cells: usize,
    pub resolutions: Vec<usize>,
    pub domain: (f64, f64),
    pub curves: Vec<CurveSpec>,
    pub curve_grid: (f64, f64, usize),
}

impl ProblemConfig {
    /// Checks every field before any computation starts.
    pub fn validate(&self) -> Result<Problem, CliError> {
        let bad = |field: &str, why: String| CliError::Config(format!("{field}: {why}"));
        let cs2 = self.cs2.value("cs2")?;
        let eos = EosParamsF64::new(cs2).map_err(|e| bad("cs2", e.to_string()))?;
        let left = self.left.build("left")?;
        let right = self.right.build("right")?;
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(bad("t", format!("must be positive, got {}", self.t)));
        }
        let g = &self.grid;
        if self.mode == Mode::ExactSnapshot {
            if g.n_points == 0 {
                return Err(bad("grid.n_points", "must be at least 1".into()));
            }
            if !(g.x_max >= g.x_min) || !g.x_min.is_finite() || !g.x_max.is_finite() {
                return Err(bad(
                    "grid",
                    format!("invalid range [{}, {}]", g.x_min, g.x_max),
                ));
            }
        }
        let s = &self.scheme;
        let t_end = s.t_end.unwrap_or(self.t);
        let scheme = SchemeConfig::new(s.cfl, t_end).map_err(|e| bad("scheme", e.to_string()))?;
        if !(s.x_max > s.x_min) {
            return Err(bad(
                "scheme",
                format!("invalid domain [{}, {}]", s.x_min, s.x_max),
            ));
        }
        if s.n_cells < 2 {
            return Err(bad(
                "scheme.n_cells",
                format!("need at least 2 cells, got {}", s.n_cells),
            ));
        }
        if self.mode == Mode::Convergence {
            if s.resolutions.is_empty() || s.resolutions.iter().any(|&n| n < 2) {
                return Err(bad(
                    "scheme.resolutions",
                    format!("invalid list {:?}", s.resolutions),
                ));
            }
            if s.resolutions.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad(
                    "scheme.resolutions",
                    format!("must be strictly ascending, got {:?}", s.resolutions),
                ));
            }
        }
        let c = &self.curves;
        if c.n_points == 0 || !(c.vx_min > -1.0 && c.vx_max < 1.0 && c.vx_min <= c.vx_max) {
            return Err(bad(
                "curves",
                format!(
                    "need n_points >= 1 and -1 < vx_min <= vx_max < 1, got [{}, {}], {}",
                    c.vx_min, c.vx_max, c.n_points
                ),
            ));
        }
        let curves = if c.states.is_empty() {
            vec![
                CurveSpec {
                    family: urriemann::Family::Left,
                    ahead: left,
                },
                CurveSpec {
                    family: urriemann::Family::Right,
                    ahead: right,
                },
            ]
        } else {
            c.states
                .iter()
                .enumerate()
                .map(|(i, cc)| {
                    Ok(CurveSpec {
                        family: match cc.family {
                            FamilyConfig::Left => urriemann::Family::Left,
                            FamilyConfig::Right => urriemann::Family::Right,
                        },
                        ahead: StateConfig {
                            rho: cc.rho,
                            vx: cc.vx,
                            vt: cc.vt,
                            angle: cc.angle,
                        }
                        .build(&format!("curves.states[{i}]"))?,
                    })
                })
                .collect::<Result<_, CliError>>()?
        };
        Ok(Problem {
            mode: self.mode,
            eos,
            left,
            right,
            t: self.t,
            grid: g.clone(),
            scheme,
            n_cells: s.n_cells,
            resolutions: s.resolutions.clone(),
            domain: (s.x_min, s.x_max),
            curves,
            curve_grid: (c.vx_min, c.vx_max, c.n_points),
        })
    }
}
