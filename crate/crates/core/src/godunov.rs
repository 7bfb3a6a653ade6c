//! First-order Godunov finite-volume scheme driven by the exact solver.

use rayon::prelude::*;

use crate::eos::EosParams;
use crate::error::{Error, Result};
use crate::riemann::{solve, RiemannSolution};
use crate::scalar::{CompensatedSum, Real};
use crate::state::{ConsState, Flux, PrimState};

/// Boundary treatment at both ends of the grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Boundary {
    /// Zero-gradient extrapolation of the edge cell.
    #[default]
    Outflow,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeConfig<T> {
    pub cfl: T,
    pub t_end: T,
    pub boundary: Boundary,
}

impl<T: Real> SchemeConfig<T> {
    pub fn new(cfl: T, t_end: T) -> Result<Self> {
        if !(cfl > T::zero() && cfl <= T::one()) {
            return Err(Error::Domain(format!(
                "CFL number must lie in (0, 1], got {}",
                cfl.as_f64()
            )));
        }
        if !(t_end >= T::zero() && t_end.is_finite()) {
            return Err(Error::Domain(format!(
                "final time must be non-negative, got {}",
                t_end.as_f64()
            )));
        }
        Ok(Self {
            cfl,
            t_end,
            boundary: Boundary::Outflow,
        })
    }
}

/// Uniform one-dimensional grid of cell-averaged conserved states.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid1D<T> {
    x_min: T,
    x_max: T,
    cells: Vec<ConsState<T>>,
    time: T,
}

impl<T: Real> Grid1D<T> {
    pub fn new(x_min: T, x_max: T, cells: Vec<ConsState<T>>) -> Result<Self> {
        if cells.len() < 2 {
            return Err(Error::Domain(format!(
                "grid needs at least 2 cells, got {}",
                cells.len()
            )));
        }
        if !(x_max > x_min) {
            return Err(Error::Domain(format!(
                "empty domain [{}, {}]",
                x_min.as_f64(),
                x_max.as_f64()
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            cells,
            time: T::zero(),
        })
    }

    /// Riemann initial data with the discontinuity at `x = 0`.
    ///
    /// A cell cut by the interface gets the exact average of both states.
    pub fn riemann(
        left: &PrimState<T>,
        right: &PrimState<T>,
        n_cells: usize,
        x_min: T,
        x_max: T,
        eos: &EosParams<T>,
    ) -> Result<Self> {
        let (ul, ur) = (left.to_cons(eos), right.to_cons(eos));
        let h = (x_max - x_min) / T::from_usize(n_cells.max(1)).unwrap();
        let cells = (0..n_cells)
            .map(|i| {
                let a = x_min + h * T::from_usize(i).unwrap();
                let b = a + h;
                let frac_left = ((T::zero() - a) / h).max(T::zero()).min(T::one());
                if b <= T::zero() {
                    ul
                } else if a >= T::zero() {
                    ur
                } else {
                    ul * frac_left + ur * (T::one() - frac_left)
                }
            })
            .collect();
        Self::new(x_min, x_max, cells)
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn spacing(&self) -> T {
        (self.x_max - self.x_min) / T::from_usize(self.cells.len()).unwrap()
    }

    pub fn bounds(&self) -> (T, T) {
        (self.x_min, self.x_max)
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn cells(&self) -> &[ConsState<T>] {
        &self.cells
    }

    pub fn centers(&self) -> Vec<T> {
        let h = self.spacing();
        let half = T::lit(0.5);
        (0..self.cells.len())
            .map(|i| self.x_min + h * (T::from_usize(i).unwrap() + half))
            .collect()
    }

    pub fn primitives(&self, eos: &EosParams<T>) -> Result<Vec<PrimState<T>>> {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.to_prim(eos).map_err(|e| Error::Positivity {
                    cell: i,
                    reason: format!("{e} (E = {}, Sx = {})", c.energy.as_f64(), c.sx.as_f64()),
                })
            })
            .collect()
    }

    /// Grid totals `h * sum(U)` of the four conserved quantities.
    pub fn totals(&self) -> [T; 4] {
        let h = self.spacing();
        let mut acc = [CompensatedSum::new(); 4];
        for c in &self.cells {
            for (a, x) in acc.iter_mut().zip(c.as_array()) {
                a.add(x);
            }
        }
        acc.map(|a| a.value() * h)
    }
}

/// Godunov flux: the physical flux of the exact solution at `xi = 0`.
pub fn interface_flux<T: Real>(
    left: &PrimState<T>,
    right: &PrimState<T>,
    eos: &EosParams<T>,
) -> Result<Flux<T>> {
    if left == right {
        return Ok(left.flux_x(eos));
    }
    Ok(solve(*left, *right, *eos)?.sample(T::zero())?.flux_x(eos))
}

/// Outcome of one time step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepReport<T> {
    pub dt: T,
    /// Fluxes through the left and right domain boundaries.
    pub boundary_flux: (Flux<T>, Flux<T>),
}

/// Advances the grid by one CFL-limited step, clipped to `cfg.t_end`.
pub fn step<T: Real>(
    grid: &mut Grid1D<T>,
    cfg: &SchemeConfig<T>,
    eos: &EosParams<T>,
) -> Result<StepReport<T>> {
    let prims = grid.primitives(eos)?;
    let n = prims.len();
    let h = grid.spacing();
    let smax = prims.iter().fold(T::zero(), |m, p| {
        let (a, _, b) = p.eigenvalues(eos);
        m.max(a.abs()).max(b.abs())
    });
    let remaining = cfg.t_end - grid.time;
    let mut dt = (cfg.cfl * h / smax).min(remaining.max(T::zero()));
    if !(dt > T::zero()) {
        let zero = prims[0].flux_x(eos);
        return Ok(StepReport {
            dt: T::zero(),
            boundary_flux: (zero, prims[n - 1].flux_x(eos)),
        });
    }

    let fluxes = (0..=n)
        .into_par_iter()
        .map(|i| {
            let l = &prims[i.saturating_sub(1)];
            let r = &prims[i.min(n - 1)];
            interface_flux(l, r, eos)
        })
        .collect::<Result<Vec<_>>>()?;

    let lambda = dt / h;
    let updated: Vec<ConsState<T>> = grid
        .cells
        .iter()
        .zip(fluxes.windows(2))
        .map(|(u, f)| {
            let (fl, fr) = (f[0], f[1]);
            ConsState::new(
                u.energy - lambda * (fr.energy - fl.energy),
                u.sx - lambda * (fr.sx - fl.sx),
                u.sy - lambda * (fr.sy - fl.sy),
                u.sz - lambda * (fr.sz - fl.sz),
            )
        })
        .collect();
    for (i, c) in updated.iter().enumerate() {
        c.to_prim(eos).map_err(|e| Error::Positivity {
            cell: i,
            reason: e.to_string(),
        })?;
    }
    grid.cells = updated;
    if dt >= remaining {
        dt = remaining;
        grid.time = cfg.t_end;
    } else {
        grid.time = grid.time + dt;
    }
    Ok(StepReport {
        dt,
        boundary_flux: (fluxes[0], fluxes[n]),
    })
}

/// Bookkeeping of a full evolution.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolveReport<T> {
    pub steps: usize,
    pub initial_totals: [T; 4],
    /// Time-integrated net outflow `int (F_right - F_left) dt`.
    pub boundary_transport: [T; 4],
}

impl<T: Real> EvolveReport<T> {
    /// Relative drift of each total after correcting for boundary fluxes.
    pub fn conservation_error(&self, grid: &Grid1D<T>) -> [T; 4] {
        let now = grid.totals();
        let mut out = [T::zero(); 4];
        for k in 0..4 {
            let expected = self.initial_totals[k] - self.boundary_transport[k];
            let scale = self.initial_totals[k]
                .abs()
                .max(now[k].abs())
                .max(self.boundary_transport[k].abs())
                .max(T::min_positive_value());
            out[k] = (now[k] - expected).abs() / scale;
        }
        out
    }
}

/// Steps until `cfg.t_end`.
pub fn evolve<T: Real>(
    grid: &mut Grid1D<T>,
    cfg: &SchemeConfig<T>,
    eos: &EosParams<T>,
) -> Result<EvolveReport<T>> {
    let initial_totals = grid.totals();
    let mut transport = [CompensatedSum::new(); 4];
    let mut steps = 0;
    while grid.time < cfg.t_end {
        let rep = step(grid, cfg, eos)?;
        if rep.dt == T::zero() {
            break;
        }
        let (fl, fr) = rep.boundary_flux;
        for (k, acc) in transport.iter_mut().enumerate() {
            acc.add(rep.dt * fr.as_array()[k]);
            acc.add(-(rep.dt * fl.as_array()[k]));
        }
        steps += 1;
    }
    Ok(EvolveReport {
        steps,
        initial_totals,
        boundary_transport: transport.map(|a| a.value()),
    })
}

/// Godunov run of a Riemann problem alongside its exact solution.
#[derive(Clone, Debug)]
pub struct RiemannRun<T> {
    pub grid: Grid1D<T>,
    pub report: EvolveReport<T>,
    pub exact: RiemannSolution<T>,
}

impl<T: Real> RiemannRun<T> {
    /// Exact solution at the cell centres at the final time.
    pub fn exact_at_centers(&self) -> Result<Vec<PrimState<T>>> {
        let t = self.grid.time();
        if t > T::zero() {
            self.exact.snapshot(t, &self.grid.centers())
        } else {
            Ok(self
                .grid
                .centers()
                .iter()
                .map(|&x| {
                    if x < T::zero() {
                        *self.exact.left()
                    } else {
                        *self.exact.right()
                    }
                })
                .collect())
        }
    }
}

pub fn run_riemann<T: Real>(
    left: PrimState<T>,
    right: PrimState<T>,
    eos: EosParams<T>,
    n_cells: usize,
    domain: (T, T),
    cfg: &SchemeConfig<T>,
) -> Result<RiemannRun<T>> {
    let exact = solve(left, right, eos)?;
    let (lo, hi) = exact.extreme_speeds();
    if lo * cfg.t_end < domain.0 || hi * cfg.t_end > domain.1 {
        log::warn!(
            "fastest waves reach x = {} / {} by t = {}, outside the domain [{}, {}]",
            (lo * cfg.t_end).as_f64(),
            (hi * cfg.t_end).as_f64(),
            cfg.t_end.as_f64(),
            domain.0.as_f64(),
            domain.1.as_f64()
        );
    }
    let mut grid = Grid1D::riemann(&left, &right, n_cells, domain.0, domain.1, &eos)?;
    let report = evolve(&mut grid, cfg, &eos)?;
    Ok(RiemannRun {
        grid,
        report,
        exact,
    })
}

/// L1 errors of one resolution in a convergence study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow<T> {
    pub n: usize,
    pub l1_rho: T,
    pub l1_vx: T,
    pub l1_vt: T,
    /// `l1_rho` of the previous (coarser) row divided by this one.
    pub ratio: Option<T>,
}

/// Discrete L1 distances `h * sum |q_i - q_exact(x_i)|` at the final time.
pub fn l1_errors<T: Real>(run: &RiemannRun<T>, eos: &EosParams<T>) -> Result<[T; 3]> {
    let h = run.grid.spacing();
    let num = run.grid.primitives(eos)?;
    let exact = run.exact_at_centers()?;
    let mut acc = [CompensatedSum::new(); 3];
    for (a, b) in num.iter().zip(&exact) {
        acc[0].add((a.rho() - b.rho()).abs());
        acc[1].add((a.vx() - b.vx()).abs());
        acc[2].add((a.vt() - b.vt()).abs());
    }
    Ok(acc.map(|s| s.value() * h))
}

/// Runs the scheme at every resolution and reports L1 errors against the exact solution.
pub fn run_convergence<T: Real>(
    left: PrimState<T>,
    right: PrimState<T>,
    eos: EosParams<T>,
    resolutions: &[usize],
    domain: (T, T),
    cfg: &SchemeConfig<T>,
) -> Result<Vec<ConvergenceRow<T>>> {
    if resolutions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!(
            "resolutions must be strictly ascending, got {resolutions:?}"
        )));
    }
    let mut rows: Vec<ConvergenceRow<T>> = Vec::with_capacity(resolutions.len());
    for &n in resolutions {
        let run = run_riemann(left, right, eos, n, domain, cfg)?;
        let [l1_rho, l1_vx, l1_vt] = l1_errors(&run, &eos)?;
        let ratio = rows.last().map(|p| p.l1_rho / l1_rho);
        rows.push(ConvergenceRow {
            n,
            l1_rho,
            l1_vx,
            l1_vt,
            ratio,
        });
    }
    Ok(rows)
}
