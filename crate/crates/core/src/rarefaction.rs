//! Rarefaction wave curves in closed form.
//!
//! Through a rarefaction the tangential invariant `a = rho^kappa W vt` is
//! constant and `W^2 (1 - vx^2) = 1 + a^2 rho^(-2 kappa)`. Integrating the
//! characteristic relation gives, for `a = 0`,
//!
//! ```text
//! ((1 + vx) / (1 - vx))^(+-1/2) = C1 rho^(kappa / cs)
//! ```
//!
//! and for `a > 0` a relation in `B = sqrt(1 + (1 - cs2) a^2 rho^(-2 kappa))`.
//! The latter is evaluated in logarithmic form on the variable
//! `w = ln((1 - cs2) a^2 rho^(-2 kappa))`, with the absolute values of the
//! closed form made explicit:
//!
//! ```text
//! +-2 artanh(vx) = Psi(w) + const,
//! Psi(w) = (ln(1 + e^-w) + 2 ln(1 + 1/B)) / cs + ln((B - cs) / (B + cs)).
//! ```
//!
//! `Psi` decreases monotonically from `+inf` to `0`, so a rarefaction with
//! `a > 0` reaches vacuum at a finite normal velocity.

use crate::eos::{check_density, EosParams};
use crate::error::{Error, Result};
use crate::roots::brent;
use crate::scalar::{softplus, Real};
use crate::state::{Family, PrimState};

/// Density below which a rarefaction is reported as having reached vacuum.
pub const DEFAULT_VACUUM_FLOOR: f64 = 1e-300;

const MAX_ITER: usize = 200;

/// Rarefaction curve `rho(vx)` through a given ahead state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RarefactionCurve<T> {
    ahead: PrimState<T>,
    eos: EosParams<T>,
    family: Family,
    invariant: T,
    rapidity: T,
    ln_rho: T,
    /// `w` and `Psi(w)` at the ahead state, present when `a > 0`.
    tangential: Option<(T, T)>,
    floor: T,
}

impl<T: Real> RarefactionCurve<T> {
    pub fn new(ahead: PrimState<T>, family: Family, eos: EosParams<T>) -> Self {
        let kappa = eos.kappa();
        let w_rest = ahead.lorentz();
        let invariant = ahead.rho().powf(kappa) * w_rest * ahead.vt();
        let tangential = if ahead.vt() > T::zero() {
            let gvt = w_rest * ahead.vt();
            let w = (T::one() - eos.cs2()).ln() + T::lit(2.0) * gvt.ln();
            Some((w, psi(w, &eos)))
        } else {
            None
        };
        Self {
            ahead,
            eos,
            family,
            invariant,
            rapidity: ahead.vx().artanh(),
            ln_rho: ahead.rho().ln(),
            tangential,
            floor: T::lit(DEFAULT_VACUUM_FLOOR).max(T::min_positive_value()),
        }
    }

    /// Overrides the vacuum density floor.
    pub fn with_vacuum_floor(mut self, floor: T) -> Self {
        self.floor = floor;
        self
    }

    pub fn ahead(&self) -> &PrimState<T> {
        &self.ahead
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn eos(&self) -> &EosParams<T> {
        &self.eos
    }

    /// Tangential invariant `a = rho^kappa W vt` of the ahead state.
    pub fn invariant(&self) -> T {
        self.invariant
    }

    /// `W^2 (1 - vx^2) = 1 + a^2 rho^(-2 kappa)` along the curve.
    pub fn rtilde(&self, rho: T) -> Result<T> {
        check_density(rho)?;
        if self.invariant == T::zero() {
            return Ok(T::one());
        }
        Ok(T::one() + self.invariant.powi(2) * rho.powf(-T::lit(2.0) * self.eos.kappa()))
    }

    fn sigma(&self) -> T {
        self.family.sign()
    }

    fn w_of_ln_rho(&self, w_ahead: T, y: T) -> T {
        w_ahead - T::lit(2.0) * self.eos.kappa() * (y - self.ln_rho)
    }

    fn ln_rho_of_w(&self, w_ahead: T, w: T) -> T {
        self.ln_rho - (w - w_ahead) / (T::lit(2.0) * self.eos.kappa())
    }

    /// Rapidity `artanh(vx)` reached on the curve at log-density `y`.
    pub(crate) fn rapidity_at_ln_rho(&self, y: T) -> T {
        match self.tangential {
            None => {
                self.rapidity + self.sigma() * self.eos.kappa() / self.eos.cs() * (y - self.ln_rho)
            }
            Some((w0, psi0)) => {
                let w = self.w_of_ln_rho(w0, y);
                self.rapidity + self.sigma() * (psi(w, &self.eos) - psi0) / T::lit(2.0)
            }
        }
    }

    /// Rapidity at which the curve reaches vacuum, if it does.
    pub fn vacuum_rapidity(&self) -> Option<T> {
        self.tangential
            .map(|(_, psi0)| self.rapidity - self.sigma() * psi0 / T::lit(2.0))
    }

    fn check_side(&self, rapidity: T) -> Result<()> {
        let slack = T::tol(1e-14, 8.0) * (T::one() + self.rapidity.abs());
        if self.sigma() * (rapidity - self.rapidity) > slack {
            return Err(Error::Domain(format!(
                "vx = {} lies on the shock side of the {:?} rarefaction through vx = {}",
                rapidity.tanh().as_f64(),
                self.family,
                self.ahead.vx().as_f64()
            )));
        }
        Ok(())
    }

    /// Log-density behind the wave for a post-wave rapidity on the rarefaction side.
    ///
    /// No vacuum floor is applied, only the true vacuum limit.
    pub(crate) fn ln_rho_at_rapidity(&self, rapidity: T) -> Result<T> {
        self.check_side(rapidity)?;
        let sigma = self.sigma();
        let Some((w0, psi0)) = self.tangential else {
            return Ok(
                self.ln_rho + sigma * self.eos.cs() / self.eos.kappa() * (rapidity - self.rapidity)
            );
        };
        let target = (psi0 + T::lit(2.0) * sigma * (rapidity - self.rapidity)).min(psi0);
        if !(target > T::zero()) {
            return Err(Error::VacuumLimit {
                vx: rapidity.tanh().as_f64(),
            });
        }
        let w = invert_psi(target, w0, &self.eos)?;
        Ok(self.ln_rho_of_w(w0, w))
    }

    /// Energy density behind the wave as a function of the post-wave normal velocity.
    pub fn rho_of_vx(&self, vx: T) -> Result<T> {
        if !(vx.abs() < T::one()) {
            return Err(Error::Domain(format!(
                "normal velocity {} outside (-1, 1)",
                vx.as_f64()
            )));
        }
        let y = self.ln_rho_at_rapidity(vx.artanh())?;
        let rho = y.exp();
        if !(rho >= self.floor) {
            return Err(Error::VacuumLimit { vx: vx.as_f64() });
        }
        Ok(rho.min(self.ahead.rho()))
    }

    /// Inverse of [`rho_of_vx`](Self::rho_of_vx) for `0 < rho <= ahead.rho`.
    pub fn vx_of_rho(&self, rho: T) -> Result<T> {
        check_density(rho)?;
        let slack = T::one() + T::tol(1e-14, 8.0);
        if rho > self.ahead.rho() * slack {
            return Err(Error::Domain(format!(
                "rarefaction cannot raise the density above {} (got {})",
                self.ahead.rho().as_f64(),
                rho.as_f64()
            )));
        }
        if rho < self.floor {
            return Err(Error::VacuumLimit {
                vx: self
                    .vacuum_rapidity()
                    .map(|r| r.tanh())
                    .unwrap_or(-self.sigma())
                    .as_f64(),
            });
        }
        Ok(self.rapidity_at_ln_rho(rho.ln().min(self.ln_rho)).tanh())
    }

    /// Full primitive state at log-density `y` on the curve.
    pub(crate) fn state_at_ln_rho(&self, y: T) -> PrimState<T> {
        let vx = self.rapidity_at_ln_rho(y).tanh();
        let vt = match self.tangential {
            None => T::zero(),
            Some((w0, _)) => {
                let w = self.w_of_ln_rho(w0, y);
                tangential_speed(vx, w, &self.eos)
            }
        };
        self.ahead.with_vt_unchecked(y.exp(), vx, vt)
    }

    /// State behind the wave for a given post-wave normal velocity.
    pub fn state_at_vx(&self, vx: T) -> Result<PrimState<T>> {
        let rho = self.rho_of_vx(vx)?;
        let vt = match self.tangential {
            None => T::zero(),
            Some((w0, _)) => tangential_speed(vx, self.w_of_ln_rho(w0, rho.ln()), &self.eos),
        };
        Ok(self.ahead.with_vt_unchecked(rho, vx, vt))
    }

    fn check_on_curve(&self, star_vx: T, star_rho: T) -> Result<()> {
        let vx = self.vx_of_rho(star_rho)?;
        let tol = T::tol(1e-9, 1e4);
        if (vx - star_vx).abs() > tol {
            return Err(Error::InconsistentInput(format!(
                "state (vx = {}, rho = {}) is not on the rarefaction curve (curve vx = {})",
                star_vx.as_f64(),
                star_rho.as_f64(),
                vx.as_f64()
            )));
        }
        Ok(())
    }

    /// Head and tail speeds `(xi_head, xi_tail)` for a fan ending at `(star_vx, star_rho)`.
    pub fn head_tail_speeds(&self, star_vx: T, star_rho: T) -> Result<(T, T)> {
        self.check_on_curve(star_vx, star_rho)?;
        let head = self.ahead.signal_speed(self.family, &self.eos);
        let tail = self.speed_at(star_vx, star_rho.ln());
        Ok((head, tail))
    }

    /// Characteristic speed of the curve's family at `(vx, y)` on the curve.
    ///
    /// On the curve `A = cs / B`, which stays accurate where the state is
    /// nearly luminal and `W^2` amplifies rounding in `vt`.
    fn speed_at(&self, vx: T, y: T) -> T {
        let a = match self.tangential {
            None => self.eos.cs(),
            Some((w0, _)) => self.eos.cs() * inv_b(self.w_of_ln_rho(w0, y)),
        };
        let a = self.sigma() * a;
        (vx + a) / (T::one() + vx * a)
    }

    pub(crate) fn tail_state(&self, star_vx: T, star_rho: T) -> PrimState<T> {
        let vt = match self.tangential {
            None => T::zero(),
            Some((w0, _)) => {
                tangential_speed(star_vx, self.w_of_ln_rho(w0, star_rho.ln()), &self.eos)
            }
        };
        self.ahead.with_vt_unchecked(star_rho, star_vx, vt)
    }

    /// State inside a fan ending at `(star_vx, star_rho)` at similarity coordinate `xi`.
    pub fn state_in_fan(&self, xi: T, star_vx: T, star_rho: T) -> Result<PrimState<T>> {
        let (head, tail) = self.head_tail_speeds(star_vx, star_rho)?;
        let (lo, hi) = (head.min(tail), head.max(tail));
        let slack = T::tol(1e-12, 64.0);
        if xi < lo - slack || xi > hi + slack {
            return Err(Error::Domain(format!(
                "xi = {} outside the fan [{}, {}]",
                xi.as_f64(),
                lo.as_f64(),
                hi.as_f64()
            )));
        }
        if xi == head {
            return Ok(self.ahead);
        }
        if xi == tail {
            return Ok(self.tail_state(star_vx, star_rho));
        }
        let xi = xi.max(lo).min(hi);
        let cs = self.eos.cs();
        let sigma = self.sigma();
        match self.tangential {
            None => {
                // A = cs: invert the composition law exactly.
                let vx = (xi - sigma * cs) / (T::one() - sigma * xi * cs);
                let y = self.ln_rho + sigma * cs / self.eos.kappa() * (vx.artanh() - self.rapidity);
                Ok(self.ahead.with_vt_unchecked(y.exp(), vx, T::zero()))
            }
            Some(_) => {
                let y_star = star_rho.ln().min(self.ln_rho);
                let g = |y: T| Ok(self.speed_at(self.rapidity_at_ln_rho(y).tanh(), y) - xi);
                let (g_star, g_ahead) = (tail - xi, head - xi);
                let tol = T::tol(1e-14, 8.0) * (T::one() + self.ln_rho.abs());
                let y = brent(g, y_star, self.ln_rho, g_star, g_ahead, tol, MAX_ITER)?;
                Ok(self.state_at_ln_rho(y))
            }
        }
    }
}

/// Tangential speed on the curve from `vx` and `w`.
///
/// `vt^2 = (1 - vx^2) u / (1 + u)` with `u = e^w / (1 - cs2)`.
fn tangential_speed<T: Real>(vx: T, w: T, eos: &EosParams<T>) -> T {
    let one = T::one();
    ((one - vx * vx) / (one + (one - eos.cs2()) * (-w).exp())).sqrt()
}

/// `1/B` with `B = sqrt(1 + e^w)`, overflow free.
fn inv_b<T: Real>(w: T) -> T {
    if w <= T::zero() {
        (T::one() + w.exp()).sqrt().recip()
    } else {
        let e = (-w).exp();
        (w / T::lit(-2.0)).exp() / (T::one() + e).sqrt()
    }
}

pub(crate) fn psi<T: Real>(w: T, eos: &EosParams<T>) -> T {
    let cs = eos.cs();
    let ib = inv_b(w);
    (softplus(-w) + T::lit(2.0) * ib.ln_1p()) / cs + (-cs * ib).ln_1p() - (cs * ib).ln_1p()
}

/// `dPsi/dw = -(B / (1 + u)) / cs`.
pub(crate) fn psi_slope<T: Real>(w: T, eos: &EosParams<T>) -> T {
    let one = T::one();
    let k = (one - eos.cs2()).recip();
    let ratio = if w <= T::zero() {
        let e = w.exp();
        (one + e).sqrt() / (one + e * k)
    } else {
        let e = (-w).exp();
        (w / T::lit(-2.0)).exp() * (one + e).sqrt() / (e + k)
    };
    -ratio / eos.cs()
}

/// Solves `Psi(w) = target` for `w >= w0` where `Psi(w0) >= target > 0`.
fn invert_psi<T: Real>(target: T, w0: T, eos: &EosParams<T>) -> Result<T> {
    let f = |w: T| psi(w, eos) - target;
    let f0 = f(w0);
    if f0 <= T::zero() {
        return Ok(w0);
    }
    let mut lo = w0;
    let mut step = T::one();
    let mut hi = w0 + step;
    let mut fhi = f(hi);
    let mut n = 0;
    while fhi > T::zero() {
        lo = hi;
        step = step + step;
        hi = hi + step;
        fhi = f(hi);
        n += 1;
        if n > 1100 || !hi.is_finite() {
            return Err(Error::SolverFailure(format!(
                "cannot bracket rarefaction density for Psi = {}",
                target.as_f64()
            )));
        }
    }
    // Safeguarded Newton: Psi has a closed-form slope and is monotone.
    let tol = T::tol(1e-15, 4.0);
    let mut w = (w0 + eos.cs() * f0).max(lo).min(hi);
    for _ in 0..MAX_ITER {
        let fw = f(w);
        if fw == T::zero() {
            return Ok(w);
        }
        if fw > T::zero() {
            lo = w;
        } else {
            hi = w;
        }
        let slope = psi_slope(w, eos);
        let mut next = w - fw / slope;
        if !(next > lo && next < hi) {
            next = (lo + hi) / T::lit(2.0);
        }
        if (next - w).abs() <= tol * (T::one() + w.abs()) || hi - lo <= tol * (T::one() + w.abs()) {
            return Ok(next);
        }
        w = next;
    }
    Ok(w)
}
