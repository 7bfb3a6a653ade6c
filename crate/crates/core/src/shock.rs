//! Shock wave curves from the Rankine-Hugoniot conditions.
//!
//! Barred quantities of the derivation are the `ahead` state; the post-shock
//! normal velocity `vx` parameterises the curve. The shock speed `Vs` is a root
//! of
//!
//! ```text
//! (1 - vx' Vs) [(1 - vx Vs)(1 - vx' Vs) - (vx - Vs)(vx' - Vs) / cs2]
//!     - vt'^2 (1 - vx Vs)(1 - Vs^2) = 0
//! ```
//!
//! (`'` marks the ahead state). Density follows in closed form and the
//! tangential speed from `vt = vt' (1 - vx Vs) / (1 - vx' Vs)`.
//!
//! The cubic is only used to enumerate and select roots. The selected root is
//! then polished in rapidities, where with `a = psi - chi`, `b = psi' - chi`
//! (`chi = artanh Vs`) and `tau = vt'^2 / (1 - vx'^2)` the condition reads
//!
//! ```text
//! cosh b [cosh a cosh b - sinh a sinh b / cs2] - tau cosh a = 0
//! ```
//!
//! and the density `rho = rho' [sinh 2b / sinh 2a - tau tanh b / tanh a] / (1 - tau)`
//! is free of the cancellations that plague the velocity form near `|v| -> 1`.

use crate::eos::EosParams;
use crate::error::{Error, Result};
use crate::roots::cubic_real_roots;
use crate::scalar::Real;
use crate::state::{speed_limit_sq, Family, PrimState};

/// Shock curve through a given ahead state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShockCurve<T> {
    ahead: PrimState<T>,
    eos: EosParams<T>,
    family: Family,
    rapidity: T,
    tau: T,
}

/// State behind a shock and its speed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShockResult<T> {
    pub speed: T,
    pub behind: PrimState<T>,
    pub residuals: [T; 4],
}

impl<T: Real> ShockResult<T> {
    pub fn rho(&self) -> T {
        self.behind.rho()
    }

    pub fn vt(&self) -> T {
        self.behind.vt()
    }

    pub fn max_residual(&self) -> T {
        self.residuals.iter().fold(T::zero(), |m, r| m.max(r.abs()))
    }
}

impl<T: Real> ShockCurve<T> {
    pub fn new(ahead: PrimState<T>, family: Family, eos: EosParams<T>) -> Self {
        let tau = ahead.vt().powi(2) / ((T::one() - ahead.vx()) * (T::one() + ahead.vx()));
        Self {
            ahead,
            eos,
            family,
            rapidity: ahead.vx().artanh(),
            tau,
        }
    }

    pub fn ahead(&self) -> &PrimState<T> {
        &self.ahead
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Coefficients (ascending powers of `Vs`) of the shock-speed cubic.
    pub fn cubic_coefficients(&self, vx: T) -> [T; 4] {
        let one = T::one();
        let vb = self.ahead.vx();
        let vtb2 = self.ahead.vt().powi(2);
        let inv_cs2 = self.eos.cs2().recip();
        // (1 - v Vs)(1 - vb Vs) - (v - Vs)(vb - Vs)/cs2
        let inner = [
            one - vx * vb * inv_cs2,
            -(vx + vb) + (vx + vb) * inv_cs2,
            vx * vb - inv_cs2,
        ];
        // (1 - vb Vs) * inner
        let first = [
            inner[0],
            inner[1] - vb * inner[0],
            inner[2] - vb * inner[1],
            -vb * inner[2],
        ];
        // vtb^2 (1 - v Vs)(1 - Vs^2) = vtb^2 (1 - v Vs - Vs^2 + v Vs^3)
        [
            first[0] - vtb2,
            first[1] + vtb2 * vx,
            first[2] + vtb2,
            first[3] - vtb2 * vx,
        ]
    }

    fn check_side(&self, vx: T) -> Result<()> {
        if !(vx.abs() < T::one()) {
            return Err(Error::Domain(format!(
                "normal velocity {} outside (-1, 1)",
                vx.as_f64()
            )));
        }
        let slack = T::tol(1e-14, 8.0);
        let d = self.family.sign::<T>() * (vx - self.ahead.vx());
        if d < -slack {
            return Err(Error::Domain(format!(
                "vx = {} lies on the rarefaction side of the {:?} shock through vx = {}",
                vx.as_f64(),
                self.family,
                self.ahead.vx().as_f64()
            )));
        }
        Ok(())
    }

    /// Post-shock density for a given post-shock velocity and shock speed.
    pub fn post_shock_density(&self, vx: T, vs: T) -> Result<T> {
        let one = T::one();
        let vb = self.ahead.vx();
        if vx == vs {
            return Err(Error::DegenerateContact(vx.as_f64()));
        }
        if vx == vb {
            return Ok(self.ahead.rho());
        }
        let wb2 = self.ahead.lorentz().powi(2);
        let vtb2 = self.ahead.vt().powi(2);
        let a = one - vb * vs;
        let b = one - vx * vs;
        let bracket = (one - vx * vx) * a * a - vtb2 * b * b;
        Ok(self.ahead.rho() * wb2 * (vb - vs) * bracket / ((vx - vs) * b * a))
    }

    /// Post-shock tangential speed from the tangential jump conditions.
    pub fn post_shock_tangential(&self, vx: T, vs: T, rho: T) -> Result<T> {
        if vx == vs {
            return Err(Error::DegenerateContact(vx.as_f64()));
        }
        let one = T::one();
        let vt = self.ahead.vt() * (one - vx * vs) / (one - self.ahead.vx() * vs);
        let v2 = vx * vx + vt * vt;
        if !(v2 < one) || !(rho > T::zero()) {
            return Err(Error::SolverFailure(format!(
                "post-shock state rho = {}, v^2 = {} is unphysical",
                rho.as_f64(),
                v2.as_f64()
            )));
        }
        Ok(vt)
    }

    fn zero_strength(&self) -> ShockResult<T> {
        ShockResult {
            speed: self.ahead.signal_speed(self.family, &self.eos),
            behind: self.ahead,
            residuals: [T::zero(); 4],
        }
    }

    /// Candidate admissible state for a root `vs`, if it passes the Lax checks.
    fn admissible(&self, vx: T, vs: T) -> Option<(T, PrimState<T>)> {
        let rho = self.post_shock_density(vx, vs).ok()?;
        if !(rho.is_finite() && rho > T::zero()) {
            return None;
        }
        let vt = self.post_shock_tangential(vx, vs, rho).ok()?;
        if !(vx * vx + vt * vt < speed_limit_sq()) {
            return None;
        }
        let behind = self.ahead.with_vt_unchecked(rho, vx, vt);
        self.admissible_state(vs, &behind).then_some((vs, behind))
    }

    /// Lax entropy conditions and compression.
    fn admissible_state(&self, vs: T, behind: &PrimState<T>) -> bool {
        let tol = T::tol(1e-9, 64.0);
        let sigma = self.family.sign::<T>();
        let ahead_speed = self.ahead.signal_speed(self.family, &self.eos);
        let behind_speed = behind.signal_speed(self.family, &self.eos);
        // Right family: xi+(ahead) <= Vs <= xi+(behind); mirrored for the left.
        let lax = sigma * (vs - ahead_speed) >= -tol && sigma * (behind_speed - vs) >= -tol;
        lax && behind.rho() >= self.ahead.rho() * (T::one() - tol)
    }

    fn select(&self, vx: T) -> Result<(T, PrimState<T>)> {
        let roots = cubic_real_roots(self.cubic_coefficients(vx));
        let mut best: Option<(T, PrimState<T>)> = None;
        let sigma = self.family.sign::<T>();
        for &vs in roots.as_slice() {
            if !(vs.abs() < T::one()) {
                continue;
            }
            if let Some(cand) = self.admissible(vx, vs) {
                best = match best {
                    Some(b) if sigma * b.0 >= sigma * cand.0 => Some(b),
                    _ => Some(cand),
                };
            }
        }
        best.ok_or_else(|| {
            Error::SolverFailure(format!(
                "no admissible shock speed for vx = {} behind {:?} (roots {:?})",
                vx.as_f64(),
                self.ahead,
                roots.as_slice()
            ))
        })
    }

    /// Physical shock speed for a post-shock normal velocity.
    pub fn shock_speed(&self, vx: T) -> Result<T> {
        self.check_side(vx)?;
        if vx == self.ahead.vx() {
            return Ok(self.zero_strength().speed);
        }
        Ok(self.select(vx)?.0)
    }

    /// Complete post-shock state, speed and jump residuals.
    pub fn behind(&self, vx: T) -> Result<ShockResult<T>> {
        self.check_side(vx)?;
        if vx == self.ahead.vx() {
            return Ok(self.zero_strength());
        }
        let (speed, behind) = self.select(vx)?;
        let (speed, behind) = self
            .refine(vx.artanh(), vx, speed)
            .unwrap_or((speed, behind));
        Ok(self.result(speed, behind))
    }

    /// As [`behind`](Self::behind), parameterised by the post-shock rapidity.
    pub(crate) fn behind_at_rapidity(&self, rapidity: T) -> Result<ShockResult<T>> {
        let vx = rapidity.tanh();
        self.check_side(vx)?;
        if rapidity == self.rapidity || vx == self.ahead.vx() {
            return Ok(self.zero_strength());
        }
        let (speed, behind) = self.select(vx)?;
        let (speed, behind) = self.refine(rapidity, vx, speed).unwrap_or((speed, behind));
        Ok(self.result(speed, behind))
    }

    fn result(&self, speed: T, behind: PrimState<T>) -> ShockResult<T> {
        ShockResult {
            speed,
            behind,
            residuals: rh_residuals(&self.ahead, &behind, speed, &self.eos),
        }
    }

    /// Shock condition in rapidities and its derivative with respect to `chi`.
    fn condition(&self, psi: T, chi: T) -> (T, T) {
        let inv_cs2 = self.eos.cs2().recip();
        let (a, b) = (psi - chi, self.rapidity - chi);
        let (sa, ca) = (a.sinh(), a.cosh());
        let (sb, cb) = (b.sinh(), b.cosh());
        let g = cb * (ca * cb - sa * sb * inv_cs2) - self.tau * ca;
        let da = sa * cb * cb - ca * sb * cb * inv_cs2 - self.tau * sa;
        let db = T::lit(2.0) * ca * cb * sb - sa * (cb * cb + sb * sb) * inv_cs2;
        (g, -(da + db))
    }

    /// Newton polish of a cubic root in rapidity form, then density and
    /// tangential speed from the rapidity expressions.
    fn refine(&self, psi: T, vx: T, vs: T) -> Option<(T, PrimState<T>)> {
        let mut chi = vs.artanh();
        if !chi.is_finite() {
            return None;
        }
        let (mut g, mut dg) = self.condition(psi, chi);
        for _ in 0..8 {
            if g == T::zero() || dg == T::zero() {
                break;
            }
            let next = chi - g / dg;
            let (gn, dgn) = self.condition(psi, next);
            if !(gn.abs() < g.abs()) {
                break;
            }
            chi = next;
            g = gn;
            dg = dgn;
        }
        let one = T::one();
        let (a, b) = (psi - chi, self.rapidity - chi);
        let two = T::lit(2.0);
        let rho = self.ahead.rho()
            * ((two * b).sinh() / (two * a).sinh() - self.tau * b.tanh() / a.tanh())
            / (one - self.tau);
        let vt = self.ahead.vt() * (a.cosh() / b.cosh()) * (self.rapidity.cosh() / psi.cosh());
        if !(rho.is_finite() && rho > T::zero() && vx * vx + vt * vt < speed_limit_sq()) {
            return None;
        }
        let speed = chi.tanh();
        let behind = self.ahead.with_vt_unchecked(rho, vx, vt);
        self.admissible_state(speed, &behind)
            .then_some((speed, behind))
    }
}

/// Normalised residuals of the four jump conditions `[[U]] Vs = [[F]]`.
///
/// Each condition is divided by the largest of its four terms, so the
/// result is independent of the density scale.
pub fn rh_residuals<T: Real>(
    ahead: &PrimState<T>,
    behind: &PrimState<T>,
    vs: T,
    eos: &EosParams<T>,
) -> [T; 4] {
    let terms = |s: &PrimState<T>| {
        let rw2 = s.rho() * s.lorentz().powi(2);
        let kr = eos.kappa() * s.rho();
        let (vx, vy, vz) = (s.vx(), s.vy(), s.vz());
        [
            (rw2 - kr, rw2 * vx),
            (rw2 * vx, rw2 * vx * vx + kr),
            (rw2 * vy, rw2 * vx * vy),
            (rw2 * vz, rw2 * vx * vz),
        ]
    };
    let (a, b) = (terms(ahead), terms(behind));
    let mut out = [T::zero(); 4];
    for k in 0..4 {
        let (ua, fa) = a[k];
        let (ub, fb) = b[k];
        let r = (vs * ub - fb) - (vs * ua - fa);
        let scale = (vs * ub)
            .abs()
            .max((vs * ua).abs())
            .max(fb.abs())
            .max(fa.abs());
        out[k] = if scale > T::zero() {
            r / scale
        } else {
            T::zero()
        };
    }
    out
}
