//! Exact Riemann solver: wave-curve intersection and self-similar sampling.
//!
//! The initial discontinuity decays as `L W<- L* C R* W-> R`. Both star
//! states share `rho` and `vx`; only the tangential velocity jumps across the
//! contact `C`.

use crate::eos::EosParams;
use crate::error::{Error, Result};
use crate::rarefaction::RarefactionCurve;
use crate::roots::brent;
use crate::scalar::Real;
use crate::shock::{rh_residuals, ShockCurve};
use crate::state::{Family, PrimState};

const MAX_PROBES: usize = 400;

/// Below this `|vx* - vx|` a wave is reported as trivial.
pub const ZERO_STRENGTH: f64 = 1e-13;

/// Which branch of a wave curve a post-wave velocity falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Shock,
    Rarefaction,
}

/// Elementary wave emitted towards one side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Wave<T> {
    Shock {
        speed: T,
    },
    Rarefaction {
        head: T,
        tail: T,
    },
    /// Zero-strength wave travelling with the ahead characteristic speed.
    Trivial {
        speed: T,
    },
}

impl<T: Real> Wave<T> {
    pub fn letter(&self) -> char {
        match self {
            Wave::Shock { .. } => 'S',
            Wave::Rarefaction { .. } => 'R',
            Wave::Trivial { .. } => '0',
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Wave::Shock { .. } => "shock",
            Wave::Rarefaction { .. } => "rarefaction",
            Wave::Trivial { .. } => "trivial",
        }
    }

    /// Speeds bounding the wave, slowest first.
    pub fn bounds(&self) -> (T, T) {
        match *self {
            Wave::Shock { speed } | Wave::Trivial { speed } => (speed, speed),
            Wave::Rarefaction { head, tail } => (head.min(tail), head.max(tail)),
        }
    }

    /// Speeds as reported in summaries: `[speed]` or `[head, tail]`.
    pub fn speeds(&self) -> Vec<T> {
        match *self {
            Wave::Shock { speed } | Wave::Trivial { speed } => vec![speed],
            Wave::Rarefaction { head, tail } => vec![head, tail],
        }
    }

    fn mirrored(&self) -> Self {
        match *self {
            Wave::Shock { speed } => Wave::Shock { speed: -speed },
            Wave::Trivial { speed } => Wave::Trivial { speed: -speed },
            Wave::Rarefaction { head, tail } => Wave::Rarefaction {
                head: -head,
                tail: -tail,
            },
        }
    }
}

/// Wave curve `rho = W(vx)`: rarefaction and shock branches glued at the ahead state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveCurve<T> {
    rarefaction: RarefactionCurve<T>,
    shock: ShockCurve<T>,
    family: Family,
    rapidity: T,
}

impl<T: Real> WaveCurve<T> {
    pub fn new(ahead: PrimState<T>, family: Family, eos: EosParams<T>) -> Self {
        Self {
            rarefaction: RarefactionCurve::new(ahead, family, eos),
            shock: ShockCurve::new(ahead, family, eos),
            family,
            rapidity: ahead.vx().artanh(),
        }
    }

    pub fn ahead(&self) -> &PrimState<T> {
        self.rarefaction.ahead()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rarefaction(&self) -> &RarefactionCurve<T> {
        &self.rarefaction
    }

    pub fn shock(&self) -> &ShockCurve<T> {
        &self.shock
    }

    /// Branch rule: right-moving waves shock for `vx >= vx_ahead`,
    /// left-moving waves shock for `vx < vx_ahead`.
    pub fn branch(&self, vx: T) -> Branch {
        let ahead = self.ahead().vx();
        match self.family {
            Family::Right if vx >= ahead => Branch::Shock,
            Family::Left if vx < ahead => Branch::Shock,
            _ => Branch::Rarefaction,
        }
    }

    fn branch_at_rapidity(&self, rapidity: T) -> Branch {
        match self.family {
            Family::Right if rapidity >= self.rapidity => Branch::Shock,
            Family::Left if rapidity < self.rapidity => Branch::Shock,
            _ => Branch::Rarefaction,
        }
    }

    /// Energy density behind the wave for a post-wave normal velocity.
    pub fn eval(&self, vx: T) -> Result<T> {
        if !(vx.abs() < T::one()) {
            return Err(Error::Domain(format!(
                "normal velocity {} outside (-1, 1)",
                vx.as_f64()
            )));
        }
        match self.branch(vx) {
            Branch::Shock => Ok(self.shock.behind(vx)?.rho()),
            Branch::Rarefaction => self.rarefaction.rho_of_vx(vx),
        }
    }

    pub(crate) fn ln_rho_at_rapidity(&self, rapidity: T) -> Result<T> {
        match self.branch_at_rapidity(rapidity) {
            Branch::Shock => Ok(self.shock.behind_at_rapidity(rapidity)?.rho().ln()),
            Branch::Rarefaction => self.rarefaction.ln_rho_at_rapidity(rapidity),
        }
    }

    /// Vacuum rapidity of the rarefaction branch, if it has one.
    pub fn vacuum_rapidity(&self) -> Option<T> {
        self.rarefaction.vacuum_rapidity()
    }
}

/// Returns true when the rarefaction branches of the two curves open a vacuum
/// region, so that no star state exists.
pub fn creates_vacuum<T: Real>(
    left: &PrimState<T>,
    right: &PrimState<T>,
    eos: &EosParams<T>,
) -> bool {
    let l = WaveCurve::new(*left, Family::Left, *eos);
    let r = WaveCurve::new(*right, Family::Right, *eos);
    matches!(
        (l.vacuum_rapidity(), r.vacuum_rapidity()),
        (Some(hi), Some(lo)) if hi <= lo
    )
}

/// Exact self-similar solution of a Riemann problem.
#[derive(Clone, Debug, PartialEq)]
pub struct RiemannSolution<T> {
    eos: EosParams<T>,
    left: PrimState<T>,
    right: PrimState<T>,
    star_vx: T,
    star_rho: T,
    left_star: PrimState<T>,
    right_star: PrimState<T>,
    left_wave: Wave<T>,
    right_wave: Wave<T>,
}

impl<T: Real> RiemannSolution<T> {
    pub fn eos(&self) -> &EosParams<T> {
        &self.eos
    }

    pub fn left(&self) -> &PrimState<T> {
        &self.left
    }

    pub fn right(&self) -> &PrimState<T> {
        &self.right
    }

    pub fn star_vx(&self) -> T {
        self.star_vx
    }

    pub fn star_rho(&self) -> T {
        self.star_rho
    }

    /// Intermediate state between the left wave and the contact.
    pub fn left_star(&self) -> &PrimState<T> {
        &self.left_star
    }

    pub fn right_star(&self) -> &PrimState<T> {
        &self.right_star
    }

    pub fn left_wave(&self) -> &Wave<T> {
        &self.left_wave
    }

    pub fn right_wave(&self) -> &Wave<T> {
        &self.right_wave
    }

    pub fn contact_speed(&self) -> T {
        self.star_vx
    }

    /// Two-letter wave pattern, e.g. `"SR"`; `0` marks a zero-strength wave.
    pub fn pattern(&self) -> String {
        [self.left_wave.letter(), self.right_wave.letter()]
            .iter()
            .collect()
    }

    /// Slowest and fastest signal speeds in the solution.
    pub fn extreme_speeds(&self) -> (T, T) {
        (self.left_wave.bounds().0, self.right_wave.bounds().1)
    }

    /// Jump-condition residuals of every discontinuity: shocks and the contact.
    pub fn discontinuity_residuals(&self) -> Vec<(&'static str, [T; 4])> {
        let mut out = Vec::with_capacity(3);
        if let Wave::Shock { speed } = self.left_wave {
            out.push((
                "left shock",
                rh_residuals(&self.left, &self.left_star, speed, &self.eos),
            ));
        }
        out.push((
            "contact",
            rh_residuals(&self.left_star, &self.right_star, self.star_vx, &self.eos),
        ));
        if let Wave::Shock { speed } = self.right_wave {
            out.push((
                "right shock",
                rh_residuals(&self.right, &self.right_star, speed, &self.eos),
            ));
        }
        out
    }

    fn fan(&self, family: Family, xi: T) -> Result<PrimState<T>> {
        let ahead = match family {
            Family::Left => self.left,
            Family::Right => self.right,
        };
        RarefactionCurve::new(ahead, family, self.eos).state_in_fan(xi, self.star_vx, self.star_rho)
    }

    /// State at similarity coordinate `xi = x / t`.
    ///
    /// Intervals are closed on the left: at a wave or contact speed the state
    /// to the right of it is returned.
    pub fn sample(&self, xi: T) -> Result<PrimState<T>> {
        if !(xi.abs() < T::one()) {
            return Err(Error::Domain(format!(
                "similarity coordinate {} outside (-1, 1)",
                xi.as_f64()
            )));
        }
        match self.left_wave {
            Wave::Shock { speed } | Wave::Trivial { speed } if xi < speed => return Ok(self.left),
            Wave::Rarefaction { head, tail } if xi < tail => {
                return if xi < head {
                    Ok(self.left)
                } else {
                    self.fan(Family::Left, xi)
                };
            }
            _ => {}
        }
        if xi < self.star_vx {
            return Ok(self.left_star);
        }
        match self.right_wave {
            Wave::Shock { speed } | Wave::Trivial { speed } => Ok(if xi < speed {
                self.right_star
            } else {
                self.right
            }),
            Wave::Rarefaction { head, tail } => {
                if xi < tail {
                    Ok(self.right_star)
                } else if xi < head {
                    self.fan(Family::Right, xi)
                } else {
                    Ok(self.right)
                }
            }
        }
    }

    /// Samples the solution at time `t` on positions `xs` (interface at `x = 0`).
    pub fn snapshot(&self, t: T, xs: &[T]) -> Result<Vec<PrimState<T>>> {
        if !(t > T::zero()) {
            return Err(Error::Domain(format!(
                "time must be positive, got {}",
                t.as_f64()
            )));
        }
        xs.iter()
            .map(|&x| {
                let xi = x / t;
                if xi <= -T::one() {
                    Ok(self.left)
                } else if xi >= T::one() {
                    Ok(self.right)
                } else {
                    self.sample(xi)
                }
            })
            .collect()
    }

    /// The solution of the problem with `vx` reversed and sides swapped.
    pub fn mirrored(&self) -> Self {
        Self {
            eos: self.eos,
            left: self.right.mirrored(),
            right: self.left.mirrored(),
            star_vx: -self.star_vx,
            star_rho: self.star_rho,
            left_star: self.right_star.mirrored(),
            right_star: self.left_star.mirrored(),
            left_wave: self.right_wave.mirrored(),
            right_wave: self.left_wave.mirrored(),
        }
    }
}

fn is_vacuum(e: &Error) -> bool {
    matches!(e, Error::VacuumLimit { .. })
}

/// Solves the Riemann problem with the given left and right states.
pub fn solve<T: Real>(
    left: PrimState<T>,
    right: PrimState<T>,
    eos: EosParams<T>,
) -> Result<RiemannSolution<T>> {
    if left == right {
        return Ok(trivial(left, eos));
    }
    let lc = WaveCurve::new(left, Family::Left, eos);
    let rc = WaveCurve::new(right, Family::Right, eos);
    let f = |psi: T| Ok(lc.ln_rho_at_rapidity(psi)? - rc.ln_rho_at_rapidity(psi)?);

    let limit = (T::one() - T::tol(1e-12, 4.0)).artanh();
    let mut b_lo = -limit;
    let mut b_hi = limit;
    if let Some(v) = rc.vacuum_rapidity() {
        b_lo = b_lo.max(v);
    }
    if let Some(v) = lc.vacuum_rapidity() {
        b_hi = b_hi.min(v);
    }
    if b_lo >= b_hi {
        return Err(Error::NoIntersection(format!(
            "rarefactions open a vacuum between vx = {} and vx = {}",
            b_hi.tanh().as_f64(),
            b_lo.tanh().as_f64()
        )));
    }
    let inside = |p: T| {
        let quarter = (b_hi - b_lo) / T::lit(4.0);
        if p <= b_lo {
            b_lo + quarter
        } else if p >= b_hi {
            b_hi - quarter
        } else {
            p
        }
    };
    let p1 = inside(left.vx().artanh());
    let p2 = inside(right.vx().artanh());
    let (lo, flo) = probe(&f, p1.min(p2), b_lo, true)?;
    let (hi, fhi) = probe(&f, p1.max(p2), b_hi, false)?;
    let tol = T::tol(1e-15, 4.0);
    let root = brent(f, lo, hi, flo, fhi, tol, 300)?;
    assemble(lc, rc, root, eos)
}

/// Moves from `start` towards `barrier` until `f` has the sign expected on that
/// end of the bracket: positive on the low end, negative on the high end.
fn probe<T: Real, F>(f: &F, start: T, barrier: T, low_end: bool) -> Result<(T, T)>
where
    F: Fn(T) -> Result<T>,
{
    let want = |v: T| {
        if low_end {
            v >= T::zero()
        } else {
            v <= T::zero()
        }
    };
    let dir = if low_end { -T::one() } else { T::one() };
    let mut x = start;
    let mut good = start;
    let mut step = T::lit(0.25);
    for _ in 0..MAX_PROBES {
        match f(x) {
            Ok(v) if want(v) => return Ok((x, v)),
            Ok(_) => {
                good = x;
                let mut next = x + dir * step;
                if dir * (next - barrier) >= T::zero() {
                    next = (x + barrier) / T::lit(2.0);
                }
                if next == x {
                    break;
                }
                x = next;
                step = step + step;
            }
            Err(e) if is_vacuum(&e) && x != good => x = (x + good) / T::lit(2.0),
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoIntersection(format!(
        "could not bracket the star velocity beyond vx = {}",
        x.tanh().as_f64()
    )))
}

fn trivial<T: Real>(state: PrimState<T>, eos: EosParams<T>) -> RiemannSolution<T> {
    RiemannSolution {
        eos,
        left: state,
        right: state,
        star_vx: state.vx(),
        star_rho: state.rho(),
        left_star: state,
        right_star: state,
        left_wave: Wave::Trivial {
            speed: state.signal_speed(Family::Left, &eos),
        },
        right_wave: Wave::Trivial {
            speed: state.signal_speed(Family::Right, &eos),
        },
    }
}

/// Builds star states and waves on one side for the converged star values.
fn side<T: Real>(curve: &WaveCurve<T>, root: T, star_rho: T) -> Result<(PrimState<T>, Wave<T>)> {
    let ahead = *curve.ahead();
    let eos = *curve.rarefaction().eos();
    let star_vx = root.tanh();
    if (star_vx - ahead.vx()).abs() < T::tol(ZERO_STRENGTH, 8.0) {
        let state = ahead.with_vt_unchecked(star_rho, star_vx, ahead.vt());
        let speed = ahead.signal_speed(curve.family(), &eos);
        return Ok((state, Wave::Trivial { speed }));
    }
    match curve.branch(star_vx) {
        Branch::Shock => {
            let res = curve.shock().behind_at_rapidity(root)?;
            let state = ahead.with_vt_unchecked(star_rho, star_vx, res.vt());
            Ok((state, Wave::Shock { speed: res.speed }))
        }
        Branch::Rarefaction => {
            let rare = curve.rarefaction();
            let (head, tail) = rare.head_tail_speeds(star_vx, star_rho)?;
            let state = rare.tail_state(star_vx, star_rho);
            Ok((state, Wave::Rarefaction { head, tail }))
        }
    }
}

/// Common `ln rho` at the root.
///
/// The representable root is off by up to half an ulp of rapidity, which a
/// steep curve (near vacuum) turns into a visible density error. Intersecting
/// the two local tangents removes that: the slopes have opposite signs, so the
/// result is a convex combination weighted towards the flatter curve.
fn intersect<T: Real>(lc: &WaveCurve<T>, rc: &WaveCurve<T>, root: T, yl: T, yr: T) -> T {
    let mean = (yl + yr) / T::lit(2.0);
    let h = T::lit(1e-7) * root.abs().max(T::one());
    let slope = |c: &WaveCurve<T>| -> Option<T> {
        let a = c.ln_rho_at_rapidity(root - h).ok()?;
        let b = c.ln_rho_at_rapidity(root + h).ok()?;
        Some((b - a) / (h + h))
    };
    match (slope(lc), slope(rc)) {
        (Some(sl), Some(sr)) if sl <= T::zero() && sr >= T::zero() && sr - sl > T::zero() => {
            let wl = sr / (sr - sl);
            wl * yl + (T::one() - wl) * yr
        }
        _ => mean,
    }
}

fn assemble<T: Real>(
    lc: WaveCurve<T>,
    rc: WaveCurve<T>,
    root: T,
    eos: EosParams<T>,
) -> Result<RiemannSolution<T>> {
    let star_vx = root.tanh();
    let yl = lc.ln_rho_at_rapidity(root)?;
    let yr = rc.ln_rho_at_rapidity(root)?;
    let star_rho = intersect(&lc, &rc, root, yl, yr).exp();
    let (left_star, left_wave) = side(&lc, root, star_rho)?;
    let (right_star, right_wave) = side(&rc, root, star_rho)?;
    Ok(RiemannSolution {
        eos,
        left: *lc.ahead(),
        right: *rc.ahead(),
        star_vx,
        star_rho,
        left_star,
        right_star,
        left_wave,
        right_wave,
    })
}
