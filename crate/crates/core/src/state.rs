//! Primitive and conserved variables, the normal flux and characteristic speeds.

use std::ops::{Add, Mul, Sub};

use crate::eos::{check_density, EosParams};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Wave family: which way the signal travels relative to the fluid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Left-moving waves, the `xi_-` characteristic family.
    Left,
    /// Right-moving waves, the `xi_+` characteristic family.
    Right,
}

impl Family {
    /// `-1` for left-moving, `+1` for right-moving waves.
    #[inline]
    pub fn sign<T: Real>(self) -> T {
        match self {
            Family::Left => -T::one(),
            Family::Right => T::one(),
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Family::Left => Family::Right,
            Family::Right => Family::Left,
        }
    }
}

/// Largest admissible `vx^2 + vt^2`.
#[inline]
pub(crate) fn speed_limit_sq<T: Real>() -> T {
    T::one() - T::tol(1e-12, 4.0)
}

/// Fluid state in primitive variables.
///
/// The tangential velocity is kept as a magnitude `vt` and a unit direction
/// `tdir` in the y-z plane. The direction defaults to `(1, 0)` when `vt = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimState<T> {
    rho: T,
    vx: T,
    vt: T,
    tdir: [T; 2],
}

impl<T: Real> PrimState<T> {
    /// State with tangential velocity along +y.
    pub fn new(rho: T, vx: T, vt: T) -> Result<Self> {
        Self::with_direction(rho, vx, vt, [T::one(), T::zero()])
    }

    /// State with an explicit tangential direction; `tdir` is normalised.
    pub fn with_direction(rho: T, vx: T, vt: T, tdir: [T; 2]) -> Result<Self> {
        check_density(rho)?;
        if !(vt >= T::zero()) {
            return Err(Error::Domain(format!(
                "tangential speed must be non-negative, got {}",
                vt.as_f64()
            )));
        }
        let v2 = vx * vx + vt * vt;
        if !(v2 < speed_limit_sq()) {
            return Err(Error::Superluminal(v2.as_f64()));
        }
        Ok(Self::new_unchecked(rho, vx, vt, normalize(tdir)))
    }

    /// State from Cartesian velocity components.
    pub fn from_components(rho: T, vx: T, vy: T, vz: T) -> Result<Self> {
        Self::with_direction(rho, vx, vy.hypot(vz), [vy, vz])
    }

    /// Tangential direction given as an angle from +y towards +z.
    pub fn with_angle(rho: T, vx: T, vt: T, angle: T) -> Result<Self> {
        Self::with_direction(rho, vx, vt, [angle.cos(), angle.sin()])
    }

    #[inline]
    pub(crate) fn new_unchecked(rho: T, vx: T, vt: T, tdir: [T; 2]) -> Self {
        Self { rho, vx, vt, tdir }
    }

    #[inline]
    pub fn rho(&self) -> T {
        self.rho
    }

    #[inline]
    pub fn vx(&self) -> T {
        self.vx
    }

    #[inline]
    pub fn vt(&self) -> T {
        self.vt
    }

    #[inline]
    pub fn tdir(&self) -> [T; 2] {
        self.tdir
    }

    #[inline]
    pub fn vy(&self) -> T {
        self.vt * self.tdir[0]
    }

    #[inline]
    pub fn vz(&self) -> T {
        self.vt * self.tdir[1]
    }

    /// `v_i v^i`.
    #[inline]
    pub fn speed_sq(&self) -> T {
        self.vx * self.vx + self.vt * self.vt
    }

    pub fn pressure(&self, eos: &EosParams<T>) -> T {
        eos.cs2() * self.rho
    }

    /// Lorentz factor `1/sqrt(1 - v^2)`.
    #[inline]
    pub fn lorentz(&self) -> T {
        (T::one() - self.speed_sq()).sqrt().recip()
    }

    /// Same state with the normal velocity reversed.
    pub fn mirrored(&self) -> Self {
        Self {
            vx: -self.vx,
            ..*self
        }
    }

    /// Same state with a different tangential speed, keeping the direction.
    pub(crate) fn with_vt_unchecked(&self, rho: T, vx: T, vt: T) -> Self {
        Self::new_unchecked(rho, vx, vt, self.tdir)
    }

    pub fn to_cons(&self, eos: &EosParams<T>) -> ConsState<T> {
        let h_w2 = (T::one() + eos.cs2()) * self.rho * self.lorentz().powi(2);
        ConsState {
            energy: h_w2 - eos.cs2() * self.rho,
            sx: h_w2 * self.vx,
            sy: h_w2 * self.vy(),
            sz: h_w2 * self.vz(),
        }
    }

    /// Physical flux in the x direction.
    pub fn flux_x(&self, eos: &EosParams<T>) -> Flux<T> {
        let p = eos.cs2() * self.rho;
        let h_w2 = self.rho * (T::one() + eos.cs2()) * self.lorentz().powi(2);
        let m = h_w2 * self.vx;
        Flux {
            energy: m,
            sx: m * self.vx + p,
            sy: m * self.vy(),
            sz: m * self.vz(),
        }
    }

    /// `A` in `xi_pm = (vx +- A) / (1 +- vx A)`.
    pub fn composition_speed(&self, eos: &EosParams<T>) -> T {
        let one = T::one();
        let nx = one - self.vx * self.vx;
        // W^2 (1 - vx^2)
        let r = nx / (nx - self.vt * self.vt);
        (one + r * (one - eos.cs2()) / eos.cs2()).sqrt().recip()
    }

    /// Characteristic speed of the given family (`xi_-` or `xi_+`).
    pub fn signal_speed(&self, family: Family, eos: &EosParams<T>) -> T {
        let a = family.sign::<T>() * self.composition_speed(eos);
        (self.vx + a) / (T::one() + self.vx * a)
    }

    /// `(xi_-, xi_0, xi_+)`, eigenvalues of the x-flux Jacobian.
    pub fn eigenvalues(&self, eos: &EosParams<T>) -> (T, T, T) {
        debug_assert!(T::one() - self.speed_sq() * eos.cs2() > T::zero());
        (
            self.signal_speed(Family::Left, eos),
            self.vx,
            self.signal_speed(Family::Right, eos),
        )
    }
}

fn normalize<T: Real>(d: [T; 2]) -> [T; 2] {
    let n = d[0].hypot(d[1]);
    if n > T::zero() && n.is_finite() {
        [d[0] / n, d[1] / n]
    } else {
        [T::one(), T::zero()]
    }
}

/// Conserved energy and momentum densities.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ConsState<T> {
    pub energy: T,
    pub sx: T,
    pub sy: T,
    pub sz: T,
}

impl<T: Real> ConsState<T> {
    pub fn new(energy: T, sx: T, sy: T, sz: T) -> Self {
        Self { energy, sx, sy, sz }
    }

    pub fn as_array(&self) -> [T; 4] {
        [self.energy, self.sx, self.sy, self.sz]
    }

    /// Momentum magnitude.
    pub fn momentum(&self) -> T {
        self.sx.hypot(self.sy).hypot(self.sz)
    }

    /// Analytic recovery of the primitive state.
    ///
    /// With `x = E + p = (1 + cs2) rho W^2` the inversion reduces to
    /// `x^2 - (1 + cs2) E x + cs2 |S|^2 = 0`; the larger root is the physical one.
    pub fn to_prim(&self, eos: &EosParams<T>) -> Result<PrimState<T>> {
        let e = self.energy;
        let m = self.momentum();
        if !(e > T::zero() && e.is_finite() && m.is_finite()) {
            return Err(Error::UnphysicalState(format!(
                "energy {} must be positive and finite",
                e.as_f64()
            )));
        }
        if !(m < e) {
            return Err(Error::UnphysicalState(format!(
                "|S| = {} is not below E = {}",
                m.as_f64(),
                e.as_f64()
            )));
        }
        let one = T::one();
        let two = T::lit(2.0);
        let b = (one + eos.cs2()) * e;
        let disc = b * b - T::lit(4.0) * eos.cs2() * m * m;
        if disc < T::zero() {
            return Err(Error::UnphysicalState(format!(
                "negative discriminant {}",
                disc.as_f64()
            )));
        }
        let x = (b + disc.sqrt()) / two;
        let v = m / x;
        let rho = x * (one - v) * (one + v) / (one + eos.cs2());
        let mt = self.sy.hypot(self.sz);
        let vx = self.sx / x;
        let vt = mt / x;
        let tdir = if mt > T::zero() {
            [self.sy / mt, self.sz / mt]
        } else {
            [one, T::zero()]
        };
        let v2 = vx * vx + vt * vt;
        if !(v2 < speed_limit_sq()) || !(rho > T::zero()) {
            return Err(Error::UnphysicalState(format!(
                "recovered state rho = {}, v^2 = {} is not admissible",
                rho.as_f64(),
                v2.as_f64()
            )));
        }
        Ok(PrimState::new_unchecked(rho, vx, vt, tdir))
    }
}

impl<T: Real> Add for ConsState<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.energy + o.energy,
            self.sx + o.sx,
            self.sy + o.sy,
            self.sz + o.sz,
        )
    }
}

impl<T: Real> Sub for ConsState<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.energy - o.energy,
            self.sx - o.sx,
            self.sy - o.sy,
            self.sz - o.sz,
        )
    }
}

impl<T: Real> Mul<T> for ConsState<T> {
    type Output = Self;
    fn mul(self, a: T) -> Self {
        Self::new(self.energy * a, self.sx * a, self.sy * a, self.sz * a)
    }
}

/// Components of the x-direction flux vector.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Flux<T> {
    pub energy: T,
    pub sx: T,
    pub sy: T,
    pub sz: T,
}

impl<T: Real> Flux<T> {
    pub fn as_array(&self) -> [T; 4] {
        [self.energy, self.sx, self.sy, self.sz]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|x| x.is_finite())
    }
}
