//! Ultrarelativistic equation of state `p = cs2 * rho`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Sound speed of the ultrarelativistic fluid together with derived constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EosParams<T> {
    cs2: T,
    cs: T,
    kappa: T,
}

impl<T: Real> EosParams<T> {
    pub fn new(cs2: T) -> Result<Self> {
        if !(cs2 > T::zero() && cs2 < T::one()) {
            return Err(Error::InvalidSoundSpeed(cs2.as_f64()));
        }
        Ok(Self {
            cs2,
            cs: cs2.sqrt(),
            kappa: cs2 / (T::one() + cs2),
        })
    }

    /// Squared sound speed.
    #[inline]
    pub fn cs2(&self) -> T {
        self.cs2
    }

    #[inline]
    pub fn cs(&self) -> T {
        self.cs
    }

    /// `cs2 / (1 + cs2)`, the exponent of the tangential invariant `rho^kappa W vt`.
    #[inline]
    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn pressure(&self, rho: T) -> Result<T> {
        check_density(rho)?;
        Ok(self.cs2 * rho)
    }

    /// Entropy density `rho^(1/(1+cs2))`, normalised to one at unit density.
    pub fn entropy_density(&self, rho: T) -> Result<T> {
        check_density(rho)?;
        Ok(rho.powf(T::one() / (T::one() + self.cs2)))
    }
}

pub(crate) fn check_density<T: Real>(rho: T) -> Result<()> {
    if rho > T::zero() && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            what: "energy density",
            value: rho.as_f64(),
        })
    }
}
