//! Exact Riemann solver for special-relativistic hydrodynamics with the
//! ultrarelativistic equation of state `p = cs2 * rho` and arbitrary
//! tangential velocities, plus a first-order Godunov scheme that uses it
//! as the interface flux.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the `*F64` and
//! `*F32` aliases below name the concrete instantiations.
// `!(x > y)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eos;
pub mod error;
pub mod godunov;
pub mod rarefaction;
pub mod riemann;
pub mod roots;
pub mod scalar;
pub mod shock;
pub mod state;

pub use eos::EosParams;
pub use error::{Error, Result};
pub use godunov::{
    evolve, interface_flux, run_convergence, run_riemann, step, Boundary, ConvergenceRow,
    EvolveReport, Grid1D, RiemannRun, SchemeConfig,
};
pub use rarefaction::RarefactionCurve;
pub use riemann::{creates_vacuum, solve, Branch, RiemannSolution, Wave, WaveCurve};
pub use scalar::Real;
pub use shock::{rh_residuals, ShockCurve, ShockResult};
pub use state::{ConsState, Family, Flux, PrimState};

pub type EosParamsF64 = EosParams<f64>;
pub type PrimStateF64 = PrimState<f64>;
pub type ConsStateF64 = ConsState<f64>;
pub type FluxF64 = Flux<f64>;
pub type RiemannSolutionF64 = RiemannSolution<f64>;
pub type Grid1DF64 = Grid1D<f64>;

pub type EosParamsF32 = EosParams<f32>;
pub type PrimStateF32 = PrimState<f32>;
pub type ConsStateF32 = ConsState<f32>;
pub type FluxF32 = Flux<f32>;
pub type RiemannSolutionF32 = RiemannSolution<f32>;
pub type Grid1DF32 = Grid1D<f32>;
