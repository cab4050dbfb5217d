//! Front-tracking solver for a one-dimensional two-phase evaporation-front
//! model of bread baking.
//!
//! The model couples heat and moisture diffusion on the unit interval, split
//! at a moving evaporation front `x = e(t)` into a wet crumb phase `(0, e)`
//! and a dry crust phase `(e, 1)`:
//!
//! ```text
//! c ∂u/∂t = k ∂²u/∂x²          (temperature, per phase)
//! ∂w/∂t   = d ∂²w/∂x²          (water content, per phase)
//! l·w(t,e)·e′ = k_l u_x(e−) − k_a u_x(e+)     (moisture-weighted Stefan condition)
//! ```
//!
//! with symmetry conditions at `x = 0`, a convective–radiative oven boundary
//! at `x = 1`, a sorption-driven moisture flux at `x = 1`, and flux
//! transmission of `w` across the front.
//!
//! The solver fixes the front by mapping crumb onto the reference interval
//! `[0,1]` and crust onto `[1,2]` (module [`landau`]), advances both fields
//! implicitly (modules [`heat`], [`moisture`]), and closes the coupling with a
//! per-step fixed-point iteration on the front position (module [`front`]).
//! Module [`verify`] holds the analytic and brute-force oracles plus the
//! certificate suite that turns the model's qualitative properties (sign
//! bounds, comparison bound, moisture floor, balance identities, energy decay)
//! into executable checks. Modules [`config`] and [`artifact`] define the
//! on-disk run configuration and the emitted run artifacts.

pub mod artifact;
pub mod config;
pub mod error;
pub mod front;
pub mod heat;
pub mod landau;
pub mod moisture;
pub mod problem;
pub mod tridiag;
pub mod verify;
