//! Lorentz-boost action on the helicity and spin degrees of freedom of massive
//! spin-½ particles.
//!
//! The crate is `no_std` (with `alloc`) and holds the numerical kernels only:
//!
//! * [`kinematics`]: on-shell momenta and 4×4 rotations/boosts,
//! * [`spinrep`]: the SL(2,C) spin-½ images, Wigner and helicity rotations,
//! * [`states`]: momentum grids, wavepackets, one- and two-particle amplitudes,
//! * [`entanglement`]: reduced density matrices under boosts and the Wootters
//!   concurrence,
//! * [`linalg`] and [`quadrature`]: the fixed-size complex matrices, eigen
//!   solvers and Gauss–Legendre momentum grids underneath.
//!
//! Natural units with `m = 1` are used throughout the state code.
#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod entanglement;
pub mod error;
pub mod kinematics;
pub mod linalg;
pub mod quadrature;
pub mod spinrep;
pub mod states;

pub use error::{Error, Result};
