// SPDX-License-Identifier: Apache-2.0

//! Floquet higher-order topology of the two-dimensional on-resonance
//! double-kicked lattice.
//!
//! The Floquet operator factorizes as `U = U_x ⊗ U_y`, so everything here is
//! built from one-dimensional objects:
//!
//! * [`model`]: closed-form 2×2 Bloch matrices in the four symmetric time
//!   frames, dispersions, unit vectors and the analytic phase boundaries.
//! * [`invariants`]: frame winding numbers, the per-axis pairs
//!   `(w0j, wπj)`, the 2D pair `(w0, wπ)` and parameter scans.
//! * [`lattice`]: finite momentum-space chains under open boundaries,
//!   eigensolves, IPRs and the edge/corner mode census.
//! * [`dynamics`]: stroboscopic wave-packet evolution and the time-averaged
//!   mean chiral displacement.

pub mod dynamics;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod model;
mod par;

pub use error::{Error, Result};
pub use model::{Axis, Frame, KickParams, Quasiposition, TimeFrame};

/// Reduce an eigenphase into `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Distance of an eigenphase from the π sector, treating `+π` and `-π` alike.
pub fn distance_from_pi(e: f64) -> f64 {
    std::f64::consts::PI - wrap_phase(e).abs()
}
