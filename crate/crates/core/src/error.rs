// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::model::Axis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid kick parameters: {0}")]
    InvalidParams(String),

    /// The quasienergy gap closes (sin E below threshold) at this θ; the
    /// parameter point sits on a phase boundary.
    #[error("gapless point at theta = {theta} (sin E = {sin_e:e})")]
    GaplessPoint { theta: f64, sin_e: f64 },

    #[error("arccos argument {0} lies outside [-1, 1]")]
    Domain(f64),

    #[error("winding not quantized: raw = {raw}, residual = {residual}")]
    NonQuantized { raw: f64, residual: f64 },

    /// The winding angle jumped by more than π/2 between neighbors even after
    /// local refinement.
    #[error("winding angle step {step} at theta = {theta} is unresolved on this grid")]
    UnresolvedStep { theta: f64, step: f64 },

    #[error("w1 + w2 = {0} is odd")]
    ParityViolation(i64),

    #[error("lattice size {0} must be even and at least 8")]
    InvalidLattice(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("{count} state(s) could not be classified: {detail}")]
    AmbiguousClassification { count: usize, detail: String },

    #[error("corner census mismatch: composed (N0, Npi) = {composed:?}, direct = {direct:?}")]
    Mismatch { composed: (usize, usize), direct: (usize, usize) },

    #[error("boundary leakage {leakage:e} on the {axis} axis after {t} period(s)")]
    BoundaryLeakage { axis: Axis, leakage: f64, t: usize },
}
