// SPDX-License-Identifier: Apache-2.0

//! Frame winding numbers and the higher-order invariants built from them.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, Axis, BoundaryCheck, Frame, KickParams, Quasiposition};
use crate::par;

/// Largest accepted `|raw − round(raw)|`.
pub const QUANTIZATION_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub frame: Frame,
    pub raw: f64,
    pub w: i64,
    pub residual: f64,
    pub grid_points: usize,
}

fn wrap_step(d: f64) -> f64 {
    crate::wrap_phase(d)
}

fn winding_angle(params: &KickParams, theta: f64, frame: Frame) -> Result<f64> {
    let (nx, ny) = model::unit_vector(params, Quasiposition::new(theta), frame)?;
    Ok(ny.atan2(nx))
}

/// Bisection depth allowed when a grid step turns the angle by more than π/2.
pub const MAX_REFINE_DEPTH: u32 = 20;

/// Ellipse residual accepted as a witness on an axis that is not scanned.
const WITNESS_FLOOR: f64 = 1e-9;

/// Sum of angle increments over `[θa, θb]`, bisecting while any step exceeds
/// π/2. Near a small gap the vector turns quickly but smoothly, so a bounded
/// number of halvings resolves every step that is not an actual closing.
fn resolved_increment(
    params: &KickParams,
    frame: Frame,
    (ta, a): (f64, f64),
    (tb, b): (f64, f64),
    depth: u32,
) -> Result<f64> {
    let step = wrap_step(b - a);
    if step.abs() <= FRAC_PI_2 {
        return Ok(step);
    }
    let tm = 0.5 * (ta + tb);
    if depth == 0 {
        return Err(Error::UnresolvedStep { theta: tm, step });
    }
    let m = winding_angle(params, tm, frame)?;
    Ok(resolved_increment(params, frame, (ta, a), (tm, m), depth - 1)?
        + resolved_increment(params, frame, (tm, m), (tb, b), depth - 1)?)
}

/// Winding of `(n_x, n_y)` around the θ circle for one frame.
pub fn winding_number(params: &KickParams, frame: Frame, grid: usize) -> Result<WindingResult> {
    if grid < 4 {
        return Err(Error::InvalidGrid(format!("winding grid of {grid} points is too coarse")));
    }
    let h = TAU / grid as f64;
    let angles = (0..grid).map(|k| winding_angle(params, k as f64 * h, frame)).collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for k in 0..grid {
        let a = (k as f64 * h, angles[k]);
        let b = ((k + 1) as f64 * h, angles[(k + 1) % grid]);
        total += resolved_increment(params, frame, a, b, MAX_REFINE_DEPTH)?;
    }
    let raw = total / TAU;
    let w = raw.round();
    let residual = (raw - w).abs();
    if residual >= QUANTIZATION_TOL {
        return Err(Error::NonQuantized { raw, residual });
    }
    Ok(WindingResult { frame, raw, w: w as i64, residual, grid_points: grid })
}

/// `(w0j, wπj)` for one axis together with the frame windings behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxisInvariants {
    pub w1: i64,
    pub w2: i64,
    pub w0: i64,
    pub wpi: i64,
}

impl AxisInvariants {
    /// `w0 = (w1 + w2)/2`, `wπ = (w1 − w2)/2`.
    pub fn from_windings(w1: i64, w2: i64) -> Result<Self> {
        if (w1 + w2).rem_euclid(2) != 0 {
            return Err(Error::ParityViolation(w1 + w2));
        }
        Ok(Self { w1, w2, w0: (w1 + w2) / 2, wpi: (w1 - w2) / 2 })
    }

    pub fn is_trivial(&self) -> bool {
        self.w0 == 0 && self.wpi == 0
    }
}

pub fn axis_invariants(params: &KickParams, axis: Axis, grid: usize) -> Result<AxisInvariants> {
    let [f1, f2] = Frame::on_axis(axis);
    let w1 = winding_number(params, f1, grid)?.w;
    let w2 = winding_number(params, f2, grid)?.w;
    AxisInvariants::from_windings(w1, w2)
}

/// Per-axis pairs and the combined `(w0, wπ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantSet {
    pub w0x: i64,
    pub wpix: i64,
    pub w0y: i64,
    pub wpiy: i64,
    pub w0: i64,
    pub wpi: i64,
}

impl InvariantSet {
    pub fn from_axes(x: AxisInvariants, y: AxisInvariants) -> Self {
        Self {
            w0x: x.w0,
            wpix: x.wpi,
            w0y: y.w0,
            wpiy: y.wpi,
            w0: (x.w0 * y.w0).abs() + (x.wpi * y.wpi).abs(),
            wpi: (x.w0 * y.wpi).abs() + (x.wpi * y.w0).abs(),
        }
    }

    pub fn pair(&self) -> (i64, i64) {
        (self.w0, self.wpi)
    }
}

pub fn hotp_invariants(params: &KickParams, grid: usize) -> Result<InvariantSet> {
    let (x, y) = par::join(|| axis_invariants(params, Axis::X, grid), || axis_invariants(params, Axis::Y, grid));
    Ok(InvariantSet::from_axes(x?, y?))
}

/// How sample points are placed inside a scan range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// `n` points including both ends.
    #[default]
    Endpoints,
    /// Cell centers `lo + (i + 1/2)(hi − lo)/n`.
    Midpoints,
    /// Upper cell edges `lo + (i + 1)(hi − lo)/n`, covering `(lo, hi]`.
    Upper,
}

impl Sampling {
    pub fn points(self, (lo, hi): (f64, f64), n: usize) -> Vec<f64> {
        match self {
            Sampling::Endpoints => {
                let h = (hi - lo) / (n - 1) as f64;
                (0..n).map(|i| if i + 1 == n { hi } else { lo + i as f64 * h }).collect()
            }
            Sampling::Midpoints => {
                let h = (hi - lo) / n as f64;
                (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect()
            }
            Sampling::Upper => {
                let h = (hi - lo) / n as f64;
                (0..n).map(|i| if i + 1 == n { hi } else { lo + (i + 1) as f64 * h }).collect()
            }
        }
    }

    /// Spacing between neighboring points.
    pub fn step(self, (lo, hi): (f64, f64), n: usize) -> f64 {
        match self {
            Sampling::Endpoints => (hi - lo) / (n - 1).max(1) as f64,
            Sampling::Midpoints | Sampling::Upper => (hi - lo) / n as f64,
        }
    }
}

/// A two-parameter scan over `K_{a+1}` and `K_{b+1}` with the others fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub k_index: [usize; 2],
    pub range: [(f64, f64); 2],
    pub resolution: [usize; 2],
    pub sampling: Sampling,
    pub grid: usize,
}

impl ScanSpec {
    fn validate(&self) -> Result<()> {
        if self.k_index[0] > 3 || self.k_index[1] > 3 || self.k_index[0] == self.k_index[1] {
            return Err(Error::InvalidGrid(format!("scan axes {:?} must be two distinct K indices", self.k_index)));
        }
        for (&(lo, hi), &n) in self.range.iter().zip(&self.resolution) {
            if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi > lo) {
                return Err(Error::InvalidGrid(format!("range ({lo}, {hi}) must be non-empty and non-negative")));
            }
            if n < 2 {
                return Err(Error::InvalidGrid(format!("resolution {n} must be at least 2")));
            }
        }
        Ok(())
    }
}

/// One scan cell: either a full invariant set or a boundary mark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Cell {
    Invariants(InvariantSet),
    Boundary {
        /// Analytic gap-closing witness near this cell, when one exists.
        witness: BoundaryCheck,
        reason: String,
    },
}

impl Cell {
    pub fn invariants(&self) -> Option<&InvariantSet> {
        match self {
            Cell::Invariants(s) => Some(s),
            Cell::Boundary { .. } => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, Cell::Boundary { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub base: KickParams,
    pub spec: ScanSpec,
    pub values: [Vec<f64>; 2],
    /// Row-major with the first scan axis outermost.
    pub cells: Vec<Cell>,
}

impl PhaseDiagram {
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.values[1].len() + j]
    }

    /// Points `(K_a, K_b)` where the scan sees a phase boundary: every marked
    /// cell, plus the midpoint between neighbors whose `(w0, wπ)` differ.
    pub fn detected_boundaries(&self) -> Vec<(f64, f64)> {
        let [va, vb] = &self.values;
        let pair = |i: usize, j: usize| self.cell(i, j).invariants().map(InvariantSet::pair);
        let mut out = Vec::new();
        for i in 0..va.len() {
            for j in 0..vb.len() {
                if self.cell(i, j).is_boundary() {
                    out.push((va[i], vb[j]));
                    continue;
                }
                if i + 1 < va.len() && pair(i + 1, j).is_some_and(|p| Some(p) != pair(i, j)) {
                    out.push((0.5 * (va[i] + va[i + 1]), vb[j]));
                }
                if j + 1 < vb.len() && pair(i, j + 1).is_some_and(|p| Some(p) != pair(i, j)) {
                    out.push((va[i], 0.5 * (vb[j] + vb[j + 1])));
                }
            }
        }
        out
    }

    pub fn boundary_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_boundary()).count()
    }
}

type AxisKey = (u64, u64);

fn axis_key(params: &KickParams, axis: Axis) -> AxisKey {
    let (s, c) = params.axis_strengths(axis);
    (s.to_bits(), c.to_bits())
}

/// Scan two kick strengths and classify each cell.
///
/// A cell is a boundary when any frame winding on either axis fails (gapless
/// grid point, unresolved step or unquantized total). Each axis depends only
/// on its own `(K_sin, K_cos)` pair, so per-axis results are computed once per
/// distinct pair and shared between cells.
pub fn phase_diagram(base: &KickParams, spec: &ScanSpec) -> Result<PhaseDiagram> {
    spec.validate()?;
    let values = [
        spec.sampling.points(spec.range[0], spec.resolution[0]),
        spec.sampling.points(spec.range[1], spec.resolution[1]),
    ];
    let (na, nb) = (values[0].len(), values[1].len());
    let mut points = Vec::with_capacity(na * nb);
    for &a in &values[0] {
        for &b in &values[1] {
            points.push(base.with_k(spec.k_index[0], a)?.with_k(spec.k_index[1], b)?);
        }
    }

    // Distinct per-axis problems in first-seen order, for a deterministic layout.
    let mut jobs: Vec<(Axis, KickParams)> = Vec::new();
    let mut slot: HashMap<(Axis, AxisKey), usize> = HashMap::new();
    for p in &points {
        for axis in [Axis::X, Axis::Y] {
            slot.entry((axis, axis_key(p, axis))).or_insert_with(|| {
                jobs.push((axis, *p));
                jobs.len() - 1
            });
        }
    }
    let solved = par::map_indexed(jobs.len(), |i| {
        let (axis, p) = jobs[i];
        axis_invariants(&p, axis, spec.grid)
    });

    // Witness tolerance per axis: a cell step Δ in a scanned strength K moves
    // the ellipse residual by at most 2Δ/K, and only terms with K ≥ π matter.
    let mut steps = [0.0; 4];
    for (axis, &k) in spec.k_index.iter().enumerate() {
        steps[k] = spec.sampling.step(spec.range[axis], spec.resolution[axis]);
    }
    let witness = |p: &KickParams| {
        let k = p.k();
        let tol = |i: usize, j: usize| (2.0 * (steps[i] / k[i].max(PI) + steps[j] / k[j].max(PI))).max(WITNESS_FLOOR);
        BoundaryCheck { x: model::axis_boundary(k[0], k[1], tol(0, 1)), y: model::axis_boundary(k[2], k[3], tol(2, 3)) }
    };
    let cells = points
        .iter()
        .map(|p| {
            let x = &solved[slot[&(Axis::X, axis_key(p, Axis::X))]];
            let y = &solved[slot[&(Axis::Y, axis_key(p, Axis::Y))]];
            match (x, y) {
                (Ok(x), Ok(y)) => Cell::Invariants(InvariantSet::from_axes(*x, *y)),
                _ => {
                    let reason = [x.as_ref().err(), y.as_ref().err()]
                        .into_iter()
                        .flatten()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join("; ");
                    Cell::Boundary { witness: witness(p), reason }
                }
            }
        })
        .collect();
    Ok(PhaseDiagram { base: *base, spec: spec.clone(), values, cells })
}
