// SPDX-License-Identifier: Apache-2.0

//! WebAssembly entry points for the static demo page in `www/`.
//!
//! Strengths cross the boundary in units of π. The plain Rust functions are
//! usable natively; the `#[wasm_bindgen]` wrappers only convert errors.

use std::f64::consts::PI;

use ordkl_core::invariants::{hotp_invariants, winding_number, Sampling};
use ordkl_core::lattice::{corner_census_2d, corner_mode_density, CensusOptions, LatticeSpec, Sector};
use ordkl_core::model::unit_vector;
use ordkl_core::{Frame, KickParams, Quasiposition};
use wasm_bindgen::prelude::*;

/// Quasiposition grid for windings in the demo; coarser than the library default.
pub const DEMO_GRID: usize = 512;

/// Fixed edge IPR threshold, so small browser lattices classify cleanly.
pub const DEMO_IPR_MIN: f64 = 0.03;

fn params(k: [f64; 4]) -> ordkl_core::Result<KickParams> {
    KickParams::from_pi_multiples(k)
}

/// `(w0, wπ)` over an `n × n` scan of strengths `axes` (0-based) on
/// `(0, kmax]`, row-major with the first axis outermost. Boundary cells are
/// `(-1, -1)`.
pub fn phase_grid(k: [f64; 4], axes: [usize; 2], kmax: f64, n: usize) -> ordkl_core::Result<Vec<i32>> {
    if axes[0] > 3 || axes[1] > 3 || axes[0] == axes[1] || n < 2 || kmax.is_nan() || kmax <= 0.0 {
        return Err(ordkl_core::Error::InvalidGrid(format!("axes {axes:?}, n = {n}, kmax = {kmax}")));
    }
    let base = params(k)?;
    let values = Sampling::Upper.points((0.0, kmax * PI), n);
    let mut out = Vec::with_capacity(2 * n * n);
    for &a in &values {
        for &b in &values {
            let p = base.with_k(axes[0], a)?.with_k(axes[1], b)?;
            match hotp_invariants(&p, DEMO_GRID) {
                Ok(s) => out.extend([s.w0 as i32, s.wpi as i32]),
                Err(_) => out.extend([-1, -1]),
            }
        }
    }
    Ok(out)
}

/// Unit-vector loop `(n_x, n_y)` of one frame over `n` quasipositions,
/// interleaved; gapless points are NaN. The winding is `None` on a boundary.
pub fn frame_loop(k: [f64; 4], frame: u8, n: usize) -> ordkl_core::Result<(Vec<f64>, Option<i64>)> {
    let p = params(k)?;
    let frame = Frame::from_index(frame).ok_or_else(|| ordkl_core::Error::InvalidParams(format!("frame {frame}")))?;
    let mut points = Vec::with_capacity(2 * n);
    for i in 0..n {
        match unit_vector(&p, Quasiposition::grid_point(i, n), frame) {
            Ok((x, y)) => points.extend([x, y]),
            Err(_) => points.extend([f64::NAN, f64::NAN]),
        }
    }
    let w = winding_number(&p, frame, DEMO_GRID).ok().map(|r| r.w);
    Ok((points, w))
}

/// Corner census of an `l × l` open square with mode-averaged densities.
#[derive(Debug, Clone)]
pub struct CornerView {
    pub l: usize,
    pub n0: usize,
    pub npi: usize,
    pub invariants: Option<(i64, i64)>,
    /// `l × l`, row-major in `n_x`; empty when the sector has no modes.
    pub density_zero: Vec<f64>,
    pub density_pi: Vec<f64>,
}

pub fn corner_view(k: [f64; 4], l: usize) -> ordkl_core::Result<CornerView> {
    let p = params(k)?;
    let opts = CensusOptions { ipr_min: Some(DEMO_IPR_MIN), max_doublings: 0, ..CensusOptions::default() };
    let census = corner_census_2d(&p, LatticeSpec::square(l)?, opts)?;
    let average = |sector| {
        let maps = corner_mode_density(&census, sector);
        let mut acc = vec![0.0; if maps.is_empty() { 0 } else { l * l }];
        for m in &maps {
            for (a, d) in acc.iter_mut().zip(&m.density) {
                *a += d / maps.len() as f64;
            }
        }
        acc
    };
    Ok(CornerView {
        l,
        n0: census.n0,
        npi: census.npi,
        invariants: census.invariants.map(|s| s.pair()),
        density_zero: average(Sector::Zero),
        density_pi: average(Sector::Pi),
    })
}

fn js_err(e: ordkl_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = phaseDiagram)]
#[allow(clippy::too_many_arguments)]
pub fn phase_diagram_js(
    k1: f64,
    k2: f64,
    k3: f64,
    k4: f64,
    axis_a: usize,
    axis_b: usize,
    kmax: f64,
    n: usize,
) -> Result<Vec<i32>, JsError> {
    phase_grid([k1, k2, k3, k4], [axis_a, axis_b], kmax, n).map_err(js_err)
}

#[wasm_bindgen]
pub struct WindingLoop {
    points: Vec<f64>,
    winding: Option<i64>,
}

#[wasm_bindgen]
impl WindingLoop {
    /// Interleaved `(n_x, n_y)` pairs.
    #[wasm_bindgen(getter)]
    pub fn points(&self) -> Vec<f64> {
        self.points.clone()
    }

    /// Winding number, or NaN on a phase boundary.
    #[wasm_bindgen(getter)]
    pub fn winding(&self) -> f64 {
        self.winding.map_or(f64::NAN, |w| w as f64)
    }
}

#[wasm_bindgen(js_name = windingLoop)]
pub fn winding_loop_js(k1: f64, k2: f64, k3: f64, k4: f64, frame: u8, n: usize) -> Result<WindingLoop, JsError> {
    let (points, winding) = frame_loop([k1, k2, k3, k4], frame, n).map_err(js_err)?;
    Ok(WindingLoop { points, winding })
}

#[wasm_bindgen]
pub struct Corners(CornerView);

#[wasm_bindgen]
impl Corners {
    #[wasm_bindgen(getter)]
    pub fn size(&self) -> usize {
        self.0.l
    }

    #[wasm_bindgen(getter)]
    pub fn n0(&self) -> usize {
        self.0.n0
    }

    #[wasm_bindgen(getter)]
    pub fn npi(&self) -> usize {
        self.0.npi
    }

    /// `[w0, wπ]`, or empty on a phase boundary.
    #[wasm_bindgen(getter)]
    pub fn invariants(&self) -> Vec<i32> {
        self.0.invariants.map_or_else(Vec::new, |(a, b)| vec![a as i32, b as i32])
    }

    /// Mode-averaged density of the π sector if `pi`, else the zero sector.
    pub fn density(&self, pi: bool) -> Vec<f64> {
        if pi {
            self.0.density_pi.clone()
        } else {
            self.0.density_zero.clone()
        }
    }
}

#[wasm_bindgen(js_name = cornerCensus)]
pub fn corner_census_js(k1: f64, k2: f64, k3: f64, k4: f64, l: usize) -> Result<Corners, JsError> {
    corner_view([k1, k2, k3, k4], l).map(Corners).map_err(js_err)
}
