// SPDX-License-Identifier: Apache-2.0

//! Stroboscopic wave-packet dynamics and the mean chiral displacement.
//!
//! Each axis is evolved on a ring of `L` momentum sites stored in FFT order
//! (`ψ[k]` is site `n ≡ k mod L`). With `ψ(x) = Σ ψ_n e^{inx}` the shift acts
//! as `S ↔ e^{−ix}`, so both kicks are diagonal in `x`:
//! `exp(−iK_c(S+S†)/2) ↔ e^{−iK_c cos x}` and
//! `exp(iK_s(S−S†)/2i) ↔ e^{−iK_s sin x}`. Free phases are diagonal in `n`.
//! As long as the packet never reaches the seam the ring is the infinite
//! lattice; every step checks this.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Axis, Frame, KickParams, TimeFrame};
use crate::par;

/// Largest probability allowed on the two sites at each end of the window.
pub const LEAKAGE_TOL: f64 = 1e-10;

/// Parameters whose smallest gap `|sin E|` falls below `sin` of this angle
/// are flagged as near a transition.
pub const NEAR_TRANSITION: f64 = 0.05 * PI;

const MAX_DOUBLINGS: usize = 4;

/// Site `n` of ring index `k`.
pub fn ring_site(k: usize, l: usize) -> i64 {
    if k < l / 2 {
        k as i64
    } else {
        k as i64 - l as i64
    }
}

/// Ring index of site `n`.
pub fn ring_index(n: i64, l: usize) -> usize {
    n.rem_euclid(l as i64) as usize
}

/// Unit cell `N` of site `n`; cells are `(2N − 1, 2N)`.
pub fn unit_cell(n: i64) -> i64 {
    (n + 1).div_euclid(2)
}

/// Chiral eigenvalue of site `n`: `+1` on odd sites.
pub fn chiral_sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 1 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kick {
    Sin,
    Cos,
}

/// Diagonal factors of one axis on a ring of `l` sites.
#[derive(Clone)]
pub struct RingPropagator {
    l: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    sin_x: Vec<f64>,
    cos_x: Vec<f64>,
    k_sin: f64,
    k_cos: f64,
}

impl std::fmt::Debug for RingPropagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RingPropagator")
            .field("l", &self.l)
            .field("k_sin", &self.k_sin)
            .field("k_cos", &self.k_cos)
            .finish()
    }
}

impl RingPropagator {
    pub fn new(k_sin: f64, k_cos: f64, l: usize) -> Result<Self> {
        if l < 8 || !l.is_multiple_of(2) {
            return Err(Error::InvalidLattice(l));
        }
        let mut planner = FftPlanner::new();
        let (sin_x, cos_x) = (0..l).map(|j| (2.0 * PI * j as f64 / l as f64).sin_cos()).unzip();
        Ok(Self {
            l,
            forward: planner.plan_fft_forward(l),
            inverse: planner.plan_fft_inverse(l),
            sin_x,
            cos_x,
            k_sin,
            k_cos,
        })
    }

    pub fn for_axis(params: &KickParams, axis: Axis, l: usize) -> Result<Self> {
        let (ks, kc) = params.axis_strengths(axis);
        Self::new(ks, kc, l)
    }

    pub fn len(&self) -> usize {
        self.l
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Apply `kick` with strength scaled by `fraction` (e.g. ½ or −½).
    pub fn kick(&self, psi: &mut [Complex64], kick: Kick, fraction: f64) {
        let (k, profile) = match kick {
            Kick::Sin => (self.k_sin, &self.sin_x),
            Kick::Cos => (self.k_cos, &self.cos_x),
        };
        let k = k * fraction;
        if k == 0.0 {
            return;
        }
        self.inverse.process(psi);
        let norm = 1.0 / self.l as f64;
        for (z, &v) in psi.iter_mut().zip(profile) {
            *z *= Complex64::from_polar(norm, -k * v);
        }
        self.forward.process(psi);
    }

    /// `exp(±iπn²/2)`: multiply odd sites by `±i`.
    pub fn free_phase(&self, psi: &mut [Complex64], sign: f64) {
        let phase = Complex64::new(0.0, sign);
        for (k, z) in psi.iter_mut().enumerate() {
            if ring_site(k, self.l).rem_euclid(2) == 1 {
                *z *= phase;
            }
        }
    }

    /// One period in the lab ordering `P₊ K_cos P₋ K_sin`.
    pub fn physical_period(&self, psi: &mut [Complex64]) {
        self.kick(psi, Kick::Sin, 1.0);
        self.free_phase(psi, -1.0);
        self.kick(psi, Kick::Cos, 1.0);
        self.free_phase(psi, 1.0);
    }

    /// One period in a symmetric frame.
    ///
    /// `FG` frames: `K_sin^½ P₊ K_cos P₋ K_sin^½`.
    /// `GF` frames: `K_cos^½ P₋ K_sin P₊ K_cos^½`.
    pub fn frame_period(&self, psi: &mut [Complex64], frame: Frame) {
        if frame.is_fg() {
            self.kick(psi, Kick::Sin, 0.5);
            self.free_phase(psi, -1.0);
            self.kick(psi, Kick::Cos, 1.0);
            self.free_phase(psi, 1.0);
            self.kick(psi, Kick::Sin, 0.5);
        } else {
            self.kick(psi, Kick::Cos, 0.5);
            self.free_phase(psi, 1.0);
            self.kick(psi, Kick::Sin, 1.0);
            self.free_phase(psi, -1.0);
            self.kick(psi, Kick::Cos, 0.5);
        }
    }

    /// Probability on the two sites at each end of the window.
    pub fn leakage(&self, psi: &[Complex64]) -> f64 {
        let h = self.l / 2;
        [h - 2, h - 1, h, h + 1].iter().map(|&k| psi[k].norm_sqr()).sum()
    }
}

/// One axis of the evolving product state.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisState {
    pub frame: Frame,
    /// Ring amplitudes in FFT order.
    pub amplitudes: Vec<Complex64>,
}

impl AxisState {
    /// Fully polarized state on the chiral-up site `n = −1` of cell 0.
    pub fn initial(frame: Frame, l: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); l];
        amplitudes[ring_index(-1, l)] = Complex64::new(1.0, 0.0);
        Self { frame, amplitudes }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Σ_n N(n) s(n) |ψ_n|²`.
    pub fn chiral_displacement(&self) -> f64 {
        let l = self.amplitudes.len();
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(k, z)| {
                let n = ring_site(k, l);
                unit_cell(n) as f64 * chiral_sign(n) * z.norm_sqr()
            })
            .sum()
    }
}

/// Product state `|ψ_x⟩ ⊗ |ψ_y⟩` in a 2D time frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiralFrameState {
    pub frame: TimeFrame,
    pub x: AxisState,
    pub y: AxisState,
    pub t: usize,
}

pub fn initial_state(frame: TimeFrame, lx: usize, ly: usize) -> ChiralFrameState {
    ChiralFrameState { frame, x: AxisState::initial(frame.alpha(), lx), y: AxisState::initial(frame.beta(), ly), t: 0 }
}

/// Advance one axis by one frame period and check the window edges.
pub fn axis_step(prop: &RingPropagator, state: &mut AxisState, t: usize, axis: Axis) -> Result<()> {
    prop.frame_period(&mut state.amplitudes, state.frame);
    let leakage = prop.leakage(&state.amplitudes);
    if leakage >= LEAKAGE_TOL {
        return Err(Error::BoundaryLeakage { axis, leakage, t });
    }
    Ok(())
}

/// Advance the product state by one period.
pub fn frame_step(state: &mut ChiralFrameState, prop_x: &RingPropagator, prop_y: &RingPropagator) -> Result<()> {
    let t = state.t + 1;
    axis_step(prop_x, &mut state.x, t, Axis::X)?;
    axis_step(prop_y, &mut state.y, t, Axis::Y)?;
    state.t = t;
    Ok(())
}

/// Per-axis displacements and their product.
pub fn mcd_expectation(state: &ChiralFrameState) -> (f64, f64, f64) {
    let cx = state.x.chiral_displacement();
    let cy = state.y.chiral_displacement();
    (cx, cy, cx * cy)
}

/// `C_ν(t)` for `t = 1..=t_max` on a ring of `l` sites.
pub fn axis_mcd_series(params: &KickParams, frame: Frame, l: usize, t_max: usize) -> Result<Vec<f64>> {
    let axis = frame.axis();
    let prop = RingPropagator::for_axis(params, axis, l)?;
    let mut state = AxisState::initial(frame, l);
    let mut out = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        axis_step(&prop, &mut state, t, axis)?;
        out.push(state.chiral_displacement());
    }
    Ok(out)
}

/// Ring size `8⌈(K_max/π + 1) t_max⌉`.
pub fn auto_lattice_size(params: &KickParams, t_max: usize) -> usize {
    8 * ((params.k_max() / PI + 1.0) * t_max as f64).ceil().max(1.0) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct McdOptions {
    /// Fixed ring size; `None` auto-sizes and doubles on leakage.
    pub lattice: Option<usize>,
}

/// Time series, averages and recombined invariants of one MCD run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McdTrace {
    pub t_max: usize,
    pub lattice: usize,
    /// `C_ν(t)` for frames 1..4, `t = 1..=t_max`.
    pub frame_series: [Vec<f64>; 4],
    /// `C_αβ(t)` in the order of [`TimeFrame::ALL`].
    pub series: [Vec<f64>; 4],
    /// `C̄_αβ` in the order of [`TimeFrame::ALL`].
    pub averages: [f64; 4],
    pub c0: f64,
    pub cpi: f64,
    /// Time averages of the per-frame series `C_ν(t)`.
    pub frame_averages: [f64; 4],
    /// `(C̄0, C̄π)` recombined from products of the per-frame averages
    /// instead of averages of products. Diagnostic only.
    pub separable: (f64, f64),
    pub near_transition: bool,
}

/// `(C̄0, C̄π)` from the four frame averages ordered `13, 14, 23, 24`.
pub fn recombine(c: [f64; 4]) -> (f64, f64) {
    let [c13, c14, c23, c24] = c;
    let c0 = (c13 + c14 + c23 + c24).abs() + (c13 - c14 - c23 + c24).abs();
    let cpi = (c13 - c14 + c23 - c24).abs() + (c13 + c14 - c23 - c24).abs();
    (c0, cpi)
}

/// True when either axis has `min_θ |sin E| < sin(0.05π)`.
pub fn near_transition(params: &KickParams) -> bool {
    let floor = NEAR_TRANSITION.sin();
    [Axis::X, Axis::Y].into_iter().any(|axis| crate::model::min_gap(params, axis, crate::model::DEFAULT_GRID).0 < floor)
}

fn run_frames(params: &KickParams, l: usize, t_max: usize) -> Result<[Vec<f64>; 4]> {
    let runs = par::map_indexed(4, |i| axis_mcd_series(params, Frame::ALL[i], l, t_max));
    let mut it = runs.into_iter();
    Ok([it.next().unwrap()?, it.next().unwrap()?, it.next().unwrap()?, it.next().unwrap()?])
}

/// Run all four frames and recombine the time-averaged displacements.
pub fn mcd_invariants(params: &KickParams, t_max: usize, opts: McdOptions) -> Result<McdTrace> {
    if t_max == 0 {
        return Err(Error::InvalidParams("t_max must be at least 1".into()));
    }
    let (mut l, retries) = match opts.lattice {
        Some(l) => (l, 0),
        None => (auto_lattice_size(params, t_max), MAX_DOUBLINGS),
    };
    let mut attempt = 0;
    let frame_series = loop {
        match run_frames(params, l, t_max) {
            Err(Error::BoundaryLeakage { .. }) if attempt < retries => {
                attempt += 1;
                l *= 2;
            }
            other => break other?,
        }
    };
    let series = TimeFrame::ALL.map(|tf| {
        let a = &frame_series[tf.alpha().index() as usize - 1];
        let b = &frame_series[tf.beta().index() as usize - 1];
        a.iter().zip(b).map(|(x, y)| x * y).collect::<Vec<f64>>()
    });
    let mean = |s: &Vec<f64>| s.iter().sum::<f64>() / t_max as f64;
    let averages = series.each_ref().map(mean);
    let frame_averages = frame_series.each_ref().map(mean);
    let (c0, cpi) = recombine(averages);
    let separable =
        recombine(TimeFrame::ALL.map(|tf| {
            frame_averages[tf.alpha().index() as usize - 1] * frame_averages[tf.beta().index() as usize - 1]
        }));
    Ok(McdTrace {
        t_max,
        lattice: l,
        frame_series,
        series,
        averages,
        c0,
        cpi,
        frame_averages,
        separable,
        near_transition: near_transition(params),
    })
}
