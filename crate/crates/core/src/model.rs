// SPDX-License-Identifier: Apache-2.0

//! Closed-form Bloch-level objects of the on-resonance double-kicked lattice.
//!
//! At quantum resonance with `ħτ = π` and `φx = φy = π/2` each axis reduces to
//! a 2×2 Floquet matrix at fixed quasiposition θ. The symmetric time frames
//! write it as `FG` / `GF` with
//!
//! ```text
//! F = e^{i𝒦s/2 n̂·σ} e^{iπ/4 σz} e^{-i𝒦c/2 n̂·σ}
//! G = e^{-i𝒦c/2 n̂·σ} e^{-iπ/4 σz} e^{i𝒦s/2 n̂·σ}
//! ```
//!
//! where `n̂ = (cos θ/2, sin θ/2)`, `𝒦s = K_sin sin θ/2` and
//! `𝒦c = K_cos cos θ/2`. Global phases are dropped throughout, so every
//! block lies in SU(2).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = Matrix2<Complex64>;

/// Below this value of `sin E` the unit vector is undefined.
pub const GAPLESS_SIN_E: f64 = 1e-8;

/// Rounding overshoot tolerated by [`acos_clamped`].
pub const ACOS_SLACK: f64 = 1e-14;

/// Default number of quasiposition samples on the θ circle.
pub const DEFAULT_GRID: usize = 1024;

const PHASE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
        }
    }
}

/// Kicking strengths `K1..K4` plus the fixed phases of the analytic path.
///
/// `K1`/`K3` drive the sine kicks and `K2`/`K4` the cosine kicks along x/y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KickParams {
    k: [f64; 4],
    phi_x: f64,
    phi_y: f64,
    hbar_tau: f64,
}

impl KickParams {
    pub fn new(k1: f64, k2: f64, k3: f64, k4: f64) -> Result<Self> {
        Self::with_phases([k1, k2, k3, k4], FRAC_PI_2, FRAC_PI_2, PI)
    }

    /// Strengths given in units of π, the way parameters are usually quoted.
    pub fn from_pi_multiples(k: [f64; 4]) -> Result<Self> {
        Self::new(k[0] * PI, k[1] * PI, k[2] * PI, k[3] * PI)
    }

    /// Full constructor. Only the resonant analytic path is supported, so any
    /// other phase offset or time delay is rejected.
    pub fn with_phases(k: [f64; 4], phi_x: f64, phi_y: f64, hbar_tau: f64) -> Result<Self> {
        for (i, &ki) in k.iter().enumerate() {
            if !ki.is_finite() || ki < 0.0 {
                return Err(Error::InvalidParams(format!("K{} = {ki} must be finite and >= 0", i + 1)));
            }
        }
        if (phi_x - FRAC_PI_2).abs() > PHASE_TOL || (phi_y - FRAC_PI_2).abs() > PHASE_TOL {
            return Err(Error::InvalidParams(format!("phase offsets ({phi_x}, {phi_y}) must both equal pi/2")));
        }
        if (hbar_tau - PI).abs() > PHASE_TOL {
            return Err(Error::InvalidParams(format!("hbar*tau = {hbar_tau} must equal pi")));
        }
        Ok(Self { k, phi_x, phi_y, hbar_tau })
    }

    pub fn k(&self) -> [f64; 4] {
        self.k
    }

    pub fn phi_x(&self) -> f64 {
        self.phi_x
    }

    pub fn phi_y(&self) -> f64 {
        self.phi_y
    }

    pub fn hbar_tau(&self) -> f64 {
        self.hbar_tau
    }

    /// `(K_sin, K_cos)` acting along `axis`: `(K1, K2)` for x, `(K3, K4)` for y.
    pub fn axis_strengths(&self, axis: Axis) -> (f64, f64) {
        match axis {
            Axis::X => (self.k[0], self.k[1]),
            Axis::Y => (self.k[2], self.k[3]),
        }
    }

    /// Copy with `K_{index+1}` replaced.
    pub fn with_k(&self, index: usize, value: f64) -> Result<Self> {
        let mut k = self.k;
        *k.get_mut(index).ok_or_else(|| Error::InvalidParams(format!("no kick strength K{}", index + 1)))? = value;
        Self::with_phases(k, self.phi_x, self.phi_y, self.hbar_tau)
    }

    /// Exchange the x pair `(K1, K2)` with the y pair `(K3, K4)`.
    pub fn swap_axes(&self) -> Self {
        Self { k: [self.k[2], self.k[3], self.k[0], self.k[1]], ..*self }
    }

    pub fn k_max(&self) -> f64 {
        self.k.iter().copied().fold(0.0, f64::max)
    }
}

/// Quasiposition angle, always stored in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Quasiposition(f64);

impl Quasiposition {
    pub fn new(theta: f64) -> Self {
        let t = theta.rem_euclid(TAU);
        // rem_euclid can round tiny negative inputs up to exactly 2π.
        Self(if t >= TAU { 0.0 } else { t })
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `k`-th point of the uniform endpoint-exclusive grid with `n` points.
    pub fn grid_point(k: usize, n: usize) -> Self {
        Self::new(TAU * k as f64 / n as f64)
    }

    fn half_angle(self) -> (f64, f64) {
        (0.5 * self.0).sin_cos()
    }
}

/// One of the four symmetric time frames: 1, 2 act on x and 3, 4 on y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Frame {
    One,
    Two,
    Three,
    Four,
}

impl Frame {
    pub const ALL: [Frame; 4] = [Frame::One, Frame::Two, Frame::Three, Frame::Four];

    pub fn index(self) -> u8 {
        match self {
            Frame::One => 1,
            Frame::Two => 2,
            Frame::Three => 3,
            Frame::Four => 4,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Frame::One),
            2 => Some(Frame::Two),
            3 => Some(Frame::Three),
            4 => Some(Frame::Four),
            _ => None,
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Frame::One | Frame::Two => Axis::X,
            Frame::Three | Frame::Four => Axis::Y,
        }
    }

    /// True for the `FG` ordering (frames 1 and 3), false for `GF`.
    pub fn is_fg(self) -> bool {
        matches!(self, Frame::One | Frame::Three)
    }

    /// The two frames living on `axis`, `FG` first.
    pub fn on_axis(axis: Axis) -> [Frame; 2] {
        match axis {
            Axis::X => [Frame::One, Frame::Two],
            Axis::Y => [Frame::Three, Frame::Four],
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A combined 2D frame `(α, β)` with `α ∈ {1, 2}` and `β ∈ {3, 4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimeFrame {
    alpha: Frame,
    beta: Frame,
}

impl TimeFrame {
    /// In the order (1,3), (1,4), (2,3), (2,4).
    pub const ALL: [TimeFrame; 4] = [
        TimeFrame { alpha: Frame::One, beta: Frame::Three },
        TimeFrame { alpha: Frame::One, beta: Frame::Four },
        TimeFrame { alpha: Frame::Two, beta: Frame::Three },
        TimeFrame { alpha: Frame::Two, beta: Frame::Four },
    ];

    pub fn new(alpha: Frame, beta: Frame) -> Option<Self> {
        (alpha.axis() == Axis::X && beta.axis() == Axis::Y).then_some(Self { alpha, beta })
    }

    pub fn alpha(self) -> Frame {
        self.alpha
    }

    pub fn beta(self) -> Frame {
        self.beta
    }

    pub fn frame(self, axis: Axis) -> Frame {
        match axis {
            Axis::X => self.alpha,
            Axis::Y => self.beta,
        }
    }
}

impl fmt::Display for TimeFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.alpha.index(), self.beta.index())
    }
}

/// A 2×2 frame matrix at fixed θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochBlock {
    pub entries: Mat2,
    pub frame: Frame,
    pub theta: Quasiposition,
}

impl BlochBlock {
    /// max-abs of `U†U − I`.
    pub fn unitarity_error(&self) -> f64 {
        max_abs(&(self.entries.adjoint() * self.entries - Mat2::identity()))
    }

    /// max-abs of `σz U σz − U†`.
    pub fn chiral_error(&self) -> f64 {
        let sz = pauli_z();
        max_abs(&(sz * self.entries * sz - self.entries.adjoint()))
    }

    pub fn determinant(&self) -> Complex64 {
        self.entries.determinant()
    }

    /// The eigenphase `E ∈ [0, π]`; the eigenvalues are `e^{∓iE}`.
    pub fn eigenphase(&self) -> Result<f64> {
        acos_clamped(0.5 * self.entries.trace().re)
    }
}

/// `arccos` on `[0, π]`, clamping overshoot up to [`ACOS_SLACK`].
pub fn acos_clamped(x: f64) -> Result<f64> {
    if x.abs() <= 1.0 {
        Ok(x.acos())
    } else if x.abs() <= 1.0 + ACOS_SLACK {
        Ok(x.clamp(-1.0, 1.0).acos())
    } else {
        Err(Error::Domain(x))
    }
}

pub(crate) fn max_abs(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn pauli_x() -> Mat2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    Mat2::new(o, l, l, o)
}

pub fn pauli_y() -> Mat2 {
    let (o, i) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
    Mat2::new(o, -i, i, o)
}

pub fn pauli_z() -> Mat2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    Mat2::new(l, o, o, -l)
}

/// `exp(i a (cos φ σx + sin φ σy))`.
fn planar_rotation(a: f64, phi: f64) -> Mat2 {
    let (s, c) = a.sin_cos();
    let off = Complex64::new(0.0, s);
    Mat2::new(
        Complex64::new(c, 0.0),
        off * Complex64::from_polar(1.0, -phi),
        off * Complex64::from_polar(1.0, phi),
        Complex64::new(c, 0.0),
    )
}

/// `exp(i b σz)`.
fn z_rotation(b: f64) -> Mat2 {
    let o = Complex64::new(0.0, 0.0);
    Mat2::new(Complex64::from_polar(1.0, b), o, o, Complex64::from_polar(1.0, -b))
}

/// `(𝒦_sin, 𝒦_cos) = (K_sin sin θ/2, K_cos cos θ/2)` for the given axis.
pub fn shorthand_kappas(params: &KickParams, theta: Quasiposition, axis: Axis) -> (f64, f64) {
    let (ks, kc) = params.axis_strengths(axis);
    let (s, c) = theta.half_angle();
    (ks * s, kc * c)
}

/// The frame matrix `FG` (frames 1, 3) or `GF` (frames 2, 4).
pub fn frame_matrix(params: &KickParams, theta: Quasiposition, frame: Frame) -> BlochBlock {
    let (ks, kc) = shorthand_kappas(params, theta, frame.axis());
    let phi = 0.5 * theta.value();
    let sin_half = planar_rotation(0.5 * ks, phi);
    let cos_half = planar_rotation(-0.5 * kc, phi);
    let f = sin_half * z_rotation(FRAC_PI_4) * cos_half;
    let g = cos_half * z_rotation(-FRAC_PI_4) * sin_half;
    let entries = if frame.is_fg() { f * g } else { g * f };
    BlochBlock { entries, frame, theta }
}

/// `E(θ) = arccos(cos 𝒦_sin cos 𝒦_cos)` on the principal branch `[0, π]`.
pub fn dispersion(params: &KickParams, theta: Quasiposition, axis: Axis) -> f64 {
    let (ks, kc) = shorthand_kappas(params, theta, axis);
    // A product of two cosines never leaves [-1, 1].
    (ks.cos() * kc.cos()).clamp(-1.0, 1.0).acos()
}

/// The four bands `s Ex + s' Ey` reduced to `(-π, π]`, ordered
/// `(+,+), (+,-), (-,+), (-,-)`.
pub fn band_energies(params: &KickParams, theta_x: Quasiposition, theta_y: Quasiposition) -> [f64; 4] {
    let ex = dispersion(params, theta_x, Axis::X);
    let ey = dispersion(params, theta_y, Axis::Y);
    [ex + ey, ex - ey, -ex + ey, -ex - ey].map(crate::wrap_phase)
}

/// Unit vector `(n_νx, n_νy)` with `U_ν = exp(-iE n̂_ν·σ)`.
pub fn unit_vector(params: &KickParams, theta: Quasiposition, frame: Frame) -> Result<(f64, f64)> {
    let (ks, kc) = shorthand_kappas(params, theta, frame.axis());
    let (s, c) = theta.half_angle();
    let (sin_ks, cos_ks) = ks.sin_cos();
    let (sin_kc, cos_kc) = kc.sin_cos();
    let sin_e = (cos_ks * cos_kc).clamp(-1.0, 1.0).acos().sin();
    if sin_e < GAPLESS_SIN_E {
        return Err(Error::GaplessPoint { theta: theta.value(), sin_e });
    }
    let v = if frame.is_fg() {
        (-(c * sin_ks * cos_kc - s * sin_kc) / sin_e, -(s * sin_ks * cos_kc + c * sin_kc) / sin_e)
    } else {
        ((c * cos_ks * sin_kc + s * sin_ks) / sin_e, (s * cos_ks * sin_kc - c * sin_ks) / sin_e)
    };
    Ok(v)
}

/// Dispersions, bands and unit vectors at one point of the 2D Brillouin zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub ex: f64,
    pub ey: f64,
    pub e4: [f64; 4],
    /// Indexed by frame 1..4; `None` where the gap closes.
    pub nvec: [Option<(f64, f64)>; 4],
}

pub fn band_point(params: &KickParams, theta_x: Quasiposition, theta_y: Quasiposition) -> BandPoint {
    let nvec = Frame::ALL.map(|f| {
        let theta = if f.axis() == Axis::X { theta_x } else { theta_y };
        unit_vector(params, theta, f).ok()
    });
    BandPoint {
        ex: dispersion(params, theta_x, Axis::X),
        ey: dispersion(params, theta_y, Axis::Y),
        e4: band_energies(params, theta_x, theta_y),
        nvec,
    }
}

/// Smallest `|sin E(θ)|` on an `n`-point grid, with the θ where it occurs.
pub fn min_gap(params: &KickParams, axis: Axis, n: usize) -> (f64, f64) {
    (0..n)
        .map(|k| {
            let theta = Quasiposition::grid_point(k, n);
            (dispersion(params, theta, axis).sin().abs(), theta.value())
        })
        .fold((f64::INFINITY, 0.0), |best, cur| if cur.0 < best.0 { cur } else { best })
}

/// Integer witness `(m_sin, m_cos)` of a gap closing on one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryWitness {
    pub m_sin: i64,
    pub m_cos: i64,
}

/// Outcome of the analytic boundary test, per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub x: Option<BoundaryWitness>,
    pub y: Option<BoundaryWitness>,
}

impl BoundaryCheck {
    pub fn is_on_boundary(&self) -> bool {
        self.x.is_some() || self.y.is_some()
    }
}

/// `(m_s π / K_s)² + (m_c π / K_c)² − 1`; a zero strength contributes 0.
pub fn boundary_residual(k_sin: f64, k_cos: f64, m: BoundaryWitness) -> f64 {
    let term = |m: i64, k: f64| if m == 0 { 0.0 } else { (m as f64 * PI / k).powi(2) };
    term(m.m_sin, k_sin) + term(m.m_cos, k_cos) - 1.0
}

/// Search the gap-closing conditions `𝒦_sin, 𝒦_cos ∈ πℤ` on one axis.
///
/// The gap closes iff integers with `|m π / K| ≤ 1` put the point on the
/// ellipse `(m_s π/K_s)² + (m_c π/K_c)² = 1`. A vanishing strength closes the
/// gap unconditionally (θ = 0 or π gives `E = 0`); its witness is `(0, 0)`.
pub fn axis_boundary(k_sin: f64, k_cos: f64, tol: f64) -> Option<BoundaryWitness> {
    if k_sin == 0.0 || k_cos == 0.0 {
        return Some(BoundaryWitness { m_sin: 0, m_cos: 0 });
    }
    let ms_max = (k_sin / PI).floor() as i64;
    let mc_max = (k_cos / PI).floor() as i64;
    let mut best: Option<(f64, BoundaryWitness)> = None;
    for m_sin in 0..=ms_max {
        for m_cos in 0..=mc_max {
            let m = BoundaryWitness { m_sin, m_cos };
            let r = boundary_residual(k_sin, k_cos, m).abs();
            if r <= tol && best.is_none_or(|(b, _)| r < b) {
                best = Some((r, m));
            }
        }
    }
    best.map(|(_, m)| m)
}

pub fn on_phase_boundary(params: &KickParams, tol: f64) -> BoundaryCheck {
    let (k1, k2) = params.axis_strengths(Axis::X);
    let (k3, k4) = params.axis_strengths(Axis::Y);
    BoundaryCheck { x: axis_boundary(k1, k2, tol), y: axis_boundary(k3, k4, tol) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::SQRT_2;

    fn params(k: [f64; 4]) -> KickParams {
        KickParams::from_pi_multiples(k).unwrap()
    }

    fn random_params(rng: &mut ChaCha8Rng) -> KickParams {
        KickParams::new(
            rng.gen_range(0.0..5.0 * PI),
            rng.gen_range(0.0..5.0 * PI),
            rng.gen_range(0.0..5.0 * PI),
            rng.gen_range(0.0..5.0 * PI),
        )
        .unwrap()
    }

    /// Taylor-summed `exp(M)` for 2×2 matrices.
    fn series_exp(m: Mat2) -> Mat2 {
        let mut term = Mat2::identity();
        let mut sum = Mat2::identity();
        for k in 1..200 {
            term = term * m / Complex64::new(k as f64, 0.0);
            sum += term;
            if max_abs(&term) < 1e-18 {
                break;
            }
        }
        sum
    }

    fn planar(theta: f64) -> Mat2 {
        let (s, c) = (0.5 * theta).sin_cos();
        pauli_x() * Complex64::new(c, 0.0) + pauli_y() * Complex64::new(s, 0.0)
    }

    fn i_times(x: f64) -> Complex64 {
        Complex64::new(0.0, x)
    }

    #[test]
    fn rejects_off_path_phases() {
        assert!(KickParams::with_phases([1.0; 4], 0.3, FRAC_PI_2, PI).is_err());
        assert!(KickParams::with_phases([1.0; 4], FRAC_PI_2, FRAC_PI_2, 2.0).is_err());
        assert!(KickParams::new(-1.0, 0.0, 0.0, 0.0).is_err());
        assert!(KickParams::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn quasiposition_is_reduced() {
        assert!((Quasiposition::new(-0.5).value() - (TAU - 0.5)).abs() < 1e-15);
        assert_eq!(Quasiposition::new(TAU).value(), 0.0);
        assert!(Quasiposition::new(-1e-18).value() < TAU);
    }

    #[test]
    fn time_frames_only_pair_x_with_y() {
        assert!(TimeFrame::new(Frame::One, Frame::Four).is_some());
        assert!(TimeFrame::new(Frame::One, Frame::Two).is_none());
        assert!(TimeFrame::new(Frame::Three, Frame::One).is_none());
    }

    #[test]
    fn shorthand_examples() {
        let p = KickParams::new(0.5 * PI, 2.0, 0.0, 0.0).unwrap();
        let (a, b) = shorthand_kappas(&p, Quasiposition::new(0.0), Axis::X);
        assert_eq!(a, 0.0);
        assert_eq!(b, 2.0);
        let (a, b) = shorthand_kappas(&p, Quasiposition::new(PI), Axis::X);
        assert!((a - 0.5 * PI).abs() < 1e-15 && b.abs() < 1e-15);
        let p = KickParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
        let (a, b) = shorthand_kappas(&p, Quasiposition::new(FRAC_PI_2), Axis::X);
        assert!((a - SQRT_2 / 2.0).abs() < 1e-15 && (b - SQRT_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_kicks_give_identity() {
        let p = params([0.0, 0.0, 0.0, 0.0]);
        for k in 0..16 {
            let theta = Quasiposition::grid_point(k, 16);
            let u = frame_matrix(&p, theta, Frame::One).entries;
            assert!(max_abs(&(u - Mat2::identity())) < 1e-15);
        }
    }

    #[test]
    fn frame_matrix_matches_series_oracle() {
        let p = params([0.5, 3.5, 0.0, 0.0]);
        let theta = 1.0;
        let (ks, kc) = (0.5 * PI * (0.5f64).sin(), 3.5 * PI * (0.5f64).cos());
        let n = planar(theta);
        let sin_half = series_exp(n * i_times(0.5 * ks));
        let cos_half = series_exp(n * i_times(-0.5 * kc));
        let zp = series_exp(pauli_z() * i_times(FRAC_PI_4));
        let zm = series_exp(pauli_z() * i_times(-FRAC_PI_4));
        let f = sin_half * zp * cos_half;
        let g = cos_half * zm * sin_half;
        let u1 = frame_matrix(&p, Quasiposition::new(theta), Frame::One).entries;
        let u2 = frame_matrix(&p, Quasiposition::new(theta), Frame::Two).entries;
        assert!(max_abs(&(u1 - f * g)) < 1e-10);
        assert!(max_abs(&(u2 - g * f)) < 1e-10);
    }

    #[test]
    fn block_invariants_on_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..8 {
            let p = random_params(&mut rng);
            for k in 0..1024 {
                let theta = Quasiposition::grid_point(k, 1024);
                for frame in Frame::ALL {
                    let b = frame_matrix(&p, theta, frame);
                    assert!(b.chiral_error() < 1e-12);
                    assert!(b.unitarity_error() < 1e-12);
                    assert!((b.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn eigenphases_pair_and_match_dispersion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let p = random_params(&mut rng);
            let theta = Quasiposition::new(rng.gen_range(0.0..TAU));
            for frame in Frame::ALL {
                let u = frame_matrix(&p, theta, frame).entries;
                // Eigenvalues from the characteristic polynomial λ² − tr λ + det.
                let tr = u.trace();
                let det = u.determinant();
                let disc = (tr * tr - det * 4.0).sqrt();
                let l1 = (tr + disc) * 0.5;
                let l2 = (tr - disc) * 0.5;
                let (a, b) = (-l1.arg(), -l2.arg());
                let e = dispersion(&p, theta, frame.axis());
                assert!((a + b).abs() < 1e-10, "{a} {b}");
                assert!((a.abs() - e).abs() < 1e-9, "{a} vs {e}");
            }
            // FG and GF are similar.
            let [f1, f2] = Frame::on_axis(Axis::X);
            let t1 = frame_matrix(&p, theta, f1).entries.trace();
            let t2 = frame_matrix(&p, theta, f2).entries.trace();
            assert!((t1 - t2).norm() < 1e-10);
        }
    }

    #[test]
    fn dispersion_examples() {
        let p = params([0.0, 0.0, 0.0, 0.0]);
        assert_eq!(dispersion(&p, Quasiposition::new(1.3), Axis::X), 0.0);
        let p = params([0.5, 0.0, 0.0, 0.0]);
        assert!((dispersion(&p, Quasiposition::new(PI), Axis::X) - FRAC_PI_2).abs() < 1e-12);
        let p = params([0.0, 1.0, 0.0, 0.0]);
        assert!((dispersion(&p, Quasiposition::new(0.0), Axis::X) - PI).abs() < 1e-12);
    }

    #[test]
    fn dispersion_is_periodic() {
        let p = params([0.7, 2.3, 1.1, 4.2]);
        for k in 0..64 {
            let t = 0.1 * k as f64;
            for axis in [Axis::X, Axis::Y] {
                let a = dispersion(&p, Quasiposition::new(t), axis);
                let b = dispersion(&p, Quasiposition::new(t + TAU), axis);
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn band_energy_examples() {
        let p = params([0.0, 0.0, 0.0, 0.0]);
        assert_eq!(band_energies(&p, Quasiposition::new(0.3), Quasiposition::new(2.0)), [0.0; 4]);
        // K1 = K3 = π/2 at θ = π makes Ex = Ey = π/2.
        let p = params([0.5, 0.0, 0.5, 0.0]);
        let e = band_energies(&p, Quasiposition::new(PI), Quasiposition::new(PI));
        let want = [PI, 0.0, 0.0, PI];
        for (a, b) in e.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn band_energies_match_kronecker_eigenphases() {
        use nalgebra::DMatrix;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = random_params(&mut rng);
            let tx = Quasiposition::new(rng.gen_range(0.0..TAU));
            let ty = Quasiposition::new(rng.gen_range(0.0..TAU));
            let ux = frame_matrix(&p, tx, Frame::One).entries;
            let uy = frame_matrix(&p, ty, Frame::Four).entries;
            let big = DMatrix::from_fn(4, 4, |r, c| ux[(r / 2, c / 2)] * uy[(r % 2, c % 2)]);
            let schur = big.schur();
            let mut got: Vec<f64> = schur.eigenvalues().unwrap().iter().map(|l| -l.arg()).collect();
            for want in band_energies(&p, tx, ty) {
                let (idx, d) = got
                    .iter()
                    .map(|g| crate::wrap_phase(g - want).abs())
                    .enumerate()
                    .fold((0, f64::INFINITY), |b, (i, d)| if d < b.1 { (i, d) } else { b });
                assert!(d < 1e-10, "{want} not in {got:?}");
                got.swap_remove(idx);
            }
        }
    }

    #[test]
    fn unit_vector_reconstructs_frame_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 1000 {
            let p = random_params(&mut rng);
            let theta = Quasiposition::new(rng.gen_range(0.0..TAU));
            for frame in Frame::ALL {
                let Ok((nx, ny)) = unit_vector(&p, theta, frame) else { continue };
                assert!((nx * nx + ny * ny - 1.0).abs() < 1e-10);
                let e = dispersion(&p, theta, frame.axis());
                let gen = (pauli_x() * Complex64::new(nx, 0.0) + pauli_y() * Complex64::new(ny, 0.0))
                    * Complex64::new(0.0, -e);
                let u = frame_matrix(&p, theta, frame).entries;
                assert!(max_abs(&(series_exp(gen) - u)) < 1e-10);
                checked += 1;
            }
        }
    }

    #[test]
    fn unit_vector_gapless() {
        let p = params([0.5, 0.0, 0.0, 0.0]);
        let err = unit_vector(&p, Quasiposition::new(0.0), Frame::One).unwrap_err();
        assert!(matches!(err, Error::GaplessPoint { .. }));
    }

    #[test]
    fn phase_boundary_examples() {
        let p = params([0.5, 2.0, 0.5, 1.3]);
        assert_eq!(on_phase_boundary(&p, 1e-9).x, Some(BoundaryWitness { m_sin: 0, m_cos: 2 }));
        let p = KickParams::new(SQRT_2 * PI, SQRT_2 * PI, 0.5 * PI, 1.3 * PI).unwrap();
        assert_eq!(on_phase_boundary(&p, 1e-9).x, Some(BoundaryWitness { m_sin: 1, m_cos: 1 }));
        let p = params([0.5, 1.3, 0.5, 2.6]);
        assert!(!on_phase_boundary(&p, 1e-9).is_on_boundary());
        let p = params([0.5, 0.0, 0.5, 1.5]);
        assert_eq!(on_phase_boundary(&p, 1e-9).x, Some(BoundaryWitness { m_sin: 0, m_cos: 0 }));
    }

    #[test]
    fn gap_closing_iff_boundary() {
        // Points placed exactly on boundaries close the gap; random ones do not.
        let on = [[0.5, 2.0, 0.5, 1.5], [0.5, 3.5, 0.5, 4.0], [SQRT_2, SQRT_2, 0.3, 0.7]];
        for k in on {
            let p = params(k);
            assert!(on_phase_boundary(&p, 1e-9).is_on_boundary());
            let gx = min_gap(&p, Axis::X, 4096).0;
            let gy = min_gap(&p, Axis::Y, 4096).0;
            // The closing point may fall between grid nodes; it is within grid resolution.
            assert!(gx.min(gy) < 2e-2, "{k:?}: {gx} {gy}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let p = random_params(&mut rng);
            let g = min_gap(&p, Axis::X, 1024).0.min(min_gap(&p, Axis::Y, 1024).0);
            if g < 1e-6 {
                assert!(on_phase_boundary(&p, 1e-3).is_on_boundary());
            }
        }
        // A grid node exactly at the closing point reads as gapless.
        let p = params([0.5, 2.0, 0.5, 1.5]);
        assert!(min_gap(&p, Axis::X, 1024).0 < 1e-6);
    }

    #[test]
    fn swap_axes_exchanges_pairs() {
        let p = params([0.1, 0.2, 0.3, 0.4]);
        let s = p.swap_axes();
        assert_eq!(s.axis_strengths(Axis::X), p.axis_strengths(Axis::Y));
        assert_eq!(s.axis_strengths(Axis::Y), p.axis_strengths(Axis::X));
    }
}
