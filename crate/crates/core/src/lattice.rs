// SPDX-License-Identifier: Apache-2.0

//! Finite momentum-space chains, their spectra and the edge/corner census.
//!
//! One period on an axis is `U = P₊ K_cos P₋ K_sin` with
//! `K_cos = exp(-i K_c (S + S†)/2)`, `K_sin = exp(i K_s (S − S†)/2i)`,
//! `(Sψ)_n = ψ_{n+1}` and free phases `P± = exp(±iπn²/2)`. Unit cells are
//! the pairs `(2N − 1, 2N)` with odd sites carrying `σz = +1`; an open chain
//! must therefore begin on an odd site so that it holds whole cells.
//!
//! 2D objects are never built: a 2D eigenstate is a product of one x-chain
//! and one y-chain eigenstate with eigenphase `E_x + E_y`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{self, InvariantSet};
use crate::model::{Axis, KickParams, DEFAULT_GRID};
use crate::{distance_from_pi, par, wrap_phase};

pub type CMatrix = DMatrix<Complex64>;

/// Default eigenphase window for zero and π modes.
pub const DEFAULT_E_TOL: f64 = 1e-6;
/// Default IPR threshold as a multiple of the median IPR of the spectrum.
pub const IPR_MEDIAN_FACTOR: f64 = 10.0;
/// Corner modes must hold this much weight inside one corner block.
pub const CORNER_WEIGHT_MIN: f64 = 0.9;

const UNITARY_MODULUS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub lx: usize,
    pub ly: usize,
}

impl LatticeSpec {
    pub fn new(lx: usize, ly: usize) -> Result<Self> {
        for l in [lx, ly] {
            if l < 8 || l % 2 != 0 {
                return Err(Error::InvalidLattice(l));
            }
        }
        Ok(Self { lx, ly })
    }

    pub fn square(l: usize) -> Result<Self> {
        Self::new(l, l)
    }

    pub fn len(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.lx,
            Axis::Y => self.ly,
        }
    }
}

/// Momentum sites of an open chain of `l` sites, centered on the origin and
/// starting on an odd site.
pub fn chain_sites(l: usize) -> Vec<i64> {
    let half = (l / 2) as i64;
    let start = if half % 2 == 0 { -half + 1 } else { -half };
    (start..start + l as i64).collect()
}

/// `(S + S†)/2` on an open chain.
fn hopping(l: usize) -> DMatrix<f64> {
    DMatrix::from_fn(l, l, |r, c| if r.abs_diff(c) == 1 { 0.5 } else { 0.0 })
}

fn free_phase(n: i64, sign: f64) -> Complex64 {
    if n.rem_euclid(2) == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, sign)
    }
}

/// `V diag(f(λ)) V†` for a real eigendecomposition.
fn spectral_map(eig: &SymmetricEigen<f64, nalgebra::Dyn>, f: impl Fn(f64) -> Complex64) -> CMatrix {
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let mut scaled = v.clone();
    for (mut col, &lam) in scaled.column_iter_mut().zip(eig.eigenvalues.iter()) {
        col *= f(lam);
    }
    scaled * v.transpose()
}

fn scale_rows(m: &mut CMatrix, d: &[Complex64]) {
    for (mut row, &x) in m.row_iter_mut().zip(d) {
        row *= x;
    }
}

fn scale_cols(m: &mut CMatrix, d: &[Complex64]) {
    for (mut col, &x) in m.column_iter_mut().zip(d) {
        col *= x;
    }
}

/// Open-chain building blocks that depend only on the chain length.
#[derive(Debug, Clone)]
pub struct ChainOperators {
    sites: Vec<i64>,
    hopping: SymmetricEigen<f64, nalgebra::Dyn>,
}

impl ChainOperators {
    pub fn new(l: usize) -> Result<Self> {
        if l < 8 || !l.is_multiple_of(2) {
            return Err(Error::InvalidLattice(l));
        }
        Ok(Self { sites: chain_sites(l), hopping: SymmetricEigen::new(hopping(l)) })
    }

    pub fn sites(&self) -> &[i64] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cos_kick(&self, k: f64) -> CMatrix {
        spectral_map(&self.hopping, |lam| Complex64::from_polar(1.0, -k * lam))
    }

    /// `(S − S†)/2i = D (S + S†)/2 D†` with `D = diag(i^j)`, so the sine kick
    /// is a gauge transform of a cosine kick with the opposite sign.
    pub fn sin_kick(&self, k: f64) -> CMatrix {
        let mut m = spectral_map(&self.hopping, |lam| Complex64::from_polar(1.0, k * lam));
        let gauge: Vec<Complex64> = (0..self.len()).map(|j| Complex64::i().powi(j as i32)).collect();
        let conj: Vec<Complex64> = gauge.iter().map(|z| z.conj()).collect();
        scale_rows(&mut m, &gauge);
        scale_cols(&mut m, &conj);
        m
    }

    /// `P₊ K_cos P₋ K_sin`.
    pub fn unitary(&self, k_sin: f64, k_cos: f64) -> CMatrix {
        let plus: Vec<Complex64> = self.sites.iter().map(|&n| free_phase(n, 1.0)).collect();
        let minus: Vec<Complex64> = plus.iter().map(|z| z.conj()).collect();
        let mut kc = self.cos_kick(k_cos);
        scale_rows(&mut kc, &plus);
        scale_cols(&mut kc, &minus);
        kc * self.sin_kick(k_sin)
    }
}

pub fn build_obc_unitary(params: &KickParams, axis: Axis, l: usize) -> Result<CMatrix> {
    let (ks, kc) = params.axis_strengths(axis);
    Ok(ChainOperators::new(l)?.unitary(ks, kc))
}

/// The same period on a ring of `l` sites, for comparison with Bloch bands.
pub fn build_pbc_unitary(params: &KickParams, axis: Axis, l: usize) -> Result<CMatrix> {
    if l < 8 || !l.is_multiple_of(4) {
        return Err(Error::InvalidLattice(l));
    }
    let (ks, kc) = params.axis_strengths(axis);
    let shift =
        CMatrix::from_fn(
            l,
            l,
            |r, c| {
                if c == (r + 1) % l {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            },
        );
    let hop = (&shift + shift.adjoint()) * Complex64::new(0.5, 0.0);
    let sine = (&shift - shift.adjoint()) * Complex64::new(0.0, -0.5);
    let expi = |h: CMatrix, a: f64| {
        let eig = SymmetricEigen::new(h);
        let mut scaled = eig.eigenvectors.clone();
        for (mut col, &lam) in scaled.column_iter_mut().zip(eig.eigenvalues.iter()) {
            col *= Complex64::from_polar(1.0, a * lam);
        }
        scaled * eig.eigenvectors.adjoint()
    };
    let sites = chain_sites(l);
    let plus: Vec<Complex64> = sites.iter().map(|&n| free_phase(n, 1.0)).collect();
    let minus: Vec<Complex64> = plus.iter().map(|z| z.conj()).collect();
    let mut kc = expi(hop, -kc);
    scale_rows(&mut kc, &plus);
    scale_cols(&mut kc, &minus);
    Ok(kc * expi(sine, ks))
}

/// `Σ|ψ|⁴` for a normalized state.
pub fn ipr<'a>(state: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    state.into_iter().map(|z| z.norm_sqr().powi(2)).sum()
}

/// Eigenphases `E ∈ (−π, π]` (eigenvalues `e^{−iE}`), eigenvectors and IPRs,
/// sorted by eigenphase.
#[derive(Debug, Clone)]
pub struct ObcSpectrum {
    pub eigenphases: Vec<f64>,
    /// One normalized eigenvector per column.
    pub eigenvectors: CMatrix,
    pub ipr: Vec<f64>,
    pub sites: Vec<i64>,
}

impl ObcSpectrum {
    pub fn len(&self) -> usize {
        self.eigenphases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenphases.is_empty()
    }

    pub fn state(&self, k: usize) -> DVector<Complex64> {
        self.eigenvectors.column(k).into_owned()
    }

    pub fn median_ipr(&self) -> f64 {
        median(&self.ipr)
    }

    /// Max over states of `‖Uψ − e^{−iE}ψ‖`.
    pub fn residual(&self, u: &CMatrix) -> f64 {
        (0..self.len())
            .map(|k| {
                let v = self.eigenvectors.column(k);
                (u * v - v * Complex64::from_polar(1.0, -self.eigenphases[k])).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Fraction of the weight of state `k` on the first (`Low`) or last
    /// (`High`) `width` sites.
    pub fn edge_weight(&self, k: usize, edge: Edge, width: usize) -> f64 {
        let col = self.eigenvectors.column(k);
        let l = self.len();
        let range = match edge {
            Edge::Low => 0..width.min(l),
            Edge::High => l.saturating_sub(width)..l,
        };
        range.map(|i| col[i].norm_sqr()).sum()
    }

    /// Which half of the chain holds most of state `k`.
    pub fn dominant_edge(&self, k: usize) -> Edge {
        if self.edge_weight(k, Edge::Low, self.len() / 2) >= 0.5 {
            Edge::Low
        } else {
            Edge::High
        }
    }
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    let mid = s.len() / 2;
    let (_, m, _) = s.select_nth_unstable_by(mid, f64::total_cmp);
    *m
}

/// Full eigendecomposition of a unitary chain operator.
///
/// A unitary matrix is normal, so its complex Schur form is diagonal and the
/// Schur vectors are eigenvectors. Nearly degenerate eigenvectors at `E = 0`
/// and `E = π` are left as the solver returns them; see
/// [`localize_degenerate`].
pub fn eigensolve(u: &CMatrix) -> Result<ObcSpectrum> {
    let l = u.nrows();
    let (q, t) = u.clone().schur().unpack();
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(l);
    for k in 0..l {
        let lam = t[(k, k)];
        if (lam.norm() - 1.0).abs() > UNITARY_MODULUS_TOL {
            return Err(Error::NumericalFailure(format!(
                "eigenvalue {lam} has modulus {} off the unit circle",
                lam.norm()
            )));
        }
        order.push((wrap_phase(-lam.arg()), k));
    }
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let eigenvectors = CMatrix::from_fn(l, l, |r, c| q[(r, order[c].1)]);
    let ipr = (0..l).map(|k| ipr(eigenvectors.column(k).iter())).collect();
    Ok(ObcSpectrum {
        eigenphases: order.iter().map(|p| p.0).collect(),
        eigenvectors,
        ipr,
        sites: (0..l as i64).collect(),
    })
}

/// Rotate each near-degenerate cluster at `E ≈ 0` and `E ≈ π` into the
/// eigenbasis of the projected position operator, which separates modes on
/// opposite edges. Eigenphases are refreshed from `⟨ψ|U|ψ⟩`.
pub fn localize_degenerate(spec: &mut ObcSpectrum, u: &CMatrix, window: f64) {
    let zero: Vec<usize> = (0..spec.len()).filter(|&k| spec.eigenphases[k].abs() < window).collect();
    let pi: Vec<usize> = (0..spec.len()).filter(|&k| distance_from_pi(spec.eigenphases[k]) < window).collect();
    for cluster in [zero, pi] {
        if cluster.len() < 2 {
            continue;
        }
        let l = spec.len();
        let basis = CMatrix::from_fn(l, cluster.len(), |r, c| spec.eigenvectors[(r, cluster[c])]);
        let mut xb = basis.clone();
        for (mut row, &n) in xb.row_iter_mut().zip(&spec.sites) {
            row *= Complex64::new(n as f64, 0.0);
        }
        let projected = basis.adjoint() * xb;
        let rotated = &basis * SymmetricEigen::new(projected).eigenvectors;
        for (c, &k) in cluster.iter().enumerate() {
            let v = rotated.column(c);
            let e = wrap_phase(-(v.adjoint() * u * v)[(0, 0)].arg());
            spec.eigenvectors.set_column(k, &v);
            spec.eigenphases[k] = e;
            spec.ipr[k] = ipr(v.iter());
        }
    }
}

/// Build, solve and localize the open chain for one axis.
pub fn solve_chain(params: &KickParams, axis: Axis, l: usize, e_tol: f64) -> Result<ObcSpectrum> {
    let ops = ChainOperators::new(l)?;
    let (ks, kc) = params.axis_strengths(axis);
    let u = ops.unitary(ks, kc);
    let mut spec = eigensolve(&u)?;
    spec.sites = ops.sites().to_vec();
    localize_degenerate(&mut spec, &u, 10.0 * e_tol);
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Zero,
    Pi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateLabel {
    Bulk,
    Edge(Sector),
}

/// Counts of zero and π edge modes on one chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeCensus {
    pub n_zero: usize,
    pub n_pi: usize,
    /// `[low, high]` edge counts per sector.
    pub zero_by_edge: [usize; 2],
    pub pi_by_edge: [usize; 2],
    pub ipr_min: f64,
    pub labels: Vec<StateLabel>,
    /// Indices of the edge modes in the spectrum, with sector and edge.
    pub modes: Vec<(usize, Sector, Edge)>,
}

/// Count zero and π edge modes: eigenphase within `e_tol` of the sector and
/// IPR above `ipr_min` (default: 10× the median IPR of the spectrum).
///
/// States close to either threshold are not guessed: an eigenphase distance
/// in `[e_tol/10, 10 e_tol]` or an in-window IPR within a factor 2 of
/// `ipr_min` yields [`Error::AmbiguousClassification`].
pub fn edge_mode_census_1d(spec: &ObcSpectrum, e_tol: f64, ipr_min: Option<f64>) -> Result<EdgeCensus> {
    let ipr_min = ipr_min.unwrap_or_else(|| IPR_MEDIAN_FACTOR * spec.median_ipr());
    let mut census = EdgeCensus {
        n_zero: 0,
        n_pi: 0,
        zero_by_edge: [0; 2],
        pi_by_edge: [0; 2],
        ipr_min,
        labels: vec![StateLabel::Bulk; spec.len()],
        modes: Vec::new(),
    };
    let mut ambiguous = Vec::new();
    for k in 0..spec.len() {
        let e = spec.eigenphases[k];
        let (d, sector) =
            if e.abs() <= distance_from_pi(e) { (e.abs(), Sector::Zero) } else { (distance_from_pi(e), Sector::Pi) };
        if d >= 10.0 * e_tol {
            continue;
        }
        let ipr = spec.ipr[k];
        if d > 0.1 * e_tol || (ipr > 0.5 * ipr_min && ipr < 2.0 * ipr_min) {
            ambiguous.push(format!("state {k}: E = {e:.3e}, IPR = {ipr:.3e}"));
            continue;
        }
        if ipr <= ipr_min {
            continue;
        }
        let edge = spec.dominant_edge(k);
        let side = edge as usize;
        match sector {
            Sector::Zero => {
                census.n_zero += 1;
                census.zero_by_edge[side] += 1;
            }
            Sector::Pi => {
                census.n_pi += 1;
                census.pi_by_edge[side] += 1;
            }
        }
        census.labels[k] = StateLabel::Edge(sector);
        census.modes.push((k, sector, edge));
    }
    if !ambiguous.is_empty() {
        return Err(Error::AmbiguousClassification { count: ambiguous.len(), detail: ambiguous.join("; ") });
    }
    Ok(census)
}

/// A corner of the square, by edge along each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub x: Edge,
    pub y: Edge,
}

impl Corner {
    pub const ALL: [Corner; 4] = [
        Corner { x: Edge::Low, y: Edge::Low },
        Corner { x: Edge::High, y: Edge::Low },
        Corner { x: Edge::Low, y: Edge::High },
        Corner { x: Edge::High, y: Edge::High },
    ];

    pub fn index(self) -> usize {
        self.x as usize + 2 * self.y as usize
    }
}

/// One product eigenstate classified as a corner mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerMode {
    pub sector: Sector,
    pub corner: Corner,
    pub eigenphase: f64,
    pub ipr: f64,
    /// Weight inside the `L/8 × L/8` block at `corner`.
    pub corner_weight: f64,
    pub x_state: usize,
    pub y_state: usize,
}

#[derive(Debug, Clone)]
pub struct CornerCensus {
    pub n0: usize,
    pub npi: usize,
    /// Indexed by [`Corner::index`].
    pub zero_by_corner: [usize; 4],
    pub pi_by_corner: [usize; 4],
    pub invariant_check: bool,
    pub invariants: Option<InvariantSet>,
    pub x: EdgeCensus,
    pub y: EdgeCensus,
    pub modes: Vec<CornerMode>,
    pub spectra: [ObcSpectrum; 2],
    /// `ipr_min` used for the direct 2D detection.
    pub ipr_min_2d: f64,
}

/// Tolerances of the corner census.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CensusOptions {
    pub e_tol: f64,
    /// 1D IPR threshold; `None` uses 10× the median per chain.
    pub ipr_min: Option<f64>,
    pub grid: usize,
    /// How many times a chain is doubled in length when its edge census is
    /// ambiguous.
    pub max_doublings: u32,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self { e_tol: DEFAULT_E_TOL, ipr_min: None, grid: DEFAULT_GRID, max_doublings: 1 }
    }
}

/// Solve one chain and take its edge census, doubling `l` up to
/// `opts.max_doublings` times while the census is ambiguous.
pub fn resolve_chain(
    params: &KickParams,
    axis: Axis,
    l: usize,
    opts: CensusOptions,
) -> Result<(ObcSpectrum, EdgeCensus)> {
    let mut l = l;
    let mut doublings = 0;
    loop {
        let spec = solve_chain(params, axis, l, opts.e_tol)?;
        match edge_mode_census_1d(&spec, opts.e_tol, opts.ipr_min) {
            Ok(census) => return Ok((spec, census)),
            Err(Error::AmbiguousClassification { .. }) if doublings < opts.max_doublings => {
                doublings += 1;
                l *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Zero and π corner modes of the open square.
///
/// The count is composed from the chain censuses (zero corners pair equal
/// sectors, π corners pair opposite ones) and cross-checked against a direct
/// scan over every product state: eigenphase within `2 e_tol` of a sector,
/// 2D IPR above 10× its median and at least 90% of the weight in one corner
/// block. Any disagreement is an error.
///
/// A chain whose edge census is ambiguous is re-solved at twice its length
/// (see [`resolve_chain`]), so the census may come from a larger lattice than
/// requested; the returned spectra carry the lengths actually used.
pub fn corner_census_2d(params: &KickParams, lattice: LatticeSpec, opts: CensusOptions) -> Result<CornerCensus> {
    let (sx, sy) = par::join(
        || resolve_chain(params, Axis::X, lattice.lx, opts),
        || resolve_chain(params, Axis::Y, lattice.ly, opts),
    );
    census_from_spectra(params, sx?.0, sy?.0, opts)
}

/// [`corner_census_2d`] from chains solved by [`solve_chain`], so that a
/// chain shared by several parameter points is solved once.
pub fn census_from_spectra(
    params: &KickParams,
    sx: ObcSpectrum,
    sy: ObcSpectrum,
    opts: CensusOptions,
) -> Result<CornerCensus> {
    let lattice = LatticeSpec::new(sx.len(), sy.len())?;
    let x = edge_mode_census_1d(&sx, opts.e_tol, opts.ipr_min)?;
    let y = edge_mode_census_1d(&sy, opts.e_tol, opts.ipr_min)?;
    let composed = (x.n_zero * y.n_zero + x.n_pi * y.n_pi, x.n_zero * y.n_pi + x.n_pi * y.n_zero);

    let ipr_2d: Vec<f64> = sx.ipr.iter().flat_map(|a| sy.ipr.iter().map(move |b| a * b)).collect();
    let ipr_min_2d = IPR_MEDIAN_FACTOR * median(&ipr_2d);
    let (bx, by) = (lattice.lx / 8, lattice.ly / 8);
    let mut modes = Vec::new();
    for i in 0..sx.len() {
        for j in 0..sy.len() {
            let e = wrap_phase(sx.eigenphases[i] + sy.eigenphases[j]);
            let sector = if e.abs() < 2.0 * opts.e_tol {
                Sector::Zero
            } else if distance_from_pi(e) < 2.0 * opts.e_tol {
                Sector::Pi
            } else {
                continue;
            };
            let ipr = sx.ipr[i] * sy.ipr[j];
            if ipr <= ipr_min_2d {
                continue;
            }
            let best = Corner::ALL
                .into_iter()
                .map(|c| (c, sx.edge_weight(i, c.x, bx) * sy.edge_weight(j, c.y, by)))
                .fold((Corner::ALL[0], -1.0), |a, b| if b.1 > a.1 { b } else { a });
            if best.1 >= CORNER_WEIGHT_MIN {
                modes.push(CornerMode {
                    sector,
                    corner: best.0,
                    eigenphase: e,
                    ipr,
                    corner_weight: best.1,
                    x_state: i,
                    y_state: j,
                });
            }
        }
    }
    let count = |s: Sector| modes.iter().filter(|m| m.sector == s).count();
    let direct = (count(Sector::Zero), count(Sector::Pi));
    if direct != composed {
        return Err(Error::Mismatch { composed, direct });
    }
    let mut zero_by_corner = [0; 4];
    let mut pi_by_corner = [0; 4];
    for m in &modes {
        match m.sector {
            Sector::Zero => zero_by_corner[m.corner.index()] += 1,
            Sector::Pi => pi_by_corner[m.corner.index()] += 1,
        }
    }
    let inv = invariants::hotp_invariants(params, opts.grid).ok();
    let invariant_check = inv.is_some_and(|s| (composed.0 as i64, composed.1 as i64) == (4 * s.w0, 4 * s.wpi));
    Ok(CornerCensus {
        n0: composed.0,
        npi: composed.1,
        zero_by_corner,
        pi_by_corner,
        invariant_check,
        invariants: inv,
        x,
        y,
        modes,
        spectra: [sx, sy],
        ipr_min_2d,
    })
}

/// `|ψ(n_x, n_y)|²` of one corner mode, row-major with `n_x` outermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMap {
    pub sector: Sector,
    pub corner: Corner,
    pub eigenphase: f64,
    pub sites_x: Vec<i64>,
    pub sites_y: Vec<i64>,
    pub density: Vec<f64>,
}

impl DensityMap {
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.density[ix * self.sites_y.len() + iy]
    }
}

pub fn corner_mode_density(census: &CornerCensus, sector: Sector) -> Vec<DensityMap> {
    let [sx, sy] = &census.spectra;
    census
        .modes
        .iter()
        .filter(|m| m.sector == sector)
        .map(|m| {
            let px: Vec<f64> = sx.eigenvectors.column(m.x_state).iter().map(|z| z.norm_sqr()).collect();
            let py: Vec<f64> = sy.eigenvectors.column(m.y_state).iter().map(|z| z.norm_sqr()).collect();
            DensityMap {
                sector,
                corner: m.corner,
                eigenphase: m.eigenphase,
                sites_x: sx.sites.clone(),
                sites_y: sy.sites.clone(),
                density: px.iter().flat_map(|a| py.iter().map(move |b| a * b)).collect(),
            }
        })
        .collect()
}

/// All `E_x + E_y` reduced to `(−π, π]`, sorted.
pub fn product_spectrum(x: &ObcSpectrum, y: &ObcSpectrum) -> Vec<f64> {
    let mut e: Vec<f64> =
        x.eigenphases.iter().flat_map(|a| y.eigenphases.iter().map(move |b| wrap_phase(a + b))).collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Largest gap between neighboring phases on the circle, including the gap
/// across `±π`. Input must be sorted.
pub fn max_phase_gap(sorted: &[f64]) -> f64 {
    match (sorted.first(), sorted.last()) {
        (Some(&lo), Some(&hi)) => {
            let inner = sorted.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            inner.max(lo + 2.0 * PI - hi)
        }
        _ => 2.0 * PI,
    }
}
