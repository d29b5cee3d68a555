// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use ordkl_core::invariants::{phase_diagram, Cell, PhaseDiagram, Sampling, ScanSpec};
use ordkl_core::model::DEFAULT_GRID;
use ordkl_core::KickParams;

const RES: usize = 64;

fn cell_width() -> f64 {
    5.0 * PI / RES as f64
}

fn scan_k3_k4() -> PhaseDiagram {
    let h = cell_width();
    let spec = ScanSpec {
        k_index: [2, 3],
        range: [(h, 5.0 * PI), (h, 5.0 * PI)],
        resolution: [RES, RES],
        sampling: Sampling::Endpoints,
        grid: DEFAULT_GRID,
    };
    let base = KickParams::from_pi_multiples([0.5, 3.5, 0.0, 0.0]).unwrap();
    phase_diagram(&base, &spec).unwrap()
}

/// `(m_s π/K_s)² + (m_c π/K_c)² − 1`, monotone in each strength.
fn ellipse(ks: f64, kc: f64, (ms, mc): (u32, u32)) -> f64 {
    (ms as f64 * PI / ks).powi(2) + (mc as f64 * PI / kc).powi(2) - 1.0
}

/// Curves of the family crossing the box of half-width `h` around `(a, b)`.
/// Monotonicity means the extremes sit on the box corners.
fn curves_near(a: f64, b: f64, h: f64) -> Vec<(u32, u32)> {
    let lo = |x: f64| (x - h).max(1e-9);
    let mut out = Vec::new();
    for ms in 0..=6 {
        for mc in 0..=6 {
            if ms + mc == 0 {
                continue;
            }
            let inner = ellipse(lo(a), lo(b), (ms, mc));
            let outer = ellipse(a + h, b + h, (ms, mc));
            if inner >= 0.0 && outer <= 0.0 {
                out.push((ms, mc));
            }
        }
    }
    out
}

#[test]
fn k3_k4_boundaries_follow_the_ellipse_family() {
    let d = scan_k3_k4();
    let h = cell_width();
    let points = d.detected_boundaries();
    assert!(!points.is_empty());
    for &(a, b) in &points {
        assert!(
            !curves_near(a, b, h).is_empty(),
            "boundary at ({:.4}π, {:.4}π) is more than one cell from every ellipse",
            a / PI,
            b / PI
        );
    }
    // The scan must resolve genuinely curved boundaries, not just the straight lines.
    for m in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        assert!(
            points.iter().any(|&(a, b)| curves_near(a, b, h).contains(&m)),
            "no detected boundary near the ({}, {}) ellipse",
            m.0,
            m.1
        );
    }
}

#[test]
fn boundary_cells_carry_witnesses_on_the_scanned_axis() {
    let d = scan_k3_k4();
    let mut with_witness = 0;
    for c in &d.cells {
        if let Cell::Boundary { witness, .. } = c {
            assert!(witness.x.is_none(), "the x axis is fixed deep inside a phase");
            with_witness += usize::from(witness.y.is_some());
        }
    }
    assert!(with_witness > 0);
}

#[test]
fn scan_layout_is_row_major() {
    let d = scan_k3_k4();
    assert_eq!(d.cells.len(), RES * RES);
    assert_eq!(d.values[0].len(), RES);
    assert!((d.values[0][0] - cell_width()).abs() < 1e-12);
    assert!((d.values[1][RES - 1] - 5.0 * PI).abs() < 1e-12);
    let (i, j) = (10, 40);
    let p = d.base.with_k(2, d.values[0][i]).unwrap().with_k(3, d.values[1][j]).unwrap();
    let direct = ordkl_core::invariants::hotp_invariants(&p, DEFAULT_GRID).ok();
    assert_eq!(d.cell(i, j).invariants().copied(), direct);
}

#[test]
fn invalid_scans_are_rejected() {
    let base = KickParams::from_pi_multiples([0.5, 0.5, 0.5, 0.5]).unwrap();
    let mut spec = ScanSpec {
        k_index: [1, 1],
        range: [(0.1, 1.0), (0.1, 1.0)],
        resolution: [4, 4],
        sampling: Sampling::Midpoints,
        grid: 256,
    };
    assert!(phase_diagram(&base, &spec).is_err());
    spec.k_index = [0, 1];
    spec.resolution = [1, 4];
    assert!(phase_diagram(&base, &spec).is_err());
    spec.resolution = [4, 4];
    spec.range[0] = (1.0, 0.5);
    assert!(phase_diagram(&base, &spec).is_err());
}
