// SPDX-License-Identifier: Apache-2.0

//! Analytic gap-closing curves `(m_s π/K_sin)² + (m_c π/K_cos)² = 1` drawn in
//! the scan plane, for overlay on phase diagrams.

use std::f64::consts::{FRAC_PI_2, PI};

use ordkl_core::model::{axis_boundary, min_gap, on_phase_boundary};
use ordkl_core::{Axis, KickParams};
use serde_json::json;

use super::phase_diagram::scan_spec;
use super::{in_pi, Report};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::Table;

pub const COLUMNS: [&str; 8] = ["curve", "axis", "m_sin", "m_cos", "kind", "point", "axis1", "axis2"];

const ELLIPSE_POINTS: usize = 256;
const FIXED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub axis: Axis,
    pub m_sin: i64,
    pub m_cos: i64,
    /// `ellipse`, `line` or `zero` (a vanishing strength).
    pub kind: &'static str,
    /// Scan-plane points in radians.
    pub points: Vec<(f64, f64)>,
}

struct Plane {
    ranges: [(f64, f64); 2],
}

impl Plane {
    /// Line where scan coordinate `coord` equals `v`.
    fn line(&self, coord: usize, v: f64) -> Option<Vec<(f64, f64)>> {
        let (lo, hi) = self.ranges[coord];
        if v < lo || v > hi {
            return None;
        }
        let (a, b) = self.ranges[1 - coord];
        Some(if coord == 0 { vec![(v, a), (v, b)] } else { vec![(a, v), (b, v)] })
    }
}

/// Strength values `K` solving `(m π/K)² = rem` inside `(lo, hi]`.
fn solutions(rem: f64, (lo, hi): (f64, f64)) -> Vec<(i64, f64)> {
    if rem <= 0.0 {
        return Vec::new();
    }
    (1..).map(|m| (m, m as f64 * PI / rem.sqrt())).take_while(|&(_, k)| k <= hi).filter(|&(_, k)| k >= lo).collect()
}

/// All boundary curves of one axis in the scan plane, plus whether the axis
/// is gapless over the whole plane.
pub fn axis_curves(params: &KickParams, axis: Axis, scan: [usize; 2], ranges: [(f64, f64); 2]) -> (Vec<Curve>, bool) {
    let (is, ic) = match axis {
        Axis::X => (0, 1),
        Axis::Y => (2, 3),
    };
    let plane = Plane { ranges };
    let pos = |i: usize| scan.iter().position(|&s| s == i);
    let k = params.k();
    let mut curves = Vec::new();
    let mut push = |m_sin: i64, m_cos: i64, kind, points: Option<Vec<(f64, f64)>>| {
        if let Some(points) = points {
            curves.push(Curve { axis, m_sin, m_cos, kind, points });
        }
    };
    match (pos(is), pos(ic)) {
        (Some(ps), Some(pc)) => {
            push(0, 0, "zero", plane.line(ps, 0.0));
            push(0, 0, "zero", plane.line(pc, 0.0));
            let (rs, rc) = (ranges[ps], ranges[pc]);
            let ms_max = (rs.1 / PI).floor() as i64;
            let mc_max = (rc.1 / PI).floor() as i64;
            for ms in 0..=ms_max {
                for mc in 0..=mc_max {
                    match (ms, mc) {
                        (0, 0) => {}
                        (_, 0) => push(ms, 0, "line", plane.line(ps, ms as f64 * PI)),
                        (0, _) => push(0, mc, "line", plane.line(pc, mc as f64 * PI)),
                        _ => {
                            // K_sin = m_s π / cos φ, K_cos = m_c π / sin φ, both monotone in φ.
                            let (a, b) = (ms as f64 * PI, mc as f64 * PI);
                            let lo = (if rs.0 > 0.0 { (a / rs.0).min(1.0).acos() } else { 0.0 })
                                .max((b / rc.1).min(1.0).asin());
                            let hi = (a / rs.1).min(1.0).acos().min(if rc.0 > 0.0 {
                                (b / rc.0).min(1.0).asin()
                            } else {
                                FRAC_PI_2
                            });
                            if lo >= hi || a > rs.1 || b > rc.1 {
                                continue;
                            }
                            let pts = (0..ELLIPSE_POINTS)
                                .map(|i| {
                                    let phi = lo + (hi - lo) * i as f64 / (ELLIPSE_POINTS - 1) as f64;
                                    let (s, c) = (a / phi.cos(), b / phi.sin());
                                    if ps == 0 {
                                        (s, c)
                                    } else {
                                        (c, s)
                                    }
                                })
                                .collect();
                            push(ms, mc, "ellipse", Some(pts));
                        }
                    }
                }
            }
            (curves, false)
        }
        (Some(p), None) | (None, Some(p)) => {
            let scanned_is_sin = pos(is).is_some();
            let fixed = if scanned_is_sin { k[ic] } else { k[is] };
            if fixed == 0.0 {
                return (curves, true);
            }
            push(0, 0, "zero", plane.line(p, 0.0));
            let mut whole = false;
            for m_fixed in 0..=(fixed / PI).floor() as i64 {
                let rem = 1.0 - (m_fixed as f64 * PI / fixed).powi(2);
                if rem.abs() <= FIXED_TOL {
                    whole = true;
                    continue;
                }
                for (m, v) in solutions(rem, ranges[p]) {
                    let (ms, mc) = if scanned_is_sin { (m, m_fixed) } else { (m_fixed, m) };
                    push(ms, mc, "line", plane.line(p, v));
                }
            }
            (curves, whole)
        }
        (None, None) => (curves, axis_boundary(k[is], k[ic], FIXED_TOL).is_some()),
    }
}

pub fn run(config: &RunConfig) -> CliResult<Report> {
    let params = config.kick_params()?;
    let spec = scan_spec(config);
    let mut table = Table::new(&COLUMNS);
    let mut whole_plane = Vec::new();
    let mut counts = serde_json::Map::new();
    let mut id = 0usize;
    for axis in [Axis::X, Axis::Y] {
        let (curves, whole) = axis_curves(&params, axis, spec.k_index, spec.range);
        if whole {
            whole_plane.push(axis.to_string());
        }
        counts.insert(axis.to_string(), json!(curves.len()));
        for c in curves {
            for (n, (a, b)) in c.points.iter().enumerate() {
                table.push(vec![
                    id.into(),
                    axis.to_string().into(),
                    c.m_sin.into(),
                    c.m_cos.into(),
                    c.kind.into(),
                    n.into(),
                    in_pi(*a).into(),
                    in_pi(*b).into(),
                ]);
            }
            id += 1;
        }
    }
    let gap = |axis| {
        let (sin_e, theta) = min_gap(&params, axis, config.tolerances.bloch_grid);
        json!({ "min_sin_e": sin_e, "theta": in_pi(theta) })
    };
    let payload = json!({
        "axes": config.scan.axes.map(|k| format!("K{k}")),
        "base_witness": on_phase_boundary(&params, FIXED_TOL),
        "base_min_gap": { "x": gap(Axis::X), "y": gap(Axis::Y) },
        "curves": counts,
        "gapless_everywhere": whole_plane,
    });
    let mut report = Report::new(payload);
    report.tables.push(("boundaries.csv", table));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(ms: i64, mc: i64, ks: f64, kc: f64) -> f64 {
        (ms as f64 * PI / ks).powi(2) + (mc as f64 * PI / kc).powi(2) - 1.0
    }

    #[test]
    fn ellipse_points_lie_on_their_curve_and_in_range() {
        let p = KickParams::from_pi_multiples([0.5, 3.5, 0.0, 0.0]).unwrap();
        let ranges = [(0.0, 5.0 * PI), (0.0, 5.0 * PI)];
        let (curves, whole) = axis_curves(&p, Axis::Y, [2, 3], ranges);
        assert!(!whole);
        let ellipses: Vec<_> = curves.iter().filter(|c| c.kind == "ellipse").collect();
        assert!(ellipses.iter().any(|c| (c.m_sin, c.m_cos) == (1, 1)));
        for c in ellipses {
            for &(a, b) in &c.points {
                assert!(residual(c.m_sin, c.m_cos, a, b).abs() < 1e-9);
                assert!(a <= 5.0 * PI + 1e-9 && b <= 5.0 * PI + 1e-9);
            }
        }
    }

    #[test]
    fn mixed_scan_gives_lines_at_multiples_of_pi() {
        let p = KickParams::from_pi_multiples([0.5, 0.0, 0.5, 0.0]).unwrap();
        let ranges = [(0.0, 5.0 * PI), (0.0, 5.0 * PI)];
        let (curves, _) = axis_curves(&p, Axis::X, [1, 3], ranges);
        let mut at: Vec<f64> =
            curves.iter().filter(|c| c.kind == "line").map(|c| (c.points[0].0 / PI * 1e9).round() / 1e9).collect();
        at.sort_by(f64::total_cmp);
        assert_eq!(at, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(curves.iter().all(|c| c.points.iter().all(|&(a, _)| a == c.points[0].0)));
    }

    #[test]
    fn fixed_axis_on_a_boundary_is_gapless_everywhere() {
        let p = KickParams::from_pi_multiples([0.5, 1.0, 0.5, 0.0]).unwrap();
        let (_, whole) = axis_curves(&p, Axis::X, [2, 3], [(0.0, PI), (0.0, PI)]);
        assert!(whole);
    }
}
