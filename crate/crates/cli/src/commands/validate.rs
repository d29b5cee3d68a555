// SPDX-License-Identifier: Apache-2.0

//! Fast seeded self-checks of the installed build.

use std::f64::consts::PI;

use ordkl_core::dynamics::{AxisState, RingPropagator};
use ordkl_core::invariants::{hotp_invariants, winding_number, Sampling};
use ordkl_core::lattice::{build_pbc_unitary, corner_census_2d, eigensolve};
use ordkl_core::model::{dispersion, frame_matrix, min_gap, pauli_z};
use ordkl_core::{wrap_phase, Axis, Frame, KickParams, Quasiposition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::Report;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::Warning;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn random_params(rng: &mut ChaCha8Rng) -> KickParams {
    let mut k = || rng.gen_range(0.0..5.0 * PI);
    KickParams::new(k(), k(), k(), k()).expect("strengths are finite")
}

fn chiral_symmetry(rng: &mut ChaCha8Rng) -> Check {
    let sz = pauli_z();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let p = random_params(rng);
        let theta = Quasiposition::new(rng.gen_range(0.0..2.0 * PI));
        let u = frame_matrix(&p, theta, Frame::ALL[rng.gen_range(0..4)]).entries;
        worst = worst.max((sz * u * sz - u.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Check { name: "chiral-symmetry", pass: worst < 1e-12, detail: format!("200 samples, max error {worst:.2e}") }
}

fn winding_quantization(rng: &mut ChaCha8Rng, grid: usize) -> Check {
    let (mut n, mut bad) = (0, 0);
    while n < 100 {
        let p = random_params(rng);
        if min_gap(&p, Axis::X, grid).0.min(min_gap(&p, Axis::Y, grid).0) <= 1e-3 {
            continue;
        }
        n += 1;
        for f in Frame::ALL {
            match (winding_number(&p, f, grid), winding_number(&p, f, 2 * grid)) {
                (Ok(a), Ok(b)) if a.w == b.w && a.residual < 0.01 => {}
                _ => bad += 1,
            }
        }
    }
    Check {
        name: "winding-quantization",
        pass: bad == 0,
        detail: format!("100 gapped points, {bad} of 400 windings unquantized or grid-dependent"),
    }
}

fn pbc_matches_bloch(rng: &mut ChaCha8Rng) -> Check {
    let l = 32;
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let p = random_params(rng);
        for axis in [Axis::X, Axis::Y] {
            let Ok(spec) = build_pbc_unitary(&p, axis, l).and_then(|u| eigensolve(&u)) else {
                return Check { name: "pbc-vs-bloch", pass: false, detail: "eigensolve failed".into() };
            };
            let mut got = spec.eigenphases.clone();
            for m in 0..l / 2 {
                let e = dispersion(&p, Quasiposition::new(4.0 * PI * m as f64 / l as f64), axis);
                for want in [e, -e] {
                    let (idx, d) = got
                        .iter()
                        .map(|g| wrap_phase(g - want).abs())
                        .enumerate()
                        .fold((0, f64::INFINITY), |b, (i, d)| if d < b.1 { (i, d) } else { b });
                    worst = worst.max(d);
                    got.swap_remove(idx);
                }
            }
        }
    }
    Check { name: "pbc-vs-bloch", pass: worst < 1e-8, detail: format!("5 sets, L=32, max deviation {worst:.2e}") }
}

fn sweep_transitions(grid: usize) -> Check {
    let k4 = Sampling::Midpoints.points((0.0, 5.0 * PI), 100);
    let mut pairs = Vec::new();
    for &k in &k4 {
        let p = KickParams::new(0.5 * PI, 3.5 * PI, 0.5 * PI, k).expect("finite");
        match hotp_invariants(&p, grid) {
            Ok(s) => pairs.push(s.pair()),
            Err(e) => return Check { name: "sweep-transitions", pass: false, detail: e.to_string() },
        }
    }
    let jumps: Vec<f64> =
        (0..k4.len() - 1).filter(|&i| pairs[i] != pairs[i + 1]).map(|i| 0.5 * (k4[i] + k4[i + 1]) / PI).collect();
    let pass = jumps.len() == 4 && jumps.iter().zip(1..).all(|(a, b)| (a - b as f64).abs() < 1e-9);
    Check { name: "sweep-transitions", pass, detail: format!("jumps at K4/π = {jumps:?}") }
}

fn corner_census(config: &RunConfig) -> Check {
    let name = "corner-census";
    let p = KickParams::from_pi_multiples([0.5, 3.5, 0.5, 1.5]).expect("finite");
    let lattice = match config.lattice_spec() {
        Ok(l) => l,
        Err(e) => return Check { name, pass: false, detail: e.to_string() },
    };
    match corner_census_2d(&p, lattice, config.census_options()) {
        Ok(c) => Check {
            name,
            pass: (c.n0, c.npi) == (8, 4) && c.invariant_check,
            detail: format!("L={}x{}, (N0, Npi) = ({}, {})", lattice.lx, lattice.ly, c.n0, c.npi),
        },
        Err(e) => Check { name, pass: false, detail: e.to_string() },
    }
}

fn ring_unitarity(rng: &mut ChaCha8Rng) -> Check {
    let l = 256;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (ks, kc) = (rng.gen_range(0.0..3.0 * PI), rng.gen_range(0.0..3.0 * PI));
        let f = Frame::ALL[rng.gen_range(0..4)];
        let Ok(prop) = RingPropagator::new(ks, kc, l) else {
            return Check { name: "ring-unitarity", pass: false, detail: "propagator construction failed".into() };
        };
        let mut s = AxisState::initial(f, l);
        for _ in 0..20 {
            prop.frame_period(&mut s.amplitudes, f);
        }
        worst = worst.max((s.norm_sqr() - 1.0).abs());
    }
    Check {
        name: "ring-unitarity",
        pass: worst < 1e-12,
        detail: format!("10 rings, 20 periods, norm drift {worst:.2e}"),
    }
}

pub fn run(config: &RunConfig) -> CliResult<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let grid = config.tolerances.bloch_grid;
    let checks = vec![
        chiral_symmetry(&mut rng),
        winding_quantization(&mut rng, grid),
        pbc_matches_bloch(&mut rng),
        ring_unitarity(&mut rng),
        sweep_transitions(grid),
        corner_census(config),
    ];
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let mut report =
        Report::new(json!({ "checks": checks, "passed": checks.len() - failed.len(), "failed": failed.len() }));
    report.warnings = failed
        .iter()
        .map(|c| Warning::new("check_failed", c.detail.clone()).with_data(json!({ "check": c.name })))
        .collect();
    report.failed_checks = failed.len();
    Ok(report)
}
