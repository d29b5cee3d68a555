// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use ordkl_core::invariants::axis_invariants;
use ordkl_core::lattice::{
    corner_census_2d, corner_mode_density, edge_mode_census_1d, solve_chain, CensusOptions, CornerCensus, Edge,
    LatticeSpec, Sector, DEFAULT_E_TOL,
};
use ordkl_core::model::DEFAULT_GRID;
use ordkl_core::{Axis, KickParams};

fn corner_params() -> KickParams {
    KickParams::from_pi_multiples([0.5, 3.5, 0.5, 1.5]).unwrap()
}

fn corner_census() -> &'static CornerCensus {
    static CENSUS: OnceLock<CornerCensus> = OnceLock::new();
    CENSUS.get_or_init(|| {
        corner_census_2d(&corner_params(), LatticeSpec::square(300).unwrap(), CensusOptions::default()).unwrap()
    })
}

#[test]
fn corner_modes_sit_two_zero_and_one_pi_per_corner() {
    let c = corner_census();
    assert_eq!(c.spectra[0].len(), 300);
    assert_eq!(c.spectra[1].len(), 300);
    assert_eq!((c.n0, c.npi), (8, 4));
    assert_eq!(c.zero_by_corner, [2; 4]);
    assert_eq!(c.pi_by_corner, [1; 4]);
    assert_eq!((c.x.n_zero, c.x.n_pi), (2, 4));
    assert_eq!((c.y.n_zero, c.y.n_pi), (0, 2));
}

#[test]
fn density_maps_are_normalized_and_cornered() {
    let c = corner_census();
    let block = 300 / 8;
    for sector in [Sector::Zero, Sector::Pi] {
        let maps = corner_mode_density(c, sector);
        assert_eq!(maps.len(), if sector == Sector::Zero { 8 } else { 4 });
        for m in &maps {
            let total: f64 = m.density.iter().sum();
            assert!((total - 1.0).abs() < 1e-10, "map sums to {total}");
            let xs = match m.corner.x {
                Edge::Low => 0..block,
                Edge::High => 300 - block..300,
            };
            let in_block: f64 = xs
                .flat_map(|ix| {
                    let ys = match m.corner.y {
                        Edge::Low => 0..block,
                        Edge::High => 300 - block..300,
                    };
                    ys.map(move |iy| (ix, iy))
                })
                .map(|(ix, iy)| m.at(ix, iy))
                .sum();
            assert!(in_block >= 0.9, "corner block holds {in_block}");
        }
    }
}

#[test]
fn bulk_states_are_an_order_of_magnitude_less_localized() {
    let c = corner_census();
    let [sx, sy] = &c.spectra;
    // Mid-band product state: eigenphases closest to ±π/4 on each chain.
    let mid = |e: &[f64]| {
        (0..e.len())
            .min_by(|&a, &b| {
                let d = |k: usize| (e[k].abs() - PI / 4.0).abs();
                d(a).total_cmp(&d(b))
            })
            .unwrap()
    };
    let (i, j) = (mid(&sx.eigenphases), mid(&sy.eigenphases));
    let (vx, vy) = (sx.state(i), sy.state(j));
    let product: Vec<Complex64> = vx.iter().flat_map(|a| vy.iter().map(move |b| a * b)).collect();
    let bulk_ipr: f64 = product.iter().map(|z| z.norm_sqr().powi(2)).sum();
    let weakest_corner = c.modes.iter().map(|m| m.ipr).fold(f64::INFINITY, f64::min);
    assert!(bulk_ipr * 10.0 <= weakest_corner, "bulk IPR {bulk_ipr:.3e} vs weakest corner IPR {weakest_corner:.3e}");
}

#[test]
fn census_is_stable_between_sizes() {
    let fixed = CensusOptions { ipr_min: Some(0.02), max_doublings: 0, ..CensusOptions::default() };
    let small = corner_census_2d(&corner_params(), LatticeSpec::square(200).unwrap(), fixed).unwrap();
    let large = corner_census_2d(&corner_params(), LatticeSpec::square(300).unwrap(), fixed).unwrap();
    assert_eq!((small.n0, small.npi), (large.n0, large.npi));
    assert_eq!(small.zero_by_corner, large.zero_by_corner);
    assert_eq!(small.pi_by_corner, large.pi_by_corner);
}

#[test]
fn default_thresholds_resolve_small_lattices_by_doubling() {
    let no_doubling = CensusOptions { max_doublings: 0, ..CensusOptions::default() };
    assert!(matches!(
        corner_census_2d(&corner_params(), LatticeSpec::square(200).unwrap(), no_doubling),
        Err(ordkl_core::Error::AmbiguousClassification { .. })
    ));
    let c = corner_census_2d(&corner_params(), LatticeSpec::square(200).unwrap(), CensusOptions::default()).unwrap();
    assert!(c.spectra.iter().any(|s| s.len() == 400));
    assert_eq!((c.n0, c.npi), (8, 4));
    assert!(c.invariant_check);
}

#[test]
fn trivial_phase_has_no_corner_modes() {
    let p = KickParams::from_pi_multiples([0.5, 0.5, 0.5, 0.5]).unwrap();
    let c = corner_census_2d(&p, LatticeSpec::square(120).unwrap(), CensusOptions::default()).unwrap();
    assert_eq!((c.n0, c.npi), (0, 0));
    assert!(c.modes.is_empty());
    assert!(c.invariant_check);
}

#[test]
fn chain_edge_modes_count_twice_the_windings() {
    for (ks, kc) in [(0.5, 3.5), (0.5, 1.5), (2.5, 1.2), (1.5, 2.5), (3.2, 0.7), (0.5, 0.5)] {
        let p = KickParams::from_pi_multiples([ks, kc, 0.5, 0.5]).unwrap();
        let inv = axis_invariants(&p, Axis::X, DEFAULT_GRID).unwrap();
        let spec = solve_chain(&p, Axis::X, 300, DEFAULT_E_TOL).unwrap();
        let census = edge_mode_census_1d(&spec, DEFAULT_E_TOL, None).unwrap();
        assert_eq!(
            (census.n_zero as i64, census.n_pi as i64),
            (2 * inv.w0.abs(), 2 * inv.wpi.abs()),
            "(K_sin, K_cos) = ({ks}π, {kc}π)"
        );
        // One mode per edge per unit of winding.
        assert_eq!(census.zero_by_edge[0], census.zero_by_edge[1]);
        assert_eq!(census.pi_by_edge[0], census.pi_by_edge[1]);
    }
}
