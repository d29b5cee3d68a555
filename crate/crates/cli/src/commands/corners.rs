// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use ordkl_core::lattice::{
    corner_census_2d, corner_mode_density, max_phase_gap, product_spectrum, Corner, CornerCensus, EdgeCensus, Sector,
};
use ordkl_core::wrap_phase;
use serde_json::{json, Map, Value};

use super::spectrum::{edge_name, sector_name};
use super::{in_pi, Report};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Table, Warning};

pub const SPECTRUM_COLUMNS: [&str; 5] = ["eigenphase", "ipr", "label", "x_state", "y_state"];
pub const DENSITY_COLUMNS: [&str; 3] = ["nx", "ny", "density"];

pub(crate) fn corner_name(c: Corner) -> String {
    format!("{}-{}", edge_name(c.x), edge_name(c.y))
}

fn by_corner(counts: &[usize; 4]) -> Value {
    let mut m = Map::new();
    for c in Corner::ALL {
        m.insert(corner_name(c), json!(counts[c.index()]));
    }
    Value::Object(m)
}

fn chain_json(c: &EdgeCensus, length: usize) -> Value {
    json!({
        "length": length,
        "n_zero": c.n_zero,
        "n_pi": c.n_pi,
        "zero_by_edge": { "low": c.zero_by_edge[0], "high": c.zero_by_edge[1] },
        "pi_by_edge": { "low": c.pi_by_edge[0], "high": c.pi_by_edge[1] },
        "ipr_min": c.ipr_min,
    })
}

/// Census summary shared with the sweep output.
pub(crate) fn census_json(c: &CornerCensus) -> Value {
    let [sx, sy] = &c.spectra;
    let min_weight = c.modes.iter().map(|m| m.corner_weight).fold(f64::INFINITY, f64::min);
    json!({
        "n0": c.n0,
        "npi": c.npi,
        "zero_by_corner": by_corner(&c.zero_by_corner),
        "pi_by_corner": by_corner(&c.pi_by_corner),
        "invariant_check": c.invariant_check,
        "invariants": c.invariants,
        "lattice_used": { "lx": sx.len(), "ly": sy.len() },
        "chains": { "x": chain_json(&c.x, sx.len()), "y": chain_json(&c.y, sy.len()) },
        "min_corner_weight": if c.modes.is_empty() { Value::Null } else { json!(min_weight) },
        "ipr_min_2d": c.ipr_min_2d,
    })
}

fn spectrum_table(c: &CornerCensus) -> Table {
    let [sx, sy] = &c.spectra;
    let modes: HashMap<(usize, usize), Sector> = c.modes.iter().map(|m| ((m.x_state, m.y_state), m.sector)).collect();
    let mut table = Table::new(&SPECTRUM_COLUMNS);
    for i in 0..sx.len() {
        for j in 0..sy.len() {
            let label = match modes.get(&(i, j)) {
                Some(s) => format!("corner-{}", sector_name(*s)),
                None => "bulk".to_string(),
            };
            table.push(vec![
                in_pi(wrap_phase(sx.eigenphases[i] + sy.eigenphases[j])).into(),
                (sx.ipr[i] * sy.ipr[j]).into(),
                label.into(),
                i.into(),
                j.into(),
            ]);
        }
    }
    table
}

/// Mode-averaged density of one sector, so each map sums to 1.
fn density_table(c: &CornerCensus, sector: Sector) -> Option<Table> {
    let maps = corner_mode_density(c, sector);
    let first = maps.first()?;
    let (nx, ny) = (first.sites_x.len(), first.sites_y.len());
    let mut table = Table::new(&DENSITY_COLUMNS);
    for ix in 0..nx {
        for iy in 0..ny {
            let d = maps.iter().map(|m| m.at(ix, iy)).sum::<f64>() / maps.len() as f64;
            table.push(vec![first.sites_x[ix].into(), first.sites_y[iy].into(), d.into()]);
        }
    }
    Some(table)
}

pub fn run(config: &RunConfig) -> CliResult<Report> {
    let params = config.kick_params()?;
    let lattice = config.lattice_spec()?;
    let census = corner_census_2d(&params, lattice, config.census_options())?;
    let [sx, sy] = &census.spectra;

    let mut payload = census_json(&census);
    let modes: Vec<Value> = census
        .modes
        .iter()
        .map(|m| {
            json!({
                "sector": sector_name(m.sector),
                "corner": corner_name(m.corner),
                "eigenphase": in_pi(m.eigenphase),
                "ipr": m.ipr,
                "corner_weight": m.corner_weight,
                "x_state": m.x_state,
                "y_state": m.y_state,
            })
        })
        .collect();
    payload["modes"] = json!(modes);
    payload["max_phase_gap"] = json!(in_pi(max_phase_gap(&product_spectrum(sx, sy))));
    payload["lattice_requested"] = json!({ "lx": lattice.lx, "ly": lattice.ly });

    let mut report = Report::new(payload);
    if (sx.len(), sy.len()) != (lattice.lx, lattice.ly) {
        report.warnings.push(
            Warning::new("lattice_doubled", "an ambiguous edge census was re-solved on a longer chain")
                .with_data(json!({ "lx": sx.len(), "ly": sy.len() })),
        );
    }
    match census.invariants {
        None => report.warnings.push(Warning::new("boundary", "bulk invariants are undefined at these parameters")),
        Some(_) if !census.invariant_check => report
            .warnings
            .push(Warning::new("correspondence_mismatch", "corner counts differ from four times the bulk invariants")),
        Some(_) => {}
    }
    report.tables.push(("corner_spectrum.csv", spectrum_table(&census)));
    for (sector, name) in [(Sector::Zero, "corner_density_zero.csv"), (Sector::Pi, "corner_density_pi.csv")] {
        if let Some(t) = density_table(&census, sector) {
            report.tables.push((name, t));
        }
    }
    Ok(report)
}
