// SPDX-License-Identifier: Apache-2.0

use ordkl_core::invariants::axis_invariants;
use ordkl_core::lattice::{edge_mode_census_1d, solve_chain, Edge, ObcSpectrum, Sector, StateLabel};
use ordkl_core::{Axis, Error, KickParams};
use serde_json::{json, Value};

use super::{in_pi, Report};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Field, Table, Warning};

pub const COLUMNS: [&str; 6] = ["axis", "state", "eigenphase", "ipr", "label", "edge"];

pub(crate) fn edge_name(e: Edge) -> &'static str {
    match e {
        Edge::Low => "low",
        Edge::High => "high",
    }
}

pub(crate) fn sector_name(s: Sector) -> &'static str {
    match s {
        Sector::Zero => "zero",
        Sector::Pi => "pi",
    }
}

struct ChainReport {
    rows: Vec<Vec<Field>>,
    summary: Value,
    warnings: Vec<Warning>,
}

fn chain(params: &KickParams, axis: Axis, l: usize, config: &RunConfig) -> CliResult<ChainReport> {
    let tol = &config.tolerances;
    let spec: ObcSpectrum = solve_chain(params, axis, l, tol.e_tol)?;
    let mut warnings = Vec::new();
    let census = match edge_mode_census_1d(&spec, tol.e_tol, tol.ipr_min) {
        Ok(c) => Some(c),
        Err(Error::AmbiguousClassification { count, detail }) => {
            warnings.push(
                Warning::new("ambiguous_classification", detail)
                    .with_data(json!({ "axis": axis.to_string(), "count": count })),
            );
            None
        }
        Err(e) => return Err(e.into()),
    };
    let expected = match axis_invariants(params, axis, tol.bloch_grid) {
        Ok(inv) => json!({ "w0": inv.w0, "wpi": inv.wpi, "n_zero": 2 * inv.w0.abs(), "n_pi": 2 * inv.wpi.abs() }),
        Err(e) => {
            warnings.push(Warning::new("boundary", e.to_string()).with_data(json!({ "axis": axis.to_string() })));
            Value::Null
        }
    };

    let mut rows = Vec::with_capacity(spec.len());
    for k in 0..spec.len() {
        let (label, edge) = match &census {
            None => ("unclassified".to_string(), Field::Empty),
            Some(c) => match c.labels[k] {
                StateLabel::Bulk => ("bulk".to_string(), Field::Empty),
                StateLabel::Edge(s) => (format!("edge-{}", sector_name(s)), edge_name(spec.dominant_edge(k)).into()),
            },
        };
        rows.push(vec![
            axis.to_string().into(),
            k.into(),
            in_pi(spec.eigenphases[k]).into(),
            spec.ipr[k].into(),
            label.into(),
            edge,
        ]);
    }
    let census_json = census.map(|c| {
        json!({
            "n_zero": c.n_zero,
            "n_pi": c.n_pi,
            "zero_by_edge": { "low": c.zero_by_edge[0], "high": c.zero_by_edge[1] },
            "pi_by_edge": { "low": c.pi_by_edge[0], "high": c.pi_by_edge[1] },
            "ipr_min": c.ipr_min,
        })
    });
    let summary = json!({
        "length": l,
        "median_ipr": spec.median_ipr(),
        "census": census_json,
        "expected_from_windings": expected,
    });
    Ok(ChainReport { rows, summary, warnings })
}

pub fn run(config: &RunConfig) -> CliResult<Report> {
    let params = config.kick_params()?;
    let lattice = config.lattice_spec()?;
    let (x, y) =
        rayon::join(|| chain(&params, Axis::X, lattice.lx, config), || chain(&params, Axis::Y, lattice.ly, config));
    let (x, y) = (x?, y?);
    let mut table = Table::new(&COLUMNS);
    let mut report = Report::new(json!({ "chains": { "x": x.summary, "y": y.summary } }));
    for c in [x, y] {
        table.rows.extend(c.rows);
        report.warnings.extend(c.warnings);
    }
    report.tables.push(("spectrum.csv", table));
    Ok(report)
}
