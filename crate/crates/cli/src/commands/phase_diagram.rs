// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::f64::consts::PI;

use ordkl_core::invariants::{phase_diagram, Cell, ScanSpec};
use serde_json::json;

use super::{in_pi, Report};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Field, Table, Warning};

pub const COLUMNS: [&str; 9] = ["axis1", "axis2", "w0x", "wpix", "w0y", "wpiy", "w0", "wpi", "boundary_flag"];

pub fn scan_spec(config: &RunConfig) -> ScanSpec {
    let s = &config.scan;
    let range = |r: [f64; 2]| (r[0] * PI, r[1] * PI);
    ScanSpec {
        k_index: [s.axes[0] - 1, s.axes[1] - 1],
        range: [range(s.range[0]), range(s.range[1])],
        resolution: s.resolution,
        sampling: s.sampling,
        grid: config.tolerances.bloch_grid,
    }
}

pub fn run(config: &RunConfig) -> CliResult<Report> {
    let base = config.kick_params()?;
    let diagram = phase_diagram(&base, &scan_spec(config))?;
    let [va, vb] = &diagram.values;

    let mut table = Table::new(&COLUMNS);
    let mut regions: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut warnings = Vec::new();
    for (i, &a) in va.iter().enumerate() {
        for (j, &b) in vb.iter().enumerate() {
            let (x, y) = (in_pi(a), in_pi(b));
            match diagram.cell(i, j) {
                Cell::Invariants(s) => {
                    *regions.entry(s.pair()).or_default() += 1;
                    table.push(vec![
                        x.into(),
                        y.into(),
                        s.w0x.into(),
                        s.wpix.into(),
                        s.w0y.into(),
                        s.wpiy.into(),
                        s.w0.into(),
                        s.wpi.into(),
                        false.into(),
                    ]);
                }
                Cell::Boundary { witness, reason } => {
                    let mut row: Vec<Field> = vec![x.into(), y.into()];
                    row.extend(std::iter::repeat_n(Field::Empty, 6));
                    row.push(true.into());
                    table.push(row);
                    warnings.push(
                        Warning::new("boundary_cell", reason.clone())
                            .with_data(json!({ "axis1": x, "axis2": y, "witness": witness })),
                    );
                }
            }
        }
    }

    let names = config.scan.axes.map(|k| format!("K{k}"));
    let payload = json!({
        "axes": names,
        "values": [va.iter().map(|&v| in_pi(v)).collect::<Vec<_>>(), vb.iter().map(|&v| in_pi(v)).collect::<Vec<_>>()],
        "regions": regions
            .iter()
            .map(|(&(w0, wpi), &cells)| json!({ "w0": w0, "wpi": wpi, "cells": cells }))
            .collect::<Vec<_>>(),
        "boundary_cells": diagram.boundary_count(),
        "detected_boundary_points": diagram.detected_boundaries().len(),
    });
    let mut report = Report::new(payload);
    report.warnings = warnings;
    report.tables.push(("phase_diagram.csv", table));
    Ok(report)
}
