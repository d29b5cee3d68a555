// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::f64::consts::PI;

use ordkl_core::dynamics::{mcd_invariants, recombine, McdOptions, McdTrace};
use ordkl_core::invariants::hotp_invariants;
use ordkl_core::lattice::{census_from_spectra, resolve_chain, ObcSpectrum};
use ordkl_core::{Axis, KickParams, TimeFrame};
use serde_json::{json, Value};

use super::corners::census_json;
use super::Report;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Field, Table, Warning};

pub const TRACE_COLUMNS: [&str; 11] =
    ["t", "c1", "c2", "c3", "c4", "c13", "c14", "c23", "c24", "c0_running", "cpi_running"];
pub const SWEEP_COLUMNS: [&str; 11] =
    ["k", "w0", "wpi", "c0", "cpi", "c0_separable", "cpi_separable", "near_transition", "lattice", "n0", "npi"];

fn frame_key(tf: TimeFrame) -> String {
    format!("{}{}", tf.alpha().index(), tf.beta().index())
}

fn trace_json(tr: &McdTrace) -> Value {
    let averages: serde_json::Map<String, Value> =
        TimeFrame::ALL.iter().zip(tr.averages).map(|(tf, a)| (frame_key(*tf), json!(a))).collect();
    let frame_averages: serde_json::Map<String, Value> =
        tr.frame_averages.iter().enumerate().map(|(i, a)| ((i + 1).to_string(), json!(a))).collect();
    json!({
        "t_max": tr.t_max,
        "lattice": tr.lattice,
        "c0": tr.c0,
        "cpi": tr.cpi,
        "averages": averages,
        "frame_averages": frame_averages,
        "separable": { "c0": tr.separable.0, "cpi": tr.separable.1 },
        "near_transition": tr.near_transition,
    })
}

fn trace_table(tr: &McdTrace) -> Table {
    let mut table = Table::new(&TRACE_COLUMNS);
    let mut sums = [0.0; 4];
    for t in 0..tr.t_max {
        for (s, series) in sums.iter_mut().zip(&tr.series) {
            *s += series[t];
        }
        let (c0, cpi) = recombine(sums.map(|s| s / (t + 1) as f64));
        let mut row: Vec<Field> = vec![(t + 1).into()];
        row.extend(tr.frame_series.iter().map(|s| Field::from(s[t])));
        row.extend(tr.series.iter().map(|s| Field::from(s[t])));
        row.extend([c0.into(), cpi.into()]);
        table.push(row);
    }
    table
}

fn single(config: &RunConfig, params: &KickParams) -> CliResult<Report> {
    let opts = McdOptions { lattice: config.mcd.lattice };
    let trace = mcd_invariants(params, config.mcd.t_max, opts)?;
    let mut payload = trace_json(&trace);
    let mut report = Report::new(Value::Null);
    payload["invariants"] = match hotp_invariants(params, config.tolerances.bloch_grid) {
        Ok(s) => json!({ "w0": s.w0, "wpi": s.wpi }),
        Err(e) => {
            report.warnings.push(Warning::new("boundary", e.to_string()));
            Value::Null
        }
    };
    if trace.near_transition {
        report
            .warnings
            .push(Warning::new("near_transition", "a quasienergy gap is small; time averages converge slowly"));
    }
    report.payload = payload;
    report.tables.push(("mcd_trace.csv", trace_table(&trace)));
    Ok(report)
}

type ChainKey = (Axis, u64, u64);

fn sweep(config: &RunConfig, base: &KickParams) -> CliResult<Report> {
    let s = &config.sweep;
    let values = s.sampling.points((s.range[0] * PI, s.range[1] * PI), s.samples);
    let opts = McdOptions { lattice: config.mcd.lattice };
    let census_opts = config.census_options();
    let lattice = config.lattice_spec()?;
    let mut chains: HashMap<ChainKey, Option<ObcSpectrum>> = HashMap::new();
    let mut table = Table::new(&SWEEP_COLUMNS);
    let mut warnings = Vec::new();
    let mut points = Vec::new();
    let (mut worst, mut worst_separable) = (0.0f64, 0.0f64);

    for &v in &values {
        let p = base.with_k(s.k - 1, v)?;
        let k = v / PI;
        let inv = match hotp_invariants(&p, config.tolerances.bloch_grid) {
            Ok(i) => Some(i),
            Err(e) => {
                warnings.push(Warning::new("boundary", e.to_string()).with_data(json!({ "k": k })));
                None
            }
        };
        let trace = match mcd_invariants(&p, config.mcd.t_max, opts) {
            Ok(t) => Some(t),
            Err(e) => {
                warnings.push(Warning::new("mcd_failed", e.to_string()).with_data(json!({ "k": k })));
                None
            }
        };
        if let (Some(i), Some(t)) = (&inv, &trace) {
            if t.near_transition {
                warnings.push(Warning::new("near_transition", "small quasienergy gap").with_data(json!({ "k": k })));
            } else {
                let err = |a: (f64, f64)| (a.0 - i.w0 as f64).abs().max((a.1 - i.wpi as f64).abs());
                worst = worst.max(err((t.c0, t.cpi)));
                worst_separable = worst_separable.max(err(t.separable));
            }
        }

        let census = if s.census {
            let mut solve = |axis: Axis| {
                let (ks, kc) = p.axis_strengths(axis);
                let l = lattice.len(axis);
                chains
                    .entry((axis, ks.to_bits(), kc.to_bits()))
                    .or_insert_with(|| match resolve_chain(&p, axis, l, census_opts) {
                        Ok((spec, _)) => Some(spec),
                        Err(e) => {
                            warnings.push(
                                Warning::new("census_failed", e.to_string())
                                    .with_data(json!({ "k": k, "axis": axis.to_string() })),
                            );
                            None
                        }
                    })
                    .clone()
            };
            match (solve(Axis::X), solve(Axis::Y)) {
                (Some(sx), Some(sy)) => match census_from_spectra(&p, sx, sy, census_opts) {
                    Ok(c) => Some(c),
                    Err(e) => {
                        warnings.push(Warning::new("census_failed", e.to_string()).with_data(json!({ "k": k })));
                        None
                    }
                },
                _ => None,
            }
        } else {
            None
        };

        table.push(vec![
            k.into(),
            inv.map(|i| i.w0).into(),
            inv.map(|i| i.wpi).into(),
            trace.as_ref().map(|t| t.c0).into(),
            trace.as_ref().map(|t| t.cpi).into(),
            trace.as_ref().map(|t| t.separable.0).into(),
            trace.as_ref().map(|t| t.separable.1).into(),
            trace.as_ref().map(|t| t.near_transition).into(),
            trace.as_ref().map(|t| t.lattice).into(),
            census.as_ref().map(|c| c.n0).into(),
            census.as_ref().map(|c| c.npi).into(),
        ]);
        points.push(json!({
            "k": k,
            "invariants": inv,
            "mcd": trace.as_ref().map(trace_json),
            "census": census.as_ref().map(census_json),
        }));
    }

    let payload = json!({
        "k_index": s.k,
        "t_max": config.mcd.t_max,
        "samples": points,
        "max_error_off_transition": worst,
        "max_error_off_transition_separable": worst_separable,
    });
    let mut report = Report::new(payload);
    report.warnings = warnings;
    report.tables.push(("mcd_sweep.csv", table));
    Ok(report)
}

pub fn run(config: &RunConfig) -> CliResult<Report> {
    let params = config.kick_params()?;
    if config.sweep.enabled {
        sweep(config, &params)
    } else {
        single(config, &params)
    }
}
