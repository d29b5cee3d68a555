// SPDX-License-Identifier: Apache-2.0

//! Run configuration: a TOML file plus command-line overrides.
//!
//! Kick strengths and scan ranges are given in units of π.

use std::path::{Path, PathBuf};

use ordkl_core::invariants::Sampling;
use ordkl_core::lattice::{CensusOptions, LatticeSpec, DEFAULT_E_TOL};
use ordkl_core::model::DEFAULT_GRID;
use ordkl_core::KickParams;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    PhaseDiagram,
    Spectrum,
    Corners,
    Mcd,
    Boundaries,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::PhaseDiagram => "phase-diagram",
            Command::Spectrum => "spectrum",
            Command::Corners => "corners",
            Command::Mcd => "mcd",
            Command::Boundaries => "boundaries",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self { k1: 0.5, k2: 3.5, k3: 0.5, k4: 1.5 }
    }
}

impl ParamsConfig {
    pub fn as_array(&self) -> [f64; 4] {
        [self.k1, self.k2, self.k3, self.k4]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub lx: usize,
    pub ly: usize,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self { lx: 300, ly: 300 }
    }
}

/// Two-strength scan for `phase-diagram` and `boundaries`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    /// 1-based kick indices of the two scanned strengths.
    pub axes: [usize; 2],
    pub range: [[f64; 2]; 2],
    pub resolution: [usize; 2],
    pub sampling: Sampling,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { axes: [2, 4], range: [[0.0, 5.0], [0.0, 5.0]], resolution: [128, 128], sampling: Sampling::Upper }
    }
}

/// One-strength sweep for `mcd --sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub enabled: bool,
    /// 1-based kick index.
    pub k: usize,
    pub range: [f64; 2],
    pub samples: usize,
    pub sampling: Sampling,
    /// Also take the open-lattice corner census at every sample.
    pub census: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { enabled: false, k: 4, range: [0.0, 5.0], samples: 100, sampling: Sampling::Midpoints, census: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McdConfig {
    pub t_max: usize,
    /// Ring size; omitted means automatic sizing.
    pub lattice: Option<usize>,
}

impl Default for McdConfig {
    fn default() -> Self {
        Self { t_max: 50, lattice: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Quasiposition grid for winding numbers.
    pub bloch_grid: usize,
    pub e_tol: f64,
    /// Fixed edge-mode IPR threshold; omitted means 10× the median.
    pub ipr_min: Option<f64>,
    pub max_doublings: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { bloch_grid: DEFAULT_GRID, e_tol: DEFAULT_E_TOL, ipr_min: None, max_doublings: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Not echoed: the destination does not affect results.
    #[serde(skip_serializing)]
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), formats: vec![Format::Csv, Format::Json] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub params: ParamsConfig,
    pub lattice: LatticeConfig,
    pub scan: ScanConfig,
    pub sweep: SweepConfig,
    pub mcd: McdConfig,
    pub tolerances: Tolerances,
    pub output: OutputConfig,
    pub seed: u64,
    /// Not echoed: results do not depend on the worker count.
    #[serde(skip_serializing)]
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            params: ParamsConfig::default(),
            lattice: LatticeConfig::default(),
            scan: ScanConfig::default(),
            sweep: SweepConfig::default(),
            mcd: McdConfig::default(),
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
            seed: 1,
            workers: None,
        }
    }
}

/// Values given on the command line; each one replaces the file value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub k: [Option<f64>; 4],
    pub size: Option<usize>,
    pub grid: Option<[usize; 2]>,
    pub t_max: Option<usize>,
    pub workers: Option<usize>,
    pub formats: Option<Vec<Format>>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub sweep: bool,
    pub census: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(&mut self, o: Overrides) {
        let k = [&mut self.params.k1, &mut self.params.k2, &mut self.params.k3, &mut self.params.k4];
        for (slot, v) in k.into_iter().zip(o.k) {
            if let Some(v) = v {
                *slot = v;
            }
        }
        if let Some(l) = o.size {
            self.lattice = LatticeConfig { lx: l, ly: l };
        }
        if let Some(g) = o.grid {
            self.scan.resolution = g;
        }
        if let Some(t) = o.t_max {
            self.mcd.t_max = t;
        }
        if o.workers.is_some() {
            self.workers = o.workers;
        }
        if let Some(f) = o.formats {
            self.output.formats = f;
        }
        if let Some(d) = o.out {
            self.output.dir = d;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        self.sweep.enabled |= o.sweep;
        self.sweep.census |= o.census;
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        for (i, k) in self.params.as_array().into_iter().enumerate() {
            if !(k.is_finite() && k >= 0.0) {
                return bad(format!("k{} = {k} must be finite and non-negative", i + 1));
            }
        }
        LatticeSpec::new(self.lattice.lx, self.lattice.ly)
            .map_err(|_| CliError::Config("lattice sizes must be even and at least 8".into()))?;
        let s = &self.scan;
        if s.axes.iter().any(|a| !(1..=4).contains(a)) || s.axes[0] == s.axes[1] {
            return bad(format!("scan axes {:?} must be two distinct indices in 1..=4", s.axes));
        }
        for r in s.range.iter().chain(std::iter::once(&self.sweep.range)) {
            check_range(*r)?;
        }
        if s.resolution.iter().any(|&n| n < 2) {
            return bad(format!("scan resolution {:?} must be at least 2 per axis", s.resolution));
        }
        if !(1..=4).contains(&self.sweep.k) {
            return bad(format!("sweep index {} must lie in 1..=4", self.sweep.k));
        }
        if self.sweep.samples < 2 {
            return bad("sweep samples must be at least 2".into());
        }
        if self.mcd.t_max == 0 {
            return bad("t_max must be at least 1".into());
        }
        if let Some(l) = self.mcd.lattice {
            if l < 8 || l % 2 != 0 {
                return bad(format!("mcd lattice {l} must be even and at least 8"));
            }
        }
        let t = &self.tolerances;
        if t.bloch_grid < 16 {
            return bad(format!("bloch_grid {} must be at least 16", t.bloch_grid));
        }
        if !(t.e_tol > 0.0 && t.e_tol.is_finite()) {
            return bad(format!("e_tol {} must be positive", t.e_tol));
        }
        if t.ipr_min.is_some_and(|v| !(v > 0.0 && v <= 1.0)) {
            return bad("ipr_min must lie in (0, 1]".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        if self.output.formats.is_empty() {
            return bad("at least one output format is required".into());
        }
        Ok(())
    }

    pub fn kick_params(&self) -> CliResult<KickParams> {
        Ok(KickParams::from_pi_multiples(self.params.as_array())?)
    }

    pub fn lattice_spec(&self) -> CliResult<LatticeSpec> {
        Ok(LatticeSpec::new(self.lattice.lx, self.lattice.ly)?)
    }

    pub fn census_options(&self) -> CensusOptions {
        let t = &self.tolerances;
        CensusOptions { e_tol: t.e_tol, ipr_min: t.ipr_min, grid: t.bloch_grid, max_doublings: t.max_doublings }
    }
}

fn check_range([lo, hi]: [f64; 2]) -> CliResult<()> {
    if lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi > lo {
        Ok(())
    } else {
        Err(CliError::Config(format!("range [{lo}, {hi}] must be non-empty and non-negative")))
    }
}

/// Parse `NxM`.
pub fn parse_grid(s: &str) -> Result<[usize; 2], String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got {s:?}"))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok([n(a)?, n(b)?])
}

/// Parse a comma-separated format list such as `csv,json`.
pub fn parse_formats(s: &str) -> Result<Vec<Format>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let f = match part.to_ascii_lowercase().as_str() {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(format!("unknown format {other:?}")),
        };
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn file_values_and_overrides() {
        let mut c: RunConfig = toml::from_str(
            "seed = 9\n[params]\nk1 = 0.5\nk2 = 3.5\nk3 = 0.5\nk4 = 2.5\n[scan]\nresolution = [16, 8]\n",
        )
        .unwrap();
        assert_eq!(c.params.k4, 2.5);
        assert_eq!(c.scan.axes, [2, 4]);
        c.apply(Overrides { k: [None, None, None, Some(1.5)], grid: Some([4, 4]), ..Overrides::default() });
        assert_eq!(c.params.k4, 1.5);
        assert_eq!(c.scan.resolution, [4, 4]);
        assert_eq!(c.seed, 9);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("[params]\nk5 = 1.0\n").is_err());
    }

    #[test]
    fn invalid_values_are_rejected() {
        let mut c = RunConfig::default();
        c.scan.range[0] = [2.0, 1.0];
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.scan.axes = [3, 3];
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.tolerances.e_tol = 0.0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.lattice.lx = 7;
        assert!(c.validate().is_err());
    }

    #[test]
    fn flag_parsers() {
        assert_eq!(parse_grid("64x32").unwrap(), [64, 32]);
        assert!(parse_grid("64").is_err());
        assert_eq!(parse_formats("json, csv,json").unwrap(), vec![Format::Csv, Format::Json]);
        assert!(parse_formats("xml").is_err());
    }
}
