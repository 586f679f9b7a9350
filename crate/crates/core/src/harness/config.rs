//! Plain-text key-value configuration files and the sweep configuration
//! they populate.
//!
//! Format: one `key = value` pair per line, `#` starts a comment. Keys:
//!
//! ```text
//! preset        = bump1d | channel2d
//! law           = linear | power:<beta> | affine:<a>,<b>
//! gamma         = <float > 1>
//! nu            = <float in [1/(3 gamma - 2), 1)>
//! c             = <float > 0>          # strip constant
//! drag_exponent = <float >= 0>         # r1 = eps^a
//! eps           = <list>               # e.g. 2^-4,2^-5,0.01
//! t_final       = <float > 0>
//! snapshots     = <int >= 2>
//! layer_cells   = <int >= 8>           # cells per layer width
//! cutoff        = quintic | bump
//! cfl           = <float in (0,1)>
//! out           = <directory>
//! threads       = <int >= 1>
//! criteria      = <comma list>         # subset of criterion names
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use super::presets::Preset;
use crate::diagnostics::CriterionKind;
use crate::error::{Error, Result};
use crate::layer::Cutoff;

/// Full description of an `eps` sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub preset: Preset,
    pub law_name: String,
    pub gamma: f64,
    pub nu: f64,
    /// Strip constant of the layer width `c * eps`.
    pub c: f64,
    /// Drag schedule `r1 = eps^drag_exponent`.
    pub drag_exponent: f64,
    /// Strictly decreasing viscosity list.
    pub eps_list: Vec<f64>,
    pub t_final: f64,
    pub snapshots: usize,
    /// Cells per layer width; the grid spacing obeys
    /// `dx <= c eps / layer_cells` with `layer_cells >= 8`.
    pub layer_cells: usize,
    pub cutoff: Cutoff,
    pub cfl: f64,
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Criteria to evaluate; `None` (empty list in files) means all.
    pub criteria: Vec<CriterionKind>,
    /// Refinement factor of the shared reference grid.
    pub euler_refinement: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            preset: Preset::Bump1d,
            law_name: "linear".into(),
            gamma: 2.0,
            nu: 0.5,
            c: 1.0,
            drag_exponent: 1.0,
            eps_list: (4..=9).map(|k| 2f64.powi(-k)).collect(),
            t_final: 0.2,
            snapshots: 81,
            layer_cells: 8,
            cutoff: Cutoff::QuinticSmoothstep,
            cfl: 0.4,
            out_dir: None,
            threads: None,
            criteria: CriterionKind::ALL.to_vec(),
            euler_refinement: 4,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.eps_list.is_empty() {
            return Err(Error::Config("empty eps list".into()));
        }
        if self.eps_list.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::Config("eps values must be positive".into()));
        }
        if self.eps_list.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("eps list must be strictly decreasing".into()));
        }
        if !(self.gamma > 1.0) {
            return Err(Error::Parameter(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        let nu_lo = 1.0 / (3.0 * self.gamma - 2.0);
        if !(self.nu >= nu_lo && self.nu < 1.0) {
            return Err(Error::Parameter(format!(
                "nu = {} outside [{nu_lo}, 1) for gamma = {}",
                self.nu, self.gamma
            )));
        }
        if !(self.c > 0.0) {
            return Err(Error::Parameter("c must be positive".into()));
        }
        if self.drag_exponent < 0.0 {
            return Err(Error::Parameter("drag exponent must be non-negative".into()));
        }
        if !(self.t_final > 0.0) {
            return Err(Error::Parameter("t_final must be positive".into()));
        }
        if self.snapshots < 2 {
            return Err(Error::Config("need at least 2 snapshots".into()));
        }
        if self.layer_cells < 8 {
            return Err(Error::Config(format!(
                "layer_cells = {} under-resolves the strip (need >= 8)",
                self.layer_cells
            )));
        }
        if self.euler_refinement < 4 {
            return Err(Error::Config("reference refinement must be >= 4".into()));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Parameter("cfl must lie in (0,1)".into()));
        }
        Ok(())
    }

    /// Drag coefficient of one sweep row.
    pub fn r1_of(&self, eps: f64) -> f64 {
        eps.powf(self.drag_exponent)
    }

    /// Applies `key = value` overrides (from a file or CLI flags).
    pub fn apply(&mut self, kv: &BTreeMap<String, String>) -> Result<()> {
        for (key, value) in kv {
            match key.as_str() {
                "preset" => self.preset = value.parse()?,
                "law" => {
                    // Validated on use; parse now to fail early.
                    let _: crate::viscosity::MuProfile = value.parse()?;
                    self.law_name = value.clone();
                }
                "gamma" => self.gamma = parse_f64(key, value)?,
                "nu" => self.nu = parse_f64(key, value)?,
                "c" => self.c = parse_f64(key, value)?,
                "drag_exponent" => self.drag_exponent = parse_f64(key, value)?,
                "eps" => self.eps_list = parse_eps_list(value)?,
                "t_final" => self.t_final = parse_f64(key, value)?,
                "snapshots" => self.snapshots = parse_usize(key, value)?,
                "layer_cells" => self.layer_cells = parse_usize(key, value)?,
                "cutoff" => self.cutoff = value.parse()?,
                "cfl" => self.cfl = parse_f64(key, value)?,
                "out" => self.out_dir = Some(PathBuf::from(value)),
                "threads" => self.threads = Some(parse_usize(key, value)?),
                "criteria" => {
                    self.criteria = value
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.parse())
                        .collect::<Result<Vec<_>>>()?;
                    if self.criteria.is_empty() {
                        self.criteria = CriterionKind::ALL.to_vec();
                    }
                }
                other => return Err(Error::Config(format!("unknown configuration key '{other}'"))),
            }
        }
        Ok(())
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value '{value}' for '{key}'")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value '{value}' for '{key}'")))
}

/// Parses a comma-separated eps list; entries may be plain floats or
/// dyadic tokens `2^-k`.
pub fn parse_eps_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|tok| {
            let tok = tok.trim();
            if let Some(exp) = tok.strip_prefix("2^") {
                let e: i32 = exp
                    .parse()
                    .map_err(|_| Error::Config(format!("bad dyadic token '{tok}'")))?;
                Ok(2f64.powi(e))
            } else {
                tok.parse()
                    .map_err(|_| Error::Config(format!("bad eps value '{tok}'")))
            }
        })
        .collect()
}

/// Parses the `key = value` file format into a map.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected 'key = value', got '{raw}'", lineno + 1))
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_with_comments() {
        let text = "
            # sweep setup
            preset = bump1d
            gamma = 2.0
            eps = 2^-4, 2^-5, 0.01   # mixed tokens
        ";
        let kv = parse_config_text(text).unwrap();
        let mut cfg = SweepConfig::default();
        cfg.apply(&kv).unwrap();
        assert_eq!(cfg.preset, Preset::Bump1d);
        assert_eq!(cfg.eps_list, vec![0.0625, 0.03125, 0.01]);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        let kv = parse_config_text("wibble = 3").unwrap();
        let mut cfg = SweepConfig::default();
        assert!(cfg.apply(&kv).is_err());
        assert!(parse_config_text("no equals sign here").is_err());
    }

    #[test]
    fn validates_constraint_on_nu() {
        let mut cfg = SweepConfig::default();
        cfg.gamma = 2.0;
        cfg.nu = 0.2; // below 1/(3*2-2) = 0.25
        assert!(cfg.validate().is_err());
        cfg.nu = 0.25;
        cfg.validate().unwrap();
    }

    #[test]
    fn validates_eps_monotonicity() {
        let mut cfg = SweepConfig::default();
        cfg.eps_list = vec![0.1, 0.2];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn criteria_subset_parses() {
        let mut cfg = SweepConfig::default();
        let mut kv = BTreeMap::new();
        kv.insert("criteria".to_string(), "thm1,byebye".to_string());
        cfg.apply(&kv).unwrap();
        assert_eq!(cfg.criteria.len(), 2);
    }

    #[test]
    fn default_is_valid() {
        SweepConfig::default().validate().unwrap();
    }
}
