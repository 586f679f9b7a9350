//! Per-run diagnostics document: a structured plain-text format with a
//! per-time series table and a summary block.
//!
//! Schema (`# key=value` headers, then two sections):
//!
//! ```text
//! # vvlab-diagnostics v1
//! # eps=... r1=... gamma=... nu=... c=...
//! [series]
//! t,relE_U,relE_uE,dissipation,R1,...,R7,K_thm1,...,K_byebye,tesi,defect
//! <one row per stored time, 17-digit floats>
//! [summary]
//! <key=value lines>
//! ```

use std::collections::HashMap;

use super::criteria::CriterionKind;
use super::{GronwallFit, LucaCheck};
use crate::error::{Error, Result};

/// Everything measured on one run, time-resolved plus totals.
#[derive(Debug, Clone)]
pub struct DiagnosticsReport {
    pub eps: f64,
    pub r1: f64,
    pub gamma: f64,
    pub nu: f64,
    pub c: f64,
    pub times: Vec<f64>,
    /// Relative energy against the corrected comparison field.
    pub rel_energy_corrected: Vec<f64>,
    /// Relative energy against the raw reference velocity.
    pub rel_energy_reference: Vec<f64>,
    /// Cumulative `eps nu int int |S_mu|^2` (run accumulator).
    pub dissipation: Vec<f64>,
    /// Cumulative remainder terms.
    pub remainders: [Vec<f64>; 7],
    /// Cumulative criterion integrals, fixed order of `CriterionKind::ALL`.
    pub criteria_series: Vec<Vec<f64>>,
    /// Per-time convergence metric.
    pub tesi_series: Vec<f64>,
    /// Energy defect series.
    pub energy_defect: Vec<f64>,
    pub sup_rel_energy: f64,
    pub tesi_metric: f64,
    pub energy_defect_max: f64,
    pub gronwall: GronwallFit,
    pub luca: Vec<LucaCheck>,
}

impl DiagnosticsReport {
    pub fn criterion_total(&self, kind: CriterionKind) -> f64 {
        let idx = CriterionKind::ALL.iter().position(|k| *k == kind).unwrap();
        *self.criteria_series[idx].last().unwrap_or(&f64::NAN)
    }

    /// Serializes the report in the documented schema.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# vvlab-diagnostics v1\n");
        out.push_str(&format!(
            "# eps={:.17e} r1={:.17e} gamma={:.17e} nu={:.17e} c={:.17e}\n",
            self.eps, self.r1, self.gamma, self.nu, self.c
        ));
        out.push_str("[series]\n");
        out.push_str("t,relE_U,relE_uE,dissipation");
        for i in 1..=7 {
            out.push_str(&format!(",R{i}"));
        }
        for kind in CriterionKind::ALL {
            out.push_str(&format!(",K_{}", kind.name()));
        }
        out.push_str(",tesi,defect\n");
        for k in 0..self.times.len() {
            let mut row = vec![
                self.times[k],
                self.rel_energy_corrected[k],
                self.rel_energy_reference[k],
                self.dissipation[k],
            ];
            for i in 0..7 {
                row.push(self.remainders[i][k]);
            }
            for series in &self.criteria_series {
                row.push(series[k]);
            }
            row.push(self.tesi_series[k]);
            row.push(self.energy_defect[k]);
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out.push_str("[summary]\n");
        for (i, kind) in CriterionKind::ALL.iter().enumerate() {
            out.push_str(&format!(
                "K_{}={:.17e}\n",
                kind.name(),
                self.criteria_series[i].last().unwrap_or(&f64::NAN)
            ));
        }
        out.push_str(&format!("sup_relE={:.17e}\n", self.sup_rel_energy));
        out.push_str(&format!("tesi_metric={:.17e}\n", self.tesi_metric));
        out.push_str(&format!("energy_defect_max={:.17e}\n", self.energy_defect_max));
        out.push_str(&format!("gronwall_rate={:.17e}\n", self.gronwall.rate));
        out.push_str(&format!("gronwall_eta={:.17e}\n", self.gronwall.eta));
        out.push_str(&format!("gronwall_residual={:.17e}\n", self.gronwall.residual));
        for l in &self.luca {
            out.push_str(&format!(
                "luca ell={:.17e} lhs={:.17e} rhs={:.17e} pass={}\n",
                l.ell, l.lhs, l.rhs, l.pass
            ));
        }
        out
    }

    /// Parses the summary block of a serialized report. Series rows are
    /// re-read as raw numbers; the parse is lossless for the summary keys.
    pub fn parse_summary(text: &str) -> Result<HashMap<String, f64>> {
        let mut out = HashMap::new();
        let mut in_summary = false;
        for line in text.lines() {
            if line.trim() == "[summary]" {
                in_summary = true;
                continue;
            }
            if !in_summary {
                continue;
            }
            if line.starts_with("luca ") {
                continue;
            }
            if let Some((k, v)) = line.split_once('=') {
                let value: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad summary value '{v}'")))?;
                out.insert(k.trim().to_string(), value);
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("no summary block found".into()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_report() -> DiagnosticsReport {
        DiagnosticsReport {
            eps: 0.25,
            r1: 0.25,
            gamma: 2.0,
            nu: 0.5,
            c: 1.0,
            times: vec![0.0, 0.1],
            rel_energy_corrected: vec![0.0, 1e-3],
            rel_energy_reference: vec![0.0, 2e-3],
            dissipation: vec![0.0, 5e-4],
            remainders: std::array::from_fn(|i| vec![0.0, i as f64 * 1e-5]),
            criteria_series: (0..7).map(|i| vec![0.0, 0.1 + i as f64]).collect(),
            tesi_series: vec![0.0, 0.01],
            energy_defect: vec![0.0, -1e-9],
            sup_rel_energy: 1e-3,
            tesi_metric: 0.01,
            energy_defect_max: -1e-9,
            gronwall: GronwallFit {
                rate: 1.5,
                eta: 0.0,
                residual: 1e-3,
            },
            luca: vec![LucaCheck {
                ell: 1.0,
                lhs: 0.5,
                rhs: 0.7,
                pass: true,
            }],
        }
    }

    #[test]
    fn summary_roundtrip() {
        let report = tiny_report();
        let text = report.to_text();
        let summary = DiagnosticsReport::parse_summary(&text).unwrap();
        assert_eq!(summary["sup_relE"], 1e-3);
        assert_eq!(summary["K_thm1"], 0.1);
        assert_eq!(summary["gronwall_rate"], 1.5);
        assert_eq!(summary["energy_defect_max"], -1e-9);
    }

    #[test]
    fn series_table_has_fixed_column_count() {
        let report = tiny_report();
        let text = report.to_text();
        let series_row = text
            .lines()
            .skip_while(|l| !l.starts_with("[series]"))
            .nth(2)
            .unwrap();
        // t, 3 energies, 7 remainders, 7 criteria, tesi, defect.
        assert_eq!(series_row.split(',').count(), 1 + 3 + 7 + 7 + 2);
    }
}
