//! The run summary: one JSON record per invocation, written no matter how
//! the run ends, so downstream tooling never has to distinguish "failed"
//! from "absent".

use std::io;
use std::path::Path;

use phibvp::apriori::{BoundCertificate, CertReport};
use phibvp::phi::AssumptionReport;
use phibvp::problem::{GrowthCheck, SignConditionCheck};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct SummaryRecord {
    pub status: String,
    pub error: Option<String>,
    pub problem: String,
    pub grid_n: Option<usize>,
    pub lambda_reached: Option<f64>,
    pub fixpoint_residual: Option<f64>,
    pub strong_residual: Option<f64>,
    pub picard_iters_total: Option<usize>,
    pub bc_residuals: Option<BcResiduals>,
    pub certificate: Option<CertificateOut>,
    pub certify: Option<CertReport>,
    pub assumption_report: Option<AssumptionReport>,
    pub sign_condition: Option<SignConditionCheck>,
    pub growth_check: Option<GrowthCheck>,
    pub oracle_check: Option<OracleCheck>,
    pub timings: Timings,
}

#[derive(Debug, Serialize)]
pub struct BcResiduals {
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Serialize)]
pub struct CertificateOut {
    #[serde(flatten)]
    pub chain: BoundCertificate,
    pub k_phi: f64,
}

#[derive(Debug, Serialize)]
pub struct OracleCheck {
    pub free_param: f64,
    pub bc_residual: f64,
    pub rk4_steps: usize,
    pub sup_diff_u: f64,
    pub sup_diff_du: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub validate_s: Option<f64>,
    pub solve_s: Option<f64>,
    pub oracle_s: Option<f64>,
    pub total_s: Option<f64>,
}

impl SummaryRecord {
    pub fn new(problem: String) -> Self {
        SummaryRecord {
            status: "incomplete".to_string(),
            error: None,
            problem,
            grid_n: None,
            lambda_reached: None,
            fixpoint_residual: None,
            strong_residual: None,
            picard_iters_total: None,
            bc_residuals: None,
            certificate: None,
            certify: None,
            assumption_report: None,
            sign_condition: None,
            growth_check: None,
            oracle_check: None,
            timings: Timings::default(),
        }
    }
}

/// Write-temp-then-rename so readers never observe a half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, contents)?;
    match std::fs::rename(&tmp, path) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = std::fs::remove_file(&tmp);
            Err(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, "first").unwrap();
        write_atomic(&path, "second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        // No stray temporary left behind.
        let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(entries.len(), 1);
    }

    #[test]
    fn fresh_record_serializes_with_all_keys() {
        let rec = SummaryRecord::new("p.json".to_string());
        let json = serde_json::to_string(&rec).unwrap();
        for key in [
            "status",
            "lambda_reached",
            "certificate",
            "assumption_report",
            "timings",
        ] {
            assert!(json.contains(key), "missing {key}");
        }
    }
}
