//! JSON problem files and their conversion into validated instances.
//!
//! Failure classification drives the process exit code: malformed JSON or
//! an unparseable expression is a parse failure, a well-formed file whose
//! numbers violate an invariant is an invalid problem, and everything
//! downstream (non-convergence, I/O) is reported by the commands.

use std::path::Path;

use phibvp::phi::{PhiModel, PhiSpec};
use phibvp::problem::{BoundaryConditions, ProblemInstance, RhsFunction};
use phibvp::solver::SolverConfig;
use serde::Deserialize;

#[derive(Debug)]
pub enum Failure {
    Io(String),
    Internal(String),
    NonConvergence { lambda_reached: f64, last_residual: f64 },
    OracleMismatch(String),
    Invalid(String),
    Parse(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) | Failure::Internal(_) => 1,
            Failure::NonConvergence { .. } | Failure::OracleMismatch(_) => 2,
            Failure::Invalid(_) => 3,
            Failure::Parse(_) => 4,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Failure::Io(_) => "io_error",
            Failure::Internal(_) => "internal_error",
            Failure::NonConvergence { .. } => "non_convergence",
            Failure::OracleMismatch(_) => "oracle_mismatch",
            Failure::Invalid(_) => "invalid_problem",
            Failure::Parse(_) => "parse_error",
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Io(m)
            | Failure::Internal(m)
            | Failure::OracleMismatch(m)
            | Failure::Invalid(m)
            | Failure::Parse(m) => m.clone(),
            Failure::NonConvergence {
                lambda_reached,
                last_residual,
            } => format!(
                "continuation stalled at lambda = {lambda_reached} (last residual {last_residual:e})"
            ),
        }
    }
}

fn invalid(e: phibvp::Error) -> Failure {
    Failure::Invalid(e.to_string())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub phi: PhiSection,
    pub bc: BcSection,
    pub f: FSection,
    #[serde(default)]
    pub grid_n: Option<usize>,
    #[serde(default)]
    pub solver: Option<SolverConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiSection {
    pub exponents: Vec<f64>,
    /// Defaults to 1/pᵢ per term.
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    /// Claimed ∇₂ constant; validated by sampling, so an overstated value
    /// is rejected rather than trusted.
    #[serde(default)]
    pub k_phi: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcSection {
    pub kind: String,
    #[serde(rename = "A")]
    pub left: f64,
    #[serde(rename = "B")]
    pub right: f64,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FSection {
    pub expr: String,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "S0")]
    pub s0: f64,
    #[serde(rename = "T0")]
    pub t0: f64,
    #[serde(default)]
    pub v_box: Option<f64>,
}

pub fn load(path: &Path) -> Result<ProblemFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

/// Turn a deserialized file into a validated instance. The expression is
/// parsed first so syntax errors surface with their byte position instead
/// of being folded into semantic validation.
pub fn build(file: &ProblemFile, n_override: Option<usize>) -> Result<ProblemInstance, Failure> {
    phibvp::parse(&file.f.expr).map_err(|e| Failure::Parse(format!("f.expr: {e}")))?;

    let spec = match &file.phi.weights {
        Some(w) => PhiSpec::power_sum(file.phi.exponents.clone(), w.clone()),
        None => PhiSpec::power_sum_default_weights(file.phi.exponents.clone()),
    }
    .map_err(invalid)?;
    let phi = match file.phi.k_phi {
        Some(k) => PhiModel::with_k_phi(spec, k).map_err(invalid)?,
        None => PhiModel::new(spec),
    };

    let bc = match file.bc.kind.as_str() {
        "dirichlet" => BoundaryConditions::dirichlet(file.bc.left, file.bc.right).map_err(invalid)?,
        "sturm_liouville" => {
            let need = |x: Option<f64>, name: &str| {
                x.ok_or_else(|| {
                    Failure::Invalid(format!("bc.{name}: required when kind = \"sturm_liouville\""))
                })
            };
            BoundaryConditions::sturm_liouville(
                need(file.bc.alpha, "alpha")?,
                need(file.bc.beta, "beta")?,
                file.bc.left,
                need(file.bc.a, "a")?,
                need(file.bc.b, "b")?,
                file.bc.right,
            )
            .map_err(invalid)?
        }
        other => {
            return Err(Failure::Invalid(format!(
                "bc.kind: expected \"dirichlet\" or \"sturm_liouville\", got {other:?}"
            )))
        }
    };

    let mut f =
        RhsFunction::from_source(&file.f.expr, file.f.r, file.f.s0, file.f.t0).map_err(invalid)?;
    if let Some(vb) = file.f.v_box {
        f = f.with_v_box(vb).map_err(invalid)?;
    }

    let n = n_override.or(file.grid_n).unwrap_or(200);
    ProblemInstance::new(phi, bc, f, n).map_err(invalid)
}
