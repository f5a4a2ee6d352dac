//! Damped Picard iteration with load continuation.
//!
//! The scheme iterates u ↦ (1 − θ)u + θ·K(λ·N(u)), where N evaluates the
//! right-hand side along the current iterate and K is the solution operator
//! for the associated quadrature problem. λ is marched from 0 to 1 in
//! adaptive steps; each stage warm-starts from the previous converged
//! iterate, and a stage that fails to contract halves the step. λ = 0 is
//! free: every starting point maps to K(0) in one step.

use serde::{Deserialize, Serialize};

use crate::apriori::{self, BoundCertificate};
use crate::error::Error;
use crate::grid::{C1GridFunction, GridFunction};
use crate::operator;
use crate::problem::ProblemInstance;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Damping weight on the operator image, in (0, 1].
    pub theta: f64,
    /// Stage convergence threshold on the C¹ distance between iterates.
    pub fixpoint_tol: f64,
    /// Iteration budget per continuation stage.
    pub max_picard_iters: usize,
    /// Initial λ increment.
    pub lambda_step0: f64,
    /// Smallest admissible λ increment before giving up.
    pub lambda_step_min: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            theta: 0.7,
            fixpoint_tol: 1e-10,
            max_picard_iters: 80,
            lambda_step0: 0.25,
            lambda_step_min: (2.0f64).powi(-10),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::invalid(
                "solver.theta",
                format!("must be in (0, 1], got {}", self.theta),
            ));
        }
        if !(self.fixpoint_tol > 0.0 && self.fixpoint_tol.is_finite()) {
            return Err(Error::invalid(
                "solver.fixpoint_tol",
                format!("must be positive, got {}", self.fixpoint_tol),
            ));
        }
        if self.max_picard_iters == 0 {
            return Err(Error::invalid(
                "solver.max_picard_iters",
                "must be at least 1".to_string(),
            ));
        }
        if !(self.lambda_step0 > 0.0 && self.lambda_step0 <= 1.0) {
            return Err(Error::invalid(
                "solver.lambda_step0",
                format!("must be in (0, 1], got {}", self.lambda_step0),
            ));
        }
        if !(self.lambda_step_min > 0.0 && self.lambda_step_min <= self.lambda_step0) {
            return Err(Error::invalid(
                "solver.lambda_step_min",
                format!(
                    "must be in (0, lambda_step0], got {}",
                    self.lambda_step_min
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub u: C1GridFunction,
    pub lambda_reached: f64,
    pub fixpoint_residual: f64,
    pub strong_residual: f64,
    pub picard_iters_total: usize,
    pub certificate: Option<BoundCertificate>,
}

/// Right-hand side along an iterate: (N u)_j = f(t_j, u_j, u̇_j).
pub fn apply_n(p: &ProblemInstance, u: &C1GridFunction) -> Result<GridFunction, Error> {
    let n = u.n();
    let mut values = Vec::with_capacity(n + 1);
    for j in 0..=n {
        values.push(p.eval_f(u.u.t(j), u.u.values()[j], u.du.values()[j])?);
    }
    GridFunction::new(values)
}

/// One damped step at fixed λ.
pub fn picard_step(
    p: &ProblemInstance,
    u: &C1GridFunction,
    lambda: f64,
    theta: f64,
) -> Result<C1GridFunction, Error> {
    let v = apply_n(p, u)?.scale(lambda);
    let image = operator::apply_k(p.phi(), &v, p.bc())?;
    Ok(C1GridFunction {
        u: u.u.blend(&image.u, theta),
        du: u.du.blend(&image.du, theta),
    })
}

enum StageOutcome {
    Converged(C1GridFunction, f64, usize),
    Stalled(f64, usize),
}

fn picard_stage(
    p: &ProblemInstance,
    start: &C1GridFunction,
    lambda: f64,
    cfg: &SolverConfig,
) -> Result<StageOutcome, Error> {
    let mut current = start.clone();
    let mut residual = f64::INFINITY;
    for iter in 1..=cfg.max_picard_iters {
        let next = match picard_step(p, &current, lambda, cfg.theta) {
            Ok(next) => next,
            // The step left the domain of f or blew up; report a stall so
            // the continuation can retreat instead of aborting.
            Err(Error::Domain(_)) | Err(Error::NonFinite { .. }) => {
                return Ok(StageOutcome::Stalled(residual, iter))
            }
            Err(e) => return Err(e),
        };
        residual = current.c1_distance(&next)?;
        current = next;
        if residual <= cfg.fixpoint_tol {
            return Ok(StageOutcome::Converged(current, residual, iter));
        }
    }
    Ok(StageOutcome::Stalled(residual, cfg.max_picard_iters))
}

/// Solve by continuation in λ from the load-free profile K(0).
pub fn solve(p: &ProblemInstance, cfg: &SolverConfig) -> Result<Solution, Error> {
    cfg.validate()?;
    let zero = GridFunction::zeros(p.grid_n());
    let mut u = operator::apply_k(p.phi(), &zero, p.bc())?;
    let mut lambda = 0.0;
    let mut step = cfg.lambda_step0;
    let mut iters_total = 0usize;
    let mut last_residual = 0.0f64;

    while lambda < 1.0 {
        let target = (lambda + step).min(1.0);
        match picard_stage(p, &u, target, cfg)? {
            StageOutcome::Converged(unew, residual, iters) => {
                u = unew;
                lambda = target;
                last_residual = residual;
                iters_total += iters;
            }
            StageOutcome::Stalled(residual, iters) => {
                iters_total += iters;
                last_residual = residual;
                step *= 0.5;
                if step < cfg.lambda_step_min {
                    return Err(Error::NonConvergence {
                        lambda_reached: lambda,
                        last_residual,
                    });
                }
            }
        }
    }

    let strong = strong_residual(p, &u, lambda)?;
    let r0 = apriori::r0_bound(p);
    let cert = apriori::r1_bound(p.phi(), r0, p.f().s0(), p.f().t0())?;
    Ok(Solution {
        u,
        lambda_reached: lambda,
        fixpoint_residual: last_residual,
        strong_residual: strong,
        picard_iters_total: iters_total,
        certificate: Some(cert),
    })
}

/// Divided-difference defect of the differential relation at panel
/// midpoints: max_j |n·(φ(u̇_{j+1}) − φ(u̇_j)) − λ·f(t_{j+½}, ū, u̇̄)|,
/// with ū, u̇̄ the panel averages.
pub fn strong_residual(
    p: &ProblemInstance,
    u: &C1GridFunction,
    lambda: f64,
) -> Result<f64, Error> {
    let n = u.n();
    let nf = n as f64;
    let phi = p.phi();
    let mut worst = 0.0f64;
    for j in 0..n {
        let t_mid = (j as f64 + 0.5) / nf;
        let du_l = u.du.values()[j];
        let du_r = u.du.values()[j + 1];
        let lhs = nf * (phi.phi_prime(du_r) - phi.phi_prime(du_l));
        let u_mid = 0.5 * (u.u.values()[j] + u.u.values()[j + 1]);
        let du_mid = 0.5 * (du_l + du_r);
        let rhs = lambda * p.eval_f(t_mid, u_mid, du_mid)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}
