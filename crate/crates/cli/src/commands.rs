//! The three subcommands: solve a problem file, report its bound
//! certificate, or run a convergence study against known solutions.

use std::path::{Path, PathBuf};
use std::time::Instant;

use phibvp::apriori;
use phibvp::oracle::{self, BcKind, Profile};
use phibvp::phi::{self, PhiModel, PhiSpec};
use phibvp::problem::GrowthCheck;
use phibvp::solver::{self, SolverConfig};

use crate::problem_file::{self, Failure};
use crate::summary::{
    self, BcResiduals, CertificateOut, OracleCheck, SummaryRecord,
};

/// Agreement demanded between the fixed-point solution and the shooting
/// cross-check under `--check`.
const ORACLE_TOLERANCE: f64 = 1e-3;

const SIGN_CHECK_T_SAMPLES: usize = 64;
const SIGN_CHECK_X_SAMPLES: usize = 16;
const GROWTH_CHECK_SAMPLES: usize = 4096;

pub struct SolveOptions {
    pub problem: PathBuf,
    pub n: Option<usize>,
    pub tol: Option<f64>,
    pub theta: Option<f64>,
    pub out: PathBuf,
    pub summary: PathBuf,
    pub check: bool,
}

pub fn cmd_solve(opts: &SolveOptions) -> i32 {
    let total = Instant::now();
    let mut rec = SummaryRecord::new(opts.problem.display().to_string());
    let outcome = solve_inner(opts, &mut rec);
    rec.timings.total_s = Some(total.elapsed().as_secs_f64());
    let code = match &outcome {
        Ok(()) => {
            rec.status = "ok".to_string();
            0
        }
        Err(f) => {
            rec.status = f.status().to_string();
            rec.error = Some(f.message());
            f.exit_code()
        }
    };
    let json = match serde_json::to_string_pretty(&rec) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: could not serialize summary: {e}");
            return 1;
        }
    };
    if let Err(e) = summary::write_atomic(&opts.summary, &(json + "\n")) {
        eprintln!("error: could not write {}: {e}", opts.summary.display());
        return 1;
    }
    if let Err(f) = &outcome {
        eprintln!("error: {}", f.message());
    }
    code
}

fn solve_inner(opts: &SolveOptions, rec: &mut SummaryRecord) -> Result<(), Failure> {
    let file = problem_file::load(&opts.problem)?;
    let p = problem_file::build(&file, opts.n)?;
    rec.grid_n = Some(p.grid_n());

    let tv = Instant::now();
    let assumptions = p.phi().check_assumptions(&phi::default_sample_points());
    let first_failure = assumptions
        .first_failure()
        .map(|(path, detail)| format!("{path}: {detail}"));
    rec.assumption_report = Some(assumptions);
    if let Some(msg) = first_failure {
        return Err(Failure::Invalid(msg));
    }

    let sign = p
        .check_sign_condition(SIGN_CHECK_T_SAMPLES, SIGN_CHECK_X_SAMPLES)
        .map_err(|e| Failure::Invalid(format!("f.expr: {e}")))?;
    let witness = sign.witness.clone();
    let sign_passed = sign.passed;
    rec.sign_condition = Some(sign);
    if !sign_passed {
        let w = witness.expect("failed sign check carries a witness");
        return Err(Failure::Invalid(format!(
            "f.expr: sign condition fails at t = {}, x = {} (x·f = {})",
            w.t, w.x, w.product
        )));
    }

    let r0 = apriori::r0_bound(&p);
    let growth = p
        .estimate_growth_constants(r0, GROWTH_CHECK_SAMPLES)
        .map_err(|e| Failure::Invalid(format!("f.expr: {e}")))?;
    rec.growth_check = Some(growth.clone());
    if let GrowthCheck::Violated(v) = &growth {
        return Err(Failure::Invalid(format!(
            "f.T0: growth bound violated at (t, x, v) = ({}, {}, {}): |f| = {} exceeds {}; \
             smallest sufficient T0 on this sample ≈ {}",
            v.t,
            v.x,
            v.v,
            v.f_value.abs(),
            v.bound_value,
            v.minimal_t0
        )));
    }
    rec.timings.validate_s = Some(tv.elapsed().as_secs_f64());

    let cert = apriori::r1_bound(p.phi(), r0, p.f().s0(), p.f().t0())
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    rec.certificate = Some(CertificateOut {
        chain: cert,
        k_phi: p.phi().k_phi(),
    });

    let mut cfg = file.solver.unwrap_or_default();
    if let Some(t) = opts.tol {
        cfg.fixpoint_tol = t;
    }
    if let Some(t) = opts.theta {
        cfg.theta = t;
    }
    cfg.validate().map_err(|e| Failure::Invalid(e.to_string()))?;

    let ts = Instant::now();
    let sol = match solver::solve(&p, &cfg) {
        Ok(s) => s,
        Err(phibvp::Error::NonConvergence {
            lambda_reached,
            last_residual,
        }) => {
            rec.lambda_reached = Some(lambda_reached);
            rec.fixpoint_residual = Some(last_residual);
            rec.timings.solve_s = Some(ts.elapsed().as_secs_f64());
            return Err(Failure::NonConvergence {
                lambda_reached,
                last_residual,
            });
        }
        Err(e) => return Err(Failure::Internal(format!("solver failed: {e}"))),
    };
    rec.timings.solve_s = Some(ts.elapsed().as_secs_f64());
    rec.lambda_reached = Some(sol.lambda_reached);
    rec.fixpoint_residual = Some(sol.fixpoint_residual);
    rec.strong_residual = Some(sol.strong_residual);
    rec.picard_iters_total = Some(sol.picard_iters_total);
    let (left, right) = phibvp::operator::bc_residuals(&sol.u, p.bc());
    rec.bc_residuals = Some(BcResiduals { left, right });
    if let Some(c) = &sol.certificate {
        rec.certify = Some(apriori::certify(&sol.u, c));
    }

    summary::write_atomic(&opts.out, &sol.u.to_csv_string())
        .map_err(|e| Failure::Io(format!("{}: {e}", opts.out.display())))?;
    eprintln!(
        "solved {} (n = {}): lambda = {}, strong residual {:.3e}",
        opts.problem.display(),
        p.grid_n(),
        sol.lambda_reached,
        sol.strong_residual
    );
    eprintln!(
        "wrote {} and {}",
        opts.out.display(),
        opts.summary.display()
    );

    if opts.check {
        let to = Instant::now();
        let result = oracle::shooting_solve(&p, 1.0);
        rec.timings.oracle_s = Some(to.elapsed().as_secs_f64());
        match result {
            Ok(shot) => {
                let (sup_diff_u, sup_diff_du) = oracle::compare(&shot.u, &sol.u)
                    .map_err(|e| Failure::Internal(e.to_string()))?;
                let passed = sup_diff_u <= ORACLE_TOLERANCE;
                rec.oracle_check = Some(OracleCheck {
                    free_param: shot.free_param,
                    bc_residual: shot.bc_residual,
                    rk4_steps: shot.rk4_steps,
                    sup_diff_u,
                    sup_diff_du,
                    tolerance: ORACLE_TOLERANCE,
                    passed,
                });
                if !passed {
                    return Err(Failure::OracleMismatch(format!(
                        "solution differs from the shooting cross-check by {sup_diff_u:.3e} \
                         (tolerance {ORACLE_TOLERANCE:.0e})"
                    )));
                }
                eprintln!("cross-check passed: sup difference {sup_diff_u:.3e}");
            }
            Err(e) => {
                return Err(Failure::OracleMismatch(format!(
                    "shooting cross-check failed: {e}"
                )))
            }
        }
    }
    Ok(())
}

pub fn cmd_bounds(problem: &Path) -> i32 {
    match bounds_inner(problem) {
        Ok(json) => {
            println!("{json}");
            0
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.exit_code()
        }
    }
}

fn bounds_inner(problem: &Path) -> Result<String, Failure> {
    let file = problem_file::load(problem)?;
    let p = problem_file::build(&file, None)?;
    let r0 = apriori::r0_bound(&p);
    let cert = apriori::r1_bound(p.phi(), r0, p.f().s0(), p.f().t0())
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    let out = CertificateOut {
        chain: cert,
        k_phi: p.phi().k_phi(),
    };
    serde_json::to_string_pretty(&out).map_err(|e| Failure::Internal(e.to_string()))
}

pub fn cmd_verify(profile_name: &str, p_exponent: f64, n_list: &str) -> i32 {
    match verify_inner(profile_name, p_exponent, n_list) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.exit_code()
        }
    }
}

fn verify_inner(profile_name: &str, p_exponent: f64, n_list: &str) -> Result<bool, Failure> {
    let profile = match profile_name {
        "linear" => Profile::Linear,
        "quadratic" => Profile::Quadratic,
        "quartic" => Profile::Quartic,
        "sin" => Profile::Sine { k: 1 },
        "sin2" => Profile::Sine { k: 2 },
        "sinh" => Profile::SinhScaled,
        other => {
            return Err(Failure::Invalid(format!(
                "profile: unknown {other:?} (expected linear, quadratic, quartic, sin, sin2, sinh)"
            )))
        }
    };
    let ns: Vec<usize> = n_list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Invalid(format!("n-list: {:?} is not a grid size", s.trim())))
        })
        .collect::<Result<_, _>>()?;
    if ns.is_empty() {
        return Err(Failure::Invalid("n-list: empty".to_string()));
    }
    let spec = PhiSpec::power_sum_default_weights(vec![p_exponent])
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    let phi = PhiModel::new(spec);

    // Independent grid sizes; run them side by side.
    let results: Vec<Result<(f64, bool), Failure>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| {
                let phi = &phi;
                scope.spawn(move || -> Result<(f64, bool), Failure> {
                    let m = oracle::manufactured_problem(phi, profile, BcKind::Dirichlet, n)
                        .map_err(|e| Failure::Invalid(e.to_string()))?;
                    let sol = match solver::solve(&m.problem, &SolverConfig::default()) {
                        Ok(s) => s,
                        Err(phibvp::Error::NonConvergence {
                            lambda_reached,
                            last_residual,
                        }) => {
                            return Err(Failure::NonConvergence {
                                lambda_reached,
                                last_residual,
                            })
                        }
                        Err(e) => return Err(Failure::Internal(e.to_string())),
                    };
                    let err = sol
                        .u
                        .u
                        .max_abs_diff(&m.exact.u)
                        .map_err(|e| Failure::Internal(e.to_string()))?;
                    Ok((err, m.singular_endpoint))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut errors = Vec::with_capacity(ns.len());
    let mut singular = false;
    for res in results {
        let (err, sing) = res?;
        singular |= sing;
        errors.push(err);
    }
    if singular {
        eprintln!(
            "note: derivative vanishes at t = 0 with exponent below 2; \
             one-sided endpoint stencil applied"
        );
    }

    println!("{:>8} {:>14} {:>8}", "n", "sup_error", "order");
    for (i, (&n, &err)) in ns.iter().zip(&errors).enumerate() {
        let order = if i > 0 && errors[i - 1] > 1e-13 && err > 1e-13 {
            let rate = (errors[i - 1] / err).ln() / (n as f64 / ns[i - 1] as f64).ln();
            format!("{rate:.2}")
        } else {
            "-".to_string()
        };
        println!("{n:>8} {err:>14.6e} {order:>8}");
    }

    let threshold = if profile == Profile::Linear {
        1e-9
    } else if p_exponent < 2.0 {
        if profile == Profile::Quadratic {
            5e-3
        } else {
            1e-3
        }
    } else {
        5e-4
    };
    let final_err = *errors.last().expect("n-list checked non-empty");
    if final_err <= threshold {
        eprintln!("final error {final_err:.3e} within threshold {threshold:.0e}");
        Ok(true)
    } else {
        eprintln!("final error {final_err:.3e} exceeds threshold {threshold:.0e}");
        Ok(false)
    }
}
