//! Problem instances: boundary conditions, the right-hand side with its
//! declared growth data, and the sampled admissibility checks.
//!
//! The two structural hypotheses on f are checked by sampling, never proven:
//! the sign condition x·f(t,x,0) > 0 outside radius R, and the growth bound
//! |f(t,x,v)| ≤ S₀·(φ(v)v − Φ(v)) + T₀ on a box. Reports say so.

use serde::Serialize;

use crate::error::Error;
use crate::expr::{self, Expr};
use crate::phi::PhiModel;

/// Dirichlet data u(0) = left, u(1) = right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletBc {
    pub left: f64,
    pub right: f64,
}

/// Separated conditions −α·u(0) + β·u̇(0) = left and
/// a·u(1) + b·u̇(1) = right, all four coefficients positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SturmLiouvilleBc {
    pub alpha: f64,
    pub beta: f64,
    pub left: f64,
    pub a: f64,
    pub b: f64,
    pub right: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryConditions {
    Dirichlet(DirichletBc),
    SturmLiouville(SturmLiouvilleBc),
}

impl BoundaryConditions {
    pub fn dirichlet(left: f64, right: f64) -> Result<Self, Error> {
        for (path, v) in [("bc.A", left), ("bc.B", right)] {
            if !v.is_finite() {
                return Err(Error::invalid(path, format!("must be finite, got {v}")));
            }
        }
        Ok(BoundaryConditions::Dirichlet(DirichletBc { left, right }))
    }

    pub fn sturm_liouville(
        alpha: f64,
        beta: f64,
        left: f64,
        a: f64,
        b: f64,
        right: f64,
    ) -> Result<Self, Error> {
        for (path, v) in [
            ("bc.alpha", alpha),
            ("bc.beta", beta),
            ("bc.a", a),
            ("bc.b", b),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(
                    path,
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        for (path, v) in [("bc.A", left), ("bc.B", right)] {
            if !v.is_finite() {
                return Err(Error::invalid(path, format!("must be finite, got {v}")));
            }
        }
        Ok(BoundaryConditions::SturmLiouville(SturmLiouvilleBc {
            alpha,
            beta,
            left,
            a,
            b,
            right,
        }))
    }
}

/// Right-hand side f(t, x, v) with its declared structure constants.
///
/// `r` is the sign-condition radius, `s0`/`t0` the growth coefficients, and
/// `v_box` the derivative half-width used when sampling the growth bound
/// (when absent, callers fall back to the certified derivative radius, or
/// 10·(1 + R) if no certificate is available).
#[derive(Debug, Clone)]
pub struct RhsFunction {
    expr: Expr,
    source: String,
    r: f64,
    s0: f64,
    t0: f64,
    v_box: Option<f64>,
}

impl RhsFunction {
    pub fn new(expr: Expr, source: impl Into<String>, r: f64, s0: f64, t0: f64) -> Result<Self, Error> {
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::invalid("f.R", format!("must be positive, got {r}")));
        }
        if !s0.is_finite() || s0 < 0.0 {
            return Err(Error::invalid(
                "f.S0",
                format!("must be non-negative, got {s0}"),
            ));
        }
        if !t0.is_finite() || t0 < 0.0 {
            return Err(Error::invalid(
                "f.T0",
                format!("must be non-negative, got {t0}"),
            ));
        }
        Ok(RhsFunction {
            expr,
            source: source.into(),
            r,
            s0,
            t0,
            v_box: None,
        })
    }

    /// Parse `source` and attach the declared constants.
    pub fn from_source(source: &str, r: f64, s0: f64, t0: f64) -> Result<Self, Error> {
        let expr = expr::parse(source).map_err(|e| Error::invalid("f.expr", format!("{e}")))?;
        RhsFunction::new(expr, source, r, s0, t0)
    }

    pub fn with_v_box(mut self, v_box: f64) -> Result<Self, Error> {
        if !v_box.is_finite() || v_box <= 0.0 {
            return Err(Error::invalid(
                "f.v_box",
                format!("must be positive, got {v_box}"),
            ));
        }
        self.v_box = Some(v_box);
        Ok(self)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn v_box(&self) -> Option<f64> {
        self.v_box
    }
}

/// A complete, immutable instance: potential, boundary data, right-hand
/// side, grid resolution.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    phi: PhiModel,
    bc: BoundaryConditions,
    f: RhsFunction,
    grid_n: usize,
}

impl ProblemInstance {
    pub fn new(
        phi: PhiModel,
        bc: BoundaryConditions,
        f: RhsFunction,
        grid_n: usize,
    ) -> Result<Self, Error> {
        if grid_n < 16 || grid_n % 2 != 0 {
            return Err(Error::invalid(
                "grid_n",
                format!("must be an even integer >= 16, got {grid_n}"),
            ));
        }
        Ok(ProblemInstance {
            phi,
            bc,
            f,
            grid_n,
        })
    }

    pub fn phi(&self) -> &PhiModel {
        &self.phi
    }

    pub fn bc(&self) -> &BoundaryConditions {
        &self.bc
    }

    pub fn f(&self) -> &RhsFunction {
        &self.f
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    pub fn eval_f(&self, t: f64, x: f64, v: f64) -> Result<f64, Error> {
        Ok(self.f.expr.eval(t, x, v)?)
    }

    /// Sample x·f(t, x, 0) > 0 for t on a uniform n_t-grid and |x| at n_x
    /// magnitudes in (R, 2R], both signs. A pass is evidence, not proof.
    pub fn check_sign_condition(
        &self,
        n_t: usize,
        n_x: usize,
    ) -> Result<SignConditionCheck, Error> {
        assert!(n_t >= 2 && n_x >= 1);
        let r = self.f.r();
        for i in 0..n_t {
            let t = i as f64 / (n_t - 1) as f64;
            for k in 1..=n_x {
                let mag = r * (1.0 + k as f64 / n_x as f64);
                for x in [mag, -mag] {
                    let fx = self.eval_f(t, x, 0.0)?;
                    if x * fx <= 0.0 {
                        return Ok(SignConditionCheck {
                            passed: false,
                            witness: Some(SignWitness {
                                t,
                                x,
                                product: x * fx,
                            }),
                            samples: n_t * n_x * 2,
                        });
                    }
                }
            }
        }
        Ok(SignConditionCheck {
            passed: true,
            witness: None,
            samples: n_t * n_x * 2,
        })
    }

    /// Check the declared growth bound |f| ≤ S₀·(φ(v)v − Φ(v)) + T₀ at
    /// low-discrepancy samples of [0,1] × [−r, r] × [−v_box, v_box].
    ///
    /// On failure the report carries the worst witness and the smallest T₀
    /// that would have passed with the declared S₀.
    pub fn estimate_growth_constants(
        &self,
        r: f64,
        samples: usize,
    ) -> Result<GrowthCheck, Error> {
        assert!(samples >= 1000, "growth check needs at least 10^3 samples");
        let s0 = self.f.s0();
        let t0 = self.f.t0();
        let v_box = self.resolved_v_box();

        let mut needed_t0 = 0.0f64;
        let mut worst: Option<ViolationReport> = None;
        for k in 0..samples {
            // Halton bases 2, 3, 5, started at a fixed offset.
            let idx = (k + 1) as u64;
            let t = radical_inverse(idx, 2);
            let x = -r + 2.0 * r * radical_inverse(idx, 3);
            let v = -v_box + 2.0 * v_box * radical_inverse(idx, 5);
            let fv = self.eval_f(t, x, v)?;
            let gap = self.phi.phi_prime(v) * v - self.phi.phi(v);
            let bound = s0 * gap + t0;
            let need = fv.abs() - s0 * gap;
            if need > needed_t0 {
                needed_t0 = need;
            }
            if fv.abs() > bound + 1e-12 * bound.abs().max(1.0) {
                let excess = fv.abs() - bound;
                if worst.as_ref().map_or(true, |w| excess > w.f_value.abs() - w.bound_value) {
                    worst = Some(ViolationReport {
                        t,
                        x,
                        v,
                        f_value: fv,
                        bound_value: bound,
                        minimal_t0: 0.0, // filled below
                    });
                }
            }
        }
        match worst {
            Some(mut w) => {
                w.minimal_t0 = needed_t0;
                Ok(GrowthCheck::Violated(w))
            }
            None => Ok(GrowthCheck::Verified {
                s0,
                t0,
                samples,
            }),
        }
    }

    /// The derivative half-width for growth sampling: the declared value,
    /// else the certified derivative radius, else 10·(1 + R).
    pub fn resolved_v_box(&self) -> f64 {
        if let Some(vb) = self.f.v_box() {
            return vb;
        }
        let r0 = crate::apriori::r0_bound(self);
        match crate::apriori::r1_bound(&self.phi, r0, self.f.s0(), self.f.t0()) {
            Ok(cert) if cert.r1 > 0.0 => cert.r1,
            _ => 10.0 * (1.0 + self.f.r()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SignWitness {
    pub t: f64,
    pub x: f64,
    pub product: f64,
}

/// Outcome of the sampled sign-condition check.
#[derive(Debug, Clone, Serialize)]
pub struct SignConditionCheck {
    pub passed: bool,
    pub witness: Option<SignWitness>,
    pub samples: usize,
}

/// Outcome of the sampled growth-bound check.
#[derive(Debug, Clone, Serialize)]
pub enum GrowthCheck {
    Verified { s0: f64, t0: f64, samples: usize },
    Violated(ViolationReport),
}

impl GrowthCheck {
    pub fn passed(&self) -> bool {
        matches!(self, GrowthCheck::Verified { .. })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationReport {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    pub f_value: f64,
    pub bound_value: f64,
    /// Smallest T₀ that would have passed at the declared S₀.
    pub minimal_t0: f64,
}

/// Van der Corput radical inverse in the given base.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}
