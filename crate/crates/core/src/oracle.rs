//! Independent reference machinery: a Runge-Kutta shooting solver built on
//! a different discretization than the fixed-point path, and manufactured
//! problems whose closed-form solutions exercise both.
//!
//! The shooting formulation integrates the first-order system
//! u' = ψ(w), w' = λ·f(t, u, ψ(w)) for the flux w = φ(u̇), so only ψ and
//! the right-hand side are shared with the solver under test.

use crate::apriori;
use crate::error::Error;
use crate::expr;
use crate::grid::{C1GridFunction, GridFunction};
use crate::phi::PhiModel;
use crate::problem::{BoundaryConditions, ProblemInstance, RhsFunction};

/// Accepted boundary defect, scaled by max(1, |right-hand target|).
pub const SHOOTING_TOLERANCE: f64 = 1e-9;

const MAX_BRACKET_DOUBLINGS: u32 = 60;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone)]
pub struct ShootingResult {
    pub u: C1GridFunction,
    /// Initial flux w(0) = φ(u̇(0)) selected by the root solve.
    pub free_param: f64,
    pub bc_residual: f64,
    pub rk4_steps: usize,
}

struct Shot {
    u_nodes: Vec<f64>,
    du_nodes: Vec<f64>,
    u_end: f64,
    w_end: f64,
}

fn initial_state(p: &ProblemInstance, s: f64) -> Result<(f64, f64), Error> {
    match p.bc() {
        BoundaryConditions::Dirichlet(d) => Ok((d.left, s)),
        BoundaryConditions::SturmLiouville(sl) => {
            let du0 = p.phi().psi(s)?;
            Ok(((sl.beta * du0 - sl.left) / sl.alpha, s))
        }
    }
}

fn right_target(bc: &BoundaryConditions) -> f64 {
    match bc {
        BoundaryConditions::Dirichlet(d) => d.right,
        BoundaryConditions::SturmLiouville(sl) => sl.right,
    }
}

/// Defect in the right boundary condition for a completed trajectory.
fn mismatch(p: &ProblemInstance, shot: &Shot) -> Result<f64, Error> {
    match p.bc() {
        BoundaryConditions::Dirichlet(d) => Ok(shot.u_end - d.right),
        BoundaryConditions::SturmLiouville(sl) => {
            Ok(sl.a * shot.u_end + sl.b * p.phi().psi(shot.w_end)? - sl.right)
        }
    }
}

/// Classical fourth-order integration with 4 substeps per grid interval;
/// every fourth state lands on the problem grid.
fn shoot(p: &ProblemInstance, lambda: f64, s: f64) -> Result<Shot, Error> {
    let n = p.grid_n();
    let steps = 4 * n;
    let h = 1.0 / steps as f64;
    let phi = p.phi();
    let (mut u, mut w) = initial_state(p, s)?;
    let mut u_nodes = Vec::with_capacity(n + 1);
    let mut du_nodes = Vec::with_capacity(n + 1);
    u_nodes.push(u);
    du_nodes.push(phi.psi(w)?);
    let deriv = |t: f64, u: f64, w: f64| -> Result<(f64, f64), Error> {
        let du = phi.psi(w)?;
        Ok((du, lambda * p.eval_f(t, u, du)?))
    };
    for k in 0..steps {
        let t = k as f64 * h;
        let (k1u, k1w) = deriv(t, u, w)?;
        let (k2u, k2w) = deriv(t + 0.5 * h, u + 0.5 * h * k1u, w + 0.5 * h * k1w)?;
        let (k3u, k3w) = deriv(t + 0.5 * h, u + 0.5 * h * k2u, w + 0.5 * h * k2w)?;
        let (k4u, k4w) = deriv(t + h, u + h * k3u, w + h * k3w)?;
        u += h / 6.0 * (k1u + 2.0 * (k2u + k3u) + k4u);
        w += h / 6.0 * (k1w + 2.0 * (k2w + k3w) + k4w);
        if !(u.is_finite() && w.is_finite()) {
            return Err(Error::NonFinite {
                context: "shooting trajectory",
            });
        }
        if (k + 1) % 4 == 0 {
            u_nodes.push(u);
            du_nodes.push(phi.psi(w)?);
        }
    }
    Ok(Shot {
        u_nodes,
        du_nodes,
        u_end: u,
        w_end: w,
    })
}

/// A shot that left the domain of f or blew up carries no sign
/// information; the bracket search routes around it.
fn shot_is_invalid(e: &Error) -> bool {
    matches!(e, Error::Domain(_) | Error::NonFinite { .. })
}

/// Solve the boundary value problem by shooting on the initial flux.
pub fn shooting_solve(p: &ProblemInstance, lambda: f64) -> Result<ShootingResult, Error> {
    let eval = |s: f64| -> Result<f64, Error> { mismatch(p, &shoot(p, lambda, s)?) };
    let r0 = apriori::r0_bound(p);
    let w0 = p.phi().phi_prime(2.0 * r0 + 1.0).max(1.0);
    let tol = SHOOTING_TOLERANCE * right_target(p.bc()).abs().max(1.0);

    // Pull an endpoint toward 0 (where the trajectory is tame) until the
    // shot completes.
    let probe = |mut s: f64| -> Result<(f64, f64), Error> {
        let mut last = None;
        for _ in 0..MAX_BRACKET_DOUBLINGS {
            match eval(s) {
                Ok(f) => return Ok((s, f)),
                Err(e) if shot_is_invalid(&e) => {
                    last = Some(e);
                    s *= 0.5;
                }
                Err(e) => return Err(e),
            }
        }
        Err(last.unwrap_or(Error::NoBracket { lo: -w0, hi: w0 }))
    };
    let (mut lo, mut f_lo) = probe(-w0)?;
    let (mut hi, mut f_hi) = probe(w0)?;

    let mut doublings = 0;
    while f_lo != 0.0 && f_hi != 0.0 && f_lo.signum() == f_hi.signum() {
        if doublings >= MAX_BRACKET_DOUBLINGS {
            return Err(Error::NoBracket { lo, hi });
        }
        doublings += 1;
        // The mismatch grows with the initial flux for admissible data, so
        // expand away from the shared sign.
        if f_lo > 0.0 {
            let cand = lo * 2.0;
            match eval(cand) {
                Ok(f) => {
                    lo = cand;
                    f_lo = f;
                }
                Err(e) if shot_is_invalid(&e) => return Err(Error::NoBracket { lo, hi }),
                Err(e) => return Err(e),
            }
        } else {
            let cand = hi * 2.0;
            match eval(cand) {
                Ok(f) => {
                    hi = cand;
                    f_hi = f;
                }
                Err(e) if shot_is_invalid(&e) => return Err(Error::NoBracket { lo, hi }),
                Err(e) => return Err(e),
            }
        }
    }

    let (mut a, mut fa, mut b, mut fb) = (lo, f_lo, hi, f_hi);
    let mut best = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..MAX_BISECTIONS {
        if best.1.abs() <= 0.125 * tol
            || (b - a).abs() <= 1e-15 * a.abs().max(b.abs()).max(1.0)
        {
            break;
        }
        let mut mid = 0.5 * (a + b);
        let mut f_mid = None;
        for _ in 0..8 {
            match eval(mid) {
                Ok(f) => {
                    f_mid = Some(f);
                    break;
                }
                Err(e) if shot_is_invalid(&e) => mid = 0.5 * (a + mid),
                Err(e) => return Err(e),
            }
        }
        let f_mid = match f_mid {
            Some(f) => f,
            None => {
                return Err(Error::NonFinite {
                    context: "shooting bisection",
                })
            }
        };
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        if f_mid == 0.0 {
            break;
        }
        if (f_mid > 0.0) == (fa > 0.0) {
            a = mid;
            fa = f_mid;
        } else {
            b = mid;
            fb = f_mid;
        }
    }

    // Secant polish inside the final bracket.
    let (mut s0, mut f0, mut s1, mut f1) = (a, fa, b, fb);
    for _ in 0..10 {
        if best.1.abs() <= 0.125 * tol {
            break;
        }
        let denom = f1 - f0;
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let s2 = s1 - f1 * (s1 - s0) / denom;
        if !s2.is_finite() || s2 < a.min(b) || s2 > a.max(b) {
            break;
        }
        match eval(s2) {
            Ok(f2) => {
                if f2.abs() < best.1.abs() {
                    best = (s2, f2);
                }
                s0 = s1;
                f0 = f1;
                s1 = s2;
                f1 = f2;
            }
            Err(e) if shot_is_invalid(&e) => break,
            Err(e) => return Err(e),
        }
    }

    if best.1.abs() > tol {
        return Err(Error::IterationCap {
            context: "shooting refinement",
            max_doublings: MAX_BISECTIONS as u32,
        });
    }
    let shot = shoot(p, lambda, best.0)?;
    let bc_residual = mismatch(p, &shot)?.abs();
    let u = C1GridFunction::new(
        GridFunction::new(shot.u_nodes)?,
        GridFunction::new(shot.du_nodes)?,
    )?;
    Ok(ShootingResult {
        u,
        free_param: best.0,
        bc_residual,
        rk4_steps: 4 * p.grid_n(),
    })
}

/// Sup distances (value channel, derivative channel) between two pairs.
pub fn compare(a: &C1GridFunction, b: &C1GridFunction) -> Result<(f64, f64), Error> {
    Ok((a.u.max_abs_diff(&b.u)?, a.du.max_abs_diff(&b.du)?))
}

/// Closed-form solution profiles for manufactured problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// u = t.
    Linear,
    /// u = t²/2; the derivative vanishes at t = 0 only.
    Quadratic,
    /// u = t⁴ − 2t³ + t; interior critical points.
    Quartic,
    /// u = sin(kπt); interior critical points.
    Sine { k: u32 },
    /// u = sinh(t)/sinh(1); the derivative never vanishes.
    SinhScaled,
}

impl Profile {
    pub fn u(&self, t: f64) -> f64 {
        match *self {
            Profile::Linear => t,
            Profile::Quadratic => t * t / 2.0,
            Profile::Quartic => t.powf(4.0) - 2.0 * t.powf(3.0) + t,
            Profile::Sine { k } => (k as f64 * std::f64::consts::PI * t).sin(),
            Profile::SinhScaled => {
                (t.exp() - (-t).exp()) / (2.0 * 1.0f64.sinh())
            }
        }
    }

    pub fn du(&self, t: f64) -> f64 {
        match *self {
            Profile::Linear => 1.0,
            Profile::Quadratic => t,
            Profile::Quartic => 4.0 * t.powf(3.0) - 6.0 * t.powf(2.0) + 1.0,
            Profile::Sine { k } => {
                let a = k as f64 * std::f64::consts::PI;
                a * (a * t).cos()
            }
            Profile::SinhScaled => {
                (t.exp() + (-t).exp()) / (2.0 * 1.0f64.sinh())
            }
        }
    }

    pub fn ddu(&self, t: f64) -> f64 {
        match *self {
            Profile::Linear => 0.0,
            Profile::Quadratic => 1.0,
            Profile::Quartic => 12.0 * t.powf(2.0) - 12.0 * t,
            Profile::Sine { k } => {
                let a = k as f64 * std::f64::consts::PI;
                -(a * a) * (a * t).sin()
            }
            Profile::SinhScaled => self.u(t),
        }
    }

    /// Expression sources (u, u̇, ü) in the variable t, chosen so that
    /// evaluation reproduces the closures bit for bit where possible.
    fn sources(&self) -> (String, String, String) {
        match *self {
            Profile::Linear => ("t".into(), "1".into(), "0".into()),
            Profile::Quadratic => ("t*t/2".into(), "t".into(), "1".into()),
            Profile::Quartic => (
                "t^4 - 2*t^3 + t".into(),
                "4*t^3 - 6*t^2 + 1".into(),
                "12*t^2 - 12*t".into(),
            ),
            Profile::Sine { k } => {
                let a = k as f64 * std::f64::consts::PI;
                let a2 = a * a;
                (
                    format!("sin({a}*t)"),
                    format!("{a}*cos({a}*t)"),
                    format!("-{a2}*sin({a}*t)"),
                )
            }
            Profile::SinhScaled => {
                let d = 2.0 * 1.0f64.sinh();
                (
                    format!("(exp(t) - exp(-t)) / {d}"),
                    format!("(exp(t) + exp(-t)) / {d}"),
                    format!("(exp(t) - exp(-t)) / {d}"),
                )
            }
        }
    }

    /// Whether the derivative keeps one sign on (0, 1]; exponents below 2
    /// produce non-integrable right-hand sides at interior critical points,
    /// so those profiles are reserved for the quadratic potential.
    fn derivative_positive_inside(&self) -> bool {
        matches!(
            self,
            Profile::Linear | Profile::Quadratic | Profile::SinhScaled
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Dirichlet,
    SturmLiouville,
}

/// A problem built around a known solution, with the boundary data and
/// growth constants derived from the profile.
#[derive(Debug, Clone)]
pub struct Manufactured {
    pub problem: ProblemInstance,
    pub exact: C1GridFunction,
    pub f_source: String,
    /// True when the right-hand side needed the one-sided stencil at t = 0
    /// (profile derivative vanishing there with an exponent below 2).
    pub singular_endpoint: bool,
}

/// φ'(u̇(t))·ü(t) as an expression in t. For exponents below 2 combined
/// with the quadratic profile the factor |u̇|^{p−2} = t^{p−2} blows up at
/// t = 0; the node value there is replaced by the stencil
/// |t + (1 − sign t)·κ|^{p−2} with κ chosen so the first trapezoid panel
/// integrates t^{p−2} exactly.
fn g_source(phi: &PhiModel, profile: Profile, n: usize, du_src: &str, ddu_src: &str) -> String {
    let spec = phi.spec();
    let mut terms: Vec<String> = Vec::new();
    for (&p, &w) in spec.exponents().iter().zip(spec.weights()) {
        if ddu_src == "0" {
            continue;
        }
        let c = w * p * (p - 1.0);
        let pm2 = p - 2.0;
        let term = if pm2 == 0.0 {
            if ddu_src == "1" {
                format!("{c}")
            } else {
                format!("{c}*({ddu_src})")
            }
        } else {
            let base = if profile == Profile::Quadratic {
                let kappa = ((3.0 - p) / (p - 1.0)).powf(1.0 / pm2) / n as f64;
                format!("abs(t + (1 - sign(t))*{kappa})")
            } else {
                format!("abs({du_src})")
            };
            if ddu_src == "1" {
                format!("{c}*{base}^({pm2})")
            } else {
                format!("{c}*{base}^({pm2})*({ddu_src})")
            }
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Build a problem whose solution is the given profile: the right-hand
/// side is φ'(u̇)·ü + (x − u), boundary data is read off the profile, and
/// the growth constants come from sampling t ↦ f(t, 0, 0).
pub fn manufactured_problem(
    phi: &PhiModel,
    profile: Profile,
    bc: BcKind,
    n: usize,
) -> Result<Manufactured, Error> {
    let has_sub_quadratic = phi.spec().exponents().iter().any(|&p| p < 2.0);
    if has_sub_quadratic && !profile.derivative_positive_inside() {
        return Err(Error::invalid(
            "profile",
            format!(
                "{profile:?} has interior critical points, which exponents below 2 cannot absorb"
            ),
        ));
    }
    let (u_src, du_src, ddu_src) = profile.sources();
    let g_src = g_source(phi, profile, n, &du_src, &ddu_src);
    let f_source = if g_src == "0" {
        format!("x - ({u_src})")
    } else {
        format!("{g_src} + (x - ({u_src}))")
    };
    let f_expr = expr::parse(&f_source)
        .map_err(|e| Error::invalid("f.expr", format!("manufactured source failed to parse: {e}")))?;

    let samples = 4 * n;
    let mut worst = 0.0f64;
    for i in 0..=samples {
        let t = i as f64 / samples as f64;
        let val = f_expr.eval(t, 0.0, 0.0)?;
        worst = worst.max(val.abs());
    }
    let r = 1.0 + worst;

    let (bc_obj, r0) = match bc {
        BcKind::Dirichlet => {
            let left = profile.u(0.0);
            let right = profile.u(1.0);
            (
                BoundaryConditions::dirichlet(left, right)?,
                r.max(left.abs()).max(right.abs()),
            )
        }
        BcKind::SturmLiouville => {
            let left = -profile.u(0.0) + profile.du(0.0);
            let right = profile.u(1.0) + profile.du(1.0);
            (
                BoundaryConditions::sturm_liouville(1.0, 1.0, left, 1.0, 1.0, right)?,
                r.max(left.abs()).max(right.abs()),
            )
        }
    };
    let t0 = (r - 1.0) + r0;
    let f = RhsFunction::from_source(&f_source, r, 0.0, t0)?;
    let problem = ProblemInstance::new(phi.clone(), bc_obj, f, n)?;
    let exact = C1GridFunction::new(
        GridFunction::from_fn(n, |t| profile.u(t)),
        GridFunction::from_fn(n, |t| profile.du(t)),
    )?;
    Ok(Manufactured {
        problem,
        exact,
        f_source,
        singular_endpoint: has_sub_quadratic && profile == Profile::Quadratic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::PhiSpec;
    use crate::solver;

    fn quad() -> PhiModel {
        PhiModel::new(PhiSpec::power_sum_default_weights(vec![2.0]).unwrap())
    }

    fn sinh_problem(n: usize) -> ProblemInstance {
        ProblemInstance::new(
            quad(),
            BoundaryConditions::dirichlet(0.0, 1.0).unwrap(),
            RhsFunction::from_source("x", 1.0, 0.0, 1.0).unwrap(),
            n,
        )
        .unwrap()
    }

    #[test]
    fn sinh_free_parameter_and_profile() {
        let p = sinh_problem(200);
        let shot = shooting_solve(&p, 1.0).unwrap();
        // u̇(0) = 1/sinh(1) and w(0) = φ(u̇(0)) = u̇(0) for Φ = x²/2.
        let expect = 1.0 / 1.0f64.sinh();
        assert!(
            (shot.free_param - expect).abs() <= 1e-8,
            "free param {} vs {expect}",
            shot.free_param
        );
        assert!(shot.bc_residual <= 1e-9);
        assert_eq!(shot.rk4_steps, 800);
        let s1 = 1.0f64.sinh();
        let exact = C1GridFunction::new(
            GridFunction::from_fn(200, |t| t.sinh() / s1),
            GridFunction::from_fn(200, |t| t.cosh() / s1),
        )
        .unwrap();
        let (du_err, ddu_err) = compare(&shot.u, &exact).unwrap();
        assert!(du_err <= 1e-8 && ddu_err <= 1e-8, "{du_err} {ddu_err}");
    }

    #[test]
    fn zero_load_shots_are_affine() {
        let p = ProblemInstance::new(
            quad(),
            BoundaryConditions::dirichlet(-0.3, 0.9).unwrap(),
            RhsFunction::from_source("0", 1.0, 0.0, 0.0).unwrap(),
            64,
        )
        .unwrap();
        let shot = shooting_solve(&p, 1.0).unwrap();
        let exact = GridFunction::from_fn(64, |t| -0.3 + 1.2 * t);
        // The root solve stops at its residual tolerance, which carries
        // straight into the trajectory here.
        assert!(shot.u.u.max_abs_diff(&exact).unwrap() <= 1e-9);

        // −2u(0) + u̇(0) = 2, u(1) + u̇(1) = 4 forces u = 2t.
        let p = ProblemInstance::new(
            quad(),
            BoundaryConditions::sturm_liouville(2.0, 1.0, 2.0, 1.0, 1.0, 4.0).unwrap(),
            RhsFunction::from_source("0", 1.0, 0.0, 0.0).unwrap(),
            64,
        )
        .unwrap();
        let shot = shooting_solve(&p, 1.0).unwrap();
        let exact = GridFunction::from_fn(64, |t| 2.0 * t);
        assert!(shot.u.u.max_abs_diff(&exact).unwrap() <= 1e-9);
    }

    #[test]
    fn integrator_is_fourth_order() {
        // Fixed initial flux, no root solve: halving the step size must
        // shrink the terminal error by about 2⁴.
        let s = 1.0 / 1.0f64.sinh();
        let err = |n: usize| {
            let p = sinh_problem(n);
            let shot = shoot(&p, 1.0, s).unwrap();
            (shot.u_end - 1.0).abs()
        };
        let coarse = err(16);
        let fine = err(32);
        let ratio = coarse / fine;
        assert!(
            (12.0..=20.0).contains(&ratio),
            "ratio {ratio} (coarse {coarse}, fine {fine})"
        );
    }

    #[test]
    fn profile_sources_match_closures() {
        let profiles = [
            Profile::Linear,
            Profile::Quadratic,
            Profile::Quartic,
            Profile::Sine { k: 1 },
            Profile::Sine { k: 2 },
            Profile::SinhScaled,
        ];
        for profile in profiles {
            let (u_src, du_src, ddu_src) = profile.sources();
            let parsed = [
                expr::parse(&u_src).unwrap(),
                expr::parse(&du_src).unwrap(),
                expr::parse(&ddu_src).unwrap(),
            ];
            for i in 0..=40 {
                let t = i as f64 / 40.0;
                let want = [profile.u(t), profile.du(t), profile.ddu(t)];
                for (e, w) in parsed.iter().zip(want) {
                    let got = e.eval(t, 0.0, 0.0).unwrap();
                    assert!(
                        (got - w).abs() <= 1e-12 * w.abs().max(1.0),
                        "{profile:?} at t = {t}: {got} vs {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn manufactured_smooth_problem_checks_out() {
        let m = manufactured_problem(&quad(), Profile::Quartic, BcKind::Dirichlet, 100).unwrap();
        assert!(!m.singular_endpoint);
        // The profile satisfies the discrete relation to second order.
        let res100 = solver::strong_residual(&m.problem, &m.exact, 1.0).unwrap();
        assert!(res100 <= 5e-4, "residual {res100}");
        let m200 = manufactured_problem(&quad(), Profile::Quartic, BcKind::Dirichlet, 200).unwrap();
        let res200 = solver::strong_residual(&m200.problem, &m200.exact, 1.0).unwrap();
        let ratio = res100 / res200;
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
        // Structural checks apply as for any admissible problem.
        assert!(m.problem.check_sign_condition(32, 8).unwrap().passed);
        let r0 = apriori::r0_bound(&m.problem);
        assert!(m
            .problem
            .estimate_growth_constants(r0, 4096)
            .unwrap()
            .passed());
    }

    #[test]
    fn manufactured_singular_quadratic_stencil() {
        let phi = PhiModel::new(PhiSpec::power_sum_default_weights(vec![1.5]).unwrap());
        let n = 400;
        let m = manufactured_problem(&phi, Profile::Quadratic, BcKind::Dirichlet, n).unwrap();
        assert!(m.singular_endpoint);
        // Stencil node value: w·p·(3 − p)·h^{p−2} = 30 at h = 1/400.
        let f0 = m.problem.eval_f(0.0, 0.0, 0.0).unwrap();
        assert!((f0 - 30.0).abs() <= 1e-9, "f(0,0,0) = {f0}");
        assert!((m.problem.f().r() - 31.0).abs() <= 1e-9);
        // First trapezoid panel of the singular factor is exact:
        // ∫₀^h w·p·(p−1)·t^{p−2} dt = √h for p = 3/2 and default weight.
        let h = 1.0 / n as f64;
        let g = |t: f64| m.problem.eval_f(t, 0.0, 0.0).unwrap() + Profile::Quadratic.u(t);
        let panel = 0.5 * h * (g(0.0) + g(h));
        assert!((panel - h.sqrt()).abs() <= 1e-12, "panel {panel}");
    }

    #[test]
    fn sub_quadratic_exponents_reject_oscillatory_profiles() {
        let phi = PhiModel::new(PhiSpec::power_sum_default_weights(vec![1.5]).unwrap());
        for profile in [Profile::Quartic, Profile::Sine { k: 1 }] {
            let err = manufactured_problem(&phi, profile, BcKind::Dirichlet, 64).unwrap_err();
            match err {
                Error::InvalidProblem { path, .. } => assert_eq!(path, "profile"),
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn manufactured_sturm_liouville_agrees_with_shooting() {
        let m =
            manufactured_problem(&quad(), Profile::SinhScaled, BcKind::SturmLiouville, 64)
                .unwrap();
        match m.problem.bc() {
            BoundaryConditions::SturmLiouville(sl) => {
                let want_left = -Profile::SinhScaled.u(0.0) + Profile::SinhScaled.du(0.0);
                assert_eq!(sl.left, want_left);
            }
            _ => panic!("wrong family"),
        }
        let shot = shooting_solve(&m.problem, 1.0).unwrap();
        let (u_err, du_err) = compare(&shot.u, &m.exact).unwrap();
        assert!(u_err <= 1e-6 && du_err <= 1e-6, "{u_err} {du_err}");
    }

    #[test]
    fn compare_requires_matching_grids() {
        let a = C1GridFunction::new(GridFunction::zeros(16), GridFunction::zeros(16)).unwrap();
        let b = C1GridFunction::new(GridFunction::zeros(32), GridFunction::zeros(32)).unwrap();
        assert!(matches!(
            compare(&a, &b),
            Err(Error::GridMismatch { left: 16, right: 32 })
        ));
    }
}
