//! The integral solution operator and its boundary constants.
//!
//! For nodal data v the operator builds
//!
//!   K̂(v, c₁, c₂)(t) = c₁ + ∫₀ᵗ ψ(∫₀^τ v ds + c₂) dτ
//!
//! with both integrals the cumulative trapezoid rule, so the derivative
//! channel is du(t_j) = ψ(V(t_j) + c₂) with V = cumtrapz(v). Since ψ is
//! applied nodewise, φ(du_j) = V_j + c₂ to inversion tolerance; differencing
//! that identity is what makes K a discrete left inverse of the
//! φ-Laplacian.
//!
//! The constants (c₁, c₂) are pinned by the boundary family. For Dirichlet
//! data c₁ = A and c₂ solves G₁(v, c) = B; for Sturm–Liouville data c₂
//! solves G₂(v, c) = B and c₁ = −A/α + (β/α)ψ(c₂). Both G maps are strictly
//! increasing in c (ψ is strictly increasing), which is why an expanding
//! bracket plus bisection is enough.

use crate::error::Error;
use crate::grid::{C1GridFunction, GridFunction};
use crate::phi::PhiModel;
use crate::problem::{BoundaryConditions, SturmLiouvilleBc};
use crate::roots;

/// Absolute tolerance on |G(v, c) − target| for the constants solve.
pub const CONSTANTS_TOLERANCE: f64 = 1e-12;

/// Boundary constants for one application of the operator.
#[derive(Debug, Clone, Copy)]
pub struct ConstantsSolution {
    pub c1: f64,
    pub c2: f64,
    /// |G(v, c2) − target| at acceptance.
    pub residual: f64,
    pub iterations: u32,
}

fn slope_values(phi: &PhiModel, v_cum: &GridFunction, c2: f64) -> Result<GridFunction, Error> {
    let mut out = Vec::with_capacity(v_cum.values().len());
    for &vj in v_cum.values() {
        out.push(phi.psi(vj + c2)?);
    }
    GridFunction::new(out)
}

/// K̂ with explicit constants.
pub fn khat(
    phi: &PhiModel,
    v: &GridFunction,
    c1: f64,
    c2: f64,
) -> Result<C1GridFunction, Error> {
    let v_cum = v.cumtrapz();
    let du = slope_values(phi, &v_cum, c2)?;
    let u = du.cumtrapz().shift(c1);
    C1GridFunction::new(u, du)
}

/// Dirichlet boundary map: A + ∫₀¹ ψ(V(τ) + c) dτ, strictly increasing
/// in c.
pub fn g_dirichlet(phi: &PhiModel, v: &GridFunction, a_left: f64, c: f64) -> Result<f64, Error> {
    let v_cum = v.cumtrapz();
    let du = slope_values(phi, &v_cum, c)?;
    Ok(a_left + du.cumtrapz().last())
}

/// Sturm–Liouville boundary map:
/// a·[−A/α + (β/α)ψ(c) + ∫₀¹ ψ(V(τ) + c) dτ] + b·ψ(V(1) + c).
pub fn g_sturm_liouville(
    phi: &PhiModel,
    v: &GridFunction,
    bc: &SturmLiouvilleBc,
    c: f64,
) -> Result<f64, Error> {
    let v_cum = v.cumtrapz();
    let du = slope_values(phi, &v_cum, c)?;
    let integral = du.cumtrapz().last();
    let psi_c = phi.psi(c)?;
    let u0 = -bc.left / bc.alpha + bc.beta / bc.alpha * psi_c;
    Ok(bc.a * (u0 + integral) + bc.b * du.last())
}

/// Solve the boundary equations for (c₁, c₂).
/// When ψ itself is bisected (multi-term potentials), its tolerance must
/// sit well under the constants tolerance or G becomes a staircase whose
/// steps the outer root solve cannot resolve.
fn tightened(phi: &PhiModel) -> PhiModel {
    phi.with_psi_tolerance((CONSTANTS_TOLERANCE * 1e-2).min(phi.psi_tolerance()))
}

pub fn solve_constants(
    phi: &PhiModel,
    v: &GridFunction,
    bc: &BoundaryConditions,
) -> Result<ConstantsSolution, Error> {
    let phi = tightened(phi);
    match bc {
        BoundaryConditions::Dirichlet(d) => {
            let root = roots::solve_increasing(
                "Dirichlet boundary constant",
                |c| g_dirichlet(&phi, v, d.left, c),
                d.right,
                CONSTANTS_TOLERANCE,
                f64::INFINITY,
            )?;
            Ok(ConstantsSolution {
                c1: d.left,
                c2: root.x,
                residual: root.residual,
                iterations: root.iterations,
            })
        }
        BoundaryConditions::SturmLiouville(sl) => {
            let root = roots::solve_increasing(
                "Sturm-Liouville boundary constant",
                |c| g_sturm_liouville(&phi, v, sl, c),
                sl.right,
                CONSTANTS_TOLERANCE,
                f64::INFINITY,
            )?;
            let c1 = -sl.left / sl.alpha + sl.beta / sl.alpha * phi.psi(root.x)?;
            Ok(ConstantsSolution {
                c1,
                c2: root.x,
                residual: root.residual,
                iterations: root.iterations,
            })
        }
    }
}

/// The full operator K: solve the constants, then apply K̂. The result
/// satisfies the boundary conditions to within 10× the constants tolerance.
pub fn apply_k(
    phi: &PhiModel,
    v: &GridFunction,
    bc: &BoundaryConditions,
) -> Result<C1GridFunction, Error> {
    let constants = solve_constants(phi, v, bc)?;
    khat(&tightened(phi), v, constants.c1, constants.c2)
}

/// Residuals of the two boundary conditions for a computed pair.
pub fn bc_residuals(u: &C1GridFunction, bc: &BoundaryConditions) -> (f64, f64) {
    match bc {
        BoundaryConditions::Dirichlet(d) => (
            (u.u.first() - d.left).abs(),
            (u.u.last() - d.right).abs(),
        ),
        BoundaryConditions::SturmLiouville(sl) => (
            (-sl.alpha * u.u.first() + sl.beta * u.du.first() - sl.left).abs(),
            (sl.a * u.u.last() + sl.b * u.du.last() - sl.right).abs(),
        ),
    }
}
