//! Two-point boundary value problems of Φ-Laplacian type on [0, 1]:
//! (φ(u̇))˙ = f(t, u, u̇) with Dirichlet or Sturm-Liouville boundary data,
//! where φ is the derivative of a power-sum potential Φ.
//!
//! The crate centers on a fixed-point reformulation: the solution operator
//! of the quadrature problem (integrate, invert φ, integrate again, fix
//! the two free constants from the boundary data) composed with evaluation
//! of the right-hand side. [`solver::solve`] damps that composition and
//! marches a load factor λ from 0 to 1. Around it sit
//!
//! * [`phi`]: the potential family, its inverse derivative ψ, and checks
//!   of the structural assumptions the method rests on;
//! * [`expr`]: a small expression language for right-hand sides in the
//!   variables t, x (value) and v (derivative);
//! * [`problem`]: validated problem instances plus sampling-based checks
//!   of the sign condition and growth bound;
//! * [`apriori`]: computable radii certifying where solutions must live,
//!   and certification of computed solutions against them;
//! * [`oracle`]: an independent shooting solver and manufactured problems
//!   with closed-form solutions, for cross-checking.
//!
//! Everything is deterministic: same inputs, same bits out.

pub mod apriori;
pub mod error;
pub mod expr;
pub mod grid;
pub mod operator;
pub mod oracle;
pub mod phi;
pub mod problem;
mod roots;
pub mod solver;

pub use apriori::{certify, r0_bound, r1_bound, BoundBranch, BoundCertificate, CertReport};
pub use error::Error;
pub use expr::{parse, DomainError, Expr, ParseError};
pub use grid::{C1GridFunction, GridFunction};
pub use operator::{apply_k, solve_constants, ConstantsSolution, CONSTANTS_TOLERANCE};
pub use phi::{AssumptionReport, PhiFamily, PhiModel, PhiSpec};
pub use problem::{
    BoundaryConditions, DirichletBc, GrowthCheck, ProblemInstance, RhsFunction,
    SignConditionCheck, SturmLiouvilleBc,
};
pub use solver::{solve, strong_residual, Solution, SolverConfig};
