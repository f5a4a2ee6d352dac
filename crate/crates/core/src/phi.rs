//! The Φ side of the quasilinear operator: power-sum potentials, their
//! derivative φ, the inverse ψ, and the sampled structure checks.
//!
//! A power-sum potential is Φ(x) = Σᵢ wᵢ|x|^{pᵢ} with exponents in (1, 2]
//! and positive weights (default wᵢ = 1/pᵢ). Then φ = Φ' is an odd,
//! strictly increasing homeomorphism of ℝ and k_Φ = minᵢ pᵢ witnesses the
//! lower bound k_Φ·Φ(x) ≤ φ(x)·x, the ∇₂-type condition everything else
//! leans on: termwise, wᵢpᵢ|x|^{pᵢ} ≥ k_Φ·wᵢ|x|^{pᵢ}.

use serde::Serialize;

use crate::error::Error;
use crate::roots;

pub const DEFAULT_PSI_TOLERANCE: f64 = 1e-12;

/// Potential families. Only power sums for now; the enum keeps the door
/// open without committing callers to a concrete shape.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiFamily {
    PowerSum {
        exponents: Vec<f64>,
        weights: Vec<f64>,
    },
}

/// Validated description of a potential.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSpec {
    family: PhiFamily,
}

impl PhiSpec {
    /// Power sum with explicit weights. Exponents must lie in (1, 2] and
    /// weights must be positive.
    pub fn power_sum(exponents: Vec<f64>, weights: Vec<f64>) -> Result<Self, Error> {
        if exponents.is_empty() {
            return Err(Error::invalid("phi.exponents", "must not be empty"));
        }
        if exponents.len() != weights.len() {
            return Err(Error::invalid(
                "phi.weights",
                format!(
                    "expected {} weights to match the exponents, got {}",
                    exponents.len(),
                    weights.len()
                ),
            ));
        }
        for (i, p) in exponents.iter().enumerate() {
            if !p.is_finite() || *p <= 1.0 || *p > 2.0 {
                return Err(Error::invalid(
                    format!("phi.exponents[{i}]"),
                    format!("exponent must satisfy 1 < p <= 2, got {p}"),
                ));
            }
        }
        for (i, w) in weights.iter().enumerate() {
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::invalid(
                    format!("phi.weights[{i}]"),
                    format!("weight must be positive and finite, got {w}"),
                ));
            }
        }
        Ok(PhiSpec {
            family: PhiFamily::PowerSum { exponents, weights },
        })
    }

    /// Power sum with the canonical weights wᵢ = 1/pᵢ, i.e.
    /// Φ(x) = Σ |x|^{pᵢ}/pᵢ.
    pub fn power_sum_default_weights(exponents: Vec<f64>) -> Result<Self, Error> {
        let weights = exponents.iter().map(|p| 1.0 / p).collect();
        PhiSpec::power_sum(exponents, weights)
    }

    pub fn exponents(&self) -> &[f64] {
        match &self.family {
            PhiFamily::PowerSum { exponents, .. } => exponents,
        }
    }

    pub fn weights(&self) -> &[f64] {
        match &self.family {
            PhiFamily::PowerSum { weights, .. } => weights,
        }
    }

    /// Sharpest valid ∇₂ constant for this family: the smallest exponent.
    pub fn k_phi(&self) -> f64 {
        self.exponents()
            .iter()
            .fold(f64::INFINITY, |m, p| m.min(*p))
    }
}

/// A potential together with its ∇₂ constant and the inversion tolerance.
///
/// `with_k_phi` admits a caller-supplied constant so that an overstated one
/// can be caught by [`PhiModel::check_assumptions`] rather than silently
/// accepted.
#[derive(Debug, Clone)]
pub struct PhiModel {
    spec: PhiSpec,
    k_phi: f64,
    psi_tolerance: f64,
}

impl PhiModel {
    pub fn new(spec: PhiSpec) -> Self {
        let k_phi = spec.k_phi();
        PhiModel {
            spec,
            k_phi,
            psi_tolerance: DEFAULT_PSI_TOLERANCE,
        }
    }

    pub fn with_k_phi(spec: PhiSpec, k_phi: f64) -> Result<Self, Error> {
        if !k_phi.is_finite() || k_phi <= 1.0 {
            return Err(Error::invalid(
                "phi.k_phi",
                format!("k_phi must be finite and > 1, got {k_phi}"),
            ));
        }
        Ok(PhiModel {
            spec,
            k_phi,
            psi_tolerance: DEFAULT_PSI_TOLERANCE,
        })
    }

    pub fn spec(&self) -> &PhiSpec {
        &self.spec
    }

    pub fn k_phi(&self) -> f64 {
        self.k_phi
    }

    pub fn psi_tolerance(&self) -> f64 {
        self.psi_tolerance
    }

    /// Same potential, different inverse-map tolerance. Callers that stack
    /// a root solve on top of ψ need the inner tolerance well below their
    /// own target, or the bisected ψ turns their objective into a
    /// staircase at the target scale.
    pub(crate) fn with_psi_tolerance(&self, tol: f64) -> PhiModel {
        debug_assert!(tol.is_finite() && tol > 0.0);
        PhiModel {
            spec: self.spec.clone(),
            k_phi: self.k_phi,
            psi_tolerance: tol,
        }
    }

    /// Φ(x) = Σ wᵢ|x|^{pᵢ}.
    pub fn phi(&self, x: f64) -> f64 {
        let a = x.abs();
        self.spec
            .exponents()
            .iter()
            .zip(self.spec.weights())
            .map(|(p, w)| w * a.powf(*p))
            .sum()
    }

    /// φ(x) = Φ'(x) = Σ wᵢpᵢ|x|^{pᵢ−1}·sign(x).
    pub fn phi_prime(&self, x: f64) -> f64 {
        let a = x.abs();
        let s: f64 = self
            .spec
            .exponents()
            .iter()
            .zip(self.spec.weights())
            .map(|(p, w)| w * p * a.powf(p - 1.0))
            .sum();
        s * x.signum()
    }

    /// ψ = φ⁻¹. Closed form for a single term, otherwise bisection with an
    /// expanding bracket; the result satisfies both
    /// |φ(ψ(w)) − w| ≤ tol·max(1, |w|) and an x-side bracket of the same
    /// relative size, so ψ∘φ is the identity to tolerance even where φ
    /// flattens out.
    pub fn psi(&self, w: f64) -> Result<f64, Error> {
        if w == 0.0 {
            return Ok(0.0);
        }
        let exps = self.spec.exponents();
        if exps.len() == 1 {
            let p = exps[0];
            let c = self.spec.weights()[0] * p;
            return Ok(w.signum() * (w.abs() / c).powf(1.0 / (p - 1.0)));
        }
        let tol = self.psi_tolerance;
        let r = roots::solve_increasing(
            "psi",
            |x| Ok(self.phi_prime(x)),
            w,
            tol * w.abs().max(1.0),
            tol,
        )?;
        Ok(r.x)
    }

    /// Sampled verification of the structural assumptions; `xs` is the
    /// sample set (own both signs and zero for full coverage).
    pub fn check_assumptions(&self, xs: &[f64]) -> AssumptionReport {
        // Zero conditions hold exactly or not at all.
        let zero_worst = self.phi(0.0).abs().max(self.phi_prime(0.0).abs());
        let zero_conditions = CheckOutcome {
            passed: zero_worst == 0.0,
            worst: zero_worst,
            witness: if zero_worst == 0.0 { None } else { Some(0.0) },
        };

        let mut sorted: Vec<f64> = xs.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
        sorted.dedup();

        let mut mono_worst = f64::INFINITY;
        let mut mono_witness = None;
        for w in sorted.windows(2) {
            let gap = self.phi_prime(w[1]) - self.phi_prime(w[0]);
            if gap < mono_worst {
                mono_worst = gap;
                if gap <= 0.0 && mono_witness.is_none() {
                    mono_witness = Some(w[1]);
                }
            }
        }
        let strict_monotonicity = CheckOutcome {
            passed: mono_witness.is_none(),
            worst: mono_worst,
            witness: mono_witness,
        };

        // k_Φ·Φ(x) ≤ φ(x)·x with slack relative to the scale of the bound.
        let mut nabla_worst = f64::INFINITY;
        let mut nabla_witness = None;
        for &x in xs {
            let rhs = self.phi_prime(x) * x;
            let margin = (rhs - self.k_phi * self.phi(x)) / rhs.abs().max(1.0);
            if margin < nabla_worst {
                nabla_worst = margin;
                if margin < -1e-12 && nabla_witness.is_none() {
                    nabla_witness = Some(x);
                }
            }
        }
        let nabla2 = CheckOutcome {
            passed: nabla_witness.is_none(),
            worst: nabla_worst,
            witness: nabla_witness,
        };

        let tol = self.psi_tolerance;
        let mut round_worst = 0.0f64;
        let mut round_witness = None;
        for &x in xs {
            let err = match self.psi(self.phi_prime(x)) {
                Ok(back) => (back - x).abs() / x.abs().max(1.0),
                Err(_) => f64::INFINITY,
            };
            if err > round_worst {
                round_worst = err;
                if err > tol && round_witness.is_none() {
                    round_witness = Some(x);
                }
            }
        }
        let psi_roundtrip = CheckOutcome {
            passed: round_witness.is_none(),
            worst: round_worst,
            witness: round_witness,
        };

        AssumptionReport {
            zero_conditions,
            strict_monotonicity,
            nabla2,
            psi_roundtrip,
            // Superlinear growth Φ(x)/|x| → ∞ holds for every power sum
            // because all exponents exceed 1; recorded rather than sampled.
            superlinear_assumed: true,
        }
    }
}

/// One sampled check: `worst` is the tightest margin (meaning varies by
/// check), `witness` a sample where it failed.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub worst: f64,
    pub witness: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssumptionReport {
    pub zero_conditions: CheckOutcome,
    pub strict_monotonicity: CheckOutcome,
    pub nabla2: CheckOutcome,
    pub psi_roundtrip: CheckOutcome,
    pub superlinear_assumed: bool,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.zero_conditions.passed
            && self.strict_monotonicity.passed
            && self.nabla2.passed
            && self.psi_roundtrip.passed
    }

    /// Path-qualified description of the first failing check, if any.
    pub fn first_failure(&self) -> Option<(&'static str, String)> {
        if !self.zero_conditions.passed {
            return Some((
                "phi",
                format!("zero conditions violated, residual {}", self.zero_conditions.worst),
            ));
        }
        if !self.strict_monotonicity.passed {
            return Some((
                "phi",
                format!(
                    "phi is not strictly increasing near x = {}",
                    self.strict_monotonicity.witness.unwrap_or(f64::NAN)
                ),
            ));
        }
        if !self.nabla2.passed {
            return Some((
                "phi.k_phi",
                format!(
                    "k_phi*Phi(x) <= phi(x)*x fails at x = {} (margin {})",
                    self.nabla2.witness.unwrap_or(f64::NAN),
                    self.nabla2.worst
                ),
            ));
        }
        if !self.psi_roundtrip.passed {
            return Some((
                "phi",
                format!(
                    "psi(phi(x)) misses x at x = {} (scaled error {})",
                    self.psi_roundtrip.witness.unwrap_or(f64::NAN),
                    self.psi_roundtrip.worst
                ),
            ));
        }
        None
    }
}

/// 10³ sample points: 0 and ±500 log-spaced magnitudes in [10⁻³, 10³].
pub fn default_sample_points() -> Vec<f64> {
    let mut xs = Vec::with_capacity(1001);
    xs.push(0.0);
    let m = 500;
    for i in 0..m {
        let e = -3.0 + 6.0 * i as f64 / (m - 1) as f64;
        let mag = 10f64.powf(e);
        xs.push(mag);
        xs.push(-mag);
    }
    xs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term() -> PhiModel {
        PhiModel::new(PhiSpec::power_sum_default_weights(vec![2.0, 1.5]).unwrap())
    }

    #[test]
    fn spec_validation() {
        assert!(PhiSpec::power_sum_default_weights(vec![]).is_err());
        assert!(PhiSpec::power_sum_default_weights(vec![1.0]).is_err());
        assert!(PhiSpec::power_sum_default_weights(vec![2.1]).is_err());
        assert!(PhiSpec::power_sum(vec![2.0], vec![0.0]).is_err());
        assert!(PhiSpec::power_sum(vec![2.0], vec![1.0, 1.0]).is_err());
        let err = PhiSpec::power_sum_default_weights(vec![2.0, 3.0]).unwrap_err();
        assert!(format!("{err}").contains("phi.exponents[1]"));
    }

    #[test]
    fn phi_value_examples() {
        let m = two_term();
        // |4|²/2 + |4|^{1.5}/1.5 = 8 + 8/1.5
        let expect = 8.0 + 8.0 / 1.5;
        assert!((m.phi(4.0) - expect).abs() < 1e-12);
        assert_eq!(m.phi(0.0), 0.0);
        assert_eq!(m.phi(-4.0), m.phi(4.0));
    }

    #[test]
    fn phi_prime_examples() {
        let m = two_term();
        // 4 + |4|^{0.5} = 6, odd in x.
        assert!((m.phi_prime(4.0) - 6.0).abs() < 1e-12);
        assert!((m.phi_prime(-4.0) + 6.0).abs() < 1e-12);
        assert_eq!(m.phi_prime(0.0), 0.0);
    }

    #[test]
    fn psi_closed_form_single_term() {
        let m = PhiModel::new(PhiSpec::power_sum_default_weights(vec![1.5]).unwrap());
        // φ(x) = |x|^{1/2}·sign(x), so ψ(2) = 4.
        assert!((m.psi(2.0).unwrap() - 4.0).abs() < 1e-12);
        assert!((m.psi(-2.0).unwrap() + 4.0).abs() < 1e-12);
        assert_eq!(m.psi(0.0).unwrap(), 0.0);
    }

    #[test]
    fn psi_bisection_multi_term() {
        let m = two_term();
        // φ(4) = 6 from the example above.
        assert!((m.psi(6.0).unwrap() - 4.0).abs() < 1e-9);
        assert!((m.psi(-6.0).unwrap() + 4.0).abs() < 1e-9);
    }

    #[test]
    fn psi_inverts_phi_prime_scaled() {
        let m = two_term();
        for &x in &[1e-6, 0.037, 1.0, 57.3, 1e3, -0.5, -999.0] {
            let back = m.psi(m.phi_prime(x)).unwrap();
            assert!(
                (back - x).abs() <= m.psi_tolerance() * x.abs().max(1.0),
                "x = {x}, back = {back}"
            );
        }
    }

    #[test]
    fn k_phi_examples() {
        assert_eq!(
            PhiSpec::power_sum_default_weights(vec![2.0]).unwrap().k_phi(),
            2.0
        );
        assert_eq!(
            PhiSpec::power_sum_default_weights(vec![2.0, 1.5]).unwrap().k_phi(),
            1.5
        );
        assert!(
            (PhiSpec::power_sum_default_weights(vec![1.1]).unwrap().k_phi() - 1.1).abs()
                < 1e-15
        );
    }

    #[test]
    fn assumption_checks_pass_for_valid_models() {
        let xs = default_sample_points();
        assert_eq!(xs.len(), 1001);
        for spec in [
            PhiSpec::power_sum_default_weights(vec![2.0]).unwrap(),
            PhiSpec::power_sum_default_weights(vec![1.5]).unwrap(),
            PhiSpec::power_sum_default_weights(vec![1.1]).unwrap(),
            PhiSpec::power_sum_default_weights(vec![2.0, 1.5]).unwrap(),
            PhiSpec::power_sum(vec![2.0, 1.5, 1.2], vec![0.3, 1.0, 2.5]).unwrap(),
        ] {
            let m = PhiModel::new(spec);
            let rep = m.check_assumptions(&xs);
            assert!(rep.passed(), "{rep:?}");
            assert!(rep.superlinear_assumed);
        }
    }

    #[test]
    fn overstated_k_phi_is_caught() {
        let spec = PhiSpec::power_sum(vec![2.0, 1.5], vec![1.0, 1.0]).unwrap();
        let m = PhiModel::with_k_phi(spec, 2.5).unwrap();
        let rep = m.check_assumptions(&default_sample_points());
        assert!(!rep.nabla2.passed);
        assert!(rep.first_failure().unwrap().0 == "phi.k_phi");
    }

    #[test]
    fn k_phi_must_exceed_one() {
        let spec = PhiSpec::power_sum_default_weights(vec![2.0]).unwrap();
        assert!(PhiModel::with_k_phi(spec.clone(), 1.0).is_err());
        assert!(PhiModel::with_k_phi(spec, f64::NAN).is_err());
    }

    #[test]
    fn young_type_gap_is_nonnegative() {
        // φ(x)·x − Φ(x) ≥ 0 with equality only at 0; this is the quantity
        // the growth bound multiplies by S0.
        let m = two_term();
        for &x in &[0.0, 1e-3, 0.5, 2.0, 10.0, -3.0] {
            let gap = m.phi_prime(x) * x - m.phi(x);
            if x == 0.0 {
                assert_eq!(gap, 0.0);
            } else {
                assert!(gap > 0.0, "x = {x}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn phi_even_phi_prime_odd(x in -1e3..1e3f64) {
                let m = two_term();
                prop_assert!((m.phi(-x) - m.phi(x)).abs() <= 1e-12 * m.phi(x).abs().max(1.0));
                prop_assert!((m.phi_prime(-x) + m.phi_prime(x)).abs()
                    <= 1e-12 * m.phi_prime(x).abs().max(1.0));
            }

            #[test]
            fn roundtrip_within_tolerance(x in -1e3..1e3f64) {
                let m = two_term();
                let back = m.psi(m.phi_prime(x)).unwrap();
                prop_assert!((back - x).abs() <= m.psi_tolerance() * x.abs().max(1.0));
            }

            #[test]
            fn nabla2_sampled(x in -1e3..1e3f64) {
                let m = two_term();
                let rhs = m.phi_prime(x) * x;
                prop_assert!(m.k_phi() * m.phi(x) <= rhs + 1e-12 * rhs.abs().max(1.0));
            }

            #[test]
            fn strictly_increasing(a in -1e3..1e3f64, b in -1e3..1e3f64) {
                prop_assume!(a != b);
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let m = two_term();
                prop_assert!(m.phi_prime(lo) < m.phi_prime(hi));
            }
        }
    }
}
