//! Uniform-grid functions on [0, 1] and the quadrature they share.
//!
//! Everything downstream works on n equal intervals with nodes t_j = j/n.
//! The only quadrature in the crate is the cumulative trapezoid rule, which
//! is exact for affine integrands; that exactness is what several operator
//! identities lean on.

use std::io::{self, Write};

use crate::error::Error;

/// Nodal values of a function on the uniform grid over [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    n: usize,
    values: Vec<f64>,
}

impl GridFunction {
    /// Wrap nodal values; the grid has `values.len() - 1` intervals.
    pub fn new(values: Vec<f64>) -> Result<Self, Error> {
        if values.len() < 2 {
            return Err(Error::invalid("grid", "need at least two nodes"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "grid function values",
            });
        }
        Ok(GridFunction {
            n: values.len() - 1,
            values,
        })
    }

    pub fn zeros(n: usize) -> Self {
        GridFunction {
            n,
            values: vec![0.0; n + 1],
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        GridFunction {
            n,
            values: vec![c; n + 1],
        }
    }

    /// Sample `f` at the n+1 nodes.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..=n).map(|j| f(j as f64 / n as f64)).collect();
        GridFunction { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Node abscissa t_j = j/n.
    pub fn t(&self, j: usize) -> f64 {
        j as f64 / self.n as f64
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.n]
    }

    /// Cumulative trapezoid integral, zero at the left endpoint.
    ///
    /// Computed as V_j = (S_j / 2) / n with S_j the running sum of
    /// (v_i + v_{i+1}); constants therefore integrate to c·t_j exactly and
    /// affine integrands are exact up to rounding.
    pub fn cumtrapz(&self) -> GridFunction {
        let n = self.n as f64;
        let mut out = Vec::with_capacity(self.values.len());
        out.push(0.0);
        let mut running = 0.0;
        for w in self.values.windows(2) {
            running += w[0] + w[1];
            out.push(running * 0.5 / n);
        }
        GridFunction {
            n: self.n,
            values: out,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Piecewise-linear interpolation at any t in [0, 1]. Node values are
    /// reproduced up to the rounding of t·n.
    pub fn lerp(&self, t: f64) -> f64 {
        let s = t * self.n as f64;
        let j = (s.floor() as usize).min(self.n - 1);
        let frac = s - j as f64;
        if frac == 0.0 {
            return self.values[j];
        }
        (1.0 - frac) * self.values[j] + frac * self.values[j + 1]
    }

    pub fn scale(&self, a: f64) -> GridFunction {
        GridFunction {
            n: self.n,
            values: self.values.iter().map(|v| a * v).collect(),
        }
    }

    /// Componentwise (1−θ)·self + θ·other.
    pub(crate) fn blend(&self, other: &GridFunction, theta: f64) -> GridFunction {
        debug_assert_eq!(self.n, other.n);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (1.0 - theta) * a + theta * b)
            .collect();
        GridFunction {
            n: self.n,
            values,
        }
    }

    pub(crate) fn shift(&self, c: f64) -> GridFunction {
        GridFunction {
            n: self.n,
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> Result<f64, Error> {
        if self.n != other.n {
            return Err(Error::GridMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
    }
}

/// A grid function paired with its derivative channel.
///
/// Outputs of the solution operator satisfy u = u(0) + ∫ du by construction,
/// so `du` really is the discrete derivative of `u`; [`ft_defect`] measures
/// how far a hand-built pair strays from that.
///
/// [`ft_defect`]: C1GridFunction::ft_defect
#[derive(Debug, Clone, PartialEq)]
pub struct C1GridFunction {
    pub u: GridFunction,
    pub du: GridFunction,
}

impl C1GridFunction {
    pub fn new(u: GridFunction, du: GridFunction) -> Result<Self, Error> {
        if u.n != du.n {
            return Err(Error::GridMismatch {
                left: u.n,
                right: du.n,
            });
        }
        Ok(C1GridFunction { u, du })
    }

    pub fn n(&self) -> usize {
        self.u.n
    }

    /// max(sup|u|, sup|du|).
    pub fn c1_norm(&self) -> f64 {
        self.u.sup_norm().max(self.du.sup_norm())
    }

    /// C¹ distance to another pair on the same grid.
    pub fn c1_distance(&self, other: &C1GridFunction) -> Result<f64, Error> {
        let du_diff = self.du.max_abs_diff(&other.du)?;
        Ok(self.u.max_abs_diff(&other.u)?.max(du_diff))
    }

    /// Defect of the fundamental-theorem identity u(t) − u(0) − ∫₀ᵗ du.
    pub fn ft_defect(&self) -> f64 {
        let integral = self.du.cumtrapz();
        let u0 = self.u.values[0];
        self.u
            .values
            .iter()
            .zip(integral.values())
            .fold(0.0f64, |m, (u, i)| m.max((u - u0 - i).abs()))
    }

    /// CSV rows `t,u,du`, one per node, full double precision, LF endings.
    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        w.write_all(b"t,u,du\n")?;
        for j in 0..=self.n() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e}",
                self.u.t(j),
                self.u.values[j],
                self.du.values[j]
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumtrapz_constant_is_exact_at_nodes() {
        let v = GridFunction::constant(7, 1.0);
        let cum = v.cumtrapz();
        for j in 0..=7 {
            assert_eq!(cum.values()[j], v.t(j));
        }
    }

    #[test]
    fn cumtrapz_affine_is_exact() {
        let v = GridFunction::from_fn(2, |s| s);
        assert_eq!(v.cumtrapz().last(), 0.5);

        // 3 + 2 s integrates to 3 t + t^2.
        let v = GridFunction::from_fn(64, |s| 3.0 + 2.0 * s);
        let cum = v.cumtrapz();
        for j in 0..=64 {
            let t = v.t(j);
            assert!((cum.values()[j] - (3.0 * t + t * t)).abs() < 1e-14);
        }
    }

    #[test]
    fn cumtrapz_sin_converges() {
        let v = GridFunction::from_fn(100, |s| (std::f64::consts::PI * s).sin());
        let total = v.cumtrapz().last();
        assert!((total - 2.0 / std::f64::consts::PI).abs() < 1e-3);
    }

    #[test]
    fn cumtrapz_second_order() {
        let exact = 2.0 / std::f64::consts::PI;
        let err = |n: usize| {
            let v = GridFunction::from_fn(n, |s| (std::f64::consts::PI * s).sin());
            (v.cumtrapz().last() - exact).abs()
        };
        let ratio = err(100) / err(200);
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn cumtrapz_is_linear() {
        let a = GridFunction::from_fn(33, |s| s * s);
        let b = GridFunction::from_fn(33, |s| (5.0 * s).cos());
        let combo = GridFunction::new(
            a.values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| 2.0 * x - 3.0 * y)
                .collect(),
        )
        .unwrap();
        let lhs = combo.cumtrapz();
        let ca = a.cumtrapz();
        let cb = b.cumtrapz();
        for j in 0..=33 {
            let rhs = 2.0 * ca.values()[j] - 3.0 * cb.values()[j];
            assert!((lhs.values()[j] - rhs).abs() < 1e-14);
        }
    }

    #[test]
    fn sup_norm_examples() {
        let s1 = 1.0f64.sinh();
        let u = GridFunction::from_fn(100, |t| t.sinh() / s1);
        assert_eq!(u.sup_norm(), 1.0);
    }

    #[test]
    fn lerp_nodes_and_midpoints() {
        let g = GridFunction::from_fn(100, |s| s * s);
        // Node values up to the rounding of t·n; exact when it is exact.
        for j in 0..=100 {
            assert!((g.lerp(g.t(j)) - g.values()[j]).abs() <= 1e-14);
        }
        assert_eq!(g.lerp(0.25), g.values()[25]);
        // Between nodes: linear between the two neighbours.
        let got = g.lerp(0.505);
        assert!((got - 0.255025).abs() < 1e-4);
        assert!((got - 0.25505).abs() < 1e-12);
    }

    #[test]
    fn c1_norm_example() {
        let u = GridFunction::from_fn(50, |t| (t * t - t) / 2.0);
        let du = GridFunction::from_fn(50, |t| t - 0.5);
        let c1 = C1GridFunction::new(u, du).unwrap();
        assert_eq!(c1.c1_norm(), 0.5);
        assert!((c1.u.sup_norm() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn ft_defect_small_for_smooth_profile() {
        let n = 200;
        let u = GridFunction::from_fn(n, |t| (std::f64::consts::PI * t).sin());
        let du = GridFunction::from_fn(n, |t| {
            std::f64::consts::PI * (std::f64::consts::PI * t).cos()
        });
        let c1 = C1GridFunction::new(u, du).unwrap();
        let bound = 5.0 * c1.du.sup_norm() / (n as f64 * n as f64);
        assert!(c1.ft_defect() < bound, "defect {}", c1.ft_defect());
    }

    #[test]
    fn csv_format() {
        let u = GridFunction::from_fn(2, |t| t);
        let du = GridFunction::constant(2, 1.0);
        let c1 = C1GridFunction::new(u, du).unwrap();
        let csv = c1.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,u,du"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 3);
        assert_eq!(row[0].parse::<f64>().unwrap(), 0.0);
        // 17 significant digits: one leading digit plus 16 after the point.
        assert!(row[1].contains('.'));
        assert_eq!(row[1].split('.').nth(1).unwrap().split('e').next().unwrap().len(), 16);
        assert!(!csv.contains('\r'));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn grid_mismatch_detected() {
        let a = GridFunction::zeros(10);
        let b = GridFunction::zeros(20);
        assert!(matches!(
            a.max_abs_diff(&b),
            Err(Error::GridMismatch { left: 10, right: 20 })
        ));
        assert!(C1GridFunction::new(a, b).is_err());
    }

    #[test]
    fn rejects_non_finite_and_short_input() {
        assert!(GridFunction::new(vec![1.0]).is_err());
        assert!(GridFunction::new(vec![0.0, f64::NAN]).is_err());
        assert!(GridFunction::new(vec![0.0, f64::INFINITY]).is_err());
    }
}
