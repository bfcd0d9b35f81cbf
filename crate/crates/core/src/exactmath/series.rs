//! Truncated univariate power series and local branches of plane curves.

use std::fmt;

use num_traits::{One, Zero};

use super::poly::HomogPoly;
use super::rat::{format_rat, Rat};
use crate::error::{Error, Result};

/// Hard upper bound on series precision.
pub const PRECISION_CAP: usize = 512;

/// A power series known exactly modulo `t^precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    variable: String,
    coeffs: Vec<Rat>,
}

impl PowerSeries {
    pub fn new(variable: impl Into<String>, mut coeffs: Vec<Rat>, precision: usize) -> Self {
        coeffs.resize(precision, Rat::zero());
        PowerSeries { variable: variable.into(), coeffs }
    }

    pub fn zero(variable: impl Into<String>, precision: usize) -> Self {
        Self::new(variable, Vec::new(), precision)
    }

    pub fn constant(variable: impl Into<String>, c: Rat, precision: usize) -> Self {
        Self::new(variable, vec![c], precision)
    }

    /// `c + t`.
    pub fn shifted_parameter(variable: impl Into<String>, c: Rat, precision: usize) -> Self {
        Self::new(variable, vec![c, Rat::one()], precision)
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coefficients(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(precision);
        PowerSeries { variable: self.variable.clone(), coeffs: c }
    }

    /// Index of the first nonzero coefficient below the precision bound.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading_coefficient(&self) -> Option<&Rat> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.precision().min(other.precision());
        let coeffs = (0..prec).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        PowerSeries { variable: self.variable.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let prec = self.precision().min(other.precision());
        let coeffs = (0..prec).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect();
        PowerSeries { variable: self.variable.clone(), coeffs }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        PowerSeries {
            variable: self.variable.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.precision().min(other.precision());
        let mut coeffs = vec![Rat::zero(); prec];
        for (i, a) in self.coeffs.iter().enumerate().take(prec) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(prec - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        PowerSeries { variable: self.variable.clone(), coeffs }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.coeffs.first()?;
        if c0.is_zero() {
            return None;
        }
        let inv0 = c0.recip();
        let prec = self.precision();
        let mut out = vec![Rat::zero(); prec];
        out[0] = inv0.clone();
        for k in 1..prec {
            let mut acc = Rat::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out[k] = -acc * &inv0;
        }
        Some(PowerSeries { variable: self.variable.clone(), coeffs: out })
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format_rat(c),
                1 => format!("{}*{}", format_rat(c), self.variable),
                _ => format!("{}*{}^{}", format_rat(c), self.variable, i),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O({}^{})", parts.join(" + "), self.variable, self.precision())
    }
}

/// Affine chart and local parameter on a curve in `P^1` or `P^2`: the chart
/// coordinate is set to 1 and the parameter coordinate moves as `P + t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalChart {
    pub chart: usize,
    pub parameter: usize,
}

impl LocalChart {
    /// The remaining coordinate of a plane chart.
    pub fn dependent(&self) -> usize {
        3 - self.chart - self.parameter
    }
}

/// A parametrized branch `t -> (x_0(t), ..., x_k(t))` through a point.
#[derive(Clone, Debug)]
pub struct Branch {
    coords: Vec<PowerSeries>,
}

impl Branch {
    /// The line `P^1` near `point`, parametrized by the chart's parameter.
    pub fn line(point: &[Rat], chart: LocalChart, precision: usize) -> Result<Self> {
        if point.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: point.len() });
        }
        let affine = normalize(point, chart.chart)?;
        let var = format!("x{}", chart.parameter);
        let mut coords = vec![PowerSeries::zero(var.clone(), precision); 2];
        coords[chart.chart] = PowerSeries::constant(var.clone(), Rat::one(), precision);
        coords[chart.parameter] =
            PowerSeries::shifted_parameter(var, affine[chart.parameter].clone(), precision);
        Ok(Branch { coords })
    }

    /// The branch of the plane curve `{curve = 0}` through `point`.
    pub fn plane(curve: &HomogPoly, point: &[Rat], chart: LocalChart, precision: usize) -> Result<Self> {
        let u = series_solve_branch(curve, point, chart, precision)?;
        let affine = normalize(point, chart.chart)?;
        let var = u.variable().to_string();
        let mut coords = vec![PowerSeries::zero(var.clone(), precision); 3];
        coords[chart.chart] = PowerSeries::constant(var.clone(), Rat::one(), precision);
        coords[chart.parameter] =
            PowerSeries::shifted_parameter(var.clone(), affine[chart.parameter].clone(), precision);
        let dep = chart.dependent();
        coords[dep] = PowerSeries::constant(var, affine[dep].clone(), precision).add(&u);
        Ok(Branch { coords })
    }

    pub fn precision(&self) -> usize {
        self.coords[0].precision()
    }

    pub fn coordinate(&self, i: usize) -> &PowerSeries {
        &self.coords[i]
    }

    /// `g(x(t))` as a power series.
    pub fn pullback(&self, g: &HomogPoly) -> PowerSeries {
        assert_eq!(g.num_vars(), self.coords.len());
        let prec = self.precision();
        let var = self.coords[0].variable().to_string();
        let mut powers: Vec<Vec<PowerSeries>> = Vec::with_capacity(self.coords.len());
        for (i, x) in self.coords.iter().enumerate() {
            let max = g.terms().map(|(e, _)| e[i]).max().unwrap_or(0) as usize;
            let mut p = vec![PowerSeries::constant(var.clone(), Rat::one(), prec)];
            for k in 1..=max {
                let next = p[k - 1].mul(x);
                p.push(next);
            }
            powers.push(p);
        }
        let mut total = PowerSeries::zero(var.clone(), prec);
        for (e, c) in g.terms() {
            let mut term = PowerSeries::constant(var.clone(), c.clone(), prec);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[i][k as usize]);
                }
            }
            total = total.add(&term);
        }
        total
    }
}

fn normalize(point: &[Rat], chart: usize) -> Result<Vec<Rat>> {
    let c = &point[chart];
    if c.is_zero() {
        return Err(Error::BadLocalParameter(format!(
            "chart coordinate x{chart} vanishes at the point"
        )));
    }
    Ok(point.iter().map(|x| x / c).collect())
}

/// Solves `curve(chart(t, u(t))) = 0` for the dependent affine coordinate
/// offset `u(t)` by Newton iteration, exact modulo `t^precision`.
pub fn series_solve_branch(
    curve: &HomogPoly,
    point: &[Rat],
    chart: LocalChart,
    precision: usize,
) -> Result<PowerSeries> {
    if curve.num_vars() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: curve.num_vars() });
    }
    if point.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: point.len() });
    }
    if chart.chart == chart.parameter || chart.chart > 2 || chart.parameter > 2 {
        return Err(Error::BadLocalParameter("chart and parameter must be distinct coordinates".into()));
    }
    if precision > PRECISION_CAP {
        return Err(Error::PrecisionCap { cap: PRECISION_CAP });
    }
    let affine = normalize(point, chart.chart)?;
    if !curve.eval(&affine).is_zero() {
        return Err(Error::NotOnCurve);
    }
    let grads: Vec<Rat> = (0..3).map(|i| curve.partial(i).eval(&affine)).collect();
    if grads.iter().all(Zero::is_zero) {
        return Err(Error::SingularPoint);
    }
    let dep = chart.dependent();
    if grads[dep].is_zero() {
        return Err(Error::BadLocalParameter(format!(
            "x{} does not parametrize the curve near the point",
            chart.parameter
        )));
    }
    let var = format!("x{}", chart.parameter);
    let dcurve = curve.partial(dep);
    let frame = |u: &PowerSeries, prec: usize| -> Branch {
        let mut coords = vec![PowerSeries::zero(var.clone(), prec); 3];
        coords[chart.chart] = PowerSeries::constant(var.clone(), Rat::one(), prec);
        coords[chart.parameter] =
            PowerSeries::shifted_parameter(var.clone(), affine[chart.parameter].clone(), prec);
        coords[dep] = PowerSeries::constant(var.clone(), affine[dep].clone(), prec).add(&u.truncate(prec));
        Branch { coords }
    };

    let mut u = PowerSeries::zero(var.clone(), precision.max(1));
    let mut known = 1usize;
    while known < precision {
        known = (2 * known).min(precision);
        let b = frame(&PowerSeries::new(var.clone(), u.coefficients().to_vec(), known), known);
        let g = b.pullback(curve);
        let dg = b.pullback(&dcurve);
        let step = g.mul(&dg.inverse().expect("nonzero derivative at the point"));
        u = PowerSeries::new(var.clone(), u.truncate(known).sub(&step).coefficients().to_vec(), precision);
    }
    let u = u.truncate(precision);
    let residual = frame(&u, precision).pullback(curve);
    if residual.valuation().is_some() {
        return Err(Error::Inconsistent("branch residual does not vanish".into()));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat::{int, rat};

    fn plane(s: &str) -> HomogPoly {
        HomogPoly::parse(s, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn fermat_flex_branch() {
        let f = plane("x^3 + y^3 + z^3");
        let chart = LocalChart { chart: 0, parameter: 2 };
        let u = series_solve_branch(&f, &[int(1), int(-1), int(0)], chart, 7).unwrap();
        // (-1 + u)^3 + 1 + z^3 = 0 gives u = -z^3/3 + O(z^6)
        assert_eq!(u.coeff(0), int(0));
        assert_eq!(u.coeff(1), int(0));
        assert_eq!(u.coeff(2), int(0));
        assert_eq!(u.coeff(3), rat(-1, 3));
        assert_eq!(u.coeff(4), int(0));
        assert_eq!(u.coeff(5), int(0));
        assert_eq!(u.precision(), 7);
    }

    #[test]
    fn conic_branch_is_exact_parabola() {
        let f = plane("y*z - x^2");
        let chart = LocalChart { chart: 2, parameter: 0 };
        let u = series_solve_branch(&f, &[int(0), int(0), int(1)], chart, 10).unwrap();
        let mut expected = vec![int(0); 10];
        expected[2] = int(1);
        assert_eq!(u.coefficients(), expected.as_slice());
    }

    #[test]
    fn line_branch_is_zero() {
        let f = plane("y");
        let chart = LocalChart { chart: 0, parameter: 2 };
        let u = series_solve_branch(&f, &[int(1), int(0), int(0)], chart, 8).unwrap();
        assert_eq!(u.valuation(), None);
    }

    #[test]
    fn branch_errors() {
        let f = plane("x^3 + y^3 + z^3");
        let chart = LocalChart { chart: 0, parameter: 2 };
        assert_eq!(
            series_solve_branch(&f, &[int(1), int(0), int(0)], chart, 5),
            Err(Error::NotOnCurve)
        );
        let node = plane("y^2*z - x^3 - x^2*z");
        let c = LocalChart { chart: 2, parameter: 0 };
        assert_eq!(
            series_solve_branch(&node, &[int(0), int(0), int(1)], c, 5),
            Err(Error::SingularPoint)
        );
        assert_eq!(
            series_solve_branch(&f, &[int(1), int(-1), int(0)], chart, PRECISION_CAP + 1),
            Err(Error::PrecisionCap { cap: PRECISION_CAP })
        );
        // parameter y is tangent direction-less here: dF/dz = 0 at the flex
        let bad = LocalChart { chart: 0, parameter: 1 };
        assert!(matches!(
            series_solve_branch(&f, &[int(1), int(-1), int(0)], bad, 5),
            Err(Error::BadLocalParameter(_))
        ));
    }

    #[test]
    fn inverse_and_product() {
        let s = PowerSeries::new("t", vec![int(1), int(-1)], 6);
        let inv = s.inverse().unwrap();
        assert!(inv.coefficients().iter().all(|c| *c == int(1)));
        let one = s.mul(&inv);
        assert_eq!(one.valuation(), Some(0));
        assert!(one.coefficients()[1..].iter().all(Zero::is_zero));
        assert!(PowerSeries::new("t", vec![int(0), int(1)], 3).inverse().is_none());
    }
}
