//! Derivatives of the separatrix with respect to `alpha`, `beta` and `delta`.
//!
//! Writing the curve slope as `h(x, y) = g / f`, the derivative
//! `z = ∂s/∂ξ` solves the linear equation `z' = a(x) z + b(x)` with
//! `a = ∂h/∂y`, `b = ∂h/∂ξ` along `y = s(x)` and `z(A) = ∂B/∂ξ - m ∂A/∂ξ`.
//!
//! Near the saddle `a(x) ≈ -ρ / (x - A)` with `ρ = λ2 / |λ1|`, so the
//! equation is singular at `A`. Its homogeneous modes grow like
//! `|x - A|^(-ρ)` toward the saddle and decay away from it, which makes
//! outward integration stable once the regular solution is seeded from its
//! Taylor expansion `z(A ± h) = C ± h z'(A)`. The seed slope follows from
//! differentiating `s(A(ξ), ξ) = B(ξ)` and `s'(A(ξ), ξ) = m(ξ)`:
//! `z'(A) = ∂m/∂ξ - s''(A) ∂A/∂ξ`.

use std::io::{self, Write};

use serde::Serialize;

use crate::dopri::{self, Halt, StepperOptions};
use crate::error::{Error, Result};
use crate::integrator::IntegrationConfig;
use crate::io::CsvWriter;
use crate::model::{saddle_spectrum, NondimParams, Param, SaddleSpectrum};
use crate::separatrix::{compute_separatrix, SeparatrixBuildConfig, SeparatrixCurve};

pub const DEFAULT_H_START: f64 = 1e-4;
/// Relative parameter step of the finite-difference cross-check.
pub const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbDerivatives {
    pub da_dalpha: f64,
    pub db_dalpha: f64,
    pub da_dbeta: f64,
    pub db_dbeta: f64,
}

impl AbDerivatives {
    /// `(∂A/∂ξ, ∂B/∂ξ)`; both vanish for `delta`.
    pub fn for_param(&self, p: Param) -> (f64, f64) {
        match p {
            Param::Alpha => (self.da_dalpha, self.db_dalpha),
            Param::Beta => (self.da_dbeta, self.db_dbeta),
            Param::Delta => (0.0, 0.0),
        }
    }
}

pub fn dab_dparam(q: &NondimParams) -> Result<AbDerivatives> {
    q.require_strong()?;
    let (al, be) = (q.alpha(), q.beta());
    let d2 = (al * be - 1.0).powi(2);
    Ok(AbDerivatives {
        da_dalpha: (be - 1.0) / d2,
        db_dalpha: -be * (be - 1.0) / d2,
        da_dbeta: -al * (al - 1.0) / d2,
        db_dbeta: (al - 1.0) / d2,
    })
}

pub fn initial_value_c(q: &NondimParams, p: Param) -> Result<f64> {
    let spec = saddle_spectrum(q)?;
    let (da, db) = dab_dparam(q)?.for_param(p);
    Ok(db - spec.m * da)
}

/// `s''(A)` from the second-order invariance condition of the manifold.
pub fn saddle_curvature(q: &NondimParams, spec: &SaddleSpectrum) -> f64 {
    let (al, be, de) = (q.alpha(), q.beta(), q.delta());
    let m = spec.m;
    2.0 * m * (-1.0 - al * m + de * be + de * m) / (spec.lambda2 - 2.0 * spec.lambda1)
}

/// `∂m/∂ξ` by implicit differentiation of the slope quadratic
/// `alpha A m² + (A - delta B) m - delta beta B = 0`.
pub fn slope_derivative(q: &NondimParams, p: Param) -> Result<f64> {
    let spec = saddle_spectrum(q)?;
    let (al, be, de) = (q.alpha(), q.beta(), q.delta());
    let (a, b, m) = (spec.a, spec.b, spec.m);
    let (da, db) = dab_dparam(q)?.for_param(p);
    let unit = |target: Param| if target == p { 1.0 } else { 0.0 };
    let (dal, dbe, dde) = (unit(Param::Alpha), unit(Param::Beta), unit(Param::Delta));
    let q_xi = dal * a * m * m + al * da * m * m + (da - dde * b - de * db) * m
        - (dde * be + de * dbe) * b
        - de * be * db;
    let q_m = 2.0 * al * a * m + (a - de * b);
    Ok(-q_xi / q_m)
}

/// `z'(A)`, the slope of the regular solution at the saddle.
pub fn initial_slope(q: &NondimParams, p: Param) -> Result<f64> {
    let spec = saddle_spectrum(q)?;
    let (da, _) = dab_dparam(q)?.for_param(p);
    Ok(slope_derivative(q, p)? - saddle_curvature(q, &spec) * da)
}

/// `(a, b) = (∂h/∂y, ∂h/∂ξ)` at `(x, y)` for `h = delta y (1 - y - beta x) / (x (1 - x - alpha y))`.
pub fn coefficients(q: &NondimParams, p: Param, x: f64, y: f64) -> (f64, f64) {
    let (al, be, de) = (q.alpha(), q.beta(), q.delta());
    let pp = 1.0 - x - al * y;
    let qq = 1.0 - y - be * x;
    let a = de * ((qq - y) * pp + al * y * qq) / (x * pp * pp);
    let b = match p {
        Param::Alpha => de * y * y * qq / (x * pp * pp),
        Param::Beta => -de * y / pp,
        Param::Delta => y * qq / (x * pp),
    };
    (a, b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivitySolution {
    pub param: Param,
    pub base_params: NondimParams,
    /// `(x, ∂s/∂ξ)` in grid order.
    pub samples: Vec<(f64, f64)>,
    pub c: f64,
}

pub fn separatrix_sensitivity(c: &SeparatrixCurve, p: Param, x_grid: &[f64]) -> Result<SensitivitySolution> {
    separatrix_sensitivity_from(c, p, x_grid, DEFAULT_H_START)
}

/// As [`separatrix_sensitivity`] with an explicit seeding offset from `A`.
pub fn separatrix_sensitivity_from(
    c: &SeparatrixCurve,
    p: Param,
    x_grid: &[f64],
    h_start: f64,
) -> Result<SensitivitySolution> {
    let q = *c.params();
    let a = c.spectrum().a;
    let c0 = initial_value_c(&q, p)?;
    let zp = initial_slope(&q, p)?;
    if !(h_start > 0.0 && h_start < 0.5 * a) {
        return Err(Error::InvalidConfig(format!("h_start must lie in (0, A/2), got {h_start}")));
    }
    for &x in x_grid {
        if !(x > 0.0 && x <= c.x_max()) {
            return Err(Error::OutOfDomain { x, lo: 0.0, hi: c.x_max() });
        }
        if (x - a).abs() > h_start {
            let den = 1.0 - x - q.alpha() * c.eval(x)?;
            if den.abs() < 1e-12 {
                return Err(Error::SingularCoefficient { x, denominator: den });
            }
        }
    }

    let mut order: Vec<usize> = (0..x_grid.len()).collect();
    order.sort_by(|&i, &j| x_grid[i].total_cmp(&x_grid[j]));
    let mut z = vec![0.0; x_grid.len()];
    let seeded = |x: f64| c0 + (x - a) * zp;

    let right: Vec<usize> = order.iter().copied().filter(|&i| x_grid[i] - a > h_start).collect();
    let left: Vec<usize> = order.iter().rev().copied().filter(|&i| a - x_grid[i] > h_start).collect();
    for &i in &order {
        if (x_grid[i] - a).abs() <= h_start {
            z[i] = seeded(x_grid[i]);
        }
    }
    for (targets, sign) in [(right, 1.0), (left, -1.0)] {
        let Some(&last) = targets.last() else { continue };
        let x0 = a + sign * h_start;
        // segment ends: curve knots (kinks of the interpolant) and targets
        let mut stops: Vec<f64> = c
            .xs()
            .iter()
            .copied()
            .filter(|&x| sign * (x - x0) > 0.0 && sign * (x - x_grid[last]) < 0.0)
            .chain(targets.iter().map(|&i| x_grid[i]))
            .collect();
        stops.sort_by(|u, v| (sign * u).total_cmp(&(sign * v)));
        stops.dedup();
        let mut x = x0;
        let mut zc = seeded(x0);
        let mut next_target = 0;
        for stop in stops {
            zc = integrate_segment(c, p, x, stop, zc)?;
            x = stop;
            while next_target < targets.len() && x_grid[targets[next_target]] == x {
                z[targets[next_target]] = zc;
                next_target += 1;
            }
        }
    }
    Ok(SensitivitySolution {
        param: p,
        base_params: q,
        samples: x_grid.iter().copied().zip(z).collect(),
        c: c0,
    })
}

fn integrate_segment(c: &SeparatrixCurve, p: Param, from: f64, to: f64, z0: f64) -> Result<f64> {
    let q = *c.params();
    let dir = (to - from).signum();
    let (lo, hi) = (from.min(to), from.max(to));
    let rhs = |tau: f64, z: &[f64; 1]| {
        let x = (from + dir * tau).clamp(lo, hi);
        let s = c.eval(x).unwrap_or(f64::NAN);
        let (a, b) = coefficients(&q, p, x, s);
        [dir * (a * z[0] + b)]
    };
    let opts = StepperOptions { rtol: 1e-11, atol: 1e-13, h_min: 1e-15, h_max: f64::INFINITY, h_init: None };
    let out = dopri::drive(rhs, [z0], (to - from).abs(), &opts, |_| {}, |_, _| None::<()>);
    match out.halt {
        Halt::EndReached => Ok(out.y[0]),
        _ => {
            let x = from + dir * out.t;
            let s = c.eval(x).unwrap_or(f64::NAN);
            Err(Error::SingularCoefficient { x, denominator: 1.0 - x - q.alpha() * s })
        }
    }
}

/// Central difference `(s(x; ξ+h) - s(x; ξ-h)) / 2h` with `h = FD_STEP * ξ`,
/// rebuilding the curve at both perturbed parameter sets.
pub fn finite_difference(
    q: &NondimParams,
    p: Param,
    xs: &[f64],
    cfg: &SeparatrixBuildConfig,
    icfg: &IntegrationConfig,
) -> Result<Vec<f64>> {
    let h = FD_STEP * q.get(p);
    let up = compute_separatrix(&q.with(p, q.get(p) + h)?, cfg, icfg)?;
    let down = compute_separatrix(&q.with(p, q.get(p) - h)?, cfg, icfg)?;
    xs.iter().map(|&x| Ok((up.eval(x)? - down.eval(x)?) / (2.0 * h))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: f64) -> Self {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// Sign of `∂s/∂ξ` expected from the shape of the flow: decreasing in
/// `alpha`, increasing in `beta`, and in `delta` decreasing left of `A` and
/// increasing right of it.
pub fn expected_sign(p: Param, x: f64, a: f64) -> Sign {
    match p {
        Param::Alpha => Sign::Negative,
        Param::Beta => Sign::Positive,
        Param::Delta => Sign::of(x - a),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignCheck {
    pub x: f64,
    pub param: Param,
    pub z: f64,
    pub expected: Sign,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub params: NondimParams,
    pub rows: Vec<SignCheck>,
}

impl MonotonicityReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

pub fn monotonicity_report(q: &NondimParams, x_grid: &[f64]) -> Result<MonotonicityReport> {
    let curve = compute_separatrix(q, &Default::default(), &Default::default())?;
    let a = curve.spectrum().a;
    let mut rows = Vec::new();
    for p in Param::ALL {
        let sol = separatrix_sensitivity(&curve, p, x_grid)?;
        for (x, z) in sol.samples {
            let expected = expected_sign(p, x, a);
            let pass = match expected {
                Sign::Zero => z.abs() < 1e-12,
                s => Sign::of(z) == s,
            };
            rows.push(SignCheck { x, param: p, z, expected, pass });
        }
    }
    Ok(MonotonicityReport { params: *q, rows })
}

/// CSV `x,dsda,dsdb,dsdd` for solutions computed on the same grid.
pub fn write_csv<W: Write>(out: W, solutions: &[SensitivitySolution; 3]) -> io::Result<W> {
    let mut w = CsvWriter::new(out, &["x", "dsda", "dsdb", "dsdd"])?;
    for k in 0..solutions[0].samples.len() {
        let (x, da) = solutions[0].samples[k];
        w.numbers(&[x, da, solutions[1].samples[k].1, solutions[2].samples[k].1])?;
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: f64, b: f64, d: f64) -> NondimParams {
        NondimParams::new(a, b, d).unwrap()
    }

    fn curve(p: &NondimParams) -> SeparatrixCurve {
        compute_separatrix(p, &Default::default(), &Default::default()).unwrap()
    }

    #[test]
    fn ab_derivative_examples() {
        let d = dab_dparam(&q(2.0, 2.0, 1.0)).unwrap();
        assert!((d.da_dalpha - 1.0 / 9.0).abs() < 1e-15);
        assert!((d.db_dalpha + 2.0 / 9.0).abs() < 1e-15);
        assert!((d.da_dbeta + 2.0 / 9.0).abs() < 1e-15);
        assert!((d.db_dbeta - 1.0 / 9.0).abs() < 1e-15);
        let d = dab_dparam(&q(3.0, 3.0, 1.0)).unwrap();
        assert_eq!(d.da_dalpha, d.db_dbeta);
    }

    #[test]
    fn initial_values() {
        let p = q(2.0, 2.0, 1.0);
        assert!((initial_value_c(&p, Param::Alpha).unwrap() + 1.0 / 3.0).abs() < 1e-14);
        assert!((initial_value_c(&p, Param::Beta).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(initial_value_c(&q(2.0, 3.0, 0.4), Param::Delta).unwrap(), 0.0);
    }

    #[test]
    fn slope_derivative_matches_differences() {
        let p = q(2.0, 3.0, 2.0);
        for par in Param::ALL {
            let h = 1e-6 * p.get(par);
            let m = |v: f64| saddle_spectrum(&p.with(par, v).unwrap()).unwrap().m;
            let fd = (m(p.get(par) + h) - m(p.get(par) - h)) / (2.0 * h);
            let exact = slope_derivative(&p, par).unwrap();
            assert!((fd - exact).abs() < 1e-7 * exact.abs().max(1.0), "{par:?}");
        }
    }

    #[test]
    fn curvature_vanishes_at_unit_delta() {
        let p = q(2.0, 3.0, 1.0);
        assert!(saddle_curvature(&p, &saddle_spectrum(&p).unwrap()).abs() < 1e-14);
        // and matches the computed curve elsewhere
        let p = q(2.0, 3.0, 2.0);
        let c = curve(&p);
        let (a, h) = (c.spectrum().a, 1e-3);
        let fd = (c.eval(a + h).unwrap() - 2.0 * c.eval(a).unwrap() + c.eval(a - h).unwrap()) / (h * h);
        let exact = saddle_curvature(&p, c.spectrum());
        assert!((fd - exact).abs() < 1e-2 * exact.abs(), "{fd} {exact}");
    }

    #[test]
    fn coefficient_b_signs() {
        let p = q(2.0, 3.0, 2.0);
        let c = curve(&p);
        let a = c.spectrum().a;
        for x in [0.02, 0.1, 0.15, 0.25, 0.5, 1.5] {
            let s = c.eval(x).unwrap();
            let side = if x < a { 1.0 } else { -1.0 };
            assert!(side * coefficients(&p, Param::Alpha, x, s).1 > 0.0);
            assert!(side * coefficients(&p, Param::Beta, x, s).1 < 0.0);
            assert!(coefficients(&p, Param::Delta, x, s).1 > 0.0);
        }
    }

    #[test]
    fn values_at_saddle() {
        let p = q(2.0, 2.0, 1.0);
        let c = curve(&p);
        let a = c.spectrum().a;
        let z = separatrix_sensitivity(&c, Param::Alpha, &[a]).unwrap();
        assert!((z.samples[0].1 + 1.0 / 3.0).abs() < 1e-14);
        let z = separatrix_sensitivity(&c, Param::Delta, &[a]).unwrap();
        assert_eq!(z.samples[0].1, 0.0);
    }

    #[test]
    fn matches_finite_differences() {
        let p = q(2.0, 3.0, 2.0);
        let c = curve(&p);
        let a = c.spectrum().a;
        let xs = [0.5 * a, 2.0 * a];
        for par in Param::ALL {
            let z = separatrix_sensitivity(&c, par, &xs).unwrap();
            let fd = finite_difference(&p, par, &xs, &Default::default(), &Default::default()).unwrap();
            for ((_, zv), f) in z.samples.iter().zip(&fd) {
                assert!((zv - f).abs() < 1e-3 * f.abs(), "{par:?}: {zv} vs {f}");
            }
        }
    }

    #[test]
    fn seeding_offset_does_not_matter() {
        let p = q(2.0, 3.0, 0.5);
        let c = curve(&p);
        let a = c.spectrum().a;
        let xs = [0.5 * a, 0.9 * a, 1.1 * a, 2.0 * a];
        for par in Param::ALL {
            let z4 = separatrix_sensitivity_from(&c, par, &xs, 1e-4).unwrap();
            let z5 = separatrix_sensitivity_from(&c, par, &xs, 1e-5).unwrap();
            for (u, v) in z4.samples.iter().zip(&z5.samples) {
                assert!((u.1 - v.1).abs() < 1e-6, "{par:?} {u:?} {v:?}");
            }
        }
    }

    #[test]
    fn delta_sign_follows_log_ratio_at_unit_delta() {
        let p = q(2.0, 3.0, 1.0);
        let c = curve(&p);
        let a = c.spectrum().a;
        let xs = [0.05, 0.1, 0.3, 1.0];
        let z = separatrix_sensitivity(&c, Param::Delta, &xs).unwrap();
        for (x, zv) in z.samples {
            assert_eq!(Sign::of(zv), Sign::of((x / a).ln()));
        }
    }

    #[test]
    fn report_passes_and_exports() {
        let p = q(1.5, 4.0, 0.3);
        let xs = [0.02, 0.05, 0.1, 0.5, 1.0, 2.0];
        let r = monotonicity_report(&p, &xs).unwrap();
        assert_eq!(r.rows.len(), 18);
        assert!(r.all_pass(), "{:?}", r.rows);
        let c = curve(&p);
        let sols = Param::ALL.map(|par| separatrix_sensitivity(&c, par, &xs).unwrap());
        let text = String::from_utf8(write_csv(Vec::new(), &sols).unwrap()).unwrap();
        assert!(text.starts_with("x,dsda,dsdb,dsdd\n"));
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn rejects_points_outside_domain() {
        let c = curve(&q(2.0, 3.0, 1.0));
        assert!(matches!(separatrix_sensitivity(&c, Param::Beta, &[0.0]), Err(Error::OutOfDomain { .. })));
        assert!(matches!(separatrix_sensitivity(&c, Param::Beta, &[3.5]), Err(Error::OutOfDomain { .. })));
    }
}
