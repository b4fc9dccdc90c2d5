//! The basin boundary `y = s(x)`: the stable manifold of the coexistence
//! saddle together with the origin.
//!
//! Both branches of the manifold are traced by integrating the reversed flow
//! from seeds displaced off the saddle along the stable eigenvector. The
//! reversed flow is written for `(ln x, ln y)`, which keeps the left branch
//! accurate all the way down to the origin even when `y` decays many orders
//! of magnitude faster than `x`. The traced branches are resampled onto a
//! log-spaced knot grid and joined by a monotone cubic.

use std::io::{self, Write};

use crate::dopri::{self, Halt, StepperOptions};
use crate::error::{Error, Result};
use crate::integrator::{classify_initial_condition, BasinLabel, IntegrationConfig};
use crate::interp::{hermite_segment, MonotoneCubic};
use crate::io::CsvWriter;
use crate::model::{saddle_spectrum, vector_field, NondimParams, SaddleSpectrum, State};
use crate::quadrature::{integrate_with_breaks, QuadratureOptions};

/// Smallest positive knot.
const FIRST_KNOT: f64 = 1e-6;
const CONFINEMENT_SLACK: f64 = 1e-6;
const SADDLE_SNAP: f64 = 1e-9;
const NULLCLINE_EPS: f64 = 1e-13;
/// Neighbouring knots whose ordinates differ by more than this factor get
/// extra knots in between.
const MAX_KNOT_RATIO: f64 = 1.1;
const MAX_REFINE_DEPTH: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatrixBuildConfig {
    pub eigen_offset: f64,
    pub x_max: f64,
    pub resample_count: usize,
    /// Ordinate at which the right branch is abandoned; the curve domain then
    /// ends where it was reached.
    pub y_cap: f64,
}

impl Default for SeparatrixBuildConfig {
    fn default() -> Self {
        Self { eigen_offset: 1e-7, x_max: 3.0, resample_count: 512, y_cap: 1e6 }
    }
}

impl SeparatrixBuildConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eigen_offset > 0.0 && self.eigen_offset <= 1e-3) {
            return Err(Error::InvalidConfig(format!("eigen_offset must lie in (0, 1e-3], got {}", self.eigen_offset)));
        }
        if !(self.x_max.is_finite() && self.x_max > FIRST_KNOT) {
            return Err(Error::InvalidConfig(format!("x_max must be finite and positive, got {}", self.x_max)));
        }
        if self.resample_count < 16 {
            return Err(Error::InvalidConfig(format!("resample_count must be at least 16, got {}", self.resample_count)));
        }
        if !(self.y_cap > 1.0) {
            return Err(Error::InvalidConfig(format!("y_cap must exceed 1, got {}", self.y_cap)));
        }
        Ok(())
    }
}

/// Computed separatrix. Immutable once built.
#[derive(Debug, Clone)]
pub struct SeparatrixCurve {
    params: NondimParams,
    spectrum: SaddleSpectrum,
    interp: MonotoneCubic,
    left: Vec<State>,
    right: Vec<State>,
    x_max: f64,
}

impl SeparatrixCurve {
    pub fn params(&self) -> &NondimParams {
        &self.params
    }

    pub fn spectrum(&self) -> &SaddleSpectrum {
        &self.spectrum
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn xs(&self) -> &[f64] {
        self.interp.xs()
    }

    pub fn ys(&self) -> &[f64] {
        self.interp.ys()
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs().iter().copied().zip(self.ys().iter().copied())
    }

    /// Raw samples of the branch from the saddle down to the origin, in
    /// integration order.
    pub fn left_branch(&self) -> &[State] {
        &self.left
    }

    /// Raw samples of the branch from the saddle outward, in integration order.
    pub fn right_branch(&self) -> &[State] {
        &self.right
    }

    fn check(&self, x: f64) -> Result<()> {
        if x >= 0.0 && x <= self.x_max {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, lo: 0.0, hi: self.x_max })
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.interp.eval(x))
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.interp.derivative(x))
    }

    /// `s^{-1}(y)` for `y` between 0 and `s(x_max)`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let y_top = *self.ys().last().unwrap();
        self.interp.inverse(y).ok_or(Error::OutOfDomain { x: y, lo: 0.0, hi: y_top })
    }

    /// Knots as CSV with header `x,y`.
    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<W> {
        let mut w = CsvWriter::new(out, &["x", "y"])?;
        for (x, y) in self.knots() {
            w.numbers(&[x, y])?;
        }
        w.finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum BranchStop {
    Done,
    Capped,
    Escaped(State),
}

struct Branch {
    samples: Vec<State>,
    capped: bool,
}

fn trace_branch(
    q: &NondimParams,
    spec: &SaddleSpectrum,
    side: Side,
    cfg: &SeparatrixBuildConfig,
    icfg: &IntegrationConfig,
) -> Result<Branch> {
    let (al, be, de) = (q.alpha(), q.beta(), q.delta());
    let (a, b) = (spec.a, spec.b);
    let (dx, dy) = spec.stable_direction();
    let sign = if side == Side::Left { -1.0 } else { 1.0 };
    let eps = cfg.eigen_offset;
    let seed = State::new(a + sign * eps * dx, b + sign * eps * dy);
    let x_floor = 0.1 * FIRST_KNOT;
    let origin = State::new(0.0, 0.0);

    let rhs = |_t: f64, w: &[f64; 2]| {
        let (x, y) = (w[0].exp(), w[1].exp());
        [-(1.0 - x - al * y), -de * (1.0 - y - be * x)]
    };
    let opts = StepperOptions {
        rtol: icfg.rel_tol,
        atol: icfg.abs_tol,
        h_min: icfg.min_step,
        h_max: 0.05 / de.max(1.0),
        h_init: None,
    };
    let mut samples = Vec::new();
    let observe = |_t: f64, w: &[f64; 2]| {
        let s = State::new(w[0].exp(), w[1].exp());
        samples.push(s);
        match side {
            Side::Left => {
                if s.x > a + CONFINEMENT_SLACK || s.y > b + CONFINEMENT_SLACK {
                    Some(BranchStop::Escaped(s))
                } else if s.x < x_floor || s.distance(&origin) <= icfg.equilibrium_radius {
                    Some(BranchStop::Done)
                } else {
                    None
                }
            }
            Side::Right => {
                if s.x < a - CONFINEMENT_SLACK || s.y < b - CONFINEMENT_SLACK {
                    Some(BranchStop::Escaped(s))
                } else if s.x >= cfg.x_max {
                    Some(BranchStop::Done)
                } else if s.y >= cfg.y_cap {
                    Some(BranchStop::Capped)
                } else {
                    None
                }
            }
        }
    };
    let out = dopri::drive(rhs, [seed.x.ln(), seed.y.ln()], icfg.max_time, &opts, |_| {}, observe);
    let capped = match out.halt {
        Halt::Event(BranchStop::Done) => false,
        Halt::Event(BranchStop::Capped) => true,
        Halt::Event(BranchStop::Escaped(s)) => {
            return Err(Error::ManifoldEscape { branch: side.name(), x: s.x, y: s.y })
        }
        Halt::EndReached => {
            return Err(Error::BranchIncomplete { branch: side.name(), reason: "time limit reached".into() })
        }
        Halt::Underflow => {
            return Err(Error::BranchIncomplete { branch: side.name(), reason: "step size underflow".into() })
        }
        Halt::NonFinite => {
            return Err(Error::BranchIncomplete { branch: side.name(), reason: "non-finite state".into() })
        }
    };
    Ok(Branch { samples, capped })
}

/// Both branches joined through the saddle as `v = ln y` over `u = ln x`,
/// with the exact slope `dv/du` at every sample.
struct LogCurve {
    u: Vec<f64>,
    v: Vec<f64>,
    dv: Vec<f64>,
}

impl LogCurve {
    fn new(q: &NondimParams, spec: &SaddleSpectrum, left: &[State], right: &[State]) -> Self {
        let (al, be, de) = (q.alpha(), q.beta(), q.delta());
        let saddle_slope = spec.m * spec.a / spec.b;
        let mut curve = LogCurve { u: Vec::new(), v: Vec::new(), dv: Vec::new() };
        let ordered = left
            .iter()
            .rev()
            .map(|s| (*s, None))
            .chain(std::iter::once((spec.saddle(), Some(saddle_slope))))
            .chain(right.iter().map(|s| (*s, None)));
        for (s, slope) in ordered {
            let u = s.x.ln();
            if curve.u.last().is_some_and(|&last| u <= last) {
                continue;
            }
            let dv = slope.unwrap_or_else(|| de * (1.0 - s.y - be * s.x) / (1.0 - s.x - al * s.y));
            curve.u.push(u);
            curve.v.push(s.y.ln());
            curve.dv.push(dv);
        }
        curve
    }

    fn y_at(&self, x: f64) -> Option<f64> {
        let u = x.ln();
        let n = self.u.len();
        if !(u >= self.u[0] && u <= self.u[n - 1]) {
            return None;
        }
        let k = self.u.partition_point(|&t| t <= u).clamp(1, n - 1) - 1;
        let v = hermite_segment(
            [self.u[k], self.u[k + 1]],
            [self.v[k], self.v[k + 1]],
            [self.dv[k], self.dv[k + 1]],
            u,
        );
        Some(v.exp())
    }
}

fn refine(curve: &LogCurve, x0: f64, y0: f64, x1: f64, y1: f64, depth: u32, out: &mut Vec<(f64, f64)>) {
    if depth == 0 || y0 <= 0.0 || y1 <= MAX_KNOT_RATIO * y0 || y1 - y0 <= 1e-6 {
        return;
    }
    let xm = (x0 * x1).sqrt();
    let Some(ym) = curve.y_at(xm) else { return };
    refine(curve, x0, y0, xm, ym, depth - 1, out);
    out.push((xm, ym));
    refine(curve, xm, ym, x1, y1, depth - 1, out);
}

/// Trace the stable manifold of the saddle and resample it as `y = s(x)`.
pub fn compute_separatrix(
    q: &NondimParams,
    cfg: &SeparatrixBuildConfig,
    icfg: &IntegrationConfig,
) -> Result<SeparatrixCurve> {
    cfg.validate()?;
    let spec = saddle_spectrum(q)?;
    let (a, b) = (spec.a, spec.b);
    if cfg.x_max <= a {
        return Err(Error::InvalidConfig(format!("x_max {} must exceed A = {a}", cfg.x_max)));
    }

    let left = trace_branch(q, &spec, Side::Left, cfg, icfg)?;
    let right = trace_branch(q, &spec, Side::Right, cfg, icfg)?;
    let x_end = if right.capped { right.samples.last().unwrap().x.min(cfg.x_max) } else { cfg.x_max };
    let curve = LogCurve::new(q, &spec, &left.samples, &right.samples);

    let n_geo = cfg.resample_count - 1;
    let step = (x_end / FIRST_KNOT).ln() / (n_geo - 1) as f64;
    let mut xs: Vec<f64> = (0..n_geo)
        .map(|i| if i + 1 == n_geo { x_end } else { FIRST_KNOT * (step * i as f64).exp() })
        .filter(|x| (x / a).ln().abs() >= 0.25 * step)
        .collect();
    let at = xs.partition_point(|&x| x < a);
    xs.insert(at, a);

    let mut coarse = Vec::with_capacity(xs.len());
    for &x in &xs {
        let y = if x == a {
            b
        } else {
            curve.y_at(x).ok_or_else(|| Error::BranchIncomplete {
                branch: if x < a { "left" } else { "right" },
                reason: format!("traced branch does not reach x = {x}"),
            })?
        };
        coarse.push((x, y));
    }
    let mut knots = vec![(0.0, 0.0)];
    for (k, &(x, y)) in coarse.iter().enumerate() {
        if k > 0 {
            let (xp, yp) = coarse[k - 1];
            refine(&curve, xp, yp, x, y, MAX_REFINE_DEPTH, &mut knots);
        }
        knots.push((x, y));
    }
    // ordinates below the normal range carry no usable information
    knots.retain(|&(x, y)| x == 0.0 || y >= f64::MIN_POSITIVE);

    let (al, be, de) = (q.alpha(), q.beta(), q.delta());
    let slopes: Vec<f64> = knots
        .iter()
        .enumerate()
        .map(|(k, &(x, y))| {
            if x == 0.0 {
                let (x1, y1) = knots[k + 1];
                y1 / x1
            } else if x == a {
                spec.m
            } else {
                de * y * (1.0 - y - be * x) / (x * (1.0 - x - al * y))
            }
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = knots.into_iter().unzip();
    Ok(SeparatrixCurve {
        params: *q,
        spectrum: spec,
        interp: MonotoneCubic::with_slopes(xs, ys, slopes),
        left: left.samples,
        right: right.samples,
        x_max: x_end,
    })
}

pub fn eval_s(c: &SeparatrixCurve, x: f64) -> Result<f64> {
    c.eval(x)
}

/// Largest relative gap between curves seeded at `eigen_offset` and at ten
/// times that offset, over the knots of the first.
pub fn offset_sensitivity(q: &NondimParams, cfg: &SeparatrixBuildConfig, icfg: &IntegrationConfig) -> Result<f64> {
    let base = compute_separatrix(q, cfg, icfg)?;
    let coarse_cfg = SeparatrixBuildConfig { eigen_offset: 10.0 * cfg.eigen_offset, ..*cfg };
    let coarse = compute_separatrix(q, &coarse_cfg, icfg)?;
    let mut worst: f64 = 0.0;
    for (x, y) in base.knots() {
        if let Ok(other) = coarse.eval(x) {
            worst = worst.max((y - other).abs() / y.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// `B (x / A)^delta`.
pub fn model_separatrix(q: &NondimParams, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let den = q.alpha() * q.beta() - 1.0;
    let (a, b) = ((q.alpha() - 1.0) / den, (q.beta() - 1.0) / den);
    b * (x / a).powf(q.delta())
}

/// Slope `g/f` of the vector field, with the removable value `m` at the saddle.
pub fn slope_field(s: State, q: &NondimParams) -> Result<f64> {
    if !(s.x > 0.0) {
        return Err(Error::OutOfDomain { x: s.x, lo: 0.0, hi: f64::INFINITY });
    }
    if q.regime().is_strong() {
        if let Some(pc) = q.coexistence() {
            if s.distance(&pc) <= SADDLE_SNAP {
                return Ok(saddle_spectrum(q)?.m);
            }
        }
    }
    let (f, g) = vector_field(s, q);
    if f.abs() < NULLCLINE_EPS {
        return Err(Error::FCloseToZero { x: s.x, y: s.y });
    }
    Ok(g / f)
}

/// `s(x) - s*(x) exp(delta * I(x))` where `I` integrates
/// `((alpha-1) s - (beta-1) t) / (t (1 - t - alpha s))` from `A` to `x` along
/// the computed curve.
pub fn integral_residual(c: &SeparatrixCurve, x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= c.x_max) {
        return Err(Error::OutOfDomain { x, lo: 0.0, hi: c.x_max });
    }
    let q = c.params;
    let (al, be, de) = (q.alpha(), q.beta(), q.delta());
    let SaddleSpectrum { a, m, .. } = c.spectrum;
    let at_saddle = ((al - 1.0) * m - (be - 1.0)) / (-a * (1.0 + al * m));
    let integrand = |t: f64| {
        if (t - a).abs() < 1e-7 {
            return at_saddle;
        }
        let s = c.interp.eval(t);
        ((al - 1.0) * s - (be - 1.0) * t) / (t * (1.0 - t - al * s))
    };
    let opts = QuadratureOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 200 };
    let integral = integrate_with_breaks(integrand, a, x, c.xs(), &opts)?;
    Ok(c.interp.eval(x) - model_separatrix(&q, x) * (de * integral).exp())
}

/// Boundary ordinate above `x` found by bisection on the forward-time
/// classification, independent of the manifold construction.
pub fn bisection_oracle(q: &NondimParams, x: f64, icfg: &IntegrationConfig, tol: f64) -> Result<f64> {
    q.require_strong()?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::OutOfDomain { x, lo: 0.0, hi: f64::INFINITY });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tol", value: tol });
    }
    let label = |y: f64| classify_initial_condition(State::new(x, y), q, icfg);
    let mut lo = 0.0;
    let mut hi = 1.0;
    while label(hi) != BasinLabel::InvaderWins {
        hi *= 2.0;
        if hi > 1e8 {
            return Err(Error::OracleStall { x });
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match label(mid) {
            BasinLabel::NativeWins => lo = mid,
            BasinLabel::InvaderWins => hi = mid,
            BasinLabel::Undecided => {
                let d = 0.25 * tol;
                match (label(mid - d), label(mid + d)) {
                    (BasinLabel::NativeWins, BasinLabel::InvaderWins) => return Ok(mid),
                    (BasinLabel::NativeWins, BasinLabel::NativeWins) => lo = mid + d,
                    (BasinLabel::InvaderWins, BasinLabel::InvaderWins) => hi = mid - d,
                    _ => return Err(Error::OracleStall { x }),
                }
            }
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: f64, b: f64, d: f64) -> NondimParams {
        NondimParams::new(a, b, d).unwrap()
    }

    fn curve(a: f64, b: f64, d: f64) -> SeparatrixCurve {
        compute_separatrix(&q(a, b, d), &Default::default(), &Default::default()).unwrap()
    }

    fn sup_dev(c: &SeparatrixCurve, exact: impl Fn(f64) -> f64, hi: f64) -> f64 {
        (0..=2000)
            .map(|i| hi * i as f64 / 2000.0)
            .map(|x| (c.eval(x).unwrap() - exact(x)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn unit_delta_is_the_straight_line() {
        assert!(sup_dev(&curve(2.0, 3.0, 1.0), |x| 2.0 * x, 3.0) < 1e-6);
        assert!(sup_dev(&curve(2.0, 2.0, 1.0), |x| x, 3.0) < 1e-6);
    }

    #[test]
    fn anchors_and_domain() {
        let c = curve(2.0, 3.0, 2.0);
        let SaddleSpectrum { a, b, .. } = *c.spectrum();
        assert_eq!(c.eval(0.0).unwrap(), 0.0);
        assert_eq!(c.eval(a).unwrap(), b);
        assert_eq!(c.x_max(), 3.0);
        assert!(matches!(c.eval(3.0 + 1e-9), Err(Error::OutOfDomain { .. })));
        assert!(matches!(c.eval(-1e-12), Err(Error::OutOfDomain { .. })));
        assert!(c.ys().windows(2).all(|w| w[1] > w[0]));
        assert!(c.xs().len() >= 500);
    }

    #[test]
    fn branches_stay_in_their_rectangles() {
        let c = curve(1.5, 4.0, 0.3);
        let SaddleSpectrum { a, b, .. } = *c.spectrum();
        assert!(c.left_branch().iter().all(|s| s.x <= a + 1e-6 && s.y <= b + 1e-6));
        assert!(c.right_branch().iter().all(|s| s.x >= a - 1e-6 && s.y >= b - 1e-6));
    }

    #[test]
    fn tangent_to_stable_direction() {
        let c = curve(2.0, 3.0, 2.0);
        let (a, m) = (c.spectrum().a, c.spectrum().m);
        let h = 1e-4;
        let centred = (c.eval(a + h).unwrap() - c.eval(a - h).unwrap()) / (2.0 * h);
        assert!((centred - m).abs() < 1e-3 * m);
        assert!((c.derivative(a).unwrap() - m).abs() < 1e-4);
    }

    #[test]
    fn seeding_offset_is_negligible() {
        let d = offset_sensitivity(&q(2.0, 3.0, 2.0), &Default::default(), &Default::default()).unwrap();
        assert!(d < 1e-8, "{d}");
    }

    #[test]
    fn model_function() {
        let p = q(2.0, 3.0, 2.0);
        assert_eq!(model_separatrix(&p, 0.0), 0.0);
        assert!((model_separatrix(&p, 0.2) - 0.4).abs() < 1e-15);
        let c = compute_separatrix(&p, &Default::default(), &Default::default()).unwrap();
        // the model function undershoots by about 18% here
        let s = c.eval(0.1).unwrap();
        let gap = (s - model_separatrix(&p, 0.1)) / s;
        assert!(gap > 0.15 && gap < 0.2, "{gap}");
    }

    #[test]
    fn slope_field_examples() {
        let p = q(2.0, 2.0, 1.0);
        assert!((slope_field(State::new(0.1, 0.1), &p).unwrap() - 1.0).abs() < 1e-14);
        let p = q(2.0, 3.0, 2.0);
        let spec = saddle_spectrum(&p).unwrap();
        assert_eq!(slope_field(spec.saddle(), &p).unwrap(), spec.m);
        // point on the nullcline 1 - x - alpha y = 0, away from the saddle
        let on_null = State::new(0.5, 0.25);
        assert!(matches!(slope_field(on_null, &p), Err(Error::FCloseToZero { .. })));
        assert!(slope_field(State::new(0.1, 0.1), &p).unwrap() > 0.0);
    }

    #[test]
    fn residual_vanishes_at_unit_delta() {
        let c = curve(2.0, 3.0, 1.0);
        for x in [0.01, 0.1, 0.2, 0.5, 1.0, 2.5] {
            assert!(integral_residual(&c, x).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn residual_small_off_unit_delta() {
        let c = curve(2.0, 3.0, 2.0);
        assert!(integral_residual(&c, c.spectrum().a).unwrap().abs() < 1e-14);
        for x in [0.05, 0.5, 1.0] {
            let s = c.eval(x).unwrap();
            let r = integral_residual(&c, x).unwrap();
            assert!(r.abs() < 1e-4 * s, "x={x} r={r}");
        }
    }

    #[test]
    fn oracle_examples() {
        let cfg = IntegrationConfig::default();
        let y = bisection_oracle(&q(2.0, 2.0, 1.0), 0.4, &cfg, 1e-6).unwrap();
        assert!((y - 0.4).abs() < 1e-5);
        let y = bisection_oracle(&q(2.0, 3.0, 1.0), 0.3, &cfg, 1e-6).unwrap();
        assert!((y - 0.6).abs() < 1e-5);
    }

    #[test]
    fn oracle_matches_curve() {
        let p = q(2.0, 3.0, 2.0);
        let c = compute_separatrix(&p, &Default::default(), &Default::default()).unwrap();
        for x in [0.05, 0.1, c.spectrum().a, 0.5, 1.0] {
            let y = bisection_oracle(&p, x, &Default::default(), 1e-7).unwrap();
            assert!((y - c.eval(x).unwrap()).abs() < 1e-5, "x={x}");
        }
    }

    #[test]
    fn invalid_configs() {
        let p = q(2.0, 3.0, 1.0);
        let icfg = IntegrationConfig::default();
        for cfg in [
            SeparatrixBuildConfig { eigen_offset: 0.0, ..Default::default() },
            SeparatrixBuildConfig { eigen_offset: 2e-3, ..Default::default() },
            SeparatrixBuildConfig { x_max: 0.1, ..Default::default() },
            SeparatrixBuildConfig { resample_count: 3, ..Default::default() },
        ] {
            assert!(matches!(compute_separatrix(&p, &cfg, &icfg), Err(Error::InvalidConfig(_))));
        }
        let weak = q(0.5, 2.0, 1.0);
        assert!(compute_separatrix(&weak, &Default::default(), &icfg).unwrap_err().is_regime_violation());
    }

    #[test]
    fn csv_has_one_row_per_knot() {
        let c = curve(2.0, 2.0, 1.0);
        let text = String::from_utf8(c.write_csv(Vec::new()).unwrap()).unwrap();
        assert!(text.starts_with("x,y\n0,0\n"));
        assert_eq!(text.lines().count(), c.xs().len() + 1);
    }
}
