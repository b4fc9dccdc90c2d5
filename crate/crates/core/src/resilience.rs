//! Precariousness and latitude of the native-wins state.
//!
//! Precariousness at native density `x0` is `s(x0)`, the smallest invader
//! density that flips the outcome. Latitude is the area of the native basin
//! inside the unit square, `∫₀¹ min(s(x), 1) dx`; the integrand is clipped
//! because the basin is intersected with the square.

use std::io::{self, Write};

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::{classify_initial_condition, BasinLabel, IntegrationConfig};
use crate::io::{fmt_g17, CsvWriter};
use crate::model::{NondimParams, State};
use crate::quadrature::{integrate_with_breaks, QuadratureOptions};
use crate::separatrix::SeparatrixCurve;

pub fn precariousness(c: &SeparatrixCurve, x0: f64) -> Result<f64> {
    c.eval(x0)
}

pub fn latitude(c: &SeparatrixCurve) -> Result<f64> {
    // past the crossing s = 1 the integrand is identically 1
    let crossing = c.inverse(1.0).ok().filter(|&x| x < 1.0);
    let upper = crossing.unwrap_or(1.0).min(c.x_max());
    let opts = QuadratureOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_intervals: 200 };
    let area = integrate_with_breaks(|x| c.eval(x).map_or(f64::NAN, |s| s.min(1.0)), 0.0, upper, c.xs(), &opts)?;
    if upper < 1.0 && crossing.is_none() {
        // the curve was truncated below x = 1; valid only if it had already
        // left the unit square
        let top = *c.ys().last().unwrap();
        if top < 1.0 {
            return Err(Error::OutOfDomain { x: 1.0, lo: 0.0, hi: c.x_max() });
        }
    }
    Ok((area + (1.0 - upper)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloLatitude {
    pub estimate: f64,
    pub se: f64,
    pub n: usize,
    pub seed: u64,
    pub undecided: usize,
}

/// Uniform point of the open unit square for sample `index`. Each index owns
/// a ChaCha8 stream, so the draw does not depend on evaluation order.
fn sample_point(seed: u64, index: u64) -> State {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    State::new(rng.sample(Open01), rng.sample(Open01))
}

pub fn latitude_monte_carlo(q: &NondimParams, n: usize, seed: u64, icfg: &IntegrationConfig) -> Result<MonteCarloLatitude> {
    if n < 100 {
        return Err(Error::InvalidConfig(format!("Monte Carlo sample count must be at least 100, got {n}")));
    }
    let (native, undecided) = (0..n as u64)
        .into_par_iter()
        .map(|i| match classify_initial_condition(sample_point(seed, i), q, icfg) {
            BasinLabel::NativeWins => (1usize, 0usize),
            BasinLabel::InvaderWins => (0, 0),
            BasinLabel::Undecided => (0, 1),
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let decided = n - undecided;
    let (estimate, se) = if decided == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let p = native as f64 / decided as f64;
        (p, (p * (1.0 - p) / decided as f64).sqrt())
    };
    Ok(MonteCarloLatitude { estimate, se, n, seed, undecided })
}

/// Labels at the cell centres of a square grid over the unit square, row by
/// row from the bottom.
#[derive(Debug, Clone, PartialEq)]
pub struct BasinGrid {
    pub resolution: usize,
    pub labels: Vec<BasinLabel>,
}

impl BasinGrid {
    pub fn center(&self, i: usize, j: usize) -> State {
        let h = 1.0 / self.resolution as f64;
        State::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)
    }

    /// Label of the cell in column `i` (x) and row `j` (y).
    pub fn label(&self, i: usize, j: usize) -> BasinLabel {
        self.labels[j * self.resolution + i]
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<W> {
        let mut w = CsvWriter::new(out, &["x", "y", "label"])?;
        for j in 0..self.resolution {
            for i in 0..self.resolution {
                let c = self.center(i, j);
                w.fields(&[fmt_g17(c.x), fmt_g17(c.y), self.label(i, j).as_str().to_string()])?;
            }
        }
        w.finish()
    }
}

pub fn basin_grid(q: &NondimParams, resolution: usize, icfg: &IntegrationConfig) -> Result<BasinGrid> {
    if resolution < 2 {
        return Err(Error::InvalidConfig(format!("grid resolution must be at least 2, got {resolution}")));
    }
    let mut grid = BasinGrid { resolution, labels: Vec::new() };
    grid.labels = (0..resolution * resolution)
        .into_par_iter()
        .map(|k| classify_initial_condition(grid.center(k % resolution, k / resolution), q, icfg))
        .collect();
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResilienceReport {
    pub params: NondimParams,
    pub precariousness: Vec<(f64, f64)>,
    pub latitude: f64,
    pub latitude_mc: MonteCarloLatitude,
    pub basin_grid: Option<BasinGrid>,
}

#[derive(Serialize)]
struct ParamsJson {
    alpha: f64,
    beta: f64,
    delta: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    params: ParamsJson,
    latitude: f64,
    latitude_mc: &'a MonteCarloLatitude,
    precariousness: Vec<[f64; 2]>,
}

impl ResilienceReport {
    pub fn build(
        curve: &SeparatrixCurve,
        x0: &[f64],
        mc_n: usize,
        seed: u64,
        grid: Option<usize>,
        icfg: &IntegrationConfig,
    ) -> Result<Self> {
        let q = *curve.params();
        let precariousness = x0.iter().map(|&x| Ok((x, precariousness(curve, x)?))).collect::<Result<_>>()?;
        Ok(Self {
            params: q,
            precariousness,
            latitude: latitude(curve)?,
            latitude_mc: latitude_monte_carlo(&q, mc_n, seed, icfg)?,
            basin_grid: grid.map(|r| basin_grid(&q, r, icfg)).transpose()?,
        })
    }

    /// JSON without the basin grid, which is exported separately as CSV.
    pub fn to_json(&self) -> serde_json::Value {
        let view = ReportJson {
            params: ParamsJson { alpha: self.params.alpha(), beta: self.params.beta(), delta: self.params.delta() },
            latitude: self.latitude,
            latitude_mc: &self.latitude_mc,
            precariousness: self.precariousness.iter().map(|&(x, p)| [x, p]).collect(),
        };
        serde_json::to_value(view).expect("report is always serializable")
    }

    /// Whether quadrature and Monte Carlo agree within `k` standard errors.
    pub fn agrees_within(&self, k: f64) -> bool {
        (self.latitude - self.latitude_mc.estimate).abs() <= k * self.latitude_mc.se
    }
}
