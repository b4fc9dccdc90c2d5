//! Singular-perturbation limits of the separatrix: the line `y = B` as
//! `delta -> 0` and the line `x = A` as `delta -> ∞`.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::IntegrationConfig;
use crate::io::CsvWriter;
use crate::model::{NondimParams, Param};
use crate::separatrix::{compute_separatrix, SeparatrixBuildConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitDirection {
    DeltaToZero,
    DeltaToInfinity,
}

impl LimitDirection {
    pub fn default_ladder(self) -> Vec<f64> {
        match self {
            LimitDirection::DeltaToZero => vec![1.0, 0.3, 0.1, 0.03, 0.01],
            LimitDirection::DeltaToInfinity => vec![1.0, 3.0, 10.0, 30.0, 100.0],
        }
    }
}

pub const DEFAULT_WINDOW: (f64, f64) = (0.2, 0.8);

/// Sup-distance from the limit line over `window`: `|s(x) - B|` over an
/// x-window toward zero, `|s⁻¹(y) - A|` over a y-window toward infinity.
pub fn deviation_from_limit(
    q: &NondimParams,
    direction: LimitDirection,
    window: (f64, f64),
    cfg: &SeparatrixBuildConfig,
    icfg: &IntegrationConfig,
) -> Result<f64> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidConfig(format!("window must satisfy 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let c = compute_separatrix(q, cfg, icfg)?;
    let (a, b) = (c.spectrum().a, c.spectrum().b);
    // s is increasing, so the distance to either line peaks at a window end
    Ok(match direction {
        LimitDirection::DeltaToZero => (c.eval(lo)? - b).abs().max((c.eval(hi)? - b).abs()),
        LimitDirection::DeltaToInfinity => (c.inverse(lo)? - a).abs().max((c.inverse(hi)? - a).abs()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitStudy {
    pub direction: LimitDirection,
    pub ladder: Vec<f64>,
    pub deviations: Vec<f64>,
    pub window: (f64, f64),
}

impl LimitStudy {
    /// Deviations strictly decrease along the ladder.
    pub fn is_monotone(&self) -> bool {
        self.deviations.windows(2).all(|w| w[1] < w[0])
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<W> {
        let mut w = CsvWriter::new(out, &["delta", "deviation"])?;
        for (d, dev) in self.ladder.iter().zip(&self.deviations) {
            w.numbers(&[*d, *dev])?;
        }
        w.finish()
    }
}

/// Deviations for each `delta` of `ladder`, keeping `alpha` and `beta` of `q`.
pub fn limit_study(
    q: &NondimParams,
    direction: LimitDirection,
    ladder: &[f64],
    window: (f64, f64),
    cfg: &SeparatrixBuildConfig,
    icfg: &IntegrationConfig,
) -> Result<LimitStudy> {
    if ladder.is_empty() {
        return Err(Error::InvalidConfig("empty delta ladder".into()));
    }
    let toward = |w: &[f64]| match direction {
        LimitDirection::DeltaToZero => w[1] < w[0],
        LimitDirection::DeltaToInfinity => w[1] > w[0],
    };
    if !ladder.windows(2).all(toward) {
        return Err(Error::InvalidConfig(format!("delta ladder must move strictly toward the {direction:?} limit")));
    }
    let deviations = ladder
        .par_iter()
        .map(|&d| deviation_from_limit(&q.with(Param::Delta, d)?, direction, window, cfg, icfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitStudy { direction, ladder: ladder.to_vec(), deviations, window })
}

/// One-dimensional flow on the slow manifold: `dy/dt` on `x = 1 - alpha y`
/// toward zero, `dx/dt` on `y = 1 - beta x` toward infinity.
pub fn slow_manifold_reduced_flow(q: &NondimParams, direction: LimitDirection, coordinate: f64) -> f64 {
    let (al, be) = (q.alpha(), q.beta());
    match direction {
        LimitDirection::DeltaToZero => {
            let y = coordinate;
            y * (1.0 - y - be * (1.0 - al * y))
        }
        LimitDirection::DeltaToInfinity => {
            let x = coordinate;
            x * (1.0 - x - al * (1.0 - be * x))
        }
    }
}
