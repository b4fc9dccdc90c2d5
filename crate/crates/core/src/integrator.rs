//! Adaptive integration of the competition system in forward or backward time
//! with equilibrium detection, and basin classification of initial conditions.

use serde::Serialize;

use crate::dopri::{self, Halt, StepperOptions};
use crate::model::{vector_field, EquilibriumKind, NondimParams, State};

/// Backward trajectories farther than this from the origin have left the
/// region of interest.
const DOMAIN_BOUND: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_time: f64,
    pub min_step: f64,
    pub equilibrium_radius: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-11,
            max_time: 1e4,
            min_step: 1e-12,
            equilibrium_radius: 1e-8,
        }
    }
}

impl IntegrationConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// Largest step allowed for a given time-scale ratio. Outside
    /// `[1e-3, 1e3]` the fast variable bounds the step.
    pub fn step_cap(&self, delta: f64) -> f64 {
        if (1e-3..=1e3).contains(&delta) {
            f64::INFINITY
        } else {
            0.1 / delta.max(1.0)
        }
    }

    pub(crate) fn stepper(&self, delta: f64) -> StepperOptions {
        StepperOptions {
            rtol: self.rel_tol,
            atol: self.abs_tol,
            h_min: self.min_step,
            h_max: self.step_cap(delta),
            h_init: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    ReachedEquilibrium(EquilibriumKind),
    MaxTime,
    LeftDomain,
    StepUnderflow,
}

/// Accepted steps of one integration. Times are negative for backward runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, State)>,
    pub stop_reason: StopReason,
}

impl Trajectory {
    pub fn last(&self) -> State {
        self.samples.last().map(|s| s.1).expect("trajectory has at least one sample")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BasinLabel {
    NativeWins,
    InvaderWins,
    Undecided,
}

impl BasinLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            BasinLabel::NativeWins => "native",
            BasinLabel::InvaderWins => "invader",
            BasinLabel::Undecided => "undecided",
        }
    }

    pub fn from_stop(reason: StopReason) -> Self {
        match reason {
            StopReason::ReachedEquilibrium(EquilibriumKind::PN) => BasinLabel::NativeWins,
            StopReason::ReachedEquilibrium(EquilibriumKind::PI) => BasinLabel::InvaderWins,
            _ => BasinLabel::Undecided,
        }
    }
}

fn targets(q: &NondimParams, direction: Direction) -> Vec<(EquilibriumKind, State)> {
    let mut out = vec![
        (EquilibriumKind::P0, State::new(0.0, 0.0)),
        (EquilibriumKind::PN, State::new(1.0, 0.0)),
        (EquilibriumKind::PI, State::new(0.0, 1.0)),
    ];
    // a forward run only settles on the saddle from its stable manifold, which
    // numerically never happens; there it is reported through MaxTime instead
    if direction == Direction::Backward {
        if let Some(pc) = q.coexistence() {
            out.push((EquilibriumKind::PC, pc));
        }
    }
    out
}

fn run<S>(
    s0: State,
    q: &NondimParams,
    direction: Direction,
    cfg: &IntegrationConfig,
    mut sink: S,
) -> (StopReason, State)
where
    S: FnMut(f64, State),
{
    let sign = direction.sign();
    let radius = cfg.equilibrium_radius;
    let abs_tol = cfg.abs_tol;

    // starting on any equilibrium, the saddle included, is a trivial stop
    let mut all = targets(q, Direction::Backward);
    all.retain(|(_, p)| s0.distance(p) <= radius);
    if let Some((kind, _)) = all.first() {
        sink(0.0, s0);
        return (StopReason::ReachedEquilibrium(*kind), s0);
    }
    let targets = targets(q, direction);

    let rhs = |_t: f64, w: &[f64; 2]| {
        let (f, g) = vector_field(State::new(w[0], w[1]), q);
        [sign * f, sign * g]
    };
    // both axes are invariant; snap states that drift within abs_tol of them
    let project = |w: &mut [f64; 2]| {
        for c in w.iter_mut() {
            if c.abs() < abs_tol {
                *c = 0.0;
            }
        }
    };
    let observe = |t: f64, w: &[f64; 2]| {
        let s = State::new(w[0], w[1]);
        sink(sign * t, s);
        if !(s.x.is_finite() && s.y.is_finite())
            || s.x < -abs_tol
            || s.y < -abs_tol
            || s.x.max(s.y) > DOMAIN_BOUND
        {
            return Some(StopReason::LeftDomain);
        }
        targets
            .iter()
            .find(|(_, p)| s.distance(p) <= radius)
            .map(|(kind, _)| StopReason::ReachedEquilibrium(*kind))
    };

    let out = dopri::drive(
        rhs,
        [s0.x, s0.y],
        cfg.max_time,
        &cfg.stepper(q.delta()),
        project,
        observe,
    );
    let reason = match out.halt {
        Halt::Event(r) => r,
        Halt::EndReached => StopReason::MaxTime,
        Halt::Underflow => StopReason::StepUnderflow,
        Halt::NonFinite => StopReason::LeftDomain,
    };
    (reason, State::new(out.y[0], out.y[1]))
}

/// Integrate from `s0` until an equilibrium is reached, the time cap expires,
/// the state leaves the domain, or the step controller underflows.
pub fn integrate(
    s0: State,
    q: &NondimParams,
    direction: Direction,
    cfg: &IntegrationConfig,
) -> Trajectory {
    let mut samples = Vec::new();
    let (stop_reason, _) = run(s0, q, direction, cfg, |t, s| samples.push((t, s)));
    Trajectory { samples, stop_reason }
}

/// Final state and stop reason of a forward run, without recording samples.
pub fn forward_endpoint(s0: State, q: &NondimParams, cfg: &IntegrationConfig) -> (StopReason, State) {
    run(s0, q, Direction::Forward, cfg, |_, _| {})
}

/// Which stable equilibrium the forward trajectory from `s0` settles on.
pub fn classify_initial_condition(s0: State, q: &NondimParams, cfg: &IntegrationConfig) -> BasinLabel {
    BasinLabel::from_stop(forward_endpoint(s0, q, cfg).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: f64, b: f64, d: f64) -> NondimParams {
        NondimParams::new(a, b, d).unwrap()
    }

    #[test]
    fn start_on_equilibrium_is_single_sample() {
        let t = integrate(State::new(1.0, 0.0), &q(2.0, 2.0, 1.0), Direction::Forward, &Default::default());
        assert_eq!(t.samples.len(), 1);
        assert_eq!(t.stop_reason, StopReason::ReachedEquilibrium(EquilibriumKind::PN));
    }

    #[test]
    fn symmetric_points_reach_opposite_equilibria() {
        let p = q(2.0, 2.0, 1.0);
        let cfg = IntegrationConfig::default();
        let below = integrate(State::new(0.5, 0.01), &p, Direction::Forward, &cfg);
        let above = integrate(State::new(0.01, 0.5), &p, Direction::Forward, &cfg);
        assert_eq!(below.stop_reason, StopReason::ReachedEquilibrium(EquilibriumKind::PN));
        assert_eq!(above.stop_reason, StopReason::ReachedEquilibrium(EquilibriumKind::PI));
        assert!(below.last().distance(&State::new(1.0, 0.0)) <= cfg.equilibrium_radius);
    }

    #[test]
    fn times_are_monotone_in_direction() {
        let p = q(2.0, 3.0, 0.7);
        let cfg = IntegrationConfig::default();
        let fwd = integrate(State::new(0.3, 0.2), &p, Direction::Forward, &cfg);
        assert!(fwd.samples.windows(2).all(|w| w[1].0 > w[0].0));
        let bwd = integrate(State::new(0.1, 0.05), &p, Direction::Backward, &cfg);
        assert!(bwd.samples.windows(2).all(|w| w[1].0 < w[0].0));
        assert_eq!(bwd.stop_reason, StopReason::ReachedEquilibrium(EquilibriumKind::P0));
    }

    #[test]
    fn classify_examples() {
        let cfg = IntegrationConfig::default();
        let p = q(2.0, 2.0, 1.0);
        assert_eq!(classify_initial_condition(State::new(0.5, 0.4), &p, &cfg), BasinLabel::NativeWins);
        assert_eq!(classify_initial_condition(State::new(0.4, 0.5), &p, &cfg), BasinLabel::InvaderWins);
        // straddling the exact line y = 2x at unit delta
        let p = q(2.0, 3.0, 1.0);
        assert_eq!(classify_initial_condition(State::new(0.2, 0.35), &p, &cfg), BasinLabel::NativeWins);
        assert_eq!(classify_initial_condition(State::new(0.2, 0.45), &p, &cfg), BasinLabel::InvaderWins);
    }

    #[test]
    fn axis_starts_stay_on_axis() {
        let p = q(2.0, 3.0, 2.0);
        let cfg = IntegrationConfig::default();
        let t = integrate(State::new(0.0, 0.3), &p, Direction::Forward, &cfg);
        assert!(t.samples.iter().all(|(_, s)| s.x == 0.0));
        assert_eq!(t.stop_reason, StopReason::ReachedEquilibrium(EquilibriumKind::PI));
        let t = integrate(State::new(1.7, 0.0), &p, Direction::Forward, &cfg);
        assert!(t.samples.iter().all(|(_, s)| s.y == 0.0));
        assert_eq!(t.stop_reason, StopReason::ReachedEquilibrium(EquilibriumKind::PN));
    }

    #[test]
    fn exact_separatrix_start_is_undecided() {
        // the diagonal is invariant for alpha = beta, delta = 1
        let p = q(2.0, 2.0, 1.0);
        let label = classify_initial_condition(State::new(0.7, 0.7), &p, &Default::default());
        assert_eq!(label, BasinLabel::Undecided);
    }

    #[test]
    fn extreme_delta_caps_the_step() {
        let cfg = IntegrationConfig::default();
        assert!(cfg.step_cap(1.0).is_infinite());
        assert_eq!(cfg.step_cap(1e4), 1e-5);
        assert_eq!(cfg.step_cap(1e-4), 0.1);
        let p = q(2.0, 3.0, 1e4);
        assert_eq!(classify_initial_condition(State::new(0.5, 0.05), &p, &cfg), BasinLabel::NativeWins);
    }
}
