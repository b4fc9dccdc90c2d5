//! Dimensional and nondimensional competition systems, equilibria and the
//! closed-form eigen-structure of the coexistence saddle.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

/// Parameters of the dimensional model in population units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionalParams {
    pub r_n: f64,
    pub r_i: f64,
    pub k_n: f64,
    pub k_i: f64,
    pub a: f64,
    pub b: f64,
}

impl DimensionalParams {
    pub fn new(r_n: f64, r_i: f64, k_n: f64, k_i: f64, a: f64, b: f64) -> Result<Self> {
        Ok(Self {
            r_n: check_positive("r_n", r_n)?,
            r_i: check_positive("r_i", r_i)?,
            k_n: check_positive("k_n", k_n)?,
            k_i: check_positive("k_i", k_i)?,
            a: check_positive("a", a)?,
            b: check_positive("b", b)?,
        })
    }
}

/// One of the three nondimensional model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Alpha,
    Beta,
    Delta,
}

impl Param {
    pub const ALL: [Param; 3] = [Param::Alpha, Param::Beta, Param::Delta];

    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Beta => "beta",
            Param::Delta => "delta",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The triple `(alpha, beta, delta)` of the nondimensional system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NondimParams {
    alpha: f64,
    beta: f64,
    delta: f64,
}

impl NondimParams {
    pub fn new(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        Ok(Self {
            alpha: check_positive("alpha", alpha)?,
            beta: check_positive("beta", beta)?,
            delta: check_positive("delta", delta)?,
        })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[inline]
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::Alpha => self.alpha,
            Param::Beta => self.beta,
            Param::Delta => self.delta,
        }
    }

    /// Copy with one parameter replaced.
    pub fn with(&self, p: Param, value: f64) -> Result<Self> {
        let mut out = *self;
        let slot = match p {
            Param::Alpha => &mut out.alpha,
            Param::Beta => &mut out.beta,
            Param::Delta => &mut out.delta,
        };
        *slot = check_positive(p.name(), value)?;
        Ok(out)
    }

    /// Coexistence point `(A, B)`, or `None` when `alpha beta = 1` and the
    /// nullclines are parallel.
    pub fn coexistence(&self) -> Option<State> {
        let den = self.alpha * self.beta - 1.0;
        if den == 0.0 {
            return None;
        }
        Some(State::new(
            (self.alpha - 1.0) / den,
            (self.beta - 1.0) / den,
        ))
    }

    pub fn regime(&self) -> RegimeClass {
        classify_regime(self)
    }

    /// `Ok` iff the parameters are strictly inside the bistable regime.
    pub fn require_strong(&self) -> Result<()> {
        if self.alpha == 1.0 {
            return Err(Error::BoundaryRegime { name: "alpha" });
        }
        if self.beta == 1.0 {
            return Err(Error::BoundaryRegime { name: "beta" });
        }
        match classify_regime(self) {
            RegimeClass::StrongCompetition => Ok(()),
            RegimeClass::Other(_) => Err(Error::NotStrongCompetition {
                alpha: self.alpha,
                beta: self.beta,
            }),
        }
    }
}

/// Nondimensional densities `x = N/K_N`, `y = I/K_I`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct State {
    pub x: f64,
    pub y: f64,
}

impl State {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &State) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Which condition of the strong regime fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegimeViolation {
    AlphaAtMostOne,
    BetaAtMostOne,
    BothAtMostOne,
}

impl fmt::Display for RegimeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegimeViolation::AlphaAtMostOne => "alpha <= 1",
            RegimeViolation::BetaAtMostOne => "beta <= 1",
            RegimeViolation::BothAtMostOne => "alpha <= 1 and beta <= 1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegimeClass {
    StrongCompetition,
    Other(RegimeViolation),
}

impl RegimeClass {
    pub fn is_strong(&self) -> bool {
        matches!(self, RegimeClass::StrongCompetition)
    }
}

pub fn classify_regime(q: &NondimParams) -> RegimeClass {
    match (q.alpha > 1.0, q.beta > 1.0) {
        (true, true) => RegimeClass::StrongCompetition,
        (false, true) => RegimeClass::Other(RegimeViolation::AlphaAtMostOne),
        (true, false) => RegimeClass::Other(RegimeViolation::BetaAtMostOne),
        (false, false) => RegimeClass::Other(RegimeViolation::BothAtMostOne),
    }
}

/// `alpha = a K_I / K_N`, `beta = b K_N / K_I`, `delta = r_I / r_N`.
pub fn nondimensionalize(p: &DimensionalParams) -> NondimParams {
    NondimParams {
        alpha: p.a * p.k_i / p.k_n,
        beta: p.b * p.k_n / p.k_i,
        delta: p.r_i / p.r_n,
    }
}

/// Right-hand side `(f, g)` of the nondimensional system.
#[inline]
pub fn vector_field(s: State, q: &NondimParams) -> (f64, f64) {
    (
        s.x * (1.0 - s.x - q.alpha * s.y),
        q.delta * s.y * (1.0 - s.y - q.beta * s.x),
    )
}

/// Row-major Jacobian `[[f_x, f_y], [g_x, g_y]]`.
pub fn jacobian(s: State, q: &NondimParams) -> [[f64; 2]; 2] {
    let (x, y) = (s.x, s.y);
    [
        [1.0 - 2.0 * x - q.alpha * y, -q.alpha * x],
        [-q.delta * q.beta * y, q.delta * (1.0 - 2.0 * y - q.beta * x)],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EquilibriumKind {
    P0,
    PN,
    PI,
    PC,
}

impl fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquilibriumKind::P0 => "P0",
            EquilibriumKind::PN => "PN",
            EquilibriumKind::PI => "PI",
            EquilibriumKind::PC => "PC",
        })
    }
}

/// Linear stability type read off the trace and determinant of the Jacobian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    StableNode,
    UnstableNode,
    Saddle,
    StableFocus,
    UnstableFocus,
    NonHyperbolic,
}

impl Stability {
    pub fn of(j: &[[f64; 2]; 2]) -> Self {
        let tr = j[0][0] + j[1][1];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det < 0.0 {
            return Stability::Saddle;
        }
        if det == 0.0 || tr == 0.0 {
            return Stability::NonHyperbolic;
        }
        let node = tr * tr - 4.0 * det >= 0.0;
        match (tr < 0.0, node) {
            (true, true) => Stability::StableNode,
            (true, false) => Stability::StableFocus,
            (false, true) => Stability::UnstableNode,
            (false, false) => Stability::UnstableFocus,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Stability::StableNode => "stable node",
            Stability::UnstableNode => "unstable node",
            Stability::Saddle => "saddle",
            Stability::StableFocus => "stable focus",
            Stability::UnstableFocus => "unstable focus",
            Stability::NonHyperbolic => "non-hyperbolic",
        }
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub state: State,
    pub stability: Stability,
}

/// The four equilibria. Outside the strong regime `warning` is set and `pc`
/// may be absent (parallel nullclines) or lie outside the open quadrant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumSet {
    pub p0: Equilibrium,
    pub pn: Equilibrium,
    pub pi: Equilibrium,
    pub pc: Option<Equilibrium>,
    pub warning: Option<RegimeViolation>,
}

impl EquilibriumSet {
    pub fn iter(&self) -> impl Iterator<Item = &Equilibrium> {
        [&self.p0, &self.pn, &self.pi]
            .into_iter()
            .chain(self.pc.as_ref())
    }
}

pub fn equilibria(q: &NondimParams) -> EquilibriumSet {
    let make = |kind, state: State| Equilibrium {
        kind,
        state,
        stability: Stability::of(&jacobian(state, q)),
    };
    EquilibriumSet {
        p0: make(EquilibriumKind::P0, State::new(0.0, 0.0)),
        pn: make(EquilibriumKind::PN, State::new(1.0, 0.0)),
        pi: make(EquilibriumKind::PI, State::new(0.0, 1.0)),
        pc: q.coexistence().map(|s| make(EquilibriumKind::PC, s)),
        warning: match classify_regime(q) {
            RegimeClass::StrongCompetition => None,
            RegimeClass::Other(v) => Some(v),
        },
    }
}

/// Closed-form eigen-structure of the Jacobian at the saddle `(A, B)`.
///
/// `v1 = (v11, 1)` spans the stable direction and `v2 = (v21, 1)` the unstable
/// one; `m = 1/v11` and `m_u = 1/v21` are the tangent slopes of the stable and
/// unstable manifolds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleSpectrum {
    pub a: f64,
    pub b: f64,
    pub kappa: f64,
    pub eta: f64,
    pub discriminant: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub m: f64,
    pub m_u: f64,
    pub v11: f64,
    pub v21: f64,
}

impl SaddleSpectrum {
    pub fn saddle(&self) -> State {
        State::new(self.a, self.b)
    }

    /// Unit vector along the stable eigendirection, oriented toward +x.
    pub fn stable_direction(&self) -> (f64, f64) {
        let n = self.v11.hypot(1.0);
        (self.v11 / n, 1.0 / n)
    }

    /// `lambda2 / |lambda1|`, the exponent of the homogeneous modes of the
    /// slope variational equation near the saddle.
    pub fn eigen_ratio(&self) -> f64 {
        -self.lambda2 / self.lambda1
    }
}

pub fn saddle_spectrum(q: &NondimParams) -> Result<SaddleSpectrum> {
    q.require_strong()?;
    let (al, be, de) = (q.alpha, q.beta, q.delta);
    let den = al * be - 1.0;
    let kappa = (al - 1.0) + de * (be - 1.0);
    let eta = (al - 1.0) - de * (be - 1.0);
    let discriminant = kappa * kappa + 4.0 * de * (al - 1.0) * (be - 1.0) * den;
    let root = discriminant.sqrt();
    // root^2 - eta^2 = 4 alpha beta delta (alpha-1)(beta-1); each slope uses
    // whichever of the two equivalent forms adds terms of equal sign.
    let v_den = 2.0 * de * be * (be - 1.0);
    let m_den = 2.0 * al * (al - 1.0);
    let (m, m_u) = if eta >= 0.0 {
        (v_den / (eta + root), -(root + eta) / m_den)
    } else {
        ((root - eta) / m_den, v_den / (eta - root))
    };
    Ok(SaddleSpectrum {
        a: (al - 1.0) / den,
        b: (be - 1.0) / den,
        kappa,
        eta,
        discriminant,
        lambda1: (-kappa - root) / (2.0 * den),
        // (root - kappa)(root + kappa) = 4 delta (alpha-1)(beta-1)(alpha beta-1)
        lambda2: 2.0 * de * (al - 1.0) * (be - 1.0) / (kappa + root),
        m,
        m_u,
        v11: 1.0 / m,
        v21: 1.0 / m_u,
    })
}

/// Tangent lines `l(x)` and `l_u(x)` to the stable and unstable manifolds.
pub fn tangent_lines(spec: &SaddleSpectrum, x: f64) -> (f64, f64) {
    (
        spec.b + spec.m * (x - spec.a),
        spec.b + spec.m_u * (x - spec.a),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn q(a: f64, b: f64, d: f64) -> NondimParams {
        NondimParams::new(a, b, d).unwrap()
    }

    #[test]
    fn nondimensionalize_examples() {
        let p = DimensionalParams::new(1.0, 1.0, 1.0, 1.0, 2.0, 3.0).unwrap();
        assert_eq!(nondimensionalize(&p), q(2.0, 3.0, 1.0));
        let p = DimensionalParams::new(2.0, 1.0, 10.0, 5.0, 4.0, 1.0).unwrap();
        assert_eq!(nondimensionalize(&p), q(2.0, 2.0, 0.5));
        let p = DimensionalParams::new(1.0, 3.0, 1.0, 1.0, 1.5, 2.0).unwrap();
        assert_eq!(nondimensionalize(&p), q(1.5, 2.0, 3.0));
    }

    #[test]
    fn rejects_nonpositive_and_nonfinite() {
        assert!(NondimParams::new(0.0, 2.0, 1.0).is_err());
        assert!(NondimParams::new(2.0, f64::NAN, 1.0).is_err());
        assert!(NondimParams::new(2.0, 2.0, f64::INFINITY).is_err());
        assert!(DimensionalParams::new(1.0, 1.0, -1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn vector_field_vanishes_at_equilibria() {
        let p = q(2.0, 2.0, 1.0);
        assert_eq!(vector_field(State::new(1.0, 0.0), &p), (0.0, 0.0));
        assert_eq!(vector_field(State::new(0.0, 1.0), &p), (0.0, 0.0));
        let (f, g) = vector_field(State::new(1.0 / 3.0, 1.0 / 3.0), &p);
        assert!(f.abs() < 1e-15 && g.abs() < 1e-15);
    }

    #[test]
    fn jacobian_examples() {
        let p = q(2.0, 2.0, 1.0);
        assert_eq!(jacobian(State::new(0.0, 0.0), &p), [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(
            jacobian(State::new(1.0, 0.0), &p),
            [[-1.0, -2.0], [0.0, -1.0]]
        );
    }

    #[test]
    fn equilibria_examples() {
        let e = equilibria(&q(2.0, 2.0, 1.0));
        let pc = e.pc.unwrap();
        assert_relative_eq!(pc.state.x, 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(pc.state.y, 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(pc.stability, Stability::Saddle);
        assert_eq!(e.p0.stability, Stability::UnstableNode);
        assert_eq!(e.pn.stability, Stability::StableNode);
        assert_eq!(e.pi.stability, Stability::StableNode);
        assert!(e.warning.is_none());

        let pc = equilibria(&q(3.0, 2.0, 0.5)).pc.unwrap();
        assert_relative_eq!(pc.state.x, 0.4, epsilon = 1e-15);
        assert_relative_eq!(pc.state.y, 0.2, epsilon = 1e-15);
    }

    #[test]
    fn weak_regime_returns_partial_set_with_warning() {
        let e = equilibria(&q(0.5, 2.0, 1.0));
        assert_eq!(e.warning, Some(RegimeViolation::AlphaAtMostOne));
        assert!(e.pc.is_none());
        let e = equilibria(&q(0.5, 0.5, 1.0));
        assert_eq!(e.warning, Some(RegimeViolation::BothAtMostOne));
        assert_eq!(e.pc.unwrap().stability, Stability::StableNode);
    }

    #[test]
    fn boundary_regime_is_a_distinct_error() {
        assert_eq!(
            saddle_spectrum(&q(1.0, 2.0, 1.0)),
            Err(Error::BoundaryRegime { name: "alpha" })
        );
        assert_eq!(
            saddle_spectrum(&q(2.0, 1.0, 1.0)),
            Err(Error::BoundaryRegime { name: "beta" })
        );
        assert!(matches!(
            saddle_spectrum(&q(0.9, 2.0, 1.0)),
            Err(Error::NotStrongCompetition { .. })
        ));
    }

    #[test]
    fn saddle_spectrum_symmetric_case() {
        let s = saddle_spectrum(&q(2.0, 2.0, 1.0)).unwrap();
        assert_relative_eq!(s.kappa, 2.0);
        assert_relative_eq!(s.eta, 0.0);
        assert_relative_eq!(s.discriminant, 16.0);
        assert_relative_eq!(s.m, 1.0);
        assert_relative_eq!(s.m_u, -1.0);
        assert_relative_eq!(s.lambda1, -1.0);
        assert_relative_eq!(s.lambda2, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn unit_delta_slope_is_b_over_a() {
        for (a, b) in [(2.0, 3.0), (1.5, 4.0), (4.0, 1.5), (7.0, 1.1)] {
            let s = saddle_spectrum(&q(a, b, 1.0)).unwrap();
            assert_relative_eq!(s.m, s.b / s.a, max_relative = 1e-14);
        }
    }

    #[test]
    fn tangent_line_examples() {
        let s = saddle_spectrum(&q(2.0, 2.0, 1.0)).unwrap();
        let (l, lu) = tangent_lines(&s, s.a);
        assert_eq!((l, lu), (s.b, s.b));
        assert_relative_eq!(tangent_lines(&s, 0.0).0, 0.0, epsilon = 1e-15);
        let (l1, lu1) = tangent_lines(&s, 0.5);
        assert!(l1 > l && lu1 < lu);
    }

    #[test]
    fn eigenvectors_satisfy_jacobian_equation() {
        let p = q(3.0, 1.7, 0.4);
        let s = saddle_spectrum(&p).unwrap();
        let j = jacobian(s.saddle(), &p);
        for (v, lam) in [(s.v11, s.lambda1), (s.v21, s.lambda2)] {
            let r0 = j[0][0] * v + j[0][1] - lam * v;
            let r1 = j[1][0] * v + j[1][1] - lam;
            assert!(r0.abs() < 1e-12 && r1.abs() < 1e-12);
        }
    }
}
