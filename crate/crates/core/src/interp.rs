//! Shape-preserving piecewise-cubic Hermite interpolation of monotone data.

/// Cubic Hermite interpolant through strictly increasing abscissae with
/// nondecreasing ordinates. Slopes are limited so the interpolant never
/// overshoots its data.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

fn hermite_derivative(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let dh00 = 6.0 * t2 - 6.0 * t;
    let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
    let dh01 = -dh00;
    let dh11 = 3.0 * t2 - 2.0 * t;
    (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1
}

/// Cubic Hermite value on one interval; shared with callers that keep their
/// own sample arrays.
pub fn hermite_segment(x: [f64; 2], y: [f64; 2], d: [f64; 2], at: f64) -> f64 {
    hermite(x[0], x[1], y[0], y[1], d[0], d[1], at)
}

impl MonotoneCubic {
    /// Interpolant with caller-supplied knot slopes, passed through the
    /// Fritsch–Carlson limiter.
    ///
    /// Panics if the inputs differ in length, hold fewer than two knots, or
    /// the abscissae are not strictly increasing.
    pub fn with_slopes(xs: Vec<f64>, ys: Vec<f64>, mut ds: Vec<f64>) -> Self {
        assert!(xs.len() >= 2 && xs.len() == ys.len() && xs.len() == ds.len());
        assert!(xs.windows(2).all(|w| w[1] > w[0]), "abscissae must increase");
        for d in ds.iter_mut() {
            if !(*d >= 0.0) {
                *d = 0.0;
            }
        }
        for k in 0..xs.len() - 1 {
            let secant = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
            if secant <= 0.0 {
                ds[k] = 0.0;
                ds[k + 1] = 0.0;
                continue;
            }
            let a = (ds[k] / secant).min(1e8);
            let b = (ds[k + 1] / secant).min(1e8);
            let r2 = a * a + b * b;
            if r2 > 9.0 {
                let tau = 3.0 / r2.sqrt();
                ds[k] = tau * a * secant;
                ds[k + 1] = tau * b * secant;
            }
        }
        Self { xs, ys, ds }
    }

    /// PCHIP slopes from the data alone (weighted harmonic mean of secants).
    pub fn pchip(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && n == ys.len());
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
        let mut ds = vec![0.0; n];
        if n == 2 {
            ds[0] = del[0];
            ds[1] = del[0];
        } else {
            for k in 1..n - 1 {
                if del[k - 1] * del[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    ds[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
                }
            }
            ds[0] = end_slope(h[0], h[1], del[0], del[1]);
            ds[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        }
        Self::with_slopes(xs, ys, ds)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn slopes(&self) -> &[f64] {
        &self.ds
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    fn segment(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&v| v <= x);
        k.clamp(1, self.xs.len() - 1) - 1
    }

    /// Value at `x`; extrapolates with the end cubics outside the domain.
    pub fn eval(&self, x: f64) -> f64 {
        let k = self.segment(x);
        if x == self.xs[k] {
            return self.ys[k];
        }
        if x == self.xs[k + 1] || self.ys[k] == self.ys[k + 1] {
            return self.ys[k + 1];
        }
        hermite(self.xs[k], self.xs[k + 1], self.ys[k], self.ys[k + 1], self.ds[k], self.ds[k + 1], x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let k = self.segment(x);
        hermite_derivative(self.xs[k], self.xs[k + 1], self.ys[k], self.ys[k + 1], self.ds[k], self.ds[k + 1], x)
    }

    /// Abscissa where the interpolant takes value `y`, for `y` inside the
    /// range of the data. Returns `None` outside that range.
    pub fn inverse(&self, y: f64) -> Option<f64> {
        let (y_lo, y_hi) = (self.ys[0], *self.ys.last().unwrap());
        if !(y >= y_lo && y <= y_hi) {
            return None;
        }
        let j = self.ys.partition_point(|&v| v < y);
        if j < self.ys.len() && self.ys[j] == y {
            return Some(self.xs[j]);
        }
        let k = j - 1;
        let (mut lo, mut hi) = (self.xs[k], self.xs[k + 1]);
        let f = |x: f64| hermite(self.xs[k], self.xs[k + 1], self.ys[k], self.ys[k + 1], self.ds[k], self.ds[k + 1], x) - y;
        // safeguarded Newton inside a shrinking bracket
        let mut x = lo + (hi - lo) * (y - self.ys[k]) / (self.ys[k + 1] - self.ys[k]);
        for _ in 0..100 {
            let fx = f(x);
            if fx == 0.0 {
                return Some(x);
            }
            if fx < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = hermite_derivative(self.xs[k], self.xs[k + 1], self.ys[k], self.ys[k + 1], self.ds[k], self.ds[k + 1], x);
            let newton = x - fx / d;
            x = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        Some(x)
    }
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        0.0
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}
