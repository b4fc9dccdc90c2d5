//! Dormand–Prince 5(4) stepping with PI step-size control over a fixed-size
//! state. The independent variable always advances from 0 toward `span > 0`;
//! callers fold the direction of integration into the right-hand side.

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// difference between the 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
// h_new = h / fac with fac clamped to [1/10, 5]
const FAC_GROW: f64 = 0.1;
const FAC_SHRINK: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct StepperOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub h_init: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Halt<R> {
    Event(R),
    EndReached,
    Underflow,
    NonFinite,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Outcome<const N: usize, R> {
    pub t: f64,
    pub y: [f64; N],
    pub halt: Halt<R>,
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn initial_step<const N: usize>(y: &[f64; N], f: &[f64; N], opts: &StepperOptions) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        let sc = opts.atol + opts.rtol * y[i].abs();
        d0 += (y[i] / sc).powi(2);
        d1 += (f[i] / sc).powi(2);
    }
    let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
}

/// Integrate `y' = rhs(t, y)` over `[0, span]`.
///
/// After every accepted step `project` may adjust the state in place and then
/// `observe` may request a stop. `observe` is also called once on the initial
/// state before any step is taken.
pub(crate) fn drive<const N: usize, R, F, P, O>(
    rhs: F,
    y0: [f64; N],
    span: f64,
    opts: &StepperOptions,
    mut project: P,
    mut observe: O,
) -> Outcome<N, R>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    P: FnMut(&mut [f64; N]),
    O: FnMut(f64, &[f64; N]) -> Option<R>,
{
    let mut t = 0.0;
    let mut y = y0;
    if let Some(r) = observe(t, &y) {
        return Outcome { t, y, halt: Halt::Event(r) };
    }
    let mut k1 = rhs(t, &y);
    let mut h = opts
        .h_init
        .unwrap_or_else(|| initial_step(&y, &k1, opts))
        .min(opts.h_max)
        .min(span);
    let mut fac_old: f64 = 1e-4;
    let mut rejected_last = false;

    loop {
        if t >= span {
            return Outcome { t, y, halt: Halt::EndReached };
        }
        let last = t + h >= span;
        if last {
            h = span - t;
        }
        if h < opts.h_min && !last {
            return Outcome { t, y, halt: Halt::Underflow };
        }

        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = rhs(t + h, &y_new);

        let mut err = 0.0;
        let mut finite = true;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc).powi(2);
            finite &= y_new[i].is_finite() && k7[i].is_finite();
        }
        let err = (err / N as f64).sqrt();

        if !finite || !err.is_finite() {
            // shrink hard and retry; give up once the step underflows
            h *= 0.1;
            rejected_last = true;
            if h < opts.h_min {
                return Outcome { t, y, halt: Halt::NonFinite };
            }
            continue;
        }

        let fac11 = err.powf(EXPO1);
        if err <= 1.0 {
            let mut fac = fac11 / fac_old.powf(BETA);
            fac = (fac / SAFETY).clamp(FAC_GROW, FAC_SHRINK);
            let mut h_new = h / fac;
            if rejected_last {
                h_new = h_new.min(h);
            }
            fac_old = err.max(1e-4);
            rejected_last = false;

            t = if last { span } else { t + h };
            y = y_new;
            project(&mut y);
            k1 = if y == y_new { k7 } else { rhs(t, &y) };
            if let Some(r) = observe(t, &y) {
                return Outcome { t, y, halt: Halt::Event(r) };
            }
            h = h_new.min(opts.h_max);
        } else {
            h /= (fac11 / SAFETY).min(FAC_SHRINK);
            rejected_last = true;
        }
    }
}
