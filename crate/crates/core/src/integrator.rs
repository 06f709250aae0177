//! Dormand–Prince 5(4) with PI step-size control and the 4th-order continuous
//! extension used for event location.

use crate::error::{Error, Result};

/// Right-hand side of `y' = F(t, y)`. Returning an error marks `(t, y)` as
/// outside the domain; the stepper then rejects the trial step and retries
/// with a smaller one.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            h_init: 1e-3,
            h_min: 1e-14,
            h_max: 1.0,
            max_steps: 1_000_000,
        }
    }
}

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

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - BETA * 0.75;

/// Continuous extension over one accepted step `[t0, t0 + h]`.
#[derive(Debug, Clone, Copy)]
pub struct DenseSegment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn start(&self) -> [f64; N] {
        self.cont[0]
    }

    pub fn end(&self) -> [f64; N] {
        let mut y = self.cont[0];
        for (yi, di) in y.iter_mut().zip(self.cont[1].iter()) {
            *yi += di;
        }
        y
    }

    /// Interpolated state at `t` (meant for `t` inside the segment).
    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.cont;
        let mut y = [0.0; N];
        for i in 0..N {
            y[i] = c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])));
        }
        y
    }
}

/// Adaptive stepper; each call to [`Dopri5::step`] advances by one accepted step.
pub struct Dopri5<'a, S, const N: usize> {
    system: &'a S,
    control: StepControl,
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    fac_old: f64,
    accepted: usize,
    rejected: usize,
    last_rejected: bool,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// Trial step: new state, last stage (= F at the new state), all seven stages
/// and the scaled error norm.
type Trial<const N: usize> = ([f64; N], [f64; N], [[f64; N]; 7], f64);

/// The six stages of one Dormand–Prince step from `(t, y)` with `k1 = F(t, y)`,
/// and the fifth-order solution at `t + h`.
fn stages<S: OdeSystem<N>, const N: usize>(
    sys: &S,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> Result<([f64; N], [[f64; N]; 6])> {
    let k1 = *k1;
    let k2 = sys.rhs(t + C2 * h, &axpy(y, h, &[(A21, &k1)]))?;
    let k3 = sys.rhs(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]))?;
    let k4 = sys.rhs(
        t + C4 * h,
        &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
    )?;
    let k5 = sys.rhs(
        t + C5 * h,
        &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = sys.rhs(
        t + h,
        &axpy(
            y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ),
    )?;
    let y_new = axpy(
        y,
        h,
        &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    Ok((y_new, [k1, k2, k3, k4, k5, k6]))
}

/// One fixed Dormand–Prince step of size `h` from `(t, y)`, without error
/// control. Used to land exactly on an event time inside an accepted step,
/// where it keeps the step's fifth order instead of the interpolant's fourth.
pub fn fixed_step<S: OdeSystem<N>, const N: usize>(
    sys: &S,
    t: f64,
    y: &[f64; N],
    h: f64,
) -> Result<[f64; N]> {
    let k1 = sys.rhs(t, y)?;
    let (y_new, _) = stages(sys, t, y, &k1, h)?;
    if y_new.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("fixed step"));
    }
    Ok(y_new)
}

impl<'a, S: OdeSystem<N>, const N: usize> Dopri5<'a, S, N> {
    pub fn new(system: &'a S, t0: f64, y0: [f64; N], control: StepControl) -> Result<Self> {
        let k1 = system.rhs(t0, &y0)?;
        let h = control.h_init.clamp(control.h_min, control.h_max);
        Ok(Dopri5 {
            system,
            control,
            t: t0,
            y: y0,
            k1,
            h,
            fac_old: 1e-4,
            accepted: 0,
            rejected: 0,
            last_rejected: false,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    pub fn accepted_steps(&self) -> usize {
        self.accepted
    }

    pub fn rejected_steps(&self) -> usize {
        self.rejected
    }

    fn reject(&mut self, shrink: f64) -> Result<()> {
        self.rejected += 1;
        self.last_rejected = true;
        self.h *= shrink;
        if self.h < self.control.h_min {
            return Err(Error::StepUnderflow {
                t: self.t,
                h: self.h,
            });
        }
        Ok(())
    }

    /// Attempts one trial step of size `h`; `None` if a stage left the domain.
    fn attempt(&self, h: f64) -> Option<Trial<N>> {
        let (t, y, sys) = (self.t, &self.y, self.system);
        let (y_new, [k1, k2, k3, k4, k5, k6]) = stages(sys, t, y, &self.k1, h).ok()?;
        if y_new.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let k7 = sys.rhs(t + h, &y_new).ok()?;

        let mut sum = 0.0;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sk = self.control.abs_tol + self.control.rel_tol * y[i].abs().max(y_new[i].abs());
            sum += (e / sk) * (e / sk);
        }
        let err = (sum / N as f64).sqrt();
        if !err.is_finite() {
            return None;
        }
        Some((y_new, k7, [k1, k2, k3, k4, k5, k6, k7], err))
    }

    /// Advances by one accepted step and returns its dense segment.
    pub fn step(&mut self) -> Result<DenseSegment<N>> {
        loop {
            if self.accepted + self.rejected >= self.control.max_steps {
                return Err(Error::MaxStepsExceeded(self.control.max_steps));
            }
            let h = self.h;
            if self.t + h == self.t {
                return Err(Error::StepUnderflow { t: self.t, h });
            }
            let Some((y_new, k7, k, err)) = self.attempt(h) else {
                self.reject(0.25)?;
                continue;
            };

            let fac11 = err.powf(EXPO);
            if err <= 1.0 {
                let fac =
                    (fac11 / self.fac_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                let mut h_new = (h / fac).min(self.control.h_max);
                if self.last_rejected {
                    h_new = h_new.min(h);
                }
                self.fac_old = err.max(1e-4);

                let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - self.y[i]);
                let bspl: [f64; N] = std::array::from_fn(|i| h * k[0][i] - ydiff[i]);
                let cont = [
                    self.y,
                    ydiff,
                    bspl,
                    std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]),
                    std::array::from_fn(|i| {
                        h * (D1 * k[0][i]
                            + D3 * k[2][i]
                            + D4 * k[3][i]
                            + D5 * k[4][i]
                            + D6 * k[5][i]
                            + D7 * k[6][i])
                    }),
                ];
                let segment = DenseSegment {
                    t0: self.t,
                    h,
                    cont,
                };
                self.t += h;
                self.y = y_new;
                self.k1 = k7;
                self.h = h_new;
                self.accepted += 1;
                self.last_rejected = false;
                return Ok(segment);
            }
            let shrink = 1.0 / (fac11 / SAFETY).min(1.0 / FAC_MIN);
            self.reject(shrink)?;
        }
    }
}
