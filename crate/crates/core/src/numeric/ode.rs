//! Adaptive Dormand–Prince 5(4) integration over a real parameter, for real or
//! complex states.

use nalgebra::ComplexField;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_min: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-11, atol: 1e-13, max_steps: 2_000_000, h_min: 1e-14 }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// One-step-at-a-time integrator with a first-same-as-last stage cache.
pub struct Stepper<T: ComplexField<RealField = f64> + Copy, F: FnMut(f64, &[T]) -> Vec<T>> {
    f: F,
    pub s: f64,
    pub y: Vec<T>,
    h: f64,
    k1: Vec<T>,
    opts: OdeOptions,
    pub steps: usize,
    /// Sum of accepted local error estimates (in units of the mixed tolerance).
    pub err_sum: f64,
}

impl<T: ComplexField<RealField = f64> + Copy, F: FnMut(f64, &[T]) -> Vec<T>> Stepper<T, F> {
    pub fn new(mut f: F, s0: f64, y0: Vec<T>, h0: f64, opts: OdeOptions) -> Self {
        let k1 = f(s0, &y0);
        Stepper { f, s: s0, y: y0, h: h0, k1, opts, steps: 0, err_sum: 0.0 }
    }

    /// Derivative at the current point.
    pub fn slope(&self) -> &[T] {
        &self.k1
    }

    /// Advances by one accepted step of length at most `h_cap`, not beyond `s_end`.
    /// Returns the step length taken.
    pub fn step(&mut self, h_cap: f64, s_end: f64) -> Result<f64> {
        let n = self.y.len();
        loop {
            if self.steps >= self.opts.max_steps {
                return Err(Error::ToleranceNotMet(format!("step budget exhausted at s = {}", self.s)));
            }
            let h = self.h.min(h_cap).min(s_end - self.s);
            let last = h >= s_end - self.s;
            if h < self.opts.h_min && !last {
                return Err(Error::ToleranceNotMet(format!("step size underflow at s = {}", self.s)));
            }
            let mut k: Vec<Vec<T>> = Vec::with_capacity(7);
            k.push(self.k1.clone());
            let mut y5 = self.y.clone();
            for st in 1..7 {
                let mut ys = self.y.clone();
                for (j, kj) in k.iter().enumerate().take(st) {
                    let a = A[st][j];
                    if a != 0.0 {
                        for i in 0..n {
                            ys[i] += kj[i] * T::from_real(h * a);
                        }
                    }
                }
                if st == 6 {
                    y5 = ys.clone();
                }
                let ks = (self.f)(self.s + C[st] * h, &ys);
                k.push(ks);
            }
            let mut err: f64 = 0.0;
            for i in 0..n {
                let mut e = T::zero();
                for (st, kst) in k.iter().enumerate() {
                    e += kst[i] * T::from_real(h * (B5[st] - B4[st]));
                }
                let sc = self.opts.atol + self.opts.rtol * self.y[i].modulus().max(y5[i].modulus());
                err = err.max(e.modulus() / sc);
            }
            if !err.is_finite() {
                self.h = h * 0.25;
                self.steps += 1;
                continue;
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            self.steps += 1;
            if err <= 1.0 {
                self.s = if last { s_end } else { self.s + h };
                self.y = y5;
                self.k1 = k.pop().unwrap();
                self.err_sum += err;
                if !last || fac > 1.0 {
                    self.h = h * fac;
                }
                return Ok(h);
            }
            self.h = h * fac.min(1.0);
        }
    }
}

pub struct OdeSolution<T> {
    /// Where integration ended: `s1`, or the point at which `on_step` stopped it.
    pub s: f64,
    pub y: Vec<T>,
    pub steps: usize,
    pub err_sum: f64,
}

/// Integrates from `s0` to `s1 > s0`. `cap(s, y)` bounds the next step length;
/// `on_step` sees every accepted point and returns `true` to stop there.
pub fn integrate<T, F>(
    f: F,
    s0: f64,
    s1: f64,
    y0: Vec<T>,
    opts: &OdeOptions,
    mut cap: impl FnMut(f64, &[T]) -> f64,
    mut on_step: impl FnMut(f64, &[T]) -> Result<bool>,
) -> Result<OdeSolution<T>>
where
    T: ComplexField<RealField = f64> + Copy,
    F: FnMut(f64, &[T]) -> Vec<T>,
{
    let h0 = ((s1 - s0) * 1e-3).max(opts.h_min * 10.0);
    let mut st = Stepper::new(f, s0, y0, h0, opts.clone());
    while st.s < s1 {
        let c = cap(st.s, &st.y);
        st.step(c, s1)?;
        if on_step(st.s, &st.y)? {
            break;
        }
    }
    Ok(OdeSolution { s: st.s, y: st.y, steps: st.steps, err_sum: st.err_sum })
}
