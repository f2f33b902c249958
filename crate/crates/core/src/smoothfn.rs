//! The fixed window u: support [1/2, 3], identically 1 on [1, 2], with
//! exp(-1/t) mollifier ramps, and its Fourier transform
//! u_hat(t) = int u(x) e(-x t) dx.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_complex, GaussLegendre};

pub const SUPPORT_LEFT: f64 = 0.5;
pub const PLATEAU_LEFT: f64 = 1.0;
pub const PLATEAU_RIGHT: f64 = 2.0;
pub const SUPPORT_RIGHT: f64 = 3.0;

/// Frozen bounds for |u'| and |u''| (see the smoothfn calibration tests).
pub const FIRST_DERIVATIVE_BOUND: f64 = 10.0;
pub const SECOND_DERIVATIVE_BOUND: f64 = 300.0;

/// Frozen constants C_j with int |u_hat(s)| |s|^j ds <= C_j, j = 0, 1, 2
/// (measured 1.5873, 0.8404, 1.4282, plus 5%).
pub const SCALED_DECAY_CONSTANTS: [f64; 3] = [1.67, 0.89, 1.5];

pub const MAX_TRANSFORM_ARGUMENT: f64 = 1e4;

fn e_flat(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Smooth step: 0 for t <= 0, 1 for t >= 1, psi(t) + psi(1-t) = 1.
pub fn psi(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = e_flat(t);
    let b = e_flat(1.0 - t);
    a / (a + b)
}

pub fn u_eval(x: f64) -> f64 {
    if x <= SUPPORT_LEFT || x >= SUPPORT_RIGHT {
        0.0
    } else if x < PLATEAU_LEFT {
        psi(2.0 * (x - 0.5))
    } else if x <= PLATEAU_RIGHT {
        1.0
    } else {
        psi(SUPPORT_RIGHT - x)
    }
}

#[derive(Debug, Clone)]
pub struct SmoothWindow {
    rule: GaussLegendre,
    tol: f64,
}

impl Default for SmoothWindow {
    fn default() -> Self {
        Self::new(20, 1e-14)
    }
}

static WINDOW: OnceLock<SmoothWindow> = OnceLock::new();

/// Shared default window.
pub fn window() -> &'static SmoothWindow {
    WINDOW.get_or_init(SmoothWindow::default)
}

impl SmoothWindow {
    pub fn new(nodes: usize, tol: f64) -> Self {
        SmoothWindow { rule: GaussLegendre::new(nodes), tol }
    }

    pub fn u(&self, x: f64) -> f64 {
        u_eval(x)
    }

    /// Fourier transform of an arbitrary function supported on [a, b] whose
    /// only possible kinks are at the listed breakpoints.
    pub fn transform_of<F: Fn(f64) -> f64>(&self, f: &F, breaks: &[f64], t: f64) -> Complex64 {
        let g = |x: f64| Complex64::from_polar(f(x), -TAU * x * t);
        let pieces = breaks.len().saturating_sub(1).max(1);
        // rounding in the phase x t grows with |t|, and so must the target
        let tol = self.tol * (1.0 + t.abs()) / pieces as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for w in breaks.windows(2) {
            acc += adaptive_complex(&self.rule, &g, w[0], w[1], tol).0;
        }
        acc
    }

    pub fn u_hat(&self, t: f64) -> Result<Complex64> {
        if !(t.abs() <= MAX_TRANSFORM_ARGUMENT) {
            return Err(Error::RangeExceeded(format!(
                "u_hat needs |t| <= {MAX_TRANSFORM_ARGUMENT:e}, got {t}"
            )));
        }
        Ok(self.u_hat_unchecked(t))
    }

    fn u_hat_unchecked(&self, t: f64) -> Complex64 {
        if t < 0.0 {
            return self.u_hat_unchecked(-t).conj();
        }
        self.transform_of(
            &u_eval,
            &[SUPPORT_LEFT, PLATEAU_LEFT, PLATEAU_RIGHT, SUPPORT_RIGHT],
            t,
        )
    }

    /// u_hat at many points, evaluated in parallel; output order matches input.
    pub fn u_hat_many(&self, ts: &[f64]) -> Result<Vec<Complex64>> {
        ts.par_iter().map(|&t| self.u_hat(t)).collect()
    }

    /// int_{|t| <= T} u_hat(t) t^j dt. The exact integral over R is zero for
    /// every j because u vanishes near 0.
    pub fn u_hat_moment(&self, j: u32, big_t: f64) -> Result<Complex64> {
        if j > 12 {
            return Err(Error::RangeExceeded("u_hat_moment needs j <= 12".into()));
        }
        if !(big_t > 0.0) || big_t > MAX_TRANSFORM_ARGUMENT {
            return Err(Error::RangeExceeded("u_hat_moment needs 0 < T <= 1e4".into()));
        }
        let panels = (big_t / 0.25).ceil().max(1.0) as usize;
        let width = big_t / panels as f64;
        let half: Vec<Complex64> = (0..panels)
            .into_par_iter()
            .map(|i| {
                let lo = i as f64 * width;
                self.rule.integrate_complex(
                    &|t: f64| self.u_hat_unchecked(t) * t.powi(j as i32),
                    lo,
                    lo + width,
                )
            })
            .collect();
        let s: Complex64 = half.iter().sum();
        // the negative half contributes (-1)^j conj(s)
        Ok(if j % 2 == 0 {
            Complex64::new(2.0 * s.re, 0.0)
        } else {
            Complex64::new(0.0, 2.0 * s.im)
        })
    }
}

const DECAY_GRID_STEP: f64 = 0.25;
const DECAY_GRID_MAX: f64 = 250.0;

static DECAY_ENVELOPE: OnceLock<Vec<f64>> = OnceLock::new();

// suffix maxima of |u_hat| on the grid 0, 0.25, ..., 250
fn decay_envelope() -> &'static [f64] {
    DECAY_ENVELOPE.get_or_init(|| {
        let n = (DECAY_GRID_MAX / DECAY_GRID_STEP) as usize + 1;
        let ts: Vec<f64> = (0..n).map(|i| i as f64 * DECAY_GRID_STEP).collect();
        let vals = window().u_hat_many(&ts).expect("grid within range");
        let mut env: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
        for i in (0..n - 1).rev() {
            env[i] = env[i].max(env[i + 1]);
        }
        env
    })
}

/// Smallest s on a 0.25-spaced grid beyond which |u_hat| stays below
/// rel * u_hat(0) (up to the grid end at 250).
pub fn decay_radius(rel: f64) -> f64 {
    let env = decay_envelope();
    let target = rel * env[0];
    match env.iter().position(|&e| e <= target) {
        Some(i) => i as f64 * DECAY_GRID_STEP,
        None => DECAY_GRID_MAX,
    }
}
