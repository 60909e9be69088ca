//! Dormand–Prince 5(4) with PI step control, and classical fixed-step RK4.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Dopri5,
    Rk4,
}

/// Integration controls. `step` is the fixed step for [`Method::Rk4`] and is
/// ignored by the adaptive method.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Controls {
    pub rtol: f64,
    pub atol: f64,
    pub method: Method,
    pub step: f64,
    pub max_steps: usize,
}

impl Default for Controls {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12, method: Method::Dopri5, step: 1e-2, max_steps: 2_000_000 }
    }
}

impl Controls {
    pub fn tolerances(rtol: f64, atol: f64) -> Self {
        Self { rtol, atol, ..Self::default() }
    }

    pub fn rk4(step: f64) -> Self {
        Self { method: Method::Rk4, step, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
    pub final_step: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrationError {
    #[error("step size underflow at t = {t} (solution blows up)")]
    StepSizeUnderflow { t: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("step limit reached at t = {t}")]
    MaxSteps { t: f64 },
    #[error("invalid controls: {0}")]
    InvalidControls(&'static str),
    #[error("invalid time interval [{t0}, {t_end}]")]
    InvalidInterval { t0: f64, t_end: f64 },
}

impl IntegrationError {
    /// Time at which the run stopped, if it started.
    pub fn time(&self) -> Option<f64> {
        match self {
            Self::StepSizeUnderflow { t } | Self::NonFinite { t } | Self::MaxSteps { t } => Some(*t),
            _ => None,
        }
    }
}

/// Accepted points `(t, x, ẋ)` of a run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawSolution {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub derivatives: Vec<Vec<f64>>,
    pub stats: StepStats,
}

impl RawSolution {
    fn push(&mut self, t: f64, x: &[f64], dx: &[f64]) {
        self.times.push(t);
        self.states.push(x.to_vec());
        self.derivatives.push(dx.to_vec());
    }
}

// autonomous fields only, so the stage times c_i are not needed
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;
const BETA: f64 = 0.04;

fn min_step(t: f64) -> f64 {
    16.0 * f64::EPSILON * t.abs().max(1.0)
}

fn combine(out: &mut [f64], x: &[f64], h: f64, coeffs: &[f64], ks: &[Vec<f64>]) {
    for i in 0..x.len() {
        let mut s = 0.0;
        for (c, k) in coeffs.iter().zip(ks) {
            s += c * k[i];
        }
        out[i] = x[i] + h * s;
    }
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

fn validate(t0: f64, t_end: f64, x0: &[f64], controls: &Controls) -> Result<(), IntegrationError> {
    if !(t0.is_finite() && t_end.is_finite() && t_end >= t0) {
        return Err(IntegrationError::InvalidInterval { t0, t_end });
    }
    if !all_finite(x0) {
        return Err(IntegrationError::NonFinite { t: t0 });
    }
    match controls.method {
        Method::Dopri5 if !(controls.rtol > 0.0 && controls.atol > 0.0) => {
            Err(IntegrationError::InvalidControls("rtol and atol must be positive"))
        }
        Method::Rk4 if !(controls.step > 0.0 && controls.step.is_finite()) => {
            Err(IntegrationError::InvalidControls("rk4 step must be positive"))
        }
        _ => Ok(()),
    }
}

/// Integrates `ẋ = f(x)` from `t0` to `t_end ≥ t0`, recording every accepted
/// step.
pub fn integrate_field<F>(
    f: F,
    x0: &[f64],
    t0: f64,
    t_end: f64,
    controls: &Controls,
) -> Result<RawSolution, IntegrationError>
where
    F: Fn(&[f64], &mut [f64]),
{
    validate(t0, t_end, x0, controls)?;
    match controls.method {
        Method::Dopri5 => dopri5(&f, x0, t0, t_end, controls),
        Method::Rk4 => rk4(&f, x0, t0, t_end, controls),
    }
}

fn error_norm(err: &[f64], x: &[f64], y: &[f64], c: &Controls) -> f64 {
    let n = x.len().max(1) as f64;
    let s: f64 = err
        .iter()
        .zip(x.iter().zip(y))
        .map(|(e, (a, b))| {
            let sc = c.atol + c.rtol * a.abs().max(b.abs());
            (e / sc).powi(2)
        })
        .sum();
    (s / n).sqrt()
}

fn initial_step<F: Fn(&[f64], &mut [f64])>(f: &F, x0: &[f64], f0: &[f64], span: f64, c: &Controls) -> f64 {
    let n = x0.len();
    let sc: Vec<f64> = x0.iter().map(|v| c.atol + c.rtol * v.abs()).collect();
    let rms = |v: &[f64]| (v.iter().zip(&sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n.max(1) as f64).sqrt();
    let (d0, d1) = (rms(x0), rms(f0));
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let x1: Vec<f64> = x0.iter().zip(f0).map(|(x, d)| x + h0 * d).collect();
    let mut f1 = vec![0.0; n];
    f(&x1, &mut f1);
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1).min(span)
}

fn dopri5<F: Fn(&[f64], &mut [f64])>(
    f: &F,
    x0: &[f64],
    t0: f64,
    t_end: f64,
    c: &Controls,
) -> Result<RawSolution, IntegrationError> {
    let n = x0.len();
    let mut sol = RawSolution::default();
    let mut x = x0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    f(&x, &mut k[0]);
    sol.stats.evaluations = 1;
    sol.push(t0, &x, &k[0]);
    if t_end == t0 {
        return Ok(sol);
    }

    let expo1 = 0.2 - 0.75 * BETA;
    let mut facold: f64 = 1e-4;
    let mut t = t0;
    let mut h = initial_step(f, &x, &k[0], t_end - t0, c);
    sol.stats.evaluations += 1;
    let mut reject = false;
    let mut non_finite = false;
    let mut stage = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut err = vec![0.0; n];

    loop {
        if sol.stats.accepted + sol.stats.rejected >= c.max_steps {
            return Err(IntegrationError::MaxSteps { t });
        }
        if h < min_step(t) {
            return Err(if non_finite {
                IntegrationError::NonFinite { t }
            } else {
                IntegrationError::StepSizeUnderflow { t }
            });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        combine(&mut stage, &x, h, &A2, &k[..1]);
        f(&stage, &mut k[1]);
        combine(&mut stage, &x, h, &A3, &k[..2]);
        f(&stage, &mut k[2]);
        combine(&mut stage, &x, h, &A4, &k[..3]);
        f(&stage, &mut k[3]);
        combine(&mut stage, &x, h, &A5, &k[..4]);
        f(&stage, &mut k[4]);
        combine(&mut stage, &x, h, &A6, &k[..5]);
        f(&stage, &mut k[5]);
        combine(&mut y, &x, h, &B, &k[..6]);
        let (head, tail) = k.split_at_mut(6);
        f(&y, &mut tail[0]);
        sol.stats.evaluations += 6;

        for i in 0..n {
            let mut s = 0.0;
            for (e, kk) in E.iter().zip(head.iter().chain(tail.iter())) {
                s += e * kk[i];
            }
            err[i] = h * s;
        }
        let en = error_norm(&err, &x, &y, c);

        if !en.is_finite() || !all_finite(&y) {
            sol.stats.rejected += 1;
            h *= MIN_SCALE;
            reject = true;
            non_finite = true;
            continue;
        }
        non_finite = false;

        let fac11 = en.powf(expo1);
        if en <= 1.0 {
            let fac = (fac11 / facold.powf(BETA) / SAFETY).clamp(1.0 / MAX_SCALE, 1.0 / MIN_SCALE);
            facold = en.max(1e-4);
            t = if last { t_end } else { t + h };
            x.copy_from_slice(&y);
            k.swap(0, 6);
            sol.stats.accepted += 1;
            sol.stats.final_step = h;
            sol.push(t, &x, &k[0]);
            if last {
                return Ok(sol);
            }
            let mut hnew = h / fac;
            if reject {
                hnew = hnew.min(h);
            }
            reject = false;
            h = hnew;
        } else {
            sol.stats.rejected += 1;
            reject = true;
            h /= (fac11 / SAFETY).min(1.0 / MIN_SCALE);
        }
    }
}

fn rk4<F: Fn(&[f64], &mut [f64])>(
    f: &F,
    x0: &[f64],
    t0: f64,
    t_end: f64,
    c: &Controls,
) -> Result<RawSolution, IntegrationError> {
    let n = x0.len();
    let mut sol = RawSolution::default();
    let mut x = x0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 4];
    let mut dx = vec![0.0; n];
    let mut stage = vec![0.0; n];
    f(&x, &mut dx);
    sol.stats.evaluations = 1;
    sol.push(t0, &x, &dx);
    let steps = ((t_end - t0) / c.step).ceil() as usize;
    if steps > c.max_steps {
        return Err(IntegrationError::MaxSteps { t: t0 });
    }
    let mut t = t0;
    for s in 0..steps {
        let t_next = if s + 1 == steps { t_end } else { t0 + (s + 1) as f64 * c.step };
        let h = t_next - t;
        k[0].copy_from_slice(&dx);
        combine(&mut stage, &x, h, &[0.5], &k[..1]);
        f(&stage, &mut k[1]);
        combine(&mut stage, &x, h, &[0.0, 0.5], &k[..2]);
        f(&stage, &mut k[2]);
        combine(&mut stage, &x, h, &[0.0, 0.0, 1.0], &k[..3]);
        f(&stage, &mut k[3]);
        combine(&mut stage, &x, h, &[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0], &k);
        x.copy_from_slice(&stage);
        t = t_next;
        if !all_finite(&x) {
            return Err(IntegrationError::NonFinite { t });
        }
        f(&x, &mut dx);
        sol.stats.evaluations += 4;
        sol.stats.accepted += 1;
        sol.stats.final_step = h;
        sol.push(t, &x, &dx);
    }
    Ok(sol)
}

/// Cubic Hermite interpolation on `[t0, t1]` from end values and slopes.
pub fn hermite(t0: f64, x0: &[f64], d0: &[f64], t1: f64, x1: &[f64], d1: &[f64], t: f64) -> Vec<f64> {
    let h = t1 - t0;
    if h == 0.0 {
        return x0.to_vec();
    }
    let s = (t - t0) / h;
    let h00 = (1.0 + 2.0 * s) * (1.0 - s).powi(2);
    let h10 = s * (1.0 - s).powi(2);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = s * s * (s - 1.0);
    (0..x0.len())
        .map(|i| h00 * x0[i] + h10 * h * d0[i] + h01 * x1[i] + h11 * h * d1[i])
        .collect()
}
