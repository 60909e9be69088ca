//! Jacobi elliptic functions from the flow `ẋ = yz`, `ẏ = −xz`, `ż = −k²xy`,
//! and an independent oracle that inverts the incomplete elliptic integral.

use std::f64::consts::FRAC_PI_2;

use super::integrator::{integrate_field, Controls};
use super::DynamicsError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnCnDn {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

impl SnCnDn {
    fn from_state(x: &[f64]) -> Self {
        Self { sn: x[0], cn: x[1], dn: x[2] }
    }

    /// `sn(−t) = −sn(t)`; `cn` and `dn` are even.
    fn reflected(self) -> Self {
        Self { sn: -self.sn, ..self }
    }
}

fn check_modulus(k: f64) -> Result<(), DynamicsError> {
    if !(0.0..1.0).contains(&k) {
        return Err(DynamicsError::InvalidModulus(k));
    }
    Ok(())
}

/// Tolerances for the ODE route.
pub fn elliptic_controls() -> Controls {
    Controls::tolerances(1e-13, 1e-15)
}

fn field(k: f64) -> impl Fn(&[f64], &mut [f64]) {
    let k2 = k * k;
    move |x, d| {
        d[0] = x[1] * x[2];
        d[1] = -x[0] * x[2];
        d[2] = -k2 * x[0] * x[1];
    }
}

/// `(sn, cn, dn)(t, k)` by integrating from `(0, 1, 1)`.
pub fn jacobi_elliptic(t: f64, k: f64) -> Result<SnCnDn, DynamicsError> {
    Ok(jacobi_elliptic_many(&[t], k)?[0])
}

/// Several times in one pass: the flow is continued from one sorted `|t|` to
/// the next.
pub fn jacobi_elliptic_many(ts: &[f64], k: f64) -> Result<Vec<SnCnDn>, DynamicsError> {
    check_modulus(k)?;
    if let Some(&bad) = ts.iter().find(|t| !t.is_finite()) {
        return Err(DynamicsError::NonFiniteTime(bad));
    }
    let mut order: Vec<usize> = (0..ts.len()).collect();
    order.sort_by(|&a, &b| ts[a].abs().total_cmp(&ts[b].abs()));
    let f = field(k);
    let controls = elliptic_controls();
    let mut out = vec![SnCnDn { sn: 0.0, cn: 1.0, dn: 1.0 }; ts.len()];
    let (mut t, mut x) = (0.0, vec![0.0, 1.0, 1.0]);
    for i in order {
        let target = ts[i].abs();
        if target > t {
            let sol = integrate_field(&f, &x, t, target, &controls)?;
            x = sol.states.last().expect("nonempty").clone();
            t = target;
        }
        let v = SnCnDn::from_state(&x);
        out[i] = if ts[i] < 0.0 { v.reflected() } else { v };
    }
    Ok(out)
}

const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn gauss(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    GL_NODES.iter().zip(GL_WEIGHTS).map(|(x, w)| w * f(m + r * x)).sum::<f64>() * r
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (left, right) = (gauss(f, a, m), gauss(f, m, b));
    if depth == 0 || (left + right - whole).abs() <= tol {
        return left + right;
    }
    adaptive(f, a, m, left, 0.5 * tol, depth - 1) + adaptive(f, m, b, right, 0.5 * tol, depth - 1)
}

/// `F(φ, k) = ∫₀^φ dθ / √(1 − k² sin²θ)`, the incomplete integral of the first
/// kind in its angular form (`x = sin θ`).
pub fn elliptic_f(phi: f64, k: f64) -> f64 {
    let k2 = k * k;
    let integrand = move |th: f64| 1.0 / (1.0 - k2 * th.sin().powi(2)).sqrt();
    if phi == 0.0 {
        return 0.0;
    }
    let (a, b, sign) = if phi > 0.0 { (0.0, phi, 1.0) } else { (phi, 0.0, -1.0) };
    sign * adaptive(&integrand, a, b, gauss(&integrand, a, b), 1e-13, 40)
}

/// Quarter period `K(k) = F(π/2, k)`.
pub fn quarter_period(k: f64) -> Result<f64, DynamicsError> {
    check_modulus(k)?;
    Ok(elliptic_f(FRAC_PI_2, k))
}

/// `(sn, cn, dn)(t, k)` on the primary branch `|t| < K(k)` by solving
/// `F(φ, k) = t` for the amplitude `φ`: bisection, then a Newton polish.
pub fn elliptic_oracle(t: f64, k: f64) -> Result<SnCnDn, DynamicsError> {
    let kk = quarter_period(k)?;
    if t.is_nan() || t.abs() >= kk {
        return Err(DynamicsError::OutsidePrimaryBranch { t, quarter_period: kk });
    }
    let target = t.abs();
    let (mut lo, mut hi) = (0.0, FRAC_PI_2);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if elliptic_f(mid, k) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut phi = 0.5 * (lo + hi);
    // dF/dφ = 1/√(1 − k² sin²φ)
    phi -= (elliptic_f(phi, k) - target) * (1.0 - k * k * phi.sin().powi(2)).sqrt();
    let sn = phi.sin();
    let v = SnCnDn { sn, cn: phi.cos(), dn: (1.0 - k * k * sn * sn).sqrt() };
    Ok(if t < 0.0 { v.reflected() } else { v })
}
