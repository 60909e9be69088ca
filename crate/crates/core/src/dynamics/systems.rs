use std::sync::Arc;

use nalgebra::DMatrix;

use super::integrator::{integrate_field, Controls};
use super::trajectory::Trajectory;
use super::DynamicsError;
use crate::plucker::PluckerVector;
use crate::poisson::{BracketSource, LiePoissonE3, PluckerBracket, QuadraticForm, ScalarFunction};

/// A bracket, a Hamiltonian and named functions to monitor along flows.
#[derive(Clone)]
pub struct HamiltonianSystem {
    source: Arc<dyn BracketSource>,
    hamiltonian: Arc<dyn ScalarFunction>,
    monitors: Vec<(String, Arc<dyn ScalarFunction>)>,
}

impl std::fmt::Debug for HamiltonianSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HamiltonianSystem")
            .field("dim", &self.dim())
            .field("monitors", &self.monitor_names())
            .finish()
    }
}

impl HamiltonianSystem {
    pub fn new(source: Arc<dyn BracketSource>, hamiltonian: Arc<dyn ScalarFunction>) -> Self {
        Self { source, hamiltonian, monitors: Vec::new() }
    }

    pub fn with_monitor(mut self, name: impl Into<String>, f: Arc<dyn ScalarFunction>) -> Self {
        self.monitors.push((name.into(), f));
        self
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn source(&self) -> &Arc<dyn BracketSource> {
        &self.source
    }

    pub fn hamiltonian(&self) -> &Arc<dyn ScalarFunction> {
        &self.hamiltonian
    }

    pub fn monitor_names(&self) -> Vec<String> {
        self.monitors.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn monitor_values(&self, x: &[f64]) -> Vec<f64> {
        self.monitors.iter().map(|(_, f)| f.value(x)).collect()
    }

    fn check(&self, x: &[f64]) -> Result<(), DynamicsError> {
        if x.len() != self.dim() {
            return Err(DynamicsError::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(())
    }

    /// `P(x) ∇H(x)`.
    pub fn vector_field(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        self.check(x)?;
        let mut out = vec![0.0; x.len()];
        self.field_into(x, &mut out);
        Ok(out)
    }

    fn field_into(&self, x: &[f64], out: &mut [f64]) {
        let p = self.source.structure_matrix(x);
        let g = self.hamiltonian.gradient(x);
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..g.len()).map(|j| p[(i, j)] * g[j]).sum();
        }
    }

    pub fn integrate(&self, x0: &[f64], t_end: f64, controls: &Controls) -> Result<Trajectory, DynamicsError> {
        self.check(x0)?;
        let raw = integrate_field(|x, d| self.field_into(x, d), x0, 0.0, t_end, controls)?;
        Ok(Trajectory::from_raw(raw, self.monitor_names(), |x| self.monitor_values(x)))
    }
}

/// `max_x ‖P_A∇H_A − P_B∇H_B‖ / max(1, ‖P_A∇H_A‖)`.
pub fn bihamiltonian_residual(
    a: &HamiltonianSystem,
    b: &HamiltonianSystem,
    points: &[Vec<f64>],
) -> Result<f64, DynamicsError> {
    if a.dim() != b.dim() {
        return Err(DynamicsError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let mut worst: f64 = 0.0;
    for x in points {
        let (fa, fb) = (a.vector_field(x)?, b.vector_field(x)?);
        let diff = fa.iter().zip(&fb).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
        let norm = fa.iter().map(|u| u * u).sum::<f64>().sqrt();
        worst = worst.max(diff / norm.max(1.0));
    }
    Ok(worst)
}

fn three_dim(pi12: f64, pi13: f64, pi23: f64) -> PluckerBracket {
    PluckerBracket::new(PluckerVector::new(3, vec![pi12, pi13, pi23]).expect("nonzero"))
        .expect("three-dimensional brackets are Poisson")
}

/// `{x, y} = 0`, `{x, z} = y`, `{y, z} = −x`.
pub fn pi1() -> PluckerBracket {
    three_dim(0.0, 1.0, -1.0)
}

/// `{x, y} = z`, `{x, z} = 0`, `{y, z} = k²x`.
pub fn pi2(k: f64) -> PluckerBracket {
    three_dim(1.0, 0.0, k * k)
}

/// `{x, y} = z`, `{x, z} = ½k²y`, `{y, z} = ½k²x`.
pub fn poisson3(k: f64) -> PluckerBracket {
    three_dim(1.0, 0.5 * k * k, 0.5 * k * k)
}

/// `ẋ = yz`, `ẏ = −xz`, `ż = −k²xy` as `π₁` with `H₁ = ½(k²x² + z²)`,
/// monitoring `F = x² + y²` and `G = k²x² + z²`.
pub fn jacobi_system(k: f64) -> HamiltonianSystem {
    HamiltonianSystem::new(Arc::new(pi1()), Arc::new(QuadraticForm::diagonal(&[k * k, 0.0, 1.0])))
        .with_monitor("F", Arc::new(QuadraticForm::diagonal(&[2.0, 2.0, 0.0])))
        .with_monitor("G", Arc::new(QuadraticForm::diagonal(&[2.0 * k * k, 0.0, 2.0])))
}

/// Rigid body in an ideal fluid on `e(3)`: `h = ½(Σ λ_i x_i² + Σ κ_i y_i²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClebschParameters {
    pub lambda: [f64; 3],
    pub kappa: [f64; 3],
}

impl ClebschParameters {
    pub fn hamiltonian(&self) -> QuadraticForm {
        let [l1, l2, l3] = self.lambda;
        let [k1, k2, k3] = self.kappa;
        QuadraticForm::diagonal(&[l1, l2, l3, k1, k2, k3])
    }

    /// `(λ₂−λ₃)/κ₁ + (λ₃−λ₁)/κ₂ + (λ₁−λ₂)/κ₃`.
    pub fn condition_residual(&self) -> Result<f64, DynamicsError> {
        let [l1, l2, l3] = self.lambda;
        let [k1, k2, k3] = self.kappa;
        if k1 == 0.0 || k2 == 0.0 || k3 == 0.0 {
            return Err(DynamicsError::ZeroParameter);
        }
        Ok((l2 - l3) / k1 + (l3 - l1) / k2 + (l1 - l2) / k3)
    }

    /// `κ₁(κ₂−κ₃)/(λ₂−λ₃)` and its two cyclic shifts. They agree exactly
    /// when the condition holds.
    pub fn c_ratios(&self) -> Result<[f64; 3], DynamicsError> {
        let [l1, l2, l3] = self.lambda;
        let [k1, k2, k3] = self.kappa;
        if l1 == l2 || l2 == l3 || l1 == l3 {
            return Err(DynamicsError::DegenerateClebsch);
        }
        Ok([k1 * (k2 - k3) / (l2 - l3), k2 * (k3 - k1) / (l3 - l1), k3 * (k1 - k2) / (l1 - l2)])
    }

    /// `f₃ = c|y|² + Σ κ_i x_i²` with `c` the first ratio.
    pub fn extra_integral(&self) -> Result<QuadraticForm, DynamicsError> {
        let c = self.c_ratios()?[0];
        let [k1, k2, k3] = self.kappa;
        Ok(QuadraticForm::diagonal(&[2.0 * k1, 2.0 * k2, 2.0 * k3, 2.0 * c, 2.0 * c, 2.0 * c]))
    }
}

/// `|x|²` and `x · y`.
pub fn e3_casimirs() -> [QuadraticForm; 2] {
    let mut m = DMatrix::zeros(6, 6);
    for a in 0..3 {
        m[(a, 3 + a)] = 1.0;
        m[(3 + a, a)] = 1.0;
    }
    [QuadraticForm::diagonal(&[2.0, 2.0, 2.0, 0.0, 0.0, 0.0]), QuadraticForm::new(m)]
}

/// The `e(3)` system of `h`, monitoring `h`, both Casimirs and, for pairwise
/// distinct `λ`, the extra integral.
pub fn clebsch_system(params: ClebschParameters) -> HamiltonianSystem {
    let [f1, f2] = e3_casimirs();
    let mut sys = HamiltonianSystem::new(Arc::new(LiePoissonE3), Arc::new(params.hamiltonian()))
        .with_monitor("h", Arc::new(params.hamiltonian()))
        .with_monitor("f1", Arc::new(f1))
        .with_monitor("f2", Arc::new(f2));
    if let Ok(f3) = params.extra_integral() {
        sys = sys.with_monitor("f3", Arc::new(f3));
    }
    sys
}

/// The Plücker bracket `π₁₃ = −4c₁c₃`, `π₁₄ = −4c₁c₄`, `π₂₃ = −4c₂c₃`,
/// `π₂₄ = −4c₂c₄` (others zero).
pub fn fairlie_bracket(c: [f64; 4]) -> Result<PluckerBracket, DynamicsError> {
    if c.contains(&0.0) {
        return Err(DynamicsError::ZeroParameter);
    }
    let pi = PluckerVector::from_entries(
        4,
        [
            (0, 2, -4.0 * c[0] * c[2]),
            (0, 3, -4.0 * c[0] * c[3]),
            (1, 2, -4.0 * c[1] * c[2]),
            (1, 3, -4.0 * c[1] * c[3]),
        ],
    )?;
    Ok(PluckerBracket::new(pi)?)
}

/// `ẋ_i = c_i Π_{m≠i} x_m` with `H = (x₁²/c₁ + x₂²/c₂ − x₃²/c₃ − x₄²/c₄)/16`,
/// monitoring `H`, `f₁ = c₂x₁² − c₁x₂²` and `f₂ = c₄x₃² − c₃x₄²`.
pub fn fairlie_system(c: [f64; 4]) -> Result<HamiltonianSystem, DynamicsError> {
    let bracket = fairlie_bracket(c)?;
    let h = QuadraticForm::diagonal(&[
        1.0 / (8.0 * c[0]),
        1.0 / (8.0 * c[1]),
        -1.0 / (8.0 * c[2]),
        -1.0 / (8.0 * c[3]),
    ]);
    Ok(HamiltonianSystem::new(Arc::new(bracket), Arc::new(h.clone()))
        .with_monitor("H", Arc::new(h))
        .with_monitor("f1", Arc::new(QuadraticForm::diagonal(&[2.0 * c[1], -2.0 * c[0], 0.0, 0.0])))
        .with_monitor("f2", Arc::new(QuadraticForm::diagonal(&[0.0, 0.0, 2.0 * c[3], -2.0 * c[2]]))))
}
