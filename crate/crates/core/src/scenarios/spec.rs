use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::dynamics::{Controls, HamiltonianSystem, Method};
use crate::plucker::{pair_index, pair_count, PluckerVector};
use crate::poisson::{
    BracketSource, CanonicalSymplectic, Coordinate, LiePoissonE3, Monomial, PluckerBracket, Polynomial,
    QuadraticForm, ScalarFunction,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BracketKind {
    #[default]
    Plucker,
    E3,
    Canonical,
}

/// One Plücker component, 1-based with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiEntry {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// A scalar function. Quadratic forms are `½ xᵀAx`; `coordinate` is 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionSpec {
    Diagonal(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
    Coordinate(usize),
    Polynomial(Vec<Monomial>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MonitorSpec {
    #[default]
    #[serde(with = "auto")]
    Auto,
    List(Vec<FunctionSpec>),
}

mod auto {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("auto")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        match String::deserialize(d)?.as_str() {
            "auto" => Ok(()),
            other => Err(D::Error::custom(format!("expected \"auto\", found {other:?}"))),
        }
    }
}

fn default_drift_bound() -> f64 {
    1e-6
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// A bracket, optionally with a Hamiltonian system to integrate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    pub dimension: usize,
    #[serde(default)]
    pub bracket: BracketKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pi: Vec<PiEntry>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub unchecked: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default)]
    pub controls: Controls,
    #[serde(default)]
    pub monitor: MonitorSpec,
    #[serde(default = "default_drift_bound")]
    pub drift_bound: f64,
}

fn field(field: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Field { field: field.into(), message: message.into() }
}

impl FunctionSpec {
    pub fn from_quadratic(q: &QuadraticForm) -> Self {
        match q.diagonal_coefficients() {
            Some(d) => FunctionSpec::Diagonal(d),
            None => {
                let m = q.matrix();
                FunctionSpec::Matrix((0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect())
            }
        }
    }

    pub fn build(&self, n: usize, name: &str) -> Result<Arc<dyn ScalarFunction>, ScenarioError> {
        match self {
            FunctionSpec::Diagonal(d) => {
                if d.len() != n {
                    return Err(field(name, format!("diagonal has {} entries, expected {n}", d.len())));
                }
                check_finite(d, name)?;
                Ok(Arc::new(QuadraticForm::diagonal(d)))
            }
            FunctionSpec::Matrix(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(field(name, format!("matrix must be {n}×{n}")));
                }
                let flat: Vec<f64> = rows.iter().flatten().copied().collect();
                check_finite(&flat, name)?;
                Ok(Arc::new(QuadraticForm::new(DMatrix::from_row_slice(n, n, &flat))))
            }
            FunctionSpec::Coordinate(k) => {
                if !(1..=n).contains(k) {
                    return Err(field(name, format!("coordinate {k} outside 1..={n}")));
                }
                Ok(Arc::new(Coordinate { index: k - 1, dim: n }))
            }
            FunctionSpec::Polynomial(terms) => {
                for (t, m) in terms.iter().enumerate() {
                    if m.exponents.len() != n {
                        return Err(field(
                            format!("{name}.polynomial[{t}].exponents"),
                            format!("has {} entries, expected {n}", m.exponents.len()),
                        ));
                    }
                    check_finite(&[m.coefficient], &format!("{name}.polynomial[{t}].coefficient"))?;
                }
                Ok(Arc::new(Polynomial::new(n, terms.clone())))
            }
        }
    }
}

fn check_finite(v: &[f64], name: &str) -> Result<(), ScenarioError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(field(name, "values must be finite"))
    }
}

/// A monitored invariant and its display name.
pub type NamedFunction = (String, Arc<dyn ScalarFunction>);

/// A validated scenario with its bracket and functions built.
#[derive(Clone)]
pub struct BuiltScenario {
    pub spec: ScenarioSpec,
    pub source: Arc<dyn BracketSource>,
    /// Present for the Plücker family.
    pub bracket: Option<PluckerBracket>,
    pub hamiltonian: Option<Arc<dyn ScalarFunction>>,
}

impl ScenarioSpec {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let spec: Self = serde_json::from_str(text).map_err(|e| ScenarioError::Json {
            line: e.line(),
            column: e.column(),
            message: {
                let full = e.to_string();
                let suffix = format!(" at line {} column {}", e.line(), e.column());
                full.strip_suffix(&suffix).unwrap_or(&full).to_string()
            },
        })?;
        spec.build()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Plücker vector from the sparse 1-based entries.
    pub fn plucker_vector(&self) -> Result<PluckerVector, ScenarioError> {
        let n = self.dimension;
        let mut comps = vec![0.0; pair_count(n)];
        let mut seen = vec![false; comps.len()];
        for (e, entry) in self.pi.iter().enumerate() {
            let at = format!("pi[{e}]");
            if !(1 <= entry.i && entry.i < entry.j && entry.j <= n) {
                return Err(field(at, format!("need 1 <= i < j <= {n}, found i={} j={}", entry.i, entry.j)));
            }
            if !entry.value.is_finite() {
                return Err(field(format!("{at}.value"), "must be finite"));
            }
            let idx = pair_index(n, entry.i - 1, entry.j - 1);
            if seen[idx] {
                return Err(field(at, format!("duplicate pair ({}, {})", entry.i, entry.j)));
            }
            seen[idx] = true;
            comps[idx] = entry.value;
        }
        PluckerVector::new(n, comps).map_err(|e| field("pi", e.to_string()))
    }

    pub fn build(&self) -> Result<BuiltScenario, ScenarioError> {
        let n = self.dimension;
        let (source, bracket): (Arc<dyn BracketSource>, Option<PluckerBracket>) = match self.bracket {
            BracketKind::Plucker => {
                if n < 3 {
                    return Err(field("dimension", "Plücker brackets need dimension >= 3"));
                }
                let pi = self.plucker_vector()?;
                let b = if self.unchecked {
                    PluckerBracket::new_unchecked(pi)
                } else {
                    PluckerBracket::new(pi).map_err(|e| field("pi", format!("{e} (set \"unchecked\": true to allow)")))?
                };
                (Arc::new(b.clone()), Some(b))
            }
            BracketKind::E3 => {
                if n != 6 {
                    return Err(field("dimension", "the e3 bracket has dimension 6"));
                }
                self.no_pi()?;
                (Arc::new(LiePoissonE3), None)
            }
            BracketKind::Canonical => {
                if n == 0 || !n.is_multiple_of(2) {
                    return Err(field("dimension", "the canonical bracket needs a positive even dimension"));
                }
                self.no_pi()?;
                (Arc::new(CanonicalSymplectic { degrees_of_freedom: n / 2 }), None)
            }
        };
        let hamiltonian = self.hamiltonian.as_ref().map(|h| h.build(n, "hamiltonian")).transpose()?;
        if let Some(x0) = &self.initial {
            if x0.len() != n {
                return Err(field("initial", format!("has {} entries, expected {n}", x0.len())));
            }
            check_finite(x0, "initial")?;
        }
        if let Some(t) = self.t_end {
            if !(t.is_finite() && t >= 0.0) {
                return Err(field("t_end", "must be finite and >= 0"));
            }
        }
        let c = &self.controls;
        match c.method {
            Method::Dopri5 if !(c.rtol > 0.0 && c.atol > 0.0) => {
                return Err(field("controls", "rtol and atol must be positive"));
            }
            Method::Rk4 if !(c.step > 0.0 && c.step.is_finite()) => {
                return Err(field("controls.step", "must be positive"));
            }
            _ => {}
        }
        if self.drift_bound.is_nan() || self.drift_bound <= 0.0 {
            return Err(field("drift_bound", "must be positive"));
        }
        if let MonitorSpec::List(list) = &self.monitor {
            for (m, f) in list.iter().enumerate() {
                f.build(n, &format!("monitor[{m}]"))?;
            }
        }
        Ok(BuiltScenario { spec: self.clone(), source, bracket, hamiltonian })
    }

    fn no_pi(&self) -> Result<(), ScenarioError> {
        if self.pi.is_empty() {
            Ok(())
        } else {
            Err(field("pi", "only the plucker bracket takes Plücker coordinates"))
        }
    }
}

impl BuiltScenario {
    /// Monitored functions with their labels. `auto` monitors `H` followed by
    /// the structure's Casimirs.
    pub fn monitors(&self) -> Result<Vec<NamedFunction>, ScenarioError> {
        let n = self.spec.dimension;
        match &self.spec.monitor {
            MonitorSpec::List(list) => list
                .iter()
                .enumerate()
                .map(|(m, f)| Ok((format!("inv{}", m + 1), f.build(n, &format!("monitor[{m}]"))?)))
                .collect(),
            MonitorSpec::Auto => {
                let mut out: Vec<(String, Arc<dyn ScalarFunction>)> = Vec::new();
                if let Some(h) = &self.hamiltonian {
                    out.push(("H".into(), h.clone()));
                }
                let casimirs: Vec<QuadraticForm> = match (&self.spec.bracket, &self.bracket) {
                    (BracketKind::Plucker, Some(b)) if b.pi().is_decomposable(crate::plucker::DEFAULT_TOL) => {
                        b.kernel_casimirs()
                    }
                    (BracketKind::E3, _) => crate::dynamics::e3_casimirs().to_vec(),
                    _ => Vec::new(),
                };
                for (m, c) in casimirs.into_iter().enumerate() {
                    out.push((format!("C{}", m + 1), Arc::new(c)));
                }
                Ok(out)
            }
        }
    }

    pub fn system(&self) -> Result<HamiltonianSystem, ScenarioError> {
        let h = self
            .hamiltonian
            .clone()
            .ok_or_else(|| field("hamiltonian", "required to integrate"))?;
        let mut sys = HamiltonianSystem::new(self.source.clone(), h);
        for (name, f) in self.monitors()? {
            sys = sys.with_monitor(name, f);
        }
        Ok(sys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX3: &str = r#"{
        "name": "ex3",
        "dimension": 4,
        "pi": [{"i":1,"j":2,"value":-1}, {"i":1,"j":3,"value":2}, {"i":2,"j":3,"value":-2},
               {"i":2,"j":4,"value":-0.25}, {"i":3,"j":4,"value":0.5}],
        "hamiltonian": {"diagonal": [1, 1, 1, 0]},
        "initial": [0, 1, 1, 1],
        "t_end": 5
    }"#;

    #[test]
    fn parse_and_build() {
        let spec = ScenarioSpec::from_json(EX3).unwrap();
        assert_eq!(spec.bracket, BracketKind::Plucker);
        assert_eq!(spec.monitor, MonitorSpec::Auto);
        assert_eq!(spec.drift_bound, 1e-6);
        let built = spec.build().unwrap();
        assert_eq!(built.bracket.unwrap().pi().get(2, 3), 0.5);
        let names: Vec<String> = built_monitors(&spec);
        assert_eq!(names, vec!["H", "C1", "C2"]);
    }

    fn built_monitors(spec: &ScenarioSpec) -> Vec<String> {
        spec.build().unwrap().monitors().unwrap().into_iter().map(|(n, _)| n).collect()
    }

    #[test]
    fn round_trip() {
        let spec = ScenarioSpec::from_json(EX3).unwrap();
        assert_eq!(ScenarioSpec::from_json(&spec.to_json()).unwrap(), spec);
        let mut listed = spec.clone();
        listed.monitor = MonitorSpec::List(vec![FunctionSpec::Diagonal(vec![0.1, 0.2, 0.3, 0.4])]);
        listed.hamiltonian = Some(FunctionSpec::Matrix(vec![vec![1.0, 0.5, 0.0, 0.0]; 4]));
        assert_eq!(ScenarioSpec::from_json(&listed.to_json()).unwrap(), listed);
    }

    #[test]
    fn json_errors_carry_position() {
        match ScenarioSpec::from_json("{\n  \"name\": \"x\",\n  \"dimension\": \"four\"\n}") {
            Err(ScenarioError::Json { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(ScenarioSpec::from_json("{\"name\":\"x\",\"dimension\":4,\"bogus\":1}"), Err(ScenarioError::Json { .. })));
    }

    #[test]
    fn field_errors_name_the_field() {
        let bad_pair = r#"{"name":"x","dimension":4,"pi":[{"i":3,"j":2,"value":1}]}"#;
        assert!(matches!(ScenarioSpec::from_json(bad_pair), Err(ScenarioError::Field { field, .. }) if field == "pi[0]"));
        let not_poisson = r#"{"name":"x","dimension":4,"pi":[{"i":1,"j":2,"value":1},{"i":3,"j":4,"value":1}]}"#;
        assert!(matches!(ScenarioSpec::from_json(not_poisson), Err(ScenarioError::Field { field, .. }) if field == "pi"));
        let unchecked = r#"{"name":"x","dimension":4,"unchecked":true,"pi":[{"i":1,"j":2,"value":1},{"i":3,"j":4,"value":1}]}"#;
        assert!(ScenarioSpec::from_json(unchecked).is_ok());
        let wrong_len = r#"{"name":"x","dimension":3,"pi":[{"i":1,"j":2,"value":1}],"initial":[1,2]}"#;
        assert!(matches!(ScenarioSpec::from_json(wrong_len), Err(ScenarioError::Field { field, .. }) if field == "initial"));
        let bad_h = r#"{"name":"x","dimension":3,"pi":[{"i":1,"j":2,"value":1}],"hamiltonian":{"coordinate":4}}"#;
        assert!(matches!(ScenarioSpec::from_json(bad_h), Err(ScenarioError::Field { field, .. }) if field == "hamiltonian"));
        let e3 = r#"{"name":"x","dimension":5,"bracket":"e3"}"#;
        assert!(matches!(ScenarioSpec::from_json(e3), Err(ScenarioError::Field { field, .. }) if field == "dimension"));
    }
}
