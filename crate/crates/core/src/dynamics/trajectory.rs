use std::io::{self, Write};

use serde::Serialize;

use super::integrator::{hermite, RawSolution, StepStats};

/// Accepted steps of one run together with the monitored invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub derivatives: Vec<Vec<f64>>,
    pub invariant_names: Vec<String>,
    /// One row per step, one column per invariant.
    pub invariant_values: Vec<Vec<f64>>,
    pub stats: StepStats,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Drift {
    pub name: String,
    pub initial: f64,
    pub absolute: f64,
    /// `absolute / max(1, |f(x(0))|)`
    pub relative: f64,
}

impl Trajectory {
    pub(crate) fn from_raw(raw: RawSolution, names: Vec<String>, eval: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let invariant_values = raw.states.iter().map(|x| eval(x)).collect();
        Self {
            times: raw.times,
            states: raw.states,
            derivatives: raw.derivatives,
            invariant_names: names,
            invariant_values,
            stats: raw.stats,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory has the initial point")
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory has the initial point")
    }

    /// State at `t` by cubic Hermite interpolation between accepted steps.
    /// `None` outside the integrated interval.
    pub fn sample(&self, t: f64) -> Option<Vec<f64>> {
        let (first, last) = (*self.times.first()?, *self.times.last()?);
        if !(first..=last).contains(&t) {
            return None;
        }
        let i = self.times.partition_point(|&s| s < t);
        if self.times[i] == t {
            return Some(self.states[i].clone());
        }
        let j = i - 1;
        Some(hermite(
            self.times[j],
            &self.states[j],
            &self.derivatives[j],
            self.times[i],
            &self.states[i],
            &self.derivatives[i],
            t,
        ))
    }

    /// Largest deviation of each invariant from its initial value.
    pub fn invariant_drift(&self) -> Vec<Drift> {
        self.invariant_names
            .iter()
            .enumerate()
            .map(|(m, name)| {
                let initial = self.invariant_values.first().map_or(0.0, |row| row[m]);
                let absolute = self
                    .invariant_values
                    .iter()
                    .map(|row| (row[m] - initial).abs())
                    .fold(0.0, f64::max);
                Drift { name: name.clone(), initial, absolute, relative: absolute / initial.abs().max(1.0) }
            })
            .collect()
    }

    pub fn max_relative_drift(&self) -> f64 {
        self.invariant_drift().iter().map(|d| d.relative).fold(0.0, f64::max)
    }

    /// `t,x1,...,xn,inv1,...,invm` followed by one row per step, each
    /// value written with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let n = self.states.first().map_or(0, Vec::len);
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("x{i}")));
        header.extend((1..=self.invariant_names.len()).map(|i| format!("inv{i}")));
        w.write_all(header.join(",").as_bytes())?;
        w.write_all(b"\n")?;
        for ((t, x), inv) in self.times.iter().zip(&self.states).zip(&self.invariant_values) {
            let row: Vec<String> = std::iter::once(t).chain(x).chain(inv).map(|v| format!("{v:.16e}")).collect();
            w.write_all(row.join(",").as_bytes())?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}
