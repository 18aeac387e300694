use rayon::prelude::*;

use super::scenario::{FilterSpec, Scenario, Setup};
use crate::error::{Error, Result};

/// Grid of `(K, LO width)` points evaluated with one filter.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scenario: Scenario,
    pub k_values: Vec<f64>,
    pub lo_fwhm_values_nm: Vec<f64>,
    pub filter: FilterSpec,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.k_values.is_empty() || self.lo_fwhm_values_nm.is_empty() {
            return Err(Error::Argument(
                "sweep needs at least one K and one LO width".into(),
            ));
        }
        if let Some(k) = self
            .k_values
            .iter()
            .find(|k| !(**k >= 1.0) || !k.is_finite())
        {
            return Err(Error::Argument(format!(
                "Schmidt numbers must be >= 1, got {k}"
            )));
        }
        Ok(())
    }
}

/// `n` evenly spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub k: f64,
    pub lo_fwhm_nm: f64,
    pub negativity: f64,
    pub success_probability: f64,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(k: f64, lo_fwhm_nm: f64, e: &Error) -> Self {
        Self {
            k,
            lo_fwhm_nm,
            negativity: f64::NAN,
            success_probability: f64::NAN,
            error: Some(e.to_string()),
        }
    }
}

fn sweep_k(spec: &SweepSpec, k: f64, parallel: bool) -> Vec<SweepRow> {
    let setup = match Setup::new(&spec.scenario, k, spec.filter) {
        Ok(s) => s,
        Err(e) => {
            return spec
                .lo_fwhm_values_nm
                .iter()
                .map(|&lo| SweepRow::failed(k, lo, &e))
                .collect()
        }
    };
    let row = |&lo: &f64| match setup.evaluate(lo) {
        Ok(ev) => SweepRow {
            k,
            lo_fwhm_nm: lo,
            negativity: ev.negativity,
            success_probability: ev.success_probability,
            error: None,
        },
        Err(e) => SweepRow::failed(k, lo, &e),
    };
    if parallel {
        spec.lo_fwhm_values_nm.par_iter().map(row).collect()
    } else {
        spec.lo_fwhm_values_nm.iter().map(row).collect()
    }
}

/// One row per `(K, LO)` pair, `K` outermost, in input order. Points are
/// evaluated in parallel; failures become NaN rows carrying the error.
pub fn sweep_negativity(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let blocks: Vec<Vec<SweepRow>> = spec
        .k_values
        .par_iter()
        .map(|&k| sweep_k(spec, k, true))
        .collect();
    Ok(blocks.into_iter().flatten().collect())
}

/// Single-threaded [`sweep_negativity`], for reproducibility checks.
pub fn sweep_negativity_serial(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec
        .k_values
        .iter()
        .flat_map(|&k| sweep_k(spec, k, false))
        .collect())
}
