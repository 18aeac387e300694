//! Sweeps, optimizers and table/figure output over the default laboratory
//! scenario. Everything here is `f64`.

pub mod csv;
mod optimize;
mod scenario;
pub mod svg;
mod sweep;

pub use optimize::{
    design_for_fidelity, optimal_lo, optimal_lo_design, DesignResult, FilterSearch, LoOptimum,
    LoSearch, Objective, FLAT_LANDSCAPE,
};
pub use scenario::{Evaluation, FilterSpec, GammaMethod, Scenario, Setup};
pub use sweep::{linspace, sweep_negativity, sweep_negativity_serial, SweepRow, SweepSpec};

use crate::error::Result;
use crate::overlaps::GammaMatrix;
use crate::supermodes::SqueezingSpectrum;

/// `P·θ²` for a tap of power reflectivity `r_s²`.
pub fn success_probability(
    gamma: &GammaMatrix<f64>,
    squeezing: &SqueezingSpectrum<f64>,
    rs2: f64,
) -> Result<f64> {
    crate::wigner::success_probability(gamma, squeezing, rs2.max(0.0).sqrt())
}

/// Sweep rows as a CSV table.
pub fn sweep_table(rows: &[SweepRow]) -> csv::Table {
    let mut t = csv::Table::new([
        "k",
        "lo_fwhm_nm",
        "negativity",
        "success_probability",
        "error",
    ]);
    for r in rows {
        t.push(vec![
            r.k.into(),
            r.lo_fwhm_nm.into(),
            r.negativity.into(),
            r.success_probability.into(),
            r.error.clone().unwrap_or_default().into(),
        ]);
    }
    t
}

/// Heatmap of sweep negativities over `(LO width, K)`.
pub fn sweep_heatmap(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let nl = spec.lo_fwhm_values_nm.len();
    let z: Vec<Vec<f64>> = rows
        .chunks(nl)
        .map(|c| c.iter().map(|r| r.negativity).collect())
        .collect();
    svg::heatmap(
        &format!("Negativity, filter: {}", spec.filter.label()),
        "LO FWHM (nm)",
        "K",
        &spec.lo_fwhm_values_nm,
        &spec.k_values,
        &z,
    )
}
