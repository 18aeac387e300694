use kitten_core::experiments::csv::{Cell, Table};
use kitten_core::experiments::svg::{self, Series};
use kitten_core::experiments::*;
use kitten_core::filtered_basis::FilteredBasis;
use kitten_core::wigner::{
    heralded_photon_purity, wigner_heralded, PhaseSpaceFunction, PhaseSpaceSpec,
    DEFAULT_PHASE_POINTS,
};

use crate::config::{Settings, Shape};
use crate::Failure;

/// CSV table plus an optional figure.
pub struct Output {
    pub table: Table,
    pub figure: Option<String>,
}

fn table_only(table: Table) -> Output {
    Output {
        table,
        figure: None,
    }
}

fn setup(s: &Settings) -> Result<Setup, Failure> {
    Ok(Setup::new(&s.scenario, s.k, s.filter()?)?)
}

fn lo_or_matched(s: &Settings, setup: &Setup) -> Result<f64, Failure> {
    match s.lo_fwhm_nm {
        Some(nm) => Ok(nm),
        None => Ok(setup.matched_lo_nm()?),
    }
}

fn warn_if_leaking(setup: &Setup, lo_nm: f64) -> Result<(), Failure> {
    let lo = setup.lo(lo_nm)?;
    if lo.leaks() {
        eprintln!(
            "warning: {:.3e} of the LO lies outside the {} modelled supermodes",
            lo.residual,
            lo.len()
        );
    }
    Ok(())
}

fn filter_cells(filter: &FilterSpec) -> [Cell; 2] {
    let shape = match filter {
        FilterSpec::None => "none",
        FilterSpec::Rectangular { .. } => "rect",
        FilterSpec::Gaussian { .. } => "gauss",
    };
    [shape.into(), filter.fwhm_nm().unwrap_or(f64::NAN).into()]
}

fn row(k: f64, filter: &FilterSpec, rest: Vec<Cell>) -> Vec<Cell> {
    let mut v: Vec<Cell> = vec![k.into()];
    v.extend(filter_cells(filter));
    v.extend(rest);
    v
}

fn header(rest: &[&str]) -> Table {
    Table::new(
        ["k", "filter", "filter_fwhm_nm"]
            .iter()
            .chain(rest)
            .copied(),
    )
}

pub fn basis(s: &Settings, count: usize) -> Result<Output, Failure> {
    let setup = setup(s)?;
    let count = count.min(setup.basis.n_modes());
    let fb = FilteredBasis::build(&setup.basis, &setup.profile()?, count, count)?;
    let grid = setup.basis.grid();
    let mut names = vec!["detuning_rad_per_s".to_string()];
    names.extend((0..count).map(|k| format!("psi_{k}")));
    names.extend((0..fb.parallel.len()).map(|k| format!("par_{k}")));
    names.extend((0..fb.perp.len()).map(|k| format!("perp_{k}")));
    let mut table = Table::new(names);
    for (i, u) in grid.offsets().enumerate() {
        let mut r: Vec<Cell> = vec![u.into()];
        r.extend((0..count).map(|k| Cell::Num(setup.basis.mode(k)[i])));
        r.extend(fb.parallel.iter().chain(&fb.perp).map(|m| Cell::Num(m[i])));
        table.push(r);
    }
    let figure = s.plot.as_ref().map(|_| {
        let offsets: Vec<f64> = grid.offsets().collect();
        let mut series = Vec::new();
        let mut add = |name: String, v: &[f64]| {
            series.push(Series {
                name,
                points: offsets
                    .iter()
                    .zip(v)
                    .step_by(4)
                    .map(|(&x, &y)| (x, y))
                    .collect(),
            })
        };
        for k in 0..count.min(4) {
            add(format!("ψ{k}"), setup.basis.mode(k));
        }
        for (k, m) in fb.parallel.iter().take(4).enumerate() {
            add(format!("ψ∥{k}"), m);
        }
        for (k, m) in fb.perp.iter().take(4).enumerate() {
            add(format!("ψ⊥{k}"), m);
        }
        svg::line_chart("Spectral modes", "detuning (rad/s)", "amplitude", &series)
    });
    Ok(Output { table, figure })
}

pub fn gamma(s: &Settings) -> Result<Output, Failure> {
    let setup = setup(s)?;
    let n = setup.gamma.n_modes();
    let mut table =
        Table::new(std::iter::once("k".to_string()).chain((0..n).map(|j| j.to_string())));
    for k in 0..n {
        let mut r: Vec<Cell> = vec![k.into()];
        r.extend((0..n).map(|j| Cell::Num(setup.gamma.get(k, j))));
        table.push(r);
    }
    let figure = s.plot.as_ref().map(|_| {
        let m = n.min(40);
        let idx: Vec<f64> = (0..m).map(|k| k as f64).collect();
        let z: Vec<Vec<f64>> = (0..m)
            .map(|k| (0..m).map(|j| setup.gamma.get(k, j)).collect())
            .collect();
        svg::heatmap("Filter overlap γ", "n", "k", &idx, &idx, &z)
    });
    Ok(Output { table, figure })
}

pub fn wigner(s: &Settings, points: Option<usize>) -> Result<Output, Failure> {
    let setup = setup(s)?;
    let lo = lo_or_matched(s, &setup)?;
    warn_if_leaking(&setup, lo)?;
    let params = setup.params(lo)?;
    let n = points
        .or(s.file.phase_points)
        .unwrap_or(DEFAULT_PHASE_POINTS);
    let spec = PhaseSpaceSpec::covering(params.envelope(), n)?;
    let w = wigner_heralded(&params, &spec);
    let mut table = Table::new(["x", "y", "w"]);
    for (i, &x) in w.x_axis.iter().enumerate() {
        for (j, &y) in w.y_axis.iter().enumerate() {
            table.push(vec![x.into(), y.into(), w.at(i, j).into()]);
        }
    }
    let figure = s.plot.as_ref().map(|_| {
        let z: Vec<Vec<f64>> = (0..w.y_axis.len())
            .map(|j| (0..w.x_axis.len()).map(|i| w.at(i, j)).collect())
            .collect();
        svg::heatmap(
            &format!("Heralded Wigner function, K = {}, LO {lo:.3} nm", s.k),
            "x",
            "y",
            &w.x_axis,
            &w.y_axis,
            &z,
        )
    });
    Ok(Output { table, figure })
}

pub fn negativity(s: &Settings) -> Result<Output, Failure> {
    let setup = setup(s)?;
    let lo = lo_or_matched(s, &setup)?;
    warn_if_leaking(&setup, lo)?;
    let e = setup.evaluate(lo)?;
    let mut table = header(&[
        "lo_fwhm_nm",
        "negativity",
        "success_probability",
        "lo_residual",
    ]);
    table.push(row(
        s.k,
        &setup.filter,
        vec![
            lo.into(),
            e.negativity.into(),
            e.success_probability.into(),
            e.lo_residual.into(),
        ],
    ));
    Ok(table_only(table))
}

pub fn fidelity(s: &Settings) -> Result<Output, Failure> {
    let setup = setup(s)?;
    let lo = lo_or_matched(s, &setup)?;
    warn_if_leaking(&setup, lo)?;
    let e = setup.evaluate(lo)?;
    let mut table = header(&["lo_fwhm_nm", "target_s", "fidelity", "success_probability"]);
    table.push(row(
        s.k,
        &setup.filter,
        vec![
            lo.into(),
            setup.target.s.into(),
            e.fidelity.into(),
            e.success_probability.into(),
        ],
    ));
    Ok(table_only(table))
}

pub struct SweepArgs {
    pub k_values: Option<Vec<f64>>,
    pub lo_min_nm: Option<f64>,
    pub lo_max_nm: Option<f64>,
    pub lo_points: Option<usize>,
}

pub fn sweep(s: &Settings, a: SweepArgs) -> Result<Output, Failure> {
    let f = &s.file;
    let k_values = a
        .k_values
        .or_else(|| f.k_values.clone())
        .unwrap_or_else(|| vec![1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 7.0, 9.0]);
    let lo_min = a.lo_min_nm.or(f.lo_min_nm).unwrap_or(0.5);
    let lo_max = a.lo_max_nm.or(f.lo_max_nm).unwrap_or(8.0);
    let points = a.lo_points.or(f.lo_points).unwrap_or(31);
    if !(lo_min > 0.0 && lo_max >= lo_min) || points == 0 {
        return Err(Failure::Argument(format!(
            "invalid LO range {lo_min}..{lo_max} nm with {points} points"
        )));
    }
    let spec = SweepSpec {
        scenario: s.scenario.clone(),
        k_values,
        lo_fwhm_values_nm: linspace(lo_min, lo_max, points),
        filter: s.filter()?,
    };
    let rows = sweep_negativity(&spec)?;
    for r in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "warning: K = {}, LO {} nm: {}",
            r.k,
            r.lo_fwhm_nm,
            r.error.as_deref().unwrap_or("")
        );
    }
    let figure = s.plot.as_ref().map(|_| sweep_heatmap(&spec, &rows));
    Ok(Output {
        table: sweep_table(&rows),
        figure,
    })
}

pub struct LoArgs {
    pub objective: Objective,
    pub lo_min_nm: Option<f64>,
    pub lo_max_nm: Option<f64>,
}

fn lo_search(s: &Settings, lo_min: Option<f64>, lo_max: Option<f64>) -> LoSearch {
    let d = LoSearch::default();
    LoSearch {
        min_nm: lo_min.or(s.file.lo_min_nm).unwrap_or(d.min_nm),
        max_nm: lo_max.or(s.file.lo_max_nm).unwrap_or(d.max_nm),
        ..d
    }
}

pub fn optimize_lo(s: &Settings, a: LoArgs) -> Result<Output, Failure> {
    let setup = setup(s)?;
    let search = lo_search(s, a.lo_min_nm, a.lo_max_nm);
    let opt = optimal_lo(&setup, a.objective, &search)?;
    if opt.degenerate {
        eprintln!("warning: flat objective over the LO range; reporting its midpoint");
    }
    let b = opt.best;
    let objective = match a.objective {
        Objective::Negativity => "negativity",
        Objective::Fidelity => "fidelity",
    };
    let mut table = header(&[
        "objective",
        "lo_fwhm_nm",
        "negativity",
        "fidelity",
        "success_probability",
        "degenerate",
    ]);
    table.push(row(
        s.k,
        &setup.filter,
        vec![
            objective.into(),
            b.lo_fwhm_nm.into(),
            b.negativity.into(),
            b.fidelity.into(),
            b.success_probability.into(),
            opt.degenerate.to_string().into(),
        ],
    ));
    let figure = s.plot.as_ref().map(|_| {
        let mut neg = Vec::new();
        let mut fid = Vec::new();
        for nm in linspace(search.min_nm, search.max_nm, 96) {
            if let Ok(e) = setup.evaluate(nm) {
                neg.push((nm, e.negativity));
                fid.push((nm, e.fidelity));
            }
        }
        svg::line_chart(
            &format!("K = {}, filter: {}", s.k, setup.filter.label()),
            "LO FWHM (nm)",
            "figure of merit",
            &[
                Series {
                    name: "negativity".into(),
                    points: neg,
                },
                Series {
                    name: "fidelity".into(),
                    points: fid,
                },
            ],
        )
    });
    Ok(Output { table, figure })
}

pub fn design(s: &Settings, target_f: Option<f64>) -> Result<Output, Failure> {
    let target = target_f.or(s.file.target_f).unwrap_or(0.95);
    let shape = match s.shape {
        Shape::None | Shape::Rect => FilterSpec::Rectangular { fwhm_nm: 1.0 },
        Shape::Gauss => FilterSpec::Gaussian { fwhm_nm: 1.0 },
    };
    let d = design_for_fidelity(
        &s.scenario,
        s.k,
        target,
        shape,
        &lo_search(s, None, None),
        &FilterSearch::default(),
    )?;
    let filter = shape.with_fwhm(d.optimal_filter_fwhm_nm.unwrap_or(f64::NAN));
    let mut table = header(&[
        "target_f",
        "lo_fwhm_nm",
        "negativity",
        "fidelity",
        "success_probability",
    ]);
    table.push(row(
        s.k,
        &filter,
        vec![
            target.into(),
            d.optimal_lo_fwhm_nm.into(),
            d.achieved_negativity.into(),
            d.achieved_fidelity.into(),
            d.success_probability.into(),
        ],
    ));
    Ok(table_only(table))
}

pub fn purity(s: &Settings) -> Result<Output, Failure> {
    let setup = setup(s)?;
    let p = heralded_photon_purity(&setup.gamma, setup.squeezing.zeta())?;
    let mut table = header(&["purity", "success_probability"]);
    table.push(row(
        s.k,
        &setup.filter,
        vec![p.into(), setup.success_probability()?.into()],
    ));
    Ok(table_only(table))
}
