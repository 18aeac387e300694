use super::scenario::{Evaluation, FilterSpec, Scenario, Setup};
use crate::error::{Error, Result};

/// Quantity maximized over the LO width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Wigner negativity. Where the state is nowhere negative the search
    /// follows `-a0`, the bracket depth at the origin, which is continuous
    /// with the negativity at its onset and keeps the optimum well defined.
    Negativity,
    Fidelity,
}

impl Objective {
    fn score(self, e: &Evaluation) -> f64 {
        match self {
            Objective::Negativity => {
                if e.origin_depth < 0.0 {
                    e.negativity
                } else {
                    -e.origin_depth
                }
            }
            Objective::Fidelity => e.fidelity,
        }
    }
}

/// Search window and resolution for the LO width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoSearch {
    pub min_nm: f64,
    pub max_nm: f64,
    pub scan_points: usize,
    pub resolution_nm: f64,
}

impl Default for LoSearch {
    fn default() -> Self {
        Self {
            min_nm: 0.5,
            max_nm: 12.0,
            scan_points: 32,
            resolution_nm: 0.01,
        }
    }
}

/// Landscape range below which an LO search is reported as degenerate.
pub const FLAT_LANDSCAPE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoOptimum {
    pub best: Evaluation,
    /// True when the scanned landscape was flat; `best` is then the scan midpoint.
    pub degenerate: bool,
}

/// Maximizes `objective` over the LO width: a uniform pre-scan picks the
/// bracket around the best sample, golden-section search refines it.
pub fn optimal_lo(setup: &Setup, objective: Objective, search: &LoSearch) -> Result<LoOptimum> {
    if !(search.min_nm > 0.0 && search.max_nm > search.min_nm) || search.scan_points < 3 {
        return Err(Error::Argument(format!(
            "LO search needs 0 < min < max and at least 3 scan points, got [{}, {}] with {}",
            search.min_nm, search.max_nm, search.scan_points
        )));
    }
    let n = search.scan_points;
    let step = (search.max_nm - search.min_nm) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| search.min_nm + step * i as f64).collect();
    let scan: Vec<Evaluation> = xs
        .iter()
        .map(|&x| setup.evaluate(x))
        .collect::<Result<_>>()?;
    let scores: Vec<f64> = scan.iter().map(|e| objective.score(e)).collect();
    let (mut best_i, mut lo_score, mut hi_score) = (0, f64::INFINITY, f64::NEG_INFINITY);
    for (i, &s) in scores.iter().enumerate() {
        lo_score = lo_score.min(s);
        if s > hi_score {
            hi_score = s;
            best_i = i;
        }
    }
    if hi_score - lo_score < FLAT_LANDSCAPE {
        return Ok(LoOptimum {
            best: setup.evaluate(0.5 * (search.min_nm + search.max_nm))?,
            degenerate: true,
        });
    }

    let mut a = xs[best_i.saturating_sub(1)];
    let mut b = xs[(best_i + 1).min(n - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut ec = setup.evaluate(c)?;
    let mut ed = setup.evaluate(d)?;
    while b - a > search.resolution_nm {
        if objective.score(&ec) >= objective.score(&ed) {
            b = d;
            d = c;
            ed = ec;
            c = b - inv_phi * (b - a);
            ec = setup.evaluate(c)?;
        } else {
            a = c;
            c = d;
            ec = ed;
            d = a + inv_phi * (b - a);
            ed = setup.evaluate(d)?;
        }
    }
    let mut best = scan[best_i];
    for e in [ec, ed] {
        if objective.score(&e) > objective.score(&best) {
            best = e;
        }
    }
    Ok(LoOptimum {
        best,
        degenerate: false,
    })
}

/// Outcome of an optimization at fixed Schmidt number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignResult {
    pub k: f64,
    pub optimal_lo_fwhm_nm: f64,
    pub optimal_filter_fwhm_nm: Option<f64>,
    pub achieved_negativity: f64,
    pub achieved_fidelity: f64,
    pub success_probability: f64,
}

impl DesignResult {
    fn from_evaluation(k: f64, filter: &FilterSpec, e: &Evaluation) -> Self {
        Self {
            k,
            optimal_lo_fwhm_nm: e.lo_fwhm_nm,
            optimal_filter_fwhm_nm: filter.fwhm_nm(),
            achieved_negativity: e.negativity,
            achieved_fidelity: e.fidelity,
            success_probability: e.success_probability,
        }
    }
}

/// Best negativity over the LO width for one `(K, filter)`.
pub fn optimal_lo_design(
    scenario: &Scenario,
    k: f64,
    filter: FilterSpec,
    search: &LoSearch,
) -> Result<DesignResult> {
    let setup = Setup::new(scenario, k, filter)?;
    let opt = optimal_lo(&setup, Objective::Negativity, search)?;
    Ok(DesignResult::from_evaluation(k, &filter, &opt.best))
}

/// Filter-width search range for [`design_for_fidelity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSearch {
    pub min_nm: f64,
    pub max_nm: f64,
    pub resolution_nm: f64,
}

impl Default for FilterSearch {
    fn default() -> Self {
        Self {
            min_nm: 0.05,
            max_nm: 20.0,
            resolution_nm: 0.001,
        }
    }
}

/// Widest filter of the given shape whose heralded state reaches fidelity
/// `target_f` with the target kitten at its own fidelity-optimal LO.
///
/// Fidelity falls as the filter widens for `K > 1`, so the threshold width is
/// bracketed by bisection between `filter_search.min_nm` and `max_nm`.
pub fn design_for_fidelity(
    scenario: &Scenario,
    k: f64,
    target_f: f64,
    shape: FilterSpec,
    lo_search: &LoSearch,
    filter_search: &FilterSearch,
) -> Result<DesignResult> {
    if !(target_f > 0.0 && target_f < 1.0) {
        return Err(Error::Argument(format!(
            "target fidelity must lie in (0, 1), got {target_f}"
        )));
    }
    if matches!(shape, FilterSpec::None) {
        return Err(Error::Argument(
            "fidelity design needs a filter shape".into(),
        ));
    }
    let best_at = |w: f64| -> Result<(FilterSpec, Evaluation)> {
        let filter = shape.with_fwhm(w);
        let setup = Setup::new(scenario, k, filter)?;
        Ok((
            filter,
            optimal_lo(&setup, Objective::Fidelity, lo_search)?.best,
        ))
    };

    let (f_wide, e_wide) = best_at(filter_search.max_nm)?;
    if e_wide.fidelity >= target_f {
        return Ok(DesignResult::from_evaluation(k, &f_wide, &e_wide));
    }
    let (mut f_ok, mut e_ok) = best_at(filter_search.min_nm)?;
    if e_ok.fidelity < target_f {
        return Err(Error::Unreachable {
            target: target_f,
            best: e_ok.fidelity,
        });
    }
    let (mut lo, mut hi) = (filter_search.min_nm, filter_search.max_nm);
    while hi - lo > filter_search.resolution_nm {
        let mid = 0.5 * (lo + hi);
        let (f, e) = best_at(mid)?;
        if e.fidelity >= target_f {
            lo = mid;
            f_ok = f;
            e_ok = e;
        } else {
            hi = mid;
        }
    }
    Ok(DesignResult::from_evaluation(k, &f_ok, &e_ok))
}
