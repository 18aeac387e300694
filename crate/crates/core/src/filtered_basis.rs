//! Filter-adapted orthonormal mode sets.
//!
//! `ψ∥_n` span the filtered supermodes `{t·ψ_k}`; `ψ⊥_n` complete them on
//! the stopband where `t = 0`. Every supermode decomposes as
//! `ψ_k = Σ_n p_kn ψ∥_n + q_kn ψ⊥_n`. The heralded-state pipeline never needs
//! these functions, since everything measurable factors through `γ`; they
//! exist to check that equivalence and to plot the modes.

use crate::error::{Error, Result};
use crate::filters::{FilterKind, FilterProfile};
use crate::scalar::Real;
use crate::supermodes::SupermodeBasis;
use crate::units::SpectralGrid;

/// Residual norm below which a Gram–Schmidt candidate counts as linearly
/// dependent and is dropped.
pub const DROP_THRESHOLD: f64 = 1e-10;

/// Sampled filter-adapted basis with its expansion coefficients.
#[derive(Debug, Clone)]
pub struct FilteredBasis<T> {
    /// `ψ∥_n` sampled on the basis grid.
    pub parallel: Vec<Vec<T>>,
    /// `ψ⊥_n` sampled on the basis grid; empty unless the filter has a stopband.
    pub perp: Vec<Vec<T>>,
    /// `p_kn = ⟨ψ_k, ψ∥_n⟩`, one row per supermode.
    pub p: Vec<Vec<T>>,
    /// `q_kn = ⟨ψ_k, ψ⊥_n⟩`, one row per supermode.
    pub q: Vec<Vec<T>>,
    /// `T_lk = ⟨ψ∥_k, t ψ∥_l⟩`.
    pub t_matrix: Vec<Vec<T>>,
    /// `R_lk = ⟨ψ∥_k, r ψ∥_l⟩`.
    pub r_matrix: Vec<Vec<T>>,
}

impl<T: Real> FilteredBasis<T> {
    /// Builds both mode sets from the first `m` and `m_perp` supermodes, then
    /// all coefficient matrices.
    pub fn build(
        basis: &SupermodeBasis<T>,
        filter: &FilterProfile<T>,
        m: usize,
        m_perp: usize,
    ) -> Result<Self> {
        let parallel = build_parallel(basis, filter, m)?;
        let perp = build_perp(basis, filter, &parallel, m_perp)?;
        let (p, q) = change_of_basis(basis, &parallel, &perp);
        let (t_matrix, r_matrix) = t_r_matrices(&parallel, filter, basis.grid())?;
        Ok(Self {
            parallel,
            perp,
            p,
            q,
            t_matrix,
            r_matrix,
        })
    }

    /// Reconstructs supermode `k` from its coefficients, sample by sample.
    pub fn reconstruct(&self, k: usize) -> Vec<T> {
        let len = self
            .parallel
            .first()
            .or(self.perp.first())
            .map(Vec::len)
            .unwrap_or(0);
        let mut out = vec![T::zero(); len];
        for (coef, mode) in self.p[k]
            .iter()
            .zip(&self.parallel)
            .chain(self.q[k].iter().zip(&self.perp))
        {
            for (o, &v) in out.iter_mut().zip(mode) {
                *o = *o + *coef * v;
            }
        }
        out
    }
}

fn sampled_transmission<T: Real>(
    filter: &FilterProfile<T>,
    grid: &SpectralGrid<T>,
) -> Result<Vec<T>> {
    grid.samples().map(|w| filter.transmission(w)).collect()
}

/// Modified Gram–Schmidt with a second orthogonalization pass; candidates
/// whose residual norm falls under [`DROP_THRESHOLD`] are dropped.
fn orthonormalize_into<T: Real>(
    grid: &SpectralGrid<T>,
    basis: &mut Vec<Vec<T>>,
    against: &[Vec<T>],
    candidate: Vec<T>,
) {
    let mut v = candidate;
    for _ in 0..2 {
        for e in against.iter().chain(basis.iter()) {
            let proj = grid.inner(e, &v);
            for (x, &y) in v.iter_mut().zip(e) {
                *x = *x - proj * y;
            }
        }
    }
    let norm = grid.inner(&v, &v).sqrt();
    if norm < T::lit(DROP_THRESHOLD) {
        return;
    }
    for x in &mut v {
        *x = *x / norm;
    }
    basis.push(v);
}

/// Orthonormal `ψ∥_n` spanning `{t·ψ_k : k < m}`.
pub fn build_parallel<T: Real>(
    basis: &SupermodeBasis<T>,
    filter: &FilterProfile<T>,
    m: usize,
) -> Result<Vec<Vec<T>>> {
    if m > basis.n_modes() {
        return Err(Error::Argument(format!(
            "asked for {m} parallel modes from a {}-mode basis",
            basis.n_modes()
        )));
    }
    let grid = basis.grid();
    let t = sampled_transmission(filter, grid)?;
    if t.iter().all(|&x| x == T::zero()) {
        return Err(Error::Domain(
            "filter transmits nothing on the spectral grid".into(),
        ));
    }
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let candidate: Vec<T> = basis
            .mode(k)
            .iter()
            .zip(&t)
            .map(|(&psi, &tt)| psi * tt)
            .collect();
        orthonormalize_into(grid, &mut out, &[], candidate);
    }
    Ok(out)
}

/// Orthonormal `ψ⊥_n` from `{(1 - 1_band)·ψ_k : k < m_perp}`, orthogonal to
/// `parallel`. Empty for filters without a stopband.
pub fn build_perp<T: Real>(
    basis: &SupermodeBasis<T>,
    filter: &FilterProfile<T>,
    parallel: &[Vec<T>],
    m_perp: usize,
) -> Result<Vec<Vec<T>>> {
    if !filter.has_stopband() {
        return Ok(Vec::new());
    }
    let grid = basis.grid();
    let t = sampled_transmission(filter, grid)?;
    let mut out = Vec::new();
    for k in 0..m_perp.min(basis.n_modes()) {
        let candidate: Vec<T> = basis
            .mode(k)
            .iter()
            .zip(&t)
            .map(|(&psi, &tt)| if tt == T::zero() { psi } else { T::zero() })
            .collect();
        orthonormalize_into(grid, &mut out, parallel, candidate);
    }
    Ok(out)
}

/// `p_kn = ⟨ψ_k, ψ∥_n⟩` and `q_kn = ⟨ψ_k, ψ⊥_n⟩` for every supermode `k`.
pub fn change_of_basis<T: Real>(
    basis: &SupermodeBasis<T>,
    parallel: &[Vec<T>],
    perp: &[Vec<T>],
) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let grid = basis.grid();
    let rows = |set: &[Vec<T>]| -> Vec<Vec<T>> {
        (0..basis.n_modes())
            .map(|k| set.iter().map(|e| grid.inner(basis.mode(k), e)).collect())
            .collect()
    };
    (rows(parallel), rows(perp))
}

/// Dense matrix stored as a vector of rows.
pub type Rows<T> = Vec<Vec<T>>;

/// `T_lk = ⟨ψ∥_k, t ψ∥_l⟩` and `R_lk = ⟨ψ∥_k, r ψ∥_l⟩`.
pub fn t_r_matrices<T: Real>(
    parallel: &[Vec<T>],
    filter: &FilterProfile<T>,
    grid: &SpectralGrid<T>,
) -> Result<(Rows<T>, Rows<T>)> {
    if filter.kind == FilterKind::DeltaLimit {
        return Err(Error::Unsupported("delta filter cannot be sampled".into()));
    }
    let t = sampled_transmission(filter, grid)?;
    let r: Vec<T> = grid
        .samples()
        .map(|w| filter.reflection(w))
        .collect::<Result<_>>()?;
    let weighted = |w: &[T]| -> Vec<Vec<T>> {
        let scaled: Vec<Vec<T>> = parallel
            .iter()
            .map(|e| e.iter().zip(w).map(|(&a, &b)| a * b).collect())
            .collect();
        parallel
            .iter()
            .map(|el| scaled.iter().map(|ek| grid.inner(el, ek)).collect())
            .collect()
    };
    Ok((weighted(&t), weighted(&r)))
}

/// Number of sign changes among samples with `|v| > rel·max|v|`.
pub fn count_nodes<T: Real>(v: &[T], rel: T) -> usize {
    let peak = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let floor = peak * rel;
    let mut last: Option<bool> = None;
    let mut nodes = 0;
    for &x in v {
        if x.abs() <= floor {
            continue;
        }
        let positive = x > T::zero();
        if let Some(prev) = last {
            if prev != positive {
                nodes += 1;
            }
        }
        last = Some(positive);
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::default_grid;

    fn basis(n: usize) -> SupermodeBasis<f64> {
        let grid = default_grid(0.0, 1.0, n, None, 2001).unwrap();
        SupermodeBasis::build(1.0, 0.0, n, &grid).unwrap()
    }

    #[test]
    fn identity_filter_reproduces_supermodes() {
        let b = basis(12);
        let fb = FilteredBasis::build(&b, &FilterProfile::identity(), 12, 12).unwrap();
        assert!(fb.perp.is_empty());
        for k in 0..12 {
            let d = fb.parallel[k]
                .iter()
                .zip(b.mode(k))
                .map(|(a, c)| (a - c).abs())
                .fold(0.0, f64::max);
            assert!(d < 1e-8, "{k}: {d}");
            for n in 0..12 {
                let expect = if k == n { 1.0 } else { 0.0 };
                assert!((fb.p[k][n] - expect).abs() < 1e-8);
                assert!((fb.t_matrix[k][n] - expect).abs() < 1e-8);
                assert!(fb.r_matrix[k][n].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_filter_is_a_domain_error() {
        let b = basis(4);
        // narrower than one grid step and centred between samples
        let step = b.grid().step();
        let f = FilterProfile::rectangular(0.5 * step, 0.2 * step).unwrap();
        assert!(matches!(build_parallel(&b, &f, 4), Err(Error::Domain(_))));
        assert!(build_parallel(&b, &FilterProfile::identity(), 5).is_err());
    }

    #[test]
    fn node_counter() {
        let v = [0.0, 1.0, 0.5, -0.2, -1.0, 1e-20, -1.0, 2.0];
        assert_eq!(count_nodes(&v, 1e-6), 2);
    }

    #[test]
    fn delta_filter_has_no_sampled_basis() {
        let b = basis(4);
        assert!(build_parallel(&b, &FilterProfile::delta(0.0), 2).is_err());
    }
}
