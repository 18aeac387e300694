//! Filter overlap matrix `γ_{k,n} = ∫ |t(ω)|² ψ_k(ω) ψ_n(ω) dω` and the
//! local-oscillator projection coefficients `c_k`.
//!
//! `γ` has two independent routes: [`gamma_quadrature`] integrates the
//! definition numerically, while [`gamma_gaussian_analytic`] and
//! [`gamma_rectangular_analytic`] evaluate closed forms for the two filter
//! shapes of interest.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::filters::{FilterKind, FilterProfile};
use crate::quadrature::{composite_nodes, GaussLegendre};
use crate::scalar::Real;
use crate::supermodes::{
    fill_hermite_functions, hermite_functions, interval_gram, resolution_tolerance, SupermodeBasis,
};

/// Real symmetric overlap matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrix<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Real> GammaMatrix<T> {
    /// Wraps a row-major `n × n` matrix, symmetrizing it.
    pub fn from_row_major(n: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Argument(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                values.len()
            )));
        }
        let mut m = Self { n, values };
        m.symmetrize();
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut values = vec![T::zero(); n * n];
        for k in 0..n {
            values[k * n + k] = T::one();
        }
        Self { n, values }
    }

    fn symmetrize(&mut self) {
        let n = self.n;
        let half = T::lit(0.5);
        for k in 0..n {
            for l in k + 1..n {
                let v = half * (self.values[k * n + l] + self.values[l * n + k]);
                self.values[k * n + l] = v;
                self.values[l * n + k] = v;
            }
        }
    }

    #[inline]
    pub fn n_modes(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, k: usize, n: usize) -> T {
        self.values[k * self.n + n]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|k| self.get(k, k)).collect()
    }

    /// Quadratic form `wᵀ γ w`.
    pub fn quadratic_form(&self, w: &[T]) -> T {
        let n = self.n;
        let mut acc = T::zero();
        for k in 0..n {
            if w[k] == T::zero() {
                continue;
            }
            let row = &self.values[k * n..(k + 1) * n];
            let inner: T = row.iter().zip(w).map(|(&g, &x)| g * x).sum();
            acc = acc + w[k] * inner;
        }
        acc
    }

    /// Largest entrywise difference to another matrix of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }

    /// Leading `m × m` block.
    pub fn truncated(&self, m: usize) -> Self {
        let m = m.min(self.n);
        let mut values = Vec::with_capacity(m * m);
        for k in 0..m {
            values.extend_from_slice(&self.values[k * self.n..k * self.n + m]);
        }
        Self { n: m, values }
    }
}

/// Gauss–Legendre order used on each quadrature panel.
const PANEL_ORDER: usize = 16;

/// `γ` by composite Gauss–Legendre quadrature of its defining integral
/// over the basis grid.
///
/// Panels are roughly eight grid steps wide, refined around narrow filters,
/// and broken at the edges of a rectangular passband so every panel sees a
/// smooth integrand.
pub fn gamma_quadrature<T: Real>(
    basis: &SupermodeBasis<T>,
    filter: &FilterProfile<T>,
) -> Result<GammaMatrix<T>> {
    if filter.kind == FilterKind::DeltaLimit {
        return Err(Error::Unsupported(
            "delta filter overlaps are only defined in the narrowband limit".into(),
        ));
    }
    let grid = basis.grid();
    let (lo, hi) = grid.bounds();
    let coarse = grid.step() * T::lit(8.0);
    let mut segments: Vec<(T, T, T)> = Vec::new();
    match filter.kind {
        FilterKind::Identity => segments.push((lo, hi, coarse)),
        FilterKind::Rectangular => {
            let (a, b) = filter
                .discontinuities()
                .expect("rectangular filter has edges");
            let (a, b) = (a.max(lo), b.min(hi));
            if a < b {
                segments.push((a, b, coarse.min((b - a) / T::lit(8.0))));
            }
        }
        FilterKind::Gaussian => {
            let reach = filter.fwhm * T::lit(4.0);
            let fine = coarse.min(filter.fwhm / T::lit(4.0));
            let (a, b) = (
                (filter.center - reach).max(lo),
                (filter.center + reach).min(hi),
            );
            if a < b {
                if lo < a {
                    segments.push((lo, a, coarse));
                }
                segments.push((a, b, fine));
                if b < hi {
                    segments.push((b, hi, coarse));
                }
            } else {
                segments.push((lo, hi, coarse));
            }
        }
        FilterKind::DeltaLimit => unreachable!(),
    }

    let n = basis.n_modes();
    let tau = basis.tau_s();
    let rule = GaussLegendre::<T>::new(PANEL_ORDER);
    let mut acc = vec![T::zero(); n * n];
    let mut h = Vec::with_capacity(n);
    for (a, b, width) in segments {
        let panels = ((b - a) / width).ceil().to_usize().unwrap_or(1).max(1);
        for (omega, w) in composite_nodes(&rule, a, b, panels) {
            let weight = w * filter.power(omega)? * tau;
            if weight == T::zero() {
                continue;
            }
            fill_hermite_functions(n, tau * (omega - basis.center()), &mut h);
            for k in 0..n {
                let wk = weight * h[k];
                for l in k..n {
                    acc[k * n + l] = acc[k * n + l] + wk * h[l];
                }
            }
        }
    }
    for k in 0..n {
        for l in 0..k {
            acc[k * n + l] = acc[l * n + k];
        }
    }
    GammaMatrix::from_row_major(n, acc)
}

/// Closed-form `γ` for a Gaussian filter of amplitude FWHM `fwhm` centred on
/// the supermodes:
///
/// `γ_{k,n} = τ_s/(τ̄ sqrt(2^{k+n} k! n!)) Σ_m 2^m m! C(k,m) C(n,m) (τ_s²/τ̄² - 1)^{(k+n)/2-m} (k+n-2m)!/((k+n)/2-m)!`
///
/// for `k + n` even and zero otherwise, with `τ̄² = 8 ln2/fwhm² + τ_s²`.
///
/// The alternating sum cancels catastrophically in floating point beyond
/// order ~10, so it is evaluated exactly over the integers with
/// `τ_s²/τ̄² - 1` taken as the exact binary fraction of its `f64` value;
/// only the final ratio is rounded.
pub fn gamma_gaussian_analytic<T: Real>(
    tau_s: T,
    n_modes: usize,
    fwhm: T,
) -> Result<GammaMatrix<T>> {
    if !(fwhm > T::zero()) || !(tau_s > T::zero()) {
        return Err(Error::Domain(
            "Gaussian overlap needs positive fwhm and tau_s".into(),
        ));
    }
    let n = n_modes;
    // β = 8 ln2/(fwhm τ_s)², τ_s²/τ̄² = 1/(1+β)
    let beta = (T::lit(8.0) * T::LN_2() / (fwhm * fwhm * tau_s * tau_s)).as_f64();
    let ratio = (1.0 / (1.0 + beta)).sqrt();
    let b = -beta / (1.0 + beta);
    let (p, d) = exact_binary_fraction(b);

    let max_j = n; // (k+n)/2 <= n-1
    let fact = factorials(2 * n + 1);
    let mut p_pow = Vec::with_capacity(max_j + 1);
    let mut d_pow = Vec::with_capacity(max_j + 1);
    p_pow.push(BigInt::one());
    d_pow.push(BigInt::one());
    for i in 1..=max_j {
        p_pow.push(&p_pow[i - 1] * &p);
        d_pow.push(&d_pow[i - 1] * &d);
    }
    let two_d = BigInt::from(2) * &d;

    let mut values = vec![T::zero(); n * n];
    for k in 0..n {
        for l in (k..n).step_by(2) {
            let jj = (k + l) / 2;
            // S·d^J = Σ_m coef_m p^{J-m} d^m
            let mut num = BigInt::zero();
            for m in 0..=k.min(l) {
                let j = jj - m;
                let coef = (BigInt::one() << m)
                    * &fact[m]
                    * binom(&fact, k, m)
                    * binom(&fact, l, m)
                    * (&fact[2 * j] / &fact[j]);
                num += coef * &p_pow[j] * &d_pow[m];
            }
            if num.is_zero() {
                continue;
            }
            // γ² = ratio² · num² / ((2d)^{2J} k! l!)
            let sign = if num.sign() == Sign::Minus { -1.0 } else { 1.0 };
            let num2 = (&num * &num).magnitude().clone();
            let mut den = BigInt::one();
            for _ in 0..2 * jj {
                den *= &two_d;
            }
            den = den * &fact[k] * &fact[l];
            let r = big_ratio_to_f64(&num2, den.magnitude());
            let v = T::lit(sign * ratio * r.sqrt());
            values[k * n + l] = v;
            values[l * n + k] = v;
        }
    }
    GammaMatrix::from_row_major(n, values)
}

/// Closed-form `γ` for a rectangular filter of width `fwhm` centred on the
/// supermodes: `γ_{k,n} = ∫_{-a}^{a} h_k h_n dx` with `a = τ_s·fwhm/2`,
/// expressed through boundary values of the Hermite functions and `erf`.
pub fn gamma_rectangular_analytic<T: Real>(
    tau_s: T,
    n_modes: usize,
    fwhm: T,
) -> Result<GammaMatrix<T>> {
    if !(fwhm > T::zero()) || !(tau_s > T::zero()) {
        return Err(Error::Domain(
            "rectangular overlap needs positive fwhm and tau_s".into(),
        ));
    }
    let a = tau_s * fwhm * T::lit(0.5);
    GammaMatrix::from_row_major(n_modes, interval_gram(n_modes, a))
}

/// Closed-form `γ` for any sampled filter centred on the supermodes.
pub fn gamma_analytic<T: Real>(
    tau_s: T,
    n_modes: usize,
    filter: &FilterProfile<T>,
) -> Result<GammaMatrix<T>> {
    match filter.kind {
        FilterKind::Identity => Ok(GammaMatrix::identity(n_modes)),
        FilterKind::Rectangular => gamma_rectangular_analytic(tau_s, n_modes, filter.fwhm),
        FilterKind::Gaussian => gamma_gaussian_analytic(tau_s, n_modes, filter.fwhm),
        FilterKind::DeltaLimit => Err(Error::Unsupported(
            "delta filter has no finite overlap matrix; use gamma_delta_shape".into(),
        )),
    }
}

/// Shape of `γ` in the infinitely-narrow filter limit, `h_k(0) h_n(0)`.
///
/// The overall scale vanishes with the filter width; only the rank-one
/// structure is meaningful, which is all that normalized heralded states
/// depend on.
pub fn gamma_delta_shape<T: Real>(n_modes: usize) -> GammaMatrix<T> {
    let h = hermite_functions(n_modes, T::zero());
    let mut values = Vec::with_capacity(n_modes * n_modes);
    for k in 0..n_modes {
        for l in 0..n_modes {
            values.push(h[k] * h[l]);
        }
    }
    GammaMatrix { n: n_modes, values }
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = Vec::with_capacity(n + 1);
    f.push(BigInt::one());
    for i in 1..=n {
        let next = &f[i - 1] * BigInt::from(i);
        f.push(next);
    }
    f
}

fn binom(fact: &[BigInt], n: usize, k: usize) -> BigInt {
    &fact[n] / (&fact[k] * &fact[n - k])
}

/// `x = p / d` exactly, with `d` a power of two.
fn exact_binary_fraction(x: f64) -> (BigInt, BigInt) {
    if x == 0.0 {
        return (BigInt::zero(), BigInt::one());
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let p = BigInt::from(sign) * BigInt::from(mantissa);
    if e >= 0 {
        (p << (e as usize), BigInt::one())
    } else {
        (p, BigInt::one() << ((-e) as usize))
    }
}

/// `num / den` rounded to `f64`, for arbitrarily large operands.
fn big_ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 {
        (num << (shift as usize)) / den
    } else {
        num / (den << ((-shift) as usize))
    };
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    libm::ldexp(qf, -(shift as i32))
}

/// Fraction of LO power outside the modelled modes above which a projection
/// is flagged.
pub const LO_LEAK_WARNING: f64 = 0.01;

/// Projection of the local-oscillator amplitude onto the supermodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LoProjection<T> {
    /// LO FWHM (angular), FWHM of `|α_LO(ω)|²`; NaN for explicit coefficient vectors.
    pub fwhm_lo: T,
    c: Vec<T>,
    /// `1 - Σ c_k²` before renormalization.
    pub residual: T,
}

impl<T: Real> LoProjection<T> {
    /// Arbitrary real coefficients, normalized to unit length.
    pub fn from_coefficients(c: Vec<T>) -> Result<Self> {
        let norm2: T = c.iter().map(|&x| x * x).sum();
        if !(norm2 > T::zero()) {
            return Err(Error::Argument("LO coefficient vector is zero".into()));
        }
        let norm = norm2.sqrt();
        Ok(Self {
            fwhm_lo: T::nan(),
            c: c.into_iter().map(|x| x / norm).collect(),
            residual: T::one() - norm2,
        })
    }

    /// LO matched to supermode `k` of an `n_modes` basis.
    pub fn matched(k: usize, n_modes: usize) -> Self {
        let mut c = vec![T::zero(); n_modes];
        c[k] = T::one();
        Self {
            fwhm_lo: T::nan(),
            c,
            residual: T::zero(),
        }
    }

    pub fn coefficients(&self) -> &[T] {
        &self.c
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// True when more than [`LO_LEAK_WARNING`] of the LO power lies outside
    /// the modelled mode space.
    pub fn leaks(&self) -> bool {
        self.residual > T::lit(LO_LEAK_WARNING)
    }
}

/// Normalized Gaussian LO amplitude whose intensity `|α|²` has FWHM `fwhm`.
pub fn lo_amplitude<T: Real>(fwhm: T, detuning: T) -> T {
    let ln2 = T::LN_2();
    let pref = (T::lit(4.0) * ln2 / (T::PI() * fwhm * fwhm)).powf(T::lit(0.25));
    pref * (-T::lit(2.0) * ln2 * detuning * detuning / (fwhm * fwhm)).exp()
}

/// LO FWHM (of `|α|²`) that reproduces supermode `ψ_0` exactly: `2 sqrt(ln2)/τ_s`.
pub fn matched_lo_fwhm<T: Real>(tau_s: T) -> T {
    T::lit(2.0) * T::LN_2().sqrt() / tau_s
}

/// `c_k = ∫ α_LO ψ_k dω` on the basis grid for a centred Gaussian LO, then
/// renormalized; the lost weight is kept in `residual`.
pub fn lo_coefficients<T: Real>(basis: &SupermodeBasis<T>, lo_fwhm: T) -> Result<LoProjection<T>> {
    if !(lo_fwhm > T::zero()) || !lo_fwhm.is_finite() {
        return Err(Error::Domain(format!(
            "LO FWHM must be positive, got {lo_fwhm}"
        )));
    }
    let grid = basis.grid();
    let shift = basis.center() - grid.center();
    let alpha: Vec<T> = grid
        .offsets()
        .map(|u| lo_amplitude(lo_fwhm, u - shift))
        .collect();
    // |α|² is a Gaussian of standard deviation fwhm/(2 sqrt(2 ln2)); its
    // sampled mass must match the exact mass on the grid interval
    let (lo, hi) = grid.bounds();
    let scale = lo_fwhm / (T::lit(2.0) * T::LN_2().sqrt());
    let half = T::lit(0.5);
    let exact = half * ((hi - grid.center() - shift) / scale).erf()
        - half * ((lo - grid.center() - shift) / scale).erf();
    let miss = (grid.inner(&alpha, &alpha) - exact).abs();
    let tolerance = resolution_tolerance::<T>();
    if miss > tolerance {
        return Err(Error::Precision {
            what: "grid under-resolves the LO".into(),
            value: miss.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    let n = basis.n_modes();
    let mut c: Vec<T> = (0..n).map(|k| grid.inner(&alpha, basis.mode(k))).collect();
    if shift == T::zero() {
        for ck in c.iter_mut().skip(1).step_by(2) {
            *ck = T::zero();
        }
    }
    let norm2: T = c.iter().map(|&x| x * x).sum();
    if !(norm2 > T::zero()) {
        return Err(Error::Precision {
            what: "LO has no overlap with the modelled supermodes".into(),
            value: 1.0,
            tolerance: LO_LEAK_WARNING,
        });
    }
    let norm = norm2.sqrt();
    for x in &mut c {
        *x = *x / norm;
    }
    Ok(LoProjection {
        fwhm_lo: lo_fwhm,
        c,
        residual: T::one() - norm2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::default_grid;

    fn basis(n: usize, filter_fwhm: Option<f64>) -> SupermodeBasis<f64> {
        let grid = default_grid(0.0, 1.0, n, filter_fwhm, 4097).unwrap();
        SupermodeBasis::build(1.0, 0.0, n, &grid).unwrap()
    }

    #[test]
    fn identity_quadrature_is_identity() {
        let b = basis(30, None);
        let g = gamma_quadrature(&b, &FilterProfile::identity()).unwrap();
        assert!(g.max_abs_diff(&GammaMatrix::identity(30)) < 1e-10);
    }

    #[test]
    fn rectangular_odd_entries_vanish() {
        let b = basis(20, None);
        let f = FilterProfile::rectangular(0.0, 1.7).unwrap();
        let g = gamma_quadrature(&b, &f).unwrap();
        for k in 0..20 {
            for n in 0..20 {
                if (k + n) % 2 == 1 {
                    assert!(g.get(k, n).abs() < 1e-12);
                }
            }
        }
        let a = gamma_rectangular_analytic(1.0, 20, 1.7).unwrap();
        assert!(a.max_abs_diff(&g) < 1e-12, "{}", a.max_abs_diff(&g));
    }

    #[test]
    fn rectangular_unit_half_width_is_erf1() {
        let a = gamma_rectangular_analytic(1.0_f64, 3, 2.0).unwrap();
        assert!((a.get(0, 0) - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert_eq!(a.get(0, 1), 0.0);
        let wide = gamma_rectangular_analytic(1.0_f64, 20, 200.0).unwrap();
        assert!(wide.max_abs_diff(&GammaMatrix::identity(20)) < 1e-12);
    }

    #[test]
    fn gaussian_ground_entry() {
        // m = 0 term only: τ_s/τ̄
        let fwhm = 1.3_f64;
        let g = gamma_gaussian_analytic(1.0, 4, fwhm).unwrap();
        let tau_bar = (8.0 * std::f64::consts::LN_2 / (fwhm * fwhm) + 1.0).sqrt();
        assert!((g.get(0, 0) - 1.0 / tau_bar).abs() < 1e-15);
        assert_eq!(g.get(0, 1), 0.0);
        assert_eq!(g.get(2, 3), 0.0);
    }

    #[test]
    fn gaussian_closed_form_matches_quadrature() {
        for fwhm in [0.3, 1.0, 4.0] {
            let b = basis(40, None);
            let f = FilterProfile::gaussian(0.0, fwhm).unwrap();
            let q = gamma_quadrature(&b, &f).unwrap();
            let a = gamma_gaussian_analytic(1.0, 40, fwhm).unwrap();
            let d = a.max_abs_diff(&q);
            assert!(d < 1e-10, "fwhm {fwhm}: {d}");
        }
    }

    #[test]
    fn wide_gaussian_approaches_identity() {
        // 1 - γ_kk ≈ β⟨x²⟩_k = β(k + 1/2) for small β
        let fwhm = 1e3_f64;
        let beta = 8.0 * std::f64::consts::LN_2 / (fwhm * fwhm);
        let a = gamma_gaussian_analytic(1.0, 30, fwhm).unwrap();
        for k in 0..30 {
            let first_order = beta * (k as f64 + 0.5);
            assert!((1.0 - a.get(k, k) - first_order).abs() < 1e-3 * first_order);
        }
        assert!(a.max_abs_diff(&GammaMatrix::identity(30)) < 1e-3);
    }

    /// `G_{k+1,n} = [sqrt(n) G_{k,n-1} - β sqrt(k) G_{k-1,n}] / ((1+β) sqrt(k+1))`,
    /// a cancellation-free route to the same matrix.
    fn gaussian_by_recurrence(n: usize, beta: f64) -> Vec<f64> {
        let mut g = vec![0.0; n * n];
        g[0] = 1.0 / (1.0 + beta).sqrt();
        for l in 0..n {
            for k in 0..n - 1 {
                let mut v =
                    -beta * (k as f64).sqrt() * if k > 0 { g[(k - 1) * n + l] } else { 0.0 };
                if l > 0 {
                    v += (l as f64).sqrt() * g[k * n + l - 1];
                }
                g[(k + 1) * n + l] = v / ((1.0 + beta) * ((k + 1) as f64).sqrt());
            }
            if l + 1 < n {
                // column l+1 seeded from symmetry of row 0
                g[l + 1] = g[(l + 1) * n];
            }
        }
        g
    }

    #[test]
    fn gaussian_exact_sum_matches_recurrence_at_high_order() {
        for fwhm in [0.05, 0.4, 2.0] {
            let n = 120;
            let beta = 8.0 * std::f64::consts::LN_2 / (fwhm * fwhm);
            let r = gaussian_by_recurrence(n, beta);
            let a = gamma_gaussian_analytic(1.0_f64, n, fwhm).unwrap();
            for k in 0..n {
                for l in 0..n {
                    let d = (a.get(k, l) - r[k * n + l]).abs();
                    assert!(
                        d < 1e-12,
                        "fwhm {fwhm} ({k},{l}): {} vs {}",
                        a.get(k, l),
                        r[k * n + l]
                    );
                }
            }
        }
    }

    #[test]
    fn delta_filter_rejected() {
        let b = basis(5, None);
        assert!(matches!(
            gamma_quadrature(&b, &FilterProfile::delta(0.0)),
            Err(Error::Unsupported(_))
        ));
        let s = gamma_delta_shape::<f64>(4);
        assert_eq!(s.get(1, 1), 0.0);
        assert!(s.get(0, 2) < 0.0);
    }

    #[test]
    fn exact_fraction_round_trips() {
        for x in [-0.3_f64, 1.0, -1e-300, 123.456, 0.0] {
            let (p, d) = exact_binary_fraction(x);
            let back = big_ratio_to_f64(p.magnitude(), d.magnitude());
            assert_eq!(back * if p.sign() == Sign::Minus { -1.0 } else { 1.0 }, x);
        }
    }

    #[test]
    fn matched_lo_selects_ground_mode() {
        let b = basis(40, None);
        let lo = lo_coefficients(&b, matched_lo_fwhm(1.0)).unwrap();
        assert!((lo.coefficients()[0] - 1.0).abs() < 1e-8);
        assert!(lo.coefficients()[1..].iter().all(|c| c.abs() < 1e-8));
        assert!(lo.residual.abs() < 1e-8);
    }

    #[test]
    fn lo_coefficients_match_squeezed_overlap_formula() {
        // ⟨h_2j | g_λ⟩ = sqrt(2λ/(1+λ²)) ρ^j sqrt((2j)!)/(2^j j!), ρ = (1-λ²)/(1+λ²)
        let b = basis(60, None);
        for width in [0.6, 1.6, 2.5] {
            let fwhm = width * matched_lo_fwhm(1.0);
            let lo = lo_coefficients(&b, fwhm).unwrap();
            assert!(lo.residual < 1e-6, "{}", lo.residual);
            let lambda = 1.0 / width;
            let rho = (1.0 - lambda * lambda) / (1.0 + lambda * lambda);
            let mut term = (2.0 * lambda / (1.0 + lambda * lambda)).sqrt();
            for j in 0..30 {
                if j > 0 {
                    // sqrt((2j)!)/(2^j j!) ratio step
                    term *= rho * ((2 * j) as f64 * (2 * j - 1) as f64).sqrt() / (2.0 * j as f64);
                }
                let c = lo.coefficients()[2 * j] * (1.0 - lo.residual).sqrt();
                assert!((c - term).abs() < 1e-9, "w={width} j={j}: {c} vs {term}");
                assert_eq!(lo.coefficients()[2 * j + 1], 0.0);
            }
        }
    }

    #[test]
    fn explicit_coefficients_are_normalized() {
        let lo = LoProjection::from_coefficients(vec![3.0_f64, 4.0]).unwrap();
        assert_eq!(lo.coefficients(), &[0.6, 0.8]);
        assert!(LoProjection::from_coefficients(vec![0.0_f64]).is_err());
    }
}
