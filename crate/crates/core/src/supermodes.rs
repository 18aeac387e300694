//! Hermite-Gauss supermodes, the squeezing spectrum across them, and the
//! double-Gaussian joint spectral amplitude whose Schmidt decomposition
//! they are.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::units::SpectralGrid;

/// Largest basis the crate will build.
pub const MAX_MODES: usize = 200;

/// Largest acceptable error of a sampled unit norm: `1e-8`, or a few
/// thousand ulps for narrower scalar types.
pub(crate) fn resolution_tolerance<T: Real>() -> T {
    T::lit(1e-8).max(T::epsilon() * T::lit(4096.0))
}

/// Orthonormal Hermite functions `h_0(x) .. h_{n-1}(x)`,
/// `h_k(x) = (2^k k! sqrt(pi))^{-1/2} H_k(x) e^{-x^2/2}`.
///
/// Evaluated with the normalized three-term recurrence, so no factorial or
/// power of two is ever formed.
pub fn hermite_functions<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n);
    fill_hermite_functions(n, x, &mut out);
    out
}

/// Same as [`hermite_functions`], writing into a reusable buffer.
pub fn fill_hermite_functions<T: Real>(n: usize, x: T, out: &mut Vec<T>) {
    out.clear();
    if n == 0 {
        return;
    }
    let h0 = T::PI().powf(T::lit(-0.25)) * (-(x * x) * T::lit(0.5)).exp();
    out.push(h0);
    if n == 1 {
        return;
    }
    out.push(T::SQRT_2() * x * h0);
    for k in 2..n {
        let kf = T::from_usize_lossy(k);
        let a = (T::lit(2.0) / kf).sqrt();
        let b = ((kf - T::one()) / kf).sqrt();
        let next = a * x * out[k - 1] - b * out[k - 2];
        out.push(next);
    }
}

/// Single orthonormal Hermite function `h_k(x)`.
pub fn hermite_function<T: Real>(k: usize, x: T) -> T {
    hermite_functions(k + 1, x)[k]
}

/// L²-normalized supermode envelope `psi_k(omega)` of a Gaussian-pumped
/// source: `sqrt(tau_s)·h_k(tau_s·(omega - center))`.
pub fn hermite_gauss<T: Real>(k: usize, tau_s: T, omega: T, center: T) -> T {
    tau_s.sqrt() * hermite_function(k, tau_s * (omega - center))
}

/// `∫_{-a}^{a} h_k h_n dx` for all `k, n < n_modes`, in closed form.
///
/// Off the diagonal the Hermite equation gives
/// `2(n-k)·I_kn = [h_n h_k' - h_k h_n']_{-a}^{a}`; on it the ladder
/// operators give `I_kk = I_{k-1,k-1} - sqrt(2/k)·h_{k-1}(a)·h_k(a)`,
/// starting from `I_00 = erf(a)`. Entries with `k + n` odd vanish by parity.
pub fn interval_gram<T: Real>(n_modes: usize, a: T) -> Vec<T> {
    let n = n_modes;
    let mut out = vec![T::zero(); n * n];
    if n == 0 {
        return out;
    }
    let a = a.abs();
    let h = hermite_functions(n + 1, a);
    let two = T::lit(2.0);
    // h_k'(a) = sqrt(k/2) h_{k-1} - sqrt((k+1)/2) h_{k+1}
    let dh: Vec<T> = (0..n)
        .map(|k| {
            let kf = T::from_usize_lossy(k);
            let down = if k == 0 {
                T::zero()
            } else {
                (kf / two).sqrt() * h[k - 1]
            };
            down - ((kf + T::one()) / two).sqrt() * h[k + 1]
        })
        .collect();
    let mut diag = a.erf();
    out[0] = diag;
    for k in 1..n {
        let kf = T::from_usize_lossy(k);
        diag = diag - (two / kf).sqrt() * h[k - 1] * h[k];
        out[k * n + k] = diag;
    }
    for k in 0..n {
        for m in (k + 2..n).step_by(2) {
            // for k + m even the bracket is odd in a, so it doubles
            let bracket = two * (h[m] * dh[k] - h[k] * dh[m]);
            let v = bracket / (two * T::from_usize_lossy(m - k));
            out[k * n + m] = v;
            out[m * n + k] = v;
        }
    }
    out
}

/// Supermode envelopes sampled on a spectral grid.
#[derive(Debug, Clone)]
pub struct SupermodeBasis<T> {
    tau_s: T,
    center: T,
    grid: SpectralGrid<T>,
    samples: Vec<Vec<T>>,
}

impl<T: Real> SupermodeBasis<T> {
    /// Samples `n_modes` Hermite-Gauss supermodes on `grid`.
    ///
    /// Fails with a precision error when more than `1e-10` of any mode's
    /// norm falls outside the grid.
    pub fn build(tau_s: T, center: T, n_modes: usize, grid: &SpectralGrid<T>) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::Argument("basis needs at least one mode".into()));
        }
        if n_modes > MAX_MODES {
            return Err(Error::Argument(format!(
                "basis is capped at {MAX_MODES} modes, asked for {n_modes}"
            )));
        }
        if !(tau_s > T::zero()) {
            return Err(Error::Domain(format!(
                "tau_s must be positive, got {tau_s}"
            )));
        }
        let shift = center - grid.center();
        let (lo, hi) = grid.bounds();
        let reach = ((center - lo).min(hi - center)) * tau_s;
        let inside = interval_gram(n_modes, reach.max(T::zero()));
        let lost = (0..n_modes)
            .map(|k| T::one() - inside[k * n_modes + k])
            .fold(T::zero(), T::max);
        if lost > T::lit(1e-10) {
            return Err(Error::Precision {
                what: format!("grid truncates supermode mass (order {})", n_modes - 1),
                value: lost.as_f64(),
                tolerance: 1e-10,
            });
        }

        let scale = tau_s.sqrt();
        let mut samples = vec![Vec::with_capacity(grid.len()); n_modes];
        let mut buf = Vec::with_capacity(n_modes);
        for i in 0..grid.len() {
            let x = tau_s * (grid.offset(i) - shift);
            fill_hermite_functions(n_modes, x, &mut buf);
            for (k, v) in buf.iter().enumerate() {
                samples[k].push(scale * *v);
            }
        }
        let tolerance = resolution_tolerance::<T>();
        for (k, m) in samples.iter().enumerate() {
            let miss = (grid.inner(m, m) - inside[k * n_modes + k]).abs();
            if miss > tolerance {
                return Err(Error::Precision {
                    what: format!("grid under-resolves supermode {k}"),
                    value: miss.as_f64(),
                    tolerance: tolerance.as_f64(),
                });
            }
        }
        Ok(Self {
            tau_s,
            center,
            grid: grid.clone(),
            samples,
        })
    }

    pub fn tau_s(&self) -> T {
        self.tau_s
    }

    pub fn center(&self) -> T {
        self.center
    }

    pub fn n_modes(&self) -> usize {
        self.samples.len()
    }

    pub fn grid(&self) -> &SpectralGrid<T> {
        &self.grid
    }

    /// Samples of `psi_k` on the grid.
    pub fn mode(&self, k: usize) -> &[T] {
        &self.samples[k]
    }

    pub fn modes(&self) -> &[Vec<T>] {
        &self.samples
    }

    /// Quadrature Gram matrix `∫ psi_k psi_l`, row-major.
    pub fn gram(&self) -> Vec<T> {
        let n = self.n_modes();
        let mut g = vec![T::zero(); n * n];
        for k in 0..n {
            for l in k..n {
                let v = self.grid.inner(&self.samples[k], &self.samples[l]);
                g[k * n + l] = v;
                g[l * n + k] = v;
            }
        }
        g
    }
}

/// Schmidt number `K = (Σ ζ_k²)² / Σ ζ_k⁴`.
pub fn schmidt_number<T: Real>(zeta: &[T]) -> Result<T> {
    let s2: T = zeta.iter().map(|&z| z * z).sum();
    let s4: T = zeta.iter().map(|&z| (z * z) * (z * z)).sum();
    if !(s4 > T::zero()) {
        return Err(Error::Domain(
            "Schmidt number undefined without squeezing".into(),
        ));
    }
    Ok(s2 * s2 / s4)
}

/// Squeezing parameter giving `db` decibels of noise reduction below the
/// vacuum level: `e^{-2ζ} = 10^{-db/10}`.
pub fn zeta_for_noise_reduction_db<T: Real>(db: T) -> T {
    db * T::LN_10() / T::lit(20.0)
}

/// Ratio `q` of consecutive squeezing parameters for Schmidt number `k`,
/// from `K = (1 + q²)/(1 - q²)`.
pub fn geometric_ratio<T: Real>(k: T) -> Result<T> {
    if !(k >= T::one()) || !k.is_finite() {
        return Err(Error::Domain(format!(
            "Schmidt number must be >= 1, got {k}"
        )));
    }
    Ok(((k - T::one()) / (k + T::one())).sqrt())
}

/// Smallest mode count capturing all but `1e-6` of the total mean photon
/// number of a geometric spectrum with Schmidt number `k`, capped at
/// [`MAX_MODES`].
pub fn required_modes<T: Real>(k: T) -> Result<usize> {
    let q = geometric_ratio(k)?;
    if q == T::zero() {
        return Ok(1);
    }
    // tail fraction of Σ q^{2k} beyond N is q^{2N}
    let n = (T::lit(1e-6).ln() / (q * q).ln()).ceil();
    Ok(n.to_usize().unwrap_or(MAX_MODES).clamp(1, MAX_MODES))
}

/// Per-supermode squeezing parameters and the derived `μ_k = tanh ζ_k`,
/// `n_k = sinh² ζ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezingSpectrum<T> {
    zeta: Vec<T>,
    mu: Vec<T>,
    n_mean: Vec<T>,
    schmidt_k: T,
}

impl<T: Real> SqueezingSpectrum<T> {
    /// Spectrum from explicit squeezing parameters; `K` is computed from them.
    pub fn new(zeta: Vec<T>) -> Result<Self> {
        let k = schmidt_number(&zeta)?;
        Self::with_schmidt(zeta, k)
    }

    fn with_schmidt(zeta: Vec<T>, schmidt_k: T) -> Result<Self> {
        if zeta.iter().any(|z| !(*z >= T::zero()) || !z.is_finite()) {
            return Err(Error::Domain(
                "squeezing parameters must be finite and >= 0".into(),
            ));
        }
        if zeta.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Domain(
                "squeezing parameters must be non-increasing".into(),
            ));
        }
        let mu = zeta.iter().map(|z| z.tanh()).collect();
        let n_mean = zeta
            .iter()
            .map(|z| {
                let s = z.sinh();
                s * s
            })
            .collect();
        Ok(Self {
            zeta,
            mu,
            n_mean,
            schmidt_k,
        })
    }

    /// Geometric spectrum `ζ_k = ζ₀ q^k`, `q² = (K-1)/(K+1)`, over `n_modes`
    /// modes. The stored Schmidt number is the requested `k`; the recomputed
    /// one converges to it as `n_modes` grows.
    pub fn from_schmidt(k: T, zeta0: T, n_modes: usize) -> Result<Self> {
        let q = geometric_ratio(k)?;
        if !(zeta0 > T::zero()) {
            return Err(Error::Domain(format!(
                "zeta0 must be positive, got {zeta0}"
            )));
        }
        if n_modes == 0 {
            return Err(Error::Argument("need at least one mode".into()));
        }
        let mut zeta = Vec::with_capacity(n_modes);
        let mut z = zeta0;
        for _ in 0..n_modes {
            zeta.push(z);
            z = z * q;
        }
        Self::with_schmidt(zeta, k)
    }

    pub fn zeta(&self) -> &[T] {
        &self.zeta
    }

    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    pub fn n_mean(&self) -> &[T] {
        &self.n_mean
    }

    pub fn schmidt_k(&self) -> T {
        self.schmidt_k
    }

    pub fn len(&self) -> usize {
        self.zeta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeta.is_empty()
    }

    pub fn recomputed_schmidt(&self) -> Result<T> {
        schmidt_number(&self.zeta)
    }

    /// Total mean photon number.
    pub fn total_photons(&self) -> T {
        self.n_mean.iter().copied().sum()
    }

    /// Probability `p_k = n_k / Σ n_l` that an unfiltered subtraction takes
    /// the photon from mode `k`.
    pub fn subtraction_probabilities(&self) -> Vec<T> {
        let total = self.total_photons();
        self.n_mean.iter().map(|&n| n / total).collect()
    }
}

/// Free-function form of [`SqueezingSpectrum::from_schmidt`].
pub fn squeezing_from_schmidt<T: Real>(
    k: T,
    zeta0: T,
    n_modes: usize,
) -> Result<SqueezingSpectrum<T>> {
    SqueezingSpectrum::from_schmidt(k, zeta0, n_modes)
}

/// Double-Gaussian joint spectral amplitude
/// `f(ω, ω') = exp(-(ω+ω'-ω_p)²/(4σ₊²) - (ω-ω')²/(4σ₋²))`.
///
/// In the rotated coordinates `(ω±ω'-…)/√2` the two widths are plain
/// standard deviations. Its Schmidt modes are Hermite-Gauss functions with
/// `τ_s = 1/sqrt(σ₊σ₋)` and Schmidt coefficients in geometric ratio
/// `q = |σ₊-σ₋|/(σ₊+σ₋)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleGaussianJsa<T> {
    pub sigma_plus: T,
    pub sigma_minus: T,
    pub pump_center: T,
}

impl<T: Real> DoubleGaussianJsa<T> {
    pub fn new(sigma_plus: T, sigma_minus: T, pump_center: T) -> Result<Self> {
        if !(sigma_plus > T::zero()) || !(sigma_minus > T::zero()) {
            return Err(Error::Domain("JSA widths must be positive".into()));
        }
        Ok(Self {
            sigma_plus,
            sigma_minus,
            pump_center,
        })
    }

    /// JSA for a pump of intensity FWHM `pump_fwhm` (angular) whose
    /// difference-frequency width is chosen to give Schmidt number `k`.
    /// The difference width is the broader one, as for a long crystal.
    pub fn from_pump_and_schmidt(pump_center: T, pump_fwhm: T, k: T) -> Result<Self> {
        if !(pump_fwhm > T::zero()) {
            return Err(Error::Domain("pump bandwidth must be positive".into()));
        }
        let q = geometric_ratio(k)?;
        let sigma_plus = pump_fwhm / (T::lit(2.0) * (T::lit(2.0) * T::LN_2()).sqrt());
        let sigma_minus = sigma_plus * (T::one() + q) / (T::one() - q);
        Self::new(sigma_plus, sigma_minus, pump_center)
    }

    pub fn tau_s(&self) -> T {
        T::one() / (self.sigma_plus * self.sigma_minus).sqrt()
    }

    pub fn ratio(&self) -> T {
        (self.sigma_plus - self.sigma_minus).abs() / (self.sigma_plus + self.sigma_minus)
    }

    /// Schmidt number implied by the analytic model.
    pub fn schmidt_number(&self) -> T {
        let q2 = self.ratio() * self.ratio();
        (T::one() + q2) / (T::one() - q2)
    }

    /// Degenerate signal/idler centre frequency.
    pub fn signal_center(&self) -> T {
        self.pump_center * T::lit(0.5)
    }

    pub fn amplitude(&self, omega: T, omega_prime: T) -> T {
        let sum = omega + omega_prime - self.pump_center;
        let diff = omega - omega_prime;
        let four = T::lit(4.0);
        (-(sum * sum) / (four * self.sigma_plus * self.sigma_plus)
            - diff * diff / (four * self.sigma_minus * self.sigma_minus))
            .exp()
    }

    /// Grid covering six widths of the broader direction, resolving the
    /// narrower one with at least two samples per standard deviation.
    pub fn oracle_grid(&self) -> Result<SpectralGrid<T>> {
        let wide = self.sigma_plus.max(self.sigma_minus);
        let narrow = self.sigma_plus.min(self.sigma_minus);
        let half_span = T::lit(6.0) * wide;
        let steps = (T::lit(2.0) * half_span / (narrow * T::lit(0.5))).ceil();
        let mut n = steps.to_usize().unwrap_or(201).max(200) + 1;
        if n.is_multiple_of(2) {
            n += 1;
        }
        SpectralGrid::new(self.signal_center(), half_span, n)
    }
}

/// Numerical Schmidt decomposition of a sampled JSA.
#[derive(Debug, Clone)]
pub struct JsaSchmidt<T> {
    /// Singular values, descending, with unit sum of squares.
    pub singular_values: Vec<T>,
    /// Left singular vectors as L²-normalized functions on the grid, sign
    /// fixed so that the largest-magnitude sample is positive.
    pub modes: Vec<Vec<T>>,
}

impl<T: Real> JsaSchmidt<T> {
    pub fn schmidt_number(&self) -> T {
        let s4: T = self
            .singular_values
            .iter()
            .map(|&s| (s * s) * (s * s))
            .sum();
        T::one() / s4
    }
}

/// Discretizes `jsa` on `grid × grid` and takes its singular value
/// decomposition.
pub fn jsa_schmidt_oracle<T: Real>(
    jsa: &DoubleGaussianJsa<T>,
    grid: &SpectralGrid<T>,
) -> JsaSchmidt<T> {
    let n = grid.len();
    let step = grid.step().as_f64();
    let omegas: Vec<T> = grid.samples().collect();
    let m = DMatrix::<f64>::from_fn(n, n, |i, j| {
        jsa.amplitude(omegas[i], omegas[j]).as_f64() * step
    });
    let svd = m.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let norm = svd
        .singular_values
        .iter()
        .map(|s| s * s)
        .sum::<f64>()
        .sqrt();
    let singular_values = order
        .iter()
        .map(|&i| T::lit(svd.singular_values[i] / norm))
        .collect();
    let scale = 1.0 / step.sqrt();
    let modes = order
        .iter()
        .map(|&i| {
            let col = u.column(i);
            let peak = col
                .iter()
                .copied()
                .fold(0.0_f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
            let sign = if peak < 0.0 { -1.0 } else { 1.0 };
            col.iter().map(|v| T::lit(sign * v * scale)).collect()
        })
        .collect();
    JsaSchmidt {
        singular_values,
        modes,
    }
}
