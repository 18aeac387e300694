//! Phase-space description of the heralded state as seen by the homodyne
//! detector.
//!
//! Quadratures are dimensionless with vacuum variance `1/2`. Every state
//! here is a Gaussian envelope times an even quadratic polynomial,
//!
//! `W(x, y) = exp(-x²/2σx² - y²/2σy²)/(2πσxσy) · [a0 + bx·x²/σx² + by·y²/σy²]`,
//!
//! normalized so that `a0 + bx + by = 1`. [`PolyGaussian`] holds that
//! canonical form; the concrete states convert into it.

use crate::error::{Error, Result};
use crate::overlaps::{GammaMatrix, LoProjection};
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;
use crate::supermodes::SqueezingSpectrum;

/// Anything that can be evaluated on the phase plane.
pub trait PhaseSpaceFunction<T: Real> {
    fn value(&self, x: T, y: T) -> T;

    /// Envelope widths `(σx, σy)`, used to size sampling grids.
    fn envelope(&self) -> (T, T);
}

/// `exp(-u²/2 - v²/2)/(2πσxσy) · [a0 + bx u² + by v²]` with `u = x/σx`, `v = y/σy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyGaussian<T> {
    pub sigma_x: T,
    pub sigma_y: T,
    pub a0: T,
    pub bx: T,
    pub by: T,
}

impl<T: Real> PolyGaussian<T> {
    /// Exact `∬W`, which is `a0 + bx + by`.
    pub fn integral(&self) -> T {
        self.a0 + self.bx + self.by
    }

    /// Volume of the negative part, `∬_{W<0} |W|`, evaluated semi-analytically.
    ///
    /// The negative region is the ellipse `bx u² + by v² < -a0`. With
    /// `u = U sinθ` the inner `v` integral has a closed form in `erf` and the
    /// remaining `θ` integrand is analytic, so a fixed Gauss–Legendre rule
    /// converges to machine precision.
    pub fn negativity(&self) -> T {
        let zero = T::zero();
        if self.a0 >= zero {
            return zero;
        }
        let (a0, bx, by) = if self.bx > zero {
            (self.a0, self.bx, self.by)
        } else {
            (self.a0, self.by, self.bx)
        };
        if !(bx > zero) {
            return zero;
        }
        let neg = -a0;
        let root_2pi = (T::lit(2.0) * T::PI()).sqrt();
        let u_max = (neg / bx).sqrt();
        let rule = GaussLegendre::<T>::new(64);
        let half_pi = T::FRAC_PI_2();
        let integral = rule.integrate(zero, half_pi, |theta| {
            let (s, c) = theta.sin_cos();
            let u = u_max * s;
            let depth = neg * c * c;
            let inner = if by > zero {
                let v = (neg / by).sqrt() * c;
                let i0 = root_2pi * (v / T::SQRT_2()).erf();
                let i2 = i0 - T::lit(2.0) * v * (-v * v / T::lit(2.0)).exp();
                depth * i0 - by * i2
            } else {
                depth * root_2pi
            };
            u_max * c * (-u * u / T::lit(2.0)).exp() * inner
        });
        // θ ∈ (0, π/2) covers u > 0 only
        T::lit(2.0) * integral / (T::lit(2.0) * T::PI())
    }
}

impl<T: Real> PhaseSpaceFunction<T> for PolyGaussian<T> {
    fn value(&self, x: T, y: T) -> T {
        let u = x / self.sigma_x;
        let v = y / self.sigma_y;
        let env = (-(u * u + v * v) / T::lit(2.0)).exp();
        env / (T::lit(2.0) * T::PI() * self.sigma_x * self.sigma_y)
            * (self.a0 + self.bx * u * u + self.by * v * v)
    }

    fn envelope(&self) -> (T, T) {
        (self.sigma_x, self.sigma_y)
    }
}

/// Homodyne envelope variances `σx² = ½Σc²(1+μ)/(1-μ)`, `σy² = ½Σc²(1-μ)/(1+μ)`.
pub fn envelope_variances<T: Real>(c: &[T], squeezing: &SqueezingSpectrum<T>) -> (T, T) {
    let half = T::lit(0.5);
    let mut sx = T::zero();
    let mut sy = T::zero();
    for (&ck, &mu) in c.iter().zip(squeezing.mu()) {
        let c2 = ck * ck;
        sx = sx + c2 * (T::one() + mu) / (T::one() - mu);
        sy = sy + c2 * (T::one() - mu) / (T::one() + mu);
    }
    (half * sx, half * sy)
}

/// Heralding normalization `P = Σ γ_nn n_n`.
pub fn heralding_norm<T: Real>(gamma: &GammaMatrix<T>, squeezing: &SqueezingSpectrum<T>) -> T {
    gamma
        .diagonal()
        .iter()
        .zip(squeezing.n_mean())
        .map(|(&g, &n)| g * n)
        .sum()
}

/// Protocol success probability `P·θ²` with `sin(θ/2) = r_s`.
pub fn success_probability<T: Real>(
    gamma: &GammaMatrix<T>,
    squeezing: &SqueezingSpectrum<T>,
    r_s: T,
) -> Result<T> {
    if !(r_s >= T::zero() && r_s <= T::lit(0.5)) {
        return Err(Error::Argument(format!(
            "tap reflectivity r_s must lie in [0, 0.5], got {r_s}"
        )));
    }
    let theta = T::lit(2.0) * r_s.asin();
    Ok(heralding_norm(gamma, squeezing) * theta * theta)
}

/// Everything the heralded Wigner function depends on, reduced to scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldedStateParams<T> {
    pub c: Vec<T>,
    pub sigma_x2: T,
    pub sigma_y2: T,
    /// `P = Σ γ_nn n_n`.
    pub p_norm: T,
    /// `Σ γ_kn μ_kμ_n c_k c_n/((1-μ_k)(1-μ_n))`.
    pub x_weight: T,
    /// `Σ γ_kn μ_kμ_n c_k c_n/((1+μ_k)(1+μ_n))`.
    pub y_weight: T,
}

impl<T: Real> HeraldedStateParams<T> {
    pub fn new(
        gamma: &GammaMatrix<T>,
        lo: &LoProjection<T>,
        squeezing: &SqueezingSpectrum<T>,
    ) -> Result<Self> {
        let n = squeezing.len();
        if gamma.n_modes() != n || lo.len() != n {
            return Err(Error::Argument(format!(
                "mode count mismatch: gamma {}, LO {}, squeezing {n}",
                gamma.n_modes(),
                lo.len()
            )));
        }
        let p_norm = heralding_norm(gamma, squeezing);
        if !(p_norm > T::zero()) {
            return Err(Error::NothingToHerald);
        }
        let c = lo.coefficients().to_vec();
        let (sigma_x2, sigma_y2) = envelope_variances(&c, squeezing);
        let wx: Vec<T> = (0..n)
            .map(|k| squeezing.mu()[k] * c[k] / (T::one() - squeezing.mu()[k]))
            .collect();
        let wy: Vec<T> = (0..n)
            .map(|k| squeezing.mu()[k] * c[k] / (T::one() + squeezing.mu()[k]))
            .collect();
        Ok(Self {
            c,
            sigma_x2,
            sigma_y2,
            p_norm,
            x_weight: gamma.quadratic_form(&wx),
            y_weight: gamma.quadratic_form(&wy),
        })
    }

    /// Canonical polynomial-Gaussian form of `W_H`.
    pub fn shape(&self) -> PolyGaussian<T> {
        let bx = self.x_weight / (T::lit(2.0) * self.sigma_x2 * self.p_norm);
        let by = self.y_weight / (T::lit(2.0) * self.sigma_y2 * self.p_norm);
        PolyGaussian {
            sigma_x: self.sigma_x2.sqrt(),
            sigma_y: self.sigma_y2.sqrt(),
            a0: T::one() - bx - by,
            bx,
            by,
        }
    }

    /// Wigner negativity of the heralded state.
    pub fn negativity(&self) -> T {
        self.shape().negativity()
    }
}

impl<T: Real> PhaseSpaceFunction<T> for HeraldedStateParams<T> {
    /// `W_H(x, y)` written term by term as the bracketed sum over `γ`.
    fn value(&self, x: T, y: T) -> T {
        let two = T::lit(2.0);
        let env = (-(x * x / (two * self.sigma_x2) + y * y / (two * self.sigma_y2))).exp();
        let bracket = self.p_norm
            + (x * x / self.sigma_x2 - T::one()) * self.x_weight / (two * self.sigma_x2)
            + (y * y / self.sigma_y2 - T::one()) * self.y_weight / (two * self.sigma_y2);
        env * bracket / (two * T::PI() * (self.sigma_x2 * self.sigma_y2).sqrt() * self.p_norm)
    }

    fn envelope(&self) -> (T, T) {
        (self.sigma_x2.sqrt(), self.sigma_y2.sqrt())
    }
}

/// `W_SVS`: the bare Gaussian envelope.
pub fn squeezed_vacuum<T: Real>(sigma_x2: T, sigma_y2: T) -> PolyGaussian<T> {
    PolyGaussian {
        sigma_x: sigma_x2.sqrt(),
        sigma_y: sigma_y2.sqrt(),
        a0: T::one(),
        bx: T::zero(),
        by: T::zero(),
    }
}

/// `W_k^(1)`: a photon subtracted from supermode `k`, seen through envelope
/// variances `σx²`, `σy²`.
pub fn subtracted_component<T: Real>(mu_k: T, sigma_x2: T, sigma_y2: T) -> PolyGaussian<T> {
    let bx = (T::one() + mu_k) / (T::lit(2.0) * sigma_x2 * (T::one() - mu_k));
    let by = (T::one() - mu_k) / (T::lit(2.0) * sigma_y2 * (T::one() + mu_k));
    PolyGaussian {
        sigma_x: sigma_x2.sqrt(),
        sigma_y: sigma_y2.sqrt(),
        a0: T::one() - bx - by,
        bx,
        by,
    }
}

/// Unfiltered heralded state `Σ_k p_k [c_k² W_k^(1) + (1 - c_k²) W_SVS]`.
pub fn no_filter_mixture<T: Real>(
    squeezing: &SqueezingSpectrum<T>,
    c: &[T],
) -> Result<PolyGaussian<T>> {
    if c.len() != squeezing.len() {
        return Err(Error::Argument(format!(
            "LO has {} coefficients for {} modes",
            c.len(),
            squeezing.len()
        )));
    }
    let total = squeezing.total_photons();
    if !(total > T::zero()) {
        return Err(Error::NothingToHerald);
    }
    let (sx2, sy2) = envelope_variances(c, squeezing);
    let mut mix = squeezed_vacuum(sx2, sy2);
    mix.a0 = T::zero();
    for (k, (&n, &mu)) in squeezing.n_mean().iter().zip(squeezing.mu()).enumerate() {
        let p = n / total;
        let c2 = c[k] * c[k];
        let comp = subtracted_component(mu, sx2, sy2);
        mix.a0 = mix.a0 + p * (c2 * comp.a0 + (T::one() - c2));
        mix.bx = mix.bx + p * c2 * comp.bx;
        mix.by = mix.by + p * c2 * comp.by;
    }
    Ok(mix)
}

/// Single-mode photon-subtracted squeezed vacuum with `s = (1+μ)/(1-μ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetState<T> {
    pub s: T,
}

impl<T: Real> TargetState<T> {
    pub fn new(s: T) -> Result<Self> {
        if !(s > T::zero()) || !s.is_finite() {
            return Err(Error::Domain(format!(
                "target squeezing factor must be positive, got {s}"
            )));
        }
        Ok(Self { s })
    }

    pub fn from_mu(mu: T) -> Result<Self> {
        if !(mu > -T::one() && mu < T::one()) {
            return Err(Error::Domain(format!("mu must lie in (-1, 1), got {mu}")));
        }
        Self::new((T::one() + mu) / (T::one() - mu))
    }

    pub fn from_zeta(zeta: T) -> Result<Self> {
        Self::from_mu(zeta.tanh())
    }

    pub fn mu(&self) -> T {
        (self.s - T::one()) / (self.s + T::one())
    }

    /// `W_T` in canonical form: `σx² = s/2`, `σy² = 1/(2s)`.
    pub fn shape(&self) -> PolyGaussian<T> {
        PolyGaussian {
            sigma_x: (self.s / T::lit(2.0)).sqrt(),
            sigma_y: (T::one() / (T::lit(2.0) * self.s)).sqrt(),
            a0: -T::one(),
            bx: T::one(),
            by: T::one(),
        }
    }
}

impl<T: Real> PhaseSpaceFunction<T> for TargetState<T> {
    /// `exp(-(x²/s + s y²))/π · [2x²/s + 2s y² - 1]`.
    fn value(&self, x: T, y: T) -> T {
        let s = self.s;
        let q = x * x / s + s * y * y;
        (-q).exp() / T::PI() * (T::lit(2.0) * q - T::one())
    }

    fn envelope(&self) -> (T, T) {
        let sh = self.shape();
        (sh.sigma_x, sh.sigma_y)
    }
}

/// Overlap `2π∬W_H W_T` evaluated in closed form.
pub fn fidelity_closed_form<T: Real>(
    params: &HeraldedStateParams<T>,
    target: &TargetState<T>,
) -> T {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let s = target.s;
    let (sx2, sy2) = (params.sigma_x2, params.sigma_y2);
    let big_a = params.p_norm - params.x_weight / (two * sx2) - params.y_weight / (two * sy2);
    let big_b = params.x_weight / (two * sx2 * sx2);
    let big_c = params.y_weight / (two * sy2 * sy2);
    let ax = T::one() / sx2 + two / s;
    let ay = T::one() / sy2 + two * s;
    let pref = two / (params.p_norm * (sx2 * sy2).sqrt() * (ax * ay).sqrt());
    let bracket = -big_a
        + (two * big_a / s - big_b) / ax
        + (two * big_a * s - big_c) / ay
        + two * big_b / s * three / (ax * ax)
        + two * big_c * s * three / (ay * ay)
        + (two * big_c / s + two * big_b * s) / (ax * ay);
    pref * bracket
}

/// Purity `tr(ρ̃²)` of the heralded single-photon mode, with
/// `ρ̃ ∝ M_kn = γ_kn ζ_k ζ_n`.
pub fn heralded_photon_purity<T: Real>(gamma: &GammaMatrix<T>, zeta: &[T]) -> Result<T> {
    let n = gamma.n_modes();
    if zeta.len() != n {
        return Err(Error::Argument(format!(
            "{} squeezing values for {n} modes",
            zeta.len()
        )));
    }
    let mut trace = T::zero();
    let mut sq = T::zero();
    for k in 0..n {
        trace = trace + gamma.get(k, k) * zeta[k] * zeta[k];
        for l in 0..n {
            let m = gamma.get(k, l) * zeta[k] * zeta[l];
            sq = sq + m * m;
        }
    }
    if !(trace > T::zero()) {
        return Err(Error::Domain("heralded mode has zero weight".into()));
    }
    Ok(sq / (trace * trace))
}

/// Default number of samples per phase-space axis.
pub const DEFAULT_PHASE_POINTS: usize = 801;

/// Minimum half extent in units of `max(σx, σy, 1)`.
pub const MIN_EXTENT_SIGMAS: f64 = 6.0;

/// Square sampling window `[-extent, extent]²` with `n_points` per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceSpec<T> {
    pub extent: T,
    pub n_points: usize,
}

impl<T: Real> PhaseSpaceSpec<T> {
    pub fn new(extent: T, n_points: usize) -> Result<Self> {
        if n_points < 3 || n_points.is_multiple_of(2) {
            return Err(Error::Argument(format!(
                "phase-space grid needs an odd number of points >= 3, got {n_points}"
            )));
        }
        if !(extent > T::zero()) {
            return Err(Error::Argument(format!(
                "extent must be positive, got {extent}"
            )));
        }
        Ok(Self { extent, n_points })
    }

    /// Window of `±6·max(σx, σy, 1)` for a state of the given envelope.
    pub fn covering(envelope: (T, T), n_points: usize) -> Result<Self> {
        let width = envelope.0.max(envelope.1).max(T::one());
        Self::new(T::lit(MIN_EXTENT_SIGMAS) * width, n_points)
    }

    pub fn step(&self) -> T {
        T::lit(2.0) * self.extent / T::from_usize_lossy(self.n_points - 1)
    }

    pub fn axis(&self) -> Vec<T> {
        let step = self.step();
        let mid = (self.n_points - 1) / 2;
        (0..self.n_points)
            .map(|i| {
                if i >= mid {
                    T::from_usize_lossy(i - mid) * step
                } else {
                    -(T::from_usize_lossy(mid - i) * step)
                }
            })
            .collect()
    }

    /// Same window with the sample spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            extent: self.extent,
            n_points: 2 * self.n_points - 1,
        }
    }
}

/// Sampled Wigner function, row-major with `x` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid<T> {
    pub x_axis: Vec<T>,
    pub y_axis: Vec<T>,
    pub values: Vec<T>,
    pub cell_area: T,
    /// Envelope widths of the sampled state.
    pub envelope: (T, T),
}

impl<T: Real> WignerGrid<T> {
    pub fn sample<F: PhaseSpaceFunction<T> + ?Sized>(f: &F, spec: &PhaseSpaceSpec<T>) -> Self {
        let axis = spec.axis();
        let mut values = Vec::with_capacity(axis.len() * axis.len());
        for &x in &axis {
            for &y in &axis {
                values.push(f.value(x, y));
            }
        }
        let step = spec.step();
        Self {
            x_axis: axis.clone(),
            y_axis: axis,
            values,
            cell_area: step * step,
            envelope: f.envelope(),
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[i * self.y_axis.len() + j]
    }

    pub fn integral(&self) -> T {
        self.values.iter().copied().sum::<T>() * self.cell_area
    }

    pub fn abs_integral(&self) -> T {
        self.values.iter().map(|v| v.abs()).sum::<T>() * self.cell_area
    }

    fn extent(&self) -> T {
        let x = self.x_axis.last().copied().unwrap_or(T::zero());
        let y = self.y_axis.last().copied().unwrap_or(T::zero());
        x.min(y)
    }

    fn same_layout(&self, other: &Self) -> bool {
        self.x_axis == other.x_axis && self.y_axis == other.y_axis
    }
}

/// Tolerance below which a grid negativity is reported as exactly zero.
pub const NEGATIVITY_FLOOR: f64 = 1e-6;

/// `½(∬|W| - 1)` by direct summation over the grid.
pub fn negativity<T: Real>(w: &WignerGrid<T>) -> Result<T> {
    let need = T::lit(MIN_EXTENT_SIGMAS) * w.envelope.0.max(w.envelope.1).max(T::one());
    if w.extent() < need * (T::one() - T::lit(1e-12)) {
        return Err(Error::Precision {
            what: "phase-space window too small for negativity".into(),
            value: w.extent().as_f64(),
            tolerance: need.as_f64(),
        });
    }
    let n = (w.abs_integral() - T::one()) / T::lit(2.0);
    Ok(if n.abs() < T::lit(NEGATIVITY_FLOOR) {
        n.max(T::zero())
    } else {
        n
    })
}

/// Maximum change allowed between a grid result and its refinement.
pub const REFINEMENT_TOLERANCE: f64 = 1e-4;

/// Grid negativity at `spec` and at twice the resolution; fails unless the
/// two agree within [`REFINEMENT_TOLERANCE`].
pub fn negativity_refined<T: Real, F: PhaseSpaceFunction<T> + ?Sized>(
    f: &F,
    spec: &PhaseSpaceSpec<T>,
) -> Result<T> {
    let coarse = negativity(&WignerGrid::sample(f, spec))?;
    let fine = negativity(&WignerGrid::sample(f, &spec.refined()))?;
    let delta = (fine - coarse).abs();
    if delta > T::lit(REFINEMENT_TOLERANCE) {
        return Err(Error::Precision {
            what: "negativity not converged under grid refinement".into(),
            value: delta.as_f64(),
            tolerance: REFINEMENT_TOLERANCE,
        });
    }
    Ok(fine)
}

/// `2π Σ w1·w2·cell_area` over identical grids.
pub fn fidelity_numeric<T: Real>(w1: &WignerGrid<T>, w2: &WignerGrid<T>) -> Result<T> {
    if !w1.same_layout(w2) {
        return Err(Error::Argument(
            "fidelity needs both Wigner functions on the same grid".into(),
        ));
    }
    let s: T = w1.values.iter().zip(&w2.values).map(|(&a, &b)| a * b).sum();
    Ok(T::lit(2.0) * T::PI() * s * w1.cell_area)
}

/// `W_H` sampled on `spec`.
pub fn wigner_heralded<T: Real>(
    params: &HeraldedStateParams<T>,
    spec: &PhaseSpaceSpec<T>,
) -> WignerGrid<T> {
    WignerGrid::sample(params, spec)
}

/// Unfiltered mixture sampled on `spec`.
pub fn wigner_no_filter<T: Real>(
    squeezing: &SqueezingSpectrum<T>,
    c: &[T],
    spec: &PhaseSpaceSpec<T>,
) -> Result<WignerGrid<T>> {
    Ok(WignerGrid::sample(&no_filter_mixture(squeezing, c)?, spec))
}

/// `W_k^(1)` sampled on `spec`.
pub fn wigner_subtracted_component<T: Real>(
    k: usize,
    squeezing: &SqueezingSpectrum<T>,
    sigma_x2: T,
    sigma_y2: T,
    spec: &PhaseSpaceSpec<T>,
) -> Result<WignerGrid<T>> {
    let mu = *squeezing.mu().get(k).ok_or_else(|| {
        Error::Argument(format!(
            "mode {k} outside a {}-mode spectrum",
            squeezing.len()
        ))
    })?;
    Ok(WignerGrid::sample(
        &subtracted_component(mu, sigma_x2, sigma_y2),
        spec,
    ))
}

/// `W_SVS` sampled on `spec`.
pub fn wigner_svs<T: Real>(sigma_x2: T, sigma_y2: T, spec: &PhaseSpaceSpec<T>) -> WignerGrid<T> {
    WignerGrid::sample(&squeezed_vacuum(sigma_x2, sigma_y2), spec)
}

/// `W_T` sampled on `spec`.
pub fn wigner_target<T: Real>(target: &TargetState<T>, spec: &PhaseSpaceSpec<T>) -> WignerGrid<T> {
    WignerGrid::sample(target, spec)
}

/// Ideal photon-subtracted squeezed-vacuum negativity `2e^{-1/2} - 1`.
pub fn ideal_kitten_negativity<T: Real>() -> T {
    T::lit(2.0) * (-T::lit(0.5)).exp() - T::one()
}
