//! Spectral grids and conversions between wavelength-domain bandwidths and
//! angular frequency.
//!
//! All mode functions, filters and overlap integrals live in angular
//! frequency (rad/s). Wavelengths only appear at the boundaries, where
//! bandwidths are quoted as a FWHM in metres around a carrier wavelength.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// One nanometre in metres.
pub const NANOMETRE: f64 = 1e-9;

/// Converts a wavelength FWHM around `carrier` into an angular-frequency FWHM,
/// `2πc·fwhm/carrier²`.
pub fn wavelength_fwhm_to_angular<T: Real>(carrier: T, fwhm: T) -> Result<T> {
    if !(carrier > T::zero()) {
        return Err(Error::Domain(format!(
            "carrier wavelength must be positive, got {carrier}"
        )));
    }
    if fwhm < T::zero() {
        return Err(Error::Domain(format!(
            "bandwidth must be non-negative, got {fwhm}"
        )));
    }
    let two_pi_c = T::lit(2.0) * T::PI() * T::lit(SPEED_OF_LIGHT);
    Ok(two_pi_c * fwhm / (carrier * carrier))
}

/// Inverse of [`wavelength_fwhm_to_angular`].
pub fn angular_fwhm_to_wavelength<T: Real>(carrier: T, fwhm: T) -> Result<T> {
    if !(carrier > T::zero()) {
        return Err(Error::Domain(format!(
            "carrier wavelength must be positive, got {carrier}"
        )));
    }
    if fwhm < T::zero() {
        return Err(Error::Domain(format!(
            "bandwidth must be non-negative, got {fwhm}"
        )));
    }
    let two_pi_c = T::lit(2.0) * T::PI() * T::lit(SPEED_OF_LIGHT);
    Ok(fwhm * carrier * carrier / two_pi_c)
}

/// Angular frequency of light with the given vacuum wavelength.
pub fn wavelength_to_angular<T: Real>(wavelength: T) -> Result<T> {
    if !(wavelength > T::zero()) {
        return Err(Error::Domain(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    Ok(T::lit(2.0) * T::PI() * T::lit(SPEED_OF_LIGHT) / wavelength)
}

/// A bandwidth quoted in the wavelength domain together with its
/// angular-frequency equivalent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthSpec<T> {
    pub carrier_wavelength: T,
    pub fwhm_wavelength: T,
    pub fwhm_angular_frequency: T,
}

impl<T: Real> BandwidthSpec<T> {
    pub fn new(carrier_wavelength: T, fwhm_wavelength: T) -> Result<Self> {
        if !(fwhm_wavelength > T::zero()) {
            return Err(Error::Domain(
                "bandwidth FWHM must be strictly positive".into(),
            ));
        }
        let fwhm_angular_frequency =
            wavelength_fwhm_to_angular(carrier_wavelength, fwhm_wavelength)?;
        Ok(Self {
            carrier_wavelength,
            fwhm_wavelength,
            fwhm_angular_frequency,
        })
    }

    /// Convenience constructor taking both lengths in nanometres.
    pub fn from_nm(carrier_nm: T, fwhm_nm: T) -> Result<Self> {
        let nm = T::lit(NANOMETRE);
        Self::new(carrier_nm * nm, fwhm_nm * nm)
    }
}

/// Uniform sampling of angular frequency, symmetric about `center`.
///
/// `n_points` is odd so that the centre itself is a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid<T> {
    center: T,
    half_span: T,
    n_points: usize,
    step: T,
}

impl<T: Real> SpectralGrid<T> {
    pub fn new(center: T, half_span: T, n_points: usize) -> Result<Self> {
        if n_points < 3 || n_points.is_multiple_of(2) {
            return Err(Error::Argument(format!(
                "grid needs an odd number of points >= 3, got {n_points}"
            )));
        }
        if !(half_span > T::zero()) || !half_span.is_finite() {
            return Err(Error::Argument(format!(
                "half span must be positive, got {half_span}"
            )));
        }
        let step = T::lit(2.0) * half_span / T::from_usize_lossy(n_points - 1);
        Ok(Self {
            center,
            half_span,
            n_points,
            step,
        })
    }

    #[inline]
    pub fn center(&self) -> T {
        self.center
    }

    #[inline]
    pub fn half_span(&self) -> T {
        self.half_span
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn step(&self) -> T {
        self.step
    }

    /// Index of the central sample.
    #[inline]
    pub fn mid(&self) -> usize {
        (self.n_points - 1) / 2
    }

    /// Detuning of sample `i` from the centre. Exactly antisymmetric about
    /// [`mid`](Self::mid), which keeps parity arguments free of roundoff.
    #[inline]
    pub fn offset(&self, i: usize) -> T {
        let mid = self.mid();
        if i >= mid {
            T::from_usize_lossy(i - mid) * self.step
        } else {
            -(T::from_usize_lossy(mid - i) * self.step)
        }
    }

    /// Absolute angular frequency of sample `i`.
    #[inline]
    pub fn omega(&self, i: usize) -> T {
        self.center + i_as::<T>(i) * self.step - self.half_span
    }

    pub fn samples(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n_points).map(move |i| self.omega(i))
    }

    pub fn offsets(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n_points).map(move |i| self.offset(i))
    }

    /// Smallest and largest sampled frequency.
    pub fn bounds(&self) -> (T, T) {
        (self.center - self.half_span, self.center + self.half_span)
    }

    /// Trapezoidal inner product of two sampled functions.
    pub fn inner(&self, a: &[T], b: &[T]) -> T {
        debug_assert_eq!(a.len(), self.n_points);
        debug_assert_eq!(b.len(), self.n_points);
        let last = self.n_points - 1;
        let interior: T = (1..last).map(|i| a[i] * b[i]).sum();
        (interior + T::lit(0.5) * (a[0] * b[0] + a[last] * b[last])) * self.step
    }
}

#[inline]
fn i_as<T: Real>(i: usize) -> T {
    T::from_usize_lossy(i)
}

/// Default number of spectral samples.
pub const DEFAULT_GRID_POINTS: usize = 4097;

/// Default grid for a Hermite-Gauss basis of `n_modes` modes with time scale
/// `tau_s`, widened if needed to contain a filter of angular FWHM
/// `filter_fwhm`.
///
/// The half span covers eight standard deviations of the highest-order mode,
/// `8·sqrt(N - 1/2)/tau_s`.
pub fn default_grid<T: Real>(
    center: T,
    tau_s: T,
    n_modes: usize,
    filter_fwhm: Option<T>,
    n_points: usize,
) -> Result<SpectralGrid<T>> {
    if !(tau_s > T::zero()) {
        return Err(Error::Domain(format!(
            "tau_s must be positive, got {tau_s}"
        )));
    }
    let order = T::from_usize_lossy(n_modes.max(1)) - T::lit(0.5);
    let mut half_span = T::lit(8.0) * order.sqrt() / tau_s;
    if let Some(w) = filter_fwhm {
        if w.is_finite() && w > half_span {
            half_span = w;
        }
    }
    SpectralGrid::new(center, half_span, n_points)
}
