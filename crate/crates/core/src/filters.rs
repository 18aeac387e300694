//! Heralding-path filter transmission profiles.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterKind {
    /// No filter, `t(ω) = 1`.
    Identity,
    /// Flat passband of unit transmission, zero outside.
    Rectangular,
    /// `t(ω) = exp(-4 ln2 (ω - center)²/fwhm²)`.
    Gaussian,
    /// Infinitely narrow filter; only handled in closed form.
    DeltaLimit,
}

/// A real spectral transmission profile `t(ω)` with `0 <= t <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterProfile<T> {
    pub kind: FilterKind,
    pub center: T,
    /// Full width at half maximum of `t(ω)`; unused for `Identity` and `DeltaLimit`.
    pub fwhm: T,
}

impl<T: Real> FilterProfile<T> {
    pub fn identity() -> Self {
        Self {
            kind: FilterKind::Identity,
            center: T::zero(),
            fwhm: T::infinity(),
        }
    }

    pub fn rectangular(center: T, fwhm: T) -> Result<Self> {
        Self::checked(FilterKind::Rectangular, center, fwhm)
    }

    pub fn gaussian(center: T, fwhm: T) -> Result<Self> {
        Self::checked(FilterKind::Gaussian, center, fwhm)
    }

    pub fn delta(center: T) -> Self {
        Self {
            kind: FilterKind::DeltaLimit,
            center,
            fwhm: T::zero(),
        }
    }

    fn checked(kind: FilterKind, center: T, fwhm: T) -> Result<Self> {
        if !(fwhm > T::zero()) {
            return Err(Error::Domain(format!(
                "filter FWHM must be positive, got {fwhm}"
            )));
        }
        Ok(Self { kind, center, fwhm })
    }

    /// Amplitude transmission `t(ω)`.
    pub fn transmission(&self, omega: T) -> Result<T> {
        match self.kind {
            FilterKind::Identity => Ok(T::one()),
            FilterKind::Rectangular => {
                let half = self.fwhm * T::lit(0.5);
                Ok(if (omega - self.center).abs() <= half {
                    T::one()
                } else {
                    T::zero()
                })
            }
            FilterKind::Gaussian => {
                let d = (omega - self.center) / self.fwhm;
                Ok((-T::lit(4.0) * T::LN_2() * d * d).exp())
            }
            FilterKind::DeltaLimit => Err(Error::Unsupported(
                "a delta filter cannot be sampled; use the closed-form narrowband limit".into(),
            )),
        }
    }

    /// Amplitude reflection `r(ω) = sqrt(1 - t²)`.
    pub fn reflection(&self, omega: T) -> Result<T> {
        let t = self.transmission(omega)?;
        Ok((T::one() - t * t).max(T::zero()).sqrt())
    }

    /// Transmitted intensity `|t(ω)|²`, the weight in every overlap integral.
    pub fn power(&self, omega: T) -> Result<T> {
        let t = self.transmission(omega)?;
        Ok(t * t)
    }

    /// Frequencies where `t` jumps, if any.
    pub fn discontinuities(&self) -> Option<(T, T)> {
        match self.kind {
            FilterKind::Rectangular => {
                let half = self.fwhm * T::lit(0.5);
                Some((self.center - half, self.center + half))
            }
            _ => None,
        }
    }

    /// True when `t` vanishes exactly somewhere, so perpendicular modes exist.
    pub fn has_stopband(&self) -> bool {
        matches!(self.kind, FilterKind::Rectangular)
    }
}
