use crate::error::{Error, Result};
use crate::filters::FilterProfile;
use crate::overlaps::{
    gamma_analytic, gamma_quadrature, lo_coefficients, matched_lo_fwhm, GammaMatrix, LoProjection,
};
use crate::supermodes::{
    required_modes, zeta_for_noise_reduction_db, DoubleGaussianJsa, SqueezingSpectrum,
    SupermodeBasis, MAX_MODES,
};
use crate::units::{
    angular_fwhm_to_wavelength, default_grid, wavelength_fwhm_to_angular, wavelength_to_angular,
    NANOMETRE,
};
use crate::wigner::{fidelity_closed_form, success_probability, HeraldedStateParams, TargetState};

/// Heralding filter as quoted in the lab, width in nanometres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterSpec {
    None,
    Rectangular { fwhm_nm: f64 },
    Gaussian { fwhm_nm: f64 },
}

impl FilterSpec {
    pub fn fwhm_nm(&self) -> Option<f64> {
        match *self {
            FilterSpec::None => None,
            FilterSpec::Rectangular { fwhm_nm } | FilterSpec::Gaussian { fwhm_nm } => Some(fwhm_nm),
        }
    }

    /// Same shape with a different width; `None` stays `None`.
    pub fn with_fwhm(&self, fwhm_nm: f64) -> Self {
        match *self {
            FilterSpec::None => FilterSpec::None,
            FilterSpec::Rectangular { .. } => FilterSpec::Rectangular { fwhm_nm },
            FilterSpec::Gaussian { .. } => FilterSpec::Gaussian { fwhm_nm },
        }
    }

    pub fn label(&self) -> String {
        match *self {
            FilterSpec::None => "none".into(),
            FilterSpec::Rectangular { fwhm_nm } => format!("rect {fwhm_nm} nm"),
            FilterSpec::Gaussian { fwhm_nm } => format!("gauss {fwhm_nm} nm"),
        }
    }
}

/// How `γ` is obtained for a setup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaMethod {
    #[default]
    Analytic,
    Quadrature,
}

/// Physical scenario shared by all runs: source, squeezing and heralding tap.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub signal_nm: f64,
    pub pump_nm: f64,
    pub pump_fwhm_nm: f64,
    /// Squeezing of the first supermode in dB of noise reduction (sign ignored).
    pub zeta0_db: f64,
    /// Power reflectivity `r_s²` of the heralding tap.
    pub rs2: f64,
    /// Lower bound on the number of modelled supermodes. Modes beyond those
    /// needed for the squeezing spectrum carry vacuum and absorb the part of
    /// a mismatched LO that lies outside the squeezed modes.
    pub min_modes: usize,
    /// Overrides the mode count when set.
    pub modes: Option<usize>,
    pub grid_points: usize,
    pub gamma_method: GammaMethod,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            signal_nm: 1560.0,
            pump_nm: 780.0,
            pump_fwhm_nm: 0.5,
            zeta0_db: -3.0,
            rs2: 0.05,
            min_modes: 100,
            modes: None,
            grid_points: crate::units::DEFAULT_GRID_POINTS,
            gamma_method: GammaMethod::Analytic,
        }
    }
}

impl Scenario {
    pub fn zeta0(&self) -> f64 {
        zeta_for_noise_reduction_db(self.zeta0_db.abs())
    }

    pub fn r_s(&self) -> f64 {
        self.rs2.sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("signal wavelength", self.signal_nm),
            ("pump wavelength", self.pump_nm),
            ("pump bandwidth", self.pump_fwhm_nm),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Argument(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.zeta0_db != 0.0 && self.zeta0_db.is_finite()) {
            return Err(Error::Argument("squeezing level must be non-zero".into()));
        }
        if !(self.rs2 >= 0.0 && self.rs2 <= 0.25) {
            return Err(Error::Argument(format!(
                "rs2 must lie in [0, 0.25], got {}",
                self.rs2
            )));
        }
        if let Some(m) = self.modes {
            if m == 0 || m > MAX_MODES {
                return Err(Error::Argument(format!(
                    "modes must lie in 1..={MAX_MODES}, got {m}"
                )));
            }
        }
        Ok(())
    }

    /// Angular FWHM at the signal wavelength for a width in nm.
    pub fn nm_to_angular(&self, fwhm_nm: f64) -> Result<f64> {
        wavelength_fwhm_to_angular(self.signal_nm * NANOMETRE, fwhm_nm * NANOMETRE)
    }

    pub fn angular_to_nm(&self, fwhm: f64) -> Result<f64> {
        Ok(angular_fwhm_to_wavelength(self.signal_nm * NANOMETRE, fwhm)? / NANOMETRE)
    }

    pub fn jsa(&self, k: f64) -> Result<DoubleGaussianJsa<f64>> {
        let pump_center = wavelength_to_angular(self.pump_nm * NANOMETRE)?;
        let pump_fwhm =
            wavelength_fwhm_to_angular(self.pump_nm * NANOMETRE, self.pump_fwhm_nm * NANOMETRE)?;
        DoubleGaussianJsa::from_pump_and_schmidt(pump_center, pump_fwhm, k)
    }

    pub fn n_modes(&self, k: f64) -> Result<usize> {
        Ok(match self.modes {
            Some(m) => m,
            None => required_modes(k)?.max(self.min_modes).min(MAX_MODES),
        })
    }

    /// Target kitten whose squeezing equals that of the first supermode.
    pub fn target(&self) -> Result<TargetState<f64>> {
        TargetState::from_zeta(self.zeta0())
    }
}

fn filter_profile(
    scenario: &Scenario,
    filter: FilterSpec,
    center: f64,
) -> Result<FilterProfile<f64>> {
    match filter {
        FilterSpec::None => Ok(FilterProfile::identity()),
        FilterSpec::Rectangular { fwhm_nm } => {
            FilterProfile::rectangular(center, scenario.nm_to_angular(fwhm_nm)?)
        }
        FilterSpec::Gaussian { fwhm_nm } => {
            FilterProfile::gaussian(center, scenario.nm_to_angular(fwhm_nm)?)
        }
    }
}

/// Everything fixed by `(K, filter)`: basis, squeezing and the cached `γ`.
/// Evaluating a local oscillator against it is cheap.
#[derive(Debug, Clone)]
pub struct Setup {
    pub scenario: Scenario,
    pub k: f64,
    pub filter: FilterSpec,
    pub basis: SupermodeBasis<f64>,
    pub squeezing: SqueezingSpectrum<f64>,
    pub gamma: GammaMatrix<f64>,
    pub target: TargetState<f64>,
}

/// Figures of merit for one local-oscillator width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub lo_fwhm_nm: f64,
    pub negativity: f64,
    pub fidelity: f64,
    pub success_probability: f64,
    /// Bracket constant `a0` of the canonical form; the state is negative iff `a0 < 0`.
    pub origin_depth: f64,
    pub lo_residual: f64,
}

impl Setup {
    pub fn new(scenario: &Scenario, k: f64, filter: FilterSpec) -> Result<Self> {
        scenario.validate()?;
        let jsa = scenario.jsa(k)?;
        let tau_s = jsa.tau_s();
        let center = jsa.signal_center();
        let n_modes = scenario.n_modes(k)?;
        let profile = filter_profile(scenario, filter, center)?;
        let filter_fwhm = filter
            .fwhm_nm()
            .map(|w| scenario.nm_to_angular(w))
            .transpose()?;
        let grid = default_grid(center, tau_s, n_modes, filter_fwhm, scenario.grid_points)?;
        let basis = SupermodeBasis::build(tau_s, center, n_modes, &grid)?;
        let squeezing = SqueezingSpectrum::from_schmidt(k, scenario.zeta0(), n_modes)?;
        let gamma = match scenario.gamma_method {
            GammaMethod::Analytic => gamma_analytic(tau_s, n_modes, &profile)?,
            GammaMethod::Quadrature => gamma_quadrature(&basis, &profile)?,
        };
        Ok(Self {
            scenario: scenario.clone(),
            k,
            filter,
            basis,
            squeezing,
            gamma,
            target: scenario.target()?,
        })
    }

    /// Spectral filter centred on the signal carrier.
    pub fn profile(&self) -> Result<FilterProfile<f64>> {
        filter_profile(&self.scenario, self.filter, self.basis.center())
    }

    /// LO width (nm, intensity FWHM) that matches the first supermode.
    pub fn matched_lo_nm(&self) -> Result<f64> {
        self.scenario
            .angular_to_nm(matched_lo_fwhm(self.basis.tau_s()))
    }

    pub fn lo(&self, lo_fwhm_nm: f64) -> Result<LoProjection<f64>> {
        if !(lo_fwhm_nm > 0.0) || !lo_fwhm_nm.is_finite() {
            return Err(Error::Argument(format!(
                "LO FWHM must be positive, got {lo_fwhm_nm}"
            )));
        }
        lo_coefficients(&self.basis, self.scenario.nm_to_angular(lo_fwhm_nm)?)
    }

    pub fn params(&self, lo_fwhm_nm: f64) -> Result<HeraldedStateParams<f64>> {
        HeraldedStateParams::new(&self.gamma, &self.lo(lo_fwhm_nm)?, &self.squeezing)
    }

    pub fn success_probability(&self) -> Result<f64> {
        success_probability(&self.gamma, &self.squeezing, self.scenario.r_s())
    }

    pub fn evaluate(&self, lo_fwhm_nm: f64) -> Result<Evaluation> {
        let lo = self.lo(lo_fwhm_nm)?;
        let params = HeraldedStateParams::new(&self.gamma, &lo, &self.squeezing)?;
        let shape = params.shape();
        Ok(Evaluation {
            lo_fwhm_nm,
            negativity: shape.negativity(),
            fidelity: fidelity_closed_form(&params, &self.target),
            success_probability: self.success_probability()?,
            origin_depth: shape.a0,
            lo_residual: lo.residual,
        })
    }
}
