use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use kitten_core::experiments::{FilterSpec, GammaMethod, Scenario};
use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    None,
    Rect,
    Gauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Quadrature,
}

/// Flags shared by every subcommand. Each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML file with default values for any of the flags below
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Schmidt number of the source
    #[arg(long, global = true)]
    pub k: Option<f64>,
    /// LO intensity FWHM in nm (defaults to the mode-matched width)
    #[arg(long, global = true)]
    pub lo_fwhm_nm: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub filter: Option<Shape>,
    #[arg(long, global = true)]
    pub filter_fwhm_nm: Option<f64>,
    /// Squeezing of the first supermode in dB
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub zeta0_db: Option<f64>,
    /// Power reflectivity of the heralding tap
    #[arg(long, global = true)]
    pub rs2: Option<f64>,
    /// CSV destination (stdout when omitted)
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// SVG destination
    #[arg(long, global = true, value_name = "PATH")]
    pub plot: Option<PathBuf>,
    /// Points of the spectral grid
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    /// Number of supermodes
    #[arg(long, global = true)]
    pub modes: Option<usize>,
}

/// Config file contents. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub k: Option<f64>,
    pub lo_fwhm_nm: Option<f64>,
    pub filter: Option<Shape>,
    pub filter_fwhm_nm: Option<f64>,
    pub zeta0_db: Option<f64>,
    pub rs2: Option<f64>,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub grid_points: Option<usize>,
    pub modes: Option<usize>,
    pub signal_nm: Option<f64>,
    pub pump_nm: Option<f64>,
    pub pump_fwhm_nm: Option<f64>,
    pub min_modes: Option<usize>,
    pub gamma_method: Option<Method>,
    pub target_f: Option<f64>,
    pub k_values: Option<Vec<f64>>,
    pub lo_min_nm: Option<f64>,
    pub lo_max_nm: Option<f64>,
    pub lo_points: Option<usize>,
    pub phase_points: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Argument(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::Argument(format!("{}: {e}", path.display())))
    }
}

/// Merged run settings.
#[derive(Debug, Clone)]
pub struct Settings {
    pub scenario: Scenario,
    pub k: f64,
    pub lo_fwhm_nm: Option<f64>,
    pub shape: Shape,
    pub filter_fwhm_nm: Option<f64>,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub file: ConfigFile,
}

pub const DEFAULT_K: f64 = 9.0;

impl Settings {
    pub fn resolve(flags: &Common) -> Result<Self, Failure> {
        let file = match &flags.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let mut scenario = Scenario::default();
        let pick =
            |flag: Option<f64>, cfg: Option<f64>, default: f64| flag.or(cfg).unwrap_or(default);
        scenario.signal_nm = file.signal_nm.unwrap_or(scenario.signal_nm);
        scenario.pump_nm = file.pump_nm.unwrap_or(scenario.pump_nm);
        scenario.pump_fwhm_nm = file.pump_fwhm_nm.unwrap_or(scenario.pump_fwhm_nm);
        scenario.min_modes = file.min_modes.unwrap_or(scenario.min_modes);
        scenario.zeta0_db = pick(flags.zeta0_db, file.zeta0_db, scenario.zeta0_db);
        scenario.rs2 = pick(flags.rs2, file.rs2, scenario.rs2);
        scenario.grid_points = flags
            .grid_points
            .or(file.grid_points)
            .unwrap_or(scenario.grid_points);
        scenario.modes = flags.modes.or(file.modes);
        scenario.gamma_method = match file.gamma_method {
            Some(Method::Quadrature) => GammaMethod::Quadrature,
            _ => GammaMethod::Analytic,
        };
        scenario.validate()?;
        Ok(Self {
            k: pick(flags.k, file.k, DEFAULT_K),
            lo_fwhm_nm: flags.lo_fwhm_nm.or(file.lo_fwhm_nm),
            shape: flags.filter.or(file.filter).unwrap_or(Shape::None),
            filter_fwhm_nm: flags.filter_fwhm_nm.or(file.filter_fwhm_nm),
            out: flags.out.clone().or_else(|| file.out.clone()),
            plot: flags.plot.clone().or_else(|| file.plot.clone()),
            scenario,
            file,
        })
    }

    /// The filter as a fully specified descriptor; a width is required for
    /// band-limiting shapes.
    pub fn filter(&self) -> Result<FilterSpec, Failure> {
        let width = || {
            self.filter_fwhm_nm.ok_or_else(|| {
                Failure::Argument("--filter-fwhm-nm is required for rect and gauss filters".into())
            })
        };
        Ok(match self.shape {
            Shape::None => FilterSpec::None,
            Shape::Rect => FilterSpec::Rectangular { fwhm_nm: width()? },
            Shape::Gauss => FilterSpec::Gaussian { fwhm_nm: width()? },
        })
    }
}
