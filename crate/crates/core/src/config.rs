//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{QewError, Result};
use crate::params::{derive_dimensionless, Coupling, DimensionlessParams, PhysicalScenario};
use crate::scattering::Dispersion;
use crate::states::{GridSpec, Ordering, PhotonSpec};

const KEYS: &[&str] = &[
    "scenario.upsilon",
    "scenario.theta",
    "scenario.phi0",
    "scenario.gamma0",
    "scenario.chirp",
    "scenario.p0_over_prec",
    "scenario.hqz_over_prec",
    "scenario.lorentz_gamma",
    "scenario.wavelength",
    "scenario.beta",
    "scenario.interaction_length",
    "scenario.sigma_z0",
    "scenario.drift_length",
    "scenario.field_amplitude",
    "grid.m_align",
    "grid.sigma_coverage",
    "photon.kind",
    "photon.nu0",
    "photon.xi",
    "photon.ordering",
    "run.dispersion",
    "run.epsilon",
    "sweep.parameter",
    "sweep.from",
    "sweep.to",
    "sweep.steps",
    "output.path",
    "fig3a.gamma_from",
    "fig3a.gamma_to",
    "fig3a.steps",
    "fig3a.scale",
    "fig3b.wavelength",
    "fig3b.beta",
    "fig3b.sigma_from",
    "fig3b.sigma_to",
    "fig3b.sigma_steps",
    "fig3b.drift_from",
    "fig3b.drift_to",
    "fig3b.drift_steps",
    "sp.length",
    "sp.beta",
    "sp.eta",
    "sp.period",
    "sp.order",
    "sp.omega_from",
    "sp.omega_to",
    "sp.omega_steps",
    "sp.angle_from",
    "sp.angle_to",
    "sp.angle_steps",
];

const PHYSICAL_KEYS: &[&str] = &[
    "scenario.wavelength",
    "scenario.beta",
    "scenario.interaction_length",
    "scenario.sigma_z0",
    "scenario.drift_length",
    "scenario.field_amplitude",
];

/// Dimensionless knobs that `sweep.parameter` may name.
pub const SWEEPABLE: &[&str] = &["upsilon", "theta", "epsilon", "phi0", "gamma0", "chirp", "nu0", "xi"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonKindConfig {
    Vacuum,
    Fock,
    Coherent,
    Squeezed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.from, self.to, self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3aSpec {
    pub gamma_from: f64,
    pub gamma_to: f64,
    pub steps: usize,
    pub scale: AxisScale,
}

impl Fig3aSpec {
    pub fn gammas(&self) -> Vec<f64> {
        match self.scale {
            AxisScale::Linear => linspace(self.gamma_from, self.gamma_to, self.steps),
            AxisScale::Log => linspace(self.gamma_from.ln(), self.gamma_to.ln(), self.steps)
                .into_iter()
                .map(f64::exp)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3bSpec {
    pub wavelength: f64,
    pub beta: f64,
    pub sigma_from: f64,
    pub sigma_to: f64,
    pub sigma_steps: usize,
    pub drift_from: f64,
    pub drift_to: f64,
    pub drift_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmithPurcellSpec {
    pub length: f64,
    pub beta: f64,
    pub eta: f64,
    /// Grating period λ_G (m).
    pub period: f64,
    pub order: i32,
    pub omega_from: f64,
    pub omega_to: f64,
    pub omega_steps: usize,
    /// Emission angle Θ in radians.
    pub angle_from: f64,
    pub angle_to: f64,
    pub angle_steps: usize,
}

/// A fully parsed configuration. `entries` keeps the normalized text for embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub entries: BTreeMap<String, String>,
    pub params: DimensionlessParams,
    pub photon_kind: PhotonKindConfig,
    pub ordering: Ordering,
    pub grid: GridSpec,
    pub dispersion: Dispersion,
    pub sweep: Option<SweepSpec>,
    pub fig3a: Fig3aSpec,
    pub fig3b: Fig3bSpec,
    pub smith_purcell: SmithPurcellSpec,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::parse("").expect("empty configuration is valid")
    }
}

fn config_err(msg: impl Into<String>) -> QewError {
    QewError::Config(msg.into())
}

pub(crate) fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        _ => {
            let last = (steps - 1) as f64;
            // complementary weights keep mirrored ranges exactly symmetric
            (0..steps)
                .map(|i| from * ((steps - 1 - i) as f64 / last) + to * (i as f64 / last))
                .collect()
        }
    }
}

struct Reader<'a> {
    entries: &'a BTreeMap<String, String>,
}

impl Reader<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => {
                let x: f64 = v.parse().map_err(|_| config_err(format!("{key}: '{v}' is not a number")))?;
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(config_err(format!("{key}: '{v}' is not finite")))
                }
            }
        }
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(_) => self.f64_or(key, 0.0).map(Some),
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| config_err(format!("{key}: '{v}' is not a non-negative integer"))),
        }
    }

    fn i32_or(&self, key: &str, default: i32) -> Result<i32> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| config_err(format!("{key}: '{v}' is not an integer"))),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {}: expected 'key = value'", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(config_err(format!("line {}: unknown key '{key}'", n + 1)));
            }
            if value.is_empty() {
                return Err(config_err(format!("line {}: empty value for '{key}'", n + 1)));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(config_err(format!("line {}: duplicate key '{key}'", n + 1)));
            }
        }
        Self::from_entries(entries)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn from_entries(entries: BTreeMap<String, String>) -> Result<Self> {
        let r = Reader { entries: &entries };

        let photon_kind = match r.raw("photon.kind").unwrap_or("coherent") {
            "vacuum" => PhotonKindConfig::Vacuum,
            "fock" => PhotonKindConfig::Fock,
            "coherent" => PhotonKindConfig::Coherent,
            "squeezed" => PhotonKindConfig::Squeezed,
            other => return Err(config_err(format!("photon.kind: unknown kind '{other}'"))),
        };
        let ordering = match r.raw("photon.ordering").unwrap_or("sd") {
            "sd" => Ordering::SqueezeDisplace,
            "ds" => Ordering::DisplaceSqueeze,
            other => return Err(config_err(format!("photon.ordering: expected sd or ds, got '{other}'"))),
        };
        let dispersion = match r.raw("run.dispersion").unwrap_or("linear") {
            "linear" => Dispersion::Linear,
            "quadratic" => Dispersion::Quadratic,
            other => return Err(config_err(format!("run.dispersion: unknown mode '{other}'"))),
        };

        let nu0 = r.f64_or("photon.nu0", if photon_kind == PhotonKindConfig::Vacuum { 0.0 } else { 1.0 })?;
        let xi = r.f64_or("photon.xi", 0.0)?;
        let epsilon = r.f64_or("run.epsilon", 0.0)?;

        let mut params = if PHYSICAL_KEYS.iter().any(|k| entries.contains_key(*k)) {
            let need = |k: &str| r.opt_f64(k)?.ok_or_else(|| config_err(format!("{k} is required for a physical scenario")));
            let scenario = PhysicalScenario {
                wavelength: need("scenario.wavelength")?,
                beta: need("scenario.beta")?,
                interaction_length: r.f64_or("scenario.interaction_length", 1.0)?,
                sigma_z0: need("scenario.sigma_z0")?,
                drift_length: r.f64_or("scenario.drift_length", 0.0)?,
                nu0,
                squeeze: xi,
                phi0: 0.0,
                coupling: match r.opt_f64("scenario.field_amplitude")? {
                    Some(e) => Coupling::FieldAmplitude(e),
                    None => Coupling::Normalized(0.0),
                },
                detuning: 0.0,
                recoil: epsilon,
            };
            derive_dimensionless(&scenario)?
        } else {
            DimensionlessParams::default()
        };
        params.nu0 = nu0;
        params.squeeze = xi;
        params.epsilon = epsilon;
        params.upsilon = r.f64_or("scenario.upsilon", params.upsilon)?;
        params.theta = r.f64_or("scenario.theta", params.theta)?;
        params.phi0 = r.f64_or("scenario.phi0", params.phi0)?;
        params.gamma0 = r.f64_or("scenario.gamma0", params.gamma0)?;
        params.chirp = r.f64_or("scenario.chirp", params.chirp)?;
        params.p0_over_prec = r.opt_f64("scenario.p0_over_prec")?.or(params.p0_over_prec);
        params.hqz_over_prec = r.f64_or("scenario.hqz_over_prec", params.hqz_over_prec)?;
        params.lorentz_gamma = r.f64_or("scenario.lorentz_gamma", params.lorentz_gamma)?;
        params.validate()?;

        let grid = GridSpec {
            m_align: r.usize_or("grid.m_align", GridSpec::default().m_align)?,
            sigma_coverage: r.f64_or("grid.sigma_coverage", GridSpec::default().sigma_coverage)?,
        };
        grid.validate()?;

        let sweep = match r.raw("sweep.parameter") {
            None => {
                if ["sweep.from", "sweep.to", "sweep.steps"].iter().any(|k| entries.contains_key(*k)) {
                    return Err(config_err("sweep.* keys given without sweep.parameter"));
                }
                None
            }
            Some(p) => {
                if !SWEEPABLE.contains(&p) {
                    return Err(config_err(format!(
                        "sweep.parameter: '{p}' is not one of {}",
                        SWEEPABLE.join(", ")
                    )));
                }
                let spec = SweepSpec {
                    parameter: p.to_string(),
                    from: r.opt_f64("sweep.from")?.ok_or_else(|| config_err("sweep.from is required"))?,
                    to: r.opt_f64("sweep.to")?.ok_or_else(|| config_err("sweep.to is required"))?,
                    steps: r.usize_or("sweep.steps", 0)?,
                };
                if spec.steps == 0 {
                    return Err(config_err("sweep.steps must be at least 1"));
                }
                Some(spec)
            }
        };

        let fig3a = Fig3aSpec {
            gamma_from: r.f64_or("fig3a.gamma_from", 0.1)?,
            gamma_to: r.f64_or("fig3a.gamma_to", 4.0)?,
            steps: r.usize_or("fig3a.steps", 40)?,
            scale: match r.raw("fig3a.scale").unwrap_or("linear") {
                "linear" => AxisScale::Linear,
                "log" => AxisScale::Log,
                other => return Err(config_err(format!("fig3a.scale: expected linear or log, got '{other}'"))),
            },
        };
        if !(fig3a.gamma_from > 0.0 && fig3a.gamma_to >= fig3a.gamma_from) || fig3a.steps == 0 {
            return Err(config_err("fig3a: need 0 < gamma_from <= gamma_to and steps >= 1"));
        }

        let fig3b = Fig3bSpec {
            wavelength: r.f64_or("fig3b.wavelength", 800e-9)?,
            beta: r.f64_or("fig3b.beta", 0.7)?,
            sigma_from: r.f64_or("fig3b.sigma_from", 10e-9)?,
            sigma_to: r.f64_or("fig3b.sigma_to", 200e-9)?,
            sigma_steps: r.usize_or("fig3b.sigma_steps", 20)?,
            drift_from: r.f64_or("fig3b.drift_from", -0.5)?,
            drift_to: r.f64_or("fig3b.drift_to", 0.5)?,
            drift_steps: r.usize_or("fig3b.drift_steps", 21)?,
        };
        if !(fig3b.sigma_from > 0.0) || fig3b.sigma_steps == 0 || fig3b.drift_steps == 0 {
            return Err(config_err("fig3b: need sigma_from > 0 and non-zero step counts"));
        }

        let smith_purcell = SmithPurcellSpec {
            length: r.f64_or("sp.length", 100e-6)?,
            beta: r.f64_or("sp.beta", 0.3)?,
            eta: r.f64_or("sp.eta", 0.1)?,
            period: r.f64_or("sp.period", 500e-9)?,
            order: r.i32_or("sp.order", 1)?,
            omega_from: r.f64_or("sp.omega_from", 1.10e15)?,
            omega_to: r.f64_or("sp.omega_to", 1.16e15)?,
            omega_steps: r.usize_or("sp.omega_steps", 121)?,
            angle_from: r.f64_or("sp.angle_from", std::f64::consts::FRAC_PI_2)?,
            angle_to: r.f64_or("sp.angle_to", std::f64::consts::FRAC_PI_2)?,
            angle_steps: r.usize_or("sp.angle_steps", 1)?,
        };
        let sp = &smith_purcell;
        if !(sp.length > 0.0 && sp.beta > 0.0 && sp.beta < 1.0 && sp.eta > 0.0 && sp.period > 0.0 && sp.omega_from > 0.0)
            || sp.omega_steps == 0
            || sp.angle_steps == 0
        {
            return Err(config_err("sp: need positive length, eta, period, omega and 0 < beta < 1"));
        }

        let output_path = r.raw("output.path").map(PathBuf::from);
        let config = RunConfig {
            params,
            photon_kind,
            ordering,
            grid,
            dispersion,
            sweep,
            fig3a,
            fig3b,
            smith_purcell,
            output_path,
            entries,
        };
        config.photon_for(&config.params)?;
        Ok(config)
    }

    /// Photon description for a (possibly swept) parameter set.
    pub fn photon_for(&self, params: &DimensionlessParams) -> Result<PhotonSpec> {
        let nu0 = params.nu0;
        Ok(match self.photon_kind {
            PhotonKindConfig::Vacuum => PhotonSpec::Vacuum,
            PhotonKindConfig::Fock => {
                if nu0.fract() != 0.0 || nu0 < 0.0 {
                    return Err(QewError::validation("photon.nu0", format!("{nu0} is not a photon count")));
                }
                PhotonSpec::Fock(nu0 as usize)
            }
            PhotonKindConfig::Coherent => PhotonSpec::Coherent(nu0),
            PhotonKindConfig::Squeezed => PhotonSpec::Squeezed {
                nu0,
                squeeze: params.squeeze,
                ordering: self.ordering,
            },
        })
    }

    /// Normalized `key = value` lines, sorted by key.
    pub fn canonical_lines(&self) -> Vec<String> {
        self.entries.iter().map(|(k, v)| format!("{k} = {v}")).collect()
    }
}

/// Returns a copy of `params` with one sweepable knob replaced.
pub fn with_parameter(params: &DimensionlessParams, name: &str, value: f64) -> Result<DimensionlessParams> {
    let mut p = params.clone();
    match name {
        "upsilon" => p.upsilon = value,
        "theta" => p.theta = value,
        "epsilon" => p.epsilon = value,
        "phi0" => p.phi0 = value,
        "gamma0" => p.gamma0 = value,
        "chirp" => p.chirp = value,
        "nu0" => p.nu0 = value,
        "xi" => p.squeeze = value,
        other => return Err(config_err(format!("'{other}' cannot be swept"))),
    }
    p.validate()?;
    Ok(p)
}
