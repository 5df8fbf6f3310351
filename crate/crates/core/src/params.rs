//! Dimensionless parameter algebra and the state-free scalar formulas.
//!
//! Internally ħ = ω = v₀ = 1: momenta are measured in units of the photon
//! recoil `p_rec = ħω/v₀` and energies in units of `ħω`.

use std::f64::consts::PI;

use crate::error::{QewError, Result};

/// CODATA 2018 constants in SI units.
pub mod constants {
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const PLANCK: f64 = 6.626_070_15e-34;
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
    pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
    pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;
    pub const BOLTZMANN: f64 = 1.380_649e-23;
}

use constants::*;

/// Strength of the electron/mode coupling, either already normalized or as a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// Normalized photon exchange coefficient Υ̃.
    Normalized(f64),
    /// Single-photon axial field amplitude Ẽ_qz in V/m.
    FieldAmplitude(f64),
}

/// An interaction specified in laboratory units.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalScenario {
    /// Optical wavelength λ (m).
    pub wavelength: f64,
    /// Electron velocity in units of c.
    pub beta: f64,
    /// Interaction length L (m).
    pub interaction_length: f64,
    /// Wavepacket size at its waist σ_z0 (m).
    pub sigma_z0: f64,
    /// Drift length L_D = v₀ t_D before the interaction (m, signed).
    pub drift_length: f64,
    /// Mean photon number ν₀.
    pub nu0: f64,
    /// Squeeze parameter (signed).
    pub squeeze: f64,
    /// Interaction phase φ₀ (rad).
    pub phi0: f64,
    pub coupling: Coupling,
    /// Synchronism detuning θ̄.
    pub detuning: f64,
    /// Recoil parameter ε.
    pub recoil: f64,
}

impl PhysicalScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(QewError::validation("beta", format!("{} not in (0, 1)", self.beta)));
        }
        let positive = [
            ("wavelength", self.wavelength),
            ("interaction_length", self.interaction_length),
            ("sigma_z0", self.sigma_z0),
        ];
        for (field, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(QewError::validation(field, format!("{value} must be positive")));
            }
        }
        if !(self.nu0 >= 0.0 && self.nu0.is_finite()) {
            return Err(QewError::validation("nu0", format!("{} must be >= 0", self.nu0)));
        }
        if !self.drift_length.is_finite() {
            return Err(QewError::validation("drift_length", "must be finite"));
        }
        match self.coupling {
            Coupling::Normalized(u) | Coupling::FieldAmplitude(u) if !(u >= 0.0 && u.is_finite()) => {
                Err(QewError::validation("coupling", format!("{u} must be >= 0")))
            }
            _ => Ok(()),
        }
    }

    pub fn lorentz_gamma(&self) -> f64 {
        1.0 / (1.0 - self.beta * self.beta).sqrt()
    }

    /// Angular frequency ω = 2πc/λ.
    pub fn omega(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.wavelength
    }

    pub fn velocity(&self) -> f64 {
        self.beta * SPEED_OF_LIGHT
    }

    /// Longitudinal effective mass m* = γ³m.
    pub fn effective_mass(&self) -> f64 {
        self.lorentz_gamma().powi(3) * ELECTRON_MASS
    }

    /// Drift time t_D = L_D / v₀.
    pub fn drift_time(&self) -> f64 {
        self.drift_length / self.velocity()
    }

    /// Ratio p₀/p_rec = γ m v₀² / ħω.
    pub fn p0_over_prec(&self) -> f64 {
        let v = self.velocity();
        self.lorentz_gamma() * ELECTRON_MASS * v * v / (HBAR * self.omega())
    }
}

/// All knobs of one interaction instance in internal units.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionlessParams {
    /// Υ̃
    pub upsilon: f64,
    /// θ̄
    pub theta: f64,
    /// ε
    pub epsilon: f64,
    /// φ₀
    pub phi0: f64,
    /// Γ₀ = 2πσ_z0/βλ
    pub gamma0: f64,
    /// Dimensionless chirp c_D = ξ t_D with ξ = 2σ_p0²/(m*ħ).
    pub chirp: f64,
    /// ν₀
    pub nu0: f64,
    /// Squeeze parameter of the light (distinct from the chirp rate).
    pub squeeze: f64,
    /// p₀/p_rec; `None` is the p₀ → ∞ limit with unity prefactors.
    pub p0_over_prec: Option<f64>,
    /// ħq_z / p_rec.
    pub hqz_over_prec: f64,
    /// Lorentz factor entering m* = γ³m for the quadratic dispersion.
    pub lorentz_gamma: f64,
}

impl Default for DimensionlessParams {
    fn default() -> Self {
        Self {
            upsilon: 0.0,
            theta: 0.0,
            epsilon: 0.0,
            phi0: 0.0,
            gamma0: 1.0,
            chirp: 0.0,
            nu0: 0.0,
            squeeze: 0.0,
            p0_over_prec: None,
            hqz_over_prec: 1.0,
            lorentz_gamma: 1.0,
        }
    }
}

impl DimensionlessParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma0 > 0.0 && self.gamma0.is_finite()) {
            return Err(QewError::validation("gamma0", format!("{} must be positive", self.gamma0)));
        }
        if !(self.nu0 >= 0.0 && self.nu0.is_finite()) {
            return Err(QewError::validation("nu0", format!("{} must be >= 0", self.nu0)));
        }
        if !(self.upsilon >= 0.0 && self.upsilon.is_finite()) {
            return Err(QewError::validation("upsilon", format!("{} must be >= 0", self.upsilon)));
        }
        for (field, v) in [
            ("theta", self.theta),
            ("epsilon", self.epsilon),
            ("phi0", self.phi0),
            ("chirp", self.chirp),
            ("squeeze", self.squeeze),
            ("hqz_over_prec", self.hqz_over_prec),
        ] {
            if !v.is_finite() {
                return Err(QewError::validation(field, "must be finite"));
            }
        }
        if let Some(r) = self.p0_over_prec {
            if !(r > 0.0 && r.is_finite()) {
                return Err(QewError::validation("p0_over_prec", format!("{r} must be positive")));
            }
        }
        if !(self.lorentz_gamma >= 1.0) {
            return Err(QewError::validation("lorentz_gamma", "must be >= 1"));
        }
        Ok(())
    }

    /// Decay parameter Γ = Γ₀√(1 + c_D²).
    pub fn gamma(&self) -> f64 {
        gamma(self.gamma0, self.chirp)
    }

    /// Momentum spread σ_p0 / p_rec = √(1 + c_D²) / (2Γ) = 1 / (2Γ₀).
    pub fn rho(&self) -> f64 {
        0.5 / self.gamma0
    }

    pub fn detuning_split(&self) -> (f64, f64) {
        detuning_split(self.theta, self.epsilon)
    }
}

/// Converts a laboratory scenario to internal dimensionless knobs.
///
/// The initial wavepacket is taken at minimum uncertainty, σ_p0 σ_z0 = ħ/2.
pub fn derive_dimensionless(scenario: &PhysicalScenario) -> Result<DimensionlessParams> {
    scenario.validate()?;
    let gamma0 = 2.0 * PI * scenario.sigma_z0 / (scenario.beta * scenario.wavelength);
    // c_D = ħ t_D / (2 m* σ_z0²)
    let chirp = HBAR * scenario.drift_time()
        / (2.0 * scenario.effective_mass() * scenario.sigma_z0 * scenario.sigma_z0);
    let upsilon = match scenario.coupling {
        Coupling::Normalized(u) => u,
        Coupling::FieldAmplitude(e) => {
            ELEMENTARY_CHARGE * e * scenario.interaction_length / (4.0 * HBAR * scenario.omega())
        }
    };
    Ok(DimensionlessParams {
        upsilon,
        theta: scenario.detuning,
        epsilon: scenario.recoil,
        phi0: scenario.phi0,
        gamma0,
        chirp,
        nu0: scenario.nu0,
        squeeze: scenario.squeeze,
        p0_over_prec: None,
        hqz_over_prec: 1.0,
        lorentz_gamma: scenario.lorentz_gamma(),
    })
}

/// Γ = Γ₀ √(1 + c_D²).
pub fn gamma(gamma0: f64, chirp: f64) -> f64 {
    gamma0 * chirp.hypot(1.0)
}

/// History-dependent wavepacket size σ_z(t_D) in meters.
///
/// `σ_z² = σ_z0² + (1/4πβ)(λ*_c c t_D / σ_z0)²` with `λ*_c = h/(m c γ³)`.
pub fn wavepacket_size(sigma_z0: f64, drift_time: f64, beta: f64, lorentz_gamma: f64) -> Result<f64> {
    if !(sigma_z0 > 0.0) {
        return Err(QewError::Domain(
            "wavepacket size at the waist must be positive (uncertainty principle)".into(),
        ));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(QewError::validation("beta", format!("{beta} not in (0, 1)")));
    }
    let compton = PLANCK / (ELECTRON_MASS * SPEED_OF_LIGHT) / lorentz_gamma.powi(3);
    let spread = compton * SPEED_OF_LIGHT * drift_time / sigma_z0;
    Ok((sigma_z0 * sigma_z0 + spread * spread / (4.0 * PI * beta)).sqrt())
}

/// Emission and absorption detunings θ̄ ± ε/2.
pub fn detuning_split(theta: f64, epsilon: f64) -> (f64, f64) {
    (theta + 0.5 * epsilon, theta - 0.5 * epsilon)
}

/// Best-case ratio of phase-dependent signal to spontaneous noise, 4√ν₀/Υ̃.
pub fn snr_max(nu0: f64, upsilon: f64) -> Result<f64> {
    if upsilon == 0.0 {
        return Err(QewError::Domain("signal-to-noise ratio undefined for zero coupling".into()));
    }
    Ok(4.0 * nu0.sqrt() / upsilon)
}

/// Effective temperature assigned to a squeezed vacuum, sinh²|ξ| = 1/(e^{ħω/kT} − 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnruhTemperature {
    /// No squeezing: T = 0.
    Zero,
    /// ħω/k_BT.
    Ratio(f64),
}

impl UnruhTemperature {
    /// Temperature in kelvin for a mode of angular frequency `omega`.
    pub fn kelvin(&self, omega: f64) -> f64 {
        match self {
            UnruhTemperature::Zero => 0.0,
            UnruhTemperature::Ratio(x) => HBAR * omega / (BOLTZMANN * x),
        }
    }
}

/// ħω/k_BT = ln(1 + 1/sinh²|ξ|). The ratio does not depend on ω.
pub fn unruh_temperature(squeeze: f64) -> UnruhTemperature {
    if squeeze == 0.0 {
        return UnruhTemperature::Zero;
    }
    let s = squeeze.abs().sinh();
    UnruhTemperature::Ratio((1.0 / (s * s)).ln_1p())
}

/// Squeeze magnitude |ξ| producing a given ħω/k_BT.
pub fn squeeze_for_temperature(ratio: f64) -> Result<f64> {
    if !(ratio > 0.0) {
        return Err(QewError::Domain(format!("ħω/kT = {ratio} must be positive")));
    }
    Ok((1.0 / ratio.exp_m1().sqrt()).asinh())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario() -> PhysicalScenario {
        PhysicalScenario {
            wavelength: 800e-9,
            beta: 0.7,
            interaction_length: 1e-5,
            sigma_z0: 50e-9,
            drift_length: 0.0,
            nu0: 100.0,
            squeeze: 0.0,
            phi0: 0.0,
            coupling: Coupling::Normalized(0.01),
            detuning: 0.0,
            recoil: 0.0,
        }
    }

    #[test]
    fn gamma0_identity_and_reference() {
        let mut s = scenario();
        s.sigma_z0 = s.beta * s.wavelength / (2.0 * PI);
        let p = derive_dimensionless(&s).unwrap();
        assert!((p.gamma0 - 1.0).abs() < 1e-14);
        assert_eq!(p.chirp, 0.0);

        let p = derive_dimensionless(&scenario()).unwrap();
        // 2π·50/(0.7·800) evaluated at high precision
        assert!((p.gamma0 - 0.560_998_688_141_034_5).abs() < 1e-12, "{}", p.gamma0);
    }

    #[test]
    fn validation_names_the_field() {
        let mut s = scenario();
        s.beta = 1.2;
        assert!(matches!(derive_dimensionless(&s), Err(QewError::Validation { field: "beta", .. })));
        let mut s = scenario();
        s.sigma_z0 = -1.0;
        assert!(matches!(
            derive_dimensionless(&s),
            Err(QewError::Validation { field: "sigma_z0", .. })
        ));
    }

    #[test]
    fn field_amplitude_coupling() {
        let mut s = scenario();
        s.coupling = Coupling::FieldAmplitude(1e6);
        let p = derive_dimensionless(&s).unwrap();
        let expected = ELEMENTARY_CHARGE * 1e6 * 1e-5 / (4.0 * HBAR * s.omega());
        assert!((p.upsilon - expected).abs() <= 1e-15 * expected);
    }

    #[test]
    fn gamma_formula() {
        assert_eq!(gamma(1.0, 0.0), 1.0);
        assert!((gamma(0.5, 3f64.sqrt()) - 1.0).abs() < 1e-15);
        // 0.5610·√26
        assert!((gamma(0.5610, 5.0) - 2.860_549_947_125_552_3).abs() < 1e-10);
        assert_eq!(gamma(0.7, 2.5), gamma(0.7, -2.5));
    }

    #[test]
    fn wavepacket_size_limits() {
        assert_eq!(wavepacket_size(50e-9, 0.0, 0.7, 1.4).unwrap(), 50e-9);
        assert!(wavepacket_size(0.0, 1.0, 0.7, 1.4).is_err());
        let a = wavepacket_size(50e-9, 1e-6, 0.7, 1.4).unwrap();
        let b = wavepacket_size(50e-9, 2e-6, 0.7, 1.4).unwrap();
        let c = wavepacket_size(50e-9, -2e-6, 0.7, 1.4).unwrap();
        assert!(b > a && b == c);
        // asymptotically linear in |t_D|
        let far1 = wavepacket_size(50e-9, 1.0, 0.7, 1.4).unwrap();
        let far2 = wavepacket_size(50e-9, 2.0, 0.7, 1.4).unwrap();
        assert!((far2 / far1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn wavepacket_size_versus_chirp_route() {
        // The printed spreading term is 4π/β times the minimum-uncertainty
        // free-particle term that the Γ₀√(1+c_D²) route implies.
        let mut s = scenario();
        s.drift_length = 0.05;
        let p = derive_dimensionless(&s).unwrap();
        let lorentz = s.lorentz_gamma();
        let printed = wavepacket_size(s.sigma_z0, s.drift_time(), s.beta, lorentz).unwrap();
        let via_gamma = p.gamma() * s.beta * s.wavelength / (2.0 * PI);
        let printed_spread = printed * printed - s.sigma_z0 * s.sigma_z0;
        let gamma_spread = via_gamma * via_gamma - s.sigma_z0 * s.sigma_z0;
        let ratio = printed_spread / gamma_spread;
        assert!((ratio - 4.0 * PI / s.beta).abs() < 1e-7 * ratio, "{ratio}");
    }

    #[test]
    fn detuning_split_definition() {
        assert_eq!(detuning_split(0.0, 0.0), (0.0, 0.0));
        let (e, a) = detuning_split(2.0, 0.2);
        assert!((e - 2.1).abs() < 1e-15 && (a - 1.9).abs() < 1e-15);
        assert_eq!(detuning_split(1.3, 0.0), (1.3, 1.3));
    }

    #[test]
    fn snr() {
        assert!((snr_max(0.01f64.powi(2) / 16.0, 0.01).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(snr_max(0.0, 0.3).unwrap(), 0.0);
        assert!((snr_max(100.0, 0.1).unwrap() - 400.0).abs() < 1e-12);
        assert!(snr_max(1.0, 0.0).is_err());
    }

    #[test]
    fn unruh_values() {
        let UnruhTemperature::Ratio(x) = unruh_temperature(1f64.asinh()) else { panic!() };
        assert!((x - std::f64::consts::LN_2).abs() < 1e-14);
        let UnruhTemperature::Ratio(x) = unruh_temperature(-1.0) else { panic!() };
        assert!((x - 0.544_682_937_823_663_1).abs() < 1e-13, "{x}");
        assert_eq!(unruh_temperature(0.0), UnruhTemperature::Zero);
        let UnruhTemperature::Ratio(x) = unruh_temperature(1e-6) else { panic!() };
        assert!(x > 27.0);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn gamma_is_even(g0 in 1e-3f64..10.0, c in -50f64..50.0) {
                prop_assert_eq!(gamma(g0, c), gamma(g0, -c));
                prop_assert_eq!(gamma(g0, 0.0), g0);
            }

            #[test]
            fn split_midpoint(theta in -20f64..20.0, eps in -2f64..2.0) {
                let (e, a) = detuning_split(theta, eps);
                prop_assert!(((e + a) / 2.0 - theta).abs() <= 4.0 * f64::EPSILON * theta.abs().max(1.0));
            }

            #[test]
            fn unruh_round_trip(xi in 0.01f64..4.0) {
                let UnruhTemperature::Ratio(x) = unruh_temperature(xi) else { unreachable!() };
                let back = squeeze_for_temperature(x).unwrap();
                prop_assert!((back - xi).abs() <= 1e-12 * xi);
            }
        }
    }
}
