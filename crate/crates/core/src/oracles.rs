//! Closed-form emission/acceleration results used as references for the
//! scattering engine, plus the Gaussian overlap families and the
//! Smith-Purcell spectral density.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::math::{sinc, sinc2_half, sinc2_half_derivative, ComplexSum};
use crate::params::constants::{
    ELEMENTARY_CHARGE, HBAR, SPEED_OF_LIGHT, VACUUM_PERMEABILITY, VACUUM_PERMITTIVITY,
};
use crate::params::{detuning_split, gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleSource {
    Fock,
    Coherent,
    Squeezed,
    Vacuum,
    FelLowGain,
}

/// Predicted photon-number and electron-energy changes (ħω units).
///
/// `de1 = −dnu1` and `de2 = −dnu2` by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPrediction {
    pub dnu1: f64,
    pub dnu2: f64,
    pub de1: f64,
    pub de2: f64,
    pub source: OracleSource,
}

impl ArcPrediction {
    fn new(dnu1: f64, dnu2: f64, source: OracleSource) -> Self {
        Self {
            dnu1,
            dnu2,
            de1: -dnu1,
            de2: -dnu2,
            source,
        }
    }
}

/// Prefactor of the phase-dependent term, e E_z,cl L/ħω = 4Υ̃√ν₀.
pub fn classical_amplitude(upsilon: f64, nu0: f64) -> f64 {
    4.0 * upsilon * nu0.sqrt()
}

/// Energy gained by a classical point charge, in ħω, for a given
/// `amplitude = e E_z,cl L / ħω`.
pub fn classical_point_energy(amplitude: f64, theta: f64, phi0: f64) -> f64 {
    -amplitude * sinc(0.5 * theta) * (0.5 * theta + phi0).cos()
}

fn stimulated_second_order(upsilon: f64, occupation: f64, theta: f64, epsilon: f64) -> f64 {
    let (te, ta) = detuning_split(theta, epsilon);
    upsilon * upsilon * ((occupation + 1.0) * sinc2_half(te) - occupation * sinc2_half(ta))
}

/// Coherent light: phase-dependent term with extinction e^{−Γ²/2}.
pub fn coherent_arc(
    upsilon: f64,
    nu0: f64,
    gamma: f64,
    theta: f64,
    epsilon: f64,
    phi0: f64,
) -> ArcPrediction {
    let dnu1 = classical_amplitude(upsilon, nu0)
        * (-0.5 * gamma * gamma).exp()
        * sinc(0.5 * theta)
        * (0.5 * theta + phi0).cos();
    ArcPrediction::new(
        dnu1,
        stimulated_second_order(upsilon, nu0, theta, epsilon),
        OracleSource::Coherent,
    )
}

/// Number state: no phase-dependent term.
pub fn fock_arc(upsilon: f64, nu0: f64, theta: f64, epsilon: f64) -> ArcPrediction {
    let source = if nu0 == 0.0 {
        OracleSource::Vacuum
    } else {
        OracleSource::Fock
    };
    ArcPrediction::new(0.0, stimulated_second_order(upsilon, nu0, theta, epsilon), source)
}

/// Spontaneous emission into an empty mode, Υ̃² sinc²(θ̄/2).
pub fn vacuum_spontaneous(upsilon: f64, theta: f64) -> f64 {
    upsilon * upsilon * sinc2_half(theta)
}

/// Squeezed coherent light: the occupation ν₀ is raised by sinh²|ξ| in the
/// phase-independent term only.
pub fn squeezed_arc(
    upsilon: f64,
    nu0: f64,
    squeeze: f64,
    gamma: f64,
    theta: f64,
    epsilon: f64,
    phi0: f64,
) -> ArcPrediction {
    let coherent = coherent_arc(upsilon, nu0, gamma, theta, epsilon, phi0);
    let occupation = nu0 + squeeze.sinh().powi(2);
    ArcPrediction::new(
        coherent.dnu1,
        stimulated_second_order(upsilon, occupation, theta, epsilon),
        OracleSource::Squeezed,
    )
}

/// Emission from squeezed vacuum to first order in ε.
pub fn squeezed_vacuum_emission(upsilon: f64, theta: f64, epsilon: f64, squeeze: f64) -> f64 {
    vacuum_spontaneous(upsilon, theta)
        + upsilon * upsilon * squeeze.sinh().powi(2) * epsilon * sinc2_half_derivative(theta)
}

/// Low-gain FEL limit Υ̃²{sinc²(θ̄/2) + ν₀ ε d[sinc²(θ̄/2)]/dθ̄}.
pub fn fel_low_gain(upsilon: f64, nu0: f64, theta: f64, epsilon: f64) -> f64 {
    upsilon * upsilon * (sinc2_half(theta) + nu0 * epsilon * sinc2_half_derivative(theta))
}

/// Detuning in (0, 2π) where −d[sinc²(θ̄/2)]/dθ̄ peaks, by golden-section search.
pub fn max_gain_detuning() -> f64 {
    let f = |t: f64| sinc2_half_derivative(t);
    let (mut a, mut b) = (0.5, 2.0 * PI - 0.5);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    while (b - a).abs() > 1e-12 {
        // minimize f == maximize −f
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    0.5 * (a + b)
}

/// Inputs of the Gaussian overlap families, in units of p_rec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapInputs {
    /// σ_p0 / p_rec
    pub rho: f64,
    pub chirp: f64,
    /// ħq_z / p₀
    pub hq_over_p0: f64,
    /// p_rec / p₀ (0 for the p₀ → ∞ limit)
    pub prec_over_p0: f64,
}

/// One overlap quantity as printed in closed form and by dense quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapComparison {
    pub printed: Complex64,
    pub quadrature: Complex64,
}

impl OverlapComparison {
    pub fn abs_difference(&self) -> f64 {
        (self.printed - self.quadrature).norm()
    }
}

/// Zeroth and first momentum moments of one overlap family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapFamily {
    pub zeroth: OverlapComparison,
    pub first: OverlapComparison,
}

/// The four families: emission and absorption squared-amplitude moments
/// (A1, A2) and the emission and absorption interference overlaps (A3, A4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapMoments {
    pub a1: OverlapFamily,
    pub a2: OverlapFamily,
    pub a3: OverlapFamily,
    pub a4: OverlapFamily,
}

impl OverlapMoments {
    pub fn families(&self) -> [(&'static str, &OverlapFamily); 4] {
        [("A1", &self.a1), ("A2", &self.a2), ("A3", &self.a3), ("A4", &self.a4)]
    }
}

/// Continuous chirped Gaussian with ∫|c|² dp = 1, centred at p₀ (offset 0).
fn continuous_packet(rho: f64, chirp: f64) -> impl Fn(f64) -> Complex64 {
    let norm = (2.0 * PI * rho * rho).powf(-0.25);
    let coeff = Complex64::new(1.0, chirp) / (4.0 * rho * rho);
    move |x| norm * (-coeff * x * x).exp()
}

/// Trapezoid rule on a uniform mesh wide enough for all shifted products.
fn quadrature<F: Fn(f64) -> Complex64>(rho: f64, chirp: f64, f: F) -> Complex64 {
    let half = 14.0 * rho + 3.0;
    let step = (rho / 64.0).min(rho * rho / (16.0 * (1.0 + chirp.abs())));
    let n = (half / step).ceil() as i64;
    let mut acc = ComplexSum::new();
    for i in -n..=n {
        acc.add(f(i as f64 * step));
    }
    acc.value() * step
}

/// Evaluates the overlap families both in closed form and by quadrature.
pub fn overlap_moments(inputs: OverlapInputs) -> OverlapMoments {
    let OverlapInputs {
        rho,
        chirp,
        hq_over_p0: h,
        prec_over_p0: f,
    } = inputs;
    let c = continuous_packet(rho, chirp);
    let pref_e = |x: f64| 1.0 + f * (x + 1.0) - 0.5 * h;
    let pref_a = |x: f64| 1.0 + f * (x - 1.0) + 0.5 * h;
    // p/p₀ = 1 + f·(p − p₀)
    let rel = |x: f64| 1.0 + f * x;
    let extinction = (-0.5 * gamma(0.5 / rho, chirp).powi(2)).exp();
    let real = |v: f64| Complex64::new(v, 0.0);

    let a1 = OverlapFamily {
        zeroth: OverlapComparison {
            printed: real((1.0 - 0.5 * h).powi(2) + (rho * f).powi(2)),
            quadrature: quadrature(rho, chirp, |x| real(pref_e(x).powi(2) * c(x + 1.0).norm_sqr())),
        },
        first: OverlapComparison {
            printed: real(1.0),
            quadrature: quadrature(rho, chirp, |x| {
                real(pref_e(x).powi(2) * rel(x) * c(x + 1.0).norm_sqr())
            }),
        },
    };
    let a2 = OverlapFamily {
        zeroth: OverlapComparison {
            printed: real((1.0 + 0.5 * h).powi(2) + (rho * f).powi(2)),
            quadrature: quadrature(rho, chirp, |x| real(pref_a(x).powi(2) * c(x - 1.0).norm_sqr())),
        },
        first: OverlapComparison {
            printed: real(1.0),
            quadrature: quadrature(rho, chirp, |x| {
                real(pref_a(x).powi(2) * rel(x) * c(x - 1.0).norm_sqr())
            }),
        },
    };
    let a3 = OverlapFamily {
        zeroth: OverlapComparison {
            printed: real(extinction),
            quadrature: quadrature(rho, chirp, |x| real(pref_e(x) * (c(x).conj() * c(x + 1.0)).re)),
        },
        first: OverlapComparison {
            printed: real(-extinction),
            quadrature: quadrature(rho, chirp, |x| {
                real(pref_e(x) * (c(x).conj() * c(x + 1.0)).re * x)
            }),
        },
    };
    let a4 = OverlapFamily {
        zeroth: OverlapComparison {
            printed: extinction * (1.0 - Complex64::new(f - h, f * chirp) / 2.0),
            quadrature: quadrature(rho, chirp, |x| pref_a(x) * c(x).conj() * c(x - 1.0)),
        },
        first: OverlapComparison {
            printed: real(extinction),
            quadrature: quadrature(rho, chirp, |x| pref_a(x) * c(x).conj() * c(x - 1.0) * x),
        },
    };
    OverlapMoments { a1, a2, a3, a4 }
}

/// Smith-Purcell spontaneous emission per steradian and unit angular frequency,
/// `(e²L²/64π²)(ω²/c²)√(μ₀/ε₀)|η|² sinc²(θ̄/2)`.
///
/// The expression carries units of energy per unit frequency (J·s); divide by
/// ħω for a photon count.
pub fn smith_purcell_density(omega: f64, length: f64, eta: f64, theta: f64) -> f64 {
    let impedance = (VACUUM_PERMEABILITY / VACUUM_PERMITTIVITY).sqrt();
    ELEMENTARY_CHARGE.powi(2) * length.powi(2) / (64.0 * PI * PI)
        * (omega / SPEED_OF_LIGHT).powi(2)
        * impedance
        * eta * eta
        * sinc2_half(theta)
}

/// The same density assembled from ħω ρ_ph(ω) Δν_vac with the single-mode
/// quantization `½√(ε₀/μ₀)|E⊥|² A_eff t = ħω`, `t = L/βc`, and an explicit
/// quantization volume `V` in ρ_ph = ω²V/(8π²c³).
pub fn smith_purcell_pipeline(
    omega: f64,
    length: f64,
    beta: f64,
    eta: f64,
    theta: f64,
    a_eff: f64,
    volume: f64,
) -> f64 {
    let impedance = (VACUUM_PERMEABILITY / VACUUM_PERMITTIVITY).sqrt();
    let transit = length / (beta * SPEED_OF_LIGHT);
    let field_sq = 2.0 * HBAR * omega * impedance / (a_eff * transit);
    let upsilon = ELEMENTARY_CHARGE * eta * field_sq.sqrt() * length / (4.0 * HBAR * omega);
    let density_of_states = omega * omega * volume / (8.0 * PI * PI * SPEED_OF_LIGHT.powi(3));
    HBAR * omega * density_of_states * vacuum_spontaneous(upsilon, theta)
}

/// Quantization volume that makes the pipeline equal the direct density: A_eff·L/β.
pub fn smith_purcell_consistent_volume(length: f64, beta: f64, a_eff: f64) -> f64 {
    a_eff * length / beta
}
