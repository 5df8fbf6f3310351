//! First-order emission/absorption amplitudes and the observables built from them.
//!
//! Scattered amplitudes are indexed by the final basis state (p′, ν′):
//! emission at (p′, ν′) draws from the initial amplitude at (p′ + p_rec, ν′ − 1),
//! absorption at (p′, ν′) from (p′ − p_rec, ν′ + 1).

use num_complex::Complex64;

use crate::error::{QewError, Result};
use crate::exec::Execution;
use crate::math::{sinc, NeumaierSum};
use crate::params::DimensionlessParams;
use crate::states::{gaussian_wavepacket, joint_state, GridSpec, JointState, MomentumGrid, PhotonSpec};

/// Rows handled per work unit. Fixed so reductions do not depend on thread count.
pub const ROW_CHUNK: usize = 64;
/// Coupling measure above which a warning is logged.
pub const PERTURBATIVE_WARN: f64 = 0.1;
/// Coupling measure above which scattering is refused.
pub const PERTURBATIVE_LIMIT: f64 = 0.5;
/// Largest tolerated ratio of off-grid to retained scattered mass.
pub const TRUNCATION_LIMIT: f64 = 1e-8;

/// Electron energy-momentum relation used to weight momenta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dispersion {
    /// E_p − E(p₀) = v₀(p − p₀)
    #[default]
    Linear,
    /// adds (p − p₀)²/2m*
    Quadratic,
}

/// The two first-order channels over the final (grid × Fock) basis.
///
/// The final photon ladder has one more level than the initial one so that
/// emission from the top level is kept.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteredAmplitudes {
    pub grid: MomentumGrid,
    pub photon_levels: usize,
    pub emission: Vec<Complex64>,
    pub absorption: Vec<Complex64>,
    /// Scattered mass whose final momentum falls off the grid.
    pub truncated_mass: f64,
    /// Σ|c^(e)|² + Σ|c^(a)|².
    pub scattered_norm: f64,
}

impl ScatteredAmplitudes {
    #[inline]
    pub fn emission_at(&self, row: usize, nu: usize) -> Complex64 {
        self.emission[row * self.photon_levels + nu]
    }

    #[inline]
    pub fn absorption_at(&self, row: usize, nu: usize) -> Complex64 {
        self.absorption[row * self.photon_levels + nu]
    }

    pub fn absorption_is_zero(&self) -> bool {
        self.absorption.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }
}

/// Momentum-dependent prefactors of the two channels at final offset `x` (p_rec units).
#[derive(Debug, Clone, Copy)]
struct Prefactor {
    inv_p0: f64,
    half_hq: f64,
}

impl Prefactor {
    fn new(params: &DimensionlessParams) -> Self {
        Self {
            inv_p0: params.p0_over_prec.map_or(0.0, |r| 1.0 / r),
            half_hq: 0.5 * params.hqz_over_prec,
        }
    }

    /// (p′ + p_rec − ħq_z/2)/p₀
    fn emission(&self, x: f64) -> f64 {
        1.0 + (x + 1.0 - self.half_hq) * self.inv_p0
    }

    /// (p′ − p_rec + ħq_z/2)/p₀
    fn absorption(&self, x: f64) -> f64 {
        1.0 + (x - 1.0 + self.half_hq) * self.inv_p0
    }
}

/// Applies the first-order scattering amplitudes to `joint`.
pub fn scatter_first_order(
    joint: &JointState,
    params: &DimensionlessParams,
    exec: Execution,
) -> Result<ScatteredAmplitudes> {
    params.validate()?;
    let grid = joint.grid;
    let rows = grid.len();
    let m = grid.m_align;
    let levels = joint.photon_levels;
    let out_levels = levels + 1;
    let pre = Prefactor::new(params);

    let max_prefactor = [0, rows - 1]
        .iter()
        .flat_map(|&k| {
            let x = grid.offset(k);
            [pre.emission(x).abs(), pre.absorption(x).abs()]
        })
        .fold(0.0, f64::max);
    let measure = params.upsilon * (levels as f64).sqrt() * max_prefactor;
    if measure > PERTURBATIVE_LIMIT {
        return Err(QewError::Perturbative {
            measure,
            limit: PERTURBATIVE_LIMIT,
        });
    }
    if measure > PERTURBATIVE_WARN {
        log::warn!("coupling measure {measure:.3} above {PERTURBATIVE_WARN}: first order may be inaccurate");
    }

    let (theta_e, theta_a) = params.detuning_split();
    let emission_phase = Complex64::from_polar(
        params.upsilon * sinc(0.5 * theta_e),
        0.5 * theta_e + params.phi0,
    );
    let absorption_phase = -Complex64::from_polar(
        params.upsilon * sinc(0.5 * theta_a),
        -(0.5 * theta_a + params.phi0),
    );
    let sqrt_n: Vec<f64> = (0..=out_levels).map(|n| (n as f64).sqrt()).collect();

    struct Chunk {
        emission: Vec<Complex64>,
        absorption: Vec<Complex64>,
        lost: NeumaierSum,
        kept: NeumaierSum,
    }

    let chunks = exec.map_chunks(rows, ROW_CHUNK, |range| {
        let mut chunk = Chunk {
            emission: vec![Complex64::new(0.0, 0.0); range.len() * out_levels],
            absorption: vec![Complex64::new(0.0, 0.0); range.len() * out_levels],
            lost: NeumaierSum::new(),
            kept: NeumaierSum::new(),
        };
        for (local, k) in range.clone().enumerate() {
            let x = grid.offset(k);
            let base = local * out_levels;
            let ce = emission_phase * pre.emission(x);
            let ca = absorption_phase * pre.absorption(x);
            if k + m < rows {
                let src = joint.row(k + m);
                for nu in 1..out_levels {
                    let v = ce * sqrt_n[nu] * src[nu - 1];
                    chunk.kept.add(v.norm_sqr());
                    chunk.emission[base + nu] = v;
                }
            }
            if k >= m {
                let src = joint.row(k - m);
                for nu in 0..levels.saturating_sub(1) {
                    let v = ca * sqrt_n[nu + 1] * src[nu + 1];
                    chunk.kept.add(v.norm_sqr());
                    chunk.absorption[base + nu] = v;
                }
            }
            // initial rows whose scattered image leaves the grid
            if k < m {
                let xe = x - 1.0;
                let ce = emission_phase * pre.emission(xe);
                for (nu, c) in joint.row(k).iter().enumerate() {
                    chunk.lost.add((ce * sqrt_n[nu + 1] * c).norm_sqr());
                }
            }
            if k + m >= rows {
                let xa = x + 1.0;
                let ca = absorption_phase * pre.absorption(xa);
                for (nu, c) in joint.row(k).iter().enumerate().skip(1) {
                    chunk.lost.add((ca * sqrt_n[nu] * c).norm_sqr());
                }
            }
        }
        chunk
    });

    let mut emission = Vec::with_capacity(rows * out_levels);
    let mut absorption = Vec::with_capacity(rows * out_levels);
    let mut lost = NeumaierSum::new();
    let mut kept = NeumaierSum::new();
    for chunk in chunks {
        emission.extend_from_slice(&chunk.emission);
        absorption.extend_from_slice(&chunk.absorption);
        lost.merge(&chunk.lost);
        kept.merge(&chunk.kept);
    }
    let truncated_mass = lost.value();
    let scattered_norm = kept.value();
    if truncated_mass > TRUNCATION_LIMIT * (scattered_norm + truncated_mass) {
        return Err(QewError::Truncation(format!(
            "scattered mass {truncated_mass:.3e} leaves the momentum grid (retained {scattered_norm:.3e})"
        )));
    }
    Ok(ScatteredAmplitudes {
        grid,
        photon_levels: out_levels,
        emission,
        absorption,
        truncated_mass,
        scattered_norm,
    })
}

/// Energy weights `E_p − E₀` per grid row in units of ħω.
pub fn energy_weights(
    joint: &JointState,
    params: &DimensionlessParams,
    dispersion: Dispersion,
) -> Result<Vec<f64>> {
    let grid = joint.grid;
    let energy: Vec<f64> = match dispersion {
        Dispersion::Linear => (0..grid.len()).map(|k| grid.offset(k)).collect(),
        Dispersion::Quadratic => {
            let p0 = params.p0_over_prec.ok_or_else(|| {
                QewError::Config("quadratic dispersion needs a finite p0/p_rec".into())
            })?;
            // m* = γ³m = γ²p₀/v₀ in internal units
            let mass = params.lorentz_gamma.powi(2) * p0;
            (0..grid.len())
                .map(|k| {
                    let x = grid.offset(k);
                    x + x * x / (2.0 * mass)
                })
                .collect()
        }
    };
    let marginal = joint.momentum_marginal();
    let e0 = energy
        .iter()
        .zip(&marginal)
        .map(|(e, w)| e * w)
        .collect::<NeumaierSum>()
        .value();
    Ok(energy.into_iter().map(|e| e - e0).collect())
}

/// Photon-number and energy changes split into interference, scattering and
/// emission/absorption cross parts. Energies in ħω.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OrderedObservables {
    pub dnu1: f64,
    pub dnu2: f64,
    pub de1: f64,
    pub de2: f64,
    pub cross_nu: f64,
    pub cross_e: f64,
}

/// Expectation changes over the assembled final state c⁽⁰⁾ + c⁽ᵉ⁾ + c⁽ᵃ⁾.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DirectObservables {
    pub dnu: f64,
    pub de: f64,
    /// 1 − Σ|c^(f)|²; never renormalized away.
    pub norm_deficit: f64,
}

/// Post-interaction electron momentum distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectronSpectrum {
    pub grid: MomentumGrid,
    /// Σ_ν |c^(f)_{p,ν}|² per grid point.
    pub marginal: Vec<f64>,
    /// Weight within p₀ ± p_rec/2.
    pub central: f64,
    /// Weight within p₀ − p_rec ± p_rec/2 (emission recoil).
    pub lower: f64,
    /// Weight within p₀ + p_rec ± p_rec/2 (absorption recoil).
    pub upper: f64,
    /// Σ (p − p₀)(|c^(f)|² − |c^(0)|²), in p_rec.
    pub mean_shift: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Sums {
    dnu1: NeumaierSum,
    de1: NeumaierSum,
    dnu2: NeumaierSum,
    de2: NeumaierSum,
    cross_nu: NeumaierSum,
    cross_e: NeumaierSum,
    direct_nu: NeumaierSum,
    direct_e: NeumaierSum,
    final_norm: NeumaierSum,
}

impl Sums {
    fn merge(&mut self, o: &Sums) {
        self.dnu1.merge(&o.dnu1);
        self.de1.merge(&o.de1);
        self.dnu2.merge(&o.dnu2);
        self.de2.merge(&o.de2);
        self.cross_nu.merge(&o.cross_nu);
        self.cross_e.merge(&o.cross_e);
        self.direct_nu.merge(&o.direct_nu);
        self.direct_e.merge(&o.direct_e);
        self.final_norm.merge(&o.final_norm);
    }
}

fn check_shapes(joint: &JointState, scattered: &ScatteredAmplitudes) -> Result<()> {
    if joint.grid != scattered.grid || joint.photon_levels + 1 != scattered.photon_levels {
        return Err(QewError::Config("scattered amplitudes do not match the joint state".into()));
    }
    Ok(())
}

fn initial_mean_number(joint: &JointState) -> f64 {
    joint
        .photon_marginal()
        .iter()
        .enumerate()
        .map(|(nu, p)| nu as f64 * p)
        .collect::<NeumaierSum>()
        .value()
}

fn accumulate(
    joint: &JointState,
    scattered: &ScatteredAmplitudes,
    weights: &[f64],
    exec: Execution,
) -> Sums {
    let levels = joint.photon_levels;
    let out_levels = scattered.photon_levels;
    let nu_bar = initial_mean_number(joint);
    let zero = Complex64::new(0.0, 0.0);
    let parts = exec.map_chunks(joint.grid.len(), ROW_CHUNK, |range| {
        let mut s = Sums::default();
        for k in range {
            let w = weights[k];
            for nu in 0..out_levels {
                let c0 = if nu < levels { joint.at(k, nu) } else { zero };
                let e = scattered.emission_at(k, nu);
                let a = scattered.absorption_at(k, nu);
                let nu_f = nu as f64;
                s.dnu1.add(2.0 * (c0.conj() * e).re - 2.0 * (c0.conj() * a).re);
                s.de1.add(2.0 * (c0.conj() * (e + a)).re * w);
                s.dnu2.add(e.norm_sqr() - a.norm_sqr());
                s.de2.add((e.norm_sqr() + a.norm_sqr()) * w);
                let cross = 2.0 * (e.conj() * a).re;
                s.cross_nu.add(cross * (nu_f - nu_bar));
                s.cross_e.add(cross * w);
                let f = (c0 + e + a).norm_sqr();
                let delta = f - c0.norm_sqr();
                s.direct_nu.add(nu_f * delta);
                s.direct_e.add(w * delta);
                s.final_norm.add(f);
            }
        }
        s
    });
    let mut total = Sums::default();
    for p in &parts {
        total.merge(p);
    }
    total
}

/// Interference (first-order) and scattering (second-order) parts of Δν and ΔE,
/// with the emission/absorption cross term kept separate.
pub fn observables_by_order(
    joint: &JointState,
    scattered: &ScatteredAmplitudes,
    params: &DimensionlessParams,
    dispersion: Dispersion,
    exec: Execution,
) -> Result<OrderedObservables> {
    check_shapes(joint, scattered)?;
    let weights = energy_weights(joint, params, dispersion)?;
    Ok(orders_from(&accumulate(joint, scattered, &weights, exec)))
}

fn orders_from(s: &Sums) -> OrderedObservables {
    OrderedObservables {
        dnu1: s.dnu1.value(),
        dnu2: s.dnu2.value(),
        de1: s.de1.value(),
        de2: s.de2.value(),
        cross_nu: s.cross_nu.value(),
        cross_e: s.cross_e.value(),
    }
}

/// Photon number and energy change evaluated on the assembled final state.
pub fn observables_direct(
    joint: &JointState,
    scattered: &ScatteredAmplitudes,
    params: &DimensionlessParams,
    dispersion: Dispersion,
    exec: Execution,
) -> Result<DirectObservables> {
    check_shapes(joint, scattered)?;
    let weights = energy_weights(joint, params, dispersion)?;
    Ok(direct_from(&accumulate(joint, scattered, &weights, exec)))
}

fn direct_from(s: &Sums) -> DirectObservables {
    DirectObservables {
        dnu: s.direct_nu.value(),
        de: s.direct_e.value(),
        norm_deficit: 1.0 - s.final_norm.value(),
    }
}

/// Momentum marginal of the final state and its recoil sideband weights.
pub fn electron_spectrum(
    joint: &JointState,
    scattered: &ScatteredAmplitudes,
    exec: Execution,
) -> Result<ElectronSpectrum> {
    check_shapes(joint, scattered)?;
    let grid = joint.grid;
    let levels = joint.photon_levels;
    let zero = Complex64::new(0.0, 0.0);
    let rows = exec.map_indexed(grid.len(), |k| {
        let mut row = NeumaierSum::new();
        let mut initial = NeumaierSum::new();
        for nu in 0..scattered.photon_levels {
            let c0 = if nu < levels { joint.at(k, nu) } else { zero };
            row.add((c0 + scattered.emission_at(k, nu) + scattered.absorption_at(k, nu)).norm_sqr());
            initial.add(c0.norm_sqr());
        }
        (row.value(), initial.value())
    });
    let mut shift = NeumaierSum::new();
    for (k, (row, initial)) in rows.iter().enumerate() {
        shift.add(grid.offset(k) * (row - initial));
    }
    let marginal: Vec<f64> = rows.into_iter().map(|(row, _)| row).collect();
    let window = |center: isize| -> f64 {
        let m = grid.m_align as isize;
        let lo = grid.half_width as isize + center * m - m / 2;
        (lo..lo + m)
            .filter(|&i| i >= 0 && (i as usize) < marginal.len())
            .map(|i| marginal[i as usize])
            .collect::<NeumaierSum>()
            .value()
    };
    Ok(ElectronSpectrum {
        grid,
        central: window(0),
        lower: window(-1),
        upper: window(1),
        mean_shift: shift.value(),
        marginal,
    })
}

/// Everything measured for one interaction instance.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InteractionReport {
    pub orders: OrderedObservables,
    pub direct: DirectObservables,
    /// Δν⁽¹⁾ + ΔE⁽¹⁾
    pub arc_r1: f64,
    /// Δν⁽²⁾ + ΔE⁽²⁾
    pub arc_r2: f64,
    /// Δν_direct − (Δν⁽¹⁾ + Δν⁽²⁾ + cross_ν).
    pub decomposition_residue: f64,
    pub sideband_lower: f64,
    pub sideband_central: f64,
    pub sideband_upper: f64,
    pub truncated_mass: f64,
}

/// ARC residuals r_k = Δν⁽ᵏ⁾ + ΔE⁽ᵏ⁾/ħω.
pub fn arc_residual(orders: &OrderedObservables) -> (f64, f64) {
    (orders.dnu1 + orders.de1, orders.dnu2 + orders.de2)
}

/// Scatters `joint` and assembles the full report in one pass.
pub fn interact(
    joint: &JointState,
    params: &DimensionlessParams,
    dispersion: Dispersion,
    exec: Execution,
) -> Result<(ScatteredAmplitudes, InteractionReport)> {
    let scattered = scatter_first_order(joint, params, exec)?;
    let weights = energy_weights(joint, params, dispersion)?;
    let sums = accumulate(joint, &scattered, &weights, exec);
    let orders = orders_from(&sums);
    let direct = direct_from(&sums);
    let spectrum = electron_spectrum(joint, &scattered, exec)?;
    let (arc_r1, arc_r2) = arc_residual(&orders);
    let report = InteractionReport {
        orders,
        direct,
        arc_r1,
        arc_r2,
        decomposition_residue: direct.dnu - (orders.dnu1 + orders.dnu2 + orders.cross_nu),
        sideband_lower: spectrum.lower,
        sideband_central: spectrum.central,
        sideband_upper: spectrum.upper,
        truncated_mass: scattered.truncated_mass,
    };
    Ok((scattered, report))
}

/// Builds the initial joint state for `params` and a photon description.
pub fn prepare_joint(params: &DimensionlessParams, photon: &PhotonSpec, grid: GridSpec) -> Result<JointState> {
    params.validate()?;
    let rho = params.rho();
    let electron = gaussian_wavepacket(rho, params.chirp, grid.grid_for(rho)?)?;
    Ok(joint_state(&electron, &photon.build()?))
}
