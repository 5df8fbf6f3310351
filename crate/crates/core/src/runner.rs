//! Subcommand drivers producing [`Table`]s.

use std::f64::consts::PI;

use crate::config::{linspace, with_parameter, PhotonKindConfig, RunConfig};
use crate::error::{QewError, Result};
use crate::exec::Execution;
use crate::math::{sinc, sinc2_half};
use crate::oracles::{coherent_arc, fock_arc, smith_purcell_density, squeezed_arc, ArcPrediction};
use crate::params::constants::SPEED_OF_LIGHT;
use crate::params::{derive_dimensionless, Coupling, DimensionlessParams, PhysicalScenario};
use crate::scattering::{interact, prepare_joint, InteractionReport};
use crate::states::PhotonSpec;
use crate::table::Table;

/// Output columns of every simulate/sweep row, after the swept inputs.
pub const RESULT_COLUMNS: [&str; 15] = [
    "dnu1_num",
    "dnu2_num",
    "dE1_num",
    "dE2_num",
    "cross_nu",
    "cross_E",
    "dnu_direct",
    "dE_direct",
    "arc_r1",
    "arc_r2",
    "norm_deficit",
    "oracle_dnu1",
    "oracle_dnu2",
    "gamma",
    "extinction",
];

pub const FIG3A_COLUMNS: [&str; 6] = [
    "gamma",
    "dnu1_num",
    "normalized_emission",
    "extinction",
    "vacuum_floor",
    "signal_over_floor",
];

pub const FIG3B_COLUMNS: [&str; 4] = ["sigma_z0", "drift_length", "gamma", "extinction"];

pub const SMITH_PURCELL_COLUMNS: [&str; 4] = ["omega", "angle", "theta_bar", "d2nu_domega_dOmega"];

/// Closed-form prediction matching the configured photon state.
pub fn oracle_for(kind: PhotonKindConfig, p: &DimensionlessParams) -> ArcPrediction {
    match kind {
        PhotonKindConfig::Vacuum => fock_arc(p.upsilon, 0.0, p.theta, p.epsilon),
        PhotonKindConfig::Fock => fock_arc(p.upsilon, p.nu0, p.theta, p.epsilon),
        PhotonKindConfig::Coherent => coherent_arc(p.upsilon, p.nu0, p.gamma(), p.theta, p.epsilon, p.phi0),
        PhotonKindConfig::Squeezed => {
            squeezed_arc(p.upsilon, p.nu0, p.squeeze, p.gamma(), p.theta, p.epsilon, p.phi0)
        }
    }
}

/// One engine evaluation for `params` under the configuration's photon kind and grid.
pub fn evaluate(cfg: &RunConfig, params: &DimensionlessParams, exec: Execution) -> Result<InteractionReport> {
    let photon = cfg.photon_for(params)?;
    let joint = prepare_joint(params, &photon, cfg.grid)?;
    Ok(interact(&joint, params, cfg.dispersion, exec)?.1)
}

pub fn result_values(report: &InteractionReport, oracle: &ArcPrediction, params: &DimensionlessParams) -> Vec<f64> {
    let g = params.gamma();
    vec![
        report.orders.dnu1,
        report.orders.dnu2,
        report.orders.de1,
        report.orders.de2,
        report.orders.cross_nu,
        report.orders.cross_e,
        report.direct.dnu,
        report.direct.de,
        report.arc_r1,
        report.arc_r2,
        report.direct.norm_deficit,
        oracle.dnu1,
        oracle.dnu2,
        g,
        (-0.5 * g * g).exp(),
    ]
}

fn collect<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

pub fn simulate(cfg: &RunConfig, exec: Execution) -> Result<Table> {
    let report = evaluate(cfg, &cfg.params, exec)?;
    let oracle = oracle_for(cfg.photon_kind, &cfg.params);
    let mut table = Table::new(&RESULT_COLUMNS);
    table.rows.push(result_values(&report, &oracle, &cfg.params));
    Ok(table)
}

pub fn sweep(cfg: &RunConfig, exec: Execution) -> Result<Table> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| QewError::Config("sweep requires sweep.parameter, sweep.from, sweep.to, sweep.steps".into()))?;
    let values = spec.values();
    let rows = exec.map_indexed(values.len(), |i| -> Result<Vec<f64>> {
        let p = with_parameter(&cfg.params, &spec.parameter, values[i])?;
        let report = evaluate(cfg, &p, exec)?;
        let mut row = vec![values[i]];
        row.extend(result_values(&report, &oracle_for(cfg.photon_kind, &p), &p));
        Ok(row)
    });
    let mut columns = vec![spec.parameter.as_str()];
    columns.extend(RESULT_COLUMNS);
    let mut table = Table::new(&columns);
    table.rows = collect(rows)?;
    Ok(table)
}

/// Γ where the signal first drops below the floor, interpolated in Γ² on a log scale.
fn crossing(gammas: &[f64], signal: &[f64], floor: &[f64]) -> Option<f64> {
    let d: Vec<f64> = signal
        .iter()
        .zip(floor)
        .map(|(s, f)| s.abs().ln() - f.ln())
        .collect();
    (1..d.len()).find(|&i| d[i - 1] >= 0.0 && d[i] < 0.0).map(|i| {
        let (a, b) = (gammas[i - 1].powi(2), gammas[i].powi(2));
        (a + (b - a) * d[i - 1] / (d[i - 1] - d[i])).sqrt()
    })
}

pub fn fig3a(cfg: &RunConfig, exec: Execution) -> Result<Table> {
    if cfg.photon_kind != PhotonKindConfig::Coherent {
        return Err(QewError::Config("fig3a requires photon.kind = coherent".into()));
    }
    let p = &cfg.params;
    let classical = 4.0 * p.upsilon * p.nu0.sqrt() * sinc(0.5 * p.theta) * (0.5 * p.theta + p.phi0).cos();
    if classical == 0.0 {
        return Err(QewError::Domain(
            "point-particle emission vanishes at this coupling, detuning and phase".into(),
        ));
    }
    let gammas = cfg.fig3a.gammas();
    let stretch = p.chirp.hypot(1.0);
    let rows = exec.map_indexed(gammas.len(), |i| -> Result<Vec<f64>> {
        let g = gammas[i];
        let mut q = p.clone();
        q.gamma0 = g / stretch;
        let signal = evaluate(cfg, &q, exec)?.orders.dnu1;
        let joint = prepare_joint(&q, &PhotonSpec::Vacuum, cfg.grid)?;
        let floor = interact(&joint, &q, cfg.dispersion, exec)?.1.orders.dnu2;
        Ok(vec![g, signal, signal / classical, (-0.5 * g * g).exp(), floor, signal / floor])
    });
    let mut table = Table::new(&FIG3A_COLUMNS);
    table.rows = collect(rows)?;
    let col = |name| table.column(name).expect("column exists");
    let (signal, floor) = (col("dnu1_num"), col("vacuum_floor"));
    table.notes.push(match crossing(&gammas, &signal, &floor) {
        Some(g) => format!("crossing gamma = {}", crate::table::format_float(g)),
        None => "crossing gamma = none in range".to_string(),
    });
    table.notes.push(format!(
        "point-particle signal over floor = {}",
        crate::table::format_float(classical / (p.upsilon * p.upsilon * sinc2_half(p.theta + 0.5 * p.epsilon)))
    ));
    Ok(table)
}

pub fn fig3b(cfg: &RunConfig) -> Result<Table> {
    let f = &cfg.fig3b;
    let mut table = Table::new(&FIG3B_COLUMNS);
    for sigma in linspace(f.sigma_from, f.sigma_to, f.sigma_steps) {
        for drift in linspace(f.drift_from, f.drift_to, f.drift_steps) {
            let scenario = PhysicalScenario {
                wavelength: f.wavelength,
                beta: f.beta,
                interaction_length: 1.0,
                sigma_z0: sigma,
                drift_length: drift,
                nu0: 0.0,
                squeeze: 0.0,
                phi0: 0.0,
                coupling: Coupling::Normalized(0.0),
                detuning: 0.0,
                recoil: 0.0,
            };
            let g = derive_dimensionless(&scenario)?.gamma();
            table.rows.push(vec![sigma, drift, g, (-0.5 * g * g).exp()]);
        }
    }
    Ok(table)
}

pub fn smith_purcell(cfg: &RunConfig) -> Result<Table> {
    let s = &cfg.smith_purcell;
    let mut table = Table::new(&SMITH_PURCELL_COLUMNS);
    let v0 = s.beta * SPEED_OF_LIGHT;
    for angle in linspace(s.angle_from, s.angle_to, s.angle_steps) {
        for omega in linspace(s.omega_from, s.omega_to, s.omega_steps) {
            let qz = omega / SPEED_OF_LIGHT * angle.cos() + s.order as f64 * 2.0 * PI / s.period;
            let theta = (omega / v0 - qz) * s.length;
            let density = smith_purcell_density(omega, s.length, s.eta, theta);
            table.rows.push(vec![omega, angle, theta, density]);
        }
    }
    Ok(table)
}
