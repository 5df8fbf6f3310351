//! Built-in verification suite: engine-vs-closed-form checks with a
//! printable pass/fail table.

use std::f64::consts::PI;
use std::fmt;

use crate::config::RunConfig;
use crate::error::Result;
use crate::exec::Execution;
use crate::math::sinc2_half;
use crate::oracles::{
    coherent_arc, fel_low_gain, fock_arc, max_gain_detuning, smith_purcell_consistent_volume, smith_purcell_density,
    smith_purcell_pipeline, squeezed_arc, squeezed_vacuum_emission, vacuum_spontaneous,
};
use crate::params::DimensionlessParams;
use crate::runner;
use crate::scattering::{interact, prepare_joint, scatter_first_order, Dispersion, InteractionReport};
use crate::states::{gaussian_wavepacket, GridSpec, Ordering, PhotonSpec};
use crate::table::format_float;

pub const CHECK_COUNT: u8 = 15;

/// Frozen Smith-Purcell row (default `sp.*` settings, row 60).
pub const GOLDEN_SMITH_PURCELL_ROW: &str =
    "1.1300000000000000e+15,1.5707963267948966e+00,-2.1230285621117800e-01,2.1669818558792178e-35";
pub const GOLDEN_ROW_INDEX: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Reported,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Reported => "REPORTED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub expected: String,
    pub measured: String,
    pub tolerance: String,
    pub status: Status,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    fn gate(id: u8, name: &'static str, expected: impl Into<String>, measured: impl Into<String>, tolerance: impl Into<String>, ok: bool) -> Self {
        Check {
            id,
            name,
            expected: expected.into(),
            measured: measured.into(),
            tolerance: tolerance.into(),
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{:>2}  {:<28} {:<8}  expected {}  measured {}  tol {}",
            self.id, self.name, self.status, self.expected, self.measured, self.tolerance
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Multiplies every tolerance; values below 1 tighten the suite.
    pub tolerance_scale: f64,
    pub exec: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerance_scale: 1.0,
            exec: Execution::default(),
        }
    }
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

fn params(upsilon: f64, theta: f64, epsilon: f64, phi0: f64, gamma0: f64) -> DimensionlessParams {
    DimensionlessParams {
        upsilon,
        theta,
        epsilon,
        phi0,
        gamma0,
        ..Default::default()
    }
}

fn engine(p: &DimensionlessParams, photon: PhotonSpec, grid: GridSpec, exec: Execution) -> Result<InteractionReport> {
    let joint = prepare_joint(p, &photon, grid)?;
    Ok(interact(&joint, p, Dispersion::Linear, exec)?.1)
}

pub fn run_check(id: u8, opts: &VerifyOptions) -> Check {
    let result = match id {
        1 => fock_nullity(opts),
        2 => coherent_first_order(opts),
        3 => extinction_law(opts),
        4 => gamma_formula(opts),
        5 => second_order(opts),
        6 => vacuum_emission(opts),
        7 => squeezed_shift(opts),
        8 => squeezed_vacuum_fel(opts),
        9 => fel_limit(opts),
        10 => arc_second_order(opts),
        11 => arc_first_order(opts),
        12 => signal_to_noise(opts),
        13 => grid_robustness(opts),
        14 => smith_purcell(opts),
        15 => determinism(opts),
        _ => panic!("no check {id}"),
    };
    result.unwrap_or_else(|e| Check {
        id,
        name: name_of(id),
        expected: "-".into(),
        measured: format!("error: {e}"),
        tolerance: "-".into(),
        status: Status::Fail,
    })
}

pub fn name_of(id: u8) -> &'static str {
    [
        "",
        "fock nullity",
        "coherent first order",
        "extinction law",
        "gamma formula",
        "second order",
        "vacuum emission",
        "squeezed shift",
        "squeezed vacuum fel",
        "fel low gain",
        "arc second order",
        "arc first order ratio",
        "signal to noise",
        "grid robustness",
        "smith-purcell",
        "determinism",
    ][id as usize]
}

pub fn run_all(opts: &VerifyOptions) -> Vec<Check> {
    (1..=CHECK_COUNT).map(|id| run_check(id, opts)).collect()
}

pub fn render(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        out.push_str(&c.line());
        out.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    out.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    out
}

fn fock_nullity(o: &VerifyOptions) -> Result<Check> {
    let tol = 1e-12 * o.tolerance_scale;
    let mut worst: f64 = 0.0;
    for nu0 in [0usize, 1, 5, 50] {
        for theta in [0.0, 1.0, 2.6] {
            for g in [0.2, 1.0, 3.0] {
                let r = engine(&params(0.02, theta, 0.1, 0.3, g), PhotonSpec::Fock(nu0), GridSpec::default(), o.exec)?;
                worst = worst.max(r.orders.dnu1.abs()).max(r.orders.de1.abs());
            }
        }
    }
    Ok(Check::gate(1, name_of(1), "0", sci(worst), sci(tol), worst <= tol))
}

fn coherent_first_order(o: &VerifyOptions) -> Result<Check> {
    let (rel_tol, floor) = (1e-6 * o.tolerance_scale, 1e-12 * o.tolerance_scale);
    let mut worst_rel: f64 = 0.0;
    let mut ok = true;
    for u in [0.005, 0.02] {
        for nu0 in [4.0, 100.0] {
            for g in [0.1, 0.5, 1.0, 2.0, 3.0] {
                for theta in [0.0, 1.0, 2.6] {
                    for phi in [0.0, PI / 3.0, PI] {
                        let r = engine(&params(u, theta, 0.0, phi, g), PhotonSpec::Coherent(nu0), GridSpec::default(), o.exec)?;
                        let oracle = coherent_arc(u, nu0, g, theta, 0.0, phi).dnu1;
                        let err = (r.orders.dnu1 - oracle).abs();
                        ok &= err <= (rel_tol * oracle.abs()).max(floor);
                        worst_rel = worst_rel.max(err / oracle.abs().max(1e-300));
                    }
                }
            }
        }
    }
    Ok(Check::gate(2, name_of(2), "closed form", format!("max rel err {}", sci(worst_rel)), sci(rel_tol), ok))
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn extinction_law(o: &VerifyOptions) -> Result<Check> {
    let gammas = crate::config::linspace(0.1, 4.0, 40);
    let mut emission = Vec::with_capacity(gammas.len());
    for &g in &gammas {
        emission.push(engine(&params(0.01, 0.0, 0.0, 0.0, g), PhotonSpec::Coherent(4.0), GridSpec::default(), o.exec)?.orders.dnu1);
    }
    let x: Vec<f64> = gammas.iter().map(|g| g * g).collect();
    let y: Vec<f64> = emission.iter().map(|e| (e / emission[0]).ln()).collect();
    let slope = least_squares_slope(&x, &y);
    let tol = 0.005 * o.tolerance_scale;
    Ok(Check::gate(3, name_of(3), "slope -0.5", format!("{slope:.10}"), format!("{tol} rel"), ((slope + 0.5) / 0.5).abs() <= tol))
}

fn gamma_formula(o: &VerifyOptions) -> Result<Check> {
    let tol = 1e-8 * o.tolerance_scale;
    let mut worst: f64 = 0.0;
    for chirp in [0.0, 1.0, -1.0, 5.0, -5.0] {
        for gamma0 in [0.2, 0.5, 1.0] {
            let rho = 0.5 / gamma0;
            let e = gaussian_wavepacket(rho, chirp, GridSpec::default().grid_for(rho)?)?;
            let g = crate::params::gamma(gamma0, chirp);
            worst = worst.max((e.recoil_overlap().norm() - (-0.5 * g * g).exp()).abs());
        }
    }
    Ok(Check::gate(4, name_of(4), "exp(-G^2/2)", sci(worst), sci(tol), worst <= tol))
}

fn second_order(o: &VerifyOptions) -> Result<Check> {
    let tol = 1e-8 * o.tolerance_scale;
    let mut worst: f64 = 0.0;
    for eps in [0.0, 0.1] {
        for theta in [0.0, 1.0, 2.6] {
            for nu0 in [2usize, 16] {
                let p = params(0.01, theta, eps, 0.3, 1.0);
                let expect = fock_arc(0.01, nu0 as f64, theta, eps).dnu2;
                for photon in [PhotonSpec::Fock(nu0), PhotonSpec::Coherent(nu0 as f64)] {
                    let r = engine(&p, photon, GridSpec::default(), o.exec)?;
                    worst = worst.max(((r.orders.dnu2 - expect) / expect).abs());
                }
            }
        }
    }
    Ok(Check::gate(5, name_of(5), "closed form", format!("max rel err {}", sci(worst)), sci(tol), worst <= tol))
}

fn vacuum_emission(o: &VerifyOptions) -> Result<Check> {
    let tol = 1e-10 * o.tolerance_scale;
    let mut worst: f64 = 0.0;
    let mut absorption_zero = true;
    for u in [0.01, 0.05] {
        for theta in [0.0, 1.0, 2.6, PI] {
            for eps in [0.0, 0.1] {
                let p = params(u, theta, eps, 0.0, 1.0);
                let joint = prepare_joint(&p, &PhotonSpec::Vacuum, GridSpec::default())?;
                absorption_zero &= scatter_first_order(&joint, &p, o.exec)?.absorption_is_zero();
                let r = interact(&joint, &p, Dispersion::Linear, o.exec)?.1;
                worst = worst.max((r.orders.dnu2 - vacuum_spontaneous(u, theta + 0.5 * eps)).abs());
            }
        }
    }
    Ok(Check::gate(
        6,
        name_of(6),
        "U^2 sinc^2, no absorption",
        format!("{}, absorption zero: {absorption_zero}", sci(worst)),
        sci(tol),
        worst <= tol && absorption_zero,
    ))
}

fn squeezed_shift_error(o: &VerifyOptions, nu0: f64, ordering: Ordering) -> Result<f64> {
    let (u, eps) = (0.01, 0.1);
    let mut worst: f64 = 0.0;
    for theta in [1.0, 2.6] {
        let p = params(u, theta, eps, 0.2, 1.0);
        let base = engine(&p, PhotonSpec::Squeezed { nu0, squeeze: 0.0, ordering }, GridSpec::default(), o.exec)?.orders.dnu2;
        for xi in [0.5, 1.0] {
            let mut q = p.clone();
            q.squeeze = xi;
            let r = engine(&q, PhotonSpec::Squeezed { nu0, squeeze: xi, ordering }, GridSpec::default(), o.exec)?;
            let expect = u * u * xi.sinh().powi(2) * (sinc2_half(theta + 0.5 * eps) - sinc2_half(theta - 0.5 * eps));
            worst = worst.max(((r.orders.dnu2 - base - expect) / expect).abs());
        }
    }
    Ok(worst)
}

fn squeezed_shift(o: &VerifyOptions) -> Result<Check> {
    let tol = 1e-6 * o.tolerance_scale;
    let gated = squeezed_shift_error(o, 0.0, Ordering::SqueezeDisplace)?;
    let sd = squeezed_shift_error(o, 4.0, Ordering::SqueezeDisplace)?;
    let ds = squeezed_shift_error(o, 4.0, Ordering::DisplaceSqueeze)?;
    Ok(Check::gate(
        7,
        name_of(7),
        "sinh^2 shift",
        format!("vacuum {}; nu0=4 sd {} ds {} (reported)", sci(gated), sci(sd), sci(ds)),
        format!("{} rel", sci(tol)),
        gated <= tol,
    ))
}

/// |a(ε) − b(ε)|/ε² for ε = 0.2, 0.1, 0.05 and the two successive growth ratios.
fn richardson(f: impl Fn(f64) -> f64) -> ([f64; 3], [f64; 2]) {
    let d = [0.2, 0.1, 0.05].map(|e: f64| f(e).abs() / (e * e));
    (d, [d[1] / d[0], d[2] / d[1]])
}

const GROWTH_LIMIT: f64 = 1.25;

fn squeezed_vacuum_fel(o: &VerifyOptions) -> Result<Check> {
    let (u, xi, theta) = (0.1, 1.0, max_gain_detuning());
    let (_, growth) = richardson(|e| squeezed_arc(u, 0.0, xi, 0.0, theta, e, 0.0).dnu2 - squeezed_vacuum_emission(u, theta, e, xi));
    let (_, consistent) = richardson(|e| {
        squeezed_arc(u, 0.0, xi, 0.0, theta, e, 0.0).dnu2 - squeezed_vacuum_emission(u, theta, e, xi)
            + vacuum_spontaneous(u, theta)
            - vacuum_spontaneous(u, theta + 0.5 * e)
    });
    let limit = GROWTH_LIMIT * o.tolerance_scale.max(1e-300);
    Ok(Check::gate(
        8,
        name_of(8),
        "diff/eps^2 bounded",
        format!(
            "growth {:.4} {:.4}; vacuum term at emission detuning {:.4} {:.4} (reported)",
            growth[0], growth[1], consistent[0], consistent[1]
        ),
        format!("growth <= {limit}"),
        growth.iter().all(|&g| g <= limit),
    ))
}

fn fel_limit(o: &VerifyOptions) -> Result<Check> {
    let (u, nu0, theta) = (0.1, 10.0, max_gain_detuning());
    let (_, growth) = richardson(|e| fock_arc(u, nu0, theta, e).dnu2 - fel_low_gain(u, nu0, theta, e));
    let (_, consistent) = richardson(|e| {
        fock_arc(u, nu0, theta, e).dnu2 - fel_low_gain(u, nu0, theta, e) - vacuum_spontaneous(u, theta + 0.5 * e)
            + vacuum_spontaneous(u, theta)
    });
    let limit = GROWTH_LIMIT * o.tolerance_scale.max(1e-300);
    let peak_tol = 1e-3 * o.tolerance_scale;
    let peak_ok = (theta - 2.606).abs() <= peak_tol;
    Ok(Check::gate(
        9,
        name_of(9),
        "diff/eps^2 bounded, peak 2.606",
        format!(
            "growth {:.4} {:.4}; vacuum term at emission detuning {:.4} {:.4} (reported); peak {theta:.6}",
            growth[0], growth[1], consistent[0], consistent[1]
        ),
        format!("growth <= {limit}, peak {peak_tol}"),
        peak_ok && growth.iter().all(|&g| g <= limit),
    ))
}

fn arc_second_order(o: &VerifyOptions) -> Result<Check> {
    let tol = 1e-10 * o.tolerance_scale;
    let (mut worst_r2, mut worst_cross): (f64, f64) = (0.0, 0.0);
    let mut ok = true;
    for g in [0.5, 1.0, 3.0, 4.0] {
        for theta in [0.0, 1.0] {
            for eps in [0.0, 0.1] {
                let r = engine(&params(0.01, theta, eps, 0.3, g), PhotonSpec::Coherent(4.0), GridSpec::default(), o.exec)?;
                let allowed = if g >= 3.0 { tol } else { r.orders.cross_e.abs() + tol };
                ok &= r.arc_r2.abs() <= allowed;
                worst_r2 = worst_r2.max(r.arc_r2.abs());
                worst_cross = worst_cross.max(r.orders.cross_e.abs());
            }
        }
    }
    Ok(Check::gate(
        10,
        name_of(10),
        "r2 ~ 0",
        format!("max |r2| {}, max |cross_E| {}", sci(worst_r2), sci(worst_cross)),
        sci(tol),
        ok,
    ))
}

/// −ΔE⁽¹⁾/Δν⁽¹⁾ for coherent light without chirp.
pub fn first_order_ratio(upsilon: f64, phi0: f64, exec: Execution) -> Result<f64> {
    let r = engine(&params(upsilon, 1.0, 0.0, phi0, 1.0), PhotonSpec::Coherent(4.0), GridSpec::default(), exec)?;
    Ok(-r.orders.de1 / r.orders.dnu1)
}

fn arc_first_order(o: &VerifyOptions) -> Result<Check> {
    let reference = first_order_ratio(0.01, 0.0, o.exec)?;
    let mut phi_spread: f64 = 0.0;
    for phi in [0.4, 2.0] {
        phi_spread = phi_spread.max((first_order_ratio(0.01, phi, o.exec)? - reference).abs());
    }
    let mut u_spread: f64 = 0.0;
    for u in [0.005, 0.02] {
        u_spread = u_spread.max((first_order_ratio(u, 0.0, o.exec)? - reference).abs());
    }
    let ok = phi_spread <= 1e-6 * o.tolerance_scale && u_spread <= 1e-8 * o.tolerance_scale;
    Ok(Check {
        id: 11,
        name: name_of(11),
        expected: "not gated".into(),
        measured: format!("ratio {reference:.4} (phase spread {}, coupling spread {})", sci(phi_spread), sci(u_spread)),
        tolerance: format!("{} / {}", sci(1e-6 * o.tolerance_scale), sci(1e-8 * o.tolerance_scale)),
        status: if ok { Status::Reported } else { Status::Fail },
    })
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    for _ in 0..200 {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    0.5 * (a + b)
}

/// Maximum over (θ̄, φ₀) by a coarse scan followed by alternating golden-section refinement.
fn maximize_2d(f: impl Fn(f64, f64) -> f64) -> f64 {
    let n = 97;
    let (mut bt, mut bp, mut best) = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..n {
        for j in 0..n {
            let t = -2.0 * PI + 4.0 * PI * i as f64 / (n - 1) as f64;
            let p = -PI + 2.0 * PI * j as f64 / (n - 1) as f64;
            let v = f(t, p);
            if v > best {
                (bt, bp, best) = (t, p, v);
            }
        }
    }
    let mut h = 4.0 * PI / (n - 1) as f64;
    for _ in 0..40 {
        bt = golden_max(|t| f(t, bp), bt - h, bt + h);
        bp = golden_max(|p| f(bt, p), bp - h, bp + h);
        h *= 0.7;
    }
    f(bt, bp)
}

fn signal_to_noise(o: &VerifyOptions) -> Result<Check> {
    let tol = 1e-4 * o.tolerance_scale;
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (nu0, u) in [(100.0, 0.1), (25.0, 0.05)] {
        let signal = maximize_2d(|t, p| coherent_arc(u, nu0, 0.0, t, 0.0, p).dnu1);
        let noise = vacuum_spontaneous(u, golden_max(|t| vacuum_spontaneous(u, t), -1.0, 1.0));
        let ratio = signal / noise;
        let expect = 4.0 * nu0.sqrt() / u;
        worst = worst.max(((ratio - expect) / expect).abs());
        parts.push(format!("{ratio:.6}"));
    }
    Ok(Check::gate(
        12,
        name_of(12),
        "4 sqrt(nu0)/U = 400, 400",
        format!("{} (max signal / max floor)", parts.join(", ")),
        format!("{} rel", sci(tol)),
        worst <= tol,
    ))
}

/// Gated engine quantities for the grid comparison.
fn grid_sample(grid: GridSpec, exec: Execution) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let cases: [(DimensionlessParams, PhotonSpec); 7] = [
        (params(0.02, 1.0, 0.1, 0.3, 0.2), PhotonSpec::Fock(5)),
        (params(0.02, 2.6, 0.0, PI / 3.0, 0.1), PhotonSpec::Coherent(100.0)),
        (params(0.005, 1.0, 0.0, 0.0, 3.0), PhotonSpec::Coherent(4.0)),
        (params(0.01, 2.6, 0.1, 0.3, 1.0), PhotonSpec::Fock(16)),
        (params(0.05, 1.0, 0.1, 0.0, 1.0), PhotonSpec::Vacuum),
        (params(0.01, 0.0, 0.1, 0.3, 4.0), PhotonSpec::Coherent(4.0)),
        (
            DimensionlessParams {
                squeeze: 1.0,
                ..params(0.01, 1.0, 0.1, 0.2, 1.0)
            },
            PhotonSpec::Squeezed {
                nu0: 0.0,
                squeeze: 1.0,
                ordering: Ordering::SqueezeDisplace,
            },
        ),
    ];
    for (p, photon) in cases {
        let r = engine(&p, photon, grid, exec)?;
        out.extend([r.orders.dnu1, r.orders.dnu2, r.orders.de1, r.orders.de2, r.orders.cross_e, r.arc_r2]);
    }
    for chirp in [0.0, 5.0] {
        let e = gaussian_wavepacket(0.5, chirp, grid.grid_for(0.5)?)?;
        out.push(e.recoil_overlap().norm());
    }
    Ok(out)
}

fn grid_robustness(o: &VerifyOptions) -> Result<Check> {
    let tol = 1e-10 * o.tolerance_scale;
    let coarse = grid_sample(GridSpec::default(), o.exec)?;
    let fine = grid_sample(GridSpec { m_align: 32, sigma_coverage: 12.0 }, o.exec)?;
    let worst = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(Check::gate(13, name_of(13), "unchanged", sci(worst), sci(tol), worst <= tol))
}

/// The golden row rendered as CSV.
pub fn smith_purcell_golden_line() -> Result<String> {
    let table = runner::smith_purcell(&RunConfig::default())?;
    let row = &table.rows[GOLDEN_ROW_INDEX];
    Ok(row.iter().map(|&x| format_float(x)).collect::<Vec<_>>().join(","))
}

fn smith_purcell(o: &VerifyOptions) -> Result<Check> {
    let tol = 1e-12 * o.tolerance_scale;
    let mut worst: f64 = 0.0;
    let mut exact = true;
    for (omega, l, beta, eta, theta, a_eff) in [
        (2.35e15, 3e-5, 0.3, 0.15, 1.7, 4e-12),
        (1.1e15, 1e-4, 0.5, 0.05, 0.0, 1e-11),
        (5.0e14, 2e-3, 0.1, 0.9, -4.2, 3e-10),
    ] {
        let direct = smith_purcell_density(omega, l, eta, theta);
        let v = smith_purcell_consistent_volume(l, beta, a_eff);
        let pipe = smith_purcell_pipeline(omega, l, beta, eta, theta, a_eff, v);
        worst = worst.max(((direct - pipe) / direct).abs());
        exact &= smith_purcell_density(omega, 2.0 * l, eta, theta) == 4.0 * direct;
        exact &= smith_purcell_density(omega, l, 2.0 * eta, theta) == 4.0 * direct;
    }
    let golden = smith_purcell_golden_line()?;
    let golden_ok = golden == GOLDEN_SMITH_PURCELL_ROW;
    Ok(Check::gate(
        14,
        name_of(14),
        "routes agree, exact scaling, golden row",
        format!("rel diff {}, scaling exact: {exact}, golden match: {golden_ok}", sci(worst)),
        sci(tol),
        worst <= tol && exact && golden_ok,
    ))
}

fn figure_bytes(exec: Execution) -> Result<String> {
    let cfg = RunConfig::parse("scenario.upsilon = 0.01\nphoton.nu0 = 4\nfig3a.steps = 12\nfig3b.sigma_steps = 6\nfig3b.drift_steps = 5\n")?;
    let lines = cfg.canonical_lines();
    Ok(runner::fig3a(&cfg, exec)?.render(&lines) + &runner::fig3b(&cfg)?.render(&lines))
}

fn determinism(o: &VerifyOptions) -> Result<Check> {
    let pass = |exec| {
        let opts = VerifyOptions { exec, ..*o };
        render(&(1..CHECK_COUNT).map(|id| run_check(id, &opts)).collect::<Vec<_>>())
    };
    let verify_same = pass(Execution::Sequential) == pass(Execution::Parallel);
    let figures_same = figure_bytes(Execution::Sequential)? == figure_bytes(Execution::Parallel)?;
    Ok(Check::gate(
        15,
        name_of(15),
        "byte-identical",
        format!("verify: {verify_same}, figures: {figures_same}"),
        "exact",
        verify_same && figures_same,
    ))
}
