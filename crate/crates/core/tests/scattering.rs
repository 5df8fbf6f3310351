use qew_core::math::{sinc, sinc2_half};
use qew_core::oracles::{coherent_arc, fock_arc, squeezed_arc, vacuum_spontaneous};
use qew_core::params::DimensionlessParams;
use qew_core::scattering::{
    electron_spectrum, interact, prepare_joint, scatter_first_order, Dispersion, InteractionReport,
};
use qew_core::states::{GridSpec, Ordering, PhotonSpec};
use qew_core::{Execution, QewError};

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

fn run(p: &DimensionlessParams, photon: PhotonSpec) -> InteractionReport {
    let joint = prepare_joint(p, &photon, GridSpec::default()).unwrap();
    interact(&joint, p, Dispersion::Linear, Execution::default()).unwrap().1
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn zero_coupling_is_inert() {
    let p = params(0.0, 1.0, 0.1, 0.3, 1.0);
    let r = run(&p, PhotonSpec::Coherent(4.0));
    assert_eq!(r.orders.dnu1, 0.0);
    assert_eq!(r.orders.dnu2, 0.0);
    assert_eq!(r.orders.de1, 0.0);
    assert_eq!(r.direct.dnu, 0.0);
}

#[test]
fn vacuum_has_no_absorption_channel() {
    let p = params(0.05, 0.7, 0.2, 0.0, 0.8);
    let joint = prepare_joint(&p, &PhotonSpec::Vacuum, GridSpec::default()).unwrap();
    let s = scatter_first_order(&joint, &p, Execution::default()).unwrap();
    assert!(s.absorption_is_zero());
    let r = interact(&joint, &p, Dispersion::Linear, Execution::default()).unwrap().1;
    assert_eq!(r.orders.dnu1, 0.0);
    assert!(rel(r.orders.dnu2, vacuum_spontaneous(0.05, 0.8)) < 1e-10);
}

#[test]
fn fock_matches_oracle() {
    for nu0 in [1usize, 5, 30] {
        let p = params(0.02, 1.3, 0.15, 0.4, 0.9);
        let r = run(&p, PhotonSpec::Fock(nu0));
        let o = fock_arc(0.02, nu0 as f64, 1.3, 0.15);
        assert_eq!(r.orders.dnu1, 0.0, "nu0 = {nu0}");
        assert!(r.orders.de1.abs() < 1e-15);
        assert!(rel(r.orders.dnu2, o.dnu2) < 1e-10, "{} {}", r.orders.dnu2, o.dnu2);
        assert!(r.orders.cross_nu.abs() < 1e-18);
    }
}

#[test]
fn coherent_first_order_matches_oracle() {
    for (gamma0, theta, phi0) in [(1.0, 0.0, 0.0), (0.6, 1.7, 0.5), (2.0, -0.8, 2.0)] {
        let p = params(0.01, theta, 0.0, phi0, gamma0);
        let r = run(&p, PhotonSpec::Coherent(100.0));
        let o = coherent_arc(0.01, 100.0, 1.0 / (2.0 * p.rho()), theta, 0.0, phi0);
        assert!(rel(r.orders.dnu1, o.dnu1) < 1e-6, "{} {}", r.orders.dnu1, o.dnu1);
        if o.dnu1.abs() > 1e-6 && phi0 == 0.5 {
            let ratio = -r.orders.de1 / r.orders.dnu1;
            assert!((ratio - 0.5).abs() < 1e-6, "{ratio}");
        }
    }
}

#[test]
fn coherent_second_order_matches_oracle() {
    let p = params(0.02, 0.9, 0.3, 0.0, 1.0);
    let r = run(&p, PhotonSpec::Coherent(9.0));
    let n = 9.0;
    let expected = 0.02f64.powi(2) * ((n + 1.0) * sinc2_half(1.05) - n * sinc2_half(0.75));
    assert!(rel(r.orders.dnu2, expected) < 1e-8, "{} {expected}", r.orders.dnu2);
    assert!(r.arc_r2.abs() < 1e-14);
}

#[test]
fn phase_flip_negates_first_order() {
    let a = run(&params(0.01, 0.6, 0.0, 0.3, 1.0), PhotonSpec::Coherent(16.0));
    let b = run(&params(0.01, 0.6, 0.0, 0.3 + std::f64::consts::PI, 1.0), PhotonSpec::Coherent(16.0));
    assert!((a.orders.dnu1 + b.orders.dnu1).abs() < 1e-12 * a.orders.dnu1.abs());
    assert!(rel(a.orders.dnu2, b.orders.dnu2) < 1e-12);
}

#[test]
fn extinction_follows_gamma() {
    let base = params(0.01, 0.0, 0.0, 0.0, 1.0);
    let mut chirped = base.clone();
    chirped.gamma0 = 0.4;
    chirped.chirp = 1.5;
    for p in [base, chirped] {
        let r = run(&p, PhotonSpec::Coherent(4.0));
        let g = p.gamma();
        let expected = 4.0 * 0.01 * 2.0 * (-0.5 * g * g).exp();
        assert!(rel(r.orders.dnu1, expected) < 1e-8, "{} {expected}", r.orders.dnu1);
    }
}

#[test]
fn second_order_independent_of_gamma_and_phase() {
    let a = run(&params(0.02, 1.1, 0.2, 0.0, 0.5), PhotonSpec::Coherent(4.0));
    let b = run(&params(0.02, 1.1, 0.2, 1.3, 2.5), PhotonSpec::Coherent(4.0));
    assert!(rel(a.orders.dnu2, b.orders.dnu2) < 1e-9);
}

#[test]
fn squeezed_displace_squeeze_matches_oracle() {
    let (u, nu0, r_sq) = (0.01, 4.0, 0.5);
    let p = params(u, 1.0, 0.2, 0.3, 1.0);
    let spec = PhotonSpec::Squeezed {
        nu0,
        squeeze: r_sq,
        ordering: Ordering::DisplaceSqueeze,
    };
    let r = run(&p, spec);
    let o = squeezed_arc(u, nu0, r_sq, p.gamma(), 1.0, 0.2, 0.3);
    assert!(rel(r.orders.dnu2, o.dnu2) < 1e-8, "{} {}", r.orders.dnu2, o.dnu2);
}

#[test]
fn mean_shift_tracks_energy_change() {
    let p = params(0.01, 0.4, 0.1, 0.2, 0.7);
    let joint = prepare_joint(&p, &PhotonSpec::Coherent(4.0), GridSpec::default()).unwrap();
    let (s, r) = interact(&joint, &p, Dispersion::Linear, Execution::default()).unwrap();
    let spec = electron_spectrum(&joint, &s, Execution::default()).unwrap();
    assert!((spec.mean_shift - r.direct.de).abs() < 1e-14);
}

#[test]
fn vacuum_sidebands_for_narrow_packet() {
    let p = params(0.05, 0.0, 0.0, 0.0, 8.0);
    let r = run(&p, PhotonSpec::Vacuum);
    let u2 = 0.05f64.powi(2);
    assert!(rel(r.sideband_lower, u2) < 1e-3, "{}", r.sideband_lower);
    assert!(r.sideband_upper < 1e-12);
    assert!(r.sideband_central > 0.99);
}

#[test]
fn decomposition_residue() {
    // vacuum: within the perturbative budget
    let u = 0.02;
    let r = run(&params(u, 0.5, 0.1, 0.0, 1.0), PhotonSpec::Vacuum);
    assert!(r.decomposition_residue.abs() <= 10.0 * u.powi(3));
    // number state: the residue is the norm growth ν₀·Σ|scattered|²
    let nu0 = 6.0;
    let (theta, eps) = (0.5, 0.1);
    let r = run(&params(u, theta, eps, 0.0, 1.0), PhotonSpec::Fock(6));
    let se = sinc(0.5 * (theta + 0.5 * eps)).powi(2);
    let sa = sinc(0.5 * (theta - 0.5 * eps)).powi(2);
    let expected = u * u * nu0 * ((nu0 + 1.0) * se + nu0 * sa);
    assert!(rel(r.decomposition_residue, expected) < 1e-9, "{} {expected}", r.decomposition_residue);
}

#[test]
fn sequential_and_parallel_agree_bitwise() {
    let p = params(0.01, 0.8, 0.1, 0.2, 0.5);
    let joint = prepare_joint(&p, &PhotonSpec::Coherent(25.0), GridSpec::default()).unwrap();
    let a = interact(&joint, &p, Dispersion::Linear, Execution::Sequential).unwrap();
    let b = interact(&joint, &p, Dispersion::Linear, Execution::Parallel).unwrap();
    assert_eq!(a.1, b.1);
    assert_eq!(a.0.emission, b.0.emission);
}

#[test]
fn grid_refinement_is_stable() {
    let p = params(0.01, 0.8, 0.0, 0.2, 1.0);
    let photon = PhotonSpec::Coherent(9.0);
    let coarse = {
        let j = prepare_joint(&p, &photon, GridSpec { m_align: 16, sigma_coverage: 8.0 }).unwrap();
        interact(&j, &p, Dispersion::Linear, Execution::default()).unwrap().1
    };
    let fine = {
        let j = prepare_joint(&p, &photon, GridSpec { m_align: 32, sigma_coverage: 10.0 }).unwrap();
        interact(&j, &p, Dispersion::Linear, Execution::default()).unwrap().1
    };
    assert!((coarse.orders.dnu1 - fine.orders.dnu1).abs() < 1e-10);
    assert!((coarse.orders.dnu2 - fine.orders.dnu2).abs() < 1e-10);
}

#[test]
fn quadratic_dispersion_requires_momentum() {
    let p = params(0.01, 0.0, 0.0, 0.0, 1.0);
    let joint = prepare_joint(&p, &PhotonSpec::Vacuum, GridSpec::default()).unwrap();
    let e = interact(&joint, &p, Dispersion::Quadratic, Execution::default()).unwrap_err();
    assert!(matches!(e, QewError::Config(_)));
    let mut q = p.clone();
    q.p0_over_prec = Some(1.0e4);
    assert!(interact(&joint, &q, Dispersion::Quadratic, Execution::default()).is_ok());
}

#[test]
fn strong_coupling_is_rejected() {
    let p = params(0.2, 0.0, 0.0, 0.0, 1.0);
    let joint = prepare_joint(&p, &PhotonSpec::Coherent(25.0), GridSpec::default()).unwrap();
    let e = interact(&joint, &p, Dispersion::Linear, Execution::default()).unwrap_err();
    assert_eq!(e.exit_code(), 3);
}
