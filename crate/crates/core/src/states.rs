//! Electron momentum-space wavepackets, photon Fock-basis states and their product.

use num_complex::Complex64;

use crate::error::{QewError, Result};
use crate::math::{ComplexSum, NeumaierSum};

/// Smallest admissible coverage of the wavepacket, in standard deviations.
pub const MIN_SIGMA_COVERAGE: f64 = 8.0;
/// Missing photon mass tolerated at construction.
pub const TAIL_BUDGET: f64 = 1e-12;
/// Missing photon mass beyond which construction fails.
pub const TAIL_HARD_LIMIT: f64 = 1e-10;
/// Largest squeeze magnitude accepted.
pub const MAX_SQUEEZE: f64 = 5.0;
const MAX_AUTO_NMAX: usize = 1 << 16;

/// Uniform momentum grid centred on p₀, in units of p_rec.
///
/// The recoil p_rec is exactly `m_align` grid steps, so recoil shifts are
/// index shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentumGrid {
    pub half_width: usize,
    pub m_align: usize,
}

impl MomentumGrid {
    pub fn new(half_width: usize, m_align: usize) -> Result<Self> {
        if m_align < 8 {
            return Err(QewError::validation("m_align", format!("{m_align} < 8")));
        }
        Ok(Self { half_width, m_align })
    }

    pub fn len(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.m_align as f64
    }

    /// Momentum offset p − p₀ of grid index `i`, in p_rec.
    pub fn offset(&self, i: usize) -> f64 {
        (i as f64 - self.half_width as f64) / self.m_align as f64
    }

    /// Distance from p₀ to the grid edge, in p_rec.
    pub fn extent(&self) -> f64 {
        self.half_width as f64 / self.m_align as f64
    }
}

/// Recipe for building a grid adapted to a given wavepacket spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub m_align: usize,
    pub sigma_coverage: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            m_align: 16,
            sigma_coverage: MIN_SIGMA_COVERAGE,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m_align < 8 {
            return Err(QewError::validation("grid.m_align", format!("{} < 8", self.m_align)));
        }
        if !(self.sigma_coverage >= MIN_SIGMA_COVERAGE) {
            return Err(QewError::validation(
                "grid.sigma_coverage",
                format!("{} < {MIN_SIGMA_COVERAGE}", self.sigma_coverage),
            ));
        }
        Ok(())
    }

    /// Grid covering `sigma_coverage·ρ + 2` p_rec on each side.
    pub fn grid_for(&self, rho: f64) -> Result<MomentumGrid> {
        self.validate()?;
        let width = (self.sigma_coverage * rho + 2.0) * self.m_align as f64;
        MomentumGrid::new(width.ceil() as usize, self.m_align)
    }
}

/// Normalized chirped Gaussian wavepacket sampled on a [`MomentumGrid`].
///
/// The √Δp measure is absorbed into the amplitudes: `Σ|c_k|² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectronAmplitudes {
    pub grid: MomentumGrid,
    pub amplitudes: Vec<Complex64>,
    /// σ_p0 / p_rec.
    pub rho: f64,
    pub chirp: f64,
}

impl ElectronAmplitudes {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect::<NeumaierSum>().value()
    }

    /// `Σ_k c*_k c_{k+shift}` over the grid.
    pub fn shifted_overlap(&self, shift: isize) -> Complex64 {
        let n = self.amplitudes.len() as isize;
        let mut acc = ComplexSum::new();
        for k in 0..n {
            let j = k + shift;
            if (0..n).contains(&j) {
                acc.add(self.amplitudes[k as usize].conj() * self.amplitudes[j as usize]);
            }
        }
        acc.value()
    }

    /// Overlap with the copy shifted by one recoil, `Σ c*_p c_{p+p_rec}`.
    pub fn recoil_overlap(&self) -> Complex64 {
        self.shifted_overlap(self.grid.m_align as isize)
    }
}

/// `c(p) ∝ exp(−(p−p₀)²/(4σ̃²))` with `σ̃² = σ_p0²/(1 + i c_D)`.
///
/// The global drift phase is omitted; it cancels in every observable.
pub fn gaussian_wavepacket(rho: f64, chirp: f64, grid: MomentumGrid) -> Result<ElectronAmplitudes> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(QewError::validation("rho", format!("{rho} must be positive")));
    }
    let required = MIN_SIGMA_COVERAGE * rho + 2.0;
    if grid.extent() < required {
        return Err(QewError::Coverage {
            have: grid.extent(),
            required,
        });
    }
    let coeff = Complex64::new(1.0, chirp) / (4.0 * rho * rho);
    let mut amplitudes: Vec<Complex64> =
        (0..grid.len()).map(|i| (-coeff * grid.offset(i).powi(2)).exp()).collect();
    let norm = amplitudes
        .iter()
        .map(|c| c.norm_sqr())
        .collect::<NeumaierSum>()
        .value()
        .sqrt();
    for c in &mut amplitudes {
        *c /= norm;
    }
    Ok(ElectronAmplitudes {
        grid,
        amplitudes,
        rho,
        chirp,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonKind {
    Fock,
    Coherent,
    Squeezed,
}

/// Operator ordering of a squeezed coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ordering {
    /// S(ξ)D(α)|0⟩
    #[default]
    SqueezeDisplace,
    /// D(α)S(ξ)|0⟩
    DisplaceSqueeze,
}

/// Inputs a photon state was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonRecord {
    pub nu0: f64,
    pub squeeze: f64,
    pub ordering: Ordering,
}

/// Photon amplitudes `c_ν` for ν = 0..=N_max.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonAmplitudes {
    pub amplitudes: Vec<Complex64>,
    pub kind: PhotonKind,
    pub record: PhotonRecord,
    /// 1 − Σ|c_ν|², the mass beyond N_max.
    pub tail_mass: f64,
}

impl PhotonAmplitudes {
    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect::<NeumaierSum>().value()
    }

    pub fn is_vacuum(&self) -> bool {
        self.amplitudes.iter().skip(1).all(|c| *c == Complex64::new(0.0, 0.0))
    }
}

/// Number state |ν₀⟩.
pub fn fock_state(nu0: usize, n_max: usize) -> Result<PhotonAmplitudes> {
    if nu0 > n_max {
        return Err(QewError::Truncation(format!("Fock number {nu0} exceeds N_max = {n_max}")));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_max + 1];
    amplitudes[nu0] = Complex64::new(1.0, 0.0);
    Ok(PhotonAmplitudes {
        amplitudes,
        kind: PhotonKind::Fock,
        record: PhotonRecord {
            nu0: nu0 as f64,
            squeeze: 0.0,
            ordering: Ordering::default(),
        },
        tail_mass: 0.0,
    })
}

/// Ladder length the coherent-state tail budget asks for.
pub fn coherent_required_nmax(nu0: f64) -> usize {
    (nu0 + 12.0 * (nu0 + 1.0).sqrt() + 20.0).ceil() as usize
}

/// Coherent state |α⟩ with real α = √ν₀.
pub fn coherent_state(nu0: f64, n_max: usize) -> Result<PhotonAmplitudes> {
    if !(nu0 >= 0.0 && nu0.is_finite()) {
        return Err(QewError::validation("nu0", format!("{nu0} must be >= 0")));
    }
    let required = coherent_required_nmax(nu0);
    if n_max < required {
        return Err(QewError::Truncation(format!(
            "coherent state with nu0 = {nu0} needs N_max >= {required}, got {n_max}"
        )));
    }
    let amplitudes: Vec<Complex64> = if nu0 == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); n_max + 1];
        v[0] = Complex64::new(1.0, 0.0);
        v
    } else {
        // ln c_ν = −ν₀/2 + (ν/2) ln ν₀ − ln(ν!)/2
        let ln_nu0 = nu0.ln();
        let mut ln_fact = 0.0;
        (0..=n_max)
            .map(|nu| {
                if nu > 0 {
                    ln_fact += (nu as f64).ln();
                }
                Complex64::new((-0.5 * nu0 + 0.5 * nu as f64 * ln_nu0 - 0.5 * ln_fact).exp(), 0.0)
            })
            .collect()
    };
    finish_photon(
        amplitudes,
        PhotonKind::Coherent,
        PhotonRecord {
            nu0,
            squeeze: 0.0,
            ordering: Ordering::default(),
        },
    )
}

/// Squeezed coherent state with real displacement α = √ν₀ and real squeeze ξ.
///
/// Amplitudes come from the eigen-relation
/// `(a cosh r + a† e^{iθ} sinh r)|ψ⟩ = β|ψ⟩` solved as a two-term recurrence in ν,
/// with the analytic vacuum amplitude fixing the scale.
pub fn squeezed_coherent_state(
    nu0: f64,
    squeeze: f64,
    ordering: Ordering,
    n_max: usize,
) -> Result<PhotonAmplitudes> {
    if !(nu0 >= 0.0 && nu0.is_finite()) {
        return Err(QewError::validation("nu0", format!("{nu0} must be >= 0")));
    }
    if !squeeze.is_finite() || squeeze.abs() > MAX_SQUEEZE {
        return Err(QewError::validation(
            "squeeze",
            format!("|{squeeze}| > {MAX_SQUEEZE}: Fock truncation impractical"),
        ));
    }
    let r = squeeze.abs();
    let phase = if squeeze < 0.0 { -1.0 } else { 1.0 }; // e^{iθ}
    let (ch, sh, th) = (r.cosh(), r.sinh(), r.tanh());
    let alpha = nu0.sqrt();
    let (eigen, ln_vacuum) = match ordering {
        Ordering::SqueezeDisplace => (alpha, -0.5 * nu0 + 0.5 * phase * th * nu0 - 0.5 * ch.ln()),
        Ordering::DisplaceSqueeze => (
            alpha * ch + alpha * phase * sh,
            -0.5 * nu0 - 0.5 * phase * th * nu0 - 0.5 * ch.ln(),
        ),
    };

    // u_ν carries a shared scale e^{ln_scale}; ψ_ν = u_ν e^{ln_scale + ln ψ₀}.
    let mut u = vec![0.0f64; n_max + 1];
    u[0] = 1.0;
    let mut ln_scale = 0.0;
    for nu in 0..n_max {
        let prev = if nu > 0 { u[nu - 1] } else { 0.0 };
        u[nu + 1] = (eigen * u[nu] - phase * sh * (nu as f64).sqrt() * prev) / (ch * ((nu + 1) as f64).sqrt());
        if u[nu + 1].abs() > 1e150 {
            for v in &mut u[..=nu + 1] {
                *v *= 1e-150;
            }
            ln_scale += 150.0 * std::f64::consts::LN_10;
        }
    }
    let amplitudes = u
        .iter()
        .map(|&v| {
            if v == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(v.signum() * (v.abs().ln() + ln_scale + ln_vacuum).exp(), 0.0)
            }
        })
        .collect();
    finish_photon(
        amplitudes,
        PhotonKind::Squeezed,
        PhotonRecord {
            nu0,
            squeeze,
            ordering,
        },
    )
}

fn finish_photon(
    amplitudes: Vec<Complex64>,
    kind: PhotonKind,
    record: PhotonRecord,
) -> Result<PhotonAmplitudes> {
    let mass = amplitudes.iter().map(|c| c.norm_sqr()).collect::<NeumaierSum>().value();
    let tail_mass = (1.0 - mass).max(0.0);
    if tail_mass > TAIL_HARD_LIMIT {
        return Err(QewError::Truncation(format!(
            "missing photon mass {tail_mass:.3e} exceeds {TAIL_HARD_LIMIT:e} at N_max = {}",
            amplitudes.len() - 1
        )));
    }
    if tail_mass > TAIL_BUDGET {
        log::warn!("photon tail mass {tail_mass:.3e} above construction budget {TAIL_BUDGET:e}");
    }
    Ok(PhotonAmplitudes {
        amplitudes,
        kind,
        record,
        tail_mass,
    })
}

/// Description of a photon state from which a truncated ladder is chosen automatically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhotonSpec {
    Vacuum,
    Fock(usize),
    Coherent(f64),
    Squeezed {
        nu0: f64,
        squeeze: f64,
        ordering: Ordering,
    },
}

impl PhotonSpec {
    /// Builds the state, growing N_max until the tail is within [`TAIL_BUDGET`].
    pub fn build(&self) -> Result<PhotonAmplitudes> {
        match *self {
            PhotonSpec::Vacuum => fock_state(0, 0),
            PhotonSpec::Fock(n) => fock_state(n, n),
            PhotonSpec::Coherent(nu0) => coherent_state(nu0, coherent_required_nmax(nu0)),
            PhotonSpec::Squeezed {
                nu0,
                squeeze,
                ordering,
            } => {
                let spread = (2.0 * squeeze.abs()).exp();
                let mut n_max = coherent_required_nmax(nu0 * spread + squeeze.sinh().powi(2)).max(16);
                loop {
                    match squeezed_coherent_state(nu0, squeeze, ordering, n_max) {
                        Ok(state) if state.tail_mass <= TAIL_BUDGET => return Ok(state),
                        Ok(_) | Err(QewError::Truncation(_)) if n_max < MAX_AUTO_NMAX => n_max *= 2,
                        Ok(state) => {
                            return Err(QewError::Truncation(format!(
                                "tail mass {:.3e} at the largest ladder {n_max}",
                                state.tail_mass
                            )))
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }

    pub fn nu0(&self) -> f64 {
        match *self {
            PhotonSpec::Vacuum => 0.0,
            PhotonSpec::Fock(n) => n as f64,
            PhotonSpec::Coherent(nu0) => nu0,
            PhotonSpec::Squeezed { nu0, .. } => nu0,
        }
    }
}

/// Ladder-operator expectation values by direct Fock summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonExpectations {
    pub a: Complex64,
    pub a_dagger: Complex64,
    pub number: f64,
    pub anti_normal: f64,
    /// ⟨aa†⟩ − ⟨a†a⟩ − 1; zero up to the truncated tail.
    pub commutator_residual: f64,
}

pub fn photon_expectations(state: &PhotonAmplitudes) -> PhotonExpectations {
    let c = &state.amplitudes;
    let mut a = ComplexSum::new();
    let mut number = NeumaierSum::new();
    let mut anti = NeumaierSum::new();
    for (nu, amp) in c.iter().enumerate() {
        let p = amp.norm_sqr();
        number.add(nu as f64 * p);
        anti.add((nu + 1) as f64 * p);
        if let Some(next) = c.get(nu + 1) {
            a.add(amp.conj() * next * ((nu + 1) as f64).sqrt());
        }
    }
    let a = a.value();
    let number = number.value();
    let anti_normal = anti.value();
    PhotonExpectations {
        a,
        a_dagger: a.conj(),
        number,
        anti_normal,
        commutator_residual: anti_normal - number - 1.0,
    }
}

/// Measured field and number moments of a squeezed state beside the values
/// `⟨a⟩ = √ν₀`, `⟨a†a⟩ = ν₀ + sinh²|ξ|` often quoted for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedMoments {
    pub measured_a: Complex64,
    pub quoted_a: f64,
    pub measured_number: f64,
    pub quoted_number: f64,
}

impl SqueezedMoments {
    pub fn field_discrepancy(&self) -> f64 {
        (self.measured_a - self.quoted_a).norm()
    }

    pub fn number_discrepancy(&self) -> f64 {
        self.measured_number - self.quoted_number
    }
}

pub fn squeezed_moments(state: &PhotonAmplitudes) -> SqueezedMoments {
    let e = photon_expectations(state);
    SqueezedMoments {
        measured_a: e.a,
        quoted_a: state.record.nu0.sqrt(),
        measured_number: e.number,
        quoted_number: state.record.nu0 + state.record.squeeze.sinh().powi(2),
    }
}

/// Product state `c_{p,ν} = c_p c_ν`, stored row-major with one row per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub grid: MomentumGrid,
    /// Number of photon levels (N_max + 1).
    pub photon_levels: usize,
    pub amplitudes: Vec<Complex64>,
    pub photon_kind: PhotonKind,
}

impl JointState {
    #[inline]
    pub fn at(&self, row: usize, nu: usize) -> Complex64 {
        self.amplitudes[row * self.photon_levels + nu]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.amplitudes[row * self.photon_levels..(row + 1) * self.photon_levels]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect::<NeumaierSum>().value()
    }

    /// Σ_ν |c_{p,ν}|² per grid point.
    pub fn momentum_marginal(&self) -> Vec<f64> {
        (0..self.grid.len())
            .map(|k| self.row(k).iter().map(|c| c.norm_sqr()).collect::<NeumaierSum>().value())
            .collect()
    }

    /// Σ_p |c_{p,ν}|² per photon number.
    pub fn photon_marginal(&self) -> Vec<f64> {
        (0..self.photon_levels)
            .map(|nu| {
                (0..self.grid.len())
                    .map(|k| self.at(k, nu).norm_sqr())
                    .collect::<NeumaierSum>()
                    .value()
            })
            .collect()
    }
}

pub fn joint_state(electron: &ElectronAmplitudes, photon: &PhotonAmplitudes) -> JointState {
    let amplitudes = electron
        .amplitudes
        .iter()
        .flat_map(|ce| photon.amplitudes.iter().map(move |cp| ce * cp))
        .collect();
    JointState {
        grid: electron.grid,
        photon_levels: photon.amplitudes.len(),
        amplitudes,
        photon_kind: photon.kind,
    }
}
