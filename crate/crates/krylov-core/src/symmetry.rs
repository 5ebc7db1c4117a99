//! Closed-form chain structures with su(2) and su(1,1) symmetry: ladder
//! generators, coherent-state amplitudes, analytic complexity curves, and
//! angle reconstruction (tomography) from amplitudes.
//!
//! # Conventions
//!
//! The chain basis `|n⟩`, `n = 0..2ℓ` (su(2)) or `n ≥ 0` truncated (su(1,1)),
//! diagonalizes the site-number operator. Ladder coefficients are
//!
//! * su(2): `b_n = √((n+1)(2ℓ−n))`, so `S_z = diag(n − ℓ)` and
//!   `S_x = (S⁺+S⁻)/2` satisfy `[S_x, S_y] = iS_z` and cyclic;
//! * su(1,1): `c_n = √((n+1)(2k+n))` with `K⁺|n⟩ = c_n|n+1⟩`.
//!
//! Two normalizations of the chain flow appear side by side and differ by an
//! exact factor of two:
//!
//! * the **hopping form** ([`su2_hopping`], [`su11_hopping`]),
//!   `B(S⁺+S⁻)` — the tridiagonal matrix whose Lanczos hops are exactly
//!   `β_m = B·√(m(2ℓ−m+1))`;
//! * the **rotation generator** ([`su2_generator`], [`su11_generator`]),
//!   `B·S_x = B(S⁺+S⁻)/2` — the flow under which the lowest state traces the
//!   coherent orbit at angular rate `B` (`θ(t) = Bt`), giving
//!   `C_K = ℓ(1−cos Bt)` resp. `k(cosh Bt − 1)`.
//!
//! Pick by identity needed: hop values → hopping form; complexity curves and
//! angles → generator.

use std::f64::consts::{FRAC_PI_2, PI};

use statrs::function::gamma::ln_gamma;

use crate::error::{KrylovError, Result};
use crate::lanczos::AmplitudeVector;
use crate::opspace::{C64, CMatrix};

/// Tolerance for "2ℓ must be an integer" checks on half-integer spins.
const HALF_INTEGER_TOL: f64 = 1e-9;

/// Maximum admitted coherent-state tail mass outside a truncated su(1,1)
/// ladder; more than this is a truncation error.
pub const SU11_TAIL_TOL: f64 = 1e-12;

/// Coherence tolerance of tomography: `|⟨S⟩|` must match `ℓ` this closely
/// (scaled by `max(1, ℓ)`) for angle reconstruction to be meaningful.
pub const COHERENCE_TOL: f64 = 1e-6;

/// Folds an angle into `[−π, π)`.
pub(crate) fn fold_angle(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

/// Spin-ℓ chain parameters: half-integer `ℓ > 0` and field strength `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2Params {
    ell: f64,
    b: f64,
}

impl SU2Params {
    /// Validates that `2ℓ` is a positive integer and `B` is finite.
    pub fn new(ell: f64, b: f64) -> Result<Self> {
        if !ell.is_finite() || ell <= 0.0 {
            return Err(KrylovError::InvalidInput(format!(
                "ell must be positive and finite, got {ell}"
            )));
        }
        let two_ell = 2.0 * ell;
        if (two_ell - two_ell.round()).abs() > HALF_INTEGER_TOL || two_ell.round() < 1.0 {
            return Err(KrylovError::InvalidInput(format!(
                "ell must be a positive half-integer (2*ell integral), got {ell}"
            )));
        }
        if !b.is_finite() {
            return Err(KrylovError::InvalidInput(format!(
                "field strength B must be finite, got {b}"
            )));
        }
        Ok(Self { ell, b })
    }

    /// The spin `ℓ`.
    pub fn ell(&self) -> f64 {
        self.ell
    }

    /// The field strength `B`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// `2ℓ` as an integer.
    pub fn two_ell(&self) -> usize {
        (2.0 * self.ell).round() as usize
    }

    /// Chain dimension `2ℓ + 1`.
    pub fn dim(&self) -> usize {
        self.two_ell() + 1
    }
}

/// su(1,1) chain parameters: Bargmann index `k > 0`, field strength `B`, and
/// the truncation `n_max` (largest retained site index).
///
/// The truncation is split into a **core window** `0..=n_core` sized so the
/// coherent orbit at the design time carries all but `≤ 1e-12` of its weight
/// inside it, and an equally large safety margin above; traces report the
/// weight found in the margin as leakage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU11Params {
    k: f64,
    b: f64,
    n_max: usize,
    n_core: usize,
}

impl SU11Params {
    /// Chooses the truncation adaptively for evolutions up to `t_max`:
    /// `n_core` is the smallest index capturing weight `≥ 1 − 1e-12` of the
    /// coherent state at `θ = |B|·t_max`, and `n_max = 2·n_core` (at least 16).
    pub fn new(k: f64, b: f64, t_max: f64) -> Result<Self> {
        Self::validate_kb(k, b)?;
        if !t_max.is_finite() || t_max < 0.0 {
            return Err(KrylovError::InvalidInput(format!(
                "t_max must be nonnegative and finite, got {t_max}"
            )));
        }
        let theta = (b * t_max).abs();
        // weight recurrence w_{n+1}/w_n = tanh^2(θ/2)·(2k+n)/(n+1)
        let t2 = (theta / 2.0).tanh().powi(2);
        let mut w = (theta / 2.0).cosh().powf(-4.0 * k);
        let mut cum = w;
        let mut n_core = 0usize;
        while cum < 1.0 - SU11_TAIL_TOL {
            w *= t2 * (2.0 * k + n_core as f64) / (n_core as f64 + 1.0);
            cum += w;
            n_core += 1;
            if n_core > 20_000_000 {
                return Err(KrylovError::Truncation(format!(
                    "cannot bound the coherent tail for k = {k}, theta = {theta}: \
                     required ladder exceeds 2e7 sites"
                )));
            }
        }
        let n_max = (2 * n_core).max(16);
        Ok(Self {
            k,
            b,
            n_max,
            n_core: n_max / 2,
        })
    }

    /// Uses an explicit truncation; the core window is set to `n_max / 2`.
    pub fn with_n_max(k: f64, b: f64, n_max: usize) -> Result<Self> {
        Self::validate_kb(k, b)?;
        if n_max < 2 {
            return Err(KrylovError::InvalidInput(format!(
                "n_max must be at least 2, got {n_max}"
            )));
        }
        Ok(Self {
            k,
            b,
            n_max,
            n_core: n_max / 2,
        })
    }

    fn validate_kb(k: f64, b: f64) -> Result<()> {
        if !k.is_finite() || k <= 0.0 {
            return Err(KrylovError::InvalidInput(format!(
                "Bargmann index k must be positive and finite, got {k}"
            )));
        }
        if !b.is_finite() {
            return Err(KrylovError::InvalidInput(format!(
                "field strength B must be finite, got {b}"
            )));
        }
        Ok(())
    }

    /// The Bargmann index `k`.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// The field strength `B`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Largest retained site index.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Top of the core window; weight above it counts as leakage.
    pub fn n_core(&self) -> usize {
        self.n_core
    }

    /// Truncated chain dimension `n_max + 1`.
    pub fn dim(&self) -> usize {
        self.n_max + 1
    }
}

/// Parameters of either symmetry class, for operations that treat the two
/// uniformly (analytic curves, traces).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupParams {
    Su2(SU2Params),
    Su11(SU11Params),
}

/// Euler angles `(θ, ψ, φ)` of the coherent manifolds: `θ ≥ 0` (further
/// capped at `π` by su(2) consumers), `ψ` and `φ` folded into `[−π, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    theta: f64,
    psi: f64,
    varphi: f64,
}

impl EulerAngles {
    /// Validates `θ ≥ 0` and folds the phases into `[−π, π)`.
    pub fn new(theta: f64, psi: f64, varphi: f64) -> Result<Self> {
        if !(theta.is_finite() && psi.is_finite() && varphi.is_finite()) {
            return Err(KrylovError::InvalidInput(
                "Euler angles must be finite".into(),
            ));
        }
        if theta < 0.0 {
            return Err(KrylovError::InvalidInput(format!(
                "theta must be nonnegative, got {theta}"
            )));
        }
        Ok(Self {
            theta,
            psi: fold_angle(psi),
            varphi: fold_angle(varphi),
        })
    }

    /// Polar angle `θ`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Azimuthal phase `ψ ∈ [−π, π)`.
    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// Residual phase `φ ∈ [−π, π)`.
    pub fn varphi(&self) -> f64 {
        self.varphi
    }
}

/// The three Hermitian spin generators in the `2ℓ+1`-dimensional chain basis.
#[derive(Debug, Clone)]
pub struct Su2Generators {
    /// `S_x = (S⁺ + S⁻)/2`.
    pub sx: CMatrix,
    /// `S_y = (S⁺ − S⁻)/(2i)`.
    pub sy: CMatrix,
    /// `S_z = diag(n − ℓ)`.
    pub sz: CMatrix,
}

/// su(2) ladder coefficient `b_n = √((n+1)(2ℓ−n))`.
fn su2_ladder(n: usize, two_ell: usize) -> f64 {
    ((n as f64 + 1.0) * (two_ell as f64 - n as f64)).sqrt()
}

/// su(1,1) ladder coefficient `c_n = √((n+1)(2k+n))`.
fn su11_ladder(n: usize, k: f64) -> f64 {
    ((n as f64 + 1.0) * (2.0 * k + n as f64)).sqrt()
}

/// Builds `S_x, S_y, S_z` for spin `ℓ` (independent of `B`).
pub fn su2_generators(p: &SU2Params) -> Su2Generators {
    let dim = p.dim();
    let two_ell = p.two_ell();
    let mut sx = CMatrix::zeros(dim, dim);
    let mut sy = CMatrix::zeros(dim, dim);
    let mut sz = CMatrix::zeros(dim, dim);
    for n in 0..dim {
        sz[(n, n)] = C64::new(n as f64 - p.ell(), 0.0);
    }
    for n in 0..two_ell {
        let b = su2_ladder(n, two_ell);
        sx[(n + 1, n)] = C64::new(b / 2.0, 0.0);
        sx[(n, n + 1)] = C64::new(b / 2.0, 0.0);
        sy[(n + 1, n)] = C64::new(0.0, -b / 2.0);
        sy[(n, n + 1)] = C64::new(0.0, b / 2.0);
    }
    Su2Generators { sx, sy, sz }
}

/// The hopping form of the spin-ℓ chain flow, `B(S⁺+S⁻)`: tridiagonal with
/// off-diagonal entries `B·b_n`. Its Lanczos hops from the lowest site are
/// exactly `β_m = B·√(m(2ℓ−m+1))`.
pub fn su2_hopping(p: &SU2Params) -> CMatrix {
    let dim = p.dim();
    let two_ell = p.two_ell();
    let mut m = CMatrix::zeros(dim, dim);
    for n in 0..two_ell {
        let b = p.b() * su2_ladder(n, two_ell);
        m[(n + 1, n)] = C64::new(b, 0.0);
        m[(n, n + 1)] = C64::new(b, 0.0);
    }
    m
}

/// The rotation generator `B·S_x` (half the hopping form): evolving the
/// lowest site under `e^{+iB S_x t}` traces the coherent orbit `θ(t) = Bt`.
pub fn su2_generator(p: &SU2Params) -> CMatrix {
    su2_hopping(p).map(|z| z * 0.5)
}

/// The hopping form of the truncated su(1,1) ladder, `B(K⁺+K⁻)`, with
/// off-diagonal entries `B·√((n+1)(2k+n))` up to `n_max`.
pub fn su11_hopping(p: &SU11Params) -> CMatrix {
    let dim = p.dim();
    let mut m = CMatrix::zeros(dim, dim);
    for n in 0..p.n_max() {
        let c = p.b() * su11_ladder(n, p.k());
        m[(n + 1, n)] = C64::new(c, 0.0);
        m[(n, n + 1)] = C64::new(c, 0.0);
    }
    m
}

/// The su(1,1) evolution generator `B(K⁺+K⁻)/2`, under which the lowest site
/// follows the hyperbolic coherent orbit `θ(t) = Bt`.
pub fn su11_generator(p: &SU11Params) -> CMatrix {
    su11_hopping(p).map(|z| z * 0.5)
}

/// Binomial coefficient over f64, by multiplicative recurrence; exact to
/// rounding for the chain sizes in play.
fn binomial(n: usize, kk: usize) -> f64 {
    let k = kk.min(n - kk.min(n));
    let mut acc = 1.0f64;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Coherent-state amplitudes of the spin-ℓ chain at angles `(θ, ψ, φ)`:
///
/// ```text
/// φ_n = e^{−iℓ(φ+ψ)} · √C(2ℓ,n) · cos^{2ℓ−n}(θ/2) sin^n(θ/2) · e^{i n(π/2+ψ)}
/// ```
///
/// (the product form of `cos^{2ℓ}(θ/2)·μ^n` with `μ = i tan(θ/2) e^{iψ}`,
/// safe at both poles). The result is unit-norm to rounding; its time stamp
/// is 0 — these amplitudes are a function of angles, not of a schedule.
pub fn su2_amplitudes(p: &SU2Params, a: &EulerAngles) -> Result<AmplitudeVector> {
    if a.theta() > PI {
        return Err(KrylovError::InvalidInput(format!(
            "spin coherent states need theta in [0, pi], got {}",
            a.theta()
        )));
    }
    let two_ell = p.two_ell();
    let ch = (a.theta() / 2.0).cos();
    let sh = (a.theta() / 2.0).sin();
    let base_phase = -p.ell() * (a.varphi() + a.psi());
    let step_phase = FRAC_PI_2 + a.psi();
    let phi = (0..=two_ell)
        .map(|n| {
            let mag = binomial(two_ell, n).sqrt()
                * ch.powi((two_ell - n) as i32)
                * sh.powi(n as i32);
            C64::from_polar(mag, base_phase + n as f64 * step_phase)
        })
        .collect();
    AmplitudeVector::new(phi, 0.0)
}

/// Coherent-state amplitudes of the truncated su(1,1) ladder at `(θ, ψ)`:
///
/// ```text
/// φ_n = e^{ikψ} · √(Γ(2k+n)/(Γ(2k) n!)) · cosh^{−2k}(θ/2) tanh^n(θ/2) · e^{i n(π/2+ψ)}
/// ```
///
/// evaluated through log-Γ differences so large `n` neither overflows nor
/// loses the ratio. Errors with a truncation error when the tail mass
/// outside `n_max` exceeds [`SU11_TAIL_TOL`] — the fix is a larger `n_max`
/// (or building the parameters with a larger design time).
pub fn su11_amplitudes(p: &SU11Params, a: &EulerAngles) -> Result<AmplitudeVector> {
    let th = (a.theta() / 2.0).tanh();
    let ch = (a.theta() / 2.0).cosh();
    let k = p.k();
    let ln_norm = -2.0 * k * ch.ln();
    let lg2k = ln_gamma(2.0 * k);
    let base_phase = k * a.psi();
    let step_phase = FRAC_PI_2 + a.psi();
    let mut total = 0.0f64;
    let phi: Vec<C64> = (0..=p.n_max())
        .map(|n| {
            let nf = n as f64;
            let ln_ratio = 0.5 * (ln_gamma(2.0 * k + nf) - lg2k - ln_gamma(nf + 1.0));
            let mag = (ln_ratio + ln_norm).exp() * th.powi(n as i32);
            total += mag * mag;
            C64::from_polar(mag, base_phase + nf * step_phase)
        })
        .collect();
    let tail = 1.0 - total;
    if tail > SU11_TAIL_TOL {
        return Err(KrylovError::Truncation(format!(
            "coherent tail mass {tail:.3e} beyond n_max = {} exceeds {SU11_TAIL_TOL:.0e}; \
             increase n_max (theta = {})",
            p.n_max(),
            a.theta()
        )));
    }
    AmplitudeVector::new(phi, 0.0)
}

/// Closed-form complexity of the coherent orbit at time `t ≥ 0`:
/// `ℓ(1 − cos Bt)` for su(2), `k(cosh Bt − 1)` for su(1,1).
pub fn analytic_ck(group: &GroupParams, t: f64) -> Result<f64> {
    validate_time(t)?;
    Ok(match group {
        GroupParams::Su2(p) => p.ell() * (1.0 - (p.b() * t).cos()),
        GroupParams::Su11(p) => p.k() * ((p.b() * t).cosh() - 1.0),
    })
}

/// Closed-form circuit complexity of the coherent orbit at time `t ≥ 0`:
/// the geodesic grows linearly, `ℓ|B|t` resp. `k|B|t`.
pub fn analytic_circuit_complexity(group: &GroupParams, t: f64) -> Result<f64> {
    validate_time(t)?;
    Ok(match group {
        GroupParams::Su2(p) => p.ell() * p.b().abs() * t,
        GroupParams::Su11(p) => p.k() * p.b().abs() * t,
    })
}

fn validate_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(KrylovError::InvalidInput(format!(
            "time must be nonnegative and finite, got {t}"
        )));
    }
    Ok(())
}

/// Spin expectation values `(⟨S_x⟩, ⟨S_y⟩, ⟨S_z⟩)` of chain amplitudes,
/// computed from the ladder structure without materializing matrices.
pub fn spin_expectations(phi: &AmplitudeVector, p: &SU2Params) -> Result<(f64, f64, f64)> {
    if phi.len() != p.dim() {
        return Err(KrylovError::InvalidInput(format!(
            "amplitude length {} does not match chain dimension {}",
            phi.len(),
            p.dim()
        )));
    }
    let two_ell = p.two_ell();
    let c = phi.phi();
    let sz: f64 = c
        .iter()
        .enumerate()
        .map(|(n, z)| (n as f64 - p.ell()) * z.norm_sqr())
        .sum();
    // ⟨S⁺⟩ = Σ_n b_n · conj(φ_{n+1}) φ_n; then S_x = Re, S_y = Im
    let mut splus = C64::new(0.0, 0.0);
    for n in 0..two_ell {
        splus += c[n + 1].conj() * c[n] * su2_ladder(n, two_ell);
    }
    Ok((splus.re, splus.im, sz))
}

/// Reconstructs the coherent angles `(θ, ψ)` from chain amplitudes
/// (`varphi` is reported as 0 — it is a pure gauge of the amplitudes).
///
/// Conventions, fixed by the round-trip property with [`su2_amplitudes`]:
/// `θ = arccos(−⟨S_z⟩/ℓ)` and `ψ = atan2(−⟨S_x⟩, −⟨S_y⟩)`, with `ψ = 0`
/// declared at the poles where the azimuth is gauge. States whose total spin
/// length `|⟨S⟩|` deviates from `ℓ` beyond [`COHERENCE_TOL`] are rejected:
/// tomography is undefined off the coherent manifold.
pub fn angles_from_state(phi: &AmplitudeVector, p: &SU2Params) -> Result<EulerAngles> {
    let (sx, sy, sz) = spin_expectations(phi, p)?;
    let ell = p.ell();
    let len = (sx * sx + sy * sy + sz * sz).sqrt();
    let dev = (len - ell).abs();
    if dev > COHERENCE_TOL * ell.max(1.0) {
        return Err(KrylovError::NotCoherent(format!(
            "|<S>| = {len:.12} differs from ell = {ell} by {dev:.3e}"
        )));
    }
    let theta = (-sz / ell).clamp(-1.0, 1.0).acos();
    let psi = if theta.min(PI - theta) < 1e-8 {
        0.0 // azimuth is gauge at the poles
    } else {
        fold_angle((-sx).atan2(-sy))
    };
    EulerAngles::new(theta, psi, 0.0)
}

/// Site-weight profile `|f_n(θ, ψ)|²` of the coherent state (its Husimi
/// weights over the chain): the squared magnitudes of [`su2_amplitudes`],
/// independent of `ψ` and `φ`. The weight of site `n` is maximal at the
/// strip center `θ_n = arccos(1 − n/ℓ)`.
pub fn coherent_overlap_weights(p: &SU2Params, a: &EulerAngles) -> Result<Vec<f64>> {
    let amp = su2_amplitudes(p, a)?;
    Ok(amp.phi().iter().map(|z| z.norm_sqr()).collect())
}
