//! Time evolution of operator states and the complexity traces built on it.
//!
//! The flow generated by a Hermitian superoperator `𝓛` is the one-parameter
//! unitary family `U(t) = e^{+i𝓛t}`, applied here by exact diagonalization:
//! [`HermitianExp`] factors `𝓛` once and then evaluates `U(t)|v)` at any `t`
//! by phase-twisting the eigenbasis coefficients. Piecewise-constant drives
//! (a rotation that is abruptly swapped for another) are expressed as a
//! [`LiouvillianSchedule`] of `(generator, duration)` segments.
//!
//! On top of the propagator sit the observables:
//!
//! * [`k_complexity`] — the chain-position expectation `Σ_n w_n |φ_n|²`,
//!   with weights `w_n = n` by default or a caller-supplied profile (e.g.
//!   surface heights from [`crate::geometry::height_weights`]);
//! * [`dual_basis`] — the π/2 rotation of a Krylov chain about `S_y`, giving
//!   the complementary chain in which a quenched drive is again a hopping;
//! * [`symmetry_trace`] / [`quench_trace`] — end-to-end drivers that evolve
//!   a lowest-weight seed and tabulate numeric, analytic, and deformed
//!   complexities over a time grid, as consumed by the CLI.

use nalgebra::DVector;

use crate::error::{KrylovError, Result};
use crate::geometry::{height_weights, DeformationParams};
use crate::lanczos::{lanczos_basis, project, AmplitudeVector, KrylovBasis, DEFAULT_TERM_TOL};
use crate::opspace::{
    max_abs_dev_from_adjoint, CMatrix, CVector, HermitianAction, OperatorState, C64,
    HERMITICITY_TOL,
};
use crate::symmetry::{
    analytic_circuit_complexity, analytic_ck, angles_from_state, su2_generator, su2_generators,
    su2_hopping, su11_generator, EulerAngles, GroupParams, SU2Params,
};

/// Ceiling on the weight an evolved su(1,1) state may push past the trusted
/// core of its truncated chain before the trace is rejected as unconverged.
pub const SU11_LEAK_TOL: f64 = 1e-10;

/// Relative slack when deciding whether a requested time lies inside a
/// schedule's span: grid points within `GRID_SPAN_SLACK · max(1, total)` of
/// the endpoints are accepted and clamped.
const GRID_SPAN_SLACK: f64 = 1e-9;

/// A Hermitian generator factored for exact evolution `e^{+iMt}`.
///
/// Diagonalizing once costs `O(D³)`; every subsequent application of the
/// flow at any time is a dense `O(D²)` rotation into and out of the
/// eigenbasis with unit-modulus phases in between, so norms are preserved
/// to rounding no matter how long the evolution runs.
#[derive(Debug, Clone)]
pub struct HermitianExp {
    vals: DVector<f64>,
    vecs: CMatrix,
}

impl HermitianExp {
    /// Factors a generator, enforcing Hermiticity to [`HERMITICITY_TOL`].
    pub fn new(generator: CMatrix) -> Result<Self> {
        if generator.nrows() == 0 || generator.nrows() != generator.ncols() {
            return Err(KrylovError::InvalidInput(format!(
                "evolution generator must be square and non-empty, got {}x{}",
                generator.nrows(),
                generator.ncols()
            )));
        }
        let dev = max_abs_dev_from_adjoint(&generator);
        if dev > HERMITICITY_TOL {
            return Err(KrylovError::InvalidInput(format!(
                "evolution generator must be Hermitian: max |M - M^dagger| = {dev:.3e} exceeds {HERMITICITY_TOL:.0e}"
            )));
        }
        let eig = generator.symmetric_eigen();
        Ok(Self {
            vals: eig.eigenvalues,
            vecs: eig.eigenvectors,
        })
    }

    /// Ambient dimension of the generator.
    pub fn dim(&self) -> usize {
        self.vals.len()
    }

    /// Applies `e^{+iMt}` to a coefficient vector.
    pub fn apply(&self, t: f64, v: &CVector) -> Result<CVector> {
        if v.len() != self.dim() {
            return Err(KrylovError::InvalidInput(format!(
                "vector length {} does not match generator dimension {}",
                v.len(),
                self.dim()
            )));
        }
        if !t.is_finite() {
            return Err(KrylovError::InvalidInput(format!(
                "evolution time must be finite, got {t}"
            )));
        }
        let mut coeffs = self.vecs.adjoint() * v;
        for (c, lam) in coeffs.iter_mut().zip(self.vals.iter()) {
            *c *= C64::from_polar(1.0, lam * t);
        }
        Ok(&self.vecs * coeffs)
    }

    /// Materializes `e^{+iMt}` as a dense matrix.
    pub fn matrix(&self, t: f64) -> Result<CMatrix> {
        if !t.is_finite() {
            return Err(KrylovError::InvalidInput(format!(
                "evolution time must be finite, got {t}"
            )));
        }
        let phases = CVector::from_iterator(
            self.dim(),
            self.vals.iter().map(|lam| C64::from_polar(1.0, lam * t)),
        );
        let mut twisted = self.vecs.clone();
        for (mut col, phase) in twisted.column_iter_mut().zip(phases.iter()) {
            col *= *phase;
        }
        Ok(twisted * self.vecs.adjoint())
    }
}

/// A piecewise-constant drive: generators applied back to back, each for a
/// fixed duration. Times inside segment `j` are measured from that
/// segment's start, so the state at global time `t` is
/// `e^{+iM_j (t - t_j)} · U_{j-1} · … · U_0 |seed)`.
#[derive(Debug, Clone)]
pub struct LiouvillianSchedule {
    segments: Vec<(HermitianExp, f64)>,
}

impl LiouvillianSchedule {
    /// Builds a schedule from `(generator, duration)` segments. All
    /// durations must be finite and non-negative, and every generator must
    /// act on the same space.
    pub fn new(segments: Vec<(HermitianExp, f64)>) -> Result<Self> {
        let Some(first) = segments.first() else {
            return Err(KrylovError::InvalidInput(
                "a schedule needs at least one segment".into(),
            ));
        };
        let dim = first.0.dim();
        for (j, (gen, dur)) in segments.iter().enumerate() {
            if gen.dim() != dim {
                return Err(KrylovError::InvalidInput(format!(
                    "segment {j} acts on dimension {}, expected {dim}",
                    gen.dim()
                )));
            }
            if !(dur.is_finite() && *dur >= 0.0) {
                return Err(KrylovError::InvalidInput(format!(
                    "segment {j} has invalid duration {dur}; durations must be finite and >= 0"
                )));
            }
        }
        Ok(Self { segments })
    }

    /// A single generator held for `duration`.
    pub fn constant(generator: HermitianExp, duration: f64) -> Result<Self> {
        Self::new(vec![(generator, duration)])
    }

    /// Ambient dimension the schedule acts on.
    pub fn dim(&self) -> usize {
        self.segments[0].0.dim()
    }

    /// Total drive time (sum of segment durations).
    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|(_, dur)| dur).sum()
    }

    /// The `(generator, duration)` segments in order.
    pub fn segments(&self) -> &[(HermitianExp, f64)] {
        &self.segments
    }
}

/// Evolves a normalized seed under a schedule and samples it on a time grid.
///
/// Grid points may come in any order but must lie within the schedule's
/// span (up to [`GRID_SPAN_SLACK`] relative slack at both ends, after which
/// they are clamped). Segment-boundary states are precomputed once, so each
/// sample costs a single dense application regardless of how many segments
/// precede it.
pub fn propagate(
    schedule: &LiouvillianSchedule,
    seed: &OperatorState,
    grid: &[f64],
) -> Result<Vec<OperatorState>> {
    if seed.dim() != schedule.dim() {
        return Err(KrylovError::InvalidInput(format!(
            "seed dimension {} does not match schedule dimension {}",
            seed.dim(),
            schedule.dim()
        )));
    }
    if !seed.is_normalized() {
        return Err(KrylovError::InvalidInput(format!(
            "seed state must be normalized, got norm {:.17}",
            seed.norm()
        )));
    }
    if grid.is_empty() {
        return Err(KrylovError::InvalidInput(
            "time grid must contain at least one point".into(),
        ));
    }
    let total = schedule.total_time();
    let slack = GRID_SPAN_SLACK * total.max(1.0);
    for &t in grid {
        if !t.is_finite() || t < -slack || t > total + slack {
            return Err(KrylovError::InvalidInput(format!(
                "grid point {t} lies outside the schedule span [0, {total}]"
            )));
        }
    }

    // States at the start of each segment, plus cumulative start times.
    let mut boundary = Vec::with_capacity(schedule.segments().len());
    let mut starts = Vec::with_capacity(schedule.segments().len());
    let mut state = seed.coefficients().clone();
    let mut elapsed = 0.0;
    for (gen, dur) in schedule.segments() {
        boundary.push(state.clone());
        starts.push(elapsed);
        state = gen.apply(*dur, &state)?;
        elapsed += dur;
    }

    let mut out = Vec::with_capacity(grid.len());
    for &t in grid {
        let t = t.clamp(0.0, total);
        // Find the last segment starting at or before t; ties at a boundary
        // resolve to the later segment, which agrees with the earlier one's
        // endpoint because the evolution is continuous.
        let j = starts.partition_point(|&s| s <= t).saturating_sub(1);
        let (gen, _) = &schedule.segments()[j];
        let coeffs = gen.apply(t - starts[j], &boundary[j])?;
        out.push(OperatorState::from_vector_unchecked(coeffs));
    }
    Ok(out)
}

/// Chain-position expectation `Σ_n w_n |φ_n|²` of an amplitude vector.
///
/// With the default weights `w_n = n` this is the mean position along the
/// chain; a caller-supplied profile (one weight per chain site) measures
/// the same distribution against a different cost, e.g. squashed-surface
/// heights.
pub fn k_complexity(phi: &AmplitudeVector, weights: Option<&[f64]>) -> Result<f64> {
    if let Some(w) = weights {
        if w.len() != phi.len() {
            return Err(KrylovError::InvalidInput(format!(
                "weight profile has {} entries but the amplitude vector has {}",
                w.len(),
                phi.len()
            )));
        }
        if !w.iter().all(|x| x.is_finite()) {
            return Err(KrylovError::InvalidInput(
                "weight profile contains non-finite entries".into(),
            ));
        }
        Ok(phi
            .phi()
            .iter()
            .zip(w.iter())
            .map(|(z, wn)| wn * z.norm_sqr())
            .sum())
    } else {
        Ok(phi
            .phi()
            .iter()
            .enumerate()
            .map(|(n, z)| n as f64 * z.norm_sqr())
            .sum())
    }
}

/// Rotates a Krylov chain by `e^{−iπS_y/2}`, the quarter turn taking `S_z`
/// to `S_x`, producing the complementary chain `|𝒪'_n) = Σ_m U_{mn}|𝒪_m)`.
///
/// The rotation mixes chain states only through the spin representation's
/// matrix elements, so the dual chain inherits the original hops and
/// diagonal unchanged; orthonormality is re-checked on assembly.
pub fn dual_basis(basis: &KrylovBasis, p: &SU2Params) -> Result<KrylovBasis> {
    if basis.dim() != p.dim() {
        return Err(KrylovError::InvalidInput(format!(
            "chain has {} states but the spin-{} representation needs {}",
            basis.dim(),
            p.ell(),
            p.dim()
        )));
    }
    let rot = HermitianExp::new(su2_generators(p).sy)?;
    let u = rot.matrix(-std::f64::consts::FRAC_PI_2)?;
    let dim = basis.dim();
    let states = (0..dim)
        .map(|n| {
            let mut coeffs = CVector::zeros(basis.ambient_dim());
            for (m, state) in basis.states().iter().enumerate() {
                coeffs.axpy(u[(m, n)], state.coefficients(), C64::new(1.0, 0.0));
            }
            OperatorState::from_vector_unchecked(coeffs)
        })
        .collect();
    KrylovBasis::from_parts(states, basis.hops().to_vec(), basis.diagonal().to_vec())
}

/// Complexity observables tabulated over a time grid.
///
/// `ck` is always the plain-weight spread measured in the primary chain;
/// the optional columns are filled by whichever driver produced the trace:
/// analytic closed forms ([`symmetry_trace`]), the dual-chain spread
/// ([`quench_trace`]), height-weighted spreads (either driver, when a
/// deformation is supplied), and recovered Euler angles (su(2) only).
#[derive(Debug, Clone)]
pub struct ComplexityTrace {
    /// Sample times, in the order requested.
    pub times: Vec<f64>,
    /// Numeric spread complexity `Σ n |φ_n|²`.
    pub ck: Vec<f64>,
    /// Closed-form reference curve, where one exists for the drive.
    pub ck_analytic: Option<Vec<f64>>,
    /// Spread measured in the dual (rotated) chain.
    pub ck_prime: Option<Vec<f64>>,
    /// Circuit complexity — geodesic arc length on the coherent manifold.
    pub circuit: Vec<f64>,
    /// Spread measured against squashed-surface height weights.
    pub ck_deformed: Option<Vec<f64>>,
    /// Euler angles recovered from the evolved state by tomography.
    pub angles: Option<Vec<EulerAngles>>,
    /// Weight outside the trusted chain: rounding-level for su(2), the
    /// beyond-core tail for truncated su(1,1) chains.
    pub leak: Vec<f64>,
}

fn validate_grid(grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(KrylovError::InvalidInput(
            "time grid must contain at least one point".into(),
        ));
    }
    let mut max_t = 0.0f64;
    for &t in grid {
        if !(t.is_finite() && t >= 0.0) {
            return Err(KrylovError::InvalidInput(format!(
                "trace times must be finite and >= 0, got {t}"
            )));
        }
        max_t = max_t.max(t);
    }
    Ok(max_t)
}

fn deformation_weights(
    deformation: Option<&DeformationParams>,
    ell: f64,
) -> Result<Option<Vec<f64>>> {
    match deformation {
        None => Ok(None),
        Some(d) => {
            if (d.ell() - ell).abs() > 1e-12 {
                return Err(KrylovError::InvalidInput(format!(
                    "deformation is built for spin {} but the drive has spin {ell}",
                    d.ell()
                )));
            }
            Ok(Some(height_weights(d)?))
        }
    }
}

/// Evolves the lowest-weight state under the symmetry drive `B·S_x`
/// (su(2)) or its truncated hyperbolic analogue (su(1,1)) and tabulates
/// complexities on `grid`.
///
/// The su(2) trace carries recovered Euler angles and, when `deformation`
/// is given, the height-weighted spread. Truncated su(1,1) evolution is
/// accepted only while the weight beyond the trusted core stays below
/// [`SU11_LEAK_TOL`]; a larger tail is reported as a truncation error
/// rather than silently degraded data, and no deformation applies.
pub fn symmetry_trace(
    group: &GroupParams,
    grid: &[f64],
    deformation: Option<&DeformationParams>,
) -> Result<ComplexityTrace> {
    let max_t = validate_grid(grid)?;
    match group {
        GroupParams::Su2(p) => {
            let weights = deformation_weights(deformation, p.ell())?;
            let gen = HermitianExp::new(su2_generator(p))?;
            let schedule = LiouvillianSchedule::constant(gen, max_t)?;
            let seed = OperatorState::basis_vector(p.dim(), 0);
            let states = propagate(&schedule, &seed, grid)?;

            let mut ck = Vec::with_capacity(grid.len());
            let mut analytic = Vec::with_capacity(grid.len());
            let mut circuit = Vec::with_capacity(grid.len());
            let mut deformed = weights.as_ref().map(|_| Vec::with_capacity(grid.len()));
            let mut angles = Vec::with_capacity(grid.len());
            let mut leak = Vec::with_capacity(grid.len());
            for (&t, state) in grid.iter().zip(&states) {
                let phi = AmplitudeVector::new(state.coefficients().iter().copied().collect(), t)?;
                ck.push(k_complexity(&phi, None)?);
                analytic.push(analytic_ck(group, t)?);
                circuit.push(analytic_circuit_complexity(group, t)?);
                if let (Some(col), Some(w)) = (deformed.as_mut(), weights.as_deref()) {
                    col.push(k_complexity(&phi, Some(w))?);
                }
                angles.push(angles_from_state(&phi, p)?);
                leak.push(phi.leaked_weight().abs());
            }
            Ok(ComplexityTrace {
                times: grid.to_vec(),
                ck,
                ck_analytic: Some(analytic),
                ck_prime: None,
                circuit,
                ck_deformed: deformed,
                angles: Some(angles),
                leak,
            })
        }
        GroupParams::Su11(p) => {
            if deformation.is_some() {
                return Err(KrylovError::InvalidInput(
                    "height-weighted complexity is defined on the spin manifolds only".into(),
                ));
            }
            let gen = HermitianExp::new(su11_generator(p))?;
            let schedule = LiouvillianSchedule::constant(gen, max_t)?;
            let seed = OperatorState::basis_vector(p.dim(), 0);
            let states = propagate(&schedule, &seed, grid)?;

            let mut ck = Vec::with_capacity(grid.len());
            let mut analytic = Vec::with_capacity(grid.len());
            let mut circuit = Vec::with_capacity(grid.len());
            let mut leak = Vec::with_capacity(grid.len());
            for (&t, state) in grid.iter().zip(&states) {
                let phi = AmplitudeVector::new(state.coefficients().iter().copied().collect(), t)?;
                let tail: f64 = phi.phi()[p.n_core() + 1..]
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum();
                if tail > SU11_LEAK_TOL {
                    return Err(KrylovError::Truncation(format!(
                        "evolved weight {tail:.3e} beyond the trusted core at t = {t} exceeds \
                         {SU11_LEAK_TOL:.0e}; enlarge the chain (n_max = {})",
                        p.n_max()
                    )));
                }
                ck.push(k_complexity(&phi, None)?);
                analytic.push(analytic_ck(group, t)?);
                circuit.push(analytic_circuit_complexity(group, t)?);
                leak.push(tail);
            }
            Ok(ComplexityTrace {
                times: grid.to_vec(),
                ck,
                ck_analytic: Some(analytic),
                ck_prime: None,
                circuit,
                ck_deformed: None,
                angles: None,
                leak,
            })
        }
    }
}

/// Evolves the lowest-weight state through a quench — the `B·S_x` rotation
/// until `t_star`, then a `B·S_z` rotation — and measures spread in both
/// the primary chain (seeded by the drive's own hopping) and its π/2 dual.
///
/// The primary chain is blind to the post-quench rotation (its `ck` column
/// freezes), while the dual chain is blind to the pre-quench one (its
/// `ck_prime` column holds at `ℓ`); the circuit column is the geodesic arc
/// `ℓ·θ(t)` recovered by tomography, which stalls after the quench.
pub fn quench_trace(
    p: &SU2Params,
    t_star: f64,
    grid: &[f64],
    deformation: Option<&DeformationParams>,
) -> Result<ComplexityTrace> {
    if !(t_star.is_finite() && t_star >= 0.0) {
        return Err(KrylovError::InvalidInput(format!(
            "quench time must be finite and >= 0, got {t_star}"
        )));
    }
    if p.b() == 0.0 {
        return Err(KrylovError::InvalidInput(
            "quench drive needs a non-zero coupling B".into(),
        ));
    }
    let max_t = validate_grid(grid)?;
    let weights = deformation_weights(deformation, p.ell())?;

    let seed = OperatorState::basis_vector(p.dim(), 0);
    let hopping = HermitianAction::new(su2_hopping(p))?;
    let basis = lanczos_basis(&hopping, &seed, p.dim(), DEFAULT_TERM_TOL)?;
    let dual = dual_basis(&basis, p)?;

    let gens = su2_generators(p);
    let pre = HermitianExp::new(su2_generator(p))?;
    let post = HermitianExp::new(gens.sz.map(|z| z * p.b()))?;
    let schedule =
        LiouvillianSchedule::new(vec![(pre, t_star), (post, (max_t - t_star).max(0.0))])?;
    let states = propagate(&schedule, &seed, grid)?;

    let mut ck = Vec::with_capacity(grid.len());
    let mut ck_prime = Vec::with_capacity(grid.len());
    let mut circuit = Vec::with_capacity(grid.len());
    let mut deformed = weights.as_ref().map(|_| Vec::with_capacity(grid.len()));
    let mut angles = Vec::with_capacity(grid.len());
    let mut leak = Vec::with_capacity(grid.len());
    for (&t, state) in grid.iter().zip(&states) {
        let phi = project(state, &basis, t)?;
        let phi_dual = project(state, &dual, t)?;
        ck.push(k_complexity(&phi, None)?);
        ck_prime.push(k_complexity(&phi_dual, None)?);
        if let (Some(col), Some(w)) = (deformed.as_mut(), weights.as_deref()) {
            col.push(k_complexity(&phi, Some(w))?);
        }
        let raw = AmplitudeVector::new(state.coefficients().iter().copied().collect(), t)?;
        let recovered = angles_from_state(&raw, p)?;
        circuit.push(p.ell() * recovered.theta());
        angles.push(recovered);
        leak.push(phi.leaked_weight().abs());
    }
    Ok(ComplexityTrace {
        times: grid.to_vec(),
        ck,
        ck_analytic: None,
        ck_prime: Some(ck_prime),
        circuit,
        ck_deformed: deformed,
        angles: Some(angles),
        leak,
    })
}
