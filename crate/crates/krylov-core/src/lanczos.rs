//! Lanczos recursion over operator space: orthonormal chain bases, hop
//! coefficients, the site-number operator, and projections onto a chain.
//!
//! Given a Hermitian action `A` and a normalized seed state, the recursion
//! produces states `|𝒪_0), |𝒪_1), …` in which `A` is tridiagonal; the
//! positive off-diagonal entries are the hop coefficients `β_m` coupling
//! `|𝒪_{m−1}) ↔ |𝒪_m)`. Ambient dimensions here are small (at most a few
//! hundred), so every step reorthogonalizes the residual against **all**
//! prior states, twice — exactness over speed.

use crate::error::{KrylovError, Result};
use crate::opspace::{C64, CMatrix, CVector, OperatorAction, OperatorState};

/// Default relative termination tolerance: the recursion stops when the
/// residual norm drops below `term_tol` times the scale of the action
/// (the largest hop seen, or the norm of the first application).
pub const DEFAULT_TERM_TOL: f64 = 1e-12;

/// Pairwise orthonormality tolerance enforced on every constructed basis.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Tolerance of the stochastic Hermiticity probe applied to the action
/// before the recursion trusts it.
const HERMITICITY_PROBE_TOL: f64 = 1e-10;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_interval(u: u64) -> f64 {
    // 53 high bits -> [0, 1)
    (u >> 11) as f64 / (1u64 << 53) as f64
}

/// Deterministic pseudo-random unit state for the Hermiticity probe.
fn probe_state(dim: usize, rng: &mut u64) -> OperatorState {
    let vec = CVector::from_fn(dim, |_, _| {
        let re = 2.0 * unit_interval(splitmix64(rng)) - 1.0;
        let im = 2.0 * unit_interval(splitmix64(rng)) - 1.0;
        C64::new(re, im)
    });
    let n = vec.norm().max(1e-300);
    OperatorState::from_vector_unchecked(vec.map(|z| z / n))
}

/// Verifies `(x|Ay) = (Ax|y)` on a few deterministic pseudo-random pairs.
/// Cheap insurance against callers handing in a non-Hermitian action, which
/// would silently break every downstream identity.
fn verify_hermitian_action<A: OperatorAction + ?Sized>(action: &A) -> Result<()> {
    let dim = action.len();
    let mut rng: u64 = 0x4b52_594c_4f56_5f31;
    for trial in 0..4 {
        let x = probe_state(dim, &mut rng);
        let y = probe_state(dim, &mut rng);
        let ax = action.apply(&x);
        let ay = action.apply(&y);
        let lhs = x.coefficients().dotc(ay.coefficients());
        let rhs = ax.coefficients().dotc(y.coefficients());
        let scale = ax.norm() * y.norm() + x.norm() * ay.norm() + 1e-300;
        let dev = (lhs - rhs).norm();
        if dev > HERMITICITY_PROBE_TOL * scale {
            return Err(KrylovError::InvalidInput(format!(
                "action is not Hermitian: probe {trial} gives |(x|Ay) - (Ax|y)| = {dev:.3e} \
                 against scale {scale:.3e}"
            )));
        }
    }
    Ok(())
}

/// An orthonormal chain basis `|𝒪_0), …, |𝒪_{D−1})` together with the
/// tridiagonal coefficients of the action that generated it: positive hops
/// `β_m` (coupling site `m−1` to site `m`) and the real diagonal `α_n`.
#[derive(Debug, Clone)]
pub struct KrylovBasis {
    states: Vec<OperatorState>,
    hops: Vec<f64>,
    diag: Vec<f64>,
}

impl KrylovBasis {
    /// Assembles a basis from explicit parts, enforcing the shape and
    /// orthonormality invariants. Hops must be strictly positive (the phase
    /// convention: phases are absorbed into the states).
    pub fn from_parts(
        states: Vec<OperatorState>,
        hops: Vec<f64>,
        diag: Vec<f64>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(KrylovError::InvalidInput(
                "a chain basis needs at least one state".into(),
            ));
        }
        if hops.len() + 1 != states.len() || diag.len() != states.len() {
            return Err(KrylovError::InvalidInput(format!(
                "chain shape mismatch: {} states need {} hops and {} diagonal entries, got {} and {}",
                states.len(),
                states.len() - 1,
                states.len(),
                hops.len(),
                diag.len()
            )));
        }
        if !hops.iter().all(|b| b.is_finite() && *b > 0.0) {
            return Err(KrylovError::InvalidInput(
                "hop coefficients must be finite and strictly positive".into(),
            ));
        }
        if !diag.iter().all(|a| a.is_finite()) {
            return Err(KrylovError::InvalidInput(
                "diagonal coefficients must be finite".into(),
            ));
        }
        let ambient = states[0].dim();
        if states.iter().any(|s| s.dim() != ambient) {
            return Err(KrylovError::InvalidInput(
                "all basis states must share one ambient dimension".into(),
            ));
        }
        for m in 0..states.len() {
            for n in m..states.len() {
                let ip = states[m].coefficients().dotc(states[n].coefficients());
                let want = if m == n { 1.0 } else { 0.0 };
                let dev = (ip - C64::new(want, 0.0)).norm();
                if dev > ORTHONORMALITY_TOL {
                    return Err(KrylovError::InvalidInput(format!(
                        "basis is not orthonormal: |(O_{m}|O_{n}) - {want}| = {dev:.3e}"
                    )));
                }
            }
        }
        Ok(Self { states, hops, diag })
    }

    /// Number of chain sites `D`.
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Dimension of the space the basis states live in.
    pub fn ambient_dim(&self) -> usize {
        self.states[0].dim()
    }

    /// The orthonormal states `|𝒪_n)`.
    pub fn states(&self) -> &[OperatorState] {
        &self.states
    }

    /// Hop coefficients `β_m`, `m = 1..D−1`; `β_m` couples sites `m−1` and `m`.
    pub fn hops(&self) -> &[f64] {
        &self.hops
    }

    /// Diagonal coefficients `α_n = (𝒪_n|A|𝒪_n)`.
    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// The `D×D` tridiagonal matrix of the generating action in this basis.
    pub fn tridiagonal(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for n in 0..d {
            m[(n, n)] = C64::new(self.diag[n], 0.0);
        }
        for (i, b) in self.hops.iter().enumerate() {
            m[(i, i + 1)] = C64::new(*b, 0.0);
            m[(i + 1, i)] = C64::new(*b, 0.0);
        }
        m
    }
}

/// Amplitudes `φ_n` of a state over a chain basis at a given time.
///
/// The weights `|φ_n|²` need not sum to one: when the underlying state has
/// support outside the basis (or outside a truncated ladder), the missing
/// weight is reported by [`AmplitudeVector::leaked_weight`] rather than
/// renormalized away.
#[derive(Debug, Clone)]
pub struct AmplitudeVector {
    phi: Vec<C64>,
    time: f64,
}

impl AmplitudeVector {
    /// Wraps an amplitude list; entries and the time stamp must be finite.
    pub fn new(phi: Vec<C64>, time: f64) -> Result<Self> {
        if phi.is_empty() {
            return Err(KrylovError::InvalidInput(
                "amplitude vector must have at least one entry".into(),
            ));
        }
        if !phi.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || !time.is_finite() {
            return Err(KrylovError::InvalidInput(
                "amplitude vector contains non-finite data".into(),
            ));
        }
        Ok(Self { phi, time })
    }

    /// The complex amplitudes `φ_n`.
    pub fn phi(&self) -> &[C64] {
        &self.phi
    }

    /// Number of chain sites covered.
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    /// True when the amplitude list is empty (never, for constructed values).
    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// The time stamp the amplitudes belong to.
    pub fn time(&self) -> f64 {
        self.time
    }

    /// Captured probability weight `∑|φ_n|²`.
    pub fn total_weight(&self) -> f64 {
        self.phi.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Weight missing from the chain, `1 − ∑|φ_n|²` (tiny negative values
    /// are rounding noise and are reported as they are).
    pub fn leaked_weight(&self) -> f64 {
        1.0 - self.total_weight()
    }
}

/// Runs the Lanczos recursion for a Hermitian `action` from a normalized
/// `seed`, with full (twice-repeated) reorthogonalization at every step.
///
/// The recursion stops when the residual norm falls below `term_tol` times
/// the scale of the action, when the basis reaches `max_dim` sites, or when
/// it exhausts the ambient space. The seed becomes `|𝒪_0)` exactly.
pub fn lanczos_basis<A: OperatorAction + ?Sized>(
    action: &A,
    seed: &OperatorState,
    max_dim: usize,
    term_tol: f64,
) -> Result<KrylovBasis> {
    if max_dim == 0 {
        return Err(KrylovError::InvalidInput(
            "max_dim must be at least 1".into(),
        ));
    }
    if !(term_tol.is_finite() && term_tol > 0.0) {
        return Err(KrylovError::InvalidInput(format!(
            "termination tolerance must be positive and finite, got {term_tol}"
        )));
    }
    if seed.dim() != action.len() {
        return Err(KrylovError::InvalidInput(format!(
            "seed dimension {} does not match action dimension {}",
            seed.dim(),
            action.len()
        )));
    }
    if !seed.is_normalized() {
        return Err(KrylovError::InvalidInput(format!(
            "seed must be normalized: |seed| = {:.12}",
            seed.norm()
        )));
    }
    verify_hermitian_action(action)?;

    let ambient = action.len();
    let cap = max_dim.min(ambient);

    let mut states = vec![seed.clone()];
    let mut hops: Vec<f64> = Vec::new();
    let mut diag: Vec<f64> = Vec::new();
    let mut scale = 1e-300f64;

    loop {
        let current = states.last().expect("states never empty");
        let mut w = action.apply(current).into_coefficients();
        if states.len() == 1 {
            scale = scale.max(w.norm());
        }
        // real diagonal entry (the imaginary part is rounding noise for a
        // Hermitian action)
        let alpha = current.coefficients().dotc(&w).re;
        diag.push(alpha);
        // full reorthogonalization, two passes: removes alpha*current,
        // beta*previous, and all accumulated rounding drift in one sweep
        for _ in 0..2 {
            for s in &states {
                let overlap = s.coefficients().dotc(&w);
                w.axpy(-overlap, s.coefficients(), C64::new(1.0, 0.0));
            }
        }
        let beta = w.norm();
        if beta <= term_tol * scale || states.len() == cap {
            break;
        }
        scale = scale.max(beta);
        hops.push(beta);
        states.push(OperatorState::from_vector_unchecked(
            w.map(|z| z / beta),
        ));
    }

    KrylovBasis::from_parts(states, hops, diag)
}

/// Builds the site-number operator of a chain, `∑_n n |𝒪_n)(𝒪_n|`, as a
/// dense Hermitian action on the ambient space. It is positive semi-definite
/// with eigenvalues `0, 1, …, D−1` on the span of the basis and `0` on its
/// orthogonal complement.
pub fn krylov_operator(basis: &KrylovBasis) -> crate::opspace::HermitianAction {
    let ambient = basis.ambient_dim();
    let mut mat = CMatrix::zeros(ambient, ambient);
    for (n, state) in basis.states().iter().enumerate() {
        mat.gerc(
            C64::new(n as f64, 0.0),
            state.coefficients(),
            state.coefficients(),
            C64::new(1.0, 0.0),
        );
    }
    crate::opspace::HermitianAction::new(mat)
        .expect("rank-one sums of orthonormal states are Hermitian by construction")
}

/// Projects a state onto a chain basis at time `time`: `φ_n = (𝒪_n|state)`.
/// Weight outside the chain shows up in the result's
/// [`AmplitudeVector::leaked_weight`], never as a renormalization.
pub fn project(
    state: &OperatorState,
    basis: &KrylovBasis,
    time: f64,
) -> Result<AmplitudeVector> {
    if state.dim() != basis.ambient_dim() {
        return Err(KrylovError::InvalidInput(format!(
            "state dimension {} does not match basis ambient dimension {}",
            state.dim(),
            basis.ambient_dim()
        )));
    }
    let phi = basis
        .states()
        .iter()
        .map(|s| s.coefficients().dotc(state.coefficients()))
        .collect();
    AmplitudeVector::new(phi, time)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opspace::{vectorize, CommutatorAction, HermitianAction, OperatorMatrix};

    /// Spin-1 generators in the physical 3-dimensional space.
    fn spin1_sz() -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-1.0, 0.0),
        ]))
    }

    fn spin1_sx() -> CMatrix {
        let r = 1.0 / 2f64.sqrt();
        CMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(0.0, 0.0),
                C64::new(r, 0.0),
                C64::new(0.0, 0.0),
                C64::new(r, 0.0),
                C64::new(0.0, 0.0),
                C64::new(r, 0.0),
                C64::new(0.0, 0.0),
                C64::new(r, 0.0),
                C64::new(0.0, 0.0),
            ],
        )
    }

    /// Nearest-neighbor chain with the given hop entries.
    fn chain_matrix(hops: &[f64]) -> CMatrix {
        let d = hops.len() + 1;
        let mut m = CMatrix::zeros(d, d);
        for (i, b) in hops.iter().enumerate() {
            m[(i, i + 1)] = C64::new(*b, 0.0);
            m[(i + 1, i)] = C64::new(*b, 0.0);
        }
        m
    }

    fn basis_state(dim: usize, idx: usize) -> OperatorState {
        OperatorState::basis_vector(dim, idx)
    }

    #[test]
    fn spin1_commutator_chain_closes_after_two_sites() {
        // H = S_z, seed proportional to S_x: the commutator flow closes a
        // two-dimensional chain with a unit hop.
        let h = OperatorMatrix::hamiltonian(spin1_sz()).unwrap();
        let sx = OperatorMatrix::new(spin1_sx()).unwrap();
        let seed = vectorize(&sx).normalized().unwrap();
        let action = CommutatorAction::new(h).unwrap();
        let basis = lanczos_basis(&action, &seed, 9, DEFAULT_TERM_TOL).unwrap();
        assert_eq!(basis.dim(), 2);
        assert_eq!(basis.hops().len(), 1);
        assert!(
            (basis.hops()[0] - 1.0).abs() <= 1e-12,
            "beta_1 = {}",
            basis.hops()[0]
        );
        assert!(basis.diagonal().iter().all(|a| a.abs() < 1e-12));
    }

    #[test]
    fn chain_hops_are_recovered_exactly() {
        // hop entries sqrt((n+1)(2l-n)) for l = 1: (sqrt2, sqrt2)
        let s2 = 2f64.sqrt();
        let action = HermitianAction::new(chain_matrix(&[s2, s2])).unwrap();
        let basis = lanczos_basis(&action, &basis_state(3, 0), 3, DEFAULT_TERM_TOL).unwrap();
        assert_eq!(basis.dim(), 3);
        for (got, want) in basis.hops().iter().zip([s2, s2]) {
            assert!((got - want).abs() <= 1e-12, "hop {got} vs {want}");
        }
    }

    #[test]
    fn eigenvector_seed_gives_a_single_site() {
        // sigma_z commutes with itself: the vectorized operator is an
        // eigenvector of its own commutator flow with eigenvalue zero.
        let h = OperatorMatrix::hamiltonian(CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
        ])))
        .unwrap();
        let seed = vectorize(&OperatorMatrix::new(h.matrix().clone()).unwrap())
            .normalized()
            .unwrap();
        let action = CommutatorAction::new(h).unwrap();
        let basis = lanczos_basis(&action, &seed, 4, DEFAULT_TERM_TOL).unwrap();
        assert_eq!(basis.dim(), 1);
        assert!(basis.hops().is_empty());
    }

    #[test]
    fn random_hermitian_action_yields_orthonormal_tridiagonal_basis() {
        // fixed pseudo-random Hermitian matrix on a 16-dimensional space
        let dim = 16;
        let mut rng: u64 = 0xfeed_beef_dead_cafe;
        let raw = CMatrix::from_fn(dim, dim, |_, _| {
            C64::new(
                2.0 * unit_interval(splitmix64(&mut rng)) - 1.0,
                2.0 * unit_interval(splitmix64(&mut rng)) - 1.0,
            )
        });
        let herm = (&raw + raw.adjoint()).map(|z| z * 0.5);
        let action = HermitianAction::new(herm.clone()).unwrap();
        let basis = lanczos_basis(&action, &basis_state(dim, 0), dim, DEFAULT_TERM_TOL).unwrap();
        assert_eq!(basis.dim(), dim);

        // orthonormality
        for m in 0..dim {
            for n in 0..dim {
                let ip = basis.states()[m]
                    .coefficients()
                    .dotc(basis.states()[n].coefficients());
                let want = if m == n { 1.0 } else { 0.0 };
                assert!(
                    (ip - C64::new(want, 0.0)).norm() <= 1e-10,
                    "({m}|{n}) = {ip}"
                );
            }
        }
        // tridiagonality in the constructed basis
        for m in 0..dim {
            let am = action.apply(&basis.states()[m]);
            for n in 0..dim {
                let elem = basis.states()[n].coefficients().dotc(am.coefficients());
                if n.abs_diff(m) >= 2 {
                    assert!(elem.norm() <= 1e-8, "({n}|A|{m}) = {elem}");
                } else if n == m + 1 {
                    let dev = (elem - C64::new(basis.hops()[m], 0.0)).norm();
                    assert!(dev <= 1e-8, "hop mismatch at {m}: {elem}");
                }
            }
        }
    }

    #[test]
    fn site_number_operator_counts_sites() {
        let s2 = 2f64.sqrt();
        let action = HermitianAction::new(chain_matrix(&[s2, s2])).unwrap();
        let basis = lanczos_basis(&action, &basis_state(3, 0), 3, DEFAULT_TERM_TOL).unwrap();
        let k = krylov_operator(&basis);

        // expectation on |O_2) is 2
        let o2 = &basis.states()[2];
        let exp2 = o2.coefficients().dotc(k.apply(o2).coefficients()).re;
        assert!((exp2 - 2.0).abs() <= 1e-12, "got {exp2}");

        // random unit combination: expectation = sum n |c_n|^2
        let c = [C64::new(0.3, 0.4), C64::new(-0.5, 0.1), C64::new(0.2, -0.6)];
        let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut v = CVector::zeros(3);
        for (n, cn) in c.iter().enumerate() {
            v.axpy(*cn / norm, basis.states()[n].coefficients(), C64::new(1.0, 0.0));
        }
        let state = OperatorState::new(v).unwrap();
        let got = state.coefficients().dotc(k.apply(&state).coefficients()).re;
        let want: f64 = c
            .iter()
            .enumerate()
            .map(|(n, cn)| n as f64 * cn.norm_sqr() / (norm * norm))
            .sum();
        assert!((got - want).abs() <= 1e-12, "{got} vs {want}");

        // single-site chain: the operator is zero
        let tiny = lanczos_basis(
            &HermitianAction::new(CMatrix::zeros(2, 2)).unwrap(),
            &basis_state(2, 0),
            2,
            DEFAULT_TERM_TOL,
        )
        .unwrap();
        assert_eq!(tiny.dim(), 1);
        let kz = krylov_operator(&tiny);
        assert!(kz.matrix().norm() <= 1e-15);
    }

    #[test]
    fn projection_reads_off_amplitudes_and_leak() {
        let s2 = 2f64.sqrt();
        let action = HermitianAction::new(chain_matrix(&[s2, s2])).unwrap();
        let basis = lanczos_basis(&action, &basis_state(3, 0), 3, DEFAULT_TERM_TOL).unwrap();

        let amp = project(&basis.states()[0], &basis, 0.0).unwrap();
        assert!((amp.phi()[0] - C64::new(1.0, 0.0)).norm() <= 1e-12);
        assert!(amp.phi()[1].norm() <= 1e-12 && amp.phi()[2].norm() <= 1e-12);
        assert!(amp.leaked_weight().abs() <= 1e-12);

        let mix = OperatorState::new(
            (basis.states()[0].coefficients() + basis.states()[1].coefficients())
                .map(|z| z / 2f64.sqrt()),
        )
        .unwrap();
        let amp = project(&mix, &basis, 1.5).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((amp.phi()[0] - C64::new(r, 0.0)).norm() <= 1e-12);
        assert!((amp.phi()[1] - C64::new(r, 0.0)).norm() <= 1e-12);
        assert_eq!(amp.time(), 1.5);

        // a two-site sub-basis sees half the weight of |O_0)+|O_2) leak out
        let sub = KrylovBasis::from_parts(
            vec![basis.states()[0].clone(), basis.states()[1].clone()],
            vec![basis.hops()[0]],
            basis.diagonal()[..2].to_vec(),
        )
        .unwrap();
        let outside = OperatorState::new(
            (basis.states()[0].coefficients() + basis.states()[2].coefficients())
                .map(|z| z / 2f64.sqrt()),
        )
        .unwrap();
        let amp = project(&outside, &sub, 0.0).unwrap();
        assert!((amp.leaked_weight() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let action = HermitianAction::new(chain_matrix(&[1.0])).unwrap();
        // unnormalized seed
        let big = OperatorState::new(CVector::from_element(2, C64::new(1.0, 0.0))).unwrap();
        assert!(lanczos_basis(&action, &big, 2, DEFAULT_TERM_TOL).is_err());
        // dimension mismatch
        let seed3 = basis_state(3, 0);
        assert!(lanczos_basis(&action, &seed3, 2, DEFAULT_TERM_TOL).is_err());
        // degenerate knobs
        let seed = basis_state(2, 0);
        assert!(lanczos_basis(&action, &seed, 0, DEFAULT_TERM_TOL).is_err());
        assert!(lanczos_basis(&action, &seed, 2, 0.0).is_err());
        assert!(lanczos_basis(&action, &seed, 2, f64::NAN).is_err());
    }

    #[test]
    fn non_hermitian_actions_are_detected() {
        /// Upper-triangular shear: manifestly non-Hermitian.
        struct Shear;
        impl OperatorAction for Shear {
            fn len(&self) -> usize {
                3
            }
            fn apply(&self, state: &OperatorState) -> OperatorState {
                let c = state.coefficients();
                OperatorState::new(CVector::from_vec(vec![c[0] + c[1], c[1], c[2]])).unwrap()
            }
        }
        let err = lanczos_basis(&Shear, &basis_state(3, 0), 3, DEFAULT_TERM_TOL);
        assert!(matches!(err, Err(KrylovError::InvalidInput(_))));
    }

    #[test]
    fn max_dim_caps_the_chain() {
        let action = HermitianAction::new(chain_matrix(&[1.0, 1.0, 1.0])).unwrap();
        let basis = lanczos_basis(&action, &basis_state(4, 0), 2, DEFAULT_TERM_TOL).unwrap();
        assert_eq!(basis.dim(), 2);
        assert_eq!(basis.hops().len(), 1);
    }

    #[test]
    fn from_parts_enforces_orthonormality_and_shape() {
        let e0 = basis_state(2, 0);
        let e1 = basis_state(2, 1);
        assert!(KrylovBasis::from_parts(vec![e0.clone(), e1.clone()], vec![1.0], vec![0.0, 0.0])
            .is_ok());
        // duplicated state is not orthonormal
        assert!(KrylovBasis::from_parts(vec![e0.clone(), e0.clone()], vec![1.0], vec![0.0, 0.0])
            .is_err());
        // wrong hop count
        assert!(KrylovBasis::from_parts(vec![e0.clone(), e1.clone()], vec![], vec![0.0, 0.0])
            .is_err());
        // nonpositive hop
        assert!(KrylovBasis::from_parts(vec![e0, e1], vec![-0.5], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn amplitude_vector_bookkeeping() {
        let amp = AmplitudeVector::new(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)], 2.0).unwrap();
        assert!((amp.total_weight() - 1.0).abs() <= 1e-15);
        assert!(amp.leaked_weight().abs() <= 1e-15);
        assert!(AmplitudeVector::new(vec![], 0.0).is_err());
        assert!(AmplitudeVector::new(vec![C64::new(f64::NAN, 0.0)], 0.0).is_err());
        assert!(AmplitudeVector::new(vec![C64::new(1.0, 0.0)], f64::INFINITY).is_err());
    }
}
