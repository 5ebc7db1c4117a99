//! Vectorized operator space: operators as states, commutators as matrices.
//!
//! A `d×d` operator `A` becomes a length-`d²` state `|A)` by **row-major**
//! flattening: entry `A[m][n]` lands at flat index `m·d + n`. The inner
//! product is the trace pairing `(A|B) = Tr(A†B)`, which makes the flattening
//! an isometry onto `C^{d²}` with the standard conjugating dot product.
//!
//! Under this convention the commutator with a Hamiltonian `H` becomes the
//! literal Kronecker expression
//!
//! ```text
//! vec([H, O]) = (H ⊗ I − I ⊗ Hᵀ) · vec(O)
//! ```
//!
//! and the resulting matrix is Hermitian whenever `H` is, so commutator flows
//! generate unitary rotations of operator space.

use nalgebra::{DMatrix, DVector};

use crate::error::{KrylovError, Result};

/// Complex double-precision scalar used throughout the crate.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = DVector<C64>;

/// Entrywise tolerance for Hermiticity checks on Hamiltonians and dense
/// generators: `max |M − M†|` must stay below this.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Tolerance on `|‖v‖ − 1|` for states that must arrive normalized.
pub const NORMALIZATION_TOL: f64 = 1e-10;

pub(crate) fn max_abs_dev_from_adjoint(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(dev);
        }
    }
    worst
}

fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// A dense operator on the physical Hilbert space.
///
/// Construction validates shape and finiteness; [`OperatorMatrix::hamiltonian`]
/// additionally enforces Hermiticity to [`HERMITICITY_TOL`], so a value built
/// that way can be fed to [`build_liouvillian`] without re-checking.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    mat: CMatrix,
}

impl OperatorMatrix {
    /// Wraps a square, finite matrix. Zero-dimensional matrices are rejected
    /// because the trace pairing (and every downstream construction) would be
    /// degenerate.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() == 0 || mat.ncols() == 0 {
            return Err(KrylovError::InvalidInput(
                "operator matrix must have dimension at least 1".into(),
            ));
        }
        if mat.nrows() != mat.ncols() {
            return Err(KrylovError::InvalidInput(format!(
                "operator matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !all_finite(&mat) {
            return Err(KrylovError::InvalidInput(
                "operator matrix contains non-finite entries".into(),
            ));
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix that will be used as a Hamiltonian. Hermiticity is
    /// required, not repaired: a non-Hermitian input is an error, never
    /// silently symmetrized.
    pub fn hamiltonian(mat: CMatrix) -> Result<Self> {
        let op = Self::new(mat)?;
        let dev = max_abs_dev_from_adjoint(&op.mat);
        if dev > HERMITICITY_TOL {
            return Err(KrylovError::InvalidInput(format!(
                "Hamiltonian must be Hermitian: max |H - H^dagger| = {dev:.3e} exceeds {HERMITICITY_TOL:.0e}"
            )));
        }
        Ok(op)
    }

    /// Physical dimension `d`.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Borrow the underlying matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Consume into the underlying matrix.
    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Frobenius norm `sqrt(Tr(A†A))`, the norm induced by the trace pairing.
    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }
}

/// A state of operator space: a finite complex coordinate vector.
///
/// For a vectorized `d×d` operator the length is `d²` and
/// [`OperatorState::matrix_dim`] recovers `d`; bases produced by the Lanczos
/// iteration may also live in abstract coordinate spaces whose length is not
/// a perfect square (for example the `2ℓ+1`-dimensional chain
/// representations), so the length itself is not constrained.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorState {
    vec: CVector,
}

impl OperatorState {
    /// Wraps a non-empty, finite coordinate vector.
    pub fn new(vec: CVector) -> Result<Self> {
        if vec.is_empty() {
            return Err(KrylovError::InvalidInput(
                "operator state must have dimension at least 1".into(),
            ));
        }
        if !vec.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(KrylovError::InvalidInput(
                "operator state contains non-finite entries".into(),
            ));
        }
        Ok(Self { vec })
    }

    pub(crate) fn from_vector_unchecked(vec: CVector) -> Self {
        Self { vec }
    }

    /// The `idx`-th standard basis vector of a `dim`-dimensional space.
    pub fn basis_vector(dim: usize, idx: usize) -> Self {
        assert!(idx < dim, "basis index {idx} out of range for dim {dim}");
        let mut vec = CVector::zeros(dim);
        vec[idx] = C64::new(1.0, 0.0);
        Self { vec }
    }

    /// Dimension of the coordinate space the state lives in.
    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    /// `Some(d)` when the state has the length `d²` of a vectorized operator.
    pub fn matrix_dim(&self) -> Option<usize> {
        let d = (self.vec.len() as f64).sqrt().round() as usize;
        (d * d == self.vec.len()).then_some(d)
    }

    /// Borrow the coordinates.
    pub fn coefficients(&self) -> &CVector {
        &self.vec
    }

    /// Consume into the coordinate vector.
    pub fn into_coefficients(self) -> CVector {
        self.vec
    }

    /// Norm under the trace pairing (the Euclidean norm of the coordinates).
    pub fn norm(&self) -> f64 {
        self.vec.norm()
    }

    /// Whether the state is normalized to [`NORMALIZATION_TOL`].
    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORMALIZATION_TOL
    }

    /// Returns the state rescaled to unit norm.
    ///
    /// Errors when the norm is too small to divide by meaningfully.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(KrylovError::InvalidInput(
                "cannot normalize a zero state".into(),
            ));
        }
        Ok(Self {
            vec: self.vec.map(|z| z / n),
        })
    }
}

/// The dense matrix of a commutator flow `[H, ·]` on vectorized operators,
/// `H ⊗ I − I ⊗ Hᵀ`. Hermitian whenever `H` is, which the constructor
/// guarantees. The stored side length is `d²` for physical dimension `d`.
#[derive(Debug, Clone)]
pub struct LiouvillianMatrix {
    mat: CMatrix,
    phys_dim: usize,
}

impl LiouvillianMatrix {
    /// Physical dimension `d` of the underlying Hilbert space.
    pub fn phys_dim(&self) -> usize {
        self.phys_dim
    }

    /// Side length `d²` of the dense matrix.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Borrow the dense `d²×d²` matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// Flattens an operator into a state, row-major: `A[m][n] → index m·d + n`.
pub fn vectorize(op: &OperatorMatrix) -> OperatorState {
    let d = op.dim();
    let mut vec = CVector::zeros(d * d);
    for m in 0..d {
        for n in 0..d {
            vec[m * d + n] = op.matrix()[(m, n)];
        }
    }
    OperatorState { vec }
}

/// Inverse of [`vectorize`]. Errors unless the state length is a perfect
/// square.
pub fn unvectorize(state: &OperatorState) -> Result<OperatorMatrix> {
    let d = state.matrix_dim().ok_or_else(|| {
        KrylovError::InvalidInput(format!(
            "state of dimension {} is not a vectorized square matrix",
            state.dim()
        ))
    })?;
    let mut mat = CMatrix::zeros(d, d);
    for m in 0..d {
        for n in 0..d {
            mat[(m, n)] = state.coefficients()[m * d + n];
        }
    }
    OperatorMatrix::new(mat)
}

/// Trace inner product `(A|B) = Tr(A†B)`, conjugate-linear in the first
/// argument. On vectorized coordinates this is the standard conjugating dot
/// product, which is exactly how it is computed.
pub fn inner(a: &OperatorState, b: &OperatorState) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(KrylovError::InvalidInput(format!(
            "inner product dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.coefficients().dotc(b.coefficients()))
}

/// Matrix commutator `[A, B] = AB − BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    if a.dim() != b.dim() {
        return Err(KrylovError::InvalidInput(format!(
            "commutator dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let m = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    OperatorMatrix::new(m)
}

/// Builds the dense commutator-flow matrix `H ⊗ I − I ⊗ Hᵀ` of a Hermitian
/// Hamiltonian. Non-Hermitian input is rejected (never symmetrized).
pub fn build_liouvillian(h: &OperatorMatrix) -> Result<LiouvillianMatrix> {
    let dev = max_abs_dev_from_adjoint(h.matrix());
    if dev > HERMITICITY_TOL {
        return Err(KrylovError::InvalidInput(format!(
            "commutator-flow matrix requires a Hermitian Hamiltonian: max |H - H^dagger| = {dev:.3e}"
        )));
    }
    let d = h.dim();
    let eye = CMatrix::identity(d, d);
    let mat = h.matrix().kronecker(&eye) - eye.kronecker(&h.matrix().transpose());
    Ok(LiouvillianMatrix { mat, phys_dim: d })
}

/// A linear action on operator-space states: the input to the Lanczos
/// iteration. Implementations must be Hermitian with respect to the trace
/// pairing; the iteration verifies this stochastically before trusting it.
pub trait OperatorAction {
    /// Dimension of the coordinate space the action operates on.
    fn len(&self) -> usize;

    /// Convenience mirror of `len() == 0` (never true for valid actions).
    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Applies the action to a state of matching dimension.
    ///
    /// # Panics
    /// May panic if `state.dim() != self.len()`; callers go through
    /// [`crate::lanczos::lanczos_basis`], which validates dimensions first.
    fn apply(&self, state: &OperatorState) -> OperatorState;
}

impl OperatorAction for LiouvillianMatrix {
    fn len(&self) -> usize {
        self.mat.nrows()
    }

    fn apply(&self, state: &OperatorState) -> OperatorState {
        OperatorState {
            vec: &self.mat * state.coefficients(),
        }
    }
}

/// A dense Hermitian generator acting on an abstract coordinate space, for
/// Lanczos runs and evolutions that do not come from a physical Hamiltonian
/// (chain representations, truncated ladders).
#[derive(Debug, Clone)]
pub struct HermitianAction {
    mat: CMatrix,
}

impl HermitianAction {
    /// Validates squareness, finiteness and Hermiticity.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(KrylovError::InvalidInput(format!(
                "Hermitian action must be square and non-empty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !all_finite(&mat) {
            return Err(KrylovError::InvalidInput(
                "Hermitian action contains non-finite entries".into(),
            ));
        }
        let dev = max_abs_dev_from_adjoint(&mat);
        if dev > HERMITICITY_TOL {
            return Err(KrylovError::InvalidInput(format!(
                "action must be Hermitian: max |M - M^dagger| = {dev:.3e}"
            )));
        }
        Ok(Self { mat })
    }

    /// Borrow the dense matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

impl OperatorAction for HermitianAction {
    fn len(&self) -> usize {
        self.mat.nrows()
    }

    fn apply(&self, state: &OperatorState) -> OperatorState {
        OperatorState {
            vec: &self.mat * state.coefficients(),
        }
    }
}

/// Matrix-free commutator action `|O) ↦ |[H, O])`.
///
/// Reshapes the state to a matrix, multiplies, and flattens back: `O(d³)`
/// per application instead of the `O(d⁴)` dense matrix-vector product, and
/// no `d²×d²` matrix is ever materialized. Agrees with
/// [`build_liouvillian`] to rounding.
#[derive(Debug, Clone)]
pub struct CommutatorAction {
    h: OperatorMatrix,
}

impl CommutatorAction {
    /// Wraps a Hermitian Hamiltonian (validated like [`build_liouvillian`]).
    pub fn new(h: OperatorMatrix) -> Result<Self> {
        let dev = max_abs_dev_from_adjoint(h.matrix());
        if dev > HERMITICITY_TOL {
            return Err(KrylovError::InvalidInput(format!(
                "commutator action requires a Hermitian Hamiltonian: max |H - H^dagger| = {dev:.3e}"
            )));
        }
        Ok(Self { h })
    }
}

impl OperatorAction for CommutatorAction {
    fn len(&self) -> usize {
        self.h.dim() * self.h.dim()
    }

    fn apply(&self, state: &OperatorState) -> OperatorState {
        let d = self.h.dim();
        assert_eq!(state.dim(), d * d, "state/action dimension mismatch");
        let o = CMatrix::from_fn(d, d, |m, n| state.coefficients()[m * d + n]);
        let c = self.h.matrix() * &o - o * self.h.matrix();
        let mut vec = CVector::zeros(d * d);
        for m in 0..d {
            for n in 0..d {
                vec[m * d + n] = c[(m, n)];
            }
        }
        OperatorState { vec }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        )
    }

    fn pauli_y() -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
    }

    fn pauli_z() -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(-1.0, 0.0),
            ],
        )
    }

    #[test]
    fn vectorize_is_row_major_and_round_trips() {
        let mat = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 2.0),
                C64::new(3.0, 4.0),
                C64::new(5.0, 6.0),
                C64::new(7.0, 8.0),
            ],
        );
        let op = OperatorMatrix::new(mat.clone()).unwrap();
        let state = vectorize(&op);
        // row-major: entry (0,1) lands at flat index 1
        assert_eq!(state.coefficients()[1], C64::new(3.0, 4.0));
        assert_eq!(state.coefficients()[2], C64::new(5.0, 6.0));
        let back = unvectorize(&state).unwrap();
        assert_eq!(back.matrix(), &mat);
    }

    #[test]
    fn inner_is_the_trace_pairing() {
        let a = OperatorMatrix::new(pauli_x()).unwrap();
        let b = OperatorMatrix::new(pauli_y()).unwrap();
        // Tr(sigma_x sigma_y) = Tr(i sigma_z) = 0
        let ab = inner(&vectorize(&a), &vectorize(&b)).unwrap();
        assert!(ab.norm() < 1e-15, "(x|y) = {ab}");
        // Tr(sigma_x sigma_x) = 2
        let aa = inner(&vectorize(&a), &vectorize(&a)).unwrap();
        assert!((aa - C64::new(2.0, 0.0)).norm() < 1e-15, "(x|x) = {aa}");
    }

    #[test]
    fn sigma_z_commutator_flow_is_diag_0_2_m2_0() {
        let h = OperatorMatrix::hamiltonian(pauli_z()).unwrap();
        let l = build_liouvillian(&h).unwrap();
        let expect = [0.0, 2.0, -2.0, 0.0];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { expect[i] } else { 0.0 };
                let got = l.matrix()[(i, j)];
                assert!(
                    (got - C64::new(want, 0.0)).norm() < 1e-15,
                    "L[{i},{j}] = {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn commutator_flow_matrix_is_hermitian_for_complex_hamiltonians() {
        let h = OperatorMatrix::hamiltonian(pauli_y()).unwrap();
        let l = build_liouvillian(&h).unwrap();
        assert!(max_abs_dev_from_adjoint(l.matrix()) < 1e-15);
    }

    #[test]
    fn commutator_matches_flow_matrix_and_matrix_free_action() {
        // random-ish fixed Hermitian H and operator O in d = 3
        let h = OperatorMatrix::hamiltonian(CMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(0.3, 0.0),
                C64::new(0.1, -0.7),
                C64::new(0.0, 0.2),
                C64::new(0.1, 0.7),
                C64::new(-0.4, 0.0),
                C64::new(0.5, 0.1),
                C64::new(0.0, -0.2),
                C64::new(0.5, -0.1),
                C64::new(0.9, 0.0),
            ],
        ))
        .unwrap();
        let o = OperatorMatrix::new(CMatrix::from_fn(3, 3, |i, j| {
            C64::new((i as f64) - 0.3 * (j as f64), 0.2 * (i * j) as f64)
        }))
        .unwrap();

        let direct = vectorize(&commutator(&h, &o).unwrap());
        let dense = build_liouvillian(&h).unwrap().apply(&vectorize(&o));
        let free = CommutatorAction::new(h).unwrap().apply(&vectorize(&o));

        let dev_dense = (direct.coefficients() - dense.coefficients()).norm();
        let dev_free = (dense.coefficients() - free.coefficients()).norm();
        assert!(dev_dense < 1e-13, "dense route deviates by {dev_dense:.3e}");
        assert!(dev_free < 1e-13, "matrix-free route deviates by {dev_free:.3e}");
    }

    #[test]
    fn non_hermitian_hamiltonians_are_flagged_not_symmetrized() {
        let mut m = pauli_x();
        m[(0, 1)] = C64::new(1.0, 0.5); // break Hermiticity
        assert!(OperatorMatrix::hamiltonian(m.clone()).is_err());
        let op = OperatorMatrix::new(m).unwrap();
        assert!(build_liouvillian(&op).is_err());
        assert!(CommutatorAction::new(op).is_err());
    }

    #[test]
    fn degenerate_shapes_are_rejected() {
        assert!(OperatorMatrix::new(CMatrix::zeros(0, 0)).is_err());
        assert!(OperatorMatrix::new(CMatrix::zeros(2, 3)).is_err());
        assert!(OperatorState::new(CVector::zeros(0)).is_err());
        let a = OperatorState::basis_vector(4, 0);
        let b = OperatorState::basis_vector(9, 0);
        assert!(inner(&a, &b).is_err());
        // length 3 is not a vectorized square matrix
        assert!(unvectorize(&OperatorState::basis_vector(3, 0)).is_err());
    }

    #[test]
    fn normalization_helpers() {
        let s = OperatorState::new(CVector::from_element(4, C64::new(1.0, 0.0))).unwrap();
        assert!(!s.is_normalized());
        let n = s.normalized().unwrap();
        assert!(n.is_normalized());
        assert!((n.norm() - 1.0).abs() < 1e-15);
    }
}
