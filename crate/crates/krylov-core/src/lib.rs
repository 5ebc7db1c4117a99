//! Krylov complexity of operator growth, measured two ways and compared.
//!
//! The crate treats a `d×d` operator as a state in a `d²`-dimensional inner
//! product space (the trace pairing), turns commutation with a Hamiltonian
//! into a Hermitian matrix acting on that space, and then provides the two
//! pillars that the complexity analysis rests on:
//!
//! * **Chain picture** ([`lanczos`], [`dynamics`]): the Lanczos iteration
//!   rewrites the commutator flow as a tridiagonal hopping chain; evolving
//!   the seed operator along the chain and averaging the site index gives
//!   the Krylov complexity `C_K(t)`.
//! * **Geometric picture** ([`symmetry`], [`geometry`]): for su(2) and
//!   su(1,1) chains the evolved operator stays coherent, so the motion lives
//!   on a smooth manifold whose geodesics measure circuit complexity; height
//!   functions on the same manifold reproduce `C_K` as a volume statistic.
//!
//! Everything downstream of construction works in `f64`; inputs are
//! validated eagerly and all failures are reported through
//! [`error::KrylovError`].

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod lanczos;
pub mod opspace;
pub mod quad;
pub mod symmetry;

pub use error::{KrylovError, Result};
pub use opspace::{C64, CMatrix, CVector, OperatorAction, OperatorMatrix, OperatorState};
