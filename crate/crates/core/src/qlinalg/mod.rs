//! Dense complex linear algebra for one to three qubits.
//!
//! Basis indices are big-endian: for three qubits the index `b2 b1 b0` has
//! qubit A on `b2`, B on `b1` and C on `b0`, matching kets written `|abc⟩`.

mod eigen;
mod matrix;
mod state;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, psd_sqrt, HermitianEigen, JACOBI_TOL, MAX_SWEEPS};
pub use matrix::{ComplexMatrix, C64};
pub use state::{partial_trace, validate_density, DensityMatrix, PureState, Tolerances, A, B, C};

pub(crate) use matrix::{ONE, ZERO};
