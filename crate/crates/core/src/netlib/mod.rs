//! Linear-optical networks: unitary matrices, couplers, and their factorisations.

mod builders;
mod embed;
mod haar;
mod matrix;
mod reck;

pub use builders::{beamsplitter_unitary, phase_screen, qft_matrix, wrap_phase, BeamsplitterElement};
pub use embed::embed_su_in_so;
pub use haar::{haar_orthogonal, haar_unitary, reck_random_unitary};
pub use matrix::{ComplexMatrix, MatrixRecord, UnitaryMatrix};
pub use reck::{reck_decompose, ReckDecomposition};
