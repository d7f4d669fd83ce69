//! The normalized dynamic system on ratio vectors.
//!
//! Three numeric towers share one generic implementation through [`Scalar`]:
//! exact `BigRational` for verification-sized runs, `f64`, and
//! [`DoubleDouble`] as a compensated reference for long products.

mod dd;
mod eigen;
mod matrix;
mod ratio;
mod scalar;
mod trajectory;

pub use dd::DoubleDouble;
pub use eigen::{eigendecomposition, system_dense, DenseMatrix, EigenDecomposition};
pub use matrix::{
    a_product, build_matrix, transfer_matrix, transfer_with_checkpoints, SystemMatrix,
    TransferMatrix,
};
pub use ratio::{
    asymptotic_formula, asymptotic_ratio, crossover_a2, eigen_coefficient, evolve, truncated_ratio,
    RatioVector,
};
pub use scalar::{rational_to_f64, Scalar};
pub use trajectory::{decade_checkpoints, trajectory_csv};

/// Numeric representation for evolution and long products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericMode {
    Exact,
    Float,
    /// Double-double; about 32 significant digits.
    Compensated,
}
