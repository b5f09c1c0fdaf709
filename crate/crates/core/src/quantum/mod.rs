//! Dense complex-matrix primitives: states, channels, tensor structure,
//! dephasing and entropies. Everything is in bits.

mod channel;
mod entropy;
pub mod json;
mod ops;
mod state;

pub use channel::KrausChannel;
pub(crate) use entropy::shannon_bits;
pub use entropy::{relative_entropy, von_neumann_entropy, ExtendedReal};
pub use ops::{dephase, dephase_subsystem, partial_trace, tensor};
pub use state::{DensityMatrix, PureState};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Hermiticity tolerance for states (max-abs entrywise deviation).
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Unit-trace tolerance for states.
pub const TRACE_TOL: f64 = 1e-10;
/// Lowest admissible eigenvalue of a state.
pub const PSD_TOL: f64 = 1e-10;
/// Kraus completeness tolerance.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Eigenvalue cutoff for entropy clipping and support detection.
pub const EIGEN_CUTOFF: f64 = 1e-12;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Row-major digits of `index` in the mixed radix `dims`.
pub(crate) fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
}
