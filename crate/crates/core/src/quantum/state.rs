use nalgebra::DVector;
use num_complex::Complex64;

use super::{c, hermitian_eigenvalues, CMatrix, HERMITIAN_TOL, PSD_TOL, TRACE_TOL};
use crate::error::{Error, Result};

/// A density matrix over a tensor product of computational bases.
///
/// `dims` records the factor structure; the reference (incoherent) basis is
/// always the product basis it induces, ordered row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        check_dims(&dims, matrix.nrows())?;
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension(format!("matrix is {}x{}, expected square", matrix.nrows(), matrix.ncols())));
        }
        let herm = super::max_abs_diff(&matrix, &matrix.adjoint());
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState { check: "hermitian", residual: herm });
        }
        let tr = (matrix.trace() - c(1.0, 0.0)).norm();
        if tr > TRACE_TOL {
            return Err(Error::InvalidState { check: "unit trace", residual: tr });
        }
        let min_ev = hermitian_eigenvalues(&matrix)[0];
        if min_ev < -PSD_TOL {
            return Err(Error::InvalidState { check: "positive semidefinite", residual: -min_ev });
        }
        Ok(Self { dims, matrix })
    }

    /// Wraps a matrix known to be a state up to rounding. The matrix is
    /// symmetrized so downstream eigensolvers see an exactly Hermitian input.
    pub(crate) fn from_raw(dims: Vec<usize>, matrix: CMatrix) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.nrows());
        let matrix = (&matrix + matrix.adjoint()) * c(0.5, 0.0);
        Self { dims, matrix }
    }

    /// Single-factor constructor.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(vec![n], matrix)
    }

    /// Diagonal state `diag(probs)` on a single factor.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let n = probs.len();
        let m = CMatrix::from_fn(n, n, |i, j| if i == j { c(probs[i], 0.0) } else { c(0.0, 0.0) });
        Self::new(vec![n], m)
    }

    /// `|i><i|` on a single factor of dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        PureState::basis(dim, i).to_density()
    }

    /// `I/d`, optionally with a factor structure.
    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        let m = CMatrix::identity(n, n) * c(1.0 / n as f64, 0.0);
        Self { dims: dims.to_vec(), matrix: m }
    }

    /// `|+_d><+_d|` with all phases zero.
    pub fn max_coherent(dim: usize) -> Self {
        PureState::max_coherent(dim).to_density()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Same matrix with a different factor structure of equal total size.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, self.dim())?;
        Ok(Self { dims, matrix: self.matrix.clone() })
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, w: f64, other: &DensityMatrix) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::Dimension("mixing states with different factor structure".into()));
        }
        let m = &self.matrix * c(w, 0.0) + &other.matrix * c(1.0 - w, 0.0);
        Ok(Self::from_raw(self.dims.clone(), m))
    }

    /// Largest entrywise deviation from another state of the same dimension.
    pub fn distance_max(&self, other: &DensityMatrix) -> f64 {
        super::max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].norm() <= tol))
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: DVector<Complex64>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState { check: "unit norm", residual: (norm - 1.0).abs() });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Normalizes `amplitudes`; fails only on the zero vector.
    pub fn normalized(dims: Vec<usize>, amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState { check: "nonzero norm", residual: norm });
        }
        Self::new(dims, amplitudes.unscale(norm))
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index {i} out of range for dimension {dim}");
        let mut v = DVector::from_element(dim, c(0.0, 0.0));
        v[i] = c(1.0, 0.0);
        Self { dims: vec![dim], amplitudes: v }
    }

    pub fn max_coherent(dim: usize) -> Self {
        let a = 1.0 / (dim as f64).sqrt();
        Self { dims: vec![dim], amplitudes: DVector::from_element(dim, c(a, 0.0)) }
    }

    /// `|+_d>` with explicit phases `theta_j`.
    pub fn max_coherent_with_phases(phases: &[f64]) -> Self {
        let dim = phases.len();
        let a = 1.0 / (dim as f64).sqrt();
        let v = DVector::from_iterator(dim, phases.iter().map(|&t| Complex64::from_polar(a, t)));
        Self { dims: vec![dim], amplitudes: v }
    }

    /// Kronecker product of state vectors.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let v = self.amplitudes.kronecker(&other.amplitudes);
        PureState { dims, amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn to_density(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::from_raw(self.dims.clone(), m)
    }
}

fn check_dims(dims: &[usize], n: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Dimension(format!("factor dimensions {dims:?} must be positive")));
    }
    let prod: usize = dims.iter().product();
    if prod != n {
        return Err(Error::Dimension(format!(
            "factor dimensions {dims:?} multiply to {prod}, matrix has dimension {n}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_psd() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        match DensityMatrix::from_matrix(m) {
            Err(Error::InvalidState { check, residual }) => {
                assert_eq!(check, "positive semidefinite");
                assert!((residual - 0.5).abs() < 1e-12);
            }
            other => panic!("expected PSD failure, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_trace_and_hermiticity() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.4, 0.0)]);
        assert!(matches!(DensityMatrix::from_matrix(m), Err(Error::InvalidState { check: "unit trace", .. })));
        let m = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(DensityMatrix::from_matrix(m), Err(Error::InvalidState { check: "hermitian", .. })));
    }

    #[test]
    fn dims_must_match() {
        let m = CMatrix::identity(4, 4) * c(0.25, 0.0);
        assert!(DensityMatrix::new(vec![2, 3], m.clone()).is_err());
        assert!(DensityMatrix::new(vec![2, 2], m).is_ok());
    }

    #[test]
    fn max_coherent_phases_do_not_change_modulus() {
        let p = PureState::max_coherent_with_phases(&[0.0, 1.0, 2.5]);
        for a in p.amplitudes().iter() {
            assert!((a.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
    }
}
