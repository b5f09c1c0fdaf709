use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{c, tensor, CMatrix, DensityMatrix, PureState};

/// Smooth total maps from `R^param_len` onto families of states.
///
/// Every real vector decodes to a valid state; degenerate inputs (a zero
/// vector) fall back to a fixed state instead of failing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StateParameterization {
    /// Normalized complex vector, `2 dim` reals.
    PureState { dim: usize },
    /// `T T^† / tr(T T^†)` for complex `T`, `2 dim^2` reals.
    MixedState { dim: usize },
    /// Two mixed factors, tensored.
    ProductAB { dim_a: usize, dim_b: usize },
    /// `terms` product terms mixed with softmax weights.
    SeparableMixture { dim_a: usize, dim_b: usize, terms: usize },
    /// A pure state on the composite with factors `[dim_a, dim_b]`.
    BipartitePure { dim_a: usize, dim_b: usize },
    /// A mixed state on the composite with factors `[dim_a, dim_b]`.
    BipartiteMixed { dim_a: usize, dim_b: usize },
    /// Diagonal states with softmax weights, `dim` reals.
    Incoherent { dim: usize },
}

impl StateParameterization {
    /// The separable family with the default term count `dim_a * dim_b`.
    pub fn separable(dim_a: usize, dim_b: usize) -> Self {
        Self::SeparableMixture { dim_a, dim_b, terms: dim_a * dim_b }
    }

    pub fn param_len(&self) -> usize {
        use StateParameterization::*;
        match *self {
            PureState { dim } => 2 * dim,
            MixedState { dim } => 2 * dim * dim,
            ProductAB { dim_a, dim_b } => 2 * dim_a * dim_a + 2 * dim_b * dim_b,
            SeparableMixture { dim_a, dim_b, terms } => terms * (2 * dim_a * dim_a + 2 * dim_b * dim_b + 1),
            BipartitePure { dim_a, dim_b } => 2 * dim_a * dim_b,
            BipartiteMixed { dim_a, dim_b } => 2 * (dim_a * dim_b).pow(2),
            Incoherent { dim } => dim,
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        use StateParameterization::*;
        match *self {
            PureState { dim } | MixedState { dim } | Incoherent { dim } => vec![dim],
            ProductAB { dim_a, dim_b }
            | SeparableMixture { dim_a, dim_b, .. }
            | BipartitePure { dim_a, dim_b }
            | BipartiteMixed { dim_a, dim_b } => vec![dim_a, dim_b],
        }
    }

    pub fn label(&self) -> &'static str {
        use StateParameterization::*;
        match self {
            PureState { .. } => "pure_state",
            MixedState { .. } => "mixed_state",
            ProductAB { .. } => "product_ab",
            SeparableMixture { .. } => "separable_mixture",
            BipartitePure { .. } => "bipartite_pure",
            BipartiteMixed { .. } => "bipartite_mixed",
            Incoherent { .. } => "incoherent",
        }
    }

    pub fn decode(&self, x: &[f64]) -> Result<DensityMatrix> {
        if x.len() != self.param_len() {
            return Err(Error::Dimension(format!(
                "{} expects {} parameters, got {}",
                self.label(),
                self.param_len(),
                x.len()
            )));
        }
        Ok(self.decode_unchecked(x))
    }

    pub(crate) fn decode_unchecked(&self, x: &[f64]) -> DensityMatrix {
        use StateParameterization::*;
        let dims = self.dims();
        match *self {
            PureState { .. } | BipartitePure { .. } => decode_pure(dims, x),
            MixedState { .. } | BipartiteMixed { .. } => decode_mixed(dims, x),
            ProductAB { dim_a, dim_b } => decode_product(dim_a, dim_b, x),
            SeparableMixture { dim_a, dim_b, terms } => {
                let block = 2 * dim_a * dim_a + 2 * dim_b * dim_b;
                let w = softmax(&x[terms * block..]);
                let n = dim_a * dim_b;
                let mut m = CMatrix::zeros(n, n);
                for (t, wt) in w.iter().enumerate() {
                    let term = decode_product(dim_a, dim_b, &x[t * block..(t + 1) * block]);
                    m += term.matrix() * c(*wt, 0.0);
                }
                DensityMatrix::from_raw(dims, m)
            }
            Incoherent { dim } => {
                let w = softmax(x);
                let m = CMatrix::from_fn(dim, dim, |i, j| if i == j { c(w[i], 0.0) } else { c(0.0, 0.0) });
                DensityMatrix::from_raw(dims, m)
            }
        }
    }

    /// A parameter vector decoding to `rho` (up to rounding). Defined for the
    /// mixed-type families; `rho` must have this family's total dimension.
    pub fn encode_mixed(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        use StateParameterization::*;
        match *self {
            MixedState { .. } | BipartiteMixed { .. } => {}
            _ => return Err(Error::InvalidParameter(format!("{} is not a mixed family", self.label()))),
        }
        let n: usize = self.dims().iter().product();
        if rho.dim() != n {
            return Err(Error::Dimension(format!("state of dimension {} for family of dimension {n}", rho.dim())));
        }
        Ok(flatten(&hermitian_sqrt(rho.matrix())))
    }

    /// A parameter vector decoding to `|psi><psi|`, for the pure families.
    pub fn encode_pure(&self, psi: &PureState) -> Result<Vec<f64>> {
        use StateParameterization::*;
        match *self {
            PureState { .. } | BipartitePure { .. } => {}
            _ => return Err(Error::InvalidParameter(format!("{} is not a pure family", self.label()))),
        }
        if psi.dim() != self.param_len() / 2 {
            return Err(Error::Dimension(format!("vector of dimension {} for {}", psi.dim(), self.label())));
        }
        Ok(psi.amplitudes().iter().flat_map(|z| [z.re, z.im]).collect())
    }

    /// Product and separable families: every term set to `rho_a ⊗ rho_b` with
    /// equal weights.
    pub fn encode_product(&self, rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<Vec<f64>> {
        use StateParameterization::*;
        let (dim_a, dim_b, terms) = match *self {
            ProductAB { dim_a, dim_b } => (dim_a, dim_b, 0),
            SeparableMixture { dim_a, dim_b, terms } => (dim_a, dim_b, terms),
            _ => return Err(Error::InvalidParameter(format!("{} is not a product family", self.label()))),
        };
        if rho_a.dim() != dim_a || rho_b.dim() != dim_b {
            return Err(Error::Dimension("product factors do not match the family".into()));
        }
        let mut block = flatten(&hermitian_sqrt(rho_a.matrix()));
        block.extend(flatten(&hermitian_sqrt(rho_b.matrix())));
        if terms == 0 {
            return Ok(block);
        }
        let mut x = Vec::with_capacity(self.param_len());
        for _ in 0..terms {
            x.extend_from_slice(&block);
        }
        x.extend(std::iter::repeat_n(0.0, terms));
        Ok(x)
    }
}

fn softmax(x: &[f64]) -> Vec<f64> {
    let max = x.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    let max = if max.is_finite() { max } else { 0.0 };
    let e: Vec<f64> = x.iter().map(|v| if v.is_finite() { (v - max).exp() } else { 0.0 }).collect();
    let total: f64 = e.iter().sum();
    if total > 0.0 && total.is_finite() {
        e.iter().map(|v| v / total).collect()
    } else {
        vec![1.0 / x.len() as f64; x.len()]
    }
}

fn complex_entries(x: &[f64]) -> impl Iterator<Item = num_complex::Complex64> + '_ {
    x.chunks_exact(2).map(|p| c(p[0], p[1]))
}

fn decode_pure(dims: Vec<usize>, x: &[f64]) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let v = DVector::from_iterator(n, complex_entries(x));
    let norm = v.norm();
    if norm > 1e-300 && norm.is_finite() {
        let v = v.unscale(norm);
        DensityMatrix::from_raw(dims, &v * v.adjoint())
    } else {
        DensityMatrix::basis(n, 0).with_dims(dims).expect("dims match")
    }
}

fn decode_mixed(dims: Vec<usize>, x: &[f64]) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let t = CMatrix::from_row_iterator(n, n, complex_entries(x));
    let m = &t * t.adjoint();
    let tr = m.trace().re;
    if tr > 1e-300 && tr.is_finite() {
        DensityMatrix::from_raw(dims, m.unscale(tr))
    } else {
        DensityMatrix::maximally_mixed(&dims)
    }
}

fn decode_product(dim_a: usize, dim_b: usize, x: &[f64]) -> DensityMatrix {
    let split = 2 * dim_a * dim_a;
    let a = decode_mixed(vec![dim_a], &x[..split]);
    let b = decode_mixed(vec![dim_b], &x[split..]);
    tensor(&a, &b)
}

fn hermitian_sqrt(m: &CMatrix) -> CMatrix {
    let eig = m.clone().symmetric_eigen();
    let sq = eig.eigenvalues.map(|l| c(l.max(0.0).sqrt(), 0.0));
    &eig.eigenvectors * CMatrix::from_diagonal(&sq) * eig.eigenvectors.adjoint()
}

/// Row-major `[re, im]` flattening, the inverse of `decode_mixed`'s reader.
fn flatten(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    (0..n).flat_map(|i| (0..n).flat_map(move |j| [m[(i, j)].re, m[(i, j)].im])).collect()
}
