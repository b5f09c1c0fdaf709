use super::{c, max_abs_diff, CMatrix, DensityMatrix, COMPLETENESS_TOL};
use crate::error::{Error, Result};

/// A CPTP map in Kraus form, `rho -> sum_j K_j rho K_j^†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix>,
}

impl KrausChannel {
    /// Checks shapes and completeness `sum_j K_j^† K_j = 1`.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first =
            kraus.first().ok_or_else(|| Error::Dimension("a channel needs at least one Kraus operator".into()))?;
        let (dim_out, dim_in) = first.shape();
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::Dimension("Kraus operators must be nonempty".into()));
        }
        if let Some((idx, k)) = kraus.iter().enumerate().find(|(_, k)| k.shape() != (dim_out, dim_in)) {
            return Err(Error::Dimension(format!(
                "Kraus operator {idx} is {}x{}, expected {dim_out}x{dim_in}",
                k.nrows(),
                k.ncols()
            )));
        }
        let ch = Self { dim_in, dim_out, kraus };
        let residual = ch.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::InvalidChannel { check: "Kraus completeness", residual });
        }
        Ok(ch)
    }

    /// Single-Kraus channel `rho -> U rho U^†`.
    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim_in: dim, dim_out: dim, kraus: vec![CMatrix::identity(dim, dim)] }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Max-abs deviation of `sum_j K_j^† K_j` from the identity.
    pub fn completeness_residual(&self) -> f64 {
        let sum = self.kraus.iter().fold(CMatrix::zeros(self.dim_in, self.dim_in), |acc, k| acc + k.adjoint() * k);
        max_abs_diff(&sum, &CMatrix::identity(self.dim_in, self.dim_in))
    }

    /// The output keeps the input's factor structure when the channel is
    /// dimension preserving; otherwise it is a single factor of `dim_out`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_in {
            return Err(Error::Dimension(format!(
                "channel acts on dimension {}, state has dimension {}",
                self.dim_in,
                rho.dim()
            )));
        }
        let out = self
            .kraus
            .iter()
            .fold(CMatrix::zeros(self.dim_out, self.dim_out), |acc, k| acc + k * rho.matrix() * k.adjoint());
        let dims = if self.dim_in == self.dim_out { rho.dims().to_vec() } else { vec![self.dim_out] };
        Ok(DensityMatrix::from_raw(dims, out))
    }

    /// `Phi ⊗ 1_k` with Kraus operators `K_j ⊗ 1_k`.
    pub fn extend(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("ancilla dimension must be at least 1".into()));
        }
        let id = CMatrix::identity(k, k);
        Ok(Self {
            dim_in: self.dim_in * k,
            dim_out: self.dim_out * k,
            kraus: self.kraus.iter().map(|op| op.kronecker(&id)).collect(),
        })
    }

    /// Applies `Phi ⊗ 1` to a bipartite state whose first factor matches the
    /// channel input. The output carries `[dim_out, k]` factors.
    pub fn apply_on_first(&self, rho_ab: &DensityMatrix) -> Result<DensityMatrix> {
        let dims = rho_ab.dims();
        if dims.len() != 2 || dims[0] != self.dim_in {
            return Err(Error::Dimension(format!(
                "expected a bipartite state with first factor {}, got factors {dims:?}",
                self.dim_in
            )));
        }
        let k = dims[1];
        let out = self.extend(k)?.apply(rho_ab)?;
        Ok(DensityMatrix::from_raw(vec![self.dim_out, k], out.into_matrix()))
    }

    pub fn scaled_kraus(ops: Vec<(f64, CMatrix)>) -> Result<Self> {
        Self::new(ops.into_iter().map(|(w, m)| m * c(w, 0.0)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{partial_trace, tensor, PureState};
    use nalgebra::DVector;

    fn hadamard() -> KrausChannel {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        KrausChannel::unitary(CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])).unwrap()
    }

    fn erasing() -> KrausChannel {
        let mut k0 = CMatrix::zeros(2, 2);
        k0[(0, 0)] = c(1.0, 0.0);
        let mut k1 = CMatrix::zeros(2, 2);
        k1[(0, 1)] = c(1.0, 0.0);
        KrausChannel::new(vec![k0, k1]).unwrap()
    }

    #[test]
    fn rejects_incomplete_kraus() {
        let k = CMatrix::identity(2, 2) * c(0.9, 0.0);
        match KrausChannel::new(vec![k]) {
            Err(Error::InvalidChannel { residual, .. }) => assert!((residual - 0.19).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert!(KrausChannel::new(vec![]).is_err());
        assert!(KrausChannel::new(vec![CMatrix::identity(2, 2), CMatrix::zeros(3, 2)]).is_err());
    }

    #[test]
    fn erasing_maps_everything_to_ground() {
        let out = erasing().apply(&DensityMatrix::max_coherent(2)).unwrap();
        assert!(out.distance_max(&DensityMatrix::basis(2, 0)) < 1e-15);
    }

    #[test]
    fn identity_and_hadamard() {
        let rho = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert_eq!(KrausChannel::identity(2).apply(&rho).unwrap(), rho);
        let out = hadamard().apply(&DensityMatrix::basis(2, 0)).unwrap();
        assert!(out.distance_max(&DensityMatrix::max_coherent(2)) < 1e-15);
        assert!(hadamard().apply(&DensityMatrix::basis(3, 0)).is_err());
    }

    #[test]
    fn extended_erasing_on_psi() {
        let v = DVector::from_vec(vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0)]);
        let psi = PureState::new(vec![2, 2], v).unwrap().to_density();
        let out = erasing().apply_on_first(&psi).unwrap();
        let want = tensor(&DensityMatrix::basis(2, 0), &DensityMatrix::maximally_mixed(&[2]));
        assert!(out.distance_max(&want) < 1e-15);
    }

    #[test]
    fn extend_by_one_is_the_same_map() {
        let h = hadamard();
        let h1 = h.extend(1).unwrap();
        assert_eq!(h1.kraus(), h.kraus());
        assert!(h.extend(0).is_err());
    }

    #[test]
    fn extended_hadamard_on_bell() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(vec![2, 2], DVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]))
            .unwrap()
            .to_density();
        let out = hadamard().apply_on_first(&bell).unwrap();
        // (|+0> + |-1>)/sqrt2 = (|00> + |01> + |10> - |11>)/2
        let want =
            PureState::new(vec![2, 2], DVector::from_vec(vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0)]))
                .unwrap()
                .to_density();
        assert!(out.distance_max(&want) < 1e-15);
        assert!(partial_trace(&out, &[1]).unwrap().distance_max(&partial_trace(&bell, &[1]).unwrap()) < 1e-15);
    }
}
