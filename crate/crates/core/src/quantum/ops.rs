use super::{c, digits, CMatrix, DensityMatrix};
use crate::error::{Error, Result};

/// Kronecker product; factor lists are concatenated.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    let mut dims = a.dims().to_vec();
    dims.extend_from_slice(b.dims());
    DensityMatrix::from_raw(dims, a.matrix().kronecker(b.matrix()))
}

/// Reduced state on the factors listed in `keep` (kept in their original
/// order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if dims.len() < 2 {
        return Err(Error::Dimension("partial trace needs at least two factors".into()));
    }
    if keep.is_empty() {
        return Err(Error::Dimension("partial trace must keep at least one factor".into()));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Dimension(format!("subsystem set {keep:?} invalid for {} factors", dims.len())));
    }
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let n_out: usize = kept_dims.iter().product();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();

    let n = rho.dim();
    let mut di = vec![0; dims.len()];
    let mut dj = vec![0; dims.len()];
    let mut out = CMatrix::zeros(n_out, n_out);
    for i in 0..n {
        digits(i, dims, &mut di);
        let ri = compose(&di, &kept, dims);
        for j in 0..n {
            digits(j, dims, &mut dj);
            if traced.iter().all(|&t| di[t] == dj[t]) {
                let rj = compose(&dj, &kept, dims);
                out[(ri, rj)] += rho.get(i, j);
            }
        }
    }
    Ok(DensityMatrix::from_raw(kept_dims, out))
}

fn compose(digits: &[usize], factors: &[usize], dims: &[usize]) -> usize {
    factors.iter().fold(0, |acc, &f| acc * dims[f] + digits[f])
}

/// Complete dephasing in the product basis.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let n = rho.dim();
    let m = CMatrix::from_fn(n, n, |i, j| if i == j { c(rho.get(i, i).re, 0.0) } else { c(0.0, 0.0) });
    DensityMatrix::from_raw(rho.dims().to_vec(), m)
}

/// Dephasing of a single factor: `sum_i (1 ⊗ |i><i| ⊗ 1) rho (1 ⊗ |i><i| ⊗ 1)`.
pub fn dephase_subsystem(rho: &DensityMatrix, subsystem: usize) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if subsystem >= dims.len() {
        return Err(Error::Dimension(format!("subsystem {subsystem} out of range for {} factors", dims.len())));
    }
    let n = rho.dim();
    let mut di = vec![0; dims.len()];
    let mut dj = vec![0; dims.len()];
    let mut out = rho.matrix().clone();
    for i in 0..n {
        digits(i, dims, &mut di);
        for j in 0..n {
            digits(j, dims, &mut dj);
            if di[subsystem] != dj[subsystem] {
                out[(i, j)] = c(0.0, 0.0);
            }
        }
    }
    Ok(DensityMatrix::from_raw(dims.to_vec(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::PureState;
    use nalgebra::DVector;

    const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> DensityMatrix {
        let v = DVector::from_vec(vec![c(S2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(S2, 0.0)]);
        PureState::new(vec![2, 2], v).unwrap().to_density()
    }

    /// (|0+> + |1->)/sqrt2 with amplitudes (1/2, 1/2, 1/2, -1/2).
    fn psi_ab() -> DensityMatrix {
        let v = DVector::from_vec(vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0)]);
        PureState::new(vec![2, 2], v).unwrap().to_density()
    }

    #[test]
    fn tensor_basis_and_identity() {
        let zz = tensor(&DensityMatrix::basis(2, 0), &DensityMatrix::basis(2, 0));
        assert_eq!(zz.dims(), &[2, 2]);
        assert_eq!(zz.distance_max(&DensityMatrix::basis(4, 0)), 0.0);

        let mm = tensor(&DensityMatrix::maximally_mixed(&[2]), &DensityMatrix::maximally_mixed(&[2]));
        assert!(mm.distance_max(&DensityMatrix::maximally_mixed(&[4])) < 1e-15);
    }

    #[test]
    fn tensor_plus_plus_is_uniform() {
        let pp = tensor(&DensityMatrix::max_coherent(2), &DensityMatrix::max_coherent(2));
        for z in pp.matrix().iter() {
            assert!((z - c(0.25, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_examples() {
        let a = partial_trace(&bell(), &[0]).unwrap();
        assert!(a.distance_max(&DensityMatrix::maximally_mixed(&[2])) < 1e-15);

        let rho_a = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let prod = tensor(&rho_a, &DensityMatrix::max_coherent(3));
        assert!(partial_trace(&prod, &[0]).unwrap().distance_max(&rho_a) < 1e-15);

        let b = partial_trace(&psi_ab(), &[1]).unwrap();
        assert!(b.distance_max(&DensityMatrix::maximally_mixed(&[2])) < 1e-15);
    }

    #[test]
    fn partial_trace_three_factors_keeps_order() {
        let a = DensityMatrix::diagonal(&[0.2, 0.8]).unwrap();
        let b = DensityMatrix::max_coherent(3);
        let cc = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        let abc = tensor(&tensor(&a, &b), &cc);
        let ac = partial_trace(&abc, &[2, 0]).unwrap();
        assert_eq!(ac.dims(), &[2, 2]);
        assert!(ac.distance_max(&tensor(&a, &cc)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_index() {
        assert!(partial_trace(&bell(), &[2]).is_err());
        assert!(partial_trace(&bell(), &[]).is_err());
        assert!(partial_trace(&DensityMatrix::basis(2, 0), &[0]).is_err());
    }

    #[test]
    fn dephase_examples() {
        let d = dephase(&DensityMatrix::max_coherent(2));
        assert!(d.distance_max(&DensityMatrix::maximally_mixed(&[2])) < 1e-15);
        let diag = DensityMatrix::diagonal(&[0.1, 0.2, 0.7]).unwrap();
        assert_eq!(dephase(&diag).distance_max(&diag), 0.0);
        let d = dephase(&psi_ab());
        assert!(d.distance_max(&DensityMatrix::maximally_mixed(&[2, 2])) < 1e-15);
    }

    #[test]
    fn dephase_subsystem_examples() {
        let rho_a = DensityMatrix::max_coherent(2);
        let out = dephase_subsystem(&tensor(&rho_a, &DensityMatrix::max_coherent(2)), 1).unwrap();
        let want = tensor(&rho_a, &DensityMatrix::maximally_mixed(&[2]));
        assert!(out.distance_max(&want) < 1e-15);

        let out = dephase_subsystem(&bell(), 1).unwrap();
        let mut want = CMatrix::zeros(4, 4);
        want[(0, 0)] = c(0.5, 0.0);
        want[(3, 3)] = c(0.5, 0.0);
        assert!(crate::quantum::max_abs_diff(out.matrix(), &want) < 1e-15);

        let rho = psi_ab();
        let both = dephase_subsystem(&dephase_subsystem(&rho, 1).unwrap(), 0).unwrap();
        assert!(both.distance_max(&dephase(&rho)) < 1e-15);
        assert!(dephase_subsystem(&rho, 2).is_err());
    }
}
