//! Seeded generators for states, channels and QI decompositions.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::coherence::QIDecomposition;
use crate::quantum::{c, CMatrix, DensityMatrix, KrausChannel, PureState};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer of `seed ^ tag`, used to derive independent
/// sub-seeds (per restart, per k, per claim).
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
}

/// Ginibre-distributed mixed state `G G^† / tr(G G^†)`.
pub fn random_state<R: Rng>(dims: &[usize], rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = gaussian_matrix(n, n, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_raw(dims.to_vec(), m.unscale(tr))
}

/// Haar-random pure state.
pub fn random_pure<R: Rng>(dims: &[usize], rng: &mut R) -> PureState {
    let n: usize = dims.iter().product();
    let v = DVector::from_iterator(
        n,
        (0..n).map(|_| c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))),
    );
    PureState::normalized(dims.to_vec(), v).expect("a Gaussian vector is nonzero almost surely")
}

/// Orthonormal columns of a complex-Gaussian `rows x cols` matrix by
/// modified Gram-Schmidt; the phase convention makes the result Haar.
pub fn random_isometry<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    let mut v = gaussian_matrix(rows, cols, rng);
    for j in 0..cols {
        for k in 0..j {
            let proj = v.column(k).dotc(&v.column(j));
            let col_k = v.column(k).into_owned();
            let mut col_j = v.column_mut(j);
            col_j -= col_k * proj;
        }
        let norm = v.column(j).norm();
        v.column_mut(j).unscale_mut(norm);
    }
    v
}

/// Stinespring channel: isometry `V: C^dim -> C^dim ⊗ C^env`, Kraus
/// operators `K_e = (1 ⊗ <e|) V`.
pub fn random_channel<R: Rng>(dim: usize, env_dim: usize, rng: &mut R) -> KrausChannel {
    let v = random_isometry(dim * env_dim, dim, rng);
    let kraus = (0..env_dim).map(|e| CMatrix::from_fn(dim, dim, |i, j| v[(i * env_dim + e, j)])).collect();
    KrausChannel::new(kraus).expect("isometry columns are orthonormal")
}

pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    random_isometry(dim, dim, rng)
}

/// Random weights (normalized exponentials) and Ginibre blocks.
pub fn random_qi_decomposition<R: Rng>(dim_a: usize, dim_b: usize, rng: &mut R) -> QIDecomposition {
    let raw: Vec<f64> = (0..dim_b).map(|_| -rng.random::<f64>().ln()).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    let blocks = (0..dim_b).map(|_| random_state(&[dim_a], rng)).collect();
    QIDecomposition::new(weights, blocks).expect("weights are normalized")
}
