//! Coherence quantifiers in the computational product basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{c, tensor, CMatrix, DensityMatrix};

/// A state counts as incoherent when its l1 coherence is at most this.
pub const INCOHERENCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoherenceMeasure {
    /// `C_r(rho) = S(Delta rho) - S(rho)`.
    RelEntropy,
    /// Sum of moduli of off-diagonal entries.
    L1,
}

impl CoherenceMeasure {
    pub fn name(self) -> &'static str {
        match self {
            CoherenceMeasure::RelEntropy => "rel-entropy",
            CoherenceMeasure::L1 => "l1",
        }
    }

    /// Coherence of `|+_d><+_d|`, the largest value on dimension `d`.
    pub fn max_value(self, d: usize) -> f64 {
        match self {
            CoherenceMeasure::RelEntropy => (d as f64).log2(),
            CoherenceMeasure::L1 => d as f64 - 1.0,
        }
    }
}

impl std::str::FromStr for CoherenceMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rel-entropy" | "relative-entropy" | "cr" => Ok(CoherenceMeasure::RelEntropy),
            "l1" | "l1-norm" => Ok(CoherenceMeasure::L1),
            other => Err(Error::InvalidParameter(format!("unknown coherence measure {other:?}"))),
        }
    }
}

/// Relative entropy of coherence in bits, clamped at zero.
pub fn c_rel_entropy(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let s_diag = crate::quantum::shannon_bits((0..n).map(|i| rho.get(i, i).re));
    let s = crate::quantum::von_neumann_entropy(rho);
    (s_diag - s).max(0.0)
}

pub fn c_l1(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += rho.get(i, j).norm();
            }
        }
    }
    sum
}

pub fn coherence(measure: CoherenceMeasure, rho: &DensityMatrix) -> f64 {
    match measure {
        CoherenceMeasure::RelEntropy => c_rel_entropy(rho),
        CoherenceMeasure::L1 => c_l1(rho),
    }
}

pub fn is_incoherent(rho: &DensityMatrix) -> bool {
    c_l1(rho) <= INCOHERENCE_TOL
}

/// A quantum-incoherent state `sum_i p_i rho_i ⊗ |i><i|`; the B label of
/// each block is its position.
#[derive(Debug, Clone)]
pub struct QIDecomposition {
    weights: Vec<f64>,
    blocks: Vec<DensityMatrix>,
}

impl QIDecomposition {
    pub fn new(weights: Vec<f64>, blocks: Vec<DensityMatrix>) -> Result<Self> {
        if weights.is_empty() || weights.len() != blocks.len() {
            return Err(Error::Dimension(format!("{} weights for {} blocks", weights.len(), blocks.len())));
        }
        if let Some(w) = weights.iter().find(|w| **w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidParameter(format!("negative or non-finite weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, expected 1")));
        }
        let d = blocks[0].dim();
        if blocks.iter().any(|b| b.dim() != d) {
            return Err(Error::Dimension("QI blocks must share a dimension".into()));
        }
        Ok(Self { weights, blocks })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn blocks(&self) -> &[DensityMatrix] {
        &self.blocks
    }

    pub fn dim_a(&self) -> usize {
        self.blocks[0].dim()
    }

    pub fn dim_b(&self) -> usize {
        self.blocks.len()
    }
}

pub fn qi_state(decomp: &QIDecomposition) -> DensityMatrix {
    let (da, db) = (decomp.dim_a(), decomp.dim_b());
    let mut m = CMatrix::zeros(da * db, da * db);
    for (i, (p, block)) in decomp.weights.iter().zip(&decomp.blocks).enumerate() {
        let proj = DensityMatrix::basis(db, i);
        m += tensor(block, &proj).matrix() * c(*p, 0.0);
    }
    DensityMatrix::from_raw(vec![da, db], m)
}

/// `|C_r(qi_state) - sum_i p_i C_r(rho_i)|`.
pub fn qi_coherence_additivity_check(decomp: &QIDecomposition) -> f64 {
    let lhs = c_rel_entropy(&qi_state(decomp));
    let rhs: f64 = decomp.weights.iter().zip(&decomp.blocks).map(|(p, b)| p * c_rel_entropy(b)).sum();
    (lhs - rhs).abs()
}
