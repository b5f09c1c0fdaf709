use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{hermitian_eigenvalues, DensityMatrix, EIGEN_CUTOFF};
use crate::error::{Error, Result};

/// A real number or `+inf`. Serialized as a JSON number, or the string
/// `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::Infinity)
    }

    /// `value <= self + tol`, always true against `+inf`.
    pub fn admits(self, value: f64, tol: f64) -> bool {
        match self {
            ExtendedReal::Finite(b) => value <= b + tol,
            ExtendedReal::Infinity => true,
        }
    }
}

impl std::fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => s.serialize_f64(*v),
            ExtendedReal::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ExtendedReal::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(ExtendedReal::Infinity),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }
}

/// Shannon entropy in bits of a probability list, with `0 log 0 = 0` and
/// entries clipped to `[0, 1]`.
pub(crate) fn shannon_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    let h: f64 =
        probs.into_iter().map(|p| p.clamp(0.0, 1.0)).filter(|&p| p > EIGEN_CUTOFF).map(|p| -p * p.log2()).sum();
    h.max(0.0)
}

/// `S(rho) = -tr rho log2 rho`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let s = shannon_bits(hermitian_eigenvalues(rho.matrix()));
    s.min((rho.dim() as f64).log2())
}

/// `S(rho || sigma) = tr rho log2 rho - tr rho log2 sigma`, infinite when the
/// support of `rho` is not contained in that of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ExtendedReal> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!("relative entropy between dimensions {} and {}", rho.dim(), sigma.dim())));
    }
    let eig = sigma.matrix().clone().symmetric_eigen();
    let mut cross = 0.0;
    for (k, &mu) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if mu <= EIGEN_CUTOFF {
            if weight > EIGEN_CUTOFF {
                return Ok(ExtendedReal::Infinity);
            }
            continue;
        }
        cross += weight * mu.log2();
    }
    Ok(ExtendedReal::Finite(-von_neumann_entropy(rho) - cross))
}
