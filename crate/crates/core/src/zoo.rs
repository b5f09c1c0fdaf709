//! Named channels and their JSON spec form.
//!
//! ```json
//! {"name": "erasing", "dim": 2, "target": 0}
//! {"name": "max_cohering", "dim": 3}
//! {"name": "hadamard"}
//! {"name": "unitary", "matrix": [[[1,0],[0,0]], [[0,0],[1,0]]]}
//! {"name": "completely_dephasing", "dim": 2}
//! {"name": "depolarizing", "dim": 2, "p": 0.5}
//! {"name": "random", "dim": 2, "env_dim": 2, "seed": 7}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::json::{matrix_from_json, JsonMatrix};
use crate::quantum::{c, CMatrix, KrausChannel, PureState};
use crate::random;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    /// Replaces every input by `|target><target|`.
    Erasing {
        dim: usize,
        #[serde(default)]
        target: usize,
    },
    /// Kraus operators `|+_d><i|`.
    MaxCohering {
        dim: usize,
    },
    Unitary {
        matrix: JsonMatrix,
    },
    Hadamard,
    CompletelyDephasing {
        dim: usize,
    },
    /// `rho -> (1 - p) rho + p I/d`.
    Depolarizing {
        dim: usize,
        p: f64,
    },
    /// Stinespring isometry drawn from `seed`; `env_dim` defaults to `dim`.
    Random {
        dim: usize,
        #[serde(default)]
        env_dim: Option<usize>,
        seed: u64,
    },
}

fn positive(dim: usize, what: &str) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter(format!("{what} must be positive")));
    }
    Ok(())
}

fn ket_bra(left: &nalgebra::DVector<num_complex::Complex64>, col: usize, dim_in: usize) -> CMatrix {
    let mut m = CMatrix::zeros(left.len(), dim_in);
    m.set_column(col, left);
    m
}

pub fn hadamard_matrix() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
}

/// Parses either a Kraus channel or a named spec, told apart by the
/// presence of a `name` key.
pub fn parse_channel(text: &str) -> Result<KrausChannel> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("name").is_some() {
        let spec: ChannelSpec = serde_json::from_value(value)?;
        build(&spec)
    } else {
        crate::quantum::json::channel_from_json(text)
    }
}

pub fn build(spec: &ChannelSpec) -> Result<KrausChannel> {
    match spec {
        ChannelSpec::Erasing { dim, target } => {
            positive(*dim, "dim")?;
            if target >= dim {
                return Err(Error::InvalidParameter(format!("target {target} out of range for dim {dim}")));
            }
            let t = PureState::basis(*dim, *target);
            KrausChannel::new((0..*dim).map(|i| ket_bra(t.amplitudes(), i, *dim)).collect())
        }
        ChannelSpec::MaxCohering { dim } => {
            positive(*dim, "dim")?;
            let plus = PureState::max_coherent(*dim);
            KrausChannel::new((0..*dim).map(|i| ket_bra(plus.amplitudes(), i, *dim)).collect())
        }
        ChannelSpec::Unitary { matrix } => {
            let n = matrix.len();
            positive(n, "unitary dimension")?;
            KrausChannel::unitary(matrix_from_json(matrix, n, n, "matrix")?)
        }
        ChannelSpec::Hadamard => KrausChannel::unitary(hadamard_matrix()),
        ChannelSpec::CompletelyDephasing { dim } => {
            positive(*dim, "dim")?;
            KrausChannel::new((0..*dim).map(|i| ket_bra(PureState::basis(*dim, i).amplitudes(), i, *dim)).collect())
        }
        ChannelSpec::Depolarizing { dim, p } => {
            positive(*dim, "dim")?;
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidParameter(format!("depolarizing p = {p} outside [0, 1]")));
            }
            // sqrt(1-p) 1 plus sqrt(p/d) |i><j| for all i, j
            let d = *dim;
            let mut ops = vec![CMatrix::identity(d, d) * c((1.0 - p).sqrt(), 0.0)];
            let w = (p / d as f64).sqrt();
            for i in 0..d {
                for j in 0..d {
                    let mut m = CMatrix::zeros(d, d);
                    m[(i, j)] = c(w, 0.0);
                    ops.push(m);
                }
            }
            KrausChannel::new(ops)
        }
        ChannelSpec::Random { dim, env_dim, seed } => {
            positive(*dim, "dim")?;
            let env = env_dim.unwrap_or(*dim);
            positive(env, "env_dim")?;
            Ok(random::random_channel(*dim, env, &mut random::rng(*seed)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{dephase, DensityMatrix};

    fn all_specs() -> Vec<ChannelSpec> {
        vec![
            ChannelSpec::Erasing { dim: 3, target: 1 },
            ChannelSpec::MaxCohering { dim: 4 },
            ChannelSpec::Hadamard,
            ChannelSpec::CompletelyDephasing { dim: 3 },
            ChannelSpec::Depolarizing { dim: 2, p: 0.3 },
            ChannelSpec::Random { dim: 3, env_dim: Some(2), seed: 11 },
            ChannelSpec::Random { dim: 2, env_dim: None, seed: 5 },
        ]
    }

    #[test]
    fn every_spec_is_complete() {
        for spec in all_specs() {
            let ch = build(&spec).unwrap();
            assert!(ch.completeness_residual() <= 1e-9, "{spec:?}");
        }
    }

    #[test]
    fn erasing_and_dephasing_examples() {
        let er = build(&ChannelSpec::Erasing { dim: 2, target: 0 }).unwrap();
        let out = er.apply(&DensityMatrix::max_coherent(2)).unwrap();
        assert!(out.distance_max(&DensityMatrix::basis(2, 0)) < 1e-15);

        let dep = build(&ChannelSpec::CompletelyDephasing { dim: 2 }).unwrap();
        let rho = crate::random::random_state(&[2], &mut crate::random::rng(3));
        assert!(dep.apply(&rho).unwrap().distance_max(&dephase(&rho)) < 1e-15);
    }

    #[test]
    fn random_spec_is_reproducible() {
        let spec = ChannelSpec::Random { dim: 2, env_dim: Some(2), seed: 99 };
        let a = build(&spec).unwrap();
        assert!(a.completeness_residual() <= 1e-9);
        assert_eq!(a, build(&spec).unwrap());
        assert_eq!(a.kraus().len(), 2);
    }

    #[test]
    fn unitary_preserves_spectrum() {
        let json = crate::quantum::json::matrix_to_json(&hadamard_matrix());
        let h = build(&ChannelSpec::Unitary { matrix: json }).unwrap();
        let mut r = crate::random::rng(1);
        for _ in 0..20 {
            let rho = crate::random::random_state(&[2], &mut r);
            let a = rho.eigenvalues();
            let b = h.apply(&rho).unwrap().eigenvalues();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(build(&ChannelSpec::Erasing { dim: 2, target: 2 }).is_err());
        assert!(build(&ChannelSpec::Depolarizing { dim: 2, p: 1.5 }).is_err());
        assert!(build(&ChannelSpec::Random { dim: 2, env_dim: Some(0), seed: 1 }).is_err());
        let bad = vec![vec![[1.0, 0.0], [1.0, 0.0]], vec![[0.0, 0.0], [1.0, 0.0]]];
        assert!(build(&ChannelSpec::Unitary { matrix: bad }).is_err());
    }

    #[test]
    fn either_channel_form() {
        let spec = parse_channel(r#"{"name": "erasing", "dim": 2}"#).unwrap();
        let kraus = parse_channel(&crate::quantum::json::channel_to_json(&spec)).unwrap();
        assert_eq!(spec, kraus);
        let err = parse_channel(r#"{"name": "erasing", "dims": 2}"#).unwrap_err();
        assert!(err.to_string().contains("dims"), "{err}");
    }

    #[test]
    fn spec_json_form() {
        let spec: ChannelSpec = serde_json::from_str(r#"{"name": "erasing", "dim": 2}"#).unwrap();
        assert_eq!(spec, ChannelSpec::Erasing { dim: 2, target: 0 });
        let spec: ChannelSpec = serde_json::from_str(r#"{"name": "hadamard"}"#).unwrap();
        assert_eq!(spec, ChannelSpec::Hadamard);
        let text = serde_json::to_string(&ChannelSpec::Random { dim: 2, env_dim: Some(3), seed: 4 }).unwrap();
        assert_eq!(text, r#"{"name":"random","dim":2,"env_dim":3,"seed":4}"#);
        assert!(serde_json::from_str::<ChannelSpec>(r#"{"name": "teleport"}"#).is_err());
    }
}
