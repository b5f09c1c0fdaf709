//! JSON forms of states and channels.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! lists:
//!
//! ```json
//! {"dims": [2], "matrix": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}
//! {"dim_in": 2, "dim_out": 2, "kraus": [ <matrix>, ... ]}
//! ```

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{c, CMatrix, DensityMatrix, KrausChannel};
use crate::error::{Error, Result};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub dims: Vec<usize>,
    pub matrix: JsonMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelJson {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<JsonMatrix>,
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

/// `field` names the JSON location for error messages.
pub fn matrix_from_json(rows: &JsonMatrix, nrows: usize, ncols: usize, field: &str) -> Result<CMatrix> {
    if rows.len() != nrows {
        return Err(Error::Malformed(format!("field `{field}`: {} rows, expected {nrows}", rows.len())));
    }
    let mut m = CMatrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::Malformed(format!(
                "field `{field}`: row {i} has {} entries, expected {ncols}",
                row.len()
            )));
        }
        for (j, z) in row.iter().enumerate() {
            if !z[0].is_finite() || !z[1].is_finite() {
                return Err(Error::Malformed(format!("field `{field}`: entry ({i}, {j}) is not finite")));
            }
            m[(i, j)] = c(z[0], z[1]);
        }
    }
    Ok(m)
}

impl From<&DensityMatrix> for StateJson {
    fn from(rho: &DensityMatrix) -> Self {
        StateJson { dims: rho.dims().to_vec(), matrix: matrix_to_json(rho.matrix()) }
    }
}

impl TryFrom<StateJson> for DensityMatrix {
    type Error = Error;

    fn try_from(s: StateJson) -> Result<Self> {
        if s.dims.is_empty() || s.dims.contains(&0) {
            return Err(Error::Malformed(format!(
                "field `dims`: {:?} must be a nonempty list of positive integers",
                s.dims
            )));
        }
        let n: usize = s.dims.iter().product();
        let m = matrix_from_json(&s.matrix, n, n, "matrix")?;
        DensityMatrix::new(s.dims, m)
    }
}

impl From<&KrausChannel> for ChannelJson {
    fn from(ch: &KrausChannel) -> Self {
        ChannelJson {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            kraus: ch.kraus().iter().map(matrix_to_json).collect(),
        }
    }
}

impl TryFrom<ChannelJson> for KrausChannel {
    type Error = Error;

    fn try_from(ch: ChannelJson) -> Result<Self> {
        if ch.dim_in == 0 || ch.dim_out == 0 {
            return Err(Error::Malformed("fields `dim_in`/`dim_out` must be positive".into()));
        }
        if ch.kraus.is_empty() {
            return Err(Error::Malformed("field `kraus`: at least one operator required".into()));
        }
        let ops = ch
            .kraus
            .iter()
            .enumerate()
            .map(|(i, k)| matrix_from_json(k, ch.dim_out, ch.dim_in, &format!("kraus[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        KrausChannel::new(ops)
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = StateJson::deserialize(d)?;
        DensityMatrix::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl Serialize for KrausChannel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChannelJson::from(self).serialize(s)
    }
}

pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    let raw: StateJson = serde_json::from_str(text)?;
    raw.try_into()
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&StateJson::from(rho)).expect("state serialization is infallible")
}

pub fn channel_from_json(text: &str) -> Result<KrausChannel> {
    let raw: ChannelJson = serde_json::from_str(text)?;
    raw.try_into()
}

pub fn channel_to_json(ch: &KrausChannel) -> String {
    serde_json::to_string(&ChannelJson::from(ch)).expect("channel serialization is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plus_state() {
        let text = r#"{"dims": [2], "matrix": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}"#;
        let rho = state_from_json(text).unwrap();
        assert!(rho.distance_max(&DensityMatrix::max_coherent(2)) < 1e-15);
    }

    #[test]
    fn errors_name_the_field() {
        let err = state_from_json(r#"{"matrix": []}"#).unwrap_err();
        assert!(err.to_string().contains("dims"), "{err}");
        let err = state_from_json(r#"{"dims": [2], "matrix": [[[1,0],[0,0]], [[0,0]]]}"#).unwrap_err();
        assert!(err.to_string().contains("matrix"), "{err}");
        let err = channel_from_json(r#"{"dim_in": 2, "dim_out": 2, "kraus": [[[[1,0],[0,0]], [[0,0],[1,0],[0,0]]]]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("kraus[0]"), "{err}");
    }

    #[test]
    fn invariant_violations_are_distinguished() {
        let err = state_from_json(r#"{"dims": [2], "matrix": [[[1.5,0],[0,0]], [[0,0],[-0.5,0]]]}"#).unwrap_err();
        assert!(err.is_invariant_violation());
        let err = channel_from_json(r#"{"dim_in": 1, "dim_out": 1, "kraus": [[[[0.5,0]]]]}"#).unwrap_err();
        assert!(err.is_invariant_violation());
    }

    #[test]
    fn channel_round_trip() {
        let ch = KrausChannel::identity(3);
        let back = channel_from_json(&channel_to_json(&ch)).unwrap();
        assert_eq!(back, ch);
    }
}
