//! Matrix JSON format: `{"rows": r, "cols": c, "data": [[re, im], ...]}`, row-major.
//!
//! Use the submodules with `#[serde(with = "...")]` on `ComplexMatrix`,
//! `Vec<ComplexMatrix>` and complex scalar fields.

use crate::error::{Error, Result};
use crate::linalg::{c64, ensure_finite, ComplexMatrix, C64};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(a: &ComplexMatrix) -> Self {
        let mut data = Vec::with_capacity(a.len());
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                let z = a[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        MatrixJson {
            rows: a.nrows(),
            cols: a.ncols(),
            data,
        }
    }

    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::InvalidInput(format!(
                "field `data` has {} entries but rows × cols = {}",
                self.data.len(),
                self.rows * self.cols
            )));
        }
        let cols = self.cols;
        let a = ComplexMatrix::from_fn(self.rows, cols, |i, j| {
            let [re, im] = self.data[i * cols + j];
            c64(re, im)
        });
        ensure_finite(&a)?;
        Ok(a)
    }
}

pub fn matrix_to_json(a: &ComplexMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixJson::from_matrix(a)).expect("matrix serializes")
}

/// Deserialize `text`, naming the offending field path on failure.
pub(crate) fn parse_str<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| path_error(what, e))
}

pub(crate) fn parse_value<T: serde::de::DeserializeOwned>(value: serde_json::Value, what: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| path_error(what, e))
}

fn path_error(what: &str, e: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let path = e.path().to_string();
    if path == "." {
        Error::InvalidInput(format!("{what}: {}", e.inner()))
    } else {
        Error::InvalidInput(format!("{what}: field `{path}`: {}", e.inner()))
    }
}

pub fn matrix_from_str(text: &str) -> Result<ComplexMatrix> {
    parse_str::<MatrixJson>(text, "matrix JSON")?.into_matrix()
}

pub fn matrix_to_string(a: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(a)).expect("matrix serializes")
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(a: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(a).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
        MatrixJson::deserialize(d)?
            .into_matrix()
            .map_err(serde::de::Error::custom)
    }
}

pub mod matrix_vec {
    use super::*;

    pub fn serialize<S: Serializer>(list: &[ComplexMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
        let items: Vec<MatrixJson> = list.iter().map(MatrixJson::from_matrix).collect();
        items.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<ComplexMatrix>, D::Error> {
        Vec::<MatrixJson>::deserialize(d)?
            .into_iter()
            .map(|m| m.into_matrix().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Complex scalar as `[re, im]`.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(c64(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_gaussian;
    use crate::rng::SplitMix64;
    use proptest::prelude::*;

    #[test]
    fn layout_is_row_major() {
        let a = ComplexMatrix::from_fn(2, 3, |i, j| c64((3 * i + j) as f64, -(i as f64)));
        let v = matrix_to_json(&a);
        assert_eq!(v["rows"], 2);
        assert_eq!(v["cols"], 3);
        assert_eq!(v["data"][1], serde_json::json!([1.0, -0.0]));
        assert_eq!(v["data"][3], serde_json::json!([3.0, -1.0]));
    }

    #[test]
    fn rejects_bad_length_and_unknown_fields() {
        let err = matrix_from_str(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("data"));
        assert!(matrix_from_str(r#"{"rows":1,"cols":1,"data":[[1,0]],"extra":1}"#).is_err());
        let err = matrix_from_str(r#"{"rows":1,"data":[[1,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("cols"));
    }

    proptest! {
        #[test]
        fn text_round_trip_is_bit_exact(seed in any::<u64>(), r in 0usize..5, c in 0usize..5) {
            let mut rng = SplitMix64::new(seed);
            let a = random_gaussian(r, c, &mut rng) * c64(1e-7, 0.0);
            let back = matrix_from_str(&matrix_to_string(&a)).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
