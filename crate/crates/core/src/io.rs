//! JSON file formats for windows and representations.
//!
//! Matrix entries are strings (`"0"`, `"4"`, `"-3/2"`), so every field
//! round-trips exactly. Map `i` sits on the arrow between vertices `lo + i` and
//! `lo + i + 1` and has shape `dims[target] × dims[source]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldError, FieldKind};
use crate::linalg::Matrix;
use crate::quiver::{QuiverError, QuiverWindow, Representation};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("file is over {found}, expected {expected}")]
    FieldMismatch { expected: &'static str, found: String },
    #[error("arrow {arrow}: expected a {rows}×{cols} matrix")]
    Shape { arrow: usize, rows: usize, cols: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowJson {
    pub lo: i64,
    pub hi: i64,
    pub orientation: String,
}

impl WindowJson {
    pub fn to_window(&self) -> Result<QuiverWindow, QuiverError> {
        QuiverWindow::parse(self.lo, self.hi, &self.orientation)
    }

    pub fn from_window(w: &QuiverWindow) -> Self {
        WindowJson {
            lo: w.lo(),
            hi: w.hi(),
            orientation: w.word(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub window: WindowJson,
    pub field: String,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<String>>>,
}

impl RepresentationJson {
    pub fn parse(s: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn field_kind(&self) -> Result<FieldKind, IoError> {
        Ok(self.field.parse()?)
    }

    pub fn from_rep<F: Field>(rep: &Representation<F>) -> Self {
        let maps = rep
            .maps()
            .iter()
            .map(|m| (0..m.rows()).map(|r| m.row(r).iter().map(ToString::to_string).collect()).collect())
            .collect();
        RepresentationJson {
            window: WindowJson::from_window(rep.window()),
            field: F::NAME.to_string(),
            dims: rep.dims().to_vec(),
            maps,
        }
    }

    pub fn to_rep<F: Field>(&self) -> Result<Representation<F>, IoError> {
        if self.field != F::NAME {
            return Err(IoError::FieldMismatch {
                expected: F::NAME,
                found: self.field.clone(),
            });
        }
        let window = self.window.to_window()?;
        if self.dims.len() != window.size() {
            return Err(QuiverError::LengthMismatch {
                expected: window.size(),
                found: self.dims.len(),
            }
            .into());
        }
        if self.maps.len() != window.num_arrows() {
            return Err(QuiverError::LengthMismatch {
                expected: window.num_arrows(),
                found: self.maps.len(),
            }
            .into());
        }
        let mut maps = Vec::with_capacity(self.maps.len());
        for (arrow, raw) in self.maps.iter().enumerate() {
            let (s, t) = window.arrow_ends(arrow);
            let (rows, cols) = (self.dims[t], self.dims[s]);
            let shape_err = IoError::Shape { arrow, rows, cols };
            // A map out of or into a zero space may be written as [] or as empty rows.
            if raw.len() != rows && !(raw.is_empty() && (rows == 0 || cols == 0)) {
                return Err(shape_err);
            }
            let mut data = Vec::with_capacity(rows * cols);
            for row in raw {
                if row.len() != cols {
                    return Err(shape_err);
                }
                for entry in row {
                    data.push(F::parse(entry)?);
                }
            }
            if data.len() != rows * cols {
                return Err(shape_err);
            }
            maps.push(Matrix::from_vec(rows, cols, data));
        }
        Ok(Representation::new(window, self.dims.clone(), maps)?)
    }

    /// Compact output with no optional whitespace.
    pub fn to_canonical_string(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf2, Gf5, Rational};
    use crate::quiver::interval_rep;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn roundtrip<F: Field>(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let w = QuiverWindow::random(-2, rand::Rng::gen_range(&mut rng, -2..6), &mut rng).unwrap();
            let v = Representation::<F>::random(&w, 3, &mut rng);
            let json = RepresentationJson::from_rep(&v);
            let text = json.to_canonical_string();
            let back = RepresentationJson::parse(&text).unwrap();
            assert_eq!(back, json);
            assert_eq!(back.to_rep::<F>().unwrap(), v);
            assert_eq!(back.to_canonical_string(), text);
        }
    }

    #[test]
    fn roundtrips() {
        roundtrip::<Gf2>(1);
        roundtrip::<Gf5>(2);
        roundtrip::<Rational>(3);
    }

    #[test]
    fn interval_file() {
        let text = r#"{"window":{"lo":0,"hi":2,"orientation":"RR"},"field":"gf2","dims":[1,1,1],"maps":[[["1"]],[["1"]]]}"#;
        let json = RepresentationJson::parse(text).unwrap();
        let v = json.to_rep::<Gf2>().unwrap();
        let w = QuiverWindow::linear(0, 2).unwrap();
        assert_eq!(v, interval_rep(&w, &w.full_set()));
        assert_eq!(json.to_canonical_string(), text);
    }

    #[test]
    fn rejects_bad_files() {
        let bad_shape = r#"{"window":{"lo":0,"hi":1,"orientation":"R"},"field":"gf5","dims":[1,2],"maps":[[["1"]]]}"#;
        assert!(matches!(RepresentationJson::parse(bad_shape).unwrap().to_rep::<Gf5>(), Err(IoError::Shape { .. })));
        let bad_field = r#"{"window":{"lo":0,"hi":0,"orientation":""},"field":"gf5","dims":[1],"maps":[]}"#;
        assert!(matches!(RepresentationJson::parse(bad_field).unwrap().to_rep::<Gf2>(), Err(IoError::FieldMismatch { .. })));
        let bad_entry = r#"{"window":{"lo":0,"hi":1,"orientation":"R"},"field":"rational","dims":[1,1],"maps":[[["x"]]]}"#;
        assert!(matches!(RepresentationJson::parse(bad_entry).unwrap().to_rep::<Rational>(), Err(IoError::Field(_))));
        let zero_maps = r#"{"window":{"lo":0,"hi":1,"orientation":"L"},"field":"gf2","dims":[0,2],"maps":[[]]}"#;
        assert!(RepresentationJson::parse(zero_maps).unwrap().to_rep::<Gf2>().is_ok());
        assert!(RepresentationJson::parse("{").is_err());
    }
}
