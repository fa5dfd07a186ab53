//! Matrix JSON schema:
//! `{"rows": n, "cols": m, "field": "real"|"complex", "data": [...]}` with
//! row-major `data`; real entries are plain numbers, complex entries are
//! `[re, im]` pairs.

use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::matrix::{ComplexMatrix, Field};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Value>,
}

impl<T: Real> ComplexMatrix<T> {
    fn to_doc(&self) -> MatrixDoc {
        let field = self.field();
        let data = self
            .as_slice()
            .iter()
            .map(|z| match field {
                Field::Real => Value::from(z.re.as_f64()),
                Field::Complex => Value::from(vec![z.re.as_f64(), z.im.as_f64()]),
            })
            .collect();
        MatrixDoc {
            rows: self.rows(),
            cols: self.cols(),
            field,
            data,
        }
    }

    fn from_doc(doc: MatrixDoc) -> Result<Self> {
        if doc.rows == 0 || doc.cols == 0 {
            return Err(Error::Parse("rows and cols must be positive".into()));
        }
        let num = |v: &Value, idx: usize| -> Result<T> {
            v.as_f64()
                .map(T::lit)
                .ok_or_else(|| Error::Parse(format!("data[{idx}]: expected a number, got {v}")))
        };
        let mut entries = Vec::with_capacity(doc.data.len());
        for (idx, v) in doc.data.iter().enumerate() {
            let z = match (doc.field, v) {
                (_, Value::Number(_)) => Complex::new(num(v, idx)?, T::zero()),
                (Field::Complex, Value::Array(pair)) if pair.len() == 2 => Complex::new(num(&pair[0], idx)?, num(&pair[1], idx)?),
                (Field::Complex, _) => return Err(Error::Parse(format!("data[{idx}]: expected [re, im], got {v}"))),
                (Field::Real, _) => return Err(Error::Parse(format!("data[{idx}]: real field expects plain numbers, got {v}"))),
            };
            entries.push(z);
        }
        Self::from_vec(doc.rows, doc.cols, entries)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_doc()).expect("matrix document serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let doc: MatrixDoc = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
        Self::from_doc(doc)
    }
}

impl<T: Real> Serialize for ComplexMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for ComplexMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = MatrixDoc::deserialize(deserializer)?;
        Self::from_doc(doc).map_err(D::Error::custom)
    }
}
