//! Instance files: a matrix pair plus optional parameters.
//!
//! ```json
//! {"A": {...}, "B": {...}, "q": 0.3, "k": 2}
//! {"X": {...}, "Y": {...}, "q": 0.5, "phi": "schatten:inf"}
//! ```
//!
//! Matrices use the schema of [`ComplexMatrix::to_json`]. Unknown keys are
//! ignored, so hunt outputs double as instance files.

use std::path::Path;

use serde_json::{Map, Value};

use crate::checks::gram;
use crate::error::{Error, Result};
use crate::gauge::GaugeSpec;
use crate::linalg::{psd_sqrt, Field};
use crate::{Matrix, Psd};

/// The matrices of an instance, in either parametrization.
#[derive(Debug, Clone)]
pub enum InstancePair {
    /// PSD pair `(A, B)` for the eigenvalue forms.
    Psd { a: Psd, b: Psd },
    /// Factor pair `(X, Y)` with `A = X*X`, `B = Y*Y`.
    Factors { x: Matrix, y: Matrix },
}

impl InstancePair {
    pub fn dim(&self) -> usize {
        match self {
            Self::Psd { a, .. } => a.dim(),
            Self::Factors { x, .. } => x.cols(),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Self::Psd { a, b } => a.as_matrix().field().join(b.as_matrix().field()),
            Self::Factors { x, y } => x.field().join(y.field()),
        }
    }

    /// `(A, B)`, forming Gram matrices from factors.
    pub fn psd_pair(&self) -> Result<(Psd, Psd)> {
        match self {
            Self::Psd { a, b } => Ok((a.clone(), b.clone())),
            Self::Factors { x, y } => {
                x.ensure_same_shape(y)?;
                Ok((gram(x)?, gram(y)?))
            }
        }
    }

    /// `(X, Y)`, taking PSD square roots of a PSD pair.
    pub fn factor_pair(&self) -> Result<(Matrix, Matrix)> {
        match self {
            Self::Psd { a, b } => Ok((psd_sqrt(a)?.as_matrix().clone(), psd_sqrt(b)?.as_matrix().clone())),
            Self::Factors { x, y } => Ok((x.clone(), y.clone())),
        }
    }

    fn write_into(&self, map: &mut Map<String, Value>) {
        let (k1, m1, k2, m2) = match self {
            Self::Psd { a, b } => ("A", a.as_matrix(), "B", b.as_matrix()),
            Self::Factors { x, y } => ("X", x, "Y", y),
        };
        map.insert(k1.into(), m1.to_json());
        map.insert(k2.into(), m2.to_json());
    }
}

#[derive(Debug, Clone)]
pub struct InstanceFile {
    pub pair: InstancePair,
    pub q: Option<f64>,
    pub k: Option<usize>,
    pub phi: Option<GaugeSpec>,
}

fn matrix_at(obj: &Map<String, Value>, key: &str) -> Result<Option<Matrix>> {
    obj.get(key)
        .map(|v| Matrix::from_json(v).map_err(|e| Error::Parse(format!("matrix \"{key}\": {e}"))))
        .transpose()
}

impl InstanceFile {
    pub fn new(pair: InstancePair) -> Self {
        Self {
            pair,
            q: None,
            k: None,
            phi: None,
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("instance must be a JSON object".into()))?;
        let pair = match (matrix_at(obj, "A")?, matrix_at(obj, "B")?, matrix_at(obj, "X")?, matrix_at(obj, "Y")?) {
            (Some(a), Some(b), None, None) => {
                let a = Psd::from_matrix(a).map_err(|e| Error::Parse(format!("matrix \"A\": {e}")))?;
                let b = Psd::from_matrix(b).map_err(|e| Error::Parse(format!("matrix \"B\": {e}")))?;
                a.ensure_same_dim(&b)?;
                InstancePair::Psd { a, b }
            }
            (None, None, Some(x), Some(y)) => {
                x.ensure_same_shape(&y)?;
                InstancePair::Factors { x, y }
            }
            _ => return Err(Error::Parse("instance needs exactly one of the pairs \"A\",\"B\" or \"X\",\"Y\"".into())),
        };
        let q = match obj.get("q") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_f64().ok_or_else(|| Error::Parse("\"q\" must be a number".into()))?),
        };
        let k = match obj.get("k") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| Error::Parse("\"k\" must be a positive integer".into()))? as usize),
        };
        let phi = match obj.get("phi") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.parse()?),
            Some(_) => return Err(Error::Parse("\"phi\" must be a string such as \"kyfan:2\"".into())),
        };
        Ok(Self { pair, q, k, phi })
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        self.pair.write_into(&mut map);
        if let Some(q) = self.q {
            map.insert("q".into(), q.into());
        }
        if let Some(k) = self.k {
            map.insert("k".into(), k.into());
        }
        if let Some(phi) = &self.phi {
            map.insert("phi".into(), phi.to_string().into());
        }
        Value::Object(map)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))?;
        Self::from_json(&v).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}
