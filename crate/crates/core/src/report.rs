use serde::{Deserialize, Serialize};

use crate::linalg::Field;

/// Parameters identifying the instance a report was evaluated on.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceDigest {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<Field>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
}

/// One evaluation of an inequality `lhs ≤ rhs`.
///
/// `holds ⟺ margin ≥ −tol · max(1, |rhs|)` with `margin = rhs − lhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tol: f64,
    pub holds: bool,
    pub instance: InstanceDigest,
}

impl CheckReport {
    pub fn evaluate(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            tol,
            holds: margin >= -tol * rhs.abs().max(1.0),
            instance: InstanceDigest::default(),
        }
    }

    pub fn with_instance(mut self, instance: InstanceDigest) -> Self {
        self.instance = instance;
        self
    }

    /// Re-judges the report under another tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.holds = self.margin >= -tol * self.rhs.abs().max(1.0);
        self
    }

    /// `margin / max(1, |rhs|)`: the quantity compared against `−tol`.
    pub fn relative_margin(&self) -> f64 {
        self.margin / self.rhs.abs().max(1.0)
    }
}
